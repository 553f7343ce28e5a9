//! Cayley and combinatorial isomorphisms between S-rings over one group.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group::{GroupAutomorphism, DEFAULT_MAX_ORDER};
use crate::perm::{aut_partition, Permutation, DEFAULT_ELEMENT_LIMIT, DEFAULT_MAX_DEGREE};
use crate::schur::SchurPartition;

use super::babai::sigma_search;
use super::{babai_ci_check, CiVerdict, Method};

/// Largest group for which the `Iso₁` factorization is checked elementwise.
const DIRECT_MAX_ORDER: usize = 8;
/// Largest group accepted by [`ci_sring_check`].
const CI_SRING_MAX_ORDER: usize = 24;

/// Some `φ ∈ Aut(H)` carrying the blocks of `a` onto the blocks of `b`.
pub fn cayley_isomorphic(a: &SchurPartition, b: &SchurPartition) -> Result<Option<GroupAutomorphism>> {
    if a.group() != b.group() {
        return Err(Error::GroupMismatch(a.group().to_string(), b.group().to_string()));
    }
    let sizes = |p: &SchurPartition| p.blocks().iter().map(Vec::len).collect::<Vec<_>>();
    if sizes(a) != sizes(b) {
        return Ok(None);
    }
    let auts = a.group().automorphism_group(DEFAULT_MAX_ORDER.max(a.group().order()))?;
    Ok(auts.iter().find(|phi| a.image(phi) == *b).cloned())
}

/// Every normalized bijection `f` (with `f(e) = e`) mapping the scheme of `a`
/// onto the scheme of `b`, up to a bijection of colors. Fails once more than
/// `limit` isomorphisms are found.
pub fn iso1_search(a: &SchurPartition, b: &SchurPartition, limit: usize) -> Result<Vec<Permutation>> {
    if a.group() != b.group() {
        return Err(Error::GroupMismatch(a.group().to_string(), b.group().to_string()));
    }
    let group = a.group();
    let n = group.order();
    if n > DEFAULT_MAX_DEGREE {
        return Err(Error::size_limit("group order", n as u128, DEFAULT_MAX_DEGREE as u128));
    }
    let mut sa: Vec<usize> = a.blocks().iter().map(Vec::len).collect();
    let mut sb: Vec<usize> = b.blocks().iter().map(Vec::len).collect();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(Vec::new());
    }
    let mut search = IsoSearch {
        a: a.block_labels(),
        b: b.block_labels(),
        sub: |x: u32, y: u32| group.sub(x, y),
        f: vec![u32::MAX; n],
        used: vec![false; n],
        color: vec![u32::MAX; a.rank()],
        color_inv: vec![u32::MAX; b.rank()],
        out: Vec::new(),
        limit,
    };
    search.f[0] = 0;
    search.used[0] = true;
    search.color[0] = 0;
    search.color_inv[0] = 0;
    search.extend(1)?;
    Ok(search.out)
}

struct IsoSearch<'a, S: Fn(u32, u32) -> u32> {
    a: &'a [u32],
    b: &'a [u32],
    sub: S,
    f: Vec<u32>,
    used: Vec<bool>,
    /// Partial color bijection `a`-block → `b`-block and its inverse.
    color: Vec<u32>,
    color_inv: Vec<u32>,
    out: Vec<Permutation>,
    limit: usize,
}

impl<S: Fn(u32, u32) -> u32> IsoSearch<'_, S> {
    fn extend(&mut self, x: u32) -> Result<()> {
        let n = self.f.len();
        if x as usize == n {
            if self.out.len() >= self.limit {
                return Err(Error::size_limit("normalized isomorphisms", self.limit as u128 + 1, self.limit as u128));
            }
            self.out.push(Permutation::from_images(self.f.clone()));
            return Ok(());
        }
        for y in 0..n as u32 {
            if self.used[y as usize] {
                continue;
            }
            let mut assigned: Vec<u32> = Vec::new();
            if self.try_assign(x, y, &mut assigned) {
                self.f[x as usize] = y;
                self.used[y as usize] = true;
                self.extend(x + 1)?;
                self.f[x as usize] = u32::MAX;
                self.used[y as usize] = false;
            }
            for c in assigned {
                self.color_inv[self.color[c as usize] as usize] = u32::MAX;
                self.color[c as usize] = u32::MAX;
            }
        }
        Ok(())
    }

    /// Extends the color bijection for all arcs between `x` and earlier
    /// points; records new color pairs in `assigned`.
    fn try_assign(&mut self, x: u32, y: u32, assigned: &mut Vec<u32>) -> bool {
        for z in 0..x {
            let fz = self.f[z as usize];
            let arcs = [
                ((self.sub)(x, z), (self.sub)(y, fz)),
                ((self.sub)(z, x), (self.sub)(fz, y)),
            ];
            for (da, db) in arcs {
                let (ca, cb) = (self.a[da as usize], self.b[db as usize]);
                match (self.color[ca as usize], self.color_inv[cb as usize]) {
                    (u32::MAX, u32::MAX) => {
                        self.color[ca as usize] = cb;
                        self.color_inv[cb as usize] = ca;
                        assigned.push(ca);
                    }
                    (c, _) if c == cb => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

/// `Iso₁(𝔄, *)`: normalized bijections mapping every basic graph of `p`
/// onto a Cayley graph over the same group.
pub fn iso1_star(p: &SchurPartition, limit: usize) -> Result<Vec<Permutation>> {
    let n = p.group().order();
    if n > DEFAULT_MAX_DEGREE {
        return Err(Error::size_limit("group order", n as u128, DEFAULT_MAX_DEGREE as u128));
    }
    let mut out = Vec::new();
    let mut overflow = false;
    sigma_search(p.group(), p.block_labels(), None, &mut |sigma| {
        if out.len() >= limit {
            overflow = true;
            return false;
        }
        out.push(Permutation::from_images(sigma.to_vec()).inverse());
        true
    });
    if overflow {
        return Err(Error::size_limit("normalized isomorphisms", limit as u128 + 1, limit as u128));
    }
    out.sort();
    Ok(out)
}

/// Decides whether `p` is a CI-S-ring. The verdict comes from Babai's
/// criterion; for groups of order at most 8 the identity
/// `Iso₁(𝔄, *) = Aut(𝔄)₁·Aut(H)` is also checked elementwise and must agree.
pub fn ci_sring_check(p: &SchurPartition) -> Result<CiVerdict> {
    let n = p.group().order();
    if n > CI_SRING_MAX_ORDER {
        return Err(Error::size_limit("group order", n as u128, CI_SRING_MAX_ORDER as u128));
    }
    let mut verdict = babai_ci_check(p)?;
    if n <= DIRECT_MAX_ORDER {
        let direct = iso1_factorizes(p)?;
        if direct != verdict.is_ci() {
            return Err(Error::Precondition(format!(
                "Iso1 factorization ({direct}) disagrees with Babai's criterion ({})",
                verdict.is_ci()
            )));
        }
        verdict.method = Method::Iso1Direct;
    }
    Ok(verdict)
}

/// Whether `Iso₁(𝔄, *)` equals `{a·φ : a ∈ Aut(𝔄)₁, φ ∈ Aut(H)}` as sets.
pub(crate) fn iso1_factorizes(p: &SchurPartition) -> Result<bool> {
    let group = p.group();
    let iso: HashSet<Permutation> = iso1_star(p, DEFAULT_ELEMENT_LIMIT)?.into_iter().collect();
    let stab = aut_partition(p, DEFAULT_MAX_DEGREE)?.stabilizer(0);
    let auts = group.automorphism_group(DEFAULT_MAX_ORDER)?;
    let mut product: HashSet<Permutation> = HashSet::new();
    for a in stab.elements(DEFAULT_ELEMENT_LIMIT)? {
        for phi in auts.iter() {
            product.insert(a.then(&Permutation::from_images(phi.perm().to_vec())));
        }
    }
    Ok(iso == product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    #[test]
    fn iso1_examples() {
        let h = make_group(&[4]).unwrap();
        let r2 = SchurPartition::rank_two(&h);
        let d = SchurPartition::discrete(&h);
        assert_eq!(iso1_search(&r2, &r2, 100).unwrap().len(), 6);
        assert_eq!(iso1_search(&d, &d, 100).unwrap().len(), 2);
        assert!(iso1_search(&d, &r2, 100).unwrap().is_empty());
    }

    #[test]
    fn cayley_isomorphism_examples() {
        let h = make_group(&[5]).unwrap();
        let p = SchurPartition::from_blocks(&h, vec![vec![0], vec![1, 4], vec![2, 3]]).unwrap();
        assert!(cayley_isomorphic(&p, &p).unwrap().unwrap().is_identity());
        let twice = p.image(&h.unit_action(2).unwrap());
        assert!(cayley_isomorphic(&p, &twice).unwrap().is_some());
        let r2 = SchurPartition::rank_two(&h);
        assert!(cayley_isomorphic(&r2, &SchurPartition::discrete(&h)).unwrap().is_none());
    }

    #[test]
    fn direct_mode_agrees() {
        let h = make_group(&[4]).unwrap();
        for p in [SchurPartition::discrete(&h), SchurPartition::rank_two(&h)] {
            assert!(iso1_factorizes(&p).unwrap());
            assert_eq!(ci_sring_check(&p).unwrap().method, Method::Iso1Direct);
        }
    }
}
