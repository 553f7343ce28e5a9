//! Babai's criterion: an S-ring is CI iff every `H`-regular subgroup of
//! `Aut(𝔄)` is conjugate to `Ĥ` inside `Aut(𝔄)`.
//!
//! Regular subgroups are not enumerated directly. A normalized bijection `σ`
//! with `block(σ(z) - σ(y)) = block(σ(z - y))` for all `y, z` is an
//! isomorphism from a Cayley coloring onto the scheme, and `σ⁻¹ Ĥ σ` is then
//! an `H`-regular subgroup of `G = Aut(𝔄)`; every such subgroup arises this
//! way. The search enumerates one `σ` per induced coloring (pruning images by
//! the stabilizer chain of `G₀`). The subgroup of `σ` is conjugate to `Ĥ`
//! exactly when the induced coloring is `block∘φ` for some `φ ∈ Aut(H)`.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupAutomorphism, DEFAULT_MAX_ORDER};
use crate::perm::{aut_partition, translation, PermGroup, Permutation, DEFAULT_MAX_DEGREE};
use crate::schur::SchurPartition;

use super::{CiVerdict, ConjugatorEntry, Method, Refusal, Verdict};

/// Regular subgroups listed with their conjugators in a verdict.
pub const DEFAULT_CONJUGATOR_CAP: usize = 32;

#[derive(Clone, Debug)]
pub struct BabaiOptions {
    pub max_degree: usize,
    pub conjugator_cap: usize,
    /// Groups up to this order get refusals confirmed by scanning all of `G`.
    pub brute_force_order: usize,
    /// Keep searching after a refusal to count conjugacy classes.
    pub exhaustive: bool,
    pub leaf_limit: usize,
    /// Bound on `|H|·|Aut(H)|` for the holomorph scan backing a refusal.
    pub holomorph_limit: usize,
}

impl Default for BabaiOptions {
    fn default() -> Self {
        BabaiOptions {
            max_degree: DEFAULT_MAX_DEGREE,
            conjugator_cap: DEFAULT_CONJUGATOR_CAP,
            brute_force_order: 8,
            exhaustive: true,
            leaf_limit: 1_000_000,
            holomorph_limit: 4_000_000,
        }
    }
}

pub fn babai_ci_check(partition: &SchurPartition) -> Result<CiVerdict> {
    babai_ci_check_with(partition, &BabaiOptions::default())
}

pub fn babai_ci_check_with(partition: &SchurPartition, opts: &BabaiOptions) -> Result<CiVerdict> {
    let group = partition.group().clone();
    let n = group.order();
    if n > opts.max_degree {
        return Err(Error::size_limit("group order", n as u128, opts.max_degree as u128));
    }
    let labels = partition.block_labels().to_vec();
    let g = aut_partition(partition, opts.max_degree)?;
    let g0 = g.stabilizer(0);
    let auts = group.automorphism_group(DEFAULT_MAX_ORDER.max(n))?;

    // colorings of the form block∘φ, each with a witness φ
    let mut expected: HashMap<Vec<u32>, usize> = HashMap::new();
    for (i, phi) in auts.iter().enumerate() {
        let f: Vec<u32> = phi.perm().iter().map(|&x| labels[x as usize]).collect();
        expected.entry(f).or_insert(i);
    }

    let mut leaves: Vec<(Vec<u32>, Permutation)> = Vec::new();
    let mut refusal_sigma: Option<Permutation> = None;
    let mut overflow = false;
    {
        let mut visit = |sigma: &[u32]| -> bool {
            let f: Vec<u32> = sigma.iter().map(|&x| labels[x as usize]).collect();
            let sigma = Permutation::from_images(sigma.to_vec());
            if !expected.contains_key(&f) && refusal_sigma.is_none() {
                refusal_sigma = Some(sigma.clone());
            }
            leaves.push((f, sigma));
            if leaves.len() > opts.leaf_limit {
                overflow = true;
                return false;
            }
            opts.exhaustive || refusal_sigma.is_none()
        };
        sigma_search(&group, &labels, Some(&g0), &mut visit);
    }
    if overflow {
        return Err(Error::size_limit("induced colorings", leaves.len() as u128, opts.leaf_limit as u128));
    }

    let hat_gens: Vec<u32> = group.generators();
    let subgroup_of = |sigma: &Permutation| -> Vec<Permutation> {
        let inv = sigma.inverse();
        hat_gens.iter().map(|&t| inv.then(&translation(&group, t)).then(sigma)).collect()
    };

    let mut conjugators = Vec::new();
    let mut conjugator_total = 0;
    for (f, sigma) in &leaves {
        let Some(&phi_index) = expected.get(f) else { continue };
        conjugator_total += 1;
        if conjugators.len() >= opts.conjugator_cap {
            continue;
        }
        let phi = Permutation::from_images(auts[phi_index].perm().to_vec());
        let conj = sigma.inverse().then(&phi);
        let regular = subgroup_of(sigma);
        if !g.contains(&conj) || !regular.iter().all(|r| is_translation(&group, &r.conjugate_by(&conj))) {
            return Err(Error::Precondition("conjugator failed verification".into()));
        }
        conjugators.push(ConjugatorEntry {
            regular_subgroup: regular,
            conjugator: conj,
        });
    }

    let aut_h = BigUint::from(auts.len());
    let count = if refusal_sigma.is_none() || opts.exhaustive {
        Some(BigUint::from(leaves.len()) * g0.order() / &aut_h)
    } else {
        None
    };
    let class_count = (refusal_sigma.is_none() || opts.exhaustive).then(|| coloring_orbits(&leaves, &auts));

    let refusal = match refusal_sigma {
        None => None,
        Some(sigma) => {
            let regular = subgroup_of(&sigma);
            let holomorph_scan = n * auts.len() <= opts.holomorph_limit && holomorph_refutes(&group, &g, &sigma, &auts);
            let brute_force_confirmed = if n <= opts.brute_force_order {
                Some(brute_force_refutes(&group, &g, &regular)?)
            } else {
                None
            };
            let induced_coloring = sigma.images().iter().map(|&x| labels[x as usize]).collect();
            Some(Refusal {
                regular_subgroup: regular,
                sigma,
                induced_coloring,
                holomorph_scan,
                brute_force_confirmed,
            })
        }
    };
    Ok(CiVerdict {
        partition: partition.clone(),
        verdict: if refusal.is_none() { Verdict::Ci } else { Verdict::NotCi },
        method: Method::Babai,
        regular_subgroup_count: count,
        class_count,
        automorphism_group_order: g.order(),
        conjugators,
        conjugator_total,
        refusal,
    })
}

/// `Aut(H)` acts on induced colorings by `f ↦ f∘φ`; its orbits match the
/// conjugacy classes of regular subgroups.
fn coloring_orbits(leaves: &[(Vec<u32>, Permutation)], auts: &[GroupAutomorphism]) -> usize {
    let index: HashMap<&[u32], usize> = leaves.iter().enumerate().map(|(i, (f, _))| (f.as_slice(), i)).collect();
    let mut seen = vec![false; leaves.len()];
    let mut orbits = 0;
    for start in 0..leaves.len() {
        if seen[start] {
            continue;
        }
        orbits += 1;
        let f = &leaves[start].0;
        for phi in auts {
            let image: Vec<u32> = phi.perm().iter().map(|&x| f[x as usize]).collect();
            if let Some(&j) = index.get(image.as_slice()) {
                seen[j] = true;
            }
        }
    }
    orbits
}

fn is_translation(group: &AbelianGroup, p: &Permutation) -> bool {
    let t = p.apply(0);
    group.elements().all(|x| p.apply(x) == group.add(x, t))
}

/// The permutations conjugating `σ⁻¹ Ĥ σ` onto `Ĥ` are `σ⁻¹·Hol(H)`; true if
/// none of them lies in `g`.
fn holomorph_refutes(group: &AbelianGroup, g: &PermGroup, sigma: &Permutation, auts: &[GroupAutomorphism]) -> bool {
    let inv = sigma.inverse();
    for phi in auts {
        let phi = Permutation::from_images(phi.perm().to_vec());
        for t in group.elements() {
            let h = phi.then(&translation(group, t));
            if g.contains(&inv.then(&h)) {
                return false;
            }
        }
    }
    true
}

fn brute_force_refutes(group: &AbelianGroup, g: &PermGroup, regular: &[Permutation]) -> Result<bool> {
    let elements = g.elements(crate::perm::DEFAULT_ELEMENT_LIMIT)?;
    Ok(!elements
        .iter()
        .any(|y| regular.iter().all(|r| is_translation(group, &r.conjugate_by(y)))))
}

/// Backtracking over normalized bijections `σ` compatible with the block
/// labelling. Domain points are fixed in rank order; with `prune` set, the
/// images tried at each step are orbit representatives of the pointwise
/// stabilizer of the images chosen so far. `visit` returns false to stop.
pub(crate) fn sigma_search(
    group: &AbelianGroup,
    labels: &[u32],
    prune: Option<&PermGroup>,
    visit: &mut dyn FnMut(&[u32]) -> bool,
) {
    let n = group.order();
    let mut state = SigmaState {
        group,
        labels,
        sigma: vec![u32::MAX; n],
        used: vec![false; n],
        diff_color: vec![u32::MAX; n],
        trail: Vec::new(),
    };
    state.sigma[0] = 0;
    state.used[0] = true;
    state.diff_color[0] = labels[0];
    if n == 1 {
        visit(&state.sigma);
        return;
    }
    state.extend(1, prune.cloned(), visit);
}

struct SigmaState<'a> {
    group: &'a AbelianGroup,
    labels: &'a [u32],
    sigma: Vec<u32>,
    used: Vec<bool>,
    /// `block(σ(u) - σ(v))` shared by all assigned pairs with `u - v = d`.
    diff_color: Vec<u32>,
    /// Differences whose color was fixed, for undo.
    trail: Vec<u32>,
}

impl SigmaState<'_> {
    /// Returns false when the visitor asked to stop.
    fn extend(&mut self, x: u32, stab: Option<PermGroup>, visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        let n = self.sigma.len();
        if x as usize == n {
            return visit(&self.sigma);
        }
        let stab = stab.filter(|s| !s.strong_generators().is_empty());
        let orbit_ids = stab.as_ref().map(PermGroup::orbit_labels);
        let mut tried_orbit = vec![false; n];
        for y in 0..n as u32 {
            if self.used[y as usize] {
                continue;
            }
            if let Some(ids) = &orbit_ids {
                let id = ids[y as usize] as usize;
                if tried_orbit[id] {
                    continue;
                }
                tried_orbit[id] = true;
            }
            let mark = self.trail.len();
            let mut go_on = true;
            if self.assign(x, y) {
                self.sigma[x as usize] = y;
                self.used[y as usize] = true;
                let child = stab.as_ref().map(|s| s.stabilizer(y));
                go_on = self.extend(x + 1, child, visit);
                self.used[y as usize] = false;
                self.sigma[x as usize] = u32::MAX;
            }
            self.undo(mark);
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Colors the pairs `(x, z)` and `(z, x)`, `z < x`, under `σ(x) = y`;
    /// false on a clash with a known difference color.
    fn assign(&mut self, x: u32, y: u32) -> bool {
        let g = self.group;
        for z in 0..x {
            let s = self.sigma[z as usize];
            let pairs = [
                (g.sub(x, z), self.labels[g.sub(y, s) as usize]),
                (g.sub(z, x), self.labels[g.sub(s, y) as usize]),
            ];
            for (d, c) in pairs {
                let known = self.diff_color[d as usize];
                if known == u32::MAX {
                    self.diff_color[d as usize] = c;
                    self.trail.push(d);
                } else if known != c {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for d in self.trail.drain(mark..) {
            self.diff_color[d as usize] = u32::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use crate::perm::{regular_representation, regular_subgroups};

    fn brute_ci(p: &SchurPartition) -> (bool, usize) {
        let g = aut_partition(p, 64).unwrap();
        let hat = regular_representation(p.group());
        let subs = regular_subgroups(&g, p.group(), 1_000_000).unwrap();
        let all_conj = subs
            .iter()
            .all(|r| crate::perm::conjugate_into(r, &hat, &g, 1_000_000).unwrap().is_some());
        (all_conj, subs.len())
    }

    #[test]
    fn small_cases_match_regular_subgroup_enumeration() {
        for f in [vec![4], vec![2, 2], vec![6], vec![2, 3], vec![8], vec![2, 4], vec![2, 2, 2]] {
            let h = make_group(&f).unwrap();
            let parts = [
                SchurPartition::discrete(&h),
                SchurPartition::rank_two(&h),
                crate::schur::generated_sring(&h, &[vec![1]]),
                crate::schur::generated_sring(&h, &[vec![1, h.neg(1)]]),
            ];
            for p in parts {
                let v = babai_ci_check(&p).unwrap();
                let (ci, count) = brute_ci(&p);
                assert_eq!(v.is_ci(), ci, "{p:?}");
                assert_eq!(v.regular_subgroup_count, Some(BigUint::from(count)), "{p:?}");
            }
        }
    }

    #[test]
    fn z8_has_non_ci_sring() {
        let h = make_group(&[8]).unwrap();
        // {1, 2, 5}: a classic non-CI connection set on Z8
        let p = crate::schur::generated_sring(&h, &[vec![1, 2, 5]]);
        let v = babai_ci_check(&p).unwrap();
        let (ci, count) = brute_ci(&p);
        assert_eq!(v.is_ci(), ci);
        assert_eq!(v.regular_subgroup_count, Some(BigUint::from(count)));
    }
}
