//! Regular representations, transitivity modules, regular subgroups and
//! conjugacy by exhaustive search over group elements.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::schur::SchurPartition;

use super::{PermGroup, Permutation};

/// Default bound on the number of group elements scanned by the
/// element-enumeration searches in this module.
pub const DEFAULT_ELEMENT_LIMIT: usize = 2_000_000;

/// The right translation `x ↦ x + g`.
pub fn translation(group: &AbelianGroup, g: u32) -> Permutation {
    Permutation::from_images(group.elements().map(|x| group.add(x, g)).collect())
}

/// `Ĥ`, the group of right translations.
pub fn regular_representation(group: &AbelianGroup) -> PermGroup {
    let gens = group.generators().into_iter().map(|g| translation(group, g)).collect();
    PermGroup::with_base(group.order(), gens, &[0])
}

/// `V(G, H)`: the orbits of the stabilizer of the identity point.
pub fn transitivity_module(g: &PermGroup, group: &Arc<AbelianGroup>) -> Result<SchurPartition> {
    if g.degree() != group.order() || !group.generators().into_iter().all(|x| g.contains(&translation(group, x))) {
        return Err(Error::NotOvergroup);
    }
    let stab = g.stabilizer(0);
    Ok(SchurPartition::from_labels(group, &stab.orbit_labels()))
}

/// Every regular subgroup of `g` isomorphic to `group`, found by choosing
/// images of the canonical generators among elements of `g`.
pub fn regular_subgroups(g: &PermGroup, group: &AbelianGroup, limit: usize) -> Result<Vec<PermGroup>> {
    let n = group.order();
    if g.degree() != n {
        return Err(Error::GroupMismatch(format!("degree {}", g.degree()), group.to_string()));
    }
    let elements = g.elements(limit)?;
    let factors = group.factors().to_vec();
    // candidates per factor: fixed-point-free elements whose cycles all have that length
    let candidates: Vec<Vec<&Permutation>> = factors
        .iter()
        .map(|&f| {
            elements
                .iter()
                .filter(|e| e.cycles().iter().all(|c| c.len() == f as usize))
                .collect()
        })
        .collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut out = Vec::new();
    let mut chosen: Vec<Permutation> = Vec::new();
    let mut span = vec![Permutation::identity(n)];
    search_regular(&factors, &candidates, &mut chosen, &mut span, &mut seen, &mut out);
    Ok(out)
}

fn search_regular(
    factors: &[u32],
    candidates: &[Vec<&Permutation>],
    chosen: &mut Vec<Permutation>,
    span: &mut Vec<Permutation>,
    seen: &mut HashSet<Vec<u32>>,
    out: &mut Vec<PermGroup>,
) {
    let depth = chosen.len();
    let n = span[0].degree();
    if depth == factors.len() {
        if span.len() == n {
            let key = fingerprint(span);
            if seen.insert(key) {
                out.push(PermGroup::with_base(n, chosen.clone(), &[0]));
            }
        }
        return;
    }
    let f = factors[depth] as usize;
    for &x in &candidates[depth] {
        if !chosen.iter().all(|c| c.then(x) == x.then(c)) {
            continue;
        }
        // the new span is span · <x>; it must stay semiregular of full size
        let mut next = Vec::with_capacity(span.len() * f);
        let mut power = Permutation::identity(n);
        let mut ok = true;
        for k in 0..f {
            for s in span.iter() {
                let e = s.then(&power);
                if (k > 0 || !e.is_identity()) && e.images().iter().enumerate().any(|(i, &y)| i as u32 == y) {
                    ok = false;
                    break;
                }
                next.push(e);
            }
            if !ok {
                break;
            }
            power = power.then(x);
        }
        if !ok {
            continue;
        }
        chosen.push(x.clone());
        let saved = std::mem::replace(span, next);
        search_regular(factors, candidates, chosen, span, seen, out);
        *span = saved;
        chosen.pop();
    }
}

/// The images of point 0 determine a regular group's elements; the
/// concatenated images of the elements sorted by that key identify it.
fn fingerprint(elements: &[Permutation]) -> Vec<u32> {
    let mut by_zero: Vec<&Permutation> = elements.iter().collect();
    by_zero.sort_by_key(|e| e.apply(0));
    by_zero.iter().flat_map(|e| e.images().iter().copied()).collect()
}

/// Some `y ∈ g` with `a^y ≤ b`, or `None` once every element has been tried.
pub fn conjugate_into(a: &PermGroup, b: &PermGroup, g: &PermGroup, limit: usize) -> Result<Option<Permutation>> {
    let gens = a.strong_generators();
    // cheap necessary condition on cycle types
    let b_types: HashSet<Vec<usize>> = if b.order_u128().is_some_and(|o| o <= limit as u128) {
        b.elements(limit)?.iter().map(Permutation::cycle_type).collect()
    } else {
        HashSet::new()
    };
    if !b_types.is_empty() && gens.iter().any(|s| !b_types.contains(&s.cycle_type())) {
        return Ok(None);
    }
    for y in g.elements(limit)? {
        if gens.iter().all(|s| b.contains(&s.conjugate_by(&y))) {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use num_bigint::BigUint;

    #[test]
    fn regular_representation_examples() {
        for f in [vec![5], vec![2, 2], vec![2, 2, 2, 3]] {
            let h = make_group(&f).unwrap();
            let r = regular_representation(&h);
            assert!(r.is_regular());
            assert_eq!(r.order(), BigUint::from(h.order()));
        }
    }

    #[test]
    fn transitivity_module_examples() {
        let h = make_group(&[2, 3]).unwrap();
        let hat = regular_representation(&h);
        assert!(transitivity_module(&hat, &h).unwrap().is_discrete());
        let sym = PermGroup::symmetric(6);
        assert_eq!(transitivity_module(&sym, &h).unwrap(), SchurPartition::rank_two(&h));
        let mut gens = hat.strong_generators();
        gens.push(Permutation::from_images(h.unit_action(-1).unwrap().perm().to_vec()));
        let hol = PermGroup::new(6, gens);
        let v = transitivity_module(&hol, &h).unwrap();
        assert!(v.is_valid());
        assert_eq!(v.rank(), 4);
        let c3 = PermGroup::new(6, vec![Permutation::from_cycles(6, &[&[0, 1, 2], &[3, 4, 5]])]);
        assert!(matches!(transitivity_module(&c3, &h), Err(Error::NotOvergroup)));
    }

    #[test]
    fn regular_subgroups_of_sym4() {
        let s4 = PermGroup::symmetric(4);
        let z4 = make_group(&[4]).unwrap();
        let v4 = make_group(&[2, 2]).unwrap();
        assert_eq!(regular_subgroups(&s4, &z4, 1000).unwrap().len(), 3);
        assert_eq!(regular_subgroups(&s4, &v4, 1000).unwrap().len(), 1);
        let hat = regular_representation(&z4);
        assert_eq!(regular_subgroups(&hat, &z4, 1000).unwrap().len(), 1);
    }

    #[test]
    fn conjugacy_in_sym4() {
        let s4 = PermGroup::symmetric(4);
        let z4 = make_group(&[4]).unwrap();
        let subs = regular_subgroups(&s4, &z4, 1000).unwrap();
        let y = conjugate_into(&subs[0], &subs[1], &s4, 1000).unwrap().unwrap();
        assert!(subs[0].strong_generators().iter().all(|s| subs[1].contains(&s.conjugate_by(&y))));
        let hat = regular_representation(&z4);
        assert!(conjugate_into(&hat, &hat, &hat, 1000).unwrap().unwrap().is_identity());
    }
}
