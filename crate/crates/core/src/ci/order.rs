//! The order `X ≼ Y` on overgroups of `Ĥ` and descent to minimal overgroups.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::perm::{conjugate_into, regular_representation, regular_subgroups, PermGroup, Permutation, DEFAULT_ELEMENT_LIMIT};

const MAX_DEGREE: usize = 24;

#[derive(Clone, Debug)]
pub struct PreceqReport {
    pub holds: bool,
    /// For every `H`-regular subgroup of `Y` handled: its generators and an
    /// element of `Y` conjugating it into `X`.
    pub conjugators: Vec<(Vec<Permutation>, Permutation)>,
    /// The first regular subgroup of `Y` with no conjugate inside `X`.
    pub failing: Option<Vec<Permutation>>,
}

/// `X ≼ Y`: every `H`-regular subgroup of `Y` has a `Y`-conjugate inside `X`.
pub fn preceq_check(x: &PermGroup, y: &PermGroup, group: &Arc<AbelianGroup>) -> Result<PreceqReport> {
    check_overgroup(x, group)?;
    check_overgroup(y, group)?;
    let mut conjugators = Vec::new();
    for r in regular_subgroups(y, group, DEFAULT_ELEMENT_LIMIT)? {
        match conjugate_into(&r, x, y, DEFAULT_ELEMENT_LIMIT)? {
            Some(c) => conjugators.push((r.strong_generators(), c)),
            None => {
                return Ok(PreceqReport {
                    holds: false,
                    conjugators,
                    failing: Some(r.strong_generators()),
                })
            }
        }
    }
    Ok(PreceqReport {
        holds: true,
        conjugators,
        failing: None,
    })
}

fn check_overgroup(g: &PermGroup, group: &AbelianGroup) -> Result<()> {
    if g.degree() > MAX_DEGREE {
        return Err(Error::size_limit("permutation degree", g.degree() as u128, MAX_DEGREE as u128));
    }
    let hat = regular_representation(group);
    if g.degree() != group.order() || !hat.is_subgroup_of(g) {
        return Err(Error::NotOvergroup);
    }
    Ok(())
}

/// Greedy descent from `g` towards a `≼`-minimal overgroup of `Ĥ`. If
/// `Ĥ ≼ g` the answer is `Ĥ`; otherwise each step moves to the smallest
/// proper subgroup `⟨Ĥ, x⟩` (for `x` in the current group) that is `≼` the
/// current group, until none is.
pub fn minimality_reduce(g: &PermGroup, group: &Arc<AbelianGroup>) -> Result<PermGroup> {
    check_overgroup(g, group)?;
    let hat = regular_representation(group);
    let mut current = g.clone();
    loop {
        if current.order() == hat.order() {
            return Ok(current);
        }
        if preceq_check(&hat, &current, group)?.holds {
            return Ok(hat);
        }
        let mut candidates: Vec<PermGroup> = Vec::new();
        let mut seen: HashSet<Vec<Permutation>> = HashSet::new();
        let order = current.order();
        for x in current.elements(DEFAULT_ELEMENT_LIMIT)? {
            if hat.contains(&x) {
                continue;
            }
            let mut gens = hat.strong_generators();
            gens.push(x);
            let c = PermGroup::with_base(group.order(), gens, &[0]);
            if c.order() == order {
                continue;
            }
            let mut key = c.elements(DEFAULT_ELEMENT_LIMIT)?;
            key.sort();
            if seen.insert(key) {
                candidates.push(c);
            }
        }
        candidates.sort_by_key(PermGroup::order);
        let mut next = None;
        for c in candidates {
            if preceq_check(&c, &current, group)?.holds {
                next = Some(c);
                break;
            }
        }
        match next {
            Some(c) => current = c,
            None => return Ok(current),
        }
    }
}
