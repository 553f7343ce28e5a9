//! Exhaustive search for Cayley digraphs that are not CI.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, DEFAULT_MAX_ORDER};
use crate::perm::{aut_scheme_with_hint, transitivity_module, translation, ColorMatrix, Permutation, DEFAULT_MAX_DEGREE};
use crate::schur::SchurPartition;

use super::{babai_ci_check, CiVerdict};

const MAX_ORDER: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct NonCiSearch {
    pub group: String,
    /// Connection sets examined, one per `Aut(H)`-orbit.
    pub connection_sets: usize,
    /// Distinct transitivity modules checked.
    pub modules: usize,
    pub witness: Option<NonCiWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonCiWitness {
    pub connection_set: Vec<u32>,
    pub verdict: CiVerdict,
}

impl NonCiSearch {
    pub fn exhausted(&self) -> bool {
        self.witness.is_none()
    }
}

/// Scans connection sets `S ⊆ H∖{e}` in increasing bitmask order, one per
/// `Aut(H)`-orbit, and returns the first whose Cayley digraph has a
/// transitivity module failing Babai's criterion.
pub fn find_non_ci_search(group: &Arc<AbelianGroup>) -> Result<NonCiSearch> {
    let n = group.order();
    if n > MAX_ORDER {
        return Err(Error::size_limit("group order", n as u128, MAX_ORDER as u128));
    }
    let auts = group.automorphism_group(DEFAULT_MAX_ORDER)?;
    let hint: Vec<Permutation> = group.generators().into_iter().map(|g| translation(group, g)).collect();
    let mut seen_modules: HashSet<SchurPartition> = HashSet::new();
    let mut connection_sets = 0;
    let width = n - 1;
    for mask in 0u32..(1u32 << width) {
        // bit i stands for element i + 1
        let canonical = auts.iter().all(|phi| {
            let image = (0..width).filter(|i| mask >> i & 1 == 1).fold(0u32, |acc, i| {
                acc | 1 << (phi.apply(i as u32 + 1) - 1)
            });
            image >= mask
        });
        if !canonical {
            continue;
        }
        connection_sets += 1;
        let labels: Vec<u32> = (0..n as u32)
            .map(|x| match x {
                0 => 0,
                _ if mask >> (x - 1) & 1 == 1 => 1,
                _ => 2,
            })
            .collect();
        let matrix = ColorMatrix::from_cayley_labels(group, &labels);
        let g = aut_scheme_with_hint(&matrix, &hint, DEFAULT_MAX_DEGREE)?;
        let module = transitivity_module(&g, group)?;
        if !seen_modules.insert(module.clone()) {
            continue;
        }
        let verdict = babai_ci_check(&module)?;
        if !verdict.is_ci() {
            let connection_set = (1..n as u32).filter(|&x| mask >> (x - 1) & 1 == 1).collect();
            return Ok(NonCiSearch {
                group: group.to_string(),
                connection_sets,
                modules: seen_modules.len(),
                witness: Some(NonCiWitness { connection_set, verdict }),
            });
        }
    }
    Ok(NonCiSearch {
        group: group.to_string(),
        connection_sets,
        modules: seen_modules.len(),
        witness: None,
    })
}
