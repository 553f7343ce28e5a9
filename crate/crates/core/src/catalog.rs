//! S-ring census over small groups and the catalog of Schurian p-S-rings
//! over `C_p³`.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::group::{make_group, AbelianGroup, GroupAutomorphism, DEFAULT_MAX_ORDER};
use crate::perm::{aut_partition, transitivity_module, DEFAULT_MAX_DEGREE};
use crate::ring::product_counts;
use crate::schur::{orbit_partition, SchurPartition};

/// Largest group accepted by [`enumerate_srings`].
pub const ENUMERATION_MAX_ORDER: usize = 27;

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub label: String,
    pub p: u32,
    /// Generator images of `α` (only for `B6`).
    pub alpha: Option<Vec<u32>>,
    #[serde(serialize_with = "ser_partition")]
    pub partition: SchurPartition,
}

fn ser_partition<S: serde::Serializer>(p: &SchurPartition, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&p.to_json_value(), s)
}

/// `B1`–`B6` over `C_p³`, for `p ∈ {2, 3}`. `B6` is listed only when an
/// automorphism of order `p` with exactly `p` fixed points exists.
pub fn build_catalog(p: u32) -> Result<Vec<CatalogEntry>> {
    if p != 2 && p != 3 {
        return Err(Error::Precondition(format!("catalog is built for p = 2 or 3, not {p}")));
    }
    let group = make_group(&[p, p, p])?;
    let gens = group.generators();
    let (e2, e3) = (gens[1], gens[2]);
    let sub = |g: &[u32]| group.generated_subgroup(g).mask().clone();
    let entry = |label: &str, partition: SchurPartition, alpha: Option<Vec<u32>>| CatalogEntry {
        label: label.to_string(),
        p,
        alpha,
        partition,
    };
    let mut out = vec![
        entry("B1", SchurPartition::discrete(&group), None),
        entry("B2", chain_wreath(&group, &[sub(&[e2, e3])])?, None),
        entry("B3", b3(&group, e2, e3)?, None),
        entry("B4", chain_wreath(&group, &[sub(&[e3])])?, None),
        entry("B5", chain_wreath(&group, &[sub(&[e3]), sub(&[e2, e3])])?, None),
    ];
    if let Some(alpha) = find_alpha(&group, p)? {
        let partition = orbit_partition(&group, std::slice::from_ref(&alpha));
        out.push(entry("B6", partition, Some(alpha.generator_images().to_vec())));
    }
    Ok(out)
}

/// The first automorphism (in enumeration order) of order `p` fixing
/// exactly `p` elements.
pub fn find_alpha(group: &Arc<AbelianGroup>, p: u32) -> Result<Option<GroupAutomorphism>> {
    let auts = group.automorphism_group(DEFAULT_MAX_ORDER)?;
    Ok(auts
        .iter()
        .find(|a| a.order() == p as usize && a.fixed_points() == p as usize)
        .cloned())
}

/// Iterated wreath product of full group rings along a chain
/// `K₁ < K₂ < … < H`: elements of `K₁` are singletons, and an element of
/// `K_{i+1}∖K_i` (or of `H∖K_m`) lies in its `K_i`-coset (or `K_m`-coset).
pub fn chain_wreath(group: &Arc<AbelianGroup>, chain: &[BitSet]) -> Result<SchurPartition> {
    let labels: Vec<u32> = group
        .elements()
        .map(|x| {
            let level = chain.iter().position(|k| k.contains(x));
            match level {
                Some(0) => x,
                Some(i) => coset_min(group, x, &chain[i - 1]),
                None => coset_min(group, x, chain.last().expect("nonempty chain")),
            }
        })
        .collect();
    SchurPartition::from_labels(group, &labels).validated()
}

fn coset_min(group: &AbelianGroup, x: u32, sub: &BitSet) -> u32 {
    sub.iter().map(|l| group.add(x, l)).min().expect("subgroup is nonempty")
}

/// `(ℤ[C_p] ≀ ℤ[C_p]) ⊗ ℤ[C_p]`: the wreath product on `⟨e1, e2⟩` with
/// inner group `⟨e2⟩`, tensored with the discrete ring on `⟨e3⟩`.
fn b3(group: &Arc<AbelianGroup>, e2: u32, e3: u32) -> Result<SchurPartition> {
    let inner = group.generated_subgroup(&[e2]).mask().clone();
    let labels: Vec<(u32, u32)> = group
        .elements()
        .map(|x| {
            let ex = group.exponents(x);
            let (a, c) = (ex[0], ex[2]);
            // x = w + c·e3 with w ∈ ⟨e1, e2⟩
            let w = group.sub(x, group.scale(e3, c as i64));
            let w_label = if a == 0 { w } else { coset_min(group, w, &inner) };
            (w_label, c)
        })
        .collect();
    SchurPartition::from_labels(group, &labels).validated()
}

/// The label of the catalog entry Cayley-isomorphic to `p`, if any.
pub fn match_catalog(p: &SchurPartition, catalog: &[CatalogEntry]) -> Result<Option<String>> {
    for entry in catalog {
        if entry.partition.group() != p.group() {
            continue;
        }
        if crate::ci::cayley_isomorphic(p, &entry.partition)?.is_some() {
            return Ok(Some(entry.label.clone()));
        }
    }
    Ok(None)
}

/// True iff the transitivity module of the scheme's automorphism group has
/// exactly the blocks of `p`.
pub fn schurian_check(p: &SchurPartition) -> Result<bool> {
    let g = aut_partition(p, DEFAULT_MAX_DEGREE)?;
    Ok(transitivity_module(&g, p.group())? == *p)
}

/// All block sizes are powers of `prime`.
pub fn is_p_sring(p: &SchurPartition, prime: u32) -> bool {
    p.blocks().iter().all(|b| {
        let mut n = b.len();
        while n % prime as usize == 0 {
            n /= prime as usize;
        }
        n == 1
    })
}

/// Census of all S-rings over a group, in canonical order.
pub fn enumerate_srings(group: &Arc<AbelianGroup>) -> Result<Vec<SchurPartition>> {
    enumerate_srings_within(group, None)
}

/// Like [`enumerate_srings`], giving up with a size-limit error once the
/// time budget is spent.
pub fn enumerate_srings_within(group: &Arc<AbelianGroup>, budget: Option<Duration>) -> Result<Vec<SchurPartition>> {
    let n = group.order();
    if n > ENUMERATION_MAX_ORDER {
        return Err(Error::size_limit("group order", n as u128, ENUMERATION_MAX_ORDER as u128));
    }
    let units: Vec<i64> = group.units().into_iter().map(i64::from).collect();
    let ctx = Enumerator {
        group,
        units,
        deadline: budget.map(|b| Instant::now() + b),
    };
    let mut assigned = vec![u32::MAX; n];
    assigned[0] = 0;
    let state = State {
        assigned,
        blocks: vec![vec![0]],
    };
    // the block of the smallest unassigned element is chosen first; its
    // candidates are explored in parallel
    if n == 1 {
        return Ok(vec![SchurPartition::discrete(group)]);
    }
    let first = ctx.block_candidates(&state, 1);
    let results: Vec<Result<Vec<SchurPartition>>> = first
        .into_par_iter()
        .map(|orbit| {
            let mut state = state.clone();
            let mut out = Vec::new();
            if ctx.place(&mut state, &orbit) {
                ctx.extend(&mut state, &mut out)?;
            }
            Ok(out)
        })
        .collect();
    let mut seen: HashSet<SchurPartition> = HashSet::new();
    let mut all = Vec::new();
    for r in results {
        for p in r? {
            if seen.insert(p.clone()) {
                all.push(p);
            }
        }
    }
    all.sort_by_key(SchurPartition::key);
    Ok(all)
}

struct Enumerator<'a> {
    group: &'a Arc<AbelianGroup>,
    units: Vec<i64>,
    deadline: Option<Instant>,
}

#[derive(Clone)]
struct State {
    /// Block index per element, `u32::MAX` when unassigned.
    assigned: Vec<u32>,
    blocks: Vec<Vec<u32>>,
}

impl Enumerator<'_> {
    fn extend(&self, state: &mut State, out: &mut Vec<SchurPartition>) -> Result<()> {
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(Error::size_limit("enumeration time (s)", d.elapsed().as_secs() as u128, 0u128));
            }
        }
        let Some(x) = state.assigned.iter().position(|&b| b == u32::MAX) else {
            let p = SchurPartition::from_blocks(self.group, state.blocks.clone())?;
            if p.is_valid() {
                out.push(p);
            }
            return Ok(());
        };
        for orbit in self.block_candidates(state, x as u32) {
            let saved = state.clone();
            if self.place(state, &orbit) {
                self.extend(state, out)?;
            }
            *state = saved;
        }
        Ok(())
    }

    /// Candidate blocks containing `x`, each returned with its images under
    /// the unit power maps and inversion (all of which must be blocks too).
    fn block_candidates(&self, state: &State, x: u32) -> Vec<Vec<Vec<u32>>> {
        let free: Vec<u32> = (x + 1..self.group.order() as u32)
            .filter(|&y| state.assigned[y as usize] == u32::MAX)
            .collect();
        let mut out = Vec::new();
        let mut current = vec![x];
        self.subsets(state, &free, 0, &mut current, &mut out);
        out
    }

    fn subsets(&self, state: &State, free: &[u32], i: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<Vec<u32>>>) {
        if i == free.len() {
            if let Some(orbit) = self.unit_orbit(state, current) {
                out.push(orbit);
            }
            return;
        }
        current.push(free[i]);
        self.subsets(state, free, i + 1, current, out);
        current.pop();
        self.subsets(state, free, i + 1, current, out);
    }

    /// The distinct images of `block` under units; `None` if two images
    /// overlap without being equal or an image meets assigned elements.
    fn unit_orbit(&self, state: &State, block: &[u32]) -> Option<Vec<Vec<u32>>> {
        let n = self.group.order();
        let base = BitSet::from_iter(n, block.iter().copied());
        let mut images: Vec<BitSet> = vec![base];
        for &u in &self.units {
            let img = BitSet::from_iter(n, block.iter().map(|&y| self.group.scale(y, u)));
            if img.len() != block.len() {
                return None;
            }
            if images.iter().any(|b| *b == img) {
                continue;
            }
            if images.iter().any(|b| !b.is_disjoint(&img)) {
                return None;
            }
            if img.iter().any(|y| state.assigned[y as usize] != u32::MAX) {
                return None;
            }
            images.push(img);
        }
        Some(images.iter().map(BitSet::to_vec).collect())
    }

    /// Adds the blocks and checks the product condition on every triple of
    /// final blocks involving a new one.
    fn place(&self, state: &mut State, orbit: &[Vec<u32>]) -> bool {
        let first_new = state.blocks.len();
        for b in orbit {
            let id = state.blocks.len() as u32;
            for &y in b {
                state.assigned[y as usize] = id;
            }
            state.blocks.push(b.clone());
        }
        let count = state.blocks.len();
        for i in 0..count {
            for j in 0..count {
                if i < first_new && j < first_new {
                    // only pairs with a new block produce new products; old
                    // products are rechecked against the new blocks below
                    let counts = product_counts(self.group, &state.blocks[i], &state.blocks[j]);
                    if !constant_on(&counts, &state.blocks[first_new..]) {
                        return false;
                    }
                    continue;
                }
                let counts = product_counts(self.group, &state.blocks[i], &state.blocks[j]);
                if !constant_on(&counts, &state.blocks) {
                    return false;
                }
            }
        }
        true
    }
}

fn constant_on(counts: &[u32], blocks: &[Vec<u32>]) -> bool {
    blocks
        .iter()
        .all(|b| b.iter().all(|&y| counts[y as usize] == counts[b[0] as usize]))
}

trait Validated: Sized {
    fn validated(self) -> Result<Self>;
}

impl Validated for SchurPartition {
    fn validated(self) -> Result<Self> {
        match self.validate() {
            Ok(()) => Ok(self),
            Err(v) => Err(Error::InvalidPartition(v.to_string())),
        }
    }
}
