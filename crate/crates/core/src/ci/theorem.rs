//! Sampled verification that transitivity modules over `C_p³ × C_q` are
//! CI, following the case analysis on `P₁` and `Q₁` and checking every
//! branch against Babai's criterion.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{build_catalog, is_p_sring, match_catalog, CatalogEntry};
use crate::error::{Error, Result};
use crate::group::{is_prime, make_group, AbelianGroup, Subgroup, DEFAULT_MAX_ORDER};
use crate::perm::{aut_scheme_with_hint, transitivity_module, translation, ColorMatrix, Permutation, DEFAULT_MAX_DEGREE};
use crate::schur::{detect_gwreath, detect_star, p1_q1, trichotomy_classify, SchurPartition, TrichotomyError};

use super::theorems::{cayley_automorphisms, ci_via_gwreath_with, ci_via_star_with};
use super::{babai_ci_check, Method, TheoremOutcome, Verdict};

#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub p: u32,
    pub q: u32,
    /// Number of draws; duplicates are dropped afterwards.
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl SamplerConfig {
    pub fn new(p: u32, q: u32, samples: usize, seed: u64) -> Self {
        SamplerConfig {
            p,
            q,
            samples,
            seed,
            workers: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// The discrete S-ring: `Aut(𝔄) = Ĥ`.
    FullRing,
    /// Rank two: `Aut(𝔄) = Sym(H)`.
    Rank2,
    /// `P₁Q₁ ≠ H` with `|P₁Q₁/Q₁| ≤ p` or a full-ring section there.
    WedgeSmall,
    /// `P₁Q₁ ≠ H` with the quotient by `Q₁` matched against the catalog.
    WedgeCatalog,
    /// `P₁Q₁ = H` and `𝔄/P₁` has rank two.
    StarRank2,
    /// `P₁Q₁ = H` and `𝔄/P₁` is the full group ring of `C_q`.
    StarFull,
    /// No branch hypothesis held; the verdict is Babai's alone.
    FallbackBabai,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::FullRing => "full-ring",
            Branch::Rank2 => "rank2",
            Branch::WedgeSmall => "wedge-small",
            Branch::WedgeCatalog => "wedge-catalog",
            Branch::StarRank2 => "star-rank2",
            Branch::StarFull => "star-full",
            Branch::FallbackBabai => "fallback-babai",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleRecord {
    pub partition: serde_json::Value,
    pub rank: usize,
    pub p1_order: usize,
    pub q1_order: usize,
    pub branch: Branch,
    pub method: Method,
    pub verdict: Verdict,
    pub babai_verdict: Verdict,
    /// Catalog label of `𝔄/Q₁` in the wedge case with `|P₁| = p²`.
    pub catalog_label: Option<String>,
    /// `|Aut_{P̄₁}(𝔄_{P̄₁})| ≤ p`, checked in the same case.
    pub section_aut_bound: Option<bool>,
    pub fallback_reason: Option<String>,
    /// `M_q`-invariant blocks passed through the trichotomy.
    pub trichotomy_blocks: usize,
    pub structural_checks: Vec<String>,
    /// Structural claims of the case analysis that fail on this module.
    pub structural_failures: Vec<String>,
    /// Babai refuses, a branch disagrees with Babai, or no branch concludes.
    pub refutation: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub group: String,
    pub p: u32,
    pub q: u32,
    pub seed: u64,
    pub samples_requested: usize,
    pub samples_distinct: usize,
    pub branch_histogram: BTreeMap<String, usize>,
    pub catalog_histogram: BTreeMap<String, usize>,
    pub all_ci: bool,
    pub refutations: Vec<SampleRecord>,
    pub structural_counterexamples: Vec<SampleRecord>,
    pub records: Vec<SampleRecord>,
}

impl TheoremReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("group {} (p={}, q={}) seed {}\n", self.group, self.p, self.q, self.seed));
        out.push_str(&format!(
            "samples: {} drawn, {} distinct\n",
            self.samples_requested, self.samples_distinct
        ));
        out.push_str("branches:\n");
        for (k, v) in &self.branch_histogram {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        if !self.catalog_histogram.is_empty() {
            out.push_str("catalog labels of the quotient by Q1:\n");
            for (k, v) in &self.catalog_histogram {
                out.push_str(&format!("  {k}: {v}\n"));
            }
        }
        out.push_str(&format!("all CI: {}\n", self.all_ci));
        out.push_str(&format!("refutations: {}\n", self.refutations.len()));
        for r in &self.refutations {
            out.push_str(&format!(
                "  {} : {}\n",
                r.partition,
                r.refutation.as_deref().unwrap_or("")
            ));
        }
        out.push_str(&format!("structural counterexamples: {}\n", self.structural_counterexamples.len()));
        for r in &self.structural_counterexamples {
            out.push_str(&format!("  {} : {}\n", r.partition, r.structural_failures.join("; ")));
        }
        out
    }
}

fn check_config(cfg: &SamplerConfig) -> Result<Arc<AbelianGroup>> {
    if !is_prime(cfg.p) || !is_prime(cfg.q) {
        return Err(Error::InvalidSpec(format!("p = {} and q = {} must be primes", cfg.p, cfg.q)));
    }
    if cfg.p == cfg.q {
        return Err(Error::InvalidSpec(format!("p and q must differ (both are {})", cfg.p)));
    }
    let order = (cfg.p as u64).pow(3) * cfg.q as u64;
    if order > DEFAULT_MAX_DEGREE as u64 {
        return Err(Error::size_limit("p^3 q", order as u128, DEFAULT_MAX_DEGREE as u128));
    }
    make_group(&[cfg.p, cfg.p, cfg.p, cfg.q])
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Distinct transitivity modules of randomly drawn colored Cayley graphs,
/// in draw order.
pub fn sample_modules(cfg: &SamplerConfig) -> Result<Vec<SchurPartition>> {
    let group = check_config(cfg)?;
    let drawn: Vec<Result<SchurPartition>> = with_pool(cfg.workers, || {
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| draw_module(&group, cfg.seed, i as u64))
            .collect()
    })?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in drawn {
        let m = m?;
        if seen.insert(m.key()) {
            out.push(m);
        }
    }
    Ok(out)
}

/// The transitivity module `V(Aut(Γ), H)` of the `index`-th random colored
/// Cayley graph `Γ` for this seed.
fn draw_module(group: &Arc<AbelianGroup>, seed: u64, index: u64) -> Result<SchurPartition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = group.order();
    let colors = rng.gen_range(1..=4usize);
    let strategy = rng.gen_range(0..4u32);
    let mut sets: Vec<Vec<bool>> = Vec::with_capacity(colors);
    for _ in 0..colors {
        let s = if strategy == 3 { rng.gen_range(0..3u32) } else { strategy };
        sets.push(match s {
            0 => random_subset(group, &mut rng),
            1 => automorphism_orbits(group, &mut rng)?,
            _ => coset_union(group, &mut rng)?,
        });
    }
    // color of x: which connection sets contain it; 0 is kept apart
    let labels: Vec<u32> = (0..n)
        .map(|x| {
            if x == 0 {
                0
            } else {
                1 + sets.iter().enumerate().fold(0u32, |acc, (i, s)| acc | (s[x] as u32) << i)
            }
        })
        .collect();
    let matrix = ColorMatrix::from_cayley_labels(group, &labels);
    let hint: Vec<Permutation> = group.generators().into_iter().map(|g| translation(group, g)).collect();
    let g = aut_scheme_with_hint(&matrix, &hint, DEFAULT_MAX_DEGREE)?;
    transitivity_module(&g, group)
}

fn random_subset(group: &AbelianGroup, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let density = rng.gen_range(0.05..0.6);
    (0..group.order()).map(|x| x != 0 && rng.gen_bool(density)).collect()
}

/// A random union of orbits of a random automorphism.
fn automorphism_orbits(group: &AbelianGroup, rng: &mut ChaCha8Rng) -> Result<Vec<bool>> {
    let auts = group.automorphism_group(DEFAULT_MAX_ORDER)?;
    let phi = &auts[rng.gen_range(0..auts.len())];
    let n = group.order();
    let mut set = vec![false; n];
    let mut done = vec![false; n];
    for start in 1..n as u32 {
        if done[start as usize] {
            continue;
        }
        let take = rng.gen_bool(0.3);
        let mut x = start;
        while !done[x as usize] {
            done[x as usize] = true;
            set[x as usize] = take;
            x = phi.apply(x);
        }
    }
    Ok(set)
}

/// A random union of cosets of a random nontrivial proper subgroup, with a
/// random part of the subgroup itself.
fn coset_union(group: &AbelianGroup, rng: &mut ChaCha8Rng) -> Result<Vec<bool>> {
    let lattice = group.subgroup_lattice()?;
    let proper: Vec<&Subgroup> = lattice
        .iter()
        .filter(|s| !s.is_trivial() && s.order() < group.order())
        .collect();
    let k = *proper.choose(rng).expect("the group is not of prime order");
    let n = group.order();
    let mut set = vec![false; n];
    let mut done = vec![false; n];
    for start in 0..n as u32 {
        if done[start as usize] {
            continue;
        }
        let inside = k.contains(start);
        let take = rng.gen_bool(0.4);
        for &l in k.members() {
            let y = group.add(start, l);
            done[y as usize] = true;
            set[y as usize] = if inside { y != 0 && rng.gen_bool(0.3) } else { take };
        }
    }
    Ok(set)
}

/// Runs the case analysis on every sampled module.
pub fn verify_main_theorem(cfg: &SamplerConfig) -> Result<TheoremReport> {
    let group = check_config(cfg)?;
    let modules = sample_modules(cfg)?;
    let catalog = build_catalog(cfg.p)?;
    let analyzed: Vec<Result<SampleRecord>> = with_pool(cfg.workers, || {
        modules
            .par_iter()
            .map(|m| analyze(m, cfg.p, cfg.q, &catalog))
            .collect()
    })?;
    let mut records = analyzed.into_iter().collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.partition.to_string());
    let mut branch_histogram = BTreeMap::new();
    let mut catalog_histogram = BTreeMap::new();
    for r in &records {
        *branch_histogram.entry(r.branch.name().to_string()).or_insert(0) += 1;
        if let Some(label) = &r.catalog_label {
            *catalog_histogram.entry(label.clone()).or_insert(0) += 1;
        }
    }
    let refutations: Vec<SampleRecord> = records.iter().filter(|r| r.refutation.is_some()).cloned().collect();
    let structural_counterexamples: Vec<SampleRecord> = records
        .iter()
        .filter(|r| !r.structural_failures.is_empty())
        .cloned()
        .collect();
    Ok(TheoremReport {
        group: group.to_string(),
        p: cfg.p,
        q: cfg.q,
        seed: cfg.seed,
        samples_requested: cfg.samples,
        samples_distinct: records.len(),
        branch_histogram,
        catalog_histogram,
        all_ci: records.iter().all(|r| r.verdict == Verdict::Ci),
        refutations,
        structural_counterexamples,
        records,
    })
}

/// Maps a subgroup of `H` into the group copy of a restriction.
fn into_restriction(sub: &Subgroup, embedding: &[u32], section: &AbelianGroup) -> Result<Subgroup> {
    let members: Vec<u32> = embedding
        .iter()
        .enumerate()
        .filter(|(_, &x)| sub.contains(x))
        .map(|(r, _)| r as u32)
        .collect();
    section.subgroup_from_members(&members)
}

fn star_either_order(p: &SchurPartition, a: &Subgroup, b: &Subgroup) -> Option<(Subgroup, Subgroup)> {
    if detect_star(p, a, b).is_ok() {
        Some((a.clone(), b.clone()))
    } else if detect_star(p, b, a).is_ok() {
        Some((b.clone(), a.clone()))
    } else {
        None
    }
}

fn analyze(module: &SchurPartition, p: u32, q: u32, catalog: &[CatalogEntry]) -> Result<SampleRecord> {
    let group = module.group();
    let babai = babai_ci_check(module)?;
    let mut structural: Vec<String> = Vec::new();
    let mut broken: Vec<String> = Vec::new();
    let mut failures: Vec<String> = Vec::new();

    let mut trichotomy_blocks = 0;
    for i in 0..module.rank() {
        match trichotomy_classify(module, q, i) {
            Ok(_) => trichotomy_blocks += 1,
            Err(TrichotomyError::Precondition(_)) => {}
            Err(TrichotomyError::Refutation { block, reason }) => {
                broken.push(format!("trichotomy fails on {block:?}: {reason}"));
            }
        }
    }
    structural.push(format!("trichotomy: {trichotomy_blocks} M_q-invariant blocks classified"));

    let (p1, q1) = p1_q1(module, q)?;
    let mut h1_mask = group.sumset(p1.mask(), q1.mask());
    h1_mask.union_with(p1.mask());
    let h1 = group.subgroup_from_members(&h1_mask.to_vec())?;
    let whole = h1.order() == group.order();

    // the section 𝔄₁ = 𝔄_{P₁Q₁} and its quotient by P₁
    let a1 = module.restriction(&h1)?;
    let p1_in = into_restriction(&p1, &a1.embedding, a1.partition.group())?;
    let q1_in = into_restriction(&q1, &a1.embedding, a1.partition.group())?;
    let a1_mod_p1 = a1.partition.quotient(&p1_in)?.partition;
    let quotient_rank2 = a1_mod_p1.rank() == 2;
    let quotient_full = a1_mod_p1.is_discrete() && a1_mod_p1.group().order() == q as usize;
    let star_pair = if quotient_rank2 || quotient_full {
        match star_either_order(&a1.partition, &p1_in, &q1_in) {
            Some(pair) => {
                structural.push(format!(
                    "star: A1 = A1_K * A1_L with |K| = {}, |L| = {}",
                    pair.0.order(),
                    pair.1.order()
                ));
                Some(pair)
            }
            None => {
                broken.push("A1/P1 is rank two or full but A1 has no star decomposition over (P1, Q1)".into());
                None
            }
        }
    } else {
        None
    };

    let mut catalog_label = None;
    let mut section_aut_bound = None;
    let mut fallback_reason = None;
    let mut outcome: Option<std::result::Result<TheoremOutcome, Error>> = None;

    let branch = if module.is_discrete() {
        Branch::FullRing
    } else if module.rank() == 2 {
        Branch::Rank2
    } else if !whole {
        let cert = detect_gwreath(module)
            .into_iter()
            .find(|c| c.first == q1 && c.second == h1 && !c.trivial);
        if cert.is_some() {
            structural.push("wedge: nontrivial generalized wreath product for (Q1, P1Q1)".into());
        } else {
            broken.push("P1Q1 != H but no nontrivial generalized wreath product for (Q1, P1Q1)".into());
        }
        let over_q1 = module.quotient(&q1)?;
        let section = over_q1
            .partition
            .restriction(&into_quotient(&h1, &over_q1.projection, over_q1.partition.group())?)?
            .partition;
        let small = p1.order() <= p as usize || section.is_discrete();
        if p1.order() == (p * p) as usize && q1.order() == q as usize {
            catalog_label = Some(if is_p_sring(&over_q1.partition, p) {
                match_catalog(&over_q1.partition, catalog)?.unwrap_or_else(|| "unmatched".into())
            } else {
                "not-p-S-ring".into()
            });
            section_aut_bound = Some(cayley_automorphisms(&section)?.len() <= p as usize);
        }
        outcome = Some(ci_via_gwreath_with(module, &q1, &h1, Some(&babai)));
        if small {
            Branch::WedgeSmall
        } else {
            Branch::WedgeCatalog
        }
    } else if let Some((k, l)) = star_pair.as_ref().filter(|_| quotient_rank2 || quotient_full) {
        let k = group.subgroup_from_members(&k.members().iter().map(|&r| a1.embedding[r as usize]).collect::<Vec<_>>())?;
        let l = group.subgroup_from_members(&l.members().iter().map(|&r| a1.embedding[r as usize]).collect::<Vec<_>>())?;
        outcome = Some(ci_via_star_with(module, &k, &l, Some(&babai)));
        if quotient_rank2 {
            Branch::StarRank2
        } else {
            Branch::StarFull
        }
    } else if quotient_rank2 || quotient_full {
        fallback_reason = Some("P1Q1 = H and A/P1 is rank two or full, but A has no star decomposition over (P1, Q1)".into());
        Branch::FallbackBabai
    } else {
        fallback_reason = Some("P1Q1 = H and A/P1 is neither rank two nor the full ring of C_q".into());
        Branch::FallbackBabai
    };

    let (branch, method, verdict) = match outcome {
        None => {
            let method = match branch {
                Branch::FullRing => Method::FullRing,
                Branch::Rank2 => Method::Rank2,
                _ => Method::Babai,
            };
            let verdict = match branch {
                Branch::FullRing | Branch::Rank2 => Verdict::Ci,
                _ => babai.verdict,
            };
            (branch, method, verdict)
        }
        Some(Ok(TheoremOutcome::Proved { verdict })) => (branch, verdict.method, Verdict::Ci),
        Some(Ok(TheoremOutcome::Refused { reason })) => {
            fallback_reason = Some(format!("{}: {reason}", branch.name()));
            (Branch::FallbackBabai, Method::Babai, babai.verdict)
        }
        Some(Err(Error::Contradiction(msg))) => {
            failures.push(msg);
            (branch, Method::Babai, babai.verdict)
        }
        Some(Err(e)) => return Err(e),
    };
    if branch == Branch::FallbackBabai {
        failures.push(format!(
            "no branch concludes: {}",
            fallback_reason.as_deref().unwrap_or("unknown")
        ));
    }
    if !babai.is_ci() {
        failures.push("Babai's criterion refuses: some regular subgroup is not conjugate to the translations".into());
    }
    if verdict != babai.verdict {
        failures.push(format!("{} verdict disagrees with Babai's criterion", branch.name()));
    }
    Ok(SampleRecord {
        partition: module.to_json_value(),
        rank: module.rank(),
        p1_order: p1.order(),
        q1_order: q1.order(),
        branch,
        method,
        verdict,
        babai_verdict: babai.verdict,
        catalog_label,
        section_aut_bound,
        fallback_reason,
        trichotomy_blocks,
        structural_checks: structural,
        structural_failures: broken,
        refutation: (!failures.is_empty()).then(|| failures.join("; ")),
    })
}

/// Image of a subgroup in the group copy of a quotient.
fn into_quotient(sub: &Subgroup, projection: &[u32], quotient: &AbelianGroup) -> Result<Subgroup> {
    let mut members: Vec<u32> = sub.members().iter().map(|&x| projection[x as usize]).collect();
    members.sort_unstable();
    members.dedup();
    quotient.subgroup_from_members(&members)
}
