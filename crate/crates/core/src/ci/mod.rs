//! CI decisions for S-rings: Babai's criterion, normalized isomorphisms,
//! the overgroup order, star and generalized-wreath pipelines, the main
//! theorem verifier, and the search for non-CI Cayley digraphs.

mod babai;
mod iso;
mod order;
mod search;
mod theorem;
mod theorems;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::perm::Permutation;
use crate::schur::SchurPartition;

pub use babai::{babai_ci_check, babai_ci_check_with, BabaiOptions, DEFAULT_CONJUGATOR_CAP};
pub use iso::{cayley_isomorphic, ci_sring_check, iso1_search, iso1_star};
pub use order::{minimality_reduce, preceq_check, PreceqReport};
pub use search::{find_non_ci_search, NonCiSearch};
pub use theorem::{
    sample_modules, verify_main_theorem, Branch, SampleRecord, SamplerConfig, TheoremReport,
};
pub use theorems::{ci_via_gwreath, ci_via_star, TheoremOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "CI")]
    Ci,
    #[serde(rename = "not-CI")]
    NotCi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Babai,
    Star,
    Gwreath,
    FullRing,
    Rank2,
    Iso1Direct,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Ci => "CI",
            Verdict::NotCi => "not-CI",
        }
    }
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Babai => "babai",
            Method::Star => "star",
            Method::Gwreath => "gwreath",
            Method::FullRing => "full-ring",
            Method::Rank2 => "rank2",
            Method::Iso1Direct => "iso1-direct",
        }
    }
}

/// A regular subgroup (by generators) with an element conjugating it onto `Ĥ`.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugatorEntry {
    pub regular_subgroup: Vec<Permutation>,
    pub conjugator: Permutation,
}

/// A regular subgroup that is not conjugate to `Ĥ`.
#[derive(Clone, Debug, Serialize)]
pub struct Refusal {
    pub regular_subgroup: Vec<Permutation>,
    /// The bijection `σ` with `σ⁻¹ Ĥ σ` equal to the subgroup.
    pub sigma: Permutation,
    /// Block of `σ(x)` for every `x`: the Cayley coloring it induces.
    pub induced_coloring: Vec<u32>,
    /// Every element of `σ⁻¹·Hol(H)` was tested for membership and rejected.
    pub holomorph_scan: bool,
    /// Set for small groups, where every element of the group was tested.
    pub brute_force_confirmed: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CiVerdict {
    #[serde(serialize_with = "ser_partition")]
    pub partition: SchurPartition,
    pub verdict: Verdict,
    pub method: Method,
    #[serde(serialize_with = "ser_opt_big")]
    pub regular_subgroup_count: Option<BigUint>,
    /// Number of conjugacy classes of `H`-regular subgroups, when known.
    pub class_count: Option<usize>,
    #[serde(serialize_with = "ser_big")]
    pub automorphism_group_order: BigUint,
    pub conjugators: Vec<ConjugatorEntry>,
    pub conjugator_total: usize,
    pub refusal: Option<Refusal>,
}

impl CiVerdict {
    pub fn is_ci(&self) -> bool {
        self.verdict == Verdict::Ci
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

fn ser_partition<S: Serializer>(p: &SchurPartition, s: S) -> Result<S::Ok, S::Error> {
    p.to_json_value().serialize(s)
}

pub(crate) fn big_to_json(x: &BigUint) -> serde_json::Value {
    match u64::try_from(x) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::from(x.to_string()),
    }
}

fn ser_big<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    big_to_json(x).serialize(s)
}

fn ser_opt_big<S: Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    x.as_ref().map(big_to_json).serialize(s)
}
