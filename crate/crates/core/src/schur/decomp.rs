//! Generalized wreath and star decompositions, and the block trichotomy
//! relative to a simple prime divisor.

use std::fmt;

use serde::Serialize;

use crate::bits::BitSet;
use crate::error::Error;
use crate::group::Subgroup;

use super::{p1_q1, SchurPartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    GeneralizedWreath,
    Star,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum BlockWitness {
    /// Block `block` equals `representatives + subgroup`.
    CosetUnion { block: usize, representatives: Vec<u32> },
    /// Block `block` equals the sum of blocks `left` and `right`.
    Product { block: usize, left: usize, right: usize },
}

/// For a generalized wreath product the subgroups are `(L, U)`; for a star
/// product they are `(K, L)`.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionCertificate {
    pub kind: CertificateKind,
    pub first: Subgroup,
    pub second: Subgroup,
    pub trivial: bool,
    pub witnesses: Vec<BlockWitness>,
}

impl DecompositionCertificate {
    /// Re-checks every witness and the covering condition against `partition`.
    pub fn verify(&self, partition: &SchurPartition) -> bool {
        let group = partition.group();
        if !partition.is_asubgroup(&self.first) || !partition.is_asubgroup(&self.second) {
            return false;
        }
        let coset_sub = match self.kind {
            CertificateKind::GeneralizedWreath => self.first.mask().clone(),
            CertificateKind::Star => {
                let mut v = self.first.mask().clone();
                v.intersect_with(self.second.mask());
                v
            }
            CertificateKind::None => return self.witnesses.is_empty(),
        };
        let witnesses_ok = self.witnesses.iter().all(|w| match w {
            BlockWitness::CosetUnion { block, representatives } => {
                let reps = BitSet::from_iter(group.order(), representatives.iter().copied());
                *block < partition.rank() && group.sumset(&reps, &coset_sub) == partition.block_mask(*block)
            }
            BlockWitness::Product { block, left, right } => {
                *block < partition.rank()
                    && partition.block_mask(*left).is_subset(self.first.mask())
                    && partition.block_mask(*right).is_subset(self.second.mask())
                    && group.sumset(&partition.block_mask(*left), &partition.block_mask(*right))
                        == partition.block_mask(*block)
            }
        });
        let covered = |i: usize, want_coset: bool| {
            self.witnesses.iter().any(|w| match w {
                BlockWitness::CosetUnion { block, .. } => want_coset && *block == i,
                BlockWitness::Product { block, .. } => !want_coset && *block == i,
            })
        };
        let coverage_ok = (0..partition.rank()).all(|i| {
            let b = partition.block_mask(i);
            match self.kind {
                CertificateKind::GeneralizedWreath => !b.is_disjoint(self.second.mask()) || covered(i, true),
                CertificateKind::Star => {
                    let in_k = b.is_subset(self.first.mask());
                    let in_l = b.is_subset(self.second.mask());
                    if in_l && !in_k {
                        covered(i, true)
                    } else if !in_k && !in_l {
                        covered(i, false)
                    } else {
                        true
                    }
                }
                CertificateKind::None => true,
            }
        });
        witnesses_ok && coverage_ok
    }

    pub fn subgroup_orders(&self) -> (usize, usize) {
        (self.first.order(), self.second.order())
    }
}

fn coset_representatives(partition: &SchurPartition, block: usize, sub: &BitSet) -> Option<Vec<u32>> {
    let group = partition.group();
    let mask = partition.block_mask(block);
    let members: Vec<u32> = sub.iter().collect();
    let mut reps = Vec::new();
    let mut covered = BitSet::new(group.order());
    for x in mask.iter() {
        if covered.contains(x) {
            continue;
        }
        for &l in &members {
            let y = group.add(x, l);
            if !mask.contains(y) {
                return None;
            }
            covered.insert(y);
        }
        reps.push(x);
    }
    Some(reps)
}

/// Every pair `L ≤ U` of 𝔄-subgroups such that each block outside `U` is a
/// union of `L`-cosets.
pub fn detect_gwreath(partition: &SchurPartition) -> Vec<DecompositionCertificate> {
    let group = partition.group();
    let asubs = partition.asubgroups();
    let mut out = Vec::new();
    for l in &asubs {
        // blocks that are unions of L-cosets, computed once per L
        let coset_reps: Vec<Option<Vec<u32>>> = (0..partition.rank())
            .map(|i| coset_representatives(partition, i, l.mask()))
            .collect();
        for u in asubs.iter().filter(|u| l.is_subgroup_of(u)) {
            let mut witnesses = Vec::new();
            let mut ok = true;
            for (i, reps) in coset_reps.iter().enumerate() {
                if u.contains(partition.block(i)[0]) {
                    continue;
                }
                match reps {
                    Some(r) => witnesses.push(BlockWitness::CosetUnion {
                        block: i,
                        representatives: r.clone(),
                    }),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                out.push(DecompositionCertificate {
                    kind: CertificateKind::GeneralizedWreath,
                    first: l.clone(),
                    second: u.clone(),
                    trivial: l.is_trivial() || u.order() == group.order(),
                    witnesses,
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum StarRefusal {
    NotASubgroup,
    /// A block inside `L∖K` is not a union of `(K∩L)`-cosets.
    CosetCondition { block: Vec<u32> },
    /// A block outside `K∪L` is not a sum of basic sets from `K` and `L`.
    NoFactorization { block: Vec<u32> },
}

impl fmt::Display for StarRefusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarRefusal::NotASubgroup => write!(f, "K or L is not an 𝔄-subgroup"),
            StarRefusal::CosetCondition { block } => {
                write!(f, "block {block:?} inside L∖K is not a union of (K∩L)-cosets")
            }
            StarRefusal::NoFactorization { block } => {
                write!(f, "block {block:?} outside K∪L does not factor as R+S")
            }
        }
    }
}

/// Checks whether the S-ring is the star product of its restrictions to `K` and `L`.
pub fn detect_star(
    partition: &SchurPartition,
    k: &Subgroup,
    l: &Subgroup,
) -> Result<DecompositionCertificate, StarRefusal> {
    if !partition.is_asubgroup(k) || !partition.is_asubgroup(l) {
        return Err(StarRefusal::NotASubgroup);
    }
    let group = partition.group();
    let mut v = k.mask().clone();
    v.intersect_with(l.mask());
    let in_k = partition.blocks_within(k.mask());
    let in_l = partition.blocks_within(l.mask());
    let masks: Vec<BitSet> = (0..partition.rank()).map(|i| partition.block_mask(i)).collect();

    let mut witnesses = Vec::new();
    for (i, block) in partition.blocks().iter().enumerate() {
        let x = block[0];
        match (k.contains(x), l.contains(x)) {
            (false, true) => match coset_representatives(partition, i, &v) {
                Some(representatives) => witnesses.push(BlockWitness::CosetUnion { block: i, representatives }),
                None => return Err(StarRefusal::CosetCondition { block: block.clone() }),
            },
            (false, false) => {
                // basic R, S suffice: any 𝔄-set factorization contains a basic one
                let found = in_k.iter().find_map(|&r| {
                    in_l.iter()
                        .filter(|&&s| masks[r].len() * masks[s].len() >= block.len())
                        .find(|&&s| group.sumset(&masks[r], &masks[s]) == masks[i])
                        .map(|&s| (r, s))
                });
                match found {
                    Some((left, right)) => witnesses.push(BlockWitness::Product { block: i, left, right }),
                    None => return Err(StarRefusal::NoFactorization { block: block.clone() }),
                }
            }
            _ => {}
        }
    }
    Ok(DecompositionCertificate {
        kind: CertificateKind::Star,
        first: k.clone(),
        second: l.clone(),
        trivial: k.is_trivial() || k.order() == group.order(),
        witnesses,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrichotomyCase {
    /// `S₁ ≠ ∅`: the block lies in `P₁`.
    A,
    /// `S₁ = ∅ ≠ S₋₁`: the block is `S₋₁ + (Q₁∖P₁)`.
    B,
    /// `S₁ = S₋₁ = ∅`: the block is a union of `Q₁`-cosets.
    C,
}

/// The split `T = S₁ ∪ (S₋₁ + Q^#) ∪ (S₀ + Q)` of an `M_q`-invariant block.
#[derive(Clone, Debug, Serialize)]
pub struct Trichotomy {
    pub case: TrichotomyCase,
    pub s1: Vec<u32>,
    pub s_minus1: Vec<u32>,
    pub s0: Vec<u32>,
    /// Whether `S₋₁ ⊆ P₁`; reported, not assumed.
    pub s_minus1_in_p1: bool,
}

#[derive(Debug)]
pub enum TrichotomyError {
    /// The block is not `M_q`-invariant, or the inputs are unusable.
    Precondition(Error),
    /// The block contradicts the trichotomy.
    Refutation { block: Vec<u32>, reason: String },
}

impl fmt::Display for TrichotomyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrichotomyError::Precondition(e) => write!(f, "{e}"),
            TrichotomyError::Refutation { block, reason } => write!(f, "block {block:?}: {reason}"),
        }
    }
}

impl From<Error> for TrichotomyError {
    fn from(e: Error) -> Self {
        TrichotomyError::Precondition(e)
    }
}

/// True when the block is fixed by every `t ∈ M_q`.
pub fn is_mq_invariant(partition: &SchurPartition, q: u32, block: usize) -> Result<bool, Error> {
    let group = partition.group();
    let mask = partition.block_mask(block);
    for t in group.m_q(q)? {
        if !mask.iter().all(|x| mask.contains(group.scale(x, t as i64))) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn trichotomy_classify(
    partition: &SchurPartition,
    q: u32,
    block: usize,
) -> Result<Trichotomy, TrichotomyError> {
    let group = partition.group();
    if block >= partition.rank() {
        return Err(Error::Precondition(format!("no block with index {block}")).into());
    }
    if !is_mq_invariant(partition, q, block)? {
        return Err(Error::Precondition(format!("block {:?} is not M_q-invariant", partition.block(block))).into());
    }
    let t = partition.block_mask(block);
    let block_members = partition.block(block).to_vec();
    let qsub = group.q_part(q)?;
    let refute = |reason: String| TrichotomyError::Refutation {
        block: block_members.clone(),
        reason,
    };

    let mut heads: Vec<u32> = Vec::new();
    for x in t.iter() {
        heads.push(group.decompose_q(x, q)?.0);
    }
    heads.sort_unstable();
    heads.dedup();

    let (mut s1, mut s_minus1, mut s0) = (Vec::new(), Vec::new(), Vec::new());
    for &s in &heads {
        let r: Vec<u32> = qsub.members().iter().copied().filter(|&x| t.contains(group.add(s, x))).collect();
        if r == [0] {
            s1.push(s);
        } else if r.len() == q as usize {
            s0.push(s);
        } else if r.len() == q as usize - 1 && !r.contains(&0) {
            s_minus1.push(s);
        } else {
            return Err(refute(format!("R_{s} = {r:?} is not {{0}}, Q^# or Q")));
        }
    }

    let n = group.order();
    let s1_mask = BitSet::from_iter(n, s1.iter().copied());
    let sm_mask = BitSet::from_iter(n, s_minus1.iter().copied());
    if !partition.is_aset(&s1_mask) {
        return Err(refute(format!("S_1 = {s1:?} is not an 𝔄-set")));
    }
    if !partition.is_aset(&sm_mask) {
        return Err(refute(format!("S_-1 = {s_minus1:?} is not an 𝔄-set")));
    }

    let (p1, q1) = p1_q1(partition, q)?;
    let s_minus1_in_p1 = sm_mask.is_subset(p1.mask());
    let case = if !s1.is_empty() {
        if !s_minus1.is_empty() || !s0.is_empty() || !t.is_subset(p1.mask()) {
            return Err(refute("S_1 is nonempty but the block is not inside P_1".into()));
        }
        TrichotomyCase::A
    } else if !s_minus1.is_empty() {
        let mut q1_minus_p1 = q1.mask().clone();
        q1_minus_p1.difference_with(p1.mask());
        if group.sumset(&sm_mask, &q1_minus_p1) != t {
            return Err(refute("block differs from S_-1 + (Q_1 ∖ P_1)".into()));
        }
        TrichotomyCase::B
    } else {
        if group.sumset(q1.mask(), &t) != t {
            return Err(refute("block is not a union of Q_1-cosets".into()));
        }
        TrichotomyCase::C
    };
    Ok(Trichotomy {
        case,
        s1,
        s_minus1,
        s0,
        s_minus1_in_p1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use crate::schur::cyclotomic;

    #[test]
    fn gwreath_examples() {
        let z4 = make_group(&[4]).unwrap();
        let w = SchurPartition::from_blocks(&z4, vec![vec![0], vec![2], vec![1, 3]]).unwrap();
        let certs = detect_gwreath(&w);
        let nontrivial: Vec<_> = certs.iter().filter(|c| !c.trivial).collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].subgroup_orders(), (2, 2));
        assert!(certs.iter().all(|c| c.verify(&w)));

        let d = SchurPartition::discrete(&make_group(&[2, 2, 2, 3]).unwrap());
        assert!(detect_gwreath(&d).iter().all(|c| c.trivial));
    }

    #[test]
    fn star_examples() {
        let h = make_group(&[2, 3]).unwrap();
        let d = SchurPartition::discrete(&h);
        let k = h.q_complement(3).unwrap();
        let l = h.q_part(3).unwrap();
        let cert = detect_star(&d, &k, &l).unwrap();
        assert!(!cert.trivial && cert.verify(&d));
        assert!(detect_star(&d, &h.whole(), &l).unwrap().trivial);

        let r2 = SchurPartition::rank_two(&h);
        assert_eq!(detect_star(&r2, &k, &l).unwrap_err(), StarRefusal::NotASubgroup);
    }

    #[test]
    fn trichotomy_examples() {
        let h = make_group(&[2, 3]).unwrap();
        let m: Vec<_> = h.m_q(3).unwrap().into_iter().map(|t| h.unit_action(t as i64).unwrap()).collect();
        let cyc = cyclotomic(&h, &m).unwrap();
        let p_elem = h.rank_of(&[1, 0]).unwrap();
        let single = cyc.block_of(p_elem);
        let tri = trichotomy_classify(&cyc, 3, single).unwrap();
        assert_eq!((tri.case, tri.s1.clone()), (TrichotomyCase::A, vec![p_elem]));

        let qsharp = cyc.block_of(h.rank_of(&[0, 1]).unwrap());
        let tri = trichotomy_classify(&cyc, 3, qsharp).unwrap();
        assert_eq!((tri.case, tri.s_minus1.clone()), (TrichotomyCase::B, vec![0]));

        let coset = SchurPartition::from_blocks(&h, vec![vec![0], vec![1, 2], vec![3, 4, 5]]).unwrap();
        assert!(coset.is_valid());
        let tri = trichotomy_classify(&coset, 3, 2).unwrap();
        assert_eq!((tri.case, tri.s0.clone()), (TrichotomyCase::C, vec![3]));

        let d = SchurPartition::discrete(&h);
        let one = h.rank_of(&[0, 1]).unwrap();
        assert!(matches!(
            trichotomy_classify(&d, 3, d.block_of(one)),
            Err(TrichotomyError::Precondition(_))
        ));
    }
}
