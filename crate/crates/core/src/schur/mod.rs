//! Schur partitions: the basic-set partitions of S-rings over abelian groups.

mod closure;
mod decomp;
mod structure;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupAutomorphism};
use crate::ring::product_counts;

pub use closure::generated_sring;
pub use decomp::{
    detect_gwreath, detect_star, is_mq_invariant, trichotomy_classify, BlockWitness, CertificateKind, DecompositionCertificate,
    StarRefusal, Trichotomy, TrichotomyCase, TrichotomyError,
};
pub use structure::{cyclotomic, p1_q1, radical, Quotient, Restriction};
pub(crate) use structure::orbit_partition;

/// A partition of the group into basic sets, kept in canonical order:
/// blocks sorted by (size, smallest rank), so block 0 is `{e}` whenever
/// the identity is isolated.
#[derive(Clone)]
pub struct SchurPartition {
    group: Arc<AbelianGroup>,
    blocks: Vec<Vec<u32>>,
    block_of: Vec<u32>,
}

/// First violated S-ring axiom, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum Violation {
    /// `{e}` is not a block.
    Identity { block: Vec<u32> },
    /// The inverse of `block` is not a block; `element` is a witness.
    Inverse { block: Vec<u32>, element: u32 },
    /// In the product of blocks `left` and `right`, elements `x` and `y`
    /// of the same block receive different coefficients.
    Closure {
        left: Vec<u32>,
        right: Vec<u32>,
        x: u32,
        y: u32,
        coeff_x: u32,
        coeff_y: u32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Identity { block } => write!(f, "identity is not isolated: block {block:?}"),
            Violation::Inverse { block, element } => {
                write!(f, "block {block:?} is not inverse-closed (witness element {element})")
            }
            Violation::Closure {
                left,
                right,
                x,
                y,
                coeff_x,
                coeff_y,
            } => write!(
                f,
                "product of {left:?} and {right:?} gives coefficient {coeff_x} at {x} but {coeff_y} at {y}"
            ),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    group: String,
    blocks: Vec<Vec<u32>>,
}

impl SchurPartition {
    /// Builds a partition from arbitrary blocks; the S-ring axioms are not
    /// checked here (see [`SchurPartition::validate`]).
    pub fn from_blocks(group: &Arc<AbelianGroup>, blocks: Vec<Vec<u32>>) -> Result<Self> {
        let n = group.order();
        let mut labels = vec![u32::MAX; n];
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {i} is empty")));
            }
            for &x in block {
                let slot = labels
                    .get_mut(x as usize)
                    .ok_or_else(|| Error::InvalidPartition(format!("rank {x} is outside the group of order {n}")))?;
                if *slot != u32::MAX {
                    return Err(Error::InvalidPartition(format!("rank {x} appears twice")));
                }
                *slot = i as u32;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == u32::MAX) {
            return Err(Error::InvalidPartition(format!("rank {x} is not covered")));
        }
        Ok(Self::from_labels(group, &labels))
    }

    /// Builds a partition from a label per element; equal labels share a block.
    pub fn from_labels<L: Eq + std::hash::Hash>(group: &Arc<AbelianGroup>, labels: &[L]) -> Self {
        let mut index: HashMap<&L, usize> = HashMap::new();
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        for (x, label) in labels.iter().enumerate() {
            let i = *index.entry(label).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[i].push(x as u32);
        }
        Self::canonical(group, blocks)
    }

    fn canonical(group: &Arc<AbelianGroup>, mut blocks: Vec<Vec<u32>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by(|a, b| (a.len(), a[0]).cmp(&(b.len(), b[0])));
        let mut block_of = vec![0u32; group.order()];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                block_of[x as usize] = i as u32;
            }
        }
        SchurPartition {
            group: group.clone(),
            blocks,
            block_of,
        }
    }

    pub fn discrete(group: &Arc<AbelianGroup>) -> Self {
        Self::canonical(group, group.elements().map(|x| vec![x]).collect())
    }

    /// `{{e}, H∖{e}}`; for the trivial group, the single block `{e}`.
    pub fn rank_two(group: &Arc<AbelianGroup>) -> Self {
        let mut blocks = vec![vec![0]];
        if group.order() > 1 {
            blocks.push((1..group.order() as u32).collect());
        }
        Self::canonical(group, blocks)
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[u32] {
        &self.blocks[i]
    }

    #[inline]
    pub fn block_of(&self, x: u32) -> usize {
        self.block_of[x as usize] as usize
    }

    pub fn block_labels(&self) -> &[u32] {
        &self.block_of
    }

    pub fn rank(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.group.order()
    }

    pub fn block_mask(&self, i: usize) -> BitSet {
        BitSet::from_iter(self.group.order(), self.blocks[i].iter().copied())
    }

    /// True when `set` is a union of blocks (an 𝔄-set).
    pub fn is_aset(&self, set: &BitSet) -> bool {
        set.iter().all(|x| self.blocks[self.block_of(x)].iter().all(|&y| set.contains(y)))
    }

    /// Blocks contained in `set`, by index.
    pub fn blocks_within(&self, set: &BitSet) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| self.blocks[i].iter().all(|&x| set.contains(x)))
            .collect()
    }

    /// Checks identity isolation, inverse closure and multiplicative closure,
    /// in that order, and reports the first violation.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        if self.blocks[0] != [0] {
            return Err(Violation::Identity {
                block: self.blocks[self.block_of(0)].clone(),
            });
        }
        for block in &self.blocks {
            let inv_block = self.block_of(self.group.neg(block[0]));
            if let Some(&x) = block
                .iter()
                .find(|&&x| self.block_of(self.group.neg(x)) != inv_block)
            {
                return Err(Violation::Inverse {
                    block: block.clone(),
                    element: x,
                });
            }
            if self.blocks[inv_block].len() != block.len() {
                return Err(Violation::Inverse {
                    block: block.clone(),
                    element: block[0],
                });
            }
        }
        for (i, left) in self.blocks.iter().enumerate() {
            for right in &self.blocks[i..] {
                let counts = product_counts(&self.group, left, right);
                for block in &self.blocks {
                    let c0 = counts[block[0] as usize];
                    if let Some(&y) = block.iter().find(|&&y| counts[y as usize] != c0) {
                        return Err(Violation::Closure {
                            left: left.clone(),
                            right: right.clone(),
                            x: block[0],
                            y,
                            coeff_x: c0,
                            coeff_y: counts[y as usize],
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SchurPartition) -> bool {
        self.group == other.group
            && self
                .blocks
                .iter()
                .all(|b| b.iter().all(|&x| other.block_of(x) == other.block_of(b[0])))
    }

    /// Image of the partition under a group automorphism.
    pub fn image(&self, phi: &GroupAutomorphism) -> SchurPartition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| phi.apply(x)).collect())
            .collect();
        Self::canonical(&self.group, blocks)
    }

    /// True when `phi` permutes the blocks.
    pub fn is_invariant_under(&self, phi: &GroupAutomorphism) -> bool {
        self.blocks.iter().all(|b| {
            let target = self.block_of(phi.apply(b[0]));
            self.blocks[target].len() == b.len() && b.iter().all(|&x| self.block_of(phi.apply(x)) == target)
        })
    }

    /// True when `phi` fixes every block setwise.
    pub fn is_fixed_by(&self, phi: &GroupAutomorphism) -> bool {
        (0..self.group.order() as u32).all(|x| self.block_of(phi.apply(x)) == self.block_of(x))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PartitionJson {
            group: self.group.to_string(),
            blocks: self.blocks.clone(),
        })
        .expect("plain data serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({ "group": self.group.to_string(), "blocks": self.blocks })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PartitionJson = serde_json::from_str(text)?;
        let group = Arc::new(AbelianGroup::parse(&raw.group)?);
        Self::from_blocks(&group, raw.blocks)
    }

    /// Canonical key used for deduplication.
    pub fn key(&self) -> String {
        self.to_json()
    }
}

impl PartialEq for SchurPartition {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.blocks == other.blocks
    }
}

impl Eq for SchurPartition {}

impl std::hash::Hash for SchurPartition {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.group.factors().hash(state);
        self.blocks.hash(state);
    }
}

impl fmt::Debug for SchurPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SchurPartition({}, {:?})", self.group, self.blocks)
    }
}

/// Primitive iff the only 𝔄-subgroups are `{e}` and `H`.
pub fn is_primitive(partition: &SchurPartition) -> bool {
    partition.asubgroups().len() <= 2
}

/// Primitive S-rings over a group with a simple prime divisor `q` are
/// trivial: rank at most two, or the group has prime order.
pub fn wielandt_check(partition: &SchurPartition, q: u32) -> Result<bool> {
    let group = partition.group();
    if !group.is_simple_divisor(q) {
        return Err(Error::NotSimpleDivisor {
            prime: q,
            order: group.order(),
        });
    }
    Ok(!is_primitive(partition) || partition.rank() <= 2 || crate::group::is_prime(group.order() as u32))
}
