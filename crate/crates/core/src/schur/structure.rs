use std::collections::HashSet;
use std::sync::Arc;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupAutomorphism, Subgroup};

use super::SchurPartition;

/// `𝔄_U` as an S-ring over an isomorphic copy of `U`.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub partition: SchurPartition,
    /// Rank in the copy of `U` to rank in the ambient group.
    pub embedding: Vec<u32>,
}

/// `𝔄/L` as an S-ring over an isomorphic copy of `H/L`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub partition: SchurPartition,
    /// Rank in the ambient group to rank in the copy of `H/L`.
    pub projection: Vec<u32>,
}

impl SchurPartition {
    /// All subgroups that are unions of blocks, ordered by (order, members).
    pub fn asubgroups(&self) -> Vec<Subgroup> {
        let lattice = self
            .group
            .subgroup_lattice()
            .unwrap_or_else(|_| Arc::new(self.group.all_subgroups(usize::MAX).expect("unbounded")));
        lattice.iter().filter(|s| self.is_aset(s.mask())).cloned().collect()
    }

    pub fn is_asubgroup(&self, sub: &Subgroup) -> bool {
        self.is_aset(sub.mask())
    }

    pub fn restriction(&self, sub: &Subgroup) -> Result<Restriction> {
        if !self.is_asubgroup(sub) {
            return Err(Error::NotASubgroup);
        }
        let (group, embedding) = self.group.subgroup_structure(sub);
        let group = Arc::new(group);
        let mut back = vec![u32::MAX; self.group.order()];
        for (r, &x) in embedding.iter().enumerate() {
            back[x as usize] = r as u32;
        }
        let blocks = self
            .blocks_within(sub.mask())
            .into_iter()
            .map(|i| self.blocks[i].iter().map(|&x| back[x as usize]).collect())
            .collect();
        let partition = SchurPartition::from_blocks(&group, blocks)?;
        Ok(Restriction { partition, embedding })
    }

    pub fn quotient(&self, sub: &Subgroup) -> Result<Quotient> {
        if !self.is_asubgroup(sub) {
            return Err(Error::NotASubgroup);
        }
        let (group, projection) = self.group.quotient_structure(sub);
        let group = Arc::new(group);
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut blocks = Vec::new();
        for block in &self.blocks {
            let mut image: Vec<u32> = block.iter().map(|&x| projection[x as usize]).collect();
            image.sort_unstable();
            image.dedup();
            if seen.insert(image.clone()) {
                blocks.push(image);
            }
        }
        let partition = SchurPartition::from_blocks(&group, blocks)
            .map_err(|e| Error::InvalidPartition(format!("block images do not partition the quotient: {e}")))?;
        Ok(Quotient { partition, projection })
    }
}

/// `{g ∈ H : T + g = T}`.
pub fn radical(group: &AbelianGroup, set: &BitSet) -> Result<Subgroup> {
    let members = set.to_vec();
    let Some(&first) = members.first() else {
        return Err(Error::EmptySet);
    };
    // any stabilizing g maps `first` into the set, so g ∈ set − first
    let stab = members
        .iter()
        .map(|&t| group.sub(t, first))
        .filter(|&g| members.iter().all(|&t| set.contains(group.add(t, g))));
    Ok(group.subgroup_from_mask(BitSet::from_iter(group.order(), stab)))
}

/// Orbit partition of a group of automorphisms.
pub fn cyclotomic(group: &Arc<AbelianGroup>, autos: &[GroupAutomorphism]) -> Result<SchurPartition> {
    let set: HashSet<&[u32]> = autos.iter().map(|a| a.perm()).collect();
    for a in autos {
        for b in autos {
            if !set.contains(a.then(b).perm()) {
                return Err(Error::NotClosed);
            }
        }
    }
    Ok(orbit_partition(group, autos))
}

/// Orbits of the group generated by `autos`, without a closure check.
pub(crate) fn orbit_partition(group: &Arc<AbelianGroup>, autos: &[GroupAutomorphism]) -> SchurPartition {
    let n = group.order();
    let mut labels = vec![u32::MAX; n];
    let mut next = 0;
    for start in 0..n as u32 {
        if labels[start as usize] != u32::MAX {
            continue;
        }
        labels[start as usize] = next;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for a in autos {
                let y = a.apply(x);
                if labels[y as usize] == u32::MAX {
                    labels[y as usize] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    SchurPartition::from_labels(group, &labels)
}

/// `(P₁, Q₁)`: the largest 𝔄-subgroup inside the q-complement and the
/// smallest 𝔄-subgroup containing the order-q subgroup.
pub fn p1_q1(partition: &SchurPartition, q: u32) -> Result<(Subgroup, Subgroup)> {
    let group = partition.group();
    let p = group.q_complement(q)?;
    let qq = group.q_part(q)?;
    let asubs = partition.asubgroups();
    let p1 = asubs
        .iter()
        .filter(|s| s.is_subgroup_of(&p))
        .max_by_key(|s| s.order())
        .expect("trivial subgroup qualifies")
        .clone();
    let mut q1 = group.whole().mask().clone();
    for s in asubs.iter().filter(|s| qq.is_subgroup_of(s)) {
        q1.intersect_with(s.mask());
    }
    Ok((p1, group.subgroup_from_mask(q1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use crate::schur::generated_sring;

    fn wreath_z4() -> SchurPartition {
        let z4 = make_group(&[4]).unwrap();
        SchurPartition::from_blocks(&z4, vec![vec![0], vec![2], vec![1, 3]]).unwrap()
    }

    #[test]
    fn asubgroup_examples() {
        let z8 = make_group(&[2, 2, 2]).unwrap();
        assert_eq!(SchurPartition::discrete(&z8).asubgroups().len(), 16);
        assert_eq!(SchurPartition::rank_two(&z8).asubgroups().len(), 2);
        let w = wreath_z4();
        let orders: Vec<usize> = w.asubgroups().iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 4]);
    }

    #[test]
    fn radical_examples() {
        let h = make_group(&[2, 2, 2, 3]).unwrap();
        let l = h.q_complement(3).unwrap();
        assert_eq!(radical(&h, l.mask()).unwrap(), l);
        let coset = BitSet::from_iter(h.order(), l.members().iter().map(|&x| h.add(x, 1)));
        assert_eq!(radical(&h, &coset).unwrap(), l);
        let z5 = make_group(&[5]).unwrap();
        assert!(radical(&z5, &BitSet::from_iter(5, [1, 2])).unwrap().is_trivial());
        assert!(matches!(radical(&z5, &BitSet::new(5)), Err(Error::EmptySet)));
    }

    #[test]
    fn restriction_and_quotient() {
        let w = wreath_z4();
        let g = w.group().clone();
        let two = g.generated_subgroup(&[2]);
        let r = w.restriction(&two).unwrap();
        assert!(r.partition.is_discrete() && r.partition.group().order() == 2);
        let q = w.quotient(&two).unwrap();
        assert!(q.partition.is_discrete() && q.partition.group().order() == 2);
        assert_eq!(w.restriction(&g.whole()).unwrap().partition.blocks(), w.blocks());
        assert_eq!(w.restriction(&g.trivial_subgroup()).unwrap().partition.rank(), 1);
        assert_eq!(w.quotient(&g.trivial_subgroup()).unwrap().partition.blocks(), w.blocks());
        assert_eq!(w.quotient(&g.whole()).unwrap().partition.group().order(), 1);
        let z5 = make_group(&[5]).unwrap();
        let r2 = SchurPartition::rank_two(&z5);
        let bad = z5.whole();
        assert!(r2.restriction(&bad).is_ok());
        let z6 = make_group(&[6]).unwrap();
        assert!(matches!(
            SchurPartition::rank_two(&z6).restriction(&z6.generated_subgroup(&[2])),
            Err(Error::NotASubgroup)
        ));
    }

    #[test]
    fn cyclotomic_examples() {
        let z5 = make_group(&[5]).unwrap();
        let id = vec![GroupAutomorphism::identity(&z5)];
        assert!(cyclotomic(&z5, &id).unwrap().is_discrete());
        let all = z5.automorphism_group(256).unwrap();
        assert_eq!(cyclotomic(&z5, &all).unwrap(), SchurPartition::rank_two(&z5));
        let pm = vec![z5.unit_action(1).unwrap(), z5.unit_action(-1).unwrap()];
        assert_eq!(cyclotomic(&z5, &pm).unwrap().blocks(), &[vec![0], vec![1, 4], vec![2, 3]]);
        assert!(matches!(cyclotomic(&z5, &[z5.unit_action(2).unwrap()]), Err(Error::NotClosed)));
    }

    #[test]
    fn p1_q1_examples() {
        let h = make_group(&[2, 2, 2, 3]).unwrap();
        let (p1, q1) = p1_q1(&SchurPartition::discrete(&h), 3).unwrap();
        assert_eq!((p1.order(), q1.order()), (8, 3));
        let (p1, q1) = p1_q1(&SchurPartition::rank_two(&h), 3).unwrap();
        assert_eq!((p1.order(), q1.order()), (1, 24));
        let z6 = make_group(&[2, 3]).unwrap();
        let m = z6.m_q(3).unwrap().into_iter().map(|t| z6.unit_action(t as i64).unwrap()).collect::<Vec<_>>();
        let cyc = cyclotomic(&z6, &m).unwrap();
        let (p1, q1) = p1_q1(&cyc, 3).unwrap();
        assert_eq!((p1.order(), q1.order()), (2, 3));
        assert!(p1_q1(&cyc, 2).is_ok());
        assert!(p1_q1(&generated_sring(&h, &[]), 2).is_err());
    }
}
