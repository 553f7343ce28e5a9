use std::collections::HashMap;
use std::sync::Arc;

use crate::group::AbelianGroup;
use crate::ring::product_counts;

use super::SchurPartition;

/// The least S-ring in which every seed set is an 𝔄-set.
///
/// With no seeds this is the rank-two S-ring. The partition starts from the
/// membership pattern of the seeds (with `{e}` isolated) and is refined by
/// inverses, coprime power maps and coefficient classes of all pairwise
/// block products until nothing changes.
pub fn generated_sring(group: &Arc<AbelianGroup>, seeds: &[Vec<u32>]) -> SchurPartition {
    let n = group.order();
    let mut labels: Vec<u32> = vec![0; n];
    let mut sig: Vec<Vec<u32>> = (0..n)
        .map(|x| {
            let mut s = vec![u32::from(x == 0)];
            s.extend(seeds.iter().map(|seed| u32::from(seed.contains(&(x as u32)))));
            s
        })
        .collect();
    relabel(&mut labels, &mut sig);
    refine_to_fixpoint(group, labels)
}

/// Refines a labelling to the coarsest S-ring partition below it.
pub(crate) fn refine_to_fixpoint(group: &Arc<AbelianGroup>, mut labels: Vec<u32>) -> SchurPartition {
    let n = group.order();
    let units: Vec<i64> = group.units().into_iter().map(i64::from).collect();
    let mut count = distinct(&labels);
    loop {
        // inverse and power maps
        let mut sig: Vec<Vec<u32>> = (0..n as u32)
            .map(|x| {
                let mut s = vec![labels[x as usize], labels[group.neg(x) as usize]];
                s.extend(units.iter().map(|&m| labels[group.scale(x, m) as usize]));
                s
            })
            .collect();
        relabel(&mut labels, &mut sig);

        // coefficient classes of block products
        let blocks = blocks_of(&labels);
        let mut sig: Vec<Vec<u32>> = labels.iter().map(|&l| vec![l]).collect();
        for (i, a) in blocks.iter().enumerate() {
            for b in &blocks[i..] {
                let counts = product_counts(group, a, b);
                for (x, s) in sig.iter_mut().enumerate() {
                    s.push(counts[x]);
                }
            }
        }
        relabel(&mut labels, &mut sig);

        let next = distinct(&labels);
        if next == count {
            break;
        }
        count = next;
    }
    SchurPartition::from_labels(group, &labels)
}

fn distinct(labels: &[u32]) -> usize {
    let mut seen = labels.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn blocks_of(labels: &[u32]) -> Vec<Vec<u32>> {
    let k = labels.iter().max().map_or(0, |&m| m as usize + 1);
    let mut blocks = vec![Vec::new(); k];
    for (x, &l) in labels.iter().enumerate() {
        blocks[l as usize].push(x as u32);
    }
    blocks.retain(|b| !b.is_empty());
    blocks
}

/// Replaces labels by dense ids of the signatures, in order of first appearance.
fn relabel(labels: &mut [u32], sig: &mut [Vec<u32>]) {
    let mut ids: HashMap<&[u32], u32> = HashMap::new();
    for (x, s) in sig.iter().enumerate() {
        let next = ids.len() as u32;
        labels[x] = *ids.entry(s.as_slice()).or_insert(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    #[test]
    fn examples() {
        let z5 = make_group(&[5]).unwrap();
        assert_eq!(generated_sring(&z5, &[]), SchurPartition::rank_two(&z5));
        let z8 = make_group(&[8]).unwrap();
        assert!(generated_sring(&z8, &[vec![1]]).is_discrete());
        let p = generated_sring(&z5, &[vec![1, 4]]);
        assert_eq!(p.blocks(), &[vec![0], vec![1, 4], vec![2, 3]]);
    }

    #[test]
    fn idempotent() {
        let h = make_group(&[2, 2, 2, 3]).unwrap();
        let p = generated_sring(&h, &[vec![1, 2, 7], vec![9, 10]]);
        assert!(p.is_valid());
        assert_eq!(generated_sring(&h, p.blocks()), p);
    }
}
