//! Brute-force oracles shared by the integration tests. None of them call
//! into the search code they are compared against; they only use the group
//! arithmetic of `AbelianGroup`.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use schurci::bits::BitSet;
use schurci::group::{make_group, AbelianGroup};
use schurci::schur::SchurPartition;

/// Every abelian group of order at most 8, by invariant factors.
pub fn small_groups() -> Vec<Arc<AbelianGroup>> {
    [
        vec![2],
        vec![3],
        vec![4],
        vec![2, 2],
        vec![5],
        vec![6],
        vec![7],
        vec![8],
        vec![2, 4],
        vec![2, 2, 2],
    ]
    .iter()
    .map(|f| make_group(f).unwrap())
    .collect()
}

/// All set partitions of `items`, via restricted growth strings.
pub fn set_partitions(items: &[u32]) -> Vec<Vec<Vec<u32>>> {
    fn go(items: &[u32], i: usize, blocks: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if i == items.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(items[i]);
            go(items, i + 1, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![items[i]]);
        go(items, i + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(items, 0, &mut Vec::new(), &mut out);
    out
}

/// S-ring axioms checked straight from the definition: `{e}` is a block,
/// blocks are inverse-closed as a family, and the number of ways to write
/// `z = x + y` with `x ∈ A`, `y ∈ B` depends only on the block of `z`.
pub fn is_sring(group: &AbelianGroup, blocks: &[Vec<u32>]) -> bool {
    let n = group.order();
    let mut label = vec![usize::MAX; n];
    for (i, b) in blocks.iter().enumerate() {
        for &x in b {
            label[x as usize] = i;
        }
    }
    if blocks.iter().all(|b| b != &vec![0]) {
        return false;
    }
    for b in blocks {
        let inv: BTreeSet<u32> = b.iter().map(|&x| group.neg(x)).collect();
        let target = label[group.neg(b[0]) as usize];
        let other: BTreeSet<u32> = blocks[target].iter().copied().collect();
        if inv != other {
            return false;
        }
    }
    for a in blocks {
        for b in blocks {
            let mut count = vec![0u32; n];
            for &x in a {
                for &y in b {
                    count[group.add(x, y) as usize] += 1;
                }
            }
            for c in blocks {
                if c.iter().any(|&z| count[z as usize] != count[c[0] as usize]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every S-ring over a group of order at most 8, by brute force over set
/// partitions of the non-identity elements.
pub fn brute_srings(group: &AbelianGroup) -> Vec<Vec<Vec<u32>>> {
    let rest: Vec<u32> = (1..group.order() as u32).collect();
    set_partitions(&rest)
        .into_iter()
        .map(|mut p| {
            p.push(vec![0]);
            p
        })
        .filter(|p| is_sring(group, p))
        .map(|mut p| {
            for b in &mut p {
                b.sort_unstable();
            }
            p.sort();
            p
        })
        .collect()
}

/// Sorted blocks, for comparing partitions regardless of block order.
pub fn sorted_blocks(p: &SchurPartition) -> Vec<Vec<u32>> {
    let mut b = p.blocks().to_vec();
    b.sort();
    b
}

/// Permutations of `0..n` preserving `color(x, y)`, by exhaustive search
/// (a partial map is abandoned as soon as one pair is violated).
pub fn brute_automorphisms(n: usize, color: &dyn Fn(u32, u32) -> u32) -> BTreeSet<Vec<u32>> {
    fn go(n: usize, color: &dyn Fn(u32, u32) -> u32, f: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut BTreeSet<Vec<u32>>) {
        let x = f.len() as u32;
        if x as usize == n {
            out.insert(f.clone());
            return;
        }
        for y in 0..n as u32 {
            if used[y as usize] {
                continue;
            }
            let ok = (0..x).all(|z| {
                let fz = f[z as usize];
                color(x, z) == color(y, fz) && color(z, x) == color(fz, y)
            }) && color(x, x) == color(y, y);
            if ok {
                f.push(y);
                used[y as usize] = true;
                go(n, color, f, used, out);
                used[y as usize] = false;
                f.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(n, color, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Normalized bijections `f` (`f(0) = 0`) for which the color of `(x, y)`
/// in `a`, namely the block of `y − x`, determines and is determined by the
/// color of `(f(x), f(y))` in `b`. Scans all `(n − 1)!` bijections.
pub fn brute_iso1(group: &AbelianGroup, a: &[u32], b: &[u32]) -> BTreeSet<Vec<u32>> {
    let n = group.order();
    let mut out = BTreeSet::new();
    let mut rest: Vec<u32> = (1..n as u32).collect();
    permute(&mut rest, 0, &mut |perm| {
        let mut f = vec![0u32];
        f.extend_from_slice(perm);
        let mut fwd: Vec<Option<u32>> = vec![None; n];
        let mut back: Vec<Option<u32>> = vec![None; n];
        for x in 0..n as u32 {
            for y in 0..n as u32 {
                let ca = a[group.sub(y, x) as usize];
                let cb = b[group.sub(f[y as usize], f[x as usize]) as usize];
                if *fwd[ca as usize].get_or_insert(cb) != cb || *back[cb as usize].get_or_insert(ca) != ca {
                    return;
                }
            }
        }
        out.insert(f);
    });
    out
}

/// Calls `visit` on every permutation of `items[k..]` (Heap-free swap recursion).
pub fn permute(items: &mut [u32], k: usize, visit: &mut dyn FnMut(&[u32])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// All permutations of `0..n` as image vectors.
pub fn symmetric_group(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut items: Vec<u32> = (0..n as u32).collect();
    permute(&mut items, 0, &mut |p| out.push(p.to_vec()));
    out
}

pub fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| b[x as usize]).collect()
}

/// Closure of a set of permutations under composition.
pub fn generate(n: usize, gens: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
    let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
    set.insert((0..n as u32).collect());
    let mut frontier: Vec<Vec<u32>> = set.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(&x, g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Regular subgroups of `Sym(n)` of order `n`, found by closing every pair
/// of elements and keeping the transitive closures of order `n`.
pub fn brute_regular_subgroups(n: usize) -> Vec<BTreeSet<Vec<u32>>> {
    let all = symmetric_group(n);
    let mut found: BTreeSet<BTreeSet<Vec<u32>>> = BTreeSet::new();
    for a in &all {
        for b in &all {
            let g = generate(n, &[a.clone(), b.clone()]);
            if g.len() != n {
                continue;
            }
            let orbit: BTreeSet<u32> = g.iter().map(|p| p[0]).collect();
            if orbit.len() == n {
                found.insert(g);
            }
        }
    }
    found.into_iter().collect()
}

/// Order of a permutation given by images.
pub fn perm_order(p: &[u32]) -> usize {
    let id: Vec<u32> = (0..p.len() as u32).collect();
    let mut x = p.to_vec();
    let mut k = 1;
    while x != id {
        x = compose(&x, p);
        k += 1;
    }
    k
}

/// Number of subgroups of the cyclic group of order `m` (its divisors).
pub fn divisor_count(m: u32) -> usize {
    (1..=m).filter(|d| m % d == 0).count()
}

/// `Iso₁(𝔄, *)` by brute force: normalized bijections carrying every basic
/// graph onto some Cayley graph over the group.
pub fn brute_iso1_star(p: &SchurPartition) -> BTreeSet<Vec<u32>> {
    let group = p.group();
    let n = group.order();
    let labels = p.block_labels();
    let mut out = BTreeSet::new();
    let mut rest: Vec<u32> = (1..n as u32).collect();
    permute(&mut rest, 0, &mut |perm| {
        let mut f = vec![0u32];
        f.extend_from_slice(perm);
        let mut inv = vec![0u32; n];
        for (x, &y) in f.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        // the image coloring (u, v) ↦ block(f⁻¹v − f⁻¹u) must be translation invariant
        let mut diff = vec![u32::MAX; n];
        for u in 0..n as u32 {
            for v in 0..n as u32 {
                let c = labels[group.sub(inv[v as usize], inv[u as usize]) as usize];
                let d = group.sub(v, u) as usize;
                if diff[d] == u32::MAX {
                    diff[d] = c;
                } else if diff[d] != c {
                    return;
                }
            }
        }
        out.insert(f);
    });
    out
}

pub fn brute_radical(group: &Arc<AbelianGroup>, set: &BitSet) -> Vec<u32> {
    group
        .elements()
        .filter(|&g| set.iter().all(|x| set.contains(group.add(x, g))))
        .collect()
}
