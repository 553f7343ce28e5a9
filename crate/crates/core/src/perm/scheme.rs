//! Color matrices of Cayley schemes and their automorphism groups.
//!
//! Automorphisms are found by one-dimensional color refinement followed by
//! individualize-and-refine backtracking. The first path through the search
//! tree fixes a base; for each base level, deepest first, every point of the
//! target cell not yet known to be in the orbit of the base point is tested
//! by searching its subtree for one leaf equivalent to the first leaf.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::schur::SchurPartition;

use super::{translation, PermGroup, Permutation};

/// Largest degree accepted by [`aut_scheme`].
pub const DEFAULT_MAX_DEGREE: usize = 64;

/// An `n × n` matrix of color ids.
#[derive(Clone, PartialEq, Eq)]
pub struct ColorMatrix {
    n: usize,
    colors: Vec<u32>,
    num_colors: usize,
}

impl ColorMatrix {
    pub fn new(n: usize, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != n * n {
            return Err(Error::InvalidPartition(format!(
                "color matrix needs {} entries, got {}",
                n * n,
                colors.len()
            )));
        }
        let num_colors = colors.iter().max().map_or(0, |&m| m as usize + 1);
        Ok(ColorMatrix { n, colors, num_colors })
    }

    /// `color(g, h) = block_of(h − g)`; the diagonal gets the identity block.
    pub fn from_partition(partition: &SchurPartition) -> Self {
        Self::from_cayley_labels(partition.group(), partition.block_labels())
    }

    /// Colors `(g, h)` by `labels[h − g]`.
    pub fn from_cayley_labels(group: &AbelianGroup, labels: &[u32]) -> Self {
        let n = group.order();
        let mut colors = Vec::with_capacity(n * n);
        for g in 0..n as u32 {
            for h in 0..n as u32 {
                colors.push(labels[group.sub(h, g) as usize]);
            }
        }
        ColorMatrix::new(n, colors).expect("square by construction")
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    #[inline]
    pub fn color(&self, g: u32, h: u32) -> u32 {
        self.colors[g as usize * self.n + h as usize]
    }

    pub fn is_automorphism(&self, f: &Permutation) -> bool {
        f.degree() == self.n
            && (0..self.n as u32).all(|g| (0..self.n as u32).all(|h| self.color(f.apply(g), f.apply(h)) == self.color(g, h)))
    }

    /// `n` rows of space-separated color ids.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in self.colors.chunks(self.n.max(1)) {
            let cells: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

impl std::fmt::Debug for ColorMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ColorMatrix({}x{}, {} colors)", self.n, self.n, self.num_colors)
    }
}

/// The scheme `Cay(H, 𝒯)` of a partition.
pub fn scheme(partition: &SchurPartition) -> ColorMatrix {
    ColorMatrix::from_partition(partition)
}

/// The full color-preserving automorphism group.
pub fn aut_scheme(matrix: &ColorMatrix) -> Result<PermGroup> {
    aut_scheme_with_hint(matrix, &[], DEFAULT_MAX_DEGREE)
}

/// Like [`aut_scheme`], seeded with automorphisms already known (they are
/// checked, and ignored if they are not automorphisms).
pub fn aut_scheme_with_hint(matrix: &ColorMatrix, known: &[Permutation], max_degree: usize) -> Result<PermGroup> {
    if matrix.n > max_degree {
        return Err(Error::size_limit("scheme degree", matrix.n as u128, max_degree as u128));
    }
    if matrix.n == 0 {
        return Ok(PermGroup::trivial(0));
    }
    let search = Search::new(matrix);
    let (gens, base) = search.run(known.iter().filter(|g| matrix.is_automorphism(g)).cloned().collect());
    Ok(PermGroup::with_base(matrix.n, gens, &base))
}

/// Automorphism group of the scheme of a partition over its group, with the
/// translations supplied as known automorphisms.
pub fn aut_partition(partition: &SchurPartition, max_degree: usize) -> Result<PermGroup> {
    let matrix = ColorMatrix::from_partition(partition);
    aut_scheme_with_hint(&matrix, &translations(partition.group()), max_degree)
}

fn translations(group: &Arc<AbelianGroup>) -> Vec<Permutation> {
    group.generators().into_iter().map(|g| translation(group, g)).collect()
}

/// Every automorphism by exhaustive search over all `n!` bijections.
pub fn brute_force_automorphisms(matrix: &ColorMatrix) -> Vec<Permutation> {
    let n = matrix.n;
    let mut out = Vec::new();
    let mut images = vec![u32::MAX; n];
    let mut used = vec![false; n];
    brute_extend(matrix, 0, &mut images, &mut used, &mut out);
    out
}

fn brute_extend(matrix: &ColorMatrix, x: usize, images: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
    let n = matrix.n;
    if x == n {
        out.push(Permutation::from_images(images.clone()));
        return;
    }
    for y in 0..n {
        if used[y] {
            continue;
        }
        images[x] = y as u32;
        // check every pair involving x against already placed points
        let ok = (0..=x).all(|z| {
            matrix.color(y as u32, images[z]) == matrix.color(x as u32, z as u32)
                && matrix.color(images[z], y as u32) == matrix.color(z as u32, x as u32)
        });
        if ok {
            used[y] = true;
            brute_extend(matrix, x + 1, images, used, out);
            used[y] = false;
        }
    }
    images[x] = u32::MAX;
}

/// An ordered partition: `cells[v]` is the cell id of vertex `v`; ids are
/// dense and assigned canonically.
#[derive(Clone)]
struct Node {
    cells: Vec<u32>,
    num_cells: usize,
    trace: u64,
}

impl Node {
    fn is_discrete(&self) -> bool {
        self.num_cells == self.cells.len()
    }

    fn target_cell(&self) -> Option<Vec<u32>> {
        let mut sizes = vec![0usize; self.num_cells];
        for &c in &self.cells {
            sizes[c as usize] += 1;
        }
        let target = sizes.iter().position(|&s| s > 1)?;
        Some(
            self.cells
                .iter()
                .enumerate()
                .filter(|(_, &c)| c as usize == target)
                .map(|(v, _)| v as u32)
                .collect(),
        )
    }

    fn invariant(&self) -> (u64, usize) {
        (self.trace, self.num_cells)
    }
}

struct Search<'a> {
    matrix: &'a ColorMatrix,
}

const MIX: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x.wrapping_mul(MIX)).rotate_left(23).wrapping_mul(0xBF58_476D_1CE4_E5B9)
}

impl<'a> Search<'a> {
    fn new(matrix: &'a ColorMatrix) -> Self {
        Search { matrix }
    }

    fn root(&self) -> Node {
        let n = self.matrix.n;
        let diag: Vec<u32> = (0..n as u32).map(|v| self.matrix.color(v, v)).collect();
        let mut node = Node {
            cells: vec![0; n],
            num_cells: 1,
            trace: 0,
        };
        let keys: Vec<Vec<u64>> = diag.iter().map(|&d| vec![u64::from(d)]).collect();
        self.split(&mut node, &keys);
        self.refine(&mut node);
        node
    }

    /// Splits cells by per-vertex keys, renumbering canonically.
    fn split(&self, node: &mut Node, keys: &[Vec<u64>]) {
        let n = node.cells.len();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by(|&a, &b| {
            (node.cells[a as usize], &keys[a as usize]).cmp(&(node.cells[b as usize], &keys[b as usize]))
        });
        let mut cells = vec![0u32; n];
        let mut id = 0u32;
        let mut trace = node.trace;
        for (i, &v) in order.iter().enumerate() {
            if i > 0 {
                let prev = order[i - 1];
                if (node.cells[prev as usize], &keys[prev as usize]) != (node.cells[v as usize], &keys[v as usize]) {
                    id += 1;
                    trace = mix(trace, u64::from(id) << 32 | i as u64);
                    for &k in &keys[prev as usize] {
                        trace = mix(trace, k);
                    }
                }
            }
            cells[v as usize] = id;
        }
        node.cells = cells;
        node.num_cells = id as usize + 1;
        node.trace = mix(trace, node.num_cells as u64);
    }

    fn refine(&self, node: &mut Node) {
        let n = node.cells.len();
        loop {
            let before = node.num_cells;
            if node.is_discrete() {
                return;
            }
            let keys: Vec<Vec<u64>> = (0..n as u32)
                .map(|v| {
                    let mut sig: Vec<u64> = (0..n as u32)
                        .map(|w| {
                            u64::from(node.cells[w as usize]) << 42
                                | u64::from(self.matrix.color(v, w)) << 21
                                | u64::from(self.matrix.color(w, v))
                        })
                        .collect();
                    sig.sort_unstable();
                    sig
                })
                .collect();
            self.split(node, &keys);
            if node.num_cells == before {
                return;
            }
        }
    }

    fn individualize(&self, node: &Node, v: u32) -> Node {
        let mut child = node.clone();
        let keys: Vec<Vec<u64>> = (0..node.cells.len() as u32).map(|w| vec![u64::from(w != v)]).collect();
        self.split(&mut child, &keys);
        self.refine(&mut child);
        child
    }

    fn run(&self, mut gens: Vec<Permutation>) -> (Vec<Permutation>, Vec<u32>) {
        let n = self.matrix.n;
        // first path
        let mut path = vec![self.root()];
        let mut base = Vec::new();
        let mut targets = Vec::new();
        while let Some(cell) = path.last().expect("root").target_cell() {
            let v = cell[0];
            base.push(v);
            targets.push(cell);
            let child = self.individualize(path.last().expect("node"), v);
            path.push(child);
        }
        let leaf = path.last().expect("leaf");
        let mut first_leaf = vec![0u32; n];
        for (v, &c) in leaf.cells.iter().enumerate() {
            first_leaf[c as usize] = v as u32;
        }

        for level in (0..base.len()).rev() {
            let fixes_prefix = |g: &Permutation| base[..level].iter().all(|&b| g.fixes(b));
            let mut failed = vec![false; n];
            for &w in &targets[level] {
                if w == base[level] || failed[w as usize] {
                    continue;
                }
                let level_gens: Vec<Permutation> = gens.iter().filter(|g| fixes_prefix(g)).cloned().collect();
                let orbit = super::group::orbit_under(n, &level_gens, base[level]);
                if orbit.contains(&w) {
                    continue;
                }
                let child = self.individualize(&path[level], w);
                let found = if child.invariant() == path[level + 1].invariant() {
                    self.find_leaf(&child, level + 1, &path, &first_leaf)
                } else {
                    None
                };
                match found {
                    Some(g) => gens.push(g),
                    None => {
                        for x in super::group::orbit_under(n, &level_gens, w) {
                            failed[x as usize] = true;
                        }
                    }
                }
            }
        }
        (gens, base)
    }

    /// Depth-first search below `node` for a leaf giving an automorphism.
    fn find_leaf(&self, node: &Node, depth: usize, path: &[Node], first_leaf: &[u32]) -> Option<Permutation> {
        if node.is_discrete() {
            let mut images = vec![0u32; node.cells.len()];
            for (v, &c) in node.cells.iter().enumerate() {
                images[first_leaf[c as usize] as usize] = v as u32;
            }
            let g = Permutation::from_images(images);
            return self.matrix.is_automorphism(&g).then_some(g);
        }
        if depth + 1 >= path.len() {
            return None;
        }
        let cell = node.target_cell()?;
        for w in cell {
            let child = self.individualize(node, w);
            if child.invariant() != path[depth + 1].invariant() {
                continue;
            }
            if let Some(g) = self.find_leaf(&child, depth + 1, path, first_leaf) {
                return Some(g);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use num_bigint::BigUint;

    #[test]
    fn examples() {
        let z4 = make_group(&[4]).unwrap();
        let d = SchurPartition::discrete(&z4);
        assert_eq!(aut_scheme(&scheme(&d)).unwrap().order(), BigUint::from(4u32));
        let r2 = SchurPartition::rank_two(&z4);
        assert_eq!(aut_scheme(&scheme(&r2)).unwrap().order(), BigUint::from(24u32));
        let w = SchurPartition::from_blocks(&z4, vec![vec![0], vec![2], vec![1, 3]]).unwrap();
        let m = scheme(&w);
        assert_eq!(m.dump(), "0 2 1 2\n2 0 2 1\n1 2 0 2\n2 1 2 0\n");
        assert_eq!(aut_scheme(&m).unwrap().order(), BigUint::from(8u32));
        assert_eq!(brute_force_automorphisms(&m).len(), 8);
    }

    #[test]
    fn large_symmetric() {
        let h = make_group(&[3, 3, 3, 2]).unwrap();
        let g = aut_partition(&SchurPartition::rank_two(&h), 64).unwrap();
        let factorial: BigUint = (1..=54u32).map(BigUint::from).product();
        assert_eq!(g.order(), factorial);
    }

    #[test]
    fn degree_bound() {
        let h = make_group(&[5, 13]).unwrap();
        assert!(matches!(
            aut_partition(&SchurPartition::rank_two(&h), 64),
            Err(Error::SizeLimit { .. })
        ));
    }
}
