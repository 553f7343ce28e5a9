//! Stabilizer chains by the deterministic Schreier–Sims algorithm.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::Permutation;

#[derive(Clone)]
struct Level {
    point: u32,
    /// Strong generators fixing all earlier base points.
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    /// `transversal[x]` maps `point` to `x`.
    transversal: Vec<Option<Permutation>>,
    /// Schreier pairs (orbit position, generator index) already sifted.
    checked: HashSet<(u32, u32)>,
}

impl Level {
    fn new(point: u32, n: usize) -> Self {
        let mut transversal = vec![None; n];
        transversal[point as usize] = Some(Permutation::identity(n));
        Level {
            point,
            gens: Vec::new(),
            orbit: vec![point],
            transversal,
            checked: HashSet::new(),
        }
    }

    fn add_generator(&mut self, g: Permutation) {
        self.gens.push(g);
        // extend the orbit without touching existing transversal elements
        let mut i = 0;
        let mut frontier: Vec<u32> = self.orbit.clone();
        while i < frontier.len() {
            let x = frontier[i];
            i += 1;
            for s in &self.gens {
                let y = s.apply(x);
                if self.transversal[y as usize].is_none() {
                    let t = self.transversal[x as usize].as_ref().expect("orbit point").then(s);
                    self.transversal[y as usize] = Some(t);
                    self.orbit.push(y);
                    frontier.push(y);
                }
            }
        }
    }
}

/// A permutation group given by generators, with a stabilizer chain.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Self {
        Self::build(degree, generators, &[], None)
    }

    /// Builds the chain with the given points first in the base.
    pub fn with_base(degree: usize, generators: Vec<Permutation>, base: &[u32]) -> Self {
        Self::build(degree, generators, base, None)
    }

    /// Builds the chain for a group of known order by sifting seeded random
    /// products of the generators; the chain is complete once the basic
    /// orbits multiply to `order`.
    pub fn with_known_order(degree: usize, generators: Vec<Permutation>, base: &[u32], order: &BigUint) -> Self {
        let generators: Vec<Permutation> = generators.into_iter().filter(|g| !g.is_identity()).collect();
        let mut group = PermGroup {
            degree,
            generators: generators.clone(),
            levels: base.iter().map(|&b| Level::new(b, degree)).collect(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut pool = generators.clone();
        let mut acc = Permutation::identity(degree);
        let mut misses = 0;
        let mut candidates = generators.clone().into_iter();
        while !group.reached(Some(order)) {
            let g = match candidates.next() {
                Some(g) => g,
                None if pool.is_empty() => break,
                None => {
                    // product replacement with an accumulator
                    let i = rng.gen_range(0..pool.len());
                    let j = rng.gen_range(0..pool.len());
                    if i != j {
                        pool[i] = pool[i].then(&pool[j]);
                    }
                    acc = acc.then(&pool[i]);
                    acc.clone()
                }
            };
            let (residue, depth) = group.sift_from(&g, 0);
            if residue.is_identity() {
                misses += 1;
                if misses > 200 {
                    return Self::build(degree, generators, base, Some(order));
                }
                continue;
            }
            misses = 0;
            if depth == group.levels.len() {
                let point = residue.first_moved().expect("non-identity residue");
                group.levels.push(Level::new(point, degree));
            }
            for level in &mut group.levels[..=depth] {
                level.add_generator(residue.clone());
            }
        }
        group.drop_redundant_tail();
        group
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new())
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[&[0, 1]]));
            let cycle: Vec<u32> = (0..degree as u32).collect();
            gens.push(Permutation::from_cycles(degree, &[&cycle]));
        }
        Self::new(degree, gens)
    }

    fn build(degree: usize, generators: Vec<Permutation>, base: &[u32], order: Option<&BigUint>) -> Self {
        for g in &generators {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
        }
        let generators: Vec<Permutation> = generators.into_iter().filter(|g| !g.is_identity()).collect();
        let mut group = PermGroup {
            degree,
            generators: generators.clone(),
            levels: base.iter().map(|&b| Level::new(b, degree)).collect(),
        };
        for g in generators {
            if group.reached(order) {
                break;
            }
            if group.contains(&g) {
                continue;
            }
            let (residue, depth) = group.sift_from(&g, 0);
            group.insert(residue, depth, order);
        }
        group.drop_redundant_tail();
        group
    }

    fn reached(&self, order: Option<&BigUint>) -> bool {
        order.is_some_and(|o| self.order() == *o)
    }

    /// Adds a non-sifting element at `depth` and restores the chain.
    fn insert(&mut self, residue: Permutation, depth: usize, order: Option<&BigUint>) {
        let mut pending = vec![(residue, depth)];
        while let Some((y, j)) = pending.pop() {
            if self.reached(order) {
                return;
            }
            if j == self.levels.len() {
                let point = y.first_moved().expect("non-identity residue");
                self.levels.push(Level::new(point, self.degree));
            }
            for level in &mut self.levels[..=j] {
                level.add_generator(y.clone());
            }
            // re-examine Schreier generators from the deepest touched level upwards
            let mut i = j as isize;
            while i >= 0 {
                if self.reached(order) {
                    return;
                }
                match self.unchecked_schreier(i as usize) {
                    Some((h, depth)) => {
                        pending.push((h, depth));
                        break;
                    }
                    None => i -= 1,
                }
            }
        }
    }

    /// Finds a Schreier generator at `level` that does not sift through the
    /// levels below; returns its residue and the depth where sifting stopped.
    fn unchecked_schreier(&mut self, level: usize) -> Option<(Permutation, usize)> {
        let orbit_len = self.levels[level].orbit.len();
        let gen_len = self.levels[level].gens.len();
        for oi in 0..orbit_len {
            for si in 0..gen_len {
                if !self.levels[level].checked.insert((oi as u32, si as u32)) {
                    continue;
                }
                let lv = &self.levels[level];
                let x = lv.orbit[oi];
                let s = &lv.gens[si];
                let y = s.apply(x);
                let ux = lv.transversal[x as usize].as_ref().expect("orbit point");
                let uy = lv.transversal[y as usize].as_ref().expect("orbit point");
                let h = ux.then(s).then(&uy.inverse());
                if h.is_identity() {
                    continue;
                }
                let (residue, depth) = self.sift_from(&h, level + 1);
                if !residue.is_identity() {
                    return Some((residue, depth));
                }
            }
        }
        None
    }

    fn sift_from(&self, g: &Permutation, start: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let b = h.apply(level.point);
            match &level.transversal[b as usize] {
                Some(t) => h = h.then(&t.inverse()),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    fn drop_redundant_tail(&mut self) {
        while self.levels.last().is_some_and(|l| l.orbit.len() == 1 && l.gens.is_empty()) {
            self.levels.pop();
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Generators of the whole chain (the first level's strong generators).
    pub fn strong_generators(&self) -> Vec<Permutation> {
        self.levels.first().map(|l| l.gens.clone()).unwrap_or_default()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn order_u128(&self) -> Option<u128> {
        self.order().to_u128()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && {
            let (residue, depth) = self.sift_from(g, 0);
            depth == self.levels.len() && residue.is_identity()
        }
    }

    pub fn orbit(&self, point: u32) -> Vec<u32> {
        orbit_under(self.degree, &self.strong_generators(), point)
    }

    /// Orbit id per point, ids in order of smallest member.
    pub fn orbit_labels(&self) -> Vec<u32> {
        orbit_labels(self.degree, &self.strong_generators())
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    /// Transitive with order equal to the degree.
    pub fn is_regular(&self) -> bool {
        self.is_transitive() && self.order() == BigUint::from(self.degree)
    }

    /// The stabilizer of a point, with its own chain.
    pub fn stabilizer(&self, point: u32) -> PermGroup {
        if self.levels.first().is_some_and(|l| l.point == point) {
            return self.tail(1);
        }
        if self.fixes_everywhere(point) {
            return self.clone();
        }
        // Stab(b^u) = u⁻¹ Stab(b) u for b the first base point
        if let Some(u) = self.levels.first().and_then(|l| l.transversal[point as usize].as_ref()) {
            return self.tail(1).conjugated(u);
        }
        let mut base = vec![point];
        base.extend(self.base().into_iter().filter(|&b| b != point));
        let rebased = PermGroup::with_known_order(self.degree, self.strong_generators(), &base, &self.order());
        rebased.tail(1)
    }

    fn fixes_everywhere(&self, point: u32) -> bool {
        self.strong_generators().iter().all(|g| g.fixes(point))
    }

    /// Pointwise stabilizer of a sequence of points.
    pub fn pointwise_stabilizer(&self, points: &[u32]) -> PermGroup {
        points.iter().fold(self.clone(), |g, &p| g.stabilizer(p))
    }

    /// The chain of `u⁻¹ G u`, with base points moved by `u`.
    fn conjugated(&self, u: &Permutation) -> PermGroup {
        let inv = u.inverse();
        let conj = |g: &Permutation| inv.then(g).then(u);
        let levels = self
            .levels
            .iter()
            .map(|l| {
                let mut transversal = vec![None; self.degree];
                for (x, t) in l.transversal.iter().enumerate() {
                    if let Some(t) = t {
                        transversal[u.apply(x as u32) as usize] = Some(conj(t));
                    }
                }
                Level {
                    point: u.apply(l.point),
                    gens: l.gens.iter().map(conj).collect(),
                    orbit: l.orbit.iter().map(|&x| u.apply(x)).collect(),
                    transversal,
                    checked: l.checked.clone(),
                }
            })
            .collect::<Vec<_>>();
        let generators = levels.first().map(|l| l.gens.clone()).unwrap_or_default();
        PermGroup {
            degree: self.degree,
            generators,
            levels,
        }
    }

    fn tail(&self, from: usize) -> PermGroup {
        let levels: Vec<Level> = self.levels[from..].to_vec();
        let generators = levels.first().map(|l| l.gens.clone()).unwrap_or_default();
        PermGroup {
            degree: self.degree,
            generators,
            levels,
        }
    }

    /// Every element, in chain order. Fails above `limit` elements.
    pub fn elements(&self, limit: usize) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > BigUint::from(limit) {
            return Err(Error::size_limit(
                "group order",
                order.to_u128().unwrap_or(u128::MAX),
                limit as u128,
            ));
        }
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let reps: Vec<&Permutation> = level
                .orbit
                .iter()
                .map(|&x| level.transversal[x as usize].as_ref().expect("orbit point"))
                .collect();
            let mut next = Vec::with_capacity(out.len() * reps.len());
            for g in &out {
                for t in &reps {
                    next.push(g.then(t));
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// A transversal element mapping the first base point to `x`, if any.
    pub fn transversal_element(&self, x: u32) -> Option<Permutation> {
        self.levels.first().and_then(|l| l.transversal[x as usize].clone())
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.strong_generators().iter().all(|g| other.contains(g))
    }

    /// `g^{-1} X g`.
    pub fn conjugate(&self, g: &Permutation) -> PermGroup {
        let gens = self.strong_generators().iter().map(|s| s.conjugate_by(g)).collect();
        let base: Vec<u32> = self.base().iter().map(|&b| g.apply(b)).collect();
        PermGroup::with_known_order(self.degree, gens, &base, &self.order())
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(degree {}, order {})", self.degree, self.order())
    }
}

pub(crate) fn orbit_under(n: usize, gens: &[Permutation], point: u32) -> Vec<u32> {
    let mut seen = vec![false; n];
    seen[point as usize] = true;
    let mut orbit = vec![point];
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i];
        i += 1;
        for g in gens {
            let y = g.apply(x);
            if !seen[y as usize] {
                seen[y as usize] = true;
                orbit.push(y);
            }
        }
    }
    orbit
}

pub(crate) fn orbit_labels(n: usize, gens: &[Permutation]) -> Vec<u32> {
    let mut labels = vec![u32::MAX; n];
    let mut next = 0;
    for start in 0..n as u32 {
        if labels[start as usize] != u32::MAX {
            continue;
        }
        for x in orbit_under(n, gens, start) {
            labels[x as usize] = next;
        }
        next += 1;
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_orders() {
        for n in 1..=8usize {
            let factorial: u64 = (1..=n as u64).product();
            assert_eq!(PermGroup::symmetric(n).order(), BigUint::from(factorial));
        }
        assert_eq!(
            PermGroup::symmetric(30).order().to_string(),
            "265252859812191058636308480000000"
        );
    }

    #[test]
    fn membership() {
        // dihedral group of the square
        let r = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]);
        let s = Permutation::from_cycles(4, &[&[1, 3]]);
        let d4 = PermGroup::new(4, vec![r, s]);
        assert_eq!(d4.order(), BigUint::from(8u32));
        assert!(d4.contains(&Permutation::from_cycles(4, &[&[0, 2]])));
        assert!(!d4.contains(&Permutation::from_cycles(4, &[&[0, 1]])));
        assert_eq!(d4.elements(100).unwrap().len(), 8);
        let stab = d4.stabilizer(1);
        assert_eq!(stab.order(), BigUint::from(2u32));
        assert!(stab.contains(&Permutation::from_cycles(4, &[&[0, 2]])));
    }

    #[test]
    fn stabilizers_of_symmetric() {
        let s6 = PermGroup::symmetric(6);
        let st = s6.pointwise_stabilizer(&[3, 5]);
        assert_eq!(st.order(), BigUint::from(24u32));
        assert_eq!(st.orbit(0).len(), 4);
        assert_eq!(st.orbit(3), vec![3]);
    }
}
