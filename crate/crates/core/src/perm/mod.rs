//! Permutations and permutation groups on element ranks.
//!
//! Permutations act on the right: `x^(ab) = (x^a)^b`, so `a.then(b)`
//! applies `a` first.

mod group;
mod regular;
mod scheme;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use group::PermGroup;
pub use regular::{
    conjugate_into, regular_representation, regular_subgroups, transitivity_module, translation, DEFAULT_ELEMENT_LIMIT,
};
pub use scheme::{
    aut_partition, aut_scheme, aut_scheme_with_hint, brute_force_automorphisms, scheme, ColorMatrix, DEFAULT_MAX_DEGREE,
};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    /// Wraps an image array; panics if it is not a bijection on `0..len`.
    pub fn from_images(images: Vec<u32>) -> Self {
        assert!(is_bijection(&images), "image array is not a bijection");
        Permutation(images)
    }

    pub fn try_from_images(images: Vec<u32>) -> Option<Self> {
        is_bijection(&images).then_some(Permutation(images))
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Self {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Permutation(inv)
    }

    /// `other^{-1} · self · other`.
    pub fn conjugate_by(&self, other: &Permutation) -> Permutation {
        other.inverse().then(self).then(other)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn fixes(&self, x: u32) -> bool {
        self.0[x as usize] == x
    }

    pub fn first_moved(&self) -> Option<u32> {
        self.0.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i as u32)
    }

    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.0[x as usize];
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted cycle lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    pub fn order(&self) -> u64 {
        use num_integer::Integer;
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    pub fn pow(&self, k: u64) -> Permutation {
        let mut out = Permutation::identity(self.0.len());
        for _ in 0..k {
            out = out.then(self);
        }
        out
    }
}

fn is_bijection(images: &[u32]) -> bool {
    let mut seen = vec![false; images.len()];
    images.iter().all(|&y| {
        let fresh = (y as usize) < images.len() && !seen[y as usize];
        if fresh {
            seen[y as usize] = true;
        }
        fresh
    })
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_action() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]);
        let b = Permutation::from_cycles(3, &[&[1, 2]]);
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).apply(0), 2);
        assert_eq!(a.then(&b).order(), 3);
        assert!(a.then(&a.inverse()).is_identity());
        assert_eq!(a.to_string(), "[1,0,2]");
        assert!(Permutation::try_from_images(vec![0, 0]).is_none());
    }
}
