//! Finite abelian groups given as direct products of cyclic groups.
//!
//! Elements are addressed by their mixed-radix rank over the factor list,
//! with the last factor varying fastest. The group operation is written
//! additively throughout the crate: `h^m` in multiplicative notation is
//! [`AbelianGroup::scale`] here, and `gh^{-1}` is [`AbelianGroup::sub`].

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Default bound on the group order for subgroup-lattice and
/// automorphism enumeration.
pub const DEFAULT_MAX_ORDER: usize = 256;

/// Automorphism enumeration gives up past this many automorphisms.
pub const MAX_AUTOMORPHISMS: usize = 2_000_000;

const TABLE_LIMIT: usize = 1024;

pub struct AbelianGroup {
    factors: Vec<u32>,
    order: usize,
    exponent: u32,
    strides: Vec<usize>,
    add_table: Option<Vec<u32>>,
    neg: Vec<u32>,
    orders: Vec<u32>,
    automorphisms: OnceLock<Arc<Vec<GroupAutomorphism>>>,
    subgroups: OnceLock<Arc<Vec<Subgroup>>>,
}

/// Shared handle; groups are immutable once built.
pub type Group = Arc<AbelianGroup>;

impl AbelianGroup {
    pub fn new(factors: &[u32]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpec("empty factor list".into()));
        }
        if let Some(&bad) = factors.iter().find(|&&f| f < 2) {
            return Err(Error::InvalidSpec(format!("factor {bad} is smaller than 2")));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &f| acc.checked_mul(f as usize))
            .filter(|&n| n <= u32::MAX as usize)
            .ok_or_else(|| Error::InvalidSpec("group order overflows".into()))?;
        let exponent = factors.iter().fold(1u32, |acc, &f| acc.lcm(&f));
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1] as usize;
        }

        let mut group = AbelianGroup {
            factors: factors.to_vec(),
            order,
            exponent,
            strides,
            add_table: None,
            neg: Vec::new(),
            orders: Vec::new(),
            automorphisms: OnceLock::new(),
            subgroups: OnceLock::new(),
        };
        group.neg = (0..order as u32).map(|x| group.neg_slow(x)).collect();
        group.orders = (0..order as u32).map(|x| group.order_slow(x)).collect();
        if order <= TABLE_LIMIT {
            let mut table = vec![0u32; order * order];
            for a in 0..order as u32 {
                for b in 0..order as u32 {
                    table[a as usize * order + b as usize] = group.add_slow(a, b);
                }
            }
            group.add_table = Some(table);
        }
        Ok(group)
    }

    /// Parses `Z<k>(^<e>)?(x Z<k>(^<e>)?)*`, case-insensitive, whitespace ignored.
    pub fn parse(spec: &str) -> Result<Self> {
        let cleaned: String = spec
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase();
        if cleaned.is_empty() {
            return Err(Error::InvalidSpec("empty group spec".into()));
        }
        let mut factors = Vec::new();
        for part in cleaned.split('x') {
            let body = part
                .strip_prefix('z')
                .ok_or_else(|| Error::InvalidSpec(format!("expected 'Z' in {part:?}")))?;
            let (base, power) = match body.split_once('^') {
                Some((b, e)) => (b, e),
                None => (body, "1"),
            };
            let base: u32 = base
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad cyclic order {base:?}")))?;
            let power: u32 = power
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad power {power:?}")))?;
            if power == 0 {
                return Err(Error::InvalidSpec("power must be positive".into()));
            }
            factors.extend(std::iter::repeat(base).take(power as usize));
        }
        AbelianGroup::new(&factors)
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.order as u32
    }

    pub fn exponents(&self, rank: u32) -> Vec<u32> {
        let rank = rank as usize;
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&f, &s)| ((rank / s) % f as usize) as u32)
            .collect()
    }

    pub fn rank_of(&self, exponents: &[u32]) -> Result<u32> {
        if exponents.len() != self.factors.len() {
            return Err(Error::InvalidSpec(format!(
                "expected {} exponents, got {}",
                self.factors.len(),
                exponents.len()
            )));
        }
        let mut rank = 0usize;
        for ((&e, &f), &s) in exponents.iter().zip(&self.factors).zip(&self.strides) {
            if e >= f {
                return Err(Error::InvalidSpec(format!("exponent {e} out of range for Z{f}")));
            }
            rank += e as usize * s;
        }
        Ok(rank as u32)
    }

    pub fn element(&self, rank: u32) -> Element {
        Element {
            exponents: self.exponents(rank),
            rank,
        }
    }

    /// Rank of the i-th canonical generator (unit vector).
    pub fn generators(&self) -> Vec<u32> {
        self.strides.iter().map(|&s| s as u32).collect()
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[a as usize * self.order + b as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// `m·a`, i.e. the power `a^m` in multiplicative notation; `m` may be negative.
    pub fn scale(&self, a: u32, m: i64) -> u32 {
        let mut out = Vec::with_capacity(self.factors.len());
        for (e, &f) in self.exponents(a).into_iter().zip(&self.factors) {
            out.push((e as i64 * m).rem_euclid(f as i64) as u32);
        }
        self.rank_of(&out).expect("reduced exponents are in range")
    }

    #[inline]
    pub fn element_order(&self, a: u32) -> u32 {
        self.orders[a as usize]
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (a, b) = (a as usize, b as usize);
        let mut rank = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let f = f as usize;
            rank += (((a / s) % f + (b / s) % f) % f) * s;
        }
        rank as u32
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let a = a as usize;
        let mut rank = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let f = f as usize;
            rank += ((f - (a / s) % f) % f) * s;
        }
        rank as u32
    }

    fn order_slow(&self, a: u32) -> u32 {
        self.exponents(a)
            .iter()
            .zip(&self.factors)
            .fold(1u32, |acc, (&e, &f)| acc.lcm(&(f / e.gcd(&f))))
    }

    pub fn is_simple_divisor(&self, q: u32) -> bool {
        let n = self.order as u64;
        let q = q as u64;
        q >= 2 && is_prime(q as u32) && n % q == 0 && (n / q) % q != 0
    }

    fn check_simple(&self, q: u32) -> Result<()> {
        if self.is_simple_divisor(q) {
            Ok(())
        } else {
            Err(Error::NotSimpleDivisor {
                prime: q,
                order: self.order,
            })
        }
    }

    /// A multiplier `m` with `m·h = h_{q'}` for every `h`: `m = q·q*`, where
    /// `q*` inverts `q` modulo the exponent of the q'-part.
    fn q_projector(&self, q: u32) -> u64 {
        let e = (self.exponent / q) as i64;
        let q_star = if e == 1 {
            1
        } else {
            mod_inverse(q as i64 % e, e).expect("q coprime to the q'-exponent")
        };
        // Lift q* to a residue modulo e·q that is 1 modulo q.
        let lifted = crt(q_star, e, 1, q as i64);
        (q as u64 * lifted as u64) % self.exponent as u64
    }

    /// Splits `h = h_{q'} + h_q` with `h_{q'}` in the q-complement and `h_q`
    /// in the order-q subgroup.
    pub fn decompose_q(&self, h: u32, q: u32) -> Result<(u32, u32)> {
        self.check_simple(q)?;
        let m = self.q_projector(q);
        let hq_prime = self.scale(h, m as i64);
        Ok((hq_prime, self.sub(h, hq_prime)))
    }

    /// Units modulo the exponent, ascending.
    pub fn units(&self) -> Vec<u32> {
        (1..=self.exponent.max(2))
            .filter(|t| *t < self.exponent.max(2) && t.gcd(&self.exponent) == 1)
            .collect()
    }

    /// `M_q`: units `t` modulo the exponent with `t ≡ 1` modulo the exponent of the q'-part.
    pub fn m_q(&self, q: u32) -> Result<Vec<u32>> {
        self.check_simple(q)?;
        let e = self.exponent / q;
        Ok(self
            .units()
            .into_iter()
            .filter(|t| t % e == 1 % e)
            .collect())
    }

    /// `h ↦ t·h` as a group automorphism.
    pub fn unit_action(&self, t: i64) -> Result<GroupAutomorphism> {
        if (t.rem_euclid(self.exponent as i64) as u32).gcd(&self.exponent) != 1 {
            return Err(Error::NonUnit {
                unit: t,
                exponent: self.exponent,
            });
        }
        let perm: Vec<u32> = self.elements().map(|h| self.scale(h, t)).collect();
        Ok(GroupAutomorphism::from_perm(self, perm))
    }

    /// The unique subgroup of order `|H|/q` (the q-complement `P`).
    pub fn q_complement(&self, q: u32) -> Result<Subgroup> {
        self.check_simple(q)?;
        let mask = BitSet::from_iter(
            self.order,
            self.elements().filter(|&h| self.element_order(h) % q != 0),
        );
        Ok(self.subgroup_from_mask(mask))
    }

    /// The unique subgroup of order `q` (`Q`).
    pub fn q_part(&self, q: u32) -> Result<Subgroup> {
        self.check_simple(q)?;
        let mask = BitSet::from_iter(
            self.order,
            self.elements().filter(|&h| q % self.element_order(h) == 0),
        );
        Ok(self.subgroup_from_mask(mask))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.subgroup_from_mask(BitSet::from_iter(self.order, [0]))
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup_from_mask(BitSet::from_iter(self.order, self.elements()))
    }

    pub fn cyclic_subgroup(&self, g: u32) -> BitSet {
        let mut mask = BitSet::new(self.order);
        let mut x = 0;
        loop {
            mask.insert(x);
            x = self.add(x, g);
            if x == 0 {
                break;
            }
        }
        mask
    }

    /// `A + B` as a set.
    pub fn sumset(&self, a: &BitSet, b: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.order);
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.add(x, y));
            }
        }
        out
    }

    pub fn generated_subgroup(&self, gens: &[u32]) -> Subgroup {
        let mut mask = BitSet::from_iter(self.order, [0]);
        for &g in gens {
            if !mask.contains(g) {
                mask = self.sumset(&mask, &self.cyclic_subgroup(g));
            }
        }
        self.subgroup_from_mask(mask)
    }

    /// Wraps a mask already known to be a subgroup.
    pub(crate) fn subgroup_from_mask(&self, mask: BitSet) -> Subgroup {
        let mut span = BitSet::from_iter(self.order, [0]);
        let mut generators = Vec::new();
        for x in mask.iter() {
            if !span.contains(x) {
                span = self.sumset(&span, &self.cyclic_subgroup(x));
                generators.push(x);
            }
        }
        Subgroup {
            members: mask.to_vec(),
            generators,
            mask,
        }
    }

    pub fn subgroup_from_members(&self, members: &[u32]) -> Result<Subgroup> {
        let mask = BitSet::from_iter(self.order, members.iter().copied());
        if !self.is_subgroup(&mask) {
            return Err(Error::NotSubgroup);
        }
        Ok(self.subgroup_from_mask(mask))
    }

    pub fn is_subgroup(&self, mask: &BitSet) -> bool {
        if !mask.contains(0) {
            return false;
        }
        let members = mask.to_vec();
        members
            .iter()
            .all(|&a| members.iter().all(|&b| mask.contains(self.sub(a, b))))
    }

    /// Complete subgroup lattice, sorted by (order, members).
    pub fn all_subgroups(&self, max_order: usize) -> Result<Vec<Subgroup>> {
        if self.order > max_order {
            return Err(Error::size_limit("group order", self.order as u128, max_order as u128));
        }
        let trivial = BitSet::from_iter(self.order, [0]);
        let mut seen: HashSet<BitSet> = HashSet::from([trivial.clone()]);
        let mut queue = VecDeque::from([trivial]);
        while let Some(s) = queue.pop_front() {
            for g in self.elements() {
                if s.contains(g) {
                    continue;
                }
                let t = self.sumset(&s, &self.cyclic_subgroup(g));
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        let mut subgroups: Vec<Subgroup> = seen.into_iter().map(|m| self.subgroup_from_mask(m)).collect();
        subgroups.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        Ok(subgroups)
    }

    /// The subgroup lattice under the default order bound, computed once.
    pub fn subgroup_lattice(&self) -> Result<Arc<Vec<Subgroup>>> {
        if let Some(subs) = self.subgroups.get() {
            return Ok(subs.clone());
        }
        let subs = Arc::new(self.all_subgroups(DEFAULT_MAX_ORDER)?);
        Ok(self.subgroups.get_or_init(|| subs).clone())
    }

    /// Full automorphism group, enumerated by images of the canonical generators.
    pub fn automorphism_group(&self, max_order: usize) -> Result<Arc<Vec<GroupAutomorphism>>> {
        if self.order > max_order {
            return Err(Error::size_limit("group order", self.order as u128, max_order as u128));
        }
        if let Some(auts) = self.automorphisms.get() {
            return Ok(auts.clone());
        }
        let auts = Arc::new(self.enumerate_automorphisms()?);
        Ok(self.automorphisms.get_or_init(|| auts).clone())
    }

    fn enumerate_automorphisms(&self) -> Result<Vec<GroupAutomorphism>> {
        let gens = self.generators();
        let candidates: Vec<Vec<u32>> = self
            .factors
            .iter()
            .map(|&f| self.elements().filter(|&x| f % self.element_order(x) == 0).collect())
            .collect();
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(gens.len());
        let mut spans = vec![BitSet::from_iter(self.order, [0])];
        self.aut_search(&candidates, &mut chosen, &mut spans, &mut out)?;
        Ok(out)
    }

    fn aut_search(
        &self,
        candidates: &[Vec<u32>],
        chosen: &mut Vec<u32>,
        spans: &mut Vec<BitSet>,
        out: &mut Vec<GroupAutomorphism>,
    ) -> Result<()> {
        let depth = chosen.len();
        if depth == self.factors.len() {
            out.push(self.automorphism_from_images(chosen));
            if out.len() > MAX_AUTOMORPHISMS {
                return Err(Error::size_limit("automorphism count", out.len() as u128, MAX_AUTOMORPHISMS as u128));
            }
            return Ok(());
        }
        let f = self.factors[depth] as usize;
        let expected = spans[depth].len() * f;
        for &x in &candidates[depth] {
            // the partial map must stay injective: |span + <x>| = |span|·f
            let next = self.sumset(&spans[depth], &self.cyclic_subgroup(x));
            if next.len() != expected {
                continue;
            }
            chosen.push(x);
            spans.push(next);
            self.aut_search(candidates, chosen, spans, out)?;
            spans.pop();
            chosen.pop();
        }
        Ok(())
    }

    /// The homomorphism sending generator `i` to `images[i]`; callers
    /// guarantee it is bijective.
    pub fn automorphism_from_images(&self, images: &[u32]) -> GroupAutomorphism {
        let perm = self
            .elements()
            .map(|h| {
                self.exponents(h)
                    .iter()
                    .zip(images)
                    .fold(0, |acc, (&e, &img)| self.add(acc, self.scale(img, e as i64)))
            })
            .collect();
        GroupAutomorphism {
            generator_images: images.to_vec(),
            perm,
        }
    }

    /// Isomorphism type and embedding of a subgroup: returns a group `U`
    /// together with the map from ranks of `U` to ranks of `self`.
    pub fn subgroup_structure(&self, sub: &Subgroup) -> (AbelianGroup, Vec<u32>) {
        if sub.is_trivial() {
            return (AbelianGroup::trivial(), vec![0]);
        }
        let members = &sub.members;
        let index_of = |x: u32| members.binary_search(&x).expect("member") ;
        let add = |a: usize, b: usize| index_of(self.add(members[a], members[b]));
        let zero = index_of(0);
        let (factors, basis) = find_basis(members.len(), zero, &add);
        let group = AbelianGroup::new(&factors).expect("factors are valid");
        let embedding = group
            .elements()
            .map(|r| {
                group
                    .exponents(r)
                    .iter()
                    .zip(&basis)
                    .fold(0, |acc, (&e, &b)| self.add(acc, self.scale(members[b], e as i64)))
            })
            .collect();
        (group, embedding)
    }

    /// Isomorphism type of `self / sub` and the projection from ranks of
    /// `self` to ranks of the quotient.
    pub fn quotient_structure(&self, sub: &Subgroup) -> (AbelianGroup, Vec<u32>) {
        // coset id = index of the coset's smallest element among all coset minima
        let mut coset_min = vec![u32::MAX; self.order];
        for h in self.elements() {
            let m = sub.members.iter().map(|&l| self.add(h, l)).min().expect("nonempty");
            coset_min[h as usize] = m;
        }
        let mut reps: Vec<u32> = coset_min.clone();
        reps.sort_unstable();
        reps.dedup();
        let coset_id: Vec<usize> = coset_min
            .iter()
            .map(|m| reps.binary_search(m).expect("rep"))
            .collect();
        let add = |a: usize, b: usize| coset_id[self.add(reps[a], reps[b]) as usize];
        let zero = coset_id[0];
        let (factors, basis) = if reps.len() == 1 {
            (Vec::new(), Vec::new())
        } else {
            find_basis(reps.len(), zero, &add)
        };
        if factors.is_empty() {
            // trivial quotient: represent as Z1 is not allowed; use a single-point placeholder
            let group = AbelianGroup::trivial();
            return (group, vec![0; self.order]);
        }
        let group = AbelianGroup::new(&factors).expect("factors are valid");
        let mut coset_to_rank = vec![0u32; reps.len()];
        for r in group.elements() {
            let mut acc = zero;
            for (&e, &b) in group.exponents(r).iter().zip(&basis) {
                for _ in 0..e {
                    acc = add(acc, b);
                }
            }
            coset_to_rank[acc] = r;
        }
        let projection = coset_id.iter().map(|&c| coset_to_rank[c]).collect();
        (group, projection)
    }

    /// The one-element group. Only reachable as a quotient by the whole group.
    pub fn trivial() -> AbelianGroup {
        AbelianGroup {
            factors: Vec::new(),
            order: 1,
            exponent: 1,
            strides: Vec::new(),
            add_table: Some(vec![0]),
            neg: vec![0],
            orders: vec![1],
            automorphisms: OnceLock::new(),
            subgroups: OnceLock::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// True when every Sylow subgroup is elementary abelian.
    pub fn is_e_group(&self) -> bool {
        let n = self.order as u32;
        if n == 1 {
            return true;
        }
        prime_factors(n).into_iter().all(|p| {
            self.elements()
                .filter(|&h| self.element_order(h) % p == 0)
                .all(|h| self.element_order(h) % (p * p) != 0)
        })
    }

    pub fn spec_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.factors.len() {
            let mut j = i;
            while j < self.factors.len() && self.factors[j] == self.factors[i] {
                j += 1;
            }
            if !first {
                write!(f, "x")?;
            }
            first = false;
            write!(f, "Z{}", self.factors[i])?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroup({self})")
    }
}

impl PartialEq for AbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for AbelianGroup {}

impl FromStr for AbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AbelianGroup::parse(s)
    }
}

/// Convenience constructor for a shared group handle.
pub fn make_group(factors: &[u32]) -> Result<Group> {
    AbelianGroup::new(factors).map(Arc::new)
}

pub fn parse_group(spec: &str) -> Result<Group> {
    AbelianGroup::parse(spec).map(Arc::new)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Element {
    pub exponents: Vec<u32>,
    pub rank: u32,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<u32>,
    generators: Vec<u32>,
    mask: BitSet,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn mask(&self) -> &BitSet {
        &self.mask
    }

    pub fn contains(&self, x: u32) -> bool {
        self.mask.contains(x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask.is_subset(&other.mask)
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

impl Serialize for Subgroup {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(serializer)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

/// A group automorphism, kept both as generator images and as a full
/// permutation of ranks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupAutomorphism {
    generator_images: Vec<u32>,
    perm: Vec<u32>,
}

impl GroupAutomorphism {
    fn from_perm(group: &AbelianGroup, perm: Vec<u32>) -> Self {
        let generator_images = group.generators().iter().map(|&g| perm[g as usize]).collect();
        GroupAutomorphism {
            generator_images,
            perm,
        }
    }

    pub fn identity(group: &AbelianGroup) -> Self {
        GroupAutomorphism::from_perm(group, group.elements().collect())
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.perm[x as usize]
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    pub fn generator_images(&self) -> &[u32] {
        &self.generator_images
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &GroupAutomorphism) -> GroupAutomorphism {
        let perm: Vec<u32> = self.perm.iter().map(|&x| other.perm[x as usize]).collect();
        let generator_images = self.generator_images.iter().map(|&x| other.perm[x as usize]).collect();
        GroupAutomorphism {
            generator_images,
            perm,
        }
    }

    pub fn inverse(&self, group: &AbelianGroup) -> GroupAutomorphism {
        let mut perm = vec![0u32; self.perm.len()];
        for (x, &y) in self.perm.iter().enumerate() {
            perm[y as usize] = x as u32;
        }
        GroupAutomorphism::from_perm(group, perm)
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn is_homomorphism(&self, group: &AbelianGroup) -> bool {
        group.elements().all(|a| {
            group
                .elements()
                .all(|b| self.apply(group.add(a, b)) == group.add(self.apply(a), self.apply(b)))
        })
    }

    pub fn fixed_points(&self) -> usize {
        self.perm.iter().enumerate().filter(|(i, &x)| *i as u32 == x).count()
    }

    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut cur = self.clone();
        while !cur.is_identity() {
            cur = cur.then(self);
            k += 1;
        }
        k
    }
}

impl fmt::Debug for GroupAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Aut{:?}", self.perm)
    }
}

/// Elementary-divisor decomposition of an abstract abelian group on
/// `0..n` with identity `zero`. Returns (factors, basis element ids).
fn find_basis(n: usize, zero: usize, add: &dyn Fn(usize, usize) -> usize) -> (Vec<u32>, Vec<usize>) {
    let multiple = |x: usize, k: u32| {
        let mut acc = zero;
        for _ in 0..k {
            acc = add(acc, x);
        }
        acc
    };
    let order_of = |x: usize| {
        let mut k = 1u32;
        let mut acc = x;
        while acc != zero {
            acc = add(acc, x);
            k += 1;
        }
        k
    };
    let orders: Vec<u32> = (0..n).map(order_of).collect();

    // elementary divisors from the counts |{x : p^k x = 0}|
    let mut factors = Vec::new();
    for p in prime_factors(n as u32) {
        let mut prev = 1usize;
        let mut k = 1u32;
        let mut counts = Vec::new();
        loop {
            let pk = p.pow(k);
            let count = orders.iter().filter(|&&o| pk % o == 0 && o.is_power_of_prime(p)).count();
            let count = count.max(1);
            if count == prev {
                break;
            }
            let ratio = count / prev;
            counts.push(ilog(ratio as u32, p));
            prev = count;
            k += 1;
        }
        // counts[k-1] = number of cyclic factors of order >= p^k
        let max_k = counts.len();
        for k in (1..=max_k).rev() {
            let at_least_k = counts[k - 1];
            let at_least_k1 = if k < max_k { counts[k] } else { 0 };
            for _ in 0..(at_least_k - at_least_k1) {
                factors.push(p.pow(k as u32));
            }
        }
    }

    let mut basis = Vec::with_capacity(factors.len());
    let mut span = vec![false; n];
    span[zero] = true;
    let ok = basis_search(n, &factors, &orders, &multiple, add, &mut span, &mut basis);
    assert!(ok, "abelian group must have a basis");
    (factors, basis)
}

fn basis_search(
    n: usize,
    factors: &[u32],
    orders: &[u32],
    multiple: &dyn Fn(usize, u32) -> usize,
    add: &dyn Fn(usize, usize) -> usize,
    span: &mut Vec<bool>,
    basis: &mut Vec<usize>,
) -> bool {
    let depth = basis.len();
    if depth == factors.len() {
        return true;
    }
    let f = factors[depth];
    let span_elems: Vec<usize> = (0..n).filter(|&x| span[x]).collect();
    for x in 0..n {
        if orders[x] != f || span[x] {
            continue;
        }
        let mut next = vec![false; n];
        for &s in &span_elems {
            for k in 0..f {
                next[add(s, multiple(x, k))] = true;
            }
        }
        if next.iter().filter(|&&b| b).count() != span_elems.len() * f as usize {
            continue;
        }
        let saved = std::mem::replace(span, next);
        basis.push(x);
        if basis_search(n, factors, orders, multiple, add, span, basis) {
            return true;
        }
        basis.pop();
        *span = saved;
    }
    false
}

trait PrimePower {
    fn is_power_of_prime(&self, p: u32) -> bool;
}

impl PrimePower for u32 {
    fn is_power_of_prime(&self, p: u32) -> bool {
        let mut x = *self;
        while x % p == 0 {
            x /= p;
        }
        x == 1
    }
}

fn ilog(mut x: u32, p: u32) -> usize {
    let mut k = 0;
    while x > 1 {
        x /= p;
        k += 1;
    }
    k
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let g = a.extended_gcd(&m);
    (g.gcd == 1).then(|| g.x.rem_euclid(m))
}

/// x ≡ a (mod m), x ≡ b (mod n) for coprime m, n.
fn crt(a: i64, m: i64, b: i64, n: i64) -> i64 {
    let inv = mod_inverse(m % n, n).unwrap_or(0);
    let k = ((b - a).rem_euclid(n) * inv).rem_euclid(n);
    (a + m * k).rem_euclid(m * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u32]) -> AbelianGroup {
        AbelianGroup::new(f).unwrap()
    }

    #[test]
    fn make_group_examples() {
        let h = g(&[2, 2, 2, 3]);
        assert_eq!((h.order(), h.exponent()), (24, 6));
        let h = g(&[3, 3, 3, 2]);
        assert_eq!((h.order(), h.exponent()), (54, 6));
        let h = g(&[5]);
        assert_eq!((h.order(), h.exponent()), (5, 5));
        assert!(matches!(AbelianGroup::new(&[2, 1]), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn parse_and_display() {
        let h = AbelianGroup::parse(" z2^3 x Z3 ").unwrap();
        assert_eq!(h.factors(), &[2, 2, 2, 3]);
        assert_eq!(h.to_string(), "Z2^3xZ3");
        assert_eq!(AbelianGroup::parse("Z3^3xZ2").unwrap().to_string(), "Z3^3xZ2");
        assert!(AbelianGroup::parse("Y2").is_err());
        assert!(AbelianGroup::parse("Z1").is_err());
        assert!(AbelianGroup::parse("Z2^0").is_err());
    }

    #[test]
    fn last_factor_fastest() {
        let h = g(&[2, 3]);
        assert_eq!(h.exponents(1), vec![0, 1]);
        assert_eq!(h.exponents(3), vec![1, 0]);
        assert_eq!(h.rank_of(&[1, 2]).unwrap(), 5);
    }

    #[test]
    fn decompose_q_examples() {
        let h = g(&[2, 3]);
        assert_eq!(h.decompose_q(0, 3).unwrap(), (0, 0));
        let x = h.rank_of(&[1, 1]).unwrap();
        let (a, b) = h.decompose_q(x, 3).unwrap();
        assert_eq!((h.exponents(a), h.exponents(b)), (vec![1, 0], vec![0, 1]));

        let h = g(&[2, 2, 2, 3]);
        let x = h.rank_of(&[1, 1, 0, 2]).unwrap();
        let (a, b) = h.decompose_q(x, 3).unwrap();
        assert_eq!(h.exponents(a), vec![1, 1, 0, 0]);
        assert_eq!(h.exponents(b), vec![0, 0, 0, 2]);

        assert!(matches!(h.decompose_q(1, 2), Err(Error::NotSimpleDivisor { .. })));
    }

    #[test]
    fn decompose_q_exhaustive() {
        for (f, q) in [(vec![2, 2, 2, 3], 3), (vec![3, 3, 3, 2], 2), (vec![2, 5], 5), (vec![4, 3], 3)] {
            let h = g(&f);
            let p = h.q_complement(q).unwrap();
            let qq = h.q_part(q).unwrap();
            assert_eq!(p.order() * q as usize, h.order());
            assert_eq!(qq.order(), q as usize);
            for x in h.elements() {
                let (a, b) = h.decompose_q(x, q).unwrap();
                assert!(p.contains(a) && qq.contains(b));
                assert_eq!(h.add(a, b), x);
                assert_eq!(h.add(a, b), h.add(b, a));
            }
        }
    }

    #[test]
    fn unit_action_examples() {
        let h = g(&[5]);
        assert!(h.unit_action(1).unwrap().is_identity());
        assert_eq!(h.unit_action(2).unwrap().perm(), &[0, 2, 4, 1, 3]);
        assert!(matches!(h.unit_action(5), Err(Error::NonUnit { .. })));
        let h = g(&[2, 2, 2, 3]);
        assert_eq!(h.m_q(3).unwrap(), vec![1, 5]);
    }

    #[test]
    fn unit_action_is_multiplicative() {
        let h = g(&[3, 3, 2]);
        let units = h.units();
        for &t in &units {
            for &s in &units {
                let ts = h.unit_action(t as i64 * s as i64).unwrap();
                let composed = h.unit_action(s as i64).unwrap().then(&h.unit_action(t as i64).unwrap());
                assert_eq!(ts, composed);
            }
        }
    }

    /// Independent oracle: enumerate every subset containing 0 and keep the closed ones.
    fn brute_force_subgroup_count(h: &AbelianGroup) -> usize {
        let n = h.order();
        (0u64..1 << (n - 1))
            .filter(|bits| {
                let mask = BitSet::from_iter(
                    n,
                    std::iter::once(0).chain((1..n as u32).filter(|i| bits >> (i - 1) & 1 == 1)),
                );
                h.is_subgroup(&mask)
            })
            .count()
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(g(&[5]).all_subgroups(256).unwrap().len(), 2);
        assert_eq!(g(&[2, 2]).all_subgroups(256).unwrap().len(), 5);
        let z2_3 = g(&[2, 2, 2]);
        let subs = z2_3.all_subgroups(256).unwrap();
        assert_eq!(subs.len(), 16);
        assert_eq!(brute_force_subgroup_count(&z2_3), 16);
        assert_eq!(brute_force_subgroup_count(&g(&[3, 3])), g(&[3, 3]).all_subgroups(256).unwrap().len());
        for s in &subs {
            assert!(z2_3.is_subgroup(s.mask()));
            assert_eq!(8 % s.order(), 0);
        }
        assert!(matches!(g(&[512]).all_subgroups(256), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(g(&[5]).automorphism_group(256).unwrap().len(), 4);
        assert_eq!(g(&[2, 2, 2]).automorphism_group(256).unwrap().len(), 168);
        let h = g(&[2, 2, 2, 3]);
        let auts = h.automorphism_group(256).unwrap();
        assert_eq!(auts.len(), 336);
        for a in auts.iter().step_by(7) {
            assert!(a.is_homomorphism(&h));
        }
    }

    #[test]
    fn structures() {
        let h = g(&[2, 2, 2, 3]);
        let p = h.q_complement(3).unwrap();
        let (u, emb) = h.subgroup_structure(&p);
        assert_eq!(u.factors(), &[2, 2, 2]);
        for a in u.elements() {
            for b in u.elements() {
                assert_eq!(emb[u.add(a, b) as usize], h.add(emb[a as usize], emb[b as usize]));
            }
        }
        let (quo, proj) = h.quotient_structure(&p);
        assert_eq!(quo.factors(), &[3]);
        for a in h.elements() {
            for b in h.elements() {
                assert_eq!(proj[h.add(a, b) as usize], quo.add(proj[a as usize], proj[b as usize]));
            }
        }
        let z = g(&[4, 2]);
        let two = z.generated_subgroup(&[z.rank_of(&[2, 0]).unwrap()]);
        let (quo, _) = z.quotient_structure(&two);
        assert_eq!(quo.factors(), &[2, 2]);
        let (quo, _) = z.quotient_structure(&z.whole());
        assert!(quo.is_trivial());
    }

    #[test]
    fn e_groups() {
        assert!(g(&[2, 2, 2, 3]).is_e_group());
        assert!(!g(&[4, 3]).is_e_group());
        assert!(g(&[6]).is_e_group());
    }
}
