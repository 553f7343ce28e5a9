//! Integer group-ring arithmetic over an abelian group.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;

/// A sparse integer combination of group elements.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    group: Arc<AbelianGroup>,
    coeffs: BTreeMap<u32, BigInt>,
}

impl RingElement {
    pub fn zero(group: &Arc<AbelianGroup>) -> Self {
        RingElement {
            group: group.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(group: &Arc<AbelianGroup>) -> Self {
        Self::simple_quantity(group, [0])
    }

    /// The simple quantity of `set`: coefficient 1 on each member.
    pub fn simple_quantity(group: &Arc<AbelianGroup>, set: impl IntoIterator<Item = u32>) -> Self {
        let coeffs = set.into_iter().map(|x| (x, BigInt::one())).collect();
        RingElement {
            group: group.clone(),
            coeffs,
        }
    }

    pub fn from_coefficients(group: &Arc<AbelianGroup>, pairs: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut out = RingElement::zero(group);
        for (x, c) in pairs {
            out.add_coefficient(x, &BigInt::from(c));
        }
        out
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn coefficient(&self, x: u32) -> BigInt {
        self.coeffs.get(&x).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> Vec<u32> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_coefficient(&mut self, x: u32, c: &BigInt) {
        let entry = self.coeffs.entry(x).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&x);
        }
    }

    fn check_same_group(&self, other: &RingElement) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(self.group.to_string(), other.group.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.check_same_group(other)?;
        let mut out = self.clone();
        for (&x, c) in &other.coeffs {
            out.add_coefficient(x, c);
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> RingElement {
        let k = BigInt::from(k);
        let mut out = RingElement::zero(&self.group);
        if !k.is_zero() {
            out.coeffs = self.coeffs.iter().map(|(&x, c)| (x, c * &k)).collect();
        }
        out
    }

    /// Convolution product.
    pub fn multiply(&self, other: &RingElement) -> Result<RingElement> {
        self.check_same_group(other)?;
        let mut out = RingElement::zero(&self.group);
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &other.coeffs {
                out.add_coefficient(self.group.add(a, b), &(ca * cb));
            }
        }
        Ok(out)
    }

    /// `x^k` under the ring product.
    pub fn pow(&self, k: u32) -> RingElement {
        let mut out = RingElement::one(&self.group);
        for _ in 0..k {
            out = out.multiply(self).expect("same group");
        }
        out
    }

    /// Pushes coefficients forward along `g ↦ m·g`, summing collisions.
    pub fn power_map(&self, m: i64) -> RingElement {
        let mut out = RingElement::zero(&self.group);
        for (&x, c) in &self.coeffs {
            out.add_coefficient(self.group.scale(x, m), c);
        }
        out
    }

    /// `{g : coeff(g) ≢ 0 mod m}`.
    pub fn schur_wielandt_extract(&self, m: u32) -> Vec<u32> {
        let m = BigInt::from(m);
        self.coeffs
            .iter()
            .filter(|(_, c)| !(*c % &m).is_zero())
            .map(|(&x, _)| x)
            .collect()
    }

    /// `{g : coeff(g) = k}`; for `k = 0` this is the complement of the support.
    pub fn coefficient_class(&self, k: i64) -> Vec<u32> {
        let k = BigInt::from(k);
        self.group
            .elements()
            .filter(|x| self.coeffs.get(x).map_or(k.is_zero(), |c| *c == k))
            .collect()
    }

    pub fn support_mask(&self) -> BitSet {
        BitSet::from_iter(self.group.order(), self.coeffs.keys().copied())
    }

    /// Debug dump: `rank:coeff` pairs in rank order.
    pub fn dump(&self) -> String {
        self.coeffs
            .iter()
            .map(|(x, c)| format!("{x}:{c}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement[{}]", self.dump())
    }
}

/// Fast product of two simple quantities given as masks, as plain counts.
pub(crate) fn product_counts(group: &AbelianGroup, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut counts = vec![0u32; group.order()];
    for &x in a {
        for &y in b {
            counts[group.add(x, y) as usize] += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    #[test]
    fn simple_quantities() {
        let z5 = make_group(&[5]).unwrap();
        assert!(RingElement::simple_quantity(&z5, []).is_zero());
        assert_eq!(RingElement::simple_quantity(&z5, [0]), RingElement::one(&z5));
        assert_eq!(RingElement::simple_quantity(&z5, z5.elements()).support().len(), 5);
    }

    #[test]
    fn multiply_examples() {
        let z5 = make_group(&[5]).unwrap();
        let s = RingElement::simple_quantity(&z5, [1, 4]);
        assert_eq!(s.multiply(&RingElement::one(&z5)).unwrap(), s);
        let sq = s.multiply(&s).unwrap();
        let expected = RingElement::from_coefficients(&z5, [(2, 1), (3, 1), (0, 2)]);
        assert_eq!(sq, expected);
        let all = RingElement::simple_quantity(&z5, z5.elements());
        assert_eq!(all.multiply(&all).unwrap(), all.scale(5));
        assert_eq!(sq.schur_wielandt_extract(2), vec![2, 3]);
        assert_eq!(all.multiply(&all).unwrap().coefficient_class(5), vec![0, 1, 2, 3, 4]);

        let z4 = make_group(&[4]).unwrap();
        assert!(matches!(s.multiply(&RingElement::one(&z4)), Err(Error::GroupMismatch(..))));
    }

    #[test]
    fn power_map_examples() {
        let z5 = make_group(&[5]).unwrap();
        let x = RingElement::simple_quantity(&z5, [1, 2]);
        assert_eq!(x.power_map(1), x);
        assert_eq!(x.power_map(2), RingElement::simple_quantity(&z5, [2, 4]));
        let z4 = make_group(&[4]).unwrap();
        let y = RingElement::simple_quantity(&z4, [1, 3]).power_map(2);
        assert_eq!(y.dump(), "2:2");
    }

    #[test]
    fn extraction_examples() {
        let z5 = make_group(&[5]).unwrap();
        let x = RingElement::from_coefficients(&z5, [(1, 3), (2, 2), (3, 6)]);
        assert_eq!(x.schur_wielandt_extract(3), vec![2]);
        assert!(RingElement::zero(&z5).schur_wielandt_extract(3).is_empty());
        let y = RingElement::from_coefficients(&z5, [(1, 3), (2, 2)]);
        assert_eq!(y.coefficient_class(2), vec![2]);
        assert_eq!(y.coefficient_class(0), vec![0, 3, 4]);
    }
}
