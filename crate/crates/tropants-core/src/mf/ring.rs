//! Truncated coefficient ring `Q[z1, z2, z3]` with one distinguished "leg"
//! variable that may carry half-integer exponents and be inverted.
//!
//! Exponents are stored doubled, so `z3^{1/2}` is the exponent vector
//! `[0, 0, 1]`. Multiplication drops monomials outside the caps and reports
//! that a truncation happened; exact identities assert no truncation events.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::Error;
use crate::novikov::{nov_add, nov_mul, NovikovScalar, Trunc};
use crate::rat::Rat;

/// Doubled exponent vector: entry `i` is twice the exponent of `z_{i+1}`.
pub type Exp = [i64; 3];

/// Coefficient abstraction: rationals by default, Novikov scalars when the
/// q-adic mode is on.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coefficient for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as num_traits::One>::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Coefficient for NovikovScalar {
    fn zero() -> Self {
        NovikovScalar::zero(Trunc::Exact)
    }
    fn one() -> Self {
        NovikovScalar::one()
    }
    fn add(&self, other: &Self) -> Self {
        nov_add(self, other)
    }
    fn neg(&self) -> Self {
        self.neg()
    }
    fn mul(&self, other: &Self) -> Self {
        nov_mul(self, other)
    }
    fn is_zero(&self) -> bool {
        NovikovScalar::is_zero(self)
    }
}

/// Cap configuration of the truncated ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingSpec {
    /// Index (0-based) of the leg variable with half-integer exponents.
    pub leg: usize,
    /// Total-degree cap on the two non-leg variables.
    pub d_cap: i64,
    /// Exponent window `[-N, N]` for the leg variable.
    pub n_cap: i64,
    /// Whether negative leg exponents are allowed.
    pub invertible: bool,
}

impl RingSpec {
    /// The standard configuration with `z3` as the leg variable.
    pub fn standard(d_cap: i64, n_cap: i64) -> Self {
        RingSpec {
            leg: 2,
            d_cap,
            n_cap,
            invertible: false,
        }
    }

    pub fn invertible(d_cap: i64, n_cap: i64) -> Self {
        RingSpec {
            leg: 2,
            d_cap,
            n_cap,
            invertible: true,
        }
    }

    pub fn for_leg(leg: usize, d_cap: i64, n_cap: i64) -> Self {
        RingSpec {
            leg,
            d_cap,
            n_cap,
            invertible: true,
        }
    }

    pub fn admits(&self, e: &Exp) -> bool {
        let mut degree = 0;
        for (i, &x) in e.iter().enumerate() {
            if i == self.leg {
                if x.abs() > 2 * self.n_cap {
                    return false;
                }
                if !self.invertible && x < 0 {
                    return false;
                }
            } else {
                if x < 0 || x % 2 != 0 {
                    return false;
                }
                degree += x / 2;
            }
        }
        degree <= self.d_cap
    }
}

/// A truncated ring element.
#[derive(Debug, Clone, PartialEq)]
pub struct El<C: Coefficient> {
    pub terms: BTreeMap<Exp, C>,
}

impl<C: Coefficient> El<C> {
    pub fn zero() -> Self {
        El {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial(spec: &RingSpec, e: Exp, c: C) -> Result<Self, Error> {
        if !spec.admits(&e) {
            return Err(Error::MatrixFactorization(format!(
                "monomial {e:?} outside the ring caps {spec:?}"
            )));
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Ok(El { terms })
    }

    pub fn one(_spec: &RingSpec) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert([0, 0, 0], C::one());
        El { terms }
    }

    /// The variable `z_{i+1}` (ordinary exponent 1).
    pub fn var(spec: &RingSpec, i: usize) -> Result<Self, Error> {
        let mut e = [0i64; 3];
        e[i] = 2;
        Self::monomial(spec, e, C::one())
    }

    /// `z_leg^{k/2}` for a doubled exponent `k`.
    pub fn leg_power(spec: &RingSpec, doubled: i64) -> Result<Self, Error> {
        let mut e = [0i64; 3];
        e[spec.leg] = doubled;
        Self::monomial(spec, e, C::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(C::zero);
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        El { terms }
    }

    pub fn neg(&self) -> Self {
        El {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product with truncation; the flag records whether any monomial was
    /// dropped.
    pub fn mul(&self, other: &Self, spec: &RingSpec) -> (Self, bool) {
        let mut terms: BTreeMap<Exp, C> = BTreeMap::new();
        let mut truncated = false;
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                if !spec.admits(&e) {
                    truncated = true;
                    continue;
                }
                let c = ca.mul(cb);
                let entry = terms.entry(e).or_insert_with(C::zero);
                *entry = entry.add(&c);
                if entry.is_zero() {
                    terms.remove(&e);
                }
            }
        }
        (El { terms }, truncated)
    }

    pub fn scale(&self, c: &C) -> Self {
        El {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (*e, x.mul(c)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }
}

/// `W = -z1 z2 z3`.
pub fn superpotential<C: Coefficient>(spec: &RingSpec) -> El<C> {
    El::monomial(spec, [2, 2, 2], C::one().neg()).expect("caps admit W")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    type E = El<Rat>;

    #[test]
    fn caps_and_truncation() {
        let spec = RingSpec::standard(2, 3);
        let z1 = E::var(&spec, 0).unwrap();
        let z2 = E::var(&spec, 1).unwrap();
        let (p, t) = z1.mul(&z2, &spec);
        assert!(!t);
        assert_eq!(p.terms.len(), 1);
        // z1² z2 exceeds the degree cap
        let (pp, t2) = p.mul(&z1, &spec);
        assert!(t2);
        assert!(pp.is_zero());
    }

    #[test]
    fn negative_leg_requires_invertible() {
        let closed = RingSpec::standard(2, 3);
        assert!(E::leg_power(&closed, -2).is_err());
        let open = RingSpec::invertible(2, 3);
        let zi = E::leg_power(&open, -2).unwrap();
        let z3 = E::var(&open, 2).unwrap();
        let (one, t) = zi.mul(&z3, &open);
        assert!(!t);
        assert_eq!(one, E::one(&open));
    }

    #[test]
    fn half_exponents_on_the_leg() {
        let spec = RingSpec::invertible(2, 3);
        let h = E::leg_power(&spec, 1).unwrap(); // z3^{1/2}
        let (sq, _) = h.mul(&h, &spec);
        assert_eq!(sq, E::var(&spec, 2).unwrap());
        // non-leg variables are integer-exponent only
        assert!(E::monomial(&spec, [1, 0, 0], rat(1)).is_err());
    }

    #[test]
    fn novikov_coefficients_work() {
        let spec = RingSpec::standard(2, 2);
        let z1 = El::<NovikovScalar>::var(&spec, 0).unwrap();
        let q = El::monomial(
            &spec,
            [0, 0, 0],
            NovikovScalar::monomial(rat(1), rat(1)),
        )
        .unwrap();
        let (p, _) = z1.mul(&q, &spec);
        assert_eq!(p.terms.len(), 1);
        let c = p.terms.values().next().unwrap();
        assert_eq!(c.val(), Some(rat(1)));
    }
}
