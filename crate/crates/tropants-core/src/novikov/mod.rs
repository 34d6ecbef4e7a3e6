//! Novikov scalars with valuations, the sheaf-section finiteness criterion,
//! and Floer chord bookkeeping for convex Hamiltonians.

mod floer;
mod section;

pub use floer::{
    cf_correspondence_report, enumerate_chords, ActionValue, CfReport, ChordRecord,
    ConvexHamiltonian, Coords,
};
pub use section::{
    count_below, section_membership, Membership, Piece, Region, ValuationSpec, Violation,
};

use num_traits::Zero;

use crate::rat::Rat;

/// Truncation order of a formal series: exact, or correct below `q^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trunc {
    Exact,
    At(Rat),
}

impl Trunc {
    fn min(a: &Trunc, b: &Trunc) -> Trunc {
        match (a, b) {
            (Trunc::Exact, t) => t.clone(),
            (t, Trunc::Exact) => t.clone(),
            (Trunc::At(x), Trunc::At(y)) => Trunc::At(x.min(y).clone()),
        }
    }

    fn admits(&self, exponent: &Rat) -> bool {
        match self {
            Trunc::Exact => true,
            Trunc::At(r) => exponent < r,
        }
    }

    fn shift(&self, by: Option<&Rat>) -> Trunc {
        match (self, by) {
            (Trunc::Exact, _) => Trunc::Exact,
            (Trunc::At(_), None) => Trunc::Exact, // shifted past infinity
            (Trunc::At(r), Some(v)) => Trunc::At(r + v),
        }
    }
}

/// A formal series `Σ a_r q^r` with rational exponents, finitely many terms
/// below its truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovikovScalar {
    /// Sorted by strictly increasing exponent; no zero coefficients.
    terms: Vec<(Rat, Rat)>,
    trunc: Trunc,
}

impl NovikovScalar {
    pub fn zero(trunc: Trunc) -> Self {
        NovikovScalar {
            terms: vec![],
            trunc,
        }
    }

    pub fn one() -> Self {
        Self::monomial(crate::rat::rat(1), Rat::zero())
    }

    pub fn monomial(coeff: Rat, exponent: Rat) -> Self {
        let terms = if coeff.is_zero() {
            vec![]
        } else {
            vec![(exponent, coeff)]
        };
        NovikovScalar {
            terms,
            trunc: Trunc::Exact,
        }
    }

    pub fn from_terms(terms: Vec<(Rat, Rat)>, trunc: Trunc) -> Self {
        let mut map: std::collections::BTreeMap<Rat, Rat> = std::collections::BTreeMap::new();
        for (e, c) in terms {
            if trunc.admits(&e) {
                *map.entry(e).or_insert_with(Rat::zero) += c;
            }
        }
        NovikovScalar {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            trunc,
        }
    }

    pub fn terms(&self) -> &[(Rat, Rat)] {
        &self.terms
    }

    pub fn trunc(&self) -> &Trunc {
        &self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Valuation: least exponent; `None` stands for `+∞` (the zero series).
    pub fn val(&self) -> Option<Rat> {
        self.terms.first().map(|(e, _)| e.clone())
    }

    pub fn neg(&self) -> Self {
        NovikovScalar {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            trunc: self.trunc.clone(),
        }
    }
}

/// Sum, exact below the smaller truncation order.
pub fn nov_add(a: &NovikovScalar, b: &NovikovScalar) -> NovikovScalar {
    let trunc = Trunc::min(&a.trunc, &b.trunc);
    let mut terms = a.terms.clone();
    terms.extend(b.terms.iter().cloned());
    NovikovScalar::from_terms(terms, trunc)
}

/// Product; the result is correct below
/// `min(trunc_a + val(b), trunc_b + val(a))`.
pub fn nov_mul(a: &NovikovScalar, b: &NovikovScalar) -> NovikovScalar {
    let trunc = Trunc::min(
        &a.trunc.shift(b.val().as_ref()),
        &b.trunc.shift(a.val().as_ref()),
    );
    let mut terms = Vec::new();
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            terms.push((ea + eb, ca * cb));
        }
    }
    NovikovScalar::from_terms(terms, trunc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, rat};

    fn q(e: Rat) -> NovikovScalar {
        NovikovScalar::monomial(rat(1), e)
    }

    #[test]
    fn additive_cancellation_preserves_trunc() {
        let a = NovikovScalar::from_terms(vec![(rat(0), rat(1))], Trunc::At(rat(5)));
        let b = NovikovScalar::from_terms(vec![(rat(0), rat(-1))], Trunc::At(rat(7)));
        let s = nov_add(&a, &b);
        assert!(s.is_zero());
        assert_eq!(s.trunc, Trunc::At(rat(5)));
    }

    #[test]
    fn difference_of_squares() {
        let one = NovikovScalar::one();
        let half = q(frac(1, 2));
        let lhs = nov_mul(&nov_add(&one, &half), &nov_add(&one, &half.neg()));
        let expect =
            NovikovScalar::from_terms(vec![(rat(0), rat(1)), (rat(1), rat(-1))], Trunc::Exact);
        assert_eq!(lhs, expect);
    }

    #[test]
    fn valuation_is_least_exponent() {
        let x = NovikovScalar::from_terms(
            vec![(rat(2), rat(1)), (rat(5), rat(3))],
            Trunc::Exact,
        );
        assert_eq!(x.val(), Some(rat(2)));
        assert_eq!(NovikovScalar::zero(Trunc::Exact).val(), None);
    }

    #[test]
    fn val_is_multiplicative_and_subadditive() {
        // randomized over a small seeded grid of exponents/coefficients
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..200 {
            let mk = |r: u64| {
                let e1 = frac((r % 7) as i64 - 3, 2);
                let e2 = &e1 + rat(((r >> 8) % 3) as i64 + 1);
                NovikovScalar::from_terms(
                    vec![(e1, rat(((r >> 16) % 5) as i64 - 2)), (e2, rat(1))],
                    Trunc::Exact,
                )
            };
            let a = mk(next());
            let b = mk(next());
            let prod = nov_mul(&a, &b);
            match (a.val(), b.val()) {
                (Some(va), Some(vb)) => assert_eq!(prod.val(), Some(va + vb)),
                _ => assert!(prod.is_zero()),
            }
            let sum = nov_add(&a, &b);
            if let (Some(va), Some(vb)) = (a.val(), b.val()) {
                if let Some(vs) = sum.val() {
                    assert!(vs >= va.clone().min(vb.clone()));
                }
                if va != vb {
                    assert_eq!(sum.val(), Some(va.min(vb)));
                }
            }
        }
    }

    #[test]
    fn mul_trunc_shifts_by_valuation() {
        // (q^2 + O(q^3)) * q^4 is correct below q^7
        let a = NovikovScalar::from_terms(vec![(rat(2), rat(1))], Trunc::At(rat(3)));
        let b = q(rat(4));
        let p = nov_mul(&a, &b);
        assert_eq!(p.trunc, Trunc::At(rat(7)));
        assert_eq!(p.val(), Some(rat(6)));
    }
}
