//! The 2x2 signed algebra over one leg coordinate and its quasi-isomorphism
//! onto the endomorphism algebra of the two surviving factorizations.

use serde::Serialize;

use crate::error::Error;
use crate::mf::cohomology::{assemble_block_complex, interior_dims, CohomologyDims};
use crate::mf::factorization::{
    compose, differential, e_sum, end_zero, EndEl, Parity, TwoPeriodicMF,
};
use crate::mf::ring::{Coefficient, El, Exp, RingSpec};
use crate::rat::Rat;

/// A 2x2 matrix over the leg-variable subring, graded so that diagonal
/// entries carry integer exponents (even) and off-diagonal ones
/// half-integer exponents (odd).
#[derive(Debug, Clone, PartialEq)]
pub struct SignedEl<C: Coefficient> {
    pub entries: [[El<C>; 2]; 2],
}

impl<C: Coefficient> SignedEl<C> {
    pub fn zero() -> Self {
        SignedEl {
            entries: [
                [El::zero(), El::zero()],
                [El::zero(), El::zero()],
            ],
        }
    }

    pub fn unit(spec: &RingSpec, i: usize, j: usize, doubled_exp: i64) -> Result<Self, Error> {
        validate_entry_parity(i, j, doubled_exp)?;
        let mut out = Self::zero();
        out.entries[i][j] = El::leg_power(spec, doubled_exp)?;
        Ok(out)
    }

    pub fn identity(spec: &RingSpec) -> Self {
        let mut out = Self::zero();
        out.entries[0][0] = El::one(spec);
        out.entries[1][1] = El::one(spec);
        out
    }

    /// Z/2-parity, when homogeneous: diagonal-only is even, off-diagonal-only
    /// is odd.
    pub fn parity(&self) -> Option<Parity> {
        let diag_zero = self.entries[0][0].is_zero() && self.entries[1][1].is_zero();
        let off_zero = self.entries[0][1].is_zero() && self.entries[1][0].is_zero();
        match (diag_zero, off_zero) {
            (false, true) | (true, true) => Some(Parity::Even),
            (true, false) => Some(Parity::Odd),
            (false, false) => None,
        }
    }

    /// Validates the exponent-parity invariant of every entry: purely in
    /// the leg variable, even doubled exponents on the diagonal, odd off it.
    pub fn validate(&self, spec: &RingSpec) -> Result<(), Error> {
        for i in 0..2 {
            for j in 0..2 {
                for e in self.entries[i][j].terms.keys() {
                    for (v, &x) in e.iter().enumerate() {
                        if v != spec.leg && x != 0 {
                            return Err(Error::MatrixFactorization(format!(
                                "signed entry ({i},{j}) involves z{}",
                                v + 1
                            )));
                        }
                    }
                    validate_entry_parity(i, j, e[spec.leg])?;
                }
            }
        }
        Ok(())
    }
}

fn validate_entry_parity(i: usize, j: usize, doubled_exp: i64) -> Result<(), Error> {
    let want_odd = i != j;
    if (doubled_exp.rem_euclid(2) == 1) != want_odd {
        return Err(Error::MatrixFactorization(format!(
            "entry ({i},{j}) must carry {} exponents, got doubled exponent {doubled_exp}",
            if want_odd { "half-integer" } else { "integer" }
        )));
    }
    Ok(())
}

/// Matrix product in the signed algebra.
pub fn signed_mul<C: Coefficient>(
    x: &SignedEl<C>,
    y: &SignedEl<C>,
    spec: &RingSpec,
) -> (SignedEl<C>, bool) {
    let mut out = SignedEl::zero();
    let mut truncated = false;
    for i in 0..2 {
        for k in 0..2 {
            let mut acc = El::zero();
            for j in 0..2 {
                let (p, t) = x.entries[i][j].mul(&y.entries[j][k], spec);
                truncated |= t;
                acc = acc.add(&p);
            }
            out.entries[i][k] = acc;
        }
    }
    (out, truncated)
}

/// The covering involution: permutes rows and columns simultaneously.
pub fn cover_involution<C: Coefficient>(x: &SignedEl<C>) -> SignedEl<C> {
    let mut out = SignedEl::zero();
    for i in 0..2 {
        for j in 0..2 {
            out.entries[1 - i][1 - j] = x.entries[i][j].clone();
        }
    }
    out
}

/// The two surviving summand indices (0-based) for a leg: contracting `E_k`
/// leaves `(E_{k+1}, E_{k+2})` in cyclic order.
pub fn leg_summands(leg: usize) -> (usize, usize) {
    (leg % 3, (leg + 1) % 3)
}

/// The quasi-isomorphism from the signed algebra over leg `k` into
/// `End(E_{k+1} ⊕ E_{k+2})`, embedded in the full rank-3 block matrix.
///
/// Diagonal entries become degree-zero diagonal endomorphisms; the
/// off-diagonal entry `f` becomes the odd homomorphism with components
/// `z_k^{-1/2} f` and `z_k^{+1/2} f`. Entry `(i, j)` lands in block
/// `(s_i, s_j)`, so matrix units compose the way matrix units do.
pub fn phi_leg<C: Coefficient>(
    leg: usize,
    x: &SignedEl<C>,
    spec: &RingSpec,
) -> Result<EndEl<C>, Error> {
    if !(1..=3).contains(&leg) {
        return Err(Error::MatrixFactorization(format!("no leg {leg}")));
    }
    if spec.leg != leg - 1 || !spec.invertible {
        return Err(Error::MatrixFactorization(format!(
            "phi for leg {leg} needs z{leg} invertible in the ring"
        )));
    }
    x.validate(spec)?;
    let parity = x.parity().ok_or_else(|| {
        Error::MatrixFactorization("phi needs a parity-homogeneous element".into())
    })?;
    let (s0, s1) = leg_summands(leg);
    let s = [s0, s1];
    let mut out = end_zero::<C>(3, parity);
    match parity {
        Parity::Even => {
            for i in 0..2 {
                let f = &x.entries[i][i];
                out.f0[s[i]][s[i]] = f.clone();
                out.f1[s[i]][s[i]] = f.clone();
            }
        }
        Parity::Odd => {
            let minus_half = El::<C>::leg_power(spec, -1)?;
            let plus_half = El::<C>::leg_power(spec, 1)?;
            for i in 0..2 {
                for j in 0..2 {
                    if i == j {
                        continue;
                    }
                    let f = &x.entries[i][j];
                    if f.is_zero() {
                        continue;
                    }
                    let (lo, t1) = minus_half.mul(f, spec);
                    let (hi, t2) = plus_half.mul(f, spec);
                    if t1 || t2 {
                        return Err(Error::MatrixFactorization(
                            "phi image truncated; enlarge the window".into(),
                        ));
                    }
                    out.f0[s[i]][s[j]] = out.f0[s[i]][s[j]].add(&lo);
                    out.f1[s[i]][s[j]] = out.f1[s[i]][s[j]].add(&hi);
                }
            }
        }
    }
    Ok(out)
}

/// Transport of `tau_12` (swap `z1 <-> z2` and `E1 <-> E2`) to the
/// endomorphism algebra.
pub fn tau12_end<C: Coefficient>(f: &EndEl<C>) -> EndEl<C> {
    let swap_el = |e: &El<C>| -> El<C> {
        El {
            terms: e
                .terms
                .iter()
                .map(|(exp, c)| {
                    let swapped: Exp = [exp[1], exp[0], exp[2]];
                    (swapped, c.clone())
                })
                .collect(),
        }
    };
    let sigma = |i: usize| -> usize {
        match i {
            0 => 1,
            1 => 0,
            other => other,
        }
    };
    let mut out = end_zero::<C>(3, f.parity);
    for i in 0..3 {
        for j in 0..3 {
            out.f0[sigma(i)][sigma(j)] = swap_el(&f.f0[i][j]);
            out.f1[sigma(i)][sigma(j)] = swap_el(&f.f1[i][j]);
        }
    }
    out
}

/// All signed basis elements with doubled leg exponents in `[-w, w]`.
pub fn signed_basis<C: Coefficient>(spec: &RingSpec, w: i64) -> Vec<SignedEl<C>> {
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for e in -w..=w {
                if validate_entry_parity(i, j, e).is_ok() {
                    if let Ok(x) = SignedEl::unit(spec, i, j, e) {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

/// Commutativity of the edge-reversal square: transporting the phi image by
/// `tau_12` agrees with applying the covering involution first.
pub fn tau12_check(spec: &RingSpec, window: i64) -> Result<bool, Error> {
    for x in signed_basis::<Rat>(spec, window) {
        let lhs = tau12_end(&phi_leg(3, &x, spec)?);
        let rhs = phi_leg(3, &cover_involution(&x), spec)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Full verification report for the leg-3 quasi-isomorphism.
#[derive(Debug, Clone, Serialize)]
pub struct Phi3Report {
    pub closed_ok: bool,
    pub multiplicative_ok: bool,
    pub injective_ok: bool,
    /// Interior cohomology dimensions (even, odd) and the expected counts.
    pub interior_even: usize,
    pub interior_odd: usize,
    pub expected_even: usize,
    pub expected_odd: usize,
    pub spanned_ok: bool,
}

impl Phi3Report {
    pub fn quasi_iso_ok(&self) -> bool {
        self.interior_even == self.expected_even
            && self.interior_odd == self.expected_odd
            && self.spanned_ok
    }

    pub fn pass(&self) -> bool {
        self.closed_ok && self.multiplicative_ok && self.injective_ok && self.quasi_iso_ok()
    }
}

/// Checks that phi lands in closed elements, is multiplicative on all
/// window basis pairs, and induces an isomorphism onto the interior-window
/// cohomology of `End(E1 ⊕ E2)` with the stated dimension table.
pub fn verify_phi3(spec: &RingSpec) -> Result<Phi3Report, Error> {
    if spec.n_cap < 2 {
        return Err(Error::MatrixFactorization(
            "window too small: need at least 4 half-integer steps".into(),
        ));
    }
    let e = e_sum::<Rat>(spec)?;
    let basis = signed_basis::<Rat>(spec, 2 * spec.n_cap);
    let mut closed_ok = true;
    let mut images = Vec::new();
    for x in &basis {
        let fx = phi_leg(3, x, spec)?;
        let (dfx, _) = differential(&e, &fx, spec);
        if !dfx.is_zero() {
            closed_ok = false;
        }
        images.push(fx);
    }
    // injectivity on basis: images are distinct and nonzero
    let mut injective_ok = images.iter().all(|f| !f.is_zero());
    for i in 0..images.len() {
        for j in (i + 1)..images.len() {
            if images[i] == images[j] {
                injective_ok = false;
            }
        }
    }
    // multiplicativity on all pairs; pairs with truncation events sit
    // outside the exact regime of the window and are not comparable
    let mut multiplicative_ok = true;
    let mut multiplicative_pairs = 0usize;
    for x in &basis {
        for y in &basis {
            let (xy, t_signed) = signed_mul(x, y, spec);
            let fx = phi_leg(3, x, spec)?;
            let fy = phi_leg(3, y, spec)?;
            let (rhs, t_end) = compose(&fx, &fy, spec);
            if t_signed || t_end {
                continue;
            }
            let lhs = match xy.parity() {
                Some(_) => phi_leg(3, &xy, spec)?,
                None => unreachable!("products of units are homogeneous"),
            };
            // zero images agree regardless of their parity tag
            let equal = lhs == rhs || (lhs.is_zero() && rhs.is_zero());
            if !equal {
                multiplicative_ok = false;
            }
            multiplicative_pairs += 1;
        }
    }
    if multiplicative_pairs < basis.len() {
        return Err(Error::MatrixFactorization(
            "window too small for a meaningful multiplicativity check".into(),
        ));
    }

    // interior cohomology of End(E1 ⊕ E2)
    let blocks = [(0, 0), (0, 1), (1, 0), (1, 1)];
    let complex = assemble_block_complex(spec, &blocks)?;
    let d_int = spec.d_cap - 2;
    let n_int = spec.n_cap - 2;
    let dims: CohomologyDims = interior_dims(&complex, d_int, n_int)?;
    // expected: 2 even classes per integer exponent, 2 odd per half-integer
    let expected_even = 2 * (2 * n_int + 1) as usize;
    let expected_odd = 2 * (2 * n_int) as usize;

    // spanning: interior phi images are independent modulo the image of d
    let mut interior_images_even = Vec::new();
    let mut interior_images_odd = Vec::new();
    for x in signed_basis::<Rat>(spec, 2 * n_int) {
        let fx = phi_leg(3, &x, spec)?;
        match fx.parity {
            Parity::Even => interior_images_even.push(fx),
            Parity::Odd => interior_images_odd.push(fx),
        }
    }
    let spanned_ok = complex.spans_interior_cohomology(
        &interior_images_even,
        &interior_images_odd,
        d_int,
        n_int,
        dims.even,
        dims.odd,
    )?;

    Ok(Phi3Report {
        closed_ok,
        multiplicative_ok,
        injective_ok,
        interior_even: dims.even,
        interior_odd: dims.odd,
        expected_even,
        expected_odd,
        spanned_ok,
    })
}

/// Per-leg restriction data of the endomorphism sheaf over the tropical
/// pair-of-pants.
#[derive(Debug, Clone, Serialize)]
pub struct LegModel {
    pub leg: usize,
    /// 1-based labels of the two surviving factorizations on this leg.
    pub summands: (usize, usize),
    pub closed_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PantsModel {
    pub legs: Vec<LegModel>,
    /// Size of the vertex-stalk matrix algebra.
    pub vertex_rank: usize,
    pub vertex_mf_ok: bool,
}

impl PantsModel {
    pub fn pass(&self) -> bool {
        self.vertex_mf_ok && self.legs.iter().all(|l| l.closed_ok)
    }
}

/// Restriction of the endomorphism dga to the three legs of the tropical
/// pair-of-pants: each leg carries the cyclic analogue of the leg-3
/// quasi-isomorphism (re-verified symbolically), the vertex keeps the full
/// rank-6 matrix algebra.
pub fn restrict_to_tropical_pants(d_cap: i64, n_cap: i64) -> Result<PantsModel, Error> {
    let mut legs = Vec::new();
    for leg in 1..=3usize {
        let spec = RingSpec::for_leg(leg - 1, d_cap, n_cap);
        let e = e_sum::<Rat>(&spec)?;
        let mut closed_ok = true;
        for x in signed_basis::<Rat>(&spec, 2 * spec.n_cap) {
            let fx = phi_leg(leg, &x, &spec)?;
            let (dfx, _) = differential(&e, &fx, &spec);
            if !dfx.is_zero() {
                closed_ok = false;
            }
        }
        let (a, b) = leg_summands(leg);
        legs.push(LegModel {
            leg,
            summands: (a + 1, b + 1),
            closed_ok,
        });
    }
    // vertex stalk: the full 2-periodic module has total rank 6 and its
    // endomorphisms form the rank-6 matrix algebra; verify the defining
    // identity there
    let spec = RingSpec::standard(d_cap, n_cap);
    let e: TwoPeriodicMF<Rat> = e_sum(&spec)?;
    let check = crate::mf::factorization::verify_mf(&e, &spec);
    Ok(PantsModel {
        legs,
        vertex_rank: 2 * e.rank(),
        vertex_mf_ok: check.pass(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mf::factorization::end_identity;

    fn spec46() -> RingSpec {
        RingSpec::invertible(4, 6)
    }

    #[test]
    fn identity_maps_to_identity_on_two_summands() {
        let spec = spec46();
        let id = SignedEl::<Rat>::identity(&spec);
        let f = phi_leg(3, &id, &spec).unwrap();
        // equals id_{E1} + id_{E2}: identity on blocks 0 and 1, zero on 2
        let mut expect = end_identity::<Rat>(&spec, 3);
        expect.f0[2][2] = El::zero();
        expect.f1[2][2] = El::zero();
        assert_eq!(f, expect);
    }

    #[test]
    fn off_diagonal_image_has_the_shifted_components() {
        let spec = spec46();
        let x = SignedEl::<Rat>::unit(&spec, 0, 1, 1).unwrap(); // z3^{1/2} in position (1,2)
        let f = phi_leg(3, &x, &spec).unwrap();
        assert_eq!(f.parity, Parity::Odd);
        // components z3^{-1/2}·z3^{1/2} = 1 and z3^{1/2}·z3^{1/2} = z3
        assert_eq!(f.f0[0][1], El::one(&spec));
        assert_eq!(f.f1[0][1], El::var(&spec, 2).unwrap());
        // closed under the differential
        let e = e_sum::<Rat>(&spec).unwrap();
        let (df, _) = differential(&e, &f, &spec);
        assert!(df.is_zero());
    }

    #[test]
    fn wrong_exponent_twist_is_not_closed() {
        // replacing z3^{-1/2} by z3^{+1/2} in the first component breaks
        // closedness
        let spec = spec46();
        let e = e_sum::<Rat>(&spec).unwrap();
        let plus = El::<Rat>::leg_power(&spec, 1).unwrap();
        let mut f = end_zero::<Rat>(3, Parity::Odd);
        let (hi, _) = plus.mul(&El::leg_power(&spec, 1).unwrap(), &spec);
        f.f0[0][1] = hi.clone(); // z3^{+1/2} f instead of z3^{-1/2} f
        f.f1[0][1] = hi;
        let (df, _) = differential(&e, &f, &spec);
        assert!(!df.is_zero());
    }

    #[test]
    fn odd_times_odd_lands_diagonally() {
        let spec = spec46();
        let x = SignedEl::<Rat>::unit(&spec, 0, 1, 1).unwrap();
        let y = SignedEl::<Rat>::unit(&spec, 1, 0, -1).unwrap();
        let (xy, _) = signed_mul(&x, &y, &spec);
        // xy = e_11 * (z^{1/2} z^{-1/2}) = e_11
        assert_eq!(xy.entries[0][0], El::one(&spec));
        let lhs = phi_leg(3, &xy, &spec).unwrap();
        let fx = phi_leg(3, &x, &spec).unwrap();
        let fy = phi_leg(3, &y, &spec).unwrap();
        let (rhs, _) = compose(&fx, &fy, &spec);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn tau12_square_commutes() {
        let spec = spec46();
        assert!(tau12_check(&spec, 2 * spec.n_cap).unwrap());
        // spot checks: diagonal and off-diagonal units
        let d = SignedEl::<Rat>::unit(&spec, 0, 0, 2).unwrap();
        let lhs = tau12_end(&phi_leg(3, &d, &spec).unwrap());
        let rhs = phi_leg(3, &cover_involution(&d), &spec).unwrap();
        assert_eq!(lhs, rhs);
        let o = SignedEl::<Rat>::unit(&spec, 0, 1, 1).unwrap();
        let lhs = tau12_end(&phi_leg(3, &o, &spec).unwrap());
        let rhs = phi_leg(3, &cover_involution(&o), &spec).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn signed_parity_validation() {
        let spec = spec46();
        assert!(SignedEl::<Rat>::unit(&spec, 0, 0, 1).is_err()); // diagonal must be integer
        assert!(SignedEl::<Rat>::unit(&spec, 0, 1, 2).is_err()); // off-diagonal must be half-integer
        assert!(SignedEl::<Rat>::unit(&spec, 0, 1, -3).is_ok());
    }

    #[test]
    fn pants_restriction_all_legs_close() {
        let model = restrict_to_tropical_pants(3, 3).unwrap();
        assert!(model.pass());
        assert_eq!(model.vertex_rank, 6);
        assert_eq!(model.legs[0].summands, (2, 3));
        assert_eq!(model.legs[1].summands, (3, 1));
        assert_eq!(model.legs[2].summands, (1, 2));
    }
}
