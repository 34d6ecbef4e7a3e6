//! Two-periodic matrix factorizations of the superpotential and their
//! Z/2-graded endomorphism complex.

use serde::Serialize;

use crate::error::Error;
use crate::mf::ring::{superpotential, Coefficient, El, RingSpec};

pub type Mat<C> = Vec<Vec<El<C>>>;

fn zero_mat<C: Coefficient>(rows: usize, cols: usize) -> Mat<C> {
    (0..rows)
        .map(|_| (0..cols).map(|_| El::zero()).collect())
        .collect()
}

fn id_mat<C: Coefficient>(spec: &RingSpec, rank: usize) -> Mat<C> {
    let mut m = zero_mat(rank, rank);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = El::one(spec);
    }
    m
}

fn mat_mul<C: Coefficient>(a: &Mat<C>, b: &Mat<C>, spec: &RingSpec) -> (Mat<C>, bool) {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut truncated = false;
    let mut out = zero_mat(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let mut acc = El::zero();
            for (k, brow) in b.iter().enumerate() {
                if a[i][k].is_zero() || brow[j].is_zero() {
                    continue;
                }
                let (p, t) = a[i][k].mul(&brow[j], spec);
                truncated |= t;
                acc = acc.add(&p);
            }
            out[i][j] = acc;
        }
    }
    (out, truncated)
}

fn mat_add<C: Coefficient>(a: &Mat<C>, b: &Mat<C>) -> Mat<C> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(y)).collect())
        .collect()
}

fn mat_sub<C: Coefficient>(a: &Mat<C>, b: &Mat<C>) -> Mat<C> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.sub(y)).collect())
        .collect()
}

fn mat_is_zero<C: Coefficient>(a: &Mat<C>) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// A two-periodic factorization `p: M⁰ → M¹`, `q: M¹ → M⁰` with
/// `pq = qp = W·id`.
#[derive(Debug, Clone)]
pub struct TwoPeriodicMF<C: Coefficient> {
    /// 1-based labels of the rank-one summands (which `E_i` they are).
    pub labels: Vec<usize>,
    pub p: Mat<C>,
    pub q: Mat<C>,
}

impl<C: Coefficient> TwoPeriodicMF<C> {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }
}

/// The rank-one factorization `E_i`: `p = z_i`, `q = -z_j z_k` for the
/// complementary pair `(j, k)` in cyclic order.
pub fn e_single<C: Coefficient>(i: usize, spec: &RingSpec) -> Result<TwoPeriodicMF<C>, Error> {
    if !(1..=3).contains(&i) {
        return Err(Error::MatrixFactorization(format!(
            "summand index {i} out of range"
        )));
    }
    let zi = El::var(spec, i - 1)?;
    let j = i % 3; // 0-based index of z_{i+1}
    let k = (i + 1) % 3;
    let (zjzk, t) = El::<C>::var(spec, j)?.mul(&El::var(spec, k)?, spec);
    if t {
        return Err(Error::MatrixFactorization(
            "ring caps too small for degree-2 monomials".into(),
        ));
    }
    Ok(TwoPeriodicMF {
        labels: vec![i],
        p: vec![vec![zi]],
        q: vec![vec![zjzk.neg()]],
    })
}

/// `E = E1 ⊕ E2 ⊕ E3` with diagonal differentials.
pub fn e_sum<C: Coefficient>(spec: &RingSpec) -> Result<TwoPeriodicMF<C>, Error> {
    let mut p = zero_mat(3, 3);
    let mut q = zero_mat(3, 3);
    for i in 1..=3 {
        let single = e_single::<C>(i, spec)?;
        p[i - 1][i - 1] = single.p[0][0].clone();
        q[i - 1][i - 1] = single.q[0][0].clone();
    }
    Ok(TwoPeriodicMF {
        labels: vec![1, 2, 3],
        p,
        q,
    })
}

/// Outcome of the factorization identity check.
#[derive(Debug, Clone, Serialize)]
pub struct MfCheck {
    pub pq_ok: bool,
    pub qp_ok: bool,
    pub truncated: bool,
}

impl MfCheck {
    pub fn pass(&self) -> bool {
        self.pq_ok && self.qp_ok && !self.truncated
    }
}

/// Verifies `p q = q p = W id` exactly, with no truncation events.
pub fn verify_mf<C: Coefficient>(mf: &TwoPeriodicMF<C>, spec: &RingSpec) -> MfCheck {
    let w = superpotential::<C>(spec);
    let mut w_id = zero_mat(mf.rank(), mf.rank());
    for (i, row) in w_id.iter_mut().enumerate() {
        row[i] = w.clone();
    }
    let (pq, t1) = mat_mul(&mf.p, &mf.q, spec);
    let (qp, t2) = mat_mul(&mf.q, &mf.p, spec);
    MfCheck {
        pq_ok: mat_is_zero(&mat_sub(&pq, &w_id)),
        qp_ok: mat_is_zero(&mat_sub(&qp, &w_id)),
        truncated: t1 || t2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A Z/2-graded endomorphism of a two-periodic module.
///
/// Even: `f0: M⁰ → M⁰`, `f1: M¹ → M¹`. Odd: `f0: M⁰ → M¹`, `f1: M¹ → M⁰`.
/// Block `(i, j)` maps summand `j` into summand `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EndEl<C: Coefficient> {
    pub parity: Parity,
    pub f0: Mat<C>,
    pub f1: Mat<C>,
}

pub fn end_zero<C: Coefficient>(rank: usize, parity: Parity) -> EndEl<C> {
    EndEl {
        parity,
        f0: zero_mat(rank, rank),
        f1: zero_mat(rank, rank),
    }
}

pub fn end_identity<C: Coefficient>(spec: &RingSpec, rank: usize) -> EndEl<C> {
    EndEl {
        parity: Parity::Even,
        f0: id_mat(spec, rank),
        f1: id_mat(spec, rank),
    }
}

impl<C: Coefficient> EndEl<C> {
    pub fn is_zero(&self) -> bool {
        mat_is_zero(&self.f0) && mat_is_zero(&self.f1)
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.parity != other.parity {
            return Err(Error::MatrixFactorization(
                "cannot add elements of different parity".into(),
            ));
        }
        Ok(EndEl {
            parity: self.parity,
            f0: mat_add(&self.f0, &other.f0),
            f1: mat_add(&self.f1, &other.f1),
        })
    }

    pub fn neg(&self) -> Self {
        EndEl {
            parity: self.parity,
            f0: self.f0.iter().map(|r| r.iter().map(El::neg).collect()).collect(),
            f1: self.f1.iter().map(|r| r.iter().map(El::neg).collect()).collect(),
        }
    }
}

/// The hom differential `d(f) = d_E ∘ f - (-1)^{|f|} f ∘ d_E`, written out
/// per component; the sign convention is fixed here once and for all.
pub fn differential<C: Coefficient>(
    mf: &TwoPeriodicMF<C>,
    f: &EndEl<C>,
    spec: &RingSpec,
) -> (EndEl<C>, bool) {
    let p = &mf.p;
    let q = &mf.q;
    match f.parity {
        Parity::Even => {
            // odd output: g0 = p f0 - f1 p, g1 = q f1 - f0 q
            let (a, t1) = mat_mul(p, &f.f0, spec);
            let (b, t2) = mat_mul(&f.f1, p, spec);
            let (c, t3) = mat_mul(q, &f.f1, spec);
            let (d, t4) = mat_mul(&f.f0, q, spec);
            (
                EndEl {
                    parity: Parity::Odd,
                    f0: mat_sub(&a, &b),
                    f1: mat_sub(&c, &d),
                },
                t1 || t2 || t3 || t4,
            )
        }
        Parity::Odd => {
            // even output: g0 = q f0 + f1 p, g1 = p f1 + f0 q
            let (a, t1) = mat_mul(q, &f.f0, spec);
            let (b, t2) = mat_mul(&f.f1, p, spec);
            let (c, t3) = mat_mul(p, &f.f1, spec);
            let (d, t4) = mat_mul(&f.f0, q, spec);
            (
                EndEl {
                    parity: Parity::Even,
                    f0: mat_add(&a, &b),
                    f1: mat_add(&c, &d),
                },
                t1 || t2 || t3 || t4,
            )
        }
    }
}

/// Composition `f ∘ g` in the endomorphism algebra.
pub fn compose<C: Coefficient>(
    f: &EndEl<C>,
    g: &EndEl<C>,
    spec: &RingSpec,
) -> (EndEl<C>, bool) {
    let parity = f.parity.add(g.parity);
    let (f0, f1, t) = match (f.parity, g.parity) {
        (Parity::Even, Parity::Even) => {
            let (a, t1) = mat_mul(&f.f0, &g.f0, spec);
            let (b, t2) = mat_mul(&f.f1, &g.f1, spec);
            (a, b, t1 || t2)
        }
        (Parity::Even, Parity::Odd) => {
            // g0: M0→M1 then f's M1 part; g1: M1→M0 then f's M0 part
            let (a, t1) = mat_mul(&f.f1, &g.f0, spec);
            let (b, t2) = mat_mul(&f.f0, &g.f1, spec);
            (a, b, t1 || t2)
        }
        (Parity::Odd, Parity::Even) => {
            let (a, t1) = mat_mul(&f.f0, &g.f0, spec);
            let (b, t2) = mat_mul(&f.f1, &g.f1, spec);
            (a, b, t1 || t2)
        }
        (Parity::Odd, Parity::Odd) => {
            // even result: f1 g0: M0→M0, f0 g1: M1→M1
            let (a, t1) = mat_mul(&f.f1, &g.f0, spec);
            let (b, t2) = mat_mul(&f.f0, &g.f1, spec);
            (a, b, t1 || t2)
        }
    };
    (EndEl { parity, f0, f1 }, t)
}

/// The contraction of `E3` over the locus where `z3` is invertible:
/// `h` odd with `M¹ → M⁰` component `z3^{-1}` and zero `M⁰ → M¹` component;
/// then `d(h) = id` exactly.
pub fn contraction_e3<C: Coefficient>(
    spec: &RingSpec,
) -> Result<(EndEl<C>, bool), Error> {
    if !spec.invertible || spec.leg != 2 {
        return Err(Error::MatrixFactorization(
            "contraction needs z3 invertible".into(),
        ));
    }
    let e3 = e_single::<C>(3, spec)?;
    let h = EndEl {
        parity: Parity::Odd,
        f0: zero_mat(1, 1),
        f1: vec![vec![El::leg_power(spec, -2)?]],
    };
    let (dh, truncated) = differential(&e3, &h, spec);
    let id = end_identity(spec, 1);
    let certified = !truncated && dh == id;
    Ok((h, certified))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, Rat};

    type R = Rat;

    fn basis_elements(spec: &RingSpec, rank: usize) -> Vec<EndEl<R>> {
        // a small deterministic family of end elements for identities
        let mut out = Vec::new();
        let mut seed = 0x243f6a8885a308d3u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for parity in [Parity::Even, Parity::Odd] {
            for _ in 0..6 {
                let mut f = end_zero::<R>(rank, parity);
                for _ in 0..3 {
                    let r = next();
                    let i = (r % rank as u64) as usize;
                    let j = ((r >> 8) % rank as u64) as usize;
                    let e = [
                        ((r >> 16) % 3) as i64 * 2,
                        ((r >> 24) % 2) as i64 * 2,
                        ((r >> 32) % 5) as i64 - 2,
                    ];
                    if !spec.admits(&e) {
                        continue;
                    }
                    let c = rat(((r >> 40) % 7) as i64 - 3);
                    let m = El::monomial(spec, e, c).unwrap();
                    if r % 2 == 0 {
                        f.f0[i][j] = f.f0[i][j].add(&m);
                    } else {
                        f.f1[i][j] = f.f1[i][j].add(&m);
                    }
                }
                out.push(f);
            }
        }
        out
    }

    #[test]
    fn factorizations_are_exact() {
        let spec = RingSpec::standard(4, 6);
        for i in 1..=3 {
            let e = e_single::<R>(i, &spec).unwrap();
            let check = verify_mf(&e, &spec);
            assert!(check.pass(), "E{i}: {check:?}");
        }
        let e = e_sum::<R>(&spec).unwrap();
        assert!(verify_mf(&e, &spec).pass());
        // E3's q is -z1 z2
        let e3 = e_single::<R>(3, &spec).unwrap();
        let expect = El::<R>::var(&spec, 0)
            .unwrap()
            .mul(&El::var(&spec, 1).unwrap(), &spec)
            .0
            .neg();
        assert_eq!(e3.q[0][0], expect);
    }

    #[test]
    fn differential_squares_to_zero() {
        let spec = RingSpec::invertible(4, 6);
        let e = e_sum::<R>(&spec).unwrap();
        for f in basis_elements(&spec, 3) {
            let (df, _) = differential(&e, &f, &spec);
            let (ddf, _) = differential(&e, &df, &spec);
            assert!(ddf.is_zero(), "d² != 0 on {f:?}");
        }
        // identity is closed
        let id = end_identity::<R>(&spec, 3);
        let (d_id, t) = differential(&e, &id, &spec);
        assert!(d_id.is_zero() && !t);
    }

    #[test]
    fn leibniz_rule() {
        // exact as long as no truncation event fires
        let spec = RingSpec::invertible(4, 6);
        let e = e_sum::<R>(&spec).unwrap();
        let els = basis_elements(&spec, 3);
        let mut checked = 0;
        for f in &els[..6] {
            for g in &els[6..] {
                let (fg, t1) = compose(f, g, &spec);
                let (d_fg, t2) = differential(&e, &fg, &spec);
                let (df, t3) = differential(&e, f, &spec);
                let (dg, t4) = differential(&e, g, &spec);
                let (df_g, t5) = compose(&df, g, &spec);
                let (f_dg, t6) = compose(f, &dg, &spec);
                if t1 || t2 || t3 || t4 || t5 || t6 {
                    continue;
                }
                let signed = if f.parity == Parity::Odd {
                    f_dg.neg()
                } else {
                    f_dg
                };
                let rhs = df_g.add(&signed).unwrap();
                assert_eq!(d_fg, rhs, "Leibniz failed");
                checked += 1;
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn contraction_certificate() {
        let spec = RingSpec::invertible(4, 6);
        let (h, ok) = contraction_e3::<R>(&spec).unwrap();
        assert!(ok);
        assert!(h.f0[0][0].is_zero());
        // closed ring refuses
        let closed = RingSpec::standard(4, 6);
        assert!(contraction_e3::<R>(&closed).is_err());
    }
}
