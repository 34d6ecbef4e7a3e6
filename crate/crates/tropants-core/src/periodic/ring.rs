//! The quotient graded ring of the periodic degeneration: normal forms,
//! the translate-summed product, and truncated presentations.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::linalg::{inverse, rref};
use crate::periodic::{eval_periodic_pl, PeriodicTriangulation, QuasiPeriodicLift};
use crate::rat::{rat, Rat};
use crate::toric::GradedPoint;
use crate::vecops::{dot_i, mat_apply_i};
use crate::{IVec, QVec};

/// A ring basis class in degree `k`: the canonical representative has its
/// base coordinates in the half-open fundamental cell, and carries its
/// height above the periodic piecewise-linear extension.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuotientGradedPoint {
    pub degree: i64,
    pub nums: IVec,
    pub height: Rat,
}

impl QuotientGradedPoint {
    pub fn point(&self) -> GradedPoint {
        GradedPoint {
            degree: self.degree,
            nums: self.nums.clone(),
        }
    }

    pub fn coords(&self) -> QVec {
        self.nums
            .iter()
            .map(|&a| Rat::new(a.into(), self.degree.into()))
            .collect()
    }

    /// First `n` coordinates as rationals.
    pub fn base_coords(&self) -> QVec {
        let n = self.nums.len() - 1;
        self.nums[..n]
            .iter()
            .map(|&a| Rat::new(a.into(), self.degree.into()))
            .collect()
    }
}

/// Applies the lattice identification to a representative: shifting the
/// base by `γ` adds `v·gγ + ½γ·gγ` to the last coordinate.
pub fn translate_rep(
    lift: &QuasiPeriodicLift,
    degree: i64,
    nums: &[i64],
    gamma: &[i64],
) -> IVec {
    let av = &lift.av;
    let n = av.n;
    let g_gamma = mat_apply_i(&av.gram, gamma);
    let mut out = Vec::with_capacity(n + 1);
    for (i, &a) in nums[..n].iter().enumerate() {
        out.push(a + degree * gamma[i]);
    }
    // k * (v·gγ + ½γ·gγ) with v = nums/k
    let shift = dot_i(&nums[..n], &g_gamma) + degree * av.half_self_pairing(gamma);
    out.push(nums[n] + shift);
    out
}

/// Canonical representative of a point of `(1/k)Z^{n+1}` above the graph,
/// with its height. Errors when the point lies below the graph.
pub fn class_normal_form(
    lift: &QuasiPeriodicLift,
    tri: &PeriodicTriangulation,
    p: &GradedPoint,
) -> Result<QuotientGradedPoint, Error> {
    let av = &lift.av;
    let n = av.n;
    if p.nums.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            got: p.nums.len(),
        });
    }
    let base = p.base_coords();
    let gamma = av.fundamental_translate(&base);
    let nums = translate_rep(lift, p.degree, &p.nums, &crate::vecops::neg_i(&gamma));
    let canonical = GradedPoint {
        degree: p.degree,
        nums,
    };
    let phi = eval_periodic_pl(lift, tri, &canonical.base_coords())?;
    let height = canonical.last_coord() - phi;
    if height.is_negative() {
        return Err(Error::invalid(format!(
            "point {:?}/{} lies below the graph (height {height})",
            p.nums, p.degree
        )));
    }
    Ok(QuotientGradedPoint {
        degree: p.degree,
        nums: canonical.nums,
        height,
    })
}

/// One term of a quotient product: a class with an integer multiplicity.
pub type QuotientTerm = (QuotientGradedPoint, i64);

/// Product of two classes: fix a representative of `a`, sum the plain
/// product over all lattice translates of `b`, and keep terms of height
/// strictly below `t_trunc`.
///
/// The translate enumeration is certified: heights grow quadratically in
/// the translate, with an explicit positive-definite lower bound, so the
/// search box is derived rather than guessed.
pub fn quotient_multiply(
    lift: &QuasiPeriodicLift,
    tri: &PeriodicTriangulation,
    a: &QuotientGradedPoint,
    b: &QuotientGradedPoint,
    t_trunc: &Rat,
) -> Result<Vec<QuotientTerm>, Error> {
    let av = &lift.av;
    let n = av.n;
    let (k, l) = (a.degree, b.degree);
    let kl = k + l;
    if t_trunc.is_negative() {
        return Err(Error::invalid("truncation height must be nonnegative"));
    }

    // certified bound: (k+l) H(γ) = k h_a + l h_b + D(γ) with
    // D(γ) >= (kl/(k+l)) q(c - γ) + (k+l)(m0 - M0), q = ½ x·gx, c = ā - b̄
    let (m0, big_m0) = periodic_part_range(lift, tri)?;
    let rhs = rat(kl) * (t_trunc + (&big_m0 - &m0)) - rat(k) * &a.height - rat(l) * &b.height;
    let mut terms: BTreeMap<QuotientGradedPoint, i64> = BTreeMap::new();
    if rhs.is_positive() {
        // q(c - γ) >= (λ/2) |c - γ|² with λ a rational lower bound on the
        // smallest eigenvalue of g
        let lambda = gram_lower_bound(&av.gram);
        let r2 = &rhs * rat(2 * kl) / (rat(k) * rat(l) * &lambda);
        // enumerate γ = B m with |B m - c| <= R; bound m by row sums of B^{-1}
        let c: QVec = a
            .base_coords()
            .iter()
            .zip(&b.base_coords())
            .map(|(x, y)| x - y)
            .collect();
        let binv = inverse(
            &(0..n)
                .map(|r| (0..n).map(|cc| rat(av.gamma_basis[cc][r])).collect())
                .collect::<Vec<QVec>>(),
        )
        .expect("gamma basis invertible");
        let row_norm = binv
            .iter()
            .map(|row| row.iter().map(|x| x.abs()).fold(Rat::zero(), |s, v| s + v))
            .max()
            .unwrap_or_else(Rat::zero);
        let c_norm2 = c.iter().map(|x| x * x).fold(Rat::zero(), |s, v| s + v);
        // |m| <= ||B^{-1}|| (R + |c|); use R <= sqrt(r2) <= 1 + r2, |c| <= 1 + |c|²
        let m_bound_rat = &row_norm * ((rat(1) + &r2) + (rat(1) + c_norm2));
        let m_bound = i64::try_from(&crate::rat::rat_floor(&m_bound_rat))
            .map_err(|_| Error::EnumerationGuard("translate bound overflow".into()))?
            + 1;
        let box_points = (2 * m_bound + 1).checked_pow(n as u32);
        match box_points {
            Some(count) if count <= 2_000_000 => {}
            _ => {
                return Err(Error::EnumerationGuard(format!(
                    "translate box radius {m_bound} in dimension {n} is too large \
                     (t_trunc {t_trunc}, degrees {k},{l})"
                )));
            }
        }
        let mut m = vec![-m_bound; n];
        'scan: loop {
            let mut gamma = vec![0i64; n];
            for (cc, &mc) in m.iter().enumerate() {
                for r in 0..n {
                    gamma[r] += mc * av.gamma_basis[cc][r];
                }
            }
            let b_shifted = translate_rep(lift, l, &b.nums, &gamma);
            let prod = GradedPoint {
                degree: kl,
                nums: a.nums.iter().zip(&b_shifted).map(|(x, y)| x + y).collect(),
            };
            let class = class_normal_form(lift, tri, &prod)?;
            if class.height < *t_trunc {
                *terms.entry(class).or_insert(0) += 1;
            }
            for cc in 0..n {
                m[cc] += 1;
                if m[cc] <= m_bound {
                    continue 'scan;
                }
                m[cc] = -m_bound;
            }
            break;
        }
    }
    Ok(terms.into_iter().collect())
}

/// Exact range `(min, max)` of the Γ-periodic part `φ - ½x·gx` over the
/// fundamental domain. The minimum sits at a triangle vertex; the maximum
/// of the concave difference is found by checking every face of every
/// triangle.
fn periodic_part_range(
    lift: &QuasiPeriodicLift,
    tri: &PeriodicTriangulation,
) -> Result<(Rat, Rat), Error> {
    let av = &lift.av;
    let mut min: Option<Rat> = None;
    let mut max: Option<Rat> = None;
    let mut update = |v: &Rat, lo: bool| {
        let slot = if lo { &mut min } else { &mut max };
        match slot {
            None => *slot = Some(v.clone()),
            Some(cur) => {
                if (lo && v < cur) || (!lo && v > cur) {
                    *slot = Some(v.clone());
                }
            }
        }
    };
    let q_of = |x: &[Rat]| -> Rat {
        crate::vecops::dot_q(x, &crate::vecops::mat_apply_qi(&av.gram, x)) / rat(2)
    };
    for t in &tri.triangles {
        let verts: Vec<QVec> = t.iter().map(|p| crate::vecops::to_q(p)).collect();
        let vals: Vec<Rat> = t
            .iter()
            .map(|p| Ok(rat(lift.value(p)?)))
            .collect::<Result<_, Error>>()?;
        // vertices handle the minimum (and are face candidates for the max)
        for (v, val) in verts.iter().zip(&vals) {
            let h = val - q_of(v);
            update(&h, true);
            update(&h, false);
        }
        // interior critical points of (affine - q) on each face
        let k = verts.len();
        for mask in 1u32..(1 << k) {
            let ids: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).collect();
            if ids.len() < 2 {
                continue;
            }
            if let Some(h) = face_max(&verts, &vals, &ids, &q_of) {
                update(&h, false);
            }
        }
    }
    Ok((min.unwrap(), max.unwrap()))
}

/// Maximum of the concave function `affine - q` over the face spanned by
/// `ids`, if the unconstrained critical point lies inside the face.
fn face_max(
    verts: &[QVec],
    vals: &[Rat],
    ids: &[usize],
    q_of: &impl Fn(&[Rat]) -> Rat,
) -> Option<Rat> {
    // parametrize x = v0 + sum_j s_j (v_j - v0), h(s) = affine - q concave;
    // solve grad h = 0 exactly
    let v0 = &verts[ids[0]];
    let dirs: Vec<QVec> = ids[1..]
        .iter()
        .map(|&j| crate::vecops::sub_q(&verts[j], v0))
        .collect();
    let d = dirs.len();
    // h(s) = val0 + sum s_j (val_j - val0) - q(v0 + sum s_j dir_j);
    // grad_j h = (val_j - val0) - dir_j·g v0 - sum_i s_i dir_j·g dir_i = 0,
    // with x·g y recovered from q via polarization
    let gv0: QVec = dirs
        .iter()
        .map(|dir| q_of(&crate::vecops::add_q(v0, dir)) - q_of(v0) - q_of(dir))
        .collect();
    let mut a = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let cross = q_of(&crate::vecops::add_q(&dirs[i], &dirs[j]))
                - q_of(&dirs[i])
                - q_of(&dirs[j]);
            row.push(cross);
        }
        a.push(row);
    }
    let b: QVec = (0..d)
        .map(|j| &vals[ids[j + 1]] - &vals[ids[0]] - &gv0[j])
        .collect();
    let s = crate::linalg::solve(&a, &b)?;
    // inside the open face: all s_j > 0 and sum < 1
    let sum: Rat = s.iter().fold(Rat::zero(), |acc, x| acc + x);
    if s.iter().any(|x| !x.is_positive()) || sum >= rat(1) {
        return None;
    }
    let x: QVec = (0..v0.len())
        .map(|c| {
            let mut acc = v0[c].clone();
            for (j, dir) in dirs.iter().enumerate() {
                acc += &s[j] * &dir[c];
            }
            acc
        })
        .collect();
    let affine = {
        let mut acc = vals[ids[0]].clone();
        for (j, id) in ids[1..].iter().enumerate() {
            acc += &s[j] * (&vals[*id] - &vals[ids[0]]);
        }
        acc
    };
    Some(affine - q_of(&x))
}

/// Rational lower bound for the smallest eigenvalue of an integral
/// positive definite symmetric matrix: `det(g) / ||g||_∞^{n-1}`.
fn gram_lower_bound(gram: &[IVec]) -> Rat {
    let n = gram.len();
    if n == 1 {
        return rat(gram[0][0]);
    }
    let det = crate::linalg::det_i(gram);
    let row_norm: i64 = gram
        .iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<i64>())
        .max()
        .unwrap();
    let mut denom = rat(1);
    for _ in 0..(n - 1) {
        denom *= rat(row_norm);
    }
    det / denom
}

/// A monomial in the chosen generators: sorted `(generator index, power)`.
pub type Monomial = Vec<(usize, u32)>;

/// An integer-coefficient identity among generator monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub degree: i64,
    pub terms: Vec<(Rat, Monomial)>,
}

/// Truncated presentation of `R̂/tR̂` up to a degree bound.
#[derive(Debug, Clone)]
pub struct TruncatedRingPresentation {
    pub max_degree: i64,
    /// Height-zero classes per degree, in canonical order.
    pub class_basis: Vec<Vec<QuotientGradedPoint>>,
    pub hilbert: Vec<usize>,
    pub generators: Vec<(i64, QuotientGradedPoint)>,
    pub relations: Vec<Relation>,
}

impl TruncatedRingPresentation {
    /// Coefficient vector of a generator monomial in a given degree's class
    /// basis (the zero vector if degrees do not match).
    pub fn monomial_vector(
        &self,
        lift: &QuasiPeriodicLift,
        tri: &PeriodicTriangulation,
        m: &Monomial,
    ) -> Result<(i64, Vec<Rat>), Error> {
        monomial_vector(lift, tri, &self.generators, &self.class_basis, m)
    }

    /// Evaluates an integer combination of monomials mod t; returns the
    /// coefficient vector in the class basis of the combination's degree.
    pub fn evaluate_combo(
        &self,
        lift: &QuasiPeriodicLift,
        tri: &PeriodicTriangulation,
        combo: &[(Rat, Monomial)],
    ) -> Result<Vec<Rat>, Error> {
        let mut degree = None;
        let mut acc: Option<Vec<Rat>> = None;
        for (coeff, m) in combo {
            let (d, v) = self.monomial_vector(lift, tri, m)?;
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 == d => {}
                _ => return Err(Error::invalid("combination mixes degrees")),
            }
            let acc = acc.get_or_insert_with(|| vec![Rat::zero(); v.len()]);
            for (slot, x) in acc.iter_mut().zip(&v) {
                *slot += coeff * x;
            }
        }
        acc.ok_or_else(|| Error::EmptyInput("empty combination"))
    }
}

/// Enumerates the height-zero class basis of one degree, canonically
/// ordered by numerator vector.
pub fn class_basis(
    lift: &QuasiPeriodicLift,
    tri: &PeriodicTriangulation,
    degree: i64,
) -> Result<Vec<QuotientGradedPoint>, Error> {
    let av = &lift.av;
    let n = av.n;
    // bounding box of the fundamental cell, scaled by the degree
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for mask in 0..(1usize << n) {
        let mut corner = vec![0i64; n];
        for (c, b) in av.gamma_basis.iter().enumerate() {
            if mask & (1 << c) != 0 {
                for r in 0..n {
                    corner[r] += b[r];
                }
            }
        }
        for r in 0..n {
            lo[r] = lo[r].min(corner[r] * degree);
            hi[r] = hi[r].max(corner[r] * degree);
        }
    }
    let mut out = Vec::new();
    let mut cursor = lo.clone();
    'scan: loop {
        let base: QVec = cursor
            .iter()
            .map(|&a| Rat::new(a.into(), degree.into()))
            .collect();
        let t = av.basis_coords(&base);
        if t.iter().all(|x| !x.is_negative() && *x < rat(1)) {
            let phi = eval_periodic_pl(lift, tri, &base)?;
            let k_phi = &phi * rat(degree);
            if !crate::rat::is_integer(&k_phi) {
                return Err(Error::invalid(
                    "periodic extension is not integral on the degree lattice",
                ));
            }
            let mut nums = cursor.clone();
            nums.push(i64::try_from(&k_phi.to_integer()).unwrap());
            out.push(QuotientGradedPoint {
                degree,
                nums,
                height: Rat::zero(),
            });
        }
        for c in 0..n {
            cursor[c] += 1;
            if cursor[c] <= hi[c] {
                continue 'scan;
            }
            cursor[c] = lo[c];
        }
        break;
    }
    out.sort();
    Ok(out)
}

fn monomial_degree(generators: &[(i64, QuotientGradedPoint)], m: &Monomial) -> i64 {
    m.iter()
        .map(|&(g, p)| generators[g].0 * i64::from(p))
        .sum()
}

/// Coefficient vector of a monomial mod t.
fn monomial_vector(
    lift: &QuasiPeriodicLift,
    tri: &PeriodicTriangulation,
    generators: &[(i64, QuotientGradedPoint)],
    class_basis_by_degree: &[Vec<QuotientGradedPoint>],
    m: &Monomial,
) -> Result<(i64, Vec<Rat>), Error> {
    let degree = monomial_degree(generators, m);
    // expand the monomial into a flat list of generator factors
    let mut factors: Vec<&QuotientGradedPoint> = Vec::new();
    for &(g, p) in m {
        for _ in 0..p {
            factors.push(&generators[g].1);
        }
    }
    assert!(!factors.is_empty());
    // running element: map class -> coefficient at the current degree
    let mut current: BTreeMap<QuotientGradedPoint, Rat> = BTreeMap::new();
    current.insert(factors[0].clone(), rat(1));
    let mut cur_degree = factors[0].degree;
    for f in &factors[1..] {
        let next_degree = cur_degree + f.degree;
        let trunc = Rat::new(1.into(), next_degree.into());
        let mut next: BTreeMap<QuotientGradedPoint, Rat> = BTreeMap::new();
        for (cls, coeff) in &current {
            for (term, mult) in quotient_multiply(lift, tri, cls, f, &trunc)? {
                debug_assert!(term.height.is_zero());
                *next.entry(term).or_insert_with(Rat::zero) += coeff * rat(mult);
            }
        }
        current = next;
        cur_degree = next_degree;
    }
    debug_assert_eq!(cur_degree, degree);
    let basis = &class_basis_by_degree[usize::try_from(degree).unwrap() - 1];
    let mut vec = vec![Rat::zero(); basis.len()];
    for (cls, coeff) in current {
        let idx = basis
            .iter()
            .position(|b| b.nums == cls.nums)
            .ok_or_else(|| Error::invalid("product class missing from basis"))?;
        vec[idx] += coeff;
    }
    Ok((degree, vec))
}

/// Computes Hilbert dimensions, a minimal generating set and all linear
/// relations among generator monomials, degree by degree up to the bound.
///
/// Generator choice is deterministic: within a degree, candidate classes
/// are tried in ascending lexicographic order of their nonzero normal
/// forms, with the zero class last.
pub fn ring_presentation_mod_t(
    lift: &QuasiPeriodicLift,
    tri: &PeriodicTriangulation,
    max_degree: i64,
) -> Result<TruncatedRingPresentation, Error> {
    if max_degree < 1 {
        return Err(Error::invalid("max_degree must be at least 1"));
    }
    let mut class_basis_by_degree = Vec::new();
    for d in 1..=max_degree {
        class_basis_by_degree.push(class_basis(lift, tri, d)?);
    }
    let hilbert: Vec<usize> = class_basis_by_degree.iter().map(|b| b.len()).collect();

    let mut generators: Vec<(i64, QuotientGradedPoint)> = Vec::new();
    let mut relations: Vec<Relation> = Vec::new();

    for d in 1..=max_degree {
        let basis = class_basis_by_degree[(d - 1) as usize].clone();
        let dim = basis.len();
        // all monomials of total degree d in the current generators
        let monomials = monomials_of_degree(&generators, d);
        let mut vectors: Vec<Vec<Rat>> = Vec::new();
        for m in &monomials {
            let (_, v) = monomial_vector(lift, tri, &generators, &class_basis_by_degree, m)?;
            vectors.push(v);
        }
        // record relations: kernel of the monomial matrix
        if !monomials.is_empty() {
            let mat: Vec<Vec<Rat>> = (0..dim)
                .map(|c| vectors.iter().map(|v| v[c].clone()).collect())
                .collect();
            for ker in crate::linalg::kernel(&mat) {
                let terms: Vec<(Rat, Monomial)> = ker
                    .iter()
                    .zip(&monomials)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, m)| (c.clone(), m.clone()))
                    .collect();
                if !terms.is_empty() {
                    relations.push(Relation { degree: d, terms });
                }
            }
        }
        // extend to a spanning set with new generators
        let mut span = vectors.clone();
        let mut spanned = rank_of(&span);
        if spanned < dim {
            // candidates: nonzero normal forms ascending, zero class last
            let mut candidates: Vec<&QuotientGradedPoint> = basis
                .iter()
                .filter(|c| c.nums[..c.nums.len() - 1].iter().any(|&x| x != 0))
                .collect();
            candidates.extend(
                basis
                    .iter()
                    .filter(|c| c.nums[..c.nums.len() - 1].iter().all(|&x| x == 0)),
            );
            for cand in candidates {
                if spanned == dim {
                    break;
                }
                let mut unit = vec![Rat::zero(); dim];
                let idx = basis.iter().position(|b| b == cand).unwrap();
                unit[idx] = rat(1);
                span.push(unit.clone());
                let r = rank_of(&span);
                if r > spanned {
                    spanned = r;
                    generators.push((d, cand.clone()));
                } else {
                    span.pop();
                }
            }
            if spanned < dim {
                return Err(Error::invalid(format!(
                    "degree {d} cannot be spanned (rank {spanned} of {dim})"
                )));
            }
        }
    }
    Ok(TruncatedRingPresentation {
        max_degree,
        class_basis: class_basis_by_degree,
        hilbert,
        generators,
        relations,
    })
}

fn rank_of(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// All monomials of the given total degree in the generator list.
fn monomials_of_degree(generators: &[(i64, QuotientGradedPoint)], degree: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut stack: Monomial = Vec::new();
    fn go(
        generators: &[(i64, QuotientGradedPoint)],
        from: usize,
        remaining: i64,
        stack: &mut Monomial,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            if !stack.is_empty() {
                out.push(stack.clone());
            }
            return;
        }
        for g in from..generators.len() {
            let gd = generators[g].0;
            let mut p = 1u32;
            while i64::from(p) * gd <= remaining {
                stack.push((g, p));
                go(generators, g + 1, remaining - i64::from(p) * gd, stack, out);
                stack.pop();
                p += 1;
            }
        }
    }
    go(generators, 0, degree, &mut stack, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::{genus5_fixture, node_fixture};
    use crate::rat::frac;

    fn qpoint(degree: i64, nums: Vec<i64>, height: Rat) -> QuotientGradedPoint {
        QuotientGradedPoint {
            degree,
            nums,
            height,
        }
    }

    #[test]
    fn node_normal_forms() {
        let (lift, tri) = node_fixture();
        // (2/3, 2/3) in degree 3 is already canonical, height 0
        let p = GradedPoint::new(3, vec![2, 2]).unwrap();
        let nf = class_normal_form(&lift, &tri, &p).unwrap();
        assert_eq!(nf.nums, vec![2, 2]);
        assert!(nf.height.is_zero());
        // its γ = -1 translate normalizes back to the same class
        let shifted = translate_rep(&lift, 3, &[2, 2], &[-1]);
        assert_eq!(shifted, vec![-1, 2 - 4 + 3]); // second coord (2/3) + 2*(2/3)(-1) + 1 = 1/3
        let nf2 = class_normal_form(
            &lift,
            &tri,
            &GradedPoint::new(3, shifted).unwrap(),
        )
        .unwrap();
        assert_eq!(nf2, nf);
        // (1/3, 1/3) in degree 3: itself, height 0
        let c = class_normal_form(&lift, &tri, &GradedPoint::new(3, vec![1, 1]).unwrap()).unwrap();
        assert_eq!(c.nums, vec![1, 1]);
        assert!(c.height.is_zero());
    }

    #[test]
    fn normal_form_rejects_points_below_graph() {
        let (lift, tri) = node_fixture();
        let below = GradedPoint::new(2, vec![1, 0]).unwrap(); // (1/2, 0), φ = 1/2
        assert!(class_normal_form(&lift, &tri, &below).is_err());
    }

    #[test]
    fn height_is_translation_invariant() {
        let (lift, tri) = node_fixture();
        let p = GradedPoint::new(2, vec![1, 3]).unwrap(); // (1/2, 3/2), height 1
        let base = class_normal_form(&lift, &tri, &p).unwrap();
        for g in -3..=3i64 {
            let shifted = translate_rep(&lift, 2, &p.nums, &[g]);
            let nf = class_normal_form(&lift, &tri, &GradedPoint::new(2, shifted).unwrap())
                .unwrap();
            assert_eq!(nf.height, base.height);
            assert_eq!(nf.nums, base.nums);
        }
    }

    #[test]
    fn node_ab_product() {
        let (lift, tri) = node_fixture();
        let a = qpoint(1, vec![0, 0], rat(0));
        let b = qpoint(2, vec![1, 1], rat(0));
        let terms = quotient_multiply(&lift, &tri, &a, &b, &frac(1, 3)).unwrap();
        let nums: Vec<Vec<i64>> = terms.iter().map(|(t, _)| t.nums.clone()).collect();
        assert_eq!(nums, vec![vec![1, 1], vec![2, 2]]);
        assert!(terms.iter().all(|(t, m)| t.height.is_zero() && *m == 1));
    }

    #[test]
    fn node_aa_product() {
        let (lift, tri) = node_fixture();
        let a = qpoint(1, vec![0, 0], rat(0));
        let terms = quotient_multiply(&lift, &tri, &a, &a, &frac(1, 2)).unwrap();
        // a² = (0,0) + 2·(1/2,1/2)
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].0.nums, vec![0, 0]);
        assert_eq!(terms[0].1, 1);
        assert_eq!(terms[1].0.nums, vec![1, 1]);
        assert_eq!(terms[1].1, 2);
    }

    #[test]
    fn quotient_multiply_is_symmetric() {
        let (lift, tri) = node_fixture();
        let pairs = [
            (qpoint(1, vec![0, 0], rat(0)), qpoint(2, vec![1, 1], rat(0))),
            (qpoint(2, vec![1, 1], rat(0)), qpoint(3, vec![1, 1], rat(0))),
            (qpoint(3, vec![2, 2], rat(0)), qpoint(3, vec![1, 1], rat(0))),
        ];
        for (a, b) in &pairs {
            let t = Rat::new(1.into(), (a.degree + b.degree).into());
            let ab = quotient_multiply(&lift, &tri, a, b, &t).unwrap();
            let ba = quotient_multiply(&lift, &tri, b, a, &t).unwrap();
            assert_eq!(ab, ba);
        }
    }

    #[test]
    fn superadditivity_weighted() {
        let (lift, tri) = node_fixture();
        let a = qpoint(1, vec![0, 1], rat(1)); // height 1
        let b = qpoint(2, vec![1, 2], frac(1, 2)); // (1/2, 1), height 1/2
        let terms = quotient_multiply(&lift, &tri, &a, &b, &rat(5)).unwrap();
        assert!(!terms.is_empty());
        for (t, _) in &terms {
            // (k+l) h >= k h_a + l h_b
            let lhs = rat(3) * &t.height;
            let rhs = rat(1) * &a.height + rat(2) * &b.height;
            assert!(lhs >= rhs, "term {:?}", t);
        }
    }

    #[test]
    fn node_presentation_finds_generators_and_relation() {
        let (lift, tri) = node_fixture();
        let pres = ring_presentation_mod_t(&lift, &tri, 6).unwrap();
        assert_eq!(pres.hilbert, vec![1, 2, 3, 4, 5, 6]);
        let gens: Vec<(i64, Vec<i64>)> = pres
            .generators
            .iter()
            .map(|(d, g)| (*d, g.nums.clone()))
            .collect();
        assert_eq!(
            gens,
            vec![(1, vec![0, 0]), (2, vec![1, 1]), (3, vec![1, 1])]
        );
        // abc - b³ - c² evaluates to zero mod t
        let combo = vec![
            (rat(1), vec![(0usize, 1u32), (1, 1), (2, 1)]),
            (rat(-1), vec![(1, 3)]),
            (rat(-1), vec![(2, 2)]),
        ];
        let v = pres.evaluate_combo(&lift, &tri, &combo).unwrap();
        assert!(v.iter().all(|x| x.is_zero()), "{v:?}");
        // and it lies in the computed degree-6 relation space
        assert!(pres.relations.iter().any(|r| r.degree == 6));
        // every recorded relation evaluates to zero
        for r in &pres.relations {
            let v = pres.evaluate_combo(&lift, &tri, &r.terms).unwrap();
            assert!(v.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn genus5_hilbert_dimensions() {
        let (lift, tri) = genus5_fixture();
        let pres = ring_presentation_mod_t(&lift, &tri, 2).unwrap();
        // 4 k² classes per degree
        assert_eq!(pres.hilbert, vec![4, 16]);
        for r in &pres.relations {
            let v = pres.evaluate_combo(&lift, &tri, &r.terms).unwrap();
            assert!(v.iter().all(|x| x.is_zero()));
        }
    }
}
