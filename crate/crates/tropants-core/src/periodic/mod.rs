//! The abelian-variety variant: quasi-periodic lifts over a polarized
//! tropical lattice, periodic triangulation checks, the quotient graded
//! ring, and the theta functional-equation exponent check.

mod dual;
mod ring;

pub use dual::{
    all_cells_compact, periodic_central_fiber, star_fan_rays, PeriodicComponent,
    PeriodicComponentReport,
};
pub use ring::{
    class_basis, class_normal_form, quotient_multiply, ring_presentation_mod_t, translate_rep,
    Monomial, QuotientGradedPoint, Relation, TruncatedRingPresentation,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{det_i, inverse, QMat};
use crate::rat::{rat, rat_floor, Rat};
use crate::tropical::{
    check_unimodular_regular, induced_subdivision, LiftFunction, Simplex, Triangulation,
    ValidationReport,
};
use crate::vecops::{add_i, dot_i, dot_qi, mat_apply_i, sub_i, to_q};
use crate::{IVec, QVec};

/// Polarization data: a finite-index sublattice `Γ ⊆ Z^n` and a positive
/// definite integral symmetric Gram matrix with `γ·gγ` even on `Γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizedTropicalAV {
    pub n: usize,
    pub gamma_basis: Vec<IVec>,
    pub gram: Vec<IVec>,
}

impl PolarizedTropicalAV {
    pub fn new(n: usize, gamma_basis: Vec<IVec>, gram: Vec<IVec>) -> Result<Self, Error> {
        if gamma_basis.len() != n || gamma_basis.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: gamma_basis.len(),
            });
        }
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: gram.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::invalid("gram matrix must be symmetric"));
                }
            }
        }
        for k in 1..=n {
            let minor: Vec<IVec> = (0..k).map(|i| gram[i][..k].to_vec()).collect();
            if !det_i(&minor).is_positive() {
                return Err(Error::invalid("gram matrix must be positive definite"));
            }
        }
        if det_i(&gamma_basis).is_zero() {
            return Err(Error::invalid("gamma basis is degenerate"));
        }
        let av = PolarizedTropicalAV {
            n,
            gamma_basis,
            gram,
        };
        // evenness on the basis and on pairwise sums
        let pairing_even = |v: &IVec| -> bool { dot_i(v, &mat_apply_i(&av.gram, v)) % 2 == 0 };
        for (i, b) in av.gamma_basis.iter().enumerate() {
            if !pairing_even(b) {
                return Err(Error::invalid(format!(
                    "gamma basis vector {b:?} has odd self-pairing"
                )));
            }
            for b2 in av.gamma_basis.iter().skip(i + 1) {
                if !pairing_even(&add_i(b, b2)) {
                    return Err(Error::invalid(format!(
                        "pairwise sum {b:?} + {b2:?} has odd self-pairing"
                    )));
                }
            }
        }
        Ok(av)
    }

    /// Matrix with the basis vectors as columns.
    fn basis_matrix(&self) -> QMat {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| rat(self.gamma_basis[c][r])).collect())
            .collect()
    }

    /// Coordinates of a rational vector in the gamma basis.
    pub fn basis_coords(&self, v: &[Rat]) -> QVec {
        let inv = inverse(&self.basis_matrix()).expect("gamma basis is invertible");
        inv.iter().map(|row| crate::vecops::dot_q(row, v)).collect()
    }

    /// Whether an integer vector lies in `Γ`.
    pub fn contains(&self, v: &[i64]) -> bool {
        self.basis_coords(&to_q(v))
            .iter()
            .all(crate::rat::is_integer)
    }

    /// The lattice translate taking `v` into the half-open fundamental cell
    /// `{B t : t ∈ [0,1)^n}`: returns `γ ∈ Γ` with `v - γ` in the cell.
    pub fn fundamental_translate(&self, v: &[Rat]) -> IVec {
        let t = self.basis_coords(v);
        let m: IVec = t
            .iter()
            .map(|x| i64::try_from(&rat_floor(x)).expect("coordinate overflow"))
            .collect();
        let mut g = vec![0i64; self.n];
        for (c, &mc) in m.iter().enumerate() {
            for r in 0..self.n {
                g[r] += mc * self.gamma_basis[c][r];
            }
        }
        g
    }

    /// `γ · g γ'`.
    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        dot_i(a, &mat_apply_i(&self.gram, b))
    }

    /// `½ γ·gγ`, integral for `γ ∈ Γ`.
    pub fn half_self_pairing(&self, gamma: &[i64]) -> i64 {
        let p = self.pair(gamma, gamma);
        debug_assert_eq!(p % 2, 0, "odd self-pairing on a lattice vector");
        p / 2
    }

    /// Index `[Z^n : Γ] = |det B|`.
    pub fn index(&self) -> i64 {
        let d = det_i(&self.gamma_basis);
        i64::try_from(&d.to_integer()).unwrap().abs()
    }
}

/// Quasi-periodic integer lift: values on a fundamental set, extended
/// everywhere by `φ(v+γ) = φ(v) + v·gγ + ½γ·gγ`.
#[derive(Debug, Clone)]
pub struct QuasiPeriodicLift {
    pub av: PolarizedTropicalAV,
    pub base_values: Vec<(IVec, i64)>,
}

impl QuasiPeriodicLift {
    pub fn new(av: PolarizedTropicalAV, base_values: Vec<(IVec, i64)>) -> Result<Self, Error> {
        if base_values.is_empty() {
            return Err(Error::EmptyInput("quasi-periodic base values"));
        }
        for (p, _) in &base_values {
            if p.len() != av.n {
                return Err(Error::DimensionMismatch {
                    expected: av.n,
                    got: p.len(),
                });
            }
        }
        let lift = QuasiPeriodicLift { av, base_values };
        // consistency: equivalent base points must satisfy the extension law
        for i in 0..lift.base_values.len() {
            for j in (i + 1)..lift.base_values.len() {
                let (p, vp) = &lift.base_values[i];
                let (q, vq) = &lift.base_values[j];
                let diff = sub_i(q, p);
                if lift.av.contains(&diff) {
                    let expect = vp + lift.av.pair(p, &diff) + lift.av.half_self_pairing(&diff);
                    if expect != *vq {
                        return Err(Error::InconsistentLift(format!(
                            "value at {q:?} is {vq}, but quasi-periodicity from {p:?} forces \
                             {p:?}·g{diff:?} + ½{diff:?}·g{diff:?} + {vp} = {expect}"
                        )));
                    }
                }
            }
        }
        Ok(lift)
    }

    /// Value of the extension at any lattice point.
    pub fn value(&self, v: &[i64]) -> Result<i64, Error> {
        for (p, val) in &self.base_values {
            let diff = sub_i(v, p);
            if self.av.contains(&diff) {
                return Ok(val + self.av.pair(p, &diff) + self.av.half_self_pairing(&diff));
            }
        }
        Err(Error::InconsistentLift(format!(
            "no base point is Γ-equivalent to {v:?}"
        )))
    }
}

/// Explicit table of extended values over a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable {
    pub n: usize,
    pub values: BTreeMap<IVec, i64>,
}

impl ValueTable {
    pub fn value(&self, v: &[i64]) -> Option<i64> {
        self.values.get(v).copied()
    }

    /// Replaces one entry; used by negative-control tests.
    pub fn corrupt(&mut self, v: &[i64], new_value: i64) {
        self.values.insert(v.to_vec(), new_value);
    }

    pub fn to_lift(&self) -> Result<LiftFunction, Error> {
        LiftFunction::new(self.n, self.values.iter().map(|(p, &v)| (p.clone(), v)))
    }
}

/// Extends the lift to every lattice point of a box window.
pub fn extend_lift(lift: &QuasiPeriodicLift, window: &[(i64, i64)]) -> Result<ValueTable, Error> {
    let n = lift.av.n;
    if window.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: window.len(),
        });
    }
    let mut values = BTreeMap::new();
    let mut cursor: IVec = window.iter().map(|&(a, _)| a).collect();
    'scan: loop {
        values.insert(cursor.clone(), lift.value(&cursor)?);
        for c in 0..n {
            cursor[c] += 1;
            if cursor[c] <= window[c].1 {
                continue 'scan;
            }
            cursor[c] = window[c].0;
        }
        break;
    }
    Ok(ValueTable { n, values })
}

/// Result of the theta functional-equation exponent check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaCheck {
    pub ok: bool,
    /// First point where the exponent identity fails, if any.
    pub failure_at: Option<IVec>,
}

/// Verifies the exponent identity `φ(v+γ) = φ(v) + v·gγ + ½γ·gγ` on every
/// window point of the table for which both sides are tabulated. This is
/// the coefficient-matching content of the theta functional equation under
/// the reindexing `v ↦ v - γ`.
pub fn theta_exponent_check(
    table: &ValueTable,
    av: &PolarizedTropicalAV,
    gamma: &[i64],
    window: &[(i64, i64)],
) -> Result<ThetaCheck, Error> {
    if !av.contains(gamma) {
        return Err(Error::invalid(format!("{gamma:?} is not in the lattice")));
    }
    let n = av.n;
    let mut cursor: IVec = window.iter().map(|&(a, _)| a).collect();
    'scan: loop {
        let shifted = add_i(&cursor, gamma);
        if let (Some(a), Some(b)) = (table.value(&cursor), table.value(&shifted)) {
            let expect = a + av.pair(&cursor, gamma) + av.half_self_pairing(gamma);
            if b != expect {
                return Ok(ThetaCheck {
                    ok: false,
                    failure_at: Some(cursor),
                });
            }
        }
        for c in 0..n {
            cursor[c] += 1;
            if cursor[c] <= window[c].1 {
                continue 'scan;
            }
            cursor[c] = window[c].0;
        }
        break;
    }
    Ok(ThetaCheck {
        ok: true,
        failure_at: None,
    })
}

/// Fixture triangulation of the fundamental domain: simplices given by
/// vertex coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicTriangulation {
    pub triangles: Vec<Vec<IVec>>,
}

impl PeriodicTriangulation {
    pub fn cells_per_domain(&self) -> usize {
        self.triangles.len()
    }
}

/// Bounding box of the fundamental cell, expanded by `margin` copies on
/// each side.
pub(crate) fn domain_window(av: &PolarizedTropicalAV, margin: i64) -> Vec<(i64, i64)> {
    let n = av.n;
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    // corners of the fundamental cell are sums of subsets of basis vectors
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
            lo[r] = lo[r].min(corner[r]);
            hi[r] = hi[r].max(corner[r]);
        }
    }
    (0..n)
        .map(|r| {
            let w = hi[r] - lo[r];
            (lo[r] - margin * w, hi[r] + margin * w)
        })
        .collect()
}

/// Validation of a periodic triangulation against the induced subdivision
/// of the extended lift, on a window three fundamental domains wide.
#[derive(Debug, Clone)]
pub struct PeriodicValidation {
    pub window_report: ValidationReport,
    pub periodic: bool,
    pub cells_per_domain: usize,
    pub failures: Vec<String>,
}

impl PeriodicValidation {
    pub fn pass(&self) -> bool {
        self.window_report.pass() && self.periodic && self.failures.is_empty()
    }
}

/// Checks Γ-periodicity, unimodularity, regularity and strict creases of
/// the fixture triangulation, delegating wall checks to the aperiodic
/// validator on a 3x-fundamental-domain window.
pub fn periodic_subdivision_check(
    lift: &QuasiPeriodicLift,
    tri: &PeriodicTriangulation,
) -> Result<PeriodicValidation, Error> {
    let av = &lift.av;
    let n = av.n;
    let window = domain_window(av, 1);
    let table = extend_lift(lift, &window)?;
    let window_lift = table.to_lift()?;
    let sub = induced_subdivision(&window_lift)?;
    let mut failures = Vec::new();

    // every subdivision cell whose barycenter lies in the fundamental cell
    // must be a γ-translate of a fixture triangle, and all fixture
    // triangles must appear
    let mut central_cells: Vec<Vec<IVec>> = Vec::new();
    for cell in &sub.cells {
        let pts: Vec<&IVec> = cell.point_ids.iter().map(|&i| &sub.points[i]).collect();
        let k = rat(pts.len() as i64);
        let bary: QVec = (0..n)
            .map(|c| {
                pts.iter()
                    .map(|p| rat(p[c]))
                    .fold(Rat::zero(), |a, b| a + b)
                    / &k
            })
            .collect();
        let t = av.basis_coords(&bary);
        if t.iter().all(|x| !x.is_negative() && *x < rat(1)) {
            let mut sorted: Vec<IVec> = pts.iter().map(|p| (*p).clone()).collect();
            sorted.sort();
            central_cells.push(sorted);
        }
    }
    central_cells.sort();
    if central_cells.len() != tri.triangles.len() {
        failures.push(format!(
            "induced subdivision has {} cells per fundamental domain, fixture has {}",
            central_cells.len(),
            tri.triangles.len()
        ));
    }
    // match fixture triangles to central cells up to Γ
    let normalize = |cell: &[IVec]| -> Vec<IVec> {
        // translate by the fundamental translate of the barycenter
        let k = rat(cell.len() as i64);
        let bary: QVec = (0..n)
            .map(|c| {
                cell.iter()
                    .map(|p| rat(p[c]))
                    .fold(Rat::zero(), |a, b| a + b)
                    / &k
            })
            .collect();
        let g = av.fundamental_translate(&bary);
        let mut out: Vec<IVec> = cell.iter().map(|p| sub_i(p, &g)).collect();
        out.sort();
        out
    };
    let mut fixture_normalized: Vec<Vec<IVec>> = tri
        .triangles
        .iter()
        .map(|t| normalize(t))
        .collect();
    fixture_normalized.sort();
    let mut central_normalized: Vec<Vec<IVec>> =
        central_cells.iter().map(|c| normalize(c)).collect();
    central_normalized.sort();
    if fixture_normalized != central_normalized {
        failures.push("fixture triangles do not match the induced subdivision mod Γ".to_string());
    }

    // Γ-periodicity of the subdivision inside the window
    let all_cells: std::collections::BTreeSet<Vec<IVec>> = sub
        .cells
        .iter()
        .map(|cell| {
            let mut pts: Vec<IVec> = cell.point_ids.iter().map(|&i| sub.points[i].clone()).collect();
            pts.sort();
            pts
        })
        .collect();
    let mut periodic = true;
    for cell in &central_cells {
        for b in &av.gamma_basis {
            for sign in [1i64, -1] {
                let translated: Vec<IVec> = cell
                    .iter()
                    .map(|p| add_i(p, &crate::vecops::scale_i(sign, b)))
                    .collect();
                // only check translates fully inside the window
                let inside = translated.iter().all(|p| {
                    p.iter()
                        .zip(&window)
                        .all(|(&x, &(lo, hi))| x >= lo && x <= hi)
                });
                if inside && !all_cells.contains(&translated) {
                    periodic = false;
                    failures.push(format!(
                        "cell {cell:?} translated by {sign}*{b:?} is not a subdivision cell"
                    ));
                }
            }
        }
    }

    // aperiodic validation (unimodularity, regularity, creases) on the
    // window triangulation assembled from all subdivision cells
    let window_report = {
        let points = sub.points.clone();
        let index: BTreeMap<IVec, usize> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut cells = Vec::new();
        let mut simplicial = true;
        for cell in &sub.cells {
            if cell.point_ids.len() != n + 1 {
                simplicial = false;
                break;
            }
            cells.push(Simplex::new(cell.point_ids.clone()));
        }
        let _ = index;
        if simplicial {
            let window_tri = Triangulation::new(n, points, cells)?;
            check_unimodular_regular(&window_lift, &window_tri)?
        } else {
            let mut r = ValidationReport::default();
            r.failures
                .push("induced subdivision has non-simplicial cells".to_string());
            r
        }
    };

    Ok(PeriodicValidation {
        window_report,
        periodic,
        cells_per_domain: central_cells.len(),
        failures,
    })
}

/// Value of the periodic piecewise-linear extension of the lift at any
/// rational point, located via the fixture triangulation.
pub fn eval_periodic_pl(
    lift: &QuasiPeriodicLift,
    tri: &PeriodicTriangulation,
    v: &[Rat],
) -> Result<Rat, Error> {
    let av = &lift.av;
    let n = av.n;
    let gamma = av.fundamental_translate(v);
    let v0: QVec = v
        .iter()
        .zip(&gamma)
        .map(|(x, &g)| x - rat(g))
        .collect();
    // phi(v) = phi(v0) + v0·gγ + ½γ·gγ
    let correction =
        dot_qi(&v0, &mat_apply_i(&av.gram, &gamma)) + rat(av.half_self_pairing(&gamma));
    // locate v0 in a translated fixture triangle
    let mut shifts: Vec<IVec> = Vec::new();
    let mut mask = vec![-1i64; n];
    'gen: loop {
        let mut s = vec![0i64; n];
        for (c, &mc) in mask.iter().enumerate() {
            for r in 0..n {
                s[r] += mc * av.gamma_basis[c][r];
            }
        }
        shifts.push(s);
        for c in 0..n {
            mask[c] += 1;
            if mask[c] <= 1 {
                continue 'gen;
            }
            mask[c] = -1;
        }
        break;
    }
    for t in &tri.triangles {
        for s in &shifts {
            let verts: Vec<QVec> = t.iter().map(|p| to_q(&add_i(p, s))).collect();
            if let Some(bary) = barycentric_in(&v0, &verts) {
                let mut value = Rat::zero();
                for (lam, p) in bary.iter().zip(t) {
                    let val = lift.value(&add_i(p, s))?;
                    value += lam * rat(val);
                }
                return Ok(value + correction);
            }
        }
    }
    Err(Error::invalid(format!(
        "point {v:?} is not covered by the fixture triangulation"
    )))
}

fn barycentric_in(p: &[Rat], verts: &[QVec]) -> Option<Vec<Rat>> {
    if crate::linalg::affine_rank(verts) + 1 != verts.len() {
        return None;
    }
    let n = p.len();
    let k = verts.len();
    let mut a: Vec<QVec> = (0..n)
        .map(|c| verts.iter().map(|v| v[c].clone()).collect())
        .collect();
    a.push(vec![Rat::from_integer(BigInt::from(1)); k]);
    let mut b: QVec = p.to_vec();
    b.push(Rat::from_integer(BigInt::from(1)));
    let sol = crate::linalg::solve(&a, &b)?;
    if sol.iter().all(|x| !x.is_negative()) {
        Some(sol)
    } else {
        None
    }
}

/// Genus of the closed surface glued from the periodic decomposition:
/// `1 + triangles/2`, since each pair-of-pants contributes -1 to the Euler
/// characteristic.
pub fn periodic_genus(tri: &PeriodicTriangulation) -> Result<usize, Error> {
    let k = tri.triangles.len();
    if k % 2 != 0 {
        return Err(Error::invalid(format!(
            "odd triangle count {k} cannot close up"
        )));
    }
    Ok(1 + k / 2)
}

/// The node fixture: `Γ = Z`, `g = (2)`, `φ(v) = v²`.
pub fn node_fixture() -> (QuasiPeriodicLift, PeriodicTriangulation) {
    let av = PolarizedTropicalAV::new(1, vec![vec![1]], vec![vec![2]]).unwrap();
    let lift = QuasiPeriodicLift::new(av, vec![(vec![0], 0)]).unwrap();
    let tri = PeriodicTriangulation {
        triangles: vec![vec![vec![0], vec![1]]],
    };
    (lift, tri)
}

/// The genus-5 fixture: `Γ = 2Z × 2Z`, Gram matrix `[[6,2],[2,6]]`, base
/// values `½v·gv` plus the parity-class constants `0, -2, -2, -3`, tiled
/// by eight unimodular triangles per fundamental domain.
pub fn genus5_fixture() -> (QuasiPeriodicLift, PeriodicTriangulation) {
    let av = PolarizedTropicalAV::new(
        2,
        vec![vec![2, 0], vec![0, 2]],
        vec![vec![6, 2], vec![2, 6]],
    )
    .unwrap();
    // ½ v·gv = 3x² + 2xy + 3y² with constants 0, -2, -2, -3 by parity class
    let base = vec![
        (vec![0, 0], 0),
        (vec![1, 0], 1),
        (vec![0, 1], 1),
        (vec![1, 1], 5),
    ];
    let lift = QuasiPeriodicLift::new(av, base).unwrap();
    let mut triangles = Vec::new();
    for i in 0..2i64 {
        for j in 0..2i64 {
            triangles.push(vec![vec![i, j], vec![i + 1, j], vec![i, j + 1]]);
            triangles.push(vec![vec![i + 1, j], vec![i, j + 1], vec![i + 1, j + 1]]);
        }
    }
    (lift, PeriodicTriangulation { triangles })
}
