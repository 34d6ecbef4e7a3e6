//! Regular subdivisions induced by integer lifts, their lexicographic
//! simplicial refinements, and the unimodularity/regularity validator.
//!
//! The lower-hull computation runs entirely in integer arithmetic: an affine
//! form through `n+1` lifted points is carried as Cramer numerators over a
//! common denominator, so support tests are exact i128 comparisons.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::Error;
use crate::linalg::affine_rank;
use crate::rat::{rat, Rat};
use crate::tropical::legendre::AffineForm;
use crate::tropical::lift::LiftFunction;
use crate::tropical::polytope::point_in_hull;
use crate::vecops::to_q;
use crate::{IVec, QVec};

/// A simplex referencing vertices in an ambient point list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Simplex {
    pub vertex_ids: Vec<usize>,
}

impl Simplex {
    pub fn new(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        Simplex { vertex_ids: ids }
    }
}

/// Maximal cell of a polyhedral subdivision: all support points on the cell,
/// with the affine form the lifted function takes there.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub point_ids: Vec<usize>,
    pub form: AffineForm,
}

/// Polyhedral subdivision of the support hull induced by a lift.
#[derive(Debug, Clone, PartialEq)]
pub struct Subdivision {
    pub dim: usize,
    pub points: Vec<IVec>,
    pub values: Vec<i64>,
    pub cells: Vec<Cell>,
}

impl Subdivision {
    pub fn is_simplicial(&self) -> bool {
        self.cells.iter().all(|c| c.point_ids.len() == self.dim + 1)
    }
}

/// Simplicial complex on lattice points, with its interior wall list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub dim: usize,
    pub points: Vec<IVec>,
    pub cells: Vec<Simplex>,
    /// Pairs of cell indices sharing a facet.
    pub adjacency: Vec<(usize, usize)>,
}

impl Triangulation {
    pub fn new(dim: usize, points: Vec<IVec>, cells: Vec<Simplex>) -> Result<Self, Error> {
        for c in &cells {
            if c.vertex_ids.len() != dim + 1 {
                return Err(Error::InvalidTriangulation(format!(
                    "cell {:?} does not have {} vertices",
                    c.vertex_ids,
                    dim + 1
                )));
            }
            if let Some(&bad) = c.vertex_ids.iter().find(|&&i| i >= points.len()) {
                return Err(Error::InvalidTriangulation(format!(
                    "vertex id {bad} out of range"
                )));
            }
        }
        let adjacency = walls(dim, &cells);
        Ok(Triangulation {
            dim,
            points,
            cells,
            adjacency,
        })
    }

    /// Affine form interpolating `values` on a cell, if nondegenerate.
    pub fn cell_form(&self, cell: &Simplex, values: &[i64]) -> Option<AffineForm> {
        let pts: Vec<(&IVec, i64)> = cell
            .vertex_ids
            .iter()
            .map(|&i| (&self.points[i], values[i]))
            .collect();
        affine_form_through(self.dim, &pts)
    }
}

fn walls(dim: usize, cells: &[Simplex]) -> Vec<(usize, usize)> {
    let mut by_facet: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, c) in cells.iter().enumerate() {
        for drop in 0..c.vertex_ids.len() {
            let mut f = c.vertex_ids.clone();
            f.remove(drop);
            by_facet.entry(f).or_default().push(ci);
        }
    }
    let _ = dim;
    let mut adj: Vec<(usize, usize)> = by_facet
        .values()
        .filter(|v| v.len() == 2)
        .map(|v| (v[0], v[1]))
        .collect();
    adj.sort_unstable();
    adj.dedup();
    adj
}

/// Normalized volume of a lattice simplex: `|det|` of its edge matrix, i.e.
/// `n!` times the Euclidean volume. Returns `(0, true)` when degenerate.
pub fn normalized_volume(simplex: &Simplex, points: &[IVec]) -> (i64, bool) {
    let ids = &simplex.vertex_ids;
    let base = &points[ids[0]];
    let rows: Vec<Vec<i128>> = ids[1..]
        .iter()
        .map(|&i| {
            points[i]
                .iter()
                .zip(base)
                .map(|(a, b)| i128::from(a - b))
                .collect()
        })
        .collect();
    let d = det_i128(&rows).abs();
    let v = i64::try_from(d).expect("volume exceeds i64");
    (v, v == 0)
}

pub(crate) fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut acc = 0i128;
            for k in 0..n {
                if m[0][k] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = (1..n)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != k)
                            .map(|c| m[r][c])
                            .collect()
                    })
                    .collect();
                let s = if k % 2 == 0 { 1 } else { -1 };
                acc += s * m[0][k] * det_i128(&minor);
            }
            acc
        }
    }
}

/// Affine form through `n+1` lifted lattice points (by exact interpolation).
fn affine_form_through(dim: usize, pts: &[(&IVec, i64)]) -> Option<AffineForm> {
    debug_assert_eq!(pts.len(), dim + 1);
    let mat: Vec<Vec<i128>> = pts
        .iter()
        .map(|(w, _)| {
            let mut row: Vec<i128> = w.iter().map(|&x| i128::from(x)).collect();
            row.push(1);
            row
        })
        .collect();
    let den = det_i128(&mat);
    if den == 0 {
        return None;
    }
    let mut coeffs = Vec::with_capacity(dim + 1);
    for col in 0..=dim {
        let m: Vec<Vec<i128>> = pts
            .iter()
            .map(|(w, h)| {
                let mut row: Vec<i128> = w.iter().map(|&x| i128::from(x)).collect();
                row.push(1);
                row[col] = i128::from(*h);
                row
            })
            .collect();
        coeffs.push(det_i128(&m));
    }
    let denb = num_bigint::BigInt::from(den);
    let gradient: QVec = coeffs[..dim]
        .iter()
        .map(|&c| Rat::new(num_bigint::BigInt::from(c), denb.clone()))
        .collect();
    let constant = Rat::new(num_bigint::BigInt::from(coeffs[dim]), denb);
    Some(AffineForm { gradient, constant })
}

/// The regular subdivision induced by a lift: maximal faces of the lower
/// convex hull of `{(w, lift(w))}`, projected to the support hull.
///
/// Always defined for a full-dimensional support.
pub fn induced_subdivision(lift: &LiftFunction) -> Result<Subdivision, Error> {
    let n = lift.dim;
    let points = lift.support_vec();
    let values: Vec<i64> = points.iter().map(|p| lift.value(p).unwrap()).collect();
    let qpts: Vec<QVec> = points.iter().map(|p| to_q(p)).collect();
    let rank = affine_rank(&qpts);
    if rank != n {
        return Err(Error::NotFullDimensional { rank, dim: n });
    }
    let m = points.len();
    // i128 copies of the lifted points
    let wz: Vec<Vec<i128>> = points
        .iter()
        .map(|p| p.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let hz: Vec<i128> = values.iter().map(|&v| i128::from(v)).collect();

    // enumerate (n+1)-subsets; each supporting interpolation is a lower face
    let mut cells: BTreeMap<Vec<i128>, Vec<usize>> = BTreeMap::new();
    let mut subset = vec![0usize; n + 1];
    super::polytope::enumerate_subsets(m, n + 1, &mut subset, 0, 0, &mut |ids| {
        // Cramer data for the interpolating form
        let mat: Vec<Vec<i128>> = ids
            .iter()
            .map(|&i| {
                let mut row = wz[i].clone();
                row.push(1);
                row
            })
            .collect();
        let mut den = det_i128(&mat);
        if den == 0 {
            return;
        }
        let mut nums = Vec::with_capacity(n + 1);
        for col in 0..=n {
            let m2: Vec<Vec<i128>> = ids
                .iter()
                .map(|&i| {
                    let mut row = wz[i].clone();
                    row.push(1);
                    row[col] = hz[i];
                    row
                })
                .collect();
            nums.push(det_i128(&m2));
        }
        if den < 0 {
            den = -den;
            for x in nums.iter_mut() {
                *x = -*x;
            }
        }
        // supporting from below: value(w_j) >= form(w_j) for all j
        let mut contact = Vec::new();
        for j in 0..m {
            let lhs: i128 = nums[..n]
                .iter()
                .zip(&wz[j])
                .map(|(a, w)| a * w)
                .sum::<i128>()
                + nums[n];
            let rhs = den * hz[j];
            if lhs > rhs {
                return; // not a lower supporting form
            }
            if lhs == rhs {
                contact.push(j);
            }
        }
        // canonical key: normalized (den, nums)
        let g = nums
            .iter()
            .fold(den, |acc, &x| gcd_i128(acc, x));
        let mut key = vec![den / g];
        key.extend(nums.iter().map(|&x| x / g));
        cells.entry(key).or_insert(contact);
    });

    let mut out: Vec<Cell> = cells
        .into_iter()
        .map(|(key, point_ids)| {
            let den = num_bigint::BigInt::from(key[0]);
            let gradient: QVec = key[1..=n]
                .iter()
                .map(|&c| Rat::new(num_bigint::BigInt::from(c), den.clone()))
                .collect();
            let constant = Rat::new(num_bigint::BigInt::from(key[n + 1]), den);
            Cell {
                point_ids,
                form: AffineForm { gradient, constant },
            }
        })
        .collect();
    out.sort_by(|a, b| a.point_ids.cmp(&b.point_ids));
    Ok(Subdivision {
        dim: n,
        points,
        values,
        cells: out,
    })
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 {
        1
    } else {
        a
    }
}

/// Simplicial refinement of the induced subdivision.
///
/// Cells that are already simplices pass through; others are split by
/// lexicographic incremental insertion, so every support point of the cell
/// is used and the result is deterministic.
pub fn induced_triangulation(lift: &LiftFunction) -> Result<Triangulation, Error> {
    let sub = induced_subdivision(lift)?;
    let mut cells = Vec::new();
    for cell in &sub.cells {
        if cell.point_ids.len() == sub.dim + 1 {
            cells.push(Simplex::new(cell.point_ids.clone()));
        } else {
            let local: Vec<QVec> = cell.point_ids.iter().map(|&i| to_q(&sub.points[i])).collect();
            for tri in lex_triangulate(&local) {
                cells.push(Simplex::new(
                    tri.iter().map(|&k| cell.point_ids[k]).collect(),
                ));
            }
        }
    }
    cells.sort();
    Triangulation::new(sub.dim, sub.points.clone(), cells)
}

/// Lexicographic incremental triangulation of a point configuration.
///
/// Inserts points in lex order; exterior points cone over visible boundary
/// facets, interior points stellarly subdivide the simplices containing
/// them. Uses every input point whose insertion is nondegenerate (interior
/// lattice points included).
pub fn lex_triangulate(points: &[QVec]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].cmp(&points[b]));

    let mut inserted: Vec<usize> = Vec::new();
    let mut simplices: Vec<Vec<usize>> = Vec::new();

    for &p in &order {
        if inserted.is_empty() {
            inserted.push(p);
            simplices.push(vec![p]);
            continue;
        }
        let hull_pts: Vec<QVec> = inserted.iter().map(|&i| points[i].clone()).collect();
        let cur_dim = affine_rank(&hull_pts);
        let mut with_p = hull_pts.clone();
        with_p.push(points[p].clone());
        if affine_rank(&with_p) > cur_dim {
            // dimension jump: cone over the whole current complex
            simplices = simplices
                .iter()
                .map(|s| {
                    let mut t = s.clone();
                    t.push(p);
                    t.sort_unstable();
                    t
                })
                .collect();
        } else if point_in_hull(&points[p], &hull_pts) {
            stellar_insert(points, &mut simplices, p);
        } else {
            cone_visible(points, &mut simplices, p);
        }
        inserted.push(p);
    }
    simplices.retain(|s| s.len() >= 1);
    simplices.sort();
    simplices
}

/// Splits every simplex whose hull contains `p` at `p`.
fn stellar_insert(points: &[QVec], simplices: &mut Vec<Vec<usize>>, p: usize) {
    let mut out = Vec::new();
    for s in simplices.iter() {
        let verts: Vec<QVec> = s.iter().map(|&i| points[i].clone()).collect();
        let bary = barycentric(&points[p], &verts);
        match bary {
            Some(coords) if coords.iter().all(|c| !num_traits::Signed::is_negative(c)) => {
                // p in conv(s): cone over facets with nonzero opposite weight
                for (drop, c) in coords.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut t: Vec<usize> =
                        s.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, &v)| v).collect();
                    t.push(p);
                    t.sort_unstable();
                    if t.len() == s.len() {
                        out.push(t);
                    }
                }
            }
            _ => out.push(s.clone()),
        }
    }
    out.sort();
    out.dedup();
    *simplices = out;
}

/// Cones an exterior point over the boundary facets visible from it.
fn cone_visible(points: &[QVec], simplices: &mut Vec<Vec<usize>>, p: usize) {
    // boundary facets: faces of exactly one simplex
    let mut counts: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (si, s) in simplices.iter().enumerate() {
        if s.len() == 1 {
            counts.entry(s.clone()).or_default().push(si);
            continue;
        }
        for drop in 0..s.len() {
            let mut f = s.clone();
            f.remove(drop);
            counts.entry(f).or_default().push(si);
        }
    }
    let mut new_cells = Vec::new();
    for (facet, owners) in counts {
        if owners.len() != 1 {
            continue;
        }
        let owner = &simplices[owners[0]];
        if owner.len() == 1 {
            // 0-dimensional complex: the single point is the boundary
            new_cells.push({
                let mut t = owner.clone();
                t.push(p);
                t.sort_unstable();
                t
            });
            continue;
        }
        // visible iff p and the opposite vertex lie strictly on opposite
        // sides of the facet's affine hull (within the complex's hull space)
        let opposite = owner.iter().find(|v| !facet.contains(v)).unwrap();
        let fpts: Vec<QVec> = facet.iter().map(|&i| points[i].clone()).collect();
        if let Some(sep) = separates(&fpts, &points[*opposite], &points[p]) {
            if sep {
                let mut t = facet.clone();
                t.push(p);
                t.sort_unstable();
                new_cells.push(t);
            }
        }
    }
    simplices.extend(new_cells);
    simplices.sort();
    simplices.dedup();
}

/// Barycentric coordinates of `p` in the simplex `verts`, if affinely
/// independent.
fn barycentric(p: &QVec, verts: &[QVec]) -> Option<Vec<Rat>> {
    if affine_rank(verts) + 1 != verts.len() {
        return None;
    }
    let n = p.len();
    let k = verts.len();
    let mut a: Vec<QVec> = (0..n)
        .map(|c| verts.iter().map(|v| v[c].clone()).collect())
        .collect();
    a.push(vec![Rat::one(); k]);
    let mut b: QVec = p.clone();
    b.push(Rat::one());
    crate::linalg::solve(&a, &b)
}

/// Whether `x` and `y` lie strictly on opposite sides of `aff(facet)`,
/// measured inside the affine hull of `facet ∪ {x}`.
fn separates(facet: &[QVec], x: &QVec, y: &QVec) -> Option<bool> {
    // relative test: positive combination coordinates via barycentric in the
    // simplex facet ∪ {x}
    let mut verts = facet.to_vec();
    verts.push(x.clone());
    let bary = barycentric(y, &verts)?;
    let lx = bary.last().unwrap();
    Some(num_traits::Signed::is_negative(lx))
}

use num_traits::One;

/// Outcome of the unimodularity/regularity validation.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub structural_ok: bool,
    pub unimodular: bool,
    pub matches_induced: bool,
    pub strict_creases: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.structural_ok && self.unimodular && self.matches_induced && self.strict_creases
    }
}

/// Validates a candidate triangulation against the lift:
/// (a) every cell has normalized volume 1, (b) the cells agree with the
/// induced subdivision, (c) the lift is strictly creased across every
/// interior wall.
pub fn check_unimodular_regular(
    lift: &LiftFunction,
    tri: &Triangulation,
) -> Result<ValidationReport, Error> {
    let mut report = ValidationReport {
        structural_ok: true,
        unimodular: true,
        matches_induced: true,
        strict_creases: true,
        failures: Vec::new(),
    };
    let n = lift.dim;
    if tri.dim != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: tri.dim,
        });
    }
    // all triangulation points must be support points with values
    let values: Vec<i64> = {
        let mut v = Vec::with_capacity(tri.points.len());
        for p in &tri.points {
            match lift.value(p) {
                Some(x) => v.push(x),
                None => {
                    return Err(Error::NotInSupport(p.clone()));
                }
            }
        }
        v
    };

    // structural: nondegenerate cells, facet matching, volume bookkeeping
    let mut vol_sum = 0i64;
    for c in &tri.cells {
        let (v, degenerate) = normalized_volume(c, &tri.points);
        if degenerate {
            report.structural_ok = false;
            report
                .failures
                .push(format!("degenerate cell {:?}", c.vertex_ids));
        }
        vol_sum += v;
        if v != 1 {
            report.unimodular = false;
            report
                .failures
                .push(format!("cell {:?} has normalized volume {v}", c.vertex_ids));
        }
    }
    let hull = lift.hull()?;
    let hull_vol = hull.normalized_volume()?;
    if hull_vol != rat(vol_sum) {
        report.structural_ok = false;
        report.failures.push(format!(
            "cell volumes sum to {vol_sum}, hull has normalized volume {hull_vol}"
        ));
    }
    // every facet is shared by exactly two cells or lies on the hull boundary
    let facets = hull.facets()?;
    let mut by_facet: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for c in &tri.cells {
        for drop in 0..c.vertex_ids.len() {
            let mut f = c.vertex_ids.clone();
            f.remove(drop);
            *by_facet.entry(f).or_insert(0) += 1;
        }
    }
    for (f, count) in &by_facet {
        if *count > 2 {
            report.structural_ok = false;
            report
                .failures
                .push(format!("facet {f:?} is shared by {count} cells"));
        } else if *count == 1 {
            let on_boundary = facets.iter().any(|h| {
                f.iter().all(|&i| h.on_boundary(&to_q(&tri.points[i])))
            });
            if !on_boundary {
                report.structural_ok = false;
                report
                    .failures
                    .push(format!("interior facet {f:?} belongs to only one cell"));
            }
        }
    }

    // (b) exact cellwise match with the induced subdivision
    let sub = induced_subdivision(lift)?;
    let tri_cells: Vec<Vec<IVec>> = {
        let mut v: Vec<Vec<IVec>> = tri
            .cells
            .iter()
            .map(|c| {
                let mut pts: Vec<IVec> =
                    c.vertex_ids.iter().map(|&i| tri.points[i].clone()).collect();
                pts.sort();
                pts
            })
            .collect();
        v.sort();
        v
    };
    let sub_cells: Vec<Vec<IVec>> = {
        let mut v: Vec<Vec<IVec>> = sub
            .cells
            .iter()
            .map(|c| {
                let mut pts: Vec<IVec> =
                    c.point_ids.iter().map(|&i| sub.points[i].clone()).collect();
                pts.sort();
                pts
            })
            .collect();
        v.sort();
        v
    };
    if tri_cells != sub_cells {
        report.matches_induced = false;
        report.failures.push(format!(
            "triangulation has {} cells, induced subdivision has {} (cellwise mismatch)",
            tri_cells.len(),
            sub_cells.len()
        ));
    }

    // (c) strict creases across every interior wall
    for &(a, b) in &tri.adjacency {
        let fa = tri.cell_form(&tri.cells[a], &values);
        let fb = tri.cell_form(&tri.cells[b], &values);
        match (fa, fb) {
            (Some(fa), Some(fb)) => {
                if fa == fb {
                    report.strict_creases = false;
                    report.failures.push(format!(
                        "no crease across wall between cells {:?} and {:?}",
                        tri.cells[a].vertex_ids, tri.cells[b].vertex_ids
                    ));
                }
            }
            _ => {
                report.structural_ok = false;
                report.failures.push(format!(
                    "degenerate interpolation on cells {:?}/{:?}",
                    tri.cells[a].vertex_ids, tri.cells[b].vertex_ids
                ));
            }
        }
    }
    Ok(report)
}
