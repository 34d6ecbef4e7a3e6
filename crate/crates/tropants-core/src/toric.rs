//! Graded semigroup ring of the toric degeneration, its fan model and
//! central-fibre analysis.
//!
//! Ring elements live in `(1/k)Z^{n+1}` above the graph of the Legendre
//! dual; they are stored as integer numerator vectors over the common
//! denominator `k`, so products are literal vector sums.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::rat::{rat, Rat};
use crate::tropical::{DualCell, LiftFunction, PLFunction, Triangulation};
use crate::vecops::{primitive_of_q, sub_q, to_q};
use crate::{IVec, QVec};

/// Basis element of the degeneration ring in degree `k`: the point
/// `nums / k` of `(1/k)Z^{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GradedPoint {
    pub degree: i64,
    pub nums: IVec,
}

impl GradedPoint {
    pub fn new(degree: i64, nums: IVec) -> Result<Self, Error> {
        if degree <= 0 {
            return Err(Error::invalid("degree must be positive"));
        }
        Ok(GradedPoint { degree, nums })
    }

    /// Builds from rational coordinates, rejecting points outside
    /// `(1/k)Z^{n+1}` (in particular non-integral torus weights).
    pub fn from_rational(degree: i64, coords: &[Rat]) -> Result<Self, Error> {
        let k = rat(degree);
        let mut nums = Vec::with_capacity(coords.len());
        for c in coords {
            let scaled = c * &k;
            if !crate::rat::is_integer(&scaled) {
                return Err(Error::invalid(format!(
                    "coordinate {c} is not in (1/{degree})Z"
                )));
            }
            nums.push(
                i64::try_from(&scaled.to_integer()).map_err(|_| Error::invalid("overflow"))?,
            );
        }
        GradedPoint::new(degree, nums)
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

    pub fn last_coord(&self) -> Rat {
        Rat::new((*self.nums.last().unwrap()).into(), self.degree.into())
    }

    /// Height above the graph of `psi`.
    pub fn height(&self, psi: &PLFunction) -> Rat {
        self.last_coord() - psi.eval(&self.base_coords())
    }

    /// The `t`-action raises the last coordinate by `1/k`.
    pub fn t_shift(&self) -> GradedPoint {
        let mut nums = self.nums.clone();
        *nums.last_mut().unwrap() += 1;
        GradedPoint {
            degree: self.degree,
            nums,
        }
    }
}

/// Weight of the distinguished torus action: `k * v_{n+1}`.
///
/// Integrality is guaranteed by the numerator representation; points with a
/// fractional weight are rejected at construction.
pub fn cstar_weight(p: &GradedPoint) -> i64 {
    *p.nums.last().unwrap()
}

/// One graded piece of the ring, listed up to a height bound.
#[derive(Debug, Clone)]
pub struct RingSlice {
    pub degree: i64,
    pub height_bound: Rat,
    pub basis: Vec<(GradedPoint, Rat)>,
}

/// Basis of degree-`k` points with height at most `height_bound`.
///
/// `window` bounds the base coordinates; it is mandatory when the cell
/// decomposition has noncompact cells, otherwise it defaults to the
/// bounding box of the compact decomposition.
pub fn ring_basis(
    psi: &PLFunction,
    degree: i64,
    height_bound: &Rat,
    window: Option<&[(i64, i64)]>,
) -> Result<RingSlice, Error> {
    let n = psi.dim;
    if degree <= 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    let window: Vec<(i64, i64)> = match window {
        Some(w) => {
            if w.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: w.len(),
                });
            }
            w.to_vec()
        }
        None => {
            if psi.has_noncompact_cell() {
                return Err(Error::MissingWindow);
            }
            let mut lo = vec![i64::MAX; n];
            let mut hi = vec![i64::MIN; n];
            for c in &psi.cells {
                for v in &c.vertices {
                    for (i, x) in v.iter().enumerate() {
                        let f = i64::try_from(&crate::rat::rat_floor(x)).unwrap();
                        lo[i] = lo[i].min(f);
                        hi[i] = hi[i].max(f + 1);
                    }
                }
            }
            lo.into_iter().zip(hi).collect()
        }
    };
    let mut basis = Vec::new();
    // odometer over nums in [k*lo, k*hi]
    let lo: IVec = window.iter().map(|&(a, _)| a * degree).collect();
    let hi: IVec = window.iter().map(|&(_, b)| b * degree).collect();
    let mut cursor = lo.clone();
    'scan: loop {
        let base: QVec = cursor
            .iter()
            .map(|&a| Rat::new(a.into(), degree.into()))
            .collect();
        let psi_v = psi.eval(&base);
        // nums_{n+1} runs from ceil(k psi) while height <= bound
        let k_psi = &psi_v * rat(degree);
        let start = {
            let f = crate::rat::rat_floor(&k_psi);
            let mut s = i64::try_from(&f).map_err(|_| Error::invalid("window overflow"))?;
            if rat(s) < k_psi {
                s += 1;
            }
            s
        };
        let mut last = start;
        loop {
            let point = GradedPoint {
                degree,
                nums: {
                    let mut v = cursor.clone();
                    v.push(last);
                    v
                },
            };
            let h = point.height(psi);
            if h > *height_bound {
                break;
            }
            basis.push((point, h));
            last += 1;
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
    basis.sort();
    Ok(RingSlice {
        degree,
        height_bound: height_bound.clone(),
        basis,
    })
}

/// Product data: the underlying point, its height, and the `t`-power by
/// which it sits above the height-zero point of its ray.
#[derive(Debug, Clone)]
pub struct ProductPoint {
    pub point: GradedPoint,
    pub height: Rat,
    pub t_power: Rat,
}

/// Product of two graded points: numerators add, degrees add.
pub fn multiply(a: &GradedPoint, b: &GradedPoint, psi: &PLFunction) -> Result<ProductPoint, Error> {
    if a.nums.len() != b.nums.len() {
        return Err(Error::DimensionMismatch {
            expected: a.nums.len(),
            got: b.nums.len(),
        });
    }
    let point = GradedPoint {
        degree: a.degree + b.degree,
        nums: a.nums.iter().zip(&b.nums).map(|(x, y)| x + y).collect(),
    };
    let height = point.height(psi);
    let t_power = &height * rat(point.degree);
    Ok(ProductPoint {
        point,
        height,
        t_power,
    })
}

/// Maximal cone of the degeneration fan: primitive rays in `Z^{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanCone {
    pub rays: Vec<IVec>,
}

/// One cone `(1, p_i)` per triangulation cell.
pub fn build_fan(tri: &Triangulation) -> Vec<FanCone> {
    tri.cells
        .iter()
        .map(|cell| FanCone {
            rays: cell
                .vertex_ids
                .iter()
                .map(|&i| {
                    let mut r = vec![1i64];
                    r.extend_from_slice(&tri.points[i]);
                    r
                })
                .collect(),
        })
        .collect()
}

/// True iff the (simplicial, maximal) cone is unimodular.
pub fn smoothness_check(cone: &FanCone) -> Result<bool, Error> {
    let d = cone.rays.first().map(|r| r.len()).unwrap_or(0);
    if cone.rays.len() != d {
        return Err(Error::invalid(format!(
            "expected a simplicial maximal cone ({d} rays), got {}",
            cone.rays.len()
        )));
    }
    let det = crate::linalg::det_i(&cone.rays);
    Ok(det == rat(1) || det == rat(-1))
}

/// True iff the character `(1,0,...,0)` pairs to exactly 1 with every ray,
/// certifying that the superpotential restricts to the product of all chart
/// coordinates (up to the fixed sign convention).
pub fn chart_superpotential_check(cone: &FanCone) -> Result<bool, Error> {
    if !smoothness_check(cone)? {
        return Err(Error::invalid("chart check requires a smooth maximal cone"));
    }
    Ok(cone.rays.iter().all(|r| r[0] == 1))
}

/// Irreducible component of the central fibre, one per maximal dual cell.
#[derive(Debug, Clone)]
pub struct Component {
    pub label: IVec,
    pub compact: bool,
    pub surface: Option<ToricSurfaceId>,
}

/// Central-fibre decomposition: components and their wall adjacency.
#[derive(Debug, Clone)]
pub struct ComponentReport {
    pub components: Vec<Component>,
    /// Pairs of component indices whose cells share an (n-1)-dim wall.
    pub adjacency: Vec<(usize, usize)>,
}

/// Components of `W^{-1}(0)`: one per maximal cell of the dual
/// decomposition, with compactness flags and (for surfaces over the
/// standard pairing) toric surface names.
pub fn central_fiber(psi: &PLFunction) -> ComponentReport {
    let is_standard = psi
        .gram
        .iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)));
    let components = psi
        .cells
        .iter()
        .map(|cell| {
            let surface = if psi.dim == 2 && cell.is_compact() && is_standard {
                surface_id(cell).ok()
            } else {
                None
            };
            Component {
                label: cell.label.clone().unwrap_or_default(),
                compact: cell.is_compact(),
                surface,
            }
        })
        .collect();
    ComponentReport {
        components,
        adjacency: psi.wall_pairs(),
    }
}

/// A smooth complete toric surface presented by its cyclically ordered rays
/// and self-intersection cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToricSurfaceId {
    pub ray_cycle: Vec<IVec>,
    pub selfint: Vec<i64>,
    pub name: String,
}

/// Identifies the toric surface of a compact 2-dimensional cell via the
/// normal fan of the polygon.
pub fn surface_id(cell: &DualCell) -> Result<ToricSurfaceId, Error> {
    if !cell.is_compact() {
        return Err(Error::invalid("surface_id needs a compact cell"));
    }
    let rays = normal_fan_rays(&cell.vertices)?;
    surface_from_ray_cycle(rays)
}

/// Outward normals of a convex polygon's edges, in counterclockwise cyclic
/// order, as primitive integer vectors.
pub fn normal_fan_rays(vertices: &[QVec]) -> Result<Vec<IVec>, Error> {
    if vertices.len() < 3 {
        return Err(Error::invalid("polygon needs at least 3 vertices"));
    }
    let mut verts = vertices.to_vec();
    // centroid for angular sorting
    let m = rat(verts.len() as i64);
    let cx = verts
        .iter()
        .map(|v| v[0].clone())
        .fold(Rat::zero(), |a, b| a + b)
        / &m;
    let cy = verts
        .iter()
        .map(|v| v[1].clone())
        .fold(Rat::zero(), |a, b| a + b)
        / &m;
    let centroid = vec![cx, cy];
    verts.sort_by(|a, b| angular_cmp(&sub_q(a, &centroid), &sub_q(b, &centroid)));
    let k = verts.len();
    let mut rays = Vec::with_capacity(k);
    for i in 0..k {
        let e = sub_q(&verts[(i + 1) % k], &verts[i]);
        // rotate -90 degrees for the outward normal of a CCW polygon
        let normal = vec![e[1].clone(), -e[0].clone()];
        rays.push(primitive_of_q(&normal));
    }
    Ok(rays)
}

/// Angular comparison of nonzero rational plane vectors, counterclockwise
/// from the positive x-axis.
fn angular_cmp(a: &[Rat], b: &[Rat]) -> std::cmp::Ordering {
    let half = |v: &[Rat]| -> u8 {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    // same half-plane: cross product decides
    let cross = &a[0] * &b[1] - &a[1] * &b[0];
    if cross.is_positive() {
        std::cmp::Ordering::Less
    } else if cross.is_negative() {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Equal
    }
}

/// Builds the surface identification from a cyclically ordered complete
/// smooth fan in the plane. Fails on non-unimodular consecutive pairs.
pub fn surface_from_ray_cycle(rays: Vec<IVec>) -> Result<ToricSurfaceId, Error> {
    let k = rays.len();
    if k < 3 {
        return Err(Error::invalid("a complete fan needs at least 3 rays"));
    }
    // sort counterclockwise starting at the angular minimum, for determinism
    let mut rays = rays;
    rays.sort_by(|a, b| angular_cmp(&to_q(a), &to_q(b)));
    let det2 = |a: &IVec, b: &IVec| a[0] * b[1] - a[1] * b[0];
    for i in 0..k {
        let d = det2(&rays[i], &rays[(i + 1) % k]);
        if d != 1 {
            return Err(Error::invalid(format!(
                "normal fan is not smooth: consecutive rays {:?}, {:?} have determinant {d}",
                rays[i],
                rays[(i + 1) % k]
            )));
        }
    }
    let mut selfint = Vec::with_capacity(k);
    for i in 0..k {
        let prev = &rays[(i + k - 1) % k];
        let next = &rays[(i + 1) % k];
        let s: IVec = prev.iter().zip(next).map(|(a, b)| a + b).collect();
        // s must be an integer multiple of rays[i]
        let u = &rays[i];
        let a = if u[0] != 0 {
            if s[0] % u[0] != 0 || s[1] * u[0] != s[0] * u[1] {
                return Err(Error::invalid("ray relation failed: fan not smooth/complete"));
            }
            -(s[0] / u[0])
        } else {
            if s[0] != 0 || s[1] % u[1] != 0 {
                return Err(Error::invalid("ray relation failed: fan not smooth/complete"));
            }
            -(s[1] / u[1])
        };
        selfint.push(a);
    }
    let name = classify(&selfint);
    Ok(ToricSurfaceId {
        ray_cycle: rays,
        selfint,
        name,
    })
}

fn classify(selfint: &[i64]) -> String {
    let k = selfint.len();
    match k {
        3 if selfint.iter().all(|&a| a == 1) => "P2".to_string(),
        4 if selfint.iter().all(|&a| a == 0) => "P1xP1".to_string(),
        // the smooth complete 5-ray surface is unique
        5 => "Bl1(P1xP1)=Bl2(P2)".to_string(),
        6 if selfint.iter().all(|&a| a == -1) => "Bl3(P2)".to_string(),
        _ => format!("unnamed({selfint:?})"),
    }
}

/// Genus, ends and pants count of the decomposed hypersurface.
///
/// Genus and ends are the interior/boundary lattice point counts, defined
/// for curves (`n = 2`) only; the pants count is the number of cells of the
/// induced subdivision and is returned in any dimension.
pub fn genus_and_ends(
    lift: &LiftFunction,
) -> Result<(Option<usize>, Option<usize>, usize), Error> {
    let sub = crate::tropical::induced_subdivision(lift)?;
    let pants = sub.cells.len();
    if lift.dim != 2 {
        return Ok((None, None, pants));
    }
    let lp = crate::tropical::lattice_points(&lift.hull()?)?;
    Ok((Some(lp.interior.len()), Some(lp.boundary.len()), pants))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::frac;
    use crate::tropical::{legendre_transform, Simplex};

    fn lift1(values: &[(i64, i64)]) -> LiftFunction {
        LiftFunction::new(1, values.iter().map(|&(p, v)| (vec![p], v))).unwrap()
    }

    fn step_psi() -> PLFunction {
        legendre_transform(&lift1(&[(0, 0), (1, 0)]), None).unwrap()
    }

    #[test]
    fn ring_basis_on_max_0_v() {
        let psi = step_psi();
        let slice = ring_basis(&psi, 1, &rat(0), Some(&[(-2, 2)])).unwrap();
        assert_eq!(slice.basis.len(), 5);
        for (p, h) in &slice.basis {
            assert!(h.is_zero());
            let v1 = p.coords()[0].clone();
            let expect = if v1.is_positive() { v1 } else { rat(0) };
            assert_eq!(p.coords()[1], expect);
        }
        let slice2 = ring_basis(&psi, 2, &rat(0), Some(&[(-1, 1)])).unwrap();
        assert_eq!(slice2.basis.len(), 5);
    }

    #[test]
    fn ring_basis_needs_window_for_unbounded() {
        let psi = step_psi();
        assert!(matches!(
            ring_basis(&psi, 1, &rat(0), None),
            Err(Error::MissingWindow)
        ));
    }

    #[test]
    fn multiply_examples() {
        let psi = step_psi();
        let a = GradedPoint::new(1, vec![0, 0]).unwrap();
        let b = GradedPoint::new(1, vec![1, 1]).unwrap();
        let p = multiply(&a, &b, &psi).unwrap();
        assert_eq!(p.point.degree, 2);
        assert_eq!(p.point.nums, vec![1, 1]); // the point (1/2, 1/2)
        assert!(p.height.is_zero());
        let sq = multiply(&a, &a, &psi).unwrap();
        assert_eq!(sq.point.nums, vec![0, 0]);
        assert!(sq.height.is_zero());
    }

    #[test]
    fn weights_are_the_last_numerator() {
        let p = GradedPoint::from_rational(2, &[frac(1, 2), frac(1, 2)]).unwrap();
        assert_eq!(cstar_weight(&p), 1);
        let q = GradedPoint::from_rational(3, &[frac(1, 3), frac(1, 3)]).unwrap();
        assert_eq!(cstar_weight(&q), 1);
        assert!(GradedPoint::from_rational(2, &[frac(1, 3), frac(1, 2)]).is_err());
    }

    #[test]
    fn weight_additivity() {
        let psi = step_psi();
        let a = GradedPoint::new(2, vec![3, 2]).unwrap();
        let b = GradedPoint::new(3, vec![-1, 4]).unwrap();
        let p = multiply(&a, &b, &psi).unwrap();
        assert_eq!(cstar_weight(&p.point), cstar_weight(&a) + cstar_weight(&b));
    }

    #[test]
    fn fan_of_two_intervals() {
        let points = vec![vec![0], vec![1], vec![2]];
        let tri = Triangulation::new(
            1,
            points,
            vec![Simplex::new(vec![0, 1]), Simplex::new(vec![1, 2])],
        )
        .unwrap();
        let fan = build_fan(&tri);
        assert_eq!(fan.len(), 2);
        assert_eq!(fan[0].rays, vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(fan[1].rays, vec![vec![1, 1], vec![1, 2]]);
        for cone in &fan {
            assert!(smoothness_check(cone).unwrap());
            assert!(chart_superpotential_check(cone).unwrap());
        }
    }

    #[test]
    fn non_unimodular_cone_detected() {
        let cone = FanCone {
            rays: vec![vec![1, 0], vec![1, 2]],
        };
        assert!(!smoothness_check(&cone).unwrap());
        let cone2 = FanCone {
            rays: vec![vec![1, 0], vec![2, 1]],
        };
        assert!(smoothness_check(&cone2).unwrap());
        assert!(!chart_superpotential_check(&cone2).unwrap());
    }

    #[test]
    fn central_fiber_of_step() {
        let psi = step_psi();
        let report = central_fiber(&psi);
        assert_eq!(report.components.len(), 2);
        assert!(report.components.iter().all(|c| !c.compact));
        assert_eq!(report.adjacency, vec![(0, 1)]);
    }

    #[test]
    fn surface_of_unit_square() {
        let cell = DualCell {
            label: None,
            vertices: vec![
                vec![rat(0), rat(0)],
                vec![rat(1), rat(0)],
                vec![rat(1), rat(1)],
                vec![rat(0), rat(1)],
            ],
            rays: vec![],
            form: crate::tropical::AffineForm {
                gradient: vec![rat(0), rat(0)],
                constant: rat(0),
            },
        };
        let id = surface_id(&cell).unwrap();
        assert_eq!(id.name, "P1xP1");
        assert_eq!(id.selfint, vec![0, 0, 0, 0]);
    }

    #[test]
    fn surface_of_hexagon() {
        // conv(±e1, ±e2, ±(e1+e2)) has the del Pezzo 6 normal fan
        let vs = [[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1], [-1, -1]];
        let cell = DualCell {
            label: None,
            vertices: vs.iter().map(|p| to_q(&p.to_vec())).collect(),
            rays: vec![],
            form: crate::tropical::AffineForm {
                gradient: vec![rat(0), rat(0)],
                constant: rat(0),
            },
        };
        let id = surface_id(&cell).unwrap();
        assert_eq!(id.name, "Bl3(P2)");
        assert_eq!(id.selfint, vec![-1; 6]);
    }

    #[test]
    fn surface_of_triangle_is_p2() {
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, -1]];
        let id = surface_from_ray_cycle(rays).unwrap();
        assert_eq!(id.name, "P2");
    }

    #[test]
    fn genus_of_unit_triangle() {
        let lift =
            LiftFunction::new(2, vec![(vec![0, 0], 0), (vec![1, 0], 0), (vec![0, 1], 0)]).unwrap();
        let (g, e, p) = genus_and_ends(&lift).unwrap();
        assert_eq!((g, e, p), (Some(0), Some(3), 1));
    }
}
