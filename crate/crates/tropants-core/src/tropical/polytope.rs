//! Rational polytopes in V-representation, facet enumeration and exact
//! lattice-point listing.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::linalg::{affine_rank, solve};
use crate::rat::{rat, rat_floor, Rat};
use crate::vecops::{dot_qi, primitive_of_q, sub_q, to_q};
use crate::{IVec, QVec};

/// A bounded polytope given by its vertices.
///
/// Construction keeps only extreme points, so the stored vertex list is
/// irredundant. The polytope must be full-dimensional in its ambient space
/// for facet and lattice-point queries.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    pub dim: usize,
    pub vertices: Vec<QVec>,
}

/// Closed halfspace `normal . x <= offset` with primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: IVec,
    pub offset: Rat,
}

impl Halfspace {
    pub fn contains(&self, p: &[Rat]) -> bool {
        dot_qi(p, &self.normal) <= self.offset
    }

    pub fn on_boundary(&self, p: &[Rat]) -> bool {
        dot_qi(p, &self.normal) == self.offset
    }
}

impl Polytope {
    /// Builds a polytope from rational points, discarding non-extreme ones.
    pub fn from_points(dim: usize, points: Vec<QVec>) -> Result<Self, Error> {
        if points.is_empty() {
            return Err(Error::EmptyInput("polytope needs at least one point"));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        let mut uniq: Vec<QVec> = Vec::new();
        for p in points {
            if !uniq.contains(&p) {
                uniq.push(p);
            }
        }
        let vertices: Vec<QVec> = uniq
            .iter()
            .enumerate()
            .filter(|(i, p)| {
                let others: Vec<QVec> = uniq
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j != i)
                    .map(|(_, q)| q.clone())
                    .collect();
                others.is_empty() || !point_in_hull(p, &others)
            })
            .map(|(_, p)| p.clone())
            .collect();
        Ok(Polytope { dim, vertices })
    }

    pub fn from_lattice_points(dim: usize, points: &[IVec]) -> Result<Self, Error> {
        Self::from_points(dim, points.iter().map(|p| to_q(p)).collect())
    }

    pub fn is_full_dimensional(&self) -> bool {
        affine_rank(&self.vertices) == self.dim
    }

    /// Facet halfspaces of a full-dimensional polytope.
    ///
    /// Enumerates supporting hyperplanes through `dim`-subsets of vertices;
    /// fine at the point counts this crate deals with.
    pub fn facets(&self) -> Result<Vec<Halfspace>, Error> {
        let n = self.dim;
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional {
                rank: affine_rank(&self.vertices),
                dim: n,
            });
        }
        if n == 0 {
            return Ok(vec![]);
        }
        let verts = &self.vertices;
        let mut facets: Vec<Halfspace> = Vec::new();
        let mut subset = vec![0usize; n];
        enumerate_subsets(verts.len(), n, &mut subset, 0, 0, &mut |ids| {
            let pts: Vec<&QVec> = ids.iter().map(|&i| &verts[i]).collect();
            if let Some((normal, offset)) = hyperplane_through(&pts) {
                for (nrm, off) in [(normal.clone(), offset.clone()), {
                    let neg: IVec = normal.iter().map(|x| -x).collect();
                    (neg, -offset.clone())
                }] {
                    let hs = Halfspace {
                        normal: nrm,
                        offset: off,
                    };
                    if verts.iter().all(|v| hs.contains(v))
                        && !facets.contains(&hs)
                    {
                        facets.push(hs.clone());
                    }
                }
            }
        });
        facets.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
        Ok(facets)
    }

    pub fn contains(&self, p: &[Rat]) -> Result<bool, Error> {
        Ok(self.facets()?.iter().all(|h| h.contains(p)))
    }

    /// Normalized volume (`n!` times Euclidean volume), via a fan of
    /// simplices over the first vertex and recursive facet decomposition.
    pub fn normalized_volume(&self) -> Result<Rat, Error> {
        let facets = self.facets()?;
        Ok(volume_rec(self.dim, &self.vertices, &facets))
    }
}

fn volume_rec(dim: usize, verts: &[QVec], facets: &[Halfspace]) -> Rat {
    if dim == 0 {
        return rat(1);
    }
    if dim == 1 {
        let mut xs: Vec<&Rat> = verts.iter().map(|v| &v[0]).collect();
        xs.sort();
        return xs[xs.len() - 1] - xs[0];
    }
    // cone over vertex 0: sum over facets not containing it
    let apex = &verts[0];
    let mut total = Rat::zero();
    for f in facets {
        if f.on_boundary(apex) {
            continue;
        }
        let on_facet: Vec<QVec> = verts
            .iter()
            .filter(|v| f.on_boundary(v))
            .cloned()
            .collect();
        // normalized (dim-1)-volume of the facet within its hyperplane, times
        // lattice height of the apex over the facet hyperplane
        let fvol = facet_volume(dim, &on_facet);
        let height = (f.offset.clone() - dot_qi(apex, &f.normal)).abs();
        total += fvol * height;
    }
    total
}

/// Normalized (dim-1)-volume of a polytope living in a hyperplane of R^dim,
/// measured against the induced lattice (primitive normal convention).
fn facet_volume(dim: usize, verts: &[QVec]) -> Rat {
    // project out one coordinate in which the facet is not degenerate
    for drop in 0..dim {
        let projected: Vec<QVec> = verts
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        if affine_rank(&projected) == dim - 1 {
            if let Ok(p) = Polytope::from_points(dim - 1, projected) {
                if let Ok(v) = p.normalized_volume() {
                    // projection scales the facet form by |normal_drop|; the
                    // primitive-normal normalized volume compensates exactly.
                    let pts: Vec<&QVec> = verts.iter().take(dim).collect();
                    if let Some((normal, _)) = hyperplane_through_full(&pts, verts) {
                        let nd = normal[drop].abs();
                        if nd != 0 {
                            return v / rat(nd);
                        }
                    }
                }
            }
        }
    }
    Rat::zero()
}

fn hyperplane_through_full(pts: &[&QVec], all: &[QVec]) -> Option<(IVec, Rat)> {
    // use any affinely independent subset of the facet's points
    let dim = all[0].len();
    let mut chosen: Vec<&QVec> = vec![pts[0]];
    for p in all.iter() {
        if chosen.len() == dim {
            break;
        }
        let mut trial: Vec<QVec> = chosen.iter().map(|q| (*q).clone()).collect();
        trial.push(p.clone());
        if affine_rank(&trial) == trial.len() - 1 {
            chosen.push(p);
        }
    }
    if chosen.len() < dim {
        return None;
    }
    hyperplane_through(&chosen)
}

/// Hyperplane through `n` affinely independent points of R^n, as a primitive
/// integer normal and rational offset. Returns `None` when degenerate.
pub fn hyperplane_through(pts: &[&QVec]) -> Option<(IVec, Rat)> {
    let n = pts[0].len();
    debug_assert_eq!(pts.len(), n);
    if n == 1 {
        return Some((vec![1], pts[0][0].clone()));
    }
    let diffs: Vec<QVec> = pts[1..].iter().map(|p| sub_q(p, pts[0])).collect();
    // normal = kernel direction of the (n-1) x n difference matrix
    let k = crate::linalg::kernel(&diffs);
    if k.len() != 1 {
        return None;
    }
    let normal = primitive_of_q(&k[0]);
    if normal.iter().all(|&x| x == 0) {
        return None;
    }
    let offset = dot_qi(pts[0], &normal);
    Some((normal, offset))
}

/// Carathéodory membership test: `p` lies in `conv(points)` iff some
/// (dim+1)-subset of affinely independent points contains it.
pub fn point_in_hull(p: &[Rat], points: &[QVec]) -> bool {
    if points.iter().any(|q| q.as_slice() == p) {
        return true;
    }
    let n = p.len();
    let m = points.len();
    if m == 0 {
        return false;
    }
    let k = (n + 1).min(m);
    let mut found = false;
    for size in 1..=k {
        let mut subset = vec![0usize; size];
        enumerate_subsets(m, size, &mut subset, 0, 0, &mut |ids| {
            if found {
                return;
            }
            if barycentric_in_simplex(p, &ids.iter().map(|&i| &points[i]).collect::<Vec<_>>()) {
                found = true;
            }
        });
        if found {
            return true;
        }
    }
    false
}

fn barycentric_in_simplex(p: &[Rat], verts: &[&QVec]) -> bool {
    let n = p.len();
    let k = verts.len();
    // solve sum l_i v_i = p, sum l_i = 1
    let mut a: Vec<QVec> = (0..n)
        .map(|c| verts.iter().map(|v| v[c].clone()).collect())
        .collect();
    a.push(vec![Rat::one(); k]);
    let mut b: QVec = p.to_vec();
    b.push(Rat::one());
    match solve(&a, &b) {
        None => false,
        Some(l) => {
            // the solver returns one solution; valid only if the simplex is
            // genuinely a simplex (affinely independent), otherwise skip
            let pts: Vec<QVec> = verts.iter().map(|v| (*v).clone()).collect();
            if affine_rank(&pts) + 1 != k {
                return false;
            }
            l.iter().all(|x| !x.is_negative())
        }
    }
}

/// Calls `f` on every size-`k` subset of `0..n`, ascending.
pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    let mut buf = vec![0usize; k];
    enumerate_subsets(n, k, &mut buf, 0, 0, f);
}

pub(crate) fn enumerate_subsets(
    n: usize,
    k: usize,
    buf: &mut [usize],
    depth: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        f(buf);
        return;
    }
    for i in start..n {
        buf[depth] = i;
        enumerate_subsets(n, k, buf, depth + 1, i + 1, f);
    }
}

/// Lattice points of a polytope, split into interior and boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePoints {
    pub all: Vec<IVec>,
    pub interior: Vec<IVec>,
    pub boundary: Vec<IVec>,
}

/// Exact enumeration of the integer points of a closed full-dimensional
/// polytope, with the interior/boundary partition.
pub fn lattice_points(polytope: &Polytope) -> Result<LatticePoints, Error> {
    let n = polytope.dim;
    let facets = polytope.facets()?;
    // bounding box
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for v in &polytope.vertices {
        for (c, x) in v.iter().enumerate() {
            let f = rat_floor(x);
            let fl = i64::try_from(&f).map_err(|_| Error::invalid("vertex out of i64 range"))?;
            let cl = fl + i64::from(!crate::rat::is_integer(x));
            lo[c] = lo[c].min(fl);
            hi[c] = hi[c].max(cl);
        }
    }
    let mut all = Vec::new();
    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    let mut cursor = lo.clone();
    'scan: loop {
        let pq = to_q(&cursor);
        let mut inside = true;
        let mut strict = true;
        for h in &facets {
            let val = dot_qi(&pq, &h.normal);
            if val > h.offset {
                inside = false;
                break;
            }
            if val == h.offset {
                strict = false;
            }
        }
        if inside {
            all.push(cursor.clone());
            if strict {
                interior.push(cursor.clone());
            } else {
                boundary.push(cursor.clone());
            }
        }
        // advance odometer
        for c in 0..n {
            cursor[c] += 1;
            if cursor[c] <= hi[c] {
                continue 'scan;
            }
            cursor[c] = lo[c];
        }
        break;
    }
    all.sort();
    interior.sort();
    boundary.sort();
    Ok(LatticePoints {
        all,
        interior,
        boundary,
    })
}
