//! Discrete Legendre transforms (plain and Gram-twisted) and their
//! polyhedral cell decompositions.

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::linalg::{affine_rank, rank, solve};
use crate::rat::{rat, Rat};
use crate::tropical::lift::LiftFunction;
use crate::vecops::{add_q, dot_qi, mat_apply_i, primitive_of_q, to_q};
use crate::{IVec, QVec};

/// Affine function `x -> gradient . x + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub gradient: QVec,
    pub constant: Rat,
}

impl AffineForm {
    pub fn eval(&self, x: &[Rat]) -> Rat {
        crate::vecops::dot_q(&self.gradient, x) + &self.constant
    }
}

/// A (possibly unbounded) polyhedral cell: vertices plus primitive
/// recession rays.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCell {
    /// Support point this cell is dual to, when it comes from a transform.
    pub label: Option<IVec>,
    pub vertices: Vec<QVec>,
    pub rays: Vec<IVec>,
    pub form: AffineForm,
}

impl DualCell {
    pub fn is_compact(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension of the cell (affine rank of vertices pushed along rays).
    pub fn dim(&self) -> usize {
        if self.vertices.is_empty() {
            return 0;
        }
        let mut pts = self.vertices.clone();
        let base = self.vertices[0].clone();
        for r in &self.rays {
            pts.push(add_q(&base, &to_q(r)));
        }
        affine_rank(&pts)
    }
}

/// A convex piecewise-linear function on R^n with its maximal cells.
#[derive(Debug, Clone)]
pub struct PLFunction {
    pub dim: usize,
    /// Gram matrix of the pairing (identity when built untwisted).
    pub gram: Vec<IVec>,
    /// Pages `v -> <v, g w> - phi(w)` indexed by support points.
    pub pages: Vec<(IVec, AffineForm)>,
    /// Maximal (full-dimensional) cells.
    pub cells: Vec<DualCell>,
}

impl PLFunction {
    /// Value of the transform at a rational point.
    pub fn eval(&self, v: &[Rat]) -> Rat {
        self.pages
            .iter()
            .map(|(_, f)| f.eval(v))
            .max()
            .expect("transform of a nonempty support")
    }

    /// Whether the decomposition has any noncompact maximal cell.
    pub fn has_noncompact_cell(&self) -> bool {
        self.cells.iter().any(|c| !c.is_compact())
    }

    /// Indices of maximal-cell pairs sharing an (n-1)-dimensional wall.
    pub fn wall_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.cells.len() {
            for j in (i + 1)..self.cells.len() {
                if self.wall_dim(i, j) + 1 == self.dim {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Dimension of the intersection face of two maximal cells, or 0 for
    /// disjoint cells; the face is cut by equality of the two pages.
    fn wall_dim(&self, i: usize, j: usize) -> usize {
        let ci = &self.cells[i];
        let cj = &self.cells[j];
        let shared_vertices: Vec<QVec> = ci
            .vertices
            .iter()
            .filter(|v| cj.vertices.contains(v))
            .cloned()
            .collect();
        if shared_vertices.is_empty() {
            return 0;
        }
        let shared_rays: Vec<IVec> = ci
            .rays
            .iter()
            .filter(|r| cj.rays.contains(r))
            .cloned()
            .collect();
        let mut pts = shared_vertices.clone();
        let base = shared_vertices[0].clone();
        for r in &shared_rays {
            pts.push(add_q(&base, &to_q(r)));
        }
        affine_rank(&pts)
    }
}

fn identity_gram(n: usize) -> Vec<IVec> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// The Legendre transform `psi(v) = max_w <v, g w> - phi(w)` with its full
/// cell decomposition. `gram = None` means the standard pairing.
pub fn legendre_transform(
    lift: &LiftFunction,
    gram: Option<&[IVec]>,
) -> Result<PLFunction, Error> {
    let n = lift.dim;
    let g = match gram {
        None => identity_gram(n),
        Some(g) => {
            validate_gram(n, g)?;
            g.to_vec()
        }
    };
    let support = lift.support_vec();
    let pages: Vec<(IVec, AffineForm)> = support
        .iter()
        .map(|w| {
            let gw = mat_apply_i(&g, w);
            let form = AffineForm {
                gradient: to_q(&gw),
                constant: rat(-lift.value(w).unwrap()),
            };
            (w.clone(), form)
        })
        .collect();
    let mut cells = Vec::new();
    for w in &support {
        let cell = cell_of(lift, &g, w)?;
        if !cell.is_empty() && cell.dim() == n {
            cells.push(cell);
        }
    }
    Ok(PLFunction {
        dim: n,
        gram: g,
        pages,
        cells,
    })
}

fn validate_gram(n: usize, g: &[IVec]) -> Result<(), Error> {
    if g.len() != n || g.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.len(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            if g[i][j] != g[j][i] {
                return Err(Error::invalid("gram matrix must be symmetric"));
            }
        }
    }
    // positive definiteness via leading principal minors
    for k in 1..=n {
        let minor: Vec<Vec<i64>> = (0..k).map(|i| g[i][..k].to_vec()).collect();
        if !crate::linalg::det_i(&minor).is_positive() {
            return Err(Error::invalid("gram matrix must be positive definite"));
        }
    }
    Ok(())
}

/// The cell `{v : psi(v) = <v, g w> - phi(w)}` of one support point.
pub fn dual_cell(lift: &LiftFunction, gram: Option<&[IVec]>, w: &[i64]) -> Result<DualCell, Error> {
    let n = lift.dim;
    let g = match gram {
        None => identity_gram(n),
        Some(g) => {
            validate_gram(n, g)?;
            g.to_vec()
        }
    };
    if lift.value(w).is_none() {
        return Err(Error::NotInSupport(w.to_vec()));
    }
    cell_of(lift, &g, w)
}

/// V-representation of the cell of `w` from its halfspace description
/// `<v, g(w - w')> >= phi(w) - phi(w')`.
fn cell_of(lift: &LiftFunction, g: &[IVec], w: &[i64]) -> Result<DualCell, Error> {
    let n = lift.dim;
    let phi_w = lift.value(w).unwrap();
    // constraints nu . v >= c
    let mut constraints: Vec<(IVec, Rat)> = Vec::new();
    for wp in lift.support() {
        if wp.as_slice() == w {
            continue;
        }
        let diff: IVec = w.iter().zip(wp).map(|(a, b)| a - b).collect();
        let nu = mat_apply_i(g, &diff);
        let c = rat(phi_w - lift.value(wp).unwrap());
        constraints.push((nu, c));
    }
    let feasible = |v: &QVec| constraints.iter().all(|(nu, c)| dot_qi(v, nu) >= *c);

    // vertices: n-subsets of tight constraints
    let mut vertices: Vec<QVec> = Vec::new();
    if n == 0 {
        vertices.push(vec![]);
    } else if constraints.is_empty() {
        // whole space; represent with a single base point
        vertices.push(vec![Rat::zero(); n]);
    } else {
        let m = constraints.len();
        let mut subset = vec![0usize; n];
        super::polytope::enumerate_subsets(m, n, &mut subset, 0, 0, &mut |ids| {
            let a: Vec<QVec> = ids.iter().map(|&i| to_q(&constraints[i].0)).collect();
            if rank(&a) != n {
                return;
            }
            let b: QVec = ids.iter().map(|&i| constraints[i].1.clone()).collect();
            if let Some(v) = solve(&a, &b) {
                if feasible(&v) && !vertices.contains(&v) {
                    vertices.push(v);
                }
            }
        });
    }
    vertices.sort();

    // recession rays: (n-1)-subsets of tight homogeneous constraints
    let mut rays: Vec<IVec> = Vec::new();
    if n >= 1 && !vertices.is_empty() {
        let ray_ok = |d: &QVec| constraints.iter().all(|(nu, _)| !dot_qi(d, nu).is_negative());
        if constraints.is_empty() {
            for i in 0..n {
                for s in [1i64, -1] {
                    let mut r = vec![0i64; n];
                    r[i] = s;
                    rays.push(r);
                }
            }
        } else if n == 1 {
            for s in [1i64, -1] {
                let d = vec![rat(s)];
                if ray_ok(&d) {
                    rays.push(vec![s]);
                }
            }
        } else {
            let m = constraints.len();
            let mut subset = vec![0usize; n - 1];
            super::polytope::enumerate_subsets(m, n - 1, &mut subset, 0, 0, &mut |ids| {
                let a: Vec<QVec> = ids.iter().map(|&i| to_q(&constraints[i].0)).collect();
                if rank(&a) != n - 1 {
                    return;
                }
                let k = crate::linalg::kernel(&a);
                debug_assert_eq!(k.len(), 1);
                for dir in [k[0].clone(), k[0].iter().map(|x| -x).collect::<QVec>()] {
                    if ray_ok(&dir) {
                        let p = primitive_of_q(&dir);
                        if !rays.contains(&p) {
                            rays.push(p);
                        }
                    }
                }
            });
        }
    }
    rays.sort();

    let gw = mat_apply_i(g, w);
    Ok(DualCell {
        label: Some(w.to_vec()),
        vertices,
        rays,
        form: AffineForm {
            gradient: to_q(&gw),
            constant: rat(-phi_w),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::frac;

    fn lift1(values: &[(i64, i64)]) -> LiftFunction {
        LiftFunction::new(1, values.iter().map(|&(p, v)| (vec![p], v))).unwrap()
    }

    #[test]
    fn transform_of_two_point_support() {
        // support {0,1}, values {0,0}: psi(v) = max(0, v)
        let lift = lift1(&[(0, 0), (1, 0)]);
        let psi = legendre_transform(&lift, None).unwrap();
        assert_eq!(psi.eval(&[rat(-3)]), rat(0));
        assert_eq!(psi.eval(&[rat(2)]), rat(2));
        assert_eq!(psi.eval(&[frac(1, 2)]), frac(1, 2));
        assert_eq!(psi.cells.len(), 2);
        let c0 = psi.cells.iter().find(|c| c.label == Some(vec![0])).unwrap();
        assert_eq!(c0.vertices, vec![vec![rat(0)]]);
        assert_eq!(c0.rays, vec![vec![-1]]);
        assert!(!c0.is_compact());
        let c1 = psi.cells.iter().find(|c| c.label == Some(vec![1])).unwrap();
        assert_eq!(c1.rays, vec![vec![1]]);
    }

    #[test]
    fn dual_cell_errors_outside_support() {
        let lift = lift1(&[(0, 0), (1, 0)]);
        assert!(matches!(
            dual_cell(&lift, None, &[7]),
            Err(Error::NotInSupport(_))
        ));
    }

    #[test]
    fn flat_middle_point_has_lower_dimensional_cell() {
        // support {0,1,2} flat: the middle page touches only at the origin
        let lift = lift1(&[(0, 0), (1, 0), (2, 0)]);
        let psi = legendre_transform(&lift, None).unwrap();
        assert_eq!(psi.cells.len(), 2); // labels 0 and 2
        let mid = dual_cell(&lift, None, &[1]).unwrap();
        assert_eq!(mid.vertices, vec![vec![rat(0)]]);
        assert!(mid.is_compact());
        assert_eq!(mid.dim(), 0);
    }

    #[test]
    fn gram_twisted_node_window() {
        // phi(v) = v^2 on [-2,2], g = (2): max over w of 2vw - w^2,
        // creases at half-integers, slope 2m on [m - 1/2, m + 1/2]
        let lift = lift1(&[(-2, 4), (-1, 1), (0, 0), (1, 1), (2, 4)]);
        let psi = legendre_transform(&lift, Some(&[vec![2]])).unwrap();
        assert_eq!(psi.eval(&[rat(1)]), rat(1));
        assert_eq!(psi.eval(&[frac(1, 2)]), rat(0));
        assert_eq!(psi.eval(&[frac(3, 4)]), frac(1, 2));
        let c1 = psi.cells.iter().find(|c| c.label == Some(vec![1])).unwrap();
        assert_eq!(
            c1.vertices,
            vec![vec![frac(1, 2)], vec![frac(3, 2)]]
        );
        assert!(c1.is_compact());
    }

    #[test]
    fn pairing_inequality_on_cell_vertices() {
        let lift = lift1(&[(0, 1), (1, 0), (2, 1)]);
        let psi = legendre_transform(&lift, None).unwrap();
        for w in lift.support() {
            let cell = dual_cell(&lift, None, w).unwrap();
            for (wp, _) in &psi.pages {
                let phi_wp = rat(lift.value(wp).unwrap());
                for v in &cell.vertices {
                    let lhs = psi.eval(v) + &phi_wp;
                    let rhs = dot_qi(v, wp);
                    assert!(lhs >= rhs);
                    if wp == w {
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
