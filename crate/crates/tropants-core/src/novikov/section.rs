//! The finiteness criterion for sheaf sections over convex regions.
//!
//! A section is described by its coefficient-valuation profile: finitely
//! many cone pieces carrying affine (optionally plus positive-semidefinite
//! quadratic) valuation laws, plus finitely many exceptional points. For a
//! convex region the growth condition is decidable exactly: the valuation
//! must grow along every unbounded direction of every piece, tested against
//! the closure vertices and recession directions of the region.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{rank, solve};
use crate::rat::Rat;
use crate::vecops::{dot_qi, to_q};
use crate::{IVec, QVec};

/// One valuation piece: `val(c_v) = a + w·v (+ ½ v·Q v)` on the lattice
/// points of the cone spanned by `cone_rays`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub cone_rays: Vec<IVec>,
    pub a: Rat,
    pub w: QVec,
    /// Optional positive-semidefinite quadratic growth term.
    pub quad: Option<Vec<IVec>>,
}

impl Piece {
    pub fn val_at(&self, v: &[i64]) -> Rat {
        let mut out = self.a.clone() + dot_qi(&self.w, v);
        if let Some(q) = &self.quad {
            let qv: Vec<i64> = q.iter().map(|row| crate::vecops::dot_i(row, v)).collect();
            out += Rat::new(crate::vecops::dot_i(v, &qv).into(), 2.into());
        }
        out
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        in_cone(&to_q(v), &self.cone_rays)
    }
}

/// Valuation profile of a candidate section.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationSpec {
    pub dim: usize,
    pub pieces: Vec<Piece>,
    /// Finitely many explicit `(point, valuation)` overrides; these never
    /// affect the growth condition.
    pub exceptional: Vec<(IVec, Rat)>,
}

impl ValuationSpec {
    pub fn new(
        dim: usize,
        pieces: Vec<Piece>,
        exceptional: Vec<(IVec, Rat)>,
    ) -> Result<Self, Error> {
        for p in &pieces {
            if p.w.len() != dim || p.cone_rays.iter().any(|r| r.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.w.len(),
                });
            }
            if let Some(q) = &p.quad {
                if q.len() != dim || q.iter().any(|r| r.len() != dim) {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: q.len(),
                    });
                }
                for i in 0..dim {
                    for j in 0..dim {
                        if q[i][j] != q[j][i] {
                            return Err(Error::invalid("quadratic term must be symmetric"));
                        }
                    }
                }
                if !is_psd(q) {
                    return Err(Error::invalid(
                        "quadratic term must be positive semidefinite",
                    ));
                }
            }
        }
        let spec = ValuationSpec {
            dim,
            pieces,
            exceptional,
        };
        spec.check_well_defined()?;
        Ok(spec)
    }

    /// Valuation at a lattice point, if covered.
    pub fn val_at(&self, v: &[i64]) -> Option<Rat> {
        if let Some((_, r)) = self.exceptional.iter().find(|(p, _)| p == v) {
            return Some(r.clone());
        }
        self.pieces
            .iter()
            .find(|p| p.contains(v))
            .map(|p| p.val_at(v))
    }

    /// Overlapping pieces must agree where they overlap; sampled exactly on
    /// a lattice window around the origin.
    fn check_well_defined(&self) -> Result<(), Error> {
        let radius = 4i64;
        let n = self.dim;
        let mut cursor = vec![-radius; n];
        'scan: loop {
            let mut seen: Option<Rat> = None;
            for p in &self.pieces {
                if p.contains(&cursor) {
                    let v = p.val_at(&cursor);
                    match &seen {
                        None => seen = Some(v),
                        Some(prev) if *prev == v => {}
                        Some(prev) => {
                            return Err(Error::invalid(format!(
                                "valuation ill-defined at {cursor:?}: {prev} vs {v}"
                            )));
                        }
                    }
                }
            }
            for c in 0..n {
                cursor[c] += 1;
                if cursor[c] <= radius {
                    continue 'scan;
                }
                cursor[c] = -radius;
            }
            break;
        }
        Ok(())
    }
}

fn is_psd(q: &[IVec]) -> bool {
    // all principal minors nonnegative
    let n = q.len();
    for mask in 1u32..(1 << n) {
        let ids: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub: Vec<IVec> = ids
            .iter()
            .map(|&i| ids.iter().map(|&j| q[i][j]).collect())
            .collect();
        if crate::linalg::det_i(&sub).is_negative() {
            return false;
        }
    }
    true
}

/// Exact cone membership via Carathéodory subsets of the generators.
pub fn in_cone(v: &[Rat], rays: &[IVec]) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    let n = v.len();
    let m = rays.len();
    for size in 1..=n.min(m) {
        let mut found = false;
        crate::tropical::for_each_subset(m, size, &mut |ids| {
            if found {
                return;
            }
            let cols: Vec<QVec> = ids.iter().map(|&i| to_q(&rays[i])).collect();
            let mat: Vec<QVec> = (0..n)
                .map(|r| cols.iter().map(|c| c[r].clone()).collect())
                .collect();
            if rank(&mat) != size {
                return;
            }
            if let Some(lambda) = solve(&mat, v) {
                if lambda.iter().all(|x| !x.is_negative()) {
                    found = true;
                }
            }
        });
        if found {
            return true;
        }
    }
    false
}

/// A convex region: closure vertices, recession rays, openness flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    #[serde(with = "crate::rat::rat_mat_string")]
    pub vertices: Vec<QVec>,
    pub rays: Vec<IVec>,
    pub open: bool,
}

/// Violation certificate: the piece, its unbounded direction, and the
/// region datum that kills finiteness.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    AtVertex {
        piece: usize,
        ray: IVec,
        vertex: QVec,
    },
    AlongRegionRay {
        piece: usize,
        ray: IVec,
        region_ray: IVec,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub violation: Option<Violation>,
}

/// Exact decision procedure for the section growth condition over a convex
/// region: for every piece and every generator `u` of its cone (unless the
/// quadratic term grows along `u`), the affine slope must satisfy
/// `(w - b)·u >= 0` at every closure vertex `b` and `u·d <= 0` along every
/// recession direction `d`. Nonnegativity at closure vertices is equivalent
/// to positivity on the open interior, since the slope is a nonconstant
/// affine function of `b`.
pub fn section_membership(spec: &ValuationSpec, region: &Region) -> Result<Membership, Error> {
    if region.vertices.is_empty() {
        return Err(Error::EmptyInput("region needs at least one vertex"));
    }
    for b in &region.vertices {
        if b.len() != spec.dim {
            return Err(Error::DimensionMismatch {
                expected: spec.dim,
                got: b.len(),
            });
        }
    }
    for (pi, piece) in spec.pieces.iter().enumerate() {
        for u in &piece.cone_rays {
            if u.iter().all(|&x| x == 0) {
                return Err(Error::invalid("zero cone ray"));
            }
            if let Some(q) = &piece.quad {
                let qu: Vec<i64> = q.iter().map(|row| crate::vecops::dot_i(row, u)).collect();
                if crate::vecops::dot_i(u, &qu) > 0 {
                    // quadratic growth beats every linear pairing
                    continue;
                }
            }
            for b in &region.vertices {
                let slope = dot_qi(&piece.w, u) - dot_qi(b, u);
                if slope.is_negative() {
                    return Ok(Membership {
                        member: false,
                        violation: Some(Violation::AtVertex {
                            piece: pi,
                            ray: u.clone(),
                            vertex: b.clone(),
                        }),
                    });
                }
            }
            for d in &region.rays {
                if crate::vecops::dot_i(u, d) > 0 {
                    return Ok(Membership {
                        member: false,
                        violation: Some(Violation::AlongRegionRay {
                            piece: pi,
                            ray: u.clone(),
                            region_ray: d.clone(),
                        }),
                    });
                }
            }
        }
    }
    Ok(Membership {
        member: true,
        violation: None,
    })
}

/// Brute-force count of lattice points in the box of the given radius with
/// `val(c_v) - b·v <= C`. Used as the consistency oracle for
/// [`section_membership`]: for members the counts stabilize as the radius
/// grows; for non-members they keep growing.
pub fn count_below(spec: &ValuationSpec, b: &[Rat], c: &Rat, radius: i64) -> usize {
    let n = spec.dim;
    let mut count = 0usize;
    let mut cursor = vec![-radius; n];
    'scan: loop {
        if let Some(val) = spec.val_at(&cursor) {
            if val - dot_qi(b, &cursor) <= *c {
                count += 1;
            }
        }
        for i in 0..n {
            cursor[i] += 1;
            if cursor[i] <= radius {
                continue 'scan;
            }
            cursor[i] = -radius;
        }
        break;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, rat};

    fn half_line_spec(dir: i64) -> ValuationSpec {
        ValuationSpec::new(
            1,
            vec![Piece {
                cone_rays: vec![vec![dir]],
                a: rat(0),
                w: vec![rat(0)],
                quad: None,
            }],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn flat_tail_on_negative_interval() {
        // val = 0 on v >= 0; member over (-1, 0), not over (0, 1)
        let spec = half_line_spec(1);
        let left = Region {
            vertices: vec![vec![rat(-1)], vec![rat(0)]],
            rays: vec![],
            open: true,
        };
        assert!(section_membership(&spec, &left).unwrap().member);
        let right = Region {
            vertices: vec![vec![rat(0)], vec![rat(1)]],
            rays: vec![],
            open: true,
        };
        let m = section_membership(&spec, &right).unwrap();
        assert!(!m.member);
        assert!(matches!(
            m.violation,
            Some(Violation::AtVertex { piece: 0, .. })
        ));
    }

    #[test]
    fn quadratic_growth_beats_any_bounded_region() {
        // val = v² on all of Z
        let spec = ValuationSpec::new(
            1,
            vec![
                Piece {
                    cone_rays: vec![vec![1]],
                    a: rat(0),
                    w: vec![rat(0)],
                    quad: Some(vec![vec![2]]),
                },
                Piece {
                    cone_rays: vec![vec![-1]],
                    a: rat(0),
                    w: vec![rat(0)],
                    quad: Some(vec![vec![2]]),
                },
            ],
            vec![],
        )
        .unwrap();
        let u = Region {
            vertices: vec![vec![rat(-10)], vec![rat(10)]],
            rays: vec![],
            open: true,
        };
        assert!(section_membership(&spec, &u).unwrap().member);
    }

    #[test]
    fn oracle_agrees_on_documented_examples() {
        let spec = half_line_spec(1);
        let member_b = vec![frac(-1, 2)];
        let c = rat(10);
        let c10 = count_below(&spec, &member_b, &c, 10);
        let c20 = count_below(&spec, &member_b, &c, 20);
        let c40 = count_below(&spec, &member_b, &c, 40);
        assert_eq!(c20, c40);
        assert!(c10 <= c20);
        let non_member_b = vec![frac(1, 2)];
        let c20n = count_below(&spec, &non_member_b, &c, 20);
        let c40n = count_below(&spec, &non_member_b, &c, 40);
        assert!(c40n > c20n);
    }

    #[test]
    fn punctured_disc_dichotomy() {
        // Over U = (-∞, 0): a piece on v >= 0 with w >= 0 passes (sub-linear
        // growth); any affine piece on v <= 0 fails (no super-linear decay);
        // a quadratic piece on v <= 0 passes.
        let u = Region {
            vertices: vec![vec![rat(0)]],
            rays: vec![vec![-1]],
            open: true,
        };
        assert!(section_membership(&half_line_spec(1), &u).unwrap().member);
        let affine_tail = half_line_spec(-1);
        let m = section_membership(&affine_tail, &u).unwrap();
        assert!(!m.member);
        assert!(matches!(
            m.violation,
            Some(Violation::AlongRegionRay { .. })
        ));
        let quad_tail = ValuationSpec::new(
            1,
            vec![Piece {
                cone_rays: vec![vec![-1]],
                a: rat(0),
                w: vec![rat(0)],
                quad: Some(vec![vec![2]]),
            }],
            vec![],
        )
        .unwrap();
        assert!(section_membership(&quad_tail, &u).unwrap().member);
    }

    #[test]
    fn ill_defined_overlap_is_rejected() {
        let err = ValuationSpec::new(
            1,
            vec![
                Piece {
                    cone_rays: vec![vec![1]],
                    a: rat(0),
                    w: vec![rat(0)],
                    quad: None,
                },
                Piece {
                    cone_rays: vec![vec![1]],
                    a: rat(1),
                    w: vec![rat(0)],
                    quad: None,
                },
            ],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn exceptional_points_do_not_affect_membership() {
        let spec = ValuationSpec::new(
            1,
            vec![Piece {
                cone_rays: vec![vec![1]],
                a: rat(0),
                w: vec![rat(0)],
                quad: None,
            }],
            vec![(vec![-3], rat(-100))],
        )
        .unwrap();
        let left = Region {
            vertices: vec![vec![rat(-1)], vec![rat(0)]],
            rays: vec![],
            open: true,
        };
        assert!(section_membership(&spec, &left).unwrap().member);
        assert_eq!(spec.val_at(&[-3]), Some(rat(-100)));
    }

    #[test]
    fn cone_membership() {
        assert!(in_cone(&to_q(&[2, 1]), &[vec![1, 0], vec![1, 1]]));
        assert!(!in_cone(&to_q(&[-1, 0]), &[vec![1, 0], vec![1, 1]]));
        assert!(in_cone(&to_q(&[0, 0]), &[vec![1, 0]]));
    }
}
