//! Chord enumeration and action/index bookkeeping for convex Hamiltonians.
//!
//! Quadratic Hamiltonians are handled exactly over the rationals; the disc
//! Hamiltonian `H(b) = -λ√(1-|b|²)` uses floating point with a 1e-9
//! tolerance, as the only non-exact computation in the crate.

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::linalg::{solve, symmetric_signature, QMat};
use crate::rat::{rat, rat_to_f64, Rat};
use crate::vecops::{dot_q, dot_qi, to_q};
use crate::{IVec, QVec};

/// The two supported Hamiltonian classes.
#[derive(Debug, Clone)]
pub enum ConvexHamiltonian {
    /// `H(b) = ½ b·Qb + c·b` on all of R^n. Degenerate `Q` is allowed;
    /// affected chords are flagged.
    Quadratic { q: QMat, c: QVec },
    /// `H(b) = -λ √(1 - |b|²)` on the open unit ball, `λ > 0`.
    Disc { lambda: Rat, dim: usize },
}

impl ConvexHamiltonian {
    pub fn quadratic(q: QMat, c: QVec) -> Result<Self, Error> {
        let n = q.len();
        if c.len() != n || q.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                if q[i][j] != q[j][i] {
                    return Err(Error::invalid("quadratic Hamiltonian must be symmetric"));
                }
            }
        }
        Ok(ConvexHamiltonian::Quadratic { q, c })
    }

    pub fn disc(lambda: Rat, dim: usize) -> Result<Self, Error> {
        if !lambda.is_positive() {
            return Err(Error::invalid("disc parameter must be positive"));
        }
        Ok(ConvexHamiltonian::Disc { lambda, dim })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexHamiltonian::Quadratic { q, .. } => q.len(),
            ConvexHamiltonian::Disc { dim, .. } => *dim,
        }
    }
}

/// Chord location and action, exact or floating per Hamiltonian class.
#[derive(Debug, Clone, PartialEq)]
pub enum Coords {
    Exact(QVec),
    Approx(Vec<f64>),
}

/// One Hamiltonian chord: the integral cotangent vector it realizes, its
/// base point, action, Morse index and nondegeneracy.
#[derive(Debug, Clone)]
pub struct ChordRecord {
    pub v: IVec,
    pub b: Coords,
    pub action: ActionValue,
    pub index: Option<usize>,
    pub nondegenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ActionValue {
    Exact(Rat),
    Approx(f64),
}

impl ActionValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            ActionValue::Exact(r) => rat_to_f64(r),
            ActionValue::Approx(x) => *x,
        }
    }
}

/// Enumerates the chords `dH_b = v` over the integer window `|v|_∞ <= w`.
///
/// Quadratic kind: `b = Q⁻¹(v - c)` when solvable, exact; inconsistent
/// systems yield no chord, underdetermined ones a degenerate flagged chord.
/// Disc kind: `b = v/√(λ² + |v|²)`, action `-√(λ² + |v|²)`, index 0.
pub fn enumerate_chords(h: &ConvexHamiltonian, window: i64) -> Result<Vec<ChordRecord>, Error> {
    if window < 0 {
        return Err(Error::invalid("window must be nonnegative"));
    }
    let n = h.dim();
    let mut out = Vec::new();
    let mut cursor = vec![-window; n];
    'scan: loop {
        if let Some(record) = chord_at(h, &cursor)? {
            out.push(record);
        }
        for c in 0..n {
            cursor[c] += 1;
            if cursor[c] <= window {
                continue 'scan;
            }
            cursor[c] = -window;
        }
        break;
    }
    Ok(out)
}

fn chord_at(h: &ConvexHamiltonian, v: &[i64]) -> Result<Option<ChordRecord>, Error> {
    match h {
        ConvexHamiltonian::Quadratic { q, c } => {
            let rhs: QVec = to_q(v).iter().zip(c).map(|(x, y)| x - y).collect();
            let Some(b) = solve(q, &rhs) else {
                return Ok(None); // dH = v unsolvable
            };
            let det = crate::linalg::det(q);
            let nondegenerate = !det.is_zero();
            // H(b) - v·b with H = ½ b·Qb + c·b
            let qb: QVec = q.iter().map(|row| dot_q(row, &b)).collect();
            let action =
                dot_q(&b, &qb) / rat(2) + dot_q(c, &b) - dot_qi(&b, v);
            let index = if nondegenerate {
                Some(symmetric_signature(q).1)
            } else {
                None
            };
            Ok(Some(ChordRecord {
                v: v.to_vec(),
                b: Coords::Exact(b),
                action: ActionValue::Exact(action),
                index,
                nondegenerate,
            }))
        }
        ConvexHamiltonian::Disc { lambda, dim } => {
            let lam = rat_to_f64(lambda);
            let v2: f64 = v.iter().map(|&x| (x as f64) * (x as f64)).sum();
            let norm = (lam * lam + v2).sqrt();
            let b: Vec<f64> = v.iter().map(|&x| (x as f64) / norm).collect();
            debug_assert_eq!(b.len(), *dim);
            Ok(Some(ChordRecord {
                v: v.to_vec(),
                b: Coords::Approx(b),
                action: ActionValue::Approx(-norm),
                index: Some(0),
                nondegenerate: true,
            }))
        }
    }
}

/// Report bridging the chord complex to the section algebra for the disc
/// Hamiltonian.
#[derive(Debug, Clone)]
pub struct CfReport {
    pub chord_count: usize,
    pub lattice_count: usize,
    pub all_index_zero: bool,
    /// `|A(x_v) + v·b_v| <= λ` for every chord t (within 1e-9).
    pub bridge_ok: bool,
    pub max_bridge_value: f64,
    /// `‖dH‖ -> ∞` monotonically and `dH/‖dH‖ -> N(c)` within 1e-6 along
    /// boundary-approaching radial sequences.
    pub radial_ok: bool,
    pub radial_direction_error: f64,
}

impl CfReport {
    pub fn pass(&self) -> bool {
        self.chord_count == self.lattice_count
            && self.all_index_zero
            && self.bridge_ok
            && self.radial_ok
    }
}

/// Verifies the chords-to-sections correspondence data for the disc
/// Hamiltonian: chord/lattice bijection on the window, degree
/// concentration, the action bound, and the radial growth of `dH` near the
/// boundary.
pub fn cf_correspondence_report(
    lambda: &Rat,
    dim: usize,
    window: i64,
) -> Result<CfReport, Error> {
    let h = ConvexHamiltonian::disc(lambda.clone(), dim)?;
    let chords = enumerate_chords(&h, window)?;
    let lattice_count = {
        let side = (2 * window + 1) as usize;
        side.pow(dim as u32)
    };
    let all_index_zero = chords.iter().all(|c| c.index == Some(0));
    let lam = rat_to_f64(lambda);
    let mut max_bridge: f64 = 0.0;
    for c in &chords {
        let b = match &c.b {
            Coords::Approx(b) => b,
            Coords::Exact(_) => unreachable!("disc chords are floating point"),
        };
        let vb: f64 = c
            .v
            .iter()
            .zip(b)
            .map(|(&x, y)| (x as f64) * y)
            .sum();
        let bridge = (c.action.as_f64() + vb).abs();
        max_bridge = max_bridge.max(bridge);
    }
    let bridge_ok = max_bridge <= lam + 1e-9;

    // radial growth along sampled directions
    let mut radial_ok = true;
    let mut worst_dir_err: f64 = 0.0;
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut d = vec![0.0; dim];
            d[i] = s;
            dirs.push(d);
        }
    }
    let diag = (dim as f64).sqrt();
    dirs.push((0..dim).map(|_| 1.0 / diag).collect());
    for u in &dirs {
        let mut prev_norm = -1.0f64;
        let mut last_err = f64::INFINITY;
        for j in 1..=20u32 {
            let r = 1.0 - (0.5f64).powi(j as i32);
            let b: Vec<f64> = u.iter().map(|x| x * r).collect();
            let b2: f64 = b.iter().map(|x| x * x).sum();
            let scale = lam / (1.0 - b2).sqrt();
            let dh: Vec<f64> = b.iter().map(|x| x * scale).collect();
            let norm = dh.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm <= prev_norm {
                radial_ok = false;
            }
            prev_norm = norm;
            last_err = dh
                .iter()
                .zip(u)
                .map(|(x, y)| (x / norm - y).abs())
                .fold(0.0, f64::max);
        }
        if last_err > 1e-6 {
            radial_ok = false;
        }
        worst_dir_err = worst_dir_err.max(last_err);
    }

    Ok(CfReport {
        chord_count: chords.len(),
        lattice_count,
        all_index_zero,
        bridge_ok,
        max_bridge_value: max_bridge,
        radial_ok,
        radial_direction_error: worst_dir_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::frac;

    #[test]
    fn quadratic_chords_closed_form() {
        // H(b) = b² (Q = (2)): chord at b = v/2, action -v²/4, index 0
        let h = ConvexHamiltonian::quadratic(vec![vec![rat(2)]], vec![rat(0)]).unwrap();
        let chords = enumerate_chords(&h, 3).unwrap();
        assert_eq!(chords.len(), 7);
        for ch in &chords {
            let v = ch.v[0];
            assert_eq!(ch.b, Coords::Exact(vec![frac(v, 2)]));
            assert_eq!(ch.action, ActionValue::Exact(frac(-v * v, 4)));
            assert_eq!(ch.index, Some(0));
            assert!(ch.nondegenerate);
        }
        let two = chords.iter().find(|c| c.v == vec![2]).unwrap();
        assert_eq!(two.b, Coords::Exact(vec![rat(1)]));
        assert_eq!(two.action, ActionValue::Exact(rat(-1)));
    }

    #[test]
    fn plane_quadratic_origin_chord() {
        // H = ½|b|², v = 0: b = 0, action 0, index 0
        let h = ConvexHamiltonian::quadratic(
            vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]],
            vec![rat(0), rat(0)],
        )
        .unwrap();
        let chords = enumerate_chords(&h, 0).unwrap();
        assert_eq!(chords.len(), 1);
        assert_eq!(chords[0].b, Coords::Exact(vec![rat(0), rat(0)]));
        assert_eq!(chords[0].action, ActionValue::Exact(rat(0)));
        assert_eq!(chords[0].index, Some(0));
    }

    #[test]
    fn indefinite_quadratic_has_positive_morse_index() {
        // H = ½(b1² - b2²): saddle chords of index 1
        let h = ConvexHamiltonian::quadratic(
            vec![vec![rat(1), rat(0)], vec![rat(0), rat(-1)]],
            vec![rat(0), rat(0)],
        )
        .unwrap();
        let chords = enumerate_chords(&h, 1).unwrap();
        assert_eq!(chords.len(), 9);
        for c in &chords {
            assert_eq!(c.index, Some(1));
            assert!(c.nondegenerate);
        }
    }

    #[test]
    fn degenerate_quadratic_is_flagged() {
        let h = ConvexHamiltonian::quadratic(vec![vec![rat(0)]], vec![rat(0)]).unwrap();
        // dH = 0: v = 0 solvable (any b), v = 1 unsolvable
        let chords = enumerate_chords(&h, 1).unwrap();
        assert_eq!(chords.len(), 1);
        assert_eq!(chords[0].v, vec![0]);
        assert!(!chords[0].nondegenerate);
        assert_eq!(chords[0].index, None);
    }

    #[test]
    fn disc_chords_closed_form() {
        // λ = 1: chord at b = v/√(1+v²), action -√(1+v²); v = 0 → A = -1
        let h = ConvexHamiltonian::disc(rat(1), 1).unwrap();
        let chords = enumerate_chords(&h, 2).unwrap();
        assert_eq!(chords.len(), 5);
        for ch in &chords {
            let v = ch.v[0] as f64;
            let expect_b = v / (1.0 + v * v).sqrt();
            let expect_a = -(1.0 + v * v).sqrt();
            match (&ch.b, &ch.action) {
                (Coords::Approx(b), ActionValue::Approx(a)) => {
                    assert!((b[0] - expect_b).abs() < 1e-9);
                    assert!((a - expect_a).abs() < 1e-9);
                }
                _ => panic!("disc chords must be floating point"),
            }
            assert_eq!(ch.index, Some(0));
        }
    }

    #[test]
    fn cf_report_window_counts() {
        let r = cf_correspondence_report(&rat(1), 1, 10).unwrap();
        assert_eq!(r.chord_count, 21);
        assert!(r.pass(), "{r:?}");
        let r2 = cf_correspondence_report(&rat(1), 2, 3).unwrap();
        assert_eq!(r2.chord_count, 49);
        assert!(r2.pass());
    }

    #[test]
    fn action_is_concave_along_segments() {
        // disc: A(v) = -√(λ²+|v|²); check midpoint concavity numerically
        let lam = 1.0f64;
        let a = |v: f64| -(lam * lam + v * v).sqrt();
        for i in -10..=10 {
            let v0 = i as f64;
            let v1 = v0 + 2.0;
            assert!(a((v0 + v1) / 2.0) + 1e-12 >= (a(v0) + a(v1)) / 2.0);
        }
        // quadratic with Q = (2): A(v) = -v²/4, exact rational midpoints
        let h = ConvexHamiltonian::quadratic(vec![vec![rat(2)]], vec![rat(0)]).unwrap();
        let act = |v: i64| match chord_at(&h, &[v]).unwrap().unwrap().action {
            ActionValue::Exact(r) => r,
            _ => unreachable!(),
        };
        for v in -5..=5i64 {
            let mid = act(v) + act(v + 2);
            assert!(act(v + 1) * rat(2) >= mid);
        }
    }

    #[test]
    fn quadratic_chord_map_is_bijective_for_definite_q() {
        let h = ConvexHamiltonian::quadratic(
            vec![vec![rat(2), rat(1)], vec![rat(1), rat(2)]],
            vec![rat(0), rat(1)],
        )
        .unwrap();
        let chords = enumerate_chords(&h, 2).unwrap();
        assert_eq!(chords.len(), 25);
        let mut seen = std::collections::BTreeSet::new();
        for c in &chords {
            let Coords::Exact(b) = &c.b else { panic!() };
            assert!(seen.insert(format!("{b:?}")));
        }
    }
}
