//! Exact linear algebra over the rationals.
//!
//! Dense routines (rank, solve, kernel, determinant, inverse) are plain
//! Gaussian elimination; matrix sizes here are tiny. The sparse eliminator
//! is used for the two-periodic cohomology ranks, where matrices are large
//! but nearly diagonal.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::rat::{rat, Rat};
use crate::QVec;

pub type QMat = Vec<QVec>;

pub fn identity(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(m: &QMat) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Solves `a x = b` for one solution, if any.
pub fn solve(a: &QMat, b: &[Rat]) -> Option<QVec> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: QMat = (0..rows)
        .map(|i| {
            let mut row = a[i].clone();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None; // inconsistent
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of the kernel of `a`.
pub fn kernel(a: &QMat) -> Vec<QVec> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    for free in 0..cols {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Determinant by fraction-free-ish elimination.
pub fn det(m: &QMat) -> Rat {
    let n = m.len();
    let mut m = m.clone();
    let mut sign = Rat::one();
    let mut result = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(c, p);
            sign = -sign;
        }
        result *= m[c][c].clone();
        let inv = m[c][c].recip();
        for i in (c + 1)..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let t = &m[c][j] * &f;
                m[i][j] = &m[i][j] - t;
            }
        }
    }
    result * sign
}

pub fn inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let mut aug: QMat = (0..n)
        .map(|i| {
            let mut row = m[i].clone();
            for j in 0..n {
                row.push(if i == j { Rat::one() } else { Rat::zero() });
            }
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some((0..n).map(|i| aug[i][n..].to_vec()).collect())
}

/// Affine rank of a point set (dimension of its affine hull).
pub fn affine_rank(points: &[QVec]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let diffs: QMat = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs)
}

/// Signature data of a symmetric rational matrix: (positive, negative, zero)
/// inertia counts, computed by congruence diagonalization.
pub fn symmetric_signature(m: &QMat) -> (usize, usize, usize) {
    let n = m.len();
    let mut a = m.clone();
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    let mut idx: Vec<usize> = (0..n).collect();
    let mut k = 0;
    while k < idx.len() {
        // ensure a nonzero diagonal pivot, mixing rows/cols symmetrically
        let live: Vec<usize> = idx[k..].to_vec();
        let pivot = live.iter().copied().find(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                // all remaining diagonal entries are zero; find an off-diagonal
                let mut found = None;
                'outer: for &i in &live {
                    for &j in &live {
                        if i != j && !a[i][j].is_zero() {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                match found {
                    None => {
                        zero += live.len();
                        break;
                    }
                    Some((i, j)) => {
                        // row/col_i += row/col_j makes a[i][i] = 2 a[i][j] != 0
                        for c in 0..n {
                            let t = a[j][c].clone();
                            a[i][c] = &a[i][c] + t;
                        }
                        for r in 0..n {
                            let t = a[r][j].clone();
                            a[r][i] = &a[r][i] + t;
                        }
                        i
                    }
                }
            }
        };
        let pk = idx[k..].iter().position(|&i| i == pivot).unwrap() + k;
        idx.swap(k, pk);
        let p = idx[k];
        let d = a[p][p].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for &i in &idx[k + 1..] {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] / &d;
            for c in 0..n {
                let t = &a[p][c] * &f;
                a[i][c] = &a[i][c] - t;
            }
            for r in 0..n {
                let t = &a[r][p] * &f;
                a[r][i] = &a[r][i] - t;
            }
        }
        k += 1;
    }
    (pos, neg, zero)
}

/// Sparse matrix rank over the rationals. Rows are column→value maps.
pub fn sparse_rank(rows: Vec<BTreeMap<usize, Rat>>) -> usize {
    let mut rows: Vec<BTreeMap<usize, Rat>> =
        rows.into_iter().filter(|r| !r.is_empty()).collect();
    // pivot per column
    let mut pivot_rows: BTreeMap<usize, BTreeMap<usize, Rat>> = BTreeMap::new();
    let mut rank = 0;
    while let Some(mut row) = rows.pop() {
        loop {
            let Some((&col, _)) = row.iter().next() else { break };
            match pivot_rows.get(&col) {
                None => {
                    let lead = row.get(&col).unwrap().clone();
                    let inv = lead.recip();
                    for v in row.values_mut() {
                        *v = &*v * &inv;
                    }
                    pivot_rows.insert(col, row);
                    rank += 1;
                    break;
                }
                Some(p) => {
                    let f = row.get(&col).unwrap().clone();
                    for (c, v) in p.iter() {
                        let t = v * &f;
                        let e = row.entry(*c).or_insert_with(Rat::zero);
                        *e = &*e - t;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
            }
        }
    }
    rank
}

/// Integer determinant of a square integer matrix, exact via rationals.
pub fn det_i(m: &[Vec<i64>]) -> Rat {
    let q: QMat = m.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect();
    det(&q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::frac;

    #[test]
    fn rank_solve_kernel() {
        let a = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(1), rat(0), rat(1)],
        ];
        assert_eq!(rank(&a), 2);
        let k = kernel(&a);
        assert_eq!(k.len(), 1);
        // a * k[0] == 0
        for row in &a {
            let s = crate::vecops::dot_q(row, &k[0]);
            assert!(s.is_zero());
        }
        let b = vec![rat(6), rat(12), rat(2)];
        let x = solve(&a, &b).unwrap();
        for (row, bi) in a.iter().zip(&b) {
            assert_eq!(crate::vecops::dot_q(row, &x), *bi);
        }
        assert!(solve(&a, &vec![rat(1), rat(0), rat(0)]).is_none());
    }

    #[test]
    fn determinant_and_inverse() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(1)]];
        assert_eq!(det(&a), rat(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0][0], rat(1));
        assert_eq!(inv[0][1], rat(-1));
        let sing = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert!(det(&sing).is_zero());
        assert!(inverse(&sing).is_none());
    }

    #[test]
    fn signature_counts() {
        // diag(2, -3, 0)
        let m = vec![
            vec![rat(2), rat(0), rat(0)],
            vec![rat(0), rat(-3), rat(0)],
            vec![rat(0), rat(0), rat(0)],
        ];
        assert_eq!(symmetric_signature(&m), (1, 1, 1));
        // hyperbolic plane: zero diagonal, signature (1,1)
        let h = vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]];
        assert_eq!(symmetric_signature(&h), (1, 1, 0));
        let g = vec![vec![rat(4), rat(2)], vec![rat(2), rat(4)]];
        assert_eq!(symmetric_signature(&g), (2, 0, 0));
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let dense = vec![
            vec![rat(1), rat(0), frac(1, 2), rat(0)],
            vec![rat(0), rat(0), rat(0), rat(0)],
            vec![rat(2), rat(0), rat(1), rat(0)],
            vec![rat(0), rat(3), rat(0), rat(1)],
        ];
        let sparse: Vec<BTreeMap<usize, Rat>> = dense
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, v)| (i, v.clone()))
                    .collect()
            })
            .collect();
        assert_eq!(sparse_rank(sparse), rank(&dense));
    }

    #[test]
    fn affine_rank_of_points() {
        let pts = vec![
            vec![rat(0), rat(0)],
            vec![rat(1), rat(0)],
            vec![rat(2), rat(0)],
        ];
        assert_eq!(affine_rank(&pts), 1);
    }
}
