//! Exact two-periodic cohomology of endomorphism blocks over the truncated
//! ring, with interior-window restriction.
//!
//! The complex is assembled in the integer-exponent sector of the leg
//! variable (the sector the endomorphism sheaf actually lives in); ranks
//! are computed by sparse rational elimination. Interior restriction uses
//! the margin-2 rule: the differential moves exponents by at most one whole
//! step, so interior kernels and images are free of truncation artifacts.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::mf::factorization::{differential, e_sum, end_zero, EndEl, Parity};
use crate::mf::ring::{El, Exp, RingSpec};
use crate::rat::Rat;

/// Coordinate of the block complex: `(target block, source block,
/// component, monomial)`.
pub type Coord = (usize, usize, u8, Exp);

/// Assembled two-periodic complex of chosen summand blocks.
pub struct BlockComplex {
    pub spec: RingSpec,
    pub blocks: Vec<(usize, usize)>,
    pub basis: [Vec<Coord>; 2],
    index: [BTreeMap<Coord, usize>; 2],
    /// Columns of the differential, per parity (0 = even -> odd).
    pub d_cols: [Vec<Vec<(usize, Rat)>>; 2],
}

fn parity_idx(p: Parity) -> usize {
    match p {
        Parity::Even => 0,
        Parity::Odd => 1,
    }
}

/// Builds the complex on the given summand blocks of `End(E1 ⊕ E2 ⊕ E3)`.
pub fn assemble_block_complex(
    spec: &RingSpec,
    blocks: &[(usize, usize)],
) -> Result<BlockComplex, Error> {
    let e = e_sum::<Rat>(spec)?;
    // monomial list: integer-exponent sector of the leg variable
    let mut monomials: Vec<Exp> = Vec::new();
    for a in 0..=spec.d_cap {
        for b in 0..=(spec.d_cap - a) {
            for half in -(2 * spec.n_cap)..=(2 * spec.n_cap) {
                if half % 2 != 0 {
                    continue;
                }
                if !spec.invertible && half < 0 {
                    continue;
                }
                let mut exp = [0i64; 3];
                let mut others = (0..3).filter(|&v| v != spec.leg);
                let v1 = others.next().unwrap();
                let v2 = others.next().unwrap();
                exp[v1] = 2 * a;
                exp[v2] = 2 * b;
                exp[spec.leg] = half;
                monomials.push(exp);
            }
        }
    }
    let mut basis: [Vec<Coord>; 2] = [Vec::new(), Vec::new()];
    for &(r, c) in blocks {
        for comp in 0..2u8 {
            for m in &monomials {
                basis[0].push((r, c, comp, *m));
                basis[1].push((r, c, comp, *m));
            }
        }
    }
    let index: [BTreeMap<Coord, usize>; 2] = [
        basis[0]
            .iter()
            .enumerate()
            .map(|(i, c)| (*c, i))
            .collect(),
        basis[1]
            .iter()
            .enumerate()
            .map(|(i, c)| (*c, i))
            .collect(),
    ];

    let mut d_cols: [Vec<Vec<(usize, Rat)>>; 2] = [Vec::new(), Vec::new()];
    for parity in [Parity::Even, Parity::Odd] {
        let pi = parity_idx(parity);
        let po = parity_idx(parity.flip());
        let mut cols = Vec::with_capacity(basis[pi].len());
        for &(r, c, comp, m) in &basis[pi] {
            let mut f = end_zero::<Rat>(3, parity);
            let el = El::monomial(spec, m, crate::rat::rat(1))?;
            if comp == 0 {
                f.f0[r][c] = el;
            } else {
                f.f1[r][c] = el;
            }
            let (df, _) = differential(&e, &f, spec);
            let mut col = Vec::new();
            for (mats, comp_out) in [(&df.f0, 0u8), (&df.f1, 1u8)] {
                for (rr, row) in mats.iter().enumerate() {
                    for (cc, entry) in row.iter().enumerate() {
                        for (exp, coeff) in &entry.terms {
                            let coord = (rr, cc, comp_out, *exp);
                            if let Some(&idx) = index[po].get(&coord) {
                                col.push((idx, coeff.clone()));
                            }
                            // coordinates outside the block list cannot occur:
                            // the differential is block-diagonal
                        }
                    }
                }
            }
            col.sort_by_key(|(i, _)| *i);
            cols.push(col);
        }
        d_cols[pi] = cols;
    }
    Ok(BlockComplex {
        spec: *spec,
        blocks: blocks.to_vec(),
        basis,
        index,
        d_cols,
    })
}

fn coord_is_interior(spec: &RingSpec, coord: &Coord, d_int: i64, n_int: i64) -> bool {
    let m = &coord.3;
    let mut degree = 0;
    for (v, &x) in m.iter().enumerate() {
        if v == spec.leg {
            if x.abs() > 2 * n_int {
                return false;
            }
        } else {
            degree += x / 2;
        }
    }
    degree <= d_int
}

fn sparse_rank_of_cols(cols: &[Vec<(usize, Rat)>]) -> usize {
    let rows: Vec<BTreeMap<usize, Rat>> = cols
        .iter()
        .map(|c| c.iter().cloned().collect())
        .collect();
    crate::linalg::sparse_rank(rows)
}

/// Interior-window cohomology dimensions per parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CohomologyDims {
    pub even: usize,
    pub odd: usize,
}

/// `dim (ker d ∩ V_int) - dim (im d ∩ V_int)` per parity, exact.
pub fn interior_dims(
    complex: &BlockComplex,
    d_int: i64,
    n_int: i64,
) -> Result<CohomologyDims, Error> {
    if d_int < 0 || n_int < 0 {
        return Err(Error::MatrixFactorization(
            "interior window is empty; enlarge the caps".into(),
        ));
    }
    let mut dims = [0usize; 2];
    for pi in 0..2 {
        let po = 1 - pi;
        let interior_ids: Vec<usize> = complex.basis[pi]
            .iter()
            .enumerate()
            .filter(|(_, c)| coord_is_interior(&complex.spec, c, d_int, n_int))
            .map(|(i, _)| i)
            .collect();
        // ker ∩ V_int: interior columns of d
        let int_cols: Vec<Vec<(usize, Rat)>> = interior_ids
            .iter()
            .map(|&i| complex.d_cols[pi][i].clone())
            .collect();
        let ker_int = interior_ids.len() - sparse_rank_of_cols(&int_cols);
        // im ∩ V_int: dim(A ∩ B) = rank A + |B| - rank [A | B]
        let im_cols = &complex.d_cols[po];
        let rank_im = sparse_rank_of_cols(im_cols);
        let mut joint = im_cols.clone();
        for &i in complex.basis[pi]
            .iter()
            .enumerate()
            .filter(|(_, c)| coord_is_interior(&complex.spec, c, d_int, n_int))
            .map(|(i, _)| i)
            .collect::<Vec<_>>()
            .iter()
        {
            joint.push(vec![(i, crate::rat::rat(1))]);
        }
        let rank_joint = sparse_rank_of_cols(&joint);
        let im_int = rank_im + interior_ids.len() - rank_joint;
        dims[pi] = ker_int - im_int;
    }
    Ok(CohomologyDims {
        even: dims[0],
        odd: dims[1],
    })
}

impl BlockComplex {
    /// Coordinate vector of an end element in the chosen parity.
    fn coords_of(&self, f: &EndEl<Rat>) -> Vec<(usize, Rat)> {
        let pi = parity_idx(f.parity);
        let mut out = Vec::new();
        for (mats, comp) in [(&f.f0, 0u8), (&f.f1, 1u8)] {
            for (r, row) in mats.iter().enumerate() {
                for (c, entry) in row.iter().enumerate() {
                    for (exp, coeff) in &entry.terms {
                        if let Some(&idx) = self.index[pi].get(&(r, c, comp, *exp)) {
                            out.push((idx, coeff.clone()));
                        }
                    }
                }
            }
        }
        out.sort_by_key(|(i, _)| *i);
        out
    }

    /// Whether the given closed interior elements are independent modulo
    /// `im d` and exhaust the interior cohomology dimensions.
    pub fn spans_interior_cohomology(
        &self,
        even: &[EndEl<Rat>],
        odd: &[EndEl<Rat>],
        d_int: i64,
        n_int: i64,
        dim_even: usize,
        dim_odd: usize,
    ) -> Result<bool, Error> {
        for (parity, family, expected) in [
            (Parity::Even, even, dim_even),
            (Parity::Odd, odd, dim_odd),
        ] {
            let pi = parity_idx(parity);
            let po = 1 - pi;
            // interior support check
            let vectors: Vec<Vec<(usize, Rat)>> =
                family.iter().map(|f| self.coords_of(f)).collect();
            for (f, v) in family.iter().zip(&vectors) {
                let nonzero_terms: usize = [&f.f0, &f.f1]
                    .iter()
                    .map(|m| {
                        m.iter()
                            .flat_map(|r| r.iter())
                            .map(|e| e.terms.len())
                            .sum::<usize>()
                    })
                    .sum();
                if v.len() != nonzero_terms {
                    return Err(Error::MatrixFactorization(
                        "candidate class has support outside the complex".into(),
                    ));
                }
                let interior = v.iter().all(|(i, _)| {
                    coord_is_interior(&self.spec, &self.basis[pi][*i], d_int, n_int)
                });
                if !interior {
                    return Err(Error::MatrixFactorization(
                        "candidate class is not interior-supported".into(),
                    ));
                }
            }
            // independence modulo im d
            let im_cols = &self.d_cols[po];
            let rank_im = sparse_rank_of_cols(im_cols);
            let mut joint = im_cols.clone();
            joint.extend(vectors.iter().cloned());
            let rank_joint = sparse_rank_of_cols(&joint);
            if rank_joint != rank_im + family.len() {
                return Ok(false);
            }
            if family.len() != expected {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
