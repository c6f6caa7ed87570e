//! Symmetric and exterior power complexes of a two-term complex.
//!
//! A [`TwoTermComplex`] is a single map `d: F_1 -> F_0` regarded as a complex
//! in degrees 1 and 0; `H_1 = ker d` and `H_0 = coker d`. For the
//! cohomological variant `V^0 -> V^1` the same record is reused with the
//! `rank1` slot holding `dim V^0` (the source) and `rank0` holding `dim V^1`.
//!
//! Everything is stored cohomologically: positions increase along the
//! complex, and `maps[p]` is the differential out of position `start + p`.
//!
//! [`contraction_matrix`] is the exterior-power differential
//! `Sym^h F_0 (x) Lambda^k F_1 -> Sym^(h+1) F_0 (x) Lambda^(k-1) F_1`; it is
//! the single implementation behind the exterior power complex, the
//! closedness test, and the horizontal differential of the double complex.

use crate::error::{CoreError, Result};
use crate::linalg::{RMatrix, Rational};
use crate::multilinear::{
    ext_basis, ext_dim, ext_index_map, shuffle_sign, sym_basis, sym_dim, sym_index_map,
};

/// A two-term complex of rational vector spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTermComplex {
    rank1: usize,
    rank0: usize,
    d: RMatrix,
}

impl TwoTermComplex {
    pub fn new(rank1: usize, rank0: usize, d: RMatrix) -> Result<Self> {
        if d.nrows() != rank0 || d.ncols() != rank1 {
            return Err(CoreError::Shape(format!(
                "differential is {}x{}, expected {}x{}",
                d.nrows(),
                d.ncols(),
                rank0,
                rank1
            )));
        }
        Ok(TwoTermComplex { rank1, rank0, d })
    }

    /// Complex with zero differential.
    pub fn with_zero_map(rank1: usize, rank0: usize) -> Self {
        TwoTermComplex {
            rank1,
            rank0,
            d: RMatrix::zero(rank0, rank1),
        }
    }

    pub fn rank1(&self) -> usize {
        self.rank1
    }

    pub fn rank0(&self) -> usize {
        self.rank0
    }

    pub fn d(&self) -> &RMatrix {
        &self.d
    }

    /// dim ker d.
    pub fn h1_dim(&self) -> usize {
        self.rank1 - self.d.rank()
    }

    /// dim coker d.
    pub fn h0_dim(&self) -> usize {
        self.rank0 - self.d.rank()
    }
}

/// A bounded cochain complex given by per-position dimensions and
/// differentials; `maps[p]` goes from position `start + p` to `start + p + 1`.
#[derive(Clone, Debug)]
pub struct ChainComplexSlices {
    pub start: i64,
    pub dims: Vec<usize>,
    pub maps: Vec<RMatrix>,
}

impl ChainComplexSlices {
    /// Verify that consecutive differentials compose to zero; reports the
    /// source position of the first failure.
    pub fn check_squares(&self) -> Result<()> {
        for p in 0..self.maps.len().saturating_sub(1) {
            if !self.maps[p + 1].mul(&self.maps[p]).is_zero() {
                return Err(CoreError::CompositionNotZero {
                    position: self.start + p as i64,
                });
            }
        }
        Ok(())
    }
}

/// The differential of the exterior power complex out of the cell
/// `Sym^h W_0 (x) Lambda^k W_1`, in the canonical bases:
/// each wedge factor is contracted against `d` with alternating signs
/// `(-1)^(pos)` (0-based) and multiplied into the symmetric factor.
pub fn contraction_matrix(w: &TwoTermComplex, h: u32, k: u32) -> RMatrix {
    let sym_src = sym_basis(w.rank0, h);
    let ext_src = ext_basis(w.rank1, k);
    let sym_tgt = sym_basis(w.rank0, h + 1);
    let ext_tgt = if k == 0 {
        vec![]
    } else {
        ext_basis(w.rank1, k - 1)
    };
    let nrows = sym_tgt.len() * ext_tgt.len();
    let ncols = sym_src.len() * ext_src.len();
    if k == 0 || nrows == 0 || ncols == 0 {
        return RMatrix::zero(nrows, ncols);
    }
    let sym_tgt_map = sym_index_map(&sym_tgt);
    let ext_tgt_map = ext_index_map(&ext_tgt);
    let d_cols: Vec<Vec<(usize, Rational)>> = (0..w.rank1)
        .map(|t| {
            w.d.col(t)
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !num::Zero::is_zero(v))
                .collect()
        })
        .collect();
    let mut triplets = Vec::new();
    for (si, mu) in sym_src.iter().enumerate() {
        for (ei, kk) in ext_src.iter().enumerate() {
            let col = si * ext_src.len() + ei;
            for (pos, &t) in kk.indices.iter().enumerate() {
                let rest: Vec<u32> = kk.indices.iter().copied().filter(|&j| j != t).collect();
                let rest_row = ext_tgt_map[&rest];
                let sign = if pos % 2 == 0 { 1i64 } else { -1 };
                for (w0i, val) in &d_cols[t as usize] {
                    let mut bumped = mu.exponents.clone();
                    bumped[*w0i] += 1;
                    let row = sym_tgt_map[&bumped] * ext_tgt.len() + rest_row;
                    let v = val * &crate::linalg::rat(sign);
                    triplets.push((row, col, v));
                }
            }
        }
    }
    RMatrix::from_triplets(nrows, ncols, triplets)
}

/// The differential of the symmetric power complex out of the cell
/// `Sym^h V^0 (x) Lambda^k V^1`: the symmetric coproduct (with exponent
/// multiplicities), then `d`, then the wedge.
pub fn sym_step_matrix(v: &TwoTermComplex, h: u32, k: u32) -> RMatrix {
    let v0 = v.rank1; // source space of the cohomological complex
    let v1 = v.rank0;
    let sym_src = sym_basis(v0, h);
    let ext_src = ext_basis(v1, k);
    let sym_tgt = if h == 0 { vec![] } else { sym_basis(v0, h - 1) };
    let ext_tgt = ext_basis(v1, k + 1);
    let nrows = sym_tgt.len() * ext_tgt.len();
    let ncols = sym_src.len() * ext_src.len();
    if h == 0 || nrows == 0 || ncols == 0 {
        return RMatrix::zero(nrows, ncols);
    }
    let sym_tgt_map = sym_index_map(&sym_tgt);
    let ext_tgt_map = ext_index_map(&ext_tgt);
    let d_cols: Vec<Vec<(usize, Rational)>> = (0..v0)
        .map(|i| {
            v.d.col(i)
                .into_iter()
                .enumerate()
                .filter(|(_, val)| !num::Zero::is_zero(val))
                .collect()
        })
        .collect();
    let mut triplets = Vec::new();
    for (si, alpha) in sym_src.iter().enumerate() {
        for (ei, kk) in ext_src.iter().enumerate() {
            let col = si * ext_src.len() + ei;
            for (i, &e) in alpha.exponents.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut lowered = alpha.exponents.clone();
                lowered[i] -= 1;
                let sym_row = sym_tgt_map[&lowered];
                for (t, val) in &d_cols[i] {
                    if let Some((sign, merged)) = shuffle_sign(&[*t as u32], &kk.indices) {
                        let row = sym_row * ext_tgt.len() + ext_tgt_map[&merged];
                        let v = val * &crate::linalg::rat(e as i64 * sign as i64);
                        triplets.push((row, col, v));
                    }
                }
            }
        }
    }
    RMatrix::from_triplets(nrows, ncols, triplets)
}

/// The exterior power complex `Lambda^N(W)`: position `h` in `0..=N` carries
/// `Sym^h W_0 (x) Lambda^(N-h) W_1`.
pub fn ext_complex(w: &TwoTermComplex, n: u32) -> ChainComplexSlices {
    let dims: Vec<usize> = (0..=n)
        .map(|h| sym_dim(w.rank0, h) * ext_dim(w.rank1, n - h))
        .collect();
    let maps: Vec<RMatrix> = (0..n).map(|h| contraction_matrix(w, h, n - h)).collect();
    ChainComplexSlices {
        start: 0,
        dims,
        maps,
    }
}

/// The symmetric power complex `Sym^N(V)`: position `p` in `0..=N` carries
/// `Sym^(N-p) V^0 (x) Lambda^p V^1`.
pub fn sym_complex(v: &TwoTermComplex, n: u32) -> ChainComplexSlices {
    let v0 = v.rank1;
    let v1 = v.rank0;
    let dims: Vec<usize> = (0..=n)
        .map(|p| sym_dim(v0, n - p) * ext_dim(v1, p))
        .collect();
    let maps: Vec<RMatrix> = (0..n).map(|p| sym_step_matrix(v, n - p, p)).collect();
    ChainComplexSlices {
        start: 0,
        dims,
        maps,
    }
}

/// Exact cohomology dimensions of a bounded complex; fails with the offending
/// position if the differentials do not square to zero.
pub fn cohomology_dims(c: &ChainComplexSlices) -> Result<Vec<usize>> {
    c.check_squares()?;
    let ranks: Vec<usize> = crate::exec::map_vec((0..c.maps.len()).collect(), |p| c.maps[p].rank());
    Ok((0..c.dims.len())
        .map(|p| {
            let out_rank = if p < ranks.len() { ranks[p] } else { 0 };
            let in_rank = if p > 0 { ranks[p - 1] } else { 0 };
            c.dims[p] - out_rank - in_rank
        })
        .collect())
}

/// Expected cohomology of `Lambda^N` of a two-term complex with homology
/// dimensions `h0`, `h1`: position `h` carries
/// `Sym^h H_0 (x) Lambda^(N-h) H_1`.
pub fn prop26_expected(h0: usize, h1: usize, n: u32) -> Vec<usize> {
    (0..=n)
        .map(|h| sym_dim(h0, h) * ext_dim(h1, n - h))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn two_term(rank1: usize, rank0: usize, rows: &[&[i64]]) -> TwoTermComplex {
        TwoTermComplex::new(rank1, rank0, RMatrix::from_int_rows(rows)).unwrap()
    }

    #[test]
    fn ext_complex_of_half_zero_complex() {
        // W = (Q^2 -> 0): single nonzero term Lambda^2 W_1 at position 0
        let w = TwoTermComplex::with_zero_map(2, 0);
        let c = ext_complex(&w, 2);
        assert_eq!(c.dims, vec![1, 0, 0]);
        assert!(c.maps.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn ext_complex_of_identity_is_exact() {
        let w = two_term(1, 1, &[&[1]]);
        let c = ext_complex(&w, 1);
        assert_eq!(c.dims, vec![1, 1]);
        let h = cohomology_dims(&c).unwrap();
        assert_eq!(h, vec![0, 0]);
    }

    #[test]
    fn ext_complex_matches_prop26() {
        let w = two_term(3, 2, &[&[1, 0, 2], &[0, 1, -1]]);
        let c = ext_complex(&w, 2);
        c.check_squares().unwrap();
        let h = cohomology_dims(&c).unwrap();
        assert_eq!(h, prop26_expected(w.h0_dim(), w.h1_dim(), 2));
    }

    #[test]
    fn sym_complex_concentrated_cases() {
        // V = (0 -> Q^n): concentrated in Lambda^N V^1
        let v = TwoTermComplex::with_zero_map(0, 3);
        let c = sym_complex(&v, 2);
        assert_eq!(c.dims, vec![0, 0, 3]);
        // V = (Q^n -> 0), N = 1: single slot Sym^1 V^0
        let v = TwoTermComplex::with_zero_map(2, 0);
        let c = sym_complex(&v, 1);
        assert_eq!(c.dims, vec![2, 0]);
    }

    #[test]
    fn sym_complex_of_identity() {
        let v = two_term(1, 1, &[&[1]]);
        let c = sym_complex(&v, 2);
        assert_eq!(c.dims, vec![1, 1, 0]);
        c.check_squares().unwrap();
        // the only map is x^2 -> 2 x (x) dx
        assert_eq!(c.maps[0].entry(0, 0), rat(2));
        assert_eq!(cohomology_dims(&c).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn sym_complex_dual_to_ext_of_dual_data() {
        // cohomology of Sym^N(V) equals the reversed cohomology of
        // Lambda^N of the transposed complex
        let d = RMatrix::from_int_rows(&[&[1, 2], &[0, 0], &[3, 6]]);
        let v = TwoTermComplex::new(2, 3, d.clone()).unwrap();
        let w = TwoTermComplex::new(3, 2, d.transpose()).unwrap();
        for n in 0..=3u32 {
            let hs = cohomology_dims(&sym_complex(&v, n)).unwrap();
            let mut he = cohomology_dims(&ext_complex(&w, n)).unwrap();
            he.reverse();
            assert_eq!(hs, he);
        }
    }

    #[test]
    fn cohomology_of_zero_differentials_is_dims() {
        let w = TwoTermComplex::with_zero_map(2, 2);
        let c = ext_complex(&w, 2);
        assert_eq!(cohomology_dims(&c).unwrap(), c.dims);
    }

    #[test]
    fn prop26_values() {
        assert_eq!(prop26_expected(0, 3, 2), vec![3, 0, 0]);
        assert_eq!(prop26_expected(1, 0, 2), vec![0, 0, 1]);
        assert_eq!(prop26_expected(2, 2, 2), vec![1, 4, 3]);
    }

    #[test]
    fn square_check_reports_position() {
        let c = ChainComplexSlices {
            start: 0,
            dims: vec![1, 1, 1],
            maps: vec![RMatrix::identity(1), RMatrix::identity(1)],
        };
        match c.check_squares() {
            Err(CoreError::CompositionNotZero { position }) => assert_eq!(position, 0),
            other => panic!("expected composition failure, got {other:?}"),
        }
    }
}
