//! The double complex `L^(h,k) = Sym^h F_0 (x) Lambda^k F_1` with
//! differentials `dtilde` (contraction against d, bidegree (1,-1)) and
//! `atilde` (multiplication by the form, bidegree (m,1)), regrouped into the
//! sub-double-complexes `K_i^(p,q) = Sym^(p+mq-i) F_0 (x) Lambda^(q-p) F_1`
//! for `i = 0..=m`, and their total complexes.
//!
//! A cell `(h, k)` lies in `K_i` for `i = -(h+k) mod (m+1)`, at bidegree
//! `q = (h+k+i)/(m+1)`, `p = q-k`, hence total degree `n = 2q - k`. For
//! `m >= 2` the strip dips below total degree zero, so slices are indexed by
//! `i64` degrees.

use crate::error::Result;
use crate::guard;
use crate::koszul::{contraction_matrix, TwoTermComplex};
use crate::linalg::{rat, RMatrix};
use crate::multilinear::{
    ext_basis, ext_dim, ext_index_map, shuffle_sign, sym_basis, sym_dim, sym_index_map,
};
use crate::witten::euler::n0_bound;
use crate::witten::form::Instance;
use crate::CoreError;

/// The horizontal differential `L^(h,k) -> L^(h+1,k-1)`.
pub fn dtilde_matrix(f: &TwoTermComplex, h: u32, k: u32) -> RMatrix {
    contraction_matrix(f, h, k)
}

/// The vertical differential `L^(h,k) -> L^(h+m,k+1)`: multiply the
/// symmetric factor by each form coefficient and wedge its `F_1` leg on the
/// left.
pub fn atilde_matrix(inst: &Instance, h: u32, k: u32) -> RMatrix {
    let f = inst.complex();
    let m = inst.m();
    let sym_src = sym_basis(f.rank0(), h);
    let ext_src = ext_basis(f.rank1(), k);
    let sym_tgt = sym_basis(f.rank0(), h + m);
    let ext_tgt = ext_basis(f.rank1(), k + 1);
    let nrows = sym_tgt.len() * ext_tgt.len();
    let ncols = sym_src.len() * ext_src.len();
    if nrows == 0 || ncols == 0 {
        return RMatrix::zero(nrows, ncols);
    }
    let sym_tgt_map = sym_index_map(&sym_tgt);
    let ext_tgt_map = ext_index_map(&ext_tgt);
    let mut triplets = Vec::new();
    for (si, mu) in sym_src.iter().enumerate() {
        for (ei, kk) in ext_src.iter().enumerate() {
            let col = si * ext_src.len() + ei;
            for (nu, t, c) in inst.form().coeffs() {
                let Some((sign, merged)) = shuffle_sign(&[t as u32], &kk.indices) else {
                    continue;
                };
                let bumped: Vec<u32> = mu
                    .exponents
                    .iter()
                    .zip(nu)
                    .map(|(x, y)| x + y)
                    .collect();
                let row = sym_tgt_map[&bumped] * ext_tgt.len() + ext_tgt_map[&merged];
                triplets.push((row, col, c * &rat(sign as i64)));
            }
        }
    }
    RMatrix::from_triplets(nrows, ncols, triplets)
}

/// One cell of a total-complex slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub sym_deg: u32,
    pub ext_deg: u32,
    pub dim: usize,
}

/// A truncation of the total complex `(K_i, D = dtilde + atilde)`.
#[derive(Clone, Debug)]
pub struct TotalComplexSlice {
    pub i: u32,
    /// First materialized total degree (can be negative for m >= 2).
    pub n_min: i64,
    /// Last materialized total degree.
    pub n_max: i64,
    /// Cells per degree, ordered by increasing exterior degree.
    pub cells: Vec<Vec<Cell>>,
    pub dims: Vec<usize>,
    /// `maps[j]` is `D` out of degree `n_min + j`; the last degree has no
    /// outgoing map.
    pub maps: Vec<RMatrix>,
}

impl TotalComplexSlice {
    pub fn dim_at(&self, n: i64) -> usize {
        if n < self.n_min || n > self.n_max {
            return 0;
        }
        self.dims[(n - self.n_min) as usize]
    }

    /// `D_n`, when materialized.
    pub fn map_at(&self, n: i64) -> Option<&RMatrix> {
        if n < self.n_min || n >= self.n_max {
            return None;
        }
        self.maps.get((n - self.n_min) as usize)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.n_min..=self.n_max
    }
}

/// Cells of `K_i` in total degree `n`, ordered by exterior degree; zero
/// dimensional cells are dropped.
pub(crate) fn cells_at(f: &TwoTermComplex, m: u32, i: u32, n: i64) -> Vec<Cell> {
    let mut out = Vec::new();
    let mut k = n.rem_euclid(2);
    while k <= f.rank1() as i64 {
        let p = (n - k) / 2;
        let q = (n + k) / 2;
        let h = p + m as i64 * q - i as i64;
        if h >= 0 {
            let dim = sym_dim(f.rank0(), h as u32) * ext_dim(f.rank1(), k as u32);
            if dim > 0 {
                out.push(Cell {
                    sym_deg: h as u32,
                    ext_deg: k as u32,
                    dim,
                });
            }
        }
        k += 2;
    }
    out
}

/// Materialize the total complex of `K_i` for all degrees up to `n_max`.
/// Slices start at the first nonempty degree (which is negative when the
/// strip dips below zero).
pub fn total_complex(inst: &Instance, i: u32, n_max: i64) -> Result<TotalComplexSlice> {
    let f = inst.complex();
    let m = inst.m();
    assert!(i <= m, "i ranges over 0..=m");
    let lower_bound = -(f.rank1() as i64);
    let mut per_degree: Vec<Vec<Cell>> = Vec::new();
    let mut n_min = None;
    for n in lower_bound..=n_max {
        let cells = cells_at(f, m, i, n);
        if n_min.is_none() {
            if cells.is_empty() {
                continue;
            }
            n_min = Some(n);
        }
        per_degree.push(cells);
    }
    let Some(n_min) = n_min else {
        return Ok(TotalComplexSlice {
            i,
            n_min: 0,
            n_max: 0,
            cells: vec![vec![]],
            dims: vec![0],
            maps: vec![],
        });
    };
    let dims: Vec<usize> = per_degree
        .iter()
        .map(|cells| cells.iter().map(|c| c.dim).sum())
        .collect();
    for &d in &dims {
        guard::check(d)?;
    }
    let map_indices: Vec<usize> = (0..per_degree.len().saturating_sub(1)).collect();
    let maps = crate::exec::map_vec(map_indices, |j| {
        assemble_differential(inst, &per_degree[j], &per_degree[j + 1])
    });
    Ok(TotalComplexSlice {
        i,
        n_min,
        n_max,
        cells: per_degree,
        dims,
        maps,
    })
}

/// Assemble `D = dtilde + atilde` between two consecutive slices from its
/// per-cell blocks.
fn assemble_differential(inst: &Instance, source: &[Cell], target: &[Cell]) -> RMatrix {
    let m = inst.m();
    let src_dim: usize = source.iter().map(|c| c.dim).sum();
    let tgt_dim: usize = target.iter().map(|c| c.dim).sum();
    let mut src_offsets = Vec::with_capacity(source.len());
    let mut acc = 0;
    for c in source {
        src_offsets.push(acc);
        acc += c.dim;
    }
    let mut tgt_offsets = std::collections::HashMap::new();
    acc = 0;
    for c in target {
        tgt_offsets.insert((c.sym_deg, c.ext_deg), acc);
        acc += c.dim;
    }
    let mut triplets = Vec::new();
    for (ci, cell) in source.iter().enumerate() {
        let col0 = src_offsets[ci];
        if cell.ext_deg >= 1 {
            if let Some(&row0) = tgt_offsets.get(&(cell.sym_deg + 1, cell.ext_deg - 1)) {
                let block = dtilde_matrix(inst.complex(), cell.sym_deg, cell.ext_deg);
                push_block(&mut triplets, &block, row0, col0);
            }
        }
        if let Some(&row0) = tgt_offsets.get(&(cell.sym_deg + m, cell.ext_deg + 1)) {
            let block = atilde_matrix(inst, cell.sym_deg, cell.ext_deg);
            push_block(&mut triplets, &block, row0, col0);
        }
    }
    RMatrix::from_triplets(tgt_dim, src_dim, triplets)
}

pub(crate) fn push_block(
    triplets: &mut Vec<(usize, usize, crate::linalg::Rational)>,
    block: &RMatrix,
    row0: usize,
    col0: usize,
) {
    for r in 0..block.nrows() {
        for (c, v) in block.row(r) {
            triplets.push((row0 + r, col0 + c, v.clone()));
        }
    }
}

/// Exact cohomology dimensions of the total complex of `K_i` for degrees up
/// to `n_max`. Vanishing is enforced from the effective bound on: surviving
/// cohomology at degree `n >= n0` is reported as a hard error.
pub fn cohomology_of_total(inst: &Instance, i: u32, n_max: i64) -> Result<Vec<(i64, usize)>> {
    let n0 = n0_bound(inst.complex(), inst.m());
    let total = total_complex(inst, i, n_max + 1)?;
    let ranks: Vec<usize> =
        crate::exec::map_vec((0..total.maps.len()).collect(), |j| total.maps[j].rank());
    let mut out = Vec::new();
    for n in total.n_min..=n_max.min(total.n_max - 1) {
        let j = (n - total.n_min) as usize;
        let out_rank = if j < ranks.len() { ranks[j] } else { 0 };
        let in_rank = if j > 0 { ranks[j - 1] } else { 0 };
        let h = total.dims[j] - out_rank - in_rank;
        if h != 0 && n >= n0 {
            return Err(CoreError::VanishingViolation { i, n, n0 });
        }
        out.push((n, h));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witten::form::Form;

    fn theta(h: usize) -> Instance {
        let f = TwoTermComplex::with_zero_map(h, h);
        let entries = (0..h).map(|j| {
            let mut e = vec![0u32; h];
            e[j] = 1;
            (e, j, rat(1))
        });
        Instance::new(f, Form::new(1, h, h, entries).unwrap()).unwrap()
    }

    #[test]
    fn dtilde_vanishes_without_contraction() {
        let f = TwoTermComplex::with_zero_map(2, 2);
        assert!(dtilde_matrix(&f, 1, 0).is_zero());
        assert!(dtilde_matrix(&f, 1, 2).is_zero()); // d = 0
        let f = TwoTermComplex::new(1, 1, RMatrix::from_int_rows(&[&[1]])).unwrap();
        assert!(dtilde_matrix(&f, 2, 0).is_zero());
        assert!(!dtilde_matrix(&f, 1, 1).is_zero());
    }

    #[test]
    fn theta_atilde_single_cell_is_the_pairing() {
        // (h,k) = (0,0): a: L^(0,0) = Q -> L^(1,1) = Q is the coefficient 1
        let inst = theta(1);
        let a = atilde_matrix(&inst, 0, 0);
        assert_eq!((a.nrows(), a.ncols()), (1, 1));
        assert_eq!(a.entry(0, 0), rat(1));
    }

    #[test]
    fn theta_strip_dims() {
        let inst = theta(1);
        let t0 = total_complex(&inst, 0, 5).unwrap();
        assert_eq!(t0.n_min, 0);
        assert_eq!(t0.dims, vec![1, 1, 1, 1, 1, 1]);
        // D alternates iso / zero starting with the pairing
        assert_eq!(t0.maps[0].rank(), 1);
        assert!(t0.maps[1].is_zero());
        assert_eq!(t0.maps[2].rank(), 1);
        let t1 = total_complex(&inst, 1, 5).unwrap();
        assert_eq!(t1.n_min, 1);
        assert_eq!(t1.dims, vec![1, 1, 1, 1, 1]);
        assert!(t1.maps[0].is_zero());
        assert_eq!(t1.maps[1].rank(), 1);
    }

    #[test]
    fn theta_cohomology_euler_characteristics() {
        let inst = theta(1);
        let h0 = cohomology_of_total(&inst, 0, 5).unwrap();
        assert!(h0.iter().all(|&(_, h)| h == 0));
        let h1 = cohomology_of_total(&inst, 1, 5).unwrap();
        let total: i64 = h1
            .iter()
            .map(|&(n, h)| if n.rem_euclid(2) == 0 { h as i64 } else { -(h as i64) })
            .sum();
        assert_eq!(total, -1);
        assert_eq!(h1[0], (1, 1)); // H^1 is the only cohomology
        assert!(h1.iter().skip(1).all(|&(_, h)| h == 0));
    }

    #[test]
    fn empty_complex_has_single_structure_cell() {
        let f = TwoTermComplex::with_zero_map(0, 0);
        let inst = Instance::new(f, Form::zero(1, 0, 0)).unwrap();
        let t = total_complex(&inst, 0, 4).unwrap();
        assert_eq!(t.n_min, 0);
        assert_eq!(t.dims[0], 1);
        assert!(t.dims[1..].iter().all(|&d| d == 0));
        let t = total_complex(&inst, 1, 4).unwrap();
        assert!(t.dims.iter().all(|&d| d == 0));
        let h = cohomology_of_total(&inst, 0, 4).unwrap();
        assert_eq!(h[0], (0, 1));
        assert!(h[1..].iter().all(|&(_, v)| v == 0));
    }

    #[test]
    fn negative_degrees_appear_for_higher_m() {
        // F = (Q^3 -> 0), m = 2, i = 0: the cell (0,3) sits at q = 1,
        // p = -2, total degree -1
        let f = TwoTermComplex::with_zero_map(3, 0);
        let inst = Instance::new(f, Form::zero(2, 0, 3)).unwrap();
        let t = total_complex(&inst, 0, 3).unwrap();
        assert_eq!(t.n_min, -1);
        assert_eq!(t.dim_at(-1), 1); // Lambda^3 of Q^3
        assert_eq!(t.dim_at(0), 1); // Lambda^0
    }

    #[test]
    fn squares_vanish_on_total_complexes() {
        let d = RMatrix::from_int_rows(&[&[1, 2, 0], &[0, 0, 0]]);
        let f = TwoTermComplex::new(3, 2, d).unwrap();
        let a = crate::witten::form::random_closed_form(&f, 2, 5);
        let inst = Instance::new(f, a).unwrap();
        for i in 0..=2 {
            let t = total_complex(&inst, i, 6).unwrap();
            for j in 0..t.maps.len().saturating_sub(1) {
                assert!(
                    t.maps[j + 1].mul(&t.maps[j]).is_zero(),
                    "D^2 != 0 at i={i}, slice {j}"
                );
            }
        }
    }
}
