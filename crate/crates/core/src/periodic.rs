//! The 2-periodic reorganization of the double complex.
//!
//! Splitting every cell by the parity of its exterior degree (equivalently
//! of its total degree) yields `W = W^+ (+) W^-` with differentials `d^+`
//! and `d^-` assembled from `dtilde + atilde`; this is the base-level
//! pushforward of the spinor complex, and its even-minus-odd cohomology
//! count must reproduce the Euler class.

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::linalg::RMatrix;
use crate::witten::{
    is_nondegenerate, n0_bound, total_complex, Instance,
};

/// A cell of the parity decomposition, tagged by its origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParityCell {
    pub i: u32,
    pub n: i64,
    pub sym_deg: u32,
    pub ext_deg: u32,
    pub dim: usize,
}

/// The materialized window of the 2-periodic complex.
#[derive(Clone, Debug)]
pub struct TwoPeriodicSlice {
    pub plus_cells: Vec<ParityCell>,
    pub minus_cells: Vec<ParityCell>,
    /// `W^+ -> W^-` on the window.
    pub d_plus: RMatrix,
    /// `W^- -> W^+` on the window.
    pub d_minus: RMatrix,
}

impl TwoPeriodicSlice {
    pub fn plus_dim(&self) -> usize {
        self.plus_cells.iter().map(|c| c.dim).sum()
    }

    pub fn minus_dim(&self) -> usize {
        self.minus_cells.iter().map(|c| c.dim).sum()
    }

    /// Both composites vanish on the window.
    pub fn check_periodicity(&self) -> Result<()> {
        if !self.d_minus.mul(&self.d_plus).is_zero() {
            return Err(CoreError::CompositionNotZero { position: 0 });
        }
        if !self.d_plus.mul(&self.d_minus).is_zero() {
            return Err(CoreError::CompositionNotZero { position: 1 });
        }
        Ok(())
    }
}

/// Reorganize all cells of total degree `<= n_max` by parity of the exterior
/// degree. The differentials preserve the `i`-grading and shift the total
/// degree by one, so they assemble block-diagonally over `i`.
pub fn periodic_from_instance(inst: &Instance, n_max: i64) -> Result<TwoPeriodicSlice> {
    let m = inst.m();
    let totals: Vec<_> = (0..=m)
        .map(|i| total_complex(inst, i, n_max))
        .collect::<Result<Vec<_>>>()?;

    let mut plus_cells = Vec::new();
    let mut minus_cells = Vec::new();
    // offsets of (i, n) slices inside W^+ / W^-
    let mut plus_offsets = std::collections::HashMap::new();
    let mut minus_offsets = std::collections::HashMap::new();
    let (mut plus_acc, mut minus_acc) = (0usize, 0usize);
    for t in &totals {
        for n in t.degrees() {
            let cells = &t.cells[(n - t.n_min) as usize];
            if cells.is_empty() {
                continue;
            }
            let even = n.rem_euclid(2) == 0;
            let (list, offsets, acc) = if even {
                (&mut plus_cells, &mut plus_offsets, &mut plus_acc)
            } else {
                (&mut minus_cells, &mut minus_offsets, &mut minus_acc)
            };
            offsets.insert((t.i, n), *acc);
            for c in cells {
                list.push(ParityCell {
                    i: t.i,
                    n,
                    sym_deg: c.sym_deg,
                    ext_deg: c.ext_deg,
                    dim: c.dim,
                });
                *acc += c.dim;
            }
        }
    }

    let mut plus_triplets = Vec::new();
    let mut minus_triplets = Vec::new();
    for t in &totals {
        for n in t.n_min..t.n_max {
            let j = (n - t.n_min) as usize;
            let block = &t.maps[j];
            if block.is_zero() && (block.nrows() == 0 || block.ncols() == 0) {
                continue;
            }
            let even = n.rem_euclid(2) == 0;
            let (src_off, tgt_off, triplets) = if even {
                (
                    plus_offsets.get(&(t.i, n)),
                    minus_offsets.get(&(t.i, n + 1)),
                    &mut plus_triplets,
                )
            } else {
                (
                    minus_offsets.get(&(t.i, n)),
                    plus_offsets.get(&(t.i, n + 1)),
                    &mut minus_triplets,
                )
            };
            let (Some(&col0), Some(&row0)) = (src_off, tgt_off) else {
                continue;
            };
            for r in 0..block.nrows() {
                for (c, v) in block.row(r) {
                    triplets.push((row0 + r, col0 + c, v.clone()));
                }
            }
        }
    }
    let d_plus = RMatrix::from_triplets(minus_acc, plus_acc, plus_triplets);
    let d_minus = RMatrix::from_triplets(plus_acc, minus_acc, minus_triplets);
    Ok(TwoPeriodicSlice {
        plus_cells,
        minus_cells,
        d_plus,
        d_minus,
    })
}

/// Even-minus-odd total of the bounded cohomology: the image of the class of
/// the periodic complex under `[W] -> [H^+(W)] - [H^-(W)]`, computed from
/// the `K_i` cohomology below the vanishing bound. Must equal the Euler
/// class virtual rank.
pub fn periodic_virtual_rank(inst: &Instance) -> Result<i64> {
    if !is_nondegenerate(inst)? {
        return Err(CoreError::Degenerate);
    }
    let m = inst.m();
    let n0 = n0_bound(inst.complex(), m);
    let sums: Vec<Result<i64>> = crate::exec::map_vec((0..=m).collect(), |i| {
        let total = total_complex(inst, i, n0)?;
        let ranks: Vec<usize> =
            crate::exec::map_vec((0..total.maps.len()).collect(), |j| total.maps[j].rank());
        let rank_at = |n: i64| -> usize {
            if n < total.n_min || n >= total.n_max {
                0
            } else {
                ranks[(n - total.n_min) as usize]
            }
        };
        let mut acc = 0i64;
        for n in total.n_min..n0 {
            let h = total.dim_at(n) - rank_at(n) - rank_at(n - 1);
            acc += if n.rem_euclid(2) == 0 {
                h as i64
            } else {
                -(h as i64)
            };
        }
        Ok(acc)
    });
    let mut total = 0i64;
    for s in sums {
        total += s?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::TwoTermComplex;
    use crate::linalg::rat;
    use crate::witten::{ke_class, Form};

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
    fn empty_complex_parity() {
        let f = TwoTermComplex::with_zero_map(0, 0);
        let inst = Instance::new(f, Form::zero(1, 0, 0)).unwrap();
        let w = periodic_from_instance(&inst, 4).unwrap();
        assert_eq!(w.plus_dim(), 1);
        assert_eq!(w.minus_dim(), 0);
        assert_eq!(periodic_virtual_rank(&inst).unwrap(), 1);
    }

    #[test]
    fn parity_dims_match_slice_sums() {
        let inst = theta(2);
        let w = periodic_from_instance(&inst, 5).unwrap();
        w.check_periodicity().unwrap();
        let mut even = 0usize;
        let mut odd = 0usize;
        for i in 0..=1u32 {
            let t = total_complex(&inst, i, 5).unwrap();
            for n in t.degrees() {
                if n.rem_euclid(2) == 0 {
                    even += t.dim_at(n);
                } else {
                    odd += t.dim_at(n);
                }
            }
        }
        assert_eq!(w.plus_dim(), even);
        assert_eq!(w.minus_dim(), odd);
    }

    #[test]
    fn cell_multiset_matches_direct_l_enumeration() {
        // cells of L^(h,k) windowed by total degree, enumerated directly
        let inst = theta(2);
        let n_max = 4;
        let w = periodic_from_instance(&inst, n_max).unwrap();
        let m = inst.m() as i64;
        let mut expected = Vec::new();
        for k in 0..=inst.complex().rank1() as i64 {
            for h in 0..=((m + 1) * (n_max + k) / 2) {
                let i = (-(h + k)).rem_euclid(m + 1);
                let q2 = h + k + i;
                debug_assert_eq!(q2 % (m + 1), 0);
                let q = q2 / (m + 1);
                let n = 2 * q - k;
                if n > n_max {
                    continue;
                }
                let dim = crate::multilinear::sym_dim(inst.complex().rank0(), h as u32)
                    * crate::multilinear::ext_dim(inst.complex().rank1(), k as u32);
                if dim > 0 {
                    expected.push((i as u32, n, h as u32, k as u32, dim));
                }
            }
        }
        let mut got: Vec<_> = w
            .plus_cells
            .iter()
            .chain(&w.minus_cells)
            .map(|c| (c.i, c.n, c.sym_deg, c.ext_deg, c.dim))
            .collect();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn periodic_rank_agrees_with_euler_class() {
        for h in 0..=2usize {
            let inst = theta(h);
            assert_eq!(
                periodic_virtual_rank(&inst).unwrap(),
                ke_class(&inst).unwrap().virtual_rank
            );
        }
    }
}
