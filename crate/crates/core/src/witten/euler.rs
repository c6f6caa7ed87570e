//! The K-theory Euler class of a validated instance.
//!
//! For each `i` the class of the total complex is the truncated alternating
//! sum `sum_(n < n0) (-1)^n [K_i^n] + (-1)^(n0) [im D_(n0-1)]`, where `n0` is
//! the effective vanishing bound `ceil((4m + 2 rk Sym^m F_0) / (m+1))`. Over
//! a point this is an integer plus a formal ledger of `(h, k)` cell symbols;
//! the Euler class is the sum over `i = 0..=m`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::koszul::TwoTermComplex;
use crate::multilinear::sym_dim;
use crate::witten::form::{check_closed, is_nondegenerate, Instance};
use crate::witten::total::total_complex;

/// Effective degree from which total-complex cohomology vanishes: the
/// ceiling of `(4m + 2 rk Sym^m F_0) / (m + 1)`.
pub fn n0_bound(f: &TwoTermComplex, m: u32) -> i64 {
    assert!(m >= 1);
    let numer = 4 * m as i64 + 2 * sym_dim(f.rank0(), m) as i64;
    let denom = m as i64 + 1;
    (numer + denom - 1) / denom
}

/// Truncated alternating-sum record of one `K_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerIClass {
    pub i: u32,
    /// Dimensions of the slices below the truncation degree.
    pub dims: Vec<(i64, usize)>,
    /// Rank of `im(K_i^(n0-1) -> K_i^(n0))`.
    pub residue_rank: usize,
    /// `sum_(n<n0) (-1)^n dim K_i^n + (-1)^(n0) residue_rank`.
    pub signed_total: i64,
    /// Exact cohomology dimensions on the materialized window
    /// (up to `n0 + 2`; zero from `n0` on by the vanishing theorem).
    pub cohomology: Vec<(i64, usize)>,
}

/// An integer-weighted `[Sym^h F_0 (x) Lambda^k F_1]` symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormalTerm {
    pub sym_deg: u32,
    pub ext_deg: u32,
    pub weight: i64,
}

/// The K-theory Euler class of an instance, realized over a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerClass {
    pub m: u32,
    pub n0: i64,
    pub per_i: Vec<PerIClass>,
    /// Aggregated cell symbols below the truncation degree (zero weights
    /// dropped), plus one residue image of recorded rank per `i` carrying
    /// the sign `(-1)^(n0)`.
    pub formal_terms: Vec<FormalTerm>,
    pub residue_sign: i64,
    pub virtual_rank: i64,
    /// True when nondegeneracy was verified; forced computations on
    /// degenerate forms are labeled non-canonical.
    pub canonical: bool,
}

fn parity_sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Compute the Euler class, validating closedness and nondegeneracy first.
pub fn ke_class(inst: &Instance) -> Result<EulerClass> {
    if !check_closed(inst).closed {
        return Err(CoreError::NotClosed);
    }
    if !is_nondegenerate(inst)? {
        return Err(CoreError::Degenerate);
    }
    compute(inst, true)
}

/// Compute the truncated data even for a degenerate form; the result is
/// labeled non-canonical in that case, and the vanishing theorem (which
/// needs nondegeneracy) is not enforced. Closedness is still required.
pub fn ke_class_force(inst: &Instance) -> Result<EulerClass> {
    if !check_closed(inst).closed {
        return Err(CoreError::NotClosed);
    }
    let canonical = is_nondegenerate(inst)?;
    compute(inst, canonical)
}

fn compute(inst: &Instance, canonical: bool) -> Result<EulerClass> {
    let m = inst.m();
    let f = inst.complex();
    let n0 = n0_bound(f, m);
    let enforce_vanishing = canonical;
    let per_i: Vec<Result<(PerIClass, Vec<((u32, u32), i64)>)>> =
        crate::exec::map_vec((0..=m).collect(), |i| {
            per_i_class(inst, i, n0, enforce_vanishing)
        });
    let per_i = per_i.into_iter().collect::<Result<Vec<_>>>()?;

    let mut terms: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    for (_, cell_weights) in &per_i {
        for &(cell, w) in cell_weights {
            *terms.entry(cell).or_insert(0) += w;
        }
    }
    let per_i: Vec<PerIClass> = per_i.into_iter().map(|(rec, _)| rec).collect();
    let formal_terms: Vec<FormalTerm> = terms
        .into_iter()
        .filter(|&(_, w)| w != 0)
        .map(|((h, k), weight)| FormalTerm {
            sym_deg: h,
            ext_deg: k,
            weight,
        })
        .collect();
    let virtual_rank = per_i.iter().map(|r| r.signed_total).sum();
    Ok(EulerClass {
        m,
        n0,
        per_i,
        formal_terms,
        residue_sign: parity_sign(n0),
        virtual_rank,
        canonical,
    })
}

fn per_i_class(
    inst: &Instance,
    i: u32,
    n0: i64,
    enforce_vanishing: bool,
) -> Result<(PerIClass, Vec<((u32, u32), i64)>)> {
    // slices to n0 + 3 so cohomology is exact through n0 + 2
    let total = total_complex(inst, i, n0 + 3)?;
    let ranks: Vec<usize> =
        crate::exec::map_vec((0..total.maps.len()).collect(), |j| total.maps[j].rank());
    let rank_at = |n: i64| -> usize {
        if n < total.n_min || n >= total.n_max {
            0
        } else {
            ranks[(n - total.n_min) as usize]
        }
    };

    let mut dims = Vec::new();
    let mut cell_weights = Vec::new();
    let mut truncated: i64 = 0;
    for n in total.n_min..n0 {
        let d = total.dim_at(n);
        dims.push((n, d));
        truncated += parity_sign(n) * d as i64;
        if n <= total.n_max {
            for cell in &total.cells[(n - total.n_min) as usize] {
                cell_weights.push(((cell.sym_deg, cell.ext_deg), parity_sign(n)));
            }
        }
    }
    let residue_rank = rank_at(n0 - 1);
    let signed_total = truncated + parity_sign(n0) * residue_rank as i64;

    let mut cohomology = Vec::new();
    let mut cohomology_sum: i64 = 0;
    for n in total.n_min..=(n0 + 2).min(total.n_max - 1) {
        let h = total.dim_at(n) - rank_at(n) - rank_at(n - 1);
        if h != 0 && n >= n0 && enforce_vanishing {
            return Err(CoreError::VanishingViolation { i, n, n0 });
        }
        cohomology.push((n, h));
        if n < n0 {
            cohomology_sum += parity_sign(n) * h as i64;
        }
    }
    // the truncated sum plus residue lifts the alternating cohomology sum
    assert_eq!(
        cohomology_sum, signed_total,
        "Euler characteristic consistency failed at i = {i}"
    );
    Ok((
        PerIClass {
            i,
            dims,
            residue_rank,
            signed_total,
            cohomology,
        },
        cell_weights,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, RMatrix};
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
    fn n0_values() {
        assert_eq!(n0_bound(&TwoTermComplex::with_zero_map(1, 1), 1), 3);
        assert_eq!(n0_bound(&TwoTermComplex::with_zero_map(2, 2), 1), 4);
        assert_eq!(n0_bound(&TwoTermComplex::with_zero_map(1, 1), 2), 4);
    }

    #[test]
    fn theta_h1_has_virtual_rank_minus_one() {
        let ke = ke_class(&theta(1)).unwrap();
        assert_eq!(ke.n0, 3);
        assert_eq!(ke.virtual_rank, -1);
        assert_eq!(ke.per_i[0].signed_total, 0);
        assert_eq!(ke.per_i[1].signed_total, -1);
        assert!(ke.canonical);
    }

    #[test]
    fn theta_parity() {
        assert_eq!(ke_class(&theta(0)).unwrap().virtual_rank, 1);
        assert_eq!(ke_class(&theta(2)).unwrap().virtual_rank, 1);
    }

    #[test]
    fn genus_one_values() {
        for r in 2..=4u32 {
            let m = r - 1;
            let f = TwoTermComplex::with_zero_map(1, 1);
            let a = Form::new(m, 1, 1, [(vec![m], 0, rat(1))]).unwrap();
            let inst = Instance::new(f, a).unwrap();
            let ke = ke_class(&inst).unwrap();
            assert_eq!(ke.virtual_rank, -((r as i64) - 1), "r = {r}");
        }
    }

    #[test]
    fn lambda_reduction_for_half_zero_complex() {
        // F = (V -> 0), a = 0: formal terms are exactly sum_q (-1)^q [Lambda^q V]
        for (h1, m) in [(0usize, 1u32), (1, 1), (2, 1), (3, 1), (3, 2), (2, 3)] {
            let f = TwoTermComplex::with_zero_map(h1, 0);
            let inst = Instance::new(f, Form::zero(m, 0, h1)).unwrap();
            let ke = ke_class(&inst).unwrap();
            let expected: Vec<FormalTerm> = (0..=h1 as u32)
                .map(|q| FormalTerm {
                    sym_deg: 0,
                    ext_deg: q,
                    weight: if q % 2 == 0 { 1 } else { -1 },
                })
                .collect();
            assert_eq!(ke.formal_terms, expected, "h1 = {h1}, m = {m}");
            assert_eq!(ke.virtual_rank, if h1 == 0 { 1 } else { 0 });
            assert!(ke.per_i.iter().all(|r| r.residue_rank == 0));
        }
    }

    #[test]
    fn degenerate_form_is_refused_but_force_computes() {
        let f = TwoTermComplex::with_zero_map(1, 1);
        let inst = Instance::new(f, Form::zero(1, 1, 1)).unwrap();
        assert!(matches!(ke_class(&inst), Err(CoreError::Degenerate)));
        let forced = ke_class_force(&inst).unwrap();
        assert!(!forced.canonical);
    }

    #[test]
    fn non_closed_form_is_refused() {
        let f = TwoTermComplex::new(1, 1, RMatrix::from_int_rows(&[&[1]])).unwrap();
        let a = Form::new(1, 1, 1, [(vec![1], 0, rat(1))]).unwrap();
        let inst = Instance::new(f, a).unwrap();
        assert!(matches!(ke_class(&inst), Err(CoreError::NotClosed)));
    }
}
