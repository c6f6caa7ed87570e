//! Homotopy invariance of the Euler class.
//!
//! A homotopy between two forms is a table `h` in `Sym^(m-1) F_0 (x)
//! Lambda^2 F_1` with `a - a' = d(h)` (the exterior-power differential
//! applied to `h`). It induces `htilde` of bidegree `(-1, +1)` on the
//! `K_i^(p,q)` grading, hence a degree-preserving nilpotent endomorphism of
//! every total slice whose exponential conjugates `D = dtilde + atilde`
//! into `D' = dtilde + atilde'`.
//!
//! With the contraction signs fixed in [`crate::multilinear`], the
//! commutator identity reads `dtilde htilde - htilde dtilde =
//! atilde_(d(h))`, so conjugation by `e^(htilde)` *subtracts* `d(h)` from
//! the form: `e^(htilde) D_a = D_(a - d(h)) e^(htilde)` (and `e^(-htilde)`
//! adds it). Both exponentials are finite and mutually inverse.

use std::collections::BTreeMap;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::koszul::{contraction_matrix, TwoTermComplex};
use crate::linalg::{rat, ratio, RMatrix, Rational};
use crate::multilinear::{ext_basis, ext_index_map, shuffle_sign, sym_basis, sym_index_map};
use crate::witten::euler::{ke_class_force, n0_bound};
use crate::witten::form::{Form, Instance};
use crate::witten::total::{total_complex, Cell, TotalComplexSlice};

/// Coefficient table of an element of `Sym^(m-1) F_0 (x) Lambda^2 F_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyForm {
    m: u32,
    rank0: usize,
    rank1: usize,
    coeffs: BTreeMap<(Vec<u32>, (u32, u32)), Rational>,
}

impl HomotopyForm {
    /// Entries are (degree m-1 exponent vector, strictly increasing pair of
    /// `F_1` indices, coefficient).
    pub fn new<I>(m: u32, rank0: usize, rank1: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, (u32, u32), Rational)>,
    {
        if m == 0 {
            return Err(CoreError::Shape("homotopy degree m must be >= 1".into()));
        }
        let mut coeffs = BTreeMap::new();
        for (exponents, (t1, t2), coeff) in entries {
            if exponents.len() != rank0 || exponents.iter().sum::<u32>() != m - 1 {
                return Err(CoreError::Shape(format!(
                    "homotopy exponent vector {exponents:?} must have length {rank0} and degree {}",
                    m - 1
                )));
            }
            if t1 >= t2 || t2 as usize >= rank1 {
                return Err(CoreError::Shape(format!(
                    "wedge indices ({t1}, {t2}) must be strictly increasing and < {rank1}"
                )));
            }
            if coeffs.insert((exponents, (t1, t2)), coeff).is_some() {
                return Err(CoreError::Shape("duplicate homotopy key".into()));
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        Ok(HomotopyForm {
            m,
            rank0,
            rank1,
            coeffs,
        })
    }

    pub fn zero(m: u32, rank0: usize, rank1: usize) -> Self {
        HomotopyForm {
            m,
            rank0,
            rank1,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coordinates in `Sym^(m-1) F_0 (x) Lambda^2 F_1`.
    pub fn to_coords(&self) -> Vec<Rational> {
        let sym = sym_basis(self.rank0, self.m - 1);
        let sym_map = sym_index_map(&sym);
        let ext = ext_basis(self.rank1, 2);
        let ext_map = ext_index_map(&ext);
        let mut v = vec![Rational::zero(); sym.len() * ext.len()];
        for ((e, (t1, t2)), c) in &self.coeffs {
            v[sym_map[e] * ext.len() + ext_map[&vec![*t1, *t2]]] = c.clone();
        }
        v
    }
}

/// Small random homotopy table, deterministic in the seed.
pub fn random_homotopy_form(f: &TwoTermComplex, m: u32, seed: u64) -> HomotopyForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sym = sym_basis(f.rank0(), m - 1);
    let ext = ext_basis(f.rank1(), 2);
    let mut entries = Vec::new();
    for s in &sym {
        for e in &ext {
            let c = rng.gen_range(-2..=2i64);
            if c != 0 {
                entries.push((s.exponents.clone(), (e.indices[0], e.indices[1]), rat(c)));
            }
        }
    }
    HomotopyForm::new(m, f.rank0(), f.rank1(), entries).expect("generated entries are valid")
}

/// `d(h)` as a form of degree `m`: the exterior-power differential out of
/// the `Sym^(m-1) (x) Lambda^2` cell applied to the homotopy table.
pub fn d_compose_h(f: &TwoTermComplex, h: &HomotopyForm) -> Form {
    let d = contraction_matrix(f, h.m - 1, 2);
    let coords = d.mul_vec(&h.to_coords());
    Form::from_coords(h.m, f.rank0(), f.rank1(), &coords)
}

/// `htilde: L^(h,k) -> L^(h+m-1, k+2)`: multiply by each symmetric
/// coefficient and wedge the index pair on the left.
pub fn htilde_matrix(f: &TwoTermComplex, hf: &HomotopyForm, h: u32, k: u32) -> RMatrix {
    let sym_src = sym_basis(f.rank0(), h);
    let ext_src = ext_basis(f.rank1(), k);
    let sym_tgt = sym_basis(f.rank0(), h + hf.m - 1);
    let ext_tgt = ext_basis(f.rank1(), k + 2);
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
            for ((nu, (t1, t2)), c) in &hf.coeffs {
                let Some((sign, merged)) = shuffle_sign(&[*t1, *t2], &kk.indices) else {
                    continue;
                };
                let bumped: Vec<u32> =
                    mu.exponents.iter().zip(nu).map(|(x, y)| x + y).collect();
                let row = sym_tgt_map[&bumped] * ext_tgt.len() + ext_tgt_map[&merged];
                triplets.push((row, col, c * &rat(sign as i64)));
            }
        }
    }
    RMatrix::from_triplets(nrows, ncols, triplets)
}

fn htilde_on_slice(f: &TwoTermComplex, hf: &HomotopyForm, cells: &[Cell]) -> RMatrix {
    let dim: usize = cells.iter().map(|c| c.dim).sum();
    let mut offsets = std::collections::HashMap::new();
    let mut acc = 0;
    for c in cells {
        offsets.insert((c.sym_deg, c.ext_deg), acc);
        acc += c.dim;
    }
    let mut triplets = Vec::new();
    for cell in cells {
        let col0 = offsets[&(cell.sym_deg, cell.ext_deg)];
        if let Some(&row0) = offsets.get(&(cell.sym_deg + hf.m - 1, cell.ext_deg + 2)) {
            let block = htilde_matrix(f, hf, cell.sym_deg, cell.ext_deg);
            crate::witten::total::push_block(&mut triplets, &block, row0, col0);
        }
    }
    RMatrix::from_triplets(dim, dim, triplets)
}

/// `e^(sign * htilde)` on one total slice; the series terminates because
/// `htilde` raises the exterior degree by two each time.
pub fn exp_htilde_on_slice(
    f: &TwoTermComplex,
    hf: &HomotopyForm,
    cells: &[Cell],
    sign: i64,
) -> RMatrix {
    let h = htilde_on_slice(f, hf, cells);
    let dim = h.nrows();
    let s: i64 = if sign < 0 { -1 } else { 1 };
    let mut acc = RMatrix::identity(dim);
    let mut power = RMatrix::identity(dim);
    let mut factorial: i64 = 1;
    let mut sign_j: i64 = 1;
    let mut j: i64 = 0;
    loop {
        power = h.mul(&power);
        if power.is_zero() {
            break;
        }
        j += 1;
        factorial *= j;
        sign_j *= s;
        acc = acc.add(&power.scale(&ratio(sign_j, factorial)));
    }
    acc
}

/// Conjugation and Euler-class agreement report for a homotopy pair.
#[derive(Clone, Debug)]
pub struct HomotopyReport {
    /// The exponential of `htilde` intertwines `D` and `D'` on every
    /// materialized slice.
    pub conjugation_ok: bool,
    /// First `(i, n)` where conjugation failed.
    pub first_failure: Option<(u32, i64)>,
    /// The two Euler classes agree in every per-i record.
    pub ke_equal: bool,
    pub virtual_rank: i64,
}

/// Verify, slice by slice up to `n_max`, that the exponential of `htilde`
/// intertwines the total differentials of `a` and `a' = a - d(h)`, and that
/// both instances have identical Euler classes.
pub fn verify_homotopy_invariance(
    inst: &Instance,
    hf: &HomotopyForm,
    n_max: i64,
) -> Result<HomotopyReport> {
    let f = inst.complex();
    let m = inst.m();
    let a_prime = inst.form().sub(&d_compose_h(f, hf));
    let inst_prime = inst.with_form(a_prime)?;

    let mut conjugation_ok = true;
    let mut first_failure = None;
    'outer: for i in 0..=m {
        let t: TotalComplexSlice = total_complex(inst, i, n_max)?;
        let t_prime = total_complex(&inst_prime, i, n_max)?;
        debug_assert_eq!(t.dims, t_prime.dims);
        for n in t.n_min..t.n_max {
            let j = (n - t.n_min) as usize;
            let e_src = exp_htilde_on_slice(f, hf, &t.cells[j], 1);
            let e_tgt = exp_htilde_on_slice(f, hf, &t.cells[j + 1], 1);
            if e_tgt.mul(&t.maps[j]) != t_prime.maps[j].mul(&e_src) {
                conjugation_ok = false;
                first_failure = Some((i, n));
                break 'outer;
            }
        }
    }

    let ke = ke_class_force(inst)?;
    let ke_prime = ke_class_force(&inst_prime)?;
    let ke_equal = ke.virtual_rank == ke_prime.virtual_rank && ke.per_i == ke_prime.per_i;
    Ok(HomotopyReport {
        conjugation_ok,
        first_failure,
        ke_equal,
        virtual_rank: ke.virtual_rank,
    })
}

/// Window large enough to exercise every degree that enters the class.
pub fn default_homotopy_window(inst: &Instance) -> i64 {
    n0_bound(inst.complex(), inst.m()) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witten::form::random_closed_form;

    fn sample_instance() -> (Instance, HomotopyForm) {
        let d = RMatrix::from_int_rows(&[&[1, 0, 1], &[0, 2, 0]]);
        let f = TwoTermComplex::new(3, 2, d).unwrap();
        let a = random_closed_form(&f, 2, 11);
        let inst = Instance::new(f.clone(), a).unwrap();
        let hf = random_homotopy_form(&f, 2, 7);
        (inst, hf)
    }

    #[test]
    fn rank1_below_two_forces_trivial_homotopy() {
        let f = TwoTermComplex::with_zero_map(1, 1);
        let hf = random_homotopy_form(&f, 2, 3);
        assert!(hf.is_zero());
        let a = Form::new(2, 1, 1, [(vec![2], 0, rat(1))]).unwrap();
        let inst = Instance::new(f, a).unwrap();
        let report = verify_homotopy_invariance(&inst, &hf, 6).unwrap();
        assert!(report.conjugation_ok && report.ke_equal);
    }

    #[test]
    fn exponential_inverts() {
        let (inst, hf) = sample_instance();
        let t = total_complex(&inst, 0, 5).unwrap();
        for cells in &t.cells {
            let dim: usize = cells.iter().map(|c| c.dim).sum();
            let e_minus = exp_htilde_on_slice(inst.complex(), &hf, cells, -1);
            let e_plus = exp_htilde_on_slice(inst.complex(), &hf, cells, 1);
            assert_eq!(e_minus.mul(&e_plus), RMatrix::identity(dim));
        }
    }

    #[test]
    fn conjugation_and_class_agree_on_sample() {
        let (inst, hf) = sample_instance();
        let window = default_homotopy_window(&inst);
        let report = verify_homotopy_invariance(&inst, &hf, window).unwrap();
        assert!(report.conjugation_ok, "failed at {:?}", report.first_failure);
        assert!(report.ke_equal);
    }

    #[test]
    fn zero_homotopy_is_trivial() {
        let (inst, _) = sample_instance();
        let hf = HomotopyForm::zero(2, 2, 3);
        let report = verify_homotopy_invariance(&inst, &hf, 6).unwrap();
        assert!(report.conjugation_ok && report.ke_equal);
    }
}
