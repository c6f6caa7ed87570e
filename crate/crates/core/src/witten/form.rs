//! Forms on a two-term complex and their validity checks.
//!
//! A form of degree `m >= 1` on `F = (F_1 -> F_0)` is an element of
//! `Sym^m F_0 (x) F_1`, stored as a coefficient table indexed by (degree-m
//! exponent vector over the `F_0` basis, `F_1` basis index). Closedness and
//! nondegeneracy are decided, never assumed.

use std::collections::BTreeMap;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::koszul::{contraction_matrix, TwoTermComplex};
use crate::linalg::{rat, RMatrix, Rational};
use crate::multilinear::{sym_basis, sym_index_map, sym_power_matrix};

/// Coefficient table of an element of `Sym^m F_0 (x) F_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    m: u32,
    rank0: usize,
    rank1: usize,
    coeffs: BTreeMap<(Vec<u32>, usize), Rational>,
}

impl Form {
    pub fn new<I>(m: u32, rank0: usize, rank1: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, usize, Rational)>,
    {
        if m == 0 {
            return Err(CoreError::Shape("form degree m must be >= 1".into()));
        }
        let mut coeffs = BTreeMap::new();
        for (exponents, t, coeff) in entries {
            if exponents.len() != rank0 {
                return Err(CoreError::Shape(format!(
                    "exponent vector {exponents:?} has length {}, expected {rank0}",
                    exponents.len()
                )));
            }
            let deg: u32 = exponents.iter().sum();
            if deg != m {
                return Err(CoreError::Shape(format!(
                    "exponent vector {exponents:?} has degree {deg}, expected {m}"
                )));
            }
            if t >= rank1 {
                return Err(CoreError::Shape(format!(
                    "F_1 index {t} out of range (rank {rank1})"
                )));
            }
            if coeffs.insert((exponents.clone(), t), coeff).is_some() {
                return Err(CoreError::Shape(format!(
                    "duplicate coefficient key ({exponents:?}, {t})"
                )));
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        Ok(Form {
            m,
            rank0,
            rank1,
            coeffs,
        })
    }

    pub fn zero(m: u32, rank0: usize, rank1: usize) -> Self {
        Form {
            m,
            rank0,
            rank1,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn rank0(&self) -> usize {
        self.rank0
    }

    pub fn rank1(&self) -> usize {
        self.rank1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<u32>, usize, &Rational)> {
        self.coeffs.iter().map(|((e, t), v)| (e, *t, v))
    }

    /// Coordinates in the canonical basis of `Sym^m F_0 (x) F_1`
    /// (symmetric factor major).
    pub fn to_coords(&self) -> Vec<Rational> {
        let basis = sym_basis(self.rank0, self.m);
        let map = sym_index_map(&basis);
        let mut v = vec![Rational::zero(); basis.len() * self.rank1];
        for ((e, t), c) in &self.coeffs {
            v[map[e] * self.rank1 + t] = c.clone();
        }
        v
    }

    pub fn from_coords(m: u32, rank0: usize, rank1: usize, coords: &[Rational]) -> Self {
        let basis = sym_basis(rank0, m);
        assert_eq!(coords.len(), basis.len() * rank1, "coordinate length");
        let mut coeffs = BTreeMap::new();
        for (si, b) in basis.iter().enumerate() {
            for t in 0..rank1 {
                let c = &coords[si * rank1 + t];
                if !c.is_zero() {
                    coeffs.insert((b.exponents.clone(), t), c.clone());
                }
            }
        }
        Form {
            m,
            rank0,
            rank1,
            coeffs,
        }
    }

    /// The form as the matrix `Sym^m F_0 <- F_1` of its contractions: rows
    /// indexed by degree-m monomials, columns by the `F_1` basis.
    pub fn coefficient_matrix(&self) -> RMatrix {
        let basis = sym_basis(self.rank0, self.m);
        let map = sym_index_map(&basis);
        RMatrix::from_triplets(
            basis.len(),
            self.rank1,
            self.coeffs
                .iter()
                .map(|((e, t), c)| (map[e], *t, c.clone())),
        )
    }

    pub fn sub(&self, other: &Form) -> Form {
        assert_eq!(
            (self.m, self.rank0, self.rank1),
            (other.m, other.rank0, other.rank1),
            "form shape mismatch"
        );
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            let e = coeffs.entry(k.clone()).or_insert_with(Rational::zero);
            *e -= v;
        }
        coeffs.retain(|_, v| !v.is_zero());
        Form {
            m: self.m,
            rank0: self.rank0,
            rank1: self.rank1,
            coeffs,
        }
    }
}

/// A two-term complex together with a form on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    complex: TwoTermComplex,
    form: Form,
}

impl Instance {
    pub fn new(complex: TwoTermComplex, form: Form) -> Result<Self> {
        if form.rank0() != complex.rank0() || form.rank1() != complex.rank1() {
            return Err(CoreError::Shape(format!(
                "form is over ranks ({}, {}), complex has ({}, {})",
                form.rank1(),
                form.rank0(),
                complex.rank1(),
                complex.rank0()
            )));
        }
        Ok(Instance { complex, form })
    }

    pub fn complex(&self) -> &TwoTermComplex {
        &self.complex
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn m(&self) -> u32 {
        self.form.degree()
    }

    /// Same complex, different form of the same degree.
    pub fn with_form(&self, form: Form) -> Result<Instance> {
        Instance::new(self.complex.clone(), form)
    }
}

/// Outcome of the closedness test.
#[derive(Clone, Debug)]
pub struct ClosednessCheck {
    pub closed: bool,
    /// Nonzero image of the form in `Sym^(m+1) F_0` when not closed.
    pub witness: Option<Vec<Rational>>,
}

/// A form is closed when the exterior-power differential kills it.
pub fn check_closed(inst: &Instance) -> ClosednessCheck {
    let d = contraction_matrix(inst.complex(), inst.m(), 1);
    let image = d.mul_vec(&inst.form().to_coords());
    if image.iter().all(|v| v.is_zero()) {
        ClosednessCheck {
            closed: true,
            witness: None,
        }
    } else {
        ClosednessCheck {
            closed: false,
            witness: Some(image),
        }
    }
}

/// Deterministically sample a closed form of degree `m` on `f` by drawing a
/// small integer combination of a kernel basis of the closedness map.
pub fn random_closed_form(f: &TwoTermComplex, m: u32, seed: u64) -> Form {
    let d = contraction_matrix(f, m, 1);
    let kernel = d.kernel_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = vec![Rational::zero(); d.ncols()];
    for basis_vec in &kernel {
        let c = rat(rng.gen_range(-3..=3));
        if c.is_zero() {
            continue;
        }
        for (i, v) in basis_vec.iter().enumerate() {
            if !v.is_zero() {
                coords[i] += v * &c;
            }
        }
    }
    Form::from_coords(m, f.rank0(), f.rank1(), &coords)
}

/// Chosen bases and projections identifying the cohomology of a two-term
/// complex: `H_1 = ker d` as a subspace of `F_1` and `H_0 = coker d` through
/// complement representatives in `F_0`.
#[derive(Clone, Debug)]
pub struct CohomologySplit {
    /// `f1 x h1`; columns are a kernel basis.
    pub h1_basis: RMatrix,
    /// `h1 x f1`; projection onto `H_1` along a standard-vector complement.
    pub pi1: RMatrix,
    /// `h0 x f0`; quotient coordinates modulo `im d`.
    pub pi0: RMatrix,
}

pub fn cohomology_split(f: &TwoTermComplex) -> CohomologySplit {
    let kernel = f.d().kernel_basis();
    let h1 = kernel.len();
    let h1_basis = columns_matrix(f.rank1(), &kernel);
    let pi1 = projection_onto_span(&h1_basis, f.rank1(), h1, true);

    let image = f.d().image_basis();
    let im_rank = image.len();
    let im_basis = columns_matrix(f.rank0(), &image);
    let pi0 = projection_onto_span(&im_basis, f.rank0(), im_rank, false);
    CohomologySplit {
        h1_basis,
        pi1,
        pi0,
    }
}

fn columns_matrix(dim: usize, cols: &[Vec<Rational>]) -> RMatrix {
    RMatrix::from_triplets(
        dim,
        cols.len(),
        cols.iter().enumerate().flat_map(|(j, col)| {
            col.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(i, v)| (i, j, v.clone()))
        }),
    )
}

/// Complete the independent columns of `span` (dim x r) to a basis of the
/// ambient space with standard vectors. With `keep_span` the result is the
/// projection onto the span coordinates (first r rows of the inverse);
/// otherwise it is the projection onto the complement coordinates (last
/// dim - r rows), i.e. the quotient map modulo the span.
fn projection_onto_span(span: &RMatrix, dim: usize, r: usize, keep_span: bool) -> RMatrix {
    let mut blocks: Vec<RMatrix> = vec![span.clone()];
    let mut current = span.clone();
    let mut rank = current.rank();
    debug_assert_eq!(rank, r);
    for i in 0..dim {
        if rank == dim {
            break;
        }
        let e = RMatrix::from_triplets(dim, 1, [(i, 0, rat(1))]);
        let trial = RMatrix::hstack(&[&current, &e]);
        if trial.rank() > rank {
            rank += 1;
            current = trial;
            blocks.push(e);
        }
    }
    let refs: Vec<&RMatrix> = blocks.iter().collect();
    let full = RMatrix::hstack(&refs);
    let inv = full.invert().expect("completed basis is invertible");
    let rows: Vec<usize> = if keep_span {
        (0..r).collect()
    } else {
        (r..dim).collect()
    };
    RMatrix::from_triplets(
        rows.len(),
        dim,
        rows.iter().enumerate().flat_map(|(out_i, &in_i)| {
            inv.row(in_i)
                .iter()
                .map(move |(j, v)| (out_i, *j, v.clone()))
                .collect::<Vec<_>>()
        }),
    )
}

/// The linear system `S: H_1^v -> Sym^m H_0` induced by a closed form:
/// the cohomology class of the form, written through the chosen splittings.
/// Rows are indexed by degree-m monomials over the `H_0` basis, columns by
/// the `H_1` basis.
pub fn induced_system(inst: &Instance) -> Result<RMatrix> {
    if !check_closed(inst).closed {
        return Err(CoreError::NotClosed);
    }
    let split = cohomology_split(inst.complex());
    let a = inst.form().coefficient_matrix();
    let sym_pi0 = sym_power_matrix(&split.pi0, inst.m());
    Ok(sym_pi0.mul(&a).mul(&split.pi1.transpose()))
}

/// Decide base-point-freeness of the induced linear system: the degree-m
/// forms in its image have no common projective zero. Decided by testing
/// surjectivity of multiplication into `Sym^D H_0` for D up to the Macaulay
/// bound `dim(H_0) * (m-1) + 1`; surjectivity at any tested degree certifies
/// base-point-freeness, failure at the bound certifies a common zero.
pub fn is_nondegenerate(inst: &Instance) -> Result<bool> {
    let s = induced_system(inst)?;
    let h0 = inst.complex().h0_dim();
    if h0 == 0 {
        return Ok(true);
    }
    let m = inst.m();
    let generators = s.image_basis();
    if generators.is_empty() {
        return Ok(false);
    }
    let macaulay = h0 as u32 * (m - 1) + 1;
    for degree in m..=macaulay.max(m) {
        if multiplication_surjective(h0, m, degree, &generators) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn multiplication_surjective(
    h0: usize,
    m: u32,
    degree: u32,
    generators: &[Vec<Rational>],
) -> bool {
    let lower = sym_basis(h0, degree - m);
    let target = sym_basis(h0, degree);
    let target_map = sym_index_map(&target);
    let gen_basis = sym_basis(h0, m);
    let mut triplets = Vec::new();
    for (mi, mu) in lower.iter().enumerate() {
        for (gi, g) in generators.iter().enumerate() {
            let col = mi * generators.len() + gi;
            for (ni, nu) in gen_basis.iter().enumerate() {
                if g[ni].is_zero() {
                    continue;
                }
                let sum: Vec<u32> = mu
                    .exponents
                    .iter()
                    .zip(&nu.exponents)
                    .map(|(x, y)| x + y)
                    .collect();
                triplets.push((target_map[&sum], col, g[ni].clone()));
            }
        }
    }
    let mult = RMatrix::from_triplets(target.len(), lower.len() * generators.len(), triplets);
    mult.rank() == target.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta_like(h: usize) -> Instance {
        // F_1 = F_0 = Q^h, d = 0, m = 1, a = sum_j e_j (x) f_j
        let f = TwoTermComplex::with_zero_map(h, h);
        let entries = (0..h).map(|j| {
            let mut e = vec![0u32; h];
            e[j] = 1;
            (e, j, rat(1))
        });
        Instance::new(f, Form::new(1, h, h, entries).unwrap()).unwrap()
    }

    #[test]
    fn every_form_is_closed_when_d_is_zero() {
        let f = TwoTermComplex::with_zero_map(2, 2);
        let a = Form::new(
            2,
            2,
            2,
            [(vec![2, 0], 0, rat(5)), (vec![1, 1], 1, rat(-3))],
        )
        .unwrap();
        let inst = Instance::new(f, a).unwrap();
        assert!(check_closed(&inst).closed);
    }

    #[test]
    fn theta_pairing_is_closed_and_nondegenerate() {
        let inst = theta_like(2);
        assert!(check_closed(&inst).closed);
        assert!(is_nondegenerate(&inst).unwrap());
        // S is the identity pairing in the chosen bases
        let s = induced_system(&inst).unwrap();
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn non_closed_form_has_witness() {
        // F_1 = F_0 = Q, d = 1, m = 1: a = x (x) e maps to x^2 != 0
        let f = TwoTermComplex::new(1, 1, RMatrix::from_int_rows(&[&[1]])).unwrap();
        let a = Form::new(1, 1, 1, [(vec![1], 0, rat(1))]).unwrap();
        let inst = Instance::new(f, a).unwrap();
        let check = check_closed(&inst);
        assert!(!check.closed);
        let witness = check.witness.unwrap();
        assert!(witness.iter().any(|v| !v.is_zero()));
    }

    #[test]
    fn zero_form_is_degenerate_when_h0_positive() {
        let f = TwoTermComplex::with_zero_map(1, 1);
        let inst = Instance::new(f, Form::zero(1, 1, 1)).unwrap();
        assert!(check_closed(&inst).closed);
        assert!(!is_nondegenerate(&inst).unwrap());
    }

    #[test]
    fn vacuous_nondegeneracy_when_h0_vanishes() {
        // F_0 = 0 forces H_0 = 0
        let f = TwoTermComplex::with_zero_map(2, 0);
        let inst = Instance::new(f, Form::zero(1, 0, 2)).unwrap();
        assert!(is_nondegenerate(&inst).unwrap());
        // an identity differential also kills H_0
        let f = TwoTermComplex::new(1, 1, RMatrix::from_int_rows(&[&[1]])).unwrap();
        let inst = Instance::new(f, Form::zero(1, 1, 1)).unwrap();
        assert!(is_nondegenerate(&inst).unwrap());
    }

    #[test]
    fn induced_system_shape_cases() {
        // a = 0 with h1 >= 1 gives the zero matrix
        let f = TwoTermComplex::with_zero_map(2, 1);
        let inst = Instance::new(f, Form::zero(1, 1, 2)).unwrap();
        let s = induced_system(&inst).unwrap();
        assert_eq!((s.nrows(), s.ncols()), (1, 2));
        assert!(s.is_zero());
        // H_0 = 0 gives a matrix with zero rows
        let f = TwoTermComplex::new(1, 1, RMatrix::from_int_rows(&[&[1]])).unwrap();
        let inst = Instance::new(f, Form::zero(1, 1, 1)).unwrap();
        let s = induced_system(&inst).unwrap();
        assert_eq!(s.nrows(), 0);
    }

    #[test]
    fn random_closed_form_validates_and_is_deterministic() {
        let d = RMatrix::from_int_rows(&[&[1, 0, 2], &[0, 0, 1]]);
        let f = TwoTermComplex::new(3, 2, d).unwrap();
        for m in 1..=3u32 {
            let a = random_closed_form(&f, m, 17);
            let b = random_closed_form(&f, m, 17);
            assert_eq!(a, b);
            let inst = Instance::new(f.clone(), a).unwrap();
            assert!(check_closed(&inst).closed);
        }
    }

    #[test]
    fn degree_two_nondegeneracy_goes_past_the_linear_test() {
        // one variable, m = 2: the single form x^2 is base point free on P^0
        let f = TwoTermComplex::with_zero_map(1, 1);
        let a = Form::new(2, 1, 1, [(vec![2], 0, rat(1))]).unwrap();
        let inst = Instance::new(f, a).unwrap();
        assert!(is_nondegenerate(&inst).unwrap());
        // two variables but only the single form x*y: zeroes at both points
        let f = TwoTermComplex::with_zero_map(1, 2);
        let a = Form::new(2, 2, 1, [(vec![1, 1], 0, rat(1))]).unwrap();
        let inst = Instance::new(f, a).unwrap();
        assert!(!is_nondegenerate(&inst).unwrap());
        // x^2 and y^2 together have no common zero
        let f = TwoTermComplex::with_zero_map(2, 2);
        let a = Form::new(
            2,
            2,
            2,
            [(vec![2, 0], 0, rat(1)), (vec![0, 2], 1, rat(1))],
        )
        .unwrap();
        let inst = Instance::new(f, a).unwrap();
        assert!(is_nondegenerate(&inst).unwrap());
    }

    #[test]
    fn duplicate_coefficients_rejected() {
        let r = Form::new(
            1,
            1,
            1,
            [(vec![1], 0, rat(1)), (vec![1], 0, rat(2))],
        );
        assert!(r.is_err());
    }
}
