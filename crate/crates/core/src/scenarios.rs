//! Ready-made spin-curve instances: the point-level data of theta
//! characteristics, elliptic spin structures, the vanishing-H^0 case, and
//! the vector-bundle closed form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::koszul::TwoTermComplex;
use crate::linalg::{rat, RMatrix};
use crate::multilinear::{binomial, sym_basis};
use crate::witten::{is_nondegenerate, Form, Instance};

/// Parameters of a point-level spin scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinScenario {
    /// `r = 2`, perfect pairing on `h = h^0 = h^1` dimensions.
    Theta { h: usize },
    /// Elliptic curve with trivial `L`: `h^0 = h^1 = 1`, degree `r - 1` form.
    GenusOne { r: u32 },
    /// `h^0 = 0`: zero form on `(Q^(h1) -> 0)`.
    Witten { h1: usize },
    /// Both pushforwards are bundles; sampled pairing of degree `r - 1`.
    BundleCase { h0: usize, h1: usize, r: u32 },
}

impl SpinScenario {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SpinScenario::Theta { .. } | SpinScenario::Witten { .. } => Ok(()),
            SpinScenario::GenusOne { r } | SpinScenario::BundleCase { r, .. } if r < 2 => Err(
                CoreError::Shape(format!("spin index r = {r} must be at least 2")),
            ),
            _ => Ok(()),
        }
    }
}

/// The theta-characteristic instance: `F_1 = F_0 = Q^h`, zero differential,
/// `m = 1`, identity pairing.
pub fn theta_instance(h: usize) -> Instance {
    pairing_instance(h, &RMatrix::identity(h))
}

/// Theta-type instance with an arbitrary pairing matrix (`h x h`); it is
/// nondegenerate exactly when the matrix is invertible.
pub fn pairing_instance(h: usize, pairing: &RMatrix) -> Instance {
    let f = TwoTermComplex::with_zero_map(h, h);
    let mut entries = Vec::new();
    for i in 0..h {
        for j in 0..h {
            let c = pairing.entry(i, j);
            if !num::Zero::is_zero(&c) {
                let mut e = vec![0u32; h];
                e[i] = 1;
                entries.push((e, j, c));
            }
        }
    }
    Instance::new(f, Form::new(1, h, h, entries).expect("valid pairing table"))
        .expect("matching ranks")
}

/// The elliptic instance with trivial `L`: one-dimensional `F_1 = F_0`,
/// zero differential, the degree `r - 1` coefficient 1.
pub fn genus_one_instance(r: u32) -> Instance {
    assert!(r >= 2, "r >= 2");
    let m = r - 1;
    let f = TwoTermComplex::with_zero_map(1, 1);
    let a = Form::new(m, 1, 1, [(vec![m], 0, rat(1))]).expect("valid coefficient");
    Instance::new(f, a).expect("matching ranks")
}

/// The vanishing-`H^0` instance: `F_0 = 0`, `F_1 = Q^(h1)`, zero form
/// (vacuously nondegenerate).
pub fn witten_instance(h1: usize) -> Instance {
    let f = TwoTermComplex::with_zero_map(h1, 0);
    Instance::new(f, Form::zero(1, 0, h1)).expect("matching ranks")
}

/// The closed-form alternating total for the bundle case:
/// with `t0 = r - 1 + C(h1 - 1 + r - 1, r - 1)`, the integer
/// `sum_k (-1)^k C(h1, k) sum_(h <= (r-1)k + t0) C(h0 + h - 1, h)`.
pub fn bundle_case_closed_form(h0: usize, h1: usize, r: u32) -> i64 {
    assert!(r >= 2, "r >= 2");
    let m = (r - 1) as usize;
    let t0 = m as i64 + binomial(h1 + m - 1, m) as i64;
    let mut total = 0i64;
    for k in 0..=h1 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let h_cap = m as i64 * k as i64 + t0;
        let mut inner = 0i64;
        for h in 0..=h_cap {
            inner += sym_dim_i64(h0, h);
        }
        total += sign * binomial(h1, k) as i64 * inner;
    }
    total
}

fn sym_dim_i64(n: usize, h: i64) -> i64 {
    if h < 0 {
        return 0;
    }
    crate::multilinear::sym_dim(n, h as u32) as i64
}

/// Sample a nondegenerate form of degree `r - 1` on `F_1 = Q^(h1)`,
/// `F_0 = Q^(h0)` with zero differential; retries draws until the
/// base-point-free test passes. Returns `None` when no nondegenerate form
/// exists or sampling keeps failing (e.g. `h0 > h1`).
pub fn bundle_case_instance(h0: usize, h1: usize, r: u32, seed: u64) -> Option<Instance> {
    assert!(r >= 2, "r >= 2");
    let m = r - 1;
    let f = TwoTermComplex::with_zero_map(h1, h0);
    let sym = sym_basis(h0, m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let mut entries = Vec::new();
        for s in &sym {
            for t in 0..h1 {
                let c = rng.gen_range(-3..=3i64);
                if c != 0 {
                    entries.push((s.exponents.clone(), t, rat(c)));
                }
            }
        }
        let form = Form::new(m, h0, h1, entries).expect("valid sampled table");
        let inst = Instance::new(f.clone(), form).expect("matching ranks");
        if is_nondegenerate(&inst).expect("zero differential forms are closed") {
            return Some(inst);
        }
    }
    None
}
