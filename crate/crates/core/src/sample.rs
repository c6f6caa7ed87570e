//! Seeded random generators for the property suites.
//!
//! Everything is deterministic in the seed (ChaCha8), so suite reports are
//! reproducible and counterexamples replayable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::koszul::TwoTermComplex;
use crate::linalg::{rat, RMatrix};
use crate::witten::{is_nondegenerate, random_closed_form, Form, Instance};

/// Bounds for random instances.
#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    pub max_rank: usize,
    pub max_m: u32,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            max_rank: 3,
            max_m: 3,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random matrix with entries in `-bound..=bound`.
pub fn random_matrix(rng: &mut ChaCha8Rng, nrows: usize, ncols: usize, bound: i64) -> RMatrix {
    let mut triplets = Vec::new();
    for i in 0..nrows {
        for j in 0..ncols {
            let v = rng.gen_range(-bound..=bound);
            if v != 0 {
                triplets.push((i, j, rat(v)));
            }
        }
    }
    RMatrix::from_triplets(nrows, ncols, triplets)
}

/// Random two-term complex with ranks up to `max_rank`; the differential is
/// a product of two thin factors so its rank (hence the homology) varies.
pub fn random_two_term(rng: &mut ChaCha8Rng, max_rank: usize) -> TwoTermComplex {
    let rank1 = rng.gen_range(0..=max_rank);
    let rank0 = rng.gen_range(0..=max_rank);
    let rho = rng.gen_range(0..=rank1.min(rank0));
    let d = if rho == 0 {
        RMatrix::zero(rank0, rank1)
    } else {
        let a = random_matrix(rng, rank0, rho, 2);
        let b = random_matrix(rng, rho, rank1, 2);
        a.mul(&b)
    };
    TwoTermComplex::new(rank1, rank0, d).expect("shapes agree")
}

/// Random two-term complex with `rank0 <= rank1`, as nondegeneracy requires.
pub fn random_two_term_balanced(rng: &mut ChaCha8Rng, max_rank: usize) -> TwoTermComplex {
    loop {
        let f = random_two_term(rng, max_rank);
        if f.rank0() <= f.rank1() {
            return f;
        }
    }
}

/// Random closed (possibly degenerate) instance.
pub fn random_instance(rng: &mut ChaCha8Rng, cfg: SampleConfig) -> Instance {
    let f = random_two_term(rng, cfg.max_rank);
    let m = rng.gen_range(1..=cfg.max_m);
    let a = random_closed_form(&f, m, rng.gen());
    Instance::new(f, a).expect("matching ranks")
}

/// Random closed nondegenerate instance within the bounds. Resamples both
/// the form and the complex until the base-point-free test passes.
pub fn random_nondegenerate_instance(rng: &mut ChaCha8Rng, cfg: SampleConfig) -> Instance {
    loop {
        let f = random_two_term_balanced(rng, cfg.max_rank);
        let m = rng.gen_range(1..=cfg.max_m);
        for _ in 0..40 {
            let a = random_closed_form(&f, m, rng.gen());
            let inst = Instance::new(f.clone(), a).expect("matching ranks");
            if is_nondegenerate(&inst).expect("sampled form is closed") {
                return inst;
            }
        }
    }
}

/// Random closed nondegenerate instance with a nonzero differential and
/// `rank1 >= 2`, the shapes on which homotopies act nontrivially.
pub fn random_homotopy_instance(rng: &mut ChaCha8Rng, cfg: SampleConfig) -> Instance {
    loop {
        let inst = random_nondegenerate_instance(rng, cfg);
        if inst.complex().rank1() >= 2 && !inst.complex().d().is_zero() {
            return inst;
        }
    }
}

/// A deterministic instance whose form is *not* closed, for negative
/// controls: `F_1 = F_0 = Q`, `d = 1`, `a = x (x) e`.
pub fn non_closed_instance() -> Instance {
    let f = TwoTermComplex::new(1, 1, RMatrix::from_int_rows(&[&[1]])).expect("1x1");
    let a = Form::new(1, 1, 1, [(vec![1], 0, rat(1))]).expect("valid entry");
    Instance::new(f, a).expect("matching ranks")
}
