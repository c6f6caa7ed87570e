//! Randomized invariant suites.
//!
//! Each property runs over seeded cases and reports pass/fail counts plus
//! the first counterexample instance, so a failing run can be replayed from
//! the serialized instance file.

use serde::Serialize;

use crate::chern::verify_ctop_identity;
use crate::exec;
use crate::koszul::{cohomology_dims, ext_complex, prop26_expected, sym_complex};
use crate::linalg::RMatrix;
use crate::multilinear::{ext_dim, ext_power_matrix, sym_dim, sym_power_matrix};
use crate::periodic::{periodic_from_instance, periodic_virtual_rank};
use crate::sample::{
    non_closed_instance, random_homotopy_instance, random_instance, random_matrix,
    random_nondegenerate_instance, random_two_term, rng, SampleConfig,
};
use crate::scenarios::{
    bundle_case_closed_form, bundle_case_instance, genus_one_instance, theta_instance,
    witten_instance,
};
use crate::witten::{
    atilde_matrix, cohomology_of_total, dtilde_matrix, ke_class, ke_class_force, n0_bound,
    random_homotopy_form, stabilize, verify_homotopy_invariance, Form, Instance,
};

#[derive(Clone, Copy, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    pub cases: usize,
    pub max_rank: usize,
    pub max_m: u32,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            cases: 50,
            max_rank: 3,
            max_m: 3,
        }
    }
}

/// One failing case.
#[derive(Clone, Debug)]
pub struct Failure {
    pub detail: String,
    pub counterexample: Option<Instance>,
}

impl Failure {
    fn new(detail: impl Into<String>) -> Self {
        Failure {
            detail: detail.into(),
            counterexample: None,
        }
    }

    fn with_instance(detail: impl Into<String>, inst: &Instance) -> Self {
        Failure {
            detail: detail.into(),
            counterexample: Some(inst.clone()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub pass: usize,
    pub fail: usize,
    pub first_failure: Option<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertySummary {
    pub name: &'static str,
    pub pass: usize,
    pub fail: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SelftestReport {
    pub config: SelftestConfig,
    pub properties: Vec<PropertyOutcome>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.properties.iter().all(|p| p.fail == 0)
    }

    pub fn first_counterexample(&self) -> Option<(&'static str, &Instance)> {
        self.properties.iter().find_map(|p| {
            p.first_failure
                .as_ref()
                .and_then(|f| f.counterexample.as_ref().map(|i| (p.name, i)))
        })
    }

    pub fn summaries(&self) -> Vec<PropertySummary> {
        self.properties
            .iter()
            .map(|p| PropertySummary {
                name: p.name,
                pass: p.pass,
                fail: p.fail,
                first_failure: p.first_failure.as_ref().map(|f| f.detail.clone()),
            })
            .collect()
    }
}

fn case_seed(base: u64, property: u64, case: u64) -> u64 {
    // splitmix-style mixing keeps per-case streams independent
    let mut z = base
        .wrapping_add(property.wrapping_mul(0x9E3779B97F4A7C15))
        .wrapping_add(case.wrapping_mul(0xBF58476D1CE4E5B9));
    z ^= z >> 30;
    z = z.wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn run_property<F>(
    cfg: &SelftestConfig,
    index: u64,
    name: &'static str,
    cases: usize,
    f: F,
) -> PropertyOutcome
where
    F: Fn(u64) -> Result<(), Failure> + Sync + Send,
{
    let results = exec::map_vec((0..cases as u64).collect::<Vec<_>>(), |case| {
        f(case_seed(cfg.seed, index, case))
    });
    let mut pass = 0;
    let mut fail = 0;
    let mut first_failure = None;
    for r in results {
        match r {
            Ok(()) => pass += 1,
            Err(e) => {
                fail += 1;
                if first_failure.is_none() {
                    first_failure = Some(e);
                }
            }
        }
    }
    PropertyOutcome {
        name,
        pass,
        fail,
        first_failure,
    }
}

/// Run every suite. The `cases` knob scales the randomized properties;
/// deterministic checks run once per listed configuration.
pub fn run(cfg: &SelftestConfig) -> SelftestReport {
    let sample_cfg = SampleConfig {
        max_rank: cfg.max_rank,
        max_m: cfg.max_m,
    };
    let mut properties = Vec::new();

    properties.push(run_property(cfg, 1, "linalg-rank-nullity", cfg.cases, |s| {
        let mut r = rng(s);
        let m = random_matrix(&mut r, 4, 5, 4);
        let rank = m.rank();
        let kernel = m.kernel_basis();
        if rank + kernel.len() != m.ncols() {
            return Err(Failure::new("rank-nullity violated"));
        }
        for v in &kernel {
            if m.mul_vec(v).iter().any(|x| !num::Zero::is_zero(x)) {
                return Err(Failure::new("kernel vector not annihilated"));
            }
        }
        let b = random_matrix(&mut r, 5, 3, 4);
        if m.mul(&b).rank() > m.rank().min(b.rank()) {
            return Err(Failure::new("composite rank exceeds factor rank"));
        }
        Ok(())
    }));

    properties.push(run_property(
        cfg,
        2,
        "multilinear-functoriality",
        cfg.cases.min(25),
        |s| {
            let mut r = rng(s);
            let a = random_matrix(&mut r, 3, 2, 2);
            let b = random_matrix(&mut r, 2, 3, 2);
            let ab = a.mul(&b);
            for h in 0..=2u32 {
                if sym_power_matrix(&ab, h) != sym_power_matrix(&a, h).mul(&sym_power_matrix(&b, h))
                {
                    return Err(Failure::new(format!("Sym^{h} not functorial")));
                }
                if ext_power_matrix(&ab, h) != ext_power_matrix(&a, h).mul(&ext_power_matrix(&b, h))
                {
                    return Err(Failure::new(format!("Lambda^{h} not functorial")));
                }
                let sp = sym_power_matrix(&a, h);
                if sp.nrows() != sym_dim(3, h) || sp.ncols() != sym_dim(2, h) {
                    return Err(Failure::new("Sym power dims off"));
                }
                let ep = ext_power_matrix(&a, h);
                if ep.nrows() != ext_dim(3, h) || ep.ncols() != ext_dim(2, h) {
                    return Err(Failure::new("Lambda power dims off"));
                }
            }
            Ok(())
        },
    ));

    properties.push(run_property(cfg, 3, "koszul-prop26", cfg.cases, |s| {
        let mut r = rng(s);
        let w = random_two_term(&mut r, cfg.max_rank.min(3));
        let n = rand::Rng::gen_range(&mut r, 0..=4u32);
        let c = ext_complex(&w, n);
        let dims = cohomology_dims(&c).map_err(|e| Failure::new(e.to_string()))?;
        if dims != prop26_expected(w.h0_dim(), w.h1_dim(), n) {
            return Err(Failure::new(format!(
                "ext cohomology {dims:?} disagrees with the expected splitting"
            )));
        }
        // symmetric side against the dual data
        let dual =
            crate::koszul::TwoTermComplex::new(w.rank0(), w.rank1(), w.d().transpose()).unwrap();
        let cs = sym_complex(&dual, n);
        let mut ds = cohomology_dims(&cs).map_err(|e| Failure::new(e.to_string()))?;
        ds.reverse();
        if ds != dims {
            return Err(Failure::new("sym complex disagrees with dual ext complex"));
        }
        Ok(())
    }));

    properties.push(run_property(
        cfg,
        4,
        "double-complex-identities",
        cfg.cases,
        |s| {
            let mut r = rng(s);
            let inst = random_instance(&mut r, sample_cfg);
            check_double_complex_identities(&inst, true)
        },
    ));

    properties.push(run_property(cfg, 5, "anticommutator-negative-control", 1, |_| {
        check_double_complex_identities(&non_closed_instance(), false)
    }));

    properties.push(run_property(cfg, 6, "vanishing-window", cfg.cases, |s| {
        let mut r = rng(s);
        let inst = random_nondegenerate_instance(&mut r, sample_cfg);
        let n0 = n0_bound(inst.complex(), inst.m());
        for i in 0..=inst.m() {
            cohomology_of_total(&inst, i, n0 + 2)
                .map_err(|e| Failure::with_instance(e.to_string(), &inst))?;
        }
        Ok(())
    }));

    properties.push(run_property(cfg, 7, "class-lift-consistency", cfg.cases, |s| {
        let mut r = rng(s);
        let inst = random_nondegenerate_instance(&mut r, sample_cfg);
        let ke = ke_class(&inst).map_err(|e| Failure::with_instance(e.to_string(), &inst))?;
        for rec in &ke.per_i {
            let cohom_sum: i64 = rec
                .cohomology
                .iter()
                .filter(|&&(n, _)| n < ke.n0)
                .map(|&(n, h)| if n.rem_euclid(2) == 0 { h as i64 } else { -(h as i64) })
                .sum();
            if cohom_sum != rec.signed_total {
                return Err(Failure::with_instance(
                    format!("truncated sum {} != cohomology sum {cohom_sum}", rec.signed_total),
                    &inst,
                ));
            }
        }
        Ok(())
    }));

    properties.push(run_property(cfg, 8, "lambda-reduction", cfg.cases.min(20), |s| {
        let mut r = rng(s);
        let h1 = rand::Rng::gen_range(&mut r, 0..=cfg.max_rank);
        let m = rand::Rng::gen_range(&mut r, 1..=cfg.max_m);
        let f = crate::koszul::TwoTermComplex::with_zero_map(h1, 0);
        let inst = Instance::new(f, Form::zero(m, 0, h1)).unwrap();
        let ke = ke_class(&inst).map_err(|e| Failure::with_instance(e.to_string(), &inst))?;
        for (q, term) in ke.formal_terms.iter().enumerate() {
            let expected_weight = if q % 2 == 0 { 1 } else { -1 };
            if term.sym_deg != 0 || term.ext_deg != q as u32 || term.weight != expected_weight {
                return Err(Failure::with_instance(
                    "formal terms differ from the alternating exterior powers",
                    &inst,
                ));
            }
        }
        if ke.formal_terms.len() != h1 + 1 {
            return Err(Failure::with_instance("missing exterior power terms", &inst));
        }
        let expected_rank = if h1 == 0 { 1 } else { 0 };
        if ke.virtual_rank != expected_rank {
            return Err(Failure::with_instance("virtual rank off", &inst));
        }
        Ok(())
    }));

    properties.push(run_property(cfg, 9, "homotopy-invariance", cfg.cases.min(20), |s| {
        let mut r = rng(s);
        let inst = random_homotopy_instance(&mut r, sample_cfg);
        let hf = random_homotopy_form(inst.complex(), inst.m(), rand::Rng::gen(&mut r));
        let window = n0_bound(inst.complex(), inst.m()) + 1;
        let report = verify_homotopy_invariance(&inst, &hf, window)
            .map_err(|e| Failure::with_instance(e.to_string(), &inst))?;
        if !report.conjugation_ok {
            return Err(Failure::with_instance(
                format!("conjugation failed at {:?}", report.first_failure),
                &inst,
            ));
        }
        if !report.ke_equal {
            return Err(Failure::with_instance("Euler class moved under homotopy", &inst));
        }
        Ok(())
    }));

    properties.push(run_property(cfg, 10, "stabilization-invariance", 1, |_| {
        let mut scenarios: Vec<Instance> = vec![
            theta_instance(0),
            theta_instance(1),
            theta_instance(2),
            genus_one_instance(2),
            genus_one_instance(3),
            witten_instance(2),
        ];
        if let Some(b) = bundle_case_instance(1, 1, 3, 99) {
            scenarios.push(b);
        }
        for inst in &scenarios {
            let base = ke_class(inst).map_err(|e| Failure::with_instance(e.to_string(), inst))?;
            for s in 1..=2usize {
                let st =
                    stabilize(inst, s).map_err(|e| Failure::with_instance(e.to_string(), inst))?;
                let enlarged = ke_class(&st.instance)
                    .map_err(|e| Failure::with_instance(e.to_string(), &st.instance))?;
                if enlarged.virtual_rank != base.virtual_rank {
                    return Err(Failure::with_instance(
                        format!(
                            "stabilize({s}) moved the class: {} -> {}",
                            base.virtual_rank, enlarged.virtual_rank
                        ),
                        inst,
                    ));
                }
            }
        }
        Ok(())
    }));

    properties.push(run_property(cfg, 11, "periodic-consistency", cfg.cases, |s| {
        let mut r = rng(s);
        let inst = random_nondegenerate_instance(&mut r, sample_cfg);
        let w = periodic_from_instance(&inst, n0_bound(inst.complex(), inst.m()))
            .map_err(|e| Failure::with_instance(e.to_string(), &inst))?;
        w.check_periodicity()
            .map_err(|e| Failure::with_instance(e.to_string(), &inst))?;
        let phi = periodic_virtual_rank(&inst)
            .map_err(|e| Failure::with_instance(e.to_string(), &inst))?;
        let ke = ke_class(&inst).map_err(|e| Failure::with_instance(e.to_string(), &inst))?;
        if phi != ke.virtual_rank {
            return Err(Failure::with_instance(
                format!("periodic rank {phi} != Euler class {}", ke.virtual_rank),
                &inst,
            ));
        }
        Ok(())
    }));

    properties.push(run_property(cfg, 12, "chern-identity", 1, |_| {
        for n in 0..=3usize {
            for cap in n as u32..=6 {
                if !verify_ctop_identity(n, cap) {
                    return Err(Failure::new(format!("identity fails at n={n}, cap={cap}")));
                }
            }
        }
        Ok(())
    }));

    properties.push(run_property(cfg, 13, "bundle-closed-form", 12, |s| {
        // cycle over the (h0 = h1, r) grid, one sampled pairing per case
        let combos = [(1usize, 2u32), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4)];
        let (h, rr) = combos[(s % combos.len() as u64) as usize];
        let Some(inst) = bundle_case_instance(h, h, rr, s) else {
            return Err(Failure::new(format!(
                "no nondegenerate pairing found for h0=h1={h}, r={rr}"
            )));
        };
        let ke = ke_class(&inst).map_err(|e| Failure::with_instance(e.to_string(), &inst))?;
        let closed = bundle_case_closed_form(h, h, rr);
        if ke.virtual_rank != closed {
            return Err(Failure::with_instance(
                format!("Euler class {} != closed form {closed}", ke.virtual_rank),
                &inst,
            ));
        }
        Ok(())
    }));

    properties.push(run_property(cfg, 14, "basis-permutation-invariance", cfg.cases.min(15), |s| {
        let mut r = rng(s);
        let inst = random_nondegenerate_instance(&mut r, sample_cfg);
        let permuted = permute_bases(&inst, &mut r);
        let ke1 = ke_class_force(&inst).map_err(|e| Failure::with_instance(e.to_string(), &inst))?;
        let ke2 = ke_class_force(&permuted)
            .map_err(|e| Failure::with_instance(e.to_string(), &permuted))?;
        if ke1.virtual_rank != ke2.virtual_rank || ke1.per_i != ke2.per_i {
            return Err(Failure::with_instance(
                "Euler class depends on the basis order",
                &inst,
            ));
        }
        Ok(())
    }));

    SelftestReport {
        config: *cfg,
        properties,
    }
}

/// Check `dtilde^2 = 0`, `atilde^2 = 0` and the anticommutator on a window
/// of cells. With `expect_closed` all three must vanish; otherwise the
/// anticommutator must be nonzero somewhere.
fn check_double_complex_identities(inst: &Instance, expect_closed: bool) -> Result<(), Failure> {
    let f = inst.complex();
    let m = inst.m();
    let mut anticommutator_zero = true;
    for h in 0..=(m + 2) {
        for k in 0..=(f.rank1() as u32) {
            if k >= 2 {
                let dd = dtilde_matrix(f, h + 1, k - 1).mul(&dtilde_matrix(f, h, k));
                if !dd.is_zero() {
                    return Err(Failure::with_instance(
                        format!("dtilde^2 != 0 at ({h},{k})"),
                        inst,
                    ));
                }
            }
            let aa = atilde_matrix(inst, h + m, k + 1).mul(&atilde_matrix(inst, h, k));
            if !aa.is_zero() {
                return Err(Failure::with_instance(
                    format!("atilde^2 != 0 at ({h},{k})"),
                    inst,
                ));
            }
            let da = dtilde_matrix(f, h + m, k + 1).mul(&atilde_matrix(inst, h, k));
            let ad = if k >= 1 {
                atilde_matrix(inst, h + 1, k - 1).mul(&dtilde_matrix(f, h, k))
            } else {
                RMatrix::zero(da.nrows(), da.ncols())
            };
            if !da.add(&ad).is_zero() {
                anticommutator_zero = false;
                if expect_closed {
                    return Err(Failure::with_instance(
                        format!("anticommutator != 0 at ({h},{k}) for a closed form"),
                        inst,
                    ));
                }
            }
        }
    }
    if !expect_closed && anticommutator_zero {
        return Err(Failure::with_instance(
            "anticommutator vanished everywhere for a non-closed form",
            inst,
        ));
    }
    Ok(())
}

/// Apply random permutations to the bases of `F_0` and `F_1`, carrying the
/// differential and the form along.
fn permute_bases(inst: &Instance, r: &mut rand_chacha::ChaCha8Rng) -> Instance {
    use rand::seq::SliceRandom;
    let f = inst.complex();
    let (f1, f0) = (f.rank1(), f.rank0());
    let mut p1: Vec<usize> = (0..f1).collect();
    let mut p0: Vec<usize> = (0..f0).collect();
    p1.shuffle(r);
    p0.shuffle(r);
    // d'[i', j'] = d[i, j] with i' = p0[i], j' = p1[j]
    let mut triplets = Vec::new();
    for i in 0..f0 {
        for (j, v) in f.d().row(i) {
            triplets.push((p0[i], p1[*j], v.clone()));
        }
    }
    let d = RMatrix::from_triplets(f0, f1, triplets);
    let complex = crate::koszul::TwoTermComplex::new(f1, f0, d).unwrap();
    let entries = inst.form().coeffs().map(|(e, t, c)| {
        let mut e2 = vec![0u32; f0];
        for (i, &v) in e.iter().enumerate() {
            e2[p0[i]] = v;
        }
        (e2, p1[t], c.clone())
    });
    let form = Form::new(inst.m(), f0, f1, entries).unwrap();
    Instance::new(complex, form).unwrap()
}
