//! JSON report schemas. Every report carries a schema version and is
//! serialized with a fixed field order, so identical inputs produce
//! byte-identical output.

use serde::Serialize;
use wtc_core::selftest::PropertySummary;
use wtc_core::witten::{EulerClass, FormalTerm, PerIClass};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Serialize)]
pub struct ValidateReport {
    pub schema_version: &'static str,
    pub closed: bool,
    pub nondegenerate: bool,
    pub h0: usize,
    pub h1: usize,
    pub n0: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct KeReport {
    pub schema_version: &'static str,
    pub m: u32,
    pub f1_rank: usize,
    pub f0_rank: usize,
    pub h0: usize,
    pub h1: usize,
    pub n0: i64,
    /// Materialized degrees: slices below `n0` enter the class, the window
    /// above is the verified vanishing margin.
    pub truncation_window: [i64; 2],
    pub canonical: bool,
    pub per_i: Vec<PerIClass>,
    pub formal_terms: Vec<FormalTerm>,
    pub residue_sign: i64,
    pub virtual_rank: i64,
}

impl KeReport {
    pub fn new(
        ke: &EulerClass,
        f1_rank: usize,
        f0_rank: usize,
        h0: usize,
        h1: usize,
    ) -> Self {
        let n_min = ke
            .per_i
            .iter()
            .filter_map(|p| p.dims.first().map(|&(n, _)| n))
            .min()
            .unwrap_or(0);
        KeReport {
            schema_version: SCHEMA_VERSION,
            m: ke.m,
            f1_rank,
            f0_rank,
            h0,
            h1,
            n0: ke.n0,
            truncation_window: [n_min, ke.n0 + 2],
            canonical: ke.canonical,
            per_i: ke.per_i.clone(),
            formal_terms: ke.formal_terms.clone(),
            residue_sign: ke.residue_sign,
            virtual_rank: ke.virtual_rank,
        }
    }
}

#[derive(Serialize)]
pub struct CtopReport {
    pub schema_version: &'static str,
    pub m: u32,
    pub h0: usize,
    pub h1: usize,
    pub n0: i64,
    pub canonical: bool,
    pub c_w: i64,
}

#[derive(Serialize)]
pub struct ExampleReport {
    pub schema_version: &'static str,
    pub kind: String,
    pub params: serde_json::Value,
    pub c_w: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emitted: Option<String>,
}

#[derive(Serialize)]
pub struct ChernIdentityReport {
    pub schema_version: &'static str,
    pub rank: usize,
    pub degree: u32,
    pub holds: bool,
}

#[derive(Serialize)]
pub struct SelftestReportJson {
    pub schema_version: &'static str,
    pub seed: u64,
    pub cases: usize,
    pub max_rank: usize,
    pub max_m: u32,
    pub ok: bool,
    pub properties: Vec<PropertySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample_property: Option<String>,
}
