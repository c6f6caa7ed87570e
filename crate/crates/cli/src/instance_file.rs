//! The on-disk instance format.
//!
//! UTF-8 JSON with rational entries as strings (`"p/q"` or integer
//! literals), never binary floats:
//!
//! ```json
//! {
//!   "m": 1,
//!   "f1_rank": 2,
//!   "f0_rank": 2,
//!   "d": [["0", "0"], ["0", "0"]],
//!   "a": [{ "sym": [1, 0], "f1": 0, "coeff": "1" }]
//! }
//! ```
//!
//! `d` is row-major of shape `f0_rank x f1_rank`; each `a` entry carries a
//! degree-`m` exponent vector of length `f0_rank` and a 0-based `F_1` index.
//! Validation failures name the offending field.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use wtc_core::koszul::TwoTermComplex;
use wtc_core::linalg::parse_rational;
use wtc_core::witten::{Form, Instance};
use wtc_core::{RMatrix, Rational};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub m: u32,
    pub f1_rank: usize,
    pub f0_rank: usize,
    pub d: Vec<Vec<String>>,
    pub a: Vec<FormEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormEntry {
    pub sym: Vec<u32>,
    pub f1: usize,
    pub coeff: String,
}

/// A malformed instance file; the message names the offending field.
#[derive(Debug)]
pub struct MalformedInstance(pub String);

impl std::fmt::Display for MalformedInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "malformed instance: {}", self.0)
    }
}

impl std::error::Error for MalformedInstance {}

impl InstanceFile {
    pub fn load(path: &Path) -> Result<Self, MalformedInstance> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MalformedInstance(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| MalformedInstance(format!("invalid JSON: {e}")))
    }

    /// Validate every field and build the in-memory instance.
    pub fn to_instance(&self) -> Result<Instance, MalformedInstance> {
        if self.m == 0 {
            return Err(MalformedInstance("m: must be at least 1".into()));
        }
        if self.d.len() != self.f0_rank {
            return Err(MalformedInstance(format!(
                "d: has {} rows, expected f0_rank = {}",
                self.d.len(),
                self.f0_rank
            )));
        }
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(self.f0_rank);
        for (i, row) in self.d.iter().enumerate() {
            if row.len() != self.f1_rank {
                return Err(MalformedInstance(format!(
                    "d[{i}]: has {} entries, expected f1_rank = {}",
                    row.len(),
                    self.f1_rank
                )));
            }
            let mut out = Vec::with_capacity(self.f1_rank);
            for (j, s) in row.iter().enumerate() {
                let v = parse_rational(s).ok_or_else(|| {
                    MalformedInstance(format!("d[{i}][{j}]: invalid rational {s:?}"))
                })?;
                out.push(v);
            }
            rows.push(out);
        }
        let d = if self.f0_rank == 0 {
            RMatrix::zero(0, self.f1_rank)
        } else {
            RMatrix::from_rows(rows)
        };
        let complex = TwoTermComplex::new(self.f1_rank, self.f0_rank, d)
            .map_err(|e| MalformedInstance(format!("d: {e}")))?;

        let mut seen: BTreeSet<(Vec<u32>, usize)> = BTreeSet::new();
        let mut entries = Vec::with_capacity(self.a.len());
        for (idx, entry) in self.a.iter().enumerate() {
            if entry.sym.len() != self.f0_rank {
                return Err(MalformedInstance(format!(
                    "a[{idx}].sym: has length {}, expected f0_rank = {}",
                    entry.sym.len(),
                    self.f0_rank
                )));
            }
            let degree: u32 = entry.sym.iter().sum();
            if degree != self.m {
                return Err(MalformedInstance(format!(
                    "a[{idx}].sym: has degree {degree}, expected m = {}",
                    self.m
                )));
            }
            if entry.f1 >= self.f1_rank {
                return Err(MalformedInstance(format!(
                    "a[{idx}].f1: index {} out of range (f1_rank = {})",
                    entry.f1, self.f1_rank
                )));
            }
            if !seen.insert((entry.sym.clone(), entry.f1)) {
                return Err(MalformedInstance(format!(
                    "a[{idx}]: duplicate key (sym = {:?}, f1 = {})",
                    entry.sym, entry.f1
                )));
            }
            let coeff = parse_rational(&entry.coeff).ok_or_else(|| {
                MalformedInstance(format!(
                    "a[{idx}].coeff: invalid rational {:?}",
                    entry.coeff
                ))
            })?;
            entries.push((entry.sym.clone(), entry.f1, coeff));
        }
        let form = Form::new(self.m, self.f0_rank, self.f1_rank, entries)
            .map_err(|e| MalformedInstance(format!("a: {e}")))?;
        Instance::new(complex, form).map_err(|e| MalformedInstance(e.to_string()))
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let f = inst.complex();
        let d = f
            .d()
            .to_dense()
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.to_string()).collect())
            .collect();
        let a = inst
            .form()
            .coeffs()
            .map(|(sym, t, c)| FormEntry {
                sym: sym.clone(),
                f1: t,
                coeff: c.to_string(),
            })
            .collect();
        InstanceFile {
            m: inst.m(),
            f1_rank: f.rank1(),
            f0_rank: f.rank0(),
            d,
            a,
        }
    }

    pub fn save(&self, path: &Path) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}
