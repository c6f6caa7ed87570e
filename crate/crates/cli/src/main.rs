//! `wtc` — exact K-theory Euler classes of two-term complexes over Q.
//!
//! Subcommands: `validate`, `ke`, `ctop`, `example`, `chern-identity`,
//! `selftest`. Reports are JSON on stdout; diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 failed checks (non-closed or degenerate form,
//! failing selftest), 2 malformed input or invalid parameters.

mod instance_file;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wtc_core::chern::verify_ctop_identity;
use wtc_core::scenarios::{
    bundle_case_closed_form, bundle_case_instance, genus_one_instance, theta_instance,
    witten_instance,
};
use wtc_core::selftest::{self, SelftestConfig};
use wtc_core::witten::{
    check_closed, is_nondegenerate, ke_class, ke_class_force, n0_bound, Instance,
};
use wtc_core::CoreError;

use instance_file::{InstanceFile, MalformedInstance};
use report::*;

#[derive(Parser)]
#[command(name = "wtc", version, about = "Exact K-theory Euler classes of two-term complexes")]
struct Cli {
    /// Abort before materializing any space larger than this
    /// (env: WITTEN_MAX_CELL_DIM).
    #[arg(long, global = true)]
    max_cell_dim: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check closedness and nondegeneracy of an instance file.
    Validate { path: PathBuf },
    /// Compute the K-theory Euler class ledger of an instance file.
    Ke {
        path: PathBuf,
        /// Compute truncated data even for a degenerate form
        /// (labeled non-canonical).
        #[arg(long)]
        force: bool,
    },
    /// Compute the degree-zero top Chern number of an instance file.
    Ctop {
        path: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Synthesize a built-in scenario and report its top Chern number.
    #[command(subcommand)]
    Example(ExampleKind),
    /// Verify c_top = ch(lambda_-1) * td on formal Chern roots.
    ChernIdentity {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        degree: u32,
    },
    /// Run the randomized invariant suites.
    Selftest(SelftestArgs),
}

#[derive(Subcommand)]
enum ExampleKind {
    /// Perfect pairing on h = h^0 = h^1 dimensions (r = 2).
    Theta {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Elliptic spin structure; trivial L unless --nontrivial-l.
    GenusOne {
        #[arg(long)]
        r: u32,
        /// Nontrivial L: both cohomologies vanish.
        #[arg(long)]
        nontrivial_l: bool,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Vanishing H^0: zero form on (Q^h1 -> 0).
    Witten {
        #[arg(long)]
        h1: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Sampled nondegenerate pairing with both pushforwards bundles.
    BundleCase {
        #[arg(long)]
        h0: usize,
        #[arg(long)]
        h1: usize,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    cases: usize,
    #[arg(long, default_value_t = 3)]
    max_rank: usize,
    #[arg(long, default_value_t = 3)]
    max_m: u32,
    /// Where to write the first failing instance for replay.
    #[arg(long, default_value = "selftest-counterexample.json")]
    counterexample: PathBuf,
}

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_MALFORMED: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(limit) = cli.max_cell_dim {
        wtc_core::guard::set_max_cell_dim(limit);
    }
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    ExitCode::from(code)
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<MalformedInstance>().is_some() {
        return EXIT_MALFORMED;
    }
    match e.downcast_ref::<CoreError>() {
        Some(CoreError::Degenerate) | Some(CoreError::NotClosed) => EXIT_CHECK_FAILED,
        Some(CoreError::Shape(_)) => EXIT_MALFORMED,
        _ => EXIT_CHECK_FAILED,
    }
}

fn run(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Ke { path, force } => cmd_ke(&path, force),
        Command::Ctop { path, force } => cmd_ctop(&path, force),
        Command::Example(kind) => cmd_example(kind),
        Command::ChernIdentity { rank, degree } => cmd_chern_identity(rank, degree),
        Command::Selftest(args) => cmd_selftest(&args),
    }
}

fn load_instance(path: &std::path::Path) -> anyhow::Result<Instance> {
    let file = InstanceFile::load(path)?;
    Ok(file.to_instance()?)
}

fn print_json<T: serde::Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn cmd_validate(path: &std::path::Path) -> anyhow::Result<u8> {
    let inst = load_instance(path)?;
    let closed_check = check_closed(&inst);
    let nondegenerate = closed_check.closed && is_nondegenerate(&inst)?;
    let report = ValidateReport {
        schema_version: SCHEMA_VERSION,
        closed: closed_check.closed,
        nondegenerate,
        h0: inst.complex().h0_dim(),
        h1: inst.complex().h1_dim(),
        n0: n0_bound(inst.complex(), inst.m()),
        witness: closed_check
            .witness
            .map(|w| w.iter().map(|v| v.to_string()).collect()),
    };
    let ok = report.closed && report.nondegenerate;
    print_json(&report)?;
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn compute_class(inst: &Instance, force: bool) -> anyhow::Result<wtc_core::witten::EulerClass> {
    if force {
        Ok(ke_class_force(inst)?)
    } else {
        Ok(ke_class(inst)?)
    }
}

fn cmd_ke(path: &std::path::Path, force: bool) -> anyhow::Result<u8> {
    let inst = load_instance(path)?;
    let ke = compute_class(&inst, force)?;
    let report = KeReport::new(
        &ke,
        inst.complex().rank1(),
        inst.complex().rank0(),
        inst.complex().h0_dim(),
        inst.complex().h1_dim(),
    );
    print_json(&report)?;
    Ok(EXIT_OK)
}

fn cmd_ctop(path: &std::path::Path, force: bool) -> anyhow::Result<u8> {
    let inst = load_instance(path)?;
    let ke = compute_class(&inst, force)?;
    let report = CtopReport {
        schema_version: SCHEMA_VERSION,
        m: ke.m,
        h0: inst.complex().h0_dim(),
        h1: inst.complex().h1_dim(),
        n0: ke.n0,
        canonical: ke.canonical,
        c_w: ke.virtual_rank,
    };
    print_json(&report)?;
    Ok(EXIT_OK)
}

fn cmd_example(kind: ExampleKind) -> anyhow::Result<u8> {
    let (name, params, inst, closed_form, emit) = match kind {
        ExampleKind::Theta { h, emit } => (
            "theta",
            serde_json::json!({ "h": h }),
            theta_instance(h),
            None,
            emit,
        ),
        ExampleKind::GenusOne {
            r,
            nontrivial_l,
            emit,
        } => {
            if r < 2 {
                anyhow::bail!(MalformedInstance("r: must be at least 2".into()));
            }
            let inst = if nontrivial_l {
                // both cohomologies vanish; the class of the empty complex
                Instance::new(
                    wtc_core::koszul::TwoTermComplex::with_zero_map(0, 0),
                    wtc_core::witten::Form::zero(r - 1, 0, 0),
                )?
            } else {
                genus_one_instance(r)
            };
            (
                "genus-one",
                serde_json::json!({ "r": r, "nontrivial_l": nontrivial_l }),
                inst,
                None,
                emit,
            )
        }
        ExampleKind::Witten { h1, emit } => (
            "witten",
            serde_json::json!({ "h1": h1 }),
            witten_instance(h1),
            None,
            emit,
        ),
        ExampleKind::BundleCase {
            h0,
            h1,
            r,
            seed,
            emit,
        } => {
            if r < 2 {
                anyhow::bail!(MalformedInstance("r: must be at least 2".into()));
            }
            let inst = bundle_case_instance(h0, h1, r, seed).ok_or_else(|| {
                MalformedInstance(format!(
                    "no nondegenerate pairing exists for h0 = {h0}, h1 = {h1}, r = {r}"
                ))
            })?;
            (
                "bundle-case",
                serde_json::json!({ "h0": h0, "h1": h1, "r": r, "seed": seed }),
                inst,
                Some(bundle_case_closed_form(h0, h1, r)),
                emit,
            )
        }
    };
    let ke = ke_class(&inst)?;
    let emitted = match emit {
        Some(path) => {
            InstanceFile::from_instance(&inst).save(&path)?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let report = ExampleReport {
        schema_version: SCHEMA_VERSION,
        kind: name.to_string(),
        params,
        c_w: ke.virtual_rank,
        closed_form,
        emitted,
    };
    print_json(&report)?;
    Ok(EXIT_OK)
}

fn cmd_chern_identity(rank: usize, degree: u32) -> anyhow::Result<u8> {
    if (degree as usize) < rank {
        anyhow::bail!(MalformedInstance(
            "degree: must be at least the rank".into()
        ));
    }
    let holds = verify_ctop_identity(rank, degree);
    let report = ChernIdentityReport {
        schema_version: SCHEMA_VERSION,
        rank,
        degree,
        holds,
    };
    print_json(&report)?;
    Ok(if holds { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_selftest(args: &SelftestArgs) -> anyhow::Result<u8> {
    let cfg = SelftestConfig {
        seed: args.seed,
        cases: args.cases,
        max_rank: args.max_rank,
        max_m: args.max_m,
    };
    let report = selftest::run(&cfg);
    let ok = report.ok();
    let mut counterexample_path = None;
    let mut counterexample_property = None;
    if let Some((property, inst)) = report.first_counterexample() {
        InstanceFile::from_instance(inst).save(&args.counterexample)?;
        counterexample_path = Some(args.counterexample.display().to_string());
        counterexample_property = Some(property.to_string());
    }
    let json = SelftestReportJson {
        schema_version: SCHEMA_VERSION,
        seed: cfg.seed,
        cases: cfg.cases,
        max_rank: cfg.max_rank,
        max_m: cfg.max_m,
        ok,
        properties: report.summaries(),
        counterexample_path,
        counterexample_property,
    };
    print_json(&json)?;
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}
