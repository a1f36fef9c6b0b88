//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::json;

use crate::automorphism::{
    check_automorphism, construct_exceptional_swap, detect_lambda, factor_automorphism, recompose,
    LinearEndo,
};
use crate::error::{Error, Result};
use crate::lie_model::{
    build_model_capped, canonical_ideal, filtration, grading_eigenspaces, LieModel,
    DEFAULT_DIM_CAP,
};
use crate::linalg::{Matrix, WireMatrix};
use crate::report::{Outcome, VerificationReport};
use crate::sample::DEFAULT_SEED;
use crate::spec::ModelSpec;
use crate::suites::{expected_degree_dims, run_suite, Suite};

/// Environment variable overriding the model-dimension cap.
pub const DIM_CAP_VAR: &str = "SVF_DIM_CAP";

#[derive(Parser, Debug)]
#[command(name = "svf", version, about = "Exact Lie superalgebras of super vector fields")]
pub struct Cli {
    /// Write the verification report as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub rng_seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a model and export its basis and structure constants.
    Model {
        spec: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Eigenspaces of the Euler field.
    Grading { spec: PathBuf },
    /// Canonical ideal, with the brute-force maximal ideals at point scale.
    Ideal { spec: PathBuf },
    /// Filtration levels and the graded-quotient checks.
    Filtration { spec: PathBuf },
    /// Test whether a matrix is an automorphism.
    CheckAut { spec: PathBuf, matrix: PathBuf },
    /// Factor an automorphism into bundle part and exponentials.
    FactorAut {
        spec: PathBuf,
        matrix: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Build the grading-reversing automorphism of (0,0,2) from V ≅ Λ²V*⊗V.
    Swap {
        spec: PathBuf,
        iso: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
}

/// Parses `argv`, runs the command, prints to `out`, and returns the exit
/// code: 0 all passed or skipped, 1 some check failed, 2 bad input.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(report) => {
            if let Some(path) = &cli.json {
                if let Err(e) = fs::write(path, report.to_json()) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            let _ = write!(out, "{}", report.to_table());
            i32::from(report.any_failed())
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Consistency(_) | Error::Construction(_) => 1,
        _ => 2,
    }
}

fn dim_cap() -> Result<usize> {
    match std::env::var(DIM_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("{DIM_CAP_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_DIM_CAP),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Input(format!("{what} {}: {e}", path.display())))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, text)
        .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<LieModel> {
    let spec: ModelSpec = read_json(path, "spec")?;
    build_model_capped(spec, dim_cap()?)
}

fn load_endo(m: &LieModel, path: &Path) -> Result<LinearEndo> {
    let w: WireMatrix = read_json(path, "matrix")?;
    LinearEndo::from_wire(m, &w)
}

fn describe(m: &LieModel, v: &[crate::rational::Rational]) -> String {
    m.field_of(v).to_string()
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<VerificationReport> {
    let seed = cli.rng_seed;
    let w = |out: &mut dyn Write, s: String| {
        let _ = writeln!(out, "{s}");
    };
    match &cli.command {
        Command::Model { spec, out: data } => {
            let m = load_model(spec)?;
            w(out, format!("model {} has dimension {}", m.spec(), m.dim()));
            for i in 0..m.dim() {
                w(out, format!("  e{i:<4} degree {:>2}  {}", m.degrees()[i], m.basis_name(i)));
            }
            if let Some(p) = data {
                write_json(p, &m.export())?;
            }
            let mut rep = VerificationReport::new("model", m.spec(), seed);
            rep.run("build", "structure constants computed", || {
                Ok(Outcome::Pass(json!({ "dim": m.dim() })))
            });
            Ok(rep)
        }
        Command::Grading { spec } => {
            let m = load_model(spec)?;
            let spaces = grading_eigenspaces(&m)?;
            for (k, s) in &spaces {
                w(out, format!("degree {k:>2}: dim {}", s.dim()));
            }
            let mut rep = VerificationReport::new("grading", m.spec(), seed);
            rep.run("eigenspace_dims", "eigenspace dimensions", || {
                let found: std::collections::BTreeMap<i32, usize> =
                    spaces.iter().map(|(&k, s)| (k, s.dim())).collect();
                let expected = expected_degree_dims(m.spec());
                Ok(Outcome::from_bool(found == expected, || {
                    json!({ "found": found, "expected": expected })
                }))
            });
            Ok(rep)
        }
        Command::Ideal { spec } => {
            let m = load_model(spec)?;
            let ideal = canonical_ideal(&m)?;
            w(out, format!("canonical ideal: dim {}", ideal.dim()));
            for v in ideal.basis() {
                w(out, format!("  {}", describe(&m, v)));
            }
            Ok(run_suite(&m, Suite::Ideals, seed))
        }
        Command::Filtration { spec } => {
            let m = load_model(spec)?;
            let f = filtration(&m)?;
            for (p, s) in f.levels() {
                w(out, format!("level {p:>2}: dim {}", s.dim()));
            }
            Ok(run_suite(&m, Suite::Filtration, seed))
        }
        Command::CheckAut { spec, matrix } => {
            let m = load_model(spec)?;
            let endo = load_endo(&m, matrix)?;
            let mut rep = VerificationReport::new("check-aut", m.spec(), seed);
            rep.run("automorphism", "bracket-preserving invertible map", || {
                let c = check_automorphism(&m, endo.matrix())?;
                Ok(Outcome::from_bool(c.passed(), || c.witness()))
            });
            Ok(rep)
        }
        Command::FactorAut { spec, matrix, out: data } => {
            let m = load_model(spec)?;
            let endo = load_endo(&m, matrix)?;
            let r = factor_automorphism(&m, endo.matrix())?;
            w(out, format!("lambda {}", r.lambda));
            w(out, format!("bundle part {}", json!(r.bundle_part.to_wire())));
            for c in &r.corrections {
                w(out, format!("  degree {}: {}", c.degree, describe(&m, &c.element)));
            }
            if let Some(p) = data {
                write_json(p, &r)?;
            }
            let mut rep = VerificationReport::new("factor-aut", m.spec(), seed);
            rep.run("recomposition", "factors recompose to the input", || {
                let back = recompose(&m, &r)?;
                Ok(Outcome::from_bool(back == *endo.matrix(), || {
                    json!({ "recomposed": back.to_wire() })
                }))
            });
            Ok(rep)
        }
        Command::Swap { spec, iso, out: data } => {
            let m = load_model(spec)?;
            let iso: WireMatrix = read_json(iso, "identification")?;
            let iso = Matrix::from_wire(&iso)?;
            let s = construct_exceptional_swap(&m, &iso)?;
            for j in 0..m.dim() {
                w(out, format!("  {} -> {}", m.basis_name(j), describe(&m, &s.column(j))));
            }
            if let Some(p) = data {
                write_json(p, &s.to_wire())?;
            }
            let mut rep = VerificationReport::new("swap", m.spec(), seed);
            rep.run("swap_automorphism", "bracket-preserving invertible map", || {
                let c = check_automorphism(&m, &s)?;
                Ok(Outcome::from_bool(c.passed(), || c.witness()))
            });
            rep.run("swap_lambda", "ψ(ε) = -ε", || {
                let l = detect_lambda(&m, &s)?;
                Ok(Outcome::from_bool(l == -1, || json!({ "lambda": l })))
            });
            Ok(rep)
        }
        Command::Verify { spec, suite } => {
            let m = load_model(spec)?;
            Ok(run_suite(&m, *suite, seed))
        }
    }
}
