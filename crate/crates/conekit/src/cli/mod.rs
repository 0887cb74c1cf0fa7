//! Command-line front end: parse a self-describing JSON input document,
//! dispatch to the classifiers / theorem harnesses / fuzz campaigns, and
//! emit text or JSON reports.
//!
//! Exit-code contract: 0 for clean verdicts (including "the math said no"),
//! 1 for usage / IO / parse errors, 2 for a THEOREM VIOLATION (a verified-
//! hypotheses instance whose conclusion check failed: a library defect or a
//! genuine counterexample, never a routine verdict).

mod fuzz;
mod input;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use fuzz::{run_campaign, Campaign, GeneratorKind};
pub use input::{load_input, InputDoc};
pub use report::{render, Report};

use crate::classify;
use crate::cone::{operator_norm_identity_check, order_unit_norm, OrderUnit};
use crate::config::Config;
use crate::invpos;
use crate::semigroup;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_THEOREM_VIOLATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "conekit",
    version,
    about = "Positivity classification, inverse-positivity certificates, and positive-semigroup checks on simplicial cones"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonOpts {
    /// Load the cone from a separate JSON file ({"orthant": n} or
    /// {"generators": [[...]]}); overrides the input document's cone.
    #[arg(long, value_name = "FILE")]
    pub cone: Option<PathBuf>,
    /// Use the standard orthant of the given dimension.
    #[arg(long, value_name = "N", conflicts_with = "cone")]
    pub orthant: Option<usize>,
    /// Override the membership/boundary tolerance tau.
    #[arg(long, value_name = "X")]
    pub tol: Option<f64>,
    /// Seed echoed into the report (fuzz campaigns are driven by it).
    #[arg(long, value_name = "S", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify the matrix: somewhere positive, positive off-diagonal,
    /// somewhere positive off-diagonal, and the column screens.
    Classify {
        #[command(flatten)]
        common: CommonOpts,
        input: PathBuf,
    },
    /// Verify inverse positivity from the order-unit solution of Ax = -z.
    Theorem1 {
        #[command(flatten)]
        common: CommonOpts,
        input: PathBuf,
    },
    /// Check the four positive-semigroup generator conditions and their
    /// agreement.
    Theorem2 {
        #[command(flatten)]
        common: CommonOpts,
        input: PathBuf,
    },
    /// Order-unit norms, the threshold ||Ae||_e, and the operator-norm
    /// identity ||B|| = ||Be||_eps.
    Norms {
        #[command(flatten)]
        common: CommonOpts,
        input: PathBuf,
    },
    /// Run a seeded campaign of random instances through the designated
    /// harness and aggregate the results.
    Fuzz {
        #[command(flatten)]
        common: CommonOpts,
        /// Number of instances.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Smallest matrix dimension.
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        /// Largest matrix dimension.
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = GeneratorKind::Metzler)]
        generator: GeneratorKind,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {detail}")]
    Parse { path: String, detail: String },
    #[error(transparent)]
    Math(#[from] crate::error::Error),
    #[error("io error on {path}: {detail}")]
    Io { path: String, detail: String },
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Classify { common, input } => {
            let doc = load_input(&input)?;
            let cfg = effective_config(&doc, &common);
            let a = doc.require_matrix()?;
            let (cone_x, cone_y) = doc.cones(&a, &common, &cfg)?;
            let result = classify::classify(&a, &cone_x, &cone_y, &cfg)?;
            let report = Report::new("classify", &cfg, common.seed)
                .with_input(&input, &a, &cone_x)
                .with_body(report::Body::Classify(result));
            finish(report, &common)
        }
        Command::Theorem1 { common, input } => {
            let doc = load_input(&input)?;
            let cfg = effective_config(&doc, &common);
            let a = doc.require_matrix()?;
            let (cone_x, cone_y) = doc.cones(&a, &common, &cfg)?;
            let z = doc.z.clone().unwrap_or_else(|| vec![1.0; a.rows()]);
            let result = invpos::theorem1_verify(&a, &cone_x, &cone_y, &z, &cfg)?;
            let code = if result.is_violation() {
                EXIT_THEOREM_VIOLATION
            } else {
                EXIT_OK
            };
            let report = Report::new("theorem1", &cfg, common.seed)
                .with_input(&input, &a, &cone_x)
                .with_body(report::Body::Theorem1(result));
            finish_with(report, &common, code)
        }
        Command::Theorem2 { common, input } => {
            let doc = load_input(&input)?;
            let cfg = effective_config(&doc, &common);
            let a = doc.require_matrix()?;
            let (cone_x, cone_y) = doc.cones(&a, &common, &cfg)?;
            if cone_x != cone_y {
                return Err(CliError::Usage(
                    "theorem2 needs a single cone (X = Y)".into(),
                ));
            }
            let result = semigroup::theorem2_harness(&a, &cone_x, &cfg)?;
            let code = if result.is_violation() {
                EXIT_THEOREM_VIOLATION
            } else {
                EXIT_OK
            };
            let report = Report::new("theorem2", &cfg, common.seed)
                .with_input(&input, &a, &cone_x)
                .with_body(report::Body::Theorem2(result));
            finish_with(report, &common, code)
        }
        Command::Norms { common, input } => {
            let doc = load_input(&input)?;
            let cfg = effective_config(&doc, &common);
            let body = norms_body(&doc, &common, &cfg)?;
            let mut report = Report::new("norms", &cfg, common.seed);
            if let Some(a) = doc.matrix_opt()? {
                let (cone_x, _) = doc.cones(&a, &common, &cfg)?;
                report = report.with_input(&input, &a, &cone_x);
            }
            finish(report.with_body(body), &common)
        }
        Command::Fuzz {
            common,
            count,
            n_min,
            n_max,
            generator,
        } => {
            if n_min < 1 || n_max < n_min {
                return Err(CliError::Usage(format!(
                    "invalid dimension range {n_min}..{n_max}"
                )));
            }
            let cfg = apply_tol(Config::default(), &common);
            let campaign = Campaign {
                generator,
                count,
                n_min,
                n_max,
                seed: common.seed,
            };
            let summary = run_campaign(&campaign, &cfg)?;
            let code = if summary.violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_THEOREM_VIOLATION
            };
            let report =
                Report::new("fuzz", &cfg, common.seed).with_body(report::Body::Fuzz(summary));
            finish_with(report, &common, code)
        }
    }
}

fn norms_body(doc: &InputDoc, common: &CommonOpts, cfg: &Config) -> Result<report::Body, CliError> {
    let a = doc.matrix_opt()?;
    let Some(a) = a else {
        // Pure vector queries still need a cone; infer its dimension from x.
        let x = doc
            .x
            .clone()
            .ok_or_else(|| CliError::Usage("norms needs a matrix or a vector x".into()))?;
        let cone = doc.cone_for_dim(x.len(), common, cfg)?;
        let e = match &doc.e {
            Some(e) => OrderUnit::new(&cone, e.clone(), cfg)?,
            None => OrderUnit::canonical(&cone, cfg)?,
        };
        let norm = order_unit_norm(&cone, &e, &x, cfg)?;
        let position = cone.boundary_position(&x, cfg)?;
        return Ok(report::Body::Norms(report::NormsReport {
            vector_norm: Some(norm),
            position: Some(position),
            lambda0: None,
            identity: None,
            identity_note: None,
        }));
    };
    let (cone_x, cone_y) = doc.cones(&a, common, cfg)?;
    let e = match &doc.e {
        Some(e) => OrderUnit::new(&cone_x, e.clone(), cfg)?,
        None => OrderUnit::canonical(&cone_x, cfg)?,
    };
    let eps = match &doc.eps {
        Some(v) => OrderUnit::new(&cone_y, v.clone(), cfg)?,
        None => OrderUnit::canonical(&cone_y, cfg)?,
    };
    let (vector_norm, position) = match &doc.x {
        Some(x) => (
            Some(order_unit_norm(&cone_x, &e, x, cfg)?),
            Some(cone_x.boundary_position(x, cfg)?),
        ),
        None => (None, None),
    };
    let lambda0 = if a.is_square() && cone_x == cone_y {
        Some(semigroup::lambda_threshold(&a, &cone_x, &e, cfg)?)
    } else {
        None
    };
    let (identity, identity_note) =
        match operator_norm_identity_check(&cone_x, &e, &cone_y, &eps, &a, cfg) {
            Ok(r) => (Some(r), None),
            Err(crate::error::Error::NotConePositive) => (
                None,
                Some("matrix is not cone-positive; norm identity not claimed".to_string()),
            ),
            Err(err @ crate::error::Error::GuardExceeded { .. }) => (None, Some(err.to_string())),
            Err(e) => return Err(e.into()),
        };
    Ok(report::Body::Norms(report::NormsReport {
        vector_norm,
        position,
        lambda0,
        identity,
        identity_note,
    }))
}

fn effective_config(doc: &InputDoc, common: &CommonOpts) -> Config {
    apply_tol(doc.config(), common)
}

fn apply_tol(mut cfg: Config, common: &CommonOpts) -> Config {
    if let Some(t) = common.tol {
        cfg.tol = t;
    }
    cfg
}

fn finish(report: Report, common: &CommonOpts) -> Result<i32, CliError> {
    finish_with(report, common, EXIT_OK)
}

fn finish_with(report: Report, common: &CommonOpts, code: i32) -> Result<i32, CliError> {
    let rendered = render(&report, common.format);
    match &common.out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?,
        None => print!("{rendered}"),
    }
    Ok(code)
}
