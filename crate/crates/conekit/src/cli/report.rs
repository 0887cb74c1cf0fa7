//! Report envelope and rendering. JSON output is the struct serialization
//! (serde_json floats round-trip exactly); text output prints every float
//! with 17 significant digits so witnesses replay bit-identically.

use std::path::Path;

use serde::Serialize;

use super::fuzz::FuzzSummary;
use super::Format;
use crate::classify::{Classification, PropertyResult, Verdict, Witness};
use crate::cone::{ConePosition, ConeSpec, NormIdentity};
use crate::config::Config;
use crate::invpos::Theorem1Report;
use crate::mat::Mat;
use crate::semigroup::SemigroupReport;

#[derive(Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Serialize)]
pub struct InputEcho {
    pub path: String,
    pub matrix: Mat,
    pub cone: ConeSpec,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Body {
    Classify(Classification),
    Theorem1(Theorem1Report),
    Theorem2(SemigroupReport),
    Norms(NormsReport),
    Fuzz(FuzzSummary),
    Empty,
}

#[derive(Serialize)]
pub struct NormsReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<ConePosition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity: Option<NormIdentity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity_note: Option<String>,
}

#[derive(Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: &'static str,
    pub seed: u64,
    pub config: Config,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputEcho>,
    pub result: Body,
}

impl Report {
    pub fn new(command: &'static str, cfg: &Config, seed: u64) -> Report {
        Report {
            tool: ToolInfo {
                name: "conekit",
                version: env!("CARGO_PKG_VERSION"),
            },
            command,
            seed,
            config: cfg.clone(),
            input: None,
            result: Body::Empty,
        }
    }

    pub fn with_input(mut self, path: &Path, a: &Mat, cone: &ConeSpec) -> Report {
        self.input = Some(InputEcho {
            path: path.display().to_string(),
            matrix: a.clone(),
            cone: cone.clone(),
        });
        self
    }

    pub fn with_body(mut self, body: Body) -> Report {
        self.result = body;
        self
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

/// 17 significant digits: enough for exact f64 replay.
fn f(x: f64) -> String {
    format!("{x:.16e}")
}

fn vecf(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|&x| f(x)).collect();
    format!("[{}]", items.join(", "))
}

fn matf(m: &Mat) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("  {}", vecf(m.row(i))))
        .collect();
    rows.join("\n")
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "true",
        Verdict::Fails => "false",
        Verdict::Unknown => "unknown",
    }
}

fn push_property(out: &mut String, name: &str, p: &PropertyResult) {
    out.push_str(&format!("{name}: {}", verdict(p.verdict)));
    if let Some(m) = p.margin {
        out.push_str(&format!("  (margin {})", f(m)));
    }
    out.push('\n');
    match &p.witness {
        Some(Witness::BoundaryCounterexample {
            x,
            image,
            active_set,
            margin,
        }) => {
            out.push_str(&format!("  counterexample x = {}\n", vecf(x)));
            out.push_str(&format!("  image Ax = {}\n", vecf(image)));
            out.push_str(&format!(
                "  active facets {:?}, violation margin {}\n",
                active_set,
                f(*margin)
            ));
        }
        Some(Witness::EntryIndex {
            row,
            col,
            entry,
            x,
            phi,
        }) => {
            out.push_str(&format!(
                "  violating entry ({row},{col}) = {}\n  ray x = {}\n  functional phi = {}\n",
                f(*entry),
                vecf(x),
                vecf(phi)
            ));
        }
        Some(Witness::FunctionalFamily { faces }) => {
            let described: Vec<String> = faces
                .iter()
                .map(|ff| match ff.row {
                    Some(r) => format!("facet {} -> row {}", ff.face, r),
                    None => format!("facet {} -> (no uniform row)", ff.face),
                })
                .collect();
            out.push_str(&format!("  facet functionals: {}\n", described.join("; ")));
        }
        None => {}
    }
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "conekit {} :: {}\nseed: {}\n",
        report.tool.version, report.command, report.seed
    ));
    out.push_str(&format!(
        "tolerances: tol={} tol_lp={} tol_rank={} tol_expm={} tol_rel={}\n",
        f(report.config.tol),
        f(report.config.tol_lp),
        f(report.config.tol_rank),
        f(report.config.tol_expm),
        f(report.config.tol_rel)
    ));
    if let Some(input) = &report.input {
        out.push_str(&format!(
            "input: {}\nmatrix:\n{}\n",
            input.path,
            matf(&input.matrix)
        ));
    }
    out.push_str("---\n");
    match &report.result {
        Body::Classify(c) => {
            push_property(&mut out, "somewhere_positive", &c.somewhere_positive);
            match &c.positive_off_diagonal {
                Some(p) => push_property(&mut out, "positive_off_diagonal", p),
                None => out.push_str("positive_off_diagonal: n/a (needs X = Y)\n"),
            }
            match &c.somewhere_positive_off_diagonal {
                Some(p) => push_property(&mut out, "somewhere_positive_off_diagonal", p),
                None => out.push_str("somewhere_positive_off_diagonal: n/a (needs X = Y)\n"),
            }
            push_property(&mut out, "column_condition", &c.column_condition);
            push_property(
                &mut out,
                "deleted_column_condition",
                &c.deleted_column_condition,
            );
            if c.deleted_column_vacuous {
                out.push_str("  (single column: verdict vacuous)\n");
            }
        }
        Body::Theorem1(t) => {
            let h = &t.hypotheses;
            push_property(&mut out, "somewhere_positive", &h.somewhere_positive);
            out.push_str(&format!("z quasi-interior: {}\n", h.z_quasi_interior));
            match &h.e {
                Some(e) => out.push_str(&format!("solution e of Ae = -z: {}\n", vecf(e))),
                None => out.push_str("solution e of Ae = -z: none (system unsolvable)\n"),
            }
            out.push_str(&format!("e interior: {}\n", h.e_interior));
            if let Some(r) = h.residual {
                out.push_str(&format!("residual ||Ae + z||: {}\n", f(r)));
            }
            out.push_str(&format!("hypotheses all hold: {}\n", h.all_hold));
            if let Some(c) = &t.conclusions {
                out.push_str(&format!(
                    "kernel trivial: {} (sigma_min {} / sigma_max {})\n",
                    c.kernel_trivial,
                    f(c.sigma_min),
                    f(c.sigma_max)
                ));
                out.push_str(&format!(
                    "-A^-1 cone-positive: {} (min entry {})\n-A^-1:\n{}\n",
                    c.neg_inverse_positive,
                    f(c.neg_inverse_min_entry),
                    matf(&c.neg_inverse)
                ));
            }
            if let Some(n) = &t.note {
                out.push_str(&format!("note: {n}\n"));
            }
            if let Some(v) = &t.violation {
                out.push_str(&format!("{v}\n"));
            }
        }
        Body::Theorem2(s) => {
            out.push_str(&format!("lambda0 = ||Ae||_e: {}\n", f(s.lambda0)));
            out.push_str(&format!(
                "cond (i) semigroup positive on t-grid: {}{}\n",
                s.cond_i_sampled.holds,
                match s.cond_i_sampled.first_failure {
                    Some(t) => format!(" (first failure t = {})", f(t)),
                    None => String::new(),
                }
            ));
            push_property(&mut out, "cond (ii) positive off-diagonal", &s.cond_ii);
            push_property(
                &mut out,
                "cond (iii) somewhere positive off-diagonal",
                &s.cond_iii,
            );
            out.push_str(&format!(
                "cond (iv) resolvent positive on lambda-grid {}: {}{}\n",
                vecf(&s.cond_iv.grid),
                s.cond_iv.holds,
                match s.cond_iv.first_failure {
                    Some(l) => format!(" (first failure lambda = {})", f(l)),
                    None => String::new(),
                }
            ));
            for p in &s.resolvent_perturbations {
                out.push_str(&format!(
                    "  lambda {} hit the spectrum; used {}\n",
                    f(p.requested),
                    f(p.used)
                ));
            }
            out.push_str("hille-yosida errors ||(I-(t/n)A)^-n - e^tA|| at t=1:\n");
            for p in &s.hy_convergence {
                out.push_str(&format!("  n = {:>3}: {}\n", p.n, f(p.error)));
            }
            if let Some(c) = s.contraction_check {
                out.push_str(&format!(
                    "contraction check sup_t ||e^(t(A-l0))e||_e: {}\n",
                    f(c)
                ));
            }
            out.push_str(&format!("agreement: {}\n", s.agreement));
            for v in &s.violations {
                out.push_str(&format!("{v}\n"));
            }
            out.push_str(&format!("note: {}\n", s.note));
        }
        Body::Norms(n) => {
            if let Some(v) = n.vector_norm {
                out.push_str(&format!("||x||_e: {}\n", f(v)));
            }
            if let Some(p) = &n.position {
                out.push_str(&format!("position of x: {p:?}\n"));
            }
            if let Some(l) = n.lambda0 {
                out.push_str(&format!("lambda0 = ||Ae||_e: {}\n", f(l)));
            }
            if let Some(i) = &n.identity {
                out.push_str(&format!(
                    "operator norm ||B||: {}\n||Be||_eps: {}\nagree: {} ({} extreme points)\n",
                    f(i.norm),
                    f(i.norm_of_be),
                    i.agree,
                    i.extreme_points
                ));
            }
            if let Some(note) = &n.identity_note {
                out.push_str(&format!("note: {note}\n"));
            }
        }
        Body::Fuzz(s) => {
            out.push_str(&format!(
                "generator: {:?}\ninstances: {}\npassed: {}\nfailed: {}\nunknown: {}\n",
                s.generator, s.instances, s.passed, s.failed, s.unknown
            ));
            for fail in &s.failures {
                out.push_str(&format!(
                    "instance {} (n = {}): {}\n  replay: {}\n",
                    fail.index,
                    fail.n,
                    fail.detail,
                    serde_json::to_string(&fail.instance).expect("instance serializes")
                ));
            }
            for v in &s.violations {
                out.push_str(&format!("{v}\n"));
            }
        }
        Body::Empty => {}
    }
    out
}
