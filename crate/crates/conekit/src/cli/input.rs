//! The self-describing JSON input document. One format serves humans,
//! tests, and fuzz replay; unknown fields are rejected rather than ignored,
//! and NaN/infinity never parse (serde_json has no literal for them).

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CliError, CommonOpts};
use crate::cone::ConeSpec;
use crate::config::Config;
use crate::mat::Mat;

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    /// Domain cone; defaults to the orthant of matching dimension.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeDoc>,
    /// Codomain cone for rectangular operators; defaults to the orthant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone_y: Option<ConeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orthant: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_sing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_lp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_rank: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_expm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_rel: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_residual: Option<f64>,
}

pub fn load_input(path: &Path) -> Result<InputDoc, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        detail: format!("line {}, column {}: {}", e.line(), e.column(), e),
    })
}

impl InputDoc {
    pub fn matrix_opt(&self) -> Result<Option<Mat>, CliError> {
        match &self.matrix {
            None => Ok(None),
            Some(rows) => Mat::from_rows(rows).map(Some).map_err(|e| CliError::Parse {
                path: "matrix".into(),
                detail: e.to_string(),
            }),
        }
    }

    pub fn require_matrix(&self) -> Result<Mat, CliError> {
        self.matrix_opt()?
            .ok_or_else(|| CliError::Usage("input document has no \"matrix\" field".into()))
    }

    /// Tolerance overrides folded onto the defaults.
    pub fn config(&self) -> Config {
        let mut cfg = Config::default();
        if let Some(t) = &self.tolerances {
            if let Some(v) = t.tol {
                cfg.tol = v;
            }
            if let Some(v) = t.tol_sing {
                cfg.tol_sing = v;
            }
            if let Some(v) = t.tol_lp {
                cfg.tol_lp = v;
            }
            if let Some(v) = t.tol_rank {
                cfg.tol_rank = v;
            }
            if let Some(v) = t.tol_expm {
                cfg.tol_expm = v;
            }
            if let Some(v) = t.tol_rel {
                cfg.tol_rel = v;
            }
            if let Some(v) = t.tol_residual {
                cfg.tol_residual = v;
            }
        }
        cfg
    }

    /// Domain and codomain cones for the given matrix, honoring the CLI
    /// overrides (--cone / --orthant apply to the domain cone).
    pub fn cones(
        &self,
        a: &Mat,
        common: &CommonOpts,
        cfg: &Config,
    ) -> Result<(ConeSpec, ConeSpec), CliError> {
        let cone_x = self.domain_cone(a.cols(), common, cfg)?;
        let cone_y = match &self.cone_y {
            Some(doc) => build_cone(doc, a.rows(), cfg)?,
            None => {
                if a.is_square() && cone_x.dim() == a.rows() {
                    cone_x.clone()
                } else {
                    ConeSpec::orthant(a.rows()).map_err(CliError::Math)?
                }
            }
        };
        if cone_x.dim() != a.cols() {
            return Err(CliError::Usage(format!(
                "cone dimension {} does not match matrix columns {}",
                cone_x.dim(),
                a.cols()
            )));
        }
        if cone_y.dim() != a.rows() {
            return Err(CliError::Usage(format!(
                "codomain cone dimension {} does not match matrix rows {}",
                cone_y.dim(),
                a.rows()
            )));
        }
        Ok((cone_x, cone_y))
    }

    fn domain_cone(
        &self,
        dim: usize,
        common: &CommonOpts,
        cfg: &Config,
    ) -> Result<ConeSpec, CliError> {
        self.cone_for_dim(dim, common, cfg)
    }

    pub fn cone_for_dim(
        &self,
        dim: usize,
        common: &CommonOpts,
        cfg: &Config,
    ) -> Result<ConeSpec, CliError> {
        if let Some(n) = common.orthant {
            return ConeSpec::orthant(n).map_err(|e| CliError::Usage(e.to_string()));
        }
        if let Some(path) = &common.cone {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                detail: e.to_string(),
            })?;
            let doc: ConeDoc = serde_json::from_str(&text).map_err(|e| CliError::Parse {
                path: path.display().to_string(),
                detail: format!("line {}, column {}: {}", e.line(), e.column(), e),
            })?;
            return build_cone(&doc, dim, cfg);
        }
        match &self.cone {
            Some(doc) => build_cone(doc, dim, cfg),
            None => ConeSpec::orthant(dim).map_err(|e| CliError::Usage(e.to_string())),
        }
    }
}

fn build_cone(doc: &ConeDoc, default_dim: usize, cfg: &Config) -> Result<ConeSpec, CliError> {
    match (&doc.orthant, &doc.generators) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "cone must give either \"orthant\" or \"generators\", not both".into(),
        )),
        (Some(n), None) => ConeSpec::orthant(*n).map_err(|e| CliError::Usage(e.to_string())),
        (None, Some(rows)) => {
            let g = Mat::from_rows(rows).map_err(|e| CliError::Parse {
                path: "cone.generators".into(),
                detail: e.to_string(),
            })?;
            ConeSpec::simplicial(g, cfg).map_err(CliError::Math)
        }
        (None, None) => ConeSpec::orthant(default_dim).map_err(|e| CliError::Usage(e.to_string())),
    }
}
