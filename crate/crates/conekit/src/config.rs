use serde::{Deserialize, Serialize};

/// Tolerances and guards, threaded explicitly through every operation.
///
/// Nothing in the crate reads ambient state; a `Config` value is the only
/// source of numeric thresholds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Membership / boundary / verdict tolerance (the global tau).
    pub tol: f64,
    /// Relative singularity threshold for simplicial generator matrices:
    /// rejected when sigma_min <= tol_sing * sigma_max.
    pub tol_sing: f64,
    /// Residual tolerance for LP constraint satisfaction.
    pub tol_lp: f64,
    /// Relative rank threshold: kernel is trivial iff sigma_min > tol_rank * sigma_max.
    pub tol_rank: f64,
    /// Accuracy target for the matrix exponential.
    pub tol_expm: f64,
    /// Relative tolerance for the operator-norm identity agreement.
    pub tol_rel: f64,
    /// Residual tolerance for linear-system solutions (e.g. Ae = -z).
    pub tol_residual: f64,
    /// Dimension cap for the 2^n - 1 face sweep; beyond it the verdict is Unknown.
    pub spod_max_dim: usize,
    /// Dimension cap for the 2^n extreme-point enumeration in the norm identity.
    pub norm_identity_max_dim: usize,
    /// Variable-count guard for the dense simplex.
    pub lp_max_vars: usize,
    /// Overflow guard on ||tA|| for the matrix exponential.
    pub expm_max_norm: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: 1e-9,
            tol_sing: 1e-12,
            tol_lp: 1e-8,
            tol_rank: 1e-10,
            tol_expm: 1e-10,
            tol_rel: 1e-9,
            tol_residual: 1e-8,
            spod_max_dim: 16,
            norm_identity_max_dim: 20,
            lp_max_vars: 64,
            expm_max_norm: 600.0,
        }
    }
}
