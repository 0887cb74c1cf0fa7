//! Inverse positivity from positive solvability: if A is somewhere positive,
//! z is quasi-interior, and Ax = -z has an order-unit solution e, then
//! Ax <= 0 forces x >= 0, Ker A = {0}, and (for square A) -A^{-1} >= 0.
//!
//! Besides the verifier this module carries the proof's path mechanism as an
//! executable object: the linear path x_t = (1-t)x + te from a claimed
//! counterexample x into the interior point e crosses the boundary at a
//! borderline value t_b, where a nonnegative functional with
//! < psi, A x_{t_b} > >= 0 contradicts
//! (1-t_b) < psi, Ax > - t_b < psi, z > < 0.

use serde::Serialize;

use crate::classify::{self, PropertyResult};
use crate::cone::{dual_pairing, is_quasi_interior, ConePosition, ConeSpec};
use crate::config::Config;
use crate::error::{check_dim, Error, Result};
use crate::lpkernel::{self, LinProgram, LpOutcome};
use crate::mat::{vec_add_scaled, vec_inf_norm, vec_scale, Mat};

/// Result of the borderline crossing search.
#[derive(Clone, Debug, Serialize)]
pub struct Borderline {
    pub t_b: f64,
    pub x_tb: Vec<f64>,
    pub active_set: Vec<usize>,
}

/// Closed-form borderline value: in orthant coordinates y = G^{-1}x,
/// f = G^{-1}e, the path leaves the complement of the cone at
/// t_b = max over { i : y_i < 0 } of y_i / (y_i - f_i).
///
/// Requires x strictly outside the cone and e interior; then t_b is in
/// (0, 1), x_t is outside the cone for t < t_b and inside for t >= t_b.
pub fn borderline(cone: &ConeSpec, x: &[f64], e: &[f64], cfg: &Config) -> Result<Borderline> {
    match cone.boundary_position(x, cfg)? {
        ConePosition::Outside => {}
        _ => {
            return Err(Error::Precondition(
                "borderline: x is already in the cone".into(),
            ))
        }
    }
    match cone.boundary_position(e, cfg)? {
        ConePosition::Interior => {}
        _ => {
            return Err(Error::NotInterior {
                what: "path target e",
            })
        }
    }
    let y = cone.to_orthant(x)?;
    let f = cone.to_orthant(e)?;
    let t_b = y
        .iter()
        .zip(&f)
        .filter(|(yi, _)| **yi < 0.0)
        .map(|(yi, fi)| yi / (yi - fi))
        .fold(0.0f64, f64::max);
    let y_tb = vec_add_scaled(&vec_scale(&y, 1.0 - t_b), &f, t_b);
    let tol = cfg.tol * vec_inf_norm(&y_tb).max(1.0);
    let active_set: Vec<usize> = y_tb
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() <= tol)
        .map(|(i, _)| i)
        .collect();
    let x_tb = cone.from_orthant(&y_tb)?;
    Ok(Borderline {
        t_b,
        x_tb,
        active_set,
    })
}

/// Bisection cross-check for `borderline`, tolerance `cfg.tol` on t, at most
/// 200 iterations. Kept for validation; the closed form is the primary path.
pub fn borderline_bisect(cone: &ConeSpec, x: &[f64], e: &[f64], cfg: &Config) -> Result<f64> {
    match cone.boundary_position(x, cfg)? {
        ConePosition::Outside => {}
        _ => {
            return Err(Error::Precondition(
                "borderline_bisect: x is already in the cone".into(),
            ))
        }
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..200 {
        if hi - lo <= cfg.tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let xt = vec_add_scaled(&vec_scale(x, 1.0 - mid), e, mid);
        if cone.contains(&xt, cfg)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Hypothesis side of the verification report.
#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Hypotheses {
    pub somewhere_positive: PropertyResult,
    /// Solution of Ae = -z, when the system is solvable.
    pub e: Option<Vec<f64>>,
    pub z: Vec<f64>,
    pub e_interior: bool,
    pub z_quasi_interior: bool,
    /// ||Ae + z||_inf, None when no solution was obtained.
    pub residual: Option<f64>,
    pub all_hold: bool,
}

/// Conclusion side, only asserted when every hypothesis flag holds.
#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Conclusions {
    pub kernel_trivial: bool,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub inverse_exists: bool,
    pub neg_inverse_positive: bool,
    pub neg_inverse_min_entry: f64,
    pub neg_inverse: Mat,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Report {
    pub hypotheses: Theorem1Hypotheses,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conclusions: Option<Theorem1Conclusions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Set when hypotheses verified but a conclusion check failed; this is a
    /// defect-or-counterexample event, never a routine verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

impl Theorem1Report {
    pub fn is_violation(&self) -> bool {
        self.violation.is_some()
    }
}

/// Solve Ae = -z: LU for square systems, least squares through the normal
/// equations otherwise (rectangular inputs only get hypothesis checks).
fn solve_for_unit(a: &Mat, z: &[f64]) -> Option<Vec<f64>> {
    let neg_z: Vec<f64> = z.iter().map(|v| -v).collect();
    if a.is_square() {
        return a.lu().ok().map(|lu| lu.solve(&neg_z));
    }
    if a.rows() > a.cols() {
        let ata = a.transpose().matmul(a);
        let atz = a.transpose().matvec(&neg_z);
        ata.lu().ok().map(|lu| lu.solve(&atz))
    } else {
        let aat = a.matmul(&a.transpose());
        aat.lu()
            .ok()
            .map(|lu| a.transpose().matvec(&lu.solve(&neg_z)))
    }
}

/// Verify the theorem on one instance: check the hypotheses (somewhere
/// positivity, quasi-interior z, order-unit solution of Ae = -z), and when
/// they all hold assert the conclusions (trivial kernel by singular values,
/// invertibility, -A^{-1} cone-positive). A conclusion failing under
/// verified hypotheses is reported as a violation.
pub fn theorem1_verify(
    a: &Mat,
    cone_x: &ConeSpec,
    cone_y: &ConeSpec,
    z: &[f64],
    cfg: &Config,
) -> Result<Theorem1Report> {
    check_dim("theorem1_verify domain", cone_x.dim(), a.cols())?;
    check_dim("theorem1_verify codomain", cone_y.dim(), a.rows())?;
    check_dim("theorem1_verify z", a.rows(), z.len())?;

    let z_quasi_interior = is_quasi_interior(cone_y, z, cfg)?;
    let somewhere_positive = classify::is_somewhere_positive(a, cone_x, cone_y, cfg)?;

    let e = solve_for_unit(a, z);
    let (residual, residual_ok, e_interior) = match &e {
        Some(e) => {
            let r = vec_inf_norm(&vec_add_scaled(&a.matvec(e), z, 1.0));
            let scale = vec_inf_norm(z).max(a.norm_inf() * vec_inf_norm(e)).max(1.0);
            let interior = matches!(cone_x.boundary_position(e, cfg)?, ConePosition::Interior);
            (Some(r), r <= cfg.tol_residual * scale, interior)
        }
        None => (None, false, false),
    };
    let all_hold = z_quasi_interior && somewhere_positive.holds() && residual_ok && e_interior;

    let hypotheses = Theorem1Hypotheses {
        somewhere_positive,
        e: e.clone(),
        z: z.to_vec(),
        e_interior,
        z_quasi_interior,
        residual,
        all_hold,
    };

    if !all_hold {
        return Ok(Theorem1Report {
            hypotheses,
            conclusions: None,
            note: Some("hypotheses unmet; no conclusion asserted".into()),
            violation: None,
        });
    }
    if !a.is_square() {
        return Ok(Theorem1Report {
            hypotheses,
            conclusions: None,
            note: Some("hypotheses hold; inverse conclusions require a square matrix".into()),
            violation: None,
        });
    }

    let sv = a.singular_values();
    let (sigma_max, sigma_min) = (sv[0], sv[sv.len() - 1]);
    let kernel_trivial = sigma_min > cfg.tol_rank * sigma_max;
    let mut violation = None;
    let conclusions = if kernel_trivial {
        let inv = a.lu()?.inverse();
        let neg_inverse = inv.scale(-1.0);
        let (positive, min_entry) =
            classify::cone_positivity_margin(&neg_inverse, cone_y, cone_x, cfg)?;
        if !positive {
            violation = Some(format!(
                "THEOREM VIOLATION: hypotheses hold but -A^{{-1}} has entry {min_entry:.3e} below tolerance"
            ));
        }
        Theorem1Conclusions {
            kernel_trivial,
            sigma_min,
            sigma_max,
            inverse_exists: true,
            neg_inverse_positive: positive,
            neg_inverse_min_entry: min_entry,
            neg_inverse,
        }
    } else {
        violation = Some(format!(
            "THEOREM VIOLATION: hypotheses hold but kernel is nontrivial (sigma_min = {sigma_min:.3e})"
        ));
        Theorem1Conclusions {
            kernel_trivial,
            sigma_min,
            sigma_max,
            inverse_exists: false,
            neg_inverse_positive: false,
            neg_inverse_min_entry: f64::NAN,
            neg_inverse: Mat::zeros(a.rows(), a.cols()),
        }
    };
    Ok(Theorem1Report {
        hypotheses,
        conclusions: Some(conclusions),
        note: None,
        violation,
    })
}

/// The executable contradiction of the proof.
#[derive(Clone, Debug, Serialize)]
pub struct PathCertificate {
    pub x: Vec<f64>,
    pub e: Vec<f64>,
    pub t_b: f64,
    pub x_tb: Vec<f64>,
    pub active_set: Vec<usize>,
    pub psi: Vec<f64>,
    /// < psi, A x_{t_b} >, nonnegative by the choice of psi.
    pub pairing_value: f64,
    /// (1 - t_b) < psi, Ax > - t_b < psi, z >, negative under the
    /// preconditions; equal to `pairing_value` by bilinearity, so the two
    /// signs together certify that the claimed inputs are inconsistent.
    pub display_rhs: f64,
}

/// Outcome of running the path argument against a claimed counterexample.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Refutation {
    Contradiction(PathCertificate),
    /// No admissible psi at the borderline point: A was not somewhere
    /// positive there, certified by the strictly negative image.
    NotSomewherePositiveAt {
        x_tb: Vec<f64>,
        image: Vec<f64>,
    },
}

/// Run the proof mechanism on a claimed inverse-positivity counterexample
/// (Ax <= 0 with x outside the cone), given e with Ae = -z quasi-interior.
///
/// Preconditions are verified strictly and failures are errors, since the
/// argument is only meaningful for inputs that actually satisfy them.
pub fn refute_counterexample(
    a: &Mat,
    cone: &ConeSpec,
    e: &[f64],
    x: &[f64],
    cfg: &Config,
) -> Result<Refutation> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    check_dim("refute_counterexample e", cone.dim(), e.len())?;
    check_dim("refute_counterexample x", cone.dim(), x.len())?;

    let z: Vec<f64> = a.matvec(e).iter().map(|v| -v).collect();
    if !is_quasi_interior(cone, &z, cfg)? {
        return Err(Error::Precondition("z = -Ae is not quasi-interior".into()));
    }
    match cone.boundary_position(e, cfg)? {
        ConePosition::Interior => {}
        _ => return Err(Error::NotInterior { what: "e" }),
    }
    let ax = a.matvec(x);
    let neg_ax: Vec<f64> = ax.iter().map(|v| -v).collect();
    if !cone.contains(&neg_ax, cfg)? {
        return Err(Error::Precondition("Ax <= 0 does not hold".into()));
    }
    match cone.boundary_position(x, cfg)? {
        ConePosition::Outside => {}
        _ => {
            return Err(Error::Precondition(
                "x is in the cone; nothing to refute".into(),
            ))
        }
    }

    let b = borderline(cone, x, e, cfg)?;
    let ax_tb = a.matvec(&b.x_tb);
    let v = cone.to_orthant(&ax_tb)?;

    // psi search over the dual cone: maximize < psi, A x_tb > on the
    // simplex { psi >= 0, sum psi = 1 } in orthant dual coordinates.
    let n = cone.dim();
    let mut lp = LinProgram::new(n).with_objective(v.clone());
    lp.add_eq(vec![1.0; n], 1.0);
    let psi_y = match lpkernel::solve(&lp, cfg)? {
        LpOutcome::Optimal { point, value } => {
            if value >= -cfg.tol * vec_inf_norm(&v).max(1.0) {
                Some(point)
            } else {
                None
            }
        }
        _ => None,
    };
    let Some(psi_y) = psi_y else {
        return Ok(Refutation::NotSomewherePositiveAt {
            x_tb: b.x_tb,
            image: ax_tb,
        });
    };
    let psi = cone.functional_from_orthant(&psi_y)?;
    let pairing_value = dual_pairing(&psi, &ax_tb)?;
    let display_rhs = (1.0 - b.t_b) * dual_pairing(&psi, &ax)? - b.t_b * dual_pairing(&psi, &z)?;
    Ok(Refutation::Contradiction(PathCertificate {
        x: x.to_vec(),
        e: e.to_vec(),
        t_b: b.t_b,
        x_tb: b.x_tb,
        active_set: b.active_set,
        psi,
        pairing_value,
        display_rhs,
    }))
}

/// LP emptiness check used by the test harness: is there any x with
/// Ax <= 0 and x_i <= -1 for the given coordinate? Sweeping the coordinate
/// over 0..n decides whether {x : Ax <= 0} escapes the cone at all
/// (up to the exact "<= -1" normalization of x not in K).
pub fn counterexample_region_empty(a: &Mat, cone: &ConeSpec, cfg: &Config) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let at = crate::cone::conjugate_operator(a, cone, cone)?;
    let n = at.rows();
    for i in 0..n {
        let mut lp = LinProgram::new(n);
        for j in 0..n {
            lp.set_lower_bound(j, None);
        }
        for r in 0..n {
            lp.add_le(at.row(r).to_vec(), 0.0);
        }
        let mut pin = vec![0.0; n];
        pin[i] = 1.0;
        lp.add_le(pin, -1.0);
        match lpkernel::solve(&lp, cfg)? {
            LpOutcome::Infeasible => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}
