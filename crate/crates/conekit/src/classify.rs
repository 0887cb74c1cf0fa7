//! Decides the three positivity properties of an operator relative to
//! simplicial cones:
//!
//! * somewhere positive: at every boundary point x some nonzero dual
//!   functional psi >= 0 has < psi, Ax > >= 0;
//! * positive off-diagonal (cross-positive / Metzler in coordinates);
//! * somewhere positive off-diagonal: the annihilating functional variant.
//!
//! All three reduce, in orthant coordinates, to finitely many entrywise
//! tests or LP feasibility questions. Strict inequalities such as
//! "Ax < 0 componentwise" are encoded as "<= -1", which is exact because
//! every condition here is positively homogeneous in x.

use serde::Serialize;

use crate::cone::{conjugate_operator, entries_nonneg, ConePosition, ConeSpec};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::lpkernel::{self, LinProgram, LpOutcome};
use crate::mat::Mat;

/// Three-valued verdict; `Unknown` only ever comes from guard caps, never
/// from numerical doubt.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::Holds => Some(true),
            Verdict::Fails => Some(false),
            Verdict::Unknown => None,
        }
    }
}

/// Checkable evidence attached to a verdict.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A boundary point whose image violates the property; `x` and `image`
    /// are in original coordinates, `margin` is measured in orthant
    /// coordinates after the "<= -1" normalization.
    BoundaryCounterexample {
        x: Vec<f64>,
        image: Vec<f64>,
        active_set: Vec<usize>,
        margin: f64,
    },
    /// Per-facet documentation for a true somewhere-positivity verdict: for
    /// facet `face`, `row` (when present) is a single coordinate functional
    /// that works uniformly on that facet's generators. The proof of the
    /// verdict is the facet LP infeasibilities, not this list.
    FunctionalFamily { faces: Vec<FaceFunctional> },
    /// Violating matrix entry for the off-diagonal test, with the extreme
    /// ray x = G e_col and dual functional phi = (row `row` of G^{-1}).
    EntryIndex {
        row: usize,
        col: usize,
        entry: f64,
        x: Vec<f64>,
        phi: Vec<f64>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceFunctional {
    pub face: usize,
    pub row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<f64>>,
}

/// Verdict plus margin plus witness for one property.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl PropertyResult {
    fn plain(verdict: Verdict, margin: Option<f64>) -> PropertyResult {
        PropertyResult {
            verdict,
            margin,
            witness: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

/// Aggregate classification of one operator.
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub somewhere_positive: PropertyResult,
    /// None for rectangular operators or distinct domain/codomain cones
    /// (the off-diagonal definitions need X = Y).
    pub positive_off_diagonal: Option<PropertyResult>,
    pub somewhere_positive_off_diagonal: Option<PropertyResult>,
    /// Necessary screen, evaluated on the orthant-coordinate matrix.
    pub column_condition: PropertyResult,
    /// Sufficient screen, evaluated on the orthant-coordinate matrix.
    pub deleted_column_condition: PropertyResult,
    /// True when the deleted-column verdict came from the empty single-column
    /// case and is vacuous.
    pub deleted_column_vacuous: bool,
}

fn snap_zeros(v: &mut [f64], tol: f64) {
    for x in v {
        if x.abs() <= tol {
            *x = 0.0;
        }
    }
}

/// Build the failure witness from an LP point in orthant coordinates,
/// re-validating it by direct evaluation before returning.
fn boundary_witness(
    a: &Mat,
    at: &Mat,
    cone_x: &ConeSpec,
    mut point: Vec<f64>,
    violated_rows: &[usize],
    cfg: &Config,
) -> Result<PropertyResult> {
    let snap_tol = cfg.tol_lp * crate::mat::vec_inf_norm(&point).max(1.0);
    snap_zeros(&mut point, snap_tol);
    let image_orth = at.matvec(&point);
    let margin = violated_rows
        .iter()
        .map(|&i| -image_orth[i])
        .fold(f64::INFINITY, f64::min);
    if margin < 0.5 {
        return Err(Error::Internal(format!(
            "counterexample margin {margin} below 0.5 after normalization"
        )));
    }
    let x = cone_x.from_orthant(&point)?;
    let active_set = match cone_x.boundary_position(&x, cfg)? {
        ConePosition::Boundary { active_set } => active_set,
        other => {
            return Err(Error::Internal(format!(
                "counterexample not on the cone boundary: {other:?}"
            )))
        }
    };
    let image = a.matvec(&x);
    Ok(PropertyResult {
        verdict: Verdict::Fails,
        margin: Some(margin),
        witness: Some(Witness::BoundaryCounterexample {
            x,
            image,
            active_set,
            margin,
        }),
    })
}

/// Definition check: A is somewhere positive iff no boundary point of the
/// domain cone has a strictly negative image against the whole dual cone of
/// the codomain. The negation is decided facet by facet: in orthant
/// coordinates, "< psi, Ax > < 0 for every nonzero psi >= 0" is exactly
/// "A~x < 0 componentwise", so each facet contributes one feasibility LP
/// { x >= 0, x_i = 0, A~x <= -1 }.
pub fn is_somewhere_positive(
    a: &Mat,
    cone_x: &ConeSpec,
    cone_y: &ConeSpec,
    cfg: &Config,
) -> Result<PropertyResult> {
    let at = conjugate_operator(a, cone_x, cone_y)?;
    let n = at.cols();
    let m = at.rows();
    if n > cfg.lp_max_vars {
        return Err(Error::LpTooLarge {
            vars: n,
            guard: cfg.lp_max_vars,
        });
    }
    let all_rows: Vec<usize> = (0..m).collect();
    for facet in 0..n {
        let mut lp = LinProgram::new(n);
        let mut pin = vec![0.0; n];
        pin[facet] = 1.0;
        lp.add_eq(pin, 0.0);
        for i in 0..m {
            lp.add_ge(at.row(i).iter().map(|v| -v).collect(), 1.0);
        }
        match lpkernel::solve(&lp, cfg)? {
            LpOutcome::Feasible { point } | LpOutcome::Optimal { point, .. } => {
                return boundary_witness(a, &at, cone_x, point, &all_rows, cfg);
            }
            LpOutcome::Infeasible => {}
            LpOutcome::Unbounded => {
                return Err(Error::Internal("feasibility LP reported unbounded".into()))
            }
        }
    }
    let scale = at.max_abs();
    let faces = (0..n)
        .map(|face| {
            let row = (0..m).find(|&k| (0..n).all(|j| j == face || at[(k, j)] >= -cfg.tol * scale));
            let psi = row.map(|k| cone_y.dual_row(k));
            FaceFunctional { face, row, psi }
        })
        .collect();
    Ok(PropertyResult {
        verdict: Verdict::Holds,
        margin: None,
        witness: Some(Witness::FunctionalFamily { faces }),
    })
}

/// Necessary condition on the orthant: every column has a nonnegative entry.
pub fn column_condition(a: &Mat, cfg: &Config) -> PropertyResult {
    let margin = (0..a.cols())
        .map(|j| {
            (0..a.rows())
                .map(|i| a[(i, j)])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .fold(f64::INFINITY, f64::min);
    let verdict = if margin >= -cfg.tol * a.max_abs() {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    PropertyResult::plain(verdict, Some(margin))
}

/// Sufficient condition on the orthant: deleting any one column leaves a
/// matrix with a strictly positive row. Deleting the only column of a
/// single-column matrix leaves an empty matrix whose rows are vacuously
/// positive; that case is flagged through the second return value.
pub fn deleted_column_condition(a: &Mat, _cfg: &Config) -> (PropertyResult, bool) {
    if a.cols() == 1 {
        return (PropertyResult::plain(Verdict::Holds, None), true);
    }
    let mut margin = f64::INFINITY;
    for j in 0..a.cols() {
        let reduced = a.without_col(j).expect("cols > 1");
        let best_row = (0..reduced.rows())
            .map(|i| reduced.row(i).iter().cloned().fold(f64::INFINITY, f64::min))
            .fold(f64::NEG_INFINITY, f64::max);
        margin = margin.min(best_row);
    }
    let verdict = if margin > 0.0 {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    (PropertyResult::plain(verdict, Some(margin)), false)
}

/// Definition 2 check. On a simplicial cone the extreme-ray /
/// extreme-functional pairs (x = G e_j, phi = row i of G^{-1}, i != j)
/// exhaust the annihilating pairs up to conic combinations, so the property
/// reduces to nonnegative off-diagonal entries of A~ = G^{-1} A G.
pub fn is_positive_off_diagonal(a: &Mat, cone: &ConeSpec, cfg: &Config) -> Result<PropertyResult> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let at = conjugate_operator(a, cone, cone)?;
    let n = at.rows();
    if n == 1 {
        return Ok(PropertyResult::plain(Verdict::Holds, None));
    }
    let mut min_entry = f64::INFINITY;
    let mut argmin = (0, 0);
    for i in 0..n {
        for j in 0..n {
            if i != j && at[(i, j)] < min_entry {
                min_entry = at[(i, j)];
                argmin = (i, j);
            }
        }
    }
    if min_entry >= -cfg.tol * at.max_abs() {
        return Ok(PropertyResult::plain(Verdict::Holds, Some(min_entry)));
    }
    let (i, j) = argmin;
    Ok(PropertyResult {
        verdict: Verdict::Fails,
        margin: Some(min_entry),
        witness: Some(Witness::EntryIndex {
            row: i,
            col: j,
            entry: min_entry,
            x: cone.generator_column(j),
            phi: cone.dual_row(i),
        }),
    })
}

/// Definition 3 check. A boundary point with exact zero set Z admits
/// annihilating functionals supported exactly on Z, so the property fails
/// iff for some nonempty Z the set
/// { x_i = 0 (i in Z), x_j >= 1 (j not in Z), (A~x)_i <= -1 (i in Z) }
/// is nonempty; both normalizations are exact by positive homogeneity.
/// Beyond `spod_max_dim` the 2^n - 1 sweep is not attempted and the verdict
/// is Unknown.
pub fn is_somewhere_positive_off_diagonal(
    a: &Mat,
    cone: &ConeSpec,
    cfg: &Config,
) -> Result<PropertyResult> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n > cfg.spod_max_dim {
        return Ok(PropertyResult::plain(Verdict::Unknown, None));
    }
    let at = conjugate_operator(a, cone, cone)?;
    for mask in 1u64..(1u64 << n) {
        let zero_set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let mut lp = LinProgram::new(n);
        for j in 0..n {
            if mask >> j & 1 == 0 {
                lp.set_lower_bound(j, Some(1.0));
            }
        }
        for &i in &zero_set {
            let mut pin = vec![0.0; n];
            pin[i] = 1.0;
            lp.add_eq(pin, 0.0);
            lp.add_ge(at.row(i).iter().map(|v| -v).collect(), 1.0);
        }
        match lpkernel::solve(&lp, cfg)? {
            LpOutcome::Feasible { point } | LpOutcome::Optimal { point, .. } => {
                return boundary_witness(a, &at, cone, point, &zero_set, cfg);
            }
            LpOutcome::Infeasible => {}
            LpOutcome::Unbounded => {
                return Err(Error::Internal("feasibility LP reported unbounded".into()))
            }
        }
    }
    Ok(PropertyResult::plain(Verdict::Holds, None))
}

/// A - lambda I.
pub fn shift(a: &Mat, lambda: f64) -> Result<Mat> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let mut out = a.clone();
    for i in 0..a.rows() {
        out[(i, i)] -= lambda;
    }
    Ok(out)
}

/// True iff B maps K_X into K_Y: on simplicial cones this is exactly
/// entrywise nonnegativity of G_Y^{-1} B G_X (B must send every extreme ray
/// of K_X into K_Y). The tolerance is relative to the largest entry so the
/// test is scale-free.
pub fn is_cone_positive(
    b: &Mat,
    cone_x: &ConeSpec,
    cone_y: &ConeSpec,
    cfg: &Config,
) -> Result<bool> {
    Ok(cone_positivity_margin(b, cone_x, cone_y, cfg)?.0)
}

/// Same test, also reporting the minimum entry of the conjugated matrix.
pub fn cone_positivity_margin(
    b: &Mat,
    cone_x: &ConeSpec,
    cone_y: &ConeSpec,
    cfg: &Config,
) -> Result<(bool, f64)> {
    let bt = conjugate_operator(b, cone_x, cone_y)?;
    Ok(entries_nonneg(&bt, cfg))
}

/// Run every classifier that applies to `a` between the given cones.
pub fn classify(
    a: &Mat,
    cone_x: &ConeSpec,
    cone_y: &ConeSpec,
    cfg: &Config,
) -> Result<Classification> {
    let at = conjugate_operator(a, cone_x, cone_y)?;
    let somewhere_positive = is_somewhere_positive(a, cone_x, cone_y, cfg)?;
    let column = column_condition(&at, cfg);
    let (deleted, vacuous) = deleted_column_condition(&at, cfg);
    let (pod, spod) = if a.is_square() && cone_x == cone_y {
        (
            Some(is_positive_off_diagonal(a, cone_x, cfg)?),
            Some(is_somewhere_positive_off_diagonal(a, cone_x, cfg)?),
        )
    } else {
        (None, None)
    };
    Ok(Classification {
        somewhere_positive,
        positive_off_diagonal: pod,
        somewhere_positive_off_diagonal: spod,
        column_condition: column,
        deleted_column_condition: deleted,
        deleted_column_vacuous: vacuous,
    })
}
