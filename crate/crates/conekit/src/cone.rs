//! Ordered vector spaces at matrix scale: the nonnegative orthant and
//! simplicial cones G * R^n_+ for invertible G.
//!
//! Every membership or boundary question is answered in orthant coordinates
//! y = G^{-1} x, which makes the face structure finite and exact. Dual-cone
//! questions transform contravariantly (psi = G^{-T} psi_orthant), so the
//! orthant is always the working chart.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::config::Config;
use crate::error::{check_dim, check_finite_slice, Error, Result};
use crate::mat::{dot, vec_inf_norm, Mat};

/// Cone representation.
#[derive(Clone, Debug, PartialEq)]
pub enum ConeKind {
    Orthant,
    Simplicial {
        generators: Mat,
        inverse: Mat,
        condition: f64,
    },
}

/// A closed proper cone with non-empty interior in R^n.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeSpec {
    dim: usize,
    kind: ConeKind,
}

impl ConeSpec {
    pub fn orthant(dim: usize) -> Result<ConeSpec> {
        if dim == 0 {
            return Err(Error::Empty {
                context: "ConeSpec::orthant",
            });
        }
        Ok(ConeSpec {
            dim,
            kind: ConeKind::Orthant,
        })
    }

    /// Cone generated by the columns of `g`; rejected when `g` is
    /// numerically singular at `tol_sing`.
    pub fn simplicial(g: Mat, cfg: &Config) -> Result<ConeSpec> {
        if !g.is_square() {
            return Err(Error::NotSquare {
                rows: g.rows(),
                cols: g.cols(),
            });
        }
        let sv = g.singular_values();
        let (smax, smin) = (sv[0], sv[sv.len() - 1]);
        if smin <= cfg.tol_sing * smax {
            return Err(Error::SingularGenerators {
                ratio: if smax > 0.0 { smin / smax } else { 0.0 },
            });
        }
        let inverse = g.lu()?.inverse();
        let dim = g.rows();
        Ok(ConeSpec {
            dim,
            kind: ConeKind::Simplicial {
                generators: g,
                inverse,
                condition: smax / smin,
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    pub fn is_orthant(&self) -> bool {
        matches!(self.kind, ConeKind::Orthant)
    }

    /// Condition number of the generator matrix (1 for the orthant).
    pub fn condition(&self) -> f64 {
        match &self.kind {
            ConeKind::Orthant => 1.0,
            ConeKind::Simplicial { condition, .. } => *condition,
        }
    }

    /// y = G^{-1} x.
    pub fn to_orthant(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim("to_orthant", self.dim, x.len())?;
        check_finite_slice("to_orthant", x)?;
        Ok(match &self.kind {
            ConeKind::Orthant => x.to_vec(),
            ConeKind::Simplicial { inverse, .. } => inverse.matvec(x),
        })
    }

    /// x = G y.
    pub fn from_orthant(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_dim("from_orthant", self.dim, y.len())?;
        Ok(match &self.kind {
            ConeKind::Orthant => y.to_vec(),
            ConeKind::Simplicial { generators, .. } => generators.matvec(y),
        })
    }

    /// Column `j` of G, i.e. the j-th extreme ray.
    pub fn generator_column(&self, j: usize) -> Vec<f64> {
        match &self.kind {
            ConeKind::Orthant => {
                let mut e = vec![0.0; self.dim];
                e[j] = 1.0;
                e
            }
            ConeKind::Simplicial { generators, .. } => generators.col(j),
        }
    }

    /// Row `i` of G^{-1}, i.e. the i-th extreme dual functional in original
    /// coordinates.
    pub fn dual_row(&self, i: usize) -> Vec<f64> {
        match &self.kind {
            ConeKind::Orthant => {
                let mut e = vec![0.0; self.dim];
                e[i] = 1.0;
                e
            }
            ConeKind::Simplicial { inverse, .. } => inverse.row(i).to_vec(),
        }
    }

    /// Pull an orthant-coordinate dual functional back: psi = G^{-T} psi_y.
    pub fn functional_from_orthant(&self, psi_y: &[f64]) -> Result<Vec<f64>> {
        check_dim("functional_from_orthant", self.dim, psi_y.len())?;
        Ok(match &self.kind {
            ConeKind::Orthant => psi_y.to_vec(),
            ConeKind::Simplicial { inverse, .. } => inverse.transpose().matvec(psi_y),
        })
    }

    pub fn contains(&self, x: &[f64], cfg: &Config) -> Result<bool> {
        Ok(matches!(
            self.boundary_position(x, cfg)?,
            ConePosition::Interior | ConePosition::Boundary { .. }
        ))
    }

    /// Classify `x` against the interior, boundary, and complement of the
    /// cone, with the active facet set on the boundary.
    pub fn boundary_position(&self, x: &[f64], cfg: &Config) -> Result<ConePosition> {
        let y = self.to_orthant(x)?;
        let tol = cfg.tol * vec_inf_norm(&y).max(1.0);
        if y.iter().any(|&v| v < -tol) {
            return Ok(ConePosition::Outside);
        }
        let active_set: Vec<usize> = y
            .iter()
            .enumerate()
            .filter(|(_, &v)| v.abs() <= tol)
            .map(|(i, _)| i)
            .collect();
        if active_set.is_empty() {
            Ok(ConePosition::Interior)
        } else {
            Ok(ConePosition::Boundary { active_set })
        }
    }
}

impl Serialize for ConeSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.kind {
            ConeKind::Orthant => {
                let mut s = serializer.serialize_struct("ConeSpec", 1)?;
                s.serialize_field("orthant", &self.dim)?;
                s.end()
            }
            ConeKind::Simplicial {
                generators,
                condition,
                ..
            } => {
                let mut s = serializer.serialize_struct("ConeSpec", 2)?;
                s.serialize_field("generators", generators)?;
                s.serialize_field("condition", condition)?;
                s.end()
            }
        }
    }
}

/// Where a point sits relative to the cone, 0-indexed facets.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "position", rename_all = "snake_case")]
pub enum ConePosition {
    Interior,
    Boundary { active_set: Vec<usize> },
    Outside,
}

/// An interior point of a cone, the unit of the order-unit norm.
#[derive(Clone, Debug, Serialize)]
pub struct OrderUnit {
    e: Vec<f64>,
}

impl OrderUnit {
    pub fn new(cone: &ConeSpec, e: Vec<f64>, cfg: &Config) -> Result<OrderUnit> {
        match cone.boundary_position(&e, cfg)? {
            ConePosition::Interior => Ok(OrderUnit { e }),
            _ => Err(Error::NotInterior { what: "order unit" }),
        }
    }

    /// The canonical unit G * (1,...,1): the all-ones vector in orthant
    /// coordinates.
    pub fn canonical(cone: &ConeSpec, cfg: &Config) -> Result<OrderUnit> {
        let ones = vec![1.0; cone.dim()];
        let e = cone.from_orthant(&ones)?;
        OrderUnit::new(cone, e, cfg)
    }

    pub fn vector(&self) -> &[f64] {
        &self.e
    }
}

/// ||x||_e = inf { l > 0 : -l e <= x <= l e } = max_i |y_i| / f_i in orthant
/// coordinates y = G^{-1} x, f = G^{-1} e.
pub fn order_unit_norm(cone: &ConeSpec, unit: &OrderUnit, x: &[f64], cfg: &Config) -> Result<f64> {
    match cone.boundary_position(unit.vector(), cfg)? {
        ConePosition::Interior => {}
        _ => return Err(Error::NotInterior { what: "order unit" }),
    }
    let f = cone.to_orthant(unit.vector())?;
    let y = cone.to_orthant(x)?;
    Ok(y.iter()
        .zip(&f)
        .map(|(yi, fi)| yi.abs() / fi)
        .fold(0.0, f64::max))
}

/// Quasi-interior elements coincide with interior points here: the cone is
/// closed, proper, and solid, so the dual-pairing condition < phi, z > > 0
/// for all nonzero dual phi picks out exactly int K.
pub fn is_quasi_interior(cone: &ConeSpec, z: &[f64], cfg: &Config) -> Result<bool> {
    Ok(matches!(
        cone.boundary_position(z, cfg)?,
        ConePosition::Interior
    ))
}

/// Standard pairing < phi, x > = sum_i phi_i x_i.
pub fn dual_pairing(phi: &[f64], x: &[f64]) -> Result<f64> {
    check_dim("dual_pairing", phi.len(), x.len())?;
    Ok(dot(phi, x))
}

/// Conjugate an operator A : (R^n, K_X) -> (R^m, K_Y) into orthant
/// coordinates: A~ = G_Y^{-1} A G_X.
pub fn conjugate_operator(a: &Mat, cone_x: &ConeSpec, cone_y: &ConeSpec) -> Result<Mat> {
    check_dim("conjugate_operator domain", cone_x.dim(), a.cols())?;
    check_dim("conjugate_operator codomain", cone_y.dim(), a.rows())?;
    let right = match cone_x.kind() {
        ConeKind::Orthant => a.clone(),
        ConeKind::Simplicial { generators, .. } => a.matmul(generators),
    };
    Ok(match cone_y.kind() {
        ConeKind::Orthant => right,
        ConeKind::Simplicial { inverse, .. } => inverse.matmul(&right),
    })
}

/// Entrywise nonnegativity at a scale-relative tolerance. Returns the raw
/// minimum entry as the margin.
pub(crate) fn entries_nonneg(m: &Mat, cfg: &Config) -> (bool, f64) {
    let margin = m.min_entry();
    (margin >= -cfg.tol * m.max_abs(), margin)
}

/// Result of the operator-norm identity check ||B|| = ||Be||_eps for a
/// cone-positive B between order unit spaces.
#[derive(Clone, Debug, Serialize)]
pub struct NormIdentity {
    pub norm: f64,
    pub norm_of_be: f64,
    pub agree: bool,
    pub extreme_points: usize,
}

/// Computes ||B|| = sup_{||x||_e <= 1} ||Bx||_eps by enumerating the 2^n
/// extreme points of the order interval [-e, e] (the unit ball), and
/// compares it with ||Be||_eps.
///
/// The identity is only claimed for cone-positive B; anything else is
/// rejected up front.
pub fn operator_norm_identity_check(
    cone_x: &ConeSpec,
    e: &OrderUnit,
    cone_y: &ConeSpec,
    eps: &OrderUnit,
    b: &Mat,
    cfg: &Config,
) -> Result<NormIdentity> {
    let n = cone_x.dim();
    if n > cfg.norm_identity_max_dim {
        return Err(Error::GuardExceeded {
            context: "operator_norm_identity_check",
            dim: n,
            guard: cfg.norm_identity_max_dim,
        });
    }
    let bt = conjugate_operator(b, cone_x, cone_y)?;
    if !entries_nonneg(&bt, cfg).0 {
        return Err(Error::NotConePositive);
    }
    let f = cone_x.to_orthant(e.vector())?;
    let mut norm: f64 = 0.0;
    let count = 1usize << n;
    for mask in 0..count {
        let y: Vec<f64> = (0..n)
            .map(|i| if mask >> i & 1 == 1 { f[i] } else { -f[i] })
            .collect();
        let x = cone_x.from_orthant(&y)?;
        let bx = b.matvec(&x);
        norm = norm.max(order_unit_norm(cone_y, eps, &bx, cfg)?);
    }
    let be = b.matvec(e.vector());
    let norm_of_be = order_unit_norm(cone_y, eps, &be, cfg)?;
    let agree = (norm - norm_of_be).abs() <= cfg.tol_rel * norm.max(f64::MIN_POSITIVE);
    Ok(NormIdentity {
        norm,
        norm_of_be,
        agree,
        extreme_points: count,
    })
}
