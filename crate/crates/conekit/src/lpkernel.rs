//! Self-contained dense linear-programming kernel.
//!
//! Two-phase simplex with Bland's anticycling rule on an explicit tableau.
//! Problem sizes here are tiny (the guard is 64 variables), so determinism
//! and auditability win over speed: reduced costs are recomputed from
//! scratch every pivot and no factorization is reused.
//!
//! Strict inequalities never appear in a `LinProgram`; callers encode them
//! as ">= 1" / "<= -1" rows, which is exact for the positively homogeneous
//! cone conditions this crate decides.

use crate::config::Config;
use crate::error::{check_finite_slice, Error, Result};
use crate::mat::dot;

/// A dense LP in the form: maximize `objective . x` subject to equality and
/// `>=` rows plus per-variable lower bounds (`None` = unbounded below).
#[derive(Clone, Debug)]
pub struct LinProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub equalities: Vec<(Vec<f64>, f64)>,
    pub inequalities_ge: Vec<(Vec<f64>, f64)>,
    pub lower_bounds: Vec<Option<f64>>,
}

impl LinProgram {
    /// Fresh program with zero objective and all variables bounded below by 0.
    pub fn new(num_vars: usize) -> LinProgram {
        LinProgram {
            num_vars,
            objective: vec![0.0; num_vars],
            equalities: Vec::new(),
            inequalities_ge: Vec::new(),
            lower_bounds: vec![Some(0.0); num_vars],
        }
    }

    pub fn with_objective(mut self, c: Vec<f64>) -> LinProgram {
        self.objective = c;
        self
    }

    pub fn add_eq(&mut self, row: Vec<f64>, rhs: f64) {
        self.equalities.push((row, rhs));
    }

    pub fn add_ge(&mut self, row: Vec<f64>, rhs: f64) {
        self.inequalities_ge.push((row, rhs));
    }

    pub fn add_le(&mut self, row: Vec<f64>, rhs: f64) {
        self.inequalities_ge
            .push((row.iter().map(|v| -v).collect(), -rhs));
    }

    pub fn set_lower_bound(&mut self, var: usize, bound: Option<f64>) {
        self.lower_bounds[var] = bound;
    }

    fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars || self.lower_bounds.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                context: "LinProgram",
                expected: self.num_vars,
                got: self.objective.len(),
            });
        }
        check_finite_slice("LinProgram objective", &self.objective)?;
        for (row, rhs) in self.equalities.iter().chain(&self.inequalities_ge) {
            if row.len() != self.num_vars {
                return Err(Error::DimensionMismatch {
                    context: "LinProgram row",
                    expected: self.num_vars,
                    got: row.len(),
                });
            }
            check_finite_slice("LinProgram row", row)?;
            if !rhs.is_finite() {
                return Err(Error::NonFinite {
                    context: "LinProgram rhs",
                });
            }
        }
        Ok(())
    }
}

/// Solver result. Any returned point has been re-validated against the
/// original constraints by direct substitution.
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { point: Vec<f64>, value: f64 },
    Feasible { point: Vec<f64> },
    Infeasible,
    Unbounded,
}

/// True iff `x` satisfies every constraint of `p` within `tol_lp`.
///
/// This is the re-check applied to every witness the crate ever emits.
pub fn certify_feasible_point(p: &LinProgram, x: &[f64], cfg: &Config) -> bool {
    if x.len() != p.num_vars || x.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let tol = cfg.tol_lp;
    for (row, rhs) in &p.equalities {
        if (dot(row, x) - rhs).abs() > tol * rhs.abs().max(1.0) {
            return false;
        }
    }
    for (row, rhs) in &p.inequalities_ge {
        if dot(row, x) < rhs - tol * rhs.abs().max(1.0) {
            return false;
        }
    }
    for (j, lb) in p.lower_bounds.iter().enumerate() {
        if let Some(l) = lb {
            if x[j] < l - tol {
                return false;
            }
        }
    }
    true
}

/// How each original variable maps into the standard form.
#[derive(Clone, Copy)]
enum VarMap {
    Shifted { col: usize, offset: f64 },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    m: usize,
    n: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
}

enum PivotEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c];
        for v in &mut self.rows[r] {
            *v /= piv;
        }
        self.rhs[r] /= piv;
        self.rows[r][c] = 1.0;
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.rows[i][c];
            if f == 0.0 {
                continue;
            }
            let (head, tail) = self.rows.split_at_mut(r.max(i));
            let (ri, rr) = if i < r {
                (&mut head[i], &tail[0])
            } else {
                (&mut tail[0], &head[r])
            };
            for j in 0..self.n {
                ri[j] -= f * rr[j];
            }
            ri[c] = 0.0;
            self.rhs[i] -= f * self.rhs[r];
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, c: &[f64]) -> Vec<f64> {
        let mut rc = c.to_vec();
        for i in 0..self.m {
            let cb = c[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            for j in 0..self.n {
                rc[j] -= cb * self.rows[i][j];
            }
        }
        rc
    }

    fn objective_value(&self, c: &[f64]) -> f64 {
        self.basis
            .iter()
            .zip(&self.rhs)
            .map(|(&b, &v)| c[b] * v)
            .sum()
    }

    fn solution(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs[i];
        }
        x
    }

    /// Bland pivoting: enter the lowest-index improving column, leave the
    /// lowest-index basic variable among minimal ratios.
    fn optimize(&mut self, c: &[f64], max_col: usize, cap: usize) -> Result<PivotEnd> {
        let mut iters = 0usize;
        loop {
            let rc = self.reduced_costs(c);
            let entering = (0..max_col).find(|&j| !self.basis.contains(&j) && rc[j] > 1e-9);
            let Some(e) = entering else {
                return Ok(PivotEnd::Optimal);
            };
            let mut best: Option<(f64, usize, usize)> = None;
            for i in 0..self.m {
                let a = self.rows[i][e];
                if a <= 1e-11 {
                    continue;
                }
                let ratio = self.rhs[i] / a;
                best = match best {
                    None => Some((ratio, self.basis[i], i)),
                    Some((br, bv, brow)) => {
                        let tie = 1e-12 * (1.0 + br.abs());
                        if ratio < br - tie {
                            Some((ratio, self.basis[i], i))
                        } else if ratio <= br + tie && self.basis[i] < bv {
                            Some((br.min(ratio), self.basis[i], i))
                        } else {
                            Some((br, bv, brow))
                        }
                    }
                };
            }
            let Some((_, _, r)) = best else {
                return Ok(PivotEnd::Unbounded);
            };
            self.pivot(r, e);
            iters += 1;
            if iters > cap {
                return Err(Error::IterationCap { cap });
            }
        }
    }
}

/// Two-phase dense simplex.
pub fn solve(p: &LinProgram, cfg: &Config) -> Result<LpOutcome> {
    p.validate()?;
    if p.num_vars > cfg.lp_max_vars {
        return Err(Error::LpTooLarge {
            vars: p.num_vars,
            guard: cfg.lp_max_vars,
        });
    }

    // Standard form: shift bounded-below variables, split free ones.
    let mut var_map = Vec::with_capacity(p.num_vars);
    let mut n_std = 0usize;
    for lb in &p.lower_bounds {
        match lb {
            Some(l) => {
                var_map.push(VarMap::Shifted {
                    col: n_std,
                    offset: *l,
                });
                n_std += 1;
            }
            None => {
                var_map.push(VarMap::Split {
                    pos: n_std,
                    neg: n_std + 1,
                });
                n_std += 2;
            }
        }
    }
    let n_slack = p.inequalities_ge.len();
    let n_struct = n_std + n_slack;
    let m = p.equalities.len() + n_slack;
    let n_all = n_struct + m;

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    let mut build_row = |coeffs: &[f64], b: f64, slack: Option<usize>| {
        let mut row = vec![0.0; n_all];
        let mut bb = b;
        for (j, &a) in coeffs.iter().enumerate() {
            match var_map[j] {
                VarMap::Shifted { col, offset } => {
                    row[col] += a;
                    bb -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    row[pos] += a;
                    row[neg] -= a;
                }
            }
        }
        if let Some(s) = slack {
            row[n_std + s] = -1.0;
        }
        rows.push(row);
        rhs.push(bb);
    };
    for (row, b) in &p.equalities {
        build_row(row, *b, None);
    }
    for (k, (row, b)) in p.inequalities_ge.iter().enumerate() {
        build_row(row, *b, Some(k));
    }

    // Artificial basis; rows flipped so rhs >= 0.
    for i in 0..m {
        if rhs[i] < 0.0 {
            for v in &mut rows[i] {
                *v = -*v;
            }
            rhs[i] = -rhs[i];
        }
        rows[i][n_struct + i] = 1.0;
    }

    let cap = (10 * (n_all + m) * (n_all + m)).max(1000);
    let mut t = Tableau {
        m,
        n: n_all,
        rows,
        rhs,
        basis: (n_struct..n_all).collect(),
    };

    // Phase 1: maximize -sum(artificials).
    let mut c1 = vec![0.0; n_all];
    for j in n_struct..n_all {
        c1[j] = -1.0;
    }
    match t.optimize(&c1, n_all, cap)? {
        PivotEnd::Optimal => {}
        PivotEnd::Unbounded => {
            return Err(Error::Internal(
                "phase-1 objective reported unbounded".into(),
            ))
        }
    }
    if t.objective_value(&c1) < -cfg.tol_lp {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive leftover artificials out of the basis; all-zero rows are redundant.
    let mut drop_rows = Vec::new();
    for i in 0..t.m {
        if t.basis[i] < n_struct {
            continue;
        }
        match (0..n_struct).find(|&j| t.rows[i][j].abs() > 1e-9) {
            Some(j) => t.pivot(i, j),
            None => drop_rows.push(i),
        }
    }
    for &i in drop_rows.iter().rev() {
        t.rows.remove(i);
        t.rhs.remove(i);
        t.basis.remove(i);
        t.m -= 1;
    }

    let extract = |t: &Tableau| -> Vec<f64> {
        let x_std = t.solution();
        var_map
            .iter()
            .map(|vm| match *vm {
                VarMap::Shifted { col, offset } => x_std[col] + offset,
                VarMap::Split { pos, neg } => x_std[pos] - x_std[neg],
            })
            .collect()
    };

    let pure_feasibility = p.objective.iter().all(|&c| c == 0.0);
    if pure_feasibility {
        let point = extract(&t);
        if !certify_feasible_point(p, &point, cfg) {
            return Err(Error::Internal("phase-1 point failed re-validation".into()));
        }
        return Ok(LpOutcome::Feasible { point });
    }

    // Phase 2 on structural columns only.
    let mut c2 = vec![0.0; n_all];
    for (j, &cj) in p.objective.iter().enumerate() {
        match var_map[j] {
            VarMap::Shifted { col, .. } => c2[col] = cj,
            VarMap::Split { pos, neg } => {
                c2[pos] = cj;
                c2[neg] = -cj;
            }
        }
    }
    match t.optimize(&c2, n_struct, cap)? {
        PivotEnd::Unbounded => Ok(LpOutcome::Unbounded),
        PivotEnd::Optimal => {
            let point = extract(&t);
            if !certify_feasible_point(p, &point, cfg) {
                return Err(Error::Internal("phase-2 point failed re-validation".into()));
            }
            let value = dot(&p.objective, &point);
            Ok(LpOutcome::Optimal { point, value })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn feasibility_with_pinned_coordinate() {
        let mut p = LinProgram::new(2);
        p.add_eq(vec![1.0, 0.0], 1.0);
        match solve(&p, &cfg()).unwrap() {
            LpOutcome::Feasible { point } => {
                assert!((point[0] - 1.0).abs() <= 1e-9);
                assert!(point[1] >= -1e-9);
            }
            other => panic!("expected Feasible, got {other:?}"),
        }
    }

    #[test]
    fn bounded_maximum() {
        let mut p = LinProgram::new(1).with_objective(vec![1.0]);
        p.add_le(vec![1.0], 2.0);
        match solve(&p, &cfg()).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert!((value - 2.0).abs() <= 1e-9);
                assert!((point[0] - 2.0).abs() <= 1e-9);
            }
            other => panic!("expected Optimal, got {other:?}"),
        }
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut p = LinProgram::new(2);
        p.add_eq(vec![1.0, 0.0], 0.0);
        p.add_le(vec![0.0, -1.0], -1.0); // x2 >= 1
        p.add_le(vec![0.0, 1.0], 0.0); // x2 <= 0
        assert_eq!(solve(&p, &cfg()).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_objective() {
        let p = LinProgram::new(2).with_objective(vec![1.0, 0.0]);
        assert_eq!(solve(&p, &cfg()).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_reach_negative_values() {
        let mut p = LinProgram::new(1).with_objective(vec![1.0]);
        p.set_lower_bound(0, None);
        p.add_ge(vec![-1.0], 3.0); // -x >= 3, i.e. x <= -3
        match solve(&p, &cfg()).unwrap() {
            LpOutcome::Optimal { point, value } => {
                assert!((point[0] + 3.0).abs() <= 1e-9);
                assert!((value + 3.0).abs() <= 1e-9);
            }
            other => panic!("expected Optimal, got {other:?}"),
        }
    }

    #[test]
    fn certify_examples() {
        let p = LinProgram::new(2);
        assert!(certify_feasible_point(&p, &[0.0, 0.0], &cfg()));

        let mut q = LinProgram::new(2);
        q.add_ge(vec![1.0, 0.0], 1.0);
        assert!(!certify_feasible_point(&q, &[0.5, 0.0], &cfg()));

        let mut r = LinProgram::new(2);
        r.add_eq(vec![1.0, 1.0], 1.0);
        assert!(certify_feasible_point(&r, &[0.3, 0.7], &cfg()));
    }

    #[test]
    fn variable_guard_is_enforced() {
        let p = LinProgram::new(65);
        assert!(matches!(
            solve(&p, &cfg()),
            Err(Error::LpTooLarge {
                vars: 65,
                guard: 64
            })
        ));
    }

    #[test]
    fn degenerate_equalities_do_not_cycle() {
        // Redundant constraints force leftover artificials / zero rows.
        let mut p = LinProgram::new(2).with_objective(vec![1.0, 1.0]);
        p.add_eq(vec![1.0, 1.0], 1.0);
        p.add_eq(vec![2.0, 2.0], 2.0);
        match solve(&p, &cfg()).unwrap() {
            LpOutcome::Optimal { value, .. } => assert!((value - 1.0).abs() <= 1e-9),
            other => panic!("expected Optimal, got {other:?}"),
        }
    }
}
