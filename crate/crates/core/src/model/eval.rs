use serde::Serialize;

use super::{MisdpModel, ModelError, Relation};
use crate::linalg::{is_psd, min_eigenvalue};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Domain { var: String, value: f64 },
    Row { row: String, residual: f64 },
    Pencil { pencil: String, min_eigenvalue: f64 },
}

impl Violation {
    /// Size of the violation; pencils report `-λ_min`.
    pub fn amount(&self) -> f64 {
        match self {
            Violation::Domain { .. } => f64::INFINITY,
            Violation::Row { residual, .. } => residual.abs(),
            Violation::Pencil { min_eigenvalue, .. } => -min_eigenvalue,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalResult {
    pub feasible: bool,
    /// Objective with the model's sense restored.
    pub objective: f64,
    pub violations: Vec<Violation>,
}

fn is_int(v: f64) -> bool {
    v.fract() == 0.0 && v.abs() < 9.0e15
}

/// How far a row is from holding (0 when satisfied).
pub(crate) fn row_residual(rel: Relation, lhs: f64, rhs: f64) -> f64 {
    match rel {
        Relation::Eq => lhs - rhs,
        Relation::Le => (lhs - rhs).max(0.0),
        Relation::Ge => (lhs - rhs).min(0.0),
    }
}

impl MisdpModel {
    /// Checks domains, rows and pencils at a complete assignment.
    ///
    /// Rows whose data and values are all integral are compared exactly;
    /// anything else gets `linear_rel · max(1, |rhs|)` slack.
    pub fn eval_point(&self, x: &[f64], tol: &Tolerances) -> Result<EvalResult, ModelError> {
        if x.len() != self.num_vars() {
            return Err(ModelError::IncompleteAssignment(format!(
                "{} values for {} variables",
                x.len(),
                self.num_vars()
            )));
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(ModelError::IncompleteAssignment(format!(
                "variable `{}` has no finite value",
                self.variables[i].name
            )));
        }
        let mut violations = Vec::new();
        for (var, &v) in self.variables.iter().zip(x) {
            if !var.domain.contains(v, tol.linear_rel) {
                violations.push(Violation::Domain { var: var.name.clone(), value: v });
            }
        }
        for row in &self.rows {
            let lhs = row.activity(x);
            let exact = is_int(row.rhs) && row.terms.iter().all(|&(v, c)| is_int(c) && is_int(x[v]));
            let slack = if exact { 0.0 } else { tol.linear_rel * row.rhs.abs().max(1.0) };
            let res = row_residual(row.rel, lhs, row.rhs);
            if res.abs() > slack {
                violations.push(Violation::Row { row: row.name.clone(), residual: res });
            }
        }
        for (k, p) in self.pencils.iter().enumerate() {
            let m = self.pencil_matrix(k, x);
            if !is_psd(&m, tol) {
                let lmin = min_eigenvalue(&m, tol).unwrap_or(f64::NEG_INFINITY);
                violations.push(Violation::Pencil { pencil: p.name.clone(), min_eigenvalue: lmin });
            }
        }
        Ok(EvalResult { feasible: violations.is_empty(), objective: self.objective.value(x), violations })
    }
}
