use crate::solver::{LpProblem, LpSolution, RowSense, Tolerances};
use serde::{Deserialize, Serialize};

/// One verification check with its measured value and threshold.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Recomputes every optimality condition of a claimed-optimal solution from
/// the raw problem data, without trusting anything the solver reported: row
/// residuals by sense, bound violations, dual feasibility (sign conditions of
/// row duals and reduced costs against active bounds), the relative duality
/// gap and the complementary-slackness residual.
///
/// This is written against the problem triplets directly and shares no code
/// with the solver's internal termination test.
pub fn verify_solution(solution: &LpSolution, problem: &LpProblem, tol: &Tolerances) -> VerificationReport {
    let mut checks = Vec::new();
    if !solution.is_optimal() {
        checks.push(Check {
            name: "status is optimal".into(),
            value: 0.0,
            threshold: 1.0,
            passed: false,
        });
        return VerificationReport { checks };
    }
    let x = solution.primal_ref();
    let y = solution.dual_ref();

    // A x from scratch.
    let mut ax = vec![0.0f64; problem.n_rows];
    let mut aty = vec![0.0f64; problem.n_cols];
    for &(r, c, v) in &problem.entries {
        ax[r as usize] += v * x[c as usize];
        aty[c as usize] += v * y[r as usize];
    }

    let mut row_residual = 0.0f64;
    let mut dual_sign = 0.0f64;
    let mut comp = 0.0f64;
    let mut primal_obj = 0.0f64;
    let mut dual_obj = 0.0f64;
    for j in 0..problem.n_cols {
        primal_obj += problem.objective[j] * x[j];
    }
    for i in 0..problem.n_rows {
        let slack = problem.rhs[i] - ax[i];
        match problem.row_sense[i] {
            RowSense::Eq => row_residual = row_residual.max(slack.abs()),
            RowSense::Le => {
                row_residual = row_residual.max(-slack);
                dual_sign = dual_sign.max(y[i]);
                comp = comp.max(y[i].abs() * slack.max(0.0));
            }
            RowSense::Ge => {
                row_residual = row_residual.max(slack);
                dual_sign = dual_sign.max(-y[i]);
                comp = comp.max(y[i].abs() * (-slack).max(0.0));
            }
        }
        dual_obj += problem.rhs[i] * y[i];
    }

    let mut bound_violation = 0.0f64;
    let mut reduced_cost_sign = 0.0f64;
    for j in 0..problem.n_cols {
        let (l, u) = (problem.col_lower[j], problem.col_upper[j]);
        if l.is_finite() {
            bound_violation = bound_violation.max(l - x[j]);
        }
        if u.is_finite() {
            bound_violation = bound_violation.max(x[j] - u);
        }
        let rc = problem.objective[j] - aty[j];
        if rc > 0.0 {
            if l.is_finite() {
                dual_obj += l * rc;
                comp = comp.max(rc * (x[j] - l).abs());
            } else {
                reduced_cost_sign = reduced_cost_sign.max(rc);
            }
        } else if rc < 0.0 {
            if u.is_finite() {
                dual_obj += u * rc;
                comp = comp.max(-rc * (u - x[j]).abs());
            } else {
                reduced_cost_sign = reduced_cost_sign.max(-rc);
            }
        }
    }

    let gap = (primal_obj - dual_obj).abs() / (1.0 + primal_obj.abs());
    let cost_scale = 1.0 + problem.objective.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let obj_scale = 1.0 + primal_obj.abs();

    let mut push = |name: &str, value: f64, threshold: f64| {
        checks.push(Check { name: name.into(), value, threshold, passed: value <= threshold });
    };
    push("row residual (absolute)", row_residual, tol.feasibility);
    push("bound violation (absolute)", bound_violation, tol.feasibility);
    push("dual sign violation / (1 + max|c|)", dual_sign.max(reduced_cost_sign) / cost_scale, tol.feasibility);
    push("relative duality gap", gap, tol.optimality);
    push("complementary slackness / (1 + |obj|)", comp / obj_scale, tol.feasibility);
    VerificationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve, ColTag, LpBuilder, RowTag};

    fn solved_fixture() -> (LpProblem, LpSolution) {
        let mut b = LpBuilder::new();
        let x0 = b.add_col(0.0, 10.0, 2.0, ColTag::Other);
        let x1 = b.add_col(0.0, 10.0, 3.0, ColTag::Other);
        let r = b.add_row(RowSense::Ge, 4.0, RowTag::Other);
        b.set_coeff(r, x0, 1.0);
        b.set_coeff(r, x1, 1.0);
        let p = b.finish().unwrap();
        let sol = solve(&p, &Tolerances::default()).unwrap();
        (p, sol)
    }

    #[test]
    fn solver_output_passes_all_checks() {
        let (p, sol) = solved_fixture();
        let report = verify_solution(&sol, &p, &Tolerances::default());
        assert!(report.passed(), "{:?}", report.failures());
    }

    #[test]
    fn corrupted_primal_is_flagged() {
        let (p, mut sol) = solved_fixture();
        sol.primal.as_mut().unwrap()[0] += 1.0;
        let report = verify_solution(&sol, &p, &Tolerances::default());
        assert!(!report.passed());
        assert!(report.failures().iter().any(|c| c.name.contains("complementary") || c.name.contains("row residual")));
    }

    #[test]
    fn non_optimal_status_fails_immediately() {
        let (p, mut sol) = solved_fixture();
        sol.status = crate::solver::SolveStatus::IterationLimit;
        let report = verify_solution(&sol, &p, &Tolerances::default());
        assert!(!report.passed());
    }
}
