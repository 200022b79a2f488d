//! Sparse LP solving with dual recovery.
//!
//! [`solve`] runs a primal-dual interior-point method and returns primal
//! values, row duals and reduced costs with certified residuals;
//! [`write_interchange`] / [`read_interchange`] move problems across tools in
//! MPS form; [`extract_duals`] turns raw duals into per-role maps.

mod extract;
mod ipm;
mod kkt;
mod mps;
mod problem;
mod sparse;

pub use extract::{extract_duals, TaggedDuals};
pub use ipm::solve;
pub use mps::{read_interchange, read_interchange_file, write_interchange, write_interchange_file};
pub use problem::{
    Certificate, ColTag, LpBuilder, LpError, LpProblem, LpSolution, RowSense, RowTag, SolveQuality,
    SolveStatus, Tolerances,
};

#[cfg(test)]
mod tests {
    use super::*;

    fn simple_ge() -> LpProblem {
        // minimize x0 + 2 x1 s.t. x0 + x1 >= 1, x >= 0
        let mut b = LpBuilder::new();
        let x0 = b.add_col(0.0, f64::INFINITY, 1.0, ColTag::Other);
        let x1 = b.add_col(0.0, f64::INFINITY, 2.0, ColTag::Other);
        let r = b.add_row(RowSense::Ge, 1.0, RowTag::Other);
        b.set_coeff(r, x0, 1.0);
        b.set_coeff(r, x1, 1.0);
        b.finish().unwrap()
    }

    #[test]
    fn solves_the_two_variable_problem_with_unit_dual() {
        let sol = solve(&simple_ge(), &Tolerances::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        let x = sol.primal_ref();
        assert!((x[0] - 1.0).abs() < 1e-7, "{x:?}");
        assert!(x[1].abs() < 1e-7);
        assert!((sol.objective.unwrap() - 1.0).abs() < 1e-7);
        assert!((sol.dual_ref()[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn contradictory_rows_are_infeasible_with_certificate() {
        // x <= -1 and x >= 0 (as a row) cannot both hold.
        let mut b = LpBuilder::new();
        let x = b.add_col(f64::NEG_INFINITY, f64::INFINITY, 0.0, ColTag::Other);
        let r1 = b.add_row(RowSense::Le, -1.0, RowTag::Other);
        let r2 = b.add_row(RowSense::Ge, 0.0, RowTag::Other);
        b.set_coeff(r1, x, 1.0);
        b.set_coeff(r2, x, 1.0);
        let sol = solve(&b.finish().unwrap(), &Tolerances::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        match sol.certificate {
            Some(Certificate::DualRay(ray)) => {
                // Farkas: y1 <= 0 (Le row), y2 >= 0 (Ge row), b'y > 0, A'y = 0.
                assert!(ray[0] <= 1e-9 && ray[1] >= -1e-9);
                assert!((-1.0) * ray[0] + 0.0 * ray[1] > 1e-7);
                assert!((ray[0] + ray[1]).abs() < 1e-6);
            }
            other => panic!("expected dual ray, got {other:?}"),
        }
    }

    #[test]
    fn bounded_below_objective_with_free_direction_is_unbounded() {
        let mut b = LpBuilder::new();
        let x = b.add_col(0.0, f64::INFINITY, -1.0, ColTag::Other);
        let y = b.add_col(0.0, 1.0, 1.0, ColTag::Other);
        let r = b.add_row(RowSense::Le, 5.0, RowTag::Other);
        b.set_coeff(r, y, 1.0);
        let _ = x;
        let sol = solve(&b.finish().unwrap(), &Tolerances::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Unbounded);
        match sol.certificate {
            Some(Certificate::PrimalRay(ray)) => {
                assert!(ray[0] > 0.0);
            }
            other => panic!("expected primal ray, got {other:?}"),
        }
    }

    #[test]
    fn fixed_variables_are_presolved() {
        let mut b = LpBuilder::new();
        let x = b.add_col(2.0, 2.0, 3.0, ColTag::Other);
        let y = b.add_col(0.0, 10.0, 1.0, ColTag::Other);
        let r = b.add_row(RowSense::Eq, 5.0, RowTag::Other);
        b.set_coeff(r, x, 1.0);
        b.set_coeff(r, y, 1.0);
        let sol = solve(&b.finish().unwrap(), &Tolerances::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        let x = sol.primal_ref();
        assert!((x[0] - 2.0).abs() < 1e-9);
        assert!((x[1] - 3.0).abs() < 1e-7);
        assert!((sol.objective.unwrap() - 9.0).abs() < 1e-6);
    }

    #[test]
    fn inconsistent_empty_row_is_infeasible() {
        let mut b = LpBuilder::new();
        let x = b.add_col(1.0, 1.0, 0.0, ColTag::Other);
        let r = b.add_row(RowSense::Eq, 7.0, RowTag::Other);
        b.set_coeff(r, x, 1.0);
        let sol = solve(&b.finish().unwrap(), &Tolerances::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert!(matches!(sol.certificate, Some(Certificate::DualRay(_))));
    }

    #[test]
    fn degenerate_equalities_still_meet_the_duality_contract() {
        // Two parallel equality rows describing the same hyperplane.
        let mut b = LpBuilder::new();
        let x0 = b.add_col(0.0, 10.0, 1.0, ColTag::Other);
        let x1 = b.add_col(0.0, 10.0, 1.0, ColTag::Other);
        let r1 = b.add_row(RowSense::Eq, 4.0, RowTag::Other);
        let r2 = b.add_row(RowSense::Eq, 8.0, RowTag::Other);
        b.set_coeff(r1, x0, 1.0);
        b.set_coeff(r1, x1, 1.0);
        b.set_coeff(r2, x0, 2.0);
        b.set_coeff(r2, x1, 2.0);
        let tol = Tolerances::default();
        let sol = solve(&b.finish().unwrap(), &tol).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective.unwrap() - 4.0).abs() < 1e-6);
        assert!(sol.quality.duality_gap_rel <= tol.optimality);
        assert!(sol.quality.complementarity <= tol.feasibility);
    }

    #[test]
    fn repeated_solves_are_bit_identical() {
        let p = simple_ge();
        let a = solve(&p, &Tolerances::default()).unwrap();
        let b = solve(&p, &Tolerances::default()).unwrap();
        assert_eq!(a.primal, b.primal);
        assert_eq!(a.dual, b.dual);
        assert_eq!(a.objective, b.objective);
    }
}
