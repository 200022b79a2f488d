//! Factorization of the quasi-definite augmented system
//!
//! ```text
//! [ -(D + delta_d I)   A' ] [dx]   [rx]
//! [        A     delta_p I ] [dy] = [ry]
//! ```
//!
//! The sparsity pattern is fixed across interior-point iterations, so the
//! fill-reducing ordering and symbolic analysis run once and only the numeric
//! factorization repeats.

use super::sparse::Csc;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::cholesky::ldlt::factor::{LdltParams, LdltRegularization};
use faer::sparse::linalg::cholesky::{
    factorize_symbolic_cholesky, CholeskySymbolicParams, LdltRef, SymbolicCholesky,
    SymmetricOrdering,
};
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::{MatMut, Par, Side, Spec};

pub(crate) struct KktSolver {
    n: usize,
    m: usize,
    dim: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
    /// Index of the diagonal slot within `values`, per KKT column.
    diag_slot: Vec<usize>,
    symbolic: SymbolicCholesky<usize>,
    l_values: Vec<f64>,
    signs: Vec<i8>,
    factor_mem: MemBuffer,
    solve_mem: MemBuffer,
    factored: bool,
}

impl KktSolver {
    /// Builds the lower-triangle pattern from the constraint matrix.
    pub fn new(a: &Csc) -> Result<Self, String> {
        let n = a.n_cols;
        let m = a.n_rows;
        let dim = n + m;

        let mut col_ptr = Vec::with_capacity(dim + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        let mut diag_slot = Vec::with_capacity(dim);
        col_ptr.push(0);
        for j in 0..n {
            diag_slot.push(values.len());
            row_idx.push(j);
            values.push(-1.0);
            let (rows, vals) = a.col(j);
            for (&r, &v) in rows.iter().zip(vals) {
                row_idx.push(n + r);
                values.push(v);
            }
            col_ptr.push(row_idx.len());
        }
        for i in 0..m {
            diag_slot.push(values.len());
            row_idx.push(n + i);
            values.push(1.0);
            col_ptr.push(row_idx.len());
        }

        let symbolic_mat = SymbolicSparseColMatRef::new_checked(dim, dim, &col_ptr, None, &row_idx);
        let symbolic = factorize_symbolic_cholesky(
            symbolic_mat,
            Side::Lower,
            SymmetricOrdering::Amd,
            CholeskySymbolicParams::default(),
        )
        .map_err(|e| format!("symbolic factorization failed: {e:?}"))?;

        let mut signs = vec![-1i8; dim];
        for s in signs.iter_mut().skip(n) {
            *s = 1;
        }

        let l_values = vec![0.0; symbolic.len_val()];
        let factor_scratch =
            symbolic.factorize_numeric_ldlt_scratch::<f64>(Par::Seq, Spec::<LdltParams, f64>::default());
        let solve_scratch = symbolic.solve_in_place_scratch::<f64>(1, Par::Seq);
        let factor_mem = MemBuffer::try_new(factor_scratch).map_err(|_| "out of memory".to_string())?;
        let solve_mem = MemBuffer::try_new(solve_scratch).map_err(|_| "out of memory".to_string())?;

        Ok(Self {
            n,
            m,
            dim,
            col_ptr,
            row_idx,
            values,
            diag_slot,
            symbolic,
            l_values,
            signs,
            factor_mem,
            solve_mem,
            factored: false,
        })
    }

    /// Refreshes the diagonal with the scaling `d` and regularization shifts,
    /// then recomputes the numeric factorization.
    pub fn factorize(&mut self, d: &[f64], delta_d: f64, delta_p: f64, pivot_eps: f64) -> Result<(), String> {
        debug_assert_eq!(d.len(), self.n);
        for j in 0..self.n {
            self.values[self.diag_slot[j]] = -(d[j] + delta_d);
        }
        for i in 0..self.m {
            self.values[self.diag_slot[self.n + i]] = delta_p;
        }

        let symbolic_mat =
            SymbolicSparseColMatRef::new_checked(self.dim, self.dim, &self.col_ptr, None, &self.row_idx);
        let mat = SparseColMatRef::new(symbolic_mat, &self.values);
        let regularization = LdltRegularization {
            dynamic_regularization_signs: Some(&self.signs),
            dynamic_regularization_delta: delta_p.max(delta_d).max(pivot_eps),
            dynamic_regularization_epsilon: pivot_eps,
        };
        self.symbolic
            .factorize_numeric_ldlt(
                &mut self.l_values,
                mat,
                Side::Lower,
                regularization,
                Par::Seq,
                MemStack::new(&mut self.factor_mem),
                Spec::<LdltParams, f64>::default(),
            )
            .map_err(|e| format!("numeric factorization failed: {e:?}"))?;
        self.factored = true;
        Ok(())
    }

    /// Solves in place: on entry `rhs = [rx; ry]`, on exit `rhs = [dx; dy]`.
    pub fn solve(&mut self, rhs: &mut [f64]) {
        assert!(self.factored, "factorize must run before solve");
        debug_assert_eq!(rhs.len(), self.dim);
        let ldlt = LdltRef::new(&self.symbolic, &self.l_values);
        let mat = MatMut::from_column_major_slice_mut(rhs, self.dim, 1);
        ldlt.solve_in_place_with_conj(faer::Conj::No, mat, Par::Seq, MemStack::new(&mut self.solve_mem));
    }

    /// One step of iterative refinement against the unregularized system.
    /// `sol` is refined so that residuals of the true augmented system shrink.
    pub fn refine(&mut self, a: &Csc, d: &[f64], rx: &[f64], ry: &[f64], sol: &mut [f64], work: &mut [f64]) {
        let (n, m) = (self.n, self.m);
        let (dx, dy) = sol.split_at(n);
        // residual_x = rx - (-D dx + A' dy)
        a.mul_transpose(dy, &mut work[..n]);
        for j in 0..n {
            work[j] = rx[j] - (-d[j] * dx[j] + work[j]);
        }
        // residual_y = ry - A dx
        for v in work[n..n + m].iter_mut() {
            *v = 0.0;
        }
        a.mul_acc(dx, &mut work[n..n + m]);
        for i in 0..m {
            work[n + i] = ry[i] - work[n + i];
        }
        let mut correction = work[..n + m].to_vec();
        self.solve(&mut correction);
        for (s, c) in sol.iter_mut().zip(&correction) {
            *s += c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_small_augmented_system() {
        // A = [1 1], D = diag(1, 2): system
        // [-1  0  1] [x0]   [1]
        // [ 0 -2  1] [x1] = [2]
        // [ 1  1  0] [y ]   [3]
        let a = Csc::from_triplets(1, 2, &[(0, 0, 1.0), (0, 1, 1.0)]);
        let mut kkt = KktSolver::new(&a).unwrap();
        kkt.factorize(&[1.0, 2.0], 0.0, 0.0, 0.0).unwrap();
        let mut rhs = vec![1.0, 2.0, 3.0];
        kkt.solve(&mut rhs);
        // Exact solution: x0 = (2*3 - 1 + ... ) solve by hand:
        // -x0 + y = 1; -2 x1 + y = 2; x0 + x1 = 3
        // x0 = y - 1, x1 = (y-2)/2, (y-1) + (y-2)/2 = 3 -> 1.5y = 5 -> y = 10/3
        let y = 10.0 / 3.0;
        let x0 = y - 1.0;
        let x1 = (y - 2.0) / 2.0;
        assert!((rhs[0] - x0).abs() < 1e-12);
        assert!((rhs[1] - x1).abs() < 1e-12);
        assert!((rhs[2] - y).abs() < 1e-12);
    }

    #[test]
    fn refinement_removes_regularization_error() {
        let a = Csc::from_triplets(1, 2, &[(0, 0, 1.0), (0, 1, 1.0)]);
        let mut kkt = KktSolver::new(&a).unwrap();
        let d = [1.0, 2.0];
        kkt.factorize(&d, 1e-4, 1e-4, 0.0).unwrap();
        let rx = [1.0, 2.0];
        let ry = [3.0];
        let mut sol = vec![1.0, 2.0, 3.0];
        kkt.solve(&mut sol);
        let mut work = vec![0.0; 3];
        for _ in 0..3 {
            kkt.refine(&a, &d, &rx, &ry, &mut sol, &mut work);
        }
        let y = 10.0 / 3.0;
        assert!((sol[2] - y).abs() < 1e-10, "got {} want {}", sol[2], y);
    }
}
