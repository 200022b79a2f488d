//! Minimal compressed-sparse-column storage used by the interior-point core.

#[derive(Clone, Debug)]
pub(crate) struct Csc {
    pub n_rows: usize,
    pub n_cols: usize,
    pub col_ptr: Vec<usize>,
    pub row_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl Csc {
    /// Builds from coordinate triplets; coordinates must be unique.
    pub fn from_triplets(n_rows: usize, n_cols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; n_cols + 1];
        for &(_, c, _) in triplets {
            counts[c + 1] += 1;
        }
        for j in 0..n_cols {
            counts[j + 1] += counts[j];
        }
        let col_ptr = counts.clone();
        let nnz = triplets.len();
        let mut row_idx = vec![0usize; nnz];
        let mut values = vec![0.0; nnz];
        let mut next = col_ptr.clone();
        // Sort within each column by row for a canonical layout.
        let mut by_col: Vec<(usize, usize, f64)> = triplets.to_vec();
        by_col.sort_unstable_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        for (r, c, v) in by_col {
            let pos = next[c];
            row_idx[pos] = r;
            values[pos] = v;
            next[c] += 1;
        }
        Self { n_rows, n_cols, col_ptr, row_idx, values }
    }

    pub fn col(&self, j: usize) -> (&[usize], &[f64]) {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        (&self.row_idx[range.clone()], &self.values[range])
    }

    /// `y += A x`
    pub fn mul_acc(&self, x: &[f64], y: &mut [f64]) {
        for j in 0..self.n_cols {
            let xj = x[j];
            if xj != 0.0 {
                let (rows, vals) = self.col(j);
                for (&r, &v) in rows.iter().zip(vals) {
                    y[r] += v * xj;
                }
            }
        }
    }

    /// `out[j] = column_j . y`
    pub fn mul_transpose(&self, y: &[f64], out: &mut [f64]) {
        for j in 0..self.n_cols {
            let (rows, vals) = self.col(j);
            let mut acc = 0.0;
            for (&r, &v) in rows.iter().zip(vals) {
                acc += v * y[r];
            }
            out[j] = acc;
        }
    }
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_round_trip() {
        // [1 2; 0 3; 4 0]
        let a = Csc::from_triplets(3, 2, &[(0, 0, 1.0), (0, 1, 2.0), (1, 1, 3.0), (2, 0, 4.0)]);
        let mut y = vec![0.0; 3];
        a.mul_acc(&[1.0, 10.0], &mut y);
        assert_eq!(y, vec![21.0, 30.0, 4.0]);
        let mut xt = vec![0.0; 2];
        a.mul_transpose(&[1.0, 1.0, 1.0], &mut xt);
        assert_eq!(xt, vec![5.0, 5.0]);
    }
}
