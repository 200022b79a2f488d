use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Row relation against its right-hand side.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for RowSense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowSense::Le => "<=",
            RowSense::Eq => "=",
            RowSense::Ge => ">=",
        })
    }
}

/// Structural role of a row, kept alongside the matrix so that duals can be
/// looked up by meaning instead of by index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowTag {
    /// Energy balance at (bus, snapshot).
    Balance { bus: u32, t: u32 },
    /// State-of-charge recursion of (store, snapshot).
    StoreSoc { store: u32, t: u32 },
    /// Dispatch limited by built capacity.
    CapacityGen { gen: u32, t: u32 },
    CapacityLink { link: u32, t: u32 },
    CapacityStore { store: u32, t: u32 },
    /// Monthly renewable matching, month in 1..=12.
    Matching { month: u8 },
    Emission,
    Other,
}

impl RowTag {
    pub fn label(&self) -> String {
        match self {
            RowTag::Balance { bus, t } => format!("balance(bus={bus},t={t})"),
            RowTag::StoreSoc { store, t } => format!("soc(store={store},t={t})"),
            RowTag::CapacityGen { gen, t } => format!("cap_gen(gen={gen},t={t})"),
            RowTag::CapacityLink { link, t } => format!("cap_link(link={link},t={t})"),
            RowTag::CapacityStore { store, t } => format!("cap_store(store={store},t={t})"),
            RowTag::Matching { month } => format!("matching(month={month})"),
            RowTag::Emission => "emission".into(),
            RowTag::Other => "row".into(),
        }
    }
}

/// Structural role of a column.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColTag {
    GenDispatch { gen: u32, t: u32 },
    LinkFlow { link: u32, t: u32 },
    StoreCharge { store: u32, t: u32 },
    StoreDischarge { store: u32, t: u32 },
    StoreSoc { store: u32, t: u32 },
    GenCapacity { gen: u32 },
    LinkCapacity { link: u32 },
    StoreCapacity { store: u32 },
    Other,
}

/// A sparse linear program in the form
///
/// ```text
/// minimize    objective' x
/// subject to  entries  x  {<=,=,>=}  rhs     (row-wise)
///             col_lower <= x <= col_upper    (+-inf allowed)
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub n_cols: usize,
    pub n_rows: usize,
    pub col_lower: Vec<f64>,
    pub col_upper: Vec<f64>,
    pub objective: Vec<f64>,
    pub row_sense: Vec<RowSense>,
    pub rhs: Vec<f64>,
    /// Coefficients as (row, col, value), at most one entry per (row, col).
    pub entries: Vec<(u32, u32, f64)>,
    pub row_tags: Vec<RowTag>,
    pub col_tags: Vec<ColTag>,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("problem is malformed: {0}")]
    Malformed(String),
    #[error("solution is not optimal (status {0:?})")]
    NotOptimal(SolveStatus),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl LpProblem {
    /// Checks the structural invariants: consistent lengths, finite values,
    /// ordered bounds, in-range indices and no duplicate coordinates.
    pub fn check(&self) -> Result<(), LpError> {
        let bad = |m: String| Err(LpError::Malformed(m));
        if self.col_lower.len() != self.n_cols
            || self.col_upper.len() != self.n_cols
            || self.objective.len() != self.n_cols
            || self.col_tags.len() != self.n_cols
        {
            return bad(format!("column arrays must all have length {}", self.n_cols));
        }
        if self.row_sense.len() != self.n_rows || self.rhs.len() != self.n_rows || self.row_tags.len() != self.n_rows {
            return bad(format!("row arrays must all have length {}", self.n_rows));
        }
        for j in 0..self.n_cols {
            let (l, u) = (self.col_lower[j], self.col_upper[j]);
            if l.is_nan() || u.is_nan() || !self.objective[j].is_finite() {
                return bad(format!("column {j}: bounds must not be NaN and cost must be finite"));
            }
            if l > u {
                return bad(format!("column {j}: lower bound {l} exceeds upper bound {u}"));
            }
        }
        for i in 0..self.n_rows {
            if !self.rhs[i].is_finite() {
                return bad(format!("row {i}: rhs must be finite"));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(r, c, v) in &self.entries {
            if r as usize >= self.n_rows || c as usize >= self.n_cols {
                return bad(format!("entry ({r},{c}) outside {}x{}", self.n_rows, self.n_cols));
            }
            if !v.is_finite() {
                return bad(format!("entry ({r},{c}) has non-finite value {v}"));
            }
            if !seen.insert((r, c)) {
                return bad(format!("duplicate entry at ({r},{c})"));
            }
        }
        Ok(())
    }

    /// Objective value of a candidate point.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, x)| c * x).sum()
    }

    /// Row activities `A x`.
    pub fn row_activity(&self, x: &[f64]) -> Vec<f64> {
        let mut ax = vec![0.0; self.n_rows];
        for &(r, c, v) in &self.entries {
            ax[r as usize] += v * x[c as usize];
        }
        ax
    }
}

/// Incremental construction of an [`LpProblem`]; duplicate coordinates are
/// summed when the problem is finished.
#[derive(Default)]
pub struct LpBuilder {
    col_lower: Vec<f64>,
    col_upper: Vec<f64>,
    objective: Vec<f64>,
    col_tags: Vec<ColTag>,
    row_sense: Vec<RowSense>,
    rhs: Vec<f64>,
    row_tags: Vec<RowTag>,
    entries: Vec<(u32, u32, f64)>,
}

impl LpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn n_cols(&self) -> usize {
        self.objective.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn add_col(&mut self, lower: f64, upper: f64, cost: f64, tag: ColTag) -> u32 {
        self.col_lower.push(lower);
        self.col_upper.push(upper);
        self.objective.push(cost);
        self.col_tags.push(tag);
        (self.objective.len() - 1) as u32
    }

    pub fn add_row(&mut self, sense: RowSense, rhs: f64, tag: RowTag) -> u32 {
        self.row_sense.push(sense);
        self.rhs.push(rhs);
        self.row_tags.push(tag);
        (self.rhs.len() - 1) as u32
    }

    pub fn set_coeff(&mut self, row: u32, col: u32, value: f64) {
        if value != 0.0 {
            self.entries.push((row, col, value));
        }
    }

    pub fn add_rhs(&mut self, row: u32, delta: f64) {
        self.rhs[row as usize] += delta;
    }

    pub fn set_cost(&mut self, col: u32, cost: f64) {
        self.objective[col as usize] = cost;
    }

    pub fn finish(mut self) -> Result<LpProblem, LpError> {
        // Merge duplicate coordinates so the no-duplicates invariant holds.
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(u32, u32, f64)> = Vec::with_capacity(self.entries.len());
        for (r, c, v) in self.entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != 0.0);
        let problem = LpProblem {
            n_cols: self.objective.len(),
            n_rows: self.rhs.len(),
            col_lower: self.col_lower,
            col_upper: self.col_upper,
            objective: self.objective,
            row_sense: self.row_sense,
            rhs: self.rhs,
            entries: merged,
            row_tags: self.row_tags,
            col_tags: self.col_tags,
        };
        problem.check()?;
        Ok(problem)
    }
}

/// Solver stopping thresholds.
#[derive(Copy, Clone, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute bound on primal residuals and complementarity.
    #[serde(default = "default_feasibility")]
    pub feasibility: f64,
    /// Relative duality-gap bound.
    #[serde(default = "default_optimality")]
    pub optimality: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
}

fn default_feasibility() -> f64 {
    1e-7
}

fn default_optimality() -> f64 {
    1e-6
}

fn default_max_iterations() -> usize {
    200
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            feasibility: default_feasibility(),
            optimality: default_optimality(),
            max_iterations: default_max_iterations(),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration budget exhausted without a certified answer.
    IterationLimit,
}

/// Ray certifying infeasibility (dual, length `n_rows`) or unboundedness
/// (primal, length `n_cols`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Certificate {
    DualRay(Vec<f64>),
    PrimalRay(Vec<f64>),
}

/// Residual summary of a terminated solve, in the units of the original
/// problem. `complementarity` and `dual_residual` are normalized by
/// `1 + |objective|` and `1 + max|cost|` respectively; the primal residual is
/// absolute.
#[derive(Copy, Clone, Debug, Default, Serialize, Deserialize)]
pub struct SolveQuality {
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub duality_gap_rel: f64,
    pub complementarity: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: SolveStatus,
    /// Set when status is `Optimal`.
    pub objective: Option<f64>,
    pub primal: Option<Vec<f64>>,
    /// Row duals: the marginal objective change per unit of rhs. Binding
    /// `>=` rows have non-negative duals, binding `<=` rows non-positive.
    pub dual: Option<Vec<f64>>,
    pub reduced_costs: Option<Vec<f64>>,
    /// Set when status is `Infeasible` or `Unbounded`.
    pub certificate: Option<Certificate>,
    pub iterations: usize,
    pub quality: SolveQuality,
    /// Human-readable diagnosis for non-optimal outcomes.
    pub note: Option<String>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn primal_ref(&self) -> &[f64] {
        self.primal.as_deref().unwrap_or(&[])
    }

    pub fn dual_ref(&self) -> &[f64] {
        self.dual.as_deref().unwrap_or(&[])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_merges_duplicate_coordinates() {
        let mut b = LpBuilder::new();
        let x = b.add_col(0.0, 1.0, 1.0, ColTag::Other);
        let r = b.add_row(RowSense::Le, 1.0, RowTag::Other);
        b.set_coeff(r, x, 0.5);
        b.set_coeff(r, x, 0.25);
        let p = b.finish().unwrap();
        assert_eq!(p.entries, vec![(0, 0, 0.75)]);
    }

    #[test]
    fn check_rejects_crossed_bounds() {
        let mut b = LpBuilder::new();
        b.add_col(1.0, -1.0, 0.0, ColTag::Other);
        assert!(matches!(b.finish(), Err(LpError::Malformed(_))));
    }

    #[test]
    fn check_rejects_duplicates_and_bad_indices() {
        let p = LpProblem {
            n_cols: 1,
            n_rows: 1,
            col_lower: vec![0.0],
            col_upper: vec![1.0],
            objective: vec![1.0],
            row_sense: vec![RowSense::Eq],
            rhs: vec![1.0],
            entries: vec![(0, 0, 1.0), (0, 0, 2.0)],
            row_tags: vec![RowTag::Other],
            col_tags: vec![ColTag::Other],
        };
        assert!(p.check().is_err());
        let p2 = LpProblem { entries: vec![(0, 3, 1.0)], ..p };
        assert!(p2.check().is_err());
    }
}
