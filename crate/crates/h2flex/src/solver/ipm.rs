//! Primal-dual interior-point solver.
//!
//! The problem is brought to the computational form `min c'x, Ax = b,
//! l <= x <= u` by appending one slack column per inequality row. A Mehrotra
//! predictor-corrector iteration drives the barrier parameter to zero; every
//! Newton step solves the quasi-definite augmented system through a sparse
//! LDL' factorization with static regularization and iterative refinement.
//!
//! Termination is judged on the *original, unscaled* problem: absolute primal
//! residuals, sign-aware dual residuals, relative duality gap and normalized
//! complementarity must all pass the caller's tolerances. Infeasibility and
//! unboundedness are reported only with a verified certificate ray; an
//! exhausted iteration budget is reported as such, never as a silent answer.

use super::kkt::KktSolver;
use super::problem::{
    Certificate, LpError, LpProblem, LpSolution, RowSense, SolveQuality, SolveStatus, Tolerances,
};
use super::sparse::{inf_norm, Csc};

/// Solves the linear program to the requested tolerances.
pub fn solve(problem: &LpProblem, tol: &Tolerances) -> Result<LpSolution, LpError> {
    if !(tol.feasibility > 0.0) || !(tol.optimality > 0.0) || tol.max_iterations == 0 {
        return Err(LpError::Malformed(format!(
            "tolerances must be positive, got feasibility={}, optimality={}, max_iterations={}",
            tol.feasibility, tol.optimality, tol.max_iterations
        )));
    }
    problem.check()?;
    let eq = EqForm::build(problem);
    match presolve(&eq) {
        PresolveOutcome::Infeasible { row, note } => {
            let mut ray = vec![0.0; problem.n_rows];
            // The empty row itself is an exact Farkas certificate.
            ray[row] = if eq.rhs[row] > 0.0 { 1.0 } else { -1.0 };
            Ok(non_optimal(SolveStatus::Infeasible, Some(Certificate::DualRay(ray)), 0, note))
        }
        PresolveOutcome::Unbounded { col, direction, note } => {
            let mut ray = vec![0.0; problem.n_cols];
            if col < problem.n_cols {
                ray[col] = direction;
            }
            Ok(non_optimal(SolveStatus::Unbounded, Some(Certificate::PrimalRay(ray)), 0, note))
        }
        PresolveOutcome::Reduced(red) => ipm_main(problem, &eq, red, tol),
    }
}

fn non_optimal(status: SolveStatus, certificate: Option<Certificate>, iterations: usize, note: String) -> LpSolution {
    LpSolution {
        status,
        objective: None,
        primal: None,
        dual: None,
        reduced_costs: None,
        certificate,
        iterations,
        quality: SolveQuality::default(),
        note: Some(note),
    }
}

// ---------------------------------------------------------------------------
// Equality computational form
// ---------------------------------------------------------------------------

struct EqForm {
    n_orig: usize,
    n: usize,
    m: usize,
    entries: Vec<(usize, usize, f64)>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    rhs: Vec<f64>,
}

impl EqForm {
    fn build(p: &LpProblem) -> Self {
        let n_orig = p.n_cols;
        let mut lower = p.col_lower.clone();
        let mut upper = p.col_upper.clone();
        let mut cost = p.objective.clone();
        let mut entries: Vec<(usize, usize, f64)> =
            p.entries.iter().map(|&(r, c, v)| (r as usize, c as usize, v)).collect();
        let mut n = n_orig;
        for (i, sense) in p.row_sense.iter().enumerate() {
            let (l, u) = match sense {
                RowSense::Eq => continue,
                RowSense::Le => (0.0, f64::INFINITY),
                RowSense::Ge => (f64::NEG_INFINITY, 0.0),
            };
            entries.push((i, n, 1.0));
            lower.push(l);
            upper.push(u);
            cost.push(0.0);
            n += 1;
        }
        EqForm { n_orig, n, m: p.n_rows, entries, lower, upper, cost, rhs: p.rhs.clone() }
    }
}

// ---------------------------------------------------------------------------
// Presolve: fixed variables, empty rows, empty columns
// ---------------------------------------------------------------------------

struct Reduced {
    a: Csc,
    b: Vec<f64>,
    c: Vec<f64>,
    l: Vec<f64>,
    u: Vec<f64>,
    /// reduced col -> eq-form col
    cols: Vec<usize>,
    /// reduced row -> eq-form row
    rows: Vec<usize>,
    /// eq-form col -> value, for columns resolved during presolve
    resolved: Vec<(usize, f64)>,
}

enum PresolveOutcome {
    Reduced(Reduced),
    Infeasible { row: usize, note: String },
    Unbounded { col: usize, direction: f64, note: String },
}

fn presolve(eq: &EqForm) -> PresolveOutcome {
    let mut resolved: Vec<(usize, f64)> = Vec::new();
    let mut is_resolved = vec![false; eq.n];
    let mut b = eq.rhs.clone();

    // Fixed variables move into the right-hand side.
    for j in 0..eq.n {
        if eq.lower[j] == eq.upper[j] {
            is_resolved[j] = true;
            resolved.push((j, eq.lower[j]));
        }
    }
    for &(r, c, v) in &eq.entries {
        if is_resolved[c] {
            b[r] -= v * eq.lower[c];
        }
    }

    let mut row_support = vec![0usize; eq.m];
    for &(r, c, _) in &eq.entries {
        if !is_resolved[c] {
            row_support[r] += 1;
        }
    }
    let scale = 1.0 + inf_norm(&eq.rhs);
    let mut keep_row = vec![true; eq.m];
    for i in 0..eq.m {
        if row_support[i] == 0 {
            if b[i].abs() > 1e-9 * scale {
                return PresolveOutcome::Infeasible {
                    row: i,
                    note: format!("row {i} reduces to 0 = {}, which is unsatisfiable", b[i]),
                };
            }
            keep_row[i] = false;
        }
    }

    let mut col_support = vec![0usize; eq.n];
    for &(r, c, _) in &eq.entries {
        if keep_row[r] && !is_resolved[c] {
            col_support[c] += 1;
        }
    }
    for j in 0..eq.n {
        if is_resolved[j] || col_support[j] > 0 {
            continue;
        }
        let (cj, lj, uj) = (eq.cost[j], eq.lower[j], eq.upper[j]);
        let value = if cj > 0.0 {
            if lj.is_infinite() {
                return PresolveOutcome::Unbounded {
                    col: j,
                    direction: -1.0,
                    note: format!("column {j} has positive cost and no lower bound"),
                };
            }
            lj
        } else if cj < 0.0 {
            if uj.is_infinite() {
                return PresolveOutcome::Unbounded {
                    col: j,
                    direction: 1.0,
                    note: format!("column {j} has negative cost and no upper bound"),
                };
            }
            uj
        } else if lj.is_finite() {
            lj.max(0.0).min(uj)
        } else if uj.is_finite() {
            uj.min(0.0)
        } else {
            0.0
        };
        is_resolved[j] = true;
        resolved.push((j, value));
    }

    let rows: Vec<usize> = (0..eq.m).filter(|&i| keep_row[i]).collect();
    let cols: Vec<usize> = (0..eq.n).filter(|&j| !is_resolved[j]).collect();
    let mut row_map = vec![usize::MAX; eq.m];
    for (k, &i) in rows.iter().enumerate() {
        row_map[i] = k;
    }
    let mut col_map = vec![usize::MAX; eq.n];
    for (k, &j) in cols.iter().enumerate() {
        col_map[j] = k;
    }

    let triplets: Vec<(usize, usize, f64)> = eq
        .entries
        .iter()
        .filter(|&&(r, c, _)| keep_row[r] && !is_resolved[c])
        .map(|&(r, c, v)| (row_map[r], col_map[c], v))
        .collect();
    let a = Csc::from_triplets(rows.len(), cols.len(), &triplets);
    let red = Reduced {
        b: rows.iter().map(|&i| b[i]).collect(),
        c: cols.iter().map(|&j| eq.cost[j]).collect(),
        l: cols.iter().map(|&j| eq.lower[j]).collect(),
        u: cols.iter().map(|&j| eq.upper[j]).collect(),
        a,
        cols,
        rows,
        resolved,
    };
    PresolveOutcome::Reduced(red)
}

// ---------------------------------------------------------------------------
// Ruiz equilibration
// ---------------------------------------------------------------------------

struct Scaling {
    row: Vec<f64>,
    col: Vec<f64>,
    cost: f64,
    rhs: f64,
}

fn equilibrate(red: &mut Reduced) -> Scaling {
    let (m, n) = (red.a.n_rows, red.a.n_cols);
    let mut row = vec![1.0; m];
    let mut col = vec![1.0; n];
    for _ in 0..6 {
        let mut row_max = vec![0.0f64; m];
        let mut col_max = vec![0.0f64; n];
        for j in 0..n {
            let (rows, vals) = red.a.col(j);
            for (&r, &v) in rows.iter().zip(vals) {
                let a = v.abs();
                row_max[r] = row_max[r].max(a);
                col_max[j] = col_max[j].max(a);
            }
        }
        let mut done = true;
        let adjust: Vec<f64> = row_max
            .iter()
            .map(|&v| if v > 0.0 { 1.0 / v.sqrt() } else { 1.0 })
            .collect();
        let col_adjust: Vec<f64> = col_max
            .iter()
            .map(|&v| if v > 0.0 { 1.0 / v.sqrt() } else { 1.0 })
            .collect();
        for (i, &s) in adjust.iter().enumerate() {
            if (s - 1.0).abs() > 1e-3 {
                done = false;
            }
            row[i] *= s;
        }
        for (j, &s) in col_adjust.iter().enumerate() {
            if (s - 1.0).abs() > 1e-3 {
                done = false;
            }
            col[j] *= s;
        }
        for j in 0..n {
            let range = red.a.col_ptr[j]..red.a.col_ptr[j + 1];
            for k in range {
                red.a.values[k] *= adjust[red.a.row_idx[k]] * col_adjust[j];
            }
        }
        if done {
            break;
        }
    }

    for j in 0..n {
        red.c[j] *= col[j];
        if red.l[j].is_finite() {
            red.l[j] /= col[j];
        }
        if red.u[j].is_finite() {
            red.u[j] /= col[j];
        }
    }
    for i in 0..m {
        red.b[i] *= row[i];
    }
    let cost = inf_norm(&red.c).max(1e-8);
    for v in red.c.iter_mut() {
        *v /= cost;
    }
    let rhs = inf_norm(&red.b)
        .max(red.l.iter().filter(|v| v.is_finite()).fold(0.0f64, |a, &b| a.max(b.abs())))
        .max(red.u.iter().filter(|v| v.is_finite()).fold(0.0f64, |a, &b| a.max(b.abs())))
        .max(1e-8);
    for v in red.b.iter_mut() {
        *v /= rhs;
    }
    for v in red.l.iter_mut() {
        if v.is_finite() {
            *v /= rhs;
        }
    }
    for v in red.u.iter_mut() {
        if v.is_finite() {
            *v /= rhs;
        }
    }
    Scaling { row, col, cost, rhs }
}

// ---------------------------------------------------------------------------
// Candidate evaluation on the original problem
// ---------------------------------------------------------------------------

pub(crate) struct Metrics {
    pub primal_inf: f64,
    pub bound_inf: f64,
    pub dual_inf: f64,
    pub gap_rel: f64,
    pub comp: f64,
    pub primal_obj: f64,
}

/// Residuals of a primal/dual candidate measured on the original problem.
pub(crate) fn candidate_metrics(p: &LpProblem, x: &[f64], y: &[f64]) -> Metrics {
    let ax = p.row_activity(x);
    let mut primal_inf = 0.0f64;
    let mut dual_inf = 0.0f64;
    let mut comp = 0.0f64;
    let primal_obj = p.objective_value(x);
    let mut dual_obj = 0.0;
    for i in 0..p.n_rows {
        let r = ax[i] - p.rhs[i];
        let viol = match p.row_sense[i] {
            RowSense::Eq => r.abs(),
            RowSense::Le => r.max(0.0),
            RowSense::Ge => (-r).max(0.0),
        };
        primal_inf = primal_inf.max(viol);
        // Row dual sign and complementarity with the row slack.
        match p.row_sense[i] {
            RowSense::Le => {
                dual_inf = dual_inf.max(y[i].max(0.0));
                comp = comp.max((y[i].abs()) * (-r).max(0.0));
            }
            RowSense::Ge => {
                dual_inf = dual_inf.max((-y[i]).max(0.0));
                comp = comp.max((y[i].abs()) * r.max(0.0));
            }
            RowSense::Eq => {}
        }
        dual_obj += p.rhs[i] * y[i];
    }

    let mut bound_inf = 0.0f64;
    let mut aty = vec![0.0; p.n_cols];
    for &(r, c, v) in &p.entries {
        aty[c as usize] += v * y[r as usize];
    }
    for j in 0..p.n_cols {
        let (l, u) = (p.col_lower[j], p.col_upper[j]);
        if l.is_finite() {
            bound_inf = bound_inf.max(l - x[j]);
        }
        if u.is_finite() {
            bound_inf = bound_inf.max(x[j] - u);
        }
        let rc = p.objective[j] - aty[j];
        if rc > 0.0 {
            if l.is_finite() {
                dual_obj += l * rc;
                comp = comp.max(rc * (x[j] - l).abs());
            } else {
                dual_inf = dual_inf.max(rc);
            }
        } else if rc < 0.0 {
            if u.is_finite() {
                dual_obj += u * rc;
                comp = comp.max(-rc * (u - x[j]).abs());
            } else {
                dual_inf = dual_inf.max(-rc);
            }
        }
    }
    let gap_rel = (primal_obj - dual_obj).abs() / (1.0 + primal_obj.abs());
    Metrics {
        primal_inf,
        bound_inf,
        dual_inf: dual_inf / (1.0 + inf_norm(&p.objective)),
        gap_rel,
        comp: comp / (1.0 + primal_obj.abs()),
        primal_obj,
    }
}

impl Metrics {
    fn passes(&self, tol: &Tolerances) -> bool {
        self.primal_inf <= tol.feasibility
            && self.bound_inf <= tol.feasibility
            && self.dual_inf <= tol.feasibility.max(1e-9)
            && self.gap_rel <= tol.optimality
            && self.comp <= tol.feasibility
    }

    fn quality(&self) -> SolveQuality {
        SolveQuality {
            primal_residual: self.primal_inf.max(self.bound_inf),
            dual_residual: self.dual_inf,
            duality_gap_rel: self.gap_rel,
            complementarity: self.comp,
        }
    }
}

// ---------------------------------------------------------------------------
// Interior point main loop
// ---------------------------------------------------------------------------

struct State {
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    w: Vec<f64>,
}

fn ipm_main(problem: &LpProblem, eq: &EqForm, mut red: Reduced, tol: &Tolerances) -> Result<LpSolution, LpError> {
    let scaling = equilibrate(&mut red);
    let (m, n) = (red.a.n_rows, red.a.n_cols);

    // Everything fixed by presolve: evaluate directly.
    if n == 0 {
        let x = expand_primal(eq, &red, &[], &scaling);
        let y = vec![0.0; problem.n_rows];
        let metrics = candidate_metrics(problem, &x, &y);
        if metrics.passes(tol) {
            return Ok(assemble_optimal(problem, x, y, metrics, 0));
        }
        return Ok(non_optimal(
            SolveStatus::IterationLimit,
            None,
            0,
            "presolved problem fails tolerances".into(),
        ));
    }

    let has_l: Vec<bool> = red.l.iter().map(|v| v.is_finite()).collect();
    let has_u: Vec<bool> = red.u.iter().map(|v| v.is_finite()).collect();
    let n_compl = has_l.iter().filter(|&&b| b).count() + has_u.iter().filter(|&&b| b).count();

    let mut kkt = KktSolver::new(&red.a).map_err(LpError::Malformed)?;

    // All-free problems are a pure least-squares computation.
    if n_compl == 0 {
        return least_squares_path(problem, eq, &red, &scaling, &mut kkt, tol);
    }

    let mut state = initial_point(&red, &has_l, &has_u, &mut kkt);
    let delta = 1e-9;
    let mut rhs = vec![0.0; n + m];
    let mut work = vec![0.0; n + m];
    let mut d = vec![0.0; n];
    let mut g = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut best_score = f64::INFINITY;
    let mut stall = 0usize;
    let mut iterations = 0usize;
    let mut abort_note: Option<String> = None;

    for iter in 0..tol.max_iterations {
        iterations = iter;
        if !state.x.iter().chain(&state.y).all(|v| v.is_finite()) {
            abort_note = Some(format!("iterate diverged to non-finite values at iteration {iter}"));
            break;
        }
        // Complementarity gaps, floored so rounding at a bound cannot flip
        // the sign of the barrier scaling.
        for j in 0..n {
            g[j] = if has_l[j] { (state.x[j] - red.l[j]).max(1e-307) } else { 1.0 };
            t[j] = if has_u[j] { (red.u[j] - state.x[j]).max(1e-307) } else { 1.0 };
        }
        let mut mu = 0.0;
        for j in 0..n {
            if has_l[j] {
                mu += g[j] * state.z[j];
            }
            if has_u[j] {
                mu += t[j] * state.w[j];
            }
        }
        mu = (mu / n_compl as f64).max(1e-300);

        // Termination and certificates are judged on the original problem.
        let x_orig = expand_primal(eq, &red, &state.x, &scaling);
        let y_orig = expand_dual(problem.n_rows, &red, &state.y, &scaling);
        let metrics = candidate_metrics(problem, &x_orig, &y_orig);
        if metrics.passes(tol) {
            return Ok(assemble_optimal(problem, x_orig, y_orig, metrics, iter));
        }
        if let Some(ray) = infeasibility_ray(problem, &y_orig) {
            return Ok(non_optimal(
                SolveStatus::Infeasible,
                Some(Certificate::DualRay(ray)),
                iter,
                "Farkas ray certifies primal infeasibility".into(),
            ));
        }
        if let Some(ray) = unbounded_ray(problem, &x_orig) {
            return Ok(non_optimal(
                SolveStatus::Unbounded,
                Some(Certificate::PrimalRay(ray)),
                iter,
                "improving ray certifies unboundedness".into(),
            ));
        }
        let score = metrics.primal_inf.max(metrics.bound_inf).max(metrics.dual_inf).max(metrics.gap_rel);
        if score < best_score * 0.999 {
            best_score = score;
            stall = 0;
        } else {
            stall += 1;
            if stall > 40 {
                abort_note = Some(format!("no progress over 40 iterations (stopped at iteration {iter})"));
                break;
            }
        }

        // Scaling matrix of the augmented system.
        for j in 0..n {
            let mut dj = 0.0;
            if has_l[j] {
                dj += state.z[j] / g[j];
            }
            if has_u[j] {
                dj += state.w[j] / t[j];
            }
            d[j] = dj;
        }
        kkt.factorize(&d, delta, delta, 1e-13).map_err(LpError::Malformed)?;

        // Residuals in the scaled space.
        let mut rp = red.b.clone();
        {
            let mut ax = vec![0.0; m];
            red.a.mul_acc(&state.x, &mut ax);
            for i in 0..m {
                rp[i] -= ax[i];
            }
        }
        let mut rd = vec![0.0; n];
        red.a.mul_transpose(&state.y, &mut rd);
        for j in 0..n {
            rd[j] = red.c[j] - rd[j] - state.z[j] + state.w[j];
        }

        // Predictor: pure Newton step towards complementarity zero.
        for j in 0..n {
            // rhat_d = rd + z - w  (affine complementarity right-hand side)
            rhs[j] = rd[j] + state.z[j] - state.w[j];
        }
        rhs[n..n + m].copy_from_slice(&rp);
        kkt.solve(&mut rhs);
        kkt.refine(&red.a, &d, &{
            let mut rx = vec![0.0; n];
            for j in 0..n {
                rx[j] = rd[j] + state.z[j] - state.w[j];
            }
            rx
        }, &rp, &mut rhs, &mut work);
        let dx_aff = rhs[..n].to_vec();
        let mut dz_aff = vec![0.0; n];
        let mut dw_aff = vec![0.0; n];
        for j in 0..n {
            if has_l[j] {
                dz_aff[j] = -state.z[j] - state.z[j] / g[j] * dx_aff[j];
            }
            if has_u[j] {
                dw_aff[j] = -state.w[j] + state.w[j] / t[j] * dx_aff[j];
            }
        }
        let (ap_aff, ad_aff) = step_lengths(&state, &g, &t, &has_l, &has_u, &dx_aff, &dz_aff, &dw_aff, 1.0);
        let mut mu_aff = 0.0;
        for j in 0..n {
            if has_l[j] {
                mu_aff += (g[j] + ap_aff * dx_aff[j]) * (state.z[j] + ad_aff * dz_aff[j]);
            }
            if has_u[j] {
                mu_aff += (t[j] - ap_aff * dx_aff[j]) * (state.w[j] + ad_aff * dw_aff[j]);
            }
        }
        mu_aff /= n_compl as f64;
        let sigma = (mu_aff / mu).powi(3).clamp(1e-9, 0.9999);

        // Corrector with centering.
        let target = sigma * mu;
        let mut rx = vec![0.0; n];
        for j in 0..n {
            let mut v = rd[j];
            if has_l[j] {
                let rc_l = target - g[j] * state.z[j] - dx_aff[j] * dz_aff[j];
                v -= rc_l / g[j];
            }
            if has_u[j] {
                let rc_u = target - t[j] * state.w[j] + dx_aff[j] * dw_aff[j];
                v += rc_u / t[j];
            }
            rx[j] = v;
        }
        rhs[..n].copy_from_slice(&rx);
        rhs[n..n + m].copy_from_slice(&rp);
        kkt.solve(&mut rhs);
        kkt.refine(&red.a, &d, &rx, &rp, &mut rhs, &mut work);
        kkt.refine(&red.a, &d, &rx, &rp, &mut rhs, &mut work);
        let dx = rhs[..n].to_vec();
        let dy = rhs[n..n + m].to_vec();
        let mut dz = vec![0.0; n];
        let mut dw = vec![0.0; n];
        for j in 0..n {
            if has_l[j] {
                let rc_l = target - g[j] * state.z[j] - dx_aff[j] * dz_aff[j];
                dz[j] = (rc_l - state.z[j] * dx[j]) / g[j];
            }
            if has_u[j] {
                let rc_u = target - t[j] * state.w[j] + dx_aff[j] * dw_aff[j];
                dw[j] = (rc_u + state.w[j] * dx[j]) / t[j];
            }
        }

        let mu_rel = mu / (1.0 + inf_norm(&red.b));
        let eta = if iter < 2 {
            0.9
        } else if mu_rel > 1e-5 {
            0.995
        } else {
            0.99995
        };
        let (ap, ad) = step_lengths(&state, &g, &t, &has_l, &has_u, &dx, &dz, &dw, eta);
        if ap < 1e-12 && ad < 1e-12 {
            abort_note = Some(format!("step lengths collapsed at iteration {iter}"));
            break;
        }
        for j in 0..n {
            state.x[j] += ap * dx[j];
            state.z[j] += ad * dz[j];
            state.w[j] += ad * dw[j];
            if has_l[j] {
                state.z[j] = state.z[j].max(1e-300);
            }
            if has_u[j] {
                state.w[j] = state.w[j].max(1e-300);
            }
        }
        for i in 0..m {
            state.y[i] += ad * dy[i];
        }
    }

    // Final polish: a few primal-residual-only corrections, which the D
    // weighting keeps away from active bounds, then re-evaluate.
    let finite = |state: &State| state.x.iter().chain(&state.y).all(|v| v.is_finite());
    for _ in 0..4 {
        if !finite(&state) {
            break;
        }
        let x_orig = expand_primal(eq, &red, &state.x, &scaling);
        let y_orig = expand_dual(problem.n_rows, &red, &state.y, &scaling);
        let metrics = candidate_metrics(problem, &x_orig, &y_orig);
        if metrics.passes(tol) {
            return Ok(assemble_optimal(problem, x_orig, y_orig, metrics, iterations));
        }
        if metrics.primal_inf <= tol.feasibility {
            break;
        }
        let mut rp = red.b.clone();
        let mut ax = vec![0.0; m];
        red.a.mul_acc(&state.x, &mut ax);
        for i in 0..m {
            rp[i] -= ax[i];
        }
        for v in rhs[..n].iter_mut() {
            *v = 0.0;
        }
        rhs[n..n + m].copy_from_slice(&rp);
        kkt.solve(&mut rhs);
        for j in 0..n {
            state.x[j] += rhs[j];
        }
    }

    if finite(&state) {
        let x_orig = expand_primal(eq, &red, &state.x, &scaling);
        let y_orig = expand_dual(problem.n_rows, &red, &state.y, &scaling);
        let metrics = candidate_metrics(problem, &x_orig, &y_orig);
        if metrics.passes(tol) {
            return Ok(assemble_optimal(problem, x_orig, y_orig, metrics, iterations));
        }
        if let Some(ray) = infeasibility_ray(problem, &y_orig) {
            return Ok(non_optimal(
                SolveStatus::Infeasible,
                Some(Certificate::DualRay(ray)),
                iterations,
                "Farkas ray certifies primal infeasibility".into(),
            ));
        }
        if let Some(ray) = unbounded_ray(problem, &x_orig) {
            return Ok(non_optimal(
                SolveStatus::Unbounded,
                Some(Certificate::PrimalRay(ray)),
                iterations,
                "improving ray certifies unboundedness".into(),
            ));
        }
        if abort_note.is_none() {
            abort_note = Some(format!(
                "no certified answer within {} iterations (primal {:.3e}, dual {:.3e}, gap {:.3e})",
                tol.max_iterations, metrics.primal_inf, metrics.dual_inf, metrics.gap_rel
            ));
        }
    }
    Ok(non_optimal(
        SolveStatus::IterationLimit,
        None,
        iterations,
        abort_note.unwrap_or_else(|| "stopped without a certified answer".into()),
    ))
}

#[allow(clippy::too_many_arguments)]
fn step_lengths(
    state: &State,
    g: &[f64],
    t: &[f64],
    has_l: &[bool],
    has_u: &[bool],
    dx: &[f64],
    dz: &[f64],
    dw: &[f64],
    eta: f64,
) -> (f64, f64) {
    let n = dx.len();
    let mut ap = 1.0f64 / eta.max(1e-12);
    let mut ad = 1.0f64 / eta.max(1e-12);
    for j in 0..n {
        if has_l[j] {
            if dx[j] < 0.0 {
                ap = ap.min(g[j] / -dx[j]);
            }
            if dz[j] < 0.0 {
                ad = ad.min(state.z[j] / -dz[j]);
            }
        }
        if has_u[j] {
            if dx[j] > 0.0 {
                ap = ap.min(t[j] / dx[j]);
            }
            if dw[j] < 0.0 {
                ad = ad.min(state.w[j] / -dw[j]);
            }
        }
    }
    ((eta * ap).min(1.0), (eta * ad).min(1.0))
}

fn initial_point(red: &Reduced, has_l: &[bool], has_u: &[bool], kkt: &mut KktSolver) -> State {
    let (m, n) = (red.a.n_rows, red.a.n_cols);
    let ones = vec![1.0; n];
    kkt.factorize(&ones, 1e-8, 1e-8, 1e-13).expect("initial factorization");

    // Minimum-norm primal estimate: x = A'(AA')^-1 b.
    let mut rhs = vec![0.0; n + m];
    rhs[n..].copy_from_slice(&red.b);
    kkt.solve(&mut rhs);
    let x_ls = &rhs[..n];

    let mut x = vec![0.0; n];
    for j in 0..n {
        let margin = 1.0f64;
        x[j] = match (has_l[j], has_u[j]) {
            (true, true) => {
                let q = margin.min(0.25 * (red.u[j] - red.l[j]));
                x_ls[j].clamp(red.l[j] + q, red.u[j] - q).clamp(red.l[j], red.u[j])
            }
            (true, false) => x_ls[j].max(red.l[j] + margin),
            (false, true) => x_ls[j].min(red.u[j] - margin),
            (false, false) => x_ls[j],
        };
    }

    // Least-squares dual estimate.
    let mut rhs2 = vec![0.0; n + m];
    rhs2[..n].copy_from_slice(&red.c);
    kkt.solve(&mut rhs2);
    let y: Vec<f64> = rhs2[n..].to_vec();
    let mut r = vec![0.0; n];
    red.a.mul_transpose(&y, &mut r);
    for j in 0..n {
        r[j] = red.c[j] - r[j];
    }
    let mut z = vec![0.0; n];
    let mut w = vec![0.0; n];
    for j in 0..n {
        if has_l[j] {
            z[j] = r[j].max(0.0) + 1.0;
        }
        if has_u[j] {
            w[j] = (-r[j]).max(0.0) + 1.0;
        }
    }
    State { x, y, z, w }
}

fn least_squares_path(
    problem: &LpProblem,
    eq: &EqForm,
    red: &Reduced,
    scaling: &Scaling,
    kkt: &mut KktSolver,
    tol: &Tolerances,
) -> Result<LpSolution, LpError> {
    let (m, n) = (red.a.n_rows, red.a.n_cols);
    let ones = vec![1.0; n];
    kkt.factorize(&ones, 1e-10, 1e-10, 1e-14).map_err(LpError::Malformed)?;
    let mut rhs = vec![0.0; n + m];
    rhs[n..].copy_from_slice(&red.b);
    kkt.solve(&mut rhs);
    let x: Vec<f64> = rhs[..n].to_vec();
    let mut rhs2 = vec![0.0; n + m];
    rhs2[..n].copy_from_slice(&red.c);
    kkt.solve(&mut rhs2);
    let y: Vec<f64> = rhs2[n..].to_vec();
    let x_orig = expand_primal(eq, red, &x, scaling);
    let y_orig = expand_dual(problem.n_rows, red, &y, scaling);
    let metrics = candidate_metrics(problem, &x_orig, &y_orig);
    if metrics.passes(tol) {
        return Ok(assemble_optimal(problem, x_orig, y_orig, metrics, 1));
    }
    if metrics.dual_inf > tol.feasibility {
        // The projection of -c onto null(A) is an exact improving ray.
        let mut r = vec![0.0; n];
        red.a.mul_transpose(&y, &mut r);
        for j in 0..n {
            r[j] = -(red.c[j] - r[j]);
        }
        let mut ray = vec![0.0; problem.n_cols];
        for (k, &j) in red.cols.iter().enumerate() {
            if j < problem.n_cols {
                ray[j] = r[k] * scaling.col[k];
            }
        }
        let norm = inf_norm(&ray);
        if norm > 0.0 {
            for v in ray.iter_mut() {
                *v /= norm;
            }
            return Ok(non_optimal(
                SolveStatus::Unbounded,
                Some(Certificate::PrimalRay(ray)),
                1,
                "cost has a component in the constraint null space".into(),
            ));
        }
    }
    Ok(non_optimal(SolveStatus::IterationLimit, None, 1, "free-variable least squares failed tolerances".into()))
}

fn expand_primal(eq: &EqForm, red: &Reduced, x_red: &[f64], scaling: &Scaling) -> Vec<f64> {
    let mut x_eq = vec![0.0; eq.n];
    for (k, &j) in red.cols.iter().enumerate() {
        x_eq[j] = x_red[k] * scaling.col[k] * scaling.rhs;
    }
    for &(j, v) in &red.resolved {
        x_eq[j] = v;
    }
    x_eq.truncate(eq.n_orig);
    x_eq
}

fn expand_dual(n_rows: usize, red: &Reduced, y_red: &[f64], scaling: &Scaling) -> Vec<f64> {
    let mut y = vec![0.0; n_rows];
    for (k, &i) in red.rows.iter().enumerate() {
        y[i] = y_red[k] * scaling.row[k] * scaling.cost;
    }
    y
}

fn assemble_optimal(problem: &LpProblem, x: Vec<f64>, y: Vec<f64>, metrics: Metrics, iterations: usize) -> LpSolution {
    let mut rc = problem.objective.clone();
    for &(r, c, v) in &problem.entries {
        rc[c as usize] -= v * y[r as usize];
    }
    LpSolution {
        status: SolveStatus::Optimal,
        objective: Some(metrics.primal_obj),
        primal: Some(x),
        dual: Some(y),
        reduced_costs: Some(rc),
        certificate: None,
        iterations,
        quality: metrics.quality(),
        note: None,
    }
}

/// Tests the sign-projected dual iterate as a Farkas certificate of primal
/// infeasibility, on unscaled data.
fn infeasibility_ray(p: &LpProblem, y: &[f64]) -> Option<Vec<f64>> {
    let mut ray: Vec<f64> = y
        .iter()
        .zip(&p.row_sense)
        .map(|(&v, sense)| match sense {
            RowSense::Le => v.min(0.0),
            RowSense::Ge => v.max(0.0),
            RowSense::Eq => v,
        })
        .collect();
    let norm = inf_norm(&ray);
    if norm <= 1e-12 {
        return None;
    }
    for v in ray.iter_mut() {
        *v /= norm;
    }
    let mut aty = vec![0.0; p.n_cols];
    for &(r, c, v) in &p.entries {
        aty[c as usize] += v * ray[r as usize];
    }
    // margin = b'y - sup_{l<=x<=u} (A'y)'x ; positive margin proves emptiness.
    let mut margin: f64 = ray.iter().zip(&p.rhs).map(|(y, b)| y * b).sum();
    for j in 0..p.n_cols {
        let a = aty[j];
        if a > 1e-11 {
            if p.col_upper[j].is_infinite() {
                return None;
            }
            margin -= a * p.col_upper[j];
        } else if a < -1e-11 {
            if p.col_lower[j].is_infinite() {
                return None;
            }
            margin -= a * p.col_lower[j];
        }
    }
    let scale = 1.0 + inf_norm(&p.rhs);
    if margin > 1e-6 * scale {
        Some(ray)
    } else {
        None
    }
}

/// Tests the (clipped) primal iterate as an improving ray, on unscaled data.
fn unbounded_ray(p: &LpProblem, x: &[f64]) -> Option<Vec<f64>> {
    let norm = inf_norm(x);
    if norm < 1e7 {
        return None;
    }
    let mut ray: Vec<f64> = x.iter().map(|&v| v / norm).collect();
    for j in 0..p.n_cols {
        match (p.col_lower[j].is_finite(), p.col_upper[j].is_finite()) {
            (true, true) => ray[j] = 0.0,
            (true, false) => ray[j] = ray[j].max(0.0),
            (false, true) => ray[j] = ray[j].min(0.0),
            (false, false) => {}
        }
        if ray[j].abs() < 1e-9 {
            ray[j] = 0.0;
        }
    }
    let cost: f64 = p.objective.iter().zip(&ray).map(|(c, d)| c * d).sum();
    if cost >= -1e-7 * (1.0 + inf_norm(&p.objective)) {
        return None;
    }
    let act = p.row_activity(&ray);
    let tol = 1e-6;
    for i in 0..p.n_rows {
        let ok = match p.row_sense[i] {
            RowSense::Eq => act[i].abs() <= tol,
            RowSense::Le => act[i] <= tol,
            RowSense::Ge => act[i] >= -tol,
        };
        if !ok {
            return None;
        }
    }
    Some(ray)
}
