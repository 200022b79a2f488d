//! Shared test support: the brute-force vertex-enumeration oracle and a
//! deterministic random LP generator.
//!
//! The oracle is deliberately independent of the solver: it enumerates every
//! candidate active set (equality rows always active, plus subsets of
//! inequality rows and variables pinned at bounds), solves the resulting
//! square systems by Gaussian elimination, filters feasible points, and takes
//! the minimum objective.

use h2flex::model::{
    Bus, BusId, Carrier, CarrierId, Generator, Link, Load, Network, SnapshotSet, Store,
};
use h2flex::solver::{ColTag, LpBuilder, LpProblem, RowSense, RowTag};
use rand::Rng;

#[allow(dead_code)]
pub fn carrier(name: &str, co2: f64, renewable: bool) -> Carrier {
    Carrier { name: name.into(), co2_factor: co2, renewable }
}

#[allow(dead_code)]
pub fn generator(id: &str, bus: usize, carrier: usize, p: f64, mc: f64, avail: Vec<f64>) -> Generator {
    Generator {
        id: id.into(),
        bus: BusId(bus),
        carrier: CarrierId(carrier),
        p_existing: p,
        extendable: false,
        p_max_build: None,
        capex_annual: 0.0,
        marginal_cost: mc,
        availability: avail,
        tech_class: id.into(),
    }
}

#[allow(dead_code)]
pub fn extendable_generator(id: &str, bus: usize, carrier: usize, capex: f64, mc: f64, avail: Vec<f64>) -> Generator {
    Generator {
        id: id.into(),
        bus: BusId(bus),
        carrier: CarrierId(carrier),
        p_existing: 0.0,
        extendable: true,
        p_max_build: None,
        capex_annual: capex,
        marginal_cost: mc,
        availability: avail,
        tech_class: id.into(),
    }
}

#[allow(dead_code)]
pub fn link(id: &str, from: usize, to: usize, eff: f64, p: f64) -> Link {
    Link {
        id: id.into(),
        from_bus: BusId(from),
        to_bus: BusId(to),
        efficiency: eff,
        p_existing: p,
        extendable: false,
        capex_annual: 0.0,
        marginal_cost: 0.0,
        electrolyzer: false,
        tech_class: id.into(),
    }
}

#[allow(dead_code)]
pub fn store(id: &str, bus: usize, e: f64, cyclic: bool) -> Store {
    Store {
        id: id.into(),
        bus: BusId(bus),
        e_existing: e,
        extendable: false,
        capex_annual: 0.0,
        cyclic,
        fictional: false,
        tech_class: id.into(),
    }
}

#[allow(dead_code)]
pub fn load(id: &str, bus: usize, profile: Vec<f64>) -> Load {
    Load { id: id.into(), bus: BusId(bus), profile, sector: "demand".into() }
}

/// Cheap fossil power, an extendable renewable, an electrolyzer and a
/// domestic hydrogen demand: the fixture where the temporal-matching policy
/// strictly binds.
#[allow(dead_code)]
pub fn cheap_fossil_system() -> Network {
    Network {
        carriers: vec![
            carrier("electricity", 0.0, false),
            carrier("hydrogen", 0.0, false),
            carrier("solar", 0.0, true),
            carrier("gas", 0.2, false),
        ],
        snapshots: SnapshotSet::single_month(4, 1.0),
        buses: vec![
            Bus { id: "el".into(), carrier: CarrierId(0), export_port: false },
            Bus { id: "h2".into(), carrier: CarrierId(1), export_port: true },
        ],
        generators: vec![
            generator("gas", 0, 3, 100.0, 5.0, vec![1.0; 4]),
            extendable_generator("solar", 0, 2, 50.0, 0.0, vec![1.0; 4]),
        ],
        links: vec![Link {
            electrolyzer: true,
            efficiency: 0.5,
            ..link("ely", 0, 1, 0.5, 100.0)
        }],
        stores: vec![],
        loads: vec![load("h2demand", 1, vec![1.0; 4])],
    }
}

/// A hydrogen-only system: one export-port bus with two hydrogen sources, a
/// cheap one restricted by `cheap_avail` and an always-on expensive one.
#[allow(dead_code)]
pub fn h2_port_system(t: usize, weight: f64, cheap_avail: Vec<f64>, cheap_cap: f64) -> Network {
    Network {
        carriers: vec![carrier("hydrogen", 0.0, false)],
        snapshots: SnapshotSet::single_month(t, weight),
        buses: vec![Bus { id: "port".into(), carrier: CarrierId(0), export_port: true }],
        generators: vec![
            generator("cheap", 0, 0, cheap_cap, 1.0, cheap_avail),
            generator("expensive", 0, 0, 1000.0, 10.0, vec![1.0; t]),
        ],
        links: vec![],
        stores: vec![],
        loads: vec![],
    }
}

/// Minimum objective over all vertices, or `None` when no feasible vertex
/// exists (for problems with bounded boxes this means infeasible).
pub fn brute_force_optimum(p: &LpProblem) -> Option<f64> {
    let n = p.n_cols;
    let m = p.n_rows;
    assert!(n <= 12 && m <= 8, "oracle is exponential; keep problems tiny");

    let mut dense = vec![vec![0.0f64; n]; m];
    for &(r, c, v) in &p.entries {
        dense[r as usize][c as usize] = v;
    }
    let eq_rows: Vec<usize> = (0..m).filter(|&i| p.row_sense[i] == RowSense::Eq).collect();
    let ineq_rows: Vec<usize> = (0..m).filter(|&i| p.row_sense[i] != RowSense::Eq).collect();

    let scale = 1.0 + p.rhs.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let feas_tol = 1e-7 * scale;
    let mut best: Option<f64> = None;

    for row_mask in 0u32..(1 << ineq_rows.len()) {
        let extra: Vec<usize> =
            (0..ineq_rows.len()).filter(|&k| row_mask >> k & 1 == 1).map(|k| ineq_rows[k]).collect();
        let k = eq_rows.len() + extra.len();
        if k > n {
            continue;
        }
        let active: Vec<usize> = eq_rows.iter().chain(&extra).copied().collect();

        // Choose which variables stay free (exactly k of them).
        for var_mask in 0u32..(1 << n) {
            if var_mask.count_ones() as usize != k {
                continue;
            }
            let free: Vec<usize> = (0..n).filter(|&j| var_mask >> j & 1 == 1).collect();
            let fixed: Vec<usize> = (0..n).filter(|&j| var_mask >> j & 1 == 0).collect();
            // Every fixed variable sits at its lower or upper bound.
            for bound_mask in 0u32..(1 << fixed.len()) {
                let mut x = vec![0.0f64; n];
                let mut ok = true;
                for (idx, &j) in fixed.iter().enumerate() {
                    let at_upper = bound_mask >> idx & 1 == 1;
                    let v = if at_upper { p.col_upper[j] } else { p.col_lower[j] };
                    if !v.is_finite() {
                        ok = false;
                        break;
                    }
                    x[j] = v;
                }
                if !ok {
                    continue;
                }
                if !solve_active(&dense, &p.rhs, &active, &free, &mut x) {
                    continue;
                }
                if is_feasible(p, &dense, &x, feas_tol) {
                    let obj = p.objective_value(&x);
                    best = Some(match best {
                        Some(b) => b.min(obj),
                        None => obj,
                    });
                }
            }
        }
    }
    best
}

/// Solves rows `active` over columns `free` with the fixed part already in
/// `x`; returns false for (near-)singular systems.
fn solve_active(dense: &[Vec<f64>], rhs: &[f64], active: &[usize], free: &[usize], x: &mut [f64]) -> bool {
    let k = active.len();
    debug_assert_eq!(k, free.len());
    if k == 0 {
        return true;
    }
    let mut a = vec![vec![0.0f64; k + 1]; k];
    for (ri, &row) in active.iter().enumerate() {
        for (ci, &col) in free.iter().enumerate() {
            a[ri][ci] = dense[row][col];
        }
        let mut b = rhs[row];
        for (col, xv) in x.iter().enumerate() {
            if !free.contains(&col) {
                b -= dense[row][col] * xv;
            }
        }
        a[ri][k] = b;
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..k {
        let (pivot_row, pivot) = (col..k)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if pivot < 1e-10 {
            return false;
        }
        a.swap(col, pivot_row);
        for r in 0..k {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=k {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    for (ci, &col) in free.iter().enumerate() {
        x[col] = a[ci][k] / a[ci][ci];
    }
    true
}

fn is_feasible(p: &LpProblem, dense: &[Vec<f64>], x: &[f64], tol: f64) -> bool {
    for j in 0..p.n_cols {
        if x[j] < p.col_lower[j] - tol || x[j] > p.col_upper[j] + tol {
            return false;
        }
    }
    for i in 0..p.n_rows {
        let ax: f64 = dense[i].iter().zip(x).map(|(a, x)| a * x).sum();
        let ok = match p.row_sense[i] {
            RowSense::Eq => (ax - p.rhs[i]).abs() <= tol,
            RowSense::Le => ax <= p.rhs[i] + tol,
            RowSense::Ge => ax >= p.rhs[i] - tol,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// A random dense LP with bounded boxes, feasible by construction: the rhs is
/// set so that a sampled interior point satisfies every row.
pub fn random_box_lp<R: Rng>(rng: &mut R) -> LpProblem {
    let n = rng.gen_range(2..=8);
    let m = rng.gen_range(1..=6);
    let mut b = LpBuilder::new();
    let mut x0 = Vec::with_capacity(n);
    for _ in 0..n {
        let lower = if rng.gen_bool(0.3) { -rng.gen_range(0.0..5.0) } else { 0.0 };
        let upper = lower + rng.gen_range(0.5..8.0);
        let cost = rng.gen_range(-5.0..5.0);
        b.add_col(lower, upper, cost, ColTag::Other);
        x0.push(rng.gen_range(lower..upper));
    }
    let mut eq_rows = 0usize;
    for _ in 0..m {
        let mut activity = 0.0;
        let mut coeffs = Vec::with_capacity(n);
        for &x in &x0 {
            let a = if rng.gen_bool(0.8) { rng.gen_range(-2.0..2.0) } else { 0.0 };
            coeffs.push(a);
            activity += a * x;
        }
        if coeffs.iter().all(|&a| a == 0.0) {
            let j = rng.gen_range(0..n);
            coeffs[j] = rng.gen_range(0.5..1.5);
            activity = coeffs[j] * x0[j];
        }
        // Keep equality rows below the variable count so every vertex is an
        // independent active set the oracle can enumerate.
        let (sense, rhs) = match rng.gen_range(0..10) {
            0 | 1 if eq_rows + 1 < n => {
                eq_rows += 1;
                (RowSense::Eq, activity)
            }
            0..=5 => (RowSense::Le, activity + rng.gen_range(0.0..3.0)),
            _ => (RowSense::Ge, activity - rng.gen_range(0.0..3.0)),
        };
        let row = b.add_row(sense, rhs, RowTag::Other);
        for (j, &a) in coeffs.iter().enumerate() {
            b.set_coeff(row, j as u32, a);
        }
    }
    b.finish().unwrap()
}
