//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use dpmech_core::eval::EvalRng;
use dpmech_core::{geometric, LinearProgram, Mechanism, PrivacyLevel, Relation};
use rand::Rng;

pub const ALPHA_GRID: [f64; 7] = [1.0 / 3.0, 0.5, 0.62, 2.0 / 3.0, 0.76, 0.9, 10.0 / 11.0];

pub fn alpha(a: f64) -> PrivacyLevel {
    PrivacyLevel::new(a).unwrap()
}

/// Exponent pattern of the explicit fair mechanism, written out from its
/// definition: distance below the nearer edge, then half-steps.
fn fair_exponent(n: usize, i: usize, j: usize) -> i32 {
    let (i, j, n) = (i as i32, j as i32, n as i32);
    let dist = (i - j).abs();
    let edge = j.min(n - j);
    if dist < edge {
        dist
    } else {
        (dist + edge + 1) / 2
    }
}

/// Diagonal of the explicit fair mechanism by normalising its middle column.
pub fn fair_diagonal_oracle(n: usize, a: f64) -> f64 {
    let j = n / 2;
    let total: f64 = (0..=n).map(|i| a.powi(fair_exponent(n, i, j))).sum();
    1.0 / total
}

/// L0 cost of the explicit fair mechanism via the oracle diagonal.
pub fn fair_cost_oracle(n: usize, a: f64) -> f64 {
    (n + 1) as f64 / n as f64 * (1.0 - fair_diagonal_oracle(n, a))
}

/// Random column-stochastic matrix with strictly positive entries.
pub fn random_stochastic(n: usize, rng: &mut EvalRng) -> Vec<Vec<f64>> {
    let dim = n + 1;
    let mut m = vec![vec![0.0; dim]; dim];
    for j in 0..dim {
        let col: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() + 1e-3).collect();
        let s: f64 = col.iter().sum();
        for i in 0..dim {
            m[i][j] = col[i] / s;
        }
    }
    m
}

/// Matrix product `a * b` of square matrices.
pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn to_rows(m: &Mechanism) -> Vec<Vec<f64>> {
    (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
}

/// A random `alpha`-DP mechanism: random post-processing of GM, optionally
/// blended with GM itself so structured properties sometimes survive.
pub fn random_dp_mechanism(n: usize, a: f64, rng: &mut EvalRng) -> Mechanism {
    let gm = to_rows(&geometric(n, alpha(a)).unwrap());
    let post = matmul(&random_stochastic(n, rng), &gm);
    let t: f64 = match rng.random_range(0..3) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.random(),
    };
    let rows = (0..=n)
        .map(|i| (0..=n).map(|j| t * gm[i][j] + (1.0 - t) * post[i][j]).collect())
        .collect();
    Mechanism::new(n, rows).unwrap()
}

/// Minimum of a bounded LP by enumerating every basic solution: each choice of
/// `num_vars` tight hyperplanes (rows or finite bounds) that yields a feasible
/// point. Returns `None` when no vertex is feasible.
pub fn vertex_enumeration(lp: &LinearProgram) -> Option<f64> {
    let nv = lp.num_vars();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for c in lp.constraints() {
        planes.push((c.coeffs.clone(), c.rhs));
    }
    for (k, &(lo, hi)) in lp.bounds().iter().enumerate() {
        for b in [lo, hi] {
            if b.is_finite() {
                let mut e = vec![0.0; nv];
                e[k] = 1.0;
                planes.push((e, b));
            }
        }
    }
    let mut best: Option<f64> = None;
    let mut pick = Vec::with_capacity(nv);
    choose(&planes, nv, 0, &mut pick, &mut |subset| {
        if let Some(x) = solve_square(subset.iter().map(|&p| &planes[p]).collect()) {
            if lp.max_violation(&x) <= 1e-9 {
                let v = lp.evaluate(&x);
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
        }
    });
    best
}

fn choose(planes: &[(Vec<f64>, f64)], k: usize, start: usize, pick: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for p in start..planes.len() {
        pick.push(p);
        choose(planes, k, p + 1, pick, f);
        pick.pop();
    }
}

fn solve_square(rows: Vec<&(Vec<f64>, f64)>) -> Option<Vec<f64>> {
    let m = rows.len();
    let mut a: Vec<Vec<f64>> = rows.iter().map(|(c, b)| {
        let mut r = c.clone();
        r.push(*b);
        r
    }).collect();
    for col in 0..m {
        let piv = (col..m).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(piv, col);
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                for k in col..=m {
                    a[r][k] -= f * a[col][k];
                }
            }
        }
    }
    Some((0..m).map(|r| a[r][m] / a[r][r]).collect())
}

/// Random small LP with integer data and a bounding box on every variable.
pub fn random_lp(rng: &mut EvalRng, max_vars: usize) -> LinearProgram {
    let nv = rng.random_range(1..=max_vars);
    let rows = rng.random_range(0..=5);
    let mut lp = LinearProgram::new(nv);
    lp.set_objective((0..nv).map(|_| rng.random_range(-5..=5) as f64).collect()).unwrap();
    for _ in 0..rows {
        let coeffs = (0..nv).map(|_| rng.random_range(-4..=4) as f64).collect();
        let rel = match rng.random_range(0..4) {
            0 => Relation::Eq,
            1 => Relation::Ge,
            _ => Relation::Le,
        };
        lp.add_constraint(coeffs, rel, rng.random_range(-6..=10) as f64).unwrap();
    }
    for k in 0..nv {
        let lo = rng.random_range(-3..=1) as f64;
        let hi = lo + rng.random_range(1..=6) as f64;
        lp.set_bounds(k, lo, hi).unwrap();
    }
    lp
}
