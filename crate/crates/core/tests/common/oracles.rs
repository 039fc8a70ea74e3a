//! Test-only oracles that share no code with the simplex engine.


use pamin::{PiecewiseAffineFn, Vector};
use rand::{Rng, RngExt};

/// Solves `M y = rhs` for a tall or square `M` (rows x cols) by Gaussian
/// elimination with partial pivoting. Returns `None` unless the columns are
/// independent and the system is consistent.
pub fn solve_exact(m: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut r = r.clone();
            r.push(b);
            r
        })
        .collect();
    let scale = a.iter().flatten().fold(1.0f64, |s, x| s.max(x.abs()));
    let tol = 1e-10 * scale;
    for c in 0..cols {
        let p = (c..rows).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() <= tol {
            return None;
        }
        a.swap(c, p);
        for r in 0..rows {
            if r != c {
                let f = a[r][c] / a[c][c];
                for j in c..=cols {
                    a[r][j] -= f * a[c][j];
                }
            }
        }
    }
    if a[cols..].iter().any(|r| r[cols].abs() > 1e-8 * scale) {
        return None;
    }
    Some((0..cols).map(|c| a[c][cols] / a[c][c]).collect())
}

/// Every basic feasible solution of `{x >= 0 : A x = b}` found by solving
/// over each subset of independent columns.
pub fn basic_feasible_points(a: &[Vec<f64>], b: &[f64]) -> Vec<Vec<f64>> {
    let k = a.first().map_or(0, Vec::len);
    assert!(k <= 16, "enumeration oracle is exponential");
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        let cols: Vec<usize> = (0..k).filter(|j| mask >> j & 1 == 1).collect();
        if cols.len() > a.len() {
            continue;
        }
        let sub: Vec<Vec<f64>> = a.iter().map(|r| cols.iter().map(|&j| r[j]).collect()).collect();
        if let Some(y) = solve_exact(&sub, b) {
            if y.iter().all(|&v| v >= -1e-9) {
                let mut x = vec![0.0; k];
                for (&j, &v) in cols.iter().zip(&y) {
                    x[j] = v.max(0.0);
                }
                out.push(x);
            }
        }
    }
    if b.iter().all(|&v| v == 0.0) {
        out.push(vec![0.0; k]);
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Best objective over the enumerated vertices, `None` if there are none.
pub fn vertex_max(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<f64> {
    basic_feasible_points(a, b)
        .iter()
        .map(|x| dot(c, x))
        .max_by(f64::total_cmp)
}

/// Slice maximum `max sum l_i a_i` over `{l in simplex : sum l_i v_i = 0}`
/// with dense gradients, by vertex enumeration.
pub fn slice_max_by_enumeration(consts: &[f64], grads: &[Vec<f64>]) -> Option<f64> {
    let n = grads[0].len();
    let k = consts.len();
    let mut a: Vec<Vec<f64>> = (0..n).map(|j| grads.iter().map(|g| g[j]).collect()).collect();
    a.push(vec![1.0; k]);
    let mut b = vec![0.0; n];
    b.push(1.0);
    vertex_max(consts, &a, &b)
}

/// Grid minimum over `[lo, hi]^n` written without the crate's oracle module.
pub fn naive_grid_min(f: &PiecewiseAffineFn, lo: f64, hi: f64, steps: usize) -> f64 {
    let n = f.dim();
    let h = (hi - lo) / (steps - 1) as f64;
    let total = steps.pow(n as u32);
    let mut best = f64::INFINITY;
    let mut x = vec![0.0; n];
    for idx in 0..total {
        let mut r = idx;
        for xi in x.iter_mut() {
            *xi = lo + h * (r % steps) as f64;
            r /= steps;
        }
        best = best.min(f.evaluate(&Vector::Dense(x.clone())).unwrap());
    }
    best
}

/// Random min-max function with integer data in `[-5, 5]`.
pub fn random_function<R: Rng>(rng: &mut R, n: usize, max_sets: usize, max_atoms: usize) -> PiecewiseAffineFn {
    let sets = rng.random_range(1..=max_sets);
    let data = (0..sets)
        .map(|_| {
            let atoms = rng.random_range(1..=max_atoms);
            (0..atoms)
                .map(|_| {
                    let a = rng.random_range(-5..=5) as f64;
                    let v: Vec<f64> = (0..n).map(|_| rng.random_range(-5..=5) as f64).collect();
                    (a, Vector::Dense(v))
                })
                .collect()
        })
        .collect();
    PiecewiseAffineFn::min_max(n, data).unwrap()
}
