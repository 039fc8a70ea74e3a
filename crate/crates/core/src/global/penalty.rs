//! Squared-hinge penalty whose zero set is the minimizer region of one set,
//! minimized by gradient descent with Armijo backtracking.

use crate::error::{Error, Result};
use crate::function::VPolytope;
use crate::global::region::minimizer_region;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyOptions {
    pub armijo: f64,
    pub backtrack: f64,
    pub initial_step: f64,
    pub max_iterations: usize,
    pub max_backtracks: usize,
}

impl Default for PenaltyOptions {
    fn default() -> Self {
        PenaltyOptions {
            armijo: 1e-4,
            backtrack: 0.5,
            initial_step: 1.0,
            max_iterations: 10_000,
            max_backtracks: 80,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

fn hinges(c: &VPolytope, a_star: f64, x: &[f64]) -> Vec<f64> {
    c.atoms()
        .iter()
        .map(|t| (t.a - a_star + t.v.dot_slice(x)).max(0.0))
        .collect()
}

fn penalty_value(c: &VPolytope, a_star: f64, x: &[f64]) -> f64 {
    hinges(c, a_star, x).iter().map(|h| h * h).sum()
}

/// `F(x) = sum_i max(0, a_i - a_star + <v_i, x>)^2` and its gradient
/// `sum_i 2 v_i max(0, a_i - a_star + <v_i, x>)`.
pub fn penalty_value_grad(c: &VPolytope, a_star: f64, x: &[f64]) -> (f64, Vec<f64>) {
    let h = hinges(c, a_star, x);
    let value = h.iter().map(|h| h * h).sum();
    let mut grad = vec![0.0; x.len()];
    for (t, &hi) in c.atoms().iter().zip(&h) {
        if hi == 0.0 {
            continue;
        }
        match &t.v {
            Vector::Dense(v) => grad.iter_mut().zip(v).for_each(|(g, vj)| *g += 2.0 * vj * hi),
            Vector::Fill { value, .. } => grad.iter_mut().for_each(|g| *g += 2.0 * value * hi),
        }
    }
    (value, grad)
}

/// Descends the penalty from `x0` until it drops to `1e-16 * (1 + a_star^2)`.
/// The result is verified against the region rows at `region_tol`.
pub fn find_minimizer_penalty(
    c: &VPolytope,
    a_star: f64,
    x0: &[f64],
    opts: &PenaltyOptions,
    region_tol: f64,
) -> Result<PenaltyResult> {
    if x0.len() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: x0.len(),
        });
    }
    if x0.iter().any(|x| !x.is_finite()) || !a_star.is_finite() {
        return Err(Error::NonFiniteInput("penalty start point".into()));
    }
    let region = minimizer_region(c, a_star);
    let inside = |x: &[f64]| region.contains(&Vector::from(x), region_tol);
    let target = 1e-16 * (1.0 + a_star * a_star);

    let mut x = x0.to_vec();
    let (mut value, mut grad) = penalty_value_grad(c, a_star, &x);
    if inside(&x) {
        return Ok(PenaltyResult {
            point: x,
            value,
            iterations: 0,
        });
    }

    let mut iterations = 0;
    let mut trial = vec![0.0; x.len()];
    while value > target && iterations < opts.max_iterations {
        let slope: f64 = grad.iter().map(|g| g * g).sum();
        let mut step = opts.initial_step;
        let mut accepted = None;
        for _ in 0..=opts.max_backtracks {
            trial
                .iter_mut()
                .zip(x.iter().zip(&grad))
                .for_each(|(t, (xi, gi))| *t = xi - step * gi);
            let f = penalty_value(c, a_star, &trial);
            if f <= value - opts.armijo * step * slope {
                accepted = Some(f);
                break;
            }
            step *= opts.backtrack;
        }
        let Some(f) = accepted else {
            break;
        };
        std::mem::swap(&mut x, &mut trial);
        iterations += 1;
        (value, grad) = penalty_value_grad(c, a_star, &x);
        debug_assert!(value <= f + f64::EPSILON * f.abs());
    }

    if value <= target && inside(&x) {
        Ok(PenaltyResult {
            point: x,
            value,
            iterations,
        })
    } else {
        Err(Error::PenaltyNotConverged {
            best: x,
            value,
            iterations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::AffineAtom;

    fn second_example_set() -> VPolytope {
        VPolytope::new(vec![
            AffineAtom::new(-9.0, vec![2.0]).unwrap(),
            AffineAtom::new(9.0, vec![-4.0]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn value_and_gradient_by_substitution() {
        let c = second_example_set();
        // (max{0, 12 - 4x})^2 + (max{0, -6 + 2x})^2 at x = 0
        assert_eq!(penalty_value_grad(&c, -3.0, &[0.0]), (144.0, vec![-96.0]));
        assert_eq!(penalty_value_grad(&c, -3.0, &[3.0]), (0.0, vec![0.0]));
        // x = 5: hinges 0 and 4
        assert_eq!(penalty_value_grad(&c, -3.0, &[5.0]), (16.0, vec![16.0]));
    }

    #[test]
    fn descent_reaches_unique_minimizer() {
        let c = second_example_set();
        let r = find_minimizer_penalty(&c, -3.0, &[0.0], &PenaltyOptions::default(), 4e-7).unwrap();
        assert!((r.point[0] - 3.0).abs() <= 1e-6, "{:?}", r);
        assert!(r.iterations <= 10_000);
    }

    #[test]
    fn start_inside_region_returns_start() {
        let c = VPolytope::new(vec![
            AffineAtom::new(-4.0, vec![-1.0]).unwrap(),
            AffineAtom::new(2.0, vec![1.0]).unwrap(),
        ])
        .unwrap();
        let r = find_minimizer_penalty(&c, 0.0, &[-3.0], &PenaltyOptions::default(), 1e-7).unwrap();
        assert_eq!(r.point, vec![-3.0]);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn iteration_cap_reports_best_point() {
        let c = second_example_set();
        let opts = PenaltyOptions {
            max_iterations: 1,
            ..Default::default()
        };
        match find_minimizer_penalty(&c, -3.0, &[0.0], &opts, 4e-7) {
            Err(Error::PenaltyNotConverged { best, iterations, .. }) => {
                assert_eq!(iterations, 1);
                assert_eq!(best.len(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_start_point() {
        let c = second_example_set();
        let o = PenaltyOptions::default();
        assert!(find_minimizer_penalty(&c, -3.0, &[0.0, 1.0], &o, 1e-7).is_err());
        assert!(find_minimizer_penalty(&c, -3.0, &[f64::NAN], &o, 1e-7).is_err());
    }
}
