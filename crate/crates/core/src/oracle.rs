//! Brute-force checks: exhaustive grid scans and seeded random sampling.
//!
//! Random sampling uses xoshiro256++ seeded through SplitMix64
//! (`SeedableRng::seed_from_u64`), so a seed pins the sample sequence.

use rand::{RngExt, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function::PiecewiseAffineFn;
use crate::global::{GlobalMinReport, SolverConfig};
use crate::vector::Vector;

const MAX_GRID_POINTS: u128 = 10_000_000;
const MAX_GRID_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl SearchBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.iter().chain(&upper).any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteInput("box bounds".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::Validation("box lower bound exceeds upper bound".into()));
        }
        Ok(SearchBox { lower, upper })
    }

    /// `[lo, hi]^n`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    fn check(&self, f: &PiecewiseAffineFn) -> Result<()> {
        if self.dim() != f.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                found: self.dim(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleMin {
    pub value: f64,
    pub argmin: Vec<f64>,
}

/// Largest axis spacing of a grid with `steps` nodes per axis.
pub fn grid_spacing(bx: &SearchBox, steps: usize) -> f64 {
    if steps < 2 {
        return 0.0;
    }
    bx.lower
        .iter()
        .zip(&bx.upper)
        .map(|(l, u)| (u - l) / (steps - 1) as f64)
        .fold(0.0, f64::max)
}

fn node(bx: &SearchBox, steps: usize, mut index: u64, out: &mut [f64]) {
    for axis in (0..out.len()).rev() {
        let i = index % steps as u64;
        index /= steps as u64;
        out[axis] = if steps < 2 {
            bx.lower[axis]
        } else {
            bx.lower[axis] + (bx.upper[axis] - bx.lower[axis]) * i as f64 / (steps - 1) as f64
        };
    }
}

/// Evaluates `f` at every node of a uniform grid with `steps` nodes per
/// axis and returns the smallest value with its lexicographically first node.
pub fn grid_min(f: &PiecewiseAffineFn, bx: &SearchBox, steps: usize) -> Result<OracleMin> {
    bx.check(f)?;
    let n = f.dim();
    let points = (steps.max(1) as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if n > MAX_GRID_DIM || points > MAX_GRID_POINTS || steps == 0 {
        return Err(Error::GridTooLarge { points, dim: n });
    }
    let total = points as u64;
    let best = (0..total)
        .into_par_iter()
        .map_init(
            || vec![0.0; n],
            |buf, idx| {
                node(bx, steps, idx, buf);
                let v = f.evaluate(&Vector::Dense(buf.clone())).unwrap_or(f64::INFINITY);
                (v, idx)
            },
        )
        .reduce(
            || (f64::INFINITY, u64::MAX),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    let mut argmin = vec![0.0; n];
    node(bx, steps, best.1, &mut argmin);
    Ok(OracleMin {
        value: best.0,
        argmin,
    })
}

/// Minimum over `count` uniform samples from the box; deterministic per seed.
pub fn sample_min(f: &PiecewiseAffineFn, bx: &SearchBox, count: usize, seed: u64) -> Result<OracleMin> {
    bx.check(f)?;
    if count == 0 {
        return Err(Error::Validation("sample count must be at least 1".into()));
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut best = OracleMin {
        value: f64::INFINITY,
        argmin: bx.lower.clone(),
    };
    let mut x = vec![0.0; f.dim()];
    for _ in 0..count {
        for ((xi, l), u) in x.iter_mut().zip(&bx.lower).zip(&bx.upper) {
            *xi = l + (u - l) * rng.random::<f64>();
        }
        let v = f.evaluate(&Vector::Dense(x.clone()))?;
        if v < best.value {
            best.value = v;
            best.argmin.copy_from_slice(&x);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(String),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Cross-checks a report against a grid scan. The grid minimum must lie
/// within `L * delta * sqrt(n)` of `a_star`, and the grid argmin must satisfy
/// some region's rows with that same slack added.
pub fn certify(
    f: &PiecewiseAffineFn,
    report: &GlobalMinReport,
    bx: &SearchBox,
    steps: usize,
    cfg: &SolverConfig,
) -> Result<Verdict> {
    let Some(a_star) = report.a_star.filter(|_| report.bounded) else {
        return Ok(Verdict::Fail("report is unbounded".into()));
    };
    let grid = grid_min(f, bx, steps)?;
    let slack = f.lipschitz_bound() * grid_spacing(bx, steps) * (f.dim() as f64).sqrt();
    let gap = (grid.value - a_star).abs();
    if gap > slack + cfg.region_tol_at(a_star) {
        return Ok(Verdict::Fail(format!(
            "grid minimum {} differs from a_star {} by {gap:e}, allowed {slack:e}",
            grid.value, a_star
        )));
    }
    let x = Vector::Dense(grid.argmin.clone());
    let tol = slack + cfg.region_tol_at(a_star);
    if !report.regions.iter().any(|r| r.contains(&x, tol)) {
        return Ok(Verdict::Fail(format!(
            "grid argmin {:?} is outside every minimizer region",
            grid.argmin
        )));
    }
    Ok(Verdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h2() -> PiecewiseAffineFn {
        PiecewiseAffineFn::min_max(
            1,
            vec![
                vec![(-9.0, vec![2.0].into()), (9.0, vec![-4.0].into())],
                vec![(4.0, vec![1.0].into()), (-2.0, vec![-0.5].into())],
            ],
        )
        .unwrap()
    }

    #[test]
    fn grid_hits_node_three() {
        let r = grid_min(&h2(), &SearchBox::cube(1, -10.0, 10.0).unwrap(), 2001).unwrap();
        assert_eq!(r.value, -3.0);
        assert_eq!(r.argmin, vec![3.0]);
    }

    #[test]
    fn constant_function_returns_lower_corner() {
        let f = PiecewiseAffineFn::min_max(2, vec![vec![(0.0, Vector::zeros(2))]]).unwrap();
        let bx = SearchBox::new(vec![-1.0, 2.0], vec![1.0, 5.0]).unwrap();
        let r = grid_min(&f, &bx, 7).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.argmin, vec![-1.0, 2.0]);
    }

    #[test]
    fn grid_limits() {
        let f = PiecewiseAffineFn::min_max(4, vec![vec![(0.0, Vector::zeros(4))]]).unwrap();
        assert!(matches!(
            grid_min(&f, &SearchBox::cube(4, 0.0, 1.0).unwrap(), 2),
            Err(Error::GridTooLarge { .. })
        ));
        let g = PiecewiseAffineFn::min_max(3, vec![vec![(0.0, Vector::zeros(3))]]).unwrap();
        assert!(matches!(
            grid_min(&g, &SearchBox::cube(3, 0.0, 1.0).unwrap(), 216),
            Err(Error::GridTooLarge { .. })
        ));
        assert!(grid_min(&g, &SearchBox::cube(3, 0.0, 1.0).unwrap(), 215).is_ok());
    }

    #[test]
    fn single_sample_is_plain_evaluation() {
        let f = h2();
        let bx = SearchBox::cube(1, -10.0, 10.0).unwrap();
        let r = sample_min(&f, &bx, 1, 7).unwrap();
        assert_eq!(r.value, f.evaluate(&Vector::Dense(r.argmin.clone())).unwrap());
    }

    #[test]
    fn sampling_is_deterministic() {
        let f = h2();
        let bx = SearchBox::cube(1, -10.0, 10.0).unwrap();
        let a = sample_min(&f, &bx, 1000, 99).unwrap();
        let b = sample_min(&f, &bx, 1000, 99).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.argmin[0].to_bits(), b.argmin[0].to_bits());
    }

    #[test]
    fn box_validation() {
        assert!(SearchBox::new(vec![0.0], vec![-1.0]).is_err());
        assert!(SearchBox::new(vec![0.0], vec![1.0, 2.0]).is_err());
        assert!(SearchBox::new(vec![f64::NAN], vec![1.0]).is_err());
        assert!(grid_min(&h2(), &SearchBox::cube(2, 0.0, 1.0).unwrap(), 3).is_err());
    }
}
