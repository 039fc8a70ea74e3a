//! Boundedness, minimum value and the full minimizer set of a min-max
//! piecewise affine function.
//!
//! For `h(x) = min_C max_{(a,v) in C} (a + <v, x>)`:
//!
//! * `h` is bounded below iff every set has `0` in the hull of its gradients;
//! * then `min h = a_star`, the smallest slice-LP value over the sets;
//! * the minimizers are the union, over sets whose slice value equals
//!   `a_star`, of `{x : a_i + <v_i, x> <= a_star for all atoms of C}`.

pub mod penalty;
pub mod region;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function::{Combinator, PiecewiseAffineFn, VPolytope};
use crate::lp::{max_a_on_slice, solve_lp, LpOutcome, LpProblem, SliceOptions, SliceOutcome};
use crate::lp::{gram_matrix, SliceMethod};
use crate::vector::Vector;

pub use penalty::{find_minimizer_penalty, penalty_value_grad, PenaltyOptions, PenaltyResult};
pub use region::{minimizer_region, HPolyhedron};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub slice: SliceOptions,
    /// Relative band for membership tests: `region_tol * (1 + |a_star|)`.
    pub region_tol: f64,
    /// Relative band for deciding that a slice value ties `a_star`.
    pub tie_tol: f64,
    /// Largest dimension for which the uniqueness check runs.
    pub uniqueness_dim_cap: usize,
    pub penalty: PenaltyOptions,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            slice: SliceOptions::default(),
            region_tol: 1e-7,
            tie_tol: 1e-8,
            uniqueness_dim_cap: 1_000,
            penalty: PenaltyOptions::default(),
        }
    }
}

impl SolverConfig {
    pub fn region_tol_at(&self, a_star: f64) -> f64 {
        self.region_tol * (1.0 + a_star.abs())
    }

    pub fn tie_tol_at(&self, a_star: f64) -> f64 {
        self.tie_tol * (1.0 + a_star.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinValue {
    Bounded(f64),
    UnboundedBelow,
}

impl MinValue {
    pub fn value(self) -> Option<f64> {
        match self {
            MinValue::Bounded(v) => Some(v),
            MinValue::UnboundedBelow => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Uniqueness {
    Unique,
    NotUnique,
    NotChecked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessMethod {
    /// Every constant of an active set is at most `a_star`, so the origin is a minimizer.
    OriginShortcut,
    Lp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalMinReport {
    pub bounded: bool,
    pub a_star: Option<f64>,
    /// Slice-LP value of every set, `None` where the slice is empty.
    pub slice_values: Vec<Option<f64>>,
    pub active_indices: Vec<usize>,
    /// One region per active set, in the same order as `active_indices`.
    pub regions: Vec<HPolyhedron>,
    pub witness: Option<Vector>,
    pub witness_method: Option<WitnessMethod>,
    pub unique: Uniqueness,
}

fn require_minmax(f: &PiecewiseAffineFn) -> Result<()> {
    if f.combinator() != Combinator::MinMax {
        return Err(Error::WrongCombinator { expected: "minmax" });
    }
    Ok(())
}

/// Slice LP of every set. Sets are independent and solved in parallel;
/// results keep set order.
pub fn slice_outcomes(f: &PiecewiseAffineFn, cfg: &SolverConfig) -> Result<Vec<SliceOutcome>> {
    require_minmax(f)?;
    f.sets()
        .par_iter()
        .map(|c| max_a_on_slice(c, &cfg.slice))
        .collect()
}

/// For `h` with `h(0) = 0`: whether `h >= 0` everywhere, i.e. every slice
/// reaches a nonnegative constant.
pub fn origin_is_global_min(f: &PiecewiseAffineFn, cfg: &SolverConfig) -> Result<bool> {
    require_minmax(f)?;
    let at_origin = f.evaluate(&Vector::zeros(f.dim()))?;
    let tol = cfg.region_tol_at(0.0);
    if at_origin.abs() > tol {
        return Err(Error::NormalizationViolated(at_origin));
    }
    Ok(slice_outcomes(f, cfg)?
        .iter()
        .all(|s| s.value().is_some_and(|v| v >= -tol)))
}

pub fn is_bounded_below(f: &PiecewiseAffineFn, cfg: &SolverConfig) -> Result<bool> {
    Ok(slice_outcomes(f, cfg)?.iter().all(SliceOutcome::is_feasible))
}

fn min_of(slices: &[SliceOutcome]) -> MinValue {
    let mut best = f64::INFINITY;
    for s in slices {
        match s.value() {
            Some(v) => best = best.min(v),
            None => return MinValue::UnboundedBelow,
        }
    }
    MinValue::Bounded(best)
}

pub fn min_value(f: &PiecewiseAffineFn, cfg: &SolverConfig) -> Result<MinValue> {
    Ok(min_of(&slice_outcomes(f, cfg)?))
}

fn active_of(slices: &[SliceOutcome], a_star: f64, tie: f64) -> Vec<usize> {
    slices
        .iter()
        .enumerate()
        .filter(|(_, s)| s.value().is_some_and(|v| (v - a_star).abs() <= tie))
        .map(|(i, _)| i)
        .collect()
}

/// Indices of the sets whose slice maximum equals `a_star` within the tie band.
pub fn active_family(f: &PiecewiseAffineFn, a_star: f64, cfg: &SolverConfig) -> Result<Vec<usize>> {
    let slices = slice_outcomes(f, cfg)?;
    Ok(active_of(&slices, a_star, cfg.tie_tol_at(a_star)))
}

fn shortcut_set(f: &PiecewiseAffineFn, active: &[usize], a_star: f64, tie: f64) -> Option<usize> {
    active
        .iter()
        .copied()
        .find(|&i| f.sets()[i].atoms().iter().all(|t| t.a <= a_star + tie))
}

/// Whether some active set has all its constants at or below `a_star`,
/// which makes the origin a global minimizer.
pub fn origin_shortcut(f: &PiecewiseAffineFn, a_star: f64, cfg: &SolverConfig) -> Result<bool> {
    let active = active_family(f, a_star, cfg)?;
    Ok(shortcut_set(f, &active, a_star, cfg.tie_tol_at(a_star)).is_some())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpMinimizer {
    pub point: Vector,
    /// `max_i (a_i - a_star + <v_i, point>)`, zero up to rounding.
    pub level: f64,
}

/// Solves `min y  s.t.  a_i - a_star + <v_i, x> <= y` over free `(x, y)`.
///
/// Free variables are split into nonnegative parts. In high dimension `x`
/// is sought in the span of the gradients, `x = sum_j m_j v_j`, which turns
/// the rows into Gram rows and keeps the LP size independent of `n`.
pub fn find_minimizer_lp(c: &VPolytope, a_star: f64, cfg: &SolverConfig) -> Result<LpMinimizer> {
    let atoms = c.atoms();
    let k = atoms.len();
    let n = c.dim();
    let gram = match cfg.slice.method {
        SliceMethod::Auto => n > 4 * k,
        SliceMethod::Raw => false,
        SliceMethod::Gram => true,
    };
    // coefficient rows in the chosen coordinates (x or m)
    let coeffs: Vec<Vec<f64>> = if gram {
        gram_matrix(c)?
    } else {
        atoms
            .iter()
            .map(|t| (0..n).map(|j| t.v.get(j)).collect())
            .collect()
    };
    let p = coeffs[0].len();
    let width = 2 * p + 2 + k;
    let mut rows = Vec::with_capacity(k);
    let mut rhs = Vec::with_capacity(k);
    for (i, (t, row)) in atoms.iter().zip(&coeffs).enumerate() {
        let mut r = vec![0.0; width];
        for (j, &g) in row.iter().enumerate() {
            r[j] = g;
            r[p + j] = -g;
        }
        r[2 * p] = -1.0;
        r[2 * p + 1] = 1.0;
        r[2 * p + 2 + i] = 1.0;
        rows.push(r);
        rhs.push(a_star - t.a);
    }
    let mut objective = vec![0.0; width];
    objective[2 * p] = -1.0;
    objective[2 * p + 1] = 1.0;
    let problem = LpProblem::new(objective, rows, rhs)?;
    let sol = match solve_lp(&problem, &cfg.slice.lp)? {
        LpOutcome::Optimal { point, .. } => point,
        other => {
            return Err(Error::InternalInconsistency(format!(
                "minimizer LP for an active set ended {other:?}"
            )))
        }
    };
    let coords: Vec<f64> = (0..p).map(|j| sol[j] - sol[p + j]).collect();
    let point = if gram {
        Vector::linear_combination(n, coords.iter().copied().zip(atoms.iter().map(|t| &t.v)))
    } else {
        Vector::Dense(coords)
    };
    let level = c.max_at(&point) - a_star;
    let tol = cfg.region_tol_at(a_star);
    if level > tol {
        return Err(Error::InternalInconsistency(format!(
            "minimizer LP level {level:e} exceeds tolerance {tol:e}; set is not active"
        )));
    }
    Ok(LpMinimizer { point, level })
}

/// Computes the minimum value, the active family, one region per active
/// set and a witness minimizer. The witness comes from the origin shortcut
/// when it applies, else from the LP on the first active set.
pub fn minimizer_set(f: &PiecewiseAffineFn, cfg: &SolverConfig) -> Result<GlobalMinReport> {
    let slices = slice_outcomes(f, cfg)?;
    let slice_values = slices.iter().map(SliceOutcome::value).collect();
    let a_star = match min_of(&slices) {
        MinValue::Bounded(v) => v,
        MinValue::UnboundedBelow => {
            return Ok(GlobalMinReport {
                bounded: false,
                a_star: None,
                slice_values,
                active_indices: Vec::new(),
                regions: Vec::new(),
                witness: None,
                witness_method: None,
                unique: Uniqueness::NotChecked,
            })
        }
    };
    let active = active_of(&slices, a_star, cfg.tie_tol_at(a_star));
    if active.is_empty() {
        return Err(Error::InternalInconsistency("empty active family".into()));
    }
    let regions: Vec<HPolyhedron> = active
        .iter()
        .map(|&i| minimizer_region(&f.sets()[i], a_star))
        .collect();
    let (witness, method) = match shortcut_set(f, &active, a_star, cfg.tie_tol_at(a_star)) {
        Some(_) => (Vector::zeros(f.dim()), WitnessMethod::OriginShortcut),
        None => (
            find_minimizer_lp(&f.sets()[active[0]], a_star, cfg)?.point,
            WitnessMethod::Lp,
        ),
    };
    let mut report = GlobalMinReport {
        bounded: true,
        a_star: Some(a_star),
        slice_values,
        active_indices: active,
        regions,
        witness: Some(witness),
        witness_method: Some(method),
        unique: Uniqueness::NotChecked,
    };
    if f.dim() <= cfg.uniqueness_dim_cap {
        report.unique = uniqueness_check(f, &report, cfg)?;
    }
    Ok(report)
}

fn bounded_parts(report: &GlobalMinReport) -> Result<f64> {
    match (report.bounded, report.a_star) {
        (true, Some(a)) => Ok(a),
        _ => Err(Error::Validation("report describes an unbounded function".into())),
    }
}

/// Membership in the minimizer set, decided both by the region rows and by
/// comparing `f(x)` with `a_star`. A disagreement that survives a tenfold
/// widening of the failing test is reported as an inconsistency.
pub fn is_global_minimizer(
    f: &PiecewiseAffineFn,
    report: &GlobalMinReport,
    x: &Vector,
    cfg: &SolverConfig,
) -> Result<bool> {
    let a_star = bounded_parts(report)?;
    let value = f.evaluate(x)?;
    let tol = cfg.region_tol_at(a_star);
    let by_region = |t: f64| report.regions.iter().any(|r| r.contains(x, t));
    let by_value = |t: f64| value <= a_star + t;
    let (r, v) = (by_region(tol), by_value(tol));
    if r == v {
        return Ok(r);
    }
    let rescued = if r { by_value(10.0 * tol) } else { by_region(10.0 * tol) };
    if rescued {
        Ok(true)
    } else {
        Err(Error::InternalInconsistency(format!(
            "membership tests disagree at f(x) = {value}, a_star = {a_star}"
        )))
    }
}

/// Extent of `x_j` over `{x : <v_i, x> <= b - a_i}`; `None` when unbounded.
fn coordinate_extent(region: &HPolyhedron, j: usize, cfg: &SolverConfig) -> Result<Option<(f64, f64)>> {
    let n = region.dim();
    let k = region.rows.len();
    let width = 2 * n + k;
    let mut rows = Vec::with_capacity(k);
    let mut rhs = Vec::with_capacity(k);
    for (i, t) in region.rows.iter().enumerate() {
        let mut r = vec![0.0; width];
        for c in 0..n {
            let g = t.v.get(c);
            r[c] = g;
            r[n + c] = -g;
        }
        r[2 * n + i] = 1.0;
        rows.push(r);
        rhs.push(region.bound - t.a);
    }
    let mut ext = [0.0; 2];
    for (slot, sign) in [(0usize, -1.0), (1usize, 1.0)] {
        let mut objective = vec![0.0; width];
        objective[j] = sign;
        objective[n + j] = -sign;
        let problem = LpProblem::new(objective, rows.clone(), rhs.clone())?;
        match solve_lp(&problem, &cfg.slice.lp)? {
            LpOutcome::Optimal { value, .. } => ext[slot] = sign * value,
            LpOutcome::Unbounded => return Ok(None),
            LpOutcome::Infeasible => {
                return Err(Error::InternalInconsistency(
                    "minimizer region of an active set is empty".into(),
                ))
            }
        }
    }
    Ok(Some((ext[0], ext[1])))
}

/// Decides whether the minimizer set is a single point by bounding every
/// coordinate over every region (two LPs per coordinate and region).
pub fn uniqueness_check(
    f: &PiecewiseAffineFn,
    report: &GlobalMinReport,
    cfg: &SolverConfig,
) -> Result<Uniqueness> {
    let a_star = bounded_parts(report)?;
    let n = f.dim();
    if n > cfg.uniqueness_dim_cap {
        return Err(Error::DimensionTooLarge {
            dim: n,
            cap: cfg.uniqueness_dim_cap,
        });
    }
    let tol = cfg.region_tol_at(a_star);
    let mut anchor: Option<Vec<f64>> = None;
    for region in &report.regions {
        let mut centre = Vec::with_capacity(n);
        for j in 0..n {
            match coordinate_extent(region, j, cfg)? {
                Some((lo, hi)) if hi - lo <= tol => centre.push(0.5 * (lo + hi)),
                _ => return Ok(Uniqueness::NotUnique),
            }
        }
        match &anchor {
            None => anchor = Some(centre),
            Some(p) => {
                if p.iter().zip(&centre).any(|(a, b)| (a - b).abs() > tol) {
                    return Ok(Uniqueness::NotUnique);
                }
            }
        }
    }
    Ok(Uniqueness::Unique)
}
