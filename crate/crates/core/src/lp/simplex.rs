//! Dense two-phase primal simplex for `max c'x  s.t.  Ax = b, x >= 0`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Smallest-index entering and leaving variables; cannot cycle.
    #[default]
    Bland,
    /// Largest reduced cost. Falls back to Bland after a run of degenerate pivots.
    Dantzig,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    pub pivot_rule: PivotRule,
    /// Absolute feasibility tolerance on equilibrated rows.
    pub feas_tol: f64,
    pub max_pivots: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            pivot_rule: PivotRule::Bland,
            feas_tol: 1e-9,
            max_pivots: 100_000,
        }
    }
}

/// `max c'x` subject to `Ax = b`, `x >= 0`, with `A` stored by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>, rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        let k = objective.len();
        if rows.len() != rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                found: rhs.len(),
            });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: r.len(),
            });
        }
        let finite = objective.iter().chain(&rhs).chain(rows.iter().flatten()).all(|x| x.is_finite());
        if !finite {
            return Err(Error::NonFiniteInput("LP data".into()));
        }
        Ok(LpProblem {
            objective,
            rows,
            rhs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Largest equality violation with each row scaled to unit max-abs coefficient.
    pub fn residual(&self, point: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, &b)| {
                let scale = row.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                let lhs: f64 = row.iter().zip(point).map(|(a, x)| a * x).sum();
                if scale > 0.0 {
                    (lhs - b).abs() / scale
                } else {
                    b.abs()
                }
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, point: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[f64]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

const PIVOT_TOL: f64 = 1e-10;
const DEGENERATE_RUN: usize = 50;

struct Tableau {
    width: usize,
    cells: Vec<f64>,
    basis: Vec<usize>,
    // Reduced costs; the last entry holds minus the objective value.
    obj: Vec<f64>,
}

impl Tableau {
    fn rows(&self) -> usize {
        self.basis.len()
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.cells[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.width;
        let p = self.cells[r * w + q];
        for c in 0..w {
            self.cells[r * w + c] /= p;
        }
        let (before, rest) = self.cells.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[q];
            if f != 0.0 {
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[q] = 0.0;
            }
        }
        let f = self.obj[q];
        if f != 0.0 {
            for (x, y) in self.obj.iter_mut().zip(prow.iter()) {
                *x -= f * y;
            }
            self.obj[q] = 0.0;
        }
        self.basis[r] = q;
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.width;
        self.cells.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
    }

    fn entering(&self, limit: usize, tol: f64, rule: PivotRule) -> Option<usize> {
        let candidates = (0..limit).filter(|&j| self.obj[j] > tol);
        match rule {
            PivotRule::Bland => candidates.into_iter().next(),
            PivotRule::Dantzig => candidates.max_by(|&a, &b| {
                self.obj[a].total_cmp(&self.obj[b]).then(b.cmp(&a))
            }),
        }
    }

    fn leaving(&self, q: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.rows() {
            let a = self.at(r, q);
            if a <= PIVOT_TOL {
                continue;
            }
            let ratio = self.rhs(r).max(0.0) / a;
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    let slack = 1e-12 * (1.0 + bratio.abs());
                    if ratio < bratio - slack
                        || (ratio <= bratio + slack && self.basis[r] < self.basis[br])
                    {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        best.map(|(r, _)| r)
    }

    /// Runs pivots until optimal. Returns false on an unbounded column.
    fn optimize(
        &mut self,
        limit: usize,
        tol: f64,
        opts: &LpOptions,
        pivots: &mut usize,
    ) -> Result<bool> {
        let mut degenerate = 0usize;
        loop {
            let rule = if degenerate >= DEGENERATE_RUN {
                PivotRule::Bland
            } else {
                opts.pivot_rule
            };
            let Some(q) = self.entering(limit, tol, rule) else {
                return Ok(true);
            };
            let Some(r) = self.leaving(q) else {
                return Ok(false);
            };
            if *pivots >= opts.max_pivots {
                return Err(Error::MaxPivotsExceeded(opts.max_pivots));
            }
            *pivots += 1;
            if self.rhs(r).abs() <= PIVOT_TOL {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, q);
        }
    }
}

pub fn solve_lp(problem: &LpProblem, opts: &LpOptions) -> Result<LpOutcome> {
    let k = problem.num_vars();

    // Equilibrate rows and make the right-hand side nonnegative.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::with_capacity(problem.num_rows());
    for (row, &b) in problem.rows.iter().zip(&problem.rhs) {
        let scale = row.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            if b.abs() > opts.feas_tol {
                return Ok(LpOutcome::Infeasible);
            }
            continue;
        }
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        let f = sign / scale;
        rows.push((row.iter().map(|x| x * f).collect(), b * f));
    }
    let m = rows.len();

    // Phase 1: one artificial per row, maximize minus their sum.
    let width = k + m + 1;
    let mut cells = vec![0.0; m * width];
    for (r, (row, b)) in rows.iter().enumerate() {
        cells[r * width..r * width + k].copy_from_slice(row);
        cells[r * width + k + r] = 1.0;
        cells[r * width + width - 1] = *b;
    }
    let mut obj = vec![0.0; width];
    for (row, b) in &rows {
        for (o, x) in obj.iter_mut().zip(row) {
            *o += x;
        }
        obj[width - 1] += b;
    }
    let mut t = Tableau {
        width,
        cells,
        basis: (k..k + m).collect(),
        obj,
    };
    let mut pivots = 0usize;
    if !t.optimize(k, 1e-11, opts, &mut pivots)? {
        return Err(Error::InternalInconsistency("phase 1 reported unbounded".into()));
    }
    if t.obj[width - 1] > opts.feas_tol {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive remaining artificials out of the basis; drop rows that are redundant.
    let mut r = 0;
    while r < t.rows() {
        if t.basis[r] < k {
            r += 1;
            continue;
        }
        let q = (0..k)
            .filter(|&j| t.at(r, j).abs() > 1e-9)
            .max_by(|&a, &b| t.at(r, a).abs().total_cmp(&t.at(r, b).abs()));
        match q {
            Some(q) => {
                t.pivot(r, q);
                r += 1;
            }
            None => t.remove_row(r),
        }
    }

    // Phase 2 on the structural columns only.
    let m = t.rows();
    let w2 = k + 1;
    let mut cells = Vec::with_capacity(m * w2);
    for r in 0..m {
        cells.extend_from_slice(&t.cells[r * width..r * width + k]);
        cells.push(t.rhs(r));
    }
    let c = &problem.objective;
    let mut obj = vec![0.0; w2];
    obj[..k].copy_from_slice(c);
    for r in 0..m {
        let cb = c[t.basis[r]];
        if cb != 0.0 {
            for j in 0..w2 {
                obj[j] -= cb * cells[r * w2 + j];
            }
        }
    }
    let mut t = Tableau {
        width: w2,
        cells,
        basis: t.basis,
        obj,
    };
    let scale = c.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if !t.optimize(k, 1e-11 * scale, opts, &mut pivots)? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut point = vec![0.0; k];
    for r in 0..t.rows() {
        point[t.basis[r]] = t.rhs(r).max(0.0);
    }
    let value = c.iter().zip(&point).map(|(a, x)| a * x).sum();
    Ok(LpOutcome::Optimal { value, point })
}
