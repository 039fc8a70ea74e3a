//! The slice LP over a polytope in vertex form:
//!
//! ```text
//! max  sum l_i a_i   s.t.  sum l_i v_i = 0,  sum l_i = 1,  l >= 0
//! ```
//!
//! Its value is the largest `a` with `(a, 0)` in the hull of the atoms. When
//! the ambient dimension dwarfs the atom count the `n` gradient rows are
//! replaced by the Gram system `G l = 0` with `G_ij = <v_i, v_j>`; since
//! `l'Gl = |sum l_i v_i|^2` and `G` is positive semidefinite, both systems
//! have the same solutions.

use crate::error::{Error, Result};
use crate::function::VPolytope;
use crate::lp::simplex::{solve_lp, LpOptions, LpOutcome, LpProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SliceMethod {
    /// Gram system when `n > 4k`, raw gradient rows otherwise.
    #[default]
    Auto,
    Raw,
    Gram,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SliceOptions {
    pub method: SliceMethod,
    pub lp: LpOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SliceOutcome {
    /// Slice maximum and the convex weights attaining it.
    Optimal { value: f64, weights: Vec<f64> },
    Infeasible,
}

impl SliceOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            SliceOutcome::Optimal { value, .. } => Some(*value),
            SliceOutcome::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, SliceOutcome::Optimal { .. })
    }
}

/// Gram matrix of the atom gradients.
pub fn gram_matrix(c: &VPolytope) -> Result<Vec<Vec<f64>>> {
    let atoms = c.atoms();
    let k = atoms.len();
    let mut g = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let x = atoms[i].v.dot(&atoms[j].v);
            if !x.is_finite() {
                return Err(Error::NonFiniteInput(format!(
                    "gradient inner product <v_{i}, v_{j}> overflowed"
                )));
            }
            g[i][j] = x;
            g[j][i] = x;
        }
    }
    Ok(g)
}

/// The equality system `G l = 0` that stands in for `sum l_i v_i = 0`.
pub fn gram_reduce(c: &VPolytope) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let g = gram_matrix(c)?;
    let k = g.len();
    Ok((g, vec![0.0; k]))
}

/// Row echelon form of a homogeneous system by Gaussian elimination with
/// partial pivoting. Columns whose best pivot is below
/// `1e-12 * max|entry|` are treated as dependent and skipped; only rows
/// that carry a pivot are returned.
pub fn rank_reduce(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let width = m.first().map_or(0, Vec::len);
    let norm = m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    if norm == 0.0 {
        return Vec::new();
    }
    let drop = 1e-12 * norm;
    let mut rank = 0;
    for col in 0..width {
        if rank == m.len() {
            break;
        }
        let (p, best) = (rank..m.len())
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if best <= drop {
            continue;
        }
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
                row[col] = 0.0;
            }
        }
        rank += 1;
    }
    m.truncate(rank);
    m
}

fn use_gram(c: &VPolytope, method: SliceMethod) -> bool {
    match method {
        SliceMethod::Auto => c.dim() > 4 * c.len(),
        SliceMethod::Raw => false,
        SliceMethod::Gram => true,
    }
}

/// Builds the slice LP for `c` with the chosen constraint encoding.
pub fn slice_problem(c: &VPolytope, method: SliceMethod) -> Result<LpProblem> {
    let atoms = c.atoms();
    let k = atoms.len();
    let objective: Vec<f64> = atoms.iter().map(|t| t.a).collect();
    let mut rows = if use_gram(c, method) {
        let (g, _) = gram_reduce(c)?;
        rank_reduce(&g)
    } else {
        (0..c.dim())
            .map(|j| atoms.iter().map(|t| t.v.get(j)).collect())
            .collect::<Vec<Vec<f64>>>()
    };
    let mut rhs = vec![0.0; rows.len()];
    rows.push(vec![1.0; k]);
    rhs.push(1.0);
    LpProblem::new(objective, rows, rhs)
}

pub fn max_a_on_slice(c: &VPolytope, opts: &SliceOptions) -> Result<SliceOutcome> {
    if c.len() == 1 {
        let atom = &c.atoms()[0];
        return Ok(if atom.v.max_abs() <= opts.lp.feas_tol {
            SliceOutcome::Optimal {
                value: atom.a,
                weights: vec![1.0],
            }
        } else {
            SliceOutcome::Infeasible
        });
    }
    let problem = slice_problem(c, opts.method)?;
    match solve_lp(&problem, &opts.lp)? {
        LpOutcome::Optimal { value, point } => Ok(SliceOutcome::Optimal {
            value,
            weights: point,
        }),
        LpOutcome::Infeasible => Ok(SliceOutcome::Infeasible),
        LpOutcome::Unbounded => Err(Error::InternalInconsistency(
            "slice LP over a simplex reported unbounded".into(),
        )),
    }
}

/// Whether the origin lies in the convex hull of the gradients of `c`.
pub fn zero_in_hull(c: &VPolytope, opts: &SliceOptions) -> Result<bool> {
    Ok(max_a_on_slice(c, opts)?.is_feasible())
}
