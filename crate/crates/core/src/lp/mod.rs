//! Dense linear programming and the slice LP built on it.

pub mod simplex;
pub mod slice;

pub use simplex::{solve_lp, LpOptions, LpOutcome, LpProblem, PivotRule};
pub use slice::{
    gram_matrix, gram_reduce, max_a_on_slice, rank_reduce, slice_problem, zero_in_hull,
    SliceMethod, SliceOptions, SliceOutcome,
};
