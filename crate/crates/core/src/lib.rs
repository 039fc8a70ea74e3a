//! Global minimization of piecewise affine functions.
//!
//! A function is a min-max (or max-min) of finitely many affine pieces
//! `a + <v, x>`, grouped into sets. For the min-max form the crate decides
//! lower boundedness, computes the exact minimum value through one small LP
//! per set, and describes every global minimizer as a union of polyhedra.

pub mod error;
pub mod function;
pub mod global;
pub mod instance;
pub mod lp;
pub mod oracle;
pub mod vector;

pub use error::{Error, Result};
pub use function::{AffineAtom, Combinator, PiecewiseAffineFn, VPolytope, DEFAULT_BLOWUP_CAP};
pub use vector::Vector;
pub use global::{
    active_family, find_minimizer_lp, find_minimizer_penalty, is_bounded_below,
    is_global_minimizer, min_value, minimizer_region, minimizer_set, origin_is_global_min,
    origin_shortcut, penalty_value_grad, uniqueness_check, GlobalMinReport, HPolyhedron, MinValue,
    SolverConfig, Uniqueness, WitnessMethod,
};
pub use instance::{parse_instance, serialize_instance, InstanceDocument};
