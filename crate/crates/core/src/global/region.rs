use crate::function::{AffineAtom, VPolytope};
use crate::vector::{Probe, Vector};

/// `{x : a_i + <v_i, x> <= bound for every row}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolyhedron {
    pub rows: Vec<AffineAtom>,
    pub bound: f64,
}

impl HPolyhedron {
    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, AffineAtom::dim)
    }

    /// Largest `a_i + <v_i, x> - bound` over the rows.
    pub fn max_violation(&self, x: &Vector) -> f64 {
        let p = Probe::new(x);
        self.rows
            .iter()
            .map(|r| r.a + p.dot(&r.v) - self.bound)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.max_violation(x) <= tol
    }
}

/// The polyhedron where every piece of `c` stays at or below `a_star`.
/// Rows with zero gradient are kept even when trivially satisfied.
pub fn minimizer_region(c: &VPolytope, a_star: f64) -> HPolyhedron {
    HPolyhedron {
        rows: c.atoms().to_vec(),
        bound: a_star,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_with_tolerance() {
        let c = VPolytope::new(vec![
            AffineAtom::new(-4.0, vec![-1.0]).unwrap(),
            AffineAtom::new(0.0, vec![0.0]).unwrap(),
            AffineAtom::new(2.0, vec![1.0]).unwrap(),
        ])
        .unwrap();
        let r = minimizer_region(&c, 0.0);
        assert_eq!(r.rows.len(), 3);
        assert_eq!(r.dim(), 1);
        for x in [-4.0, -3.0, -2.0] {
            assert!(r.contains(&vec![x].into(), 0.0));
        }
        assert!(!r.contains(&vec![-1.9].into(), 1e-7));
        assert!(r.contains(&vec![-2.0 + 1e-9].into(), 1e-7));
        assert_eq!(r.max_violation(&vec![-1.0].into()), 1.0);
    }
}
