//! Piecewise affine functions in min-max and max-min form.

use crate::error::{Error, Result};
use crate::vector::{Probe, Vector};

/// Default limit on the number of sets a representation swap may produce.
pub const DEFAULT_BLOWUP_CAP: usize = 1_000_000;

/// One affine piece `x -> a + <v, x>`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineAtom {
    pub a: f64,
    pub v: Vector,
}

impl AffineAtom {
    pub fn new(a: f64, v: impl Into<Vector>) -> Result<Self> {
        let v = v.into();
        if !a.is_finite() || !v.is_finite() {
            return Err(Error::NonFiniteInput("affine atom has a non-finite entry".into()));
        }
        Ok(AffineAtom { a, v })
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn value_at(&self, x: &Vector) -> f64 {
        self.a + self.v.dot(x)
    }

    fn value_probe(&self, x: &Probe<'_>) -> f64 {
        self.a + x.dot(&self.v)
    }
}

/// Convex hull of a nonempty list of atoms, kept in vertex form.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    atoms: Vec<AffineAtom>,
}

impl VPolytope {
    pub fn new(atoms: Vec<AffineAtom>) -> Result<Self> {
        let first = atoms
            .first()
            .ok_or_else(|| Error::Validation("polytope needs at least one atom".into()))?;
        let n = first.dim();
        if let Some(j) = atoms.iter().position(|t| t.dim() != n) {
            return Err(Error::Validation(format!(
                "atom {j}: gradient length {} differs from {n}",
                atoms[j].dim()
            )));
        }
        if let Some(j) = atoms.iter().position(|t| !t.a.is_finite() || !t.v.is_finite()) {
            return Err(Error::NonFiniteInput(format!("atom {j} has a non-finite entry")));
        }
        Ok(VPolytope { atoms })
    }

    pub fn atoms(&self) -> &[AffineAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    /// Maximum of the affine pieces at `x`. Over the hull the maximum of a
    /// linear functional sits at a vertex, so scanning atoms suffices.
    pub fn max_at(&self, x: &Vector) -> f64 {
        let p = Probe::new(x);
        self.max_probe(&p)
    }

    pub fn min_at(&self, x: &Vector) -> f64 {
        let p = Probe::new(x);
        self.min_probe(&p)
    }

    fn max_probe(&self, p: &Probe<'_>) -> f64 {
        self.atoms
            .iter()
            .map(|t| t.value_probe(p))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn min_probe(&self, p: &Probe<'_>) -> f64 {
        self.atoms
            .iter()
            .map(|t| t.value_probe(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn shifted(&self, m: f64) -> VPolytope {
        VPolytope {
            atoms: self
                .atoms
                .iter()
                .map(|t| AffineAtom {
                    a: t.a - m,
                    v: t.v.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Combinator {
    /// `min` over sets of `max` over atoms.
    MinMax,
    /// `max` over sets of `min` over atoms.
    MaxMin,
}

impl Combinator {
    pub fn name(self) -> &'static str {
        match self {
            Combinator::MinMax => "minmax",
            Combinator::MaxMin => "maxmin",
        }
    }

    pub fn dual(self) -> Combinator {
        match self {
            Combinator::MinMax => Combinator::MaxMin,
            Combinator::MaxMin => Combinator::MinMax,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseAffineFn {
    dim: usize,
    combinator: Combinator,
    sets: Vec<VPolytope>,
}

impl PiecewiseAffineFn {
    pub fn new(dim: usize, combinator: Combinator, sets: Vec<VPolytope>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        if sets.is_empty() {
            return Err(Error::Validation("function needs at least one set".into()));
        }
        for (i, set) in sets.iter().enumerate() {
            if let Some(j) = set.atoms().iter().position(|t| t.dim() != dim) {
                return Err(Error::Validation(format!(
                    "set {i}, atom {j}: gradient length {} but dim is {dim}",
                    set.atoms()[j].dim()
                )));
            }
        }
        Ok(PiecewiseAffineFn {
            dim,
            combinator,
            sets,
        })
    }

    /// Builds a min-max function from raw `(a, v)` lists.
    pub fn min_max(dim: usize, sets: Vec<Vec<(f64, Vector)>>) -> Result<Self> {
        Self::from_pairs(dim, Combinator::MinMax, sets)
    }

    pub fn max_min(dim: usize, sets: Vec<Vec<(f64, Vector)>>) -> Result<Self> {
        Self::from_pairs(dim, Combinator::MaxMin, sets)
    }

    fn from_pairs(
        dim: usize,
        combinator: Combinator,
        sets: Vec<Vec<(f64, Vector)>>,
    ) -> Result<Self> {
        let mut polys = Vec::with_capacity(sets.len());
        for (i, set) in sets.into_iter().enumerate() {
            let atoms = set
                .into_iter()
                .enumerate()
                .map(|(j, (a, v))| {
                    AffineAtom::new(a, v).map_err(|_| {
                        Error::NonFiniteInput(format!("set {i}, atom {j} has a non-finite entry"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if atoms.is_empty() {
                return Err(Error::Validation(format!("set {i} has no atoms")));
            }
            if let Some(j) = atoms.iter().position(|t| t.dim() != dim) {
                return Err(Error::Validation(format!(
                    "set {i}, atom {j}: gradient length {} but dim is {dim}",
                    atoms[j].dim()
                )));
            }
            polys.push(VPolytope { atoms });
        }
        Self::new(dim, combinator, polys)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn combinator(&self) -> Combinator {
        self.combinator
    }

    pub fn sets(&self) -> &[VPolytope] {
        &self.sets
    }

    pub fn atom_count(&self) -> usize {
        self.sets.iter().map(VPolytope::len).sum()
    }

    pub fn evaluate(&self, x: &Vector) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if !x.is_finite() {
            return Err(Error::NonFiniteInput("evaluation point".into()));
        }
        let p = Probe::new(x);
        Ok(match self.combinator {
            Combinator::MinMax => self
                .sets
                .iter()
                .map(|c| c.max_probe(&p))
                .fold(f64::INFINITY, f64::min),
            Combinator::MaxMin => self
                .sets
                .iter()
                .map(|c| c.min_probe(&p))
                .fold(f64::NEG_INFINITY, f64::max),
        })
    }

    /// Returns `f - m`: every atom constant drops by `m`.
    pub fn shift_constant(&self, m: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFiniteInput("shift amount".into()));
        }
        Ok(PiecewiseAffineFn {
            dim: self.dim,
            combinator: self.combinator,
            sets: self.sets.iter().map(|c| c.shifted(m)).collect(),
        })
    }

    pub fn minmax_to_maxmin(&self, cap: usize) -> Result<Self> {
        if self.combinator != Combinator::MinMax {
            return Err(Error::WrongCombinator { expected: "minmax" });
        }
        self.distribute(cap)
    }

    pub fn maxmin_to_minmax(&self, cap: usize) -> Result<Self> {
        if self.combinator != Combinator::MaxMin {
            return Err(Error::WrongCombinator { expected: "maxmin" });
        }
        self.distribute(cap)
    }

    /// Number of sets the opposite representation will have.
    pub fn selection_count(&self) -> u128 {
        self.sets
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }

    // min_i max_j f_ij = max_s min_i f_{i, s(i)} over all selections s, and
    // symmetrically with min and max exchanged. Selections are enumerated
    // lexicographically with the first set's atom index most significant.
    fn distribute(&self, cap: usize) -> Result<Self> {
        let count = self.selection_count();
        if count > cap as u128 {
            return Err(Error::BlowupCapExceeded { count, cap });
        }
        let mut choice = vec![0usize; self.sets.len()];
        let mut out = Vec::with_capacity(count as usize);
        loop {
            let atoms = choice
                .iter()
                .zip(&self.sets)
                .map(|(&j, c)| c.atoms[j].clone())
                .collect();
            out.push(VPolytope { atoms });

            let mut pos = self.sets.len();
            loop {
                if pos == 0 {
                    return Ok(PiecewiseAffineFn {
                        dim: self.dim,
                        combinator: self.combinator.dual(),
                        sets: out,
                    });
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < self.sets[pos].len() {
                    break;
                }
                choice[pos] = 0;
            }
        }
    }

    /// Largest gradient norm over all atoms; a global Lipschitz constant.
    pub fn lipschitz_bound(&self) -> f64 {
        self.sets
            .iter()
            .flat_map(|c| c.atoms())
            .map(|t| t.v.norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[f64]) -> Vector {
        Vector::Dense(v.to_vec())
    }

    fn h1() -> PiecewiseAffineFn {
        PiecewiseAffineFn::min_max(
            1,
            vec![
                vec![(2.0, d(&[1.0])), (1.0, d(&[0.5]))],
                vec![(-2.0, d(&[1.0])), (0.0, d(&[-1.0]))],
            ],
        )
        .unwrap()
    }

    fn h2() -> PiecewiseAffineFn {
        PiecewiseAffineFn::min_max(
            1,
            vec![
                vec![(-9.0, d(&[2.0])), (9.0, d(&[-4.0]))],
                vec![(4.0, d(&[1.0])), (-2.0, d(&[-0.5]))],
            ],
        )
        .unwrap()
    }

    fn h4() -> PiecewiseAffineFn {
        PiecewiseAffineFn::min_max(
            1,
            vec![
                vec![(-4.0, d(&[-1.0])), (0.0, d(&[0.0])), (2.0, d(&[1.0]))],
                vec![(2.0, d(&[-2.0])), (0.0, d(&[0.0])), (-9.0, d(&[3.0]))],
            ],
        )
        .unwrap()
    }

    fn grid() -> impl Iterator<Item = f64> {
        (0..=400).map(|i| -10.0 + 0.05 * i as f64)
    }

    #[test]
    fn evaluate_fixtures() {
        assert_eq!(h2().evaluate(&d(&[3.0])).unwrap(), -3.0);
        // inner maxima at 0 are 2 and 2
        assert_eq!(h4().evaluate(&d(&[0.0])).unwrap(), 2.0);
        let zero = PiecewiseAffineFn::min_max(3, vec![vec![(0.0, Vector::zeros(3))]]).unwrap();
        assert_eq!(zero.evaluate(&d(&[1.0, -7.0, 2.5])).unwrap(), 0.0);
    }

    #[test]
    fn evaluate_errors() {
        let f = h2();
        assert_eq!(
            f.evaluate(&d(&[1.0, 2.0])),
            Err(Error::DimensionMismatch {
                expected: 1,
                found: 2
            })
        );
        assert!(matches!(
            f.evaluate(&d(&[f64::NAN])),
            Err(Error::NonFiniteInput(_))
        ));
        assert!(matches!(
            f.evaluate(&d(&[f64::INFINITY])),
            Err(Error::NonFiniteInput(_))
        ));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            PiecewiseAffineFn::min_max(1, vec![]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            PiecewiseAffineFn::min_max(1, vec![vec![]]),
            Err(Error::Validation(_))
        ));
        let e = PiecewiseAffineFn::min_max(2, vec![vec![(0.0, d(&[1.0, 0.0])), (1.0, d(&[1.0]))]])
            .unwrap_err();
        assert!(e.to_string().contains("set 0, atom 1"), "{e}");
        assert!(matches!(
            PiecewiseAffineFn::min_max(1, vec![vec![(f64::NAN, d(&[1.0]))]]),
            Err(Error::NonFiniteInput(_))
        ));
        assert!(VPolytope::new(vec![]).is_err());
    }

    #[test]
    fn shift_examples() {
        let f = h2();
        assert_eq!(f.shift_constant(0.0).unwrap(), f);
        let g = f.shift_constant(-3.0).unwrap();
        assert_eq!(g.evaluate(&d(&[3.0])).unwrap(), 0.0);
        for (c, e) in f.sets().iter().zip(g.sets()) {
            for (s, t) in c.atoms().iter().zip(e.atoms()) {
                assert_eq!(t.a, s.a + 3.0);
                assert_eq!(t.v, s.v);
            }
        }
        assert!(f.shift_constant(f64::NAN).is_err());
    }

    #[test]
    fn conversion_of_single_set() {
        let f = PiecewiseAffineFn::min_max(
            1,
            vec![vec![(1.0, d(&[1.0])), (2.0, d(&[0.0])), (0.0, d(&[-1.0]))]],
        )
        .unwrap();
        let g = f.minmax_to_maxmin(DEFAULT_BLOWUP_CAP).unwrap();
        assert_eq!(g.combinator(), Combinator::MaxMin);
        assert_eq!(g.sets().len(), 3);
        assert!(g.sets().iter().all(|c| c.len() == 1));
        let back = PiecewiseAffineFn::max_min(1, vec![vec![(0.0, d(&[0.0]))]])
            .unwrap()
            .maxmin_to_minmax(DEFAULT_BLOWUP_CAP)
            .unwrap();
        assert_eq!(back.sets().len(), 1);
        assert_eq!(back.evaluate(&d(&[5.0])).unwrap(), 0.0);
    }

    #[test]
    fn conversion_grid_oracle() {
        for f in [h1(), h4()] {
            let g = f.minmax_to_maxmin(DEFAULT_BLOWUP_CAP).unwrap();
            let expect = f.sets().iter().map(VPolytope::len).product::<usize>();
            assert_eq!(g.sets().len(), expect);
            let back = g.maxmin_to_minmax(DEFAULT_BLOWUP_CAP).unwrap();
            for x in grid() {
                let x = d(&[x]);
                let want = f.evaluate(&x).unwrap();
                assert!((g.evaluate(&x).unwrap() - want).abs() <= 1e-9);
                assert!((back.evaluate(&x).unwrap() - want).abs() <= 1e-9);
            }
        }
        assert_eq!(h1().minmax_to_maxmin(DEFAULT_BLOWUP_CAP).unwrap().sets().len(), 4);
        assert_eq!(h4().minmax_to_maxmin(DEFAULT_BLOWUP_CAP).unwrap().sets().len(), 9);
    }

    #[test]
    fn conversion_cap_and_combinator_checks() {
        assert_eq!(
            h4().minmax_to_maxmin(8),
            Err(Error::BlowupCapExceeded { count: 9, cap: 8 })
        );
        assert!(h4().maxmin_to_minmax(100).is_err());
    }

    #[test]
    fn lipschitz_examples() {
        let zero = PiecewiseAffineFn::min_max(2, vec![vec![(0.0, Vector::zeros(2))]]).unwrap();
        assert_eq!(zero.lipschitz_bound(), 0.0);
        assert_eq!(h2().lipschitz_bound(), 4.0);
    }
}
