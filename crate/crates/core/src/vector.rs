//! Real vectors with a compact constant-fill encoding.
//!
//! A `Fill` stands for `len` copies of one value, so gradients like the
//! all-ones vector in a million dimensions cost O(1) memory. Inner products
//! involving a fill reduce to a sum of the other operand.

use std::cell::OnceCell;

#[derive(Debug, Clone, PartialEq)]
pub enum Vector {
    Dense(Vec<f64>),
    Fill { value: f64, len: usize },
}

impl Vector {
    pub fn zeros(len: usize) -> Self {
        Vector::Fill { value: 0.0, len }
    }

    pub fn fill(value: f64, len: usize) -> Self {
        Vector::Fill { value, len }
    }

    pub fn len(&self) -> usize {
        match self {
            Vector::Dense(v) => v.len(),
            Vector::Fill { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> f64 {
        match self {
            Vector::Dense(v) => v[i],
            Vector::Fill { value, .. } => *value,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Vector::Dense(v) => v.iter().all(|x| x.is_finite()),
            Vector::Fill { value, .. } => value.is_finite(),
        }
    }

    pub fn sum(&self) -> f64 {
        match self {
            Vector::Dense(v) => v.iter().sum(),
            Vector::Fill { value, len } => value * *len as f64,
        }
    }

    /// Inner product. Panics if the lengths differ.
    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.len(), other.len(), "dot of vectors with different lengths");
        match (self, other) {
            (Vector::Dense(a), Vector::Dense(b)) => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            (Vector::Fill { value, .. }, Vector::Dense(d))
            | (Vector::Dense(d), Vector::Fill { value, .. }) => value * d.iter().sum::<f64>(),
            (Vector::Fill { value: a, len }, Vector::Fill { value: b, .. }) => a * b * *len as f64,
        }
    }

    pub fn dot_slice(&self, x: &[f64]) -> f64 {
        assert_eq!(self.len(), x.len(), "dot of vectors with different lengths");
        match self {
            Vector::Dense(a) => a.iter().zip(x).map(|(p, q)| p * q).sum(),
            Vector::Fill { value, .. } => value * x.iter().sum::<f64>(),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            Vector::Dense(v) => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Vector::Fill { value, len } => value.abs() * (*len as f64).sqrt(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Vector::Dense(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            Vector::Fill { value, len } => {
                if *len == 0 {
                    0.0
                } else {
                    value.abs()
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs() == 0.0
    }

    pub fn to_dense(&self) -> Vec<f64> {
        match self {
            Vector::Dense(v) => v.clone(),
            Vector::Fill { value, len } => vec![*value; *len],
        }
    }

    pub fn into_dense(self) -> Vec<f64> {
        match self {
            Vector::Dense(v) => v,
            other => other.to_dense(),
        }
    }

    /// Sum of `c * v` over the terms; stays a fill when every input is one.
    pub fn linear_combination<'a, I>(len: usize, terms: I) -> Vector
    where
        I: IntoIterator<Item = (f64, &'a Vector)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        if terms.iter().all(|(_, v)| matches!(v, Vector::Fill { .. })) {
            let value = terms.iter().map(|(c, v)| c * v.get(0)).sum::<f64>();
            return Vector::Fill { value, len };
        }
        let mut out = vec![0.0; len];
        for (c, v) in terms {
            match v {
                Vector::Dense(d) => out.iter_mut().zip(d).for_each(|(o, x)| *o += c * x),
                Vector::Fill { value, .. } => out.iter_mut().for_each(|o| *o += c * value),
            }
        }
        Vector::Dense(out)
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector::Dense(v)
    }
}

impl From<&[f64]> for Vector {
    fn from(v: &[f64]) -> Self {
        Vector::Dense(v.to_vec())
    }
}

/// A query point that remembers its coordinate sum, so repeated inner
/// products against fill gradients stay O(1) after the first.
pub(crate) struct Probe<'a> {
    x: &'a Vector,
    sum: OnceCell<f64>,
}

impl<'a> Probe<'a> {
    pub(crate) fn new(x: &'a Vector) -> Self {
        Probe {
            x,
            sum: OnceCell::new(),
        }
    }

    pub(crate) fn dot(&self, v: &Vector) -> f64 {
        match (v, self.x) {
            (Vector::Fill { value, .. }, Vector::Dense(_)) => {
                value * *self.sum.get_or_init(|| self.x.sum())
            }
            _ => v.dot(self.x),
        }
    }
}
