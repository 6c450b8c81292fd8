//! Dense `f64` vectors used for model parameters, gradients and error memories.

use serde::{Deserialize, Serialize};

/// Dense real vector of fixed dimension.
///
/// All algorithm state (iterates, gradients, compression errors) lives in
/// these. Arithmetic is plain 64-bit floating point; length mismatches are
/// programming errors and panic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<f64>);

impl Vector {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    pub fn from_vec(entries: Vec<f64>) -> Self {
        Vector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// True iff every entry is finite (no NaN / Inf).
    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.len(), other.len(), "vector dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> Vector {
        Vector(self.0.iter().map(|v| c * v).collect())
    }

    /// `self += c * other`, in place.
    pub fn add_scaled(&mut self, c: f64, other: &Vector) {
        assert_eq!(self.len(), other.len(), "vector dimension mismatch");
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += c * b;
        }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "vector dimension mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "vector dimension mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `ca * a + cb * b`.
    pub fn lincomb(ca: f64, a: &Vector, cb: f64, b: &Vector) -> Vector {
        assert_eq!(a.len(), b.len(), "vector dimension mismatch");
        Vector(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| ca * x + cb * y)
                .collect(),
        )
    }

    /// Squared distance `‖self − other‖²`.
    pub fn dist_sq(&self, other: &Vector) -> f64 {
        assert_eq!(self.len(), other.len(), "vector dimension mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let d = a - b;
                d * d
            })
            .sum()
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

/// Mean of a nonempty slice of vectors, accumulated in ascending order.
pub fn mean(vectors: &[Vector]) -> Vector {
    assert!(!vectors.is_empty(), "mean of empty vector set");
    let mut acc = Vector::zeros(vectors[0].len());
    for v in vectors {
        acc.add_scaled(1.0, v);
    }
    acc.scaled(1.0 / vectors.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_arithmetic() {
        let a = Vector::from_vec(vec![1.0, 2.0]);
        let b = Vector::from_vec(vec![3.0, -1.0]);
        assert_eq!(a.dot(&b), 1.0);
        assert_eq!(a.norm_sq(), 5.0);
        assert_eq!(a.add(&b).as_slice(), &[4.0, 1.0]);
        assert_eq!(a.sub(&b).as_slice(), &[-2.0, 3.0]);
        assert_eq!(Vector::lincomb(2.0, &a, 1.0, &b).as_slice(), &[5.0, 3.0]);
    }

    #[test]
    fn finiteness_check() {
        assert!(Vector::from_vec(vec![0.0, -1.5]).is_finite());
        assert!(!Vector::from_vec(vec![f64::NAN]).is_finite());
        assert!(!Vector::from_vec(vec![f64::INFINITY, 0.0]).is_finite());
    }

    #[test]
    fn mean_is_client_order_independent_sum() {
        let vs = vec![
            Vector::from_vec(vec![1.0, 0.0]),
            Vector::from_vec(vec![3.0, 2.0]),
        ];
        assert_eq!(mean(&vs).as_slice(), &[2.0, 1.0]);
    }
}
