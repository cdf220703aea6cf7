//! Points of `C^n` with validated construction.
//!
//! A [`Point`] is a non-empty vector of finite complex coordinates.  The
//! wrapper keeps the invariants (`n >= 1`, all entries finite) out of the
//! numeric code; it dereferences to `[Complex64]` so kernels and metrics can
//! index coordinates directly.

use std::fmt;
use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A validated point of `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<Complex64>);

impl Point {
    /// Builds a point, rejecting empty coordinate lists and non-finite
    /// entries.
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("a point needs at least one coordinate".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coordinate {bad}")));
        }
        Ok(Point(coords))
    }

    /// The origin of `C^n`.
    pub fn origin(n: usize) -> Self {
        assert!(n >= 1, "a point needs at least one coordinate");
        Point(vec![Complex64::new(0.0, 0.0); n])
    }

    /// One-dimensional point.
    pub fn one(z: Complex64) -> Self {
        Point(vec![z])
    }

    /// Number of complex coordinates.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinates as a slice.
    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    /// Consumes the point, returning the raw coordinates.
    pub fn into_coords(self) -> Vec<Complex64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, z) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", crate::domains::format_complex(*z))?;
        }
        write!(f, ")")
    }
}

/// Squared Euclidean norm of a coordinate slice.
pub fn norm_sqr(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum()
}

/// Euclidean norm of a coordinate slice.
pub fn norm(z: &[Complex64]) -> f64 {
    norm_sqr(z).sqrt()
}

/// Hermitian inner product `<z, w> = sum_j z_j conj(w_j)`.
pub fn inner(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    debug_assert_eq!(z.len(), w.len());
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(Point::new(vec![]).is_err());
        assert!(Point::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(Point::new(vec![c(0.0, f64::INFINITY)]).is_err());
        assert!(Point::new(vec![c(1.0, -2.0)]).is_ok());
    }

    #[test]
    fn inner_product_matches_norm() {
        let z = [c(0.3, -0.1), c(0.0, 0.7)];
        let ip = inner(&z, &z);
        assert!((ip.re - norm_sqr(&z)).abs() < 1e-15);
        assert_eq!(ip.im, 0.0);
    }
}
