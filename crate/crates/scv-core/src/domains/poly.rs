//! Homogeneous holomorphic polynomials `H(z) = sum_{|alpha| = k} a_alpha z^alpha`.
//!
//! These are the jet prescriptions of the higher-order kernels: `K^H(w)`
//! maximises `|k-th Taylor term matching H|` over the unit ball of the
//! Bergman space.  The degree-0 polynomial `H = 1` recovers the classical
//! kernel, and `H = H_X = sum_j X_j z_j` raised to the `k`-th power drives
//! the directional kernels `K^(k)(w; X)`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::multi_index::MultiIndex;
use crate::error::{Error, Result};

/// A homogeneous polynomial with complex coefficients.
///
/// Invariants: all stored multi-indices have length `dim` and order
/// `degree`; no zero coefficient is stored.  Terms live in a `BTreeMap` so
/// iteration order (and hence every downstream summation) is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoly {
    dim: usize,
    degree: u32,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl HomogeneousPoly {
    /// Builds a polynomial from `(alpha, a_alpha)` pairs.  All indices must
    /// share the length `dim` and the order `degree`; zero coefficients are
    /// dropped.  An empty term list is the zero polynomial, which is not a
    /// valid jet prescription and is rejected.
    pub fn new(
        dim: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (alpha, a) in terms {
            if alpha.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: alpha.dim() });
            }
            if alpha.order() != degree {
                return Err(Error::InvalidInput(format!(
                    "term {alpha} has order {} in a degree-{degree} polynomial",
                    alpha.order()
                )));
            }
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite coefficient for {alpha}")));
            }
            if a != Complex64::new(0.0, 0.0) {
                let prev = map.insert(alpha.clone(), a);
                if prev.is_some() {
                    return Err(Error::InvalidInput(format!("duplicate term {alpha}")));
                }
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidInput(
                "the zero polynomial is not a valid jet prescription".into(),
            ));
        }
        Ok(HomogeneousPoly { dim, degree, terms: map })
    }

    /// The constant polynomial `H = 1` in `n` variables (degree 0).
    pub fn one(dim: usize) -> Self {
        Self::monomial(MultiIndex::zero(dim), Complex64::new(1.0, 0.0))
            .expect("the unit constant is a valid polynomial")
    }

    /// Single-term polynomial `a z^alpha`.
    pub fn monomial(alpha: MultiIndex, coeff: Complex64) -> Result<Self> {
        let dim = alpha.dim();
        let degree = alpha.order();
        Self::new(dim, degree, [(alpha, coeff)])
    }

    /// The linear form `H_X(z) = X_1 z_1 + ... + X_n z_n`.  Rejects
    /// `X = 0`, which prescribes the zero jet.
    pub fn linear_form(x: &[Complex64]) -> Result<Self> {
        let dim = x.len();
        let terms = x.iter().enumerate().filter(|(_, c)| **c != Complex64::new(0.0, 0.0)).map(
            |(j, c)| {
                let mut e = vec![0u32; dim];
                e[j] = 1;
                (MultiIndex::new(e), *c)
            },
        );
        Self::new(dim, 1, terms)
    }

    /// `(H_X)^k`, expanded with multinomial coefficients:
    /// the coefficient of `z^gamma` is `(k! / gamma!) X^gamma`.
    pub fn linear_form_power(x: &[Complex64], k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(Self::one(x.len()));
        }
        if x.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidInput("zero direction has no jet power".into()));
        }
        let dim = x.len();
        let k_fact = MultiIndex::new(vec![k]).factorial();
        let terms = MultiIndex::of_degree(dim, k).into_iter().filter_map(|gamma| {
            let coeff = gamma.eval(x) * (k_fact / gamma.factorial());
            (coeff != Complex64::new(0.0, 0.0)).then_some((gamma, coeff))
        });
        Self::new(dim, k, terms)
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Homogeneity degree `k`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Iterates terms in deterministic (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, Complex64)> {
        self.terms.iter().map(|(a, c)| (a, *c))
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `Some((alpha, a))` when the polynomial is a single monomial.
    pub fn as_monomial(&self) -> Option<(&MultiIndex, Complex64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(a, c)| (a, *c))
        } else {
            None
        }
    }

    /// Evaluates `H(z)`.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.dim);
        self.terms.iter().map(|(alpha, a)| a * alpha.eval(z)).sum()
    }

    /// Product of two polynomials (degrees add).  Used to assemble jets on
    /// product domains from jets on the factors.
    pub fn mul(&self, other: &HomogeneousPoly) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut acc: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let sum = MultiIndex::new(
                    a.entries().iter().zip(b.entries()).map(|(x, y)| x + y).collect(),
                );
                *acc.entry(sum).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
            }
        }
        Self::new(self.dim, self.degree + other.degree, acc)
    }

    /// Re-embeds into `C^total`, shifting every variable by `offset`.
    /// `H(z_1..z_n)` becomes `H(z_{offset+1}..z_{offset+n})`.
    pub fn embed(&self, offset: usize, total: usize) -> Result<Self> {
        if offset + self.dim > total {
            return Err(Error::InvalidInput(format!(
                "cannot embed a {}-variable polynomial at offset {offset} into C^{total}",
                self.dim
            )));
        }
        let terms = self.terms.iter().map(|(alpha, a)| {
            let mut e = vec![0u32; total];
            e[offset..offset + self.dim].copy_from_slice(alpha.entries());
            (MultiIndex::new(e), *a)
        });
        Self::new(total, self.degree, terms)
    }

    /// Splits a monomial jet on a product `C^k x C^(n-k)` into factor jets,
    /// attaching the coefficient to the first factor.  `None` if the
    /// polynomial has several terms (a genuine cross-term jet does not
    /// factor).
    pub fn split_monomial(&self, k: usize) -> Option<(HomogeneousPoly, HomogeneousPoly)> {
        let (alpha, a) = self.as_monomial()?;
        let (left, right) = alpha.split_at(k);
        let lhs = HomogeneousPoly::monomial(left, a).ok()?;
        let rhs = HomogeneousPoly::monomial(right, Complex64::new(1.0, 0.0)).ok()?;
        Some((lhs, rhs))
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, (alpha, a)) in self.terms.iter().enumerate() {
            if j > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})z^{}", crate::domains::format_complex(*a), alpha)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_mixed_degrees_and_zero() {
        let t1 = (MultiIndex::new(vec![1, 0]), c(1.0, 0.0));
        let t2 = (MultiIndex::new(vec![1, 1]), c(1.0, 0.0));
        assert!(HomogeneousPoly::new(2, 1, [t1.clone(), t2]).is_err());
        assert!(HomogeneousPoly::new(2, 1, [(t1.0, c(0.0, 0.0))]).is_err());
    }

    #[test]
    fn linear_form_power_expands_multinomially() {
        // (z1 + 2 z2)^2 = z1^2 + 4 z1 z2 + 4 z2^2.
        let h = HomogeneousPoly::linear_form_power(&[c(1.0, 0.0), c(2.0, 0.0)], 2).unwrap();
        assert_eq!(h.degree(), 2);
        let coeffs: Vec<(Vec<u32>, Complex64)> =
            h.terms().map(|(a, v)| (a.entries().to_vec(), v)).collect();
        assert_eq!(
            coeffs,
            vec![
                (vec![0, 2], c(4.0, 0.0)),
                (vec![1, 1], c(4.0, 0.0)),
                (vec![2, 0], c(1.0, 0.0)),
            ]
        );
    }

    #[test]
    fn power_matches_repeated_multiplication() {
        let x = [c(0.3, -0.4), c(-1.0, 0.2)];
        let h1 = HomogeneousPoly::linear_form(&x).unwrap();
        let h3 = h1.mul(&h1).unwrap().mul(&h1).unwrap();
        let h3_direct = HomogeneousPoly::linear_form_power(&x, 3).unwrap();
        let z = [c(0.2, 0.1), c(-0.5, 0.3)];
        assert!((h3.eval(&z) - h3_direct.eval(&z)).norm() < 1e-14);
    }

    #[test]
    fn embedding_shifts_variables() {
        let h = HomogeneousPoly::monomial(MultiIndex::new(vec![2]), c(1.0, 0.0)).unwrap();
        let em = h.embed(1, 3).unwrap();
        let z = [c(9.0, 0.0), c(2.0, 0.0), c(7.0, 0.0)];
        assert_eq!(em.eval(&z), c(4.0, 0.0));
    }
}
