//! Multi-indices `alpha = (alpha_1, ..., alpha_n)` of monomials `z^alpha`.
//!
//! Factorials are evaluated in exact integer arithmetic (arbitrary width)
//! and converted to `f64` once at the end, so `alpha! / m_alpha` ratios do
//! not accumulate rounding from repeated floating multiplication.  Beyond
//! degree 170 a factorial no longer fits in an `f64` at all; callers that
//! operate in that regime work with [`MultiIndex::ln_factorial`] instead.

use std::fmt;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use statrs::function::gamma::ln_gamma;

/// Exponent vector of a monomial in `n` complex variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    /// Builds a multi-index from its entries.  Panics on an empty vector:
    /// multi-indices live in the same `C^n`, `n >= 1`, as the domains.
    pub fn new(entries: Vec<u32>) -> Self {
        assert!(!entries.is_empty(), "a multi-index needs at least one entry");
        MultiIndex(entries)
    }

    /// The zero multi-index of length `n` (the constant monomial).
    pub fn zero(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total order `|alpha| = alpha_1 + ... + alpha_n`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Entry `alpha_j` (zero-based `j`).
    pub fn entry(&self, j: usize) -> u32 {
        self.0[j]
    }

    /// All entries.
    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise difference, `None` unless `other <= self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.le(self) {
            return None;
        }
        Some(MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// `alpha! = prod_j alpha_j!` as an `f64`, exact until conversion.
    pub fn factorial(&self) -> f64 {
        let mut acc = BigUint::from(1u32);
        for &a in &self.0 {
            for k in 2..=u64::from(a) {
                acc *= k;
            }
        }
        acc.to_f64().unwrap_or(f64::INFINITY)
    }

    /// `ln(alpha!)`, usable past the `f64` overflow threshold of `alpha!`.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&a| ln_gamma(f64::from(a) + 1.0)).sum()
    }

    /// Falling-factorial coefficient `prod_j alpha_j (alpha_j - 1) ... (alpha_j - beta_j + 1)`.
    ///
    /// This is the scalar produced by applying `D^beta` to `z^alpha`:
    /// `D^beta z^alpha = fall(alpha, beta) z^(alpha - beta)` when
    /// `beta <= alpha`, and `0` otherwise (the caller checks).
    pub fn falling_factorial(&self, beta: &MultiIndex) -> f64 {
        debug_assert!(beta.le(self));
        let mut acc = 1.0;
        for (&a, &b) in self.0.iter().zip(&beta.0) {
            for k in 0..b {
                acc *= f64::from(a - k);
            }
        }
        acc
    }

    /// Concatenation, used when a product domain splits into factors.
    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    /// Splits into the first `k` entries and the rest.  Panics unless
    /// `0 < k < dim`.
    pub fn split_at(&self, k: usize) -> (MultiIndex, MultiIndex) {
        assert!(k > 0 && k < self.dim());
        let (a, b) = self.0.split_at(k);
        (MultiIndex(a.to_vec()), MultiIndex(b.to_vec()))
    }

    /// Evaluates the monomial `z^alpha`.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.dim());
        self.0
            .iter()
            .zip(z)
            .map(|(&a, zj)| zj.powu(a))
            .product()
    }

    /// All multi-indices of length `dim` with `|alpha| = degree`, in
    /// lexicographic order.  The ordering is part of the crate's
    /// determinism contract: every series and basis enumeration uses it.
    pub fn of_degree(dim: usize, degree: u32) -> Vec<MultiIndex> {
        assert!(dim >= 1);
        let mut out = Vec::new();
        let mut current = vec![0u32; dim];
        fill(&mut out, &mut current, 0, degree);
        out
    }

    /// All multi-indices of length `dim` with `|alpha| <= cap`, grouped by
    /// total degree and lexicographic within each degree.
    pub fn up_to_degree(dim: usize, cap: u32) -> Vec<MultiIndex> {
        (0..=cap).flat_map(|d| Self::of_degree(dim, d)).collect()
    }
}

fn fill(out: &mut Vec<MultiIndex>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for a in 0..=remaining {
        current[pos] = a;
        fill(out, current, pos + 1, remaining - a);
    }
    current[pos] = 0;
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, a) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_is_exact_for_small_orders() {
        assert_eq!(MultiIndex::new(vec![0]).factorial(), 1.0);
        assert_eq!(MultiIndex::new(vec![5]).factorial(), 120.0);
        assert_eq!(MultiIndex::new(vec![3, 2]).factorial(), 12.0);
        // 20! fits exactly in f64's integer range? 20! = 2.43e18 > 2^53, but
        // the BigUint conversion rounds once, so the value is correct to
        // one ulp of the true integer.
        let f20 = MultiIndex::new(vec![20]).factorial();
        assert!((f20 - 2.43290200817664e18).abs() / f20 < 1e-15);
    }

    #[test]
    fn ln_factorial_tracks_factorial() {
        for a in [0u32, 1, 7, 40, 160] {
            let mi = MultiIndex::new(vec![a]);
            if a <= 160 {
                let diff = (mi.factorial().ln() - mi.ln_factorial()).abs();
                assert!(diff < 1e-9, "a = {a}, diff = {diff}");
            }
        }
    }

    #[test]
    fn falling_factorial_matches_derivative_coefficient() {
        let alpha = MultiIndex::new(vec![4, 2]);
        let beta = MultiIndex::new(vec![2, 1]);
        // D^(2,1) z1^4 z2^2 = 4*3 * 2 * z1^2 z2.
        assert_eq!(alpha.falling_factorial(&beta), 24.0);
        assert_eq!(alpha.falling_factorial(&MultiIndex::zero(2)), 1.0);
    }

    #[test]
    fn degree_enumeration_counts_compositions() {
        // #{|alpha| = d in n variables} = C(d + n - 1, n - 1).
        assert_eq!(MultiIndex::of_degree(2, 3).len(), 4);
        assert_eq!(MultiIndex::of_degree(3, 2).len(), 6);
        // Total count up to cap 5 in 2 variables: C(7, 2) = 21.
        assert_eq!(MultiIndex::up_to_degree(2, 5).len(), 21);
        // Lexicographic within a degree.
        let d2 = MultiIndex::of_degree(2, 2);
        assert_eq!(
            d2,
            vec![
                MultiIndex::new(vec![0, 2]),
                MultiIndex::new(vec![1, 1]),
                MultiIndex::new(vec![2, 0]),
            ]
        );
    }

    #[test]
    fn monomial_evaluation() {
        let alpha = MultiIndex::new(vec![2, 1]);
        let z = [Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0)];
        // (i)^2 * 2 = -2.
        assert_eq!(alpha.eval(&z), Complex64::new(-2.0, 0.0));
    }
}
