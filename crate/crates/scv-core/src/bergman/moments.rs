//! Monomial moment integrals `m_alpha = int_D |z^alpha|^2 dlambda^(2n)`.
//!
//! On a Reinhardt domain the monomials are pairwise orthogonal, so these
//! moments are the entire Gram data of the Bergman space: every kernel in
//! this crate is a sum of `|w^alpha|^2 / m_alpha` terms over the finite
//! moments.  All catalog moments are closed forms:
//!
//! * disc of radius `r`:  `pi r^(2a+2) / (a+1)`;
//! * polydisc: product of disc factors;
//! * unit ball of `C^n`:  `pi^n alpha! / (n + |alpha|)!`;
//! * ellipsoid `{ sum |z_j|^(2 p_j) < 1 }`: per-coordinate polar
//!   integration and a Dirichlet integral over the simplex give
//!   `pi^n prod_j (1/p_j) prod_j Gamma(s_j) / Gamma(1 + sum_j s_j)` with
//!   `s_j = (alpha_j + 1) / p_j`;
//! * `model-z1z2 = { |z_1 z_2| < 1 }`: the fiber integral over `z_1` is
//!   `pi / (a+1) |z_2|^(-2a-2)`, leaving a radial exponent `2b - 2a - 2`
//!   in `|z_2|` that fails integrability at 0 or infinity for every
//!   `(a, b)` — every moment diverges and the Bergman space is trivial.
//!
//! Small factorial ratios are evaluated in exact integer arithmetic and
//! converted once; past the `f64` overflow range the log-Gamma route takes
//! over.  The quadrature tag exists for entries validated numerically in
//! tests; production tables are entirely closed-form.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use statrs::function::gamma::ln_gamma;

use crate::domains::{DomainSpec, MultiIndex};
use crate::error::{Error, Result};

/// A single moment value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    /// Finite positive value of the integral.
    Finite(f64),
    /// The integral diverges; the monomial is not square-integrable.
    Divergent,
}

impl Moment {
    /// The finite value, if any.
    pub fn finite(&self) -> Option<f64> {
        match self {
            Moment::Finite(v) => Some(*v),
            Moment::Divergent => None,
        }
    }
}

/// How a table entry was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    ClosedForm,
    Quadrature,
}

const LN_PI: f64 = 1.1447298858494002; // ln(pi)

/// Moment of `z^alpha` on a Reinhardt catalog member.
pub fn moment(domain: &DomainSpec, alpha: &MultiIndex) -> Result<Moment> {
    if alpha.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: alpha.dim() });
    }
    match domain {
        DomainSpec::Disc { center, radius } => {
            if *center != num_complex::Complex64::new(0.0, 0.0) {
                return Err(Error::NotReinhardt(domain.to_string()));
            }
            Ok(Moment::Finite(disc_moment(*radius, alpha.entry(0))))
        }
        DomainSpec::Ball { dim } => Ok(Moment::Finite(ball_moment(*dim, alpha))),
        DomainSpec::Polydisc { radii } => {
            let mut acc = 1.0;
            for (j, r) in radii.iter().enumerate() {
                acc *= disc_moment(*r, alpha.entry(j));
            }
            Ok(Moment::Finite(acc))
        }
        DomainSpec::Ellipsoid { exponents } => Ok(Moment::Finite(ellipsoid_moment(
            exponents,
            alpha,
        ))),
        DomainSpec::BalancedGauge(g) if g.name == "model-z1z2" => Ok(Moment::Divergent),
        DomainSpec::BalancedGauge(_) => Err(Error::NotReinhardt(domain.to_string())),
        DomainSpec::Product { factors } => {
            let mut acc = 1.0;
            let mut divergent = false;
            let mut offset = 0;
            for f in factors {
                let d = f.dim();
                let sub = MultiIndex::new(alpha.entries()[offset..offset + d].to_vec());
                match moment(f, &sub)? {
                    Moment::Finite(v) => acc *= v,
                    Moment::Divergent => divergent = true,
                }
                offset += d;
            }
            if divergent {
                Ok(Moment::Divergent)
            } else {
                Ok(Moment::Finite(acc))
            }
        }
    }
}

/// `int_{|z|<r} |z^a|^2 = pi r^(2a+2) / (a+1)`.
fn disc_moment(radius: f64, a: u32) -> f64 {
    std::f64::consts::PI * radius.powi(2 * a as i32 + 2) / f64::from(a + 1)
}

/// `pi^n alpha! / (n + |alpha|)!`, exact integers while the factorials fit
/// in `f64`, log-Gamma beyond.
fn ball_moment(n: usize, alpha: &MultiIndex) -> f64 {
    let total = n as u64 + u64::from(alpha.order());
    if total <= 170 {
        let mut num = BigUint::from(1u32);
        for &a in alpha.entries() {
            for k in 2..=u64::from(a) {
                num *= k;
            }
        }
        let mut den = BigUint::from(1u32);
        for k in 2..=total {
            den *= k;
        }
        let ratio = num.to_f64().unwrap_or(f64::INFINITY) / den.to_f64().unwrap_or(f64::INFINITY);
        std::f64::consts::PI.powi(n as i32) * ratio
    } else {
        let ln = (n as f64) * LN_PI + alpha.ln_factorial() - ln_gamma(total as f64 + 1.0);
        ln.exp()
    }
}

/// Dirichlet-integral closed form for the complex ellipsoid.
fn ellipsoid_moment(exponents: &[f64], alpha: &MultiIndex) -> f64 {
    let n = exponents.len() as f64;
    let mut ln = n * LN_PI;
    let mut s_total = 0.0;
    for (j, p) in exponents.iter().enumerate() {
        let s = (f64::from(alpha.entry(j)) + 1.0) / p;
        ln += ln_gamma(s) - p.ln();
        s_total += s;
    }
    ln -= ln_gamma(1.0 + s_total);
    ln.exp()
}

/// Moment table of a Reinhardt member up to a total-degree cap.
///
/// Enumeration order is degree-major, lexicographic within each degree —
/// the same order every kernel series sums in, which pins floating-point
/// results independently of thread scheduling.
#[derive(Debug, Clone)]
pub struct MomentTable {
    domain: DomainSpec,
    degree_cap: u32,
    indices: Vec<MultiIndex>,
    moments: Vec<Moment>,
    tags: Vec<MethodTag>,
    lookup: HashMap<MultiIndex, usize>,
}

/// Hard cap on table entries; `C(cap + n, n)` grows fast in `n`.
const MAX_TABLE_ENTRIES: u64 = 2_000_000;

impl MomentTable {
    /// Builds the table, erroring on non-Reinhardt domains and on caps
    /// whose enumeration would exceed the entry limit.
    pub fn build(domain: &DomainSpec, degree_cap: u32) -> Result<Self> {
        let n = domain.dim();
        let count = table_size(n, degree_cap);
        if count > MAX_TABLE_ENTRIES {
            return Err(Error::InvalidInput(format!(
                "moment table would hold {count} entries (cap {MAX_TABLE_ENTRIES}); \
                 lower the degree cap"
            )));
        }
        let indices = MultiIndex::up_to_degree(n, degree_cap);
        let mut moments = Vec::with_capacity(indices.len());
        let mut lookup = HashMap::with_capacity(indices.len());
        for (i, alpha) in indices.iter().enumerate() {
            moments.push(moment(domain, alpha)?);
            lookup.insert(alpha.clone(), i);
        }
        let tags = vec![MethodTag::ClosedForm; indices.len()];
        Ok(MomentTable { domain: domain.clone(), degree_cap, indices, moments, tags, lookup })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    /// All entries in enumeration order.
    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, Moment, MethodTag)> {
        self.indices
            .iter()
            .zip(&self.moments)
            .zip(&self.tags)
            .map(|((a, m), t)| (a, *m, *t))
    }

    /// Entries with finite moments, in enumeration order.
    pub fn finite_entries(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.entries().filter_map(|(a, m, _)| m.finite().map(|v| (a, v)))
    }

    /// Looks up a single moment.
    pub fn moment_of(&self, alpha: &MultiIndex) -> Option<Moment> {
        self.lookup.get(alpha).map(|&i| self.moments[i])
    }

    /// Number of finite (square-integrable) monomials.
    pub fn finite_count(&self) -> usize {
        self.moments.iter().filter(|m| matches!(m, Moment::Finite(_))).count()
    }

    /// Total number of enumerated monomials.
    pub fn total_count(&self) -> usize {
        self.indices.len()
    }
}

/// `C(cap + n, n)` with saturation.
fn table_size(n: usize, cap: u32) -> u64 {
    let mut acc: u64 = 1;
    for j in 1..=n as u64 {
        acc = acc.saturating_mul(u64::from(cap) + j) / j;
        if acc > 10 * MAX_TABLE_ENTRIES {
            return acc;
        }
    }
    acc
}
