//! Bergman kernels: the classical on-diagonal kernel, kernels with a
//! polynomial jet attached, directional kernels, and the induced metric.
//!
//! On a Reinhardt domain the normalized monomials `z^alpha / sqrt(m_alpha)`
//! form a complete orthonormal system of the Bergman space, so
//!
//! ```text
//! K_D(w) = sum_alpha |w^alpha|^2 / m_alpha
//! ```
//!
//! truncated at a total-degree cap.  The jet variant `K^H_D(w)` maximizes
//! `|sum_(|alpha|=k) a_alpha D^alpha f(w)|^2` over unit-norm `f` whose
//! derivatives of order below `k = deg H` all vanish at `w`.  In monomial
//! coordinates that is a linearly constrained largest-singular-value
//! problem: orthonormalize the constraint rows, project the objective
//! vector onto their orthogonal complement, and the squared norm of the
//! residual is the supremum.  The directional kernel `K^(k)(w; X)` is the
//! jet kernel for `H = <., X>^k`, and the Bergman metric is
//! `beta(w; X) = sqrt(K^(1)(w; X) / K(w))`.
//!
//! A separate evaluator handles sublevel-set geometries (scaled copies,
//! Euclidean discs, products) so that families `{G < a}` can be scanned
//! without rebuilding domain values from scratch: scaling a domain by `s`
//! multiplies `K^H` by `s^(-2(n + k))`.

use num_complex::Complex64;

use crate::bergman::moments::{Moment, MomentTable};
use crate::domains::{DomainSpec, HomogeneousPoly, MultiIndex, Point};
use crate::error::{Error, Result};
use crate::green::SublevelGeometry;

/// Rank tolerance for dropping numerically dependent constraint rows.
const RANK_TOL: f64 = 1e-10;

/// Result of a kernel evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelResult {
    /// The (truncated or exact) kernel value.
    pub value: f64,
    /// Total-degree cap the series was summed to (0 for closed forms).
    pub degree_cap: u32,
    /// Contribution of the top degree block — a cheap truncation proxy.
    pub tail_estimate: f64,
    /// True when the value is a closed form with no truncation.
    pub exact_flag: bool,
    /// True when no monomial is square-integrable (trivial Bergman space).
    pub trivial_space: bool,
}

impl KernelResult {
    fn exact(value: f64) -> Self {
        KernelResult {
            value,
            degree_cap: 0,
            tail_estimate: 0.0,
            exact_flag: true,
            trivial_space: false,
        }
    }

    fn trivial(degree_cap: u32) -> Self {
        KernelResult {
            value: 0.0,
            degree_cap,
            tail_estimate: 0.0,
            exact_flag: true,
            trivial_space: true,
        }
    }
}

/// Truncated-series Bergman kernel `K_D(w)` on a Reinhardt member.
pub fn kernel(domain: &DomainSpec, w: &Point, degree_cap: u32) -> Result<KernelResult> {
    domain.check_dim(w.dim())?;
    if !domain.contains(w)? {
        return Err(Error::OutsideDomain(format!("{w} is not inside {domain}")));
    }
    let table = MomentTable::build(domain, degree_cap)?;
    if table.finite_count() == 0 {
        return Ok(KernelResult::trivial(degree_cap));
    }
    let pows = power_tables(w, degree_cap);
    let mut value = 0.0;
    let mut tail = 0.0;
    for (alpha, m) in table.finite_entries() {
        let term = monomial_sqr(&pows, alpha) / m;
        value += term;
        if alpha.order() == degree_cap {
            tail += term;
        }
    }
    Ok(KernelResult {
        value,
        degree_cap,
        tail_estimate: tail,
        exact_flag: false,
        trivial_space: false,
    })
}

/// Closed-form kernel where one is known: discs (any center), balls,
/// polydiscs, products of those, and the center of any Reinhardt member.
/// Returns `Ok(None)` when no closed form applies.
pub fn kernel_closed(domain: &DomainSpec, w: &Point) -> Result<Option<f64>> {
    domain.check_dim(w.dim())?;
    if !domain.contains(w)? {
        return Err(Error::OutsideDomain(format!("{w} is not inside {domain}")));
    }
    closed_value(domain, w)
}

fn closed_value(domain: &DomainSpec, w: &Point) -> Result<Option<f64>> {
    use std::f64::consts::PI;
    match domain {
        DomainSpec::Disc { center, radius } => {
            let d2 = (w[0] - center).norm_sqr();
            let r2 = radius * radius;
            Ok(Some(r2 / (PI * (r2 - d2) * (r2 - d2))))
        }
        DomainSpec::Ball { dim } => {
            let n = *dim;
            let mut fact = 1.0;
            for j in 2..=n {
                fact *= j as f64;
            }
            let s = 1.0 - crate::domains::norm_sqr(w);
            Ok(Some(fact / (PI.powi(n as i32) * s.powi(n as i32 + 1))))
        }
        DomainSpec::Polydisc { radii } => {
            let mut acc = 1.0;
            for (j, r) in radii.iter().enumerate() {
                let d2 = w[j].norm_sqr();
                let r2 = r * r;
                acc *= r2 / (PI * (r2 - d2) * (r2 - d2));
            }
            Ok(Some(acc))
        }
        DomainSpec::Ellipsoid { .. } => {
            if w.iter().all(|z| z.norm_sqr() == 0.0) {
                let m0 = crate::bergman::moments::moment(domain, &MultiIndex::zero(w.dim()))?;
                match m0 {
                    Moment::Finite(v) => Ok(Some(1.0 / v)),
                    Moment::Divergent => Ok(None),
                }
            } else {
                Ok(None)
            }
        }
        DomainSpec::BalancedGauge(_) => Ok(None),
        DomainSpec::Product { factors } => {
            let mut acc = 1.0;
            let mut offset = 0;
            for f in factors {
                let d = f.dim();
                let sub = Point::new(w[offset..offset + d].to_vec())?;
                match closed_value(f, &sub)? {
                    Some(v) => acc *= v,
                    None => return Ok(None),
                }
                offset += d;
            }
            Ok(Some(acc))
        }
    }
}

/// Best available kernel value: closed form when known (exact), otherwise
/// the truncated series.
pub fn kernel_best(domain: &DomainSpec, w: &Point, degree_cap: u32) -> Result<KernelResult> {
    if let Some(v) = kernel_closed(domain, w)? {
        return Ok(KernelResult::exact(v));
    }
    kernel(domain, w, degree_cap)
}

/// Jet kernel `K^H_D(w)` by constrained projection in monomial coordinates.
///
/// The candidate space is spanned by normalized monomials up to the degree
/// cap; rows enforcing `D^beta f(w) = 0` for `|beta| < deg H` are
/// orthonormalized by modified Gram-Schmidt with re-orthogonalization, the
/// objective vector `alpha -> P_H(phi_alpha)(w)` is projected onto their
/// orthogonal complement, and the squared residual norm is the supremum
/// over that truncated space.
pub fn kernel_h(
    domain: &DomainSpec,
    w: &Point,
    jet: &HomogeneousPoly,
    degree_cap: u32,
) -> Result<KernelResult> {
    domain.check_dim(w.dim())?;
    domain.check_dim(jet.dim())?;
    if !domain.contains(w)? {
        return Err(Error::OutsideDomain(format!("{w} is not inside {domain}")));
    }
    let k = jet.degree();
    if degree_cap < k {
        return Err(Error::InvalidInput(format!(
            "degree cap {degree_cap} is below the jet order {k}"
        )));
    }
    let table = MomentTable::build(domain, degree_cap)?;
    if table.finite_count() == 0 {
        return Ok(KernelResult::trivial(degree_cap));
    }

    // Basis bookkeeping: square-integrable monomials in enumeration order.
    let basis: Vec<(&MultiIndex, f64)> = table.finite_entries().collect();

    // Objective: P_H(phi_alpha)(w) per basis element.
    let mut objective: Vec<Complex64> = Vec::with_capacity(basis.len());
    for (alpha, m) in &basis {
        let mut acc = Complex64::new(0.0, 0.0);
        for (gamma, a) in jet.terms() {
            if let Some(diff) = alpha.checked_sub(gamma) {
                let fall = alpha.falling_factorial(gamma);
                acc += a * fall * diff.eval(w);
            }
        }
        objective.push(acc / m.sqrt());
    }

    // Constraint rows: D^beta phi_alpha(w) for every |beta| < k.
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    if k > 0 {
        for beta in MultiIndex::up_to_degree(w.dim(), k - 1) {
            let mut row = Vec::with_capacity(basis.len());
            for (alpha, m) in &basis {
                let entry = match alpha.checked_sub(&beta) {
                    Some(diff) => {
                        Complex64::from(alpha.falling_factorial(&beta)) * diff.eval(w) / m.sqrt()
                    }
                    None => Complex64::new(0.0, 0.0),
                };
                row.push(entry);
            }
            rows.push(row);
        }
    }

    let q = orthonormalize(rows);
    project_out(&mut objective, &q);

    let mut value = 0.0;
    let mut tail = 0.0;
    for ((alpha, _), v) in basis.iter().zip(&objective) {
        let term = v.norm_sqr();
        value += term;
        if alpha.order() == degree_cap {
            tail += term;
        }
    }
    Ok(KernelResult {
        value,
        degree_cap,
        tail_estimate: tail,
        exact_flag: false,
        trivial_space: false,
    })
}

/// Jet kernel at the center of a balanced Reinhardt member via the
/// orthogonality shortcut
/// `K^H_D(0) = (sum |a_alpha|^2 alpha!)^2 / int_D |H|^2`,
/// where the denominator reduces to `sum |a_alpha|^2 m_alpha`.
pub fn kernel_h_balanced(domain: &DomainSpec, jet: &HomogeneousPoly) -> Result<f64> {
    if !domain.is_balanced() {
        return Err(Error::NotBalanced(domain.to_string()));
    }
    domain.check_dim(jet.dim())?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (alpha, a) in jet.terms() {
        let a2 = a.norm_sqr();
        num += a2 * alpha.factorial();
        match crate::bergman::moments::moment(domain, alpha)? {
            Moment::Finite(m) => den += a2 * m,
            Moment::Divergent => {
                return Err(Error::DivergentMoment(format!(
                    "int |H|^2 diverges on {domain} (monomial {alpha})"
                )))
            }
        }
    }
    Ok(num * num / den)
}

/// Directional kernel `K^(k)_D(w; X)`, the jet kernel for `H = <., X>^k`.
pub fn kernel_k(
    domain: &DomainSpec,
    w: &Point,
    direction: &Point,
    k: u32,
    degree_cap: u32,
) -> Result<KernelResult> {
    domain.check_dim(direction.dim())?;
    let jet = if k == 0 {
        HomogeneousPoly::one(domain.dim())
    } else {
        HomogeneousPoly::linear_form_power(direction.coords(), k)?
    };
    kernel_h(domain, w, &jet, degree_cap)
}

/// Bergman metric `beta_D(w; X) = sqrt(K^(1)_D(w; X) / K_D(w))`.
///
/// Degenerate `X = 0` yields 0; a trivial or vanishing kernel makes the
/// metric undefined.
pub fn bergman_metric(
    domain: &DomainSpec,
    w: &Point,
    direction: &Point,
    degree_cap: u32,
) -> Result<f64> {
    domain.check_dim(direction.dim())?;
    let base = kernel(domain, w, degree_cap)?;
    if base.trivial_space || base.value <= 0.0 {
        return Err(Error::UndefinedMetric(format!(
            "Bergman kernel vanishes at {w} on {domain}"
        )));
    }
    if direction.iter().all(|x| x.norm_sqr() == 0.0) {
        return Ok(0.0);
    }
    let jet = kernel_k(domain, w, direction, 1, degree_cap)?;
    Ok((jet.value / base.value).sqrt())
}

/// Kernel on a sublevel-set geometry.
///
/// Scaled copies pull back through `K_{sD}(w) = s^(-2n) K_D(w/s)`,
/// Euclidean discs use the closed form, products multiply factor values.
pub fn kernel_on_sublevel(
    geometry: &SublevelGeometry,
    w: &Point,
    degree_cap: u32,
) -> Result<KernelResult> {
    use std::f64::consts::PI;
    if geometry.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: geometry.dim(), got: w.dim() });
    }
    match geometry {
        SublevelGeometry::ScaledCopy { factor, base } => {
            let n = base.dim() as i32;
            let inner = Point::new(w.iter().map(|z| z / factor).collect())?;
            let r = kernel(base, &inner, degree_cap)?;
            let scale = factor.powi(-2 * n);
            Ok(KernelResult { value: r.value * scale, tail_estimate: r.tail_estimate * scale, ..r })
        }
        SublevelGeometry::EuclideanDisc { center, radius } => {
            if !geometry.contains(w)? {
                return Err(Error::OutsideDomain(format!("{w} is not inside {geometry}")));
            }
            let d2 = (w[0] - center).norm_sqr();
            let r2 = radius * radius;
            Ok(KernelResult::exact(r2 / (PI * (r2 - d2) * (r2 - d2))))
        }
        SublevelGeometry::ProductOf(parts) => {
            let mut values = Vec::with_capacity(parts.len());
            let mut offset = 0;
            for part in parts {
                let d = part.dim();
                let sub = Point::new(w[offset..offset + d].to_vec())?;
                values.push(kernel_on_sublevel(part, &sub, degree_cap)?);
                offset += d;
            }
            Ok(combine_product(&values, degree_cap))
        }
    }
}

/// Jet kernel on a sublevel-set geometry; `K^H_{sD}(w) = s^(-2(n+k)) K^H_D(w/s)`
/// for homogeneous `H` of degree `k`.  Product geometries require a
/// monomial jet so it splits across the factors.
pub fn kernel_h_on_sublevel(
    geometry: &SublevelGeometry,
    w: &Point,
    jet: &HomogeneousPoly,
    degree_cap: u32,
) -> Result<KernelResult> {
    use std::f64::consts::PI;
    if geometry.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: geometry.dim(), got: w.dim() });
    }
    if jet.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), got: jet.dim() });
    }
    let k = jet.degree();
    match geometry {
        SublevelGeometry::ScaledCopy { factor, base } => {
            let n = base.dim() as i32;
            let inner = Point::new(w.iter().map(|z| z / factor).collect())?;
            let r = kernel_h(base, &inner, jet, degree_cap)?;
            let scale = factor.powi(-2 * (n + k as i32));
            Ok(KernelResult { value: r.value * scale, tail_estimate: r.tail_estimate * scale, ..r })
        }
        SublevelGeometry::EuclideanDisc { center, radius } => {
            if !geometry.contains(w)? {
                return Err(Error::OutsideDomain(format!("{w} is not inside {geometry}")));
            }
            let (alpha, coeff) = jet.as_monomial().ok_or_else(|| {
                Error::UnsupportedGeometry(
                    "jet kernels on disc geometries need a monomial jet".to_string(),
                )
            })?;
            let a = alpha.entry(0);
            let u2 = (w[0] - center).norm_sqr() / (radius * radius);
            let mut fact = 1.0;
            for j in 2..=a {
                fact *= f64::from(j);
            }
            let value = coeff.norm_sqr() * fact * fact * f64::from(a + 1)
                / (PI * radius.powi(2 * a as i32 + 2) * (1.0 - u2).powi(2 * a as i32 + 2));
            Ok(KernelResult::exact(value))
        }
        SublevelGeometry::ProductOf(parts) => {
            let (alpha, coeff) = jet.as_monomial().ok_or_else(|| {
                Error::UnsupportedGeometry(
                    "jet kernels on product geometries need a monomial jet".to_string(),
                )
            })?;
            let mut values = Vec::with_capacity(parts.len());
            let mut offset = 0;
            for (i, part) in parts.iter().enumerate() {
                let d = part.dim();
                let sub_w = Point::new(w[offset..offset + d].to_vec())?;
                let sub_alpha = MultiIndex::new(alpha.entries()[offset..offset + d].to_vec());
                let c = if i == 0 { coeff } else { Complex64::new(1.0, 0.0) };
                let sub_jet = HomogeneousPoly::monomial(sub_alpha, c)?;
                values.push(kernel_h_on_sublevel(part, &sub_w, &sub_jet, degree_cap)?);
                offset += d;
            }
            Ok(combine_product(&values, degree_cap))
        }
    }
}

/// Product of factor results with a first-order tail combination.
fn combine_product(values: &[KernelResult], degree_cap: u32) -> KernelResult {
    let mut value = 1.0;
    let mut exact = true;
    let mut trivial = false;
    for v in values {
        value *= v.value;
        exact &= v.exact_flag;
        trivial |= v.trivial_space;
    }
    let mut tail = 0.0;
    for (i, v) in values.iter().enumerate() {
        let mut others = 1.0;
        for (j, u) in values.iter().enumerate() {
            if j != i {
                others *= u.value;
            }
        }
        tail += v.tail_estimate * others;
    }
    if trivial {
        value = 0.0;
        tail = 0.0;
    }
    KernelResult {
        value,
        degree_cap,
        tail_estimate: tail,
        exact_flag: exact,
        trivial_space: trivial,
    }
}

/// `|w^alpha|^2` from per-coordinate power tables.
fn monomial_sqr(pows: &[Vec<f64>], alpha: &MultiIndex) -> f64 {
    let mut acc = 1.0;
    for (j, &a) in alpha.entries().iter().enumerate() {
        acc *= pows[j][a as usize];
    }
    acc
}

/// `pows[j][m] = |w_j|^(2m)` for `m = 0..=cap`.
fn power_tables(w: &Point, cap: u32) -> Vec<Vec<f64>> {
    w.iter()
        .map(|z| {
            let b = z.norm_sqr();
            let mut col = Vec::with_capacity(cap as usize + 1);
            let mut acc = 1.0;
            for _ in 0..=cap {
                col.push(acc);
                acc *= b;
            }
            col
        })
        .collect()
}

fn herm_dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Modified Gram-Schmidt with a second re-orthogonalization pass; rows
/// that collapse below the rank tolerance (relative to their input size)
/// are dropped as linearly dependent.
fn orthonormalize(rows: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut q: Vec<Vec<Complex64>> = Vec::new();
    for mut v in rows {
        let scale = norm(&v).max(1.0);
        for _ in 0..2 {
            for u in &q {
                let c = herm_dot(&v, u);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= c * ui;
                }
            }
        }
        let len = norm(&v);
        if len > RANK_TOL * scale {
            for vi in v.iter_mut() {
                *vi /= len;
            }
            q.push(v);
        }
    }
    q
}

/// Removes the component of `v` in the span of the orthonormal rows `q`
/// (two passes, mirroring the orthonormalization).
fn project_out(v: &mut [Complex64], q: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for u in q {
            let c = herm_dot(v, u);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= c * ui;
            }
        }
    }
}
