//! Azukawa metric, Azukawa indicatrices and their volumes, and monomial
//! candidate lower bounds for the higher Caratheodory metrics.
//!
//! The Azukawa metric is the boundary behaviour of the Green function:
//! `A_D(w; X) = limsup_(lambda -> 0) exp(G_D(w, w + lambda X)) / |lambda|`.
//! On every domain/pole pair with a closed-form Green function the limit
//! itself is closed:
//!
//! * balanced domain, pole 0: `A = h(X)`, the Minkowski gauge;
//! * disc `|z - c| < r`: `A = |X| / (r (1 - |u|^2))` with `u = (w - c)/r`;
//! * unit ball: `A = sqrt(|<X, w>|^2 + (1 - |w|^2) |X|^2) / (1 - |w|^2)`;
//! * products: the max over factors (the Green function is the max).
//!
//! The indicatrix `I_D(w) = { X : A_D(w; X) < 1 }` is the `a -> -inf`
//! endpoint of the rescaled sublevel family `D_a`; its volume enters the
//! kernel-volume functional `F_D`.  A finite-difference ladder probes the
//! defining limit directly so the closed forms are cross-checkable without
//! assuming them.

use num_complex::Complex64;

use crate::domains::{inner, norm_sqr, split_coords, BoundingBox, Box2n, DomainSpec, MultiIndex, Point};
use crate::error::{Error, Result};
use crate::green::green;
use crate::mc::{self, VolumeEstimate};

/// Azukawa metric `A_D(w; X)` in closed form.
pub fn azukawa(domain: &DomainSpec, w: &Point, x: &Point) -> Result<f64> {
    domain.check_dim(w.dim())?;
    domain.check_dim(x.dim())?;
    if !domain.contains(w)? {
        return Err(Error::OutsideDomain(format!("{w} is not inside {domain}")));
    }
    azukawa_supported(domain, w)?;
    Ok(azukawa_unchecked(domain, w, x))
}

/// Same support set as the Green function: balanced domains at the origin,
/// discs, balls and polydiscs anywhere, products factorwise.
fn azukawa_supported(domain: &DomainSpec, w: &[Complex64]) -> Result<()> {
    if is_zero(w) && domain.is_balanced() {
        return Ok(());
    }
    match domain {
        DomainSpec::Disc { .. } | DomainSpec::Ball { .. } | DomainSpec::Polydisc { .. } => Ok(()),
        DomainSpec::Product { factors } => {
            for (f, part) in split_coords(factors, w) {
                azukawa_supported(f, part)?;
            }
            Ok(())
        }
        _ => Err(Error::UnsupportedGreenPair {
            domain: domain.to_string(),
            pole: Point::new(w.to_vec()).map(|p| p.to_string()).unwrap_or_default(),
        }),
    }
}

/// Closed-form value; callers have validated dimensions and support.
fn azukawa_unchecked(domain: &DomainSpec, w: &[Complex64], x: &[Complex64]) -> f64 {
    if is_zero(w) && domain.is_balanced() {
        return domain.gauge(x).expect("balanced domain evaluates its gauge");
    }
    match domain {
        DomainSpec::Disc { center, radius } => {
            let u2 = (w[0] - center).norm_sqr() / (radius * radius);
            x[0].norm() / (radius * (1.0 - u2))
        }
        DomainSpec::Ball { .. } => {
            let s = 1.0 - norm_sqr(w);
            (inner(x, w).norm_sqr() + s * norm_sqr(x)).sqrt() / s
        }
        DomainSpec::Polydisc { radii } => {
            let mut best: f64 = 0.0;
            for (j, r) in radii.iter().enumerate() {
                let u2 = w[j].norm_sqr() / (r * r);
                best = best.max(x[j].norm() / (r * (1.0 - u2)));
            }
            best
        }
        DomainSpec::Product { factors } => {
            let mut best: f64 = 0.0;
            let mut offset = 0;
            for f in factors {
                let d = f.dim();
                best = best
                    .max(azukawa_unchecked(f, &w[offset..offset + d], &x[offset..offset + d]));
                offset += d;
            }
            best
        }
        _ => unreachable!("support was validated"),
    }
}

/// Finite-difference probe of the limit defining the Azukawa metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderProbe {
    /// The step sizes, largest first.
    pub lambdas: [f64; 3],
    /// `|X| exp(G(w, w + lambda X/|X|)) / lambda` at each step.
    pub values: [f64; 3],
    /// Richardson extrapolation of the two smallest steps (the error is
    /// linear in `lambda` to leading order, and the step ratio is 10).
    pub extrapolated: f64,
}

impl LadderProbe {
    /// Spread of the raw ladder values, a crude stability indicator.
    pub fn spread(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in self.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        hi - lo
    }
}

/// Evaluates the ladder `lambda in {1e-2, 1e-3, 1e-4}` for the limit
/// `A_D(w; X)`.  The direction is normalized first and the result scaled
/// back, so step points stay near `w`; each step point must lie in `D`.
pub fn azukawa_ladder(domain: &DomainSpec, w: &Point, x: &Point) -> Result<LadderProbe> {
    domain.check_dim(w.dim())?;
    domain.check_dim(x.dim())?;
    let scale = crate::domains::norm(x);
    if scale == 0.0 {
        return Err(Error::InvalidInput("ladder needs a nonzero direction".into()));
    }
    let unit: Vec<Complex64> = x.iter().map(|c| c / scale).collect();
    let lambdas = [1e-2, 1e-3, 1e-4];
    let mut values = [0.0f64; 3];
    for (slot, lambda) in values.iter_mut().zip(lambdas) {
        let step: Vec<Complex64> =
            w.iter().zip(&unit).map(|(wj, uj)| wj + lambda * uj).collect();
        if !domain.contains(&step)? {
            return Err(Error::OutsideDomain(format!(
                "ladder step {} leaves {domain}",
                Point::new(step.clone())?
            )));
        }
        *slot = scale * green(domain, w, &step)?.exp() / lambda;
    }
    let extrapolated = (10.0 * values[2] - values[1]) / 9.0;
    Ok(LadderProbe { lambdas, values, extrapolated })
}

/// Membership `X in I_D(w)`, i.e. `A_D(w; X) < 1`.
pub fn indicatrix_contains(domain: &DomainSpec, w: &Point, x: &Point) -> Result<bool> {
    Ok(azukawa(domain, w, x)? < 1.0)
}

/// Axis-aligned bounding box of the indicatrix `I_D(w)`.
pub fn indicatrix_box(domain: &DomainSpec, w: &Point) -> Result<BoundingBox> {
    domain.check_dim(w.dim())?;
    if !domain.contains(w)? {
        return Err(Error::OutsideDomain(format!("{w} is not inside {domain}")));
    }
    azukawa_supported(domain, w)?;
    Ok(indicatrix_box_unchecked(domain, w))
}

fn indicatrix_box_unchecked(domain: &DomainSpec, w: &[Complex64]) -> BoundingBox {
    if is_zero(w) && domain.is_balanced() {
        // A(0; .) is the gauge, so the indicatrix is the domain itself.
        return domain.bounding_box();
    }
    match domain {
        DomainSpec::Disc { center, radius } => {
            let u2 = (w[0] - center).norm_sqr() / (radius * radius);
            BoundingBox::Bounded(Box2n::centered(vec![radius * (1.0 - u2)]))
        }
        DomainSpec::Ball { .. } => {
            // A >= |X| / sqrt(1 - |w|^2), so the indicatrix sits inside
            // the centered ball of that radius.
            BoundingBox::Bounded(Box2n::centered(vec![
                (1.0 - norm_sqr(w)).sqrt();
                w.len()
            ]))
        }
        DomainSpec::Polydisc { radii } => {
            let widths = radii
                .iter()
                .enumerate()
                .map(|(j, r)| {
                    let u2 = w[j].norm_sqr() / (r * r);
                    r * (1.0 - u2)
                })
                .collect();
            BoundingBox::Bounded(Box2n::centered(widths))
        }
        DomainSpec::Product { factors } => {
            let mut acc: Option<Box2n> = None;
            let mut offset = 0;
            for f in factors {
                let d = f.dim();
                match indicatrix_box_unchecked(f, &w[offset..offset + d]) {
                    BoundingBox::Bounded(b) => {
                        acc = Some(match acc {
                            None => b,
                            Some(prev) => prev.concat(&b),
                        })
                    }
                    BoundingBox::Unbounded => return BoundingBox::Unbounded,
                }
                offset += d;
            }
            BoundingBox::Bounded(acc.expect("products have at least one factor"))
        }
        _ => unreachable!("support was validated"),
    }
}

/// The indicatrix `I_D(w)` as a catalog domain, where it is one: the
/// domain itself at the origin of a balanced member, a centered disc for
/// discs, a centered polydisc for polydiscs, products factorwise.  The
/// off-center ball indicatrix is a complex ellipsoid in a rotated frame —
/// not a catalog member — and is refused.
pub fn indicatrix_domain(domain: &DomainSpec, w: &Point) -> Result<DomainSpec> {
    domain.check_dim(w.dim())?;
    if !domain.contains(w)? {
        return Err(Error::OutsideDomain(format!("{w} is not inside {domain}")));
    }
    azukawa_supported(domain, w)?;
    indicatrix_domain_unchecked(domain, w)
}

fn indicatrix_domain_unchecked(domain: &DomainSpec, w: &[Complex64]) -> Result<DomainSpec> {
    if is_zero(w) && domain.is_balanced() {
        return Ok(domain.clone());
    }
    match domain {
        DomainSpec::Disc { center, radius } => {
            let u2 = (w[0] - center).norm_sqr() / (radius * radius);
            DomainSpec::disc(Complex64::new(0.0, 0.0), radius * (1.0 - u2))
        }
        DomainSpec::Polydisc { radii } => {
            let rho = radii
                .iter()
                .enumerate()
                .map(|(j, r)| {
                    let u2 = w[j].norm_sqr() / (r * r);
                    r * (1.0 - u2)
                })
                .collect();
            DomainSpec::polydisc(rho)
        }
        DomainSpec::Ball { .. } => Err(Error::UnsupportedGeometry(format!(
            "the off-center ball indicatrix is not a catalog domain (at {})",
            Point::new(w.to_vec())?
        ))),
        DomainSpec::Product { factors } => {
            let mut parts = Vec::with_capacity(factors.len());
            let mut offset = 0;
            for f in factors {
                let d = f.dim();
                parts.push(indicatrix_domain_unchecked(f, &w[offset..offset + d])?);
                offset += d;
            }
            DomainSpec::product(parts)
        }
        _ => Err(Error::UnsupportedGeometry(format!(
            "no indicatrix domain formula for {domain} off center"
        ))),
    }
}

/// Result of an indicatrix volume request.
#[derive(Debug, Clone, PartialEq)]
pub enum VolumeOutcome {
    /// Monte Carlo estimate with its standard error.
    Estimate(VolumeEstimate),
    /// The indicatrix is unbounded; `lambda^(2n)(I) = +inf`.
    Unbounded,
}

/// Monte Carlo volume `lambda^(2n)(I_D(w))` on the default driver.
pub fn indicatrix_volume(
    domain: &DomainSpec,
    w: &Point,
    n_samples: u64,
    seed: u64,
) -> Result<VolumeOutcome> {
    indicatrix_volume_with(domain, w, n_samples, seed, false)
}

/// Monte Carlo volume with an explicit driver choice; `sequential = true`
/// forces the single-threaded driver.  Both drivers are bit-identical.
pub fn indicatrix_volume_with(
    domain: &DomainSpec,
    w: &Point,
    n_samples: u64,
    seed: u64,
    sequential: bool,
) -> Result<VolumeOutcome> {
    let sample_box = match indicatrix_box(domain, w)? {
        BoundingBox::Bounded(b) => b,
        BoundingBox::Unbounded => return Ok(VolumeOutcome::Unbounded),
    };
    let hit = |x: &[Complex64]| azukawa_unchecked(domain, w, x) < 1.0;
    let estimate = if sequential {
        mc::volume_seq(&sample_box, hit, n_samples, seed)?
    } else {
        mc::volume(&sample_box, hit, n_samples, seed)?
    };
    Ok(VolumeOutcome::Estimate(estimate))
}

/// Closed-form indicatrix volume where one is known; `Ok(None)` otherwise.
///
/// Discs, balls, polydiscs and their products have one at every point;
/// any Reinhardt catalog member has one at the origin (the indicatrix is
/// the domain itself, with volume `m_0`).
pub fn indicatrix_volume_closed(domain: &DomainSpec, w: &Point) -> Result<Option<f64>> {
    use std::f64::consts::PI;
    domain.check_dim(w.dim())?;
    if !domain.contains(w)? {
        return Err(Error::OutsideDomain(format!("{w} is not inside {domain}")));
    }
    match domain {
        DomainSpec::Disc { center, radius } => {
            let u2 = (w[0] - center).norm_sqr() / (radius * radius);
            let rho = radius * (1.0 - u2);
            Ok(Some(PI * rho * rho))
        }
        DomainSpec::Ball { dim } => {
            let n = *dim;
            let mut fact = 1.0;
            for j in 2..=n {
                fact *= j as f64;
            }
            Ok(Some(PI.powi(n as i32) / fact * (1.0 - norm_sqr(w)).powi(n as i32 + 1)))
        }
        DomainSpec::Polydisc { radii } => {
            let mut acc = 1.0;
            for (j, r) in radii.iter().enumerate() {
                let u2 = w[j].norm_sqr() / (r * r);
                let rho = r * (1.0 - u2);
                acc *= PI * rho * rho;
            }
            Ok(Some(acc))
        }
        DomainSpec::Ellipsoid { .. } if is_zero(w) => {
            match crate::bergman::moment(domain, &MultiIndex::zero(w.dim()))? {
                crate::bergman::Moment::Finite(v) => Ok(Some(v)),
                crate::bergman::Moment::Divergent => Ok(None),
            }
        }
        DomainSpec::Product { factors } => {
            let mut acc = 1.0;
            let mut offset = 0;
            for f in factors {
                let d = f.dim();
                let sub = Point::new(w[offset..offset + d].to_vec())?;
                match indicatrix_volume_closed(f, &sub)? {
                    Some(v) => acc *= v,
                    None => return Ok(None),
                }
                offset += d;
            }
            Ok(Some(acc))
        }
        _ => Ok(None),
    }
}

/// Lower bound for the order-`k` Caratheodory-type metric at the origin of
/// a balanced domain, from the monomial candidates `f = z^alpha / sup_D |z^alpha|`
/// with `|alpha| = k`: each competes with `|X^alpha / sup|^(1/k)`.
/// Candidates with infinite sup (unbounded domains) contribute nothing.
pub fn cr_lower(domain: &DomainSpec, x: &Point, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInput("the metric order k must be at least 1".into()));
    }
    domain.check_dim(x.dim())?;
    if !domain.is_balanced() {
        return Err(Error::NotBalanced(domain.to_string()));
    }
    let mut best: f64 = 0.0;
    for alpha in MultiIndex::of_degree(domain.dim(), k) {
        let sup = sup_monomial(domain, &alpha)?;
        if !sup.is_finite() {
            continue;
        }
        let value = (alpha.eval(x).norm() / sup).powf(1.0 / f64::from(k));
        best = best.max(value);
    }
    Ok(best)
}

/// `sup_D |z^alpha|`; `+inf` when the monomial is unbounded on `D`.
pub fn sup_monomial(domain: &DomainSpec, alpha: &MultiIndex) -> Result<f64> {
    if alpha.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: alpha.dim() });
    }
    match domain {
        DomainSpec::Disc { center, radius } => {
            Ok((center.norm() + radius).powi(alpha.entry(0) as i32))
        }
        DomainSpec::Ball { .. } => {
            // Maximize prod t_j^(alpha_j) over the simplex sum t_j = 1
            // (t_j = |z_j|^2): the optimum is t_j = alpha_j / k.
            let k = f64::from(alpha.order());
            if k == 0.0 {
                return Ok(1.0);
            }
            let mut ln = 0.0;
            for &a in alpha.entries() {
                if a > 0 {
                    let af = f64::from(a);
                    ln += 0.5 * af * (af / k).ln();
                }
            }
            Ok(ln.exp())
        }
        DomainSpec::Polydisc { radii } => {
            let mut acc = 1.0;
            for (j, r) in radii.iter().enumerate() {
                acc *= r.powi(alpha.entry(j) as i32);
            }
            Ok(acc)
        }
        DomainSpec::Ellipsoid { exponents } => {
            // Lagrange optimum of prod t_j^(alpha_j) over sum t_j^(p_j) = 1:
            // t_j^(p_j) = (alpha_j / p_j) / sum_l (alpha_l / p_l).
            let s: f64 = alpha
                .entries()
                .iter()
                .zip(exponents)
                .map(|(&a, p)| f64::from(a) / p)
                .sum();
            if s == 0.0 {
                return Ok(1.0);
            }
            let mut ln = 0.0;
            for (&a, p) in alpha.entries().iter().zip(exponents) {
                if a > 0 {
                    let u = (f64::from(a) / p) / s;
                    ln += f64::from(a) / (2.0 * p) * u.ln();
                }
            }
            Ok(ln.exp())
        }
        DomainSpec::BalancedGauge(g) if g.name == "model-z1z2" => {
            // |z1^a z2^b| on { |z1 z2| < 1 } is bounded only on the
            // diagonal a = b, where the sup is 1.
            if alpha.entry(0) == alpha.entry(1) {
                Ok(1.0)
            } else {
                Ok(f64::INFINITY)
            }
        }
        DomainSpec::BalancedGauge(_) => Err(Error::UnsupportedGeometry(format!(
            "no monomial sup formula for {domain}"
        ))),
        DomainSpec::Product { factors } => {
            let mut acc = 1.0;
            let mut offset = 0;
            for f in factors {
                let d = f.dim();
                let sub = MultiIndex::new(alpha.entries()[offset..offset + d].to_vec());
                acc *= sup_monomial(f, &sub)?;
                offset += d;
            }
            Ok(acc)
        }
    }
}

fn is_zero(z: &[Complex64]) -> bool {
    z.iter().all(|c| *c == Complex64::new(0.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pt1(re: f64) -> Point {
        Point::new(vec![Complex64::new(re, 0.0)]).unwrap()
    }

    fn pt2(a: f64, b: f64) -> Point {
        Point::new(vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)]).unwrap()
    }

    #[test]
    fn azukawa_on_disc() {
        let disc = DomainSpec::unit_disc();
        // At the center the metric is the gauge.
        assert_eq!(azukawa(&disc, &Point::origin(1), &pt1(0.5)).unwrap(), 0.5);
        // Off center: |X| / (1 - |w|^2).
        let a = azukawa(&disc, &pt1(0.5), &pt1(1.0)).unwrap();
        assert!((a - 1.0 / 0.75).abs() < 1e-14);
    }

    #[test]
    fn ball_reduces_to_disc_in_one_variable() {
        let ball = DomainSpec::ball(1).unwrap();
        let disc = DomainSpec::unit_disc();
        for w in [0.0, 0.3, -0.6] {
            for x in [1.0, 0.25] {
                let a = azukawa(&ball, &pt1(w), &pt1(x)).unwrap();
                let b = azukawa(&disc, &pt1(w), &pt1(x)).unwrap();
                assert!((a - b).abs() < 1e-14, "w = {w}, x = {x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn product_metric_is_the_max() {
        let bidisc =
            DomainSpec::product(vec![DomainSpec::unit_disc(), DomainSpec::unit_disc()]).unwrap();
        let w = pt2(0.5, 0.0);
        let x = pt2(1.0, 1.0);
        let a = azukawa(&bidisc, &w, &x).unwrap();
        // Factor values: 1/0.75 and 1.
        assert!((a - 1.0 / 0.75).abs() < 1e-14);
    }

    #[test]
    fn ladder_converges_to_closed_form() {
        let disc = DomainSpec::unit_disc();
        let probe = azukawa_ladder(&disc, &pt1(0.5), &pt1(2.0)).unwrap();
        let closed = azukawa(&disc, &pt1(0.5), &pt1(2.0)).unwrap();
        let rel = (probe.extrapolated - closed).abs() / closed;
        assert!(rel < 1e-4, "extrapolated {}, closed {closed}", probe.extrapolated);
        assert!(probe.spread() > 0.0);
    }

    #[test]
    fn indicatrix_volume_closed_forms() {
        let ball = DomainSpec::ball(2).unwrap();
        let w = pt2(0.5, 0.0);
        let v = indicatrix_volume_closed(&ball, &w).unwrap().unwrap();
        assert!((v - PI * PI / 2.0 * 0.75f64.powi(3)).abs() < 1e-12);
        // At the origin the indicatrix is the ball itself.
        let v0 = indicatrix_volume_closed(&ball, &Point::origin(2)).unwrap().unwrap();
        assert!((v0 - PI * PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn indicatrix_volume_mc_brackets_closed_form() {
        let disc = DomainSpec::unit_disc();
        let w = pt1(0.5);
        let closed = indicatrix_volume_closed(&disc, &w).unwrap().unwrap();
        match indicatrix_volume(&disc, &w, 200_000, 7).unwrap() {
            VolumeOutcome::Estimate(e) => {
                assert!(
                    (e.mean - closed).abs() < 3.0 * e.std_error,
                    "mean {} vs closed {closed} (se {})",
                    e.mean,
                    e.std_error
                );
            }
            VolumeOutcome::Unbounded => panic!("disc indicatrix is bounded"),
        }
    }

    #[test]
    fn model_indicatrix_is_unbounded() {
        let model = DomainSpec::model_z1z2();
        match indicatrix_volume(&model, &Point::origin(2), 1000, 0).unwrap() {
            VolumeOutcome::Unbounded => {}
            VolumeOutcome::Estimate(_) => panic!("model indicatrix must be unbounded"),
        }
    }

    #[test]
    fn monomial_sups() {
        let ball = DomainSpec::ball(2).unwrap();
        // sup |z1 z2| on the ball: t = (1/2, 1/2), value 1/2.
        assert!(
            (sup_monomial(&ball, &MultiIndex::new(vec![1, 1])).unwrap() - 0.5).abs() < 1e-14
        );
        let model = DomainSpec::model_z1z2();
        assert_eq!(sup_monomial(&model, &MultiIndex::new(vec![1, 1])).unwrap(), 1.0);
        assert!(sup_monomial(&model, &MultiIndex::new(vec![2, 1]))
            .unwrap()
            .is_infinite());
    }

    #[test]
    fn cr_lower_bounds_azukawa() {
        let ball = DomainSpec::ball(2).unwrap();
        let x = pt2(0.6, 0.8);
        for k in [1u32, 2, 3] {
            let lower = cr_lower(&ball, &x, k).unwrap();
            let a = azukawa(&ball, &Point::origin(2), &x).unwrap();
            assert!(
                lower <= a + 1e-12,
                "k = {k}: candidate bound {lower} exceeds Azukawa {a}"
            );
        }
        // On the model domain the degree-2 candidate z1 z2 is sharp.
        let model = DomainSpec::model_z1z2();
        let x = pt2(2.0, 0.5);
        let lower = cr_lower(&model, &x, 2).unwrap();
        let a = azukawa(&model, &Point::origin(2), &x).unwrap();
        assert!((lower - a).abs() < 1e-12, "model: {lower} vs {a}");
    }
}
