//! Closed-form pluricomplex Green functions and their sublevel families.
//!
//! On the catalog the Green function is exact geometry, never a solver:
//! for a balanced domain with pole at the origin, `G(z) = log h(z)` with
//! `h` the Minkowski gauge; discs and balls reach arbitrary poles through
//! their automorphism groups; a product takes the maximum over factors.
//!
//! The sublevel set `{G < a}` and the rescaled family
//! `D_a = image of {G < a} under z -> pole + e^(-a) (z - pole)` are
//! returned as exact [`SublevelGeometry`] values.  For a balanced domain
//! with pole 0, `{G < a} = e^a D` and therefore `D_a = D` for every `a`;
//! that case is returned as `ScaledCopy(1, D)` literally so no floating
//! round-trip `e^(-a) e^a` enters downstream kernels.
//!
//! Scaling about the pole (rather than the origin) is a declared
//! convention: it is translation-equivariant, keeps the pole fixed, and
//! reduces to plain dilation when the pole is 0.

use std::fmt;

use num_complex::Complex64;

use crate::domains::{split_coords, DomainSpec};
use crate::error::{Error, Result};

/// Exact description of `{G < a}` or of its `D_a` rescaling.
#[derive(Debug, Clone, PartialEq)]
pub enum SublevelGeometry {
    /// `factor * base` (dilation about the origin of a balanced base).
    ScaledCopy { factor: f64, base: DomainSpec },
    /// A Euclidean disc in `C` (Moebius image of a centered disc).
    EuclideanDisc { center: Complex64, radius: f64 },
    /// Product of factor geometries (coordinates concatenated).
    ProductOf(Vec<SublevelGeometry>),
}

impl SublevelGeometry {
    /// Number of complex variables.
    pub fn dim(&self) -> usize {
        match self {
            SublevelGeometry::ScaledCopy { base, .. } => base.dim(),
            SublevelGeometry::EuclideanDisc { .. } => 1,
            SublevelGeometry::ProductOf(parts) => parts.iter().map(|p| p.dim()).sum(),
        }
    }

    /// Strict membership.
    pub fn contains(&self, z: &[Complex64]) -> Result<bool> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: z.len() });
        }
        match self {
            SublevelGeometry::ScaledCopy { factor, base } => {
                let scaled: Vec<Complex64> = z.iter().map(|c| c / factor).collect();
                base.contains(&scaled)
            }
            SublevelGeometry::EuclideanDisc { center, radius } => {
                Ok((z[0] - center).norm() < *radius)
            }
            SublevelGeometry::ProductOf(parts) => {
                let mut offset = 0;
                for p in parts {
                    let d = p.dim();
                    if !p.contains(&z[offset..offset + d])? {
                        return Ok(false);
                    }
                    offset += d;
                }
                Ok(true)
            }
        }
    }

    /// The geometry as a stand-alone domain (used to iterate the sublevel
    /// construction and to count monomial dimensions on `D_a`).
    pub fn as_domain(&self) -> Result<DomainSpec> {
        match self {
            SublevelGeometry::ScaledCopy { factor, base } => base.scale(*factor),
            SublevelGeometry::EuclideanDisc { center, radius } => {
                DomainSpec::disc(*center, *radius)
            }
            SublevelGeometry::ProductOf(parts) => {
                DomainSpec::product(parts.iter().map(|p| p.as_domain()).collect::<Result<_>>()?)
            }
        }
    }

    /// Dilation about the origin by `t > 0`.
    fn dilate(&self, t: f64) -> SublevelGeometry {
        match self {
            SublevelGeometry::ScaledCopy { factor, base } => {
                SublevelGeometry::ScaledCopy { factor: factor * t, base: base.clone() }
            }
            SublevelGeometry::EuclideanDisc { center, radius } => {
                SublevelGeometry::EuclideanDisc { center: center * t, radius: radius * t }
            }
            SublevelGeometry::ProductOf(parts) => {
                SublevelGeometry::ProductOf(parts.iter().map(|p| p.dilate(t)).collect())
            }
        }
    }

    /// Image under `z -> pole + t (z - pole)`, the pole-centered scaling
    /// that defines the `D_a` family.
    fn scale_about(&self, pole: &[Complex64], t: f64) -> SublevelGeometry {
        match self {
            SublevelGeometry::EuclideanDisc { center, radius } => SublevelGeometry::EuclideanDisc {
                center: pole[0] + t * (center - pole[0]),
                radius: t * radius,
            },
            SublevelGeometry::ScaledCopy { .. } => {
                // Balanced factors carry pole 0, where the pole-centered
                // scaling is the plain dilation.
                debug_assert!(pole.iter().all(|p| *p == Complex64::new(0.0, 0.0)));
                self.dilate(t)
            }
            SublevelGeometry::ProductOf(parts) => {
                let mut out = Vec::with_capacity(parts.len());
                let mut offset = 0;
                for p in parts {
                    let d = p.dim();
                    out.push(p.scale_about(&pole[offset..offset + d], t));
                    offset += d;
                }
                SublevelGeometry::ProductOf(out)
            }
        }
    }
}

impl fmt::Display for SublevelGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SublevelGeometry::ScaledCopy { factor, base } => {
                write!(f, "scaled-copy(factor={factor},base={base})")
            }
            SublevelGeometry::EuclideanDisc { center, radius } => {
                write!(
                    f,
                    "euclidean-disc(c={},r={radius})",
                    crate::domains::format_complex(*center)
                )
            }
            SublevelGeometry::ProductOf(parts) => {
                write!(f, "product-of(")?;
                for (j, p) in parts.iter().enumerate() {
                    if j > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Green function of the unit disc with pole `p`: `log |(z - p)/(1 - conj(p) z)|`.
fn unit_disc_green(p: Complex64, z: Complex64) -> f64 {
    ((z - p) / (Complex64::new(1.0, 0.0) - p.conj() * z)).norm().ln()
}

/// Green function of the unit ball with pole `w`:
/// `|phi_w(z)|^2 = 1 - (1 - |w|^2)(1 - |z|^2) / |1 - <z, w>|^2`
/// for the automorphism `phi_w` sending `w` to 0.
fn unit_ball_green(w: &[Complex64], z: &[Complex64]) -> f64 {
    let nw = 1.0 - crate::domains::norm_sqr(w);
    let nz = 1.0 - crate::domains::norm_sqr(z);
    let ip = Complex64::new(1.0, 0.0) - crate::domains::inner(z, w);
    let phi_sq = 1.0 - nw * nz / ip.norm_sqr();
    0.5 * phi_sq.max(0.0).ln()
}

/// Pluricomplex Green function `G_D(z, pole)`.
///
/// Supported pairs: a balanced domain with pole 0, a disc or ball or
/// polydisc with any interior pole, and products of supported factors.
/// Returns exactly `-inf` when `z == pole`.  The formulas extend
/// continuously outside `D` (where they are `>= 0`), which keeps the
/// membership equivalence `G(z) < a  <=>  z in {G < a}` valid for every
/// probe point.
pub fn green(domain: &DomainSpec, pole: &[Complex64], z: &[Complex64]) -> Result<f64> {
    check_pole(domain, pole)?;
    if z.len() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: z.len() });
    }
    if z == pole {
        return Ok(f64::NEG_INFINITY);
    }
    green_unchecked(domain, pole, z)
}

fn green_unchecked(domain: &DomainSpec, pole: &[Complex64], z: &[Complex64]) -> Result<f64> {
    if is_zero(pole) && domain.is_balanced() {
        return Ok(domain.gauge(z)?.ln());
    }
    match domain {
        DomainSpec::Disc { center, radius } => {
            let p = (pole[0] - center) / radius;
            let v = (z[0] - center) / radius;
            Ok(unit_disc_green(p, v))
        }
        DomainSpec::Ball { .. } => Ok(unit_ball_green(pole, z)),
        DomainSpec::Polydisc { radii } => {
            let mut best = f64::NEG_INFINITY;
            for (j, r) in radii.iter().enumerate() {
                best = best.max(unit_disc_green(pole[j] / r, z[j] / r));
            }
            Ok(best)
        }
        DomainSpec::Product { factors } => {
            let mut best = f64::NEG_INFINITY;
            let mut offset = 0;
            for f in factors {
                let d = f.dim();
                best = best.max(green_unchecked(
                    f,
                    &pole[offset..offset + d],
                    &z[offset..offset + d],
                )?);
                offset += d;
            }
            Ok(best)
        }
        _ => Err(unsupported(domain, pole)),
    }
}

/// The sublevel set `{z : G_D(z, pole) < a}` for `a <= 0`.
pub fn sublevel_set(domain: &DomainSpec, pole: &[Complex64], a: f64) -> Result<SublevelGeometry> {
    check_pole(domain, pole)?;
    check_level(a)?;
    if a == 0.0 {
        return Ok(SublevelGeometry::ScaledCopy { factor: 1.0, base: domain.clone() });
    }
    sublevel_unchecked(domain, pole, a)
}

fn sublevel_unchecked(domain: &DomainSpec, pole: &[Complex64], a: f64) -> Result<SublevelGeometry> {
    if is_zero(pole) && domain.is_balanced() {
        // {log h < a} = e^a D.
        return Ok(SublevelGeometry::ScaledCopy { factor: a.exp(), base: domain.clone() });
    }
    match domain {
        DomainSpec::Disc { center, radius } => {
            let (c, r) = unit_disc_sublevel((pole[0] - center) / radius, a.exp());
            Ok(SublevelGeometry::EuclideanDisc {
                center: center + radius * c,
                radius: radius * r,
            })
        }
        DomainSpec::Polydisc { radii } => {
            let parts = radii
                .iter()
                .enumerate()
                .map(|(j, rad)| {
                    let (c, r) = unit_disc_sublevel(pole[j] / rad, a.exp());
                    SublevelGeometry::EuclideanDisc { center: rad * c, radius: rad * r }
                })
                .collect();
            Ok(SublevelGeometry::ProductOf(parts))
        }
        DomainSpec::Product { factors } => {
            let mut parts = Vec::with_capacity(factors.len());
            let mut offset = 0;
            for f in factors {
                let d = f.dim();
                parts.push(sublevel_unchecked(f, &pole[offset..offset + d], a)?);
                offset += d;
            }
            Ok(SublevelGeometry::ProductOf(parts))
        }
        _ => Err(unsupported(domain, pole)),
    }
}

/// The Moebius image `{|phi_p| < rho}` inside the unit disc: a Euclidean
/// disc with center `p (1 - rho^2) / (1 - rho^2 |p|^2)` and radius
/// `rho (1 - |p|^2) / (1 - rho^2 |p|^2)`.
fn unit_disc_sublevel(p: Complex64, rho: f64) -> (Complex64, f64) {
    let den = 1.0 - rho * rho * p.norm_sqr();
    (p * ((1.0 - rho * rho) / den), rho * (1.0 - p.norm_sqr()) / den)
}

/// The rescaled member `D_a = image of {G < a} under z -> pole + e^(-a)(z - pole)`.
///
/// For a balanced domain with pole 0 this is `D` itself for every `a`,
/// returned as `ScaledCopy(1, D)` exactly.
pub fn scaled_sublevel(domain: &DomainSpec, pole: &[Complex64], a: f64) -> Result<SublevelGeometry> {
    check_pole(domain, pole)?;
    check_level(a)?;
    if a == 0.0 || (is_zero(pole) && domain.is_balanced()) {
        return Ok(SublevelGeometry::ScaledCopy { factor: 1.0, base: domain.clone() });
    }
    let sub = sublevel_unchecked(domain, pole, a)?;
    Ok(sub.scale_about(pole, (-a).exp()))
}

fn check_pole(domain: &DomainSpec, pole: &[Complex64]) -> Result<()> {
    if pole.len() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: pole.len() });
    }
    if !domain.contains(pole)? {
        return Err(Error::OutsideDomain(format!(
            "pole {} of domain {domain}",
            crate::domains::Point::new(pole.to_vec())?
        )));
    }
    // Fail early on pairs with no closed form, before any formula runs.
    if !(is_zero(pole) && domain.is_balanced()) {
        supported_nonzero_pole(domain, pole)?;
    }
    Ok(())
}

fn supported_nonzero_pole(domain: &DomainSpec, pole: &[Complex64]) -> Result<()> {
    match domain {
        DomainSpec::Disc { .. } | DomainSpec::Ball { .. } | DomainSpec::Polydisc { .. } => Ok(()),
        DomainSpec::Product { factors } => {
            for (f, p) in split_coords(factors, pole) {
                if !(is_zero(p) && f.is_balanced()) {
                    supported_nonzero_pole(f, p)?;
                }
            }
            Ok(())
        }
        _ => Err(unsupported(domain, pole)),
    }
}

fn check_level(a: f64) -> Result<()> {
    if a.is_nan() || a > 0.0 {
        return Err(Error::InvalidInput(format!("sublevel parameter must satisfy a <= 0, got {a}")));
    }
    if a == f64::NEG_INFINITY {
        return Err(Error::InvalidInput(
            "a = -inf is the indicatrix endpoint; use the indicatrix operations".into(),
        ));
    }
    Ok(())
}

fn is_zero(z: &[Complex64]) -> bool {
    z.iter().all(|c| *c == Complex64::new(0.0, 0.0))
}

fn unsupported(domain: &DomainSpec, pole: &[Complex64]) -> Error {
    let pole_str = crate::domains::Point::new(pole.to_vec())
        .map(|p| p.to_string())
        .unwrap_or_else(|_| "<invalid>".into());
    Error::UnsupportedGreenPair { domain: domain.to_string(), pole: pole_str }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disc_green_matches_moebius_distance() {
        let disc = DomainSpec::unit_disc();
        let g = green(&disc, &[c(0.2, 0.0)], &[c(0.5, 0.0)]).unwrap();
        assert!((g - (0.3f64 / 0.9).ln()).abs() < 1e-12, "g = {g}");
    }

    #[test]
    fn balanced_green_is_log_gauge() {
        let ell = DomainSpec::ellipsoid(vec![2.0, 3.0]).unwrap();
        // Single-coordinate point with gauge exactly 0.25.
        let z = [c(0.25, 0.0), c(0.0, 0.0)];
        let g = green(&ell, &[c(0.0, 0.0), c(0.0, 0.0)], &z).unwrap();
        assert!((g - 0.25f64.ln()).abs() < 1e-9, "g = {g}");
    }

    #[test]
    fn pole_is_logarithmic_singularity() {
        let ball = DomainSpec::ball(2).unwrap();
        let w = [c(0.3, 0.1), c(-0.2, 0.0)];
        assert_eq!(green(&ball, &w, &w).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn ball_green_agrees_with_disc_in_one_variable() {
        let ball = DomainSpec::ball(1).unwrap();
        let disc = DomainSpec::unit_disc();
        let p = [c(0.4, -0.1)];
        let z = [c(-0.3, 0.25)];
        let a = green(&ball, &p, &z).unwrap();
        let b = green(&disc, &p, &z).unwrap();
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn unsupported_pairs_fail_loudly() {
        let ell = DomainSpec::ellipsoid(vec![2.0, 3.0]).unwrap();
        let off_center = [c(0.3, 0.0), c(0.0, 0.0)];
        assert!(matches!(
            green(&ell, &off_center, &[c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::UnsupportedGreenPair { .. })
        ));
        let outside = [c(2.0, 0.0)];
        assert!(matches!(
            green(&DomainSpec::unit_disc(), &outside, &[c(0.0, 0.0)]),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn disc_sublevel_is_the_spec_disc() {
        let got = sublevel_set(&DomainSpec::unit_disc(), &[c(0.5, 0.0)], 0.5f64.ln()).unwrap();
        match got {
            SublevelGeometry::EuclideanDisc { center, radius } => {
                assert!((center - c(0.4, 0.0)).norm() < 1e-12);
                assert!((radius - 0.4).abs() < 1e-12);
            }
            other => panic!("expected a Euclidean disc, got {other}"),
        }
    }

    #[test]
    fn scaled_sublevel_scales_about_the_pole() {
        let got = scaled_sublevel(&DomainSpec::unit_disc(), &[c(0.5, 0.0)], 0.5f64.ln()).unwrap();
        match got {
            SublevelGeometry::EuclideanDisc { center, radius } => {
                // center 0.5 + 2 (0.4 - 0.5) = 0.3, radius 2 * 0.4 = 0.8.
                assert!((center - c(0.3, 0.0)).norm() < 1e-12);
                assert!((radius - 0.8).abs() < 1e-12);
            }
            other => panic!("expected a Euclidean disc, got {other}"),
        }
    }

    #[test]
    fn balanced_family_is_constant() {
        let ell = DomainSpec::ellipsoid(vec![2.0, 3.0]).unwrap();
        let origin = [c(0.0, 0.0), c(0.0, 0.0)];
        for a in [-3.0, -1.0, -0.25, 0.0] {
            let geom = scaled_sublevel(&ell, &origin, a).unwrap();
            assert_eq!(geom, SublevelGeometry::ScaledCopy { factor: 1.0, base: ell.clone() });
        }
        let sub = sublevel_set(&ell, &origin, -1.0).unwrap();
        match sub {
            SublevelGeometry::ScaledCopy { factor, base } => {
                assert_eq!(base, ell);
                assert!((factor - (-1.0f64).exp()).abs() < 1e-15);
            }
            other => panic!("expected a scaled copy, got {other}"),
        }
    }

    #[test]
    fn level_zero_returns_the_domain() {
        let pd = DomainSpec::polydisc(vec![1.0, 0.5]).unwrap();
        let pole = [c(0.2, 0.0), c(0.1, 0.0)];
        let geom = sublevel_set(&pd, &pole, 0.0).unwrap();
        assert_eq!(geom, SublevelGeometry::ScaledCopy { factor: 1.0, base: pd });
    }

    #[test]
    fn membership_matches_green_values() {
        let disc = DomainSpec::unit_disc();
        let pole = [c(0.3, 0.2)];
        let a = -0.8;
        let geom = sublevel_set(&disc, &pole, a).unwrap();
        for z in [c(0.3, 0.2), c(0.35, 0.1), c(0.9, 0.0), c(-0.2, -0.6)] {
            let g = green(&disc, &pole, &[z]).unwrap();
            assert_eq!(g < a, geom.contains(&[z]).unwrap(), "z = {z}");
        }
    }

    #[test]
    fn rejects_positive_and_infinite_levels() {
        let disc = DomainSpec::unit_disc();
        let pole = [c(0.0, 0.0)];
        assert!(sublevel_set(&disc, &pole, 0.5).is_err());
        assert!(sublevel_set(&disc, &pole, f64::NEG_INFINITY).is_err());
    }
}
