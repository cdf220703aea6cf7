//! Model pseudoconvex domains in `C^n` and their basic set geometry.
//!
//! The catalog covers the domains for which every later quantity (Green
//! function, Bergman kernel, Azukawa metric) has either a closed form or a
//! convergent monomial series: discs, Euclidean balls, polydiscs, complex
//! ellipsoids `{ sum |z_j|^(2 p_j) < 1 }`, balanced domains given by an
//! explicit gauge, and finite products of all of these.
//!
//! A balanced domain is determined by its Minkowski gauge
//! `h(z) = inf { t > 0 : z/t in D }`, absolutely homogeneous of degree one;
//! membership is exactly `h(z) < 1`.  The gauge is what the pluricomplex
//! Green function with pole at the origin sees: `G(z) = log h(z)`.

mod multi_index;
mod point;
mod poly;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use multi_index::MultiIndex;
pub use point::{inner, norm, norm_sqr, Point};
pub use poly::HomogeneousPoly;

/// A coordinate box in `R^(2n)`: per complex coordinate a centered square
/// of the given half-width.  Used both as a sampling envelope for Monte
/// Carlo volume estimates and as the reported bounding box of a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Box2n {
    /// Center of the square in coordinate `j`.
    pub centers: Vec<Complex64>,
    /// Half-width of the square in coordinate `j` (same for the real and
    /// imaginary axes).
    pub half_widths: Vec<f64>,
}

impl Box2n {
    /// Axis-aligned box centered at the origin.
    pub fn centered(half_widths: Vec<f64>) -> Self {
        let n = half_widths.len();
        Box2n { centers: vec![Complex64::new(0.0, 0.0); n], half_widths }
    }

    /// Number of complex coordinates.
    pub fn dim(&self) -> usize {
        self.half_widths.len()
    }

    /// Lebesgue volume in `R^(2n)`: the product of the squares' areas.
    pub fn volume(&self) -> f64 {
        self.half_widths.iter().map(|h| (2.0 * h) * (2.0 * h)).product()
    }

    /// Concatenates two boxes (product of domains).
    pub fn concat(&self, other: &Box2n) -> Box2n {
        let mut centers = self.centers.clone();
        centers.extend_from_slice(&other.centers);
        let mut half_widths = self.half_widths.clone();
        half_widths.extend_from_slice(&other.half_widths);
        Box2n { centers, half_widths }
    }
}

/// Bounding box of a domain, or the statement that none exists.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundingBox {
    Bounded(Box2n),
    Unbounded,
}

/// A balanced domain described by an explicit gauge function.
///
/// The closure must be absolutely homogeneous (`h(lambda z) = |lambda| h(z)`)
/// and lower semicontinuous with `h(0) = 0`; the property tests exercise
/// homogeneity on every catalog member.
pub struct GaugeDomain {
    /// Stable identifier; also the equality key.
    pub name: String,
    /// Number of complex variables.
    pub dim: usize,
    /// Whether the domain `{ h < 1 }` is bounded.
    pub bounded: bool,
    /// Bounding box when bounded (`None` for unbounded gauges).
    pub bounding: Option<Box2n>,
    gauge_fn: Box<dyn Fn(&[Complex64]) -> f64 + Send + Sync>,
}

impl GaugeDomain {
    /// Wraps a gauge closure.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        bounded: bool,
        bounding: Option<Box2n>,
        gauge_fn: impl Fn(&[Complex64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        GaugeDomain { name: name.into(), dim, bounded, bounding, gauge_fn: Box::new(gauge_fn) }
    }

    /// Evaluates the gauge.
    pub fn gauge(&self, z: &[Complex64]) -> f64 {
        (self.gauge_fn)(z)
    }
}

impl fmt::Debug for GaugeDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaugeDomain")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("bounded", &self.bounded)
            .finish_non_exhaustive()
    }
}

/// Specification of a model domain.
///
/// Use the checked constructors ([`DomainSpec::disc`], [`DomainSpec::ball`],
/// ...) to build values with validated parameters; the enum fields stay
/// public for pattern matching.
#[derive(Debug, Clone)]
pub enum DomainSpec {
    /// Disc `{ |z - center| < radius }` in `C`.
    Disc { center: Complex64, radius: f64 },
    /// Euclidean unit ball of `C^n`.
    Ball { dim: usize },
    /// Polydisc `{ |z_j| < r_j }` centered at the origin.
    Polydisc { radii: Vec<f64> },
    /// Complex ellipsoid `{ sum_j |z_j|^(2 p_j) < 1 }`, `p_j >= 1/2`.
    Ellipsoid { exponents: Vec<f64> },
    /// Balanced domain given by an explicit gauge.
    BalancedGauge(Arc<GaugeDomain>),
    /// Finite product of domains (coordinates concatenated in order).
    Product { factors: Vec<DomainSpec> },
}

impl PartialEq for DomainSpec {
    fn eq(&self, other: &Self) -> bool {
        use DomainSpec::*;
        match (self, other) {
            (Disc { center: c1, radius: r1 }, Disc { center: c2, radius: r2 }) => {
                c1 == c2 && r1 == r2
            }
            (Ball { dim: a }, Ball { dim: b }) => a == b,
            (Polydisc { radii: a }, Polydisc { radii: b }) => a == b,
            (Ellipsoid { exponents: a }, Ellipsoid { exponents: b }) => a == b,
            (BalancedGauge(a), BalancedGauge(b)) => a.name == b.name && a.dim == b.dim,
            (Product { factors: a }, Product { factors: b }) => a == b,
            _ => false,
        }
    }
}

impl DomainSpec {
    /// Disc with validated radius.
    pub fn disc(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidInput(format!("disc radius must be positive, got {radius}")));
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::InvalidInput("disc center must be finite".into()));
        }
        Ok(DomainSpec::Disc { center, radius })
    }

    /// Unit disc `{ |z| < 1 }`.
    pub fn unit_disc() -> Self {
        DomainSpec::Disc { center: Complex64::new(0.0, 0.0), radius: 1.0 }
    }

    /// Unit ball of `C^n`.
    pub fn ball(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("ball dimension must be at least 1".into()));
        }
        Ok(DomainSpec::Ball { dim })
    }

    /// Polydisc with validated radii.
    pub fn polydisc(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidInput("polydisc needs at least one radius".into()));
        }
        if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::InvalidInput(format!("polydisc radius must be positive, got {r}")));
        }
        Ok(DomainSpec::Polydisc { radii })
    }

    /// Complex ellipsoid with validated exponents (`p_j >= 1/2`).
    pub fn ellipsoid(exponents: Vec<f64>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidInput("ellipsoid needs at least one exponent".into()));
        }
        if let Some(p) = exponents.iter().find(|p| !(p.is_finite() && **p >= 0.5)) {
            return Err(Error::InvalidInput(format!(
                "ellipsoid exponent must be at least 1/2, got {p}"
            )));
        }
        Ok(DomainSpec::Ellipsoid { exponents })
    }

    /// Product of at least two factors.
    pub fn product(factors: Vec<DomainSpec>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::InvalidInput("a product needs at least two factors".into()));
        }
        Ok(DomainSpec::Product { factors })
    }

    /// The unbounded model domain `{ |z_1 z_2| < 1 }` in `C^2`, whose
    /// Bergman space contains no monomial at all.
    pub fn model_z1z2() -> Self {
        DomainSpec::BalancedGauge(Arc::new(GaugeDomain::new(
            "model-z1z2",
            2,
            false,
            None,
            |z: &[Complex64]| (z[0].norm() * z[1].norm()).sqrt(),
        )))
    }

    /// Number of complex variables.
    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Disc { .. } => 1,
            DomainSpec::Ball { dim } => *dim,
            DomainSpec::Polydisc { radii } => radii.len(),
            DomainSpec::Ellipsoid { exponents } => exponents.len(),
            DomainSpec::BalancedGauge(g) => g.dim,
            DomainSpec::Product { factors } => factors.iter().map(|f| f.dim()).sum(),
        }
    }

    /// Whether the domain is balanced (circled and starlike about 0).
    pub fn is_balanced(&self) -> bool {
        match self {
            DomainSpec::Disc { center, .. } => *center == Complex64::new(0.0, 0.0),
            DomainSpec::Ball { .. }
            | DomainSpec::Polydisc { .. }
            | DomainSpec::Ellipsoid { .. }
            | DomainSpec::BalancedGauge(_) => true,
            DomainSpec::Product { factors } => factors.iter().all(|f| f.is_balanced()),
        }
    }

    /// Whether the domain is a bounded subset of `C^n`.
    pub fn is_bounded(&self) -> bool {
        match self {
            DomainSpec::BalancedGauge(g) => g.bounded,
            DomainSpec::Product { factors } => factors.iter().all(|f| f.is_bounded()),
            _ => true,
        }
    }

    /// Minkowski gauge of a balanced domain.  Errors on unbalanced domains
    /// and on dimension mismatch.
    pub fn gauge(&self, z: &[Complex64]) -> Result<f64> {
        self.check_dim(z.len())?;
        match self {
            DomainSpec::Disc { center, radius } => {
                if *center != Complex64::new(0.0, 0.0) {
                    return Err(Error::NotBalanced(self.to_string()));
                }
                Ok(z[0].norm() / radius)
            }
            DomainSpec::Ball { .. } => Ok(norm(z)),
            DomainSpec::Polydisc { radii } => Ok(z
                .iter()
                .zip(radii)
                .map(|(zj, r)| zj.norm() / r)
                .fold(0.0, f64::max)),
            DomainSpec::Ellipsoid { exponents } => Ok(ellipsoid_gauge(exponents, z)),
            DomainSpec::BalancedGauge(g) => Ok(g.gauge(z)),
            DomainSpec::Product { factors } => {
                if !self.is_balanced() {
                    return Err(Error::NotBalanced(self.to_string()));
                }
                let mut best: f64 = 0.0;
                for (factor, part) in split_coords(factors, z) {
                    best = best.max(factor.gauge(part)?);
                }
                Ok(best)
            }
        }
    }

    /// Strict membership `z in D` (boundary excluded).
    pub fn contains(&self, z: &[Complex64]) -> Result<bool> {
        self.check_dim(z.len())?;
        match self {
            DomainSpec::Disc { center, radius } => Ok((z[0] - center).norm() < *radius),
            DomainSpec::Product { factors } => {
                for (factor, part) in split_coords(factors, z) {
                    if !factor.contains(part)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(self.gauge(z)? < 1.0),
        }
    }

    /// Axis-aligned bounding box, or [`BoundingBox::Unbounded`].
    pub fn bounding_box(&self) -> BoundingBox {
        match self {
            DomainSpec::Disc { center, radius } => BoundingBox::Bounded(Box2n {
                centers: vec![*center],
                half_widths: vec![*radius],
            }),
            DomainSpec::Ball { dim } => BoundingBox::Bounded(Box2n::centered(vec![1.0; *dim])),
            DomainSpec::Polydisc { radii } => {
                BoundingBox::Bounded(Box2n::centered(radii.clone()))
            }
            DomainSpec::Ellipsoid { exponents } => {
                BoundingBox::Bounded(Box2n::centered(vec![1.0; exponents.len()]))
            }
            DomainSpec::BalancedGauge(g) => match &g.bounding {
                Some(b) if g.bounded => BoundingBox::Bounded(b.clone()),
                _ => BoundingBox::Unbounded,
            },
            DomainSpec::Product { factors } => {
                let mut acc: Option<Box2n> = None;
                for f in factors {
                    match f.bounding_box() {
                        BoundingBox::Bounded(b) => {
                            acc = Some(match acc {
                                None => b,
                                Some(prev) => prev.concat(&b),
                            });
                        }
                        BoundingBox::Unbounded => return BoundingBox::Unbounded,
                    }
                }
                BoundingBox::Bounded(acc.expect("products have at least one factor"))
            }
        }
    }

    /// The dilate `s * D` for `s > 0`.  Discs and polydiscs stay in closed
    /// form; other balanced domains become gauge domains with `h(z)/s`.
    pub fn scale(&self, s: f64) -> Result<DomainSpec> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidInput(format!("scale factor must be positive, got {s}")));
        }
        if s == 1.0 {
            return Ok(self.clone());
        }
        Ok(match self {
            DomainSpec::Disc { center, radius } => {
                DomainSpec::Disc { center: center * s, radius: radius * s }
            }
            DomainSpec::Polydisc { radii } => {
                DomainSpec::Polydisc { radii: radii.iter().map(|r| r * s).collect() }
            }
            DomainSpec::Product { factors } => DomainSpec::Product {
                factors: factors.iter().map(|f| f.scale(s)).collect::<Result<_>>()?,
            },
            other => {
                let inner = other.clone();
                let bounding = match other.bounding_box() {
                    BoundingBox::Bounded(b) => Some(Box2n {
                        centers: b.centers.iter().map(|c| c * s).collect(),
                        half_widths: b.half_widths.iter().map(|h| h * s).collect(),
                    }),
                    BoundingBox::Unbounded => None,
                };
                DomainSpec::BalancedGauge(Arc::new(GaugeDomain::new(
                    format!("scaled({s}):{other}"),
                    other.dim(),
                    other.is_bounded(),
                    bounding,
                    move |z: &[Complex64]| {
                        inner.gauge(z).expect("scaled gauge on balanced inner domain") / s
                    },
                )))
            }
        })
    }

    /// Errors unless `got` matches the domain's dimension.
    pub fn check_dim(&self, got: usize) -> Result<()> {
        let expected = self.dim();
        if expected != got {
            return Err(Error::DimensionMismatch { expected, got });
        }
        Ok(())
    }
}

/// Pairs each product factor with its slice of the coordinates.
pub fn split_coords<'a, 'b>(
    factors: &'a [DomainSpec],
    z: &'b [Complex64],
) -> impl Iterator<Item = (&'a DomainSpec, &'b [Complex64])> {
    let mut offset = 0usize;
    factors.iter().map(move |f| {
        let d = f.dim();
        let part = &z[offset..offset + d];
        offset += d;
        (f, part)
    })
}

/// Gauge of a complex ellipsoid by bisection on
/// `f(t) = sum_j (|z_j| / t)^(2 p_j) - 1`, which is strictly decreasing in
/// `t`.  The bracket `[max_j |z_j| / 2, max_j |z_j| * n^(1/(2 min p))]`
/// always contains the root; 200 bisection steps drive the residual below
/// `1e-12`.
fn ellipsoid_gauge(exponents: &[f64], z: &[Complex64]) -> f64 {
    let moduli: Vec<f64> = z.iter().map(|c| c.norm()).collect();
    let sup = moduli.iter().fold(0.0f64, |a, &b| a.max(b));
    if sup == 0.0 {
        return 0.0;
    }
    let f = |t: f64| -> f64 {
        moduli
            .iter()
            .zip(exponents)
            .map(|(m, p)| if *m == 0.0 { 0.0 } else { (m / t).powf(2.0 * p) })
            .sum::<f64>()
            - 1.0
    };
    let p_min = exponents.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut lo = sup / 2.0;
    let mut hi = sup * (exponents.len() as f64).powf(1.0 / (2.0 * p_min));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let val = f(mid);
        if val.abs() <= 1e-12 {
            return mid;
        }
        if val > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Formats a complex number in the canonical `<re>+<im>i` form used by the
/// domain mini-language (`0+0i`, `0.5-0.2i`).  Negative zero is normalized.
pub fn format_complex(z: Complex64) -> String {
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

impl fmt::Display for DomainSpec {
    /// Canonical mini-language form: `disc:c=0+0i,r=1`, `ball:n=2`,
    /// `polydisc:r=1,0.5`, `ellipsoid:p=2,3`, `gauge:model-z1z2`,
    /// `product(<spec>;<spec>)`.  The CLI parser inverts this exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSpec::Disc { center, radius } => {
                write!(f, "disc:c={},r={}", format_complex(*center), radius)
            }
            DomainSpec::Ball { dim } => write!(f, "ball:n={dim}"),
            DomainSpec::Polydisc { radii } => {
                write!(f, "polydisc:r=")?;
                for (j, r) in radii.iter().enumerate() {
                    if j > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{r}")?;
                }
                Ok(())
            }
            DomainSpec::Ellipsoid { exponents } => {
                write!(f, "ellipsoid:p=")?;
                for (j, p) in exponents.iter().enumerate() {
                    if j > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            DomainSpec::BalancedGauge(g) => write!(f, "gauge:{}", g.name),
            DomainSpec::Product { factors } => {
                write!(f, "product(")?;
                for (j, d) in factors.iter().enumerate() {
                    if j > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{d}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Named catalog member used by scans, probe suites and tests.
pub struct CatalogEntry {
    pub name: &'static str,
    pub domain: DomainSpec,
}

/// Curated domain catalog.  Every probe suite draws its configurations from
/// here, so the list is ordered and stable.
pub fn catalog() -> Vec<CatalogEntry> {
    let c = Complex64::new(0.3, -0.2);
    vec![
        CatalogEntry { name: "unit-disc", domain: DomainSpec::unit_disc() },
        CatalogEntry {
            name: "offset-disc",
            domain: DomainSpec::disc(c, 1.25).expect("valid disc"),
        },
        CatalogEntry { name: "ball-2", domain: DomainSpec::ball(2).expect("valid ball") },
        CatalogEntry { name: "ball-3", domain: DomainSpec::ball(3).expect("valid ball") },
        CatalogEntry {
            name: "bidisc",
            domain: DomainSpec::polydisc(vec![1.0, 1.0]).expect("valid polydisc"),
        },
        CatalogEntry {
            name: "polydisc-1-0.5",
            domain: DomainSpec::polydisc(vec![1.0, 0.5]).expect("valid polydisc"),
        },
        CatalogEntry {
            name: "ellipsoid-2-3",
            domain: DomainSpec::ellipsoid(vec![2.0, 3.0]).expect("valid ellipsoid"),
        },
        CatalogEntry {
            name: "ellipsoid-1-2",
            domain: DomainSpec::ellipsoid(vec![1.0, 2.0]).expect("valid ellipsoid"),
        },
        CatalogEntry { name: "model-z1z2", domain: DomainSpec::model_z1z2() },
        CatalogEntry {
            name: "disc-x-ball2",
            domain: DomainSpec::product(vec![
                DomainSpec::unit_disc(),
                DomainSpec::ball(2).expect("valid ball"),
            ])
            .expect("valid product"),
        },
    ]
}

/// Looks up a catalog member by name.
pub fn catalog_domain(name: &str) -> Option<DomainSpec> {
    catalog().into_iter().find(|e| e.name == name).map(|e| e.domain)
}
