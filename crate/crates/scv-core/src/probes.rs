//! Numerical verification probes: the kernel-volume functional, sublevel
//! scans, convexity and plurisubharmonicity checks, boundary limits and
//! dimension counts.
//!
//! Every probe reports *observed* quantities next to the bound they must
//! satisfy and an explicit margin (fixed tolerance, or three standard
//! errors when Monte Carlo noise enters).  A probe can refute a statement
//! — an observed violation beyond its margin is a hard failure — but a
//! clean run is evidence, not proof; the verdicts say which of the two
//! happened.  Margins are never widened to make a failing case pass.

use num_complex::Complex64;
use rand::Rng;

use crate::bergman::{
    kernel_best, kernel_closed, kernel_h_balanced, kernel_h_on_sublevel, KernelResult,
    MomentTable,
};
use crate::domains::{BoundingBox, DomainSpec, HomogeneousPoly, Point};
use crate::error::{Error, Result};
use crate::green::{scaled_sublevel, SublevelGeometry};
use crate::mc::{block_rng, derive_seed};
use crate::metrics::{
    indicatrix_domain, indicatrix_volume, indicatrix_volume_closed, VolumeOutcome,
};

/// Baseline slack added on top of statistical margins, covering pure
/// floating-point noise in closed-form routes.
const FP_SLACK: f64 = 1e-9;

/// Outcome of a single check or a whole probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// No violation beyond the margin.
    Pass,
    /// Violation beyond the margin.
    Fail,
    /// The quantities could not be compared (e.g. `0 * inf`).
    Inconclusive,
}

/// One inequality instance: `lhs <= rhs + margin`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    /// Canonical description of the configuration tested.
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

impl Check {
    fn compare(label: String, lhs: f64, rhs: f64, margin: f64) -> Check {
        let verdict = if lhs.is_nan() || rhs.is_nan() {
            Verdict::Inconclusive
        } else if lhs <= rhs + margin {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Check { label, lhs, rhs, margin, verdict }
    }

    /// Whether the data exhibits a violation of `lhs <= rhs + margin`,
    /// regardless of the verdict recorded on the check.  The reading
    /// companion for [`log_convexity_probe`], whose verdicts are
    /// inconclusive by design.
    pub fn violates(&self) -> bool {
        !self.lhs.is_nan() && !self.rhs.is_nan() && self.lhs > self.rhs + self.margin
    }
}

/// How the margins of a report were derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TolerancePolicy {
    /// Closed-form paths only: fixed absolute slack.
    Exact,
    /// At least one margin carries three combined standard errors.
    Stochastic,
}

/// A named bundle of checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub policy: TolerancePolicy,
    /// Seed of the Monte Carlo draws, when any were made.
    pub seed: Option<u64>,
    /// Per-evaluation Monte Carlo sample count, when any draws were made.
    pub n_samples: Option<u64>,
}

impl ProbeReport {
    fn exact(name: impl Into<String>, checks: Vec<Check>) -> Self {
        ProbeReport {
            name: name.into(),
            checks,
            policy: TolerancePolicy::Exact,
            seed: None,
            n_samples: None,
        }
    }

    fn stochastic(name: impl Into<String>, checks: Vec<Check>, seed: u64, n_samples: u64) -> Self {
        ProbeReport {
            name: name.into(),
            checks,
            policy: TolerancePolicy::Stochastic,
            seed: Some(seed),
            n_samples: Some(n_samples),
        }
    }

    /// Fail dominates, then inconclusive, then pass.
    pub fn verdict(&self) -> Verdict {
        let mut saw_inconclusive = false;
        for c in &self.checks {
            match c.verdict {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Inconclusive => saw_inconclusive = true,
                Verdict::Pass => {}
            }
        }
        if saw_inconclusive {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }
}

/// The kernel-volume functional
/// `F_D(w) = (K_D(w) * lambda^(2n)(I_D(w)))^(1/n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuitaValue {
    /// Number of complex variables.
    pub dim: usize,
    /// Kernel part (closed form when available, else truncated series).
    pub kernel: KernelResult,
    /// Indicatrix volume part (Monte Carlo, or the unbounded sentinel).
    pub volume: VolumeOutcome,
    /// Point estimate of `F_D(w)`; `NaN` when inconclusive.
    pub value: f64,
    /// One standard error on `value` from the Monte Carlo part.
    pub sigma: f64,
    /// Conservative interval: kernel truncation widened by a factor of 10
    /// on the high side, volume widened by three standard errors.
    pub lower: f64,
    pub upper: f64,
    /// False when the product degenerates to `0 * inf` (trivial Bergman
    /// space against an unbounded indicatrix).
    pub conclusive: bool,
}

/// Evaluates `F_D(w)` with a Monte Carlo indicatrix volume.
pub fn suita_functional(
    domain: &DomainSpec,
    w: &Point,
    n_samples: u64,
    seed: u64,
    degree_cap: u32,
) -> Result<SuitaValue> {
    let n = domain.dim();
    let kernel = kernel_best(domain, w, degree_cap)?;
    let volume = indicatrix_volume(domain, w, n_samples, seed)?;
    let inv_n = 1.0 / n as f64;
    match &volume {
        VolumeOutcome::Unbounded => {
            if kernel.trivial_space {
                // 0 * inf: the functional does not decide anything here.
                Ok(SuitaValue {
                    dim: n,
                    kernel,
                    volume,
                    value: f64::NAN,
                    sigma: f64::NAN,
                    lower: 0.0,
                    upper: f64::INFINITY,
                    conclusive: false,
                })
            } else {
                Ok(SuitaValue {
                    dim: n,
                    kernel,
                    volume,
                    value: f64::INFINITY,
                    sigma: 0.0,
                    lower: f64::INFINITY,
                    upper: f64::INFINITY,
                    conclusive: true,
                })
            }
        }
        VolumeOutcome::Estimate(est) => {
            let k_lo = kernel.value;
            let k_hi = kernel.value + 10.0 * kernel.tail_estimate;
            let v_lo = (est.mean - 3.0 * est.std_error).max(0.0);
            let v_hi = est.mean + 3.0 * est.std_error;
            let value = (kernel.value * est.mean).powf(inv_n);
            let sigma = if est.mean > 0.0 && value.is_finite() && value > 0.0 {
                value * est.std_error / (n as f64 * est.mean)
            } else {
                f64::NAN
            };
            Ok(SuitaValue {
                dim: n,
                kernel,
                volume,
                value,
                sigma,
                lower: (k_lo * v_lo).powf(inv_n),
                upper: (k_hi * v_hi).powf(inv_n),
                conclusive: !(kernel.trivial_space && !value.is_finite()),
            })
        }
    }
}

/// `F_D(w)` from closed forms only (`Ok(None)` when either part has no
/// closed form at `w`).  Exact up to floating-point rounding.
pub fn suita_closed(domain: &DomainSpec, w: &Point) -> Result<Option<f64>> {
    let k = match kernel_closed(domain, w)? {
        Some(k) => k,
        None => return Ok(None),
    };
    let v = match indicatrix_volume_closed(domain, w)? {
        Some(v) => v,
        None => return Ok(None),
    };
    Ok(Some((k * v).powf(1.0 / domain.dim() as f64)))
}

/// One point of a sublevel-family scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    /// Sublevel parameter `a < 0` (`0` is the domain itself).
    pub level: f64,
    /// `K^H` of the rescaled sublevel domain `D_a` at the pole.
    pub value: f64,
}

/// Scan of `a -> K^H_(D_a)(pole)` against its `a -> -inf` endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    /// Grid rows in the order requested.
    pub rows: Vec<ScanRow>,
    /// Endpoint `K^H_(I_D(pole))(0)` from the balanced closed form on the
    /// indicatrix domain.
    pub endpoint: f64,
    /// `max |value - endpoint|` over the grid.
    pub max_deviation: f64,
    /// Whether the family is non-decreasing in `a` (endpoint first, then
    /// the grid sorted ascending), within a relative slack of 1e-9.
    pub monotone: bool,
}

/// Evaluates the family `D_a = e^(-a) * {G_D(pole, .) < a}` (rescaled about
/// the pole) at the pole over a grid of levels, plus the indicatrix
/// endpoint.
pub fn monotonicity_scan(
    domain: &DomainSpec,
    pole: &Point,
    jet: &HomogeneousPoly,
    levels: &[f64],
    degree_cap: u32,
) -> Result<ScanResult> {
    if levels.is_empty() {
        return Err(Error::InvalidInput("the scan grid must be non-empty".into()));
    }
    let mut rows = Vec::with_capacity(levels.len());
    for &a in levels {
        rows.push(ScanRow { level: a, value: family_value(domain, pole, jet, a, degree_cap)? });
    }
    let endpoint = kernel_h_balanced(&indicatrix_domain(domain, pole)?, jet)?;
    let max_deviation = rows
        .iter()
        .map(|r| (r.value - endpoint).abs())
        .fold(0.0, f64::max);
    let mut sorted = rows.clone();
    sorted.sort_by(|x, y| x.level.total_cmp(&y.level));
    let scale = endpoint.abs().max(1.0);
    let mut monotone = true;
    let mut prev = endpoint;
    for r in &sorted {
        if r.value < prev - FP_SLACK * scale {
            monotone = false;
        }
        prev = prev.max(r.value);
    }
    Ok(ScanResult { rows, endpoint, max_deviation, monotone })
}

/// `K^H_(D_a)(pole)` for one level.
fn family_value(
    domain: &DomainSpec,
    pole: &Point,
    jet: &HomogeneousPoly,
    a: f64,
    degree_cap: u32,
) -> Result<f64> {
    let geometry: SublevelGeometry = scaled_sublevel(domain, pole, a)?;
    Ok(kernel_h_on_sublevel(&geometry, pole, jet, degree_cap)?.value)
}

/// Collects evidence on convexity of `a -> ln K^H_(D_a)(pole)` from
/// consecutive grid triples.  Needs at least three distinct levels.
///
/// Whether this function of `a` is convex is an open question; the probe
/// therefore never certifies.  Every check carries the measured value, the
/// chord it is compared against and the margin, but its verdict — and the
/// report verdict — is always [`Verdict::Inconclusive`]: the data either
/// exhibits a violation (worth reporting loudly) or fails to, and neither
/// outcome settles the statement.
pub fn log_convexity_probe(
    domain: &DomainSpec,
    pole: &Point,
    jet: &HomogeneousPoly,
    levels: &[f64],
    degree_cap: u32,
) -> Result<ProbeReport> {
    let mut grid: Vec<f64> = levels.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    if grid.len() < 3 {
        return Err(Error::InvalidInput(
            "log-convexity needs at least three distinct levels".into(),
        ));
    }
    let mut values = Vec::with_capacity(grid.len());
    for &a in &grid {
        let v = family_value(domain, pole, jet, a, degree_cap)?;
        if v <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "K^H vanishes at level {a}; its logarithm is not finite"
            )));
        }
        values.push(v.ln());
    }
    let mut checks = Vec::new();
    for i in 1..grid.len() - 1 {
        let (a1, a2, a3) = (grid[i - 1], grid[i], grid[i + 1]);
        let (f1, f2, f3) = (values[i - 1], values[i], values[i + 1]);
        let chord = ((a3 - a2) * f1 + (a2 - a1) * f3) / (a3 - a1);
        let margin = FP_SLACK * (1.0 + f1.abs().max(f2.abs()).max(f3.abs()));
        let mut check =
            Check::compare(format!("a = {a2} in [{a1}, {a3}]"), f2, chord, margin);
        // Evidence never becomes a certificate here; see the doc comment.
        check.verdict = Verdict::Inconclusive;
        checks.push(check);
    }
    Ok(ProbeReport::exact("log-convexity", checks))
}

/// Whether the domain is convex as a subset of `C^n = R^(2n)`.
fn is_convex(domain: &DomainSpec) -> bool {
    match domain {
        DomainSpec::Disc { .. } | DomainSpec::Ball { .. } | DomainSpec::Polydisc { .. } => true,
        // |z_j|^(2 p_j) is convex for p_j >= 1/2, which the constructor
        // enforces.
        DomainSpec::Ellipsoid { .. } => true,
        DomainSpec::BalancedGauge(_) => false,
        DomainSpec::Product { factors } => factors.iter().all(is_convex),
    }
}

/// Checks convexity of `u(w) = -ln lambda^(2n)(I_D(w))` along the segment
/// between `w1` and `w2` inside a convex domain: for each `t` in `t_grid`,
/// `u(t w1 + (1-t) w2) <= t u(w1) + (1-t) u(w2) + margin`, with the margin
/// combining three standard errors of the three volume estimates.
pub fn segment_convexity_probe(
    domain: &DomainSpec,
    w1: &Point,
    w2: &Point,
    t_grid: &[f64],
    n_samples: u64,
    seed: u64,
) -> Result<ProbeReport> {
    if t_grid.is_empty() {
        return Err(Error::InvalidInput("the secant grid must be non-empty".into()));
    }
    if let Some(t) = t_grid.iter().find(|t| !(t.is_finite() && (0.0..=1.0).contains(*t))) {
        return Err(Error::InvalidInput(format!("secant parameters must lie in [0, 1], got {t}")));
    }
    if !is_convex(domain) {
        return Err(Error::InvalidInput(format!(
            "convexity probe requires a convex domain, got {domain}"
        )));
    }
    domain.check_dim(w1.dim())?;
    domain.check_dim(w2.dim())?;
    let (vol1, sig1) = segment_volume(domain, w1, n_samples, derive_seed(seed, 0))?;
    let (vol2, sig2) = segment_volume(domain, w2, n_samples, derive_seed(seed, 1))?;
    // u = -ln V, so sigma_u = sigma_V / V.
    let (u1, su1) = (-vol1.ln(), sig1 / vol1);
    let (u2, su2) = (-vol2.ln(), sig2 / vol2);
    let mut checks = Vec::with_capacity(t_grid.len());
    for (i, &t) in t_grid.iter().enumerate() {
        let w = Point::new(
            w1.iter()
                .zip(w2.iter())
                .map(|(a, b)| t * a + (1.0 - t) * b)
                .collect(),
        )?;
        let (vol, sig) = segment_volume(domain, &w, n_samples, derive_seed(seed, 2 + i as u64))?;
        let (u, su) = (-vol.ln(), sig / vol);
        let rhs = t * u1 + (1.0 - t) * u2;
        let stat = (su * su + t * t * su1 * su1 + (1.0 - t) * (1.0 - t) * su2 * su2).sqrt();
        let margin = 3.0 * stat + FP_SLACK * (1.0 + rhs.abs());
        checks.push(Check::compare(format!("t = {t}"), u, rhs, margin));
    }
    Ok(ProbeReport::stochastic("segment-convexity", checks, seed, n_samples))
}

/// Convexity suite for `u(w) = -ln lambda^(2n)(I_D(w))` over `n_pairs`
/// random interior pairs of a convex member, secant-checked on `t_grid`.
/// The pair draws are a pure function of the seed.
pub fn volume_convexity_probe(
    domain: &DomainSpec,
    n_pairs: usize,
    t_grid: &[f64],
    n_samples: u64,
    seed: u64,
) -> Result<ProbeReport> {
    if n_pairs == 0 {
        return Err(Error::InvalidInput("the convexity suite needs at least one pair".into()));
    }
    if !is_convex(domain) {
        return Err(Error::InvalidInput(format!(
            "convexity probe requires a convex domain, got {domain}"
        )));
    }
    let mut checks = Vec::new();
    for pair in 0..n_pairs {
        let mut rng = block_rng(derive_seed(seed, 101), pair as u64);
        let w1 = draw_interior(domain, &mut rng, 0.85)?;
        let w2 = draw_interior(domain, &mut rng, 0.85)?;
        let part = segment_convexity_probe(
            domain,
            &w1,
            &w2,
            t_grid,
            n_samples,
            derive_seed(seed, 1_000 + pair as u64),
        )?;
        for c in part.checks {
            checks.push(Check {
                label: format!("pair {pair}: w1 = {w1}, w2 = {w2}, {}", c.label),
                ..c
            });
        }
    }
    Ok(ProbeReport::stochastic("volume-convexity", checks, seed, n_samples))
}

/// Indicatrix volume with its standard error: closed form (zero error)
/// when available, Monte Carlo otherwise.
fn segment_volume(
    domain: &DomainSpec,
    w: &Point,
    n_samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if let Some(v) = indicatrix_volume_closed(domain, w)? {
        return Ok((v, 0.0));
    }
    match indicatrix_volume(domain, w, n_samples, seed)? {
        VolumeOutcome::Estimate(e) => Ok((e.mean, e.std_error)),
        VolumeOutcome::Unbounded => Err(Error::Unbounded(format!(
            "indicatrix of {domain} at {w}"
        ))),
    }
}

/// Center toward which interior draws are pulled: the disc center, the
/// origin of balanced members, factorwise on products.
fn center_of(domain: &DomainSpec) -> Point {
    match domain {
        DomainSpec::Disc { center, .. } => Point::one(*center),
        DomainSpec::Product { factors } => {
            let mut coords = Vec::with_capacity(domain.dim());
            for f in factors {
                coords.extend_from_slice(center_of(f).coords());
            }
            Point::new(coords).expect("product dimensions are positive")
        }
        _ => Point::origin(domain.dim()),
    }
}

/// Uniform draw from the bounding box, rejected until it lands inside the
/// domain, then pulled toward the center so a neighborhood of the result
/// stays interior.
fn draw_interior(domain: &DomainSpec, rng: &mut impl Rng, pull: f64) -> Result<Point> {
    let sample_box = match domain.bounding_box() {
        BoundingBox::Bounded(b) => b,
        BoundingBox::Unbounded => {
            return Err(Error::Unbounded(format!("cannot sample interior points of {domain}")))
        }
    };
    let center = center_of(domain);
    let mut z = vec![Complex64::new(0.0, 0.0); domain.dim()];
    for _ in 0..100_000 {
        for (j, slot) in z.iter_mut().enumerate() {
            let c = sample_box.centers[j];
            let h = sample_box.half_widths[j];
            let re: f64 = rng.gen();
            let im: f64 = rng.gen();
            *slot = Complex64::new(c.re + h * (2.0 * re - 1.0), c.im + h * (2.0 * im - 1.0));
        }
        if domain.contains(&z)? {
            let pulled: Vec<Complex64> = center
                .iter()
                .zip(&z)
                .map(|(cj, zj)| cj + pull * (zj - cj))
                .collect();
            return Point::new(pulled);
        }
    }
    Err(Error::InvalidInput(format!(
        "interior sampling of {domain} failed; the bounding box barely meets the domain"
    )))
}

/// Random unit vector from a uniform draw on the coordinate cube.
fn draw_direction(dim: usize, rng: &mut impl Rng) -> Point {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = rng.gen();
                let im: f64 = rng.gen();
                Complex64::new(2.0 * re - 1.0, 2.0 * im - 1.0)
            })
            .collect();
        let len = crate::domains::norm(&v);
        if len > 1e-3 {
            let unit: Vec<Complex64> = v.iter().map(|c| c / len).collect();
            return Point::new(unit).expect("normalized draws are finite");
        }
    }
}

/// Sub-mean-value check of a function on a discrete circle:
/// `center <= mean + margin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCheck {
    /// Value at the circle's center.
    pub center: f64,
    /// Discrete mean over the circle.
    pub circle_mean: f64,
    /// Three combined standard errors plus floating-point slack.
    pub margin: f64,
    /// Number of circle points.
    pub points: u32,
    pub verdict: Verdict,
}

fn mean_check(center: f64, values: &[f64], margin_stat: f64) -> MeanCheck {
    let points = values.len() as u32;
    if !center.is_finite() || values.iter().any(|v| v.is_nan()) {
        return MeanCheck {
            center,
            circle_mean: f64::NAN,
            margin: margin_stat,
            points,
            verdict: Verdict::Inconclusive,
        };
    }
    // A -inf sample (a circle point exactly on a degeneracy) poisons the
    // discrete mean; flag it rather than comparing against -inf.
    if values.iter().any(|v| v.is_infinite()) {
        return MeanCheck {
            center,
            circle_mean: f64::NEG_INFINITY,
            margin: margin_stat,
            points,
            verdict: Verdict::Inconclusive,
        };
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let margin = margin_stat + FP_SLACK * (1.0 + center.abs().max(mean.abs()));
    let verdict = if center <= mean + margin {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    MeanCheck { center, circle_mean: mean, margin, points, verdict }
}

/// Plurisubharmonicity probe for `w -> -ln lambda^(2n)(I_D(w))`: compares
/// the value at `w` with the discrete mean over the circle
/// `w + rho e^(i theta) v`.
pub fn vol_psh_probe(
    domain: &DomainSpec,
    w: &Point,
    v: &Point,
    rho: f64,
    points: u32,
    n_samples: u64,
    seed: u64,
) -> Result<MeanCheck> {
    if points < 3 {
        return Err(Error::InvalidInput("a circle probe needs at least three points".into()));
    }
    if !(rho > 0.0) {
        return Err(Error::InvalidInput(format!("circle radius must be positive, got {rho}")));
    }
    domain.check_dim(w.dim())?;
    domain.check_dim(v.dim())?;
    let (center_vol, center_sigma) = segment_volume(domain, w, n_samples, derive_seed(seed, 0))?;
    let center = -center_vol.ln();
    let mut values = Vec::with_capacity(points as usize);
    let mut var = (center_sigma / center_vol).powi(2);
    for k in 0..points {
        let theta = 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(points);
        let rot = Complex64::new(0.0, theta).exp() * rho;
        let z = Point::new(w.iter().zip(v.iter()).map(|(wj, vj)| wj + rot * vj).collect())?;
        if !domain.contains(&z)? {
            return Err(Error::OutsideDomain(format!(
                "circle point {z} leaves {domain}"
            )));
        }
        let (vol, sigma) = segment_volume(domain, &z, n_samples, derive_seed(seed, u64::from(k) + 1))?;
        values.push(-vol.ln());
        var += (sigma / vol).powi(2) / f64::from(points).powi(2);
    }
    Ok(mean_check(center, &values, 3.0 * var.sqrt()))
}

/// Plurisubharmonicity probe for `X -> ln A_D(w; X)` at fixed `w`:
/// compares the value at `x` with the discrete mean over the circle
/// `x + rho e^(i theta) v` in the direction variable.
pub fn azukawa_psh_probe(
    domain: &DomainSpec,
    w: &Point,
    x: &Point,
    v: &Point,
    rho: f64,
    points: u32,
) -> Result<MeanCheck> {
    if points < 3 {
        return Err(Error::InvalidInput("a circle probe needs at least three points".into()));
    }
    if !(rho > 0.0) {
        return Err(Error::InvalidInput(format!("circle radius must be positive, got {rho}")));
    }
    let center = crate::metrics::azukawa(domain, w, x)?.ln();
    let mut values = Vec::with_capacity(points as usize);
    for k in 0..points {
        let theta = 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(points);
        let rot = Complex64::new(0.0, theta).exp() * rho;
        let xe = Point::new(x.iter().zip(v.iter()).map(|(xj, vj)| xj + rot * vj).collect())?;
        values.push(crate::metrics::azukawa(domain, w, &xe)?.ln());
    }
    Ok(mean_check(center, &values, 0.0))
}

/// Which sub-mean-value target a batched circle suite evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PshTarget {
    /// `w -> -ln lambda^(2n)(I_D(w))` in the base point.
    Volume,
    /// `X -> ln A_D(w; X)` in the direction variable at a fixed base point.
    Azukawa,
}

/// Plurisubharmonicity suite over `n_lines` random complex lines: each line
/// draws an interior base point and a unit direction (a pure function of
/// the seed), then runs the circle probe for the selected target.  A circle
/// that escapes the domain has its radius halved until it fits; the shrink
/// is recorded in the check label.
pub fn volume_psh_probe(
    domain: &DomainSpec,
    target: PshTarget,
    n_lines: usize,
    radii: &[f64],
    points: u32,
    n_samples: u64,
    seed: u64,
) -> Result<ProbeReport> {
    if n_lines == 0 {
        return Err(Error::InvalidInput("the circle suite needs at least one line".into()));
    }
    if radii.is_empty() {
        return Err(Error::InvalidInput("the circle suite needs at least one radius".into()));
    }
    for &rho in radii {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "circle radius must be positive, got {rho}"
            )));
        }
    }
    let mut checks = Vec::new();
    for line in 0..n_lines {
        let mut rng = block_rng(derive_seed(seed, 202), line as u64);
        let w = draw_interior(domain, &mut rng, 0.85)?;
        let v = draw_direction(domain.dim(), &mut rng);
        // The extra direction is drawn whether or not the target needs it,
        // keeping the (w, v) stream identical across targets.
        let x = draw_direction(domain.dim(), &mut rng);
        for (ri, &rho) in radii.iter().enumerate() {
            let mc_seed = derive_seed(seed, 1_000 + (line * radii.len() + ri) as u64);
            let check = match target {
                PshTarget::Volume => {
                    let mut r = rho;
                    let mut shrinks = 0u32;
                    let mc = loop {
                        match vol_psh_probe(domain, &w, &v, r, points, n_samples, mc_seed) {
                            Ok(c) => break c,
                            Err(Error::OutsideDomain(_)) if shrinks < 20 => {
                                r *= 0.5;
                                shrinks += 1;
                            }
                            Err(e) => return Err(e),
                        }
                    };
                    let shrank = if shrinks == 0 {
                        String::new()
                    } else {
                        format!(" (shrunk {shrinks}x to stay inside)")
                    };
                    Check {
                        label: format!("line {line}: w = {w}, v = {v}, rho = {r}{shrank}"),
                        lhs: mc.center,
                        rhs: mc.circle_mean,
                        margin: mc.margin,
                        verdict: mc.verdict,
                    }
                }
                PshTarget::Azukawa => {
                    // Circles run in the direction variable, which cannot
                    // leave the domain; no shrinking applies.
                    let mc = azukawa_psh_probe(domain, &w, &x, &v, rho, points)?;
                    Check {
                        label: format!("line {line}: w = {w}, x = {x}, v = {v}, rho = {rho}"),
                        lhs: mc.center,
                        rhs: mc.circle_mean,
                        margin: mc.margin,
                        verdict: mc.verdict,
                    }
                }
            };
            checks.push(check);
        }
    }
    Ok(match target {
        PshTarget::Volume => ProbeReport::stochastic("vol-psh", checks, seed, n_samples),
        PshTarget::Azukawa => {
            let mut report = ProbeReport::exact("azukawa-psh", checks);
            report.seed = Some(seed);
            report
        }
    })
}

/// Boundary approach of the kernel-volume functional: evaluates `F_D` at
/// points whose boundary distance runs through `distances`, walking along
/// the ray `direction` (from the disc center, radially in a ball, along
/// the gauge ray otherwise).
pub fn boundary_limit_scan(
    domain: &DomainSpec,
    direction: &Point,
    distances: &[f64],
    n_samples: u64,
    seed: u64,
    degree_cap: u32,
) -> Result<ProbeReport> {
    domain.check_dim(direction.dim())?;
    if distances.is_empty() {
        return Err(Error::InvalidInput("the distance grid must be non-empty".into()));
    }
    let len = crate::domains::norm(direction);
    if len == 0.0 {
        return Err(Error::InvalidInput("the approach direction must be nonzero".into()));
    }
    let unit: Vec<Complex64> = direction.iter().map(|c| c / len).collect();
    let mut checks = Vec::new();
    for (i, &d) in distances.iter().enumerate() {
        if !(d > 0.0) {
            return Err(Error::InvalidInput(format!(
                "boundary distances must be positive, got {d}"
            )));
        }
        let w = approach_point(domain, &unit, d)?;
        let (f, sigma) = match suita_closed(domain, &w)? {
            Some(f) => (f, 0.0),
            None => {
                let s =
                    suita_functional(domain, &w, n_samples, derive_seed(seed, i as u64), degree_cap)?;
                if !s.conclusive {
                    return Err(Error::Unbounded(format!(
                        "F_D degenerates at {w} on {domain}"
                    )));
                }
                (s.value, s.sigma)
            }
        };
        let margin = (3.0 * sigma).max(5e-3);
        checks.push(Check::compare(format!("distance = {d}"), (f - 1.0).abs(), 0.0, margin));
    }
    Ok(ProbeReport::stochastic("boundary-limit", checks, seed, n_samples))
}

/// Point at boundary distance `d` along the unit ray.
fn approach_point(domain: &DomainSpec, unit: &[Complex64], d: f64) -> Result<Point> {
    match domain {
        DomainSpec::Disc { center, radius } => {
            if d >= *radius {
                return Err(Error::InvalidInput(format!(
                    "distance {d} exceeds the disc radius {radius}"
                )));
            }
            Point::new(vec![center + (radius - d) * unit[0]])
        }
        DomainSpec::Ball { .. } => {
            if d >= 1.0 {
                return Err(Error::InvalidInput(format!(
                    "distance {d} exceeds the ball radius 1"
                )));
            }
            Point::new(unit.iter().map(|u| (1.0 - d) * u).collect())
        }
        _ => {
            // Balanced domains: walk the gauge ray to gauge value 1 - d.
            let h = domain.gauge(unit)?;
            if h <= 0.0 {
                return Err(Error::InvalidInput(
                    "the direction has gauge 0; no boundary point along this ray".into(),
                ));
            }
            if d >= 1.0 {
                return Err(Error::InvalidInput(format!(
                    "gauge distance {d} leaves the domain"
                )));
            }
            let s = (1.0 - d) / h;
            Point::new(unit.iter().map(|u| s * u).collect())
        }
    }
}

/// Counts of square-integrable monomials on `D`, a rescaled sublevel `D_a`
/// and the indicatrix `I_D(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionReport {
    pub degree_cap: u32,
    pub domain_count: usize,
    pub sublevel_count: usize,
    pub indicatrix_count: usize,
    /// Number of monomials up to the cap, integrable or not.
    pub total_count: usize,
}

impl DimensionReport {
    /// The dimension-equality statement: all three counts agree.
    pub fn all_equal(&self) -> bool {
        self.domain_count == self.sublevel_count && self.domain_count == self.indicatrix_count
    }

    /// Coarse classification of the Bergman space seen through the cap:
    /// no integrable monomials at all, some, or every monomial up to the
    /// cap.
    pub fn classification(&self) -> &'static str {
        if self.domain_count == 0 {
            "trivial"
        } else if self.domain_count == self.total_count {
            "all-integrable"
        } else {
            "at-least-count"
        }
    }
}

/// Compares Bergman-space dimensions (monomial counts up to a degree cap)
/// across the domain, one rescaled sublevel `D_a` and the indicatrix at
/// the origin of a balanced Reinhardt member.
pub fn dimension_probe(domain: &DomainSpec, level: f64, degree_cap: u32) -> Result<DimensionReport> {
    if !domain.is_balanced() {
        return Err(Error::NotBalanced(domain.to_string()));
    }
    let origin = Point::origin(domain.dim());
    let table = MomentTable::build(domain, degree_cap)?;
    let domain_count = table.finite_count();
    let total_count = table.total_count();
    let sublevel_count = match scaled_sublevel(domain, &origin, level)? {
        SublevelGeometry::ScaledCopy { base, .. } => {
            // Dilation rescales each moment by a positive factor, so
            // square-integrability is decided by the base domain.
            MomentTable::build(&base, degree_cap)?.finite_count()
        }
        other => {
            return Err(Error::UnsupportedGeometry(format!(
                "balanced sublevel should be a scaled copy, got {other}"
            )))
        }
    };
    let indicatrix_count =
        MomentTable::build(&indicatrix_domain(domain, &origin)?, degree_cap)?.finite_count();
    Ok(DimensionReport { degree_cap, domain_count, sublevel_count, indicatrix_count, total_count })
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
    fn suita_is_exactly_one_on_the_disc_in_closed_form() {
        let disc = DomainSpec::unit_disc();
        for w in [0.0, 0.3, -0.7] {
            let f = suita_closed(&disc, &pt1(w)).unwrap().unwrap();
            assert!((f - 1.0).abs() < 1e-12, "w = {w}: F = {f}");
        }
        // Offset disc too: both factors are Moebius-exact.
        let disc = DomainSpec::disc(Complex64::new(0.3, -0.2), 1.25).unwrap();
        let f = suita_closed(&disc, &pt1(0.5)).unwrap().unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn suita_mc_brackets_one_on_the_ball() {
        let ball = DomainSpec::ball(2).unwrap();
        let s = suita_functional(&ball, &Point::origin(2), 200_000, 11, 6).unwrap();
        assert!(s.conclusive);
        assert!(s.sigma < 5e-3);
        assert!((s.value - 1.0).abs() <= 3.0 * s.sigma, "F = {} +- {}", s.value, s.sigma);
        assert!(s.lower <= 1.0 && 1.0 <= s.upper);
    }

    #[test]
    fn suita_on_model_is_inconclusive() {
        let model = DomainSpec::model_z1z2();
        let s = suita_functional(&model, &Point::origin(2), 1000, 0, 10).unwrap();
        assert!(!s.conclusive);
        assert!(s.value.is_nan());
    }

    #[test]
    fn disc_scan_is_constant_at_the_known_value() {
        let disc = DomainSpec::unit_disc();
        let jet = HomogeneousPoly::one(1);
        let levels = [-3.0, -2.0, -1.0, -0.5, -0.25, -0.1, -0.01, 0.0];
        let scan = monotonicity_scan(&disc, &pt1(0.5), &jet, &levels, 50).unwrap();
        let expected = 16.0 / (9.0 * PI);
        assert!((scan.endpoint - expected).abs() < 1e-12);
        assert!(scan.max_deviation < 1e-10, "max deviation {}", scan.max_deviation);
        assert!(scan.monotone);
    }

    #[test]
    fn balanced_scan_with_a_degree_two_jet_is_constant() {
        let bidisc =
            DomainSpec::product(vec![DomainSpec::unit_disc(), DomainSpec::unit_disc()]).unwrap();
        let jet = HomogeneousPoly::monomial(
            crate::domains::MultiIndex::new(vec![1, 1]),
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let levels = [-2.0, -1.0, -0.5, 0.0];
        let scan = monotonicity_scan(&bidisc, &Point::origin(2), &jet, &levels, 12).unwrap();
        assert!((scan.endpoint - 4.0 / (PI * PI)).abs() < 1e-12);
        assert!(scan.max_deviation < 1e-10);
        assert!(scan.monotone);
    }

    #[test]
    fn log_convexity_reports_evidence_without_certifying() {
        let disc = DomainSpec::unit_disc();
        let jet = HomogeneousPoly::one(1);
        let report =
            log_convexity_probe(&disc, &pt1(0.4), &jet, &[-2.0, -1.5, -1.0, -0.5, 0.0], 40)
                .unwrap();
        assert_eq!(report.verdict(), Verdict::Inconclusive);
        assert_eq!(report.checks.len(), 3);
        // The attached data on this constant family shows no violation.
        assert!(report.checks.iter().all(|c| !c.violates()));
    }

    #[test]
    fn volume_convexity_on_the_ball_segment() {
        let ball = DomainSpec::ball(2).unwrap();
        let report = segment_convexity_probe(
            &ball,
            &pt2(-0.5, 0.1),
            &pt2(0.6, -0.2),
            &[0.25, 0.5, 0.75],
            10_000,
            3,
        )
        .unwrap();
        assert_eq!(report.verdict(), Verdict::Pass);
        assert_eq!(report.policy, TolerancePolicy::Stochastic);

        let batched = volume_convexity_probe(&ball, 4, &[0.5], 10_000, 3).unwrap();
        assert_eq!(batched.verdict(), Verdict::Pass);
        assert_eq!(batched.checks.len(), 4);
        assert_eq!(batched.seed, Some(3));
    }

    #[test]
    fn psh_probes_pass_on_catalog_members() {
        let ball = DomainSpec::ball(2).unwrap();
        let check = vol_psh_probe(&ball, &pt2(0.2, -0.1), &pt2(1.0, 0.5), 0.1, 16, 1000, 5)
            .unwrap();
        assert_eq!(check.verdict, Verdict::Pass, "{check:?}");

        let model = DomainSpec::model_z1z2();
        let check = azukawa_psh_probe(
            &model,
            &Point::origin(2),
            &pt2(1.0, 2.0),
            &pt2(0.5, -0.25),
            0.3,
            16,
        )
        .unwrap();
        assert_eq!(check.verdict, Verdict::Pass, "{check:?}");
    }

    #[test]
    fn batched_psh_suite_is_deterministic_and_passes() {
        let ball = DomainSpec::ball(2).unwrap();
        let a = volume_psh_probe(&ball, PshTarget::Volume, 3, &[0.05], 16, 2_000, 9).unwrap();
        let b = volume_psh_probe(&ball, PshTarget::Volume, 3, &[0.05], 16, 2_000, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.verdict(), Verdict::Pass);
        assert_eq!(a.checks.len(), 3);

        let az = volume_psh_probe(&ball, PshTarget::Azukawa, 3, &[0.05], 16, 0, 9).unwrap();
        assert_eq!(az.policy, TolerancePolicy::Exact);
        assert_ne!(az.verdict(), Verdict::Fail);
    }

    #[test]
    fn boundary_scan_reaches_one_on_discs_and_balls() {
        let distances = [0.2, 0.1, 0.05, 0.01, 1e-3];
        let disc = DomainSpec::disc(Complex64::new(0.3, -0.2), 1.25).unwrap();
        let u = Point::new(vec![Complex64::new(0.6, 0.8)]).unwrap();
        let report = boundary_limit_scan(&disc, &u, &distances, 1000, 0, 20).unwrap();
        assert_eq!(report.verdict(), Verdict::Pass);

        let ball = DomainSpec::ball(3).unwrap();
        let u = Point::new(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.5, 0.5),
        ])
        .unwrap();
        let report = boundary_limit_scan(&ball, &u, &distances, 1000, 0, 20).unwrap();
        assert_eq!(report.verdict(), Verdict::Pass);
    }

    #[test]
    fn dimension_counts_agree() {
        let ball = DomainSpec::ball(2).unwrap();
        let report = dimension_probe(&ball, -1.0, 5).unwrap();
        assert!(report.all_equal());
        assert_eq!(report.domain_count, 21);
        assert_eq!(report.total_count, 21);
        assert_eq!(report.classification(), "all-integrable");

        let model = DomainSpec::model_z1z2();
        let report = dimension_probe(&model, -1.0, 10).unwrap();
        assert!(report.all_equal());
        assert_eq!(report.domain_count, 0);
        assert_eq!(report.classification(), "trivial");
    }
}
