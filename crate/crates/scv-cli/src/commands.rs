//! Subcommand surface and its execution against the library.
//!
//! Each subcommand owns a disjoint slice of the library API and renders a
//! single [`Table`].  Exit codes: `0` success (including inconclusive
//! probe verdicts), `1` a probe or scan verdict failed, `2` usage errors
//! (malformed flags, mismatched dimensions, points outside the domain),
//! `3` mathematical refusals (no closed form available, divergent moments,
//! unbounded sets, undefined metrics).

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use scv_core::bergman::{
    bergman_metric, kernel, kernel_best, kernel_closed, kernel_h, kernel_h_balanced,
    kernel_h_on_sublevel, kernel_k, kernel_on_sublevel, moment, KernelResult, Moment,
};
use scv_core::domains::{BoundingBox, HomogeneousPoly, Point};
use scv_core::green::{green, scaled_sublevel, sublevel_set};
use scv_core::metrics::{
    azukawa, azukawa_ladder, cr_lower, indicatrix_box, indicatrix_contains, indicatrix_domain,
    indicatrix_volume, indicatrix_volume_closed, indicatrix_volume_with, sup_monomial,
    VolumeOutcome,
};
use scv_core::probes::{
    azukawa_psh_probe, boundary_limit_scan, dimension_probe, log_convexity_probe,
    monotonicity_scan, segment_convexity_probe, suita_closed, suita_functional, vol_psh_probe,
    volume_convexity_probe, volume_psh_probe, Check, ProbeReport, PshTarget, TolerancePolicy,
    Verdict,
};

use crate::parse::{
    parse_domain, parse_grid, parse_multi_index, parse_point, parse_poly, print_poly, ParseError,
};
use crate::report::{Cell, Format, Table};
use crate::suite;

/// Top-level command line.
#[derive(Debug, Parser)]
#[command(
    name = "scv",
    version,
    about = "Holomorphic invariants of model domains in C^n",
    propagate_version = true
)]
pub struct Cli {
    /// Output format of the data stream.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the table to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

/// Which function a plurisubharmonicity probe inspects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    /// Negative log-volume of the indicatrix, as a function of the point.
    Vol,
    /// Log of the Azukawa metric, along lines in the direction slot.
    Azukawa,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bergman kernel on the diagonal.
    Kernel {
        /// Domain, e.g. `disc:c=0+0i,r=1` or `product(ball:n=2;disc:c=0+0i,r=1)`.
        #[arg(long)]
        domain: String,
        /// Evaluation point, e.g. `0.5+0i` or `(0.3+0.1i, 0+0i)`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Total-degree cap for series summation.
        #[arg(long, default_value_t = 40)]
        cap: u32,
        /// Closed form only; the value column is empty when none exists.
        #[arg(long, conflicts_with = "series")]
        closed: bool,
        /// Force the monomial series even when a closed form exists.
        #[arg(long)]
        series: bool,
    },

    /// Bergman kernel with a homogeneous jet polynomial attached.
    KernelH {
        #[arg(long)]
        domain: String,
        /// Evaluation point (not used with --balanced, which evaluates at 0).
        #[arg(long, allow_hyphen_values = true, required_unless_present = "balanced",
              conflicts_with = "balanced")]
        point: Option<String>,
        /// Jet polynomial, e.g. `(1,1):1` or `(2,0):1,(0,2):0.5i`; `1` is the plain kernel.
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        jet: String,
        #[arg(long, default_value_t = 40)]
        cap: u32,
        /// Use the balanced-domain formula at the origin instead of the projection.
        #[arg(long)]
        balanced: bool,
    },

    /// Directional kernel of a given order along a direction.
    KernelK {
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Direction vector X.
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        /// Jet order k in H = <., X>^k.
        #[arg(long, default_value_t = 1)]
        order: u32,
        #[arg(long, default_value_t = 40)]
        cap: u32,
    },

    /// Bergman metric in a direction.
    Metric {
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        #[arg(long, default_value_t = 40)]
        cap: u32,
    },

    /// Azukawa pseudometric, with optional ladder, Green-function,
    /// higher-order lower-bound and monomial-supremum columns.
    Azukawa {
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        /// Also report the finite-difference ladder behind the defining limit.
        #[arg(long)]
        ladder: bool,
        /// Also evaluate the Green function with pole at --point here.
        #[arg(long, allow_hyphen_values = true, value_name = "POINT")]
        green_at: Option<String>,
        /// Also report the order-k Caratheodory-type lower bound along --direction.
        #[arg(long, value_name = "K")]
        cr_order: Option<u32>,
        /// Also report the supremum of |z^alpha| over the domain, e.g. `(2,1)`.
        #[arg(long, value_name = "INDEX")]
        monomial: Option<String>,
    },

    /// Azukawa indicatrix: Monte Carlo volume, closed form, bounding box,
    /// membership and the indicatrix as a balanced domain.
    IndicatrixVol {
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run the Monte Carlo loop on the always-sequential driver.
        #[arg(long)]
        sequential: bool,
        /// Add a column with the closed-form volume (empty when none exists).
        #[arg(long)]
        closed: bool,
        /// Add a membership column for this direction vector.
        #[arg(long, allow_hyphen_values = true, value_name = "POINT")]
        contains: Option<String>,
        /// Add a column printing the indicatrix as a domain expression.
        #[arg(long)]
        as_domain: bool,
        /// Print the bounding-box table (one row per complex coordinate) instead.
        #[arg(long = "box")]
        box_table: bool,
    },

    /// Kernel-volume functional F(w) = (K(w) * vol I(w))^(1/n).
    Suita {
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        cap: u32,
        /// Add a column with the closed-form value (empty when none exists).
        #[arg(long)]
        closed: bool,
    },

    /// Jet kernels of the rescaled Green sublevel family, level by level,
    /// against the indicatrix endpoint.
    ScanMonotone {
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        pole: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        jet: String,
        /// Sublevel parameters, each <= 0.
        #[arg(long, allow_hyphen_values = true, default_value = "-3,-2,-1,-0.25")]
        grid: String,
        #[arg(long, default_value_t = 40)]
        cap: u32,
    },

    /// Second differences of the log jet kernel along the sublevel family.
    /// Evidence only: the verdict is always inconclusive.
    ProbeLogconvex {
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        pole: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        jet: String,
        /// At least three distinct levels, each <= 0.
        #[arg(long, allow_hyphen_values = true, default_value = "-3,-2,-1,-0.25")]
        grid: String,
        #[arg(long, default_value_t = 40)]
        cap: u32,
    },

    /// Convexity of the negative log indicatrix volume on segments, either
    /// over randomly drawn point pairs or one explicit segment.
    ProbeConvexity {
        #[arg(long)]
        domain: String,
        /// Number of random point pairs to draw.
        #[arg(long, default_value_t = 8)]
        pairs: usize,
        /// Interpolation parameters in [0, 1].
        #[arg(long, allow_hyphen_values = true, default_value = "0.25,0.5,0.75")]
        t_grid: String,
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// First endpoint of an explicit segment (skips the random pairs).
        #[arg(long, allow_hyphen_values = true, requires = "to", value_name = "POINT")]
        from: Option<String>,
        /// Second endpoint of an explicit segment.
        #[arg(long, allow_hyphen_values = true, requires = "from", value_name = "POINT")]
        to: Option<String>,
    },

    /// Sub-mean-value checks on circles for the negative log indicatrix
    /// volume or the log Azukawa metric.
    ProbePsh {
        #[arg(long)]
        domain: String,
        #[arg(long, value_enum, default_value_t = Target::Vol)]
        target: Target,
        /// Number of random complex lines to draw.
        #[arg(long, default_value_t = 6)]
        lines: usize,
        /// Circle radii to test on each line.
        #[arg(long, allow_hyphen_values = true, default_value = "0.05")]
        radii: String,
        /// Circle quadrature points.
        #[arg(long, default_value_t = 16)]
        points: u32,
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Explicit circle center (skips the random lines).
        #[arg(long, allow_hyphen_values = true, requires = "direction", value_name = "POINT")]
        at: Option<String>,
        /// Circle direction for --at.
        #[arg(long, allow_hyphen_values = true, value_name = "POINT")]
        direction: Option<String>,
        /// Base direction of the metric when --target azukawa with --at.
        #[arg(long, allow_hyphen_values = true, value_name = "POINT")]
        x: Option<String>,
    },

    /// Kernel-volume functional along a ray toward the boundary.
    BoundaryScan {
        #[arg(long)]
        domain: String,
        /// Ray direction; the scan walks t*direction as t approaches 1.
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        /// Distances from the boundary parameter t = 1.
        #[arg(long, allow_hyphen_values = true, default_value = "0.1,0.01,0.001")]
        distances: String,
        #[arg(long, default_value_t = 50_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        cap: u32,
    },

    /// Counts of square-integrable monomials on the domain, a sublevel
    /// member and the indicatrix, with an optional single-moment column.
    Dimension {
        #[arg(long)]
        domain: String,
        /// Sublevel parameter for the middle count.
        #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
        level: f64,
        #[arg(long, default_value_t = 8)]
        cap: u32,
        /// Also report the moment of this monomial, e.g. `(2,1)`.
        #[arg(long, value_name = "INDEX")]
        monomial: Option<String>,
    },

    /// The full verification battery: one row per criterion, no timings,
    /// byte-identical for equal seeds regardless of worker count.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A rendered table plus the process exit code it implies.
pub struct Outcome {
    pub table: Table,
    pub exit: i32,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Outcome { table, exit: 0 }
    }
}

/// Front-end error: a positioned parse failure on a named flag, a plain
/// usage message, or an error bubbled up from the library.
#[derive(Debug)]
pub enum CliError {
    Parse { field: &'static str, input: String, err: ParseError },
    Usage(String),
    Core(scv_core::Error),
}

impl From<scv_core::Error> for CliError {
    fn from(e: scv_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse { field, input, err } => {
                write!(f, "invalid --{field} '{input}': {err}")
            }
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    /// `2` for usage-shaped errors, `3` for mathematical refusals.
    pub fn exit_code(&self) -> i32 {
        use scv_core::Error::*;
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                DimensionMismatch { .. } | InvalidInput(_) | OutsideDomain(_) => 2,
                _ => 3,
            },
        }
    }
}

type ExecResult = Result<Outcome, CliError>;

fn p_domain(s: &str) -> Result<scv_core::domains::DomainSpec, CliError> {
    parse_domain(s).map_err(|err| CliError::Parse { field: "domain", input: s.into(), err })
}

fn p_point(field: &'static str, s: &str) -> Result<Point, CliError> {
    parse_point(s).map_err(|err| CliError::Parse { field, input: s.into(), err })
}

fn p_poly(field: &'static str, s: &str, dim: usize) -> Result<HomogeneousPoly, CliError> {
    parse_poly(s, dim).map_err(|err| CliError::Parse { field, input: s.into(), err })
}

fn p_grid(field: &'static str, s: &str) -> Result<Vec<f64>, CliError> {
    parse_grid(s).map_err(|err| CliError::Parse { field, input: s.into(), err })
}

fn p_index(field: &'static str, s: &str) -> Result<scv_core::domains::MultiIndex, CliError> {
    parse_multi_index(s).map_err(|err| CliError::Parse { field, input: s.into(), err })
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn policy_str(p: TolerancePolicy) -> &'static str {
    match p {
        TolerancePolicy::Exact => "exact",
        TolerancePolicy::Stochastic => "stochastic",
    }
}

fn opt_u(v: Option<u64>) -> Cell {
    match v {
        Some(v) => Cell::U(v),
        None => Cell::Null,
    }
}

/// Uniform rendering of a probe report: one row per check, with the
/// report-level fields echoed on every row.
fn report_table(r: &ProbeReport) -> Table {
    let mut t = Table::new(&[
        "probe",
        "policy",
        "seed",
        "n_samples",
        "check",
        "lhs",
        "rhs",
        "margin",
        "verdict",
    ]);
    for c in &r.checks {
        t.push(vec![
            Cell::s(r.name.as_str()),
            Cell::s(policy_str(r.policy)),
            opt_u(r.seed),
            opt_u(r.n_samples),
            Cell::s(c.label.as_str()),
            Cell::F(c.lhs),
            Cell::F(c.rhs),
            Cell::F(c.margin),
            Cell::s(verdict_str(c.verdict)),
        ]);
    }
    t
}

fn verdict_outcome(r: &ProbeReport) -> Outcome {
    let exit = match r.verdict() {
        Verdict::Fail => 1,
        _ => 0,
    };
    Outcome { table: report_table(r), exit }
}

/// Executes one parsed subcommand.
pub fn execute(cmd: &Command) -> ExecResult {
    match cmd {
        Command::Kernel { domain, point, cap, closed, series } => {
            exec_kernel(domain, point, *cap, *closed, *series)
        }
        Command::KernelH { domain, point, jet, cap, balanced } => {
            exec_kernel_h(domain, point.as_deref(), jet, *cap, *balanced)
        }
        Command::KernelK { domain, point, direction, order, cap } => {
            exec_kernel_k(domain, point, direction, *order, *cap)
        }
        Command::Metric { domain, point, direction, cap } => {
            exec_metric(domain, point, direction, *cap)
        }
        Command::Azukawa { domain, point, direction, ladder, green_at, cr_order, monomial } => {
            exec_azukawa(
                domain,
                point,
                direction,
                *ladder,
                green_at.as_deref(),
                *cr_order,
                monomial.as_deref(),
            )
        }
        Command::IndicatrixVol {
            domain,
            point,
            samples,
            seed,
            sequential,
            closed,
            contains,
            as_domain,
            box_table,
        } => exec_indicatrix(
            domain,
            point,
            *samples,
            *seed,
            *sequential,
            *closed,
            contains.as_deref(),
            *as_domain,
            *box_table,
        ),
        Command::Suita { domain, point, samples, seed, cap, closed } => {
            exec_suita(domain, point, *samples, *seed, *cap, *closed)
        }
        Command::ScanMonotone { domain, pole, jet, grid, cap } => {
            exec_scan(domain, pole, jet, grid, *cap)
        }
        Command::ProbeLogconvex { domain, pole, jet, grid, cap } => {
            exec_logconvex(domain, pole, jet, grid, *cap)
        }
        Command::ProbeConvexity { domain, pairs, t_grid, samples, seed, from, to } => {
            exec_convexity(domain, *pairs, t_grid, *samples, *seed, from.as_deref(), to.as_deref())
        }
        Command::ProbePsh {
            domain,
            target,
            lines,
            radii,
            points,
            samples,
            seed,
            at,
            direction,
            x,
        } => exec_psh(
            domain,
            *target,
            *lines,
            radii,
            *points,
            *samples,
            *seed,
            at.as_deref(),
            direction.as_deref(),
            x.as_deref(),
        ),
        Command::BoundaryScan { domain, direction, distances, samples, seed, cap } => {
            exec_boundary(domain, direction, distances, *samples, *seed, *cap)
        }
        Command::Dimension { domain, level, cap, monomial } => {
            exec_dimension(domain, *level, *cap, monomial.as_deref())
        }
        Command::Suite { seed } => {
            let (table, all_pass) = suite::run(*seed);
            Ok(Outcome { table, exit: if all_pass { 0 } else { 1 } })
        }
    }
}

fn kernel_row_tail(r: &KernelResult) -> [Cell; 4] {
    [
        Cell::F(r.value),
        Cell::U(r.degree_cap as u64),
        Cell::F(r.tail_estimate),
        Cell::B(r.exact_flag),
    ]
}

fn exec_kernel(domain: &str, point: &str, cap: u32, closed: bool, series: bool) -> ExecResult {
    let d = p_domain(domain)?;
    let w = p_point("point", point)?;
    let mut t = Table::new(&[
        "domain",
        "point",
        "mode",
        "value",
        "degree_cap",
        "tail_estimate",
        "exact",
        "trivial_space",
    ]);
    let head = [Cell::s(d.to_string()), Cell::s(w.to_string())];
    if closed {
        let row_tail = match kernel_closed(&d, &w)? {
            Some(v) => [Cell::F(v), Cell::Null, Cell::F(0.0), Cell::B(true), Cell::B(false)],
            None => [Cell::Null, Cell::Null, Cell::Null, Cell::Null, Cell::Null],
        };
        let mut row = head.to_vec();
        row.push(Cell::s("closed"));
        row.extend(row_tail);
        t.push(row);
    } else {
        let (mode, r) =
            if series { ("series", kernel(&d, &w, cap)?) } else { ("auto", kernel_best(&d, &w, cap)?) };
        let mut row = head.to_vec();
        row.push(Cell::s(mode));
        row.extend(kernel_row_tail(&r));
        row.push(Cell::B(r.trivial_space));
        t.push(row);
    }
    Ok(Outcome::ok(t))
}

fn exec_kernel_h(
    domain: &str,
    point: Option<&str>,
    jet: &str,
    cap: u32,
    balanced: bool,
) -> ExecResult {
    let d = p_domain(domain)?;
    let h = p_poly("jet", jet, d.dim())?;
    let mut t = Table::new(&[
        "domain",
        "point",
        "jet",
        "mode",
        "value",
        "degree_cap",
        "tail_estimate",
        "exact",
    ]);
    if balanced {
        let v = kernel_h_balanced(&d, &h)?;
        t.push(vec![
            Cell::s(d.to_string()),
            Cell::s(Point::origin(d.dim()).to_string()),
            Cell::s(print_poly(&h)),
            Cell::s("balanced"),
            Cell::F(v),
            Cell::Null,
            Cell::F(0.0),
            Cell::B(true),
        ]);
    } else {
        let w = p_point("point", point.expect("clap enforces --point without --balanced"))?;
        let r = kernel_h(&d, &w, &h, cap)?;
        let mut row = vec![
            Cell::s(d.to_string()),
            Cell::s(w.to_string()),
            Cell::s(print_poly(&h)),
            Cell::s("projection"),
        ];
        row.extend(kernel_row_tail(&r));
        t.push(row);
    }
    Ok(Outcome::ok(t))
}

fn exec_kernel_k(domain: &str, point: &str, direction: &str, order: u32, cap: u32) -> ExecResult {
    let d = p_domain(domain)?;
    let w = p_point("point", point)?;
    let x = p_point("direction", direction)?;
    let r = kernel_k(&d, &w, &x, order, cap)?;
    let mut t = Table::new(&[
        "domain",
        "point",
        "direction",
        "order",
        "value",
        "degree_cap",
        "tail_estimate",
        "exact",
    ]);
    let mut row = vec![
        Cell::s(d.to_string()),
        Cell::s(w.to_string()),
        Cell::s(x.to_string()),
        Cell::U(order as u64),
    ];
    row.extend(kernel_row_tail(&r));
    t.push(row);
    Ok(Outcome::ok(t))
}

fn exec_metric(domain: &str, point: &str, direction: &str, cap: u32) -> ExecResult {
    let d = p_domain(domain)?;
    let w = p_point("point", point)?;
    let x = p_point("direction", direction)?;
    let v = bergman_metric(&d, &w, &x, cap)?;
    let mut t = Table::new(&["domain", "point", "direction", "value"]);
    t.push(vec![
        Cell::s(d.to_string()),
        Cell::s(w.to_string()),
        Cell::s(x.to_string()),
        Cell::F(v),
    ]);
    Ok(Outcome::ok(t))
}

fn exec_azukawa(
    domain: &str,
    point: &str,
    direction: &str,
    ladder: bool,
    green_at: Option<&str>,
    cr_order: Option<u32>,
    monomial: Option<&str>,
) -> ExecResult {
    let d = p_domain(domain)?;
    let w = p_point("point", point)?;
    let x = p_point("direction", direction)?;
    let mut cols: Vec<&'static str> = vec!["domain", "point", "direction", "azukawa"];
    let mut row = vec![
        Cell::s(d.to_string()),
        Cell::s(w.to_string()),
        Cell::s(x.to_string()),
        Cell::F(azukawa(&d, &w, &x)?),
    ];
    if let Some(z_text) = green_at {
        let z = p_point("green-at", z_text)?;
        cols.extend(["green_at", "green"]);
        row.push(Cell::s(z.to_string()));
        row.push(Cell::F(green(&d, w.coords(), z.coords())?));
    }
    if ladder {
        let probe = azukawa_ladder(&d, &w, &x)?;
        cols.extend([
            "lambda_1",
            "lambda_2",
            "lambda_3",
            "ladder_1",
            "ladder_2",
            "ladder_3",
            "extrapolated",
            "spread",
        ]);
        for l in probe.lambdas {
            row.push(Cell::F(l));
        }
        for v in probe.values {
            row.push(Cell::F(v));
        }
        row.push(Cell::F(probe.extrapolated));
        row.push(Cell::F(probe.spread()));
    }
    if let Some(k) = cr_order {
        cols.extend(["cr_order", "cr_lower"]);
        row.push(Cell::U(k as u64));
        row.push(Cell::F(cr_lower(&d, &x, k)?));
    }
    if let Some(alpha_text) = monomial {
        let alpha = p_index("monomial", alpha_text)?;
        cols.extend(["monomial", "sup_monomial"]);
        row.push(Cell::s(alpha.to_string()));
        row.push(Cell::F(sup_monomial(&d, &alpha)?));
    }
    let mut t = Table::new(&cols);
    t.push(row);
    Ok(Outcome::ok(t))
}

#[allow(clippy::too_many_arguments)]
fn exec_indicatrix(
    domain: &str,
    point: &str,
    samples: u64,
    seed: u64,
    sequential: bool,
    closed: bool,
    contains: Option<&str>,
    as_domain: bool,
    box_table: bool,
) -> ExecResult {
    let d = p_domain(domain)?;
    let w = p_point("point", point)?;
    if box_table {
        let mut t = Table::new(&[
            "domain",
            "point",
            "axis",
            "center_re",
            "center_im",
            "half_width",
            "box_volume",
        ]);
        match indicatrix_box(&d, &w)? {
            BoundingBox::Bounded(b) => {
                let volume = b.volume();
                for (j, (c, h)) in b.centers.iter().zip(&b.half_widths).enumerate() {
                    t.push(vec![
                        Cell::s(d.to_string()),
                        Cell::s(w.to_string()),
                        Cell::U(j as u64),
                        Cell::F(c.re),
                        Cell::F(c.im),
                        Cell::F(*h),
                        Cell::F(volume),
                    ]);
                }
            }
            BoundingBox::Unbounded => {
                t.push(vec![
                    Cell::s(d.to_string()),
                    Cell::s(w.to_string()),
                    Cell::Null,
                    Cell::Null,
                    Cell::Null,
                    Cell::Null,
                    Cell::F(f64::INFINITY),
                ]);
            }
        }
        return Ok(Outcome::ok(t));
    }

    let mut cols: Vec<&'static str> = vec![
        "domain",
        "point",
        "outcome",
        "mean",
        "std_error",
        "n_samples",
        "seed",
        "box_volume",
        "hits",
        "driver",
    ];
    let outcome = if sequential {
        indicatrix_volume_with(&d, &w, samples, seed, true)?
    } else {
        indicatrix_volume(&d, &w, samples, seed)?
    };
    let driver = if sequential { "sequential" } else { "auto" };
    let mut row = vec![Cell::s(d.to_string()), Cell::s(w.to_string())];
    match &outcome {
        VolumeOutcome::Estimate(e) => {
            row.extend([
                Cell::s("estimate"),
                Cell::F(e.mean),
                Cell::F(e.std_error),
                Cell::U(e.n_samples),
                Cell::U(e.seed),
                Cell::F(e.box_volume),
                Cell::U(e.hits),
                Cell::s(driver),
            ]);
        }
        VolumeOutcome::Unbounded => {
            row.extend([
                Cell::s("unbounded"),
                Cell::F(f64::INFINITY),
                Cell::Null,
                Cell::U(samples),
                Cell::U(seed),
                Cell::Null,
                Cell::Null,
                Cell::s(driver),
            ]);
        }
    }
    if closed {
        cols.push("closed");
        row.push(match indicatrix_volume_closed(&d, &w)? {
            Some(v) => Cell::F(v),
            None => Cell::Null,
        });
    }
    if let Some(x_text) = contains {
        let x = p_point("contains", x_text)?;
        cols.extend(["contains_point", "contains"]);
        row.push(Cell::s(x.to_string()));
        row.push(Cell::B(indicatrix_contains(&d, &w, &x)?));
    }
    if as_domain {
        cols.push("indicatrix");
        row.push(Cell::s(indicatrix_domain(&d, &w)?.to_string()));
    }
    let mut t = Table::new(&cols);
    t.push(row);
    Ok(Outcome::ok(t))
}

fn exec_suita(
    domain: &str,
    point: &str,
    samples: u64,
    seed: u64,
    cap: u32,
    closed: bool,
) -> ExecResult {
    let d = p_domain(domain)?;
    let w = p_point("point", point)?;
    let s = suita_functional(&d, &w, samples, seed, cap)?;
    let mut cols: Vec<&'static str> = vec![
        "domain",
        "point",
        "dim",
        "kernel",
        "kernel_tail",
        "kernel_exact",
        "volume_mean",
        "volume_sigma",
        "value",
        "sigma",
        "lower",
        "upper",
        "conclusive",
        "n_samples",
        "seed",
    ];
    let (vol_mean, vol_sigma) = match &s.volume {
        VolumeOutcome::Estimate(e) => (Cell::F(e.mean), Cell::F(e.std_error)),
        VolumeOutcome::Unbounded => (Cell::F(f64::INFINITY), Cell::Null),
    };
    let mut row = vec![
        Cell::s(d.to_string()),
        Cell::s(w.to_string()),
        Cell::U(s.dim as u64),
        Cell::F(s.kernel.value),
        Cell::F(s.kernel.tail_estimate),
        Cell::B(s.kernel.exact_flag),
        vol_mean,
        vol_sigma,
        Cell::F(s.value),
        Cell::F(s.sigma),
        Cell::F(s.lower),
        Cell::F(s.upper),
        Cell::B(s.conclusive),
        Cell::U(samples),
        Cell::U(seed),
    ];
    if closed {
        cols.push("closed");
        row.push(match suita_closed(&d, &w)? {
            Some(v) => Cell::F(v),
            None => Cell::Null,
        });
    }
    let mut t = Table::new(&cols);
    t.push(row);
    // The functional's hard lower bound: a confidence interval entirely
    // below one is a verdict failure.
    let exit = if s.conclusive && s.upper < 1.0 { 1 } else { 0 };
    Ok(Outcome { table: t, exit })
}

fn exec_scan(domain: &str, pole: &str, jet: &str, grid: &str, cap: u32) -> ExecResult {
    let d = p_domain(domain)?;
    let pole = p_point("pole", pole)?;
    let h = p_poly("jet", jet, d.dim())?;
    let levels = p_grid("grid", grid)?;
    let scan = monotonicity_scan(&d, &pole, &h, &levels, cap)?;
    let mut t = Table::new(&[
        "domain",
        "pole",
        "jet",
        "level",
        "sublevel",
        "rescaled",
        "kernel_plain",
        "kernel_jet",
        "endpoint",
        "max_deviation",
        "monotone",
    ]);
    for (i, &a) in levels.iter().enumerate() {
        let raw = sublevel_set(&d, pole.coords(), a)?;
        let rescaled = scaled_sublevel(&d, pole.coords(), a)?;
        let plain = kernel_on_sublevel(&rescaled, &pole, cap)?.value;
        let with_jet = kernel_h_on_sublevel(&rescaled, &pole, &h, cap)?.value;
        debug_assert_eq!(with_jet, scan.rows[i].value);
        t.push(vec![
            Cell::s(d.to_string()),
            Cell::s(pole.to_string()),
            Cell::s(print_poly(&h)),
            Cell::F(a),
            Cell::s(raw.to_string()),
            Cell::s(rescaled.to_string()),
            Cell::F(plain),
            Cell::F(with_jet),
            Cell::F(scan.endpoint),
            Cell::F(scan.max_deviation),
            Cell::B(scan.monotone),
        ]);
    }
    Ok(Outcome { table: t, exit: if scan.monotone { 0 } else { 1 } })
}

fn exec_logconvex(domain: &str, pole: &str, jet: &str, grid: &str, cap: u32) -> ExecResult {
    let d = p_domain(domain)?;
    let pole = p_point("pole", pole)?;
    let h = p_poly("jet", jet, d.dim())?;
    let levels = p_grid("grid", grid)?;
    let report = log_convexity_probe(&d, &pole, &h, &levels, cap)?;
    Ok(verdict_outcome(&report))
}

fn exec_convexity(
    domain: &str,
    pairs: usize,
    t_grid: &str,
    samples: u64,
    seed: u64,
    from: Option<&str>,
    to: Option<&str>,
) -> ExecResult {
    let d = p_domain(domain)?;
    let ts = p_grid("t-grid", t_grid)?;
    let report = match (from, to) {
        (Some(a), Some(b)) => {
            let w1 = p_point("from", a)?;
            let w2 = p_point("to", b)?;
            segment_convexity_probe(&d, &w1, &w2, &ts, samples, seed)?
        }
        _ => volume_convexity_probe(&d, pairs, &ts, samples, seed)?,
    };
    Ok(verdict_outcome(&report))
}

#[allow(clippy::too_many_arguments)]
fn exec_psh(
    domain: &str,
    target: Target,
    lines: usize,
    radii: &str,
    points: u32,
    samples: u64,
    seed: u64,
    at: Option<&str>,
    direction: Option<&str>,
    x: Option<&str>,
) -> ExecResult {
    let d = p_domain(domain)?;
    let rho = p_grid("radii", radii)?;
    let report = match at {
        Some(w_text) => {
            let w = p_point("at", w_text)?;
            let v = p_point("direction", direction.expect("clap: --at requires --direction"))?;
            let mut checks = Vec::new();
            match target {
                Target::Vol => {
                    for &r in &rho {
                        let mc = vol_psh_probe(&d, &w, &v, r, points, samples, seed)?;
                        checks.push(Check {
                            label: format!("w = {w}, v = {v}, rho = {r}, points = {points}"),
                            lhs: mc.center,
                            rhs: mc.circle_mean,
                            margin: mc.margin,
                            verdict: mc.verdict,
                        });
                    }
                    ProbeReport {
                        name: "vol-psh-at".into(),
                        checks,
                        policy: TolerancePolicy::Stochastic,
                        seed: Some(seed),
                        n_samples: Some(samples),
                    }
                }
                Target::Azukawa => {
                    let x_text = x.ok_or_else(|| {
                        CliError::Usage(
                            "--x is required with --target azukawa and --at".into(),
                        )
                    })?;
                    let xp = p_point("x", x_text)?;
                    for &r in &rho {
                        let mc = azukawa_psh_probe(&d, &w, &xp, &v, r, points)?;
                        checks.push(Check {
                            label: format!(
                                "w = {w}, x = {xp}, v = {v}, rho = {r}, points = {points}"
                            ),
                            lhs: mc.center,
                            rhs: mc.circle_mean,
                            margin: mc.margin,
                            verdict: mc.verdict,
                        });
                    }
                    ProbeReport {
                        name: "azukawa-psh-at".into(),
                        checks,
                        policy: TolerancePolicy::Exact,
                        seed: None,
                        n_samples: None,
                    }
                }
            }
        }
        None => {
            let t = match target {
                Target::Vol => PshTarget::Volume,
                Target::Azukawa => PshTarget::Azukawa,
            };
            volume_psh_probe(&d, t, lines, &rho, points, samples, seed)?
        }
    };
    Ok(verdict_outcome(&report))
}

fn exec_boundary(
    domain: &str,
    direction: &str,
    distances: &str,
    samples: u64,
    seed: u64,
    cap: u32,
) -> ExecResult {
    let d = p_domain(domain)?;
    let dir = p_point("direction", direction)?;
    let dist = p_grid("distances", distances)?;
    let report = boundary_limit_scan(&d, &dir, &dist, samples, seed, cap)?;
    Ok(verdict_outcome(&report))
}

fn exec_dimension(domain: &str, level: f64, cap: u32, monomial: Option<&str>) -> ExecResult {
    let d = p_domain(domain)?;
    let report = dimension_probe(&d, level, cap)?;
    let mut cols: Vec<&'static str> = vec![
        "domain",
        "level",
        "degree_cap",
        "domain_count",
        "sublevel_count",
        "indicatrix_count",
        "total_count",
        "all_equal",
        "classification",
    ];
    let mut row = vec![
        Cell::s(d.to_string()),
        Cell::F(level),
        Cell::U(report.degree_cap as u64),
        Cell::U(report.domain_count as u64),
        Cell::U(report.sublevel_count as u64),
        Cell::U(report.indicatrix_count as u64),
        Cell::U(report.total_count as u64),
        Cell::B(report.all_equal()),
        Cell::s(report.classification()),
    ];
    if let Some(alpha_text) = monomial {
        let alpha = p_index("monomial", alpha_text)?;
        cols.extend(["monomial", "moment"]);
        row.push(Cell::s(alpha.to_string()));
        row.push(match moment(&d, &alpha)? {
            Moment::Finite(v) => Cell::F(v),
            Moment::Divergent => Cell::s("divergent"),
        });
    }
    let mut t = Table::new(&cols);
    t.push(row);
    Ok(Outcome { table: t, exit: if report.all_equal() { 0 } else { 1 } })
}
