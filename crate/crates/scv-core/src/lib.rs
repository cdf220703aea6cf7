//! Holomorphic invariants of model pseudoconvex domains in `C^n`.
//!
//! The crate computes, in closed form or by deterministic numerics, the
//! quantities attached to a catalog of Reinhardt model domains (discs,
//! balls, polydiscs, complex ellipsoids, an unbounded model domain, and
//! finite products of these):
//!
//! * **Bergman kernels** on the diagonal, including kernels with a
//!   homogeneous polynomial jet attached and directional kernels of every
//!   order, plus the induced Bergman metric ([`bergman`]);
//! * **pluricomplex Green functions** with logarithmic poles, their
//!   sublevel sets `{G < a}` and the rescaled family `D_a` interpolating
//!   between the domain and the Azukawa indicatrix ([`green`]);
//! * **Azukawa metrics and indicatrices**, with closed forms, a
//!   finite-difference ladder probing the defining limit, indicatrix
//!   volumes, and monomial lower bounds for higher Caratheodory-type
//!   metrics ([`metrics`]);
//! * **verification probes** for the structural inequalities tying these
//!   together — the kernel-volume functional `F_D >= 1`, monotonicity of
//!   sublevel families, log-convexity, plurisubharmonicity and convexity
//!   of volume functionals, boundary limits, and dimension counts
//!   ([`probes`]).
//!
//! # Determinism
//!
//! Every result is reproducible bit for bit.  Series follow a fixed
//! enumeration order (degree-major, lexicographic within a degree); Monte
//! Carlo sampling assigns one counter-based RNG stream per fixed-size
//! block, so estimates do not depend on the worker count or on whether
//! the parallel driver is active at all.  The `parallel` feature (on by
//! default) distributes blocks over a thread pool; disabling it changes
//! throughput, never values.

pub mod bergman;
pub mod domains;
pub mod error;
pub mod exec;
pub mod green;
pub mod mc;
pub mod metrics;
pub mod probes;

pub use error::{Error, Result};
