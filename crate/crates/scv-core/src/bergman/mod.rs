//! Bergman-space machinery: monomial moments and the kernel family built
//! on them.

pub mod kernel;
pub mod moments;

pub use kernel::{
    bergman_metric, kernel, kernel_best, kernel_closed, kernel_h, kernel_h_balanced,
    kernel_h_on_sublevel, kernel_k, kernel_on_sublevel, KernelResult,
};
pub use moments::{moment, MethodTag, Moment, MomentTable};
