//! Block-parallel execution with a sequential fallback.
//!
//! Work is split into fixed-size blocks indexed `0..n_blocks`; each block is
//! processed independently and the per-block results are summed.  With the
//! `parallel` feature (default) blocks are distributed over the rayon pool;
//! without it they run in a plain loop.  Because a block's result depends
//! only on its index — never on which worker ran it or in what order — the
//! two drivers produce bit-identical sums for integer payloads, and the
//! worker count never changes a result.

/// Samples per block.  Aligning blocks to a fixed width keeps the RNG
/// stream assignment stable when the total sample count changes.
pub const BLOCK_WIDTH: u64 = 8192;

/// Number of blocks covering `n` items.
pub fn block_count(n: u64) -> u64 {
    n.div_ceil(BLOCK_WIDTH)
}

/// Half-open item range `[start, end)` of block `b` when `n` items total.
pub fn block_range(b: u64, n: u64) -> (u64, u64) {
    let start = b * BLOCK_WIDTH;
    let end = (start + BLOCK_WIDTH).min(n);
    (start, end)
}

/// Sums `f(b)` over `b in 0..blocks` using the configured driver.
#[cfg(feature = "parallel")]
pub fn sum_blocks<F>(blocks: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Send + Sync,
{
    use rayon::prelude::*;
    (0..blocks).into_par_iter().map(f).sum()
}

/// Sums `f(b)` over `b in 0..blocks` using the configured driver.
#[cfg(not(feature = "parallel"))]
pub fn sum_blocks<F>(blocks: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Send + Sync,
{
    (0..blocks).map(f).sum()
}

/// Always-sequential driver, kept available for benchmarking the parallel
/// speedup and for asserting driver equivalence in tests.
pub fn sum_blocks_seq<F>(blocks: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Send + Sync,
{
    (0..blocks).map(f).sum()
}
