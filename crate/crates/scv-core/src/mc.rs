//! Deterministic Monte Carlo volume estimation.
//!
//! Every estimate is a hit-count over points drawn uniformly from a
//! bounding box.  Reproducibility contract: the stream of sample points is
//! a pure function of `(seed, block index)` — block `b` draws from
//! `ChaCha8` stream `b` of the seed — so an estimate depends only on
//! `(seed, n_samples, box, predicate)`, never on thread scheduling or the
//! `parallel` feature.  Hit counts are exact integers, so the parallel sum
//! is bit-identical to the sequential one.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domains::Box2n;
use crate::error::{Error, Result};
use crate::exec;

/// Monte Carlo estimate of a `2n`-dimensional Lebesgue volume.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeEstimate {
    /// Point estimate `box_volume * hits / n_samples`.
    pub mean: f64,
    /// One-sigma standard error of `mean` (binomial model).
    pub std_error: f64,
    /// Number of sample points drawn.
    pub n_samples: u64,
    /// Seed the estimate was drawn under.
    pub seed: u64,
    /// Volume of the sampling box.
    pub box_volume: f64,
    /// Raw hit count (exact; the parallel and sequential drivers agree).
    pub hits: u64,
}

/// RNG for one sample block: `ChaCha8` keyed by the seed, on stream `block`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Mixes a purpose tag into a seed so that nested estimates (for example
/// the per-point volumes of a scan) draw from disjoint streams.  SplitMix64
/// finalizer; stable across platforms.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut x = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Draws the next uniform point of the box.  The draw order (per sample:
/// coordinate by coordinate, real part then imaginary part) is part of the
/// determinism contract.
fn draw_point(rng: &mut ChaCha8Rng, sample_box: &Box2n, out: &mut [Complex64]) {
    for (j, slot) in out.iter_mut().enumerate() {
        let c = sample_box.centers[j];
        let h = sample_box.half_widths[j];
        let re: f64 = rng.gen::<f64>();
        let im: f64 = rng.gen::<f64>();
        *slot = Complex64::new(c.re + h * (2.0 * re - 1.0), c.im + h * (2.0 * im - 1.0));
    }
}

/// Estimates the volume of `{ z in box : hit(z) }` from `n_samples` uniform
/// draws.  Runs block-parallel when the `parallel` feature is enabled.
pub fn volume<F>(sample_box: &Box2n, hit: F, n_samples: u64, seed: u64) -> Result<VolumeEstimate>
where
    F: Fn(&[Complex64]) -> bool + Send + Sync,
{
    volume_with_driver(sample_box, hit, n_samples, seed, false)
}

/// Same estimate on the always-sequential driver.  Exists so benches and
/// tests can compare drivers; results are bit-identical to [`volume`].
pub fn volume_seq<F>(
    sample_box: &Box2n,
    hit: F,
    n_samples: u64,
    seed: u64,
) -> Result<VolumeEstimate>
where
    F: Fn(&[Complex64]) -> bool + Send + Sync,
{
    volume_with_driver(sample_box, hit, n_samples, seed, true)
}

fn volume_with_driver<F>(
    sample_box: &Box2n,
    hit: F,
    n_samples: u64,
    seed: u64,
    force_sequential: bool,
) -> Result<VolumeEstimate>
where
    F: Fn(&[Complex64]) -> bool + Send + Sync,
{
    if n_samples == 0 {
        return Err(Error::InvalidInput("n_samples must be positive".into()));
    }
    let dim = sample_box.dim();
    let blocks = exec::block_count(n_samples);
    let work = |b: u64| {
        let (start, end) = exec::block_range(b, n_samples);
        let mut rng = block_rng(seed, b);
        let mut z = vec![Complex64::new(0.0, 0.0); dim];
        let mut count = 0u64;
        for _ in start..end {
            draw_point(&mut rng, sample_box, &mut z);
            if hit(&z) {
                count += 1;
            }
        }
        count
    };
    let hits = if force_sequential {
        exec::sum_blocks_seq(blocks, work)
    } else {
        exec::sum_blocks(blocks, work)
    };
    let n = n_samples as f64;
    let p = hits as f64 / n;
    let bv = sample_box.volume();
    Ok(VolumeEstimate {
        mean: bv * p,
        std_error: bv * (p * (1.0 - p) / n).sqrt(),
        n_samples,
        seed,
        box_volume: bv,
        hits,
    })
}
