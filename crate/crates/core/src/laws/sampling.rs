use rand::seq::index;
use rand::Rng;

use crate::chip_core::ChipConfig;

/// Heights uniform on `[0, 2n - 1]`.
pub fn random_preconfined<R: Rng>(n: usize, rng: &mut R) -> ChipConfig {
    let top = 2 * n as u64 - 1;
    ChipConfig::new((0..n).map(|_| rng.gen_range(0..=top)).collect()).expect("n >= 1")
}

/// Heights in a window `[lo, lo + n - 1]` capped at `2n - 1`.
pub fn random_confined<R: Rng>(n: usize, rng: &mut R) -> ChipConfig {
    let n64 = n as u64;
    let lo = rng.gen_range(0..=n64);
    let hi = (lo + n64 - 1).min(2 * n64 - 1);
    ChipConfig::new((0..n).map(|_| rng.gen_range(lo..=hi)).collect()).expect("n >= 1")
}

/// Heights uniform on `[0, 4n]`, often far from confined.
pub fn random_general<R: Rng>(n: usize, rng: &mut R) -> ChipConfig {
    let top = 4 * n as u64;
    ChipConfig::new((0..n).map(|_| rng.gen_range(0..=top)).collect()).expect("n >= 1")
}

/// Total chips uniform on `[0, n²]`, spread as a random composition, so
/// every activity in `[0, 1]` occurs.
pub fn random_by_total<R: Rng>(n: usize, rng: &mut R) -> ChipConfig {
    let total = rng.gen_range(0..=(n * n) as u64);
    random_composition(n, total, rng)
}

/// A uniformly random composition of `total` into `n` nonnegative parts
/// (stars and bars).
pub fn random_composition<R: Rng>(n: usize, total: u64, rng: &mut R) -> ChipConfig {
    let slots = total as usize + n - 1;
    let mut bars = index::sample(rng, slots, n - 1).into_vec();
    bars.sort_unstable();
    let mut heights = Vec::with_capacity(n);
    let mut prev = 0usize;
    for b in bars {
        heights.push((b - prev) as u64);
        prev = b + 1;
    }
    heights.push((slots - prev) as u64);
    ChipConfig::new(heights).expect("n >= 1")
}
