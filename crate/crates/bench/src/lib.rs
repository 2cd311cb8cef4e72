//! Deterministic inputs shared by the benchmarks.

use fermicoh::coherent::CoherentParam;
use fermicoh::decomposition::GroupWord;
use fermicoh::sample;

const SEED: u64 = 0x5eed;

/// `count` coherent-state points with `n` modes.
pub fn params(n: usize, count: usize) -> Vec<CoherentParam> {
    let mut rng = sample::trial_rng(SEED, n as u64);
    (0..count).map(|_| sample::pair_linear(&mut rng, n, 1.5, 1.0)).collect()
}

/// A pair of points whose kernel sits on a singular crossing.
pub fn singular_pair(n: usize) -> (CoherentParam, CoherentParam) {
    let mut rng = sample::trial_rng(SEED, 1000 + n as u64);
    let (p1, p2, _) = fermicoh::verify::singular_pair(&mut rng, n, true);
    (p1, p2)
}

pub fn word(n: usize, len: usize) -> GroupWord {
    let mut rng = sample::trial_rng(SEED, 2000 + n as u64);
    sample::group_word(&mut rng, n, len, 0.4)
}
