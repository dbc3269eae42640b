//! Deterministic parallel Monte-Carlo loops.
//!
//! Trial `t` draws from ChaCha8 seeded with `seed` on stream `t`, so a run is
//! a pure function of `(seed, trials)` whatever the thread count. Per-chunk
//! integer counters are summed after the parallel map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const CHUNK: u64 = 64;

/// Random source of trial `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `len` uniform bits for frozen positions, from a stream of `seed` that no
/// trial uses; `tag` separates independent draws.
pub fn frozen_bits(seed: u64, tag: u64, len: usize) -> Vec<u8> {
    let mut rng = trial_rng(seed, u64::MAX - tag);
    (0..len).map(|_| rng.random_range(0..2)).collect()
}

/// Runs `body(state, trial, counts)` for every trial, with one `state` per
/// chunk built by `init`, and returns the summed `width` counters.
pub fn run_trials<S, I, F>(trials: u64, width: usize, init: I, body: F) -> Vec<u64>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, u64, &mut [u64]) + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let partial: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut state = init();
            let mut counts = vec![0u64; width];
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                body(&mut state, t, &mut counts);
            }
            counts
        })
        .collect();
    let mut total = vec![0u64; width];
    for p in partial {
        for (t, c) in total.iter_mut().zip(p) {
            *t += c;
        }
    }
    total
}

/// Wilson score interval for `k` successes in `n` trials at normal quantile
/// `z`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    let lo = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn counts_do_not_depend_on_threads() {
        let body = |_: &mut (), t: u64, c: &mut [u64]| {
            let mut r = trial_rng(9, t);
            c[r.random_range(0..4)] += 1;
        };
        let a = run_trials(1000, 4, || (), body);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| run_trials(1000, 4, || (), body));
        assert_eq!(a, b);
        assert_eq!(a.iter().sum::<u64>(), 1000);
    }

    #[test]
    fn wilson_known_values() {
        let (lo, hi) = wilson_interval(0, 100, Z95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.036995).abs() < 1e-5);
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!((lo - 0.40383).abs() < 1e-4 && (hi - 0.59617).abs() < 1e-4);
    }
}
