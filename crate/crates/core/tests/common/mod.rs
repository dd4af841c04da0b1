#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

/// Central difference of `f` at `x` with step `h`, one coordinate at a time.
pub fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Cost values written out directly, independent of the library.
pub fn neg_entropy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v.ln()).sum()
}

pub fn modified_entropy(x: &[f64]) -> f64 {
    let c = (-1.0f64).exp();
    x.iter()
        .map(|v| (v.abs() + c) * (v.abs() + c).ln() + c)
        .sum()
}

pub fn sq_l2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn tv(x: &[f64]) -> f64 {
    x.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Smallest slack `f(y) − f(x) − g·(y − x)` over `probes` random points.
pub fn min_subgradient_slack(
    f: impl Fn(&[f64]) -> f64,
    x: &[f64],
    g: &[f64],
    rng: &mut impl Rng,
    probes: usize,
) -> f64 {
    (0..probes)
        .map(|_| {
            let y: Vec<f64> = x.iter().map(|v| v + rng.gen_range(-3.0..3.0)).collect();
            let step: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
            f(&y) - f(x) - dot(g, &step)
        })
        .fold(f64::INFINITY, f64::min)
}
