#![allow(dead_code)]

use cesnet_core::Economy;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random economy with `n` sectors whose columns keep a primary share of at
/// least `min_primary` and a sparse-ish nonnegative input-output block.
pub fn random_economy<R: Rng>(rng: &mut R, n: usize, gamma: &[f64], min_primary: f64) -> Economy {
    let labels = (0..n).map(|i| format!("s{i}")).collect();
    let mut a = DMatrix::zeros(n, n);
    let mut a0 = vec![0.0; n];
    for j in 0..n {
        let raw: Vec<f64> = (0..=n)
            .map(|_| {
                if rng.random::<f64>() < 0.3 {
                    0.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        let inter: f64 = raw[1..].iter().sum();
        let budget = (1.0 - min_primary) * rng.random::<f64>();
        for i in 0..n {
            a[(i, j)] = if inter > 0.0 {
                raw[i + 1] / inter * budget
            } else {
                0.0
            };
        }
        a0[j] = 1.0 - a.column(j).sum();
    }
    Economy::new(labels, a0, a, gamma.to_vec()).unwrap()
}

pub fn random_gammas<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
