//! Shared helpers for the integration suites.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use wavemark::SampledSignal;

/// Direct O(N^2) evaluation of the transform's defining sum. This is the
/// reference route; it must stay independent of the library implementation.
pub fn naive_dft(samples: &[f64]) -> Vec<Complex<f64>> {
    let n = samples.len();
    (0..n)
        .map(|k| {
            let mut acc = Complex::new(0.0, 0.0);
            for (t, &s) in samples.iter().enumerate() {
                let angle = -2.0 * PI * (k as f64) * (t as f64) / (n as f64);
                acc += s * Complex::new(angle.cos(), angle.sin());
            }
            acc
        })
        .collect()
}

/// Direct O(N^2) inverse: `s_t = (1/N) Σ_k C_k e^(+i2πkt/N)`, real part.
pub fn naive_idft(bins: &[Complex<f64>]) -> Vec<f64> {
    let n = bins.len();
    (0..n)
        .map(|t| {
            let mut acc = Complex::new(0.0, 0.0);
            for (k, c) in bins.iter().enumerate() {
                let angle = 2.0 * PI * (k as f64) * (t as f64) / (n as f64);
                acc += c * Complex::new(angle.cos(), angle.sin());
            }
            acc.re / n as f64
        })
        .collect()
}

pub fn random_signal(seed: u64, frames: usize, amplitude: f64, sample_rate: u32) -> SampledSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut channel = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..frames)
            .map(|_| rng.random_range(-amplitude..amplitude))
            .collect()
    };
    SampledSignal::new(channel(&mut rng), channel(&mut rng), sample_rate)
}

pub fn max_sample_difference(a: &SampledSignal, b: &SampledSignal) -> f64 {
    let mut worst = 0.0f64;
    for ch in 0..2 {
        for (x, y) in a.channels[ch].iter().zip(&b.channels[ch]) {
            worst = worst.max((x - y).abs());
        }
    }
    worst
}
