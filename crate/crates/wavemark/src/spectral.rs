//! Discrete Fourier analysis and synthesis with explicit real-signal
//! (Hermitian) bookkeeping.
//!
//! The convention is fixed globally: the forward transform is the
//! unnormalized sum `C_k = Σ_t s_t · e^(-i2πkt/N)` and the inverse carries
//! the `1/N` factor. Any length N is supported; correctness is defined by
//! the sum, not by a power-of-two constraint.

use num_complex::Complex;
use rustfft::FftPlanner;
use std::cell::RefCell;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("empty input")]
    EmptyInput,
    #[error("frequency {frequency} Hz outside [0, {nyquist}] Hz")]
    OutOfNyquistRange { frequency: f64, nyquist: f64 },
    #[error("non-Hermitian input: imaginary residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NonHermitianInput { residual: f64, tolerance: f64 },
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Forward transform: bin k holds `Σ_t s_t · e^(-i2πkt/N)`.
pub fn forward(samples: &[f64]) -> Result<Vec<Complex<f64>>, SpectralError> {
    if samples.is_empty() {
        return Err(SpectralError::EmptyInput);
    }
    let mut bins: Vec<Complex<f64>> = samples.iter().map(|&s| Complex::new(s, 0.0)).collect();
    PLANNER.with(|p| {
        p.borrow_mut().plan_fft_forward(bins.len()).process(&mut bins);
    });
    Ok(bins)
}

/// Inverse transform: `s_t = (1/N) Σ_k C_k · e^(+i2πkt/N)`, with the
/// imaginary residual discarded once it is below `1e-9 · max|C|`.
///
/// Errors with [`SpectralError::NonHermitianInput`] when the residual
/// exceeds that tolerance, which happens when bins were mutated without
/// restoring conjugate symmetry.
pub fn inverse(bins: &[Complex<f64>]) -> Result<Vec<f64>, SpectralError> {
    if bins.is_empty() {
        return Err(SpectralError::EmptyInput);
    }
    let n = bins.len() as f64;
    let max_mag = bins.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let tolerance = 1e-9 * max_mag;

    let mut values = bins.to_vec();
    PLANNER.with(|p| {
        p.borrow_mut()
            .plan_fft_inverse(values.len())
            .process(&mut values);
    });

    let residual = values.iter().map(|v| v.im.abs()).fold(0.0f64, f64::max) / n;
    if residual > tolerance {
        return Err(SpectralError::NonHermitianInput {
            residual,
            tolerance,
        });
    }
    Ok(values.iter().map(|v| v.re / n).collect())
}

/// The nonnegative-frequency bin whose center is nearest `frequency`:
/// `round(f·N / sample_rate)`.
pub fn bin_for_hz(
    frequency: f64,
    sample_rate: u32,
    n_samples: usize,
) -> Result<usize, SpectralError> {
    let nyquist = sample_rate as f64 / 2.0;
    if !(0.0..=nyquist).contains(&frequency) {
        return Err(SpectralError::OutOfNyquistRange { frequency, nyquist });
    }
    Ok((frequency * n_samples as f64 / sample_rate as f64).round() as usize)
}

/// Restores conjugate symmetry after bin mutation.
///
/// The nonnegative-frequency half is canonical: every mirror bin `N-k` is
/// set to `conj(C_k)`, and the imaginary parts of `C_0` and (for even N)
/// `C_{N/2}` are zeroed. Idempotent on already-Hermitian spectra.
pub fn enforce_hermitian(bins: &mut [Complex<f64>]) {
    let n = bins.len();
    if n == 0 {
        return;
    }
    bins[0].im = 0.0;
    if n % 2 == 0 {
        bins[n / 2].im = 0.0;
    }
    for k in 1..n.div_ceil(2) {
        bins[n - k] = bins[k].conj();
    }
}

/// Per-channel spectra of a stereo signal, with the originating length and
/// rate kept for bin/frequency mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub bins: [Vec<Complex<f64>>; 2],
    pub n_samples: usize,
    pub sample_rate: u32,
}

impl Spectrum {
    /// Forward-transforms both channels.
    pub fn analyze(channels: &[Vec<f64>; 2], sample_rate: u32) -> Result<Self, SpectralError> {
        Ok(Self {
            bins: [forward(&channels[0])?, forward(&channels[1])?],
            n_samples: channels[0].len(),
            sample_rate,
        })
    }

    /// Inverse-transforms both channels back to time-domain samples.
    pub fn synthesize(&self) -> Result<[Vec<f64>; 2], SpectralError> {
        Ok([inverse(&self.bins[0])?, inverse(&self.bins[1])?])
    }

    pub fn enforce_hermitian(&mut self) {
        for ch in &mut self.bins {
            enforce_hermitian(ch);
        }
    }

    pub fn bin_for_hz(&self, frequency: f64) -> Result<usize, SpectralError> {
        bin_for_hz(frequency, self.sample_rate, self.n_samples)
    }

    /// Cosine-series coefficient `a_n = c_n + c_{-n}` (real for Hermitian
    /// spectra), with `c_{-n}` the wrapped bin `N-n`.
    pub fn cosine_coeff(&self, channel: usize, n: usize) -> Complex<f64> {
        let bins = &self.bins[channel];
        if n == 0 {
            return 2.0 * bins[0];
        }
        bins[n] + bins[bins.len() - n]
    }

    /// Sine-series coefficient `b_n = i(c_n - c_{-n})`.
    pub fn sine_coeff(&self, channel: usize, n: usize) -> Complex<f64> {
        let bins = &self.bins[channel];
        if n == 0 {
            return Complex::new(0.0, 0.0);
        }
        Complex::<f64>::i() * (bins[n] - bins[bins.len() - n])
    }
}
