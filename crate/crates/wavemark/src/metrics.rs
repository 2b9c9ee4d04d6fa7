//! Distortion and similarity metrics between an original and a modified
//! signal, plus the SNR-based quality score and its rating labels.
//!
//! The two stereo signals are interleaved into single sequences x, y for the
//! global figures; a per-channel breakdown is computed alongside. Normalized
//! metrics whose reference denominator vanishes are reported as undefined
//! (`None`) rather than failing.

use crate::wav::SampledSignal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("length mismatch: {expected} vs {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("quality score undefined: denominator {denominator} is not positive")]
    DomainError { denominator: f64 },
}

/// Flat bundle of distortion figures.
///
/// `snr_db`/`psnr_db` are `+inf` for identical inputs; undefined values
/// (degenerate reference) are `None`. Note that serde_json renders both
/// non-finite numbers and `None` as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    /// Maximum absolute difference.
    pub md: f64,
    /// Average absolute difference.
    pub ad: f64,
    /// Normalized average absolute difference: Σ|x−y| / Σ|x|.
    pub nad: Option<f64>,
    /// Mean square error.
    pub mse: f64,
    /// Normalized mean square error: Σ(x−y)² / Σx².
    pub nmse: Option<f64>,
    /// 10·log10(Σx² / Σ(x−y)²).
    pub snr_db: Option<f64>,
    /// 10·log10(L·max(x²) / Σ(x−y)²), reference-peak convention.
    pub psnr_db: Option<f64>,
    /// Normalized cross-correlation: Σxy / Σx².
    pub nc: Option<f64>,
    /// Correlation quality: Σxy / Σx.
    pub qc: Option<f64>,
    /// Bit error rate, filled by verification flows.
    pub ber: Option<f64>,
    /// Quality score, filled when an SNR and constant are available.
    pub mos: Option<f64>,
}

/// Global plus per-channel distortion between two stereo signals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalDistortion {
    pub overall: DistortionReport,
    pub channels: Vec<DistortionReport>,
}

/// Distortion metrics over two interleaved sample sequences.
pub fn distortion(x: &[f64], y: &[f64]) -> Result<DistortionReport, MetricsError> {
    if x.len() != y.len() {
        return Err(MetricsError::LengthMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let len = x.len() as f64;

    let mut max_abs_diff = 0.0f64;
    let mut sum_abs_diff = 0.0f64;
    let mut sum_sq_diff = 0.0f64;
    let mut sum_abs_x = 0.0f64;
    let mut sum_x = 0.0f64;
    let mut sum_sq_x = 0.0f64;
    let mut sum_xy = 0.0f64;
    let mut peak_sq_x = 0.0f64;
    for (&xv, &yv) in x.iter().zip(y) {
        let d = xv - yv;
        max_abs_diff = max_abs_diff.max(d.abs());
        sum_abs_diff += d.abs();
        sum_sq_diff += d * d;
        sum_abs_x += xv.abs();
        sum_x += xv;
        sum_sq_x += xv * xv;
        sum_xy += xv * yv;
        peak_sq_x = peak_sq_x.max(xv * xv);
    }

    let qc = (sum_x != 0.0).then(|| sum_xy / sum_x);
    if sum_sq_diff == 0.0 {
        // Identical inputs: every distortion is zero and both ratios are
        // infinite regardless of the reference energy.
        return Ok(DistortionReport {
            md: 0.0,
            ad: 0.0,
            nad: Some(0.0),
            mse: 0.0,
            nmse: Some(0.0),
            snr_db: Some(f64::INFINITY),
            psnr_db: Some(f64::INFINITY),
            nc: Some(1.0),
            qc,
            ber: None,
            mos: None,
        });
    }

    Ok(DistortionReport {
        md: max_abs_diff,
        ad: sum_abs_diff / len,
        nad: (sum_abs_x > 0.0).then(|| sum_abs_diff / sum_abs_x),
        mse: sum_sq_diff / len,
        nmse: (sum_sq_x > 0.0).then(|| sum_sq_diff / sum_sq_x),
        snr_db: (sum_sq_x > 0.0).then(|| 10.0 * (sum_sq_x / sum_sq_diff).log10()),
        psnr_db: (peak_sq_x > 0.0).then(|| 10.0 * (len * peak_sq_x / sum_sq_diff).log10()),
        nc: (sum_sq_x > 0.0).then(|| sum_xy / sum_sq_x),
        qc,
        ber: None,
        mos: None,
    })
}

/// Global (interleaved) and per-channel distortion between stereo signals.
pub fn signal_distortion(
    original: &SampledSignal,
    modified: &SampledSignal,
) -> Result<SignalDistortion, MetricsError> {
    if original.frames() != modified.frames() {
        return Err(MetricsError::LengthMismatch {
            expected: 2 * original.frames(),
            got: 2 * modified.frames(),
        });
    }
    let interleave = |s: &SampledSignal| -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * s.frames());
        for i in 0..s.frames() {
            out.push(s.channels[0][i]);
            out.push(s.channels[1][i]);
        }
        out
    };
    let overall = distortion(&interleave(original), &interleave(modified))?;
    let channels = (0..2)
        .map(|c| distortion(&original.channels[c], &modified.channels[c]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SignalDistortion { overall, channels })
}

/// Bit error rate between two equal-length byte strings, counted bitwise.
pub fn ber(expected: &[u8], extracted: &[u8]) -> Result<f64, MetricsError> {
    if expected.len() != extracted.len() {
        return Err(MetricsError::LengthMismatch {
            expected: expected.len() * 8,
            got: extracted.len() * 8,
        });
    }
    if expected.is_empty() {
        return Ok(0.0);
    }
    let wrong: u32 = expected
        .iter()
        .zip(extracted)
        .map(|(a, b)| (a ^ b).count_ones())
        .sum();
    Ok(wrong as f64 / (8 * expected.len()) as f64)
}

/// Quality score `5 / (1 + n_const · snr_db)`.
pub fn mos(snr_db: f64, n_const: f64) -> Result<f64, MetricsError> {
    let denominator = 1.0 + n_const * snr_db;
    if denominator <= 0.0 {
        return Err(MetricsError::DomainError { denominator });
    }
    Ok(5.0 / denominator)
}

/// Impairment / quality label for a rounded score on the 1–5 scale.
pub fn rating_label(score: f64) -> &'static str {
    match score.round().clamp(1.0, 5.0) as u8 {
        5 => "Imperceptible / Excellent",
        4 => "Perceptible, not annoying / Good",
        3 => "Slightly annoying / Fair",
        2 => "Annoying / Poor",
        _ => "Very annoying / Bad",
    }
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    // Separate obvious loops, kept as the reference route.
    fn reference_metrics(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64, f64) {
        let n = x.len() as f64;
        let mut md = 0.0f64;
        for i in 0..x.len() {
            md = md.max((x[i] - y[i]).abs());
        }
        let mut ad = 0.0;
        for i in 0..x.len() {
            ad += (x[i] - y[i]).abs();
        }
        ad /= n;
        let mut mse = 0.0;
        for i in 0..x.len() {
            mse += (x[i] - y[i]) * (x[i] - y[i]);
        }
        mse /= n;
        let mut sx2 = 0.0;
        for v in x {
            sx2 += v * v;
        }
        let mut sxy = 0.0;
        for i in 0..x.len() {
            sxy += x[i] * y[i];
        }
        (md, ad, mse, sx2, sxy)
    }

    proptest! {
        /// One-pass metrics agree with the loop-by-loop reference.
        #[test]
        fn matches_reference_loops(
            pairs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..500),
        ) {
            let x: Vec<f64> = pairs.iter().map(|&(a, _)| a).collect();
            let y: Vec<f64> = pairs.iter().map(|&(_, b)| b).collect();
            let r = distortion(&x, &y).unwrap();
            let (md, ad, mse, sx2, sxy) = reference_metrics(&x, &y);
            prop_assert!((r.md - md).abs() <= 1e-12 * md.max(1.0));
            prop_assert!((r.ad - ad).abs() <= 1e-12 * ad.max(1.0));
            prop_assert!((r.mse - mse).abs() <= 1e-12 * mse.max(1.0));
            if sx2 > 0.0 && mse > 0.0 {
                let nc = sxy / sx2;
                prop_assert!((r.nc.unwrap() - nc).abs() <= 1e-12 * nc.abs().max(1.0));
            }
        }

        /// mse scales quadratically; nad, nmse, and snr are invariant under
        /// joint scaling.
        #[test]
        fn scale_covariance(
            pairs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..200),
            a in 0.01f64..100.0,
        ) {
            let x: Vec<f64> = pairs.iter().map(|&(v, _)| v).collect();
            let y: Vec<f64> = pairs.iter().map(|&(_, v)| v).collect();
            let xs: Vec<f64> = x.iter().map(|v| a * v).collect();
            let ys: Vec<f64> = y.iter().map(|v| a * v).collect();
            let base = distortion(&x, &y).unwrap();
            let scaled = distortion(&xs, &ys).unwrap();
            prop_assert!((scaled.mse - a * a * base.mse).abs() <= 1e-9 * (a * a * base.mse).max(1e-30));
            if let (Some(b), Some(s)) = (base.nad, scaled.nad) {
                prop_assert!((b - s).abs() <= 1e-9 * b.abs().max(1e-30));
            }
            if let (Some(b), Some(s)) = (base.nmse, scaled.nmse) {
                prop_assert!((b - s).abs() <= 1e-9 * b.abs().max(1e-30));
            }
            if let (Some(b), Some(s)) = (base.snr_db, scaled.snr_db) {
                if b.is_finite() {
                    prop_assert!((b - s).abs() <= 1e-9 * b.abs().max(1.0));
                }
            }
        }

        /// Peak power dominates mean power, so psnr is never below snr.
        #[test]
        fn psnr_dominates_snr(
            pairs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..300),
        ) {
            let x: Vec<f64> = pairs.iter().map(|&(v, _)| v).collect();
            let y: Vec<f64> = pairs.iter().map(|&(_, v)| v).collect();
            let r = distortion(&x, &y).unwrap();
            if let (Some(snr), Some(psnr)) = (r.snr_db, r.psnr_db) {
                if snr.is_finite() && psnr.is_finite() {
                    prop_assert!(psnr >= snr - 1e-12);
                }
            }
        }
    }
}
