//! Key embedding, harmonic sealing, and blind extraction/verification.
//!
//! Embedding writes the message digest as magnitude levels into sub-300 Hz
//! bins of both channels (the second copy starting at the middle of the
//! band), so extraction needs no reference signal. Sealing swaps pairs of
//! near-ultrasonic coefficients in disjoint multi-stage transpositions; the
//! swap set is its own inverse, so unsealing is the same operation.

use crate::config::{Config, BAND_LIMIT_HZ, MID_BAND_HZ, SwapConfig};
use crate::digest::{self, PAIR_COUNT};
use crate::metrics;
use crate::spectral::{self, SpectralError, Spectrum};
use crate::wav::SampledSignal;
use num_complex::Complex;
use serde::Serialize;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuthError {
    #[error("signal too short: {0}")]
    SignalTooShort(String),
    #[error("Nyquist too low: {0}")]
    NyquistTooLow(String),
    #[error("swap schedule overlap: {0}")]
    ScheduleOverlap(String),
    #[error("invalid parameter: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Placement of the 64 two-bit code symbols in each channel's spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbedLayout {
    /// Channel-0 coded bins, `base_bin + i·stride`.
    pub primary_bins: Vec<usize>,
    /// Channel-1 coded bins, `mid_bin + i·stride`.
    pub secondary_bins: Vec<usize>,
    pub base_bin: usize,
    pub stride: usize,
    pub mid_bin: usize,
    /// Level amplitude A.
    pub scale: f64,
    /// Bin of the 300 Hz band edge; no coded bin may exceed it.
    pub band_limit_bin: usize,
}

impl EmbedLayout {
    fn check_fits(&self, frames: usize) -> Result<(), AuthError> {
        let half = frames.div_ceil(2);
        let max_bin = self
            .primary_bins
            .iter()
            .chain(&self.secondary_bins)
            .copied()
            .max()
            .unwrap_or(0);
        if max_bin >= half {
            return Err(AuthError::SignalTooShort(format!(
                "coded bin {max_bin} outside the nonnegative-frequency half of {frames} frames"
            )));
        }
        Ok(())
    }
}

/// Plans the default layout: base bin 1, stride 2, second copy from the bin
/// of 150 Hz.
pub fn plan_layout(
    n_samples: usize,
    sample_rate: u32,
    scale: f64,
) -> Result<EmbedLayout, AuthError> {
    plan_layout_with(n_samples, sample_rate, scale, 1, 2, None)
}

/// Plans a layout from explicit parameters. `mid_bin = None` derives the bin
/// of 150 Hz for this signal length.
pub fn plan_layout_with(
    n_samples: usize,
    sample_rate: u32,
    scale: f64,
    base_bin: usize,
    stride: usize,
    mid_bin: Option<usize>,
) -> Result<EmbedLayout, AuthError> {
    if scale <= 0.0 || !scale.is_finite() {
        return Err(AuthError::InvalidConfig(format!(
            "level scale must be positive, got {scale}"
        )));
    }
    if base_bin < 1 {
        return Err(AuthError::InvalidConfig(
            "base bin 0 would target the DC component".into(),
        ));
    }
    if stride < 1 {
        return Err(AuthError::InvalidConfig("stride must be at least 1".into()));
    }
    let band_limit_bin =
        spectral::bin_for_hz(BAND_LIMIT_HZ, sample_rate, n_samples).map_err(|_| {
            AuthError::SignalTooShort(format!(
                "sample rate {sample_rate} Hz cannot host a {BAND_LIMIT_HZ} Hz embedding band"
            ))
        })?;
    let mid_bin = match mid_bin {
        Some(0) => {
            return Err(AuthError::InvalidConfig(
                "mid bin 0 would target the DC component".into(),
            ))
        }
        Some(m) => m,
        None => spectral::bin_for_hz(MID_BAND_HZ, sample_rate, n_samples)
            .expect("mid band below the band limit")
            .max(1),
    };

    let span = (PAIR_COUNT - 1) * stride;
    let last_primary = base_bin + span;
    let last_secondary = mid_bin + span;
    if last_primary > band_limit_bin || last_secondary > band_limit_bin {
        return Err(AuthError::SignalTooShort(format!(
            "{n_samples} frames at {sample_rate} Hz leave only {band_limit_bin} bins below \
             {BAND_LIMIT_HZ} Hz; the code needs bins up to {}",
            last_primary.max(last_secondary)
        )));
    }

    let layout = EmbedLayout {
        primary_bins: (0..PAIR_COUNT).map(|i| base_bin + i * stride).collect(),
        secondary_bins: (0..PAIR_COUNT).map(|i| mid_bin + i * stride).collect(),
        base_bin,
        stride,
        mid_bin,
        scale,
        band_limit_bin,
    };
    layout.check_fits(n_samples)?;
    Ok(layout)
}

/// Plans a layout using the values from a configuration document.
pub fn plan_layout_from_config(
    n_samples: usize,
    sample_rate: u32,
    cfg: &Config,
) -> Result<EmbedLayout, AuthError> {
    plan_layout_with(
        n_samples,
        sample_rate,
        cfg.effective_scale(),
        cfg.base_bin,
        cfg.stride,
        cfg.mid_bin,
    )
}

/// Disjoint pairwise swap plan over near-ultrasonic bins.
///
/// Stage s pairs bins `(n0 + o_s + 2jx, n0 + o_s + (2j+1)x)` for
/// `j = 0..pair_count`, every index below the Nyquist bin. Disjointness of
/// all transpositions is enforced at construction, which is what makes the
/// seal an involution.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapSchedule {
    pub origin_bin: usize,
    pub half_wavelength: usize,
    pub stage_offsets: Vec<usize>,
    pub stage_pair_counts: Vec<usize>,
    /// Reserved amplitude bound from the configuration; unused.
    pub amplitude_bound: Option<f64>,
    pub n_samples: usize,
}

impl SwapSchedule {
    pub fn plan(
        n_samples: usize,
        sample_rate: u32,
        cfg: &SwapConfig,
    ) -> Result<Self, AuthError> {
        if cfg.half_wavelength_x < 1 {
            return Err(AuthError::InvalidConfig(
                "half wavelength x must be at least 1".into(),
            ));
        }
        let origin_bin =
            spectral::bin_for_hz(cfg.origin_hz, sample_rate, n_samples).map_err(|_| {
                AuthError::NyquistTooLow(format!(
                    "sample rate {sample_rate} Hz puts {} Hz beyond Nyquist",
                    cfg.origin_hz
                ))
            })?;
        let half = n_samples.div_ceil(2);
        if origin_bin >= half {
            return Err(AuthError::NyquistTooLow(format!(
                "origin bin {origin_bin} is not below the Nyquist bin of {n_samples} frames"
            )));
        }

        let x = cfg.half_wavelength_x;
        let stage_pair_counts: Vec<usize> = cfg
            .stage_offsets
            .iter()
            .map(|&offset| {
                let start = origin_bin + offset;
                if start + x >= half {
                    0
                } else {
                    (half - 1 - start - x) / (2 * x) + 1
                }
            })
            .collect();

        let schedule = Self {
            origin_bin,
            half_wavelength: x,
            stage_offsets: cfg.stage_offsets.clone(),
            stage_pair_counts,
            amplitude_bound: cfg.tau,
            n_samples,
        };

        let mut seen = HashSet::new();
        for (i, j) in schedule.pairs() {
            for bin in [i, j] {
                if !seen.insert(bin) {
                    return Err(AuthError::ScheduleOverlap(format!(
                        "bin {bin} participates in more than one swap"
                    )));
                }
            }
        }
        Ok(schedule)
    }

    /// All transpositions, in stage order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let x = self.half_wavelength;
        self.stage_offsets
            .iter()
            .zip(&self.stage_pair_counts)
            .flat_map(|(&offset, &count)| {
                let start = self.origin_bin + offset;
                (0..count).map(move |j| (start + 2 * j * x, start + (2 * j + 1) * x))
            })
            .collect()
    }
}

/// Embeds `md5(message)` as magnitude levels at the layout's coded bins of
/// both channels, zeroing whatever the bins held, and resynthesizes.
pub fn embed_key(
    signal: &SampledSignal,
    message: &[u8],
    layout: &EmbedLayout,
) -> Result<SampledSignal, AuthError> {
    layout.check_fits(signal.frames())?;
    let pairs = digest::digest_to_pairs(&digest::md5(message));
    let mut spectrum = Spectrum::analyze(&signal.channels, signal.sample_rate)?;
    for (bins, targets) in spectrum
        .bins
        .iter_mut()
        .zip([&layout.primary_bins, &layout.secondary_bins])
    {
        for (&bin, &pair) in targets.iter().zip(pairs.iter()) {
            bins[bin] = Complex::new(digest::pair_to_level(pair, layout.scale), 0.0);
        }
        spectral::enforce_hermitian(bins);
    }
    Ok(signal.with_channels(spectrum.synthesize()?))
}

/// Swaps each scheduled coefficient pair in both channels and resynthesizes.
/// Applying it twice restores the input (up to transform round-off).
pub fn seal(signal: &SampledSignal, schedule: &SwapSchedule) -> Result<SampledSignal, AuthError> {
    if schedule.n_samples != signal.frames() {
        return Err(AuthError::InvalidConfig(format!(
            "schedule planned for {} frames applied to {}",
            schedule.n_samples,
            signal.frames()
        )));
    }
    let mut spectrum = Spectrum::analyze(&signal.channels, signal.sample_rate)?;
    for bins in &mut spectrum.bins {
        for (i, j) in schedule.pairs() {
            bins.swap(i, j);
        }
        spectral::enforce_hermitian(bins);
    }
    Ok(signal.with_channels(spectrum.synthesize()?))
}

/// Reverses [`seal`]. The transposition set is its own inverse; this alias
/// keeps intent explicit in pipelines and reports.
pub fn unseal(signal: &SampledSignal, schedule: &SwapSchedule) -> Result<SampledSignal, AuthError> {
    seal(signal, schedule)
}

/// Digest copies read back from a signal's coded bins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedKey {
    pub primary: [u8; 16],
    pub secondary: [u8; 16],
}

impl ExtractedKey {
    pub fn hex_primary(&self) -> String {
        digest::digest_hex(&self.primary)
    }

    pub fn hex_secondary(&self) -> String {
        digest::digest_hex(&self.secondary)
    }

    pub fn copies_agree(&self) -> bool {
        self.primary == self.secondary
    }
}

/// Blind decode: reads the real part of each coded bin per channel and
/// reassembles both digest copies by nearest-level decoding.
pub fn extract_key(
    signal: &SampledSignal,
    layout: &EmbedLayout,
) -> Result<ExtractedKey, AuthError> {
    layout.check_fits(signal.frames())?;
    let spectrum = Spectrum::analyze(&signal.channels, signal.sample_rate)?;
    let mut copies = [[0u8; 16]; 2];
    for (copy, (bins, targets)) in copies.iter_mut().zip(
        spectrum
            .bins
            .iter()
            .zip([&layout.primary_bins, &layout.secondary_bins]),
    ) {
        let mut pairs = [0u8; PAIR_COUNT];
        for (pair, &bin) in pairs.iter_mut().zip(targets.iter()) {
            *pair = digest::level_to_pair(bins[bin].re, layout.scale);
        }
        *copy = digest::pairs_to_digest(&pairs);
    }
    Ok(ExtractedKey {
        primary: copies[0],
        secondary: copies[1],
    })
}

/// Outcome of comparing a signal's embedded digest against a claimed message.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub extracted_hex_primary: String,
    pub extracted_hex_secondary: String,
    pub copies_agree: bool,
    pub expected_hex: String,
    /// True when the primary copy equals the claimed digest and both copies
    /// agree.
    #[serde(rename = "match")]
    pub matches: bool,
    /// Fraction of the 128 digest bits the primary copy got wrong.
    pub ber: f64,
}

/// Extracts both digest copies and checks them against `md5(claimed_message)`.
pub fn verify(
    signal: &SampledSignal,
    claimed_message: &[u8],
    layout: &EmbedLayout,
) -> Result<VerificationReport, AuthError> {
    let extracted = extract_key(signal, layout)?;
    let expected = digest::md5(claimed_message);
    let copies_agree = extracted.copies_agree();
    let matches = extracted.primary == expected && copies_agree;
    let ber = metrics::ber(&expected, &extracted.primary).expect("equal digest lengths");
    Ok(VerificationReport {
        extracted_hex_primary: extracted.hex_primary(),
        extracted_hex_secondary: extracted.hex_secondary(),
        copies_agree,
        expected_hex: digest::digest_hex(&expected),
        matches,
        ber,
    })
}
