//! Runtime configuration: level scale, code layout, swap plan, and the
//! float/pcm16 processing mode.
//!
//! Every field has a default, so an empty JSON object `{}` is a valid
//! configuration. The effective (post-default) values are echoed into every
//! report so results are reproducible from the report alone.

use serde::{Deserialize, Serialize};

/// Level scale used in float mode.
pub const FLOAT_SCALE_DEFAULT: f64 = 1e-4;
/// Level scale used in pcm16 mode. 16-bit quantization adds per-bin spectral
/// noise with magnitude rms ≈ q·sqrt(N/12) (q = 2^-15), about 5.9e-3 at
/// N = 441000; a 0.25 scale keeps the half-step decision margin above 20
/// times that while the per-sample time-domain contribution stays inaudible.
pub const PCM16_SCALE_DEFAULT: f64 = 0.25;
/// Upper edge of the embedding band.
pub const BAND_LIMIT_HZ: f64 = 300.0;
/// Start of the second copy: the middle of the embedding band.
pub const MID_BAND_HZ: f64 = 150.0;
/// First swapped harmonic sits at or above this frequency.
pub const SWAP_ORIGIN_HZ_DEFAULT: f64 = 20_000.0;
/// Default bin stride between swapped partners.
pub const SWAP_HALF_WAVELENGTH_DEFAULT: usize = 10;
/// Default quality-score normalization constant. No normative value exists;
/// this is a demo-friendly choice.
pub const MOS_N_CONST_DEFAULT: f64 = 0.01;

/// Processing mode: selects the default level scale and the output sample
/// format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Float,
    Pcm16,
}

impl Mode {
    pub fn default_scale(self) -> f64 {
        match self {
            Mode::Float => FLOAT_SCALE_DEFAULT,
            Mode::Pcm16 => PCM16_SCALE_DEFAULT,
        }
    }
}

/// Harmonic-swap plan parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwapConfig {
    /// Frequency of the first swapped harmonic.
    pub origin_hz: f64,
    /// Bin stride x between the two members of each pair.
    pub half_wavelength_x: usize,
    /// Per-stage bin offsets from the origin.
    pub stage_offsets: Vec<usize>,
    /// Reserved amplitude bound; carried through configuration and reports
    /// but not used by any operation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
}

impl Default for SwapConfig {
    fn default() -> Self {
        Self {
            origin_hz: SWAP_ORIGIN_HZ_DEFAULT,
            half_wavelength_x: SWAP_HALF_WAVELENGTH_DEFAULT,
            stage_offsets: vec![0, 3, 7],
            tau: None,
        }
    }
}

/// Top-level configuration document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Level scale; `null` selects the per-mode default.
    pub scale: Option<f64>,
    /// First coded bin of the primary copy.
    pub base_bin: usize,
    /// Bin stride between coded positions.
    pub stride: usize,
    /// First coded bin of the secondary copy; `null` derives the bin of
    /// 150 Hz for the signal at hand.
    pub mid_bin: Option<usize>,
    pub swap: SwapConfig,
    pub mode: Mode,
    /// Normalization constant for the quality score.
    pub mos_n_const: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            scale: None,
            base_bin: 1,
            stride: 2,
            mid_bin: None,
            swap: SwapConfig::default(),
            mode: Mode::Float,
            mos_n_const: MOS_N_CONST_DEFAULT,
        }
    }
}

impl Config {
    pub fn from_json(bytes: &[u8]) -> Result<Self, serde_json::Error> {
        serde_json::from_slice(bytes)
    }

    /// The level scale after applying the per-mode default.
    pub fn effective_scale(&self) -> f64 {
        self.scale.unwrap_or_else(|| self.mode.default_scale())
    }

    /// Applies every default against a concrete signal length and rate.
    pub fn resolve(&self, n_samples: usize, sample_rate: u32) -> EffectiveConfig {
        let mid_bin = self.mid_bin.or_else(|| {
            crate::spectral::bin_for_hz(MID_BAND_HZ, sample_rate, n_samples)
                .ok()
                .map(|b| b.max(1))
        });
        EffectiveConfig {
            mode: self.mode,
            scale: self.effective_scale(),
            base_bin: self.base_bin,
            stride: self.stride,
            mid_bin,
            swap: self.swap.clone(),
            mos_n_const: self.mos_n_const,
        }
    }
}

/// Configuration with all defaults resolved against a concrete signal,
/// echoed verbatim into reports. `mid_bin` stays `null` only when the
/// sample rate cannot host the embedding band at all.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveConfig {
    pub mode: Mode,
    pub scale: f64,
    pub base_bin: usize,
    pub stride: usize,
    pub mid_bin: Option<usize>,
    pub swap: SwapConfig,
    pub mos_n_const: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_default_config() {
        let cfg = Config::from_json(b"{}").unwrap();
        assert_eq!(cfg, Config::default());
        assert_eq!(cfg.effective_scale(), FLOAT_SCALE_DEFAULT);
    }

    #[test]
    fn mode_selects_scale_default() {
        let cfg = Config::from_json(br#"{"mode": "pcm16"}"#).unwrap();
        assert_eq!(cfg.effective_scale(), PCM16_SCALE_DEFAULT);
        let cfg = Config::from_json(br#"{"mode": "pcm16", "scale": 0.125}"#).unwrap();
        assert_eq!(cfg.effective_scale(), 0.125);
    }

    #[test]
    fn swap_fields_and_reserved_tau_parse() {
        let cfg = Config::from_json(
            br#"{"swap": {"origin_hz": 19000.0, "half_wavelength_x": 4,
                 "stage_offsets": [0, 1], "tau": 0.5}}"#,
        )
        .unwrap();
        assert_eq!(cfg.swap.origin_hz, 19000.0);
        assert_eq!(cfg.swap.half_wavelength_x, 4);
        assert_eq!(cfg.swap.stage_offsets, vec![0, 1]);
        assert_eq!(cfg.swap.tau, Some(0.5));
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(Config::from_json(br#"{"scal": 0.1}"#).is_err());
        assert!(Config::from_json(br#"{"swap": {"wavelength": 3}}"#).is_err());
    }

    #[test]
    fn resolve_fills_the_derived_mid_bin() {
        let eff = Config::default().resolve(441000, 44100);
        assert_eq!(eff.mid_bin, Some(1500));
        assert_eq!(eff.scale, FLOAT_SCALE_DEFAULT);
        let overridden = Config {
            mid_bin: Some(900),
            ..Config::default()
        }
        .resolve(441000, 44100);
        assert_eq!(overridden.mid_bin, Some(900));
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = Config {
            scale: Some(0.2),
            mid_bin: Some(700),
            mode: Mode::Pcm16,
            ..Config::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(Config::from_json(text.as_bytes()).unwrap(), cfg);
    }
}
