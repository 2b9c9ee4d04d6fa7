//! Fragile watermarking for stereo WAVE files.
//!
//! A 128-bit message digest is written as small magnitude levels into
//! sub-300 Hz spectral bins of both channels, and the signal is sealed by
//! swapping pairs of near-ultrasonic coefficients in disjoint multi-stage
//! transpositions. Extraction is blind: verification recomputes the digest
//! of the claimed message and compares it against both embedded copies, so
//! any processing that disturbs a coded bin beyond half a level step breaks
//! the match. The mark is deliberately fragile; it detects tampering rather
//! than surviving it.
//!
//! ```
//! use wavemark::{embed_key, plan_layout, verify, SampledSignal};
//!
//! let frames = 44_100;
//! let signal = SampledSignal::new(vec![0.1; frames], vec![0.1; frames], 44_100);
//! let layout = plan_layout(frames, 44_100, 1e-4).unwrap();
//! let marked = embed_key(&signal, b"take 7, baritone", &layout).unwrap();
//! let report = verify(&marked, b"take 7, baritone", &layout).unwrap();
//! assert!(report.matches && report.ber == 0.0);
//! ```

pub mod auth;
pub mod cli;
pub mod config;
pub mod demo;
pub mod digest;
pub mod metrics;
pub mod report;
pub mod spectral;
pub mod wav;

pub use auth::{
    embed_key, extract_key, plan_layout, plan_layout_from_config, plan_layout_with, seal, unseal,
    verify, AuthError, EmbedLayout, ExtractedKey, SwapSchedule, VerificationReport,
};
pub use config::{Config, EffectiveConfig, Mode, SwapConfig};
pub use digest::{digest_hex, md5};
pub use metrics::{ber, distortion, mos, signal_distortion, DistortionReport, MetricsError};
pub use spectral::{bin_for_hz, enforce_hermitian, forward, inverse, SpectralError, Spectrum};
pub use wav::{read_wav, write_wav, SampleFormat, SampledSignal, WavError};
