//! Deterministic synthetic fixture songs and the batch demo pipeline.
//!
//! Five 10-second stereo signals at 44.1 kHz stand in for real recordings:
//! a tone mixture, a chirp, band-limited noise, speech-shaped noise, and
//! silence with sparse bursts. All synthesis is seeded, so the demo writes
//! byte-identical fixtures for the same seed.

use crate::auth::{embed_key, plan_layout_from_config, seal, unseal, verify, SwapSchedule};
use crate::config::{Config, EffectiveConfig, Mode};
use crate::metrics::{self, signal_distortion};
use crate::report::write_atomic;
use crate::spectral::{enforce_hermitian, inverse};
use crate::wav::{read_wav, write_wav, SampleFormat, SampledSignal};
use anyhow::{Context, Result};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::path::Path;

pub const DEMO_SAMPLE_RATE: u32 = 44100;
/// 10 seconds per channel.
pub const DEMO_FRAMES: usize = 441_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SongKind {
    ToneMixture,
    Chirp,
    FilteredNoise,
    SpeechNoise,
    SilenceBursts,
}

impl SongKind {
    pub const ALL: [SongKind; 5] = [
        SongKind::ToneMixture,
        SongKind::Chirp,
        SongKind::FilteredNoise,
        SongKind::SpeechNoise,
        SongKind::SilenceBursts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SongKind::ToneMixture => "tone_mixture",
            SongKind::Chirp => "chirp",
            SongKind::FilteredNoise => "filtered_noise",
            SongKind::SpeechNoise => "speech_noise",
            SongKind::SilenceBursts => "silence_bursts",
        }
    }
}

fn song_rng(kind: SongKind, seed: u64) -> ChaCha8Rng {
    let index = SongKind::ALL.iter().position(|k| *k == kind).unwrap() as u64;
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index))
}

fn fade_env(tau: f64, total: f64, fade: f64) -> f64 {
    let smooth = |u: f64| 0.5 * (1.0 - (PI * u.clamp(0.0, 1.0)).cos());
    smooth(tau / fade) * smooth((total - tau) / fade)
}

fn tone_mixture(rng: &mut ChaCha8Rng) -> [Vec<f64>; 2] {
    // Partials sit on exact multiples of the 0.1 Hz bin spacing, so they
    // land on single bins with no leakage into the code band.
    let freqs = [220.0, 277.2, 329.6, 440.0, 554.4, 659.3, 880.0];
    let amps = [
        [0.12, 0.10, 0.08, 0.10, 0.06, 0.05, 0.04],
        [0.10, 0.12, 0.07, 0.11, 0.05, 0.06, 0.03],
    ];
    let mut channels = [Vec::new(), Vec::new()];
    for (ch, amp_row) in amps.iter().enumerate() {
        let phases: Vec<f64> = (0..freqs.len())
            .map(|_| rng.random_range(0.0..2.0 * PI))
            .collect();
        channels[ch] = (0..DEMO_FRAMES)
            .map(|t| {
                let tau = t as f64 / DEMO_SAMPLE_RATE as f64;
                freqs
                    .iter()
                    .zip(amp_row)
                    .zip(&phases)
                    .map(|((f, a), p)| a * (2.0 * PI * f * tau + p).sin())
                    .sum()
            })
            .collect();
    }
    channels
}

fn chirp(rng: &mut ChaCha8Rng) -> [Vec<f64>; 2] {
    let (f0, f1, amp, fade) = (1000.0, 8000.0, 0.25, 0.1);
    let total = DEMO_FRAMES as f64 / DEMO_SAMPLE_RATE as f64;
    let mut channels = [Vec::new(), Vec::new()];
    for ch in &mut channels {
        let phase0 = rng.random_range(0.0..2.0 * PI);
        *ch = (0..DEMO_FRAMES)
            .map(|t| {
                let tau = t as f64 / DEMO_SAMPLE_RATE as f64;
                let phase = 2.0 * PI * (f0 * tau + (f1 - f0) * tau * tau / (2.0 * total));
                amp * fade_env(tau, total, fade) * (phase + phase0).sin()
            })
            .collect();
    }
    channels
}

/// Noise built directly in the frequency domain so its support is exactly
/// the bins where `shape` is nonzero.
fn spectral_noise(
    rng: &mut ChaCha8Rng,
    shape: impl Fn(f64) -> f64,
    target_rms: f64,
) -> Vec<f64> {
    let n = DEMO_FRAMES;
    let mut bins = vec![Complex::new(0.0, 0.0); n];
    for (k, bin) in bins.iter_mut().enumerate().take(n.div_ceil(2)).skip(1) {
        let f = k as f64 * DEMO_SAMPLE_RATE as f64 / n as f64;
        let mag = shape(f);
        if mag > 0.0 {
            *bin = Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * mag;
        }
    }
    enforce_hermitian(&mut bins);
    let samples = inverse(&bins).expect("enforced spectrum inverts");
    let rms = (samples.iter().map(|s| s * s).sum::<f64>() / n as f64).sqrt();
    let gain = target_rms / rms;
    samples.into_iter().map(|s| s * gain).collect()
}

fn silence_bursts(rng: &mut ChaCha8Rng) -> [Vec<f64>; 2] {
    // Bursts live in channel 0 only; channel 1 stays digitally silent so the
    // per-channel metrics exercise the degenerate-reference paths.
    let mut left = vec![0.0; DEMO_FRAMES];
    for start_s in [2.0, 5.0, 8.0] {
        let phase = rng.random_range(0.0..2.0 * PI);
        let start = (start_s * DEMO_SAMPLE_RATE as f64) as usize;
        let len = (0.2 * DEMO_SAMPLE_RATE as f64) as usize;
        for i in 0..len {
            let u = i as f64 / len as f64;
            let hann = 0.5 * (1.0 - (2.0 * PI * u).cos());
            let tau = i as f64 / DEMO_SAMPLE_RATE as f64;
            left[start + i] = 0.3 * hann * (2.0 * PI * 1000.0 * tau + phase).sin();
        }
    }
    [left, vec![0.0; DEMO_FRAMES]]
}

/// Synthesizes one fixture song, deterministically in `seed`.
pub fn synthesize(kind: SongKind, seed: u64) -> SampledSignal {
    let mut rng = song_rng(kind, seed);
    let channels = match kind {
        SongKind::ToneMixture => tone_mixture(&mut rng),
        SongKind::Chirp => chirp(&mut rng),
        SongKind::FilteredNoise => {
            let band = |f: f64| if (800.0..=6000.0).contains(&f) { 1.0 } else { 0.0 };
            [
                spectral_noise(&mut rng, band, 0.18),
                spectral_noise(&mut rng, band, 0.18),
            ]
        }
        SongKind::SpeechNoise => {
            let shape = |f: f64| {
                if (300.0..=8000.0).contains(&f) {
                    1.0 / (1.0 + (f / 500.0).powi(2))
                } else {
                    0.0
                }
            };
            [
                spectral_noise(&mut rng, shape, 0.15),
                spectral_noise(&mut rng, shape, 0.15),
            ]
        }
        SongKind::SilenceBursts => silence_bursts(&mut rng),
    };
    SampledSignal::new(channels[0].clone(), channels[1].clone(), DEMO_SAMPLE_RATE)
}

/// The full five-song corpus.
pub fn demo_corpus(seed: u64) -> Vec<(SongKind, SampledSignal)> {
    SongKind::ALL
        .iter()
        .map(|&kind| (kind, synthesize(kind, seed)))
        .collect()
}

/// One row of the demo table.
#[derive(Debug, Clone, Serialize)]
pub struct SongReport {
    pub name: String,
    pub rms: f64,
    pub snr_db: Option<f64>,
    pub psnr_db: Option<f64>,
    pub ber: f64,
    pub mos: Option<f64>,
    pub mos_label: Option<String>,
    #[serde(rename = "match")]
    pub matches: bool,
    pub copies_agree: bool,
    pub digest_expected: String,
    pub digest_extracted_primary: String,
    pub digest_extracted_secondary: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub command: String,
    pub seed: u64,
    pub out_dir: String,
    pub config: EffectiveConfig,
    pub songs: Vec<SongReport>,
}

/// Synthesizes the corpus, runs embed → seal → (file) → unseal → verify on
/// every song, and writes fixtures plus sealed outputs under `out_dir`.
pub fn run_demo(
    seed: u64,
    out_dir: &Path,
    message: Option<&[u8]>,
    cfg: &Config,
) -> Result<DemoReport> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let format = match cfg.mode {
        Mode::Float => SampleFormat::Float32,
        Mode::Pcm16 => SampleFormat::Pcm16,
    };
    let layout = plan_layout_from_config(DEMO_FRAMES, DEMO_SAMPLE_RATE, cfg)?;
    let schedule = SwapSchedule::plan(DEMO_FRAMES, DEMO_SAMPLE_RATE, &cfg.swap)?;

    let mut songs = Vec::new();
    for (i, kind) in SongKind::ALL.iter().enumerate() {
        let original = synthesize(*kind, seed);
        let stem = format!("song{}_{}", i + 1, kind.name());
        write_atomic(
            &out_dir.join(format!("{stem}.wav")),
            &write_wav(&original, format),
        )?;

        let default_message;
        let message_bytes = match message {
            Some(m) => m,
            None => {
                default_message = format!("synthetic fixture song: {}", kind.name());
                default_message.as_bytes()
            }
        };

        let embedded = embed_key(&original, message_bytes, &layout)?;
        let fidelity = signal_distortion(&original, &embedded)?;
        let sealed = seal(&embedded, &schedule)?;
        let sealed_bytes = write_wav(&sealed, format);
        write_atomic(&out_dir.join(format!("{stem}_sealed.wav")), &sealed_bytes)?;

        // Verify through the published container, not the in-memory signal.
        let published = read_wav(&sealed_bytes)?;
        let verdict = verify(&unseal(&published, &schedule)?, message_bytes, &layout)?;

        let snr = fidelity.overall.snr_db;
        let mos = snr
            .filter(|s| s.is_finite())
            .and_then(|s| metrics::mos(s, cfg.mos_n_const).ok());
        songs.push(SongReport {
            name: kind.name().to_string(),
            rms: original.rms(),
            snr_db: snr,
            psnr_db: fidelity.overall.psnr_db,
            ber: verdict.ber,
            mos,
            mos_label: mos.map(|m| metrics::rating_label(m).to_string()),
            matches: verdict.matches,
            copies_agree: verdict.copies_agree,
            digest_expected: verdict.expected_hex,
            digest_extracted_primary: verdict.extracted_hex_primary,
            digest_extracted_secondary: verdict.extracted_hex_secondary,
        });
    }

    Ok(DemoReport {
        command: "demo".to_string(),
        seed,
        out_dir: out_dir.display().to_string(),
        config: cfg.resolve(DEMO_FRAMES, DEMO_SAMPLE_RATE),
        songs,
    })
}
