//! Command-line front end tying the codec, authenticator, and metrics into
//! reproducible batch workflows.
//!
//! Exit codes: 0 on success (and a matching verification), 1 when a
//! verification fails, 2 on usage or I/O errors.

use crate::auth::{
    self, embed_key, extract_key, plan_layout_from_config, seal, unseal, verify, SwapSchedule,
};
use crate::config::{Config, Mode};
use crate::demo::run_demo;
use crate::digest::{digest_hex, md5};
use crate::metrics::signal_distortion;
use crate::report::{save_report, write_atomic, RunReport};
use crate::wav::{read_wav, write_wav, SampleFormat, SampledSignal};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "wavemark",
    version,
    about = "Authenticate stereo WAVE files with an embedded spectral digest and involutive harmonic seals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Embed the digest of a message into the low-frequency band
    Embed {
        #[command(flatten)]
        io: InputOutput,
        #[command(flatten)]
        message: MessageArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Swap the scheduled near-ultrasonic coefficient pairs
    Seal {
        #[command(flatten)]
        io: InputOutput,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reverse a seal (the swap set is its own inverse)
    Unseal {
        #[command(flatten)]
        io: InputOutput,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Read back both embedded digest copies
    Extract {
        /// Input WAVE file
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check the embedded digest against a claimed message
    Verify {
        /// Input WAVE file
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        message: MessageArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Distortion metrics between an original and a modified file
    Metrics {
        /// Reference WAVE file
        #[arg(long)]
        original: PathBuf,
        /// Modified WAVE file measured against the reference
        #[arg(long)]
        modified: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Synthesize the five-song fixture corpus and run the whole pipeline
    Demo {
        /// Corpus seed; the same seed writes byte-identical fixtures
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Directory for fixtures, sealed outputs, and the table
        #[arg(long, default_value = "demo_out")]
        out_dir: PathBuf,
        /// Message embedded in every song (a per-song default otherwise)
        #[arg(short, long)]
        message: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct InputOutput {
    /// Input WAVE file
    #[arg(short, long)]
    input: PathBuf,
    /// Output WAVE file
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MessageArgs {
    /// Message text
    #[arg(short, long)]
    message: Option<String>,
    /// File whose raw bytes form the message
    #[arg(long)]
    message_file: Option<PathBuf>,
}

impl MessageArgs {
    fn bytes(&self) -> Result<Vec<u8>> {
        match (&self.message, &self.message_file) {
            (Some(text), _) => Ok(text.as_bytes().to_vec()),
            (_, Some(path)) => {
                fs::read(path).with_context(|| format!("reading message file {}", path.display()))
            }
            _ => unreachable!("clap enforces the message group"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Float,
    Pcm16,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON configuration file
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Processing mode, overriding the configuration file
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Write a JSON report here
    #[arg(long)]
    report: Option<PathBuf>,
}

impl CommonArgs {
    fn load_config(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => {
                let bytes = fs::read(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                Config::from_json(&bytes)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => Config::default(),
        };
        if let Some(mode) = self.mode {
            cfg.mode = match mode {
                ModeArg::Float => Mode::Float,
                ModeArg::Pcm16 => Mode::Pcm16,
            };
        }
        Ok(cfg)
    }

    fn emit(&self, report: &RunReport) -> Result<()> {
        if let Some(path) = &self.report {
            save_report(path, report)
                .with_context(|| format!("writing report {}", path.display()))?;
        }
        Ok(())
    }
}

/// Runs the CLI against the given argument vector and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return err.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    }
}

fn read_signal(path: &Path) -> Result<SampledSignal> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let signal = read_wav(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    if signal.frames() == 0 {
        bail!("{} holds no audio frames", path.display());
    }
    Ok(signal)
}

fn output_format(cfg: &Config) -> SampleFormat {
    match cfg.mode {
        Mode::Float => SampleFormat::Float32,
        Mode::Pcm16 => SampleFormat::Pcm16,
    }
}

fn path_string(path: &Path) -> String {
    path.display().to_string()
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Embed {
            io,
            message,
            common,
        } => {
            let cfg = common.load_config()?;
            let message = message.bytes()?;
            let signal = read_signal(&io.input)?;
            let layout = plan_layout_from_config(signal.frames(), signal.sample_rate, &cfg)?;
            let embedded = embed_key(&signal, &message, &layout)?;
            let distortion = signal_distortion(&signal, &embedded)?;
            write_atomic(&io.output, &write_wav(&embedded, output_format(&cfg)))
                .with_context(|| format!("writing {}", io.output.display()))?;

            let expected = digest_hex(&md5(&message));
            let extracted = extract_key(&embedded, &layout)?;
            let mut report = RunReport::new(
                "embed",
                cfg.resolve(signal.frames(), signal.sample_rate),
                vec![path_string(&io.input)],
            );
            report.digest_expected = Some(expected.clone());
            report.digest_extracted_primary = Some(extracted.hex_primary());
            report.digest_extracted_secondary = Some(extracted.hex_secondary());
            report.copies_agree = Some(extracted.copies_agree());
            report.matches =
                Some(extracted.hex_primary() == expected && extracted.copies_agree());
            report.metrics = Some(distortion.overall.clone());
            report.metrics_per_channel = Some(distortion.channels.clone());
            common.emit(&report)?;

            println!(
                "embedded digest {expected} into {} (snr {})",
                io.output.display(),
                format_db(distortion.overall.snr_db),
            );
            Ok(0)
        }
        Command::Seal { io, common } => run_swap("seal", io, common, seal),
        Command::Unseal { io, common } => run_swap("unseal", io, common, unseal),
        Command::Extract { input, common } => {
            let cfg = common.load_config()?;
            let signal = read_signal(&input)?;
            let layout = plan_layout_from_config(signal.frames(), signal.sample_rate, &cfg)?;
            let extracted = extract_key(&signal, &layout)?;

            let mut report = RunReport::new(
                "extract",
                cfg.resolve(signal.frames(), signal.sample_rate),
                vec![path_string(&input)],
            );
            report.digest_extracted_primary = Some(extracted.hex_primary());
            report.digest_extracted_secondary = Some(extracted.hex_secondary());
            report.copies_agree = Some(extracted.copies_agree());
            common.emit(&report)?;

            println!("primary   {}", extracted.hex_primary());
            println!("secondary {}", extracted.hex_secondary());
            println!("copies_agree {}", extracted.copies_agree());
            Ok(0)
        }
        Command::Verify {
            input,
            message,
            common,
        } => {
            let cfg = common.load_config()?;
            let message = message.bytes()?;
            let signal = read_signal(&input)?;
            let layout = plan_layout_from_config(signal.frames(), signal.sample_rate, &cfg)?;
            let verdict = verify(&signal, &message, &layout)?;

            let mut report = RunReport::new(
                "verify",
                cfg.resolve(signal.frames(), signal.sample_rate),
                vec![path_string(&input)],
            );
            report.digest_expected = Some(verdict.expected_hex.clone());
            report.digest_extracted_primary = Some(verdict.extracted_hex_primary.clone());
            report.digest_extracted_secondary = Some(verdict.extracted_hex_secondary.clone());
            report.copies_agree = Some(verdict.copies_agree);
            report.matches = Some(verdict.matches);
            common.emit(&report)?;

            println!(
                "match {} (ber {:.6}, copies_agree {})",
                verdict.matches, verdict.ber, verdict.copies_agree
            );
            Ok(if verdict.matches { 0 } else { 1 })
        }
        Command::Metrics {
            original,
            modified,
            common,
        } => {
            let cfg = common.load_config()?;
            let reference = read_signal(&original)?;
            let subject = read_signal(&modified)?;
            let distortion = signal_distortion(&reference, &subject)?;

            let mut report = RunReport::new(
                "metrics",
                cfg.resolve(reference.frames(), reference.sample_rate),
                vec![path_string(&original), path_string(&modified)],
            );
            report.metrics = Some(distortion.overall.clone());
            report.metrics_per_channel = Some(distortion.channels.clone());
            common.emit(&report)?;

            println!(
                "snr {} psnr {} mse {:.3e} md {:.3e}",
                format_db(distortion.overall.snr_db),
                format_db(distortion.overall.psnr_db),
                distortion.overall.mse,
                distortion.overall.md,
            );
            Ok(0)
        }
        Command::Demo {
            seed,
            out_dir,
            message,
            common,
        } => {
            let cfg = common.load_config()?;
            let report = run_demo(seed, &out_dir, message.as_deref().map(str::as_bytes), &cfg)?;

            println!("song             rms     snr_db   psnr_db  ber      mos    match");
            for song in &report.songs {
                println!(
                    "{:<16} {:<7.4} {:<8} {:<8} {:<8.6} {:<6} {}",
                    song.name,
                    song.rms,
                    format_db(song.snr_db),
                    format_db(song.psnr_db),
                    song.ber,
                    song.mos
                        .map(|m| format!("{m:.3}"))
                        .unwrap_or_else(|| "-".into()),
                    song.matches,
                );
            }
            if let Some(path) = &common.report {
                save_report(path, &report)
                    .with_context(|| format!("writing report {}", path.display()))?;
            }
            Ok(if report.songs.iter().all(|s| s.matches) {
                0
            } else {
                1
            })
        }
    }
}

fn run_swap(
    name: &str,
    io: InputOutput,
    common: CommonArgs,
    op: fn(&SampledSignal, &SwapSchedule) -> Result<SampledSignal, auth::AuthError>,
) -> Result<i32> {
    let cfg = common.load_config()?;
    let signal = read_signal(&io.input)?;
    let schedule = SwapSchedule::plan(signal.frames(), signal.sample_rate, &cfg.swap)?;
    let swapped = op(&signal, &schedule)?;
    let distortion = signal_distortion(&signal, &swapped)?;
    write_atomic(&io.output, &write_wav(&swapped, output_format(&cfg)))
        .with_context(|| format!("writing {}", io.output.display()))?;

    let mut report = RunReport::new(
        name,
        cfg.resolve(signal.frames(), signal.sample_rate),
        vec![path_string(&io.input)],
    );
    report.metrics = Some(distortion.overall.clone());
    report.metrics_per_channel = Some(distortion.channels.clone());
    common.emit(&report)?;

    println!(
        "{name}: {} -> {} ({} swapped pairs per channel)",
        io.input.display(),
        io.output.display(),
        schedule.pairs().len(),
    );
    Ok(0)
}

fn format_db(value: Option<f64>) -> String {
    match value {
        Some(v) if v.is_finite() => format!("{v:.4}"),
        Some(_) => "inf".to_string(),
        None => "-".to_string(),
    }
}
