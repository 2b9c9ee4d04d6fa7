//! RIFF/WAVE container codec for stereo files.
//!
//! Reads and writes Microsoft WAVE containers holding interleaved stereo
//! frames in 16-bit PCM (format code 1) or 32-bit IEEE float (format code 3),
//! converting between integer samples and normalized real amplitudes.
//! Only the first `fmt ` and `data` chunks are honored; any other chunk is
//! carried through verbatim so rewriting an existing file preserves it.

use thiserror::Error;

/// Full-scale divisor for 16-bit PCM: amplitude = sample / 32768.
pub const PCM16_SCALE: f64 = 32768.0;

const FORMAT_PCM: u16 = 1;
const FORMAT_IEEE_FLOAT: u16 = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WavError {
    /// Bad magic, impossible chunk sizes, or missing mandatory chunks.
    #[error("malformed container: {0}")]
    MalformedContainer(String),
    /// Mono, compressed, or bit depths other than pcm16/float32.
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    /// Data chunk shorter than declared, or ending mid-frame.
    #[error("truncated data: {0}")]
    TruncatedData(String),
}

/// Container sample encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFormat {
    Pcm16,
    Float32,
}

/// A chunk other than `fmt ` / `data`, preserved verbatim across a rewrite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiffChunk {
    pub id: [u8; 4],
    pub data: Vec<u8>,
    /// Whether the chunk appeared after the data chunk in the source file.
    pub after_data: bool,
}

/// A two-channel time-domain signal with normalized amplitudes.
///
/// Invariants: both channels have equal length, `sample_rate > 0`, and in
/// pcm16 provenance every amplitude is an integer multiple of 1/32768
/// within [-1, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub channels: [Vec<f64>; 2],
    pub sample_rate: u32,
    pub source_format: SampleFormat,
    pub extra_chunks: Vec<RiffChunk>,
}

impl SampledSignal {
    /// Builds a stereo signal from two equally long channels.
    ///
    /// Panics if the channel lengths differ or the sample rate is zero;
    /// these are construction bugs, not runtime conditions.
    pub fn new(left: Vec<f64>, right: Vec<f64>, sample_rate: u32) -> Self {
        assert_eq!(left.len(), right.len(), "channel lengths must match");
        assert!(sample_rate > 0, "sample rate must be positive");
        Self {
            channels: [left, right],
            sample_rate,
            source_format: SampleFormat::Float32,
            extra_chunks: Vec::new(),
        }
    }

    /// Frames per channel.
    pub fn frames(&self) -> usize {
        self.channels[0].len()
    }

    /// Root-mean-square amplitude over both channels.
    pub fn rms(&self) -> f64 {
        let n = 2 * self.frames();
        if n == 0 {
            return 0.0;
        }
        let energy: f64 = self
            .channels
            .iter()
            .flat_map(|ch| ch.iter())
            .map(|s| s * s)
            .sum();
        (energy / n as f64).sqrt()
    }

    /// A signal with the same rate, provenance, and preserved chunks but new
    /// channel contents.
    pub fn with_channels(&self, channels: [Vec<f64>; 2]) -> Self {
        assert_eq!(channels[0].len(), channels[1].len());
        Self {
            channels,
            sample_rate: self.sample_rate,
            source_format: self.source_format,
            extra_chunks: self.extra_chunks.clone(),
        }
    }
}

struct FmtFields {
    audio_format: u16,
    channels: u16,
    sample_rate: u32,
    bits_per_sample: u16,
}

/// Parses a RIFF/WAVE container into a stereo [`SampledSignal`].
///
/// pcm16 samples are mapped to `s / 32768`; float32 samples are taken as-is.
pub fn read_wav(bytes: &[u8]) -> Result<SampledSignal, WavError> {
    if bytes.len() < 12 {
        return Err(WavError::MalformedContainer(format!(
            "{} bytes is shorter than a RIFF header",
            bytes.len()
        )));
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(WavError::MalformedContainer("missing RIFF magic".into()));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(WavError::MalformedContainer("missing WAVE marker".into()));
    }

    let mut pos = 12usize;
    let mut fmt: Option<FmtFields> = None;
    let mut data_range: Option<(usize, usize)> = None;
    let mut extra_chunks = Vec::new();

    while pos < bytes.len() {
        if pos + 8 > bytes.len() {
            return Err(WavError::MalformedContainer(
                "dangling chunk header at end of file".into(),
            ));
        }
        let id: [u8; 4] = bytes[pos..pos + 4].try_into().unwrap();
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body = pos + 8;
        let end = body
            .checked_add(size)
            .ok_or_else(|| WavError::MalformedContainer("chunk size overflow".into()))?;

        if &id == b"fmt " && fmt.is_none() {
            if end > bytes.len() {
                return Err(WavError::MalformedContainer("fmt chunk overruns file".into()));
            }
            if size < 16 {
                return Err(WavError::MalformedContainer(format!(
                    "fmt chunk of {size} bytes, need at least 16"
                )));
            }
            let f = &bytes[body..end];
            fmt = Some(FmtFields {
                audio_format: u16::from_le_bytes([f[0], f[1]]),
                channels: u16::from_le_bytes([f[2], f[3]]),
                sample_rate: u32::from_le_bytes([f[4], f[5], f[6], f[7]]),
                bits_per_sample: u16::from_le_bytes([f[14], f[15]]),
            });
        } else if &id == b"data" && data_range.is_none() {
            if fmt.is_none() {
                return Err(WavError::MalformedContainer(
                    "data chunk precedes fmt chunk".into(),
                ));
            }
            if end > bytes.len() {
                return Err(WavError::TruncatedData(format!(
                    "data chunk declares {size} bytes, only {} available",
                    bytes.len() - body
                )));
            }
            data_range = Some((body, end));
        } else {
            if end > bytes.len() {
                return Err(WavError::MalformedContainer(format!(
                    "chunk {:?} overruns file",
                    String::from_utf8_lossy(&id)
                )));
            }
            extra_chunks.push(RiffChunk {
                id,
                data: bytes[body..end].to_vec(),
                after_data: data_range.is_some(),
            });
        }
        // Chunks are word-aligned; odd sizes carry one pad byte.
        pos = end + (size & 1);
    }

    let fmt = fmt.ok_or_else(|| WavError::MalformedContainer("missing fmt chunk".into()))?;
    let (start, end) =
        data_range.ok_or_else(|| WavError::MalformedContainer("missing data chunk".into()))?;

    let source_format = match (fmt.audio_format, fmt.bits_per_sample) {
        (FORMAT_PCM, 16) => SampleFormat::Pcm16,
        (FORMAT_IEEE_FLOAT, 32) => SampleFormat::Float32,
        (FORMAT_PCM, bits) => {
            return Err(WavError::UnsupportedFormat(format!(
                "{bits}-bit PCM, need 16-bit"
            )))
        }
        (FORMAT_IEEE_FLOAT, bits) => {
            return Err(WavError::UnsupportedFormat(format!(
                "{bits}-bit float, need 32-bit"
            )))
        }
        (code, _) => {
            return Err(WavError::UnsupportedFormat(format!(
                "audio format code {code}, need PCM (1) or IEEE float (3)"
            )))
        }
    };
    if fmt.channels != 2 {
        return Err(WavError::UnsupportedFormat(format!(
            "{} channel(s), need stereo",
            fmt.channels
        )));
    }
    if fmt.sample_rate == 0 {
        return Err(WavError::MalformedContainer("zero sample rate".into()));
    }

    let bytes_per_sample = match source_format {
        SampleFormat::Pcm16 => 2,
        SampleFormat::Float32 => 4,
    };
    let block = 2 * bytes_per_sample;
    let body = &bytes[start..end];
    if body.len() % block != 0 {
        return Err(WavError::TruncatedData(format!(
            "data chunk of {} bytes ends mid-frame (block size {block})",
            body.len()
        )));
    }

    let frames = body.len() / block;
    let mut left = Vec::with_capacity(frames);
    let mut right = Vec::with_capacity(frames);
    match source_format {
        SampleFormat::Pcm16 => {
            for frame in body.chunks_exact(4) {
                left.push(i16::from_le_bytes([frame[0], frame[1]]) as f64 / PCM16_SCALE);
                right.push(i16::from_le_bytes([frame[2], frame[3]]) as f64 / PCM16_SCALE);
            }
        }
        SampleFormat::Float32 => {
            for frame in body.chunks_exact(8) {
                left.push(f32::from_le_bytes(frame[0..4].try_into().unwrap()) as f64);
                right.push(f32::from_le_bytes(frame[4..8].try_into().unwrap()) as f64);
            }
        }
    }

    Ok(SampledSignal {
        channels: [left, right],
        sample_rate: fmt.sample_rate,
        source_format,
        extra_chunks,
    })
}

/// Quantizes an amplitude to a 16-bit PCM level: clamp to [-1, 1 - 2^-15],
/// scale by 32768, round to nearest with ties away from zero.
pub fn quantize_pcm16(amplitude: f64) -> i16 {
    let clamped = amplitude.clamp(-1.0, 1.0 - 1.0 / PCM16_SCALE);
    // f64::round ties away from zero, which pins the convention.
    (clamped * PCM16_SCALE).round() as i16
}

/// Serializes a signal into a RIFF/WAVE container.
///
/// Preserved chunks ride along in their recorded positions relative to the
/// data chunk. A float32 rewrite of a float32-provenance signal is bit-exact.
pub fn write_wav(signal: &SampledSignal, format: SampleFormat) -> Vec<u8> {
    let frames = signal.frames();
    let (audio_format, bits): (u16, u16) = match format {
        SampleFormat::Pcm16 => (FORMAT_PCM, 16),
        SampleFormat::Float32 => (FORMAT_IEEE_FLOAT, 32),
    };
    let block = 2 * (bits as usize / 8);
    let data_size = frames * block;

    let mut data = Vec::with_capacity(data_size);
    for i in 0..frames {
        for ch in &signal.channels {
            match format {
                SampleFormat::Pcm16 => {
                    data.extend_from_slice(&quantize_pcm16(ch[i]).to_le_bytes())
                }
                SampleFormat::Float32 => {
                    data.extend_from_slice(&(ch[i] as f32).to_le_bytes())
                }
            }
        }
    }

    let mut fmt = Vec::with_capacity(16);
    fmt.extend_from_slice(&audio_format.to_le_bytes());
    fmt.extend_from_slice(&2u16.to_le_bytes());
    fmt.extend_from_slice(&signal.sample_rate.to_le_bytes());
    fmt.extend_from_slice(&(signal.sample_rate * block as u32).to_le_bytes());
    fmt.extend_from_slice(&(block as u16).to_le_bytes());
    fmt.extend_from_slice(&bits.to_le_bytes());

    let mut out = Vec::new();
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&[0; 4]); // patched below
    out.extend_from_slice(b"WAVE");
    append_chunk(&mut out, b"fmt ", &fmt);
    for chunk in signal.extra_chunks.iter().filter(|c| !c.after_data) {
        append_chunk(&mut out, &chunk.id, &chunk.data);
    }
    append_chunk(&mut out, b"data", &data);
    for chunk in signal.extra_chunks.iter().filter(|c| c.after_data) {
        append_chunk(&mut out, &chunk.id, &chunk.data);
    }

    let riff_size = (out.len() - 8) as u32;
    out[4..8].copy_from_slice(&riff_size.to_le_bytes());
    out
}

fn append_chunk(out: &mut Vec<u8>, id: &[u8; 4], body: &[u8]) {
    out.extend_from_slice(id);
    out.extend_from_slice(&(body.len() as u32).to_le_bytes());
    out.extend_from_slice(body);
    if body.len() % 2 == 1 {
        out.push(0);
    }
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        /// The parser never panics on arbitrary bytes.
        #[test]
        fn read_wav_never_panics(data: Vec<u8>) {
            let _ = read_wav(&data);
        }

        /// float32 containers reproduce f32-representable signals exactly.
        #[test]
        fn float32_round_trip_identity(
            frames in prop::collection::vec((-1.0f32..1.0, -1.0f32..1.0), 0..200),
            rate in 1u32..200_000,
        ) {
            let left: Vec<f64> = frames.iter().map(|&(l, _)| l as f64).collect();
            let right: Vec<f64> = frames.iter().map(|&(_, r)| r as f64).collect();
            let sig = SampledSignal::new(left.clone(), right.clone(), rate);
            let back = read_wav(&write_wav(&sig, SampleFormat::Float32)).unwrap();
            prop_assert_eq!(&back.channels[0], &left);
            prop_assert_eq!(&back.channels[1], &right);
            prop_assert_eq!(back.sample_rate, rate);
        }

        /// pcm16 quantization error stays within 2^-16 for in-range samples.
        #[test]
        fn pcm16_round_trip_bounded(
            frames in prop::collection::vec(
                (-1.0f64..(1.0 - 1.0 / PCM16_SCALE), -1.0f64..(1.0 - 1.0 / PCM16_SCALE)),
                0..200,
            ),
        ) {
            let left: Vec<f64> = frames.iter().map(|&(l, _)| l).collect();
            let right: Vec<f64> = frames.iter().map(|&(_, r)| r).collect();
            let sig = SampledSignal::new(left.clone(), right.clone(), 44100);
            let back = read_wav(&write_wav(&sig, SampleFormat::Pcm16)).unwrap();
            for i in 0..left.len() {
                prop_assert!((back.channels[0][i] - left[i]).abs() <= 1.0 / 65536.0);
                prop_assert!((back.channels[1][i] - right[i]).abs() <= 1.0 / 65536.0);
            }
        }
    }
}
