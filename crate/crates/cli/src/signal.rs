//! Signal files: WAV (PCM 16/24-bit or float-32) chosen by the `.wav`
//! extension, raw little-endian `f64` otherwise.

use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{CliError, CliResult};

pub struct Signal {
    pub samples: Vec<f64>,
    pub sample_rate: Option<u32>,
}

fn is_wav(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("wav"))
}

pub fn read(path: &Path) -> CliResult<Signal> {
    if !is_wav(path) {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        if bytes.len() % 8 != 0 {
            return Err(CliError::invalid(format!(
                "{}: raw f64 input has {} bytes, not a multiple of 8",
                path.display(),
                bytes.len()
            )));
        }
        let samples = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        return Ok(Signal {
            samples,
            sample_rate: None,
        });
    }
    let mut reader = WavReader::open(path).map_err(|e| CliError::io(path, e))?;
    let spec = reader.spec();
    let channels = spec.channels.max(1) as usize;
    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::io(path, e))?,
        (SampleFormat::Int, bits @ (8 | 16 | 24 | 32)) => {
            let scale = 1.0 / (1u64 << (bits - 1)) as f64;
            reader
                .samples::<i32>()
                .map(|s| s.map(|v| v as f64 * scale))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::io(path, e))?
        }
        (format, bits) => {
            return Err(CliError::invalid(format!(
                "{}: unsupported WAV sample format {format:?} with {bits} bits",
                path.display()
            )))
        }
    };
    let samples = interleaved
        .chunks(channels)
        .map(|frame| frame.iter().sum::<f64>() / channels as f64)
        .collect();
    Ok(Signal {
        samples,
        sample_rate: Some(spec.sample_rate),
    })
}

pub fn write(path: &Path, samples: &[f64], sample_rate: f64) -> CliResult<()> {
    if !is_wav(path) {
        let bytes: Vec<u8> = samples.iter().flat_map(|v| v.to_le_bytes()).collect();
        return std::fs::write(path, bytes).map_err(|e| CliError::io(path, e));
    }
    let spec = WavSpec {
        channels: 1,
        sample_rate: sample_rate.round().max(1.0) as u32,
        bits_per_sample: 32,
        sample_format: SampleFormat::Float,
    };
    let mut writer = WavWriter::create(path, spec).map_err(|e| CliError::io(path, e))?;
    for &v in samples {
        writer
            .write_sample(v as f32)
            .map_err(|e| CliError::io(path, e))?;
    }
    writer.finalize().map_err(|e| CliError::io(path, e))
}
