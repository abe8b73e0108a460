//! WFBC coefficient container.
//!
//! Layout (little endian): magic `WFBC`, version `u32`, channel count `u32`,
//! then per channel `m: i32`, `length: u32` and `length` pairs of `f64`
//! `(re, im)`.

use num_complex::Complex64;

use crate::error::{Result, WarpError};
use crate::transform::CoefficientSet;

pub const MAGIC: &[u8; 4] = b"WFBC";
pub const VERSION: u32 = 1;

pub fn encode(coeffs: &CoefficientSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + coeffs.len() * 16 + coeffs.channels.len() * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(coeffs.channels.len() as u32).to_le_bytes());
    for (m, data) in &coeffs.channels {
        out.extend_from_slice(&m.to_le_bytes());
        out.extend_from_slice(&(data.len() as u32).to_le_bytes());
        for z in data {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        match end {
            Some(end) => {
                let out = &self.bytes[self.pos..end];
                self.pos = end;
                Ok(out)
            }
            None => Err(WarpError::Format(format!(
                "truncated coefficient container at byte {}",
                self.pos
            ))),
        }
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn i32(&mut self) -> Result<i32> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Parses a container. The fingerprint is recomputed from the channel labels
/// and lengths.
pub fn decode(bytes: &[u8]) -> Result<CoefficientSet> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(WarpError::Format("not a WFBC container".into()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(WarpError::Format(format!(
            "unsupported WFBC version {version}"
        )));
    }
    let count = r.u32()? as usize;
    let mut channels = Vec::with_capacity(count.min(1 << 16));
    for _ in 0..count {
        let m = r.i32()?;
        let len = r.u32()? as usize;
        if len.saturating_mul(16) > bytes.len() - r.pos {
            return Err(WarpError::Format(format!(
                "truncated coefficient container in channel {m}"
            )));
        }
        let mut data = Vec::with_capacity(len);
        for _ in 0..len {
            let re = r.f64()?;
            let im = r.f64()?;
            data.push(Complex64::new(re, im));
        }
        channels.push((m, data));
    }
    if r.pos != bytes.len() {
        return Err(WarpError::Format(format!(
            "{} trailing bytes after the last channel",
            bytes.len() - r.pos
        )));
    }
    Ok(CoefficientSet::from_channels(channels))
}
