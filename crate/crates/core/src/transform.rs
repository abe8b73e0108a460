//! Analysis and synthesis with a warped bank.
//!
//! Atoms are `g_{m,n} = T_{n a_m} g_m^` with circular translation on length-`L`
//! signals; `n = 0` sits at time zero. Analysis multiplies the unitary
//! spectrum by `conj(g_m)`, folds it onto `L / a_m` bins and applies an
//! unnormalized inverse FFT. Synthesis is the adjoint.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::bank::{par_map, ChannelRole, WarpedBank};
use crate::error::{Result, WarpError};
use crate::warping::Domain;

/// Per-channel coefficients `c[m][n]`, `n = 0..L/a_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    /// Geometry fingerprint of the producing bank.
    pub fingerprint: u64,
    /// Channel labels and coefficients in bank order.
    pub channels: Vec<(i32, Vec<Complex64>)>,
}

impl CoefficientSet {
    pub fn from_channels(channels: Vec<(i32, Vec<Complex64>)>) -> Self {
        let fingerprint =
            crate::bank::geometry_fingerprint(channels.iter().map(|(m, data)| (*m, data.len())));
        CoefficientSet {
            fingerprint,
            channels,
        }
    }

    /// `sum |c|^2`.
    pub fn energy(&self) -> f64 {
        self.channels
            .iter()
            .flat_map(|(_, c)| c.iter())
            .map(Complex64::norm_sqr)
            .sum()
    }

    pub fn len(&self) -> usize {
        self.channels.iter().map(|(_, c)| c.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn zeros_like(bank: &WarpedBank) -> Self {
        CoefficientSet {
            fingerprint: bank.fingerprint(),
            channels: bank
                .channels()
                .iter()
                .map(|ch| (ch.m, vec![Complex64::new(0.0, 0.0); ch.slots]))
                .collect(),
        }
    }
}

struct Plans {
    forward: HashMap<usize, Arc<dyn Fft<f64>>>,
    inverse: HashMap<usize, Arc<dyn Fft<f64>>>,
}

impl Plans {
    fn for_bank(bank: &WarpedBank) -> Self {
        let mut planner = FftPlanner::new();
        let mut forward = HashMap::new();
        let mut inverse = HashMap::new();
        let sizes = bank
            .channels()
            .iter()
            .map(|ch| ch.slots)
            .chain(std::iter::once(bank.len()));
        for n in sizes {
            forward
                .entry(n)
                .or_insert_with(|| planner.plan_fft_forward(n));
            inverse
                .entry(n)
                .or_insert_with(|| planner.plan_fft_inverse(n));
        }
        Plans { forward, inverse }
    }
}

fn unitary(signal: &[Complex64], fft: &dyn Fft<f64>) -> Vec<Complex64> {
    let mut buf = signal.to_vec();
    fft.process(&mut buf);
    let scale = 1.0 / (buf.len() as f64).sqrt();
    buf.iter_mut().for_each(|x| *x *= scale);
    buf
}

/// Unitary DFT of `signal`.
pub fn unitary_spectrum(signal: &[Complex64]) -> Vec<Complex64> {
    unitary(signal, &*FftPlanner::new().plan_fft_forward(signal.len()))
}

/// Inverse unitary DFT.
pub fn unitary_inverse(spectrum: &[Complex64]) -> Vec<Complex64> {
    unitary(
        spectrum,
        &*FftPlanner::new().plan_fft_inverse(spectrum.len()),
    )
}

impl Plans {
    fn spectrum(&self, signal: &[Complex64]) -> Vec<Complex64> {
        unitary(signal, &*self.forward[&signal.len()])
    }

    fn inverse_spectrum(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        unitary(spectrum, &*self.inverse[&spectrum.len()])
    }
}

fn analyze_spectrum(
    spectrum: &[Complex64],
    bank: &WarpedBank,
    plans: &Plans,
    keep: impl Fn(ChannelRole) -> bool,
) -> Vec<(i32, Vec<Complex64>)> {
    let grid = *bank.grid();
    let selected: Vec<_> = bank.channels().iter().filter(|ch| keep(ch.role)).collect();
    par_map(&selected, |ch| {
        let slots = ch.slots;
        let mut folded = vec![Complex64::new(0.0, 0.0); slots];
        for (j, g) in ch.bins(&grid) {
            folded[j % slots] += spectrum[j] * g;
        }
        plans.inverse[&slots].process(&mut folded);
        (ch.m, folded)
    })
}

/// Analysis coefficients `c[m][n] = <f, g_{m,n}>`.
pub fn analyze(signal: &[Complex64], bank: &WarpedBank) -> Result<CoefficientSet> {
    if signal.len() != bank.len() {
        return Err(WarpError::LengthMismatch {
            expected: bank.len(),
            got: signal.len(),
        });
    }
    let plans = Plans::for_bank(bank);
    let spectrum = plans.spectrum(signal);
    Ok(CoefficientSet {
        fingerprint: bank.fingerprint(),
        channels: analyze_spectrum(&spectrum, bank, &plans, |_| true),
    })
}

fn check_geometry(
    coeffs: &CoefficientSet,
    bank: &WarpedBank,
    keep: impl Fn(ChannelRole) -> bool,
    expected: u64,
) -> Result<()> {
    if coeffs.fingerprint != expected {
        return Err(WarpError::FingerprintMismatch(format!(
            "coefficients {:016x}, bank {:016x}",
            coeffs.fingerprint, expected
        )));
    }
    let channels: Vec<_> = bank.channels().iter().filter(|ch| keep(ch.role)).collect();
    if channels.len() != coeffs.channels.len() {
        return Err(WarpError::FingerprintMismatch(format!(
            "{} coefficient channels for {} bank channels",
            coeffs.channels.len(),
            channels.len()
        )));
    }
    for (ch, (m, data)) in channels.iter().zip(&coeffs.channels) {
        if ch.m != *m || ch.slots != data.len() {
            return Err(WarpError::FingerprintMismatch(format!(
                "channel {m} has {} coefficients, bank channel {} expects {}",
                data.len(),
                ch.m,
                ch.slots
            )));
        }
    }
    Ok(())
}

/// `sum_{m,n} c[m][n] g_{m,n}` using the atoms of `bank`.
pub fn synthesize(coeffs: &CoefficientSet, bank: &WarpedBank) -> Result<Vec<Complex64>> {
    check_geometry(coeffs, bank, |_| true, bank.fingerprint())?;
    let plans = Plans::for_bank(bank);
    let spectrum = synthesize_spectrum(&coeffs.channels, bank, &plans);
    Ok(plans.inverse_spectrum(&spectrum))
}

fn synthesize_spectrum(
    coeffs: &[(i32, Vec<Complex64>)],
    bank: &WarpedBank,
    plans: &Plans,
) -> Vec<Complex64> {
    let grid = *bank.grid();
    let pairs: Vec<_> = bank.channels().iter().zip(coeffs).collect();
    let parts = par_map(&pairs, |(ch, (_, data))| {
        let mut buf = data.clone();
        plans.forward[&ch.slots].process(&mut buf);
        ch.bins(&grid)
            .map(|(j, g)| (j, buf[j % ch.slots] * g))
            .collect::<Vec<_>>()
    });
    let mut spectrum = vec![Complex64::new(0.0, 0.0); bank.len()];
    for part in parts {
        for (j, v) in part {
            spectrum[j] += v;
        }
    }
    spectrum
}

/// Frame operator `S f = sum <f, g_{m,n}> g_{m,n}`.
pub fn apply_frame_operator(signal: &[Complex64], bank: &WarpedBank) -> Result<Vec<Complex64>> {
    FrameOperator::new(bank).apply(signal)
}

/// The frame operator of a bank with its FFT plans kept for repeated use.
pub struct FrameOperator<'a> {
    bank: &'a WarpedBank,
    plans: Plans,
}

impl<'a> FrameOperator<'a> {
    pub fn new(bank: &'a WarpedBank) -> Self {
        FrameOperator {
            bank,
            plans: Plans::for_bank(bank),
        }
    }

    pub fn apply(&self, signal: &[Complex64]) -> Result<Vec<Complex64>> {
        if signal.len() != self.bank.len() {
            return Err(WarpError::LengthMismatch {
                expected: self.bank.len(),
                got: signal.len(),
            });
        }
        let spectrum = self.plans.spectrum(signal);
        let coeffs = analyze_spectrum(&spectrum, self.bank, &self.plans, |_| true);
        Ok(self
            .plans
            .inverse_spectrum(&synthesize_spectrum(&coeffs, self.bank, &self.plans)))
    }
}

/// Analysis of a real signal. On the half-line only the positive and
/// residual channels are computed; the mirrored channels carry the complex
/// conjugates and are implied. On the full line this equals [`analyze`].
pub fn analyze_real(signal: &[f64], bank: &WarpedBank) -> Result<CoefficientSet> {
    if signal.len() != bank.len() {
        return Err(WarpError::LengthMismatch {
            expected: bank.len(),
            got: signal.len(),
        });
    }
    let complex: Vec<Complex64> = signal.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    if bank.grid().domain == Domain::FullLine {
        return analyze(&complex, bank);
    }
    let plans = Plans::for_bank(bank);
    let spectrum = plans.spectrum(&complex);
    Ok(CoefficientSet {
        fingerprint: bank.half_fingerprint(),
        channels: analyze_spectrum(&spectrum, bank, &plans, |r| r != ChannelRole::Mirrored),
    })
}

/// Result of [`synthesize_real`].
#[derive(Clone, Debug)]
pub struct RealSynthesis {
    pub samples: Vec<f64>,
    /// `||Im f_rec||` before it was discarded.
    pub imag_residue: f64,
}

/// Inverse of [`analyze_real`]: rebuilds the mirrored channels by
/// conjugation when needed and keeps the real part.
pub fn synthesize_real(coeffs: &CoefficientSet, bank: &WarpedBank) -> Result<RealSynthesis> {
    let full = if bank.grid().domain == Domain::PositiveHalfLine
        && coeffs.fingerprint == bank.half_fingerprint()
    {
        check_geometry(
            coeffs,
            bank,
            |r| r != ChannelRole::Mirrored,
            bank.half_fingerprint(),
        )?;
        let positive: HashMap<i32, &Vec<Complex64>> = bank
            .channels()
            .iter()
            .filter(|ch| ch.role != ChannelRole::Mirrored)
            .zip(&coeffs.channels)
            .filter(|(ch, _)| ch.role == ChannelRole::Warped)
            .map(|(ch, (_, data))| (ch.m, data))
            .collect();
        let mut own = coeffs.channels.iter();
        let channels = bank
            .channels()
            .iter()
            .map(|ch| match ch.role {
                ChannelRole::Mirrored => (ch.m, positive[&ch.m].iter().map(|c| c.conj()).collect()),
                _ => own.next().expect("geometry checked").clone(),
            })
            .collect();
        CoefficientSet {
            fingerprint: bank.fingerprint(),
            channels,
        }
    } else {
        coeffs.clone()
    };
    let out = synthesize(&full, bank)?;
    let imag_residue = out.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
    Ok(RealSynthesis {
        samples: out.iter().map(|z| z.re).collect(),
        imag_residue,
    })
}
