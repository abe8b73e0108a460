#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warpbank::{Domain, FactorPolicy, GridSpec, PrototypeWindow, WarpedBank, WarpingFunction};

/// One representative of every built-in family with the sample rate used in
/// the tests.
pub fn families() -> Vec<(&'static str, WarpingFunction, f64)> {
    vec![
        ("log", WarpingFunction::log(1.0, 1.0).unwrap(), 64.0),
        (
            "sympow",
            WarpingFunction::sym_pow(1.0, 1.0, 0.5).unwrap(),
            64.0,
        ),
        ("erb", WarpingFunction::erb(), 44100.0),
        (
            "signedpow",
            WarpingFunction::signed_pow(1.0, 1.0, 0.5).unwrap(),
            64.0,
        ),
    ]
}

pub fn grid_for(warp: &WarpingFunction, len: usize, fs: f64) -> GridSpec {
    GridSpec::new(len, fs, warp.domain()).unwrap()
}

pub fn painless_hann(warp: &WarpingFunction, len: usize, fs: f64) -> WarpedBank {
    let hann = PrototypeWindow::hann(3.0).unwrap();
    WarpedBank::build(
        warp,
        &hann,
        &grid_for(warp, len, fs),
        FactorPolicy::Painless,
    )
    .unwrap()
}

pub fn erb_grid(len: usize) -> GridSpec {
    GridSpec::new(len, 44100.0, Domain::FullLine).unwrap()
}

pub fn random_signal(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&diff) / norm(b)
}

/// Plain O(L^2) unitary DFT.
pub fn naive_dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(j, v)| {
                    let phase = sign * 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                    v * Complex64::from_polar(1.0, phase)
                })
                .sum::<Complex64>()
                * scale
        })
        .collect()
}

/// Copy of the bank with every factor doubled (no longer painless).
pub fn doubled(bank: &WarpedBank) -> WarpedBank {
    bank.with_scaled_factors(2.0).unwrap()
}
pub mod oracle;
