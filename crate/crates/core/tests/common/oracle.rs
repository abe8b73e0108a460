#![allow(non_snake_case)]
//! Dense reference implementation: responses from the closed forms, atoms
//! materialized in time, literal inner products.

use super::naive_dft;
use nalgebra::DMatrix;
use num_complex::Complex64;
use warpbank::{ChannelRole, Domain, WarpedBank};

/// Full-length frequency response of every channel, built from the warping
/// and the window directly where a closed form exists.
pub fn oracle_responses(bank: &WarpedBank) -> Vec<Vec<f64>> {
    let L = bank.len();
    let grid = bank.grid();
    let warp = bank.warping();
    let proto = bank.prototype();
    let nyq = (L / 2) as i64;
    bank.channels()
        .iter()
        .map(|ch| {
            let scale = (ch.a as f64 / L as f64).sqrt();
            let mut g = vec![0.0; L];
            for (idx, slot) in g.iter_mut().enumerate() {
                let k = if idx as i64 <= nyq {
                    idx as i64
                } else {
                    idx as i64 - L as i64
                };
                let xi = k as f64 * grid.sample_rate / L as f64;
                *slot = match (grid.domain, ch.role) {
                    (Domain::FullLine, _) => {
                        scale * proto.eval(warp.eval(xi).unwrap() - ch.m as f64)
                    }
                    (_, ChannelRole::Warped) if k >= 1 && k < nyq => {
                        scale * proto.eval(warp.eval(xi).unwrap() - ch.m as f64)
                    }
                    (_, ChannelRole::Mirrored) if k <= -1 && k > -nyq => {
                        scale * proto.eval(warp.eval(-xi).unwrap() - ch.m as f64)
                    }
                    (_, ChannelRole::ResidualDc) if k == 0 => ch.response[0],
                    (_, ChannelRole::ResidualNyquist) if k == nyq => ch.response[0],
                    _ => 0.0,
                };
            }
            g
        })
        .collect()
}

/// Time-domain atoms `T_{n a} g_check`, grouped per channel.
pub fn atoms(bank: &WarpedBank) -> Vec<Vec<Vec<Complex64>>> {
    let L = bank.len();
    oracle_responses(bank)
        .into_iter()
        .zip(bank.channels())
        .map(|(g, ch)| {
            let spectrum: Vec<Complex64> = g.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            let psi = naive_dft(&spectrum, 1.0);
            (0..ch.slots)
                .map(|n| (0..L).map(|k| psi[(k + L - (n * ch.a) % L) % L]).collect())
                .collect()
        })
        .collect()
}

/// Frame operator as a dense matrix, `S = sum atom atom^*`.
pub fn frame_matrix(bank: &WarpedBank) -> DMatrix<Complex64> {
    let L = bank.len();
    let mut s = DMatrix::<Complex64>::zeros(L, L);
    for channel_atoms in atoms(bank) {
        for atom in channel_atoms {
            for i in 0..L {
                for j in 0..L {
                    s[(i, j)] += atom[i] * atom[j].conj();
                }
            }
        }
    }
    s
}

/// Extreme eigenvalues of the dense frame operator.
pub fn dense_bounds(bank: &WarpedBank) -> (f64, f64) {
    let eig = frame_matrix(bank).symmetric_eigen();
    let lo = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let hi = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Coefficients as literal inner products with the materialized atoms.
pub fn literal_coefficients(bank: &WarpedBank, f: &[Complex64]) -> Vec<Vec<Complex64>> {
    atoms(bank)
        .iter()
        .map(|channel_atoms| {
            channel_atoms
                .iter()
                .map(|atom| f.iter().zip(atom).map(|(x, y)| x * y.conj()).sum())
                .collect()
        })
        .collect()
}
