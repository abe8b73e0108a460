//! Warped filter banks on a discrete frequency grid.
//!
//! Channel `m` has the frequency response `g_m(xi) = sqrt(a_m / L) theta(F(xi) - m)`
//! sampled at the bins `xi_j = j fs / L`, and `L / a_m` time positions spaced
//! `a_m` samples apart. With the unitary DFT this makes the frame-operator
//! diagonal `sum_m (L / a_m) |g_m(xi)|^2` equal to `sum_m theta(F(xi) - m)^2`,
//! independent of the grid.
//!
//! Banks on the half-line `(0, inf)` are completed to the whole circle: each
//! positive channel gets a mirrored twin on the negative bins, and DC and
//! Nyquist each get a single-coefficient residual channel.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, WarpError};
use crate::prototypes::PrototypeWindow;
use crate::warping::{Domain, WarpingFunction};

/// Length, sample rate and domain of the discrete frequency grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "L")]
    pub len: usize,
    #[serde(rename = "fs")]
    pub sample_rate: f64,
    pub domain: Domain,
}

impl GridSpec {
    pub fn new(len: usize, sample_rate: f64, domain: Domain) -> Result<Self> {
        if len < 4 || !len.is_multiple_of(2) {
            return Err(WarpError::InvalidParameter(format!(
                "signal length must be even and at least 4, got {len}"
            )));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(WarpError::InvalidParameter(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        Ok(GridSpec {
            len,
            sample_rate,
            domain,
        })
    }

    /// Distance between neighbouring bins in Hz.
    pub fn bin_spacing(&self) -> f64 {
        self.sample_rate / self.len as f64
    }

    pub fn nyquist_bin(&self) -> i64 {
        (self.len / 2) as i64
    }

    /// Maps a signed bin in `(-L/2, L/2]` to its storage index in `0..L`.
    pub fn bin_index(&self, signed: i64) -> usize {
        signed.rem_euclid(self.len as i64) as usize
    }

    /// Maps a storage index to the signed bin in `(-L/2, L/2]`.
    pub fn signed_bin(&self, index: usize) -> i64 {
        let half = self.len / 2;
        if index <= half {
            index as i64
        } else {
            index as i64 - self.len as i64
        }
    }

    pub fn bin_frequency(&self, signed: i64) -> f64 {
        signed as f64 * self.bin_spacing()
    }

    /// Signed bins whose frequency lies in the warping domain and that are
    /// covered by warped channels (not by residual channels).
    pub fn warped_bins(&self) -> RangeInclusive<i64> {
        match self.domain {
            Domain::FullLine => (1 - self.nyquist_bin())..=self.nyquist_bin(),
            Domain::PositiveHalfLine => 1..=(self.nyquist_bin() - 1),
        }
    }

    /// Frequency interval (Hz) spanned by the warped part of the grid.
    pub fn warped_interval(&self) -> (f64, f64) {
        match self.domain {
            Domain::FullLine => (-0.5 * self.sample_rate, 0.5 * self.sample_rate),
            Domain::PositiveHalfLine => {
                let bins = self.warped_bins();
                (
                    self.bin_frequency(*bins.start()),
                    self.bin_frequency(*bins.end()),
                )
            }
        }
    }

    /// All divisors of `L` in increasing order.
    pub fn divisors(&self) -> Vec<usize> {
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut k = 1;
        while k * k <= self.len {
            if self.len.is_multiple_of(k) {
                small.push(k);
                if k * k != self.len {
                    large.push(self.len / k);
                }
            }
            k += 1;
        }
        small.extend(large.into_iter().rev());
        small
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelRole {
    /// `theta(F(xi) - m)` on the warping domain.
    Warped,
    /// Mirror image of a half-line channel on the negative bins.
    Mirrored,
    /// Single-bin channel holding DC on the half-line.
    ResidualDc,
    /// Single-bin channel holding Nyquist on the half-line.
    ResidualNyquist,
}

/// Channel label used for the DC residual channel in files.
pub const DC_LABEL: i32 = i32::MIN;
/// Channel label used for the Nyquist residual channel in files.
pub const NYQUIST_LABEL: i32 = i32::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    pub m: i32,
    pub role: ChannelRole,
    pub center_hz: f64,
    /// Downsampling factor in samples; divides `L`.
    pub a: usize,
    /// Number of time positions `L / a`.
    pub slots: usize,
    /// Signed bin of `response[0]`.
    pub first_bin: i64,
    /// Sampled frequency response over consecutive signed bins; leading and
    /// trailing zeros are trimmed.
    pub response: Vec<f64>,
}

impl Channel {
    /// Inclusive signed-bin interval of the nonzero response, if any.
    pub fn support_bins(&self) -> Option<(i64, i64)> {
        if self.response.is_empty() {
            None
        } else {
            Some((
                self.first_bin,
                self.first_bin + self.response.len() as i64 - 1,
            ))
        }
    }

    /// Painless when the response spans no more bins than time positions.
    pub fn is_painless(&self) -> bool {
        self.response.len() <= self.slots
    }

    pub fn is_residual(&self) -> bool {
        matches!(
            self.role,
            ChannelRole::ResidualDc | ChannelRole::ResidualNyquist
        )
    }

    /// Iterates `(storage index, response value)` pairs.
    pub fn bins<'a>(&'a self, grid: &'a GridSpec) -> impl Iterator<Item = (usize, f64)> + 'a {
        self.response
            .iter()
            .enumerate()
            .map(move |(i, &g)| (grid.bin_index(self.first_bin + i as i64), g))
    }
}

/// How downsampling factors are chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum FactorPolicy {
    /// `a_m = a_tilde / (C v(m))`; `a_tilde` defaults to the painless bound
    /// at `m = 0`.
    Natural { a_tilde: Option<f64> },
    /// The largest `a_m` with `1/a_m >= F^-1(d + m) - F^-1(c + m)`.
    Painless,
    /// `(m, a_m in samples)` pairs. Channels not listed are omitted and
    /// coverage holes are allowed.
    Explicit { factors: Vec<(i32, usize)> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BankKind {
    Analysis,
    Dual,
    Tight,
}

#[derive(Clone, Debug)]
pub struct WarpedBank {
    warping: WarpingFunction,
    prototype: PrototypeWindow,
    grid: GridSpec,
    policy: FactorPolicy,
    kind: BankKind,
    channels: Vec<Channel>,
}

/// Smallest and largest `m` whose shifted support `[c + m, d + m]` meets the
/// warped image of the grid.
pub fn channel_range(
    warping: &WarpingFunction,
    prototype: &PrototypeWindow,
    grid: &GridSpec,
) -> Result<(i32, i32)> {
    if warping.domain() != grid.domain {
        return Err(WarpError::InvalidParameter(
            "grid domain differs from the warping domain".into(),
        ));
    }
    let (lo_hz, hi_hz) = grid.warped_interval();
    let (c, d) = prototype.support();
    let lo = warping.forward(lo_hz) - d;
    let hi = warping.forward(hi_hz) - c;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(WarpError::EmptyBank);
    }
    let (m_min, m_max) = (lo.floor(), hi.ceil());
    if m_min > m_max || m_min < i32::MIN as f64 + 1.0 || m_max > i32::MAX as f64 - 1.0 {
        return Err(WarpError::EmptyBank);
    }
    Ok((m_min as i32, m_max as i32))
}

/// Natural factors `a_m = a_tilde / (C v(m))` (continuous, in seconds when
/// the grid is in Hz).
pub fn natural_factors(
    warping: &WarpingFunction,
    a_tilde: f64,
    range: RangeInclusive<i32>,
) -> Vec<f64> {
    let c = warping.moderate_constant();
    range
        .map(|m| a_tilde / (c * warping.eval_v(m as f64)))
        .collect()
}

/// Warped bandwidth `F^-1(d + m) - F^-1(c + m)` of translate `m`, clamped to
/// the domain.
pub fn warped_bandwidth(warping: &WarpingFunction, support: (f64, f64), m: f64) -> f64 {
    let lower_end = warping.domain().lower_endpoint();
    let lo = warping.eval_inv(support.0 + m).max(lower_end);
    let hi = warping.eval_inv(support.1 + m);
    hi - lo
}

/// Largest factors satisfying the painless inequality with equality.
pub fn painless_factors(
    warping: &WarpingFunction,
    support: (f64, f64),
    range: RangeInclusive<i32>,
) -> Vec<f64> {
    range
        .map(|m| 1.0 / warped_bandwidth(warping, support, m as f64))
        .collect()
}

/// Converts continuous factors to samples and rounds each down to the
/// largest divisor of `L` (at least one).
pub fn round_factors_to_grid(a_real: &[f64], grid: &GridSpec) -> Vec<usize> {
    let divisors = grid.divisors();
    a_real
        .iter()
        .map(|&a| {
            let samples = a * grid.sample_rate;
            divisors
                .iter()
                .rev()
                .copied()
                .find(|&k| (k as f64) <= samples)
                .unwrap_or(1)
        })
        .collect()
}

fn largest_divisor_at_most(grid: &GridSpec, bound: usize) -> usize {
    grid.divisors()
        .into_iter()
        .rev()
        .find(|&k| k <= bound)
        .unwrap_or(1)
}

/// Samples `theta(F(xi) - m)` over the signed bins in `bins` that fall
/// inside the shifted support, trimming zero ends.
fn sample_prototype(
    warping: &WarpingFunction,
    prototype: &PrototypeWindow,
    grid: &GridSpec,
    m: i32,
    bins: &RangeInclusive<i64>,
) -> (i64, Vec<f64>) {
    let (c, d) = prototype.support();
    let spacing = grid.bin_spacing();
    let lower_end = warping.domain().lower_endpoint();
    let lo_hz = warping.eval_inv(c + m as f64).max(lower_end);
    let hi_hz = warping.eval_inv(d + m as f64);
    let lo = ((lo_hz / spacing).floor() - 1.0).max(*bins.start() as f64);
    let hi = ((hi_hz / spacing).ceil() + 1.0).min(*bins.end() as f64);
    if !(lo <= hi) {
        return (0, Vec::new());
    }
    let (lo, hi) = (lo as i64, hi as i64);
    let values: Vec<f64> = (lo..=hi)
        .map(|k| prototype.eval(warping.forward(grid.bin_frequency(k)) - m as f64))
        .collect();
    let Some(start) = values.iter().position(|&v| v != 0.0) else {
        return (0, Vec::new());
    };
    let end = values.iter().rposition(|&v| v != 0.0).unwrap();
    (lo + start as i64, values[start..=end].to_vec())
}

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

impl WarpedBank {
    /// Builds the warped filter bank for `warping`, `prototype` and the given
    /// factor policy.
    pub fn build(
        warping: &WarpingFunction,
        prototype: &PrototypeWindow,
        grid: &GridSpec,
        policy: FactorPolicy,
    ) -> Result<Self> {
        let (m_min, m_max) = channel_range(warping, prototype, grid)?;
        let support = prototype.support();
        let layout: Vec<(i32, usize)> = match &policy {
            FactorPolicy::Natural { a_tilde } => {
                let a_tilde = match a_tilde {
                    Some(a) if a.is_finite() && *a > 0.0 => *a,
                    Some(a) => {
                        return Err(WarpError::InvalidParameter(format!(
                            "natural factor scale must be positive, got {a}"
                        )))
                    }
                    None => 1.0 / warped_bandwidth(warping, support, 0.0),
                };
                let real = natural_factors(warping, a_tilde, m_min..=m_max);
                (m_min..=m_max)
                    .zip(round_factors_to_grid(&real, grid))
                    .collect()
            }
            FactorPolicy::Painless => {
                let real = painless_factors(warping, support, m_min..=m_max);
                (m_min..=m_max)
                    .zip(round_factors_to_grid(&real, grid))
                    .collect()
            }
            FactorPolicy::Explicit { factors } => {
                let mut factors = factors.clone();
                factors.sort_by_key(|&(m, _)| m);
                for pair in factors.windows(2) {
                    if pair[0].0 == pair[1].0 {
                        return Err(WarpError::InvalidParameter(format!(
                            "channel {} listed twice",
                            pair[0].0
                        )));
                    }
                }
                for &(m, a) in &factors {
                    if a == 0 || !grid.len.is_multiple_of(a) {
                        return Err(WarpError::InvalidParameter(format!(
                            "factor {a} of channel {m} does not divide L = {}",
                            grid.len
                        )));
                    }
                    if m == DC_LABEL || m == NYQUIST_LABEL {
                        return Err(WarpError::InvalidParameter(format!(
                            "channel label {m} is reserved"
                        )));
                    }
                }
                if factors.is_empty() {
                    return Err(WarpError::EmptyBank);
                }
                factors
            }
        };

        let bins = grid.warped_bins();
        let warped: Vec<Channel> = par_map(&layout, |&(m, a)| {
            let (first_bin, theta) = sample_prototype(warping, prototype, grid, m, &bins);
            let scale = (a as f64 / grid.len as f64).sqrt();
            Channel {
                m,
                role: ChannelRole::Warped,
                center_hz: warping.eval_inv(m as f64),
                a,
                slots: grid.len / a,
                first_bin,
                response: theta.into_iter().map(|v| scale * v).collect(),
            }
        });

        let channels = match grid.domain {
            Domain::FullLine => warped,
            Domain::PositiveHalfLine => {
                let residual = prototype.sum_of_squares_constant().unwrap_or(1.0).sqrt();
                let mut all = Vec::with_capacity(2 * warped.len() + 2);
                all.extend(warped.iter().rev().map(|ch| Channel {
                    role: ChannelRole::Mirrored,
                    center_hz: -ch.center_hz,
                    first_bin: ch.support_bins().map(|(_, last)| -last).unwrap_or(0),
                    response: ch.response.iter().rev().copied().collect(),
                    ..ch.clone()
                }));
                all.push(Channel {
                    m: DC_LABEL,
                    role: ChannelRole::ResidualDc,
                    center_hz: 0.0,
                    a: grid.len,
                    slots: 1,
                    first_bin: 0,
                    response: vec![residual],
                });
                all.extend(warped);
                all.push(Channel {
                    m: NYQUIST_LABEL,
                    role: ChannelRole::ResidualNyquist,
                    center_hz: 0.5 * grid.sample_rate,
                    a: grid.len,
                    slots: 1,
                    first_bin: grid.nyquist_bin(),
                    response: vec![residual],
                });
                all
            }
        };

        let bank = WarpedBank {
            warping: *warping,
            prototype: prototype.clone(),
            grid: *grid,
            policy,
            kind: BankKind::Analysis,
            channels,
        };
        if !matches!(bank.policy, FactorPolicy::Explicit { .. }) {
            if let Some(bin) = bank.diagonal().iter().position(|&d| !(d > 0.0)) {
                return Err(WarpError::CoverageError { bin });
            }
        }
        Ok(bank)
    }

    /// One-call tight frame: normalized cosine-sum window, painless factors
    /// rounded to the grid.
    pub fn design_tight(
        warping: &WarpingFunction,
        grid: &GridSpec,
        coeffs: &[f64],
        stretch: f64,
    ) -> Result<Self> {
        let window = PrototypeWindow::cosine_sum(coeffs, stretch)?.normalize_for_tightness()?;
        Self::design_tight_with(warping, grid, &window)
    }

    /// Tight design from an already constructed cosine-sum window, which is
    /// normalized first.
    pub fn design_tight_with(
        warping: &WarpingFunction,
        grid: &GridSpec,
        window: &PrototypeWindow,
    ) -> Result<Self> {
        let window = window.normalize_for_tightness()?;
        let mut bank = Self::build(warping, &window, grid, FactorPolicy::Painless)?;
        if let Some(ch) = bank.channels.iter().find(|ch| !ch.is_painless()) {
            return Err(WarpError::NotPainless {
                m: ch.m,
                span: ch.response.len(),
                slots: ch.slots,
            });
        }
        bank.kind = BankKind::Tight;
        Ok(bank)
    }

    /// Same channels with every factor multiplied by `scale` and rounded
    /// down to a divisor of `L`.
    pub fn with_scaled_factors(&self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(WarpError::InvalidParameter(format!(
                "factor scale must be positive, got {scale}"
            )));
        }
        let factors = self
            .channels
            .iter()
            .filter(|ch| ch.role == ChannelRole::Warped)
            .map(|ch| {
                let bound = (ch.a as f64 * scale).floor().max(1.0) as usize;
                (ch.m, largest_divisor_at_most(&self.grid, bound))
            })
            .collect();
        Self::build(
            &self.warping,
            &self.prototype,
            &self.grid,
            FactorPolicy::Explicit { factors },
        )
    }

    pub fn warping(&self) -> &WarpingFunction {
        &self.warping
    }

    pub fn prototype(&self) -> &PrototypeWindow {
        &self.prototype
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn policy(&self) -> &FactorPolicy {
        &self.policy
    }

    pub fn kind(&self) -> BankKind {
        self.kind
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn len(&self) -> usize {
        self.grid.len
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn is_painless(&self) -> bool {
        self.channels.iter().all(Channel::is_painless)
    }

    /// Total number of coefficients, `sum_m L / a_m`.
    pub fn coefficient_count(&self) -> usize {
        self.channels.iter().map(|ch| ch.slots).sum()
    }

    pub(crate) fn set_kind(&mut self, kind: BankKind) {
        self.kind = kind;
    }

    pub(crate) fn set_policy(&mut self, policy: FactorPolicy) {
        self.policy = policy;
    }

    /// Frame-operator diagonal `sum_m (L / a_m) |g_m(xi_j)|^2` over all `L` bins
    /// (storage order).
    pub fn diagonal(&self) -> Vec<f64> {
        let mut diag = vec![0.0; self.grid.len];
        for ch in &self.channels {
            let slots = ch.slots as f64;
            for (j, g) in ch.bins(&self.grid) {
                diag[j] += slots * g * g;
            }
        }
        diag
    }

    /// Canonical dual of a painless bank: `g_m / diagonal`.
    pub fn painless_dual(&self) -> Result<Self> {
        if let Some(ch) = self.channels.iter().find(|ch| !ch.is_painless()) {
            return Err(WarpError::NotPainless {
                m: ch.m,
                span: ch.response.len(),
                slots: ch.slots,
            });
        }
        let diag = self.diagonal();
        let mut dual = self.clone();
        for ch in &mut dual.channels {
            for (i, g) in ch.response.iter_mut().enumerate() {
                let j = self.grid.bin_index(ch.first_bin + i as i64);
                if !(diag[j] > 0.0) {
                    return Err(WarpError::CoverageError { bin: j });
                }
                *g /= diag[j];
            }
        }
        if let Some(bin) = diag.iter().position(|&d| !(d > 0.0)) {
            return Err(WarpError::CoverageError { bin });
        }
        dual.kind = BankKind::Dual;
        Ok(dual)
    }

    /// Hash of the channel geometry: labels and coefficient counts in order.
    pub fn fingerprint(&self) -> u64 {
        geometry_fingerprint(self.channels.iter().map(|ch| (ch.m, ch.slots)))
    }

    /// Fingerprint of the half-spectrum coefficient layout used for real
    /// signals (mirrored channels dropped).
    pub fn half_fingerprint(&self) -> u64 {
        geometry_fingerprint(
            self.channels
                .iter()
                .filter(|ch| ch.role != ChannelRole::Mirrored)
                .map(|ch| (ch.m, ch.slots)),
        )
    }

    /// Continuous warped response `theta(F(t) - m)` of a warped channel (no
    /// `sqrt(a_m)` factor).
    pub fn theta_fm(&self, m: i32, t: f64) -> f64 {
        if !self.warping.domain().contains(t) {
            return 0.0;
        }
        self.prototype.eval(self.warping.forward(t) - m as f64)
    }

    /// Bandwidth `F^-1(m + R/2) - F^-1(m - R/2)` of channel `m` in Hz.
    pub fn bandwidth_hz(&self, m: i32) -> f64 {
        warped_bandwidth(&self.warping, self.prototype.support(), m as f64)
    }
}

pub fn geometry_fingerprint(layout: impl Iterator<Item = (i32, usize)>) -> u64 {
    let mut hasher = Sha256::new();
    for (m, len) in layout {
        hasher.update(m.to_le_bytes());
        hasher.update((len as u64).to_le_bytes());
    }
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}
