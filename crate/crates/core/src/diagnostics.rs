//! Frame bounds of warped banks.
//!
//! Three estimates are produced:
//!
//! * the extremes of the frame-operator diagonal `sum_m (1/a_m) |g_m|^2`,
//!   which are the exact bounds in the painless case;
//! * the sufficient bounds `A_suff`, `B_suff` built from the diagonal minus
//!   (plus) the aliasing cross terms `|g_m(t) g_m(t - k/a_m)|`;
//! * empirical bounds from power iteration on the frame operator.
//!
//! Whenever `A_suff > 0` they satisfy `A_suff <= A_emp <= B_emp <= B_suff`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::bank::{BankKind, Channel, ChannelRole, WarpedBank};
use crate::error::Result;
use crate::transform::FrameOperator;
use crate::warping::{Domain, WarpingFunction};

pub const DEFAULT_OVERSAMPLE: usize = 8;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Minimum and maximum of the diagonal over all bins.
pub fn diagonal_bounds(bank: &WarpedBank) -> (f64, f64) {
    let diag = bank.diagonal();
    extremes(&diag)
}

fn extremes(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

/// Normalized amplitude `sqrt(L / a_m) g_m` of a channel at a point of the
/// dense grid `t = i fs / (L * oversample)`.
struct Amplitude<'a> {
    channel: &'a Channel,
    closed_form: Option<(&'a WarpingFunction, &'a crate::prototypes::PrototypeWindow)>,
    /// Inclusive dense-index window where the channel may be nonzero.
    lo: i64,
    hi: i64,
    oversample: i64,
    spacing: f64,
    slots_sqrt: f64,
}

impl Amplitude<'_> {
    fn at(&self, i: i64) -> f64 {
        if i < self.lo || i > self.hi {
            return 0.0;
        }
        match self.closed_form {
            Some((warp, proto)) => {
                let t = i as f64 * self.spacing;
                let t = if self.channel.role == ChannelRole::Mirrored {
                    -t
                } else {
                    t
                };
                proto.eval(warp.forward(t) - self.channel.m as f64)
            }
            None => {
                if i % self.oversample != 0 {
                    return 0.0;
                }
                let k = i / self.oversample - self.channel.first_bin;
                self.slots_sqrt * self.channel.response[k as usize]
            }
        }
    }
}

/// Sufficient lower and upper frame bounds evaluated on a grid
/// `oversample` times denser than the bins.
///
/// Analysis and tight banks are evaluated with the closed-form responses;
/// dual banks, whose responses are not closed form, fall back to the bins.
/// Cross terms run over the shifts `k L / a_m`, `k = 1..a_m - 1`, which are the
/// distinct aliases on a length-`L` grid.
pub fn sufficient_bounds(bank: &WarpedBank, oversample: usize) -> (f64, f64) {
    let grid = bank.grid();
    let closed = bank.kind() != BankKind::Dual;
    let ov = if closed { oversample.max(1) as i64 } else { 1 };
    let half = grid.nyquist_bin() * ov;
    let spacing = grid.bin_spacing() / ov as f64;
    let offset = half - 1; // dense index i maps to storage (i + offset)
    let size = (2 * half) as usize;
    let mut lower = vec![0.0; size];
    let mut upper = vec![0.0; size];
    let warped_bins = grid.warped_bins();

    for ch in bank.channels() {
        let (lo, hi) = if ch.is_residual() || !closed {
            let Some((first, last)) = ch.support_bins() else {
                continue;
            };
            (first * ov, last * ov)
        } else {
            // the closed form lives on the warped bins (mirrored for the
            // negative half); channels narrower than a bin still count at
            // the dense points between bins
            let (wlo, whi) = match (grid.domain, ch.role) {
                (Domain::FullLine, _) => (-half + 1, half),
                (_, ChannelRole::Mirrored) => {
                    (-*warped_bins.end() * ov, -*warped_bins.start() * ov)
                }
                _ => (*warped_bins.start() * ov, *warped_bins.end() * ov),
            };
            let warp = bank.warping();
            let (c, d) = bank.prototype().support();
            let lo_hz = warp
                .eval_inv(c + ch.m as f64)
                .max(warp.domain().lower_endpoint());
            let hi_hz = warp.eval_inv(d + ch.m as f64);
            let (clo, chi) = ((lo_hz / spacing).floor(), (hi_hz / spacing).ceil());
            let (clo, chi) = if ch.role == ChannelRole::Mirrored {
                (-chi, -clo)
            } else {
                (clo, chi)
            };
            let clamp = |v: f64| v.clamp(wlo as f64, whi as f64) as i64;
            (clamp(clo), clamp(chi))
        };
        let amp = Amplitude {
            channel: ch,
            closed_form: (closed && !ch.is_residual())
                .then_some((bank.warping(), bank.prototype())),
            lo,
            hi,
            oversample: ov,
            spacing,
            slots_sqrt: (ch.slots as f64).sqrt(),
        };
        let stride = ch.slots as i64 * ov;
        for i in lo..=hi {
            let a = amp.at(i);
            if a == 0.0 {
                continue;
            }
            let idx = (i + offset) as usize;
            lower[idx] += a * a;
            upper[idx] += a * a;
            let mut cross = 0.0;
            let q_lo = (lo - i).div_euclid(stride);
            let q_hi = (hi - i).div_euclid(stride);
            for q in q_lo..=q_hi {
                if q == 0 {
                    continue;
                }
                let partner = i + q * stride;
                if q.unsigned_abs() as usize >= ch.a {
                    continue;
                }
                cross += (a * amp.at(partner)).abs();
            }
            lower[idx] -= cross;
            upper[idx] += cross;
        }
    }

    // points between DC/Nyquist and the first/last warped bin of a half-line
    // grid belong to no channel and are skipped, as are the points between
    // +fs/2 and the first negative bin where the full line wraps around
    let evaluated = |i: i64| -> bool {
        match grid.domain {
            Domain::FullLine => i >= -half + ov,
            Domain::PositiveHalfLine => {
                let a = i.abs();
                a == 0 || a == half || (a >= ov && a <= half - ov)
            }
        }
    };
    let mut a_suff = f64::INFINITY;
    let mut b_suff = f64::NEG_INFINITY;
    for i in (-half + 1)..=half {
        if !evaluated(i) {
            continue;
        }
        let idx = (i + offset) as usize;
        a_suff = a_suff.min(lower[idx]);
        b_suff = b_suff.max(upper[idx]);
    }
    (a_suff, b_suff)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsMethod {
    Diagonal,
    PowerIteration,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalBounds {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub converged: bool,
    pub method: BoundsMethod,
}

/// Extreme eigenvalues of the frame operator. Painless banks read them off
/// the diagonal; other banks use [`power_iteration_bounds`].
pub fn empirical_bounds(bank: &WarpedBank, tol: f64, max_iter: usize) -> Result<EmpiricalBounds> {
    if bank.is_painless() {
        let (lower, upper) = diagonal_bounds(bank);
        return Ok(EmpiricalBounds {
            lower,
            upper,
            iterations: 0,
            converged: true,
            method: BoundsMethod::Diagonal,
        });
    }
    power_iteration_bounds(bank, tol, max_iter)
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// Result of a single power iteration run.
#[derive(Clone, Debug)]
pub struct PowerIteration {
    pub eigenvalue: f64,
    pub vector: Vec<Complex64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration on `shift * I - sign * S` style operators, stopping when
/// the eigen-residual `||A x - lambda x||` drops below `tol * scale`.
pub fn power_iteration(
    apply: impl Fn(&[Complex64]) -> Result<Vec<Complex64>>,
    len: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<PowerIteration> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<Complex64> = (0..len)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let n0 = norm(&x);
    x.iter_mut().for_each(|v| *v /= n0);
    let mut lambda = 0.0;
    for iter in 1..=max_iter {
        let ax = apply(&x)?;
        lambda = inner(&ax, &x).re;
        let residual = ax
            .iter()
            .zip(&x)
            .map(|(a, v)| (a - v * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let n = norm(&ax);
        if n == 0.0 {
            return Ok(PowerIteration {
                eigenvalue: 0.0,
                vector: x,
                iterations: iter,
                converged: true,
            });
        }
        let done = residual <= tol * lambda.abs().max(f64::MIN_POSITIVE);
        x = ax.into_iter().map(|v| v / n).collect();
        if done {
            return Ok(PowerIteration {
                eigenvalue: lambda,
                vector: x,
                iterations: iter,
                converged: true,
            });
        }
    }
    Ok(PowerIteration {
        eigenvalue: lambda,
        vector: x,
        iterations: max_iter,
        converged: false,
    })
}

/// Upper bound by power iteration on `S`, lower bound by power iteration on
/// `B I - S`.
pub fn power_iteration_bounds(
    bank: &WarpedBank,
    tol: f64,
    max_iter: usize,
) -> Result<EmpiricalBounds> {
    let len = bank.len();
    let op = FrameOperator::new(bank);
    let top = power_iteration(|x| op.apply(x), len, tol, max_iter, 0x5eed)?;
    let upper = top.eigenvalue;
    let shifted = power_iteration(
        |x| {
            let sx = op.apply(x)?;
            Ok(x.iter().zip(sx).map(|(v, s)| v * upper - s).collect())
        },
        len,
        tol,
        max_iter,
        0x5eed + 1,
    )?;
    Ok(EmpiricalBounds {
        lower: (upper - shifted.eigenvalue).max(0.0),
        upper,
        iterations: top.iterations + shifted.iterations,
        converged: top.converged && shifted.converged,
        method: BoundsMethod::PowerIteration,
    })
}

/// Outcome of the decay heuristic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub epsilon: f64,
    pub compact_support: bool,
    /// Smallest measured exponent `p` with `theta = O((1 + |t|)^-p)`.
    pub exponent_linear: Option<f64>,
    /// Smallest measured exponent `p` with `theta = O((1 + |F^-1(t)|)^-p)`.
    pub exponent_warped: Option<f64>,
    pub satisfied: bool,
    pub verdict: String,
}

/// Checks the two decay hypotheses `theta = O((1+|t|)^(-1-eps))` and
/// `theta = O((1+|F^-1(t)|)^(-1-eps))` heuristically.
///
/// Compactly supported prototypes satisfy both. Otherwise the exponents are
/// measured as log-log slopes over `|t|` in `[10, 1e6]` on both tails.
pub fn decay_check(
    theta: &dyn Fn(f64) -> f64,
    support: Option<(f64, f64)>,
    warping: &WarpingFunction,
    epsilon: f64,
) -> DecayReport {
    if support.is_some() {
        return DecayReport {
            epsilon,
            compact_support: true,
            exponent_linear: None,
            exponent_warped: None,
            satisfied: true,
            verdict: "satisfied: compact support".into(),
        };
    }
    let points = crate::warping::logspace(10.0, 1e6, 200);
    let measure = |scale: &dyn Fn(f64) -> f64| -> f64 {
        let mut worst = f64::INFINITY;
        for sign in [-1.0, 1.0] {
            for pair in points.windows(2) {
                let (t0, t1) = (sign * pair[0], sign * pair[1]);
                let (v0, v1) = (theta(t0).abs(), theta(t1).abs());
                let (s0, s1) = ((1.0 + scale(t0).abs()).ln(), (1.0 + scale(t1).abs()).ln());
                if !(s1 - s0).is_normal() || s1 == s0 {
                    continue;
                }
                if v1 == 0.0 {
                    continue;
                }
                if v0 == 0.0 {
                    worst = worst.min(f64::NEG_INFINITY);
                    continue;
                }
                let p = -(v1.ln() - v0.ln()) / (s1 - s0);
                worst = worst.min(p);
            }
        }
        worst
    };
    let linear = measure(&|t| t);
    let warped = measure(&|t| warping.eval_inv(t));
    let needed = 1.0 + epsilon;
    let tolerance = 1e-9;
    let ok = |p: f64| p.is_infinite() && p > 0.0 || p >= needed - tolerance;
    let satisfied = ok(linear) && ok(warped);
    let verdict = if satisfied {
        format!("satisfied: measured exponents {linear:.4} / {warped:.4} >= {needed}")
    } else {
        format!("violated: measured exponents {linear:.4} / {warped:.4}, need {needed}")
    };
    DecayReport {
        epsilon,
        compact_support: false,
        exponent_linear: Some(linear),
        exponent_warped: Some(warped),
        satisfied,
        verdict,
    }
}

/// Full frame diagnostics of a bank.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub diag_inf: f64,
    pub diag_sup: f64,
    #[serde(rename = "A_suff")]
    pub a_suff: f64,
    #[serde(rename = "B_suff")]
    pub b_suff: f64,
    #[serde(rename = "A_emp")]
    pub a_emp: f64,
    #[serde(rename = "B_emp")]
    pub b_emp: f64,
    pub tightness_ratio: f64,
    pub painless: bool,
    pub channel_painless: Vec<(i32, bool)>,
    pub method: BoundsMethod,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct ReportOptions {
    pub oversample: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            oversample: DEFAULT_OVERSAMPLE,
            tol: DEFAULT_TOLERANCE,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

pub fn frame_report(bank: &WarpedBank, options: ReportOptions) -> Result<FrameReport> {
    let (diag_inf, diag_sup) = diagonal_bounds(bank);
    let (a_suff, b_suff) = sufficient_bounds(bank, options.oversample);
    let emp = empirical_bounds(bank, options.tol, options.max_iter)?;
    let mut warnings = Vec::new();
    let holes = bank.diagonal().iter().filter(|&&d| !(d > 0.0)).count();
    if holes > 0 {
        warnings.push(format!(
            "coverage: {holes} frequency bins are not covered by any channel; not a frame"
        ));
    }
    if !(a_suff > 0.0) {
        warnings.push(format!(
            "sufficient lower bound inconclusive (A_suff = {a_suff:.6e} <= 0)"
        ));
    }
    if !emp.converged {
        warnings.push(format!(
            "power iteration did not converge after {} iterations; bounds are the last iterate",
            emp.iterations
        ));
    }
    if bank.warping().moderate_constant_is_searched() {
        warnings.push(format!(
            "moderateness constant C = {} determined by grid search",
            bank.warping().moderate_constant()
        ));
    }
    let tightness_ratio = if emp.lower > 0.0 {
        emp.upper / emp.lower
    } else {
        f64::INFINITY
    };
    Ok(FrameReport {
        diag_inf,
        diag_sup,
        a_suff,
        b_suff,
        a_emp: emp.lower,
        b_emp: emp.upper,
        tightness_ratio,
        painless: bank.is_painless(),
        channel_painless: bank
            .channels()
            .iter()
            .map(|ch| (ch.m, ch.is_painless()))
            .collect(),
        method: emp.method,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scale: f64,
    #[serde(rename = "A_emp")]
    pub a_emp: f64,
    #[serde(rename = "B_emp")]
    pub b_emp: f64,
    pub tightness_ratio: f64,
    pub painless: bool,
}

/// Empirical bounds after scaling every downsampling factor by each entry
/// of `scales`.
pub fn factor_sweep(
    bank: &WarpedBank,
    scales: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<SweepRow>> {
    scales
        .iter()
        .map(|&scale| {
            let scaled = bank.with_scaled_factors(scale)?;
            let emp = empirical_bounds(&scaled, tol, max_iter)?;
            Ok(SweepRow {
                scale,
                a_emp: emp.lower,
                b_emp: emp.upper,
                tightness_ratio: if emp.lower > 0.0 {
                    emp.upper / emp.lower
                } else {
                    f64::INFINITY
                },
                painless: scaled.is_painless(),
            })
        })
        .collect()
}
