//! Warping functions: bijective, increasing frequency scales `F: D -> R`.
//!
//! Four closed-form families are provided. Each one carries its inverse, its
//! derivative, the weight `w = (F^-1)'`, a submultiplicative weight `v` and the
//! constant `C` for which `w(x + y) <= C v(x) w(y)`.
//!
//! | family      | domain | `F(t)`                                 |
//! |-------------|--------|----------------------------------------|
//! | `Log`       | `R+`   | `c log(t/d)`                           |
//! | `SymPow`    | `R+`   | `c ((t/d)^l - (t/d)^-l)`               |
//! | `ErbLike`   | `R`    | `sgn(t) c log(1 + abs(t)/d)`           |
//! | `SignedPow` | `R`    | `sgn(t) c ((abs(t)/d + 1)^l - 1)`      |
//!
//! All evaluators are closed form and written to avoid cancellation near the
//! origin and near the singular end of `R+`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WarpError};

/// The domain `D` of a warping function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// `D = R`; the warping function is odd.
    FullLine,
    /// `D = (0, inf)`.
    PositiveHalfLine,
}

impl Domain {
    pub fn contains(self, t: f64) -> bool {
        match self {
            Domain::FullLine => t.is_finite(),
            Domain::PositiveHalfLine => t.is_finite() && t > 0.0,
        }
    }

    /// Image of the lower end of the domain under `F^-1` as `x -> -inf`.
    pub fn lower_endpoint(self) -> f64 {
        match self {
            Domain::FullLine => f64::NEG_INFINITY,
            Domain::PositiveHalfLine => 0.0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Domain::FullLine => "R",
            Domain::PositiveHalfLine => "(0, inf)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Log,
    SymPow,
    ErbLike,
    SignedPow,
}

impl Family {
    pub fn domain(self) -> Domain {
        match self {
            Family::Log | Family::SymPow => Domain::PositiveHalfLine,
            Family::ErbLike | Family::SignedPow => Domain::FullLine,
        }
    }

    pub fn uses_exponent(self) -> bool {
        matches!(self, Family::SymPow | Family::SignedPow)
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "log" | "wavelet" => Some(Family::Log),
            "sympow" | "sym_pow" => Some(Family::SymPow),
            "erb" | "erblike" | "erb_like" => Some(Family::ErbLike),
            "signedpow" | "signed_pow" | "alpha" => Some(Family::SignedPow),
            _ => None,
        }
    }
}

/// Auditory ERB scale constants (Hz).
pub const ERB_C: f64 = 9.265;
pub const ERB_D: f64 = 228.8;

/// Serialized form: `{family, c, d, l, C}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpingRecord {
    pub family: Family,
    pub c: f64,
    pub d: f64,
    pub l: f64,
    #[serde(rename = "C")]
    pub moderate_c: f64,
}

/// A warping function `F` together with its moderateness data.
///
/// Values are immutable after construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WarpingFunction {
    family: Family,
    c: f64,
    d: f64,
    l: f64,
    moderate_c: f64,
}

/// Half-width of the moderateness validation grid, in units of `c`.
const MODERATE_GRID_HALF_WIDTH: f64 = 20.0;
const MODERATE_GRID_POINTS: usize = 200;

impl WarpingFunction {
    /// Builds a member of one of the built-in families.
    ///
    /// `l` is only consulted for `SymPow` and `SignedPow` and must lie in
    /// `(0, 1]` there; the other families store `l = 1`.
    pub fn new(family: Family, c: f64, d: f64, l: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(WarpError::InvalidParameter(format!(
                "warping scale c must be positive, got {c}"
            )));
        }
        if !(d.is_finite() && d > 0.0) {
            return Err(WarpError::InvalidParameter(format!(
                "warping offset d must be positive, got {d}"
            )));
        }
        let l = if family.uses_exponent() {
            if !(l > 0.0 && l <= 1.0) {
                return Err(WarpError::InvalidParameter(format!(
                    "warping exponent l must lie in (0, 1], got {l}"
                )));
            }
            l
        } else {
            1.0
        };
        let mut warp = WarpingFunction {
            family,
            c,
            d,
            l,
            moderate_c: 1.0,
        };
        if family == Family::SymPow {
            warp.moderate_c = warp.search_moderate_constant()?;
        }
        Ok(warp)
    }

    pub fn log(c: f64, d: f64) -> Result<Self> {
        Self::new(Family::Log, c, d, 1.0)
    }

    pub fn sym_pow(c: f64, d: f64, l: f64) -> Result<Self> {
        Self::new(Family::SymPow, c, d, l)
    }

    pub fn erb_like(c: f64, d: f64) -> Result<Self> {
        Self::new(Family::ErbLike, c, d, 1.0)
    }

    /// The ERB scale, `sgn(t) 9.265 log(1 + abs(t)/228.8)` with `t` in Hz.
    pub fn erb() -> Self {
        Self::erb_like(ERB_C, ERB_D).expect("ERB constants are valid")
    }

    pub fn signed_pow(c: f64, d: f64, l: f64) -> Result<Self> {
        Self::new(Family::SignedPow, c, d, l)
    }

    /// Rebuilds a warping function from its record. The stored `C` must be a
    /// valid constant for the family; it is kept as given.
    pub fn from_record(record: &WarpingRecord) -> Result<Self> {
        let mut warp = Self::new(record.family, record.c, record.d, record.l)?;
        if !(record.moderate_c.is_finite() && record.moderate_c >= 1.0) {
            return Err(WarpError::InvalidParameter(format!(
                "moderateness constant must be >= 1, got {}",
                record.moderate_c
            )));
        }
        if record.moderate_c < warp.moderate_c {
            return Err(WarpError::InvalidParameter(format!(
                "moderateness constant {} is below the validated value {}",
                record.moderate_c, warp.moderate_c
            )));
        }
        warp.moderate_c = record.moderate_c;
        Ok(warp)
    }

    pub fn record(&self) -> WarpingRecord {
        WarpingRecord {
            family: self.family,
            c: self.c,
            d: self.d,
            l: self.l,
            moderate_c: self.moderate_c,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn domain(&self) -> Domain {
        self.family.domain()
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// The constant `C` in `w(x + y) <= C v(x) w(y)`.
    pub fn moderate_constant(&self) -> f64 {
        self.moderate_c
    }

    /// True when `C` was found by grid search rather than in closed form.
    pub fn moderate_constant_is_searched(&self) -> bool {
        self.family == Family::SymPow
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if self.domain().contains(t) {
            Ok(())
        } else {
            Err(WarpError::DomainError {
                value: t,
                domain: self.domain().name(),
            })
        }
    }

    /// `F(t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.forward(t))
    }

    /// `F'(t)`.
    pub fn eval_deriv(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.derivative(t))
    }

    /// `F^-1(x)`. Defined on all of `R`.
    pub fn eval_inv(&self, x: f64) -> f64 {
        let (c, d, l) = (self.c, self.d, self.l);
        match self.family {
            Family::Log => d * (x / c).exp(),
            Family::SymPow => d * ((x / (2.0 * c)).asinh() / l).exp(),
            Family::ErbLike => x.signum() * d * (x.abs() / c).exp_m1(),
            Family::SignedPow => x.signum() * d * ((x.abs() / c).ln_1p() / l).exp_m1(),
        }
    }

    /// The weight `w(x) = (F^-1)'(x) = 1 / F'(F^-1(x))`.
    pub fn eval_weight(&self, x: f64) -> f64 {
        let (c, d, l) = (self.c, self.d, self.l);
        match self.family {
            Family::Log => d / c * (x / c).exp(),
            Family::SymPow => {
                let u = x / (2.0 * c);
                self.eval_inv(x) / (2.0 * l * c * (1.0 + u * u).sqrt())
            }
            Family::ErbLike => d / c * (x.abs() / c).exp(),
            Family::SignedPow => d / (l * c) * (x.abs() / c + 1.0).powf(1.0 / l - 1.0),
        }
    }

    /// The submultiplicative weight `v`.
    pub fn eval_v(&self, x: f64) -> f64 {
        let (c, l) = (self.c, self.l);
        match self.family {
            Family::Log => (x / c).exp(),
            Family::SymPow => {
                // max{v1(u), v1(-u)}^(1+l), v1(u) = (1 + u + sqrt(u^2 + 4))^(1/l)
                let u = (x / c).abs();
                let base = 1.0 + u + (u * u + 4.0).sqrt();
                base.powf((1.0 + l) / l)
            }
            Family::ErbLike => (x.abs() / c).exp(),
            Family::SignedPow => (x.abs() / c + 1.0).powf(1.0 / l - 1.0),
        }
    }

    /// `F(t)` without the domain check. Returns `-inf` at `t = 0` for the
    /// half-line families.
    pub(crate) fn forward(&self, t: f64) -> f64 {
        let (c, d, l) = (self.c, self.d, self.l);
        match self.family {
            Family::Log => c * (t / d).ln(),
            Family::SymPow => 2.0 * c * (l * (t / d).ln()).sinh(),
            Family::ErbLike => t.signum() * c * (t.abs() / d).ln_1p(),
            Family::SignedPow => t.signum() * c * (l * (t.abs() / d).ln_1p()).exp_m1(),
        }
    }

    pub(crate) fn derivative(&self, t: f64) -> f64 {
        let (c, d, l) = (self.c, self.d, self.l);
        match self.family {
            Family::Log => c / t,
            Family::SymPow => 2.0 * l * c / t * (l * (t / d).ln()).cosh(),
            Family::ErbLike => c / (d + t.abs()),
            Family::SignedPow => l * c / d * (t.abs() / d + 1.0).powf(l - 1.0),
        }
    }

    /// Checks `F(y) + F(x + F^-1(0)) <= F(y + C v(F(y)) x)` for `x, y >= 0`,
    /// with an additive tolerance of `1e-10`.
    ///
    /// On the half-line `y` must be positive; `y = 0` maps to `-inf` and the
    /// inequality holds trivially.
    pub fn check_moderate_inequality(&self, x: f64, y: f64) -> bool {
        if x < 0.0 || y < 0.0 || !x.is_finite() || !y.is_finite() {
            return false;
        }
        if !self.domain().contains(y) {
            return true;
        }
        let fy = self.forward(y);
        let lhs = fy + self.forward(x + self.eval_inv(0.0));
        let rhs = self.forward(y + self.moderate_c * self.eval_v(fy) * x);
        lhs <= rhs + 1e-10
    }

    /// Evaluates `w(x + y) <= C v(x) w(y)` on a square grid of `points^2`
    /// pairs over `[-half_width, half_width]^2`, returning the largest ratio
    /// `w(x + y) / (v(x) w(y))` seen (the smallest admissible `C`).
    pub fn moderate_ratio_on_grid(&self, half_width: f64, points: usize) -> f64 {
        let grid = linspace(-half_width, half_width, points);
        let mut worst: f64 = 0.0;
        for &x in &grid {
            let vx = self.eval_v(x);
            for &y in &grid {
                let ratio = self.eval_weight(x + y) / (vx * self.eval_weight(y));
                if ratio.is_finite() {
                    worst = worst.max(ratio);
                }
            }
        }
        worst
    }

    fn search_moderate_constant(&self) -> Result<f64> {
        let worst =
            self.moderate_ratio_on_grid(MODERATE_GRID_HALF_WIDTH * self.c, MODERATE_GRID_POINTS);
        let mut constant = 1.0;
        while constant < worst * (1.0 + 1e-12) {
            constant *= 2.0;
            if constant > 1e12 {
                return Err(WarpError::InvalidParameter(
                    "no moderateness constant found on the validation grid".into(),
                ));
            }
        }
        Ok(constant)
    }

    /// Grid points in the domain, log-spaced towards the singular end of
    /// `R+` and symmetric with dense coverage of the origin on `R`.
    pub fn validation_points(&self, count: usize) -> Vec<f64> {
        match self.domain() {
            Domain::PositiveHalfLine => logspace(self.d * 1e-6, self.d * 1e6, count),
            Domain::FullLine => {
                let half = logspace(self.d * 1e-6, self.d * 1e6, count / 2);
                let mut pts: Vec<f64> = half.iter().rev().map(|t| -t).collect();
                pts.push(0.0);
                pts.extend(half);
                pts
            }
        }
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub(crate) fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    linspace(a, b, n).into_iter().map(f64::exp).collect()
}
