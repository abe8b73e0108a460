//! Prototype windows `theta` living on the warped frequency axis.
//!
//! The cosine-sum family `theta(t) = sum_k b_k cos(2 pi k t / R)` on
//! `[-R/2, R/2)` has translates whose squares sum to the constant
//! `R b_0^2 + (R/2) sum_{k>=1} b_k^2` whenever `R > 2K`. That constancy is what
//! makes tight warped frames possible. Centered B-splines are also available;
//! their translates form a partition of unity but their squares do not sum to
//! a constant, so they are only used for non-tight painless banks.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WarpError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowKind {
    CosineSum {
        coeffs: Vec<f64>,
        #[serde(rename = "R")]
        stretch: f64,
    },
    BSpline {
        order: u32,
        #[serde(rename = "R")]
        stretch: f64,
    },
}

/// Serialized form of a prototype: kind, coefficients or order, `R` and
/// whether the tight-frame normalization was applied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowRecord {
    #[serde(flatten)]
    pub kind: WindowKind,
    pub normalized: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrototypeWindow {
    kind: WindowKind,
    gain: f64,
    normalized: bool,
}

/// Evaluates `sum_k b_k cos(2 pi k t / R)` on `[-R/2, R/2)` and `0` elsewhere,
/// without any validity check on `R`.
pub fn cosine_sum_value(coeffs: &[f64], stretch: f64, t: f64) -> f64 {
    let half = 0.5 * stretch;
    if !(t >= -half && t < half) {
        return 0.0;
    }
    let phase = std::f64::consts::TAU * t / stretch;
    coeffs
        .iter()
        .enumerate()
        .map(|(k, b)| b * (k as f64 * phase).cos())
        .sum()
}

fn bspline_value(order: u32, stretch: f64, t: f64) -> f64 {
    let u = t / stretch;
    let half = 0.5 * order as f64;
    if !(u >= -half && u < half) {
        return 0.0;
    }
    let a = u.abs();
    match order {
        2 => 1.0 - a,
        3 => {
            if a < 0.5 {
                0.75 - a * a
            } else {
                0.5 * (1.5 - a) * (1.5 - a)
            }
        }
        _ => unreachable!("order validated at construction"),
    }
}

impl PrototypeWindow {
    /// A cosine-sum window with coefficients `b_0..b_K` stretched to `R`.
    pub fn cosine_sum(coeffs: &[f64], stretch: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(WarpError::InvalidParameter(
                "cosine-sum window needs at least one coefficient".into(),
            ));
        }
        if coeffs.iter().any(|b| !b.is_finite()) {
            return Err(WarpError::InvalidParameter(
                "cosine-sum coefficients must be finite".into(),
            ));
        }
        let k = (coeffs.len() - 1) as f64;
        if !(stretch.is_finite() && stretch > 2.0 * k) {
            return Err(WarpError::InvalidParameter(format!(
                "squared translates sum to a constant only for R > 2K = {}, got R = {stretch}",
                2.0 * k
            )));
        }
        Ok(PrototypeWindow {
            kind: WindowKind::CosineSum {
                coeffs: coeffs.to_vec(),
                stretch,
            },
            gain: 1.0,
            normalized: false,
        })
    }

    pub fn hann(stretch: f64) -> Result<Self> {
        Self::cosine_sum(&[0.5, 0.5], stretch)
    }

    pub fn hamming(stretch: f64) -> Result<Self> {
        Self::cosine_sum(&[0.54, 0.46], stretch)
    }

    pub fn blackman(stretch: f64) -> Result<Self> {
        Self::cosine_sum(&[0.42, 0.5, 0.08], stretch)
    }

    /// Centered cardinal B-spline of order 2 (hat) or 3 (quadratic),
    /// dilated by `stretch`.
    pub fn bspline(order: u32, stretch: f64) -> Result<Self> {
        if !(order == 2 || order == 3) {
            return Err(WarpError::InvalidParameter(format!(
                "B-spline order must be 2 or 3, got {order}"
            )));
        }
        if !(stretch.is_finite() && stretch > 0.0) {
            return Err(WarpError::InvalidParameter(format!(
                "B-spline stretch must be positive, got {stretch}"
            )));
        }
        Ok(PrototypeWindow {
            kind: WindowKind::BSpline { order, stretch },
            gain: 1.0,
            normalized: false,
        })
    }

    /// Catalog lookup by name: `hann`, `hamming`, `blackman`, `bspline2`,
    /// `bspline3`.
    pub fn by_name(name: &str, stretch: f64) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "hann" => Self::hann(stretch),
            "hamming" => Self::hamming(stretch),
            "blackman" => Self::blackman(stretch),
            "bspline2" => Self::bspline(2, stretch),
            "bspline3" => Self::bspline(3, stretch),
            other => Err(WarpError::InvalidParameter(format!(
                "unknown window '{other}'"
            ))),
        }
    }

    pub fn from_record(record: &WindowRecord) -> Result<Self> {
        let window = match &record.kind {
            WindowKind::CosineSum { coeffs, stretch } => Self::cosine_sum(coeffs, *stretch)?,
            WindowKind::BSpline { order, stretch } => Self::bspline(*order, *stretch)?,
        };
        if record.normalized {
            window.normalize_for_tightness()
        } else {
            Ok(window)
        }
    }

    pub fn record(&self) -> WindowRecord {
        WindowRecord {
            kind: self.kind.clone(),
            normalized: self.normalized,
        }
    }

    pub fn kind(&self) -> &WindowKind {
        &self.kind
    }

    /// Multiplicative gain applied on top of the catalog shape.
    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn stretch(&self) -> f64 {
        match self.kind {
            WindowKind::CosineSum { stretch, .. } | WindowKind::BSpline { stretch, .. } => stretch,
        }
    }

    /// Support `[c, d)`; the window vanishes outside.
    pub fn support(&self) -> (f64, f64) {
        let half = match &self.kind {
            WindowKind::CosineSum { stretch, .. } => 0.5 * stretch,
            WindowKind::BSpline { order, stretch } => 0.5 * *order as f64 * stretch,
        };
        (-half, half)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let raw = match &self.kind {
            WindowKind::CosineSum { coeffs, stretch } => cosine_sum_value(coeffs, *stretch, t),
            WindowKind::BSpline { order, stretch } => bspline_value(*order, *stretch, t),
        };
        self.gain * raw
    }

    /// Upper bound on `sup |theta|`.
    pub fn sup_bound(&self) -> f64 {
        match &self.kind {
            WindowKind::CosineSum { coeffs, .. } => {
                self.gain.abs() * coeffs.iter().map(|b| b.abs()).sum::<f64>()
            }
            WindowKind::BSpline { order, .. } => {
                self.gain.abs() * if *order == 2 { 1.0 } else { 0.75 }
            }
        }
    }

    /// Whether the squared integer translates sum to a constant. This needs
    /// a cosine sum with an integer stretch.
    pub fn is_tight_capable(&self) -> bool {
        matches!(self.kind, WindowKind::CosineSum { stretch, .. } if stretch.fract() == 0.0)
    }

    /// The constant value of `sum_m theta(t - m)^2`, if there is one.
    pub fn sum_of_squares_constant(&self) -> Option<f64> {
        match &self.kind {
            WindowKind::CosineSum { coeffs, stretch } if stretch.fract() == 0.0 => {
                let b0 = coeffs[0];
                let rest: f64 = coeffs[1..].iter().map(|b| b * b).sum();
                Some(self.gain * self.gain * (stretch * b0 * b0 + 0.5 * stretch * rest))
            }
            _ => None,
        }
    }

    /// The integer translates `m` for which `theta(t - m)` can be nonzero.
    pub fn overlapping_translates(&self, t: f64) -> RangeInclusive<i64> {
        let (c, d) = self.support();
        ((t - d).floor() as i64)..=((t - c).ceil() as i64)
    }

    /// `sum_{m in range} theta(t - m)^2`.
    pub fn sum_of_squares(&self, t: f64, range: RangeInclusive<i64>) -> f64 {
        range
            .map(|m| {
                let v = self.eval(t - m as f64);
                v * v
            })
            .sum()
    }

    /// Rescales the window so that its squared translates sum to one.
    pub fn normalize_for_tightness(&self) -> Result<Self> {
        let constant = self.sum_of_squares_constant().ok_or_else(|| {
            WarpError::DegenerateWindow(match self.kind {
                WindowKind::BSpline { .. } => {
                    "B-spline translates do not have a constant squared sum".into()
                }
                _ => "squared translates of a cosine sum are constant only for integer R".into(),
            })
        })?;
        if !(constant > 0.0) {
            return Err(WarpError::DegenerateWindow(
                "squared translates sum to zero".into(),
            ));
        }
        let mut out = self.clone();
        out.normalized = true;
        if (constant - 1.0).abs() > 1e-12 {
            out.gain = self.gain / constant.sqrt();
        }
        Ok(out)
    }
}
