//! Browser bindings: design a bank, render a chirp spectrogram and sweep
//! frame bounds. The [`Demo`] methods are plain Rust; the `wasm_bindgen`
//! layer only converts errors.

use num_complex::Complex64;
use warpbank::diagnostics::{factor_sweep, DEFAULT_MAX_ITER, DEFAULT_TOLERANCE};
use warpbank::spectrogram::Spectrogram;
use warpbank::{
    transform, BankKind, ChannelRole, FactorPolicy, GridSpec, PrototypeWindow, WarpError,
    WarpedBank, WarpingFunction,
};
use wasm_bindgen::prelude::*;

type Result<T> = std::result::Result<T, WarpError>;

#[wasm_bindgen]
pub struct Demo {
    bank: WarpedBank,
    picture: Option<Spectrogram>,
}

impl Demo {
    /// Tight design for cosine-sum windows with integer stretch, painless
    /// factors otherwise. Family parameters fall back to the family defaults
    /// when not finite.
    #[allow(clippy::too_many_arguments)]
    pub fn design(
        family: &str,
        c: f64,
        d: f64,
        l: f64,
        window: &str,
        stretch: f64,
        len: usize,
        fs: f64,
    ) -> Result<Demo> {
        let family = warpbank::Family::parse(family)
            .ok_or_else(|| WarpError::InvalidParameter(format!("unknown family '{family}'")))?;
        let pick = |v: f64, default: f64| if v.is_finite() { v } else { default };
        let (dc, dd) = match family {
            warpbank::Family::ErbLike => (warpbank::warping::ERB_C, warpbank::warping::ERB_D),
            _ => (1.0, 1.0),
        };
        let warping = WarpingFunction::new(family, pick(c, dc), pick(d, dd), pick(l, 1.0))?;
        let window = PrototypeWindow::by_name(window, stretch)?;
        let grid = GridSpec::new(len, fs, family.domain())?;
        let bank = if window.is_tight_capable() {
            WarpedBank::design_tight_with(&warping, &grid, &window)?
        } else {
            WarpedBank::build(&warping, &window, &grid, FactorPolicy::Painless)?
        };
        Ok(Demo {
            bank,
            picture: None,
        })
    }

    fn shown(&self) -> impl Iterator<Item = &warpbank::Channel> {
        self.bank
            .channels()
            .iter()
            .filter(|ch| ch.role != ChannelRole::Mirrored && ch.center_hz >= 0.0)
    }

    /// Channels drawn by [`Demo::responses`], lowest center first.
    pub fn centers(&self) -> Vec<f64> {
        self.shown().map(|ch| ch.center_hz).collect()
    }

    pub fn factors(&self) -> Vec<u32> {
        self.shown().map(|ch| ch.a as u32).collect()
    }

    /// Magnitude responses on bins `0..=L/2`, one row per shown channel.
    pub fn responses(&self) -> Vec<f64> {
        let grid = self.bank.grid();
        let half = grid.len / 2 + 1;
        let mut out = Vec::new();
        for ch in self.shown() {
            let mut row = vec![0.0; half];
            for (j, g) in ch.bins(grid) {
                if j < half {
                    row[j] = g;
                }
            }
            out.extend(row);
        }
        out
    }

    /// Frame-operator diagonal on bins `0..=L/2`.
    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = self.bank.diagonal();
        d.truncate(self.bank.len() / 2 + 1);
        d
    }

    /// Analyzes a linear chirp from `f0` to `f1` Hz, keeps the spectrogram
    /// and returns the relative reconstruction error.
    pub fn chirp(&mut self, f0: f64, f1: f64, width: usize) -> Result<f64> {
        let len = self.bank.len();
        let fs = self.bank.grid().sample_rate;
        let duration = len as f64 / fs;
        let x: Vec<Complex64> = (0..len)
            .map(|n| {
                let t = n as f64 / fs;
                let phase =
                    2.0 * std::f64::consts::PI * (f0 * t + (f1 - f0) * t * t / (2.0 * duration));
                Complex64::new(phase.cos(), 0.0)
            })
            .collect();
        let coeffs = transform::analyze(&x, &self.bank)?;
        self.picture = Some(Spectrogram::render(&coeffs, &self.bank, width.max(1), true));
        let synthesis = match self.bank.kind() {
            BankKind::Tight => self.bank.clone(),
            _ => self.bank.painless_dual()?,
        };
        let y = transform::synthesize(&coeffs, &synthesis)?;
        let err: f64 = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let norm: f64 = x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        Ok(err / norm)
    }

    pub fn picture_width(&self) -> usize {
        self.picture.as_ref().map_or(0, |p| p.width)
    }

    pub fn picture_height(&self) -> usize {
        self.picture.as_ref().map_or(0, |p| p.height())
    }

    /// Grey levels of the last chirp spectrogram, highest frequency first.
    pub fn picture(&self) -> Vec<u8> {
        self.picture
            .as_ref()
            .map_or_else(Vec::new, |p| p.gray_levels())
    }

    /// Rows of `[scale, A, B, B/A, painless]` for each factor scale.
    pub fn sweep(&self, scales: &[f64]) -> Result<Vec<f64>> {
        let rows = factor_sweep(&self.bank, scales, DEFAULT_TOLERANCE, DEFAULT_MAX_ITER)?;
        Ok(rows
            .iter()
            .flat_map(|r| {
                [
                    r.scale,
                    r.a_emp,
                    r.b_emp,
                    r.tightness_ratio,
                    f64::from(u8::from(r.painless)),
                ]
            })
            .collect())
    }
}

fn js(err: WarpError) -> JsError {
    JsError::new(&err.to_string())
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        family: &str,
        c: f64,
        d: f64,
        l: f64,
        window: &str,
        stretch: f64,
        len: usize,
        fs: f64,
    ) -> std::result::Result<Demo, JsError> {
        Demo::design(family, c, d, l, window, stretch, len, fs).map_err(js)
    }

    #[wasm_bindgen(js_name = channelCenters)]
    pub fn channel_centers(&self) -> Vec<f64> {
        self.centers()
    }

    #[wasm_bindgen(js_name = channelFactors)]
    pub fn channel_factors(&self) -> Vec<u32> {
        self.factors()
    }

    #[wasm_bindgen(js_name = responseRows)]
    pub fn response_rows(&self) -> Vec<f64> {
        self.responses()
    }

    #[wasm_bindgen(js_name = diagonalRow)]
    pub fn diagonal_row(&self) -> Vec<f64> {
        self.diagonal()
    }

    #[wasm_bindgen(js_name = isTight)]
    pub fn is_tight(&self) -> bool {
        self.bank.kind() == BankKind::Tight
    }

    #[wasm_bindgen(js_name = renderChirp)]
    pub fn render_chirp(
        &mut self,
        f0: f64,
        f1: f64,
        width: usize,
    ) -> std::result::Result<f64, JsError> {
        self.chirp(f0, f1, width).map_err(js)
    }

    #[wasm_bindgen(js_name = pictureWidth)]
    pub fn js_picture_width(&self) -> usize {
        self.picture_width()
    }

    #[wasm_bindgen(js_name = pictureHeight)]
    pub fn js_picture_height(&self) -> usize {
        self.picture_height()
    }

    #[wasm_bindgen(js_name = pictureGray)]
    pub fn picture_gray(&self) -> Vec<u8> {
        self.picture()
    }

    #[wasm_bindgen(js_name = frameSweep)]
    pub fn frame_sweep(&self, scales: Vec<f64>) -> std::result::Result<Vec<f64>, JsError> {
        self.sweep(&scales).map_err(js)
    }
}
