//! Spectrogram rendering on a common time raster.

use crate::bank::WarpedBank;
use crate::transform::CoefficientSet;

pub const FLOOR_DB: f64 = -80.0;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrogramRow {
    pub m: i32,
    pub center_hz: f64,
}

/// Row-major dB image; row 0 is the highest center frequency.
#[derive(Clone, Debug)]
pub struct Spectrogram {
    pub width: usize,
    pub rows: Vec<SpectrogramRow>,
    pub db: Vec<f64>,
}

impl Spectrogram {
    /// Samples every channel at `width` evenly spaced times. Magnitudes are
    /// taken relative to the global maximum and clipped at [`FLOOR_DB`].
    /// With `nonnegative_only` the rows with negative centers are skipped,
    /// which is what a real input needs.
    pub fn render(
        coeffs: &CoefficientSet,
        bank: &WarpedBank,
        width: usize,
        nonnegative_only: bool,
    ) -> Spectrogram {
        let len = bank.grid().len as f64;
        let mut picked: Vec<(usize, &crate::bank::Channel)> = bank
            .channels()
            .iter()
            .enumerate()
            .filter(|(_, ch)| !nonnegative_only || ch.center_hz >= 0.0)
            .collect();
        picked.sort_by(|a, b| b.1.center_hz.total_cmp(&a.1.center_hz));

        let mut mags = Vec::with_capacity(picked.len() * width);
        for &(idx, ch) in &picked {
            let data = coeffs
                .channels
                .get(idx)
                .map(|c| c.1.as_slice())
                .unwrap_or(&[]);
            for x in 0..width {
                let t = (x as f64 + 0.5) * len / width as f64;
                let n = ((t / ch.a as f64) as usize).min(data.len().saturating_sub(1));
                mags.push(data.get(n).map_or(0.0, |z| z.norm()));
            }
        }
        let peak = mags.iter().cloned().fold(0.0, f64::max);
        let db = mags
            .into_iter()
            .map(|v| {
                if peak > 0.0 && v > 0.0 {
                    (20.0 * (v / peak).log10()).max(FLOOR_DB)
                } else {
                    FLOOR_DB
                }
            })
            .collect();
        Spectrogram {
            width,
            rows: picked
                .into_iter()
                .map(|(_, ch)| SpectrogramRow {
                    m: ch.m,
                    center_hz: ch.center_hz,
                })
                .collect(),
            db,
        }
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.db[r * self.width..(r + 1) * self.width]
    }

    /// 8-bit grey levels, 255 at 0 dB and 0 at the floor.
    pub fn gray_levels(&self) -> Vec<u8> {
        self.db
            .iter()
            .map(|d| {
                ((d - FLOOR_DB) / -FLOOR_DB * 255.0)
                    .round()
                    .clamp(0.0, 255.0) as u8
            })
            .collect()
    }

    /// Binary PGM (P5).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height()).into_bytes();
        out.extend(self.gray_levels());
        out
    }

    /// One line per image row: `row,m,center_hz`.
    pub fn rows_csv(&self) -> String {
        let mut out = String::from("row,m,center_hz\n");
        for (r, row) in self.rows.iter().enumerate() {
            out.push_str(&format!("{r},{},{}\n", row.m, row.center_hz));
        }
        out
    }
}
