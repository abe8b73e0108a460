//! Bank-spec files: a versioned JSON description from which a bank is
//! regenerated bit for bit (all responses are closed form).

use serde::{Deserialize, Serialize};

use crate::bank::{BankKind, ChannelRole, FactorPolicy, GridSpec, WarpedBank};
use crate::error::{Result, WarpError};
use crate::prototypes::{PrototypeWindow, WindowRecord};
use crate::warping::{WarpingFunction, WarpingRecord};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelRecord {
    pub m: i32,
    pub role: ChannelRole,
    pub center_hz: f64,
    pub a_m_samples: usize,
    /// Inclusive signed-bin interval of the nonzero response.
    pub support_bins: Option<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BankSpecFile {
    pub format_version: u32,
    pub kind: BankKind,
    pub warping: WarpingRecord,
    pub prototype: WindowRecord,
    pub grid: GridSpec,
    pub factor_policy: FactorPolicy,
    pub channels: Vec<ChannelRecord>,
}

impl BankSpecFile {
    pub fn from_bank(bank: &WarpedBank) -> Self {
        BankSpecFile {
            format_version: FORMAT_VERSION,
            kind: bank.kind(),
            warping: bank.warping().record(),
            prototype: bank.prototype().record(),
            grid: *bank.grid(),
            factor_policy: bank.policy().clone(),
            channels: bank
                .channels()
                .iter()
                .map(|ch| ChannelRecord {
                    m: ch.m,
                    role: ch.role,
                    center_hz: ch.center_hz,
                    a_m_samples: ch.a,
                    support_bins: ch.support_bins(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec records are serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: BankSpecFile =
            serde_json::from_str(text).map_err(|e| WarpError::Format(e.to_string()))?;
        if spec.format_version != FORMAT_VERSION {
            return Err(WarpError::Format(format!(
                "unsupported bank-spec version {}",
                spec.format_version
            )));
        }
        Ok(spec)
    }

    /// Rebuilds the bank and checks that it reproduces every channel record.
    pub fn regenerate(&self) -> Result<WarpedBank> {
        let warping = WarpingFunction::from_record(&self.warping)?;
        let prototype = PrototypeWindow::from_record(&self.prototype)?;
        let grid = GridSpec::new(self.grid.len, self.grid.sample_rate, self.grid.domain)?;
        let factors: Vec<(i32, usize)> = self
            .channels
            .iter()
            .filter(|ch| ch.role == ChannelRole::Warped)
            .map(|ch| (ch.m, ch.a_m_samples))
            .collect();
        let mut bank = WarpedBank::build(
            &warping,
            &prototype,
            &grid,
            FactorPolicy::Explicit { factors },
        )?;
        bank.set_policy(self.factor_policy.clone());
        match self.kind {
            BankKind::Analysis => {}
            BankKind::Tight => bank.set_kind(BankKind::Tight),
            BankKind::Dual => bank = bank.painless_dual()?,
        }
        let regenerated = BankSpecFile::from_bank(&bank);
        if regenerated != *self {
            return Err(WarpError::Format(
                "bank-spec channels are inconsistent with the regenerated bank".into(),
            ));
        }
        Ok(bank)
    }
}
