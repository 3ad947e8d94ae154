//! FIR register map.
//!
//! | offset      | name    | access | width |
//! |-------------|---------|--------|-------|
//! | 0           | CONTROL | WO     | 1     |
//! | 4           | DATA    | RW     | M+G   |
//! | 8           | STATUS  | RO     | 1     |
//! | 12          | Q       | WO     | 4     |
//! | 16 + 4k     | COEFF   | WO     | M     |
//!
//! Writing DATA latches the next input; reading it returns the last output.
//! A CONTROL write with bit 0 set runs one filter step and sets STATUS, which
//! stays set until the next CONTROL strobe. Coefficients and Q may be
//! rewritten at any time; the delay line is kept as is.

use std::any::Any;

use super::{sign_extend, to_word, AccessError, RegAccess, RegisterInfo, WishboneSlave};
use crate::fir::{FirConfig, FirCore};
use crate::fixed::FxSample;

const CONTROL: u32 = 0;
const DATA: u32 = 4;
const STATUS: u32 = 8;
const Q: u32 = 12;
const COEFF: u32 = 16;

#[derive(Debug, Clone)]
pub struct FirSlave {
    core: FirCore,
    input: i64,
    output: i64,
    status: bool,
    strobes: u64,
}

impl FirSlave {
    /// Slave around a core with all coefficients zero.
    pub fn new(config: FirConfig) -> Self {
        let core = FirCore::from_raw(config, &vec![0; config.n_taps()]).expect("zero taps fit any format");
        Self::with_core(core)
    }

    pub fn with_core(core: FirCore) -> Self {
        Self { core, input: 0, output: 0, status: false, strobes: 0 }
    }

    pub fn core(&self) -> &FirCore {
        &self.core
    }

    /// Number of filter steps run through CONTROL.
    pub fn strobes(&self) -> u64 {
        self.strobes
    }

    pub fn region_len_for(n_taps: usize) -> u32 {
        COEFF + 4 * n_taps as u32
    }

    fn data_bits(&self) -> u32 {
        self.core.config().data_fmt().total_bits()
    }

    fn run(&mut self) -> Result<(), AccessError> {
        let fmt = self.core.config().data_fmt();
        let x = FxSample::wrapped(self.input as i128, fmt);
        let y = self.core.step(x).map_err(|e| AccessError::Protocol("CONTROL", e.to_string()))?;
        self.output = y.raw();
        self.strobes += 1;
        Ok(())
    }
}

impl WishboneSlave for FirSlave {
    fn kind(&self) -> &'static str {
        "FIR"
    }

    fn region_len(&self) -> u32 {
        Self::region_len_for(self.core.config().n_taps())
    }

    fn registers(&self) -> Vec<RegisterInfo> {
        let cfg = self.core.config();
        vec![
            RegisterInfo { name: "CONTROL", offset: CONTROL, words: 1, access: RegAccess::WriteOnly, width: 1 },
            RegisterInfo { name: "DATA", offset: DATA, words: 1, access: RegAccess::ReadWrite, width: self.data_bits() },
            RegisterInfo { name: "STATUS", offset: STATUS, words: 1, access: RegAccess::ReadOnly, width: 1 },
            RegisterInfo { name: "Q", offset: Q, words: 1, access: RegAccess::WriteOnly, width: 4 },
            RegisterInfo {
                name: "COEFF",
                offset: COEFF,
                words: cfg.n_taps() as u32,
                access: RegAccess::WriteOnly,
                width: cfg.coeff_fmt().total_bits(),
            },
        ]
    }

    fn read(&mut self, offset: u32) -> Result<u32, AccessError> {
        match offset {
            CONTROL => Err(AccessError::WriteOnly("CONTROL")),
            DATA => Ok(to_word(self.output)),
            STATUS => Ok(self.status as u32),
            Q => Err(AccessError::WriteOnly("Q")),
            _ => Err(AccessError::WriteOnly("COEFF")),
        }
    }

    fn write(&mut self, offset: u32, data: u32) -> Result<(), AccessError> {
        match offset {
            CONTROL => {
                self.status = false;
                if data & 1 == 1 {
                    self.run()?;
                    self.status = true;
                }
                Ok(())
            }
            DATA => {
                self.input = sign_extend(data, self.data_bits());
                Ok(())
            }
            STATUS => Err(AccessError::ReadOnly("STATUS")),
            Q => self.core.set_frac_bits(data & 0xf).map_err(|e| AccessError::Protocol("Q", e.to_string())),
            _ => {
                let k = ((offset - COEFF) / 4) as usize;
                let raw = sign_extend(data, self.core.config().coeff_fmt().total_bits());
                self.core.set_coefficient_raw(k, raw).map_err(|e| AccessError::Protocol("COEFF", e.to_string()))
            }
        }
    }

    fn reset(&mut self) {
        self.core.reset();
        self.input = 0;
        self.output = 0;
        self.status = false;
    }

    fn as_any(&self) -> &dyn Any {
        self
    }

    fn as_any_mut(&mut self) -> &mut dyn Any {
        self
    }
}
