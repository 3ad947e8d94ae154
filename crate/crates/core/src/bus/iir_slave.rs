//! IIR register map.
//!
//! | offset       | name    | access | width |
//! |--------------|---------|--------|-------|
//! | 0            | CONTROL | WO     | 1     |
//! | 4            | DATA    | RW     | M+G   |
//! | 8            | STATUS  | RW     | 1     |
//! | 12           | NSECT   | WO     | 4     |
//! | 16           | GAIN    | WO     | M     |
//! | 20 + 4i      | COEFF   | WO     | M     |
//!
//! Coefficients take six words per section in the order `a2 a1 a0 b2 b1 b0`;
//! the `a0` word is stored but never used. NSECT holds the number of active
//! sections minus one.
//!
//! A CONTROL write with bit 0 set feeds the latched DATA input into the
//! cascade and clocks it until the result is valid at the last active
//! section, then sets STATUS. Any write to STATUS clears it. Reading DATA
//! before STATUS is set returns the previous output.

use std::any::Any;

use super::{sign_extend, to_word, AccessError, RegAccess, RegisterInfo, WishboneSlave};
use crate::fixed::FxSample;
use crate::iir::{IirConfig, IirCore, SosSection};

const CONTROL: u32 = 0;
const DATA: u32 = 4;
const STATUS: u32 = 8;
const NSECT: u32 = 12;
const GAIN: u32 = 16;
const COEFF: u32 = 20;

/// Position of each coefficient word within a section's six-word block.
const SLOT_NAMES: [&str; 6] = ["a2", "a1", "a0", "b2", "b1", "b0"];

#[derive(Debug, Clone)]
pub struct IirSlave {
    core: IirCore,
    a0: Vec<i64>,
    input: i64,
    output: i64,
    status: bool,
    clocks: u64,
}

impl IirSlave {
    /// Slave around a blank core (zero coefficients, zero gain, all sections active).
    pub fn new(config: IirConfig) -> Self {
        Self::with_core(IirCore::blank(config))
    }

    pub fn with_core(core: IirCore) -> Self {
        let n = core.config().n_sect();
        Self { core, a0: vec![0; n], input: 0, output: 0, status: false, clocks: 0 }
    }

    pub fn core(&self) -> &IirCore {
        &self.core
    }

    /// Raw value last written to each section's unused `a0` slot.
    pub fn a0_words(&self) -> &[i64] {
        &self.a0
    }

    /// Core clocks spent on CONTROL strobes so far.
    pub fn clocks(&self) -> u64 {
        self.clocks
    }

    pub fn region_len_for(n_sect: usize) -> u32 {
        COEFF + 24 * n_sect as u32
    }

    /// Word offset within the coefficient block for `slot` (see [`SLOT_NAMES`]) of `section`.
    pub fn coeff_offset(section: usize, slot: &str) -> Option<u32> {
        let i = SLOT_NAMES.iter().position(|s| *s == slot)?;
        Some(COEFF + 4 * (6 * section + i) as u32)
    }

    fn coeff_bits(&self) -> u32 {
        self.core.config().coeff_fmt().total_bits()
    }

    fn write_coeff(&mut self, index: usize, data: u32) -> Result<(), AccessError> {
        let fmt = self.core.config().coeff_fmt();
        let raw = sign_extend(data, fmt.total_bits());
        let value = FxSample::wrapped(raw as i128, fmt);
        let (s, slot) = (index / 6, index % 6);
        let mut sec: SosSection = self.core.sections()[s];
        match slot {
            0 => sec.a2 = value,
            1 => sec.a1 = value,
            2 => {
                self.a0[s] = raw;
                return Ok(());
            }
            3 => sec.b2 = value,
            4 => sec.b1 = value,
            _ => sec.b0 = value,
        }
        self.core.set_section(s, sec).map_err(|e| AccessError::Protocol("COEFF", e.to_string()))
    }

    fn run(&mut self) -> Result<(), AccessError> {
        let x = FxSample::wrapped(self.input as i128, self.core.config().data_fmt());
        let (y, clocks) = self.core.process(x).map_err(|e| AccessError::Protocol("CONTROL", e.to_string()))?;
        self.output = y.raw();
        self.clocks += clocks as u64;
        Ok(())
    }
}

impl WishboneSlave for IirSlave {
    fn kind(&self) -> &'static str {
        "IIR"
    }

    fn region_len(&self) -> u32 {
        Self::region_len_for(self.core.config().n_sect())
    }

    fn registers(&self) -> Vec<RegisterInfo> {
        let data = self.core.config().data_fmt().total_bits();
        let coeff = self.coeff_bits();
        vec![
            RegisterInfo { name: "CONTROL", offset: CONTROL, words: 1, access: RegAccess::WriteOnly, width: 1 },
            RegisterInfo { name: "DATA", offset: DATA, words: 1, access: RegAccess::ReadWrite, width: data },
            RegisterInfo { name: "STATUS", offset: STATUS, words: 1, access: RegAccess::ReadWrite, width: 1 },
            RegisterInfo { name: "NSECT", offset: NSECT, words: 1, access: RegAccess::WriteOnly, width: 4 },
            RegisterInfo { name: "GAIN", offset: GAIN, words: 1, access: RegAccess::WriteOnly, width: coeff },
            RegisterInfo {
                name: "COEFF",
                offset: COEFF,
                words: 6 * self.core.config().n_sect() as u32,
                access: RegAccess::WriteOnly,
                width: coeff,
            },
        ]
    }

    fn read(&mut self, offset: u32) -> Result<u32, AccessError> {
        match offset {
            CONTROL => Err(AccessError::WriteOnly("CONTROL")),
            DATA => Ok(to_word(self.output)),
            STATUS => Ok(self.status as u32),
            NSECT => Err(AccessError::WriteOnly("NSECT")),
            GAIN => Err(AccessError::WriteOnly("GAIN")),
            _ => Err(AccessError::WriteOnly("COEFF")),
        }
    }

    fn write(&mut self, offset: u32, data: u32) -> Result<(), AccessError> {
        match offset {
            CONTROL => {
                if data & 1 == 1 {
                    self.run()?;
                    self.status = true;
                }
                Ok(())
            }
            DATA => {
                self.input = sign_extend(data, self.core.config().data_fmt().total_bits());
                Ok(())
            }
            STATUS => {
                self.status = false;
                Ok(())
            }
            NSECT => {
                let active = (data & 0xf) as usize + 1;
                self.core.set_active_sections(active).map_err(|e| AccessError::Protocol("NSECT", e.to_string()))
            }
            GAIN => {
                let fmt = self.core.config().coeff_fmt();
                let g = FxSample::wrapped(sign_extend(data, fmt.total_bits()) as i128, fmt);
                self.core.set_gain(g).map_err(|e| AccessError::Protocol("GAIN", e.to_string()))
            }
            _ => self.write_coeff(((offset - COEFF) / 4) as usize, data),
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
