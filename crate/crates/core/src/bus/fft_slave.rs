//! FFT register map.
//!
//! | offset   | name    | access | width |
//! |----------|---------|--------|-------|
//! | 0        | CONTROL | WO     | 1     |
//! | 4        | DATA    | WO     | 2M    |
//! | 8        | STATUS  | RO     | 1     |
//! | 12 + 4k  | MEMORY  | RO     | 2M    |
//!
//! Samples and results are packed with the real part in bits 15:0 and the
//! imaginary part in bits 31:16. Any CONTROL write clears the pipeline, the
//! result memory and STATUS. Each DATA write clocks one sample in; the N-th
//! completes the frame and sets STATUS. Further DATA writes are refused
//! until the next CONTROL write. MEMORY holds the spectrum in natural order.

use std::any::Any;

use super::{AccessError, RegAccess, RegisterInfo, WishboneSlave};
use crate::error::{Error, Result};
use crate::fft::{ComplexFx, FftConfig, FftPipeline};

const CONTROL: u32 = 0;
const DATA: u32 = 4;
const STATUS: u32 = 8;
const MEMORY: u32 = 12;

#[derive(Debug, Clone)]
pub struct FftSlave {
    pipeline: FftPipeline,
    accepted: usize,
    status: bool,
}

impl FftSlave {
    /// Packing puts each part in a 16-bit half, so the word width is limited to 16.
    pub fn new(config: FftConfig) -> Result<Self> {
        let m = config.word_fmt().total_bits();
        if m > 16 {
            return Err(Error::InvalidConfig(format!("FFT word width {m} does not fit a 16-bit half word")));
        }
        Ok(Self { pipeline: FftPipeline::new(config)?, accepted: 0, status: false })
    }

    pub fn pipeline(&self) -> &FftPipeline {
        &self.pipeline
    }

    pub fn region_len_for(n_points: usize) -> u32 {
        MEMORY + 4 * n_points as u32
    }

    fn clear(&mut self) {
        self.pipeline.reset();
        self.accepted = 0;
        self.status = false;
    }

    fn push(&mut self, word: u32) -> Result<(), AccessError> {
        let n = self.pipeline.config().n_points();
        if self.accepted == n {
            return Err(AccessError::Protocol("DATA", format!("frame of {n} samples already complete")));
        }
        let protocol = |e: Error| AccessError::Protocol("DATA", e.to_string());
        let x = ComplexFx::unpack(word, self.pipeline.config().word_fmt());
        self.pipeline.push(x).map_err(protocol)?;
        self.accepted += 1;
        if self.accepted == n {
            self.pipeline.flush().map_err(protocol)?;
            self.status = true;
        }
        Ok(())
    }
}

impl WishboneSlave for FftSlave {
    fn kind(&self) -> &'static str {
        "FFT"
    }

    fn region_len(&self) -> u32 {
        Self::region_len_for(self.pipeline.config().n_points())
    }

    fn registers(&self) -> Vec<RegisterInfo> {
        let w = 2 * self.pipeline.config().word_fmt().total_bits();
        vec![
            RegisterInfo { name: "CONTROL", offset: CONTROL, words: 1, access: RegAccess::WriteOnly, width: 1 },
            RegisterInfo { name: "DATA", offset: DATA, words: 1, access: RegAccess::WriteOnly, width: w },
            RegisterInfo { name: "STATUS", offset: STATUS, words: 1, access: RegAccess::ReadOnly, width: 1 },
            RegisterInfo {
                name: "MEMORY",
                offset: MEMORY,
                words: self.pipeline.config().n_points() as u32,
                access: RegAccess::ReadOnly,
                width: w,
            },
        ]
    }

    fn read(&mut self, offset: u32) -> Result<u32, AccessError> {
        match offset {
            CONTROL => Err(AccessError::WriteOnly("CONTROL")),
            DATA => Err(AccessError::WriteOnly("DATA")),
            STATUS => Ok(self.status as u32),
            _ => Ok(self.pipeline.ram()[((offset - MEMORY) / 4) as usize].pack()),
        }
    }

    fn write(&mut self, offset: u32, data: u32) -> Result<(), AccessError> {
        match offset {
            CONTROL => {
                self.clear();
                Ok(())
            }
            DATA => self.push(data),
            STATUS => Err(AccessError::ReadOnly("STATUS")),
            _ => Err(AccessError::ReadOnly("MEMORY")),
        }
    }

    fn reset(&mut self) {
        self.clear();
    }

    fn as_any(&self) -> &dyn Any {
        self
    }

    fn as_any_mut(&mut self) -> &mut dyn Any {
        self
    }
}
