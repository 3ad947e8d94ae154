use std::fmt;

use super::{Bus, BusError, FftSlave, FirSlave, IirSlave};
use crate::error::Result;
use crate::fft::FftConfig;
use crate::fir::FirConfig;
use crate::iir::IirConfig;

/// Base addresses of the three cores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AddressMap {
    pub fir_base: u32,
    pub iir_base: u32,
    pub fft_base: u32,
}

impl Default for AddressMap {
    fn default() -> Self {
        Self { fir_base: 0x9000_0000, iir_base: 0x9100_0000, fft_base: 0x9200_0000 }
    }
}

impl fmt::Display for AddressMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FIR {:#010x}, IIR {:#010x}, FFT {:#010x}", self.fir_base, self.iir_base, self.fft_base)
    }
}

/// Processor-side view of the system: one bus with the three DSP slaves.
#[derive(Debug)]
pub struct Soc {
    pub bus: Bus,
    map: AddressMap,
}

impl Soc {
    pub fn new(map: AddressMap, fir: FirConfig, iir: IirConfig, fft: FftConfig) -> Result<Self, SocError> {
        let mut bus = Bus::new();
        bus.attach(map.fir_base, Box::new(FirSlave::new(fir)))?;
        bus.attach(map.iir_base, Box::new(IirSlave::new(iir)))?;
        bus.attach(map.fft_base, Box::new(FftSlave::new(fft)?))?;
        Ok(Self { bus, map })
    }

    pub fn map(&self) -> AddressMap {
        self.map
    }

    pub fn fir(&self) -> &FirSlave {
        self.bus.slave("FIR").expect("FIR slave attached at construction")
    }

    pub fn iir(&self) -> &IirSlave {
        self.bus.slave("IIR").expect("IIR slave attached at construction")
    }

    pub fn fft(&self) -> &FftSlave {
        self.bus.slave("FFT").expect("FFT slave attached at construction")
    }

    /// Resolve a symbolic register or base name.
    pub fn symbol(&self, name: &str) -> Option<u32> {
        self.bus.symbols().into_iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }
}

/// Construction failure: either a bad core configuration or a bad map.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SocError {
    #[error(transparent)]
    Config(#[from] crate::error::Error),
    #[error(transparent)]
    Bus(#[from] BusError),
}
