//! Software side of the register protocols: the access sequences a processor
//! issues to configure each core and move samples through it.

use super::{sign_extend, to_word, Bus, BusError, IirSlave};
use crate::fft::{ComplexFx, FftConfig};
use crate::fir::FirConfig;
use crate::fixed::FxSample;
use crate::iir::{IirConfig, SosSection};

/// STATUS polls before a driver gives up on a core.
pub const POLL_LIMIT: u32 = 64;

fn never_set(addr: u32) -> BusError {
    BusError::Protocol { addr, reg: "STATUS", msg: format!("not set after {POLL_LIMIT} polls") }
}

fn wait_status(bus: &mut Bus, addr: u32) -> Result<(), BusError> {
    bus.poll(addr, 1, 1, POLL_LIMIT)?.map(|_| ()).ok_or_else(|| never_set(addr))
}

pub struct FirDriver<'a> {
    bus: &'a mut Bus,
    base: u32,
    config: FirConfig,
}

impl<'a> FirDriver<'a> {
    pub fn new(bus: &'a mut Bus, base: u32, config: FirConfig) -> Self {
        Self { bus, base, config }
    }

    pub fn set_frac_bits(&mut self, q: u32) -> Result<(), BusError> {
        self.bus.write(self.base + 12, q)?;
        self.config = FirConfig::new(
            self.config.n_taps(),
            self.config.coeff_fmt().total_bits(),
            self.config.growth_bits(),
            q,
        )
        .map_err(|e| BusError::Protocol { addr: self.base + 12, reg: "Q", msg: e.to_string() })?;
        Ok(())
    }

    /// Write `h[0..]` starting at COEFF.
    pub fn load(&mut self, coeffs: &[FxSample]) -> Result<(), BusError> {
        for (k, c) in coeffs.iter().enumerate() {
            self.bus.write(self.base + 16 + 4 * k as u32, to_word(c.raw()))?;
        }
        Ok(())
    }

    pub fn filter(&mut self, x: FxSample) -> Result<FxSample, BusError> {
        let fmt = self.config.data_fmt();
        self.bus.write(self.base + 4, to_word(x.raw()))?;
        self.bus.write(self.base, 1)?;
        wait_status(self.bus, self.base + 8)?;
        let word = self.bus.read(self.base + 4)?.data_r;
        Ok(FxSample::wrapped(sign_extend(word, fmt.total_bits()) as i128, fmt))
    }
}

pub struct IirDriver<'a> {
    bus: &'a mut Bus,
    base: u32,
    config: IirConfig,
}

impl<'a> IirDriver<'a> {
    pub fn new(bus: &'a mut Bus, base: u32, config: IirConfig) -> Self {
        Self { bus, base, config }
    }

    /// Program the section count, gain and every coefficient. `a0` words are
    /// written as the coefficient-format encoding of 1.0 when it fits, else 0.
    pub fn configure(&mut self, sections: &[SosSection], gain: FxSample, active: usize) -> Result<(), BusError> {
        let fmt = self.config.coeff_fmt();
        let one = 1i64 << fmt.frac_bits();
        let a0 = if fmt.contains(one) { one } else { 0 };
        self.bus.write(self.base + 12, active.saturating_sub(1) as u32)?;
        self.bus.write(self.base + 16, to_word(gain.raw()))?;
        for (s, sec) in sections.iter().enumerate() {
            let words = [sec.a2.raw(), sec.a1.raw(), a0, sec.b2.raw(), sec.b1.raw(), sec.b0.raw()];
            let first = IirSlave::coeff_offset(s, "a2").expect("slot name is valid");
            for (i, w) in words.into_iter().enumerate() {
                self.bus.write(self.base + first + 4 * i as u32, to_word(w))?;
            }
        }
        Ok(())
    }

    pub fn filter(&mut self, x: FxSample) -> Result<FxSample, BusError> {
        let fmt = self.config.data_fmt();
        self.bus.write(self.base + 4, to_word(x.raw()))?;
        self.bus.write(self.base, 1)?;
        wait_status(self.bus, self.base + 8)?;
        let word = self.bus.read(self.base + 4)?.data_r;
        self.bus.write(self.base + 8, 0)?;
        Ok(FxSample::wrapped(sign_extend(word, fmt.total_bits()) as i128, fmt))
    }
}

pub struct FftDriver<'a> {
    bus: &'a mut Bus,
    base: u32,
    config: FftConfig,
}

impl<'a> FftDriver<'a> {
    pub fn new(bus: &'a mut Bus, base: u32, config: FftConfig) -> Self {
        Self { bus, base, config }
    }

    pub fn start(&mut self) -> Result<(), BusError> {
        self.bus.write(self.base, 1).map(|_| ())
    }

    pub fn push(&mut self, x: ComplexFx) -> Result<(), BusError> {
        self.bus.write(self.base + 4, x.pack()).map(|_| ())
    }

    pub fn wait(&mut self) -> Result<(), BusError> {
        wait_status(self.bus, self.base + 8)
    }

    /// Spectrum in natural order.
    pub fn results(&mut self) -> Result<Vec<ComplexFx>, BusError> {
        let fmt = self.config.word_fmt();
        (0..self.config.n_points() as u32)
            .map(|k| Ok(ComplexFx::unpack(self.bus.read(self.base + 12 + 4 * k)?.data_r, fmt)))
            .collect()
    }

    pub fn transform(&mut self, frame: &[ComplexFx]) -> Result<Vec<ComplexFx>, BusError> {
        self.start()?;
        for &x in frame {
            self.push(x)?;
        }
        self.wait()?;
        self.results()
    }
}
