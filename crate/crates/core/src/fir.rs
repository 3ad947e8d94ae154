//! Transpose-form FIR processing unit.
//!
//! Per input sample `x` the unit computes
//!
//! ```text
//! y        = d[N-2] + h[0]*x
//! d[k]     = d[k-1] + h[N-1-k]*x      for k = N-2 .. 1
//! d[0]     = h[N-1]*x
//! ```
//!
//! Every product is rescaled to the data format (truncation) before entering
//! the adder chain, and the adders wrap at `M + G` bits.

use crate::error::{Error, Result};
use crate::fixed::{FxFormat, FxSample, Rounding};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirConfig {
    n_taps: usize,
    coeff_fmt: FxFormat,
    data_fmt: FxFormat,
}

impl FirConfig {
    /// `word_bits` is M, `growth_bits` is G and `frac_bits` is the shared Q.
    pub fn new(n_taps: usize, word_bits: u32, growth_bits: u32, frac_bits: u32) -> Result<Self> {
        if n_taps == 0 {
            return Err(Error::InvalidConfig("FIR needs at least one tap".into()));
        }
        let coeff_fmt = FxFormat::new(word_bits, frac_bits)?;
        let data_fmt = FxFormat::new(word_bits + growth_bits, frac_bits)?;
        Ok(Self { n_taps, coeff_fmt, data_fmt })
    }

    pub fn n_taps(&self) -> usize {
        self.n_taps
    }

    pub fn coeff_fmt(&self) -> FxFormat {
        self.coeff_fmt
    }

    pub fn data_fmt(&self) -> FxFormat {
        self.data_fmt
    }

    pub fn growth_bits(&self) -> u32 {
        self.data_fmt.total_bits() - self.coeff_fmt.total_bits()
    }

    fn with_frac_bits(&self, q: u32) -> Result<Self> {
        Self::new(self.n_taps, self.coeff_fmt.total_bits(), self.growth_bits(), q)
    }
}

#[derive(Debug, Clone)]
pub struct FirCore {
    config: FirConfig,
    coeffs: Vec<FxSample>,
    delay: Vec<FxSample>,
}

impl FirCore {
    /// Quantize `coeffs` (round half to even, saturating) into the coefficient format.
    pub fn new(config: FirConfig, coeffs: &[f64]) -> Result<Self> {
        check_len(config.n_taps, coeffs.len())?;
        let coeffs = coeffs
            .iter()
            .map(|&c| FxSample::quantize(c, config.coeff_fmt, Rounding::NearestEven))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(config, coeffs))
    }

    pub fn from_raw(config: FirConfig, coeffs: &[i64]) -> Result<Self> {
        check_len(config.n_taps, coeffs.len())?;
        let coeffs = coeffs
            .iter()
            .map(|&c| FxSample::from_raw(c, config.coeff_fmt))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(config, coeffs))
    }

    fn assemble(config: FirConfig, coeffs: Vec<FxSample>) -> Self {
        let delay = vec![FxSample::zero(config.data_fmt); config.n_taps - 1];
        Self { config, coeffs, delay }
    }

    pub fn config(&self) -> &FirConfig {
        &self.config
    }

    pub fn coefficients(&self) -> &[FxSample] {
        &self.coeffs
    }

    pub fn delay_line(&self) -> &[FxSample] {
        &self.delay
    }

    /// Overwrite one coefficient in place. The delay line is left untouched,
    /// so reloading mid-stream mixes old and new taps in the outputs already
    /// in flight.
    pub fn set_coefficient_raw(&mut self, k: usize, raw: i64) -> Result<()> {
        let n = self.config.n_taps;
        let slot = self
            .coeffs
            .get_mut(k)
            .ok_or_else(|| Error::InvalidConfig(format!("coefficient index {k} >= {n}")))?;
        *slot = FxSample::wrapped(raw as i128, slot.format());
        Ok(())
    }

    /// Change Q. Register contents keep their bits and are reinterpreted.
    pub fn set_frac_bits(&mut self, q: u32) -> Result<()> {
        let config = self.config.with_frac_bits(q)?;
        for c in &mut self.coeffs {
            *c = c.reinterpret(config.coeff_fmt);
        }
        for d in &mut self.delay {
            *d = d.reinterpret(config.data_fmt);
        }
        self.config = config;
        Ok(())
    }

    pub fn step(&mut self, x: FxSample) -> Result<FxSample> {
        let fmt = self.config.data_fmt;
        if x.format() != fmt {
            return Err(Error::FormatMismatch { left: x.format(), right: fmt });
        }
        let n = self.config.n_taps;
        let h = &self.coeffs;
        let head = h[0].mul(x, fmt)?;
        let Some(&last) = self.delay.last() else {
            return Ok(head);
        };
        let y = last.add(head)?;
        for k in (1..n - 1).rev() {
            self.delay[k] = self.delay[k - 1].add(h[n - 1 - k].mul(x, fmt)?)?;
        }
        self.delay[0] = h[n - 1].mul(x, fmt)?;
        Ok(y)
    }

    pub fn reset(&mut self) {
        let zero = FxSample::zero(self.config.data_fmt);
        self.delay.iter_mut().for_each(|d| *d = zero);
    }

    /// Reset, drive a unit impulse at amplitude `1 - 2^-Q` and return `len`
    /// outputs as reals.
    pub fn impulse_response(&mut self, len: usize) -> Result<Vec<f64>> {
        if len < self.config.n_taps {
            return Err(Error::InvalidConfig(format!(
                "impulse response length {len} shorter than {} taps",
                self.config.n_taps
            )));
        }
        self.reset();
        let fmt = self.config.data_fmt;
        let impulse = impulse_amplitude(fmt);
        let zero = FxSample::zero(fmt);
        (0..len)
            .map(|n| self.step(if n == 0 { impulse } else { zero }).map(FxSample::to_real))
            .collect()
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::CoefficientCount { expected, got });
    }
    Ok(())
}

/// Largest representable value not above 1.0, used to excite impulse responses.
pub fn impulse_amplitude(fmt: FxFormat) -> FxSample {
    let raw = ((1i128 << fmt.frac_bits()) - 1).min(fmt.max_raw() as i128) as i64;
    FxSample::wrapped(raw as i128, fmt)
}
