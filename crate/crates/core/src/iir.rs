//! Cascade of transpose type-II second-order sections.
//!
//! Each active section scales its input by the shared section gain and then
//! runs
//!
//! ```text
//! y  = b0*u + w1
//! w1 = b1*u - a1*y + w2
//! w2 = b2*u - a2*y
//! ```
//!
//! with every product truncated to the data format and every sum wrapping.
//! Section outputs are registered, so a sample needs one clock per active
//! section to reach the output. A section only advances when its input
//! register holds a valid sample, mirroring the enable chain between
//! sections.
//!
//! Coefficients and the gain use `(M, Q)`. The data path uses `M + G` bits
//! and, by default, `Q + G` fractional bits: the growth bits extend the
//! precision of the recursive state instead of its range.

use crate::error::{Error, Result};
use crate::fixed::{FxFormat, FxSample, Rounding};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IirConfig {
    n_sect: usize,
    coeff_fmt: FxFormat,
    data_fmt: FxFormat,
}

impl IirConfig {
    pub fn new(n_sect: usize, word_bits: u32, growth_bits: u32, frac_bits: u32) -> Result<Self> {
        Self::with_data_frac_bits(n_sect, word_bits, growth_bits, frac_bits, frac_bits + growth_bits)
    }

    /// Same as [`IirConfig::new`] with an explicit data-path fractional width.
    pub fn with_data_frac_bits(
        n_sect: usize,
        word_bits: u32,
        growth_bits: u32,
        frac_bits: u32,
        data_frac_bits: u32,
    ) -> Result<Self> {
        if n_sect == 0 {
            return Err(Error::InvalidConfig("IIR needs at least one section".into()));
        }
        let coeff_fmt = FxFormat::new(word_bits, frac_bits)?;
        let data_fmt = FxFormat::new(word_bits + growth_bits, data_frac_bits)?;
        Ok(Self { n_sect, coeff_fmt, data_fmt })
    }

    pub fn n_sect(&self) -> usize {
        self.n_sect
    }

    pub fn coeff_fmt(&self) -> FxFormat {
        self.coeff_fmt
    }

    pub fn data_fmt(&self) -> FxFormat {
        self.data_fmt
    }
}

/// Real-valued biquad as designed: `(b0 + b1 z^-1 + b2 z^-2) / (a0 + a1 z^-1 + a2 z^-2)`.
///
/// `a0` is carried for completeness; the data path assumes it is 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SosCoeffs {
    pub b: [f64; 3],
    pub a: [f64; 3],
}

impl SosCoeffs {
    pub fn new(b: [f64; 3], a1: f64, a2: f64) -> Self {
        Self { b, a: [1.0, a1, a2] }
    }

    pub fn identity() -> Self {
        Self::new([1.0, 0.0, 0.0], 0.0, 0.0)
    }
}

/// Quantized section coefficients as held by the data path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SosSection {
    pub b0: FxSample,
    pub b1: FxSample,
    pub b2: FxSample,
    pub a1: FxSample,
    pub a2: FxSample,
}

impl SosSection {
    pub fn quantize(c: &SosCoeffs, fmt: FxFormat) -> Result<Self> {
        let q = |v| FxSample::quantize(v, fmt, Rounding::NearestEven);
        Ok(Self { b0: q(c.b[0])?, b1: q(c.b[1])?, b2: q(c.b[2])?, a1: q(c.a[1])?, a2: q(c.a[2])? })
    }

    /// Raw values in `b0 b1 b2 a1 a2` order.
    pub fn from_raw(raw: [i64; 5], fmt: FxFormat) -> Result<Self> {
        let r = |v| FxSample::from_raw(v, fmt);
        Ok(Self { b0: r(raw[0])?, b1: r(raw[1])?, b2: r(raw[2])?, a1: r(raw[3])?, a2: r(raw[4])? })
    }

    fn zero(fmt: FxFormat) -> Self {
        let z = FxSample::zero(fmt);
        Self { b0: z, b1: z, b2: z, a1: z, a2: z }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Stage {
    w1: FxSample,
    w2: FxSample,
    out: FxSample,
    valid: bool,
}

#[derive(Debug, Clone)]
pub struct IirCore {
    config: IirConfig,
    sections: Vec<SosSection>,
    gain: FxSample,
    active: usize,
    stages: Vec<Stage>,
}

impl IirCore {
    pub fn new(config: IirConfig, sections: &[SosCoeffs], gain: f64, active: usize) -> Result<Self> {
        if sections.len() != config.n_sect {
            return Err(Error::InvalidConfig(format!(
                "expected {} sections, got {}",
                config.n_sect,
                sections.len()
            )));
        }
        let quantized =
            sections.iter().map(|s| SosSection::quantize(s, config.coeff_fmt)).collect::<Result<Vec<_>>>()?;
        let gain = FxSample::quantize(gain, config.coeff_fmt, Rounding::NearestEven)?;
        Self::from_sections(config, quantized, gain, active)
    }

    pub fn from_sections(config: IirConfig, sections: Vec<SosSection>, gain: FxSample, active: usize) -> Result<Self> {
        if sections.len() != config.n_sect {
            return Err(Error::InvalidConfig(format!(
                "expected {} sections, got {}",
                config.n_sect,
                sections.len()
            )));
        }
        if sections.iter().any(|s| [s.b0, s.b1, s.b2, s.a1, s.a2].iter().any(|c| c.format() != config.coeff_fmt))
            || gain.format() != config.coeff_fmt
        {
            return Err(Error::InvalidConfig("coefficients must use the coefficient format".into()));
        }
        check_active(active, config.n_sect)?;
        let zero = FxSample::zero(config.data_fmt);
        let stages = vec![Stage { w1: zero, w2: zero, out: zero, valid: false }; config.n_sect];
        Ok(Self { config, sections, gain, active, stages })
    }

    /// All-zero coefficients, zero gain, every section active.
    pub fn blank(config: IirConfig) -> Self {
        let sections = vec![SosSection::zero(config.coeff_fmt); config.n_sect];
        Self::from_sections(config, sections, FxSample::zero(config.coeff_fmt), config.n_sect)
            .expect("blank configuration is consistent")
    }

    pub fn config(&self) -> &IirConfig {
        &self.config
    }

    pub fn sections(&self) -> &[SosSection] {
        &self.sections
    }

    pub fn gain(&self) -> FxSample {
        self.gain
    }

    pub fn active_sections(&self) -> usize {
        self.active
    }

    pub fn set_active_sections(&mut self, active: usize) -> Result<()> {
        check_active(active, self.config.n_sect)?;
        self.active = active;
        Ok(())
    }

    /// Replace one section's coefficients without touching its state.
    pub fn set_section(&mut self, index: usize, section: SosSection) -> Result<()> {
        let n = self.config.n_sect;
        let slot = self
            .sections
            .get_mut(index)
            .ok_or_else(|| Error::InvalidConfig(format!("section index {index} >= {n}")))?;
        *slot = section;
        Ok(())
    }

    pub fn set_gain(&mut self, gain: FxSample) -> Result<()> {
        if gain.format() != self.config.coeff_fmt {
            return Err(Error::FormatMismatch { left: gain.format(), right: self.config.coeff_fmt });
        }
        self.gain = gain;
        Ok(())
    }

    /// Section states as `(w1, w2)` pairs.
    pub fn states(&self) -> Vec<(FxSample, FxSample)> {
        self.stages.iter().map(|s| (s.w1, s.w2)).collect()
    }

    /// Is any sample still travelling through the active sections?
    pub fn in_flight(&self) -> bool {
        self.stages[..self.active].iter().any(|s| s.valid)
    }

    pub fn reset(&mut self) {
        let zero = FxSample::zero(self.config.data_fmt);
        for s in &mut self.stages {
            *s = Stage { w1: zero, w2: zero, out: zero, valid: false };
        }
    }

    /// Stream one sample in. Returns the output register of the last active
    /// section and whether it holds a valid result.
    pub fn step(&mut self, x: FxSample) -> Result<(FxSample, bool)> {
        self.clock(Some(x))
    }

    /// Advance one clock; `None` is a pipeline bubble (no new sample).
    pub fn clock(&mut self, input: Option<FxSample>) -> Result<(FxSample, bool)> {
        let fmt = self.config.data_fmt;
        if let Some(x) = input {
            if x.format() != fmt {
                return Err(Error::FormatMismatch { left: x.format(), right: fmt });
            }
        }
        for s in (0..self.active).rev() {
            let feed = if s == 0 { input } else { self.stages[s - 1].valid.then_some(self.stages[s - 1].out) };
            match feed {
                Some(u) => {
                    let y = self.section_update(s, u)?;
                    self.stages[s].out = y;
                    self.stages[s].valid = true;
                }
                None => self.stages[s].valid = false,
            }
        }
        let last = self.stages[self.active - 1];
        Ok((last.out, last.valid))
    }

    fn section_update(&mut self, s: usize, x: FxSample) -> Result<FxSample> {
        let fmt = self.config.data_fmt;
        let c = self.sections[s];
        let st = &mut self.stages[s];
        let u = self.gain.mul(x, fmt)?;
        let y = c.b0.mul(u, fmt)?.add(st.w1)?;
        st.w1 = c.b1.mul(u, fmt)?.sub(c.a1.mul(y, fmt)?)?.add(st.w2)?;
        st.w2 = c.b2.mul(u, fmt)?.sub(c.a2.mul(y, fmt)?)?;
        Ok(y)
    }

    /// Push one sample and clock bubbles until its result leaves the last
    /// section. Returns the result and the number of clocks spent.
    pub fn process(&mut self, x: FxSample) -> Result<(FxSample, u32)> {
        let (mut y, mut valid) = self.clock(Some(x))?;
        let mut clocks = 1;
        while !valid || self.in_flight_before_last() {
            (y, valid) = self.clock(None)?;
            clocks += 1;
        }
        Ok((y, clocks))
    }

    fn in_flight_before_last(&self) -> bool {
        self.stages[..self.active - 1].iter().any(|s| s.valid)
    }

    /// Reset, then stream a unit impulse of amplitude `1 - 2^-Q` followed by
    /// zeros and return the first `len` valid outputs as reals.
    pub fn impulse_response(&mut self, len: usize) -> Result<Vec<f64>> {
        self.reset();
        let fmt = self.config.data_fmt;
        let impulse = crate::fir::impulse_amplitude(fmt);
        let zero = FxSample::zero(fmt);
        let mut out = Vec::with_capacity(len);
        let mut n = 0usize;
        while out.len() < len {
            let (y, valid) = self.step(if n == 0 { impulse } else { zero })?;
            if valid {
                out.push(y.to_real());
            }
            n += 1;
        }
        Ok(out)
    }
}

fn check_active(active: usize, n_sect: usize) -> Result<()> {
    if !(1..=n_sect).contains(&active) {
        return Err(Error::ActiveSections { active, n_sect });
    }
    Ok(())
}
