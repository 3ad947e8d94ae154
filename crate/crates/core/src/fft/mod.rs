//! Pipelined radix-2² single-path delay-feedback FFT.
//!
//! `log2(N)` butterfly stages alternate between BF2I and BF2II with feedback
//! buffers of depth `N/2, N/4, ..., 1`; a twiddle multiplier follows every
//! BF2II except the last one. A single modulo-`N` counter sequences the
//! butterflies, the `-j` rotations and the ROM addresses (see [`sdf`]).
//!
//! Samples enter in natural order; results leave in bit-reversed order and
//! are scattered into an `N`-word result RAM at their bit-reversed address,
//! so the RAM reads back in natural order.
//!
//! # Latency
//!
//! The model has no pipeline registers besides the feedback buffers, so the
//! result for slot 0 leaves on the same clock that consumes input `N - 1`:
//! `latency = N/2 + N/4 + ... + 1 = N - 1` clocks. A full frame takes
//! `2N - 1` clocks; [`FftPipeline::flush`] clocks one more bubble so the
//! control counter is back at zero for the next frame.
//!
//! # Scaling and error budget
//!
//! The data path stays `M` bits wide. Stage `i` shifts its output right by
//! `scaling()[i]`. The default schedule shifts once after every BF2II except
//! the last, for a total gain of `2^-(log2(N)/2 - 1)` (`2^-4` at `N = 1024`).
//!
//! [`error_bound_lsb`] propagates a worst-case bound on the per-component
//! error, in output LSBs, assuming nothing wraps:
//!
//! * butterfly: magnitude and error both double;
//! * shift by `s > 0`: error becomes `e / 2^s + 1` (floor adds under one LSB);
//! * twiddle: error becomes `sqrt(2) e + 2 + 2 A δ 2^Q`, where the `2` covers
//!   the two truncated partial products, `A` bounds the magnitude and
//!   `δ = 1.5 * 2^-(M-1)` bounds the ROM error (half-LSB rounding plus the
//!   `1 - 2^-(M-1)` scale).
//!
//! With `E = sqrt(2) e 2^-Q` per bin, the spectrum error satisfies
//! `Σ|X̃ - gX|² <= N E²` and the Parseval residual satisfies
//! `|Σ|X̃|²/N - g² Σ|x|²| <= 2 g E sqrt(Σ|x|²) + E²`.

mod sdf;
mod twiddle;
mod twin;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fixed::{FxFormat, FxSample, Rounding};

pub use sdf::{SdfArith, SdfEngine};
pub use twiddle::{complex_mul, quantize_twiddle, rom_format, twiddle_rom};
pub use twin::{FloatArith, FloatPipeline};

/// Complex fixed-point sample; both parts share one format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ComplexFx {
    pub re: FxSample,
    pub im: FxSample,
}

#[allow(clippy::should_implement_trait)]
impl ComplexFx {
    pub fn new(re: FxSample, im: FxSample) -> Result<Self> {
        if re.format() != im.format() {
            return Err(Error::FormatMismatch { left: re.format(), right: im.format() });
        }
        Ok(Self { re, im })
    }

    pub fn from_raw(re: i64, im: i64, fmt: FxFormat) -> Result<Self> {
        Ok(Self { re: FxSample::from_raw(re, fmt)?, im: FxSample::from_raw(im, fmt)? })
    }

    fn wrapped(re: i128, im: i128, fmt: FxFormat) -> Self {
        Self { re: FxSample::wrapped(re, fmt), im: FxSample::wrapped(im, fmt) }
    }

    pub fn zero(fmt: FxFormat) -> Self {
        Self { re: FxSample::zero(fmt), im: FxSample::zero(fmt) }
    }

    pub fn quantize(z: Complex64, fmt: FxFormat, mode: Rounding) -> Result<Self> {
        Ok(Self { re: FxSample::quantize(z.re, fmt, mode)?, im: FxSample::quantize(z.im, fmt, mode)? })
    }

    pub fn format(self) -> FxFormat {
        self.re.format()
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.to_real(), self.im.to_real())
    }

    pub fn add(self, other: Self) -> Result<Self> {
        Ok(Self { re: self.re.add(other.re)?, im: self.im.add(other.im)? })
    }

    pub fn sub(self, other: Self) -> Result<Self> {
        Ok(Self { re: self.re.sub(other.re)?, im: self.im.sub(other.im)? })
    }

    /// Exact multiplication by `-j`: `(re, im) -> (im, -re)`.
    pub fn rotate_neg_j(self) -> Self {
        Self { re: self.im, im: self.re.neg() }
    }

    pub fn shift_right(self, k: u32) -> Self {
        Self { re: self.re.shift_right(k), im: self.im.shift_right(k) }
    }

    /// Bus word: real part in bits 15:0, imaginary part in bits 31:16.
    pub fn pack(self) -> u32 {
        (self.re.raw() as u16 as u32) | ((self.im.raw() as u16 as u32) << 16)
    }

    /// Inverse of [`ComplexFx::pack`]; each half is sign-extended from 16 bits.
    pub fn unpack(word: u32, fmt: FxFormat) -> Self {
        let re = word as u16 as i16 as i128;
        let im = (word >> 16) as u16 as i16 as i128;
        Self::wrapped(re, im, fmt)
    }
}

impl fmt::Display for ComplexFx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})@{}", self.re.raw(), self.im.raw(), self.format())
    }
}

/// Reverse the low `bits` bits of `k`.
pub fn bit_reverse(k: usize, bits: u32) -> Result<usize> {
    if bits < usize::BITS && k >> bits != 0 {
        return Err(Error::IndexOutOfRange { index: k, bits });
    }
    if bits == 0 {
        return Ok(0);
    }
    Ok(k.reverse_bits() >> (usize::BITS - bits))
}

pub(crate) fn check_points(n_points: usize) -> Result<()> {
    if n_points < 4 || !n_points.is_power_of_two() || !n_points.trailing_zeros().is_multiple_of(2) {
        return Err(Error::InvalidConfig(format!("FFT size {n_points} is not a power of four (>= 4)")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FftConfig {
    n_points: usize,
    word_fmt: FxFormat,
    scaling: Vec<u32>,
}

impl FftConfig {
    pub fn new(n_points: usize, word_bits: u32, frac_bits: u32) -> Result<Self> {
        check_points(n_points)?;
        let word_fmt = FxFormat::new(word_bits, frac_bits)?;
        if word_bits < 2 {
            return Err(Error::InvalidConfig("FFT word needs at least 2 bits".into()));
        }
        Ok(Self { n_points, word_fmt, scaling: Self::default_scaling(n_points) })
    }

    /// One shift after every BF2II except the last.
    pub fn default_scaling(n_points: usize) -> Vec<u32> {
        let stages = n_points.trailing_zeros() as usize;
        (0..stages).map(|i| u32::from(i % 2 == 1 && i + 1 < stages)).collect()
    }

    pub fn with_scaling(mut self, scaling: Vec<u32>) -> Result<Self> {
        if scaling.len() != self.stages() {
            return Err(Error::LengthMismatch { left: scaling.len(), right: self.stages() });
        }
        self.scaling = scaling;
        Ok(self)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn word_fmt(&self) -> FxFormat {
        self.word_fmt
    }

    pub fn scaling(&self) -> &[u32] {
        &self.scaling
    }

    pub fn stages(&self) -> usize {
        self.n_points.trailing_zeros() as usize
    }

    pub fn total_shift(&self) -> u32 {
        self.scaling.iter().sum()
    }

    pub fn total_gain(&self) -> f64 {
        (-(self.total_shift() as f64)).exp2()
    }
}

/// Clocks from consuming input 0 to emitting result slot 0.
pub fn fft_latency(config: &FftConfig) -> usize {
    config.n_points - 1
}

/// Worst-case per-component output error in LSBs for inputs whose complex
/// magnitude is at most `max_magnitude` (see the module docs).
pub fn error_bound_lsb(config: &FftConfig, max_magnitude: f64) -> f64 {
    let stages = config.stages();
    let m = config.word_fmt.total_bits();
    let q = config.word_fmt.frac_bits() as i32;
    let rom_err = 1.5 * (-(m as f64 - 1.0)).exp2();
    let mut mag = max_magnitude;
    let mut e = 0.0f64;
    for i in 0..stages {
        mag *= 2.0;
        e *= 2.0;
        let s = config.scaling[i];
        if s > 0 {
            let f = (s as f64).exp2();
            mag /= f;
            e = e / f + 1.0;
        }
        if i % 2 == 1 && i / 2 + 1 < stages / 2 {
            e = std::f64::consts::SQRT_2 * e + 2.0 + 2.0 * mag * rom_err * (q as f64).exp2();
        }
    }
    e
}

#[derive(Debug, Clone)]
pub struct FixedArith {
    fmt: FxFormat,
    roms: Vec<Vec<ComplexFx>>,
}

impl FixedArith {
    fn new(config: &FftConfig) -> Result<Self> {
        let pairs = config.stages() / 2;
        let m = config.word_fmt.total_bits();
        let roms = (0..pairs.saturating_sub(1)).map(|p| twiddle_rom(config.n_points, p, m)).collect::<Result<_>>()?;
        Ok(Self { fmt: config.word_fmt, roms })
    }

    pub fn rom(&self, pair: usize) -> Option<&[ComplexFx]> {
        self.roms.get(pair).map(Vec::as_slice)
    }
}

impl SdfArith for FixedArith {
    type Value = ComplexFx;

    fn zero(&self) -> ComplexFx {
        ComplexFx::zero(self.fmt)
    }

    fn add(&self, a: ComplexFx, b: ComplexFx) -> ComplexFx {
        ComplexFx::wrapped(
            a.re.raw() as i128 + b.re.raw() as i128,
            a.im.raw() as i128 + b.im.raw() as i128,
            self.fmt,
        )
    }

    fn sub(&self, a: ComplexFx, b: ComplexFx) -> ComplexFx {
        ComplexFx::wrapped(
            a.re.raw() as i128 - b.re.raw() as i128,
            a.im.raw() as i128 - b.im.raw() as i128,
            self.fmt,
        )
    }

    fn rotate_neg_j(&self, a: ComplexFx) -> ComplexFx {
        a.rotate_neg_j()
    }

    fn scale(&self, a: ComplexFx, shift: u32) -> ComplexFx {
        a.shift_right(shift)
    }

    fn twiddle(&self, pair: usize, index: usize, a: ComplexFx) -> ComplexFx {
        complex_mul(a, self.roms[pair][index]).expect("ROM and data formats are fixed at construction")
    }
}

/// Bit-accurate FFT pipeline with its result RAM.
#[derive(Debug, Clone)]
pub struct FftPipeline {
    config: FftConfig,
    engine: SdfEngine<FixedArith>,
    pushed: usize,
    clocks: usize,
    ram: Vec<ComplexFx>,
    ready: bool,
}

impl FftPipeline {
    pub fn new(config: FftConfig) -> Result<Self> {
        let arith = FixedArith::new(&config)?;
        let engine = SdfEngine::new(config.n_points, arith, config.scaling.clone());
        let ram = vec![ComplexFx::zero(config.word_fmt); config.n_points];
        Ok(Self { config, engine, pushed: 0, clocks: 0, ram, ready: false })
    }

    pub fn config(&self) -> &FftConfig {
        &self.config
    }

    pub fn latency(&self) -> usize {
        fft_latency(&self.config)
    }

    pub fn fifo_depths(&self) -> Vec<usize> {
        self.engine.fifo_depths()
    }

    pub fn rom(&self, pair: usize) -> Option<&[ComplexFx]> {
        self.engine.arith().rom(pair)
    }

    pub fn control_counter(&self) -> usize {
        self.engine.counter()
    }

    pub fn samples_pushed(&self) -> usize {
        self.pushed
    }

    /// Set once every result of the current frame is in the RAM.
    pub fn frame_ready(&self) -> bool {
        self.ready
    }

    pub fn ram(&self) -> &[ComplexFx] {
        &self.ram
    }

    /// Clear buffers, counter, frame state and RAM.
    pub fn reset(&mut self) {
        self.engine.reset();
        self.pushed = 0;
        self.clocks = 0;
        self.ready = false;
        self.ram.iter_mut().for_each(|v| *v = ComplexFx::zero(self.config.word_fmt));
    }

    fn tick(&mut self, x: ComplexFx) -> Result<Option<(ComplexFx, usize)>> {
        let n = self.config.n_points;
        let y = self.engine.clock(x);
        let t = self.clocks;
        self.clocks += 1;
        if (n - 1..2 * n - 1).contains(&t) {
            let index = bit_reverse(t - (n - 1), self.config.stages() as u32)?;
            self.ram[index] = y;
            return Ok(Some((y, index)));
        }
        Ok(None)
    }

    /// Clock in the next sample of the current frame (natural order). Returns
    /// the result leaving the pipeline on this clock, tagged with its
    /// bit-reversed RAM address.
    pub fn push(&mut self, x: ComplexFx) -> Result<Option<(ComplexFx, usize)>> {
        let n = self.config.n_points;
        if self.pushed == n {
            return Err(Error::FrameOverrun { n_points: n });
        }
        if x.format() != self.config.word_fmt {
            return Err(Error::FormatMismatch { left: x.format(), right: self.config.word_fmt });
        }
        if self.pushed == 0 {
            self.ready = false;
        }
        self.pushed += 1;
        self.tick(x)
    }

    /// Complete the frame: pad missing inputs with zeros, clock until every
    /// result is out and realign the counter for the next frame.
    pub fn flush(&mut self) -> Result<Vec<(ComplexFx, usize)>> {
        let n = self.config.n_points;
        let zero = ComplexFx::zero(self.config.word_fmt);
        let mut out = Vec::new();
        while self.pushed < n {
            self.pushed += 1;
            out.extend(self.tick(zero)?);
        }
        while self.clocks < 2 * n {
            out.extend(self.tick(zero)?);
        }
        self.pushed = 0;
        self.clocks = 0;
        self.ready = true;
        Ok(out)
    }

    /// Transform one frame; returns the spectrum in natural order.
    pub fn frame(&mut self, x: &[ComplexFx]) -> Result<Vec<ComplexFx>> {
        if x.len() != self.config.n_points {
            return Err(Error::LengthMismatch { left: x.len(), right: self.config.n_points });
        }
        if self.pushed != 0 {
            self.flush()?;
        }
        for &v in x {
            self.push(v)?;
        }
        self.flush()?;
        Ok(self.ram.clone())
    }
}
