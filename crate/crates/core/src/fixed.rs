//! Two's-complement fixed-point values with explicit word width.
//!
//! A value is a raw signed integer together with its [`FxFormat`]; the real
//! value it stands for is `raw * 2^-frac_bits`. Datapath arithmetic
//! (add, multiply, shift) wraps exactly like a synthesized adder of the same
//! width. Only [`FxSample::quantize`], the entry point for external reals,
//! saturates.

use std::fmt;

use crate::error::{Error, Result};

/// Word layout of a fixed-point signal: total width including the sign bit
/// and the number of fractional bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FxFormat {
    total_bits: u32,
    frac_bits: u32,
}

impl FxFormat {
    pub fn new(total_bits: u32, frac_bits: u32) -> Result<Self> {
        if !(1..=64).contains(&total_bits) || frac_bits >= total_bits {
            return Err(Error::InvalidFormat { total_bits, frac_bits });
        }
        Ok(Self { total_bits, frac_bits })
    }

    pub fn total_bits(self) -> u32 {
        self.total_bits
    }

    pub fn frac_bits(self) -> u32 {
        self.frac_bits
    }

    pub fn min_raw(self) -> i64 {
        if self.total_bits == 64 {
            i64::MIN
        } else {
            -(1i64 << (self.total_bits - 1))
        }
    }

    pub fn max_raw(self) -> i64 {
        if self.total_bits == 64 {
            i64::MAX
        } else {
            (1i64 << (self.total_bits - 1)) - 1
        }
    }

    /// Weight of one least significant bit.
    pub fn lsb(self) -> f64 {
        (-(self.frac_bits as f64)).exp2()
    }

    pub fn contains(self, raw: i64) -> bool {
        (self.min_raw()..=self.max_raw()).contains(&raw)
    }

    /// Keep the low `total_bits` of `v` and sign-extend.
    pub fn wrap(self, v: i128) -> i64 {
        let sh = 128 - self.total_bits;
        ((v << sh) >> sh) as i64
    }

    pub fn saturate(self, v: i128) -> i64 {
        v.clamp(self.min_raw() as i128, self.max_raw() as i128) as i64
    }
}

impl fmt::Display for FxFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.total_bits, self.frac_bits)
    }
}

/// Rounding applied when a real number enters the fixed-point domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rounding {
    /// Round half to even.
    #[default]
    NearestEven,
    /// Truncate toward negative infinity.
    Floor,
}

/// A fixed-point sample: raw two's-complement integer plus its format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FxSample {
    raw: i64,
    format: FxFormat,
}

#[allow(clippy::should_implement_trait)]
impl FxSample {
    pub fn from_raw(raw: i64, format: FxFormat) -> Result<Self> {
        if !format.contains(raw) {
            return Err(Error::RawOutOfRange { raw, format });
        }
        Ok(Self { raw, format })
    }

    /// Build from an arbitrary integer by keeping its low `total_bits`.
    pub fn wrapped(raw: i128, format: FxFormat) -> Self {
        Self { raw: format.wrap(raw), format }
    }

    pub fn zero(format: FxFormat) -> Self {
        Self { raw: 0, format }
    }

    pub fn max(format: FxFormat) -> Self {
        Self { raw: format.max_raw(), format }
    }

    /// Quantize a real value; out-of-range values saturate.
    pub fn quantize(x: f64, format: FxFormat, mode: Rounding) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFinite);
        }
        // scaling by a power of two is exact in binary floating point
        let scaled = x * (format.frac_bits as f64).exp2();
        let rounded = match mode {
            Rounding::NearestEven => scaled.round_ties_even(),
            Rounding::Floor => scaled.floor(),
        };
        let raw = if rounded >= format.max_raw() as f64 {
            format.max_raw()
        } else if rounded <= format.min_raw() as f64 {
            format.min_raw()
        } else {
            rounded as i64
        };
        Ok(Self { raw, format })
    }

    pub fn raw(self) -> i64 {
        self.raw
    }

    pub fn format(self) -> FxFormat {
        self.format
    }

    pub fn to_real(self) -> f64 {
        self.raw as f64 * self.format.lsb()
    }

    fn same_format(self, other: Self) -> Result<()> {
        if self.format != other.format {
            return Err(Error::FormatMismatch { left: self.format, right: other.format });
        }
        Ok(())
    }

    /// Wrapping addition; both operands must share a format.
    pub fn add(self, other: Self) -> Result<Self> {
        self.same_format(other)?;
        Ok(Self::wrapped(self.raw as i128 + other.raw as i128, self.format))
    }

    /// Wrapping subtraction; both operands must share a format.
    pub fn sub(self, other: Self) -> Result<Self> {
        self.same_format(other)?;
        Ok(Self::wrapped(self.raw as i128 - other.raw as i128, self.format))
    }

    /// Wrapping negation (the most negative value maps to itself).
    pub fn neg(self) -> Self {
        Self::wrapped(-(self.raw as i128), self.format)
    }

    /// Full-precision product, floor-shifted down to `out`'s fractional bits and
    /// wrapped into `out`'s width.
    pub fn mul(self, other: Self, out: FxFormat) -> Result<Self> {
        let have = self.format.frac_bits + other.format.frac_bits;
        if have < out.frac_bits {
            return Err(Error::UnsupportedRescale { have, want: out.frac_bits });
        }
        let product = self.raw as i128 * other.raw as i128;
        Ok(Self::wrapped(product >> (have - out.frac_bits), out))
    }

    /// Arithmetic shift right (multiply by `2^-k`, rounding toward negative infinity).
    pub fn shift_right(self, k: u32) -> Self {
        Self { raw: self.raw >> k.min(63), format: self.format }
    }

    /// Reinterpret the same raw bits under another format, wrapping if narrower.
    pub fn reinterpret(self, format: FxFormat) -> Self {
        Self::wrapped(self.raw as i128, format)
    }
}

impl fmt::Display for FxSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.raw, self.format)
    }
}
