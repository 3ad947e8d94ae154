use thiserror::Error;

use crate::fixed::FxFormat;

/// Errors raised by the datapath models, the oracle helpers and the fixture parsers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid fixed-point format: {total_bits} total bits, {frac_bits} fractional bits")]
    InvalidFormat { total_bits: u32, frac_bits: u32 },

    #[error("non-finite input")]
    NonFinite,

    #[error("raw value {raw} does not fit {format}")]
    RawOutOfRange { raw: i64, format: FxFormat },

    #[error("format mismatch: {left} vs {right}")]
    FormatMismatch { left: FxFormat, right: FxFormat },

    #[error("unsupported rescale: product has {have} fractional bits, output wants {want}")]
    UnsupportedRescale { have: u32, want: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },

    #[error("active section count {active} outside 1..={n_sect}")]
    ActiveSections { active: usize, n_sect: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("index {index} out of range for {bits}-bit reversal")]
    IndexOutOfRange { index: usize, bits: u32 },

    #[error("frame overrun: all {n_points} samples of the current frame already pushed")]
    FrameOverrun { n_points: usize },

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("i/o error on {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
