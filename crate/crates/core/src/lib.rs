//! Bit-accurate models of Wishbone-attached FIR, IIR and FFT cores, with
//! double-precision reference implementations to judge them against.
//!
//! The datapath modules ([`fir`], [`iir`], [`fft`]) reproduce the hardware
//! arithmetic on [`fixed`] point samples. [`bus`] wraps each core in its
//! register map behind a transaction-level Wishbone model, and [`oracle`]
//! supplies the naive DFT, direct convolution and spectral MSE used to
//! score them.

pub mod bus;
pub mod error;
pub mod fft;
pub mod fir;
pub mod fixed;
pub mod fixture;
pub mod harness;
pub mod iir;
pub mod oracle;

pub use error::{Error, Result};
pub use fixed::{FxFormat, FxSample, Rounding};
