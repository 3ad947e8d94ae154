//! End-to-end experiments behind the `wbdsp` binary.
//!
//! Every experiment builds a [`Soc`], programs the core through its register
//! map and measures it through the same registers. `direct` skips the bus and
//! calls the core models instead, which is handy when a register problem is
//! suspected.
//!
//! CSV layouts:
//!
//! * `fir-test`, `iir-test`: `frequency,h_float,h_core` with one row per DFT
//!   bin, `frequency` in rad/sample and the other two columns magnitudes.
//! * `fft-test`: `index,re_raw,im_raw,re,im,re_ref,im_ref`, where the raw
//!   columns are the result words, `re`/`im` their real values and the `_ref`
//!   columns the scaled double-precision DFT.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use thiserror::Error;

use crate::bus::{scenario, AddressMap, BusError, FftDriver, FirDriver, IirDriver, Soc, SocError};
use crate::error::Error;
use crate::fft::{ComplexFx, FftConfig, FftPipeline};
use crate::fir::{impulse_amplitude, FirConfig, FirCore};
use crate::fixed::{FxSample, Rounding};
use crate::fixture::{self, SosFixture};
use crate::iir::{IirConfig, IirCore, SosCoeffs, SosSection};
use crate::oracle::{dft, dft_real, direct_sos, effective_length, mse, Spectrum};

pub const FIR_MAX_MSE: f64 = 1e-3;
pub const IIR_MAX_MSE: f64 = 5e-4;
pub const FFT_MAX_MSE: f64 = 5e-9;

/// First two samples of the built-in FFT test frame; the rest are zero.
pub const FFT_TEST_HEAD: [f64; 2] = [-0.002098083496094, 0.001953125];

/// Longest IIR impulse response the length rule may pick.
pub const IIR_MAX_LEN: usize = 1 << 17;

pub const FIR_FIXTURE: &str = "fir_lowpass_50.txt";
pub const IIR_FIXTURE: &str = "iir_bandpass_6sos.txt";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Bus(#[from] BusError),
    #[error(transparent)]
    Soc(#[from] SocError),
    #[error("cannot write {path}: {msg}")]
    Output { path: String, msg: String },
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    FirTest,
    IirTest,
    FftTest,
    Scenario(PathBuf),
    DumpRegs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Defaults to the fixture length.
    pub n_taps: Option<usize>,
    /// Defaults to the fixture section count.
    pub n_sect: Option<usize>,
    pub word_bits: u32,
    pub growth_bits: u32,
    /// Defaults to 15 for FIR and FFT, 13 for IIR.
    pub frac_bits: Option<u32>,
    pub fft_points: usize,
    pub map: AddressMap,
    pub fixture: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub direct: bool,
    pub permissive_bus: bool,
    pub max_mse: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_taps: None,
            n_sect: None,
            word_bits: 16,
            growth_bits: 8,
            frac_bits: None,
            fft_points: 1024,
            map: AddressMap::default(),
            fixture: None,
            out: None,
            direct: false,
            permissive_bus: false,
            max_mse: None,
        }
    }
}

impl RunConfig {
    pub fn fir_config(&self, n_taps: usize) -> HarnessResult<FirConfig> {
        Ok(FirConfig::new(n_taps, self.word_bits, self.growth_bits, self.frac_bits.unwrap_or(15))?)
    }

    pub fn iir_config(&self, n_sect: usize) -> HarnessResult<IirConfig> {
        Ok(IirConfig::new(n_sect, self.word_bits, self.growth_bits, self.frac_bits.unwrap_or(13))?)
    }

    pub fn fft_config(&self) -> HarnessResult<FftConfig> {
        Ok(FftConfig::new(self.fft_points, self.word_bits, self.frac_bits.unwrap_or(self.word_bits - 1))?)
    }

    /// A SoC with the given FIR and IIR sizes and this run's parameters.
    pub fn soc(&self, n_taps: usize, n_sect: usize) -> HarnessResult<Soc> {
        let mut soc =
            Soc::new(self.map, self.fir_config(n_taps)?, self.iir_config(n_sect)?, self.fft_config()?)?;
        soc.bus.set_permissive(self.permissive_bus);
        Ok(soc)
    }

    fn default_soc(&self) -> HarnessResult<Soc> {
        self.soc(self.n_taps.unwrap_or(50), self.n_sect.unwrap_or(6))
    }
}

/// One measured spectrum against its reference.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub label: &'static str,
    pub reference: Spectrum,
    pub measured: Spectrum,
    /// Raw result words, FFT only.
    pub raw: Vec<(i64, i64)>,
    pub mse: f64,
    pub threshold: f64,
    /// Bus clocks spent, `None` when the bus was bypassed.
    pub bus_cycles: Option<u64>,
    pub detail: String,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.mse <= self.threshold
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let path = match self.bus_cycles {
            Some(c) => format!("via bus, {c} bus cycles"),
            None => "direct".to_string(),
        };
        let _ = writeln!(s, "{} test: {}, {} bins, {path}", self.label, self.detail, self.measured.len());
        let _ = writeln!(
            s,
            "MSE = {:.14e} (threshold {:.14e}): {}",
            self.mse,
            self.threshold,
            if self.passed() { "PASS" } else { "FAIL" }
        );
        if self.label == "FFT" {
            let _ = writeln!(s, "MSE per bin = {:.14e}", self.mse / self.measured.len() as f64);
        }
        s
    }

    pub fn csv(&self) -> String {
        let mut s = String::new();
        let n = self.measured.len();
        if self.label == "FFT" {
            s.push_str("index,re_raw,im_raw,re,im,re_ref,im_ref\n");
            for k in 0..n {
                let (re_raw, im_raw) = self.raw[k];
                let (m, r) = (self.measured[k], self.reference[k]);
                let _ = writeln!(s, "{k},{re_raw},{im_raw},{:.15e},{:.15e},{:.15e},{:.15e}", m.re, m.im, r.re, r.im);
            }
        } else {
            s.push_str("frequency,h_float,h_core\n");
            for k in 0..n {
                let w = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                let _ = writeln!(s, "{w:.15e},{:.15e},{:.15e}", self.reference[k].norm(), self.measured[k].norm());
            }
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> HarnessResult<()> {
        std::fs::write(path, self.csv())
            .map_err(|e| HarnessError::Output { path: path.display().to_string(), msg: e.to_string() })
    }
}

fn compare(
    label: &'static str,
    reference: Spectrum,
    measured: Spectrum,
    threshold: f64,
    bus_cycles: Option<u64>,
    detail: String,
) -> HarnessResult<Comparison> {
    let mse = mse(&reference, &measured)?;
    Ok(Comparison { label, reference, measured, raw: Vec::new(), mse, threshold, bus_cycles, detail })
}

/// Impulse response of a FIR core holding `coeffs`, divided by the impulse
/// amplitude. Returns the response and the bus cycles used, if any.
pub fn fir_response(cfg: &RunConfig, coeffs: &[i64], len: usize) -> HarnessResult<(Vec<f64>, Option<u64>)> {
    let config = cfg.fir_config(coeffs.len())?;
    let fmt = config.data_fmt();
    let amp = impulse_amplitude(fmt);
    if cfg.direct {
        let mut core = FirCore::from_raw(config, coeffs)?;
        let h = core.impulse_response(len)?;
        return Ok((h.into_iter().map(|v| v / amp.to_real()).collect(), None));
    }
    let mut soc = cfg.soc(coeffs.len(), cfg.n_sect.unwrap_or(1))?;
    let base = soc.map().fir_base;
    let mut drv = FirDriver::new(&mut soc.bus, base, config);
    drv.set_frac_bits(config.coeff_fmt().frac_bits())?;
    let coeffs = coeffs.iter().map(|&c| FxSample::from_raw(c, config.coeff_fmt())).collect::<Result<Vec<_>, _>>()?;
    drv.load(&coeffs)?;
    let zero = FxSample::zero(fmt);
    let h = (0..len)
        .map(|n| drv.filter(if n == 0 { amp } else { zero }).map(|y| y.to_real() / amp.to_real()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((h, Some(soc.bus.elapsed_cycles())))
}

/// Impulse response of an IIR core, normalized like [`fir_response`].
pub fn iir_response(
    cfg: &RunConfig,
    sections: &[SosSection],
    gain: FxSample,
    len: usize,
) -> HarnessResult<(Vec<f64>, Option<u64>)> {
    let config = cfg.iir_config(sections.len())?;
    let fmt = config.data_fmt();
    let amp = impulse_amplitude(fmt);
    if cfg.direct {
        let mut core = IirCore::from_sections(config, sections.to_vec(), gain, sections.len())?;
        let h = core.impulse_response(len)?;
        return Ok((h.into_iter().map(|v| v / amp.to_real()).collect(), None));
    }
    let mut soc = cfg.soc(cfg.n_taps.unwrap_or(1), sections.len())?;
    let base = soc.map().iir_base;
    let mut drv = IirDriver::new(&mut soc.bus, base, config);
    drv.configure(sections, gain, sections.len())?;
    let zero = FxSample::zero(fmt);
    let h = (0..len)
        .map(|n| drv.filter(if n == 0 { amp } else { zero }).map(|y| y.to_real() / amp.to_real()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((h, Some(soc.bus.elapsed_cycles())))
}

/// Transform one frame, returning the natural-order spectrum.
pub fn fft_transform(cfg: &RunConfig, frame: &[ComplexFx]) -> HarnessResult<(Vec<ComplexFx>, Option<u64>)> {
    let config = cfg.fft_config()?;
    if frame.len() != config.n_points() {
        return Err(Error::LengthMismatch { left: frame.len(), right: config.n_points() }.into());
    }
    if cfg.direct {
        return Ok((FftPipeline::new(config)?.frame(frame)?, None));
    }
    let mut soc = cfg.default_soc()?;
    let base = soc.map().fft_base;
    let out = FftDriver::new(&mut soc.bus, base, config).transform(frame)?;
    Ok((out, Some(soc.bus.elapsed_cycles())))
}

pub fn cmd_fir_test(cfg: &RunConfig) -> HarnessResult<Comparison> {
    let path = cfg.fixture.clone().unwrap_or_else(|| fixture::bundled(FIR_FIXTURE));
    let taps = fixture::load_fir_taps(&path)?;
    if let Some(n) = cfg.n_taps.filter(|&n| n != taps.len()) {
        return Err(Error::CoefficientCount { expected: n, got: taps.len() }.into());
    }
    let config = cfg.fir_config(taps.len())?;
    let raw = taps
        .iter()
        .map(|&h| FxSample::quantize(h, config.coeff_fmt(), Rounding::NearestEven).map(FxSample::raw))
        .collect::<Result<Vec<_>, _>>()?;
    let (h, cycles) = fir_response(cfg, &raw, taps.len())?;
    let detail = format!(
        "{} taps, M={} G={} Q={}",
        taps.len(),
        cfg.word_bits,
        cfg.growth_bits,
        config.coeff_fmt().frac_bits()
    );
    compare("FIR", dft_real(&taps), dft_real(&h), cfg.max_mse.unwrap_or(FIR_MAX_MSE), cycles, detail)
}

fn normalized(c: &SosCoeffs) -> SosCoeffs {
    let a0 = c.a[0];
    SosCoeffs { b: c.b.map(|v| v / a0), a: c.a.map(|v| v / a0) }
}

/// Double-precision impulse response of a cascade, cut by the tail rule:
/// the last sample at or above `threshold` ends the response.
pub fn iir_reference(fx: &SosFixture, threshold: f64) -> HarnessResult<Vec<f64>> {
    let mut x = vec![0.0; IIR_MAX_LEN];
    x[0] = 1.0;
    let h = direct_sos(&fx.sections, fx.gain, &x)?;
    let len = effective_length(&h, threshold);
    Ok(h[..len].to_vec())
}

pub fn cmd_iir_test(cfg: &RunConfig) -> HarnessResult<Comparison> {
    let path = cfg.fixture.clone().unwrap_or_else(|| fixture::bundled(IIR_FIXTURE));
    let fx = fixture::load_sos(&path)?;
    if let Some(n) = cfg.n_sect.filter(|&n| n != fx.sections.len()) {
        return Err(Error::CoefficientCount { expected: n, got: fx.sections.len() }.into());
    }
    let config = cfg.iir_config(fx.sections.len())?;
    let cfmt = config.coeff_fmt();
    let sections = fx
        .sections
        .iter()
        .map(|c| SosSection::quantize(&normalized(c), cfmt))
        .collect::<Result<Vec<_>, _>>()?;
    let gain = FxSample::quantize(fx.gain, cfmt, Rounding::NearestEven)?;
    let reference = iir_reference(&fx, cfmt.lsb())?;
    let (h, cycles) = iir_response(cfg, &sections, gain, reference.len())?;
    let detail = format!(
        "{} sections, M={} G={} Q={}, data {}",
        sections.len(),
        cfg.word_bits,
        cfg.growth_bits,
        cfmt.frac_bits(),
        config.data_fmt()
    );
    compare("IIR", dft_real(&reference), dft_real(&h), cfg.max_mse.unwrap_or(IIR_MAX_MSE), cycles, detail)
}

/// The built-in FFT test frame of length `n`.
pub fn fft_test_frame(n: usize) -> Vec<Complex64> {
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for (slot, v) in x.iter_mut().zip(FFT_TEST_HEAD) {
        slot.re = v;
    }
    x
}

pub fn cmd_fft_test(cfg: &RunConfig) -> HarnessResult<Comparison> {
    let config = cfg.fft_config()?;
    let n = config.n_points();
    let x = match &cfg.fixture {
        Some(p) => fixture::load_frame(p)?,
        None => fft_test_frame(n),
    };
    if x.len() != n {
        return Err(Error::LengthMismatch { left: x.len(), right: n }.into());
    }
    let fmt = config.word_fmt();
    let frame = x.iter().map(|&z| ComplexFx::quantize(z, fmt, Rounding::NearestEven)).collect::<Result<Vec<_>, _>>()?;
    let (out, cycles) = fft_transform(cfg, &frame)?;
    let reference = dft(&x).scaled(config.total_gain());
    let measured = Spectrum::new(out.iter().map(|z| z.to_complex()).collect());
    let detail = format!("{n} points, M={} Q={}, gain 2^-{}", fmt.total_bits(), fmt.frac_bits(), config.total_shift());
    let mut c = compare("FFT", reference, measured, cfg.max_mse.unwrap_or(FFT_MAX_MSE), cycles, detail)?;
    c.raw = out.iter().map(|z| (z.re.raw(), z.im.raw())).collect();
    Ok(c)
}

pub fn cmd_scenario(cfg: &RunConfig, script: &Path) -> HarnessResult<scenario::Report> {
    let script = scenario::load(script)?;
    let mut soc = cfg.default_soc()?;
    Ok(scenario::run(&script, &mut soc.bus))
}

/// Register map of the SoC built from `cfg`.
pub fn cmd_dump_regs(cfg: &RunConfig) -> HarnessResult<String> {
    let soc = cfg.default_soc()?;
    let mut s = String::from("name,address,words,access,width\n");
    for (name, addr, info) in soc.bus.register_map() {
        let _ = writeln!(s, "{name},{addr:#010x},{},{},{}", info.words, info.access, info.width);
    }
    Ok(s)
}

/// What a command printed and whether it passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

pub fn run(command: &Command, cfg: &RunConfig) -> HarnessResult<Outcome> {
    let finish = |c: Comparison| -> HarnessResult<Outcome> {
        let mut text = c.summary();
        if let Some(out) = &cfg.out {
            c.write_csv(out)?;
            let _ = writeln!(text, "wrote {}", out.display());
        }
        Ok(Outcome { text, passed: c.passed() })
    };
    match command {
        Command::FirTest => finish(cmd_fir_test(cfg)?),
        Command::IirTest => finish(cmd_iir_test(cfg)?),
        Command::FftTest => finish(cmd_fft_test(cfg)?),
        Command::Scenario(path) => {
            let r = cmd_scenario(cfg, path)?;
            let text = match &r.mismatch {
                None => format!("scenario {}: {} directives, PASS\n", path.display(), r.total),
                Some(m) => format!("scenario {}: FAIL after {}/{} directives\n{m}\n", path.display(), r.executed, r.total),
            };
            Ok(Outcome { text, passed: r.passed() })
        }
        Command::DumpRegs => {
            let text = cmd_dump_regs(cfg)?;
            if let Some(out) = &cfg.out {
                std::fs::write(out, &text)
                    .map_err(|e| HarnessError::Output { path: out.display().to_string(), msg: e.to_string() })?;
            }
            Ok(Outcome { text, passed: true })
        }
    }
}
