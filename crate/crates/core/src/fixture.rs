//! Text fixture formats for coefficients and test frames.
//!
//! * FIR taps: one decimal real per line, line `k` holds `h[k]`.
//! * SOS cascade: a header line `gain <value>`, then one section per line as
//!   six reals `b0 b1 b2 a0 a1 a2`.
//! * FFT frame: one sample per line, `re` or `re im`.
//!
//! Blank lines and lines starting with `#` are skipped everywhere.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::iir::SosCoeffs;

/// A parsed SOS cascade fixture.
#[derive(Debug, Clone, PartialEq)]
pub struct SosFixture {
    pub gain: f64,
    pub sections: Vec<SosCoeffs>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(name: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { path: name.to_string(), line, msg: msg.into() }
}

fn real(name: &str, line: usize, tok: &str) -> Result<f64> {
    let v: f64 = tok.parse().map_err(|_| parse_err(name, line, format!("not a number: {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(name, line, format!("non-finite value {tok:?}")));
    }
    Ok(v)
}

pub fn parse_fir_taps(name: &str, text: &str) -> Result<Vec<f64>> {
    let taps = content_lines(text)
        .map(|(n, l)| {
            let mut toks = l.split_whitespace();
            let v = real(name, n, toks.next().unwrap_or_default())?;
            if toks.next().is_some() {
                return Err(parse_err(name, n, "expected one value per line"));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    if taps.is_empty() {
        return Err(parse_err(name, 0, "no coefficients"));
    }
    Ok(taps)
}

pub fn parse_sos(name: &str, text: &str) -> Result<SosFixture> {
    let mut lines = content_lines(text);
    let (n, header) = lines.next().ok_or_else(|| parse_err(name, 0, "empty SOS fixture"))?;
    let gain = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["gain", v] => real(name, n, v)?,
        _ => return Err(parse_err(name, n, "expected header `gain <value>`")),
    };
    let sections = lines
        .map(|(n, l)| {
            let vals = l.split_whitespace().map(|t| real(name, n, t)).collect::<Result<Vec<_>>>()?;
            let [b0, b1, b2, a0, a1, a2] = vals[..] else {
                return Err(parse_err(name, n, format!("expected 6 values, found {}", vals.len())));
            };
            if a0 == 0.0 {
                return Err(parse_err(name, n, "a0 must be non-zero"));
            }
            Ok(SosCoeffs { b: [b0, b1, b2], a: [a0, a1, a2] })
        })
        .collect::<Result<Vec<_>>>()?;
    if sections.is_empty() {
        return Err(parse_err(name, n, "no sections"));
    }
    Ok(SosFixture { gain, sections })
}

pub fn parse_frame(name: &str, text: &str) -> Result<Vec<Complex64>> {
    content_lines(text)
        .map(|(n, l)| {
            let vals = l.split_whitespace().map(|t| real(name, n, t)).collect::<Result<Vec<_>>>()?;
            match vals[..] {
                [re] => Ok(Complex64::new(re, 0.0)),
                [re, im] => Ok(Complex64::new(re, im)),
                _ => Err(parse_err(name, n, "expected `re` or `re im`")),
            }
        })
        .collect()
}

pub fn load_fir_taps(path: &Path) -> Result<Vec<f64>> {
    parse_fir_taps(&path.display().to_string(), &read(path)?)
}

pub fn load_sos(path: &Path) -> Result<SosFixture> {
    parse_sos(&path.display().to_string(), &read(path)?)
}

pub fn load_frame(path: &Path) -> Result<Vec<Complex64>> {
    parse_frame(&path.display().to_string(), &read(path)?)
}

/// Path of a fixture shipped with this crate.
pub fn bundled(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}
