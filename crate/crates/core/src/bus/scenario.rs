//! Register-level regression scripts.
//!
//! One directive per line:
//!
//! ```text
//! W    <addr> <data> [ERR]          write; ERR expects the bus to refuse it
//! R    <addr> <data | * | ERR>      read and compare; * accepts anything
//! POLL <addr> <mask> <value> <max>  read until (data & mask) == value
//! ```
//!
//! `<data>`, `<mask>` and `<value>` are hexadecimal with an optional `0x`
//! prefix. `<max>` is decimal. An address is a symbol such as `FIR_BASE` or
//! `IIR_STATUS`, a number, or either followed by `+n` / `-n` terms
//! (`FIR_COEFF+0x8`, `FFT_BASE+12`). Numbers in addresses are decimal unless
//! prefixed with `0x`. `#` starts a comment.
//!
//! Execution stops at the first directive whose outcome does not match.

use std::fmt;

use super::{Bus, BusError};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddrExpr {
    pub symbol: Option<String>,
    pub offset: i64,
}

impl AddrExpr {
    pub fn resolve(&self, symbols: &[(String, u32)]) -> std::result::Result<u32, String> {
        let base = match &self.symbol {
            None => 0,
            Some(s) => symbols.iter().find(|(n, _)| n == s).map(|(_, a)| *a as i64).ok_or(format!("unknown symbol {s}"))?,
        };
        u32::try_from(base + self.offset).map_err(|_| format!("address {} out of range", base + self.offset))
    }
}

impl fmt::Display for AddrExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.symbol, self.offset) {
            (Some(s), 0) => write!(f, "{s}"),
            (Some(s), o) if o < 0 => write!(f, "{s}-{:#x}", -o),
            (Some(s), o) => write!(f, "{s}+{o:#x}"),
            (None, o) => write!(f, "{o:#010x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Value(u32),
    Any,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Op {
    Write { addr: AddrExpr, data: u32, expect_error: bool },
    Read { addr: AddrExpr, expect: Expect },
    Poll { addr: AddrExpr, mask: u32, value: u32, max_iters: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Directive {
    pub line: usize,
    pub op: Op,
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.op {
            Op::Write { addr, data, expect_error } => {
                write!(f, "W {addr} {data:#010x}{}", if *expect_error { " ERR" } else { "" })
            }
            Op::Read { addr, expect } => match expect {
                Expect::Value(v) => write!(f, "R {addr} {v:#010x}"),
                Expect::Any => write!(f, "R {addr} *"),
                Expect::Error => write!(f, "R {addr} ERR"),
            },
            Op::Poll { addr, mask, value, max_iters } => {
                write!(f, "POLL {addr} {mask:#x} {value:#x} {max_iters}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub directives: Vec<Directive>,
}

fn hex(tok: &str) -> Option<u32> {
    let t = tok.strip_prefix("0x").or_else(|| tok.strip_prefix("0X")).unwrap_or(tok);
    u32::from_str_radix(t, 16).ok()
}

fn number(tok: &str) -> Option<i64> {
    match tok.strip_prefix("0x").or_else(|| tok.strip_prefix("0X")) {
        Some(h) => i64::from_str_radix(h, 16).ok(),
        None => tok.parse().ok(),
    }
}

fn addr_expr(tok: &str) -> std::result::Result<AddrExpr, String> {
    let mut symbol = None;
    let mut offset = 0i64;
    let mut rest = tok;
    let mut sign = 1;
    let mut first = true;
    loop {
        let end = rest[1.min(rest.len())..].find(['+', '-']).map_or(rest.len(), |i| i + 1);
        let term = &rest[..end];
        if term.is_empty() {
            return Err(format!("bad address {tok:?}"));
        }
        match number(term) {
            Some(v) => offset += sign * v,
            None if first && term.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') => {
                symbol = Some(term.to_string())
            }
            None => return Err(format!("bad address term {term:?} in {tok:?}")),
        }
        first = false;
        if end == rest.len() {
            break;
        }
        sign = if rest.as_bytes()[end] == b'+' { 1 } else { -1 };
        rest = &rest[end + 1..];
    }
    Ok(AddrExpr { symbol, offset })
}

pub fn parse(name: &str, text: &str) -> Result<Script> {
    let mut directives = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or_default().trim();
        if body.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { path: name.to_string(), line, msg };
        let toks: Vec<&str> = body.split_whitespace().collect();
        let addr = |t: &str| addr_expr(t).map_err(&err);
        let hex_arg = |t: &str| hex(t).ok_or_else(|| err(format!("expected hex value, found {t:?}")));
        let op = match (toks[0].to_ascii_uppercase().as_str(), &toks[1..]) {
            ("W", [a, d]) => Op::Write { addr: addr(a)?, data: hex_arg(d)?, expect_error: false },
            ("W", [a, d, e]) if e.eq_ignore_ascii_case("ERR") => {
                Op::Write { addr: addr(a)?, data: hex_arg(d)?, expect_error: true }
            }
            ("R", [a, e]) => {
                let expect = match *e {
                    "*" => Expect::Any,
                    e if e.eq_ignore_ascii_case("ERR") => Expect::Error,
                    e => Expect::Value(hex_arg(e)?),
                };
                Op::Read { addr: addr(a)?, expect }
            }
            ("POLL", [a, m, v, n]) => Op::Poll {
                addr: addr(a)?,
                mask: hex_arg(m)?,
                value: hex_arg(v)?,
                max_iters: n.parse().map_err(|_| err(format!("expected iteration count, found {n:?}")))?,
            },
            (op @ ("W" | "R" | "POLL"), _) => return Err(err(format!("wrong operands for {op}"))),
            (op, _) => return Err(err(format!("unknown directive {op:?}"))),
        };
        directives.push(Directive { line, op });
    }
    Ok(Script { directives })
}

pub fn load(path: &std::path::Path) -> Result<Script> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })?;
    parse(&path.display().to_string(), &text)
}

/// Where and why a script stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub line: usize,
    pub directive: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: `{}`: expected {}, got {}", self.line, self.directive, self.expected, self.actual)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub total: usize,
    pub executed: usize,
    pub mismatch: Option<Mismatch>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

fn outcome<T>(r: &std::result::Result<T, BusError>, show: impl Fn(&T) -> String) -> String {
    match r {
        Ok(v) => show(v),
        Err(e) => format!("error ({e})"),
    }
}

pub fn run(script: &Script, bus: &mut Bus) -> Report {
    let symbols = bus.symbols();
    let total = script.directives.len();
    for (i, d) in script.directives.iter().enumerate() {
        let fail = |expected: String, actual: String| Report {
            total,
            executed: i + 1,
            mismatch: Some(Mismatch { line: d.line, directive: d.to_string(), expected, actual }),
        };
        let (Op::Write { addr, .. } | Op::Read { addr, .. } | Op::Poll { addr, .. }) = &d.op;
        let addr = match addr.resolve(&symbols) {
            Ok(a) => a,
            Err(msg) => return fail("a mapped address".into(), msg),
        };
        match d.op {
            Op::Write { data, expect_error, .. } => {
                let r = bus.write(addr, data);
                if r.is_err() != expect_error {
                    let want = if expect_error { "error" } else { "ack" };
                    return fail(want.into(), outcome(&r, |_| "ack".into()));
                }
            }
            Op::Read { expect, .. } => {
                let r = bus.read(addr);
                let ok = match (&r, expect) {
                    (Err(_), Expect::Error) => true,
                    (Ok(_), Expect::Any) => true,
                    (Ok(t), Expect::Value(v)) => t.data_r == v,
                    _ => false,
                };
                if !ok {
                    let want = match expect {
                        Expect::Value(v) => format!("{v:#010x}"),
                        Expect::Any => "any value".into(),
                        Expect::Error => "error".into(),
                    };
                    return fail(want, outcome(&r, |t| format!("{:#010x}", t.data_r)));
                }
            }
            Op::Poll { mask, value, max_iters, .. } => match bus.poll(addr, mask, value, max_iters) {
                Ok(Some(_)) => {}
                Ok(None) => {
                    return fail(
                        format!("(data & {mask:#x}) == {value:#x} within {max_iters} reads"),
                        "poll exhausted".into(),
                    )
                }
                Err(e) => return fail(format!("(data & {mask:#x}) == {value:#x}"), format!("error ({e})")),
            },
        }
    }
    Report { total, executed: total, mismatch: None }
}
