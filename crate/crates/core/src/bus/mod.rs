//! Transaction-level model of a Wishbone classic bus with one master.
//!
//! Each [`Bus::read`] / [`Bus::write`] is one STB/ACK handshake. Instead of
//! wiggling signals the model reports how many clocks the slave took to
//! acknowledge (`cycles_to_ack`, always at least 1). Addresses that no slave
//! decodes never see ACK and fail after a fixed timeout budget.
//!
//! Slaves are strict by default: writing a read-only register or reading a
//! write-only one is an error. In permissive mode those accesses are
//! acknowledged and silently ignored (reads return 0), like the hardware.

pub mod driver;
mod fft_slave;
mod fir_slave;
mod iir_slave;
pub mod scenario;
mod soc;

use std::any::Any;
use std::fmt;

use thiserror::Error;

pub use driver::{FftDriver, FirDriver, IirDriver};
pub use fft_slave::FftSlave;
pub use fir_slave::FirSlave;
pub use iir_slave::IirSlave;
pub use soc::{AddressMap, Soc, SocError};

/// Default number of clocks the master waits for ACK before giving up.
pub const DEFAULT_TIMEOUT_CYCLES: u32 = 16;

/// One completed master/slave handshake.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BusTransaction {
    pub addr: u32,
    pub data_w: u32,
    pub data_r: u32,
    pub is_write: bool,
    pub cycles_to_ack: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BusError {
    #[error("unaligned address {addr:#010x}")]
    Unaligned { addr: u32 },
    #[error("bus timeout at {addr:#010x} after {cycles} cycles")]
    Timeout { addr: u32, cycles: u32 },
    #[error("write to read-only register {reg} at {addr:#010x}")]
    ReadOnly { addr: u32, reg: &'static str },
    #[error("read from write-only register {reg} at {addr:#010x}")]
    WriteOnly { addr: u32, reg: &'static str },
    #[error("{reg} at {addr:#010x}: {msg}")]
    Protocol { addr: u32, reg: &'static str, msg: String },
    #[error("cannot map {name} at {base:#010x}: {msg}")]
    Mapping { name: &'static str, base: u32, msg: String },
}

/// Why a slave refused an access.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AccessError {
    ReadOnly(&'static str),
    WriteOnly(&'static str),
    Protocol(&'static str, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegAccess {
    ReadWrite,
    ReadOnly,
    WriteOnly,
}

impl fmt::Display for RegAccess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ReadWrite => "RW",
            Self::ReadOnly => "RO",
            Self::WriteOnly => "WO",
        })
    }
}

/// One entry of a slave's register map. `words > 1` marks an array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterInfo {
    pub name: &'static str,
    pub offset: u32,
    pub words: u32,
    pub access: RegAccess,
    pub width: u32,
}

pub trait WishboneSlave: Send {
    /// Register name prefix, e.g. `"FIR"`.
    fn kind(&self) -> &'static str;
    /// Size of the decoded region in bytes.
    fn region_len(&self) -> u32;
    fn registers(&self) -> Vec<RegisterInfo>;
    /// `offset` is word-aligned and inside the region.
    fn read(&mut self, offset: u32) -> Result<u32, AccessError>;
    fn write(&mut self, offset: u32, data: u32) -> Result<(), AccessError>;
    /// Global reset (active-high `reset` line).
    fn reset(&mut self);
    fn wait_states(&self) -> u32 {
        1
    }
    fn as_any(&self) -> &dyn Any;
    fn as_any_mut(&mut self) -> &mut dyn Any;
}

struct Mapped {
    base: u32,
    slave: Box<dyn WishboneSlave>,
}

impl Mapped {
    fn end(&self) -> u64 {
        self.base as u64 + self.slave.region_len() as u64
    }
}

pub struct Bus {
    slaves: Vec<Mapped>,
    timeout_cycles: u32,
    permissive: bool,
    elapsed: u64,
}

impl Default for Bus {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for Bus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bus")
            .field("slaves", &self.slaves.iter().map(|m| (m.slave.kind(), m.base)).collect::<Vec<_>>())
            .field("timeout_cycles", &self.timeout_cycles)
            .field("permissive", &self.permissive)
            .finish()
    }
}

impl Bus {
    pub fn new() -> Self {
        Self { slaves: Vec::new(), timeout_cycles: DEFAULT_TIMEOUT_CYCLES, permissive: false, elapsed: 0 }
    }

    pub fn set_timeout_cycles(&mut self, cycles: u32) {
        self.timeout_cycles = cycles.max(1);
    }

    pub fn set_permissive(&mut self, permissive: bool) {
        self.permissive = permissive;
    }

    pub fn permissive(&self) -> bool {
        self.permissive
    }

    /// Total clocks spent in handshakes (including timeouts) since creation.
    pub fn elapsed_cycles(&self) -> u64 {
        self.elapsed
    }

    pub fn attach(&mut self, base: u32, slave: Box<dyn WishboneSlave>) -> Result<(), BusError> {
        let name = slave.kind();
        let mapping = |msg: String| BusError::Mapping { name, base, msg };
        if !base.is_multiple_of(4) {
            return Err(mapping("base is not word-aligned".into()));
        }
        let new = Mapped { base, slave };
        if new.end() > 1 << 32 {
            return Err(mapping("region runs past the end of the address space".into()));
        }
        if let Some(other) = self.slaves.iter().find(|m| (m.base as u64) < new.end() && (new.base as u64) < m.end()) {
            return Err(mapping(format!("overlaps {} at {:#010x}", other.slave.kind(), other.base)));
        }
        self.slaves.push(new);
        Ok(())
    }

    /// Base address of the first slave of the given kind.
    pub fn base_of(&self, kind: &str) -> Option<u32> {
        self.slaves.iter().find(|m| m.slave.kind() == kind).map(|m| m.base)
    }

    pub fn slave<T: 'static>(&self, kind: &str) -> Option<&T> {
        self.slaves.iter().find(|m| m.slave.kind() == kind).and_then(|m| m.slave.as_any().downcast_ref())
    }

    pub fn slave_mut<T: 'static>(&mut self, kind: &str) -> Option<&mut T> {
        self.slaves.iter_mut().find(|m| m.slave.kind() == kind).and_then(|m| m.slave.as_any_mut().downcast_mut())
    }

    /// Attached regions as `(kind, base, len)`.
    pub fn regions(&self) -> Vec<(&'static str, u32, u32)> {
        self.slaves.iter().map(|m| (m.slave.kind(), m.base, m.slave.region_len())).collect()
    }

    /// Absolute register map of every slave: `(name, address, info)`.
    pub fn register_map(&self) -> Vec<(String, u32, RegisterInfo)> {
        let mut out = Vec::new();
        for m in &self.slaves {
            for r in m.slave.registers() {
                out.push((format!("{}_{}", m.slave.kind(), r.name), m.base + r.offset, r));
            }
        }
        out
    }

    /// Symbolic addresses: `<KIND>_BASE` plus every register name.
    pub fn symbols(&self) -> Vec<(String, u32)> {
        let mut out: Vec<_> = self.slaves.iter().map(|m| (format!("{}_BASE", m.slave.kind()), m.base)).collect();
        out.extend(self.register_map().into_iter().map(|(name, addr, _)| (name, addr)));
        out
    }

    pub fn reset(&mut self) {
        for m in &mut self.slaves {
            m.slave.reset();
        }
    }

    fn decode(&mut self, addr: u32) -> Result<(&mut Mapped, u32), BusError> {
        if !addr.is_multiple_of(4) {
            return Err(BusError::Unaligned { addr });
        }
        let timeout = self.timeout_cycles;
        match self.slaves.iter_mut().find(|m| m.base <= addr && (addr as u64) < m.end()) {
            Some(m) => {
                let off = addr - m.base;
                Ok((m, off))
            }
            None => {
                self.elapsed += timeout as u64;
                Err(BusError::Timeout { addr, cycles: timeout })
            }
        }
    }

    fn refuse(&self, addr: u32, e: AccessError) -> Result<(), BusError> {
        match e {
            _ if self.permissive => Ok(()),
            AccessError::ReadOnly(reg) => Err(BusError::ReadOnly { addr, reg }),
            AccessError::WriteOnly(reg) => Err(BusError::WriteOnly { addr, reg }),
            AccessError::Protocol(reg, msg) => Err(BusError::Protocol { addr, reg, msg }),
        }
    }

    pub fn write(&mut self, addr: u32, data: u32) -> Result<BusTransaction, BusError> {
        let (m, off) = self.decode(addr)?;
        let cycles = m.slave.wait_states() + 1;
        let res = m.slave.write(off, data);
        self.elapsed += cycles as u64;
        if let Err(e) = res {
            self.refuse(addr, e)?;
        }
        Ok(BusTransaction { addr, data_w: data, data_r: 0, is_write: true, cycles_to_ack: cycles })
    }

    pub fn read(&mut self, addr: u32) -> Result<BusTransaction, BusError> {
        let (m, off) = self.decode(addr)?;
        let cycles = m.slave.wait_states() + 1;
        let res = m.slave.read(off);
        self.elapsed += cycles as u64;
        let data = match res {
            Ok(v) => v,
            Err(e) => {
                self.refuse(addr, e)?;
                0
            }
        };
        Ok(BusTransaction { addr, data_w: 0, data_r: data, is_write: false, cycles_to_ack: cycles })
    }

    /// Read `addr` until `(data & mask) == value`, at most `max_iters` times.
    /// Returns the matching transaction and the number of reads issued.
    pub fn poll(&mut self, addr: u32, mask: u32, value: u32, max_iters: u32) -> Result<Option<(BusTransaction, u32)>, BusError> {
        for i in 1..=max_iters {
            let t = self.read(addr)?;
            if t.data_r & mask == value {
                return Ok(Some((t, i)));
            }
        }
        Ok(None)
    }
}

/// Sign-extend the low `bits` of a bus word.
pub(crate) fn sign_extend(word: u32, bits: u32) -> i64 {
    let bits = bits.clamp(1, 32);
    let sh = 64 - bits;
    ((word as u64 as i64) << sh) >> sh
}

/// Low 32 bits of a two's-complement value.
pub(crate) fn to_word(v: i64) -> u32 {
    v as u32
}
