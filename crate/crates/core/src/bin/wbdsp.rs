use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wbdsp::bus::AddressMap;
use wbdsp::harness::{self, Command, RunConfig};

#[derive(Parser)]
#[command(name = "wbdsp", version, about = "Run the FIR, IIR and FFT core models through their register maps")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Cmd {
    /// Impulse response of the FIR core against its float design
    FirTest,
    /// Impulse response of the IIR cascade against its float design
    IirTest,
    /// One FFT frame against the double-precision DFT
    FftTest,
    /// Execute a register-level scenario script
    Scenario { script: PathBuf },
    /// Print the register map as CSV
    DumpRegs,
}

#[derive(Args)]
struct Opts {
    /// FIR taps (default: fixture length)
    #[arg(long, global = true)]
    n_taps: Option<usize>,
    /// IIR sections (default: fixture length)
    #[arg(long, global = true)]
    n_sect: Option<usize>,
    /// Coefficient word width M
    #[arg(long, global = true, default_value_t = 16)]
    word_bits: u32,
    /// Accumulator growth bits G
    #[arg(long, global = true, default_value_t = 8)]
    growth_bits: u32,
    /// Coefficient fraction bits Q (default 15, or 13 for the IIR)
    #[arg(long, global = true)]
    frac_bits: Option<u32>,
    /// FFT length
    #[arg(long, global = true, default_value_t = 1024)]
    fft_points: usize,
    /// FIR base address (hex)
    #[arg(long, global = true, value_parser = hex)]
    fir_base: Option<u32>,
    /// IIR base address (hex)
    #[arg(long, global = true, value_parser = hex)]
    iir_base: Option<u32>,
    /// FFT base address (hex)
    #[arg(long, global = true, value_parser = hex)]
    fft_base: Option<u32>,
    /// Coefficient or frame file replacing the bundled fixture
    #[arg(long, global = true)]
    fixture: Option<PathBuf>,
    /// Write the comparison as CSV
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Call the core models directly instead of going through the bus
    #[arg(long, global = true)]
    direct: bool,
    /// Ignore accesses that violate a register's direction instead of failing
    #[arg(long, global = true)]
    permissive_bus: bool,
    /// Override the pass threshold of the test commands
    #[arg(long, global = true)]
    max_mse: Option<f64>,
}

fn hex(s: &str) -> Result<u32, String> {
    let t = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u32::from_str_radix(&t.replace('_', ""), 16).map_err(|e| format!("{s:?}: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = cli.opts;
    let d = AddressMap::default();
    let cfg = RunConfig {
        n_taps: o.n_taps,
        n_sect: o.n_sect,
        word_bits: o.word_bits,
        growth_bits: o.growth_bits,
        frac_bits: o.frac_bits,
        fft_points: o.fft_points,
        map: AddressMap {
            fir_base: o.fir_base.unwrap_or(d.fir_base),
            iir_base: o.iir_base.unwrap_or(d.iir_base),
            fft_base: o.fft_base.unwrap_or(d.fft_base),
        },
        fixture: o.fixture,
        out: o.out,
        direct: o.direct,
        permissive_bus: o.permissive_bus,
        max_mse: o.max_mse,
    };
    let command = match cli.command {
        Cmd::FirTest => Command::FirTest,
        Cmd::IirTest => Command::IirTest,
        Cmd::FftTest => Command::FftTest,
        Cmd::Scenario { script } => Command::Scenario(script),
        Cmd::DumpRegs => Command::DumpRegs,
    };
    match harness::run(&command, &cfg) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
