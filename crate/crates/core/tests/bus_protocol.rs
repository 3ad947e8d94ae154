mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use wbdsp::bus::scenario;
use wbdsp::bus::{
    AddressMap, BusError, FftDriver, FirDriver, IirDriver, RegAccess, Soc, DEFAULT_TIMEOUT_CYCLES,
};
use wbdsp::fft::{ComplexFx, FftConfig, FftPipeline};
use wbdsp::fir::{FirConfig, FirCore};
use wbdsp::fixed::FxSample;
use wbdsp::iir::{IirConfig, IirCore, SosSection};

fn configs(n_taps: usize, n_sect: usize, n_fft: usize) -> (FirConfig, IirConfig, FftConfig) {
    (
        FirConfig::new(n_taps, 16, 8, 15).unwrap(),
        IirConfig::new(n_sect, 16, 8, 13).unwrap(),
        FftConfig::new(n_fft, 16, 15).unwrap(),
    )
}

fn soc_with(map: AddressMap, n_taps: usize, n_sect: usize, n_fft: usize) -> Soc {
    let (a, b, c) = configs(n_taps, n_sect, n_fft);
    Soc::new(map, a, b, c).unwrap()
}

fn soc() -> Soc {
    soc_with(AddressMap::default(), 50, 6, 64)
}

#[test]
fn fir_data_read_after_write() {
    let mut s = soc();
    let base = s.map().fir_base;
    // Q = 0 and h[0] = 1 turn the filter into a wire
    s.bus.write(base + 12, 0).unwrap();
    s.bus.write(base + 16, 1).unwrap();
    let mut r = rng(41);
    for _ in 0..500 {
        let v: i64 = r.gen_range(-(1 << 23)..(1 << 23));
        s.bus.write(base + 4, v as u32 & 0xff_ffff).unwrap();
        s.bus.write(base, 1).unwrap();
        assert_eq!(s.bus.read(base + 4).unwrap().data_r, v as u32);
        s.bus.write(base, 1).unwrap(); // flush the sample out of the delay line
    }
}

#[test]
fn iir_data_read_after_write_and_status_clear() {
    let mut s = soc();
    let base = s.map().iir_base;
    s.bus.write(base + 12, 0).unwrap();
    s.bus.write(base + 16, 0x2000).unwrap();
    s.bus.write(base + 20 + 20, 0x2000).unwrap(); // b0 of section 0
    let mut r = rng(42);
    for _ in 0..500 {
        let v: i64 = r.gen_range(-(1 << 23)..(1 << 23));
        s.bus.write(base + 4, v as u32).unwrap();
        s.bus.write(base, 1).unwrap();
        assert_eq!(s.bus.read(base + 8).unwrap().data_r, 1);
        assert_eq!(s.bus.read(base + 4).unwrap().data_r, v as u32);
        s.bus.write(base + 8, r.gen()).unwrap();
        assert_eq!(s.bus.read(base + 8).unwrap().data_r, 0);
    }
}

#[test]
fn direction_violations_are_errors() {
    let mut s = soc();
    for (name, addr, info) in s.bus.register_map() {
        for w in 0..info.words {
            let a = addr + 4 * w;
            match info.access {
                RegAccess::WriteOnly => {
                    assert!(matches!(s.bus.read(a), Err(BusError::WriteOnly { .. })), "{name}+{w}")
                }
                RegAccess::ReadOnly => {
                    assert!(matches!(s.bus.write(a, 0), Err(BusError::ReadOnly { .. })), "{name}+{w}")
                }
                RegAccess::ReadWrite => {}
            }
        }
    }
}

#[test]
fn unmapped_and_unaligned_accesses() {
    let mut s = soc();
    for (kind, base, len) in s.bus.regions() {
        for addr in [base - 4, base + len, base + len + 4] {
            let want = Err(BusError::Timeout { addr, cycles: DEFAULT_TIMEOUT_CYCLES });
            assert_eq!(s.bus.read(addr), want, "{kind}");
            assert_eq!(s.bus.write(addr, 0), want, "{kind}");
        }
        for off in [1, 2, 3] {
            assert_eq!(s.bus.read(base + off), Err(BusError::Unaligned { addr: base + off }));
        }
    }
    let before = s.bus.elapsed_cycles();
    s.bus.set_timeout_cycles(40);
    assert_eq!(s.bus.read(0), Err(BusError::Timeout { addr: 0, cycles: 40 }));
    assert_eq!(s.bus.elapsed_cycles() - before, 40);
}

#[test]
fn every_word_of_every_region_decodes() {
    let mut r = rng(43);
    for map in [AddressMap::default(), AddressMap { fir_base: 0x400, iir_base: 0x100, fft_base: 0x1000 }] {
        let mut s = soc_with(map, 50, 6, 64);
        let access: Vec<(u32, RegAccess)> = s
            .bus
            .register_map()
            .into_iter()
            .flat_map(|(_, addr, info)| (0..info.words).map(move |w| (addr + 4 * w, info.access)))
            .collect();
        for (_, base, len) in s.bus.regions() {
            for off in (0..len).step_by(4) {
                let addr = base + off;
                let matching: Vec<_> = access.iter().filter(|(a, _)| *a == addr).collect();
                assert_eq!(matching.len(), 1, "{addr:#x} decodes to {} registers", matching.len());
                let kind = matching[0].1;
                let rd = s.bus.read(addr);
                let wr = s.bus.write(addr, r.gen());
                for res in [rd.clone().map(|_| ()), wr.clone().map(|_| ())] {
                    assert!(!matches!(res, Err(BusError::Timeout { .. } | BusError::Unaligned { .. })), "{addr:#x}");
                }
                match kind {
                    RegAccess::ReadWrite | RegAccess::ReadOnly => assert!(rd.is_ok(), "{addr:#x}: {rd:?}"),
                    RegAccess::WriteOnly => assert!(matches!(rd, Err(BusError::WriteOnly { .. }))),
                }
                match kind {
                    RegAccess::ReadOnly => assert!(matches!(wr, Err(BusError::ReadOnly { .. }))),
                    // only value-dependent protocol refusals are allowed on writable words
                    _ => assert!(matches!(wr, Ok(_) | Err(BusError::Protocol { .. })), "{addr:#x}: {wr:?}"),
                }
            }
        }
    }
}

#[test]
fn mapped_accesses_ack_within_bound() {
    let mut s = soc();
    for (_, addr, info) in s.bus.register_map() {
        let t = match info.access {
            RegAccess::WriteOnly => s.bus.write(addr, 0).unwrap(),
            _ => s.bus.read(addr).unwrap(),
        };
        assert!((1..=2).contains(&t.cycles_to_ack), "{t:?}");
        assert_eq!(t.addr, addr);
    }
}

#[test]
fn permissive_bus_ignores_direction_violations() {
    let mut s = soc();
    s.bus.set_permissive(true);
    let fir = s.map().fir_base;
    let fft = s.map().fft_base;
    assert_eq!(s.bus.read(fir + 12).unwrap().data_r, 0);
    s.bus.write(fir + 8, 1).unwrap();
    assert_eq!(s.bus.read(fir + 8).unwrap().data_r, 0);
    s.bus.write(fft + 12, 0x1234).unwrap();
    assert_eq!(s.bus.read(fft + 12).unwrap().data_r, 0);
    assert!(matches!(s.bus.read(0), Err(BusError::Timeout { .. })));
}

#[test]
fn fft_control_mid_frame_restarts() {
    let mut s = soc();
    let base = s.map().fft_base;
    let cfg = FftConfig::new(64, 16, 15).unwrap();
    let mut r = rng(44);
    let frame = on_grid_frame(&mut r, &cfg);
    let mut drv = FftDriver::new(&mut s.bus, base, cfg.clone());
    drv.start().unwrap();
    for &x in &frame[..40] {
        drv.push(x).unwrap();
    }
    let got = drv.transform(&frame).unwrap();
    assert_eq!(got, FftPipeline::new(cfg).unwrap().frame(&frame).unwrap());
    assert_eq!(s.bus.write(base + 4, 0), Err(BusError::Protocol { addr: base + 4, reg: "DATA", msg: "frame of 64 samples already complete".into() }));
    s.bus.write(base, 0).unwrap();
    assert_eq!(s.bus.read(base + 8).unwrap().data_r, 0);
}

fn on_grid_frame(r: &mut impl Rng, cfg: &FftConfig) -> Vec<ComplexFx> {
    (0..cfg.n_points())
        .map(|_| ComplexFx::from_raw(r.gen_range(-4096..4096), r.gen_range(-4096..4096), cfg.word_fmt()).unwrap())
        .collect()
}

#[test]
fn golden_scripts_pass() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    for (file, n_fft) in [("fir_bringup.txt", 1024), ("iir_bringup.txt", 1024), ("fft_bringup_16.txt", 16)] {
        let script = scenario::load(&dir.join(file)).unwrap();
        let mut s = soc_with(AddressMap::default(), 50, 6, n_fft);
        let report = scenario::run(&script, &mut s.bus);
        assert!(report.passed(), "{file}: {}", report.mismatch.unwrap());
        assert_eq!(report.executed, script.directives.len());
    }
}

#[test]
fn scripts_report_first_mismatch() {
    let mut s = soc();
    let script = scenario::parse("t", "W FIR_Q f\nR FIR_Q ERR\nR FIR_Q f\nR FIR_STATUS 0\n").unwrap();
    let report = scenario::run(&script, &mut s.bus);
    let m = report.mismatch.unwrap();
    assert_eq!((m.line, report.executed, report.total), (3, 3, 4));
    assert_eq!(m.expected, "0x0000000f");
    assert!(m.actual.starts_with("error"));

    let report = scenario::run(&scenario::parse("t", "POLL FIR_STATUS 1 1 3\n").unwrap(), &mut s.bus);
    assert_eq!(report.mismatch.unwrap().actual, "poll exhausted");
    let report = scenario::run(&scenario::parse("t", "R NOPE_BASE *\n").unwrap(), &mut s.bus);
    assert_eq!(report.mismatch.unwrap().actual, "unknown symbol NOPE_BASE");
    let report = scenario::run(&scenario::parse("t", "").unwrap(), &mut s.bus);
    assert!(report.passed() && report.total == 0);
}

fn fir_stream_equivalence(seed: u64, n: usize, len: usize) -> Result<(), TestCaseError> {
    let mut r = rng(seed);
    let mut s = soc_with(AddressMap::default(), n, 1, 16);
    let (cfg, _, _) = configs(n, 1, 16);
    let h: Vec<FxSample> = (0..n).map(|_| FxSample::from_raw(random_raw(&mut r, cfg.coeff_fmt()), cfg.coeff_fmt()).unwrap()).collect();
    let x: Vec<FxSample> = (0..len).map(|_| FxSample::from_raw(random_raw(&mut r, cfg.data_fmt()), cfg.data_fmt()).unwrap()).collect();
    let mut core = FirCore::from_raw(cfg, &raws(&h)).unwrap();
    let base = s.map().fir_base;
    let mut drv = FirDriver::new(&mut s.bus, base, cfg);
    drv.set_frac_bits(15).unwrap();
    drv.load(&h).unwrap();
    for &v in &x {
        prop_assert_eq!(drv.filter(v).unwrap(), core.step(v).unwrap());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fir_bus_matches_direct(seed in any::<u64>(), n in 1usize..60) {
        fir_stream_equivalence(seed, n, 200)?;
    }

    #[test]
    fn iir_bus_matches_direct(seed in any::<u64>(), n_sect in 1usize..7, pick in 0usize..7) {
        let mut r = rng(seed);
        let active = 1 + pick % n_sect;
        let mut s = soc_with(AddressMap::default(), 4, n_sect, 16);
        let (_, cfg, _) = configs(4, n_sect, 16);
        let f = cfg.coeff_fmt();
        let secs: Vec<SosSection> = (0..n_sect)
            .map(|_| SosSection::from_raw([0; 5].map(|_| random_raw(&mut r, f)), f).unwrap())
            .collect();
        let gain = FxSample::from_raw(random_raw(&mut r, f), f).unwrap();
        let mut core = IirCore::from_sections(cfg, secs.clone(), gain, active).unwrap();
        let base = s.map().iir_base;
        let mut drv = IirDriver::new(&mut s.bus, base, cfg);
        drv.configure(&secs, gain, active).unwrap();
        let d = cfg.data_fmt();
        let mut direct = Vec::new();
        let mut via_bus = Vec::new();
        for _ in 0..150 {
            let x = FxSample::from_raw(random_raw(&mut r, d), d).unwrap();
            via_bus.push(drv.filter(x).unwrap());
            let (y, valid) = core.step(x).unwrap();
            if valid {
                direct.push(y);
            }
        }
        while direct.len() < via_bus.len() {
            let (y, valid) = core.clock(None).unwrap();
            if valid {
                direct.push(y);
            }
        }
        prop_assert_eq!(via_bus, direct);
    }

    #[test]
    fn fft_bus_matches_direct(seed in any::<u64>(), log4 in 1u32..5) {
        let mut r = rng(seed);
        let n = 1usize << (2 * log4);
        let mut s = soc_with(AddressMap::default(), 4, 1, n);
        let (_, _, cfg) = configs(4, 1, n);
        let mut p = FftPipeline::new(cfg.clone()).unwrap();
        let base = s.map().fft_base;
        let mut drv = FftDriver::new(&mut s.bus, base, cfg.clone());
        for _ in 0..2 {
            let frame = on_grid_frame(&mut r, &cfg);
            prop_assert_eq!(drv.transform(&frame).unwrap(), p.frame(&frame).unwrap());
        }
    }
}

#[test]
fn fir_bus_matches_direct_at_fifty_taps() {
    fir_stream_equivalence(45, 50, 2000).unwrap();
}
