mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use wbdsp::fir::{impulse_amplitude, FirConfig, FirCore};
use wbdsp::fixed::{FxSample, Rounding};
use wbdsp::fixture;
use wbdsp::iir::{IirConfig, IirCore, SosSection};

fn section(c: &SosRaw, cfg: &IirConfig) -> SosSection {
    SosSection::from_raw([c.b0, c.b1, c.b2, c.a1, c.a2], cfg.coeff_fmt()).unwrap()
}

fn core_of(cfg: IirConfig, cs: &[SosRaw], gain: i64) -> IirCore {
    let secs = cs.iter().map(|c| section(c, &cfg)).collect();
    let g = FxSample::from_raw(gain, cfg.coeff_fmt()).unwrap();
    IirCore::from_sections(cfg, secs, g, cs.len()).unwrap()
}

/// Valid outputs of a streaming run, one per input.
fn stream(core: &mut IirCore, x: &[i64]) -> Vec<i64> {
    let fmt = core.config().data_fmt();
    let mut out = Vec::new();
    for &v in x {
        let (y, valid) = core.step(FxSample::from_raw(v, fmt).unwrap()).unwrap();
        if valid {
            out.push(y.raw());
        }
    }
    while out.len() < x.len() {
        let (y, valid) = core.clock(None).unwrap();
        if valid {
            out.push(y.raw());
        }
    }
    out
}

fn random_sos(r: &mut impl Rng, cfg: &IirConfig) -> SosRaw {
    let f = cfg.coeff_fmt();
    SosRaw {
        b0: random_raw(r, f),
        b1: random_raw(r, f),
        b2: random_raw(r, f),
        a1: random_raw(r, f),
        a2: random_raw(r, f),
        gain: random_raw(r, f),
    }
}

#[test]
fn one_section_matches_integer_recurrence() {
    let mut r = rng(21);
    let cfg = IirConfig::new(1, 16, 8, 13).unwrap();
    for _ in 0..5 {
        let c = random_sos(&mut r, &cfg);
        let x: Vec<i64> = (0..10_000).map(|_| random_raw(&mut r, cfg.data_fmt())).collect();
        let mut core = core_of(cfg, &[c], c.gain);
        assert_eq!(stream(&mut core, &x), sos_exact(&c, &x, 13, 24));
    }
}

#[test]
fn cascade_matches_chained_recurrences() {
    let mut r = rng(22);
    let cfg = IirConfig::new(4, 16, 8, 13).unwrap();
    let gain = random_raw(&mut r, cfg.coeff_fmt());
    let cs: Vec<SosRaw> = (0..4).map(|_| SosRaw { gain, ..random_sos(&mut r, &cfg) }).collect();
    let x: Vec<i64> = (0..3000).map(|_| random_raw(&mut r, cfg.data_fmt())).collect();
    let want = cs.iter().fold(x.clone(), |acc, c| sos_exact(c, &acc, 13, 24));
    assert_eq!(stream(&mut core_of(cfg, &cs, gain), &x), want);
}

#[test]
fn zero_feedback_section_equals_three_tap_fir() {
    let mut r = rng(23);
    for q in [13u32, 10, 15] {
        // matching data formats make the truncation points coincide
        let icfg = IirConfig::with_data_frac_bits(1, 16, 8, q, q).unwrap();
        let fcfg = FirConfig::new(3, 16, 8, q).unwrap();
        let b: Vec<i64> = (0..3).map(|_| random_raw(&mut r, fcfg.coeff_fmt())).collect();
        let gain = random_raw(&mut r, fcfg.coeff_fmt());
        let c = SosRaw { b0: b[0], b1: b[1], b2: b[2], a1: 0, a2: 0, gain };
        let x: Vec<i64> = (0..2000).map(|_| random_raw(&mut r, fcfg.data_fmt())).collect();
        let mut fir = FirCore::from_raw(fcfg, &b).unwrap();
        // the FIR sees the gain-scaled input the section computes internally
        let want: Vec<i64> = x
            .iter()
            .map(|&v| {
                let u = wrap(prod(gain, v, q), 24);
                fir.step(FxSample::from_raw(u, fcfg.data_fmt()).unwrap()).unwrap().raw()
            })
            .collect();
        assert_eq!(stream(&mut core_of(icfg, &[c], c.gain), &x), want, "Q={q}");
    }
}

#[test]
fn fixture_impulse_response_dies_out() {
    let fx = fixture::load_sos(&fixture::bundled("iir_bandpass_6sos.txt")).unwrap();
    let cfg = IirConfig::new(fx.sections.len(), 16, 8, 13).unwrap();
    let mut core = IirCore::new(cfg, &fx.sections, fx.gain, fx.sections.len()).unwrap();
    let h = core.impulse_response(100_000).unwrap();
    let lsb = cfg.data_fmt().lsb();
    let last_big = h.iter().rposition(|v| v.abs() >= lsb).unwrap_or(0);
    assert!(last_big < 20_000, "response still above one LSB at sample {last_big}");
    assert!(h[last_big + 1..].iter().all(|&v| v == 0.0));
}

#[test]
fn fixture_stays_in_range() {
    let fx = fixture::load_sos(&fixture::bundled("iir_bandpass_6sos.txt")).unwrap();
    let cfg = IirConfig::new(6, 16, 8, 13).unwrap();
    let mut core = IirCore::new(cfg, &fx.sections, fx.gain, 6).unwrap();
    let amp = impulse_amplitude(cfg.data_fmt()).to_real();
    let peak = core.impulse_response(4000).unwrap().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(peak < 0.1 * amp, "{peak}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn single_section_equivalence(seed in any::<u64>(), q in 8u32..16) {
        let mut r = rng(seed);
        let cfg = IirConfig::new(1, 16, 8, q).unwrap();
        let c = random_sos(&mut r, &cfg);
        let x: Vec<i64> = (0..300).map(|_| random_raw(&mut r, cfg.data_fmt())).collect();
        let d = cfg.data_fmt().frac_bits();
        // product rescale is the coefficient fraction; the data fraction cancels
        prop_assert_eq!(d, q + 8);
        prop_assert_eq!(stream(&mut core_of(cfg, &[c], c.gain), &x), sos_exact(&c, &x, q, 24));
    }

    #[test]
    fn gain_doubled_input_halved(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cfg = IirConfig::new(1, 16, 8, 13).unwrap();
        let c = SosRaw { gain: r.gen_range(-4096..4096), ..random_sos(&mut r, &cfg) };
        // even inputs halve exactly
        let x: Vec<i64> = (0..200).map(|_| r.gen_range(-(1i64 << 20)..(1 << 20)) * 2).collect();
        let half: Vec<i64> = x.iter().map(|v| v / 2).collect();
        let a = stream(&mut core_of(cfg, &[c], c.gain), &x);
        let b = stream(&mut core_of(cfg, &[SosRaw { gain: 2 * c.gain, ..c }], 2 * c.gain), &half);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn first_valid_after_active_steps(n_sect in 1usize..8, pick in 0usize..8) {
        let active = 1 + pick % n_sect;
        let cfg = IirConfig::new(n_sect, 16, 8, 13).unwrap();
        let mut core = IirCore::blank(cfg);
        core.set_active_sections(active).unwrap();
        let one = FxSample::quantize(0.25, cfg.data_fmt(), Rounding::NearestEven).unwrap();
        let first = (1..=n_sect + 1).find(|_| core.step(one).unwrap().1).unwrap();
        prop_assert_eq!(first, active);
    }
}
