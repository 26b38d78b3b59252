use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spinorbit_core::apparatus::m_operator;
use spinorbit_core::chsh::{s_parameter, settings_scan};
use spinorbit_core::fock::{moments_one_body, BasisConfig, ModeIndex, PureState};
use spinorbit_core::{ChshSettings, Family, ScanAxis, ScanGrid, Settings, StateSpec, C64};

fn one_body(c: &mut Criterion) {
    let mut group = c.benchmark_group("one_body_moments");
    for zeta in [0.5, 1.0, 2.0] {
        let e = StateSpec::new(Family::TwoModeSqueezedVacuum {
            zeta: C64::new(zeta, 0.0),
        })
        .prepare()
        .unwrap();
        let op = m_operator(Settings::new(0.3, 1.1));
        group.bench_with_input(BenchmarkId::from_parameter(zeta), &e, |b, e| {
            b.iter(|| moments_one_body(black_box(e), &op).unwrap())
        });
    }
    group.finish();
}

fn displacement(c: &mut Criterion) {
    let basis = BasisConfig::new([40, 2, 2, 40]).unwrap();
    let vacuum = PureState::vacuum(&basis);
    c.bench_function("displace_u2", |b| {
        b.iter(|| {
            vacuum
                .displace(ModeIndex::Hh, black_box(C64::new(2.0, 0.0)))
                .unwrap()
        })
    });
}

fn squeezing(c: &mut Criterion) {
    let spec = StateSpec::new(Family::TwoModeSqueezedVacuum {
        zeta: C64::new(1.0, 0.0),
    });
    let basis = spec.default_basis().unwrap();
    let vacuum = PureState::vacuum(&basis);
    c.bench_function("two_mode_squeeze_zeta1", |b| {
        b.iter(|| {
            vacuum
                .two_mode_squeeze(ModeIndex::Hh, ModeIndex::Vv, black_box(C64::new(1.0, 0.0)))
                .unwrap()
        })
    });
}

fn chsh(c: &mut Criterion) {
    let mut group = c.benchmark_group("s_parameter");
    let families = [
        ("entangled_fock_5", Family::EntangledFock { n: 5 }),
        (
            "mixed_coherent_u2",
            Family::MixedCoherent {
                u: C64::new(2.0, 0.0),
                r: 0.5,
                phi: 0.3,
                k: 8,
            },
        ),
        (
            "squeezed_vacuum_2",
            Family::TwoModeSqueezedVacuum {
                zeta: C64::new(2.0, 0.0),
            },
        ),
    ];
    for (name, family) in families {
        let e = StateSpec::new(family).prepare().unwrap();
        group.bench_function(name, |b| {
            b.iter(|| s_parameter(black_box(&e), ChshSettings::default()).unwrap())
        });
    }
    group.finish();
}

fn scan(c: &mut Criterion) {
    let e = StateSpec::new(Family::MixedFock { n: 3 })
        .prepare()
        .unwrap();
    let grid = ScanGrid {
        alpha: ScanAxis::new(0.0, std::f64::consts::PI, 17),
        beta: ScanAxis::new(0.0, std::f64::consts::PI, 17),
    };
    c.bench_function("settings_scan_17x17", |b| {
        b.iter(|| settings_scan(black_box(&e), &grid).unwrap())
    });
}

criterion_group!(benches, one_body, displacement, squeezing, chsh, scan);
criterion_main!(benches);
