use chromatest::cam16::*;
use chromatest::colorimetry::Tristimulus;
use chromatest::rgb::DisplayGamut;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Reference values computed with colour-science 0.4.6 (XYZ_to_CAM16, JMh_CAM16_to_CAM16UCS).
struct Case {
    xyz: [f64; 3],
    white: [f64; 3],
    la: f64,
    surround: Surround,
    jchmsq: [f64; 6],
    ucs: [f64; 3],
}

const CASES: [Case; 4] = [
    Case {
        xyz: [19.01, 20.0, 21.78],
        white: [95.05, 100.0, 108.88],
        la: 318.31,
        surround: Surround::Average,
        jchmsq: [
            41.7312079051,
            0.1033557387,
            217.0679597674,
            0.1074367723,
            2.3450150730,
            195.3717089928,
        ],
        ucs: [54.9044502427, -0.0856212456, -0.0646796048],
    },
    Case {
        xyz: [57.06, 43.06, 31.96],
        white: [95.05, 100.0, 108.88],
        la: 31.83,
        surround: Surround::Dim,
        jchmsq: [
            69.5733982401,
            46.0184342983,
            17.3808613540,
            39.4835082850,
            46.4069380844,
            183.3369090833,
        ],
        ucs: [79.5384535019, 26.8710281950, 8.4110135417],
    },
    Case {
        xyz: [3.53, 6.56, 2.14],
        white: [109.85, 100.0, 35.58],
        la: 318.31,
        surround: Surround::Dark,
        jchmsq: [
            30.8873258279,
            48.6880745859,
            174.5429179813,
            50.6105384190,
            47.8294276689,
            221.2333468056,
        ],
        ucs: [43.1737928570, -33.5005258635, 3.2004090045],
    },
    Case {
        xyz: [19.01, 20.0, 21.78],
        white: [95.05, 100.0, 108.88],
        la: 50.0,
        surround: Surround::Average,
        jchmsq: [
            41.4990779325,
            1.2803168094,
            209.9872692531,
            1.1406326099,
            9.2646814600,
            132.8877045847,
        ],
        ucs: [54.6677918148, -0.9753155449, -0.5628097845],
    },
];

fn tri(v: [f64; 3]) -> Tristimulus<f64> {
    Tristimulus::new(v[0], v[1], v[2]).unwrap()
}

#[test]
fn forward_matches_reference_implementation() {
    for case in &CASES {
        let vc = ViewingConditions::new(tri(case.white), case.la, 20.0, case.surround).unwrap();
        let a = xyz_to_cam16(tri(case.xyz), &vc).unwrap();
        let got = [a.j, a.c, a.h, a.m, a.s, a.q];
        for (g, e) in got.iter().zip(case.jchmsq) {
            assert!(
                (g - e).abs() < 1e-6 * e.abs().max(1.0),
                "{got:?} vs {:?}",
                case.jchmsq
            );
        }
        let u = to_ucs(&a);
        let got = [u.j_prime, u.a_prime, u.b_prime];
        for (g, e) in got.iter().zip(case.ucs) {
            assert!((g - e).abs() < 1e-6, "{got:?} vs {:?}", case.ucs);
        }
    }
}

#[test]
fn inverse_recovers_reference_stimuli() {
    for case in &CASES {
        let vc = ViewingConditions::new(tri(case.white), case.la, 20.0, case.surround).unwrap();
        let [j, c, h, m, ..] = case.jchmsq;
        for chromatic in [Chromatic::Chroma(c), Chromatic::Colorfulness(m)] {
            let xyz = cam16_to_xyz(j, chromatic, h, &vc).unwrap();
            for (g, e) in xyz.to_array().iter().zip(case.xyz) {
                assert!((g - e).abs() < 1e-6, "{xyz:?} vs {:?}", case.xyz);
            }
        }
        let u = UcsPoint {
            j_prime: case.ucs[0],
            a_prime: case.ucs[1],
            b_prime: case.ucs[2],
        };
        let xyz = ucs_to_xyz(&u, &vc).unwrap();
        for (g, e) in xyz.to_array().iter().zip(case.xyz) {
            assert!((g - e).abs() < 1e-6, "{xyz:?} vs {:?}", case.xyz);
        }
    }
}

fn d65() -> Tristimulus<f64> {
    Tristimulus::new(95.047, 100.0, 108.883).unwrap()
}

#[test]
fn round_trip_on_random_display_stimuli() {
    let gamut = DisplayGamut::<f64>::rec709();
    let mut rng = ChaCha8Rng::seed_from_u64(0x16);
    for surround in [Surround::Average, Surround::Dim, Surround::Dark] {
        let vc = ViewingConditions::new(d65(), 50.0, 20.0, surround).unwrap();
        for _ in 0..1000 {
            let rgb = [
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..1.0),
            ];
            let xyz = gamut.rgb_to_stimulus(rgb);
            let a = xyz_to_cam16(xyz, &vc).unwrap();
            let back = cam16_to_xyz(a.j, Chromatic::Chroma(a.c), a.h, &vc).unwrap();
            for (g, e) in back.to_array().iter().zip(xyz.to_array()) {
                assert!(
                    (g - e).abs() < 1e-8,
                    "{surround}: {xyz:?} -> {a:?} -> {back:?}"
                );
            }
            let u = to_ucs(&a);
            let back = ucs_to_xyz(&u, &vc).unwrap();
            for (g, e) in back.to_array().iter().zip(xyz.to_array()) {
                assert!(
                    (g - e).abs() < 1e-8,
                    "{surround}: ucs round trip {xyz:?} -> {back:?}"
                );
            }
        }
    }
}

#[test]
fn lightness_increases_with_luminance() {
    let vc = ViewingConditions::new(d65(), 50.0, 20.0, Surround::Average).unwrap();
    let mut last = -1.0;
    for i in 1..=100 {
        let j = xyz_to_cam16(d65().scale(f64::from(i) / 100.0), &vc)
            .unwrap()
            .j;
        assert!(j > last);
        last = j;
    }
}

#[test]
fn brighter_surround_gives_more_colorfulness() {
    let xyz = tri([57.06, 43.06, 31.96]);
    let m = |s| {
        let vc = ViewingConditions::new(d65(), 50.0, 20.0, s).unwrap();
        xyz_to_cam16(xyz, &vc).unwrap().m
    };
    assert!(m(Surround::Average) > m(Surround::Dim));
    assert!(m(Surround::Dim) > m(Surround::Dark));
}

#[test]
fn single_precision_forward() {
    let vc = ViewingConditions::<f32>::new(
        Tristimulus::new(95.05, 100.0, 108.88).unwrap(),
        31.83,
        20.0,
        Surround::Dim,
    )
    .unwrap();
    let a = xyz_to_cam16(Tristimulus::new(57.06f32, 43.06, 31.96).unwrap(), &vc).unwrap();
    assert!((a.j - 69.5734).abs() < 1e-3, "{a:?}");
    assert!((a.h - 17.3809).abs() < 1e-2, "{a:?}");
}

proptest! {
    #[test]
    fn hue_in_range(x in 0.1f64..100.0, y in 0.1f64..100.0, z in 0.1f64..100.0) {
        let vc = ViewingConditions::new(d65(), 50.0, 20.0, Surround::Average).unwrap();
        let a = xyz_to_cam16(tri([x, y, z]), &vc).unwrap();
        prop_assert!((0.0..360.0).contains(&a.h));
        prop_assert!(a.c >= 0.0 && a.m >= 0.0 && a.s >= 0.0);
    }

    #[test]
    fn ucs_delta_e_is_a_metric(p in prop::array::uniform3(-50.0f64..50.0), q in prop::array::uniform3(-50.0f64..50.0)) {
        let a = UcsPoint { j_prime: p[0], a_prime: p[1], b_prime: p[2] };
        let b = UcsPoint { j_prime: q[0], a_prime: q[1], b_prime: q[2] };
        prop_assert_eq!(delta_e_ucs(&a, &a), 0.0);
        prop_assert!((delta_e_ucs(&a, &b) - delta_e_ucs(&b, &a)).abs() < 1e-12);
    }

    #[test]
    fn inverse_accepts_unwrapped_hue(h in 0.0f64..360.0) {
        let vc = ViewingConditions::new(d65(), 50.0, 20.0, Surround::Average).unwrap();
        let a = cam16_to_xyz(50.0, Chromatic::Chroma(10.0), h, &vc).unwrap();
        let b = cam16_to_xyz(50.0, Chromatic::Chroma(10.0), h + 360.0, &vc).unwrap();
        for (u, v) in a.to_array().iter().zip(b.to_array()) {
            prop_assert!((u - v).abs() < 1e-9);
        }
    }
}
