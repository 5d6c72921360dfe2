use chromatest::colorimetry::{delta_e_xyz, Chromaticity};
use chromatest::observer::{Colorimeter, Illuminant};
use chromatest::optimal::*;
use chromatest::{Observer, WORKING_GRID};
use proptest::prelude::*;

fn cm() -> Colorimeter<f64> {
    Colorimeter::standard()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chromaticity_does_not_depend_on_k(l1 in 370.0f64..600.0, width in 20.0f64..110.0, k in 0.001f64..5.0, stop in any::<bool>()) {
        let genus = if stop { Genus::BandStop } else { Genus::BandPass };
        let c = cm();
        let p = OptimalSpectrumParams::new(genus, l1, (l1 + width).min(720.0), 1.0).unwrap();
        let a = c.chromaticity(&synthesize(&p, WORKING_GRID).unwrap()).unwrap();
        let b = c.chromaticity(&synthesize(&p.with_k(k), WORKING_GRID).unwrap()).unwrap();
        prop_assert!(delta_e_xyz(&a, &b) < 1e-12);
    }

    #[test]
    fn pass_and_stop_add_to_flat(l1 in 360.0f64..720.0, width in 0.0f64..360.0) {
        let c = cm();
        let l2 = (l1 + width).min(720.0);
        let bp = synthesize(&OptimalSpectrumParams::new(Genus::BandPass, l1, l2, 1.0).unwrap(), WORKING_GRID).unwrap();
        let bs = synthesize(&OptimalSpectrumParams::new(Genus::BandStop, l1, l2, 1.0).unwrap(), WORKING_GRID).unwrap();
        let sum = c.spd_to_xyz(&bp).unwrap() + c.spd_to_xyz(&bs).unwrap();
        let white = c.white();
        for (u, v) in sum.to_array().iter().zip(white.to_array()) {
            prop_assert!((u - v).abs() < 1e-6);
        }
    }

    #[test]
    fn solve_recovers_band_pass_cuts(l1 in 420.0f64..560.0, width in 40.0f64..120.0) {
        let c = cm();
        let l2 = (l1 + width).min(690.0);
        let p = OptimalSpectrumParams::new(Genus::BandPass, l1, l2, 1.0).unwrap();
        let target = c.chromaticity(&synthesize(&p, WORKING_GRID).unwrap()).unwrap();
        let r = solve_optimal(&target, GenusChoice::Fixed(Genus::BandPass), &SolveOptions::default(), &c).unwrap();
        prop_assert!(r.converged, "{:?}", r);
        prop_assert!((r.params.lambda1_nm - l1).abs() < 0.01, "{:?} vs {} {}", r, l1, l2);
        prop_assert!((r.params.lambda2_nm - l2).abs() < 0.01, "{:?} vs {} {}", r, l1, l2);
    }

    #[test]
    fn solve_recovers_band_stop_cuts(l1 in 420.0f64..560.0, width in 40.0f64..140.0) {
        let c = cm();
        let l2 = (l1 + width).min(680.0);
        let p = OptimalSpectrumParams::new(Genus::BandStop, l1, l2, 1.0).unwrap();
        let target = c.chromaticity(&synthesize(&p, WORKING_GRID).unwrap()).unwrap();
        let r = solve_optimal(&target, GenusChoice::Fixed(Genus::BandStop), &SolveOptions::default(), &c).unwrap();
        prop_assert!(r.converged, "{:?}", r);
        prop_assert!((r.params.lambda1_nm - l1).abs() < 0.01, "{:?} vs {} {}", r, l1, l2);
        prop_assert!((r.params.lambda2_nm - l2).abs() < 0.01, "{:?} vs {} {}", r, l1, l2);
    }
}

#[test]
fn solving_a_solved_spectrum_is_idempotent() {
    let c = cm();
    for (x, y, genus) in [
        (0.30, 0.60, Genus::BandPass),
        (0.64, 0.33, Genus::BandStop),
        (0.15, 0.06, Genus::BandStop),
    ] {
        let target = Chromaticity::new(x, y).unwrap();
        let first = solve_optimal(
            &target,
            GenusChoice::Fixed(genus),
            &SolveOptions::default(),
            &c,
        )
        .unwrap();
        let achieved = c
            .chromaticity(&synthesize(&first.params, WORKING_GRID).unwrap())
            .unwrap();
        let second = solve_optimal(
            &achieved,
            GenusChoice::Fixed(genus),
            &SolveOptions::default(),
            &c,
        )
        .unwrap();
        assert!((first.params.lambda1_nm - second.params.lambda1_nm).abs() < 0.01);
        assert!((first.params.lambda2_nm - second.params.lambda2_nm).abs() < 0.01);
    }
}

#[test]
fn custom_start_reaches_narrow_red_stop_band() {
    let c = cm();
    let p = OptimalSpectrumParams::new(Genus::BandStop, 599.4, 629.4, 1.0).unwrap();
    let target = c
        .chromaticity(&synthesize(&p, WORKING_GRID).unwrap())
        .unwrap();
    let default = solve_optimal(
        &target,
        GenusChoice::Fixed(Genus::BandStop),
        &SolveOptions::default(),
        &c,
    )
    .unwrap();
    assert!(!default.converged);
    let opts = SolveOptions {
        init: [590.0, 640.0],
        ..SolveOptions::default()
    };
    let r = solve_optimal(&target, GenusChoice::Fixed(Genus::BandStop), &opts, &c).unwrap();
    assert!(r.converged, "{r:?}");
    assert!(
        (r.params.lambda1_nm - 599.4).abs() < 0.01 && (r.params.lambda2_nm - 629.4).abs() < 0.01
    );
}

#[test]
fn non_convergence_is_reported_not_hidden() {
    // a yellow this pure needs a band-stop spectrum
    let c = cm();
    let target = Chromaticity::new(0.4193, 0.5053).unwrap();
    let r = solve_optimal(
        &target,
        GenusChoice::Fixed(Genus::BandPass),
        &SolveOptions::default(),
        &c,
    )
    .unwrap();
    assert!(!r.converged);
    assert!(r.achieved_delta_e > 1e-3);
    let r = solve_optimal(
        &target,
        GenusChoice::Fixed(Genus::BandStop),
        &SolveOptions::default(),
        &c,
    )
    .unwrap();
    assert!(r.converged, "{r:?}");
}

#[test]
fn suite_is_deterministic() {
    let c = cm();
    let a = table1_suite(&c, &SolveOptions::default()).unwrap();
    let b = table1_suite(&c, &SolveOptions::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 10);
    let names: Vec<_> = a.iter().map(|e| e.name).collect();
    assert_eq!(
        names,
        ["R", "G", "B", "Ye", "C", "M", "R0.5", "G0.5", "B0.5", "WW"]
    );
}

#[test]
fn other_illuminants_and_observers() {
    for (ill, obs) in [
        (Illuminant::A, Observer::Degree2),
        (Illuminant::E, Observer::Degree10),
    ] {
        let c = Colorimeter::new(&ill, obs).unwrap();
        let target = Chromaticity::new(0.30, 0.60).unwrap();
        let r = solve_optimal(&target, GenusChoice::Auto, &SolveOptions::default(), &c).unwrap();
        assert_eq!(r.params.genus, Genus::BandPass);
        assert!(r.converged, "{r:?}");
    }
}

#[test]
fn single_precision_solve() {
    let c = Colorimeter::<f32>::standard();
    let target = Chromaticity::new(0.30f32, 0.60).unwrap();
    let opts = SolveOptions {
        tolerance: 1e-4,
        x_tolerance: 1e-3,
        f_tolerance: 1e-7,
        ..SolveOptions::default()
    };
    let r = solve_optimal(&target, GenusChoice::Fixed(Genus::BandPass), &opts, &c).unwrap();
    assert!(r.converged, "{r:?}");
    assert!((r.params.lambda1_nm - 482.7).abs() < 0.5, "{r:?}");
}
