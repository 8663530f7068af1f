use evolute_core::catalog::polar_fourier;
use evolute_core::theorems::{run, TheoremName, VerifyOptions};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn theorems_hold_on_random_convex_curves(
        c in prop::sample::select(vec![-1.0, 0.0, 1.0]),
        r0 in 0.4f64..0.9,
        a2 in -0.03f64..0.03,
        a3 in -0.01f64..0.01,
    ) {
        let curve = polar_fourier(c, r0, vec![0.0, a2, a3]).unwrap().realize_curve(512).unwrap();
        prop_assume!(curve.strong_convexity_margin() > 0.0);
        let reports = run(&curve, &TheoremName::ALL, &VerifyOptions::default()).unwrap();
        for r in &reports {
            prop_assert!(r.ok(), "{}: residual {:e}", r.name, r.residual);
        }
    }

    #[test]
    fn length_and_area_do_not_depend_on_resolution(
        c in prop::sample::select(vec![-1.0, 0.0, 1.0]),
        a2 in -0.05f64..0.05,
    ) {
        let file = polar_fourier(c, 0.7, vec![0.0, a2]).unwrap();
        let coarse = file.realize_curve(256).unwrap();
        let fine = file.realize_curve(512).unwrap();
        prop_assert!((coarse.length() - fine.length()).abs() < 1e-9);
        for (a, b) in coarse.jets().iter().zip(fine.jets().iter().step_by(2)) {
            prop_assert!((a.k_g - b.k_g).abs() < 1e-9);
        }
    }

    #[test]
    fn reversal_flips_orientation(
        c in prop::sample::select(vec![-1.0, 0.0, 1.0]),
        a2 in -0.05f64..0.05,
    ) {
        let curve = polar_fourier(c, 0.7, vec![0.0, a2]).unwrap().realize_curve(256).unwrap();
        prop_assert_eq!(curve.orientation(), 1);
        prop_assert_eq!(curve.reversed().unwrap().orientation(), -1);
    }
}
