use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use spectral_flow::assignment::min_cost_assignment;
use spectral_flow::cycle::*;
use spectral_flow::spectrum::{find_spectrum, Geometry, SpectrumOptions};

fn kind() -> impl Strategy<Value = CycleKind> {
    prop_oneof![Just(CycleKind::Long), Just(CycleKind::Short)]
}

proptest! {
    #[test]
    fn ramps_are_valid_and_periodic(kind in kind(), theta in -20.0..20.0f64) {
        let r = eval_ramps::<f64>(kind, theta);
        prop_assert!(r.validate().is_ok(), "{r:?}");
        prop_assert!(r.as_array().iter().all(|x| (0.0..=1.0).contains(x)));
        let shifted = eval_ramps::<f64>(kind, theta + TAU);
        for (a, b) in r.as_array().iter().zip(shifted.as_array()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn conditions_are_self_adjoint(kind in kind(), theta in 0.0..TAU, t in 0.01..10.0f64, s in 0.01..10.0f64) {
        let cond = condition_at(&CycleParams::new(kind, t, s).unwrap(), theta).unwrap();
        let rep = check_self_adjoint(&cond, 1e-10);
        prop_assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn topology_is_constant_inside_each_region(kind in kind(), theta in 0.0..TAU, frac in 0.05..0.95f64) {
        let width = match kind { CycleKind::Long => PI / 3.0, CycleKind::Short => PI / 2.0 };
        let lo = (theta / width).floor() * width;
        let p = CycleParams::new(kind, 0.5, 0.5).unwrap();
        let name = |th: f64| classify_topology(&condition_at(&p, th).unwrap(), DEFAULT_COUPLING_TOL).name;
        let (a, b) = (lo + 0.5 * width, lo + frac * width);
        prop_assert_eq!(region_of(kind, a), region_of(kind, b));
        prop_assert_eq!(name(a), name(b));
    }

    #[test]
    fn assignment_is_optimal(cost in proptest::collection::vec(proptest::collection::vec(0.0..10.0f64, 5), 4)) {
        let got = min_cost_assignment(&cost);
        let total = |a: &[usize]| a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<f64>();
        // Brute force over injections of 4 rows into 5 columns.
        let mut best = f64::INFINITY;
        for a in 0..5 { for b in 0..5 { for c in 0..5 { for d in 0..5 {
            let p = [a, b, c, d];
            if (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j])) {
                best = best.min(total(&p));
            }
        }}}}
        prop_assert!((total(&got) - best).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectra_are_sorted_and_positive(theta in 0.0..TAU, ratio in 0.3..4.0f64) {
        let geom = Geometry::from_ratio(ratio, 1.0).unwrap();
        let cond = condition_at(&CycleParams::new(CycleKind::Long, 0.5, 0.5).unwrap(), theta).unwrap();
        let k = find_spectrum(&cond, &geom, 25.0, &SpectrumOptions::default()).unwrap().expanded();
        prop_assert!(k.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(k.iter().all(|x| *x >= 0.0 && *x <= 25.0));
        // Weyl: roughly (L1 + L2) k_max / π levels.
        let weyl = 25.0 / PI;
        prop_assert!((k.len() as f64 - weyl).abs() <= 4.0, "{} levels", k.len());
    }
}
