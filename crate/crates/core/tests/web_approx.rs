use std::f64::consts::PI;

use spectral_flow::cycle::{eval_ramps, CycleKind, CycleParams, RampVector, Region};
use spectral_flow::spectrum::{Geometry, MetalMean, SpectrumOptions};
use spectral_flow::web::*;

fn params(t: f64, s: f64) -> CycleParams<f64> {
    CycleParams::new(CycleKind::Long, t, s).unwrap()
}

/// θ in sector II where `c(θ) = c`.
fn theta_for_c(c: f64) -> f64 {
    2.0 * (((3f64.sqrt() - 1.0) * c + 1.0) / 2.0).asin()
}

/// Roots of `tan(kL/2) = −2k/v` (even modes of a Dirichlet segment with a
/// central δ of strength `v`), written as `sin + (2k/v) cos = 0`.
fn delta_even_roots(l: f64, v: f64, k_max: f64) -> Vec<f64> {
    let f = |k: f64| v * (k * l / 2.0).sin() + 2.0 * k * (k * l / 2.0).cos();
    let mut out = Vec::new();
    let h = 1e-4;
    let mut k = h;
    while k < k_max {
        if f(k).signum() != f(k + h).signum() {
            let (mut a, mut b) = (k, k + h);
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                if f(m).signum() == f(a).signum() {
                    a = m
                } else {
                    b = m
                }
            }
            out.push(0.5 * (a + b));
        }
        k += h;
    }
    out
}

#[test]
fn central_delta_matches_textbook_equation() {
    let l = 1.3;
    for v in [3.0, 0.7, -1.5, 25.0] {
        let edges = vec![
            GraphEdge { from: 0, to: 1, length: l / 2.0, group: EdgeGroup::Loop1 },
            GraphEdge { from: 1, to: 2, length: l / 2.0, group: EdgeGroup::Loop2 },
        ];
        let vertices = vec![VertexRule::Dirichlet, VertexRule::Delta(v), VertexRule::Dirichlet];
        let g = GeneralGraphSystem::new(edges, vertices).unwrap();
        let k_max = 30.0;
        let got = g.spectrum(k_max, &SpectrumOptions::default()).unwrap().expanded();
        let mut want = delta_even_roots(l, v, k_max);
        let mut n = 1;
        while 2.0 * PI * n as f64 / l < k_max {
            want.push(2.0 * PI * n as f64 / l);
            n += 1;
        }
        want.sort_by(f64::total_cmp);
        assert_eq!(got.len(), want.len(), "v = {v}: {got:?} vs {want:?}");
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "v = {v}: {a} vs {b}");
        }
    }
}

#[test]
fn delta_vertices_are_self_adjoint() {
    let l = 0.4;
    for deg in 1..6usize {
        for v in [-30.0, 0.0, 2.5, 1e4] {
            let mut edges = Vec::new();
            for i in 0..deg {
                edges.push(GraphEdge { from: 0, to: i + 1, length: l, group: EdgeGroup::Web });
            }
            let mut vertices = vec![VertexRule::Delta(v)];
            vertices.extend((0..deg).map(|_| VertexRule::Delta(0.0)));
            let g = GeneralGraphSystem::new(edges, vertices).unwrap();
            for r in g.check_self_adjoint(1e-12) {
                assert!(r.passed, "degree {deg}, v = {v}: {r:?}");
            }
        }
    }
}

#[test]
fn captioned_strengths() {
    let p = params(0.1, 1.0);
    let ramps = RampVector::new(0.0, 0.0, 0.0, 0.5, 0.0);
    let w = build_web(Region::II, &ramps, &p, 1e-3).unwrap();
    assert_eq!([w.strength(1), w.strength(2), w.strength(3), w.strength(4)], [0.0, 1.0, 1.0, 1e3]);
    assert!(w.subedges.is_empty());

    let w = build_web(Region::V, &RampVector::new(0.0, 0.0, 0.0, 0.5, 1.0), &params(0.1, 0.5), 1e-2).unwrap();
    let v = [w.strength(1), w.strength(2), w.strength(3), w.strength(4)];
    for (got, want) in v.iter().zip([-25.0, 1.0, 1.0, 50.0]) {
        assert!((got - want).abs() < 1e-12, "{v:?}");
    }

    let w = build_web(Region::I, &RampVector::new(1.0, 0.0, 0.0, 0.0, 0.0), &params(1.0, 1.0), 1e-2).unwrap();
    assert!((1..=4).all(|i| w.strength(i) == 0.0));
    assert!(w.subedges.iter().all(|e| (e.length - 1e-2).abs() < 1e-15));
}

#[test]
fn singular_strengths_and_bad_epsilon_rejected() {
    let p = params(0.1, 1.0);
    for c in [0.0, 1.0] {
        assert!(build_web(Region::II, &RampVector::new(0.0, 0.0, 0.0, c, 0.0), &p, 1e-3).is_err());
    }
    let ramps = RampVector::new(0.0, 0.0, 0.0, 0.5, 0.0);
    assert!(build_web(Region::II, &ramps, &p, 0.0).is_err());
    assert!(build_web(Region::II, &ramps, &p, -1e-3).is_err());
    assert!(build_web(Region::S2, &ramps, &p, 1e-3).is_err());
}

#[test]
fn unit_coupling_ring_is_lengthened_exactly() {
    let geom = Geometry::metal(MetalMean::Golden);
    let ramps = RampVector::new(1.0, 0.0, 0.0, 0.0, 0.0);
    for eps in [1e-2, 1e-3] {
        let web = build_web(Region::I, &ramps, &params(1.0, 1.0), eps).unwrap();
        let got = web_spectrum(&web, &geom, 40.0).unwrap();
        let circ = geom.total() + 2.0 * eps;
        assert_eq!(got.levels[0].k, 0.0);
        for (n, r) in got.levels.iter().skip(1).enumerate() {
            let want = 2.0 * PI * (n + 1) as f64 / circ;
            assert!((r.k - want).abs() < 1e-9, "eps {eps}: {} vs {want}", r.k);
            assert_eq!(r.multiplicity, 2);
        }
    }
}

#[test]
fn unit_coupling_ring_converges_with_order_one() {
    let geom = Geometry::metal(MetalMean::Silver);
    let r = convergence_study(Region::I, 0.0, &params(1.0, 1.0), &geom, &[1e-2, 1e-3, 1e-4], 5, &WebSource::Default(LinkLengths::default())).unwrap();
    assert!(!r.non_convergent);
    assert_eq!(r.orders[0], LevelOrder::Exact);
    for o in &r.orders[1..] {
        match o {
            LevelOrder::Fitted(x) => assert!((x - 1.0).abs() < 0.01, "{x}"),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn robin_dirichlet_sector_converges() {
    let geom = Geometry::metal(MetalMean::Bronze);
    let theta = theta_for_c(0.5);
    assert!((eval_ramps::<f64>(CycleKind::Long, theta).c - 0.5).abs() < 1e-12);
    let r = convergence_study(Region::II, theta, &params(0.1, 1.0), &geom, &[1e-2, 1e-3, 1e-4], 5, &WebSource::Default(LinkLengths::default())).unwrap();
    assert!(r.monotone);
    assert!(!r.non_convergent);
    assert!(r.order.unwrap() >= 0.9, "{:?}", r.orders);
    assert!(r.orders.iter().all(|o| matches!(o, LevelOrder::Exact) || matches!(o, LevelOrder::Fitted(x) if *x >= 0.9)));
}

#[test]
fn pair_links_converge_in_coupled_sectors() {
    let geom = Geometry::metal(MetalMean::Bronze);
    for (sector, theta) in [(Region::I, 0.5), (Region::III, PI * 0.8), (Region::V, PI * 1.5)] {
        let r = convergence_study(sector, theta, &params(0.5, 0.5), &geom, &[1e-2, 1e-3, 1e-4], 4, &WebSource::Default(LinkLengths::default())).unwrap();
        assert!(!r.non_convergent && r.order.unwrap() > 0.9, "{sector}: {:?}", r.orders);
    }
}

#[test]
fn uniform_links_fail_for_non_unit_coupling() {
    let geom = Geometry::metal(MetalMean::Bronze);
    let r = convergence_study(Region::I, 0.5, &params(0.5, 0.5), &geom, &[1e-2, 1e-3, 1e-4], 4, &WebSource::Default(LinkLengths::Uniform)).unwrap();
    assert!(r.non_convergent);
}

#[test]
fn description_files_drive_the_study() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../webs/");
    let read = |name: &str| WebDescription::parse(&std::fs::read_to_string(format!("{root}{name}")).unwrap()).unwrap();
    let geom = Geometry::metal(MetalMean::Bronze);
    let eps = [1e-2, 1e-3, 1e-4];
    let p = params(0.5, 0.5);
    let theta = PI * 7.0 / 6.0;

    // The captioned sector IV web pins endpoint 3 (strength 1/eps) and does
    // not reach the Neumann endpoint of the vertex condition.
    let captioned = convergence_study(Region::IV, theta, &p, &geom, &eps, 4, &WebSource::Default(LinkLengths::default())).unwrap();
    assert!(captioned.non_convergent);
    let neumann = convergence_study(Region::IV, theta, &p, &geom, &eps, 4, &WebSource::Described(read("sector4_neumann.web"))).unwrap();
    assert!(!neumann.non_convergent && neumann.order.unwrap() > 0.9, "{:?}", neumann.orders);

    // The written-out default star reproduces the built-in one.
    let ramps = eval_ramps(CycleKind::Long, PI * 11.0 / 6.0);
    let built = build_web(Region::VI, &ramps, &p, 1e-3).unwrap();
    let described = read("sector6_star.web").evaluate(&ramps, &p, 1e-3).unwrap();
    for id in 1..=4 {
        assert!((built.strength(id) - described.strength(id)).abs() < 1e-9);
    }
    assert_eq!(built.subedges, described.subedges);

    let uniform = convergence_study(Region::I, 0.5, &p, &geom, &eps, 4, &WebSource::Described(read("sector1_uniform.web"))).unwrap();
    assert!(uniform.non_convergent);
}
