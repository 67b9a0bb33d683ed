use std::f64::consts::{PI, TAU};

use spectral_flow::cycle::{CycleKind, CycleParams, TopologyName};
use spectral_flow::error::Error;
use spectral_flow::flow::*;
use spectral_flow::spectrum::{Geometry, MetalMean};

fn long_bronze(t: f64, s: f64) -> FlowConfig<f64> {
    let geom = Geometry::metal(MetalMean::Bronze);
    FlowConfig::new(CycleParams::new(CycleKind::Long, t, s).unwrap(), geom, weyl_k_max(&geom, 12))
}

/// Region II crossings between the edge-1 family (Neumann/Robin) and the
/// edge-2 family (Robin/Dirichlet), from the closed form
/// `k² sin kL1 cos kL2 + sin kL2 cos kL1 = 0` with `c/(1−c) = k tan kL1`.
fn region_two_crossings(l1: f64, l2: f64, k_max: f64) -> Vec<(f64, f64)> {
    let g = |k: f64| k * k * (k * l1).sin() * (k * l2).cos() + (k * l2).sin() * (k * l1).cos();
    let mut out = Vec::new();
    let h = 1e-3;
    let mut k = h;
    while k + h < k_max {
        let (a, b) = (g(k), g(k + h));
        if a.signum() != b.signum() {
            let (mut lo, mut hi) = (k, k + h);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(mid).signum() == g(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let ks = 0.5 * (lo + hi);
            let r = ks * (ks * l1).tan();
            if r > 0.0 && r.is_finite() {
                let c = r / (1.0 + r);
                let theta = 2.0 * (((3f64.sqrt() - 1.0) * c + 1.0) / 2.0).asin();
                out.push((theta, ks));
            }
        }
        k += h;
    }
    out
}

#[test]
fn frozen_cycle_is_flat_and_trivial() {
    let mut cfg = long_bronze(0.1, 1.0);
    cfg.frozen = Some(0.9);
    let flow = sweep(&cfg, 40).unwrap();
    let branches = track_branches(&flow).unwrap();
    for b in &branches.branches {
        let k0 = b.points[0].k;
        assert!(b.points.iter().all(|p| p.k == k0), "branch {} not flat", b.id);
    }
    let n = default_level_count(&flow);
    let report = anholonomy_permutation(&branches, n).unwrap();
    assert!(!report.nontrivial);
    assert_eq!(report.mapping, (0..n).collect::<Vec<_>>());
    assert_eq!(report.cycles.len(), n);
}

#[test]
fn grid_includes_both_ends_and_is_periodic() {
    let flow = sweep(&long_bronze(0.5, 0.5), 60).unwrap();
    let th = flow.thetas();
    assert_eq!(th[0], 0.0);
    assert_eq!(*th.last().unwrap(), TAU);
    assert!(flow.periodicity_defect().unwrap() <= 1e-9);
    for s in &flow.samples {
        let k = s.spectrum.expanded();
        assert!(k.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn spectrum_is_continuous_at_the_seam() {
    let cfg = long_bronze(0.1, 1.0);
    let a = cfg.sample(0.0).unwrap().spectrum.expanded();
    let b = cfg.sample(TAU - 1e-9).unwrap().spectrum.expanded();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-6, "{x} vs {y}");
    }
}

#[test]
fn region_two_crossings_match_closed_form() {
    let cfg = long_bronze(0.1, 1.0);
    let flow = sweep_range(&cfg, PI / 3.0, 2.0 * PI / 3.0, 120).unwrap();
    let events = detect_crossings(&flow, 1e-6).unwrap();
    let oracle = region_two_crossings(cfg.geom.l1, cfg.geom.l2, cfg.k_max - 0.5);
    assert!(oracle.len() >= 3, "oracle found {:?}", oracle);
    for &(theta, k) in &oracle {
        let hit = events
            .iter()
            .filter(|e| e.kind == CrossingKind::Crossing)
            .find(|e| (e.theta - theta).abs() < 1e-6 && (e.k - k).abs() < 1e-6);
        assert!(hit.is_some(), "missing crossing at theta={theta}, k={k}: {events:#?}");
    }
    for e in events.iter().filter(|e| e.kind == CrossingKind::Crossing) {
        assert!(e.weight_separation > 0.99);
        assert!(oracle.iter().any(|&(t, k)| (e.theta - t).abs() < 1e-6 && (e.k - k).abs() < 1e-6), "unexpected {e:?}, oracle {oracle:?}");
    }
}

#[test]
fn branches_exchange_order_and_keep_their_edge() {
    let cfg = long_bronze(0.1, 1.0);
    let flow = sweep_range(&cfg, PI / 3.0, 2.0 * PI / 3.0, 120).unwrap();
    let branches = track_branches(&flow).unwrap();
    let (theta, k) = region_two_crossings(cfg.geom.l1, cfg.geom.l2, 15.0)[0];
    let dtheta = PI / 3.0 / 120.0;
    let before = ((theta - PI / 3.0) / dtheta).floor() as usize - 1;
    let after = before + 3;
    let near = |idx: usize| -> Vec<(usize, f64, f64)> {
        let s = flow.samples[idx].slots();
        let ids = &branches.slot_ids[idx];
        let mut v: Vec<(usize, f64, f64)> = s.iter().zip(ids).map(|(sl, &id)| (id, sl.k, sl.w)).collect();
        v.sort_by(|a, b| (a.1 - k).abs().total_cmp(&(b.1 - k).abs()));
        v.truncate(2);
        v
    };
    let (pre, post) = (near(before), near(after));
    let mut ids_pre: Vec<usize> = pre.iter().map(|x| x.0).collect();
    let mut ids_post: Vec<usize> = post.iter().map(|x| x.0).collect();
    ids_pre.sort_unstable();
    ids_post.sort_unstable();
    assert_eq!(ids_pre, ids_post);
    for id in ids_pre {
        let (w0, k0) = pre.iter().find(|x| x.0 == id).map(|x| (x.2, x.1)).unwrap();
        let (w1, k1) = post.iter().find(|x| x.0 == id).map(|x| (x.2, x.1)).unwrap();
        assert!(w0 > 0.999 || w0 < 0.001, "weight {w0}");
        assert!((w0 - w1).abs() < 1e-3, "branch {id} changed edge: {w0} -> {w1}");
        let other_pre = pre.iter().find(|x| x.0 != id).unwrap().1;
        let other_post = post.iter().find(|x| x.0 != id).unwrap().1;
        assert_ne!(k0 < other_pre, k1 < other_post, "branch {id} did not cross");
    }
}

#[test]
fn figure_eight_minima_are_avoided() {
    let cfg = long_bronze(0.1, 1.0);
    let flow = sweep_range(&cfg, 5.0 * PI / 3.0 + 1e-3, TAU - 1e-3, 90).unwrap();
    assert!(flow.samples.iter().all(|s| s.topology.name == TopologyName::FigureEight));
    let events = detect_crossings(&flow, 1e-6).unwrap();
    assert!(events.iter().all(|e| e.kind == CrossingKind::Avoided), "{events:#?}");
}

#[test]
fn equal_lengths_give_persistent_degeneracies() {
    let geom = Geometry::new(0.5, 0.5).unwrap();
    let mut cfg = FlowConfig::new(CycleParams::new(CycleKind::Long, 0.1, 1.0).unwrap(), geom, 20.0);
    // Both edges Neumann/Dirichlet lines.
    cfg.frozen = Some(2.0 * PI / 3.0);
    let flow = sweep_range(&cfg, 1.2, 1.8, 12).unwrap();
    assert_eq!(flow.samples[0].topology.name, TopologyName::TwoLines);
    let events = detect_crossings(&flow, 1e-6).unwrap();
    for i in 1..flow.samples.len() - 1 {
        let theta = flow.samples[i].theta;
        assert!(
            events.iter().any(|e| e.theta == theta && e.kind == CrossingKind::Crossing),
            "no crossing flagged at {theta}"
        );
    }
    assert!(track_branches(&flow).is_ok());
}

#[test]
fn permutation_is_bijective_and_grid_stable() {
    let cfg = long_bronze(0.5, 0.5);
    let coarse = sweep(&cfg, 180).unwrap();
    let fine = sweep(&cfg, 360).unwrap();
    let n = 6;
    let a = anholonomy_permutation(&track_branches(&coarse).unwrap(), n).unwrap();
    let b = anholonomy_permutation(&track_branches(&fine).unwrap(), n).unwrap();
    assert_eq!(a, b);
    assert!(a.is_bijection());
    let mut seen = a.mapping.clone();
    seen.sort_unstable();
    assert_eq!(seen, (0..n).collect::<Vec<_>>());
    assert!(a.nontrivial);
}

#[test]
fn unresolvable_ambiguity_is_reported() {
    let flow = sweep(&long_bronze(0.1, 1.0), 24).unwrap();
    let opts = TrackOptions { ambiguity_ratio: 1e9, max_depth: 6, ..TrackOptions::default() };
    match track_branches_with(&flow, &opts) {
        Err(Error::TrackingAmbiguity { theta_lo, theta_hi }) => {
            assert!(theta_hi > theta_lo);
            assert!(theta_hi - theta_lo <= TAU / 64.0 + 1e-12);
        }
        other => panic!("expected ambiguity, got {other:?}"),
    }
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let cfg = long_bronze(0.1, 1.0);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| format!("{:?}", sweep(&cfg, 48).unwrap().samples))
    };
    assert_eq!(run(1), run(8));
}
