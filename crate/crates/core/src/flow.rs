//! Spectral flow over one cycle: θ sweep, branch continuation and the
//! resulting permutation of levels.

use rayon::prelude::*;

use crate::assignment::min_cost_assignment;
use crate::cycle::{
    classify_topology, condition_at, region_of, CycleParams, Region, TopologyLabel, VertexCondition,
    DEFAULT_COUPLING_TOL,
};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectrum::{find_spectrum, Geometry, ResolutionWarning, Spectrum, SpectrumOptions};

/// Everything needed to evaluate the spectrum at an arbitrary angle.
#[derive(Clone, Debug)]
pub struct FlowConfig<T> {
    pub cycle: CycleParams<T>,
    pub geom: Geometry<T>,
    pub k_max: T,
    pub spectrum: SpectrumOptions<T>,
    /// Evaluate every angle at this fixed θ instead (a dummy cycle).
    pub frozen: Option<T>,
}

impl<T: Real> FlowConfig<T> {
    pub fn new(cycle: CycleParams<T>, geom: Geometry<T>, k_max: T) -> Self {
        Self { cycle, geom, k_max, spectrum: SpectrumOptions::default(), frozen: None }
    }

    pub fn condition(&self, theta: T) -> Result<VertexCondition<T>> {
        condition_at(&self.cycle, self.frozen.unwrap_or(theta))
    }

    /// Spectrum, region and topology at one angle.
    pub fn sample(&self, theta: T) -> Result<FlowSample<T>> {
        let cond = self.condition(theta)?;
        let spectrum = find_spectrum(&cond, &self.geom, self.k_max, &self.spectrum)?;
        let eff = self.frozen.unwrap_or(theta);
        Ok(FlowSample {
            theta,
            region: region_of(self.cycle.kind, eff),
            topology: classify_topology(&cond, T::lit(DEFAULT_COUPLING_TOL)),
            spectrum,
        })
    }
}

/// `k_max` placing roughly `levels` eigenvalues below it (Weyl estimate).
pub fn weyl_k_max<T: Real>(geom: &Geometry<T>, levels: usize) -> T {
    (T::from_usize(levels) + T::half()) * T::PI() / geom.total()
}

#[derive(Clone, Debug)]
pub struct FlowSample<T> {
    pub theta: T,
    pub region: Region,
    pub topology: TopologyLabel,
    pub spectrum: Spectrum<T>,
}

impl<T: Real> FlowSample<T> {
    /// Levels with multiplicity expanded into coincident slots.
    pub fn slots(&self) -> Vec<Slot<T>> {
        let mut out = Vec::new();
        for r in &self.spectrum.levels {
            for _ in 0..r.multiplicity {
                out.push(Slot { k: r.k, w: r.weight1 });
            }
        }
        out
    }

    fn has_degeneracy(&self) -> bool {
        self.spectrum.levels.iter().any(|r| r.multiplicity > 1 && r.k > T::zero())
    }
}

/// One expanded level: wavenumber and edge-1 weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Slot<T> {
    pub k: T,
    pub w: T,
}

/// Spectra on an ordered θ grid covering `[0, 2π]`.
#[derive(Clone, Debug)]
pub struct FlowTable<T> {
    pub config: FlowConfig<T>,
    pub samples: Vec<FlowSample<T>>,
}

impl<T: Real> FlowTable<T> {
    pub fn thetas(&self) -> Vec<T> {
        self.samples.iter().map(|s| s.theta).collect()
    }

    /// Resolution warnings annotated with their angle.
    pub fn warnings(&self) -> Vec<(T, ResolutionWarning<T>)> {
        self.samples
            .iter()
            .flat_map(|s| s.spectrum.warnings.iter().map(move |w| (s.theta, *w)))
            .collect()
    }

    /// Largest difference between the sorted spectra at both ends of the
    /// grid, or `None` if the level counts differ.
    pub fn periodicity_defect(&self) -> Option<T> {
        let a = self.samples.first()?.spectrum.expanded();
        let b = self.samples.last()?.spectrum.expanded();
        if a.len() != b.len() {
            return None;
        }
        Some(a.iter().zip(&b).map(|(x, y)| (*x - *y).abs()).fold(T::zero(), T::max))
    }
}

/// Evaluates `steps + 1` equally spaced angles `0, 2π/steps, …, 2π`.
///
/// Angles are processed in parallel; the result is independent of the
/// thread count.
pub fn sweep<T: Real>(config: &FlowConfig<T>, steps: usize) -> Result<FlowTable<T>> {
    sweep_range(config, T::zero(), T::two_pi(), steps)
}

/// Like [`sweep`] but on `[theta_lo, theta_hi]`, for local analysis.
pub fn sweep_range<T: Real>(config: &FlowConfig<T>, theta_lo: T, theta_hi: T, steps: usize) -> Result<FlowTable<T>> {
    if steps < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 theta steps, got {steps}")));
    }
    if !(theta_hi > theta_lo) {
        return Err(Error::InvalidParameter(format!("empty theta range [{theta_lo}, {theta_hi}]")));
    }
    config.cycle.validate()?;
    let dtheta = (theta_hi - theta_lo) / T::from_usize(steps);
    let samples = (0..=steps)
        .into_par_iter()
        .map(|i| {
            let theta = if i == steps { theta_hi } else { theta_lo + T::from_usize(i) * dtheta };
            config.sample(theta)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FlowTable { config: config.clone(), samples })
}

/// Tuning of the branch continuation.
#[derive(Clone, Copy, Debug)]
pub struct TrackOptions<T> {
    /// Weight-term multiplier where the graph splits into two components.
    pub lambda_disconnected: T,
    pub lambda_connected: T,
    /// Two assignments whose costs differ by less than this fraction are
    /// considered ambiguous.
    pub ambiguity_ratio: T,
    /// Refinement stops once the θ step falls below `2π / 2^max_depth`.
    pub max_depth: u32,
}

impl<T: Real> Default for TrackOptions<T> {
    fn default() -> Self {
        Self {
            lambda_disconnected: T::one(),
            lambda_connected: T::lit(0.1),
            ambiguity_ratio: T::lit(0.1),
            max_depth: 20,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchPoint<T> {
    pub theta: T,
    pub k: T,
    pub weight1: T,
}

/// A continued eigenvalue curve on the sweep grid.
#[derive(Clone, Debug)]
pub struct Branch<T> {
    pub id: usize,
    /// Index of the first grid sample carrying this branch.
    pub first_sample: usize,
    pub points: Vec<BranchPoint<T>>,
    /// Level position at θ = 0, if the branch exists there.
    pub start_index: Option<usize>,
    /// Level position at θ = 2π, if the branch reaches it.
    pub end_index: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct BranchSet<T> {
    pub branches: Vec<Branch<T>>,
    /// Branch id of every expanded slot, per grid sample.
    pub slot_ids: Vec<Vec<usize>>,
    /// Number of extra spectra computed by θ refinement.
    pub refinements: usize,
}

/// Per-slot assignment from one sample to the next.
type Map = Vec<Option<usize>>;

struct Matcher<'a, T> {
    config: &'a FlowConfig<T>,
    opts: TrackOptions<T>,
    min_step: T,
    refinements: usize,
}

fn equivalent<T: Real>(x: &Slot<T>, y: &Slot<T>) -> bool {
    let tol = T::tol_floor(1e-9);
    (x.k - y.k).abs() <= tol * (T::one() + x.k.abs()) && (x.w - y.w).abs() <= tol
}

fn mean_spacing<T: Real>(a: &[Slot<T>], b: &[Slot<T>]) -> T {
    let spacing = |s: &[Slot<T>]| {
        if s.len() < 2 {
            None
        } else {
            Some((s[s.len() - 1].k - s[0].k) / T::from_usize(s.len() - 1))
        }
    };
    match (spacing(a), spacing(b)) {
        (Some(x), Some(y)) if x + y > T::zero() => (x + y) * T::half(),
        (Some(x), None) | (None, Some(x)) if x > T::zero() => x,
        _ => T::one(),
    }
}

/// Outcome of a single (unrefined) matching step.
struct Step {
    map: Map,
    ambiguous: bool,
    /// Order of two levels exchanged in a range where both ends are connected.
    connected_swap: bool,
}

impl<'a, T: Real> Matcher<'a, T> {
    fn step(&self, a: &FlowSample<T>, sa: &[Slot<T>], b: &FlowSample<T>, sb: &[Slot<T>]) -> Step {
        let lambda = if a.topology.is_disconnected() || b.topology.is_disconnected() {
            self.opts.lambda_disconnected
        } else {
            self.opts.lambda_connected
        };
        let h = mean_spacing(sa, sb);
        let cost = |x: &Slot<T>, y: &Slot<T>| (x.k - y.k).abs() / h + lambda * (x.w - y.w).abs();

        let mut map: Map = vec![None; sa.len()];
        if sa.len() <= sb.len() {
            let c: Vec<Vec<T>> = sa.iter().map(|x| sb.iter().map(|y| cost(x, y)).collect()).collect();
            for (i, j) in min_cost_assignment(&c).into_iter().enumerate() {
                map[i] = Some(j);
            }
        } else {
            let c: Vec<Vec<T>> = sb.iter().map(|y| sa.iter().map(|x| cost(x, y)).collect()).collect();
            for (j, i) in min_cost_assignment(&c).into_iter().enumerate() {
                map[i] = Some(j);
            }
        }

        // Local ambiguity: exchanging the targets of two neighbouring levels
        // costs almost the same as the optimum.
        let mut ambiguous = false;
        let mut connected_swap = false;
        let connected = !a.topology.is_disconnected() && !b.topology.is_disconnected();
        for i in 0..sa.len() {
            for i2 in i + 1..sa.len().min(i + 3) {
                let (Some(j), Some(j2)) = (map[i], map[i2]) else { continue };
                if equivalent(&sa[i], &sa[i2]) || equivalent(&sb[j], &sb[j2]) {
                    continue;
                }
                let best = cost(&sa[i], &sb[j]) + cost(&sa[i2], &sb[j2]);
                let alt = cost(&sa[i], &sb[j2]) + cost(&sa[i2], &sb[j]);
                if alt <= best * (T::one() + self.opts.ambiguity_ratio) + T::tol_floor(1e-12) {
                    ambiguous = true;
                }
                if connected && j2 < j {
                    connected_swap = true;
                }
            }
        }
        Step { map, ambiguous, connected_swap }
    }

    fn midpoint(&mut self, a: &FlowSample<T>, b: &FlowSample<T>) -> Result<FlowSample<T>> {
        self.refinements += 1;
        let mid = self.config.sample((a.theta + b.theta) * T::half())?;
        if mid.has_degeneracy() {
            // Step off an exact degeneracy: weights are averaged there.
            self.refinements += 1;
            let off = a.theta + (b.theta - a.theta) * T::lit(0.4);
            return self.config.sample(off);
        }
        Ok(mid)
    }

    /// Matches the slots of `a` to those of `b`, bisecting the θ interval
    /// while the assignment is ambiguous.
    fn link(&mut self, a: &FlowSample<T>, b: &FlowSample<T>) -> Result<Map> {
        let (sa, sb) = (a.slots(), b.slots());
        let st = self.step(a, &sa, b, &sb);
        if !st.ambiguous && !st.connected_swap {
            return Ok(st.map);
        }
        if (b.theta - a.theta).abs() <= self.min_step {
            if st.ambiguous {
                return Err(Error::TrackingAmbiguity {
                    theta_lo: a.theta.to_f64_lossy(),
                    theta_hi: b.theta.to_f64_lossy(),
                });
            }
            // The exchange persists down to the finest step: accept it on
            // weight evidence.
            return Ok(st.map);
        }
        let m = self.midpoint(a, b)?;
        let first = self.link(a, &m)?;
        let second = self.link(&m, b)?;
        Ok(first.into_iter().map(|j| j.and_then(|j| second[j])).collect())
    }
}

/// Continues every level across the sweep grid.
pub fn track_branches<T: Real>(flow: &FlowTable<T>) -> Result<BranchSet<T>> {
    track_branches_with(flow, &TrackOptions::default())
}

pub fn track_branches_with<T: Real>(flow: &FlowTable<T>, opts: &TrackOptions<T>) -> Result<BranchSet<T>> {
    let n = flow.samples.len();
    if n == 0 {
        return Ok(BranchSet { branches: Vec::new(), slot_ids: Vec::new(), refinements: 0 });
    }
    let min_step = T::two_pi() / T::lit(2f64.powi(opts.max_depth as i32));
    let mut matcher = Matcher { config: &flow.config, opts: *opts, min_step, refinements: 0 };

    let mut branches: Vec<Branch<T>> = Vec::new();
    let mut slot_ids: Vec<Vec<usize>> = vec![Vec::new(); n];

    let push_point = |branches: &mut Vec<Branch<T>>, id: usize, theta: T, s: &Slot<T>| {
        branches[id].points.push(BranchPoint { theta, k: s.k, weight1: s.w });
    };

    let first = flow.samples[0].slots();
    for (i, s) in first.iter().enumerate() {
        branches.push(Branch { id: i, first_sample: 0, points: Vec::new(), start_index: Some(i), end_index: None });
        push_point(&mut branches, i, flow.samples[0].theta, s);
        slot_ids[0].push(i);
    }

    let mut anchor = 0usize;
    while anchor + 1 < n {
        // Skip over isolated exact degeneracies, where weights are averaged.
        let mut next = anchor + 1;
        while next + 1 < n && next - anchor <= 2 && flow.samples[next].has_degeneracy() {
            next += 1;
        }
        if next - anchor > 2 && flow.samples[next - 1].has_degeneracy() {
            next = anchor + 1;
        }

        let (a, b) = (&flow.samples[anchor], &flow.samples[next]);
        let map = matcher.link(a, b)?;
        let sb = b.slots();
        let mut ids = vec![usize::MAX; sb.len()];
        for (i, j) in map.iter().enumerate() {
            if let Some(j) = *j {
                ids[j] = slot_ids[anchor][i];
            }
        }
        for (j, id) in ids.iter_mut().enumerate() {
            if *id == usize::MAX {
                let new = branches.len();
                branches.push(Branch { id: new, first_sample: next, points: Vec::new(), start_index: None, end_index: None });
                *id = new;
                let _ = j;
            }
        }

        // Skipped samples: label slots by nearest wavenumber to the anchor.
        for mid in anchor + 1..next {
            let sm = flow.samples[mid].slots();
            let sa = a.slots();
            let h = mean_spacing(&sa, &sm);
            let c: Vec<Vec<T>> = if sa.len() <= sm.len() {
                sa.iter().map(|x| sm.iter().map(|y| (x.k - y.k).abs() / h).collect()).collect()
            } else {
                sm.iter().map(|y| sa.iter().map(|x| (x.k - y.k).abs() / h).collect()).collect()
            };
            let assign = min_cost_assignment(&c);
            let mut mids = vec![usize::MAX; sm.len()];
            if sa.len() <= sm.len() {
                for (i, j) in assign.into_iter().enumerate() {
                    mids[j] = slot_ids[anchor][i];
                }
            } else {
                for (j, i) in assign.into_iter().enumerate() {
                    mids[j] = slot_ids[anchor][i];
                }
            }
            for (j, id) in mids.iter_mut().enumerate() {
                if *id == usize::MAX {
                    let new = branches.len();
                    branches.push(Branch { id: new, first_sample: mid, points: Vec::new(), start_index: None, end_index: None });
                    *id = new;
                }
                push_point(&mut branches, *id, flow.samples[mid].theta, &sm[j]);
            }
            slot_ids[mid] = mids;
        }

        for (j, &id) in ids.iter().enumerate() {
            push_point(&mut branches, id, b.theta, &sb[j]);
        }
        slot_ids[next] = ids;
        anchor = next;
    }

    for (j, &id) in slot_ids[n - 1].iter().enumerate() {
        branches[id].end_index = Some(j);
    }
    // Branches that were cut at a skipped sample keep their points but no end.
    Ok(BranchSet { branches, slot_ids, refinements: matcher.refinements })
}

/// Level permutation after one full cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnholonomyReport {
    pub n: usize,
    /// `mapping[i]` is the level index at θ = 2π of the branch starting at
    /// level `i` at θ = 0.
    pub mapping: Vec<usize>,
    /// Levels `i < n` whose branch ends at index `>= n`.
    pub exited: Vec<usize>,
    /// Cycle decomposition (only when the mapping is a bijection on `0..n`).
    pub cycles: Vec<Vec<usize>>,
    pub nontrivial: bool,
}

impl AnholonomyReport {
    pub fn is_bijection(&self) -> bool {
        self.exited.is_empty()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.mapping.iter().enumerate().filter(|(i, j)| *i == **j).map(|(i, _)| i).collect()
    }

    /// `[3, 0, 1, 2]`-style one-line notation.
    pub fn one_line(&self) -> String {
        let items: Vec<String> = self.mapping.iter().map(|j| j.to_string()).collect();
        format!("[{}]", items.join(", "))
    }

    /// `(0 3 2 1)(4)`-style cycle notation.
    pub fn cycle_notation(&self) -> String {
        self.cycles
            .iter()
            .map(|c| format!("({})", c.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(" ")))
            .collect()
    }
}

/// Default level count: levels at θ = 0 minus a buffer of two.
pub fn default_level_count<T: Real>(flow: &FlowTable<T>) -> usize {
    flow.samples.first().map_or(0, |s| s.slots().len().saturating_sub(2))
}

pub fn anholonomy_permutation<T: Real>(branches: &BranchSet<T>, n: usize) -> Result<AnholonomyReport> {
    let mut mapping = vec![usize::MAX; n];
    for b in &branches.branches {
        let Some(start) = b.start_index else { continue };
        if start >= n {
            continue;
        }
        match b.end_index {
            Some(end) => mapping[start] = end,
            None => {
                let theta = b.points.last().map_or(0.0, |p| p.theta.to_f64_lossy());
                return Err(Error::IncompleteBranch { level: start, theta });
            }
        }
    }
    if let Some(level) = mapping.iter().position(|&j| j == usize::MAX) {
        return Err(Error::IncompleteBranch { level, theta: 0.0 });
    }
    let exited: Vec<usize> = (0..n).filter(|&i| mapping[i] >= n).collect();
    let mut cycles = Vec::new();
    if exited.is_empty() {
        let mut seen = vec![false; n];
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut c = vec![i];
            seen[i] = true;
            let mut j = mapping[i];
            while j != i {
                seen[j] = true;
                c.push(j);
                j = mapping[j];
            }
            cycles.push(c);
        }
    }
    let nontrivial = mapping.iter().enumerate().any(|(i, &j)| i != j);
    Ok(AnholonomyReport { n, mapping, exited, cycles, nontrivial })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingKind {
    Crossing,
    Avoided,
}

impl CrossingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CrossingKind::Crossing => "crossing",
            CrossingKind::Avoided => "avoided",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CrossingEvent<T> {
    pub theta: T,
    pub k: T,
    pub min_gap: T,
    /// Lower level index of the adjacent pair.
    pub level: usize,
    /// `|weight1_lower − weight1_upper|` next to the minimum.
    pub weight_separation: T,
    pub kind: CrossingKind,
}

/// Gap between the adjacent levels nearest `k_ref` at angle `theta`, with
/// their weights.
fn local_gap<T: Real>(config: &FlowConfig<T>, theta: T, k_ref: T, window: T) -> Result<Option<(T, T, T, T)>> {
    let cond = config.condition(theta)?;
    let mut opts = config.spectrum;
    opts.include_zero_mode = true;
    let k_hi = (k_ref + window).max(T::lit(1e-6));
    let found = find_spectrum(&cond, &config.geom, k_hi, &opts)?;
    let mut slots: Vec<Slot<T>> = Vec::new();
    for r in &found.levels {
        if r.k < k_ref - window {
            continue;
        }
        for _ in 0..r.multiplicity {
            slots.push(Slot { k: r.k, w: r.weight1 });
        }
    }
    let mut best: Option<(T, T, T, T)> = None;
    for w in slots.windows(2) {
        let centre = (w[0].k + w[1].k) * T::half();
        let gap = w[1].k - w[0].k;
        let score = (centre - k_ref).abs();
        if best.map_or(true, |b| score < (b.1 - k_ref).abs()) {
            best = Some((gap, centre, w[0].w, w[1].w));
        }
    }
    Ok(best)
}

/// Local minima of adjacent-level gaps along the sweep, refined in θ and
/// classified as genuine crossings or avoided ones.
pub fn detect_crossings<T: Real>(flow: &FlowTable<T>, gap_tol: T) -> Result<Vec<CrossingEvent<T>>> {
    if !(gap_tol > T::zero()) {
        return Err(Error::InvalidParameter(format!("gap_tol must be positive, got {gap_tol}")));
    }
    let slots: Vec<Vec<Slot<T>>> = flow.samples.iter().map(|s| s.slots()).collect();
    let n = flow.samples.len();
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    let gap = |i: usize, j: usize| -> Option<T> {
        let s = &slots[i];
        (j + 1 < s.len()).then(|| s[j + 1].k - s[j].k)
    };
    let max_levels = slots.iter().map(|s| s.len()).max().unwrap_or(0);
    for j in 0..max_levels.saturating_sub(1) {
        for i in 1..n.saturating_sub(1) {
            let (Some(g0), Some(g1), Some(g2)) = (gap(i - 1, j), gap(i, j), gap(i + 1, j)) else { continue };
            let persistent = g1 <= gap_tol && g0 <= gap_tol && g2 <= gap_tol;
            if (g1 < g0 && g1 <= g2) || persistent {
                candidates.push((i, j));
            }
        }
    }

    let events = candidates
        .par_iter()
        .map(|&(i, j)| -> Result<CrossingEvent<T>> {
            let (lo, hi) = (flow.samples[i - 1].theta, flow.samples[i + 1].theta);
            let s = &slots[i];
            let k_ref = (s[j].k + s[j + 1].k) * T::half();
            let h = mean_spacing(s, s);
            let window = h * T::lit(0.75) + (s[j + 1].k - s[j].k);
            let grid_gap = s[j + 1].k - s[j].k;
            let mut tracked_k = k_ref;
            let mut eval = |theta: T| -> Result<T> {
                Ok(match local_gap(&flow.config, theta, tracked_k, window)? {
                    Some((g, centre, _, _)) => {
                        tracked_k = centre;
                        g
                    }
                    None => T::infinity(),
                })
            };
            let (theta_star, refined) = if grid_gap <= gap_tol {
                (flow.samples[i].theta, grid_gap)
            } else {
                crate::roots::golden_min(&mut eval, lo, hi, T::lit(1e-10))?
            };
            let min_gap = refined.min(grid_gap);
            let theta_star = if refined <= grid_gap { theta_star } else { flow.samples[i].theta };
            let k_star = match local_gap(&flow.config, theta_star, tracked_k, window)? {
                Some((_, centre, _, _)) => centre,
                None => k_ref,
            };

            // Weights next to the minimum: take the grid neighbour with the
            // larger gap, where the pair is not degenerate.
            let nb = if gap(i - 1, j) >= gap(i + 1, j) { i - 1 } else { i + 1 };
            let ns = &slots[nb];
            let sep = (ns[j].w - ns[j + 1].w).abs();
            let disconnected = flow.samples[i].topology.is_disconnected();
            let kind = if min_gap < gap_tol && (disconnected || sep > T::lit(0.99)) {
                CrossingKind::Crossing
            } else {
                CrossingKind::Avoided
            };
            Ok(CrossingEvent { theta: theta_star, k: k_star, min_gap, level: j, weight_separation: sep, kind })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_notation() {
        let r = AnholonomyReport {
            n: 4,
            mapping: vec![3, 0, 1, 2],
            exited: vec![],
            cycles: vec![vec![0, 3, 2, 1]],
            nontrivial: true,
        };
        assert_eq!(r.one_line(), "[3, 0, 1, 2]");
        assert_eq!(r.cycle_notation(), "(0 3 2 1)");
        assert!(r.fixed_points().is_empty());
    }
}
