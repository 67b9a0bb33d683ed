//! Finite webs of δ interactions approximating the singular vertex.
//!
//! The four outer endpoints of the two loops become ordinary vertices 1–4
//! carrying δ strengths; short sub-edges of length proportional to ε join
//! them (and possibly extra internal vertices). As ε → 0 the web reproduces a
//! scale-invariant vertex coupling.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::cycle::{check_self_adjoint, condition_at, eval_ramps, CycleParams, RampVector, Region, SelfAdjointReport, VertexCondition};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linalg::Mat;
use crate::roots::{scan_roots, RootKind, ScanOptions};
use crate::scalar::Real;
use crate::spectrum::{find_spectrum, EigenvalueRecord, Geometry, ResolutionWarning, Spectrum, SpectrumOptions};

/// Which part of the graph an edge belongs to, for the edge-1 weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeGroup {
    Loop1,
    Loop2,
    Web,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphEdge<T> {
    pub from: usize,
    pub to: usize,
    pub length: T,
    pub group: EdgeGroup,
}

/// Matching rule at a vertex of a [`GeneralGraphSystem`].
#[derive(Clone, Debug, PartialEq)]
pub enum VertexRule<T> {
    /// Continuity and `Σ ψ'_out = v ψ`.
    Delta(T),
    Dirichlet,
    /// `A Ψ + B Ψ' = 0` over the incident ends in [`GeneralGraphSystem::incident_ends`] order.
    Coupling(VertexCondition<T>),
}

/// Which end of an edge touches a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Start,
    Finish,
}

/// Metric graph with arbitrary vertex rules.
///
/// On every edge `ψ(x) = α sin(kx)/k + β cos kx`, which stays regular at
/// `k = 0`.
#[derive(Clone, Debug)]
pub struct GeneralGraphSystem<T> {
    pub edges: Vec<GraphEdge<T>>,
    pub vertices: Vec<VertexRule<T>>,
}

fn sinc_len<T: Real>(k: T, l: T) -> T {
    if k == T::zero() {
        l
    } else {
        (k * l).sin() / k
    }
}

impl<T: Real> GeneralGraphSystem<T> {
    pub fn new(edges: Vec<GraphEdge<T>>, vertices: Vec<VertexRule<T>>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.from >= vertices.len() || e.to >= vertices.len() {
                return Err(Error::InvalidParameter(format!("edge {i} refers to a missing vertex")));
            }
            if !(e.length > T::zero()) || !e.length.is_finite() {
                return Err(Error::InvalidParameter(format!("edge {i} has length {}", e.length)));
            }
        }
        let g = Self { edges, vertices };
        for v in 0..g.vertices.len() {
            let deg = g.incident_ends(v).len();
            match &g.vertices[v] {
                VertexRule::Coupling(c) if c.degree() != deg => {
                    return Err(Error::InvalidParameter(format!(
                        "vertex {v} has degree {deg} but its coupling has size {}",
                        c.degree()
                    )));
                }
                VertexRule::Delta(s) if !s.is_finite() => {
                    return Err(Error::InvalidParameter(format!("vertex {v} has strength {s}")));
                }
                _ => {}
            }
        }
        Ok(g)
    }

    /// Edge ends at vertex `v`, in edge order (start before finish).
    pub fn incident_ends(&self, v: usize) -> Vec<(usize, End)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from == v {
                out.push((i, End::Start));
            }
            if e.to == v {
                out.push((i, End::Finish));
            }
        }
        out
    }

    /// Rows giving the boundary value and outgoing derivative of one end.
    fn end_forms(&self, k: T, edge: usize, end: End) -> ([T; 2], [T; 2]) {
        let l = self.edges[edge].length;
        match end {
            End::Start => ([T::zero(), T::one()], [T::one(), T::zero()]),
            End::Finish => {
                let (c, s) = ((k * l).cos(), sinc_len(k, l));
                ([s, c], [-c, k * k * s])
            }
        }
    }

    /// The vertex rule at `v` written as `A Ψ + B Ψ' = 0`.
    pub fn vertex_condition(&self, v: usize) -> VertexCondition<T> {
        let d = self.incident_ends(v).len();
        match &self.vertices[v] {
            VertexRule::Coupling(c) => c.clone(),
            VertexRule::Dirichlet => VertexCondition { a: Mat::identity(d), b: Mat::zeros(d, d), theta: T::zero() },
            VertexRule::Delta(s) => {
                let mut a = Mat::zeros(d, d);
                let mut b = Mat::zeros(d, d);
                for r in 0..d.saturating_sub(1) {
                    a[(r, r)] = T::one();
                    a[(r, r + 1)] = -T::one();
                }
                if d > 0 {
                    a[(d - 1, 0)] = -*s;
                    for j in 0..d {
                        b[(d - 1, j)] = T::one();
                    }
                }
                VertexCondition { a, b, theta: T::zero() }
            }
        }
    }

    pub fn check_self_adjoint(&self, tol: T) -> Vec<SelfAdjointReport<T>> {
        (0..self.vertices.len()).map(|v| check_self_adjoint(&self.vertex_condition(v), tol)).collect()
    }

    /// Square secular matrix in the regular basis.
    pub fn matrix(&self, k: T) -> Mat<T> {
        let n = 2 * self.edges.len();
        let mut m = Mat::zeros(n, n);
        let mut row = 0;
        for v in 0..self.vertices.len() {
            let ends = self.incident_ends(v);
            let cond = self.vertex_condition(v);
            for r in 0..ends.len() {
                for (j, &(edge, end)) in ends.iter().enumerate() {
                    let (val, der) = self.end_forms(k, edge, end);
                    for q in 0..2 {
                        let x = cond.a[(r, j)] * val[q] + cond.b[(r, j)] * der[q];
                        m[(row, 2 * edge + q)] = m[(row, 2 * edge + q)] + x;
                    }
                }
                row += 1;
            }
        }
        m
    }

    fn normalized(&self, k: T) -> Result<Mat<T>> {
        let mut m = self.matrix(k);
        let bad = m.normalize_rows(T::min_positive_value().sqrt());
        match bad.first() {
            Some(&row) => Err(Error::DegenerateRow { row, k: k.to_f64_lossy() }),
            None => Ok(m),
        }
    }

    /// Determinant of the row-normalised secular matrix.
    pub fn secular_value(&self, k: T) -> Result<T> {
        Ok(self.normalized(k)?.determinant())
    }

    pub fn nullity(&self, k: T, rank_rel_tol: T) -> Result<usize> {
        let m = self.normalized(k)?;
        Ok(m.cols() - m.numerical_rank(rank_rel_tol))
    }

    /// `(∫ s̃², ∫ c², ∫ s̃ c)` on one edge for `s̃ = sin(kx)/k`, `c = cos kx`.
    fn integrals(k: T, l: T) -> (T, T, T) {
        if k == T::zero() {
            return (l * l * l / T::lit(3.0), l, l * l * T::half());
        }
        let s2 = (T::two() * k * l).sin() / (T::lit(4.0) * k);
        let sk = (k * l).sin();
        let k2 = k * k;
        let kl2 = k2 * l * l;
        // Series for short web edges, where `l/2 - sin(2kl)/4k` cancels.
        let ss = if kl2 < T::lit(1e-4) {
            l * l * l * (T::one() / T::lit(3.0) - kl2 / T::lit(15.0) + T::two() * kl2 * kl2 / T::lit(315.0))
        } else {
            (l * T::half() - s2) / k2
        };
        (ss, l * T::half() + s2, sk * sk / (T::two() * k2))
    }

    /// Per-edge `∫ ψ_x ψ_y` for coefficient vectors `x`, `y`.
    fn edge_inner(&self, k: T, x: &[T], y: &[T]) -> Vec<T> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let (ss, cc, sc) = Self::integrals(k, e.length);
                let (a, b, p, q) = (x[2 * i], x[2 * i + 1], y[2 * i], y[2 * i + 1]);
                a * p * ss + b * q * cc + (a * q + b * p) * sc
            })
            .collect()
    }

    /// Fraction of the norm on loop-1 edges, averaged over the eigenspace.
    pub fn weight1(&self, k: T, rank_rel_tol: T) -> Result<T> {
        let svd = self.normalized(k)?.svd();
        let null = svd.null_space(rank_rel_tol);
        if null.is_empty() {
            return Err(Error::NotARoot { k: k.to_f64_lossy(), sigma: (svd.smallest() / svd.largest()).to_f64_lossy() });
        }
        Ok(self.weight1_of(k, null))
    }

    /// Same, over the `count` weakest right singular vectors.
    fn weight1_weakest(&self, k: T, count: usize) -> Result<T> {
        let svd = self.normalized(k)?.svd();
        let n = svd.singular_values.len();
        Ok(self.weight1_of(k, (n - count.min(n)..n).map(|j| svd.right.column(j)).collect()))
    }

    fn weight1_of(&self, k: T, null: Vec<Vec<T>>) -> T {
        let total = |x: &[T], y: &[T]| self.edge_inner(k, x, y).into_iter().sum::<T>();
        let mut basis: Vec<Vec<T>> = Vec::new();
        for mut x in null {
            for _pass in 0..2 {
                for b in &basis {
                    let p = total(&x, b);
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi = *xi - p * *bi;
                    }
                }
            }
            let n = total(&x, &x).sqrt();
            if n > T::zero() {
                basis.push(x.into_iter().map(|c| c / n).collect());
            }
        }
        let mut w = T::zero();
        for b in &basis {
            let parts = self.edge_inner(k, b, b);
            for (e, p) in self.edges.iter().zip(parts) {
                if e.group == EdgeGroup::Loop1 {
                    w = w + p;
                }
            }
        }
        (w / T::from_usize(basis.len().max(1))).max(T::zero()).min(T::one())
    }

    /// Default root-scan step: a fiftieth of the shortest non-web edge.
    pub fn default_step(&self) -> T {
        let main = self.edges.iter().filter(|e| e.group != EdgeGroup::Web).map(|e| e.length).fold(T::infinity(), T::min);
        let any = self.edges.iter().map(|e| e.length).fold(T::infinity(), T::min);
        let l = if main.is_finite() { main } else { any };
        l / T::lit(50.0)
    }

    /// Nullity at `k = 0`. Short stiff links shrink every singular value of
    /// the secular matrix, so a small one only counts if it also rises away
    /// from zero: `σ_i(0) ≤ 10⁻³ σ_i(h)`.
    fn zero_nullity(&self, h: T, rank_rel_tol: T) -> Result<usize> {
        let at = |k: T| -> Result<Vec<T>> {
            let s = self.normalized(k)?.svd();
            let top = s.largest();
            Ok(s.singular_values.iter().rev().map(|&x| x / top).collect())
        };
        let (s0, sh) = (at(T::zero())?, at(h)?);
        Ok(s0.iter().zip(&sh).take_while(|(a, b)| **a <= rank_rel_tol && **a <= T::lit(1e-3) * **b).count())
    }

    /// Eigen-wavenumbers in `[0, k_max]` with multiplicities and weights.
    pub fn spectrum(&self, k_max: T, opts: &SpectrumOptions<T>) -> Result<Spectrum<T>> {
        if !(k_max > T::zero()) {
            return Err(Error::InvalidParameter(format!("k_max must be positive, got {k_max}")));
        }
        let h = opts.step.unwrap_or_else(|| self.default_step());
        let zero_null = self.zero_nullity(h, opts.rank_rel_tol)?;
        let lo = if zero_null > 0 { h } else { T::zero() };
        let scan = ScanOptions { step: h, bisect_rel_tol: opts.bisect_rel_tol, touch_threshold: opts.touch_threshold };
        let candidates = if lo < k_max {
            scan_roots(
                &mut |k| self.secular_value(k),
                &mut |k| {
                    let s = self.normalized(k)?.svd();
                    Ok(s.smallest() / s.largest())
                },
                lo,
                k_max,
                &scan,
            )?
        } else {
            Vec::new()
        };

        let mut levels = Vec::new();
        if zero_null > 0 && opts.include_zero_mode {
            levels.push(EigenvalueRecord { k: T::zero(), multiplicity: zero_null, weight1: self.weight1_weakest(T::zero(), zero_null)? });
        }
        let merge_tol = T::tol_floor(1e-8);
        let mut groups: Vec<(T, RootKind, usize)> = Vec::new();
        for c in candidates {
            if !(c.x > T::zero()) || c.x > k_max {
                continue;
            }
            if let Some(last) = groups.last_mut() {
                if (c.x - last.0).abs() <= merge_tol * (T::one() + c.x) {
                    last.2 += 1;
                    continue;
                }
            }
            groups.push((c.x, c.kind, 1));
        }
        for (k, kind, count) in groups {
            let null = self.nullity(k, opts.rank_rel_tol)?;
            let multiplicity = match (kind, count) {
                (RootKind::Touch, _) if null < 2 => continue,
                (RootKind::Touch, _) => 2 * (null / 2),
                (RootKind::SignChange, c) if c > 1 => null.max(c),
                (RootKind::SignChange, _) if null % 2 == 0 => null.saturating_sub(1).max(1),
                (RootKind::SignChange, _) => null,
            };
            let weight1 = if null > 0 { self.weight1(k, opts.rank_rel_tol)? } else { T::nan() };
            levels.push(EigenvalueRecord { k, multiplicity, weight1 });
        }
        let mut warnings = Vec::new();
        for w in levels.windows(2) {
            if w[1].k - w[0].k < T::lit(3.0) * h && w[0].k > T::zero() {
                warnings.push(ResolutionWarning { k_lo: w[0].k, k_hi: w[1].k });
            }
        }
        Ok(Spectrum { levels, warnings })
    }
}

/// A sub-edge of the web between two vertex ids (1–4 are the outer
/// endpoints, larger ids are internal web vertices).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubEdge<T> {
    pub ends: (usize, usize),
    pub length: T,
}

/// ε-scaled web: sub-edges and δ strengths.
#[derive(Clone, Debug, PartialEq)]
pub struct WebSpec<T> {
    pub epsilon: T,
    pub subedges: Vec<SubEdge<T>>,
    /// δ strength per vertex id; absent ids carry strength 0.
    pub strengths: BTreeMap<usize, T>,
}

impl<T: Real> WebSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > T::zero()) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        for (id, v) in &self.strengths {
            if *id == 0 || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("vertex {id}: strength {v}")));
            }
        }
        for e in &self.subedges {
            if e.ends.0 == 0 || e.ends.1 == 0 || !(e.length > T::zero()) || !e.length.is_finite() {
                return Err(Error::InvalidParameter(format!("bad sub-edge {:?} of length {}", e.ends, e.length)));
            }
        }
        Ok(())
    }

    pub fn strength(&self, id: usize) -> T {
        self.strengths.get(&id).copied().unwrap_or_else(T::zero)
    }

    /// Attaches the web to the two loops: loop 1 runs from vertex 1 to 2,
    /// loop 2 from vertex 3 to 4.
    pub fn assemble(&self, geom: &Geometry<T>) -> Result<GeneralGraphSystem<T>> {
        self.validate()?;
        let max_id = self
            .subedges
            .iter()
            .flat_map(|e| [e.ends.0, e.ends.1])
            .chain(self.strengths.keys().copied())
            .fold(4, usize::max);
        let mut edges = vec![
            GraphEdge { from: 0, to: 1, length: geom.l1, group: EdgeGroup::Loop1 },
            GraphEdge { from: 2, to: 3, length: geom.l2, group: EdgeGroup::Loop2 },
        ];
        for e in &self.subedges {
            edges.push(GraphEdge { from: e.ends.0 - 1, to: e.ends.1 - 1, length: e.length, group: EdgeGroup::Web });
        }
        let vertices = (1..=max_id).map(|id| VertexRule::Delta(self.strength(id))).collect();
        GeneralGraphSystem::new(edges, vertices)
    }
}

/// How the pair links of the default webs are sized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LinkLengths {
    /// Length `ε/p` for a link carrying coupling `p`; reproduces the
    /// scale-invariant coupling exactly in the ε → 0 limit.
    #[default]
    CouplingScaled,
    /// Every link of length `ε`.
    Uniform,
}

fn link<T: Real>(web: &mut WebSpec<T>, i: usize, j: usize, p: T, lengths: LinkLengths) {
    let eps = web.epsilon;
    *web.strengths.entry(i).or_insert_with(T::zero) = web.strength(i) + (p * p - p) / eps;
    *web.strengths.entry(j).or_insert_with(T::zero) = web.strength(j) + (T::one() - p) / eps;
    if p != T::zero() {
        let length = match lengths {
            LinkLengths::CouplingScaled => eps / p,
            LinkLengths::Uniform => eps,
        };
        web.subedges.push(SubEdge { ends: (i, j), length });
    }
}

fn robin<T: Real>(c: T, what: &str) -> Result<T> {
    if !(c > T::zero() && c < T::one()) {
        return Err(Error::InvalidParameter(format!("{what} strength singular at c = {c}")));
    }
    Ok(c / (T::one() - c))
}

/// Default web for one long-cycle sector.
pub fn build_web<T: Real>(sector: Region, ramps: &RampVector<T>, params: &CycleParams<T>, epsilon: T) -> Result<WebSpec<T>> {
    build_web_with(sector, ramps, params, epsilon, LinkLengths::default())
}

pub fn build_web_with<T: Real>(
    sector: Region,
    ramps: &RampVector<T>,
    params: &CycleParams<T>,
    epsilon: T,
    lengths: LinkLengths,
) -> Result<WebSpec<T>> {
    if !(epsilon > T::zero()) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    params.validate()?;
    ramps.validate()?;
    let (t, s) = (params.t, params.s);
    let RampVector { a, b, bp, c, d } = *ramps;
    let mut web = WebSpec { epsilon, subedges: Vec::new(), strengths: BTreeMap::new() };
    match sector {
        Region::I => {
            link(&mut web, 1, 3, t * a, lengths);
            link(&mut web, 2, 4, t * a, lengths);
        }
        Region::II => {
            web.strengths.insert(1, T::zero());
            web.strengths.insert(2, robin(c, "v2 = c/(1-c)")?);
            web.strengths.insert(3, robin(T::one() - c, "v3 = (1-c)/c")?);
            web.strengths.insert(4, T::one() / epsilon);
        }
        Region::III => {
            link(&mut web, 1, 2, t * b, lengths);
            link(&mut web, 3, 4, t * bp, lengths);
        }
        Region::IV => {
            link(&mut web, 1, 2, t * b, lengths);
            link(&mut web, 1, 4, s * d, lengths);
            // As captioned; a Neumann endpoint 3 would carry strength 0.
            web.strengths.insert(3, T::one() / epsilon);
        }
        Region::V => {
            link(&mut web, 1, 4, s * d, lengths);
            web.strengths.insert(2, robin(c, "v2 = c/(1-c)")?);
            web.strengths.insert(3, robin(T::one() - c, "v3 = (1-c)/c")?);
        }
        Region::VI => {
            let (ta, sd) = (t * a, s * d);
            let x = T::lit(3.0) * ta * sd;
            web.strengths.insert(1, (ta * ta + sd * sd - ta - sd - x) / epsilon);
            web.strengths.insert(2, (ta * ta - ta - x) / epsilon);
            web.strengths.insert(3, (T::one() - ta) / epsilon);
            web.strengths.insert(4, (T::one() - ta - sd) / epsilon);
            for j in 2..=4 {
                web.subedges.push(SubEdge { ends: (1, j), length: epsilon });
            }
        }
        other => {
            return Err(Error::InvalidParameter(format!("no web for segment {other}; webs cover sectors I-VI")));
        }
    }
    web.validate()?;
    Ok(web)
}

/// Web described in a text file, with expressions still unevaluated.
///
/// ```text
/// # comment
/// edge <u> <v> <length factor>     sub-edge of length factor·eps
/// strength <u> <expression>        δ strength at vertex u
/// ```
///
/// Vertex ids are positive integers; 1–4 are the outer endpoints. Expressions
/// may use `t s a b bp c d eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct WebDescription {
    pub edges: Vec<((usize, usize), Expr)>,
    pub strengths: Vec<(usize, Expr)>,
}

const WEB_VARIABLES: [&str; 8] = ["t", "s", "a", "b", "bp", "c", "d", "eps"];

impl WebDescription {
    pub fn parse(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut strengths: Vec<(usize, Expr)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let err = |msg: String| Error::WebSyntax { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.splitn(2, char::is_whitespace);
            let keyword = parts.next().unwrap_or("");
            let rest = parts.next().unwrap_or("").trim();
            let id = |tok: Option<&str>| -> Result<usize> {
                let tok = tok.ok_or_else(|| err("missing vertex id".into()))?;
                match tok.parse::<usize>() {
                    Ok(v) if v > 0 => Ok(v),
                    _ => Err(err(format!("bad vertex id `{tok}`"))),
                }
            };
            let check_vars = |e: &Expr| -> Result<()> {
                for v in e.variables() {
                    if !WEB_VARIABLES.contains(&v.as_str()) {
                        return Err(err(format!("unknown variable `{v}`")));
                    }
                }
                Ok(())
            };
            match keyword {
                "edge" => {
                    let mut toks = rest.splitn(3, char::is_whitespace);
                    let u = id(toks.next())?;
                    let v = id(toks.next())?;
                    let src = toks.next().unwrap_or("").trim();
                    if src.is_empty() {
                        return Err(err("missing length factor".into()));
                    }
                    let e = Expr::parse(src).map_err(err)?;
                    check_vars(&e)?;
                    edges.push(((u, v), e));
                }
                "strength" => {
                    let mut toks = rest.splitn(2, char::is_whitespace);
                    let u = id(toks.next())?;
                    let src = toks.next().unwrap_or("").trim();
                    if src.is_empty() {
                        return Err(err("missing strength expression".into()));
                    }
                    if strengths.iter().any(|(w, _)| *w == u) {
                        return Err(err(format!("strength of vertex {u} given twice")));
                    }
                    let e = Expr::parse(src).map_err(err)?;
                    check_vars(&e)?;
                    strengths.push((u, e));
                }
                other => return Err(err(format!("unknown keyword `{other}`"))),
            }
        }
        Ok(Self { edges, strengths })
    }

    pub fn evaluate<T: Real>(&self, ramps: &RampVector<T>, params: &CycleParams<T>, epsilon: T) -> Result<WebSpec<T>> {
        let vals = [
            params.t, params.s, ramps.a, ramps.b, ramps.bp, ramps.c, ramps.d, epsilon,
        ];
        let vars: BTreeMap<String, f64> =
            WEB_VARIABLES.iter().zip(vals).map(|(k, v)| (k.to_string(), v.to_f64_lossy())).collect();
        let eval = |e: &Expr| -> Result<T> {
            let x = e.eval(&vars).map_err(|msg| Error::WebSyntax { line: 0, msg })?;
            if !x.is_finite() {
                return Err(Error::InvalidParameter(format!("expression {e:?} is not finite here")));
            }
            Ok(T::lit(x))
        };
        let mut web = WebSpec { epsilon, subedges: Vec::new(), strengths: BTreeMap::new() };
        for ((u, v), e) in &self.edges {
            web.subedges.push(SubEdge { ends: (*u, *v), length: eval(e)? * epsilon });
        }
        for (u, e) in &self.strengths {
            web.strengths.insert(*u, eval(e)?);
        }
        web.validate()?;
        Ok(web)
    }
}

/// Spectrum of the web-approximated graph.
pub fn web_spectrum<T: Real>(web: &WebSpec<T>, geom: &Geometry<T>, k_max: T) -> Result<Spectrum<T>> {
    let opts = SpectrumOptions { step: Some(geom.default_step()), ..SpectrumOptions::default() };
    web.assemble(geom)?.spectrum(k_max, &opts)
}

/// Where the web for a convergence run comes from.
#[derive(Clone, Debug)]
pub enum WebSource {
    Default(LinkLengths),
    Described(WebDescription),
}

#[derive(Clone, Debug)]
pub struct ConvergenceRow<T> {
    pub epsilon: T,
    /// `|k_web − k_singular|` per level; `None` if the web run lacks the level.
    pub errors: Vec<Option<T>>,
    /// `k·ε ≤ 0.1` for each reported level.
    pub wavelength_ok: Vec<bool>,
}

/// Convergence of one level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LevelOrder<T> {
    /// Least-squares slope of `log error` against `log ε`.
    Fitted(T),
    /// The web reproduces the level to rounding for every ε.
    Exact,
    /// Some web run did not reach the level.
    Missing,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport<T> {
    pub sector: Region,
    pub theta: T,
    pub reference: Vec<T>,
    pub rows: Vec<ConvergenceRow<T>>,
    pub orders: Vec<LevelOrder<T>>,
    /// Smallest fitted order, `None` when every level is exact or missing.
    pub order: Option<T>,
    /// Errors shrink as ε decreases for every level.
    pub monotone: bool,
    /// Set when some level has a fitted order ≤ 0 or is missing.
    pub non_convergent: bool,
}

fn fit_slope<T: Real>(xs: &[T], ys: &[T]) -> Option<T> {
    if xs.len() < 2 {
        return None;
    }
    let n = T::from_usize(xs.len());
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let sxy = xs.iter().zip(ys).map(|(x, y)| (*x - mx) * (*y - my)).sum::<T>();
    let sxx = xs.iter().map(|x| (*x - mx) * (*x - mx)).sum::<T>();
    (sxx > T::zero()).then(|| sxy / sxx)
}

/// Compares web spectra against the singular-vertex spectrum at `theta`.
pub fn convergence_study<T: Real>(
    sector: Region,
    theta: T,
    params: &CycleParams<T>,
    geom: &Geometry<T>,
    epsilons: &[T],
    n_levels: usize,
    source: &WebSource,
) -> Result<ConvergenceReport<T>> {
    if epsilons.len() < 3 {
        return Err(Error::InvalidParameter("need at least 3 epsilon values".into()));
    }
    if epsilons.windows(2).any(|w| !(w[1] < w[0])) || epsilons.iter().any(|e| !(*e > T::zero())) {
        return Err(Error::InvalidParameter("epsilon values must be positive and decreasing".into()));
    }
    if n_levels < 3 {
        return Err(Error::InvalidParameter("need at least 3 levels".into()));
    }
    let cond = condition_at(params, theta)?;
    let ramps = eval_ramps(params.kind, theta);

    // Reference levels, extending k_max until enough are found.
    let opts = SpectrumOptions { step: Some(geom.default_step()), ..SpectrumOptions::default() };
    let mut k_max = (T::from_usize(n_levels) + T::one()) * T::PI() / geom.total();
    let reference = loop {
        let found = find_spectrum(&cond, geom, k_max, &opts)?.expanded();
        if found.len() > n_levels {
            break found[..n_levels].to_vec();
        }
        k_max = k_max * T::two();
    };
    let k_top = reference[n_levels - 1];
    let gap = T::PI() / geom.total();
    let k_run = k_top + gap;

    let rows = epsilons
        .par_iter()
        .map(|&eps| -> Result<ConvergenceRow<T>> {
            let web = match source {
                WebSource::Default(lengths) => build_web_with(sector, &ramps, params, eps, *lengths)?,
                WebSource::Described(d) => d.evaluate(&ramps, params, eps)?,
            };
            let got = web_spectrum(&web, geom, k_run)?.expanded();
            let errors = (0..n_levels).map(|i| got.get(i).map(|k| (*k - reference[i]).abs())).collect();
            let wavelength_ok = reference.iter().map(|k| *k * eps <= T::lit(0.1)).collect();
            Ok(ConvergenceRow { epsilon: eps, errors, wavelength_ok })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut orders = Vec::with_capacity(n_levels);
    let mut monotone = true;
    for lvl in 0..n_levels {
        let errs: Option<Vec<T>> = rows.iter().map(|r| r.errors[lvl]).collect();
        let Some(errs) = errs else {
            monotone = false;
            orders.push(LevelOrder::Missing);
            continue;
        };
        let exact_tol = T::tol_floor(1e-11) * (T::one() + reference[lvl]);
        if errs.iter().all(|e| *e <= exact_tol) {
            orders.push(LevelOrder::Exact);
            continue;
        }
        if errs.windows(2).any(|w| w[1] > w[0]) {
            monotone = false;
        }
        let floor = T::min_positive_value();
        let xs: Vec<T> = rows.iter().map(|r| r.epsilon.ln()).collect();
        let ys: Vec<T> = errs.iter().map(|e| e.max(floor).ln()).collect();
        orders.push(fit_slope(&xs, &ys).map_or(LevelOrder::Missing, LevelOrder::Fitted));
    }
    let order = orders
        .iter()
        .filter_map(|o| match o {
            LevelOrder::Fitted(x) => Some(*x),
            _ => None,
        })
        .fold(None, |acc: Option<T>, x| Some(acc.map_or(x, |a| a.min(x))));
    let non_convergent = orders.iter().any(|o| match o {
        LevelOrder::Fitted(x) => !(*x > T::zero()),
        LevelOrder::Missing => true,
        LevelOrder::Exact => false,
    });
    Ok(ConvergenceReport { sector, theta, reference, rows, orders, order, monotone, non_convergent })
}

/// Representative angle inside each long-cycle sector.
pub fn sector_midpoint<T: Real>(sector: Region) -> Result<T> {
    let idx = match sector {
        Region::I => 0,
        Region::II => 1,
        Region::III => 2,
        Region::IV => 3,
        Region::V => 4,
        Region::VI => 5,
        other => return Err(Error::InvalidParameter(format!("no web for segment {other}"))),
    };
    Ok((T::from_usize(idx) + T::half()) * T::PI() / T::lit(3.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::CycleKind;

    #[test]
    fn description_round_trip() {
        let text = "# ring coupling\nedge 1 3 1/(t*a)\nedge 2 4 1/(t*a)\nstrength 1 ((t*a)^2 - t*a)/eps\nstrength 3 (1 - t*a)/eps\n";
        let d = WebDescription::parse(text).unwrap();
        assert_eq!(d.edges.len(), 2);
        let params = CycleParams::new(CycleKind::Long, 0.5, 1.0).unwrap();
        let ramps = eval_ramps::<f64>(CycleKind::Long, 0.1);
        let web = d.evaluate(&ramps, &params, 1e-2).unwrap();
        let ta = 0.5 * ramps.a;
        assert!((web.subedges[0].length - 1e-2 / ta).abs() < 1e-15);
        assert!((web.strength(1) - (ta * ta - ta) / 1e-2).abs() < 1e-12);
        assert_eq!(web.strength(2), 0.0);
    }

    #[test]
    fn description_errors_carry_line_numbers() {
        for (text, line) in [("edge 1\n", 1), ("\nstrength 0 1\n", 2), ("bogus 1 2\n", 1), ("strength 1 q\n", 1), ("strength 1 1\nstrength 1 2\n", 2)] {
            match WebDescription::parse(text) {
                Err(Error::WebSyntax { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
