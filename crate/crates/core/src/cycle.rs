//! Parametric coupling functions of the singular vertex and the boundary
//! condition matrices they generate.
//!
//! The vertex joins the four inner endpoints of the two loops. Endpoint 1 is
//! `x1 = 0`, endpoint 2 is `x1 = L1`, endpoint 3 is `x2 = 0` and endpoint 4
//! is `x2 = L2`. A condition is stored in the form `A Ψ + B Ψ' = 0` with
//! outgoing derivatives in `Ψ'`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{wrap_angle, Real};

/// Which closed path through the coupling-parameter space is followed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleKind {
    /// Six-region cycle through seven topologies.
    Long,
    /// Four-segment simplified cycle.
    Short,
}

impl CycleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CycleKind::Long => "long",
            CycleKind::Short => "short",
        }
    }
}

impl fmt::Display for CycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CycleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "long" => Ok(CycleKind::Long),
            "short" => Ok(CycleKind::Short),
            other => Err(Error::InvalidParameter(format!("unknown cycle kind `{other}`"))),
        }
    }
}

/// Cycle kind together with the two positive coupling scales.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleParams<T> {
    pub kind: CycleKind,
    pub t: T,
    pub s: T,
}

impl<T: Real> CycleParams<T> {
    pub fn new(kind: CycleKind, t: T, s: T) -> Result<Self> {
        let p = Self { kind, t, s };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > T::zero() && self.t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t must be positive, got {}", self.t)));
        }
        if !(self.s > T::zero() && self.s.is_finite()) {
            return Err(Error::InvalidParameter(format!("s must be positive, got {}", self.s)));
        }
        Ok(())
    }
}

/// Values of the five coupling functions `(a, b, b', c, d)` at one angle.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RampVector<T> {
    pub a: T,
    pub b: T,
    /// The primed `b` function coupling endpoints 3 and 4.
    pub bp: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> RampVector<T> {
    pub fn new(a: T, b: T, bp: T, c: T, d: T) -> Self {
        Self { a, b, bp, c, d }
    }

    pub fn as_array(&self) -> [T; 5] {
        [self.a, self.b, self.bp, self.c, self.d]
    }

    /// Range check plus the two exact implications `a ≠ 0 ⇒ c = 0` and
    /// `b, b' ≠ 0 ⇒ c = 1` required for self-adjointness.
    pub fn validate(&self) -> Result<()> {
        let names = ["a", "b", "bp", "c", "d"];
        for (name, v) in names.iter().zip(self.as_array()) {
            if !(v >= T::zero() && v <= T::one()) {
                return Err(Error::InvalidParameter(format!("ramp {name} = {v} outside [0, 1]")));
            }
        }
        if self.a != T::zero() && self.c != T::zero() {
            return Err(Error::InvalidParameter(format!(
                "a = {} is nonzero but c = {} is not 0",
                self.a, self.c
            )));
        }
        if (self.b != T::zero() || self.bp != T::zero()) && self.c != T::one() {
            return Err(Error::InvalidParameter(format!(
                "b = {} / bp = {} nonzero but c = {} is not 1",
                self.b, self.bp, self.c
            )));
        }
        Ok(())
    }
}

/// Which closed form is used for `b'` on the long cycle.
///
/// The printed closed form subtracts the absolute value and is non-positive;
/// [`BPrimeForm::Corrected`] adds it, giving a bump on `(2π/3, π)` with peak
/// 1 at `5π/6`. `Printed` exists only so validation can demonstrate the
/// failure.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BPrimeForm {
    #[default]
    Corrected,
    Printed,
}

/// Evaluates the coupling functions of `kind` at `theta` (reduced mod 2π).
pub fn eval_ramps<T: Real>(kind: CycleKind, theta: T) -> RampVector<T> {
    eval_ramps_with(kind, theta, BPrimeForm::Corrected)
}

pub fn eval_ramps_with<T: Real>(kind: CycleKind, theta: T, form: BPrimeForm) -> RampVector<T> {
    let r = wrap_angle(theta);
    match kind {
        CycleKind::Long => long_ramps(r, form),
        CycleKind::Short => short_ramps(r),
    }
}

// Support masks below use the same boundary constants for every function so
// that the exact implications survive rounding next to region boundaries.
fn long_ramps<T: Real>(r: T, form: BPrimeForm) -> RampVector<T> {
    let half = T::half();
    let sq3 = T::sqrt3();
    let third = T::PI() / T::lit(3.0);
    let (sin, cos) = r.sin_cos();

    let a = (cos - half) + (cos - half).abs();
    let b = (-cos - half) + (-cos - half).abs();
    let g = sin - sq3 * cos - sq3;
    let bp = match form {
        BPrimeForm::Corrected => (g + g.abs()) / (T::lit(4.0) - T::two() * sq3),
        BPrimeForm::Printed => (g - g.abs()) / (T::lit(4.0) - T::two() * sq3),
    };
    let sh = (r * half).sin().abs();
    let c = ((sq3 * half - half) + (sh - half).abs() - (sh - sq3 * half).abs()) / (sq3 - T::one());
    let u = sin.abs() - sin;
    let d = (u + sq3 - (u - sq3).abs()) / (T::two() * sq3);

    let in_a = r < third || r > T::lit(5.0) * third;
    let in_b = r > T::two() * third && r < T::lit(4.0) * third;
    let in_bp = r > T::two() * third && r < T::PI();
    let c_zero = r <= third || r >= T::lit(5.0) * third;
    let c_one = r >= T::two() * third && r <= T::lit(4.0) * third;
    let in_d = r > T::PI();

    let clamp = |x: T| x.max(T::zero()).min(T::one());
    RampVector {
        a: if in_a { clamp(a) } else { T::zero() },
        b: if in_b { clamp(b) } else { T::zero() },
        bp: match form {
            BPrimeForm::Corrected if in_bp => clamp(bp),
            BPrimeForm::Corrected => T::zero(),
            BPrimeForm::Printed => bp,
        },
        c: if c_zero {
            T::zero()
        } else if c_one {
            T::one()
        } else {
            clamp(c)
        },
        d: if in_d { clamp(d) } else { T::zero() },
    }
}

fn short_ramps<T: Real>(r: T) -> RampVector<T> {
    let half = T::half();
    let (sin, cos) = r.sin_cos();
    let q = T::FRAC_PI_2();
    let in_a = r < q || r > T::lit(3.0) * q;
    let in_c = r > q && r < T::lit(3.0) * q;
    let in_d = r > T::PI();
    let a = half * (cos + cos.abs());
    let c = half * (-cos + cos.abs());
    let d = half * (-sin + sin.abs());
    let clamp = |x: T| x.max(T::zero()).min(T::one());
    RampVector {
        a: if in_a { clamp(a) } else { T::zero() },
        b: T::zero(),
        bp: T::zero(),
        c: if in_c { clamp(c) } else { T::zero() },
        d: if in_d { clamp(d) } else { T::zero() },
    }
}

/// Vertex condition `A Ψ + B Ψ' = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexCondition<T> {
    pub a: Mat<T>,
    pub b: Mat<T>,
    /// Cycle angle the condition was built for (informational).
    pub theta: T,
}

impl<T: Real> VertexCondition<T> {
    pub fn new(a: Mat<T>, b: Mat<T>, theta: T) -> Result<Self> {
        if a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() {
            return Err(Error::InvalidParameter(format!(
                "condition matrices must be square and equal-sized, got {}x{} and {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        Ok(Self { a, b, theta })
    }

    /// Vertex degree.
    pub fn degree(&self) -> usize {
        self.a.rows()
    }
}

/// Assembles the vertex matrices from coupling values.
///
/// The coupling table reads `P Ψ' = Q Ψ`; it is stored as `B = P`, `A = -Q`.
pub fn build_condition<T: Real>(ramps: &RampVector<T>, params: &CycleParams<T>) -> Result<VertexCondition<T>> {
    params.validate()?;
    ramps.validate()?;
    let z = T::zero();
    let o = T::one();
    let RampVector { a, b, bp, c, d } = *ramps;
    let (t, s) = (params.t, params.s);

    let p = Mat::from_rows(&[
        [o, t * b, t * a, s * d],
        [z, o - c, z, t * a],
        [z, z, c, t * bp],
        [z, z, z, z],
    ]);
    let q = Mat::from_rows(&[
        [z, z, z, z],
        [-(t * b), c, z, z],
        [-(t * a), z, o - c, z],
        [-(s * d), -(t * a), -(t * bp), o],
    ]);
    Ok(VertexCondition { a: q.scale(-o), b: p, theta: T::zero() })
}

/// Builds the condition of cycle `params.kind` at angle `theta`.
pub fn condition_at<T: Real>(params: &CycleParams<T>, theta: T) -> Result<VertexCondition<T>> {
    let ramps = eval_ramps(params.kind, theta);
    let mut cond = build_condition(&ramps, params)?;
    cond.theta = theta;
    Ok(cond)
}

/// Outcome of [`check_self_adjoint`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfAdjointReport<T> {
    /// `max |A Bᵀ - B Aᵀ|`.
    pub asymmetry: T,
    /// Numerical rank of `(A|B)`.
    pub rank: usize,
    pub degree: usize,
    pub passed: bool,
}

/// Checks `A Bᵀ = B Aᵀ` and `rank(A|B) = n`; the rank threshold is `tol`
/// relative to the largest singular value of `(A|B)`.
pub fn check_self_adjoint<T: Real>(cond: &VertexCondition<T>, tol: T) -> SelfAdjointReport<T> {
    let abt = cond.a.matmul(&cond.b.transpose());
    let asymmetry = abt.sub(&abt.transpose()).max_abs();
    let rank = cond.a.hcat(&cond.b).numerical_rank(tol);
    let degree = cond.degree();
    SelfAdjointReport { asymmetry, rank, degree, passed: asymmetry <= tol && rank == degree }
}

/// Parameter-space segment of a cycle. Boundary angles belong to the lower
/// segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    I,
    II,
    III,
    IV,
    V,
    VI,
    S1,
    S2,
    S3,
    S4,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
            Region::V => "V",
            Region::VI => "VI",
            Region::S1 => "S1",
            Region::S2 => "S2",
            Region::S3 => "S3",
            Region::S4 => "S4",
        }
    }

    /// Angles separating the segments of `kind` inside `(0, 2π)`.
    pub fn boundaries(kind: CycleKind) -> Vec<f64> {
        use std::f64::consts::PI;
        match kind {
            CycleKind::Long => (1..6).map(|i| i as f64 * PI / 3.0).collect(),
            CycleKind::Short => (1..4).map(|i| i as f64 * PI / 2.0).collect(),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Region::I,
            "II" | "2" => Region::II,
            "III" | "3" => Region::III,
            "IV" | "4" => Region::IV,
            "V" | "5" => Region::V,
            "VI" | "6" => Region::VI,
            "S1" => Region::S1,
            "S2" => Region::S2,
            "S3" => Region::S3,
            "S4" => Region::S4,
            other => return Err(Error::InvalidParameter(format!("unknown region `{other}`"))),
        })
    }
}

pub fn region_of<T: Real>(kind: CycleKind, theta: T) -> Region {
    let r = wrap_angle(theta);
    match kind {
        CycleKind::Long => {
            let step = T::PI() / T::lit(3.0);
            const ORDER: [Region; 6] = [Region::I, Region::II, Region::III, Region::IV, Region::V, Region::VI];
            ORDER
                .iter()
                .enumerate()
                .find(|(i, _)| r <= T::from_usize(i + 1) * step)
                .map_or(Region::VI, |(_, reg)| *reg)
        }
        CycleKind::Short => {
            let step = T::FRAC_PI_2();
            const ORDER: [Region; 4] = [Region::S1, Region::S2, Region::S3, Region::S4];
            ORDER
                .iter()
                .enumerate()
                .find(|(i, _)| r <= T::from_usize(i + 1) * step)
                .map_or(Region::S4, |(_, reg)| *reg)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TopologyName {
    SingleRing,
    TwoLines,
    TwoRings,
    RingPlusLineJoined,
    SingleLine,
    FigureEight,
    LineAndRingDisjoint,
    Other,
}

impl TopologyName {
    pub fn as_str(self) -> &'static str {
        match self {
            TopologyName::SingleRing => "single-ring",
            TopologyName::TwoLines => "two-lines",
            TopologyName::TwoRings => "two-rings",
            TopologyName::RingPlusLineJoined => "ring-plus-line-joined",
            TopologyName::SingleLine => "single-line",
            TopologyName::FigureEight => "figure-eight",
            TopologyName::LineAndRingDisjoint => "line-and-ring-disjoint",
            TopologyName::Other => "other",
        }
    }
}

impl fmt::Display for TopologyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Instantaneous topology of the two-edge graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TopologyLabel {
    pub components: usize,
    /// First Betti number.
    pub loops: usize,
    pub name: TopologyName,
}

impl TopologyLabel {
    pub fn is_disconnected(&self) -> bool {
        self.components > 1
    }
}

pub const DEFAULT_COUPLING_TOL: f64 = 1e-10;

/// Endpoints (0-based) that the condition ties together, as a partition label
/// per endpoint.
pub fn endpoint_classes<T: Real>(cond: &VertexCondition<T>, tol: T) -> Vec<usize> {
    let n = cond.degree();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for row in 0..n {
        let touched: Vec<usize> = (0..n)
            .filter(|&j| cond.a[(row, j)].abs() > tol || cond.b[(row, j)].abs() > tol)
            .collect();
        for w in touched.windows(2) {
            let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

/// Topology of the quotient graph: edge 1 joins endpoints 1–2, edge 2 joins
/// 3–4, and endpoints coupled by a common row of `(A|B)` are identified.
pub fn classify_topology<T: Real>(cond: &VertexCondition<T>, tol: T) -> TopologyLabel {
    let class = endpoint_classes(cond, tol);
    let mut verts: Vec<usize> = class.clone();
    verts.sort_unstable();
    verts.dedup();
    let v = verts.len();
    let edges = [(class[0], class[1]), (class[2], class[3])];

    // Components via union-find over the quotient vertices.
    let idx = |x: usize| verts.iter().position(|&y| y == x).expect("class present");
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        r
    }
    for &(x, y) in &edges {
        let (rx, ry) = (find(&mut parent, idx(x)), find(&mut parent, idx(y)));
        if rx != ry {
            parent[rx] = ry;
        }
    }
    let components = (0..v).filter(|&i| find(&mut parent, i) == i).count();
    let loops = edges.len() + components - v;

    let mut degree = vec![0usize; v];
    for &(x, y) in &edges {
        degree[idx(x)] += 1;
        degree[idx(y)] += 1;
    }
    let dangling = degree.iter().any(|&d| d == 1);

    let name = match (components, loops) {
        (1, 0) => TopologyName::SingleLine,
        (1, 1) if dangling => TopologyName::RingPlusLineJoined,
        (1, 1) => TopologyName::SingleRing,
        (1, 2) => TopologyName::FigureEight,
        (2, 0) => TopologyName::TwoLines,
        (2, 1) => TopologyName::LineAndRingDisjoint,
        (2, 2) => TopologyName::TwoRings,
        _ => TopologyName::Other,
    };
    TopologyLabel { components, loops, name }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn long(theta: f64) -> RampVector<f64> {
        eval_ramps(CycleKind::Long, theta)
    }

    /// Piecewise closed forms of the long-cycle functions, written
    /// independently of the absolute-value expressions.
    fn long_piecewise(theta: f64) -> [f64; 5] {
        let r = theta.rem_euclid(2.0 * PI);
        let sq3 = 3f64.sqrt();
        let a = if r.cos() > 0.5 { 2.0 * r.cos() - 1.0 } else { 0.0 };
        let b = if r.cos() < -0.5 { -2.0 * r.cos() - 1.0 } else { 0.0 };
        let g = 2.0 * (r - PI / 3.0).sin() - sq3;
        let bp = if g > 0.0 { g / (2.0 - sq3) } else { 0.0 };
        let sh = (r / 2.0).sin().abs();
        let c = ((2.0 * sh - 1.0) / (sq3 - 1.0)).clamp(0.0, 1.0);
        let d = (2.0 * (-r.sin()).max(0.0) / sq3).min(1.0);
        [a, b, bp, c, d]
    }

    #[test]
    fn long_cycle_reference_points() {
        let r = long(0.0);
        assert_eq!(r.as_array(), [1.0, 0.0, 0.0, 0.0, 0.0]);

        let r = long(5.0 * PI / 6.0);
        assert_eq!(r.a, 0.0);
        assert!((r.b - (3f64.sqrt() - 1.0)).abs() < 1e-14);
        assert!((r.bp - 1.0).abs() < 1e-14);
        assert_eq!(r.c, 1.0);
        assert_eq!(r.d, 0.0);

        let r = long(PI / 2.0);
        assert!((r.c - (2f64.sqrt() - 1.0) / (3f64.sqrt() - 1.0)).abs() < 1e-14);
        assert_eq!(long(3.0 * PI / 2.0).d, 1.0);
    }

    #[test]
    fn short_cycle_reference_points() {
        let r = eval_ramps(CycleKind::Short, 3.0 * PI / 2.0);
        assert_eq!(r.as_array(), [0.0, 0.0, 0.0, 0.0, 1.0]);
        let r = eval_ramps(CycleKind::Short, PI);
        assert_eq!(r.c, 1.0);
        let r = eval_ramps(CycleKind::Short, 0.0);
        assert_eq!(r.a, 1.0);
    }

    #[test]
    fn long_ramps_agree_with_piecewise_forms() {
        for i in 0..=4000 {
            let th = 2.0 * PI * i as f64 / 4000.0;
            let got = long(th).as_array();
            let want = long_piecewise(th);
            for (g, w) in got.iter().zip(want) {
                assert!((g - w).abs() < 1e-13, "theta {th}: {got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn printed_b_prime_is_nonpositive() {
        let mut negative = 0;
        for i in 0..720 {
            let th = 2.0 * PI * i as f64 / 720.0;
            let r = eval_ramps_with(CycleKind::Long, th, BPrimeForm::Printed);
            assert!(r.bp <= 0.0);
            if r.bp < 0.0 {
                negative += 1;
            }
        }
        assert!(negative > 0);
        let at_peak = eval_ramps_with(CycleKind::Long, 5.0 * PI / 6.0, BPrimeForm::Printed);
        assert!(at_peak.bp.abs() < 1e-12);
    }

    #[test]
    fn ramp_constraints_exact_on_dense_grid() {
        for kind in [CycleKind::Long, CycleKind::Short] {
            for i in 0..20_000 {
                let th = 2.0 * PI * i as f64 / 20_000.0;
                eval_ramps(kind, th).validate().unwrap();
            }
            // boundary angles, including float neighbours
            let bounds = Region::boundaries(kind);
            for b in bounds {
                for th in [b, b.next_up_compat(), b.next_down_compat()] {
                    eval_ramps(kind, th).validate().unwrap();
                }
            }
        }
    }

    trait NextFloat {
        fn next_up_compat(self) -> Self;
        fn next_down_compat(self) -> Self;
    }
    impl NextFloat for f64 {
        fn next_up_compat(self) -> Self {
            f64::from_bits(self.to_bits() + 1)
        }
        fn next_down_compat(self) -> Self {
            f64::from_bits(self.to_bits() - 1)
        }
    }

    #[test]
    fn build_region_one_condition() {
        let p = CycleParams::new(CycleKind::Long, 0.3, 0.7).unwrap();
        let c = build_condition(&RampVector::new(1.0, 0.0, 0.0, 0.0, 0.0), &p).unwrap();
        let t = 0.3;
        let b = Mat::from_rows(&[[1.0, 0.0, t, 0.0], [0.0, 1.0, 0.0, t], [0.0; 4], [0.0; 4]]);
        let a = Mat::from_rows(&[[0.0; 4], [0.0; 4], [t, 0.0, -1.0, 0.0], [0.0, t, 0.0, -1.0]]);
        assert_eq!(c.b, b);
        assert_eq!(c.a, a);
    }

    #[test]
    fn c_equal_one_gives_neumann_dirichlet_pattern() {
        let p = CycleParams::new(CycleKind::Long, 0.5, 0.5).unwrap();
        let c = build_condition(&RampVector::new(0.0, 0.0, 0.0, 1.0, 0.0), &p).unwrap();
        // Row i of (A|B) only touches endpoint i: Ψ'1, Ψ2, Ψ'3, Ψ4.
        let expect_b = [1.0, 0.0, 1.0, 0.0];
        let expect_a = [0.0, -1.0, 0.0, -1.0];
        for i in 0..4 {
            for j in 0..4 {
                let (ea, eb) = if i == j { (expect_a[i], expect_b[i]) } else { (0.0, 0.0) };
                assert_eq!(c.a[(i, j)], ea);
                assert_eq!(c.b[(i, j)], eb);
            }
        }
    }

    #[test]
    fn conflicting_ramps_rejected() {
        let p = CycleParams::new(CycleKind::Long, 0.5, 0.5).unwrap();
        let err = build_condition(&RampVector::new(0.5, 0.0, 0.0, 0.5, 0.0), &p).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
        assert!(build_condition(&RampVector::new(0.0, 0.2, 0.0, 0.5, 0.0), &p).is_err());
        assert!(CycleParams::new(CycleKind::Long, 0.0, 1.0).is_err());
        assert!(CycleParams::new(CycleKind::Long, 1.0, -1.0).is_err());
    }

    #[test]
    fn self_adjoint_examples() {
        let id = VertexCondition::new(Mat::identity(4), Mat::identity(4), 0.0).unwrap();
        assert!(check_self_adjoint(&id, 1e-12).passed);

        let mut b = Mat::zeros(4, 4);
        b[(0, 2)] = 1.0;
        let bad = VertexCondition::new(Mat::zeros(4, 4), b, 0.0).unwrap();
        let rep = check_self_adjoint(&bad, 1e-12);
        assert!(!rep.passed);
        assert_eq!(rep.rank, 1);
    }

    #[test]
    fn regions() {
        assert_eq!(region_of(CycleKind::Long, PI / 4.0), Region::I);
        assert_eq!(region_of(CycleKind::Long, PI), Region::III);
        assert_eq!(region_of(CycleKind::Long, 0.0), Region::I);
        assert_eq!(region_of(CycleKind::Long, 2.0 * PI - 1e-9), Region::VI);
        assert_eq!(region_of(CycleKind::Short, 7.0 * PI / 4.0), Region::S4);
        assert_eq!(region_of(CycleKind::Short, PI / 2.0), Region::S1);
    }

    #[test]
    fn topology_of_each_long_region() {
        let p = CycleParams::new(CycleKind::Long, 0.1, 1.0).unwrap();
        let expect = [
            (Region::I, TopologyName::SingleRing, 1, 1),
            (Region::II, TopologyName::TwoLines, 2, 0),
            (Region::III, TopologyName::TwoRings, 2, 2),
            (Region::IV, TopologyName::RingPlusLineJoined, 1, 1),
            (Region::V, TopologyName::SingleLine, 1, 0),
            (Region::VI, TopologyName::FigureEight, 1, 2),
        ];
        for (i, (region, name, comp, loops)) in expect.into_iter().enumerate() {
            for frac in [0.2, 0.5, 0.8] {
                let th = (i as f64 + frac) * PI / 3.0;
                assert_eq!(region_of(CycleKind::Long, th), region);
                let cond = condition_at(&p, th).unwrap();
                let topo = classify_topology(&cond, DEFAULT_COUPLING_TOL);
                assert_eq!(topo, TopologyLabel { components: comp, loops, name }, "region {region}");
            }
        }
    }

    #[test]
    fn topology_at_region_three_four_juncture() {
        let p = CycleParams::new(CycleKind::Long, 0.1, 1.0).unwrap();
        let cond = condition_at(&p, PI).unwrap();
        assert_eq!(classify_topology(&cond, 1e-10).name, TopologyName::LineAndRingDisjoint);
    }

    #[test]
    fn single_precision_ramps() {
        let r: RampVector<f32> = eval_ramps(CycleKind::Long, 5.0 * std::f32::consts::PI / 6.0);
        assert!((r.bp - 1.0).abs() < 1e-5);
        r.validate().unwrap();
    }
}
