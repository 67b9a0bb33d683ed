//! Secular equation of the two-loop graph and its positive roots.
//!
//! On edge `i` the wavefunction is `ψ_i(x) = α_i sin kx + β_i cos kx`, so the
//! boundary vectors are `Ψ = U(k) x` and `Ψ' = k V(k) x` with
//! `x = (α1, β1, α2, β2)`. Eigenvalues `k > 0` are the zeros of
//! `det(A U + k B V)`.
//!
//! Root finding works with the equivalent regular form obtained from the
//! basis `sin(kx)/k, cos(kx)`: its matrix equals `(A U + k B V)·diag(1/k, 1,
//! 1/k, 1)`, so the determinants differ by the positive factor `k²` for
//! `k > 0`, while at `k = 0` it reduces to the linear ansatz `ψ = αx + β`.

use crate::cycle::VertexCondition;
use crate::error::{Error, Result};
use crate::linalg::{dot, Mat};
use crate::roots::{scan_roots, RootKind, ScanOptions};
use crate::scalar::Real;

/// Edge lengths of the two loops.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geometry<T> {
    pub l1: T,
    pub l2: T,
}

/// Irrational length ratios used for the reference runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetalMean {
    Golden,
    Silver,
    Bronze,
}

impl MetalMean {
    pub const ALL: [MetalMean; 3] = [MetalMean::Golden, MetalMean::Silver, MetalMean::Bronze];

    pub fn ratio<T: Real>(self) -> T {
        match self {
            MetalMean::Golden => (T::one() + T::lit(5.0).sqrt()) * T::half(),
            MetalMean::Silver => T::one() + T::two().sqrt(),
            MetalMean::Bronze => (T::lit(3.0) + T::lit(13.0).sqrt()) * T::half(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MetalMean::Golden => "golden",
            MetalMean::Silver => "silver",
            MetalMean::Bronze => "bronze",
        }
    }
}

impl<T: Real> Geometry<T> {
    pub fn new(l1: T, l2: T) -> Result<Self> {
        if !(l1 > T::zero() && l2 > T::zero() && l1.is_finite() && l2.is_finite()) {
            return Err(Error::InvalidParameter(format!("edge lengths must be positive, got {l1}, {l2}")));
        }
        Ok(Self { l1, l2 })
    }

    /// Lengths with `l1 / l2 = ratio` and `l1 + l2 = total`.
    pub fn from_ratio(ratio: T, total: T) -> Result<Self> {
        if !(ratio > T::zero() && total > T::zero()) {
            return Err(Error::InvalidParameter(format!("ratio and total length must be positive, got {ratio}, {total}")));
        }
        let l1 = total * ratio / (T::one() + ratio);
        Self::new(l1, total - l1)
    }

    pub fn metal(mean: MetalMean) -> Self {
        Self::from_ratio(mean.ratio(), T::one()).expect("metal means are positive")
    }

    pub fn total(&self) -> T {
        self.l1 + self.l2
    }

    /// Default k-grid step, `min(L1, L2) / 50`.
    pub fn default_step(&self) -> T {
        self.l1.min(self.l2) / T::lit(50.0)
    }
}

/// Amplitudes of the sine/cosine basis on each edge. For a `k = 0` mode the
/// basis is `(x, 1)` instead.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EdgeCoefficients<T> {
    pub alpha1: T,
    pub beta1: T,
    pub alpha2: T,
    pub beta2: T,
}

impl<T: Real> EdgeCoefficients<T> {
    fn from_slice(x: &[T]) -> Self {
        Self { alpha1: x[0], beta1: x[1], alpha2: x[2], beta2: x[3] }
    }

    fn to_array(self) -> [T; 4] {
        [self.alpha1, self.beta1, self.alpha2, self.beta2]
    }
}

/// One eigenvalue `k²` of the graph Laplacian, reported by its wavenumber.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenvalueRecord<T> {
    pub k: T,
    pub multiplicity: usize,
    /// Fraction of the squared norm carried by edge 1 (averaged over the
    /// eigenspace for degenerate levels).
    pub weight1: T,
}

impl<T: Real> EigenvalueRecord<T> {
    pub fn weight2(&self) -> T {
        T::one() - self.weight1
    }
}

/// Two accepted roots closer than three grid steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolutionWarning<T> {
    pub k_lo: T,
    pub k_hi: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    pub levels: Vec<EigenvalueRecord<T>>,
    pub warnings: Vec<ResolutionWarning<T>>,
}

impl<T: Real> Spectrum<T> {
    /// Wavenumbers with each level repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<T> {
        self.levels.iter().flat_map(|r| std::iter::repeat(r.k).take(r.multiplicity)).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SpectrumOptions<T> {
    /// Grid step; `None` selects [`Geometry::default_step`].
    pub step: Option<T>,
    pub bisect_rel_tol: T,
    /// Acceptance threshold for `|f|` minima of the row-normalised determinant.
    pub touch_threshold: T,
    /// Singular values below this fraction of the largest count as zero.
    pub rank_rel_tol: T,
    pub include_zero_mode: bool,
}

impl<T: Real> Default for SpectrumOptions<T> {
    fn default() -> Self {
        Self {
            step: None,
            bisect_rel_tol: T::tol_floor(1e-12),
            touch_threshold: T::tol_floor(1e-8),
            rank_rel_tol: T::tol_floor(1e-8),
            include_zero_mode: true,
        }
    }
}

/// `U(k)` and `V(k)` with `Ψ = U x` and `Ψ' = k V x`.
pub fn trig_matrices<T: Real>(geom: &Geometry<T>, k: T) -> Result<(Mat<T>, Mat<T>)> {
    if !(k > T::zero()) {
        return Err(Error::NonPositiveWavenumber(k.to_f64_lossy()));
    }
    let z = T::zero();
    let o = T::one();
    let (s1, c1) = (k * geom.l1).sin_cos();
    let (s2, c2) = (k * geom.l2).sin_cos();
    let u = Mat::from_rows(&[[z, o, z, z], [s1, c1, z, z], [z, z, z, o], [z, z, s2, c2]]);
    let v = Mat::from_rows(&[[o, z, z, z], [-c1, s1, z, z], [z, z, o, z], [z, z, -c2, s2]]);
    Ok((u, v))
}

/// `M(k) = A U(k) + k B V(k)`, not normalised.
pub fn secular_matrix<T: Real>(cond: &VertexCondition<T>, geom: &Geometry<T>, k: T) -> Result<Mat<T>> {
    let (u, v) = trig_matrices(geom, k)?;
    Ok(cond.a.matmul(&u).add(&cond.b.matmul(&v).scale(k)))
}

/// `sin(kL)/k` continued to `L` at `k = 0`.
fn sinc_len<T: Real>(k: T, l: T) -> T {
    let x = k * l;
    if x.abs() < T::lit(1e-4) {
        let x2 = x * x;
        l * (T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0))
    } else {
        x.sin() / k
    }
}

/// Secular matrix in the regular basis `(sin(kx)/k, cos kx)`, valid for
/// every `k ≥ 0`.
pub fn regular_matrix<T: Real>(cond: &VertexCondition<T>, geom: &Geometry<T>, k: T) -> Mat<T> {
    let z = T::zero();
    let o = T::one();
    let (c1, c2) = ((k * geom.l1).cos(), (k * geom.l2).cos());
    let (q1, q2) = (sinc_len(k, geom.l1), sinc_len(k, geom.l2));
    // k·sin(kL) = k² · sinc_len
    let u = Mat::from_rows(&[[z, o, z, z], [q1, c1, z, z], [z, z, z, o], [z, z, q2, c2]]);
    let v = Mat::from_rows(&[
        [o, z, z, z],
        [-c1, k * k * q1, z, z],
        [z, z, o, z],
        [z, z, -c2, k * k * q2],
    ]);
    cond.a.matmul(&u).add(&cond.b.matmul(&v))
}

/// Matrix of the linear ansatz `ψ_i = α_i x + β_i` (the `k = 0` problem).
pub fn zero_mode_matrix<T: Real>(cond: &VertexCondition<T>, geom: &Geometry<T>) -> Mat<T> {
    let z = T::zero();
    let o = T::one();
    // Ψ = (β1, α1 L1 + β1, β2, α2 L2 + β2); Ψ' = (α1, -α1, α2, -α2).
    let u0 = Mat::from_rows(&[[z, o, z, z], [geom.l1, o, z, z], [z, z, z, o], [z, z, geom.l2, o]]);
    let v0 = Mat::from_rows(&[[o, z, z, z], [-o, z, z, z], [z, z, o, z], [z, z, -o, z]]);
    cond.a.matmul(&u0).add(&cond.b.matmul(&v0))
}

/// Determinant of the row-normalised secular matrix.
///
/// Zero exactly where `det(A U + k B V)` vanishes and of the same sign; the
/// two differ by a positive factor.
pub fn secular_value<T: Real>(cond: &VertexCondition<T>, geom: &Geometry<T>, k: T) -> Result<T> {
    if !(k > T::zero()) {
        return Err(Error::NonPositiveWavenumber(k.to_f64_lossy()));
    }
    regular_value(cond, geom, k)
}

fn regular_value<T: Real>(cond: &VertexCondition<T>, geom: &Geometry<T>, k: T) -> Result<T> {
    Ok(normalize_checked(regular_matrix(cond, geom, k), k)?.determinant())
}

fn normalize_checked<T: Real>(mut m: Mat<T>, k: T) -> Result<Mat<T>> {
    let floor = T::min_positive_value().sqrt();
    let bad = m.normalize_rows(floor);
    if let Some(&row) = bad.first() {
        return Err(Error::DegenerateRow { row, k: k.to_f64_lossy() });
    }
    Ok(m)
}

/// Relative smallest singular value `σ_min / σ_max` of the row-normalised
/// regular matrix.
fn relative_sigma_min<T: Real>(cond: &VertexCondition<T>, geom: &Geometry<T>, k: T) -> Result<T> {
    let svd = normalize_checked(regular_matrix(cond, geom, k), k)?.svd();
    Ok(svd.smallest() / svd.largest())
}

/// Nullity of the secular matrix at `k` (`k = 0` uses the linear ansatz).
pub fn nullity<T: Real>(cond: &VertexCondition<T>, geom: &Geometry<T>, k: T, rank_rel_tol: T) -> Result<usize> {
    let m = if k == T::zero() { zero_mode_matrix(cond, geom) } else { regular_matrix(cond, geom, k) };
    let m = normalize_checked(m, k)?;
    Ok(m.cols() - m.numerical_rank(rank_rel_tol))
}

/// Whether `k = 0` is an eigenvalue, decided on the linear ansatz.
pub fn zero_mode_present<T: Real>(cond: &VertexCondition<T>, geom: &Geometry<T>) -> bool {
    nullity(cond, geom, T::zero(), T::tol_floor(1e-8)).map_or(false, |n| n > 0)
}

/// All eigen-wavenumbers in `[0, k_max]`, ascending.
pub fn find_spectrum<T: Real>(
    cond: &VertexCondition<T>,
    geom: &Geometry<T>,
    k_max: T,
    opts: &SpectrumOptions<T>,
) -> Result<Spectrum<T>> {
    if !(k_max > T::zero()) {
        return Err(Error::InvalidParameter(format!("k_max must be positive, got {k_max}")));
    }
    let h = opts.step.unwrap_or_else(|| geom.default_step());
    let zero_nullity = nullity(cond, geom, T::zero(), opts.rank_rel_tol)?;
    let lo = if zero_nullity > 0 { h } else { T::zero() };

    let scan = ScanOptions { step: h, bisect_rel_tol: opts.bisect_rel_tol, touch_threshold: opts.touch_threshold };
    let candidates = if lo < k_max {
        scan_roots(
            &mut |k| regular_value(cond, geom, k),
            &mut |k| relative_sigma_min(cond, geom, k),
            lo,
            k_max,
            &scan,
        )?
    } else {
        Vec::new()
    };

    let mut levels: Vec<EigenvalueRecord<T>> = Vec::new();
    if zero_nullity > 0 && opts.include_zero_mode {
        let (_, w) = eigenvector_with(cond, geom, T::zero(), opts.rank_rel_tol)?;
        levels.push(EigenvalueRecord { k: T::zero(), multiplicity: zero_nullity, weight1: w });
    }

    // Merge numerically coincident candidates.
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
        let null = nullity(cond, geom, k, opts.rank_rel_tol)?;
        let multiplicity = match (kind, count) {
            (RootKind::Touch, _) if null < 2 => continue,
            (RootKind::Touch, _) => 2 * (null / 2),
            (RootKind::SignChange, c) if c > 1 => null.max(c),
            (RootKind::SignChange, _) if null == 0 => 1,
            (RootKind::SignChange, _) if null % 2 == 0 => null - 1,
            (RootKind::SignChange, _) => null,
        };
        let (_, w) = eigenvector_with(cond, geom, k, opts.rank_rel_tol)?;
        levels.push(EigenvalueRecord { k, multiplicity, weight1: w });
    }

    let mut warnings = Vec::new();
    for w in levels.windows(2) {
        if w[1].k - w[0].k < T::lit(3.0) * h && w[0].k > T::zero() {
            warnings.push(ResolutionWarning { k_lo: w[0].k, k_hi: w[1].k });
        }
    }
    Ok(Spectrum { levels, warnings })
}

/// Squared-norm integrals `∫_0^L f g dx` for the basis pair on one edge:
/// returns `(∫s², ∫c², ∫sc)` where `s, c` are `sin kx, cos kx`, or `x, 1` when
/// `k = 0`.
fn basis_integrals<T: Real>(k: T, l: T) -> (T, T, T) {
    if k == T::zero() {
        return (l * l * l / T::lit(3.0), l, l * l * T::half());
    }
    let s2 = (T::two() * k * l).sin() / (T::lit(4.0) * k);
    let sk = (k * l).sin();
    (l * T::half() - s2, l * T::half() + s2, sk * sk / (T::two() * k))
}

fn edge_inner<T: Real>(x: &[T; 4], y: &[T; 4], k: T, geom: &Geometry<T>) -> (T, T) {
    let (ss1, cc1, sc1) = basis_integrals(k, geom.l1);
    let (ss2, cc2, sc2) = basis_integrals(k, geom.l2);
    let e1 = x[0] * y[0] * ss1 + x[1] * y[1] * cc1 + (x[0] * y[1] + x[1] * y[0]) * sc1;
    let e2 = x[2] * y[2] * ss2 + x[3] * y[3] * cc2 + (x[2] * y[3] + x[3] * y[2]) * sc2;
    (e1, e2)
}

/// L²-norm of a coefficient vector split by edge.
pub fn edge_norms<T: Real>(coeffs: &EdgeCoefficients<T>, k: T, geom: &Geometry<T>) -> (T, T) {
    let x = coeffs.to_array();
    edge_inner(&x, &x, k, geom)
}

/// Orthonormal (in the graph L² norm) eigenbasis at the root `k` together
/// with the edge-1 weight averaged over the eigenspace.
pub fn eigenvector<T: Real>(cond: &VertexCondition<T>, geom: &Geometry<T>, k: T) -> Result<(Vec<EdgeCoefficients<T>>, T)> {
    eigenvector_with(cond, geom, k, T::tol_floor(1e-8))
}

fn eigenvector_with<T: Real>(
    cond: &VertexCondition<T>,
    geom: &Geometry<T>,
    k: T,
    rank_rel_tol: T,
) -> Result<(Vec<EdgeCoefficients<T>>, T)> {
    if k < T::zero() {
        return Err(Error::NonPositiveWavenumber(k.to_f64_lossy()));
    }
    let m = if k == T::zero() { zero_mode_matrix(cond, geom) } else { secular_matrix(cond, geom, k)? };
    let svd = normalize_checked(m, k)?.svd();
    let null = svd.null_space(rank_rel_tol);
    if null.is_empty() {
        return Err(Error::NotARoot {
            k: k.to_f64_lossy(),
            sigma: (svd.smallest() / svd.largest()).to_f64_lossy(),
        });
    }

    // Gram–Schmidt in the L² inner product.
    let mut basis: Vec<[T; 4]> = Vec::new();
    for v in null {
        let mut x = [v[0], v[1], v[2], v[3]];
        for _pass in 0..2 {
            for b in &basis {
                let (p1, p2) = edge_inner(&x, b, k, geom);
                let p = p1 + p2;
                for i in 0..4 {
                    x[i] = x[i] - p * b[i];
                }
            }
        }
        let (n1, n2) = edge_inner(&x, &x, k, geom);
        let n = (n1 + n2).sqrt();
        if n > T::zero() {
            basis.push(x.map(|c| c / n));
        }
    }
    let m = T::from_usize(basis.len());
    let weight1 = basis.iter().map(|b| edge_inner(b, b, k, geom).0).sum::<T>() / m;
    let weight1 = weight1.max(T::zero()).min(T::one());
    Ok((basis.iter().map(|b| EdgeCoefficients::from_slice(b)).collect(), weight1))
}

/// Residual `|M(k) x|` of a coefficient vector (diagnostic).
pub fn residual<T: Real>(cond: &VertexCondition<T>, geom: &Geometry<T>, k: T, coeffs: &EdgeCoefficients<T>) -> Result<T> {
    let m = secular_matrix(cond, geom, k)?;
    let x = coeffs.to_array();
    let r = m.mul_vec(&x);
    Ok(dot(&r, &r).sqrt())
}

/// Sign-change brackets of the secular determinant continued to imaginary
/// wavenumber `k = iκ` on `(0, kappa_max]`. Each bracket signals a negative
/// eigenvalue `-κ²`.
pub fn hyperbolic_diagnostic<T: Real>(cond: &VertexCondition<T>, geom: &Geometry<T>, kappa_max: T) -> Vec<(T, T)> {
    let h = geom.default_step();
    let value = |kappa: T| -> Option<T> {
        // ψ = α sinh κx / κ + β cosh κx; outgoing derivatives at x = L carry a minus sign.
        let z = T::zero();
        let o = T::one();
        let sh = |l: T| if kappa * l < T::lit(1e-4) { l } else { (kappa * l).sinh() / kappa };
        let (ch1, ch2) = ((kappa * geom.l1).cosh(), (kappa * geom.l2).cosh());
        let (q1, q2) = (sh(geom.l1), sh(geom.l2));
        let u = Mat::from_rows(&[[z, o, z, z], [q1, ch1, z, z], [z, z, z, o], [z, z, q2, ch2]]);
        let v = Mat::from_rows(&[
            [o, z, z, z],
            [-ch1, -kappa * kappa * q1, z, z],
            [z, z, o, z],
            [z, z, -ch2, -kappa * kappa * q2],
        ]);
        let m = cond.a.matmul(&u).add(&cond.b.matmul(&v));
        normalize_checked(m, kappa).ok().map(|m| m.determinant())
    };
    let n = (kappa_max / h).ceil().to_f64_lossy().max(1.0) as usize;
    let mut out = Vec::new();
    let mut prev: Option<(T, T)> = None;
    for i in 1..=n {
        let kappa = (T::from_usize(i) * h).min(kappa_max);
        let Some(f) = value(kappa) else { continue };
        if let Some((kp, fp)) = prev {
            if (fp < T::zero()) != (f < T::zero()) && fp != T::zero() {
                out.push((kp, kappa));
            }
        }
        prev = Some((kappa, f));
    }
    out
}
