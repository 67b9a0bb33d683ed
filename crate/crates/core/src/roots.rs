//! Scalar root location on a uniform grid: sign-change bracketing refined by
//! bisection, plus golden-section search for roots that touch zero without
//! crossing it (even multiplicity) and for close pairs hidden inside one cell.

use crate::error::Result;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    /// The function changes sign across the root.
    SignChange,
    /// Found as a minimum of `|f|` without a sign change.
    Touch,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootCandidate<T> {
    pub x: T,
    pub kind: RootKind,
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions<T> {
    pub step: T,
    /// Bisection stops once the bracket is below `bisect_rel_tol * (1 + |x|)`.
    pub bisect_rel_tol: T,
    /// Minimum of `|f|` accepted as a touching root.
    pub touch_threshold: T,
}

/// Bisection on a bracket with `fa` the value at `a`; assumes a sign change.
pub fn bisect<T: Real>(f: &mut impl FnMut(T) -> Result<T>, mut a: T, mut b: T, mut fa: T, rel_tol: T) -> Result<T> {
    for _ in 0..200 {
        let mid = (a + b) * T::half();
        if (b - a).abs() <= rel_tol * (T::one() + mid.abs()) || mid == a || mid == b {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == T::zero() {
            return Ok(mid);
        }
        if (fm < T::zero()) == (fa < T::zero()) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok((a + b) * T::half())
}

/// Golden-section minimisation of `g` on `[a, b]`.
pub fn golden_min<T: Real>(g: &mut impl FnMut(T) -> Result<T>, mut a: T, mut b: T, rel_tol: T) -> Result<(T, T)> {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::half();
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut g1 = g(x1)?;
    let mut g2 = g(x2)?;
    for _ in 0..300 {
        if (b - a).abs() <= rel_tol * (T::one() + a.abs()) {
            break;
        }
        if g1 <= g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - inv_phi * (b - a);
            g1 = g(x1)?;
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + inv_phi * (b - a);
            g2 = g(x2)?;
        }
    }
    Ok(if g1 <= g2 { (x1, g1) } else { (x2, g2) })
}

/// Finds the roots of `f` on `[lo, hi]`.
///
/// `sharp` is a non-negative function vanishing linearly at the roots of
/// `f` (typically a smallest singular value); it is used to pin down touching
/// roots, where `|f|` is quadratic and golden-section search on it alone
/// only reaches `sqrt(eps)` accuracy.
pub fn scan_roots<T: Real>(
    f: &mut impl FnMut(T) -> Result<T>,
    sharp: &mut impl FnMut(T) -> Result<T>,
    lo: T,
    hi: T,
    opts: &ScanOptions<T>,
) -> Result<Vec<RootCandidate<T>>> {
    let h = opts.step;
    let n = ((hi - lo) / h).ceil().to_f64_lossy().max(1.0) as usize;
    let xs: Vec<T> = (0..=n).map(|i| (lo + T::from_usize(i) * h).min(hi)).collect();
    let fs: Vec<T> = xs.iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let mut out = Vec::new();

    for i in 0..n {
        let (x0, x1, f0, f1) = (xs[i], xs[i + 1], fs[i], fs[i + 1]);
        if f0 == T::zero() {
            if i > 0 {
                out.push(RootCandidate { x: x0, kind: RootKind::SignChange });
            }
            continue;
        }
        if f1 != T::zero() && (f0 < T::zero()) != (f1 < T::zero()) {
            let x = bisect(f, x0, x1, f0, opts.bisect_rel_tol)?;
            out.push(RootCandidate { x, kind: RootKind::SignChange });
        }
    }
    if fs[n] == T::zero() {
        out.push(RootCandidate { x: xs[n], kind: RootKind::SignChange });
    }

    // Interior local minima of |f| between samples of one sign.
    for i in 1..n {
        let (fm, f0, fp) = (fs[i - 1], fs[i], fs[i + 1]);
        if f0 == T::zero() || fm == T::zero() || fp == T::zero() {
            continue;
        }
        let same = (fm < T::zero()) == (f0 < T::zero()) && (f0 < T::zero()) == (fp < T::zero());
        if !same || !(f0.abs() < fm.abs() && f0.abs() <= fp.abs()) {
            continue;
        }
        let sign = f0.signum();
        let (a, b) = (xs[i - 1], xs[i + 1]);
        let (xmin, gmin) = golden_min(&mut |x| f(x).map(|v| sign * v), a, b, opts.bisect_rel_tol)?;
        if gmin < T::zero() {
            // Two simple roots inside the window.
            let fa = f(a)?;
            let r1 = bisect(f, a, xmin, fa, opts.bisect_rel_tol)?;
            let r2 = bisect(f, xmin, b, sign * gmin, opts.bisect_rel_tol)?;
            out.push(RootCandidate { x: r1, kind: RootKind::SignChange });
            out.push(RootCandidate { x: r2, kind: RootKind::SignChange });
        } else if gmin <= opts.touch_threshold {
            let w = (b - a) * T::lit(0.25);
            let lo_w = (xmin - w).max(a);
            let hi_w = (xmin + w).min(b);
            let (x, _) = golden_min(sharp, lo_w, hi_w, opts.bisect_rel_tol)?;
            out.push(RootCandidate { x, kind: RootKind::Touch });
        }
    }

    out.sort_by(|p, q| p.x.partial_cmp(&q.x).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(step: f64) -> ScanOptions<f64> {
        ScanOptions { step, bisect_rel_tol: 1e-14, touch_threshold: 1e-8 }
    }

    #[test]
    fn simple_roots_of_sine() {
        let mut f = |x: f64| Ok(x.sin());
        let mut g = |x: f64| Ok(x.sin().abs());
        let r = scan_roots(&mut f, &mut g, 0.5, 10.0, &opts(0.01)).unwrap();
        let xs: Vec<f64> = r.iter().map(|c| c.x).collect();
        assert_eq!(xs.len(), 3);
        for (x, n) in xs.iter().zip(1..) {
            assert!((x - n as f64 * std::f64::consts::PI).abs() < 1e-12);
        }
    }

    #[test]
    fn double_root_found_by_touch() {
        let mut f = |x: f64| Ok((x - 2.345_678_9).powi(2) * (1.0 + x));
        let mut g = |x: f64| Ok((x - 2.345_678_9).abs());
        let r = scan_roots(&mut f, &mut g, 0.0, 5.0, &opts(0.013)).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].kind, RootKind::Touch);
        assert!((r[0].x - 2.345_678_9).abs() < 1e-12);
    }

    #[test]
    fn close_pair_inside_one_cell() {
        let (p, q) = (1.0005, 1.0011);
        let mut f = |x: f64| Ok((x - p) * (x - q));
        let mut g = |x: f64| Ok(((x - p) * (x - q)).abs());
        let r = scan_roots(&mut f, &mut g, 0.0, 2.0, &opts(0.01)).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].x - p).abs() < 1e-12 && (r[1].x - q).abs() < 1e-12);
    }

    #[test]
    fn close_pair_between_negative_samples() {
        let (p, q) = (1.0005, 1.0011);
        let mut f = |x: f64| Ok(-(x - p) * (x - q));
        let mut g = |x: f64| Ok(((x - p) * (x - q)).abs());
        let r = scan_roots(&mut f, &mut g, 0.0, 2.0, &opts(0.01)).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].x - p).abs() < 1e-12 && (r[1].x - q).abs() < 1e-12);
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, v) = golden_min(&mut |x: f64| Ok((x - 0.3).powi(2) + 1.0), -1.0, 2.0, 1e-12).unwrap();
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-12);
    }
}
