//! Minimum-cost bipartite assignment (Hungarian method with potentials).

use crate::scalar::Real;

/// Solves the rectangular assignment problem for `cost` with `rows <= cols`.
///
/// Returns, for every row, the column it is assigned to.
pub fn min_cost_assignment<T: Real>(cost: &[Vec<T>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let m = cost[0].len();
    assert!(n <= m, "assignment needs rows <= cols ({n} > {m})");
    let inf = T::infinity();
    // 1-based arrays as in the classical formulation; index 0 is a sentinel.
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] = u[p[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    minv[j] = minv[j] - delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0usize; n];
    for j in 1..=m {
        if p[j] != 0 {
            out[p[j] - 1] = j - 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(cost: &[Vec<f64>], a: &[usize]) -> f64 {
        a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum()
    }

    fn brute(cost: &[Vec<f64>]) -> f64 {
        let n = cost.len();
        let m = cost[0].len();
        let mut best = f64::INFINITY;
        let mut used = vec![false; m];
        fn rec(i: usize, n: usize, cost: &[Vec<f64>], used: &mut [bool], acc: f64, best: &mut f64) {
            if i == n {
                *best = best.min(acc);
                return;
            }
            for j in 0..used.len() {
                if !used[j] {
                    used[j] = true;
                    rec(i + 1, n, cost, used, acc + cost[i][j], best);
                    used[j] = false;
                }
            }
        }
        rec(0, n, cost, &mut used, 0.0, &mut best);
        best
    }

    #[test]
    fn matches_brute_force() {
        let mut seed = 12345u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) as f64 / (1u64 << 31) as f64
        };
        for n in 1..6 {
            for extra in 0..3 {
                let cost: Vec<Vec<f64>> = (0..n).map(|_| (0..n + extra).map(|_| rnd()).collect()).collect();
                let a = min_cost_assignment(&cost);
                let mut seen = a.clone();
                seen.sort_unstable();
                seen.dedup();
                assert_eq!(seen.len(), n);
                assert!((total(&cost, &a) - brute(&cost)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_for_diagonal_dominant() {
        let cost = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]];
        assert_eq!(min_cost_assignment(&cost), vec![0, 1, 2]);
    }
}
