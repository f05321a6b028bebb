//! Symmetric tridiagonal eigenvalues by Sturm counts and bisection.

use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i+1`.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> SymTridiagonal {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length");
        SymTridiagonal { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `e`: the count of negative pivots
    /// of the LDLᵀ factorization of `T - e I`.
    pub fn count_below(&self, e: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - e - b2 / d;
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + e.abs()).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin bounds on the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue, bisected inside `[lo, hi]`.
    fn kth(&self, k: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 1e-10 * mid.abs().max(1.0) || mid == lo || mid == hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// All eigenvalues below `e_max`, ascending. Brackets are bisected in parallel.
    pub fn eigenvalues_below(&self, e_max: f64) -> Vec<f64> {
        if self.is_empty() {
            return Vec::new();
        }
        let (lo, hi) = self.bounds();
        let top = e_max.min(hi + 1.0);
        let n = self.count_below(top);
        (0..n).into_par_iter().map(|k| self.kth(k, lo - 1.0, top)).collect()
    }

    /// Lowest `count` eigenvalues.
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        let (lo, hi) = self.bounds();
        let count = count.min(self.len());
        (0..count).into_par_iter().map(|k| self.kth(k, lo - 1.0, hi + 1.0)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_matrix_against_closed_form() {
        // tridiag(-1, 2, -1) of size n: 2 - 2cos(kπ/(n+1)).
        let n = 12;
        let t = SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]);
        let ev = t.eigenvalues_below(10.0);
        assert_eq!(ev.len(), n);
        for (k, e) in ev.iter().enumerate() {
            let want = 2.0 - 2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((e - want).abs() < 1e-9);
        }
    }

    #[test]
    fn count_is_monotone_and_steps_by_one() {
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 1.0 + 0.5 * (i as f64 * 0.11).cos()).collect();
        let t = SymTridiagonal::new(diag, off);
        let ev = t.lowest(n);
        let mut prev = 0;
        for i in 0..400 {
            let e = -8.0 + 16.0 * i as f64 / 400.0;
            let c = t.count_below(e);
            assert!(c >= prev);
            prev = c;
        }
        for e in ev {
            let d = 1e-7 * e.abs().max(1.0);
            assert_eq!(t.count_below(e + d), t.count_below(e - d) + 1);
        }
    }
}
