//! Shared numerical utilities: quadrature rules, compensated summation and
//! normal-distribution helpers used across the toolkit.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Neumaier compensated summation. Keeps the result independent of harmless
/// reassociation to well below 1e-10 relative.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Sample mean.
pub fn mean(xs: &[f64]) -> f64 {
    compensated_sum(xs) / xs.len() as f64
}

/// Sample mean and standard error of the mean (unbiased variance, n-1).
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = mean(xs);
    let mut acc = KahanSum::new();
    for &x in xs {
        let d = x - m;
        acc.add(d * d);
    }
    let var = acc.value() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Unbiased sample variance.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let m = mean(xs);
    let mut acc = KahanSum::new();
    for &x in xs {
        let d = x - m;
        acc.add(d * d);
    }
    acc.value() / (n - 1.0)
}

type GlTable = HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>;

fn gl_cache() -> &'static Mutex<GlTable> {
    static CACHE: OnceLock<Mutex<GlTable>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Legendre nodes and weights on [-1, 1], cached per order.
///
/// Newton iteration on the Legendre recurrence; accurate to machine
/// precision for the orders used here (<= 256).
pub fn gauss_legendre(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    assert!(n >= 1, "quadrature order must be positive");
    if let Some(hit) = gl_cache().lock().unwrap().get(&n) {
        return hit.clone();
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for k in 0..m {
        let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let entry = Arc::new((nodes, weights));
    gl_cache().lock().unwrap().insert(n, entry.clone());
    entry
}

/// Gauss–Legendre integral of `f` over [a, b] with `n` nodes.
pub fn gl_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let rule = gauss_legendre(n);
    let (nodes, weights) = (&rule.0, &rule.1);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = KahanSum::new();
    for (x, w) in nodes.iter().zip(weights) {
        acc.add(w * f(mid + half * x));
    }
    half * acc.value()
}

/// Tanh-sinh (double-exponential) quadrature over (a, b).
///
/// Robust to integrable endpoint singularities; nodes that collapse onto an
/// endpoint in floating point are skipped, which is safe because the
/// double-exponential weight decay dominates any integrable singularity.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let h = 1.0 / 16.0;
    let t_max = 4.5;
    let steps = (t_max / h) as i64;
    let mut acc = KahanSum::new();
    for i in -steps..=steps {
        let t = i as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let x = mid + half * u.tanh();
        if x <= a || x >= b {
            continue;
        }
        let sech = 1.0 / u.cosh();
        let w = 0.5 * PI * t.cosh() * sech * sech;
        let v = f(x) * w;
        if v.is_finite() {
            acc.add(v);
        }
    }
    half * h * acc.value()
}

/// Trigamma function psi_1(x) for x > 0 via recurrence plus asymptotic series.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 8.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // psi_1(x) ~ 1/x + 1/(2x^2) + 1/(6x^3) - 1/(30x^5) + 1/(42x^7)
    acc + inv * (1.0 + inv * (0.5 + inv * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 / 42.0))))
}

/// E[sqrt(chi^2_m / m)] for a chi-square with m degrees of freedom; the
/// small-sample mean factor of a root-mean-square estimator over m Gaussians.
pub fn chi_mean_factor(m: usize) -> f64 {
    let mf = m as f64;
    ((2.0 / mf).sqrt() * (libm::lgamma(0.5 * (mf + 1.0)) - libm::lgamma(0.5 * mf)).exp())
        .min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_five_point_nodes_match_reference() {
        // Classical 5-point values.
        let rule = gauss_legendre(5);
        assert_relative_eq!(rule.0[4], 0.906179845938664, epsilon = 1e-12);
        assert_relative_eq!(rule.0[3], 0.538469310105683, epsilon = 1e-12);
        assert_relative_eq!(rule.0[2], 0.0, epsilon = 1e-15);
        assert_relative_eq!(rule.1[2], 128.0 / 225.0, epsilon = 1e-12);
    }

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // x^8 over [0,2] = 2^9/9
        let v = gl_integrate(|x| x.powi(8), 0.0, 2.0, 5);
        assert_relative_eq!(v, 512.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2
        let v = tanh_sinh(|x| x.powf(-0.5), 0.0, 1.0);
        assert_relative_eq!(v, 2.0, epsilon = 1e-10);
        // int_0^1 ln(x) dx = -1
        let v = tanh_sinh(|x| x.ln(), 0.0, 1.0);
        assert_relative_eq!(v, -1.0, epsilon = 1e-10);
    }

    #[test]
    fn norm_cdf_reference_points() {
        assert_relative_eq!(norm_cdf(0.0), 0.5, epsilon = 1e-15);
        assert_relative_eq!(norm_cdf(1.959963984540054), 0.975, epsilon = 1e-12);
    }

    #[test]
    fn trigamma_reference_values() {
        // psi_1(1) = pi^2/6
        assert_relative_eq!(trigamma(1.0), PI * PI / 6.0, epsilon = 1e-10);
        // psi_1(4) = pi^2/6 - 1 - 1/4 - 1/9
        assert_relative_eq!(
            trigamma(4.0),
            PI * PI / 6.0 - 1.0 - 0.25 - 1.0 / 9.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn chi_mean_factor_known_values() {
        // m=1: sqrt(2/pi)
        assert_relative_eq!(chi_mean_factor(1), (2.0 / PI).sqrt(), epsilon = 1e-12);
        // m -> infinity: factor -> 1
        assert!(chi_mean_factor(4096) > 0.9999);
    }

    #[test]
    fn compensated_sum_is_order_insensitive() {
        let mut xs = vec![1e16, 1.0, -1e16, 1.0];
        let a = compensated_sum(&xs);
        xs.reverse();
        let b = compensated_sum(&xs);
        assert_eq!(a, 2.0);
        assert_eq!(b, 2.0);
    }
}
