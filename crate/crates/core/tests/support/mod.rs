//! Independent numerical oracles shared by the integration tests.
//!
//! Nothing in here calls back into the crate: quadrature, compensated
//! summation, and slowly converging series stand on their own so that the
//! values they produce genuinely cross-check the library.

#![allow(dead_code)]

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.5772156649015328606065120900824024;

/// Adaptive Simpson quadrature with an absolute tolerance.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson_rule<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson_rule(f, a, fa, m, fm);
        let (right, rm, frm) = simpson_rule(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson_rule(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 60)
}

/// Kahan compensated sum of an iterator.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `ln Gamma(n)` for integer `n >= 1` by exact factorial summation.
pub fn ln_gamma_integer(n: u64) -> f64 {
    kahan_sum((2..n).map(|k| (k as f64).ln()))
}

/// `ln Gamma(n + 1/2)` by the half-integer product from `Gamma(1/2) = sqrt(pi)`.
pub fn ln_gamma_half_integer(n: u64) -> f64 {
    0.5 * std::f64::consts::PI.ln() + kahan_sum((1..=n).map(|k| (k as f64 - 0.5).ln()))
}

/// Digamma by the defining series plus an Euler-Maclaurin tail.
///
/// psi(x) = -gamma + sum_{k>=0} (1/(k+1) - 1/(k+x)); the first `cut` terms
/// are summed directly and the remainder is integrated with the first three
/// Euler-Maclaurin corrections, giving ~1e-15 accuracy for x up to ~1e3.
pub fn digamma_series(x: f64) -> f64 {
    assert!(x > 0.0);
    let cut = 4000u64;
    let head = kahan_sum((0..cut).map(|k| {
        let k = k as f64;
        1.0 / (k + 1.0) - 1.0 / (k + x)
    }));
    let t = cut as f64;
    let f = |t: f64| 1.0 / (t + 1.0) - 1.0 / (t + x);
    let fp = |t: f64| -1.0 / ((t + 1.0) * (t + 1.0)) + 1.0 / ((t + x) * (t + x));
    let fppp = |t: f64| {
        -6.0 / ((t + 1.0) * (t + 1.0) * (t + 1.0) * (t + 1.0))
            + 6.0 / ((t + x) * (t + x) * (t + x) * (t + x))
    };
    let integral = ((t + x) / (t + 1.0)).ln();
    let tail = integral + 0.5 * f(t) - fp(t) / 12.0 + fppp(t) / 720.0;
    -EULER_GAMMA + head + tail
}

/// Harmonic number `H_n` with compensated summation.
pub fn harmonic(n: u64) -> f64 {
    kahan_sum((1..=n).map(|k| 1.0 / k as f64))
}

/// Central finite difference gradient of a scalar function.
pub fn fd_gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], rel_step: f64) -> Vec<f64> {
    let mut grad = vec![0.0; x.len()];
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        let h = rel_step * x[i].abs().max(1.0);
        xp[i] = x[i] + h;
        let up = f(&xp);
        xp[i] = x[i] - h;
        let dn = f(&xp);
        xp[i] = x[i];
        grad[i] = (up - dn) / (2.0 * h);
    }
    grad
}

/// Two-sided Kolmogorov-Smirnov statistic of a sorted sample against a CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let fx = cdf(x);
        d = d.max((fx - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - fx).abs());
    }
    d
}
