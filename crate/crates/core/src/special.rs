//! Scalar special functions and gamma variate sampling.
//!
//! Everything here is standard numerics; the crate-specific work lives in
//! [`crate::density`] and above. Implementations are backed by `statrs`
//! (Lanczos log-gamma, DiDonato-Morris style incomplete gamma, Cody erf) and
//! `rand_distr` (Marsaglia-Tsang gamma sampling), wrapped so that domain
//! checks and parameterizations match the rest of the crate.

use crate::{Error, Result};
use rand::Rng;
use rand_distr::Distribution;

/// Natural log of the gamma function.
///
/// Relative accuracy is about 1e-13 over `[1e-3, 1e6]`, comfortably inside
/// the 1e-12 contract used by the density code.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// Digamma function, the log-derivative of the gamma function.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("digamma requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::digamma(x))
}

/// CDF at `z` of the gamma distribution with the given `shape` and `mean`.
///
/// The scale works out to `mean / shape`, so `gamma_cdf(z, nu, 1.0)` is the
/// unit-mean variate used throughout the density module. Absolute error is
/// below 1e-12 for shapes up to about 2e3 and degrades smoothly for huge
/// shapes (about 3e-10 at 1e6); relative tail accuracy stays under 1e-6 even
/// at shape 1e8, which is what the tail-exponent limit computations lean on.
pub fn gamma_cdf(z: f64, shape: f64, mean: f64) -> Result<f64> {
    check_gamma_params(shape, mean)?;
    if z.is_nan() {
        return Err(Error::Domain("gamma_cdf: z is NaN".into()));
    }
    if z <= 0.0 {
        return Ok(0.0);
    }
    Ok(statrs::function::gamma::gamma_lr(shape, z * shape / mean))
}

/// Survival function `P(Z > z)` of the same gamma distribution.
///
/// Computed from the upper regularized incomplete gamma directly, so small
/// tail masses keep full relative accuracy instead of `1 - cdf` cancellation.
pub fn gamma_sf(z: f64, shape: f64, mean: f64) -> Result<f64> {
    check_gamma_params(shape, mean)?;
    if z.is_nan() {
        return Err(Error::Domain("gamma_sf: z is NaN".into()));
    }
    if z <= 0.0 {
        return Ok(1.0);
    }
    Ok(statrs::function::gamma::gamma_ur(shape, z * shape / mean))
}

/// Standard normal CDF, absolute accuracy around 1e-15.
///
/// Routed through the regularized upper incomplete gamma at shape 1/2 (the
/// erfc identity) rather than the coarser erfc polynomial, which only reaches
/// about 2e-12 near one standard deviation.
pub fn normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= -40.0 {
        return 0.0;
    }
    if x >= 40.0 {
        return 1.0;
    }
    let t = 0.5 * x * x;
    if t == 0.0 {
        // |x| under ~2e-162: the linear term is already exact to f64.
        return 0.5 + x / (2.0 * std::f64::consts::PI).sqrt();
    }
    let half_tail = 0.5 * statrs::function::gamma::gamma_ur(0.5, t);
    if x < 0.0 {
        half_tail
    } else {
        1.0 - half_tail
    }
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Draw one gamma variate with the given `shape` and `mean`.
///
/// Uses the Marsaglia-Tsang squeeze (with the usual boost for shape < 1) via
/// `rand_distr`, which is fast and exact in distribution.
pub fn sample_gamma<R: Rng + ?Sized>(rng: &mut R, shape: f64, mean: f64) -> Result<f64> {
    check_gamma_params(shape, mean)?;
    let dist = rand_distr::Gamma::new(shape, mean / shape)
        .map_err(|e| Error::Domain(format!("gamma sampler rejected parameters: {e}")))?;
    Ok(dist.sample(rng))
}

fn check_gamma_params(shape: f64, mean: f64) -> Result<()> {
    if !(shape > 0.0) || !shape.is_finite() {
        return Err(Error::Domain(format!("gamma shape must be positive and finite, got {shape}")));
    }
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(Error::Domain(format!("gamma mean must be positive and finite, got {mean}")));
    }
    Ok(())
}

/// `log(nu^nu e^-nu / Gamma(nu))`, the Stirling-normalized log-gamma ratio.
///
/// Needed by the density code where the naive sum `nu ln nu - nu - lnGamma(nu)`
/// loses seven or eight digits to cancellation once `nu` reaches 1e8. For
/// large `nu` the Stirling series gives the difference directly.
pub fn log_gamma_ratio(nu: f64) -> Result<f64> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("log_gamma_ratio requires finite nu > 0, got {nu}")));
    }
    if nu < 20.0 {
        return Ok(nu * nu.ln() - nu - statrs::function::gamma::ln_gamma(nu));
    }
    // lnGamma(nu) = (nu - 1/2) ln nu - nu + ln(2 pi)/2 + 1/(12 nu) - 1/(360 nu^3) + ...
    let inv = 1.0 / nu;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    Ok(0.5 * (nu / (2.0 * std::f64::consts::PI)).ln() - series)
}
