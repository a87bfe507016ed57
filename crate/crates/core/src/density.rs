//! The tail-robustified gamma density and its building blocks.
//!
//! The base object is a unit-mean gamma density in `z` with shape `nu`,
//!
//! ```text
//! f_mid(z) = exp(-nu z) z^(nu-1) nu^nu / Gamma(nu)
//! ```
//!
//! kept untouched on a central window `[z_l, z_r]` around 1 and replaced
//! outside it by log-Pareto branches `(const / z) (log z_b / log z)^lambda_b`
//! that decay like a power of `log z`. The exponents `lambda_l`, `lambda_r`
//! are fixed so each branch carries exactly the gamma tail mass it replaces,
//! which keeps the whole construction a proper density for every `(nu, c)`.
//!
//! Regression enters through `z = y / mu` with `mu = exp(x' beta)`: the
//! response density is `f(y/mu) / mu`. Because the tails are log-Pareto, a
//! single wild observation contributes a bounded score and loses all
//! influence as it drifts away, which is the point of the construction.

use std::sync::OnceLock;

use nalgebra::DVector;

use crate::special::{digamma, gamma_cdf, gamma_sf, log_gamma_ratio};
use crate::{Error, Result};

/// Which branch of the piecewise density a point fell in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Left,
    Mid,
    Right,
}

/// A density evaluation with its branch label.
#[derive(Debug, Clone, Copy)]
pub struct DensityEvaluation {
    pub value: f64,
    pub log_value: f64,
    pub region: Region,
}

/// Switch points and tail exponents for a given `(nu, c)`.
#[derive(Debug, Clone, Copy)]
pub struct TailConstants {
    /// Left switch point; 0 when the left branch is absent.
    pub z_l: f64,
    /// Right switch point, always `1 + c / sqrt(nu)`.
    pub z_r: f64,
    /// Left tail exponent, absent when `z_l = 0`.
    pub lambda_l: Option<f64>,
    /// Right tail exponent, always finite and > 1.
    pub lambda_r: f64,
    /// Gamma density at `z_l`, absent when `z_l = 0`.
    pub f_mid_at_zl: Option<f64>,
    /// Gamma density at `z_r`.
    pub f_mid_at_zr: f64,
}

/// Parameters of the regression model: coefficients, shape, tuning constant.
#[derive(Debug, Clone)]
pub struct RobustGammaParams {
    pub beta: DVector<f64>,
    pub nu: f64,
    pub c: f64,
}

impl RobustGammaParams {
    pub fn new(beta: DVector<f64>, nu: f64, c: f64) -> Result<Self> {
        let p = Self { beta, nu, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::Domain("beta must be finite".into()));
        }
        check_nu_c(self.nu, self.c)
    }
}

fn check_nu_c(nu: f64, c: f64) -> Result<()> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("shape nu must be positive and finite, got {nu}")));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("tuning constant c must be positive and finite, got {c}")));
    }
    Ok(())
}

/// Switch points and tail exponents.
///
/// The exponents match tail masses: integrating the right branch over
/// `(z_r, inf)` gives `f_mid(z_r) z_r log(z_r) / (lambda_r - 1)`, and
/// `lambda_r` is chosen so this equals `P(Z_nu > z_r)` for a unit-mean gamma
/// variate `Z_nu`. The left branch mirrors this on `(0, z_l)` whenever
/// `z_l > 0`; for `nu <= 1` (monotone density) or `c >= sqrt(nu)` the left
/// branch is dropped and the gamma body extends to zero.
pub fn compute_tail_constants(nu: f64, c: f64) -> Result<TailConstants> {
    check_nu_c(nu, c)?;
    let stir = log_gamma_ratio(nu)?;
    let sqrt_nu = nu.sqrt();

    let ratio = c / sqrt_nu;
    let z_r = 1.0 + ratio;
    let ln_zr = ratio.ln_1p();
    let ln_fmid_zr = ln_f_mid_from_ln_z(nu, stir, ln_zr);
    let p_right = gamma_sf(z_r, nu, 1.0)?;
    // When the switch point sits so deep in the gamma tail that its mass
    // underflows f64, fall back to the integration-by-parts asymptotic
    // P(Z > z_r) ~ f_mid(z_r) z_r / (nu (z_r - 1) + 1), under which the
    // exponent has the closed form below. Relative error is at most a few
    // e-4 anywhere the exact route underflows.
    let lambda_r = if p_right > 0.0 && ln_fmid_zr > -700.0 {
        1.0 + ln_fmid_zr.exp() * ln_zr * z_r / p_right
    } else {
        1.0 + ln_zr * (c * sqrt_nu + 1.0)
    };

    let z_l = if nu <= 1.0 { 0.0 } else { (1.0 - ratio).max(0.0) };
    let (lambda_l, f_mid_at_zl) = if z_l > 0.0 {
        let ln_zl = (-ratio).ln_1p();
        let ln_fmid_zl = ln_f_mid_from_ln_z(nu, stir, ln_zl);
        let p_left = gamma_cdf(z_l, nu, 1.0)?;
        let lambda_l = if p_left > 0.0 && ln_fmid_zl > -700.0 {
            1.0 - ln_fmid_zl.exp() * ln_zl * z_l / p_left
        } else {
            1.0 - ln_zl * (c * sqrt_nu + 1.0)
        };
        (Some(lambda_l), Some(ln_fmid_zl.exp()))
    } else {
        (None, None)
    };

    Ok(TailConstants {
        z_l,
        z_r,
        lambda_l,
        lambda_r,
        f_mid_at_zl,
        f_mid_at_zr: ln_fmid_zr.exp(),
    })
}

/// `log f_mid(exp(ln_z))` evaluated stably from the log of the argument.
///
/// Rearranged as `nu (ln z - (z - 1)) + stir - ln z` with
/// `stir = log(nu^nu e^-nu / Gamma(nu))` and `z - 1` taken from `exp_m1`,
/// so the huge-`nu` cancellation between `nu ln nu` and `ln Gamma(nu)` never
/// happens and arguments within 1e-8 of 1 keep full precision.
fn ln_f_mid_from_ln_z(nu: f64, stir: f64, ln_z: f64) -> f64 {
    nu * (ln_z - ln_z.exp_m1()) + stir - ln_z
}

/// Preassembled evaluator for one `(nu, c)` pair.
///
/// Building one of these costs two incomplete-gamma calls; evaluating the
/// density or its gradients afterwards is a handful of flops per point, so
/// fitting code should construct it once per parameter vector and reuse it
/// across observations.
#[derive(Debug)]
pub struct RobustDensity {
    nu: f64,
    c: f64,
    eta: f64,
    psi_nu: f64,
    stir: f64,
    tails: TailConstants,
    ln_zr: f64,
    ln_ln_zr: f64,
    ln_fmid_zr: f64,
    /// Classification cut in log space, `tails.z_r.ln()`.
    ///
    /// Kept separate from `ln_zr` (the `ln_1p` form used in formulas): the
    /// two can disagree by an ulp, and region membership is defined on `z`,
    /// so the cut must round-trip through the same `ln` the evaluator uses.
    ln_zr_cut: f64,
    left: Option<LeftBranch>,
    lambda_derivs: OnceLock<(f64, Option<f64>)>,
}

#[derive(Debug, Clone, Copy)]
struct LeftBranch {
    ln_zl: f64,
    ln_zl_cut: f64,
    ln_neg_ln_zl: f64,
    lambda_l: f64,
}

/// Per-observation gradient pieces of `log [f(y/mu)/mu]`.
///
/// The beta gradient of one observation is always a scalar times its
/// covariate vector; `dbeta_coef` is that scalar, so callers can accumulate
/// without allocating.
#[derive(Debug, Clone, Copy)]
pub struct GradParts {
    pub dbeta_coef: f64,
    pub deta: f64,
    pub at_kink: bool,
}

/// Full gradient of `log [f(y/mu)/mu]` with respect to `(beta, eta)`.
#[derive(Debug, Clone)]
pub struct LogPdfGrad {
    pub beta: DVector<f64>,
    pub eta: f64,
    pub at_kink: bool,
}

impl RobustDensity {
    pub fn new(nu: f64, c: f64) -> Result<Self> {
        let tails = compute_tail_constants(nu, c)?;
        let stir = log_gamma_ratio(nu)?;
        let ln_zr = (c / nu.sqrt()).ln_1p();
        let left = tails.lambda_l.map(|lambda_l| {
            let ln_zl = (-(c / nu.sqrt())).ln_1p();
            LeftBranch { ln_zl, ln_zl_cut: tails.z_l.ln(), ln_neg_ln_zl: (-ln_zl).ln(), lambda_l }
        });
        Ok(RobustDensity {
            nu,
            c,
            eta: nu.ln(),
            psi_nu: digamma(nu)?,
            stir,
            tails,
            ln_zr,
            ln_ln_zr: ln_zr.ln(),
            ln_fmid_zr: ln_f_mid_from_ln_z(nu, stir, ln_zr),
            ln_zr_cut: tails.z_r.ln(),
            left,
            lambda_derivs: OnceLock::new(),
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn tails(&self) -> &TailConstants {
        &self.tails
    }

    /// Evaluate the density at `z > 0`.
    pub fn eval(&self, z: f64) -> Result<DensityEvaluation> {
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::Domain(format!("density argument must be in (0, inf), got {z}")));
        }
        let ln_z = z.ln();
        let (log_value, region) = self.log_pdf_ln_z(ln_z);
        Ok(DensityEvaluation { value: log_value.exp(), log_value, region })
    }

    /// `log [f(y/mu) / mu]` with `mu = exp(lin_pred)`.
    pub fn log_pdf_response(&self, y: f64, lin_pred: f64) -> Result<f64> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::Domain(format!("response must be in (0, inf), got {y}")));
        }
        if !lin_pred.is_finite() {
            return Err(Error::Overflow(format!("linear predictor is not finite: {lin_pred}")));
        }
        let ln_z = y.ln() - lin_pred;
        Ok(self.log_pdf_ln_z(ln_z).0 - lin_pred)
    }

    /// Log density and region from `ln z`, stable for arbitrarily extreme `z`.
    pub(crate) fn log_pdf_ln_z(&self, ln_z: f64) -> (f64, Region) {
        match self.region_of(ln_z) {
            Region::Mid => (ln_f_mid_from_ln_z(self.nu, self.stir, ln_z), Region::Mid),
            Region::Right => {
                debug_assert!(ln_z > 0.0, "right branch reached with log z = {ln_z}");
                let v = self.ln_fmid_zr + self.ln_zr - ln_z
                    + self.tails.lambda_r * (self.ln_ln_zr - ln_z.ln());
                (v, Region::Right)
            }
            Region::Left => {
                debug_assert!(ln_z < 0.0, "left branch reached with log z = {ln_z}");
                let lb = self.left.expect("left branch cached");
                let ln_fmid_zl = ln_f_mid_from_ln_z(self.nu, self.stir, lb.ln_zl);
                let v = ln_fmid_zl + lb.ln_zl - ln_z
                    + lb.lambda_l * (lb.ln_neg_ln_zl - (-ln_z).ln());
                (v, Region::Left)
            }
        }
    }

    fn region_of(&self, ln_z: f64) -> Region {
        if ln_z > self.ln_zr_cut {
            Region::Right
        } else if matches!(self.left, Some(lb) if ln_z < lb.ln_zl_cut) {
            Region::Left
        } else {
            Region::Mid
        }
    }

    /// Gradient pieces of `log [f(y/mu)/mu]` with respect to `(beta, eta)`.
    ///
    /// At a switch point the density is continuous but has a kink; the mid
    /// branch's one-sided gradient is returned and `at_kink` is raised so
    /// optimizers can fall back to function-value decisions there.
    pub fn grad_parts(&self, y: f64, lin_pred: f64) -> Result<GradParts> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::Domain(format!("response must be in (0, inf), got {y}")));
        }
        if !lin_pred.is_finite() {
            return Err(Error::Overflow(format!("linear predictor is not finite: {lin_pred}")));
        }
        let ln_z = y.ln() - lin_pred;
        let at_kink = ln_z == self.ln_zr_cut
            || matches!(self.left, Some(lb) if ln_z == lb.ln_zl_cut);
        let nu = self.nu;
        match self.region_of(ln_z) {
            Region::Mid => {
                let z = ln_z.exp();
                Ok(GradParts {
                    dbeta_coef: nu * (z - 1.0),
                    deta: self.deta_mid(z, ln_z),
                    at_kink,
                })
            }
            Region::Right => {
                let z_r = self.tails.z_r;
                let lambda_r = self.tails.lambda_r;
                let (dlam_r, _) = self.lambda_eta_derivs();
                // d z_r / d eta = -(z_r - 1)/2 propagates through every piece
                // of log f_mid(z_r) z_r; the remaining terms differentiate
                // lambda_r and the log-log ratio.
                let deta = self.deta_mid(z_r, self.ln_zr)
                    + 0.5 * nu * (z_r - 1.0) * (1.0 - 1.0 / z_r)
                    + dlam_r * (self.ln_ln_zr - ln_z.ln())
                    - lambda_r * (z_r - 1.0) / (2.0 * z_r * self.ln_zr);
                Ok(GradParts { dbeta_coef: lambda_r / ln_z, deta, at_kink })
            }
            Region::Left => {
                let lb = self.left.expect("left branch cached");
                let z_l = self.tails.z_l;
                let (_, dlam_l) = self.lambda_eta_derivs();
                let dlam_l = dlam_l.expect("left branch has a lambda_l derivative");
                let deta = self.deta_mid(z_l, lb.ln_zl)
                    - 0.5 * nu * (1.0 - z_l) * (1.0 - 1.0 / z_l)
                    + dlam_l * (lb.ln_neg_ln_zl - (-ln_z).ln())
                    + lb.lambda_l * (1.0 - z_l) / (2.0 * z_l * lb.ln_zl);
                Ok(GradParts { dbeta_coef: lb.lambda_l / ln_z, deta, at_kink })
            }
        }
    }

    /// Mid-branch eta derivative at a point with known `z` and `ln z`.
    fn deta_mid(&self, z: f64, ln_z: f64) -> f64 {
        self.nu * (ln_z - z + self.eta + 1.0 - self.psi_nu)
    }

    /// `d lambda_r / d eta` and `d lambda_l / d eta` by central differences.
    ///
    /// The exponents depend on eta through incomplete gamma integrals with no
    /// closed-form derivative, so a small centered step is used; one-sided
    /// fallbacks cover the rare configurations where the left branch vanishes
    /// inside the stencil.
    fn lambda_eta_derivs(&self) -> (f64, Option<f64>) {
        *self.lambda_derivs.get_or_init(|| {
            let h = 1e-6 * self.eta.abs().max(1.0);
            let up = compute_tail_constants((self.eta + h).exp(), self.c).ok();
            let dn = compute_tail_constants((self.eta - h).exp(), self.c).ok();
            let dlam_r = match (&up, &dn) {
                (Some(u), Some(d)) => (u.lambda_r - d.lambda_r) / (2.0 * h),
                (Some(u), None) => (u.lambda_r - self.tails.lambda_r) / h,
                (None, Some(d)) => (self.tails.lambda_r - d.lambda_r) / h,
                (None, None) => 0.0,
            };
            let dlam_l = self.tails.lambda_l.map(|lam| {
                let u = up.as_ref().and_then(|t| t.lambda_l);
                let d = dn.as_ref().and_then(|t| t.lambda_l);
                match (u, d) {
                    (Some(u), Some(d)) => (u - d) / (2.0 * h),
                    (Some(u), None) => (u - lam) / h,
                    (None, Some(d)) => (lam - d) / h,
                    (None, None) => 0.0,
                }
            });
            (dlam_r, dlam_l)
        })
    }
}

/// Evaluate the density at a point, one-shot convenience form.
pub fn pdf(z: f64, nu: f64, c: f64) -> Result<DensityEvaluation> {
    RobustDensity::new(nu, c)?.eval(z)
}

/// `log [f(y/mu)/mu]` for one observation with `mu = exp(x' beta)`.
pub fn log_pdf_response(y: f64, x: &DVector<f64>, params: &RobustGammaParams) -> Result<f64> {
    params.validate()?;
    if x.len() != params.beta.len() {
        return Err(Error::InvalidData(format!(
            "covariate length {} does not match beta length {}",
            x.len(),
            params.beta.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData("covariates must be finite".into()));
    }
    RobustDensity::new(params.nu, params.c)?.log_pdf_response(y, x.dot(&params.beta))
}

/// Gradient of `log [f(y/mu)/mu]` with respect to `(beta, eta = log nu)`.
pub fn grad_log_pdf(y: f64, x: &DVector<f64>, params: &RobustGammaParams) -> Result<LogPdfGrad> {
    params.validate()?;
    if x.len() != params.beta.len() {
        return Err(Error::InvalidData(format!(
            "covariate length {} does not match beta length {}",
            x.len(),
            params.beta.len()
        )));
    }
    let parts = RobustDensity::new(params.nu, params.c)?.grad_parts(y, x.dot(&params.beta))?;
    Ok(LogPdfGrad { beta: x * parts.dbeta_coef, eta: parts.deta, at_kink: parts.at_kink })
}

/// Gamma GLM log density of one observation under the log link.
///
/// This is exactly the mid branch of the robust density evaluated at
/// `z = y/mu`, shifted by the Jacobian `-log mu`.
pub fn gamma_glm_log_pdf(y: f64, x: &DVector<f64>, beta: &DVector<f64>, nu: f64) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!("response must be in (0, inf), got {y}")));
    }
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("shape nu must be positive and finite, got {nu}")));
    }
    if x.len() != beta.len() {
        return Err(Error::InvalidData(format!(
            "covariate length {} does not match beta length {}",
            x.len(),
            beta.len()
        )));
    }
    let lin_pred = x.dot(beta);
    if !lin_pred.is_finite() {
        return Err(Error::Overflow(format!("linear predictor is not finite: {lin_pred}")));
    }
    let stir = log_gamma_ratio(nu)?;
    Ok(ln_f_mid_from_ln_z(nu, stir, y.ln() - lin_pred) - lin_pred)
}

/// The comparison density implicit in the Cantoni-type estimating equations.
///
/// On the central window `|sqrt(nu)(z - 1)| <= c` it is the same unit-mean
/// gamma kernel as [`pdf`]; outside, clipping the Pearson residual turns the
/// tails into plain Pareto branches `z^(-c sqrt(nu) - 1)` (right) and
/// `z^(c sqrt(nu) - 1)` (left), glued continuously at the switch points. The
/// left branch only exists when `1 - c/sqrt(nu) > 0`; otherwise no positive
/// `z` satisfies its defining inequality. Tails this heavy stay integrable
/// only because `c sqrt(nu) > 0`, which the preconditions guarantee.
pub fn cantoni_g(z: f64, nu: f64, c: f64) -> Result<f64> {
    check_nu_c(nu, c)?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("density argument must be in (0, inf), got {z}")));
    }
    let stir = log_gamma_ratio(nu)?;
    let sqrt_nu = nu.sqrt();
    let r = sqrt_nu * (z - 1.0);
    let log_g = if r > c {
        let ln_zr = (c / sqrt_nu).ln_1p();
        ln_f_mid_from_ln_z(nu, stir, ln_zr) + (-c * sqrt_nu - 1.0) * (z.ln() - ln_zr)
    } else if r < -c {
        // Reachable only when z_l = 1 - c/sqrt(nu) is positive.
        let ln_zl = (-(c / sqrt_nu)).ln_1p();
        ln_f_mid_from_ln_z(nu, stir, ln_zl) + (c * sqrt_nu - 1.0) * (z.ln() - ln_zl)
    } else {
        ln_f_mid_from_ln_z(nu, stir, z.ln())
    };
    Ok(log_g.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    #[test]
    fn rejects_bad_arguments() {
        assert!(pdf(0.0, 2.0, 1.6).is_err());
        assert!(pdf(-1.0, 2.0, 1.6).is_err());
        assert!(pdf(f64::NAN, 2.0, 1.6).is_err());
        assert!(pdf(1.0, 0.0, 1.6).is_err());
        assert!(pdf(1.0, 2.0, -1.0).is_err());
        assert!(compute_tail_constants(f64::INFINITY, 1.6).is_err());
        assert!(cantoni_g(1.0, 2.0, 0.0).is_err());
        assert!(cantoni_g(-0.5, 2.0, 1.0).is_err());
    }

    #[test]
    fn left_branch_absent_for_small_shape_or_large_c() {
        // Monotone gamma density: no left switch.
        let t = compute_tail_constants(0.8, 1.6).unwrap();
        assert_eq!(t.z_l, 0.0);
        assert!(t.lambda_l.is_none() && t.f_mid_at_zl.is_none());
        // c >= sqrt(nu) pushes the left switch to zero as well.
        let t = compute_tail_constants(2.0, 1.5).unwrap();
        assert_eq!(t.z_l, 0.0);
        assert!(t.lambda_l.is_none());
        // Just above the threshold the branch exists.
        let t = compute_tail_constants(2.0, 1.2).unwrap();
        assert!(t.z_l > 0.0 && t.lambda_l.is_some());
    }

    #[test]
    fn exponents_exceed_one() {
        for (nu, c) in [(0.5, 1.2), (1.0, 2.0), (5.0, 1.6), (36.5, 1.6), (40.0, 2.0)] {
            let t = compute_tail_constants(nu, c).unwrap();
            assert!(t.lambda_r > 1.0, "lambda_r at ({nu}, {c})");
            if let Some(l) = t.lambda_l {
                assert!(l > 1.0, "lambda_l at ({nu}, {c})");
            }
        }
    }

    #[test]
    fn regions_classified_with_closed_mid() {
        let d = RobustDensity::new(40.0, 1.6).unwrap();
        let t = d.tails();
        assert_eq!(d.eval(t.z_l).unwrap().region, Region::Mid);
        assert_eq!(d.eval(t.z_r).unwrap().region, Region::Mid);
        assert_eq!(d.eval(1.0).unwrap().region, Region::Mid);
        assert_eq!(d.eval(t.z_r + 1e-9).unwrap().region, Region::Right);
        assert_eq!(d.eval(t.z_l - 1e-9).unwrap().region, Region::Left);
        assert_eq!(d.eval(1e6).unwrap().region, Region::Right);
        assert_eq!(d.eval(1e-12).unwrap().region, Region::Left);
    }

    #[test]
    fn continuous_at_switch_points() {
        for (nu, c) in [(0.5, 1.2), (5.0, 1.6), (36.5, 1.6), (40.0, 2.0), (1e6, 1.6)] {
            let d = RobustDensity::new(nu, c).unwrap();
            let t = *d.tails();
            let eps = 1e-10 * t.z_r;
            let lo = d.eval(t.z_r - eps).unwrap().log_value;
            let hi = d.eval(t.z_r + eps).unwrap().log_value;
            assert_relative_eq!(lo, hi, epsilon = 1e-6, max_relative = 1e-6);
            if t.z_l > 0.0 {
                let lo = d.eval(t.z_l - eps).unwrap().log_value;
                let hi = d.eval(t.z_l + eps).unwrap().log_value;
                assert_relative_eq!(lo, hi, epsilon = 1e-6, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn mid_matches_gamma_glm_log_pdf() {
        let params =
            RobustGammaParams::new(dvector![0.2, -0.4], 7.5, 1.6).unwrap();
        let x = dvector![1.0, 0.3];
        let mu = (x.dot(&params.beta)).exp();
        // Pick y so y/mu is inside the central window.
        for z in [0.95, 1.0, 1.1] {
            let y = z * mu;
            let robust = log_pdf_response(y, &x, &params).unwrap();
            let gamma = gamma_glm_log_pdf(y, &x, &params.beta, params.nu).unwrap();
            assert_relative_eq!(robust, gamma, max_relative = 1e-13);
        }
    }

    #[test]
    fn response_form_matches_density_over_mu() {
        let params = RobustGammaParams::new(dvector![0.5], 12.0, 1.4).unwrap();
        let x = dvector![1.0];
        let mu = params.beta[0].exp();
        for y in [0.05, 0.2, 1.0, 1.6, 2.1, 30.0] {
            let direct = pdf(y / mu, params.nu, params.c).unwrap().log_value - mu.ln();
            let through = log_pdf_response(y, &x, &params).unwrap();
            assert_relative_eq!(direct, through, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn extreme_responses_stay_finite() {
        let params = RobustGammaParams::new(dvector![0.0], 40.0, 1.6).unwrap();
        let x = dvector![1.0];
        for y in [1e-300, 1e-12, 1e12, 1e300] {
            let v = log_pdf_response(y, &x, &params).unwrap();
            assert!(v.is_finite(), "log pdf at y = {y} is {v}");
        }
        // Non-finite linear predictor is an overflow error, not a NaN.
        let bad = RobustGammaParams::new(dvector![800.0, 800.0], 40.0, 1.6).unwrap();
        let xx = dvector![1.0, f64::MAX];
        assert!(log_pdf_response(1.0, &xx, &bad).is_err());
    }

    #[test]
    fn kink_flag_raised_exactly_at_switch_points() {
        let d = RobustDensity::new(40.0, 1.6).unwrap();
        let t = *d.tails();
        // Arrange lin_pred = 0 so z = y exactly.
        let g = d.grad_parts(t.z_r, 0.0).unwrap();
        assert!(g.at_kink);
        let g = d.grad_parts(t.z_r * 1.01, 0.0).unwrap();
        assert!(!g.at_kink);
        let g = d.grad_parts(t.z_l, 0.0).unwrap();
        assert!(g.at_kink);
    }

    #[test]
    fn cantoni_g_matches_gamma_kernel_in_window() {
        let nu = 9.0f64;
        let c = 1.5;
        for z in [0.6, 1.0, 1.45] {
            assert!((nu.sqrt() * (z - 1.0)).abs() <= c);
            let g = cantoni_g(z, nu, c).unwrap();
            let f = pdf(z, nu, c).unwrap();
            // The window of g differs from the robust density's, but at these
            // points both are the plain gamma kernel.
            assert_relative_eq!(g, f.value, max_relative = 1e-12);
        }
    }

    #[test]
    fn cantoni_g_continuous_and_pareto_tailed() {
        let nu = 9.0f64;
        let c = 1.5;
        let z_r = 1.0 + c / nu.sqrt();
        let lo = cantoni_g(z_r - 1e-10, nu, c).unwrap();
        let hi = cantoni_g(z_r + 1e-10, nu, c).unwrap();
        assert_relative_eq!(lo, hi, max_relative = 1e-6);
        let z_l = 1.0 - c / nu.sqrt();
        let lo = cantoni_g(z_l - 1e-10, nu, c).unwrap();
        let hi = cantoni_g(z_l + 1e-10, nu, c).unwrap();
        assert_relative_eq!(lo, hi, max_relative = 1e-6);
        // Power-law decay on the right: g(2z)/g(z) = 2^(-c sqrt(nu) - 1).
        let a = cantoni_g(4.0, nu, c).unwrap();
        let b = cantoni_g(8.0, nu, c).unwrap();
        assert_relative_eq!(b / a, 2f64.powf(-c * nu.sqrt() - 1.0), max_relative = 1e-10);
    }

    #[test]
    fn gradient_dimension_checks() {
        let params = RobustGammaParams::new(dvector![0.1, 0.2], 5.0, 1.6).unwrap();
        let x = dvector![1.0];
        assert!(grad_log_pdf(1.0, &x, &params).is_err());
        assert!(log_pdf_response(1.0, &x, &params).is_err());
    }
}
