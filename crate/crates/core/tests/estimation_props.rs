//! Behavioral checks for the three estimators: consistency on clean data,
//! invariances, and the qualitative outlier response each method promises.

mod support;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use robust_gamma::data::Dataset;
use robust_gamma::estimation::{
    fit_cantoni, fit_gamma_mle, fit_robust_mle, pearson_residuals, CantoniNu,
};
use robust_gamma::rng::StreamRng;
use robust_gamma::special::sample_gamma;

/// Intercept-plus-slope design with a standardized covariate, gamma noise.
fn simulate(n: usize, beta: &[f64], nu: f64, seed: u64) -> Dataset {
    let mut rng = StreamRng::from_seed(seed);
    let p = beta.len();
    let mean = (n as f64 + 1.0) / 2.0;
    // Standardize the covariate grid 1..n.
    let raw_sd = {
        let mut s = 0.0;
        for i in 1..=n {
            s += (i as f64 - mean).powi(2);
        }
        (s / (n as f64 - 1.0)).sqrt()
    };
    let x = DMatrix::from_fn(n, p, |i, j| {
        if j == 0 {
            1.0
        } else {
            ((i + 1) as f64 - mean) / raw_sd
        }
    });
    let mut y = DVector::zeros(n);
    for i in 0..n {
        let lp: f64 = (0..p).map(|j| x[(i, j)] * beta[j]).sum();
        y[i] = sample_gamma(&mut rng, nu, lp.exp()).unwrap();
    }
    Dataset::new(x, y, None).unwrap()
}

#[test]
fn robust_mle_is_consistent_on_clean_data() {
    let data = simulate(2000, &[0.0, 1.0], 40.0, 101);
    let fit = fit_robust_mle(&data, 1.6).unwrap();
    assert!(fit.converged, "{fit:?}");
    assert!(fit.beta[0].abs() < 0.02, "{fit:?}");
    assert!((fit.beta[1] - 1.0).abs() < 0.02, "{fit:?}");
    assert!(fit.nu > 32.0 && fit.nu < 50.0, "{fit:?}");
}

#[test]
fn gamma_and_robust_agree_on_clean_data() {
    let data = simulate(1500, &[0.2, 0.7], 25.0, 113);
    let gamma = fit_gamma_mle(&data).unwrap();
    let robust = fit_robust_mle(&data, 1.6).unwrap();
    for j in 0..2 {
        assert!(
            (gamma.beta[j] - robust.beta[j]).abs() < 0.01,
            "clean-data estimates should nearly coincide: {gamma:?} vs {robust:?}"
        );
    }
    assert!((gamma.nu.ln() - robust.nu.ln()).abs() < 0.15);
}

#[test]
fn cantoni_reduces_to_gamma_when_nothing_clips() {
    // Shape 1e4 noise keeps every Pearson residual well inside |r| < 6.
    let data = simulate(300, &[0.5, 0.3], 1e4, 131);
    let gamma = fit_gamma_mle(&data).unwrap();
    let resid = pearson_residuals(&data, &gamma.beta, gamma.nu).unwrap();
    assert!(resid.amax() < 6.0, "setup should not clip");
    let cant = fit_cantoni(&data, 6.0, CantoniNu::Fixed(gamma.nu)).unwrap();
    assert!(cant.converged);
    for j in 0..2 {
        assert!(
            (cant.beta[j] - gamma.beta[j]).abs() < 1e-7,
            "unclipped estimating equations are the gamma score: {cant:?} vs {gamma:?}"
        );
    }
}

#[test]
fn contamination_breaks_gamma_but_not_robust() {
    let mut data = simulate(40, &[0.0, 1.0], 40.0, 149);
    // Multiply four responses by 30.
    for &i in &[2usize, 13, 27, 38] {
        data = data.with_response_at(i, data.y()[i] * 30.0).unwrap();
    }
    let gamma = fit_gamma_mle(&data).unwrap();
    let robust = fit_robust_mle(&data, 1.6).unwrap();
    let cant = fit_cantoni(&data, 1.6, CantoniNu::Estimate).unwrap();
    assert!(gamma.nu < 5.0, "gross contamination should crush the gamma shape: {gamma:?}");
    assert!(robust.nu > 15.0 && robust.nu < 90.0, "{robust:?}");
    assert!(cant.nu > gamma.nu, "{cant:?}");
    let err = |b: &DVector<f64>| ((b[0]).powi(2) + (b[1] - 1.0).powi(2)).sqrt();
    assert!(err(&robust.beta) < err(&gamma.beta), "{robust:?} vs {gamma:?}");
}

#[test]
fn estimated_cantoni_shape_is_a_fixed_point() {
    let data = simulate(250, &[0.1, 0.6], 30.0, 167);
    let est = fit_cantoni(&data, 1.6, CantoniNu::Estimate).unwrap();
    assert!(est.converged, "{est:?}");
    let fixed = fit_cantoni(&data, 1.6, CantoniNu::Fixed(est.nu)).unwrap();
    for j in 0..2 {
        assert!((est.beta[j] - fixed.beta[j]).abs() < 1e-7);
    }
}

#[test]
fn constant_response_drives_shape_to_upper_bound() {
    let x = DMatrix::from_element(12, 1, 1.0);
    let y = DVector::from_element(12, 3.0);
    let data = Dataset::new(x, y, None).unwrap();
    let fit = fit_gamma_mle(&data).unwrap();
    assert!(fit.at_nu_bound, "{fit:?}");
    assert!(fit.converged, "a bound solution with vanishing projected gradient converges: {fit:?}");
    assert!((fit.beta[0] - 3.0f64.ln()).abs() < 1e-6);
}

#[test]
fn row_permutation_leaves_fits_unchanged() {
    let data = simulate(120, &[0.3, -0.5], 15.0, 211);
    // Deterministic interleave permutation.
    let perm: Vec<usize> = (0..60).flat_map(|k| [k, k + 60]).collect();
    let x = data.x().select_rows(perm.iter());
    let y = data.y().select_rows(perm.iter());
    let shuffled = Dataset::new(x, y, None).unwrap();

    let a = fit_robust_mle(&data, 1.6).unwrap();
    let b = fit_robust_mle(&shuffled, 1.6).unwrap();
    for j in 0..2 {
        assert!((a.beta[j] - b.beta[j]).abs() < 1e-6, "{a:?} vs {b:?}");
    }
    assert!((a.nu.ln() - b.nu.ln()).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    /// Rescaling the response by `s` moves the intercept by `ln s` and leaves
    /// slope and shape alone, for both likelihood-based fits.
    #[test]
    fn fits_are_scale_equivariant(
        b0 in -0.5f64..0.5,
        b1 in -0.8f64..0.8,
        ln_s in -2.0f64..2.0,
        seed in 0u64..1000,
    ) {
        let s = ln_s.exp();
        let data = simulate(80, &[b0, b1], 12.0, 7000 + seed);
        let scaled = {
            let y = data.y() * s;
            Dataset::new(data.x().clone(), y, None).unwrap()
        };
        for (fit, fit_scaled) in [
            (fit_gamma_mle(&data).unwrap(), fit_gamma_mle(&scaled).unwrap()),
            (fit_robust_mle(&data, 1.6).unwrap(), fit_robust_mle(&scaled, 1.6).unwrap()),
        ] {
            prop_assert!((fit_scaled.beta[0] - fit.beta[0] - ln_s).abs() < 1e-3,
                "intercept shift: {} vs {} + {}", fit_scaled.beta[0], fit.beta[0], ln_s);
            prop_assert!((fit_scaled.beta[1] - fit.beta[1]).abs() < 1e-3);
            prop_assert!((fit_scaled.nu.ln() - fit.nu.ln()).abs() < 1e-3);
        }
    }

    /// The reported solution really is a stationary point: a small step along
    /// any coordinate cannot improve the likelihood it maximizes.
    #[test]
    fn robust_solution_is_locally_optimal(seed in 0u64..500) {
        let data = simulate(60, &[0.0, 0.5], 20.0, 9000 + seed);
        let fit = fit_robust_mle(&data, 1.6).unwrap();
        prop_assert!(fit.converged);
        let base = fit.log_likelihood;
        let eval = |beta: &DVector<f64>, nu: f64| -> f64 {
            let lp = data.linear_predictor(beta).unwrap();
            let dens = robust_gamma::density::RobustDensity::new(nu, 1.6).unwrap();
            (0..data.n()).map(|i| dens.log_pdf_response(data.y()[i], lp[i]).unwrap()).sum()
        };
        for j in 0..2 {
            for dir in [1.0, -1.0] {
                let mut b = fit.beta.clone();
                b[j] += dir * 1e-4;
                prop_assert!(eval(&b, fit.nu) <= base + 1e-7,
                    "coordinate {j} step {dir} improves the objective");
            }
        }
        for dir in [1.0f64, -1.0] {
            let nu = (fit.nu.ln() + dir * 1e-4).exp();
            prop_assert!(eval(&fit.beta, nu) <= base + 1e-7);
        }
    }
}
