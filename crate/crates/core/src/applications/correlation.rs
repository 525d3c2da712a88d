//! Sampling distributions of the simple and squared multiple correlation
//! coefficients of normal samples.
//!
//! For a bivariate normal sample of size `n`,
//! `√(n-2) r/√(1-r²) | ρ ~ K'_{n-1, n-2}(√(n-1) ρ/√(1-ρ²))`.
//! For `n` observations of an `m`-variate normal,
//! `((n-m)/(m-1)) R²/(1-R²) | ρ² ~ K²_{m-1, n-1, n-m}((n-1) ρ²/(1-ρ²))`.

use super::check_open_unit;
use crate::error::{domain, Result};
use crate::kprime::{kprime_cdf, kprime_ncp_solve, KPrimeParams};
use crate::ksquare::{ksquare_cdf, KSquareParams};
use crate::series::EvalOptions;

/// K-prime parameters and argument for `Pr(r < r_obs | ρ)`.
pub fn corr_sampling_params(n: u64, rho: f64, r_obs: f64) -> Result<(KPrimeParams, f64)> {
    if n < 3 {
        return Err(domain(format!("sample size must be at least 3, got {n}")));
    }
    check_open_unit("rho", rho, -1.0)?;
    check_open_unit("r_obs", r_obs, -1.0)?;
    let n = n as f64;
    let kp = KPrimeParams::new(
        n - 1.0,
        n - 2.0,
        (n - 1.0).sqrt() * rho / (1.0 - rho * rho).sqrt(),
    )?;
    let x = (n - 2.0).sqrt() * r_obs / (1.0 - r_obs * r_obs).sqrt();
    Ok((kp, x))
}

/// `Pr(r < r_obs | ρ)`
pub fn corr_sampling_cdf(n: u64, rho: f64, r_obs: f64, options: &EvalOptions) -> Result<f64> {
    let (kp, x) = corr_sampling_params(n, rho, r_obs)?;
    Ok(kprime_cdf(&kp, x, options)?.value)
}

/// Equal-tailed confidence limits `(ρ_lo, ρ_hi)` for `ρ`:
/// `Pr(r < r_obs | ρ_lo) = 1 - α/2` and `Pr(r < r_obs | ρ_hi) = α/2`.
pub fn corr_confidence_limits(
    n: u64,
    r_obs: f64,
    level: f64,
    options: &EvalOptions,
) -> Result<(f64, f64)> {
    check_open_unit("confidence level", level, 0.0)?;
    let (kp, x) = corr_sampling_params(n, 0.0, r_obs)?;
    let alpha = 1.0 - level;
    let to_rho = |a: f64| a / (a * a + kp.q).sqrt();
    let a_lo = kprime_ncp_solve(kp.q, kp.r, x, 1.0 - 0.5 * alpha, options)?;
    let a_hi = kprime_ncp_solve(kp.q, kp.r, x, 0.5 * alpha, options)?;
    Ok((to_rho(a_lo), to_rho(a_hi)))
}

/// K-square parameters and argument for `Pr(R² < r2_obs | ρ²)`.
pub fn mcorr_sampling_params(
    n: u64,
    m: u64,
    rho2: f64,
    r2_obs: f64,
) -> Result<(KSquareParams, f64)> {
    if m < 2 || n <= m {
        return Err(domain(format!("need n > m >= 2, got n={n}, m={m}")));
    }
    if !(0.0..1.0).contains(&rho2) {
        return Err(domain(format!("rho2 must lie in [0, 1), got {rho2}")));
    }
    if !(0.0..1.0).contains(&r2_obs) {
        return Err(domain(format!("R2_obs must lie in [0, 1), got {r2_obs}")));
    }
    let (n, m) = (n as f64, m as f64);
    let ks = KSquareParams::new(m - 1.0, n - 1.0, n - m, (n - 1.0) * rho2 / (1.0 - rho2))?;
    let x = (n - m) / (m - 1.0) * r2_obs / (1.0 - r2_obs);
    Ok((ks, x))
}

/// `Pr(R² < r2_obs | ρ²)` for `n` observations of `m` variables.
pub fn mcorr_sampling_cdf(
    n: u64,
    m: u64,
    rho2: f64,
    r2_obs: f64,
    options: &EvalOptions,
) -> Result<f64> {
    let (ks, x) = mcorr_sampling_params(n, m, rho2, r2_obs)?;
    Ok(ksquare_cdf(&ks, x, options)?.value)
}
