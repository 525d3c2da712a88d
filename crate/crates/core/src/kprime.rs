//! The K-prime distribution `K'_{q,r}(a)`.
//!
//! For `a > 0` the CDF is `Pr(t_q > a) ± Σ (∓1)^j g_j H_j(x)` with
//!
//! * `g_j = ½ Γ((q+j)/2) / (Γ(1+j/2) Γ(q/2)) · (q/(q+a²))^{q/2} (a²/(q+a²))^{j/2}`,
//! * `H_j(x) = I_{x²/(r+x²)}((j+1)/2, r/2)`,
//!
//! the series being alternating when `x < 0`. Negative `a` is reduced through
//! `Pr(K'(a) < x) = 1 - Pr(K'(-a) < -x)` and `a = 0` is Student's `t_r`.
//! The recurrences step by two, one chain per parity of `j`.

use crate::error::{domain, Error, Result};
use crate::root;
use crate::series::{self, EvalOptions, EvalReport, MixtureSeries, SignMode};
use crate::special::{inc_beta_xy, ln_beta_power, t_cdf};

/// Root searches evaluate the CDF at least this tightly.
const SEARCH_TOLERANCE: f64 = 1e-13;
/// Acceptance threshold on `|cdf - prob|` for the inversions.
const ROOT_PROB_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KPrimeParams {
    pub q: f64,
    pub r: f64,
    pub a: f64,
}

impl KPrimeParams {
    pub fn new(q: f64, r: f64, a: f64) -> Result<Self> {
        let p = KPrimeParams { q, r, a };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0) {
            return Err(domain(format!(
                "K-prime q must be positive, got {}",
                self.q
            )));
        }
        if !(self.r > 0.0) {
            return Err(domain(format!(
                "K-prime r must be positive, got {}",
                self.r
            )));
        }
        if !self.a.is_finite() {
            return Err(domain(format!(
                "K-prime noncentrality must be finite, got {}",
                self.a
            )));
        }
        Ok(())
    }
}

/// Series for `a > 0` and `x != 0`, with `x` entering only through `x²` and
/// its sign.
#[derive(Debug, Clone)]
pub struct KPrimeSeries {
    q: f64,
    r: f64,
    /// `x² / (r + x²)` and its complement.
    z: f64,
    y: f64,
    /// `q / (q + a²)` and its complement.
    w_p: f64,
    w_q: f64,
    sign: SignMode,
}

impl KPrimeSeries {
    /// Requires `a > 0`, `x != 0`.
    pub fn new(params: &KPrimeParams, x: f64) -> Self {
        let KPrimeParams { q, r, a } = *params;
        let x2 = x * x;
        let a2 = a * a;
        let (z, y) = if x2.is_finite() {
            (x2 / (r + x2), r / (r + x2))
        } else {
            (1.0, 0.0)
        };
        KPrimeSeries {
            q,
            r,
            z,
            y,
            w_p: q / (q + a2),
            w_q: a2 / (q + a2),
            sign: if x < 0.0 {
                SignMode::Alternating
            } else {
                SignMode::AllPositive
            },
        }
    }
}

impl MixtureSeries for KPrimeSeries {
    fn parity_step(&self) -> u64 {
        2
    }

    fn sign_mode(&self) -> SignMode {
        self.sign
    }

    fn beta_argument(&self) -> f64 {
        self.z
    }

    fn log_weight_at(&self, j: u64) -> f64 {
        let half_q = 0.5 * self.q;
        if j == 0 {
            return -std::f64::consts::LN_2 + half_q * self.w_p.ln();
        }
        let half_j = 0.5 * j as f64;
        -std::f64::consts::LN_2 + ln_beta_power(self.w_p, self.w_q, half_q, half_j) - half_j.ln()
    }

    fn weight_ratio_fwd(&self, j: u64) -> f64 {
        let j = j as f64;
        (self.q + j) / (j + 2.0) * self.w_q
    }

    fn weight_ratio_bwd(&self, j: u64) -> f64 {
        let j = j as f64;
        j / (self.q + j - 2.0) / self.w_q
    }

    fn h_at(&self, j: u64) -> f64 {
        inc_beta_xy(self.z, self.y, 0.5 * (j as f64 + 1.0), 0.5 * self.r)
    }

    fn log_h_increment_at(&self, j: u64) -> f64 {
        let shape = 0.5 * (j as f64 + 1.0);
        ln_beta_power(self.z, self.y, shape, 0.5 * self.r) - shape.ln()
    }

    fn h_increment_ratio(&self, j: u64) -> f64 {
        let j = j as f64;
        (j + self.r + 1.0) / (j + 3.0) * self.z
    }
}

/// Start index for bidirectional summation: the mode of the weights,
/// `max(0, ⌊a²(q-2)/q⌋ - 1)`.
pub fn kprime_mode_index(params: &KPrimeParams) -> u64 {
    let a2 = params.a * params.a;
    let m = (a2 * (params.q - 2.0) / params.q).floor() - 1.0;
    if m > 0.0 {
        m as u64
    } else {
        0
    }
}

/// `Pr(K'_{q,r}(a) < x)`. The returned report carries the assembled CDF in
/// `value`.
pub fn kprime_cdf(params: &KPrimeParams, x: f64, options: &EvalOptions) -> Result<EvalReport> {
    params.validate()?;
    options.validate()?;
    if x.is_nan() {
        return Err(domain("K-prime argument x is NaN"));
    }
    let KPrimeParams { q, r, a } = *params;
    if a == 0.0 {
        return Ok(EvalReport::closed_form(t_cdf(x, r)));
    }
    if a < 0.0 {
        let mirrored = KPrimeParams { q, r, a: -a };
        let mut rep = kprime_cdf(&mirrored, -x, options)?;
        rep.value = (1.0 - rep.value).clamp(0.0, 1.0);
        return Ok(rep);
    }
    // Pr(K' < 0) = Pr(t_q > a)
    let base = 1.0 - t_cdf(a, q);
    if x == 0.0 {
        return Ok(EvalReport::closed_form(base));
    }
    if x.is_infinite() {
        return Ok(EvalReport::closed_form(if x > 0.0 { 1.0 } else { 0.0 }));
    }

    let s = KPrimeSeries::new(params, x);
    let mut rep = series::evaluate(&s, kprime_mode_index(params), options)?;
    let cdf = if x > 0.0 {
        base + rep.value
    } else {
        base - rep.value
    };
    rep.value = cdf.clamp(0.0, 1.0);
    Ok(rep)
}

fn search_options(options: &EvalOptions) -> EvalOptions {
    EvalOptions {
        tolerance: options.tolerance.min(SEARCH_TOLERANCE),
        ..*options
    }
}

/// `x` with `Pr(K'_{q,r}(a) < x) = prob`.
pub fn kprime_quantile(params: &KPrimeParams, prob: f64, options: &EvalOptions) -> Result<f64> {
    params.validate()?;
    options.validate()?;
    if !(prob > 0.0 && prob < 1.0) {
        return Err(domain(format!(
            "probability must lie in (0, 1), got {prob}"
        )));
    }
    let opts = search_options(options);
    let cdf = |x: f64| kprime_cdf(params, x, &opts).map(|r| r.value - prob);
    let center = params.a;
    let width = 1.0f64.max(0.25 * params.a.abs());
    let (lo, hi, flo, fhi) =
        root::expand_bracket(&cdf, center - width, center + width, true, None)?;
    let x = root::brent(&cdf, lo, hi, flo, fhi)?;
    check_residual(cdf(x)?, "K-prime quantile")?;
    Ok(x)
}

/// Noncentrality `a` with `Pr(K'_{q,r}(a) < x) = prob`; the CDF is
/// nonincreasing in `a` because `Pr(K'_{q,r}(a) < x) = 1 - Pr(K'_{r,q}(x) < a)`.
pub fn kprime_ncp_solve(q: f64, r: f64, x: f64, prob: f64, options: &EvalOptions) -> Result<f64> {
    KPrimeParams::new(q, r, 0.0)?;
    options.validate()?;
    if !x.is_finite() {
        return Err(domain(format!("K-prime argument must be finite, got {x}")));
    }
    if !(prob > 0.0 && prob < 1.0) {
        return Err(domain(format!(
            "probability must lie in (0, 1), got {prob}"
        )));
    }
    let opts = search_options(options);
    let cdf = |a: f64| kprime_cdf(&KPrimeParams { q, r, a }, x, &opts).map(|rep| rep.value - prob);
    let width = 1.0f64.max(0.25 * x.abs());
    let (lo, hi, flo, fhi) = root::expand_bracket(&cdf, x - width, x + width, false, None)?;
    let a = root::brent(&cdf, lo, hi, flo, fhi)?;
    check_residual(cdf(a)?, "K-prime noncentrality")?;
    Ok(a)
}

fn check_residual(residual: f64, what: &str) -> Result<()> {
    if residual.abs() > ROOT_PROB_TOLERANCE {
        return Err(Error::SearchFailed(format!(
            "{what}: residual {residual:e} exceeds {ROOT_PROB_TOLERANCE:e}"
        )));
    }
    Ok(())
}
