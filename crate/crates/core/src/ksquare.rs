//! The K-square distribution `K²_{p,q,r}(a²)`.
//!
//! `Pr(K² < x) = Σ g_j H_j(x)` where the `g_j` are negative binomial
//! probabilities with parameters `q/(q+a²)` and `q/2`, and
//! `H_j(x) = I_{px/(r+px)}(p/2 + j, r/2)`. Recurrences step by one.

use crate::error::{domain, Error, Result};
use crate::root;
use crate::series::{self, EvalOptions, EvalReport, MixtureSeries, SignMode};
use crate::special::{inc_beta_xy, ln_beta_power};

const SEARCH_TOLERANCE: f64 = 1e-13;
const ROOT_PROB_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KSquareParams {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    /// Noncentrality `a²`.
    pub a2: f64,
}

impl KSquareParams {
    pub fn new(p: f64, q: f64, r: f64, a2: f64) -> Result<Self> {
        let k = KSquareParams { p, q, r, a2 };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("q", self.q), ("r", self.r)] {
            if !(v > 0.0) {
                return Err(domain(format!("K-square {name} must be positive, got {v}")));
            }
        }
        if !(self.a2 >= 0.0 && self.a2.is_finite()) {
            return Err(domain(format!(
                "K-square noncentrality must be finite and nonnegative, got {}",
                self.a2
            )));
        }
        Ok(())
    }

    /// `(px/(r+px), r/(r+px))`
    fn beta_arguments(&self, x: f64) -> (f64, f64) {
        let px = self.p * x;
        if px.is_infinite() {
            (1.0, 0.0)
        } else {
            (px / (self.r + px), self.r / (self.r + px))
        }
    }
}

/// Series for `a² > 0`, `x > 0`.
#[derive(Debug, Clone)]
pub struct KSquareSeries {
    half_p: f64,
    half_q: f64,
    half_r: f64,
    z: f64,
    y: f64,
    w_p: f64,
    w_q: f64,
}

impl KSquareSeries {
    pub fn new(params: &KSquareParams, x: f64) -> Self {
        let (z, y) = params.beta_arguments(x);
        let KSquareParams { p, q, r, a2 } = *params;
        KSquareSeries {
            half_p: 0.5 * p,
            half_q: 0.5 * q,
            half_r: 0.5 * r,
            z,
            y,
            w_p: q / (q + a2),
            w_q: a2 / (q + a2),
        }
    }
}

impl MixtureSeries for KSquareSeries {
    fn parity_step(&self) -> u64 {
        1
    }

    fn sign_mode(&self) -> SignMode {
        SignMode::AllPositive
    }

    fn beta_argument(&self) -> f64 {
        self.z
    }

    fn log_weight_at(&self, j: u64) -> f64 {
        if j == 0 {
            return self.half_q * self.w_p.ln();
        }
        let j = j as f64;
        ln_beta_power(self.w_p, self.w_q, self.half_q, j) - j.ln()
    }

    fn weight_ratio_fwd(&self, j: u64) -> f64 {
        let j = j as f64;
        (self.half_q + j) / (j + 1.0) * self.w_q
    }

    fn weight_ratio_bwd(&self, j: u64) -> f64 {
        let j = j as f64;
        j / (self.half_q + j - 1.0) / self.w_q
    }

    fn h_at(&self, j: u64) -> f64 {
        inc_beta_xy(self.z, self.y, self.half_p + j as f64, self.half_r)
    }

    fn log_h_increment_at(&self, j: u64) -> f64 {
        let shape = self.half_p + j as f64;
        ln_beta_power(self.z, self.y, shape, self.half_r) - shape.ln()
    }

    fn h_increment_ratio(&self, j: u64) -> f64 {
        let j = j as f64;
        (self.half_p + self.half_r + j) / (self.half_p + j + 1.0) * self.z
    }
}

/// Mode of the negative binomial weights, `max(0, ⌊a²(q-2)/(2q)⌋)`.
pub fn ksquare_mode_index(params: &KSquareParams) -> u64 {
    let m = (params.a2 * (params.q - 2.0) / (2.0 * params.q)).floor();
    if m > 0.0 {
        m as u64
    } else {
        0
    }
}

/// `Pr(K²_{p,q,r}(a²) < x)`; the report's `value` is the CDF.
pub fn ksquare_cdf(params: &KSquareParams, x: f64, options: &EvalOptions) -> Result<EvalReport> {
    params.validate()?;
    options.validate()?;
    if x.is_nan() {
        return Err(domain("K-square argument x is NaN"));
    }
    if x <= 0.0 {
        return Ok(EvalReport::closed_form(0.0));
    }
    if x.is_infinite() {
        return Ok(EvalReport::closed_form(1.0));
    }
    if params.a2 == 0.0 {
        let (z, y) = params.beta_arguments(x);
        return Ok(EvalReport::closed_form(inc_beta_xy(
            z,
            y,
            0.5 * params.p,
            0.5 * params.r,
        )));
    }
    let s = KSquareSeries::new(params, x);
    let mut rep = series::evaluate(&s, ksquare_mode_index(params), options)?;
    rep.value = rep.value.clamp(0.0, 1.0);
    Ok(rep)
}

/// `x > 0` with `Pr(K²_{p,q,r}(a²) < x) = prob`.
pub fn ksquare_quantile(params: &KSquareParams, prob: f64, options: &EvalOptions) -> Result<f64> {
    params.validate()?;
    options.validate()?;
    if !(prob > 0.0 && prob < 1.0) {
        return Err(domain(format!(
            "probability must lie in (0, 1), got {prob}"
        )));
    }
    let opts = EvalOptions {
        tolerance: options.tolerance.min(SEARCH_TOLERANCE),
        ..*options
    };
    let cdf = |x: f64| ksquare_cdf(params, x, &opts).map(|r| r.value - prob);
    // K² is centred near (1 + a²/p) for large r.
    let guess = 1.0 + params.a2 / params.p;
    let (lo, hi, flo, fhi) = root::expand_bracket(&cdf, 0.5 * guess, 1.5 * guess, true, Some(0.0))?;
    let x = root::brent(&cdf, lo, hi, flo, fhi)?;
    let residual = cdf(x)?;
    if residual.abs() > ROOT_PROB_TOLERANCE {
        return Err(Error::SearchFailed(format!(
            "K-square quantile: residual {residual:e} exceeds {ROOT_PROB_TOLERANCE:e}"
        )));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{evaluate_method1, evaluate_method2};

    fn params(p: f64, q: f64, r: f64, a2: f64) -> KSquareParams {
        KSquareParams::new(p, q, r, a2).unwrap()
    }

    #[test]
    fn mode_index_examples() {
        assert_eq!(ksquare_mode_index(&params(2.0, 20.0, 18.0, 46.667)), 21);
        assert_eq!(ksquare_mode_index(&params(1.0, 2.0, 1.0, 100.0)), 0);
        assert_eq!(
            ksquare_mode_index(&params(11.0, 1199.0, 1188.0, 10791.0)),
            5386
        );
    }

    #[test]
    fn mode_is_argmax_of_weights() {
        let p = params(11.0, 1199.0, 1188.0, 10791.0);
        let s = KSquareSeries::new(&p, 972.0);
        let argmax = (0..20_000u64)
            .max_by(|&i, &j| s.log_weight_at(i).partial_cmp(&s.log_weight_at(j)).unwrap())
            .unwrap();
        assert!((argmax as i64 - ksquare_mode_index(&p) as i64).abs() <= 1);
    }

    #[test]
    fn negative_binomial_weights_sum_to_one() {
        let s = KSquareSeries::new(&params(3.0, 9.5, 7.0, 12.0), 2.0);
        let total: f64 = (0..3000).map(|j| s.log_weight_at(j).exp()).sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn increments_match_h_differences() {
        let s = KSquareSeries::new(&params(3.0, 9.5, 7.0, 12.0), 2.0);
        for j in [0u64, 1, 3, 10, 25] {
            let diff = s.h_at(j) - s.h_at(j + 1);
            assert!((diff - s.log_h_increment_at(j).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn support_and_central_case() {
        let o = EvalOptions::default();
        assert_eq!(
            ksquare_cdf(&params(3.0, 7.0, 12.0, 0.0), 0.0, &o)
                .unwrap()
                .value,
            0.0
        );
        assert_eq!(
            ksquare_cdf(&params(3.0, 7.0, 12.0, 5.0), -1.0, &o)
                .unwrap()
                .value,
            0.0
        );
        // F_{2,r}: 1 - (1 + 2x/r)^(-r/2)
        let got = ksquare_cdf(&params(2.0, 7.0, 6.0, 0.0), 1.5, &o)
            .unwrap()
            .value;
        let want = 1.0 - (1.0f64 + 2.0 * 1.5 / 6.0).powf(-3.0);
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn first_table_row_both_methods() {
        let p = params(2.0, 20.0, 18.0, 46.667);
        let s = KSquareSeries::new(&p, 36.0);
        let o = EvalOptions::with_tolerance(1e-4);
        let m1 = evaluate_method1(&s, &o).unwrap();
        let m2 = evaluate_method2(&s, ksquare_mode_index(&p), &o).unwrap();
        assert!((m1.value - 0.7771).abs() < 1e-4, "{}", m1.value);
        assert!((m2.value - 0.7771).abs() < 1e-4, "{}", m2.value);
    }

    #[test]
    fn quantile_roundtrip() {
        let p = params(4.0, 11.0, 7.0, 4.7143);
        let x = ksquare_quantile(&p, 0.0126, &EvalOptions::default()).unwrap();
        assert!((x - 0.19444).abs() < 1e-3, "{x}");
    }

    #[test]
    fn invalid_inputs() {
        assert!(KSquareParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(KSquareParams::new(1.0, 1.0, 1.0, -1.0).is_err());
        let p = params(1.0, 2.0, 3.0, 4.0);
        assert!(ksquare_cdf(&p, f64::NAN, &EvalOptions::default()).is_err());
        assert!(ksquare_quantile(&p, 0.0, &EvalOptions::default()).is_err());
    }
}
