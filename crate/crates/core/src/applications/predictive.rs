//! Predictive distributions of t and F statistics.
//!
//! With a conjugate normal / inverse chi-square prior summarised by
//! `(m0, s0, n0, q0)` and `T0 = (m0/s0) √(n0/2)`, the t statistic of a future
//! two-group experiment with `n` observations per group satisfies
//! `t ~ √(1 + n/n0) K'_{q0, 2n-2}(T0 / √(1 + n0/n))`.
//! For a one-way layout with `g` groups,
//! `F ~ (1 + n/n0)/(g-1) K²_{g-1, g n0 - g, g n - g}((g-1) F0 / (1 + n0/n))`.

use super::check_positive;
use crate::error::{domain, Result};
use crate::kprime::{kprime_cdf, KPrimeParams};
use crate::ksquare::{ksquare_cdf, KSquareParams};
use crate::series::EvalOptions;
use crate::special::t_cdf;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorSpec {
    /// Prior mean difference.
    pub m0: f64,
    /// Prior scale.
    pub s0: f64,
    /// Prior effective sample size per group.
    pub n0: f64,
    /// Prior degrees of freedom.
    pub q0: f64,
}

impl PriorSpec {
    pub fn new(m0: f64, s0: f64, n0: f64, q0: f64) -> Result<Self> {
        if !m0.is_finite() {
            return Err(domain(format!("prior mean must be finite, got {m0}")));
        }
        check_positive("s0", s0)?;
        check_positive("n0", n0)?;
        check_positive("q0", q0)?;
        Ok(PriorSpec { m0, s0, n0, q0 })
    }

    /// `T0 = (m0/s0) √(n0/2)`
    pub fn t0(&self) -> f64 {
        self.m0 / self.s0 * (0.5 * self.n0).sqrt()
    }

    pub fn predictive_t(&self, n: f64) -> Result<PredictiveT> {
        predictive_t_params(self.t0(), self.q0, self.n0, n)
    }
}

/// `t ~ scale · K'(kp)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictiveT {
    pub scale: f64,
    pub kp: KPrimeParams,
}

impl PredictiveT {
    /// `Pr(t < threshold)`
    pub fn cdf(&self, threshold: f64, options: &EvalOptions) -> Result<f64> {
        Ok(kprime_cdf(&self.kp, threshold / self.scale, options)?.value)
    }

    /// `Pr(t > threshold)`
    pub fn sf(&self, threshold: f64, options: &EvalOptions) -> Result<f64> {
        Ok(1.0 - self.cdf(threshold, options)?)
    }
}

pub fn predictive_t_params(t0: f64, q0: f64, n0: f64, n: f64) -> Result<PredictiveT> {
    if !t0.is_finite() {
        return Err(domain(format!("T0 must be finite, got {t0}")));
    }
    check_positive("q0", q0)?;
    check_positive("n0", n0)?;
    check_positive("n", n)?;
    if n <= 1.0 {
        return Err(domain(format!("n must exceed 1 so that 2n-2 > 0, got {n}")));
    }
    let kp = KPrimeParams::new(q0, 2.0 * n - 2.0, t0 / (1.0 + n0 / n).sqrt())?;
    Ok(PredictiveT {
        scale: (1.0 + n / n0).sqrt(),
        kp,
    })
}

fn replication(t1: f64, n1: u64, n: u64) -> Result<PredictiveT> {
    if n1 < 2 || n < 2 {
        return Err(domain(format!(
            "group sizes must be at least 2, got n1={n1}, n={n}"
        )));
    }
    let n1 = n1 as f64;
    predictive_t_params(t1, 2.0 * n1 - 2.0, n1, n as f64)
}

/// Probability that a same-size replication finds an effect of the same
/// sign: `Pr(t_{2n1-2} < T1/√2)`.
pub fn p_rep(t1: f64, n1: u64) -> Result<f64> {
    if n1 < 2 {
        return Err(domain(format!("group size must be at least 2, got {n1}")));
    }
    if t1.is_nan() {
        return Err(domain("T1 is NaN"));
    }
    Ok(t_cdf(t1 / std::f64::consts::SQRT_2, 2.0 * n1 as f64 - 2.0))
}

/// `Pr(t > threshold)` for a replication of `n` per group, the posterior of
/// the first experiment (noninformative prior) serving as prior.
pub fn prob_replication_exceeds(
    t1: f64,
    n1: u64,
    n: u64,
    threshold: f64,
    options: &EvalOptions,
) -> Result<f64> {
    replication(t1, n1, n)?.sf(threshold, options)
}

/// `Pr(t < threshold)` in the same setting.
pub fn prob_replication_below(
    t1: f64,
    n1: u64,
    n: u64,
    threshold: f64,
    options: &EvalOptions,
) -> Result<f64> {
    replication(t1, n1, n)?.cdf(threshold, options)
}

/// `F ~ scale · K²(ks)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictiveF {
    pub scale: f64,
    pub ks: KSquareParams,
}

impl PredictiveF {
    /// `Pr(F < threshold)`
    pub fn cdf(&self, threshold: f64, options: &EvalOptions) -> Result<f64> {
        Ok(ksquare_cdf(&self.ks, threshold / self.scale, options)?.value)
    }

    /// `Pr(F > threshold)`
    pub fn sf(&self, threshold: f64, options: &EvalOptions) -> Result<f64> {
        Ok(1.0 - self.cdf(threshold, options)?)
    }
}

pub fn predictive_f_params(f0: f64, g: u64, n0: f64, n: f64) -> Result<PredictiveF> {
    if !(f0 >= 0.0 && f0.is_finite()) {
        return Err(domain(format!(
            "F0 must be finite and nonnegative, got {f0}"
        )));
    }
    if g < 2 {
        return Err(domain(format!(
            "number of groups must be at least 2, got {g}"
        )));
    }
    check_positive("n0", n0)?;
    check_positive("n", n)?;
    let g = g as f64;
    let ks = KSquareParams::new(
        g - 1.0,
        g * n0 - g,
        g * n - g,
        (g - 1.0) * f0 / (1.0 + n0 / n),
    )?;
    Ok(PredictiveF {
        scale: (1.0 + n / n0) / (g - 1.0),
        ks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predictive_t_substitution() {
        let p = predictive_t_params(1.10, 18.0, 10.0, 10.0).unwrap();
        assert!((p.scale - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!((p.kp.q, p.kp.r), (18.0, 18.0));
        assert!((p.kp.a - 1.10 / 2f64.sqrt()).abs() < 1e-15);

        let p = predictive_t_params(1.10, 18.0, 10.0, 40.0).unwrap();
        assert!((p.scale - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(p.kp.r, 78.0);
        assert!((p.kp.a - 1.10 / 1.25f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn prior_spec_t0() {
        let prior = PriorSpec::new(2.0, 4.0, 8.0, 14.0).unwrap();
        assert_eq!(prior.t0(), 1.0);
        assert!(PriorSpec::new(0.0, 0.0, 1.0, 1.0).is_err());
        let p = prior.predictive_t(8.0).unwrap();
        assert_eq!(p.kp.q, 14.0);
        assert!((p.scale - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn p_rep_values() {
        assert!((p_rep(1.10, 10).unwrap() - 0.777).abs() < 5e-4);
        assert_eq!(p_rep(0.0, 10).unwrap(), 0.5);
        assert!((p_rep(-1.10, 10).unwrap() - 0.223).abs() < 5e-4);
        assert!(p_rep(1.0, 1).is_err());
    }

    #[test]
    fn replication_probabilities() {
        let o = EvalOptions::default();
        let up = prob_replication_exceeds(1.10, 10, 10, 1.734, &o).unwrap();
        let down = prob_replication_below(1.10, 10, 10, -1.734, &o).unwrap();
        // tools/oracles.py
        assert!((up - 0.333_686).abs() < 1e-6, "{up}");
        assert!((down - 0.027_279_5).abs() < 1e-6, "{down}");
        let at_zero = prob_replication_exceeds(1.10, 10, 10, 0.0, &o).unwrap();
        assert!((at_zero - p_rep(1.10, 10).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn predictive_f_substitution() {
        let f = predictive_f_params(4.0, 3, 10.0, 20.0).unwrap();
        assert_eq!(f.scale, 1.5);
        assert_eq!((f.ks.p, f.ks.q, f.ks.r), (2.0, 27.0, 57.0));
        assert!((f.ks.a2 - 2.0 * 4.0 / 1.5).abs() < 1e-14);
        let central = predictive_f_params(0.0, 3, 10.0, 10.0).unwrap();
        assert_eq!(central.ks.a2, 0.0);
        assert!(predictive_f_params(1.0, 1, 10.0, 10.0).is_err());
    }

    #[test]
    fn two_group_f_is_squared_t() {
        let o = EvalOptions::default();
        let (t0, n0, n) = (1.3, 12.0, 9.0);
        let t = predictive_t_params(t0, 2.0 * n0 - 2.0, n0, n).unwrap();
        let f = predictive_f_params(t0 * t0, 2, n0, n).unwrap();
        for c in [0.5, 2.0, 4.0, 9.0] {
            let via_f = f.sf(c, &o).unwrap();
            let root = f64::sqrt(c);
            let via_t = t.sf(root, &o).unwrap() + t.cdf(-root, &o).unwrap();
            assert!((via_f - via_t).abs() < 1e-10, "c={c}: {via_f} vs {via_t}");
        }
    }
}
