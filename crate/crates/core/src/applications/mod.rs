//! Statistical procedures built on the two distributions: predictive
//! probabilities for t and F statistics under conjugate priors, replication
//! probabilities, and exact inference for simple and multiple correlations.

mod correlation;
mod predictive;

pub use correlation::{
    corr_confidence_limits, corr_sampling_cdf, corr_sampling_params, mcorr_sampling_cdf,
    mcorr_sampling_params,
};
pub use predictive::{
    p_rep, predictive_f_params, predictive_t_params, prob_replication_below,
    prob_replication_exceeds, PredictiveF, PredictiveT, PriorSpec,
};

use crate::error::{domain, Result};

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn check_open_unit(name: &str, v: f64, lower: f64) -> Result<()> {
    if v > lower && v < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must lie in ({lower}, 1), got {v}")))
    }
}
