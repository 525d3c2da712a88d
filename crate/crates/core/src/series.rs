//! Evaluation of mixture series `Σ s^j g_j H_j(x)` where the `g_j` form a
//! probability distribution over `j` and each `H_j(x)` is an incomplete beta
//! ratio that decreases in `j`.
//!
//! Three summation strategies are provided:
//!
//! * [`evaluate_method1`]: forward accumulation from `j = 0`, where `H_j` is
//!   largest.
//! * [`evaluate_method2`]: seed at the mode of the weights and grow the
//!   window outward in both directions.
//! * [`evaluate_hybrid`]: choose between the two starting points and lower
//!   the start index by the incomplete beta argument when the seed at the
//!   mode is unusable or negligible.
//!
//! Every strategy stops on an upper bound for the mass left outside the
//! summed window. Iterations count the indices produced by recurrence; the
//! directly evaluated seeds are not counted, and at least one recurrence
//! step is always taken.

use serde::Serialize;

use crate::error::{Error, Result};

/// Log-space values below this are treated as unrepresentable seeds:
/// `ln(f64::MIN_POSITIVE)` plus a margin of 40 nats.
pub const LN_UNDERFLOW: f64 = -708.396_418_532_264_1 + 40.0;

/// Hard cap on repeated start-index lowering in the hybrid strategy.
pub const MAX_LOWERINGS: usize = 60;

/// Value of `s` in `Σ s^j g_j H_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignMode {
    AllPositive,
    Alternating,
}

/// Supplier of one concrete series.
///
/// The recurrence increment at `j` is `inc(j) = H_j - H_{j+step}`, so the
/// forward step is `H_{j+step} = H_j - inc(j)` and the backward step is
/// `H_{j-step} = H_j + inc(j-step)`.
pub trait MixtureSeries {
    /// Index stride of the recurrences (1 or 2).
    fn parity_step(&self) -> u64;
    fn sign_mode(&self) -> SignMode;
    /// Argument `z` of the underlying incomplete beta ratios.
    fn beta_argument(&self) -> f64;
    /// `ln g_j`, evaluated directly.
    fn log_weight_at(&self, j: u64) -> f64;
    /// `g_{j+step} / g_j`.
    fn weight_ratio_fwd(&self, j: u64) -> f64;
    /// `g_{j-step} / g_j`, for `j >= step`.
    fn weight_ratio_bwd(&self, j: u64) -> f64;
    /// `H_j(x)`, evaluated directly.
    fn h_at(&self, j: u64) -> f64;
    /// `ln inc(j)`, evaluated directly.
    fn log_h_increment_at(&self, j: u64) -> f64;
    /// `inc(j + step) / inc(j)`.
    fn h_increment_ratio(&self, j: u64) -> f64;
}

/// Requested summation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strategy {
    Method1,
    Method2,
    Hybrid,
    /// The hybrid tactic.
    Auto,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "method1" | "m1" | "1" => Ok(Strategy::Method1),
            "method2" | "m2" | "2" => Ok(Strategy::Method2),
            "hybrid" => Ok(Strategy::Hybrid),
            "auto" => Ok(Strategy::Auto),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

/// How a reported value was actually obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StrategyUsed {
    Method1,
    Method2,
    Hybrid,
    /// No series was needed (central case, support edge, `x = 0` anchor).
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Absolute error bound on the series sum.
    pub tolerance: f64,
    pub strategy: Strategy,
    pub max_iterations: u64,
    /// `H_k / H_0` below which the hybrid lowers its start index.
    pub hybrid_threshold: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            tolerance: 1e-12,
            strategy: Strategy::Auto,
            max_iterations: 200_000,
            hybrid_threshold: 0.01,
        }
    }
}

impl EvalOptions {
    pub fn with_tolerance(tolerance: f64) -> Self {
        EvalOptions {
            tolerance,
            ..Default::default()
        }
    }

    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(crate::error::domain(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations < 1 {
            return Err(crate::error::domain("max_iterations must be at least 1"));
        }
        if !(self.hybrid_threshold > 0.0 && self.hybrid_threshold < 1.0) {
            return Err(crate::error::domain(format!(
                "hybrid_threshold must lie in (0, 1), got {}",
                self.hybrid_threshold
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    /// Series sum (or, from the distribution modules, the assembled CDF).
    pub value: f64,
    pub iterations: u64,
    /// Final truncation bound.
    pub achieved_bound: f64,
    pub start_index: u64,
    pub strategy_used: StrategyUsed,
    /// The start index was moved away from the weight mode.
    pub underflow_adjusted: bool,
    pub converged: bool,
}

impl EvalReport {
    pub(crate) fn closed_form(value: f64) -> Self {
        EvalReport {
            value,
            iterations: 0,
            achieved_bound: 0.0,
            start_index: 0,
            strategy_used: StrategyUsed::ClosedForm,
            underflow_adjusted: false,
            converged: true,
        }
    }
}

/// Separate accumulators for even and odd indices, so an alternating sum
/// subtracts only once.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParityAccumulator {
    pub even: f64,
    pub odd: f64,
}

impl ParityAccumulator {
    pub fn add(&mut self, j: u64, term: f64) {
        if j.is_multiple_of(2) {
            self.even += term;
        } else {
            self.odd += term;
        }
    }

    pub fn total(&self, sign: SignMode) -> f64 {
        match sign {
            SignMode::AllPositive => self.even + self.odd,
            SignMode::Alternating => self.even - self.odd,
        }
    }
}

/// Running state of one index of the window.
#[derive(Debug, Clone, Copy)]
struct Term {
    g: f64,
    h: f64,
    /// Increment towards the neighbouring index of the same parity:
    /// `inc(j)` at the top of the window, `inc(j - step)` at the bottom.
    inc: f64,
}

/// A positive quantity that is held as a logarithm while it is below the
/// representable range and as a plain float once it is back in range.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    value: f64,
    ln: f64,
}

impl Scaled {
    fn from_ln(ln: f64) -> Self {
        if ln < LN_UNDERFLOW {
            Scaled { value: 0.0, ln }
        } else {
            Scaled {
                value: ln.exp(),
                ln,
            }
        }
    }

    fn scale(self, factor: f64) -> Self {
        if self.value > 0.0 {
            let value = self.value * factor;
            let ln = value.ln();
            if ln >= LN_UNDERFLOW {
                return Scaled { value, ln };
            }
            return Scaled::from_ln(self.value.ln() + factor.ln());
        }
        Scaled::from_ln(self.ln + factor.ln())
    }
}

/// Shared bookkeeping for the strategies: window sums and report assembly.
struct Accumulation {
    acc: ParityAccumulator,
    gsum: f64,
    /// Indices produced by recurrence (direct seeds are not counted).
    iterations: u64,
}

impl Accumulation {
    fn new() -> Self {
        Accumulation {
            acc: ParityAccumulator::default(),
            gsum: 0.0,
            iterations: 0,
        }
    }

    fn seed(&mut self, j: u64, g: f64, h: f64) {
        self.acc.add(j, g * h);
        self.gsum += g;
    }

    fn step(&mut self, j: u64, g: f64, h: f64) {
        self.seed(j, g, h);
        self.iterations += 1;
    }

    fn missing_mass(&self) -> f64 {
        (1.0 - self.gsum).max(0.0)
    }

    fn report(
        &self,
        sign: SignMode,
        bound: f64,
        start_index: u64,
        strategy_used: StrategyUsed,
        converged: bool,
    ) -> EvalReport {
        EvalReport {
            value: self.acc.total(sign),
            iterations: self.iterations,
            achieved_bound: bound,
            start_index,
            strategy_used,
            underflow_adjusted: false,
            converged,
        }
    }
}

fn not_converged(report: EvalReport) -> Error {
    Error::NotConverged(Box::new(report))
}

/// Forward accumulation from index 0.
///
/// Weights and `H` increments below the representable range are carried as
/// logarithms until the recurrence brings them back into range, so neither
/// a tiny `g_0` nor a tiny first increment stops the sum. The bound after
/// adding index `J` is `H_J (1 - Σ_{j<=J} g_j)`.
pub fn evaluate_method1<S: MixtureSeries + ?Sized>(
    series: &S,
    options: &EvalOptions,
) -> Result<EvalReport> {
    options.validate()?;
    run_method1(series, options, StrategyUsed::Method1)
}

fn run_method1<S: MixtureSeries + ?Sized>(
    series: &S,
    options: &EvalOptions,
    used: StrategyUsed,
) -> Result<EvalReport> {
    struct Chain {
        g: Scaled,
        h: f64,
        inc: Scaled,
    }
    let step = series.parity_step();
    let sign = series.sign_mode();
    let mut chains: Vec<Chain> = (0..step)
        .map(|j| Chain {
            g: Scaled::from_ln(series.log_weight_at(j)),
            h: series.h_at(j),
            inc: Scaled::from_ln(series.log_h_increment_at(j)),
        })
        .collect();
    if chains
        .iter()
        .any(|c| c.g.ln.is_nan() || c.inc.ln.is_nan() || c.h.is_nan())
    {
        return Err(Error::Underflow {
            index: 0,
            quantity: "recurrence seed",
        });
    }

    let mut sum = Accumulation::new();
    for (j, c) in chains.iter().enumerate() {
        sum.seed(j as u64, c.g.value, c.h);
    }
    // Index of the next term to produce, and of its chain predecessor.
    let mut j = step;
    loop {
        let c = (j % step) as usize;
        let prev = j - step;
        let chain = &mut chains[c];
        chain.h = (chain.h - chain.inc.value).max(0.0);
        chain.inc = chain.inc.scale(series.h_increment_ratio(prev));
        chain.g = chain.g.scale(series.weight_ratio_fwd(prev));
        sum.step(j, chain.g.value, chain.h);

        let bound = chain.h * sum.missing_mass();
        if bound <= options.tolerance {
            return Ok(sum.report(sign, bound, 0, used, true));
        }
        if sum.iterations >= options.max_iterations {
            return Err(not_converged(sum.report(sign, bound, 0, used, false)));
        }
        j += 1;
    }
}

/// Direct seed of the window at index `j`, checked for representability.
fn seed_term<S: MixtureSeries + ?Sized>(series: &S, j: u64, upward: bool) -> Result<Term> {
    let step = series.parity_step();
    let ln_g = series.log_weight_at(j);
    if ln_g < LN_UNDERFLOW {
        return Err(Error::Underflow {
            index: j,
            quantity: "weight seed",
        });
    }
    let h = series.h_at(j);
    if !(h > 0.0) || h.ln() < LN_UNDERFLOW {
        return Err(Error::Underflow {
            index: j,
            quantity: "H seed",
        });
    }
    let ln_inc = if upward {
        series.log_h_increment_at(j)
    } else if j >= step {
        series.log_h_increment_at(j - step)
    } else {
        // Nothing below this index; the increment is never used.
        0.0
    };
    if ln_inc < LN_UNDERFLOW {
        return Err(Error::Underflow {
            index: j,
            quantity: "H increment",
        });
    }
    Ok(Term {
        g: ln_g.exp(),
        h,
        inc: ln_inc.exp(),
    })
}

/// Seeds for every parity chain at `start .. start + step`, as
/// (bottom-of-window, top-of-window) states indexed by `j % step`.
fn seed_window<S: MixtureSeries + ?Sized>(
    series: &S,
    start: u64,
) -> Result<(Vec<Term>, Vec<Term>)> {
    let step = series.parity_step();
    let mut low = Vec::with_capacity(step as usize);
    let mut high = Vec::with_capacity(step as usize);
    for j in start..start + step {
        low.push(seed_term(series, j, false)?);
        high.push(seed_term(series, j, true)?);
    }
    // Chains are addressed by `j % step`.
    let shift = (start % step) as usize;
    low.rotate_right(shift);
    high.rotate_right(shift);
    Ok((low, high))
}

/// Bidirectional accumulation from `mode_index`.
///
/// While the window `[lo, hi]` has not reached 0 the bound is
/// `H_0 (1 - Σ_window g)`; afterwards it is `H_hi (1 - Σ_window g)`.
pub fn evaluate_method2<S: MixtureSeries + ?Sized>(
    series: &S,
    mode_index: u64,
    options: &EvalOptions,
) -> Result<EvalReport> {
    options.validate()?;
    if mode_index == 0 {
        return run_method1(series, options, StrategyUsed::Method2);
    }
    let h0 = series.h_at(0);
    run_method2(series, mode_index, h0, options, StrategyUsed::Method2)
}

fn run_method2<S: MixtureSeries + ?Sized>(
    series: &S,
    start: u64,
    h0: f64,
    options: &EvalOptions,
    used: StrategyUsed,
) -> Result<EvalReport> {
    let step = series.parity_step();
    let sign = series.sign_mode();
    let (mut low, mut high) = seed_window(series, start)?;

    let mut sum = Accumulation::new();
    let mut lo = start;
    let mut hi = start + step - 1;

    let bound_of = |sum: &Accumulation, lo: u64, h_top: f64| {
        let cap = if lo > 0 { h0 } else { h_top };
        cap * sum.missing_mass()
    };

    for j in start..start + step {
        let t = &low[(j % step) as usize];
        sum.seed(j, t.g, t.h);
    }

    let mut go_down = true;
    loop {
        if go_down && lo > 0 {
            let j = lo - 1;
            let c = (j % step) as usize;
            let above = low[c]; // index j + step
            let mut t = Term {
                g: above.g * series.weight_ratio_bwd(j + step),
                h: above.h + above.inc,
                inc: 0.0,
            };
            if j >= step {
                t.inc = above.inc / series.h_increment_ratio(j - step);
            }
            low[c] = t;
            lo = j;
            sum.step(j, t.g, t.h);
        } else {
            let j = hi + 1;
            let c = (j % step) as usize;
            let below = high[c]; // index j - step
            let t = Term {
                g: below.g * series.weight_ratio_fwd(j - step),
                h: (below.h - below.inc).max(0.0),
                inc: below.inc * series.h_increment_ratio(j - step),
            };
            high[c] = t;
            hi = j;
            sum.step(j, t.g, t.h);
        }
        go_down = !go_down;

        let h_top = high[(hi % step) as usize].h;
        let bound = bound_of(&sum, lo, h_top);
        if bound <= options.tolerance {
            return Ok(sum.report(sign, bound, start, used, true));
        }
        if sum.iterations >= options.max_iterations {
            return Err(not_converged(sum.report(sign, bound, start, used, false)));
        }
    }
}

/// Start index after one lowering step, `⌊k z⌋`.
pub fn lowered_start_index(mode_index: u64, z: f64) -> u64 {
    (mode_index as f64 * z).floor() as u64
}

/// Hybrid tactic:
///
/// 1. compare `g_0 H_0` with `g_k H_k` and start from the larger;
/// 2. if index 0 was chosen and its recurrence cannot start, move to `k`;
/// 3. if `k` is unusable, or `H_k / H_0` is below the threshold, replace `k`
///    by `⌊k z⌋` (repeatedly), `z` being the incomplete beta argument.
pub fn evaluate_hybrid<S: MixtureSeries + ?Sized>(
    series: &S,
    mode_index: u64,
    options: &EvalOptions,
) -> Result<EvalReport> {
    options.validate()?;
    let used = StrategyUsed::Hybrid;
    let adjusted = |mut r: EvalReport| {
        r.underflow_adjusted = r.start_index != mode_index;
        r
    };
    let h0 = series.h_at(0);
    if mode_index == 0 {
        return run_method1(series, options, used).map(adjusted);
    }

    let ln_at = |j: u64, h: f64| series.log_weight_at(j) + h.ln();
    let h_mode = series.h_at(mode_index);
    if ln_at(0, h0) >= ln_at(mode_index, h_mode) {
        match run_method1(series, options, used) {
            Err(Error::Underflow { .. }) => {}
            other => return other.map(adjusted),
        }
    }

    let z = series.beta_argument();
    let mut start = mode_index;
    for _ in 0..=MAX_LOWERINGS {
        if start == 0 {
            return run_method1(series, options, used).map(adjusted);
        }
        let h_start = if start == mode_index {
            h_mode
        } else {
            series.h_at(start)
        };
        if h_start >= options.hybrid_threshold * h0 {
            match run_method2(series, start, h0, options, used) {
                Err(Error::Underflow { .. }) => {}
                other => return other.map(adjusted),
            }
        }
        start = lowered_start_index(start, z);
    }
    Err(Error::Underflow {
        index: start,
        quantity: "start index after repeated lowering",
    })
}

/// Dispatch on `options.strategy`.
pub fn evaluate<S: MixtureSeries + ?Sized>(
    series: &S,
    mode_index: u64,
    options: &EvalOptions,
) -> Result<EvalReport> {
    match options.strategy {
        Strategy::Method1 => evaluate_method1(series, options),
        Strategy::Method2 => evaluate_method2(series, mode_index, options),
        Strategy::Hybrid | Strategy::Auto => evaluate_hybrid(series, mode_index, options),
    }
}
