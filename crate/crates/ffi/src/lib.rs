//! C ABI over `kdist`.
//!
//! Every fallible function returns a [`KdistStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and can
//! be copied out with [`kdist_last_error_message`]. Options live behind an
//! opaque handle; passing a null handle means default options.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kdist::applications as app;
use kdist::kprime::{kprime_cdf, kprime_ncp_solve, kprime_quantile, KPrimeParams};
use kdist::ksquare::{ksquare_cdf, ksquare_quantile, KSquareParams};
use kdist::special;
use kdist::{Error, EvalOptions, EvalReport, Strategy, StrategyUsed};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KdistStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    NotConverged = 3,
    Underflow = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KdistStrategy {
    Method1 = 0,
    Method2 = 1,
    Hybrid = 2,
    Auto = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KdistStrategyUsed {
    Method1 = 0,
    Method2 = 1,
    Hybrid = 2,
    ClosedForm = 3,
}

/// Evaluation diagnostics; `value` is the CDF.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdistReport {
    pub value: f64,
    pub iterations: u64,
    pub achieved_bound: f64,
    pub start_index: u64,
    pub strategy_used: KdistStrategyUsed,
    pub underflow_adjusted: bool,
    pub converged: bool,
}

impl From<EvalReport> for KdistReport {
    fn from(r: EvalReport) -> Self {
        KdistReport {
            value: r.value,
            iterations: r.iterations,
            achieved_bound: r.achieved_bound,
            start_index: r.start_index,
            strategy_used: match r.strategy_used {
                StrategyUsed::Method1 => KdistStrategyUsed::Method1,
                StrategyUsed::Method2 => KdistStrategyUsed::Method2,
                StrategyUsed::Hybrid => KdistStrategyUsed::Hybrid,
                StrategyUsed::ClosedForm => KdistStrategyUsed::ClosedForm,
            },
            underflow_adjusted: r.underflow_adjusted,
            converged: r.converged,
        }
    }
}

/// Opaque evaluation options.
pub struct KdistOptions {
    inner: EvalOptions,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> KdistStatus {
    match e {
        Error::Domain(_) => KdistStatus::Domain,
        Error::NotConverged(_) | Error::SearchFailed(_) => KdistStatus::NotConverged,
        Error::Underflow { .. } => KdistStatus::Underflow,
    }
}

/// Runs `f`, storing its value through `out` and translating errors and
/// panics into status codes.
fn guard<T, F>(out: *mut T, f: F) -> KdistStatus
where
    F: FnOnce() -> kdist::Result<T>,
{
    if out.is_null() {
        set_last_error("output pointer is null".into());
        return KdistStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            // SAFETY: checked non-null above; the caller guarantees it is
            // valid for writes of `T`.
            unsafe { out.write(v) };
            clear_last_error();
            KdistStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic".into());
            KdistStatus::Panic
        }
    }
}

/// # Safety
/// `opts` must be null or a live handle from [`kdist_options_new`].
unsafe fn options_or_default(opts: *const KdistOptions) -> EvalOptions {
    if opts.is_null() {
        EvalOptions::default()
    } else {
        (*opts).inner
    }
}

/// New options with library defaults. Free with [`kdist_options_free`].
#[no_mangle]
pub extern "C" fn kdist_options_new() -> *mut KdistOptions {
    Box::into_raw(Box::new(KdistOptions {
        inner: EvalOptions::default(),
    }))
}

/// # Safety
/// `opts` must be null or a handle from [`kdist_options_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kdist_options_free(opts: *mut KdistOptions) {
    if !opts.is_null() {
        drop(Box::from_raw(opts));
    }
}

/// Applies `edit` to a copy of the options and keeps it only if valid.
unsafe fn edit_options(
    opts: *mut KdistOptions,
    edit: impl FnOnce(&mut EvalOptions),
) -> KdistStatus {
    if opts.is_null() {
        set_last_error("options handle is null".into());
        return KdistStatus::NullPointer;
    }
    let mut next = (*opts).inner;
    edit(&mut next);
    match next.validate() {
        Ok(()) => {
            (*opts).inner = next;
            clear_last_error();
            KdistStatus::Ok
        }
        Err(e) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
    }
}

/// # Safety
/// `opts` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn kdist_options_set_tolerance(
    opts: *mut KdistOptions,
    tolerance: f64,
) -> KdistStatus {
    edit_options(opts, |o| o.tolerance = tolerance)
}

/// `strategy` is one of the [`KdistStrategy`] values.
///
/// # Safety
/// `opts` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn kdist_options_set_strategy(
    opts: *mut KdistOptions,
    strategy: i32,
) -> KdistStatus {
    let s = match strategy {
        x if x == KdistStrategy::Method1 as i32 => Strategy::Method1,
        x if x == KdistStrategy::Method2 as i32 => Strategy::Method2,
        x if x == KdistStrategy::Hybrid as i32 => Strategy::Hybrid,
        x if x == KdistStrategy::Auto as i32 => Strategy::Auto,
        other => {
            set_last_error(format!("unknown strategy code {other}"));
            return KdistStatus::Domain;
        }
    };
    edit_options(opts, |o| o.strategy = s)
}

/// # Safety
/// `opts` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn kdist_options_set_max_iterations(
    opts: *mut KdistOptions,
    max_iterations: u64,
) -> KdistStatus {
    edit_options(opts, |o| o.max_iterations = max_iterations)
}

/// # Safety
/// `opts` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn kdist_options_set_hybrid_threshold(
    opts: *mut KdistOptions,
    threshold: f64,
) -> KdistStatus {
    edit_options(opts, |o| o.hybrid_threshold = threshold)
}

/// `Pr(K'_{q,r}(a) < x)`.
///
/// # Safety
/// `opts` null or live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_kprime_cdf(
    q: f64,
    r: f64,
    a: f64,
    x: f64,
    opts: *const KdistOptions,
    out: *mut KdistReport,
) -> KdistStatus {
    let o = options_or_default(opts);
    guard(out, || {
        Ok(kprime_cdf(&KPrimeParams::new(q, r, a)?, x, &o)?.into())
    })
}

/// `Pr(K²_{p,q,r}(a²) < x)`.
///
/// # Safety
/// `opts` null or live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_ksquare_cdf(
    p: f64,
    q: f64,
    r: f64,
    a2: f64,
    x: f64,
    opts: *const KdistOptions,
    out: *mut KdistReport,
) -> KdistStatus {
    let o = options_or_default(opts);
    guard(out, || {
        Ok(ksquare_cdf(&KSquareParams::new(p, q, r, a2)?, x, &o)?.into())
    })
}

/// # Safety
/// `opts` null or live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_kprime_quantile(
    q: f64,
    r: f64,
    a: f64,
    prob: f64,
    opts: *const KdistOptions,
    out: *mut f64,
) -> KdistStatus {
    let o = options_or_default(opts);
    guard(out, || {
        kprime_quantile(&KPrimeParams::new(q, r, a)?, prob, &o)
    })
}

/// # Safety
/// `opts` null or live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_ksquare_quantile(
    p: f64,
    q: f64,
    r: f64,
    a2: f64,
    prob: f64,
    opts: *const KdistOptions,
    out: *mut f64,
) -> KdistStatus {
    let o = options_or_default(opts);
    guard(out, || {
        ksquare_quantile(&KSquareParams::new(p, q, r, a2)?, prob, &o)
    })
}

/// Noncentrality `a` with `Pr(K'_{q,r}(a) < x) = prob`.
///
/// # Safety
/// `opts` null or live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_kprime_ncp_solve(
    q: f64,
    r: f64,
    x: f64,
    prob: f64,
    opts: *const KdistOptions,
    out: *mut f64,
) -> KdistStatus {
    let o = options_or_default(opts);
    guard(out, || kprime_ncp_solve(q, r, x, prob, &o))
}

/// # Safety
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_student_t_cdf(x: f64, df: f64, out: *mut f64) -> KdistStatus {
    guard(out, || special::student_t_cdf(x, df))
}

#[no_mangle]
pub extern "C" fn kdist_normal_cdf(x: f64) -> f64 {
    special::normal_cdf(x)
}

/// # Safety
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_p_rep(t1: f64, n1: u64, out: *mut f64) -> KdistStatus {
    guard(out, || app::p_rep(t1, n1))
}

/// `Pr(t > threshold)` for a replication; with `below` set, `Pr(t < threshold)`.
///
/// # Safety
/// `opts` null or live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_prob_replication(
    t1: f64,
    n1: u64,
    n: u64,
    threshold: f64,
    below: bool,
    opts: *const KdistOptions,
    out: *mut f64,
) -> KdistStatus {
    let o = options_or_default(opts);
    guard(out, || {
        if below {
            app::prob_replication_below(t1, n1, n, threshold, &o)
        } else {
            app::prob_replication_exceeds(t1, n1, n, threshold, &o)
        }
    })
}

/// `Pr(F > threshold)` under the predictive F distribution.
///
/// # Safety
/// `opts` null or live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_predictive_f_sf(
    f0: f64,
    g: u64,
    n0: f64,
    n: f64,
    threshold: f64,
    opts: *const KdistOptions,
    out: *mut f64,
) -> KdistStatus {
    let o = options_or_default(opts);
    guard(out, || {
        app::predictive_f_params(f0, g, n0, n)?.sf(threshold, &o)
    })
}

/// # Safety
/// `opts` null or live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_corr_sampling_cdf(
    n: u64,
    rho: f64,
    r_obs: f64,
    opts: *const KdistOptions,
    out: *mut f64,
) -> KdistStatus {
    let o = options_or_default(opts);
    guard(out, || app::corr_sampling_cdf(n, rho, r_obs, &o))
}

/// # Safety
/// `opts` null or live; `lo` and `hi` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_corr_confidence_limits(
    n: u64,
    r_obs: f64,
    level: f64,
    opts: *const KdistOptions,
    lo: *mut f64,
    hi: *mut f64,
) -> KdistStatus {
    if hi.is_null() {
        set_last_error("output pointer is null".into());
        return KdistStatus::NullPointer;
    }
    let o = options_or_default(opts);
    let mut upper = f64::NAN;
    let status = guard(lo, || {
        let (l, h) = app::corr_confidence_limits(n, r_obs, level, &o)?;
        upper = h;
        Ok(l)
    });
    if status == KdistStatus::Ok {
        *hi = upper;
    }
    status
}

/// # Safety
/// `opts` null or live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_mcorr_sampling_cdf(
    n: u64,
    m: u64,
    rho2: f64,
    r2_obs: f64,
    opts: *const KdistOptions,
    out: *mut f64,
) -> KdistStatus {
    let o = options_or_default(opts);
    guard(out, || app::mcorr_sampling_cdf(n, m, rho2, r2_obs, &o))
}

/// Copies the calling thread's last error message, NUL-terminated and
/// truncated to `len` bytes, into `buf`. Returns the full message length
/// excluding the terminator, or 0 when there is no message. `buf` may be
/// null to query the length.
///
/// # Safety
/// `buf` null or valid for `len` bytes of writes.
#[no_mangle]
pub unsafe extern "C" fn kdist_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            if !buf.is_null() && len > 0 {
                *buf = 0;
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn kdist_status_string(status: KdistStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        KdistStatus::Ok => b"ok\0",
        KdistStatus::NullPointer => b"null pointer\0",
        KdistStatus::Domain => b"domain error\0",
        KdistStatus::NotConverged => b"not converged\0",
        KdistStatus::Underflow => b"underflow\0",
        KdistStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}
