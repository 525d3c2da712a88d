//! Method 1 / Method 2 / hybrid iteration counts on the two reference
//! tables of inputs, as CSV rows.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::kprime::{kprime_cdf, kprime_mode_index, KPrimeParams, KPrimeSeries};
use crate::ksquare::{ksquare_cdf, ksquare_mode_index, KSquareParams, KSquareSeries};
use crate::series::{
    evaluate_hybrid, evaluate_method1, evaluate_method2, EvalOptions, EvalReport, MixtureSeries,
    Strategy,
};

/// K-prime inputs `(x, q, r, a)`.
pub const KPRIME_TABLE: [(f64, f64, f64, f64); 8] = [
    (1.0, 5.0, 20.0, 10.0),
    (11.0, 5.0, 20.0, 50.0),
    (40.0, 50.0, 50.0, 50.0),
    (40.0, 50.0, 5.0, 50.0),
    (50.0, 50.0, 20.0, 30.0),
    (40.0, 100.0, 5.0, 50.0),
    (45.0, 100.0, 10.0, 40.0),
    (65.0, 1000.0, 15.0, 50.0),
];

/// K-square inputs `(x, p, q, r, a²)`.
pub const KSQUARE_TABLE: [(f64, f64, f64, f64, f64); 11] = [
    (36.0, 2.0, 20.0, 18.0, 46.667),
    (0.19444, 4.0, 11.0, 7.0, 4.7143),
    (288.0, 3.0, 99.0, 96.0, 891.0),
    (972.0, 11.0, 1199.0, 1188.0, 10791.0),
    (795.2, 5.0, 999.0, 994.0, 3996.0),
    (475.2, 5.0, 599.0, 594.0, 2396.0),
    (715.2, 5.0, 899.0, 894.0, 3596.0),
    (202.909, 11.0, 1499.0, 1488.0, 2248.5),
    (216.545, 11.0, 1599.0, 1588.0, 2398.5),
    (223.364, 11.0, 1649.0, 1638.0, 2473.5),
    (11.6978, 4.0, 99.0, 95.0, 99.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dist {
    Kprime,
    Ksquare,
}

/// One CSV row. Iteration cells are empty when that strategy failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub dist: Dist,
    pub x: f64,
    pub p: Option<f64>,
    pub q: f64,
    pub r: f64,
    /// `a` for K-prime, `a²` for K-square.
    pub ncp: f64,
    pub cdf: f64,
    pub m1_iters: Option<u64>,
    pub m2_iters: Option<u64>,
    pub hybrid_iters: Option<u64>,
    pub gain_pct: Option<i64>,
}

/// `100 (M1 - M2) / M1`, rounded; negative when Method 1 needs fewer
/// iterations.
pub fn gain_pct(m1: u64, m2: u64) -> Option<i64> {
    if m1 == 0 {
        return None;
    }
    Some((100.0 * (m1 as f64 - m2 as f64) / m1 as f64).round() as i64)
}

fn counts<S: MixtureSeries>(s: &S, mode: u64, tol: f64) -> [Option<u64>; 3] {
    let o = EvalOptions::with_tolerance(tol);
    let it = |r: Result<EvalReport>| r.ok().map(|r| r.iterations);
    [
        it(evaluate_method1(s, &o)),
        it(evaluate_method2(s, mode, &o)),
        it(evaluate_hybrid(s, mode, &o)),
    ]
}

fn row(
    dist: Dist,
    (x, p, q, r, ncp): (f64, Option<f64>, f64, f64, f64),
    cdf: f64,
    [m1, m2, h]: [Option<u64>; 3],
) -> BenchRow {
    let gain = match (m1, m2) {
        (Some(a), Some(b)) => gain_pct(a, b),
        _ => None,
    };
    BenchRow {
        dist,
        x,
        p,
        q,
        r,
        ncp,
        cdf,
        m1_iters: m1,
        m2_iters: m2,
        hybrid_iters: h,
        gain_pct: gain,
    }
}

pub fn kprime_rows(tol: f64) -> Result<Vec<BenchRow>> {
    let o = EvalOptions::with_tolerance(tol).strategy(Strategy::Auto);
    KPRIME_TABLE
        .iter()
        .map(|&(x, q, r, a)| {
            let params = KPrimeParams::new(q, r, a)?;
            let cdf = kprime_cdf(&params, x, &o)?.value;
            let s = KPrimeSeries::new(&params, x);
            let c = counts(&s, kprime_mode_index(&params), tol);
            Ok(row(Dist::Kprime, (x, None, q, r, a), cdf, c))
        })
        .collect()
}

pub fn ksquare_rows(tol: f64) -> Result<Vec<BenchRow>> {
    let o = EvalOptions::with_tolerance(tol).strategy(Strategy::Auto);
    KSQUARE_TABLE
        .iter()
        .map(|&(x, p, q, r, a2)| {
            let params = KSquareParams::new(p, q, r, a2)?;
            let cdf = ksquare_cdf(&params, x, &o)?.value;
            let s = KSquareSeries::new(&params, x);
            let c = counts(&s, ksquare_mode_index(&params), tol);
            Ok(row(Dist::Ksquare, (x, Some(p), q, r, a2), cdf, c))
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gain_sign_convention() {
        assert_eq!(gain_pct(9, 119), Some(-1222));
        assert_eq!(gain_pct(5953, 1844), Some(69));
        assert_eq!(gain_pct(57, 57), Some(0));
        assert_eq!(gain_pct(0, 3), None);
    }

    #[test]
    fn csv_header_and_empty_cells() {
        let r = row(
            Dist::Kprime,
            (1.0, None, 5.0, 20.0, 10.0),
            0.25,
            [Some(9), None, Some(9)],
        );
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("dist,x,p,q,r,ncp,cdf,m1_iters,m2_iters,hybrid_iters,gain_pct")
        );
        assert_eq!(lines.next(), Some("kprime,1.0,,5.0,20.0,10.0,0.25,9,,9,"));
    }
}
