//! Values frozen from independent computations in `tools/oracles.py`:
//! 50-digit series sums, quadrature, and Monte Carlo.

use kdist::applications::{corr_confidence_limits, corr_sampling_cdf, corr_sampling_params};
use kdist::kprime::{kprime_cdf, kprime_ncp_solve, kprime_quantile, KPrimeParams};
use kdist::ksquare::{ksquare_cdf, ksquare_quantile, KSquareParams};
use kdist::special::normal_cdf;
use kdist::EvalOptions;

fn tight() -> EvalOptions {
    EvalOptions::with_tolerance(1e-13)
}

#[test]
fn kprime_reference_table() {
    // (q, r, a, x, Pr(K' < x))
    let cases = [
        (5.0, 20.0, 10.0, 1.0, 0.000_677_524_338_702_358_5),
        (5.0, 20.0, 50.0, 11.0, 0.001_749_231_835_462_573),
        (50.0, 50.0, 50.0, 40.0, 0.061_245_577_611_386_73),
        (50.0, 5.0, 50.0, 40.0, 0.188_470_634_885_915_5),
        (50.0, 20.0, 30.0, 50.0, 0.992_149_209_942_326_2),
        (100.0, 5.0, 50.0, 40.0, 0.178_260_976_107_631_7),
        (100.0, 10.0, 40.0, 45.0, 0.637_715_258_186_284_1),
        (1000.0, 15.0, 50.0, 65.0, 0.882_086_766_041_260_0),
    ];
    for (q, r, a, x, want) in cases {
        let got = kprime_cdf(&KPrimeParams::new(q, r, a).unwrap(), x, &tight())
            .unwrap()
            .value;
        assert!(
            (got - want).abs() < 1e-11,
            "K'({q},{r},{a}) at {x}: {got} vs {want}"
        );
    }
}

#[test]
fn ksquare_reference_table() {
    // (p, q, r, a², x, Pr(K² < x))
    let cases = [
        (2.0, 20.0, 18.0, 46.667, 36.0, 0.777_087_345_325_622_9),
        (4.0, 11.0, 7.0, 4.7143, 0.19444, 0.012_572_524_171_475_79),
        (3.0, 99.0, 96.0, 891.0, 288.0, 0.438_225_598_051_894_5),
        (
            11.0,
            1199.0,
            1188.0,
            10791.0,
            972.0,
            0.433_940_873_300_810_9,
        ),
        (5.0, 999.0, 994.0, 3996.0, 795.2, 0.466_114_882_398_835_1),
        (5.0, 599.0, 594.0, 2396.0, 475.2, 0.456_225_414_122_655_3),
        (5.0, 899.0, 894.0, 3596.0, 715.2, 0.464_277_993_695_407_0),
        (
            11.0,
            1499.0,
            1488.0,
            2248.5,
            202.909,
            0.429_707_511_628_011_2,
        ),
        (
            11.0,
            1599.0,
            1588.0,
            2398.5,
            216.545,
            0.431_917_859_562_763_1,
        ),
        (
            11.0,
            1649.0,
            1638.0,
            2473.5,
            223.364,
            0.432_974_823_926_132_0,
        ),
        (4.0, 99.0, 95.0, 99.0, 11.6978, 0.006_287_025_268_591_827),
    ];
    for (p, q, r, a2, x, want) in cases {
        let params = KSquareParams::new(p, q, r, a2).unwrap();
        let got = ksquare_cdf(&params, x, &tight()).unwrap().value;
        assert!(
            (got - want).abs() < 1e-11,
            "K²({p},{q},{r},{a2}) at {x}: {got} vs {want}"
        );
    }
}

#[test]
fn ksquare_deep_lower_tail() {
    let params = KSquareParams::new(10.0, 20.0, 30.0, 500.0).unwrap();
    let got = ksquare_cdf(&params, 0.1, &tight()).unwrap();
    assert!(got.underflow_adjusted);
    assert!((got.value - 5.4585e-18).abs() < 2e-18, "{}", got.value);
}

/// K'_{q,r}(a) tends to the noncentral t_r(a) as q grows.
#[test]
fn large_q_matches_noncentral_t_quadrature() {
    // (r, a, x, noncentral t CDF)
    let points = [
        (5.0, 1.0, 1.5, 0.649_620_804_215_225),
        (10.0, 2.0, 1.0, 0.158_515_059_537_712),
        (10.0, 2.0, 3.0, 0.779_171_998_970_209),
        (20.0, 0.5, -0.5, 0.160_906_398_193_380),
        (3.0, 1.5, 2.0, 0.599_676_268_370_893),
        (30.0, 3.0, 2.5, 0.309_861_381_522_180),
        (8.0, -1.0, 0.5, 0.929_713_498_048_869),
        (15.0, 4.0, 5.0, 0.750_094_801_056_099),
        (50.0, 1.0, 0.2, 0.211_612_677_088_039),
        (4.0, 2.5, 6.0, 0.923_984_271_046_431),
    ];
    for (r, a, x, want) in points {
        let got = kprime_cdf(&KPrimeParams::new(1e7, r, a).unwrap(), x, &tight())
            .unwrap()
            .value;
        assert!(
            (got - want).abs() < 1e-5,
            "r={r} a={a} x={x}: {got} vs {want}"
        );
    }
}

#[test]
fn normal_reference() {
    assert!((normal_cdf(1.959_963_985) - 0.975).abs() < 1e-10);
    assert!((normal_cdf(-7.5) - 3.190_891_672_910_919e-14).abs() < 1e-26);
    assert!((normal_cdf(40.0) - 1.0).abs() < 1e-15);
}

#[test]
fn correlation_monte_carlo() {
    // 10^7 bivariate normal samples: 0.476452 with standard error 0.000158.
    let got = corr_sampling_cdf(20, 0.5, 0.5, &EvalOptions::default()).unwrap();
    assert!(got > 0.4 && got < 0.6);
    assert!((got - 0.476_452).abs() < 3.0 * 0.000_158, "{got}");
}

#[test]
fn correlation_limits_near_fisher_z() {
    let (lo, hi) = corr_confidence_limits(30, 0.6, 0.95, &EvalOptions::default()).unwrap();
    let z = 0.6f64.atanh();
    let half = 1.959_963_985 / (30.0f64 - 3.0).sqrt();
    let (flo, fhi) = ((z - half).tanh(), (z + half).tanh());
    assert!(lo < 0.6 && 0.6 < hi);
    assert!((lo - flo).abs() < 0.02, "{lo} vs {flo}");
    assert!((hi - fhi).abs() < 0.02, "{hi} vs {fhi}");
    let o = EvalOptions::default();
    assert!((corr_sampling_cdf(30, lo, 0.6, &o).unwrap() - 0.975).abs() < 1e-8);
    assert!((corr_sampling_cdf(30, hi, 0.6, &o).unwrap() - 0.025).abs() < 1e-8);
}

#[test]
fn noncentrality_solve_recovers_correlation_example() {
    let (kp, x) = corr_sampling_params(250, 0.8, 0.75).unwrap();
    let a = kprime_ncp_solve(249.0, 248.0, x, 0.022_699_687_632, &EvalOptions::default()).unwrap();
    assert!((a - kp.a).abs() < 1e-6, "{a} vs {}", kp.a);
    assert!((kp.a - 249f64.sqrt() * 0.8 / 0.6).abs() < 1e-12);
    // Rounded tail probability.
    let a = kprime_ncp_solve(249.0, 248.0, x, 0.0227, &EvalOptions::default()).unwrap();
    assert!((a - kp.a).abs() < 1e-3, "{a}");
    // Duality: Pr(K'_{r,q}(x) > a) = prob
    let dual = kprime_cdf(&KPrimeParams::new(248.0, 249.0, x).unwrap(), a, &tight())
        .unwrap()
        .value;
    assert!((1.0 - dual - 0.0227).abs() < 2e-10);

    let zero = kprime_ncp_solve(7.0, 9.0, 0.0, 0.5, &EvalOptions::default()).unwrap();
    assert!(zero.abs() < 1e-8);
}

#[test]
fn quantile_roundtrips() {
    let o = EvalOptions::default();
    let kp = KPrimeParams::new(18.0, 18.0, 1.10 / 2f64.sqrt()).unwrap();
    let prob = kprime_cdf(&kp, 1.226, &o).unwrap().value;
    assert!((kprime_quantile(&kp, prob, &o).unwrap() - 1.226).abs() < 1e-6);

    let kp = KPrimeParams::new(50.0, 20.0, 30.0).unwrap();
    let prob = kprime_cdf(&kp, 50.0, &o).unwrap().value;
    assert!((kprime_quantile(&kp, prob, &o).unwrap() - 50.0).abs() < 1e-3);

    let ks = KSquareParams::new(2.0, 20.0, 18.0, 46.667).unwrap();
    assert!((ksquare_quantile(&ks, 0.7771, &o).unwrap() - 36.0).abs() < 1e-2);
    let ks = KSquareParams::new(4.0, 11.0, 7.0, 4.7143).unwrap();
    let prob = ksquare_cdf(&ks, 0.19444, &o).unwrap().value;
    assert!((ksquare_quantile(&ks, prob, &o).unwrap() - 0.19444).abs() < 1e-8);
    // The four-decimal probability 0.0126 maps to 0.19466.
    assert!((ksquare_quantile(&ks, 0.0126, &o).unwrap() - 0.19444).abs() < 5e-4);
    let tiny = ksquare_quantile(&ks, 1e-9, &o).unwrap();
    assert!(tiny > 0.0 && tiny < 0.19444);
}
