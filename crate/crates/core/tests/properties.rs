use std::sync::Arc;

use bailey_zeta::bailey::{
    beta_from_alpha, chain_step, induced_alpha, induced_beta, verify_pair, verify_zeta_pair, zeta_to_classical,
    AtRational, BaileyPair, BaileyZetaPair, ChainParameters, FormalSeries, QAlgebra, Sequence,
};
use bailey_zeta::cli::RunConfiguration;
use bailey_zeta::limits::{self, Extrapolation};
use bailey_zeta::qcore::{BigCombinatorics, PrecisionContext, QMonomial};
use bailey_zeta::weights::{ArithmeticWeight, GaussianRational};
use proptest::prelude::*;
use rug::{Float, Rational};

type Table = Arc<Vec<Vec<(i64, i64)>>>;

/// `alpha_n = sum_k c_{n,k} q^k` with small rational coefficients.
fn table_sequence<A: QAlgebra + 'static>(table: Table) -> Sequence<A> {
    Sequence::new("random", move |alg: &A, n| {
        let mut acc = alg.zero();
        for (k, &(num, den)) in table.get(n).map(Vec::as_slice).unwrap_or(&[]).iter().enumerate() {
            let m = QMonomial::new(Rational::from((num, den)), k as i64);
            acc = alg.add(&acc, &alg.monomial(&m)?);
        }
        Ok(acc)
    })
}

fn coefficient_table(len: usize) -> impl Strategy<Value = Table> {
    prop::collection::vec(prop::collection::vec((-9i64..=9, 1i64..=6), 0..4), len).prop_map(Arc::new)
}

fn rational_q() -> impl Strategy<Value = Rational> {
    (1i64..=8, 2i64..=9).prop_filter_map("q in (0,1)", |(p, d)| (p < d).then(|| Rational::from((p, d))))
}

fn chain_rho() -> impl Strategy<Value = QMonomial> {
    prop_oneof![
        Just(QMonomial::constant(-1)),
        Just(QMonomial::new(-1, 1)),
        Just(QMonomial::q_power(2)),
        Just(QMonomial::constant(2)),
        Just(QMonomial::new(Rational::from((1, 2)), 1)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inversion_roundtrip(table in coefficient_table(7)) {
        let alg = FormalSeries::new(25);
        let a = QMonomial::one();
        let alpha = table_sequence::<FormalSeries>(table);
        let back = induced_alpha(&induced_beta(&alpha, &a), &a);
        for n in 0..=6 {
            prop_assert_eq!(back.term(&alg, n).unwrap(), alpha.term(&alg, n).unwrap());
        }
    }

    #[test]
    fn beta_is_linear(t1 in coefficient_table(5), t2 in coefficient_table(5), c in (-5i64..=5, 1i64..=4)) {
        let alg = FormalSeries::new(20);
        let a = QMonomial::q_power(1);
        let (x, y) = (table_sequence::<FormalSeries>(t1), table_sequence::<FormalSeries>(t2));
        let c = Rational::from(c);
        let (xs, ys) = (x.clone(), y.clone());
        let cc = c.clone();
        let combo = Sequence::new("combo", move |alg: &FormalSeries, n| {
            Ok(alg.add(&alg.mul(&alg.scalar(&cc), &xs.term(alg, n)?), &ys.term(alg, n)?))
        });
        for n in 0..=4 {
            let lhs = beta_from_alpha(&alg, &combo, &a, n).unwrap();
            let rhs = alg.add(
                &alg.mul(&alg.scalar(&c), &beta_from_alpha(&alg, &x, &a, n).unwrap()),
                &beta_from_alpha(&alg, &y, &a, n).unwrap(),
            );
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn chain_preserves_pairs(table in coefficient_table(5), rho1 in chain_rho(), rho2 in chain_rho(), shift_a in any::<bool>()) {
        // an all-zero alpha makes every comparison vacuous
        prop_assume!(table.iter().take(5).flatten().any(|&(num, _)| num != 0));
        let alg = FormalSeries::new(18);
        let a = if shift_a { QMonomial::q_power(1) } else { QMonomial::one() };
        let alpha = table_sequence::<FormalSeries>(table);
        let pair = BaileyPair::new("random", alpha.clone(), induced_beta(&alpha, &a), a);
        prop_assert!(verify_pair(&alg, &pair, 4).unwrap().is_verified());
        // a formal q cannot carry (aq/(rho1 rho2))^n with a negative power
        let m12 = pair.a.mul(&QMonomial::q_power(1)).div(&rho1).unwrap().div(&rho2).unwrap();
        prop_assume!(m12.power >= 0);
        let params = ChainParameters::new(rho1, rho2).unwrap();
        // parameters making (aq/rho;q)_n vanish are refused up front
        if let Ok(next) = chain_step(&pair, &params) {
            let rep = verify_pair(&alg, &next, 4).unwrap();
            prop_assert!(rep.is_verified(), "{:?}", rep.outcome);
        }
    }

    #[test]
    fn zeta_and_classical_verdicts_agree(
        table in coefficient_table(5),
        q in rational_q(),
        defect in prop::option::of((0usize..=4, 1i64..=5)),
    ) {
        let alg = AtRational::new(q).unwrap();
        let a = QMonomial::one();
        let alpha = table_sequence::<AtRational>(table);
        let honest = BaileyZetaPair::from_alpha("z", alpha.clone(), a.clone(), GaussianRational::from_integer(2));
        let zp = match defect {
            None => honest,
            Some((at, bump)) => {
                let beta = honest.beta.clone();
                let beta = Sequence::new("bumped", move |alg: &AtRational, n| {
                    let b = beta.term(alg, n)?;
                    Ok(if n == at { alg.add(&b, &alg.scalar(&Rational::from(bump))) } else { b })
                });
                BaileyZetaPair { beta, ..honest }
            }
        };
        let zeta_ok = verify_zeta_pair(&alg, &zp, 4).unwrap().is_verified();
        let classical_ok = verify_pair(&alg, &zeta_to_classical(&zp), 4).unwrap().is_verified();
        prop_assert_eq!(zeta_ok, classical_ok);
        prop_assert_eq!(zeta_ok, defect.is_none());
    }

    #[test]
    fn weights_are_periodic_and_bounded(values in prop::collection::vec((-4i64..=4, -4i64..=4), 1..7)) {
        let vals: Vec<GaussianRational> = values.iter().map(|&(re, im)| GaussianRational::new(re, im)).collect();
        let w = ArithmeticWeight::periodic(vals).unwrap();
        let p = w.period() as u64;
        for r in 1..=10 * p {
            let v = w.evaluate(r).unwrap();
            prop_assert_eq!(&v, &w.evaluate(r + p).unwrap());
            prop_assert!(v.norm_squared() <= w.bound_squared());
        }
    }

    #[test]
    fn a_n_is_linear_in_the_weight(n in 1u64..=200, s_re in 2i64..=4, s_im in -2i64..=2) {
        let ctx = PrecisionContext::with_bits(128).unwrap();
        let s = GaussianRational::new(s_re, s_im);
        let (x, y) = (ArithmeticWeight::mod4(), ArithmeticWeight::alternating());
        let sum = limits::a_n(&x.pointwise_sum(&y), &s, n, &ctx).unwrap();
        let parts = rug::Complex::with_val(256, limits::a_n(&x, &s, n, &ctx).unwrap() + limits::a_n(&y, &s, n, &ctx).unwrap());
        let diff = Float::with_val(256, rug::Complex::with_val(256, &parts - &sum).abs().real());
        let scale = Float::with_val(256, parts.abs().real()).max(&Float::with_val(256, Float::i_exp(1, -60)));
        // each side is rounded once; allow a few units in the last place
        prop_assert!(diff <= scale * Float::with_val(64, Float::i_exp(1, -124)));
    }

    #[test]
    fn reports_are_ordered_and_nonnegative(n0 in 1u64..=16, count in 1usize..=5, mod4 in any::<bool>()) {
        let ctx = PrecisionContext::with_bits(96).unwrap();
        let chi = if mod4 { ArithmeticWeight::mod4() } else { ArithmeticWeight::trivial() };
        let schedule = limits::geometric_schedule(n0, 2, count).unwrap();
        let accel = Extrapolation::default().clamped(count);
        let rep = limits::outer_limit(&chi, &GaussianRational::from_integer(2), &schedule, &accel, &ctx).unwrap();
        prop_assert!(rep.records.windows(2).all(|w| w[0].n < w[1].n));
        prop_assert!(rep.records.iter().all(|r| !r.err_est.is_sign_negative()));
        prop_assert!(!rep.err_est.is_sign_negative());
    }

    #[test]
    fn exponent_text_round_trips(re in (-50i64..=50, 1i64..=9), im in (-50i64..=50, 1i64..=9)) {
        let z = GaussianRational::new(Rational::from(re), Rational::from(im));
        let back: GaussianRational = z.to_string().parse().unwrap();
        prop_assert_eq!(back, z);
    }

    #[test]
    fn run_configuration_round_trips(
        n0 in 1u64..1000, factor in 2u64..5, count in 1usize..12, precision in 64u32..512,
        s in prop_oneof![Just("2"), Just("3/2+1i"), Just("4-2i")], json in any::<bool>(), timings in any::<bool>(),
    ) {
        let (n0, factor, count, precision) = (n0.to_string(), factor.to_string(), count.to_string(), precision.to_string());
        let mut args = vec!["bailey-zeta", "table", "--n0", &n0, "--factor", &factor, "--count", &count,
            "--precision", &precision, "--s", s];
        if json { args.extend(["--format", "json"]); }
        if !timings { args.push("--no-timings"); }
        let cfg = RunConfiguration::from_args(args).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        prop_assert_eq!(serde_json::from_str::<RunConfiguration>(&text).unwrap(), cfg);
    }
}

#[test]
fn binomial_domination() {
    let comb = BigCombinatorics::global();
    let mut observed_max = Float::new(128);
    let ctx = PrecisionContext::with_bits(128).unwrap();
    for n in 1..=256u64 {
        let central = comb.binomial(2 * n, n as i64);
        for r in 0..=n as i64 {
            assert!(comb.binomial(2 * n, n as i64 + r) <= central);
        }
        let ratio = limits::binomial_window_ratio(n, 0, &ctx);
        if ratio > observed_max {
            observed_max = ratio;
        }
    }
    // observed maximum of sqrt(n) C(2n, n) / 4^n over n <= 256
    assert!(observed_max <= 0.57, "{observed_max}");
}

#[test]
fn subtracted_values_stay_bounded() {
    let ctx = PrecisionContext::default();
    let schedule = limits::geometric_schedule(64, 2, 7).unwrap();
    let rep = limits::euler_mascheroni_regularized(&limits::default_delta_grid(), &schedule, &limits::REGULARIZATION_ACCEL, &ctx)
        .unwrap();
    let raw: Vec<f64> = rep.raw.iter().map(|z| z.real().to_f64()).collect();
    let sub: Vec<f64> = rep.subtracted.iter().map(|z| z.real().to_f64()).collect();
    assert!(raw.windows(2).all(|w| w[1] > 1.5 * w[0]), "{raw:?}");
    assert!(sub.iter().all(|v| v.abs() < 1.0), "{sub:?}");
}
