use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use piseries_core::exact_arith::{const_pi, sqrt_ball, Ball, QuadSurd};
use piseries_core::identity_db::*;
use piseries_core::kernels::Kernel;
use piseries_core::series_engine::*;
use piseries_core::Error;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ri(n: i64) -> BigRational {
    q(n, 1)
}

fn id(code: &str) -> Identity {
    Catalog::bundled().get(code).unwrap_or_else(|| panic!("{code} missing")).clone()
}

/// Series whose ratio has modulus one (1.8: ratio −1; 3.20: a complex pair
/// of the same modulus as the base).
const NONCONVERGENT: &[&str] = &["1.8", "3.20"];

fn f64_of(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap()
}

#[test]
fn evaluate_examples() {
    let r = evaluate(&id("1.2"), 50).unwrap();
    assert!(r.verdict.is_verified(), "{}", r.verdict);
    let pi = const_pi(60);
    assert!(r.rhs.overlaps(&pi.sqr().mul_i64(8)));

    let r = evaluate(&id("I1"), 30).unwrap();
    assert_eq!(r.verdict, Verdict::Verified { digits: 30 });
    assert!(r.lhs.overlaps(&Ball::from_int(24, 200).div(&pi).unwrap()));

    let x = id("4.11");
    let published = evaluate_with(&x, 30, &EvalOptions { published_rhs: true, ..EvalOptions::default() }).unwrap();
    assert!(published.verdict.is_refuted(), "{}", published.verdict);
    assert!(published.published_rhs);
    assert!(evaluate(&x, 30).unwrap().verdict.is_verified());

    assert!(matches!(evaluate(&id("I1"), 0), Err(Error::Domain(_))));
    for code in NONCONVERGENT {
        assert!(matches!(evaluate(&id(code), 20), Err(Error::NonConvergent(_))), "{code}");
    }
}

#[test]
fn lhs_balls_at_20_and_50_digits_overlap() {
    for x in &Catalog::bundled().identities {
        if NONCONVERGENT.contains(&x.code.as_str()) {
            assert!(lhs_ball(x, 20, MAX_TERMS).is_err());
            continue;
        }
        let (a, _, ga) = lhs_ball(x, 20, MAX_TERMS).unwrap();
        let (b, _, gb) = lhs_ball(x, 50, MAX_TERMS).unwrap();
        assert!(ga.is_none() && gb.is_none(), "{}: guard {ga:?} {gb:?}", x.code);
        assert!(a.overlaps(&b), "{}", x.code);
        assert!(a.rad_le_pow10(20) && b.rad_le_pow10(50), "{}", x.code);
    }
}

/// 20 identities across kernel families, bases of both signs and all
/// right-hand constants.
const TAIL_SAMPLE: &[&str] = &[
    "1.1", "1.4", "2.1", "2.10", "3.1", "3.11", "3.11'", "4.1", "4.15", "4.22", "5.1", "6.1", "6.8", "I1", "II1", "III1",
    "IV1", "V1", "VI2", "VII1",
];

#[test]
fn tail_bounds_contain_long_exact_partial_sums() {
    let widen = BigRational::new(BigInt::one(), BigInt::from(10).pow(58));
    for code in TAIL_SAMPLE {
        let x = id(code);
        let n = 200.max(terms_needed(&x, 60).unwrap() + 20);
        let exact = partial_sum_exact(&x, n).unwrap();
        let (ball, _, guard) = lhs_ball(&x, 50, MAX_TERMS).unwrap();
        assert!(guard.is_none(), "{code}");
        let dist = (ball.mid_rational() - &exact).abs();
        assert!(dist <= ball.rad_rational() + &widen, "{code}: exact partial sum of {n} terms lies outside the 50-digit ball");
    }
}

#[test]
fn convergence_ratio_examples() {
    assert_eq!(convergence_ratio(&id("I1")).unwrap(), QuadSurd::rational(q(-9, 16)));
    assert_eq!(convergence_ratio(&id("II1")).unwrap(), QuadSurd::new(q(1, 2), q(1, 18), BigInt::from(6)).unwrap());
    assert_eq!(convergence_ratio(&id("VI2")).unwrap(), QuadSurd::rational(q(-64, 125)));
    assert_eq!(convergence_ratio(&id("III13")).unwrap(), QuadSurd::rational(q(5997601, 6007401)));
    assert_eq!(convergence_ratio(&id("1.8")).unwrap(), QuadSurd::from_int(-1));
}

#[test]
fn terms_needed_examples() {
    let n = terms_needed(&id("I1"), 30).unwrap();
    assert!((100..1000).contains(&n), "{n}");
    let n = terms_needed(&id("III13"), 50).unwrap();
    assert!((10_000..100_000).contains(&n), "{n}");
    for x in &Catalog::bundled().identities {
        if !NONCONVERGENT.contains(&x.code.as_str()) {
            assert!(terms_needed(x, 0).unwrap() <= 2, "{}", x.code);
        }
    }
    assert!(terms_needed(&id("1.8"), 10).is_err());
}

#[test]
fn safety_ratio_is_midpoint() {
    assert_eq!(safety_ratio(0.5), 0.75);
    assert_eq!(safety_ratio(0.0), 0.5);
    assert!(safety_ratio(0.999) < 1.0);
}

#[test]
fn empirical_ratios_approach_exact_ratio() {
    for x in &Catalog::bundled().identities {
        let info = ratio_info(x).unwrap();
        if info.abs > 0.9 || info.oscillating {
            continue;
        }
        let Some(exact) = info.exact else { continue };
        let emp = empirical_ratio(x, 2000).unwrap();
        let dev = (emp - exact.to_f64()).abs();
        assert!(dev < 1e-3, "{}: t_2001/t_2000 = {emp}, limit {exact} (dev {dev:.2e})", x.code);
    }
}

#[test]
fn dual_of_example_identity() {
    let d = transform_dual(&id("I1")).unwrap();
    assert_eq!(d.weight, Weight::linear(48, 11));
    assert_eq!(d.base, ri(260));
    assert_eq!(d.rhs, RhsExpr::new(vec![(q(39, 8), BigInt::from(65))], Constant::InvPi).unwrap());
    let ex = id("EX4.1");
    assert_eq!((&d.weight, &d.base, &d.kernels, &d.rhs), (&ex.weight, &ex.base, &ex.kernels, &ex.rhs));
    assert_eq!(evaluate(&d, 30).unwrap().verdict, evaluate(&id("I1"), 30).unwrap().verdict);
}

#[test]
fn dual_preserves_verdicts_for_paired_forms() {
    for i in 11..=19 {
        let (a, b) = (id(&format!("3.{i}")), id(&format!("3.{i}'")));
        let t = transform_dual(&a).unwrap();
        let (vt, vb, va) = (evaluate(&t, 30).unwrap(), evaluate(&b, 30).unwrap(), evaluate(&a, 30).unwrap());
        assert!(va.verdict.is_verified(), "3.{i}");
        assert_eq!(vt.verdict, va.verdict, "3.{i}");
        assert_eq!(vb.verdict, va.verdict, "3.{i}'");
        assert!(vt.lhs.overlaps(&vb.lhs), "3.{i}: transform and catalog form disagree");
    }
}

#[test]
fn double_dual_has_the_same_value() {
    for code in ["I1", "II1", "3.12", "III1"] {
        let x = id(code);
        let twice = transform_dual(&transform_dual(&x).unwrap()).unwrap();
        let (a, _, _) = lhs_ball(&x, 30, MAX_TERMS).unwrap();
        let (b, _, _) = lhs_ball(&twice, 30, MAX_TERMS).unwrap();
        assert!(a.overlaps(&b), "{code}");
        assert!(evaluate(&twice, 30).unwrap().verdict.is_verified(), "{code}");
    }
}

#[test]
fn dual_rejects_unsupported_shapes() {
    assert!(matches!(transform_dual(&id("1.1")), Err(Error::Unsupported(_))));
    let mut x = id("I1");
    x.kernels = Kernel::parse_list("T(1,16)").unwrap();
    assert!(matches!(transform_dual(&x), Err(Error::Unsupported(_))));
}

#[test]
fn binomial_transform_examples() {
    let t = transform_binomial(&id("4.22")).unwrap();
    assert_eq!(t.weight, Weight::linear(16854, 985));
    assert_eq!(t.base, ri(-250000));
    assert!(evaluate(&t, 30).unwrap().verdict.is_verified());
    assert!(evaluate(&id("4.22'"), 30).unwrap().verdict.is_verified());

    // 4.15: both series agree at 20 digits once the transform's scale
    // factor is accounted for (sum_t · rhs_x = sum_x · rhs_t).
    let x = id("4.15");
    let t = transform_binomial(&x).unwrap();
    let (a, _, _) = lhs_ball(&x, 20, MAX_TERMS).unwrap();
    let (b, _, _) = lhs_ball(&t, 20, MAX_TERMS).unwrap();
    assert!(b.mul(&x.rhs_value(25)).overlaps(&a.mul(&t.rhs_value(25))));
    assert!(!b.overlaps(&a), "the transform rescales the sum");
    assert!(evaluate(&t, 20).unwrap().verdict.is_verified());

    // f ≡ 0 gives the zero identity.
    let mut z = id("4.22");
    z.weight = Weight::from_coeffs(vec![BigRational::zero()]);
    z.rhs = RhsExpr::new(vec![], Constant::InvPi).unwrap();
    let t = transform_binomial(&z).unwrap();
    assert!(t.weight.is_zero());
    assert!(t.rhs.is_zero());

    assert!(matches!(transform_binomial_with(&id("4.22"), &BigRational::zero()), Err(Error::Domain(_))));
}

#[test]
fn binomial_transform_rational_kernels_match_dual_form() {
    // The closed rational-binomial kernel equals DUAL(−1/4)[B(2,1) X] termwise.
    for (code, fam) in [("4.15", "AQ"), ("4.22", "AQ"), ("4.23", "BQ"), ("4.32", "CQ")] {
        let x = id(code);
        let t = transform_binomial_with(&x, &q(-1, 4)).unwrap();
        let generic = Kernel::parse_list(&format!("DUAL(-1/4)[B(2,1) {fam}]")).unwrap();
        for k in 0..12 {
            assert_eq!(
                piseries_core::kernels::kernels_product(&t.kernels, k).unwrap(),
                piseries_core::kernels::kernels_product(&generic, k).unwrap(),
                "{code} at {k}"
            );
        }
    }
}

/// `(bmn + 2b + (m−4)c)` weighted interchange, written out independently.
fn interchange_left(a: &[BigRational], b: &BigRational, c: &BigRational, m: &BigRational) -> BigRational {
    let binom = |n: i64, k: i64| -> BigRational {
        (0..k).fold(BigRational::one(), |p, i| p * ri(n - i) / ri(i + 1))
    };
    let base = ri(4) - m;
    (0..a.len() as i64)
        .map(|n| {
            let w = b * m * ri(n) + b * ri(2) + (m - ri(4)) * c;
            let inner: BigRational =
                (0..=n).map(|k| binom(n, k) * &a[k as usize] * if k % 2 == 0 { ri(1) } else { ri(-1) }).sum();
            w * binom(2 * n, n) / num_traits::pow(base.clone(), n as usize) * inner
        })
        .sum()
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-500i64..500, 1i64..50).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn double_sum_interchange_is_exact(
        a in prop::collection::vec(rational(), 1..=16),
        b in rational(),
        c in rational(),
        m in prop::sample::select(vec![-3i64, 5, 8]),
    ) {
        let m = ri(m);
        let (left, right) = dual_interchange_sides(&a, &b, &c, &m).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left, interchange_left(&a, &b, &c, &m));
    }
}

#[test]
fn inner_sum_closed_form_at_convergent_base() {
    // Only m = −3 of {−3, 5, 8} has |4/(4−m)| < 1; the others are checked
    // as finite interchanges above.
    let m = ri(-3);
    for (b, c) in [(ri(1), ri(0)), (ri(30), ri(7)), (q(-5, 2), q(3, 7))] {
        for k in 0..10i64 {
            // Exact partial sum over n ≤ k + 300; the neglected tail is below (4/7)^300.
            let mut t: BigRational = (0..k).fold(BigRational::one(), |p, i| p * ri((2 * i + 1) * (2 * i + 2)) / ri((i + 1) * (i + 1)))
                / num_traits::pow(ri(7), k as usize);
            let mut s = BigRational::zero();
            for n in k..k + 300 {
                s += (&b * &m * ri(n) + &b * ri(2) + (&m - ri(4)) * &c) * &t;
                t = t * ri((2 * n + 1) * (2 * n + 2)) / ri((n + 1) * (n + 1 - k)) / ri(7);
            }
            let cb = f64_of(&(0..k).fold(BigRational::one(), |p, i| p * ri((2 * i + 1) * (2 * i + 2)) / ri((i + 1) * (i + 1))));
            let closed = -7.0 * (7.0f64 / 3.0).sqrt() * (f64_of(&b) * k as f64 + f64_of(&c)) * cb / 3f64.powi(k as i32);
            let sum = f64_of(&s);
            let scale = closed.abs().max(1.0);
            assert!((sum - closed).abs() <= 1e-12 * scale, "k={k}: {sum} vs {closed}");
            let lib = dual_inner_sum_f64(k as u64, f64_of(&b), f64_of(&c), -3.0).unwrap();
            assert!((lib - closed).abs() <= 1e-9 * scale, "k={k}: library {lib} vs {closed}");
            assert!((dual_inner_closed_f64(k as u64, f64_of(&b), f64_of(&c), -3.0) - closed).abs() <= 1e-12 * scale);
        }
    }
    assert!(dual_inner_sum_f64(0, 1.0, 0.0, 5.0).is_err());
}

#[test]
fn normalize_linear_orientation() {
    // −160·(48k+11) normalizes to 48k+11 with factor −1/160.
    let (w, s) = normalize_linear(&ri(-7680), &ri(-1760));
    assert_eq!(w, Weight::linear(48, 11));
    assert_eq!(s, q(-1, 160));
    let (w, _) = normalize_linear(&ri(0), &q(-3, 4));
    assert_eq!(w, Weight::linear(0, 1));
}

#[test]
fn sqrt_scaling_of_dual_rhs_is_consistent() {
    // 24/π · (m−4)√((m−4)/m) at m = −256 after normalization gives 39√65/(8π).
    let lhs = Ball::from_int(24, 300).mul_rational(&q(-1, 160)).mul_i64(-260).mul(&sqrt_ball(&q(260, 256), 60).unwrap());
    let rhs = sqrt_ball(&ri(65), 60).unwrap().mul_rational(&q(39, 8));
    assert!(lhs.overlaps(&rhs));
}
