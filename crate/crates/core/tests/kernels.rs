use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use piseries_core::kernels::*;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ri(n: i64) -> BigRational {
    q(n, 1)
}

/// `C(n,k)` over the integers by the multiplicative formula, 0 outside `0 ≤ k ≤ n`.
fn c(n: i64, k: i64) -> BigRational {
    if k < 0 || n < 0 || k > n {
        return BigRational::zero();
    }
    cx(&ri(n), k)
}

/// `C(x,k)` for rational `x` as the falling product over `k!`.
fn cx(x: &BigRational, k: i64) -> BigRational {
    let mut p = BigRational::one();
    for i in 0..k {
        p = p * (x - ri(i)) / ri(i + 1);
    }
    p
}

fn pw(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

fn sign(k: i64) -> BigRational {
    if k % 2 == 0 {
        ri(1)
    } else {
        ri(-1)
    }
}

fn one(s: &str) -> Kernel {
    let mut v = Kernel::parse_list(s).unwrap();
    assert_eq!(v.len(), 1, "{s}");
    v.pop().unwrap()
}

fn sum(n: i64, f: impl Fn(i64) -> BigRational) -> BigRational {
    (0..=n).map(f).sum()
}

/// Defining sums written out independently of the library.
fn oracle(family: &str, x: &BigRational, n: i64) -> BigRational {
    match family {
        "A" => sum(n, |k| c(n, k).pow(2) * c(n + k, k) * pw(x, n - k)),
        "S1" => sum(n, |k| c(n, k) * c(2 * k, k) * c(2 * n - 2 * k, n - k) * pw(x, n - k)),
        "S2" => sum(n, |k| c(2 * k, k).pow(2) * c(2 * n - 2 * k, n - k) * pw(x, n - k)),
        "W" => sum(n, |k| c(n + k, 2 * k) * c(2 * k, k).pow(2) * c(2 * n - 2 * k, n - k) * pw(x, -(n + k))),
        "FP" => sum(n, |k| c(n, k).pow(2) * c(2 * k, n) * pw(x, 2 * k - n)),
        "FM" => sum(n, |k| c(n, k).pow(2) * c(2 * k, n) * sign(k) * pw(x, 2 * k - n)),
        "G" => sum(n, |k| c(n, k).pow(2) * c(2 * k, k) * pw(x, k)),
        "S5" => sum(n, |k| c(n, k) * c(n + 2 * k, 2 * k) * c(2 * k, k) * pw(x, -(n + k))),
        "P6" => sum(n, |k| c(2 * k, k).pow(2) * c(k, n - k) * pw(x, n - k)),
        "DOMB" => sum(n, |k| c(n, k).pow(2) * c(2 * k, k) * c(2 * n - 2 * k, n - k) * pw(x, k)),
        "H" => sum(n, |k| c(n, k) * c(2 * k, n) * c(2 * k, k) * c(2 * n - 2 * k, n - k) * pw(x, 2 * k - n)),
        _ => unreachable!(),
    }
}

fn clf_oracle(n: i64) -> BigRational {
    sum(n, |k| c(2 * k, k).pow(2) * c(2 * n - 2 * k, n - k).pow(2) / c(n, k))
}

fn s6_oracle(n: i64) -> BigRational {
    sum(n, |k| pw(&ri(5), k) * c(2 * k, k).pow(2) * c(2 * n - 2 * k, n - k).pow(2) / c(n, k))
}

fn alt_conv(x: &BigRational, y: &BigRational, n: i64) -> BigRational {
    sum(n, |k| sign(k) * cx(x, k).pow(2) * cx(y, n - k))
}

#[test]
fn trinomial_examples() {
    for (b, c) in [(1, 1), (7, 3), (-2, 5)] {
        let (b, c) = (BigInt::from(b), BigInt::from(c));
        assert_eq!(trinomial_t(0, &b, &c), BigInt::one());
        assert_eq!(trinomial_t(1, &b, &c), b);
    }
    let one = BigInt::one();
    let seq: Vec<i64> = (0..6).map(|n| i64::try_from(trinomial_t(n, &one, &one)).unwrap()).collect();
    assert_eq!(seq, [1, 1, 3, 7, 19, 51]);
    let stream = kernel_stream(&Kernel::parse_list("T(1,1)").unwrap()[0], 5).unwrap();
    assert_eq!(stream, [1, 1, 3, 7, 19, 51].map(ri));
}

#[test]
fn trinomial_recurrence_matches_direct_sum() {
    for b in -3..=3i64 {
        for c in -3..=3i64 {
            let (bb, cc) = (BigInt::from(b), BigInt::from(c));
            let s = kernel_stream(&one(&format!("T({b},{c})")), 200).unwrap();
            for (n, v) in s.iter().enumerate() {
                let direct = trinomial_t_direct(n as u64, &bb, &cc);
                assert_eq!(v, &BigRational::from_integer(direct.clone()), "T_{n}({b},{c})");
                assert_eq!(trinomial_t(n as u64, &bb, &cc), direct);
            }
        }
    }
}

#[test]
fn trinomial_index_maps_and_powers() {
    let (b, c) = (BigInt::from(7), BigInt::from(1));
    let t2 = kernel_stream(&one("T2(7,1)"), 10).unwrap();
    let t3 = kernel_stream(&one("T3(7,1)"), 10).unwrap();
    let cube = kernel_stream(&one("T(7,1)^3"), 10).unwrap();
    for k in 0..=10u64 {
        assert_eq!(t2[k as usize], BigRational::from_integer(trinomial_t_direct(2 * k, &b, &c)));
        assert_eq!(t3[k as usize], BigRational::from_integer(trinomial_t_direct(3 * k, &b, &c)));
        assert_eq!(cube[k as usize], BigRational::from_integer(trinomial_t_direct(k, &b, &c).pow(3)));
    }
}

#[test]
fn spot_values() {
    assert_eq!(kernel_term(&one("A(-8)"), 1).unwrap(), ri(-6));
    assert_eq!(kernel_term(&one("S2(4)"), 1).unwrap(), ri(12));
    assert_eq!(kernel_term(&one("CLF"), 2).unwrap(), ri(80));
    assert_eq!(kernel_term(&one("W(-8)"), 1).unwrap(), q(-3, 16));
    assert_eq!(kernel_stream(&one("CLF"), 3).unwrap(), [1, 8, 80, 896].map(ri));
    assert_eq!(kernel_stream(&one("S6"), 2).unwrap(), [1, 24, 976].map(ri));
}

#[test]
fn parametric_families_match_defining_sums() {
    let xs = [q(-8, 1), q(4, 1), q(1, 1), q(-1, 1), q(7, 3), q(-1, 5)];
    for fam in ["A", "S1", "S2", "W", "FP", "FM", "G", "S5", "P6", "DOMB", "H"] {
        for x in &xs {
            let kern = one(&format!("{fam}({})", fmt(x)));
            let s = kernel_stream(&kern, 25).unwrap();
            for n in 0..=25i64 {
                assert_eq!(s[n as usize], oracle(fam, x, n), "{fam}({x}) at {n}");
            }
        }
    }
}

fn fmt(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[test]
fn constant_families_match_defining_sums() {
    let clf = kernel_stream(&one("CLF"), 40).unwrap();
    let s6 = kernel_stream(&one("S6"), 40).unwrap();
    for n in 0..=40i64 {
        assert_eq!(clf[n as usize], clf_oracle(n), "CLF {n}");
        assert_eq!(s6[n as usize], s6_oracle(n), "s_{n}");
    }
    for (code, x, y) in [("AQ", q(-1, 3), q(-2, 3)), ("BQ", q(-1, 4), q(-3, 4)), ("CQ", q(-1, 6), q(-5, 6))] {
        let s = kernel_stream(&one(code), 30).unwrap();
        for n in 0..=30i64 {
            assert_eq!(s[n as usize], alt_conv(&x, &y, n), "{code} {n}");
        }
    }
}

#[test]
fn clf_and_s6_recurrences_from_seeds() {
    // (k+1)² P_{k+1} = (24k(k+1)+8) P_k − 128k² P_{k−1}
    let mut p = vec![ri(1), ri(8)];
    for k in 1..40i64 {
        let next = (ri(24 * k * (k + 1) + 8) * &p[k as usize] - ri(128 * k * k) * &p[k as usize - 1]) / ri((k + 1) * (k + 1));
        p.push(next);
    }
    let stream = kernel_stream(&one("CLF"), 40).unwrap();
    assert_eq!(p, stream);

    // Third-order recurrence for s_n applied to s_0, s_1, s_2.
    let mut s = vec![ri(1), ri(24), ri(976)];
    for n in 0..30i64 {
        let (a, b, cc) = (&s[n as usize], &s[n as usize + 1], &s[n as usize + 2]);
        let rest = ri(51200 * (n + 1) * (n + 1) * (n + 3)) * a - ri(1920 * (4 * n * n * n + 24 * n * n + 46 * n + 29)) * b
            + ri(8 * (n + 2) * (41 * n * n + 205 * n + 255)) * cc;
        s.push(rest / ri(3 * (n + 2) * (n + 3) * (n + 3)));
    }
    assert_eq!(s, kernel_stream(&one("S6"), 32).unwrap());
}

#[test]
fn binomial_products_and_convolutions() {
    let s = kernel_stream(&one("B(2,1)^2"), 12).unwrap();
    let inv = kernel_stream(&one("B(3,1)^-1"), 12).unwrap();
    for k in 0..=12i64 {
        assert_eq!(s[k as usize], c(2 * k, k).pow(2));
        assert_eq!(inv[k as usize], c(3 * k, k).recip());
    }
    let qc = kernel_stream(&one("QC[C@k,-1/3@k^2,-2/3@j]"), 20).unwrap();
    for n in 0..=20i64 {
        assert_eq!(qc[n as usize], sum(n, |k| c(2 * k, k) * cx(&q(-1, 3), k).pow(2) * cx(&q(-2, 3), n - k)));
    }
}

#[test]
fn term_matches_stream() {
    for s in ["T(10,121)^3", "T2(7,1)", "A(-8)", "W(1/4)", "CLF", "S6", "BQ", "QC[C@k,-1/4@k,-3/4@j^2]", "DUAL(1)[B(2,1) T(1,16)]", "H(2)"] {
        let kern = one(s);
        let stream = kernel_stream(&kern, 30).unwrap();
        for k in [0u64, 1, 2, 7, 19, 30] {
            assert_eq!(kernel_term(&kern, k).unwrap(), stream[k as usize], "{s} at {k}");
        }
    }
}

#[test]
fn dual_examples() {
    let ones = vec![ri(1); 8];
    let d = dual(&ones);
    assert_eq!(d[0], ri(1));
    assert!(d[1..].iter().all(Zero::is_zero));

    // a_k = C(2k,k) T_k(1,16) = 1, 2, 198, ...; a*_n by direct double sum.
    let a: Vec<BigRational> = (0..3i64)
        .map(|k| c(2 * k, k) * BigRational::from_integer(trinomial_t_direct(k as u64, &BigInt::from(1), &BigInt::from(16))))
        .collect();
    let star: Vec<BigRational> = (0..3i64).map(|n| sum(n, |k| c(n, k) * sign(k) * &a[k as usize])).collect();
    assert_eq!(star, [1, -1, 195].map(ri));
    assert_eq!(dual(&a), star);
    assert_eq!(kernel_stream(&one("DUAL(1)[B(2,1) T(1,16)]"), 2).unwrap(), star);
}

#[test]
fn x_plus_y_plus_one_symmetry() {
    for (x, y) in [(q(-1, 3), q(-2, 3)), (q(-1, 4), q(-3, 4)), (q(-1, 6), q(-5, 6)), (q(2, 7), q(-9, 7))] {
        for n in 0..=30 {
            assert_eq!(alt_conv(&x, &y, n), alt_conv(&y, &x, n), "({x},{y}) at {n}");
        }
    }
}

/// `(−4)^n / C(2n,n) · Σ C(x1,k)C(x2,k)C(y1,n−k)C(y2,n−k)`
fn third_form(k_args: [BigRational; 2], j_args: [BigRational; 2], n: i64) -> BigRational {
    pw(&ri(-4), n) / c(2 * n, n)
        * sum(n, |k| cx(&k_args[0], k) * cx(&k_args[1], k) * cx(&j_args[0], n - k) * cx(&j_args[1], n - k))
}

#[test]
fn b_n_third_form_grouping() {
    let b: Vec<BigRational> = kernel_stream(&one("BQ"), 25).unwrap();
    let printed = |n| third_form([q(-1, 8), q(-5, 8)], [q(-3, 8), q(-7, 8)], n);
    let regrouped = |n| third_form([q(-1, 8), q(-3, 8)], [q(-5, 8), q(-7, 8)], n);
    for n in 0..=25i64 {
        assert_eq!(printed(n), b[n as usize], "printed grouping at {n}");
    }
    // The alternative pairing is not b_n in this form.
    assert!((0..=25i64).any(|n| regrouped(n) != b[n as usize]));

    // ... but it is the right pairing inside Σ C(n,k) C(2k,k) b_k / 4^k.
    for n in 0..=25i64 {
        let lhs = sum(n, |k| cx(&q(-1, 8), k) * cx(&q(-3, 8), k) * cx(&q(-5, 8), n - k) * cx(&q(-7, 8), n - k));
        let rhs = sum(n, |k| c(n, k) * c(2 * k, k) * &b[k as usize] / pw(&ri(4), k));
        assert_eq!(lhs, rhs, "reduction at {n}");
        let via_lib = kernel_term(&one("QC[-1/8@k,-3/8@k,-5/8@j,-7/8@j]"), n as u64).unwrap();
        assert_eq!(via_lib, lhs);
    }
}

#[test]
fn f_relations() {
    let f = |x: &BigRational, n: i64| sum(n, |k| c(n, k).pow(2) * c(2 * k, n) * pw(x, k));
    for x in [q(1, 1), q(6, 1), q(-3, 1), q(1, 2), q(-7, 5)] {
        let fp = kernel_stream(&one(&format!("FP({})", fmt(&x))), 30).unwrap();
        let fm = kernel_stream(&one(&format!("FM({})", fmt(&x))), 30).unwrap();
        let g = kernel_stream(&one(&format!("G({})", fmt(&x))), 25).unwrap();
        for n in 0..=30i64 {
            assert_eq!(fp[n as usize], pw(&x, -n) * f(&(&x * &x), n));
            assert_eq!(fm[n as usize], pw(&x, -n) * f(&-(&x * &x), n));
        }
        let signed: Vec<BigRational> = (0..=25i64).map(|k| sign(k) * f(&x, k)).collect();
        assert_eq!(dual(&signed), g);
    }
}

#[test]
fn parse_rejects_bad_kernels() {
    for s in ["B(1,2)", "T(1,1)^0", "W(0)", "FOO(1)", "CLF^2", "QC[]", "DUAL(1)B(2,1)"] {
        assert!(Kernel::parse_list(s).is_err(), "{s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_is_an_involution(v in prop::collection::vec((-1000i64..1000, 1i64..60), 20)) {
        let s: Vec<BigRational> = v.into_iter().map(|(n, d)| q(n, d)).collect();
        prop_assert_eq!(dual(&dual(&s)), s);
    }

    #[test]
    fn kernel_text_round_trips(b in -20i64..20, c in -20i64..20, n in -9i64..9, d in 1i64..9) {
        let x = fmt(&q(n, d));
        for s in [format!("T({b},{c})^2"), format!("A({x})"), format!("S2({x})"), format!("DUAL({x})[B(2,1) T({b},{c})]")] {
            let ks = Kernel::parse_list(&s).unwrap();
            prop_assert_eq!(Kernel::parse_list(&Kernel::fmt_list(&ks)).unwrap(), ks);
        }
    }
}
