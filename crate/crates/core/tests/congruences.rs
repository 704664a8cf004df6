use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use piseries_core::congruences::*;
use piseries_core::exact_arith::primes_in;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ri(n: i64) -> BigRational {
    q(n, 1)
}

fn c(n: i64, k: i64) -> BigRational {
    if k < 0 || k > n {
        return BigRational::zero();
    }
    (0..k).fold(BigRational::one(), |p, i| p * ri(n - i) / ri(i + 1))
}

fn pw(x: i64, e: i64) -> BigRational {
    num_traits::pow(ri(x), e as usize)
}

/// `x mod p^e` through Euler's theorem for the denominator inverse.
fn reduce(x: &BigRational, p: u64, e: u32) -> BigInt {
    let m = BigInt::from(p).pow(e);
    let phi = BigInt::from(p).pow(e - 1) * (p - 1);
    let d = x.denom().mod_floor(&m);
    assert!(!(x.denom() % p).is_zero(), "denominator divisible by {p}");
    (x.numer() * d.modpow(&(phi - 1u32), &m)).mod_floor(&m)
}

fn conj1_term(k: i64) -> BigRational {
    ri(28 * k * k + 18 * k + 3) * c(2 * k, k).pow(4) * c(3 * k, k) / pw(-64, k)
}

/// `C(2n,n)/2160^n Σ C(n,k) C(n+2k,2k) C(2k,k) (−324)^(n−k)`
fn conj5_term(n: i64) -> BigRational {
    let inner: BigRational = (0..=n).map(|k| c(n, k) * c(n + 2 * k, 2 * k) * c(2 * k, k) * pw(-324, n - k)).sum();
    c(2 * n, n) * inner / pw(2160, n)
}

fn exact_sum(p: u64, f: impl Fn(i64) -> BigRational) -> BigRational {
    (0..p as i64).map(f).sum()
}

/// Legendre symbol by Euler's criterion.
fn euler(a: i64, p: u64) -> i32 {
    let pb = BigInt::from(p);
    let r = BigInt::from(a).mod_floor(&pb).modpow(&BigInt::from((p - 1) / 2), &pb);
    if r.is_zero() {
        0
    } else if r.is_one() {
        1
    } else {
        -1
    }
}

fn conj5_weighted() -> SummandSpec {
    SummandSpec::new("357k+103", q(2160, 324 * 324), "B(2,1) S5(-324)").unwrap()
}

fn conj5_plain() -> SummandSpec {
    SummandSpec::new("1", q(2160, 324 * 324), "B(2,1) S5(-324)").unwrap()
}

#[test]
fn modular_sums_match_exact_reduction() {
    for p in [7u64, 11, 13] {
        let s1 = exact_sum(p, conj1_term);
        let s5 = exact_sum(p, conj5_term);
        let s5w = exact_sum(p, |n| ri(357 * n + 103) * conj5_term(n));
        for e in 1..=6 {
            assert_eq!(partial_sum_mod(&SummandSpec::conj1(), p, e).unwrap(), reduce(&s1, p, e), "conj1 p={p} e={e}");
            assert_eq!(partial_sum_mod(&conj5_plain(), p, e).unwrap(), reduce(&s5, p, e), "conj5 p={p} e={e}");
            assert_eq!(partial_sum_mod(&conj5_weighted(), p, e).unwrap(), reduce(&s5w, p, e), "conj5w p={p} e={e}");
        }
    }
}

#[test]
fn trivial_prime_sum_is_first_term() {
    let spec = SummandSpec::new("2k+3", ri(5), "B(2,1)").unwrap();
    // Terms 3 and 5·C(2,1)/5 = 2; the second vanishes mod 2.
    assert_eq!(partial_sum_mod(&spec, 2, 1).unwrap(), BigInt::from(3 % 2));
    assert_eq!(partial_sum_mod(&spec, 2, 3).unwrap(), BigInt::from(5));
    assert!(partial_sum_mod(&spec, 5, 2).is_err(), "base divisible by p");
    assert!(partial_sum_mod(&spec, 9, 2).is_err(), "9 is not prime");
}

#[test]
fn conj1_at_five_and_seven() {
    // B_2 = 1/6 and B_4 = −1/30, written out.
    let at5 = ri(3 * 25) - q(7, 2) * pw(5, 5) * q(1, 6);
    let r = check_conj1(5).unwrap();
    assert_eq!(r.computed, reduce(&exact_sum(5, conj1_term), 5, 6));
    assert_eq!(r.predicted, Some(reduce(&at5, 5, 6)));
    assert!(r.matches);

    let at7 = ri(3 * 49) - q(7, 2) * pw(7, 5) * q(-1, 30);
    assert_eq!(reduce(&exact_sum(7, conj1_term), 7, 6), reduce(&at7, 7, 6));
    assert!(check_conj1(7).unwrap().matches);
}

#[test]
fn conj1_holds_up_to_the_cap() {
    for p in primes_in(5, PMAX_E6) {
        let r = check_conj1(p).unwrap();
        assert!(r.matches, "p = {p}: computed {} predicted {:?}", r.computed, r.predicted);
    }
    assert!(check_conj1(2).is_err());
    assert!(check_conj1(91).is_err());
}

#[test]
fn represent_form_examples() {
    assert_eq!(represent_form(109, 1, 105, Target::P).solution, Some((2, 1)));
    assert_eq!(represent_form(2, 1, 1, Target::P).solution, Some((1, 1)));
    assert_eq!(represent_form(3, 1, 105, Target::P).solution, None);
    assert_eq!(represent_form(19, 3, 35, Target::TwoP).solution, Some((1, 1)));
    assert_eq!(represent_form(53, 3, 35, Target::TwoP).solution, None);
}

/// The printed case table, as (signs of (−1/p),(p/3),(p/5),(p/7), a, b, 2p?, cx, cp).
const TABLE: [([i32; 4], u64, u64, bool, i64, i64); 8] = [
    ([1, 1, 1, 1], 1, 105, false, 4, -2),
    ([1, -1, -1, 1], 1, 105, true, 2, -2),
    ([-1, -1, -1, -1], 3, 35, false, -12, 2),
    ([-1, 1, 1, -1], 3, 35, true, -6, 2),
    ([1, -1, 1, -1], 5, 21, false, 20, -2),
    ([1, 1, -1, -1], 5, 21, true, 10, -2),
    ([-1, 1, -1, 1], 7, 15, false, 28, -2),
    ([-1, -1, 1, 1], 7, 15, true, 14, -2),
];

/// Cases of the printed split that apply to `p`, counting the `(−105/p) = −1` line.
fn applicable(p: u64) -> Vec<usize> {
    let signs = [euler(-1, p), euler(p as i64, 3), euler(p as i64, 5), euler(p as i64, 7)];
    let mut out: Vec<usize> = TABLE.iter().enumerate().filter(|(_, t)| t.0 == signs).map(|(i, _)| i).collect();
    if euler(-105, p) == -1 {
        out.push(8);
    }
    out
}

fn brute_form(n: u64, a: u64, b: u64) -> Option<(u64, u64)> {
    (0..=n).flat_map(|y| (0..=n).map(move |x| (x, y))).find(|&(x, y)| a * x * x + b * y * y == n)
}

#[test]
fn exactly_one_case_applies_for_primes_from_11() {
    for p in primes_in(11, 100) {
        let cases = applicable(p);
        assert_eq!(cases.len(), 1, "p = {p}: cases {cases:?}");
        let lib = conj5_matching_cases(p).unwrap();
        if cases[0] == 8 {
            assert!(lib.is_empty());
            assert_eq!(kronecker_m105(p).unwrap(), -1);
        } else {
            let t = TABLE[cases[0]];
            assert_eq!(lib.len(), 1);
            assert_eq!((lib[0].a, lib[0].b, lib[0].target == Target::TwoP), (t.1, t.2, t.3));
            let n = if t.3 { 2 * p } else { p };
            assert!(brute_form(n, t.1, t.2).is_some(), "p = {p}: {n} = {}x²+{}y² has no solution", t.1, t.2);
        }
    }
}

#[test]
fn seven_falls_outside_every_case() {
    // 7 | 105: (p/7) = 0 and (−105/p) = 0, so no line of the split applies.
    assert!(applicable(7).is_empty());
    assert!(conj5_matching_cases(7).unwrap().is_empty());
    let (first, second) = check_conj5_congruences(7).unwrap();
    assert!(first.matches);
    assert_eq!(second.predicted, None);
    assert_eq!(second.computed, reduce(&exact_sum(7, conj5_term), 7, 2));
    assert_eq!(second.computed, BigInt::from(7));
}

#[test]
fn conj5_congruences_hold_from_11_to_the_cap() {
    for p in primes_in(11, PMAX_E2) {
        let (first, second) = check_conj5_congruences(p).unwrap();
        let m = BigInt::from(p * p);
        let want1 = (BigInt::from(p) * euler(-1, p) * (54 + 49 * euler(p as i64, 3) * euler(p as i64, 5))).mod_floor(&m);
        assert_eq!(first.predicted, Some(want1.clone()), "p = {p}");
        assert_eq!(first.computed, want1, "p = {p}: first congruence");

        let cases = applicable(p);
        assert_eq!(cases.len(), 1, "p = {p}");
        let want2 = if cases[0] == 8 {
            BigInt::zero()
        } else {
            let t = TABLE[cases[0]];
            let (x, _) = brute_form(if t.3 { 2 * p } else { p }, t.1, t.2).unwrap();
            (BigInt::from(t.4) * x * x + BigInt::from(t.5) * p).mod_floor(&m)
        };
        assert_eq!(second.predicted, Some(want2.clone()), "p = {p}");
        assert_eq!(second.computed, want2, "p = {p}: second congruence");
    }
    assert!(check_conj5_congruences(5).is_err());
}

proptest! {
    #[test]
    fn represented_forms_are_solutions(i in 0usize..60, a in 1u64..40, b in 1u64..120, two in any::<bool>()) {
        let p = primes_in(2, 300)[i];
        let target = if two { Target::TwoP } else { Target::P };
        let n = if two { 2 * p } else { p };
        let r = represent_form(p, a, b, target);
        if let Some((x, y)) = r.solution {
            prop_assert_eq!(a * x * x + b * y * y, n);
        }
        // Minimal y, then minimal x.
        prop_assert_eq!(r.solution, brute_form(n, a, b));
    }
}
