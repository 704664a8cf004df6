//! Ball enclosures of π, ζ(3), K = L(2,(·/3)) and square roots.
//!
//! None of these use the series the crate is meant to verify.

use super::{bernoulli_table, prec_for_digits, Ball};
use crate::error::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `floor(2^p · arctan(1/x))` together with an error bound in the same units.
fn arctan_inv_fixed(x: u64, p: u64) -> (BigInt, u64) {
    let x2 = BigInt::from(x * x);
    // power_k = floor(2^p / x^(2k+1)) exactly, because nested floors by
    // integers compose.
    let mut power = (BigInt::one() << p) / x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    // Each term is off by < 2 units and the omitted tail is < 1 unit.
    (sum, 2 * k + 1)
}

/// π by Machin's formula `π = 16 arctan(1/5) − 4 arctan(1/239)`.
pub fn const_pi(digits: u32) -> Ball {
    let prec = prec_for_digits(digits);
    let p = prec + 8;
    let (a, ea) = arctan_inv_fixed(5, p);
    let (b, eb) = arctan_inv_fixed(239, p);
    let mid = a * 16 - b * 4;
    let err = 16 * ea + 4 * eb;
    Ball::from_bigint(&mid, p)
        .add_error(&Ball::from_int(err, 64))
        .mul(&pow2(-(p as i64), p))
        .with_prec(prec)
}

fn pow2(e: i64, prec: u64) -> Ball {
    if e >= 0 {
        Ball::from_bigint(&(BigInt::one() << e as u64), prec)
    } else {
        Ball::from_ratio(&BigInt::one(), &(BigInt::one() << (-e) as u64), prec)
    }
}

/// π by the Chudnovsky series; an independent cross-check for [`const_pi`].
pub fn const_pi_chudnovsky(digits: u32) -> Ball {
    let prec = prec_for_digits(digits);
    let c3 = BigInt::from(640320u64).pow(3);
    let a = BigInt::from(13591409u64);
    let b = BigInt::from(545140134u64);
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut k: u64 = 0;
    let mut next;
    loop {
        let lin = BigRational::from_integer(&a + &b * k);
        sum += &term * &lin;
        let num: BigInt = (1..=6u64).map(|j| BigInt::from(6 * k + j)).product();
        let den: BigInt = (1..=3u64).map(|j| BigInt::from(3 * k + j)).product::<BigInt>()
            * BigInt::from(k + 1).pow(3)
            * &c3;
        term = -term * BigRational::new(num, den);
        k += 1;
        next = &term * BigRational::from_integer(&a + &b * k);
        if Ball::from_rational(&next.abs(), 64).log2_upper() < -(prec as f64) - 8.0 {
            break;
        }
    }
    // Alternating with decreasing magnitudes: the remainder is below the
    // first omitted term.
    let s = Ball::from_rational(&sum, prec).add_error(&Ball::from_rational(&next.abs(), 64));
    let root = Ball::from_int(10005, prec).sqrt().expect("positive");
    root.mul_i64(426880).div(&s).expect("nonzero")
}

/// Lower bound on the number of terms `M` so that the Euler–Maclaurin
/// remainder `2 (2M)! / (2πx)^(2M)` falls below `10^-target`.
fn em_order(x: f64, target: f64) -> usize {
    let mut log_fact = 0.0f64;
    let mut m = 1usize;
    loop {
        let two_m = 2 * m;
        log_fact += ((two_m - 1) as f64).ln() + (two_m as f64).ln();
        let log10_bound = (log_fact - two_m as f64 * (2.0 * std::f64::consts::PI * x).ln()
            + 2f64.ln())
            / std::f64::consts::LN_10;
        if log10_bound < -target || m > 4000 {
            return m;
        }
        m += 1;
    }
}

/// `Σ_{n≥N} 1/(n+c)²` for rational `x = N + c > 0`, as a ball.
fn trigamma_tail(x: &BigRational, m: usize, bern: &[BigRational], prec: u64) -> Ball {
    let inv = BigRational::one() / x;
    let inv2 = &inv * &inv;
    let mut s = Ball::from_rational(&inv, prec).add(&Ball::from_rational(&(&inv2 / BigInt::from(2)), prec));
    let mut pw = &inv2 * &inv; // x^-(2j+1)
    for b in bern.iter().step_by(2).skip(1).take(m - 1) {
        s = s.add(&Ball::from_rational(&(b * &pw), prec));
        pw = &pw * &inv2;
    }
    // |R| ≤ |B_2M| / x^(2M+1); doubled for safety.
    let r = bern[2 * m].abs() * pw * BigInt::from(2);
    s.add_error(&Ball::from_rational(&r, 64))
}

/// K = L(2,(·/3)) = Σ (n/3)/n², grouped in period-3 blocks with an
/// Euler–Maclaurin tail.
pub fn const_k(digits: u32) -> Ball {
    let prec = prec_for_digits(digits);
    let n = 2 * digits as u64 + 10;
    let mut s = Ball::zero(prec);
    for i in 0..n {
        let a = BigInt::from(3 * i + 1);
        let b = BigInt::from(3 * i + 2);
        let den = (&a * &a) * (&b * &b);
        s = s.add(&Ball::from_ratio(&BigInt::from(6 * i + 3), &den, prec));
    }
    let m = em_order(n as f64, digits as f64 + 8.0);
    let bern = bernoulli_table(2 * m);
    let t1 = trigamma_tail(&BigRational::new(BigInt::from(3 * n + 1), BigInt::from(3)), m, &bern, prec);
    let t2 = trigamma_tail(&BigRational::new(BigInt::from(3 * n + 2), BigInt::from(3)), m, &bern, prec);
    s.add(&t1.sub(&t2).div_i64(9))
}

/// K from `terms` plain period-3 blocks plus the crude remainder bound
/// `Σ_{n≥N} (6n+3)/((3n+1)²(3n+2)²) ≤ 1/(18 (N−1)²)`.
pub fn const_k_direct(terms: u64, prec: u64) -> Ball {
    let terms = terms.max(2);
    let mut s = Ball::zero(prec);
    for i in 0..terms {
        let a = BigInt::from(3 * i + 1);
        let b = BigInt::from(3 * i + 2);
        s = s.add(&Ball::from_ratio(&BigInt::from(6 * i + 3), &((&a * &a) * (&b * &b)), prec));
    }
    let r = BigInt::from(18) * BigInt::from(terms - 1).pow(2);
    s.add_error(&Ball::from_ratio(&BigInt::one(), &r, 64))
}

/// ζ(3) by direct summation plus an Euler–Maclaurin tail.
pub fn const_zeta3(digits: u32) -> Ball {
    let prec = prec_for_digits(digits);
    let n = 2 * digits as u64 + 10;
    let mut s = Ball::zero(prec);
    for i in 1..n {
        s = s.add(&Ball::from_ratio(&BigInt::one(), &BigInt::from(i).pow(3), prec));
    }
    let m = em_order(n as f64, digits as f64 + 8.0);
    let bern = bernoulli_table(2 * m);
    let x = BigRational::from_integer(BigInt::from(n));
    let inv = BigRational::one() / &x;
    let inv2 = &inv * &inv;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut tail = Ball::from_rational(&(&inv2 * &half), prec)
        .add(&Ball::from_rational(&(&inv2 * &inv * &half), prec));
    let mut pw = &inv2 * &inv2; // x^-(2j+2)
    for j in 1..m {
        let c = &bern[2 * j] * BigInt::from(2 * j + 1) * &half;
        tail = tail.add(&Ball::from_rational(&(c * &pw), prec));
        pw = &pw * &inv2;
    }
    let r = bern[2 * m].abs() * BigInt::from(2 * m + 1) * pw;
    s.add(&tail.add_error(&Ball::from_rational(&r, 64)))
}

/// ζ(3) = (5/2) Σ (−1)^(k−1) / (k³ C(2k,k)); independent cross-check.
pub fn const_zeta3_apery(digits: u32) -> Ball {
    let prec = prec_for_digits(digits);
    let mut s = Ball::zero(prec);
    let mut c = BigInt::from(2); // C(2k,k) at k = 1
    let mut k: u64 = 1;
    loop {
        let den = BigInt::from(k).pow(3) * &c;
        let t = Ball::from_ratio(&BigInt::one(), &den, prec);
        if t.log2_upper() < -(prec as f64) - 8.0 {
            s = s.add_error(&t);
            break;
        }
        s = if k % 2 == 1 { s.add(&t) } else { s.sub(&t) };
        c = c * (4 * k + 2) / (k + 1);
        k += 1;
    }
    s.mul_rational(&BigRational::new(BigInt::from(5), BigInt::from(2)))
}

/// Ball around `√r` with radius at most `10^-digits`.
pub fn sqrt_ball(r: &BigRational, digits: u32) -> Result<Ball> {
    if r.is_negative() {
        return Err(crate::Error::Domain(format!("sqrt of negative rational {r}")));
    }
    let prec = prec_for_digits(digits);
    if r.is_zero() {
        return Ok(Ball::zero(prec));
    }
    // Exact squares stay exact.
    if let (Some(a), Some(b)) = (super::exact_sqrt(r.numer()), super::exact_sqrt(r.denom())) {
        return Ok(Ball::from_ratio(&a, &b, prec));
    }
    Ball::from_rational(r, prec + 8).sqrt().map(|b| b.with_prec(prec))
}
