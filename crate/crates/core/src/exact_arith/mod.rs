//! Exact integer and rational helpers, plus the numeric carriers used by the
//! rest of the crate.

mod ball;
mod constants;
mod surd;

pub use ball::{prec_for_digits, Ball};
pub use constants::{
    const_k, const_k_direct, const_pi, const_pi_chudnovsky, const_zeta3, const_zeta3_apery,
    sqrt_ball,
};
pub use surd::QuadSurd;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Generalized binomial coefficient for integer upper argument.
///
/// Negative `n` follows the falling-factorial definition, so
/// `binom_int(-1, k) == (-1)^k`.
pub fn binom_int(n: i64, k: i64) -> Result<BigInt> {
    if k < 0 {
        return Err(Error::Domain(format!("binom({n},{k}): k must be nonnegative")));
    }
    if n >= 0 && n < k {
        return Ok(BigInt::zero());
    }
    let k = if n >= 0 { k.min(n - k) } else { k };
    let mut r = BigInt::one();
    for j in 0..k {
        r *= n - j;
        r /= j + 1;
    }
    Ok(r)
}

/// Binomial coefficient with a rational upper argument: `Π_{j<k} (x-j) / k!`.
pub fn binom_rat(x: &BigRational, k: i64) -> Result<BigRational> {
    if k < 0 {
        return Err(Error::Domain(format!("binom({x},{k}): k must be nonnegative")));
    }
    // Work with x = p/q and clear denominators once at the end.
    let p = x.numer();
    let q = x.denom();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= p - q * j;
        den *= q * (j + 1);
    }
    Ok(BigRational::new(num, den))
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    r
}

/// Primes in `lo..=hi`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: &BigInt, p: u64) -> Result<i32> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Domain(format!("legendre: {p} is not an odd prime")));
    }
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return Ok(0);
    }
    let r = a.modpow(&BigInt::from((p - 1) / 2), &pb);
    Ok(if r.is_one() { 1 } else { -1 })
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else {
        None
    }
}

/// Reduce a rational number modulo `m`; `None` when the denominator is not invertible.
pub fn rat_mod(q: &BigRational, m: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(q.denom(), m)?;
    Some((q.numer() * inv).mod_floor(m))
}

/// All Bernoulli numbers `B_0..=B_n` (with `B_1 = -1/2`).
pub fn bernoulli_table(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        // Σ_{k≤m} C(m+1,k) B_k = 0
        let mut s = BigRational::zero();
        let mut c = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                s += bk * &c;
            }
            c = c * (m + 1 - k) / (k + 1);
        }
        b.push(-s / BigInt::from(m + 1));
    }
    b
}

/// The Bernoulli number `B_n`.
pub fn bernoulli(n: i64) -> Result<BigRational> {
    if n < 0 {
        return Err(Error::Domain(format!("bernoulli({n}): index must be nonnegative")));
    }
    if n > 1 && n % 2 == 1 {
        return Ok(BigRational::zero());
    }
    Ok(bernoulli_table(n as usize).pop().unwrap())
}

/// Split `n ≥ 0` as `s² · d` with `d` squarefree.
pub fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_negative());
    if n.is_zero() {
        return (BigInt::one(), BigInt::zero());
    }
    let mut d = n.clone();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    let cap = BigInt::from(1_000_000u32);
    while &p * &p <= d && p <= cap {
        let p2 = &p * &p;
        while (&d % &p2).is_zero() {
            d /= &p2;
            s *= &p;
        }
        p += 1;
    }
    // What remains has no square factor below the search bound; check for a
    // remaining perfect square.
    let r = d.sqrt();
    if &r * &r == d && d > BigInt::one() {
        s *= &r;
        d = BigInt::one();
    }
    (s, d)
}

/// Nonnegative integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Nearest f64 to a rational.
pub fn rat_to_f64(q: &BigRational) -> f64 {
    let n = q.numer();
    let d = q.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift = 60 - (nb - db);
    let scaled = if shift >= 0 {
        (n << shift as usize) / d
    } else {
        n / (d << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(shift as i32))
}

/// Parse `p`, `p/q` or a decimal-free signed integer ratio.
pub fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

/// `p/q` or `p` when the denominator is one.
pub fn fmt_rat(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_small() {
        assert_eq!(binom_int(0, 0).unwrap(), BigInt::from(1));
        assert_eq!(binom_int(6, 3).unwrap(), BigInt::from(20));
        assert_eq!(binom_int(3, 5).unwrap(), BigInt::from(0));
        assert_eq!(binom_int(-1, 5).unwrap(), BigInt::from(-1));
        assert!(binom_int(4, -1).is_err());
    }

    #[test]
    fn binom_rational_examples() {
        let x = rat(-1, 3);
        assert_eq!(binom_rat(&x, 0).unwrap(), rat(1, 1));
        assert_eq!(binom_rat(&x, 1).unwrap(), rat(-1, 3));
        assert_eq!(binom_rat(&rat(-1, 2), 2).unwrap(), rat(3, 8));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(&BigInt::from(1), 3).unwrap(), 1);
        assert_eq!(legendre(&BigInt::from(2), 3).unwrap(), -1);
        assert_eq!(legendre(&BigInt::from(7), 7).unwrap(), 0);
        assert!(legendre(&BigInt::from(1), 9).is_err());
        assert!(legendre(&BigInt::from(1), 2).is_err());
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0).unwrap(), rat(1, 1));
        assert_eq!(bernoulli(1).unwrap(), rat(-1, 2));
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
    }

    #[test]
    fn squarefree() {
        let (s, d) = squarefree_split(&BigInt::from(72));
        assert_eq!((s, d), (BigInt::from(6), BigInt::from(2)));
        let (s, d) = squarefree_split(&BigInt::from(8463));
        assert_eq!(&s * &s * &d, BigInt::from(8463));
    }

    #[test]
    fn primes() {
        assert_eq!(primes_in(1, 30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3215031751));
    }
}
