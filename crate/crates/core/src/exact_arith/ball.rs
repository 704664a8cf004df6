use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::{max, Ordering};
use std::fmt;

/// Radius mantissas are kept to this many bits; more would be false precision.
const RAD_BITS: i64 = 30;

/// Working precision in bits for a `digits`-digit target, including the guard
/// digits used throughout the engine.
pub fn prec_for_digits(digits: u32) -> u64 {
    let guard = max(15, digits / 10);
    (((digits + guard) as f64) * std::f64::consts::LOG2_10).ceil() as u64 + 16
}

/// Midpoint-radius real number: the enclosed set is
/// `[(mid - rad)·2^exp, (mid + rad)·2^exp]`.
///
/// Every operation returns a ball containing all results of applying the
/// exact operation to members of the inputs.
#[derive(Clone, Debug)]
pub struct Ball {
    mid: BigInt,
    rad: BigUint,
    exp: i64,
    prec: u64,
}

fn ceil_shr(x: &BigUint, s: u64) -> BigUint {
    let q = x >> s;
    match x.trailing_zeros() {
        Some(tz) if tz < s => q + 1u32,
        _ => q,
    }
}

fn shr_floor_lost(x: &BigInt, s: u64) -> (BigInt, bool) {
    let lost = matches!(x.trailing_zeros(), Some(tz) if tz < s);
    (x >> s, lost)
}

impl Ball {
    fn norm(mid: BigInt, rad: BigUint, exp: i64, prec: u64) -> Ball {
        let mb = mid.bits() as i64;
        let rb = rad.bits() as i64;
        if mb == 0 && rb == 0 {
            return Ball { mid, rad, exp: 0, prec };
        }
        let want = if mb > 0 { mb - prec as i64 } else { i64::MIN };
        let s = max(want, if rb > 0 { rb - RAD_BITS } else { i64::MIN });
        if s > 0 {
            let s = s as u64;
            let (m, lost) = shr_floor_lost(&mid, s);
            let mut r = ceil_shr(&rad, s);
            if lost {
                r += 1u32;
            }
            Ball { mid: m, rad: r, exp: exp + s as i64, prec }
        } else if s < 0 && mb > 0 {
            let s = (-s) as u64;
            Ball { mid: mid << s, rad: rad << s, exp: exp - s as i64, prec }
        } else {
            Ball { mid, rad, exp, prec }
        }
    }

    pub fn zero(prec: u64) -> Ball {
        Ball { mid: BigInt::zero(), rad: BigUint::zero(), exp: 0, prec }
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u64) -> Ball {
        Ball::norm(n.into(), BigUint::zero(), 0, prec)
    }

    pub fn from_bigint(n: &BigInt, prec: u64) -> Ball {
        Ball::norm(n.clone(), BigUint::zero(), 0, prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u64) -> Ball {
        Ball::from_bigint(num, prec).div_int(den)
    }

    pub fn from_rational(q: &BigRational, prec: u64) -> Ball {
        Ball::from_ratio(q.numer(), q.denom(), prec)
    }

    /// The ball `0 ± 2^e`.
    pub fn error_pow2(e: i64, prec: u64) -> Ball {
        Ball { mid: BigInt::zero(), rad: BigUint::one(), exp: e, prec }
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    pub fn with_prec(&self, prec: u64) -> Ball {
        Ball::norm(self.mid.clone(), self.rad.clone(), self.exp, prec)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    fn is_zero_exact(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }

    /// Midpoint as an exact rational.
    pub fn mid_rational(&self) -> BigRational {
        scale_rational(&self.mid, self.exp)
    }

    /// Radius as an exact rational.
    pub fn rad_rational(&self) -> BigRational {
        scale_rational(&BigInt::from(self.rad.clone()), self.exp)
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: -&self.mid, rad: self.rad.clone(), exp: self.exp, prec: self.prec }
    }

    /// Widen the radius by `err` (a nonnegative ball's upper bound).
    pub fn add_error(&self, err: &Ball) -> Ball {
        let e = err.abs_upper_ball();
        self.add(&e)
    }

    /// `0 ± upper(|self|)`.
    fn abs_upper_ball(&self) -> Ball {
        let r = self.mid.magnitude() + &self.rad;
        Ball::norm(BigInt::zero(), r, self.exp, self.prec)
    }

    fn aligned(&self, e: i64) -> (BigInt, BigUint) {
        // e ≥ self.exp; shift right, folding the truncation into the radius.
        let s = (e - self.exp) as u64;
        if s == 0 {
            return (self.mid.clone(), self.rad.clone());
        }
        let (m, lost) = shr_floor_lost(&self.mid, s);
        let mut r = ceil_shr(&self.rad, s);
        if lost {
            r += 1u32;
        }
        (m, r)
    }

    pub fn add(&self, o: &Ball) -> Ball {
        let prec = max(self.prec, o.prec);
        if o.is_zero_exact() {
            return self.with_prec(prec);
        }
        if self.is_zero_exact() {
            return o.with_prec(prec);
        }
        let e = max(self.exp, o.exp);
        let (m1, r1) = self.aligned(e);
        let (m2, r2) = o.aligned(e);
        Ball::norm(m1 + m2, r1 + r2, e, prec)
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let prec = max(self.prec, o.prec);
        let mid = &self.mid * &o.mid;
        let rad = self.mid.magnitude() * &o.rad + o.mid.magnitude() * &self.rad + &self.rad * &o.rad;
        Ball::norm(mid, rad, self.exp + o.exp, prec)
    }

    pub fn mul_int(&self, n: &BigInt) -> Ball {
        let mid = &self.mid * n;
        let rad = &self.rad * n.magnitude();
        Ball::norm(mid, rad, self.exp, self.prec)
    }

    pub fn mul_i64(&self, n: i64) -> Ball {
        self.mul_int(&BigInt::from(n))
    }

    pub fn mul_rational(&self, q: &BigRational) -> Ball {
        self.mul_int(q.numer()).div_int(q.denom())
    }

    pub fn sqr(&self) -> Ball {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u32) -> Ball {
        let mut base = self.clone();
        let mut acc = Ball::from_int(1, self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Division by a nonzero exact integer.
    pub fn div_int(&self, d: &BigInt) -> Ball {
        assert!(!d.is_zero(), "division by zero");
        let sh = if self.mid.is_zero() {
            d.bits() as i64 + RAD_BITS
        } else {
            self.prec as i64 + d.bits() as i64 - self.mid.bits() as i64 + 2
        };
        let sh = max(sh, 0) as u64;
        let dm = d.magnitude();
        let num = &self.mid << sh;
        let (q, r) = num.div_rem(d);
        let mut rad = ((&self.rad << sh) + dm - 1u32) / dm;
        if !r.is_zero() {
            rad += 1u32;
        }
        Ball::norm(q, rad, self.exp - sh as i64, self.prec)
    }

    pub fn div_i64(&self, d: i64) -> Ball {
        self.div_int(&BigInt::from(d))
    }

    /// Division; fails when the divisor ball contains zero.
    pub fn div(&self, o: &Ball) -> Result<Ball> {
        if o.rad.is_zero() {
            if o.mid.is_zero() {
                return Err(Error::Domain("ball division by zero".into()));
            }
            // Exact divisor: the quotient by mid·2^exp.
            let q = self.div_int(&o.mid);
            return Ok(Ball { exp: q.exp - o.exp, ..q });
        }
        let m2 = o.mid.magnitude();
        if *m2 <= o.rad {
            return Err(Error::Domain("ball division by a ball containing zero".into()));
        }
        let prec = max(self.prec, o.prec);
        let sh = max(prec as i64 + o.mid.bits() as i64 - self.mid.bits() as i64 + 2, 0) as u64;
        let sh = max(sh, o.mid.bits() + RAD_BITS as u64);
        let num = &self.mid << sh;
        let (q, r) = num.div_rem(&o.mid);
        // |a/b - m1/m2| ≤ (r1|m2| + |m1| r2) / (|m2| (|m2| - r2))
        let enum_ = (&self.rad * m2 + self.mid.magnitude() * &o.rad) << sh;
        let eden = m2 * (m2 - &o.rad);
        let mut rad = (&enum_ + &eden - 1u32) / &eden;
        if !r.is_zero() {
            rad += 1u32;
        }
        Ok(Ball::norm(q, rad, self.exp - o.exp - sh as i64, prec))
    }

    /// Square root; the ball must lie in `[0, ∞)`.
    pub fn sqrt(&self) -> Result<Ball> {
        if self.is_zero_exact() {
            return Ok(self.clone());
        }
        if self.mid.sign() != Sign::Plus || *self.mid.magnitude() <= self.rad {
            return Err(Error::Domain("sqrt of a ball not strictly positive".into()));
        }
        // Scale so the integer square root carries about prec bits and the
        // exponent stays even.
        let mut t = max(2 * self.prec as i64 + 4 - self.mid.bits() as i64, 0);
        if (self.exp - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let m = self.mid.magnitude() << t as u64;
        let r = &self.rad << t as u64;
        let s = m.sqrt();
        // |√(m±r) - √m| ≤ r / √(m - r); isqrt truncates by < 1.
        let low = (&m - &r).sqrt();
        let mut rad = if r.is_zero() {
            BigUint::zero()
        } else if low.is_zero() {
            s.clone() + 1u32
        } else {
            (&r + &low - 1u32) / &low
        };
        if &s * &s != m {
            rad += 1u32;
        }
        Ok(Ball::norm(BigInt::from(s), rad, (self.exp - t) / 2, self.prec))
    }

    /// True when `q` lies in the ball.
    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let lo = scale_rational(&(&self.mid - BigInt::from(self.rad.clone())), self.exp);
        let hi = scale_rational(&(&self.mid + BigInt::from(self.rad.clone())), self.exp);
        &lo <= q && q <= &hi
    }

    pub fn contains_ball(&self, o: &Ball) -> bool {
        let e = self.exp.min(o.exp);
        let (m1, r1) = self.lifted(e);
        let (m2, r2) = o.lifted(e);
        let r1 = BigInt::from(r1);
        let r2 = BigInt::from(r2);
        &m1 - &r1 <= &m2 - &r2 && &m2 + &r2 <= &m1 + &r1
    }

    fn lifted(&self, e: i64) -> (BigInt, BigUint) {
        let s = (self.exp - e) as u64;
        (&self.mid << s, &self.rad << s)
    }

    /// `(|m1 - m2|, r1 + r2)` at a common exponent.
    fn gap_parts(&self, o: &Ball) -> (BigUint, BigUint) {
        let e = self.exp.min(o.exp);
        let (m1, r1) = self.lifted(e);
        let (m2, r2) = o.lifted(e);
        ((m1 - m2).magnitude().clone(), r1 + r2)
    }

    pub fn overlaps(&self, o: &Ball) -> bool {
        let (d, r) = self.gap_parts(o);
        d <= r
    }

    /// True when the distance between the balls is at least `factor` times
    /// their combined radius (and the balls are disjoint).
    pub fn separated_by(&self, o: &Ball, factor: u32) -> bool {
        let (d, r) = self.gap_parts(o);
        d > r.clone() * (factor + 1) || (r.is_zero() && d > BigUint::zero())
    }

    /// True when the radius is at most `10^-digits`.
    pub fn rad_le_pow10(&self, digits: u32) -> bool {
        let p10 = BigUint::from(10u32).pow(digits);
        if self.exp >= 0 {
            (&self.rad << self.exp as u64) * p10 <= BigUint::one()
        } else {
            &self.rad * p10 <= BigUint::one() << (-self.exp) as u64
        }
    }

    /// Upper bound on `log2 |x|` for any x in the ball (−∞ for the zero ball).
    pub fn log2_upper(&self) -> f64 {
        let m = self.mid.magnitude() + &self.rad;
        if m.is_zero() {
            return f64::NEG_INFINITY;
        }
        log2_biguint(&m) + self.exp as f64
    }

    /// Upper bound on `log2(rad)`.
    pub fn log2_rad(&self) -> f64 {
        if self.rad.is_zero() {
            return f64::NEG_INFINITY;
        }
        log2_biguint(&self.rad) + self.exp as f64
    }

    /// log10 of the radius (−∞ for exact balls).
    pub fn log10_rad(&self) -> f64 {
        self.log2_rad() / std::f64::consts::LOG2_10
    }

    pub fn to_f64(&self) -> f64 {
        let b = self.mid.bits() as i64;
        let s = max(b - 60, 0);
        let m = (&self.mid >> s as u64).to_f64().unwrap_or(0.0);
        m * 2f64.powf((self.exp + s) as f64)
    }

    /// Midpoint rounded to `digits` decimals.
    pub fn to_decimal(&self, digits: usize) -> String {
        let p10 = BigInt::from(10u32).pow(digits as u32);
        let scaled = &self.mid * &p10;
        let v = if self.exp >= 0 {
            scaled << self.exp as u64
        } else {
            let s = (-self.exp) as u64;
            let half = BigInt::one() << (s - 1);
            (scaled + half) >> s
        };
        let neg = v.is_negative();
        let mut digits_str = v.magnitude().to_string();
        if digits > 0 {
            if digits_str.len() <= digits {
                digits_str = "0".repeat(digits + 1 - digits_str.len()) + &digits_str;
            }
            digits_str.insert(digits_str.len() - digits, '.');
        }
        if neg {
            format!("-{digits_str}")
        } else {
            digits_str
        }
    }
}

fn log2_biguint(m: &BigUint) -> f64 {
    let b = m.bits() as i64;
    let s = max(b - 60, 0) as u64;
    // Round the shifted mantissa up so the result is an upper bound.
    let top = (m >> s).to_f64().unwrap() + 1.0;
    top.log2() + s as f64
}

fn scale_rational(m: &BigInt, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(m << e as u64)
    } else {
        BigRational::new(m.clone(), BigInt::one() << (-e) as u64)
    }
}

impl PartialEq for Ball {
    /// Structural equality (same midpoint, radius and exponent).
    fn eq(&self, o: &Ball) -> bool {
        self.mid == o.mid && self.rad == o.rad && self.exp == o.exp
    }
}

impl PartialOrd for Ball {
    /// Balls compare only when disjoint.
    fn partial_cmp(&self, o: &Ball) -> Option<Ordering> {
        if self.overlaps(o) {
            return None;
        }
        let d = self.sub(o);
        Some(if d.mid.is_negative() { Ordering::Less } else { Ordering::Greater })
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lr = self.log10_rad();
        let digits = if lr.is_finite() { max((-lr).floor() as i64 + 2, 1) as usize } else { 20 };
        let digits = digits.min(self.prec as usize / 3 + 2);
        write!(f, "{}", self.to_decimal(digits))?;
        if lr.is_finite() {
            write!(f, " ± 1e{}", lr.ceil() as i64)?;
        }
        Ok(())
    }
}
