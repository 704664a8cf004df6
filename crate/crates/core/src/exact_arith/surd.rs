use super::{exact_sqrt, fmt_rat, parse_rat, rat_to_f64, squarefree_split, Ball};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Exact `u + v·√d` with `d` squarefree; `v = 0` forces `d = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    u: BigRational,
    v: BigRational,
    d: BigInt,
}

impl QuadSurd {
    pub fn new(u: BigRational, v: BigRational, d: BigInt) -> Result<QuadSurd> {
        if d.is_negative() {
            return Err(Error::Domain(format!("QuadSurd radicand {d} is negative")));
        }
        let (s, d) = squarefree_split(&d);
        let mut v = v * s;
        let mut u = u;
        let mut d = d;
        if d.is_one() {
            u += &v;
            v = BigRational::zero();
        }
        if v.is_zero() || d.is_zero() {
            v = BigRational::zero();
            d = BigInt::zero();
        }
        Ok(QuadSurd { u, v, d })
    }

    pub fn rational(u: BigRational) -> QuadSurd {
        QuadSurd { u, v: BigRational::zero(), d: BigInt::zero() }
    }

    pub fn from_int(n: i64) -> QuadSurd {
        QuadSurd::rational(BigRational::from_integer(n.into()))
    }

    /// `√q` for rational `q ≥ 0`, as `(1/den)·√(num·den)`.
    pub fn sqrt_rational(q: &BigRational) -> Result<QuadSurd> {
        if q.is_negative() {
            return Err(Error::Domain(format!("sqrt of negative rational {q}")));
        }
        if let (Some(a), Some(b)) = (exact_sqrt(q.numer()), exact_sqrt(q.denom())) {
            return Ok(QuadSurd::rational(BigRational::new(a, b)));
        }
        QuadSurd::new(
            BigRational::zero(),
            BigRational::new(BigInt::one(), q.denom().clone()),
            q.numer() * q.denom(),
        )
    }

    pub fn u(&self) -> &BigRational {
        &self.u
    }
    pub fn v(&self) -> &BigRational {
        &self.v
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    fn compatible(&self, o: &QuadSurd) -> Option<BigInt> {
        if self.is_rational() {
            Some(o.d.clone())
        } else if o.is_rational() || self.d == o.d {
            Some(self.d.clone())
        } else {
            None
        }
    }

    pub fn add(&self, o: &QuadSurd) -> Option<QuadSurd> {
        let d = self.compatible(o)?;
        QuadSurd::new(&self.u + &o.u, &self.v + &o.v, d).ok()
    }

    pub fn neg(&self) -> QuadSurd {
        QuadSurd { u: -&self.u, v: -&self.v, d: self.d.clone() }
    }

    pub fn sub(&self, o: &QuadSurd) -> Option<QuadSurd> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QuadSurd) -> Option<QuadSurd> {
        let d = self.compatible(o)?;
        let dr = BigRational::from_integer(d.clone());
        let u = &self.u * &o.u + &self.v * &o.v * dr;
        let v = &self.u * &o.v + &self.v * &o.u;
        QuadSurd::new(u, v, d).ok()
    }

    pub fn scale(&self, q: &BigRational) -> QuadSurd {
        QuadSurd::new(&self.u * q, &self.v * q, self.d.clone()).unwrap()
    }

    pub fn pow(&self, e: u32) -> QuadSurd {
        let mut acc = QuadSurd::from_int(1);
        for _ in 0..e {
            acc = acc.mul(self).expect("same radicand");
        }
        acc
    }

    /// `1/x`; `None` for zero.
    pub fn recip(&self) -> Option<QuadSurd> {
        let dr = BigRational::from_integer(self.d.clone());
        let n = &self.u * &self.u - &self.v * &self.v * dr;
        if n.is_zero() {
            return None;
        }
        QuadSurd::new(&self.u / &n, -&self.v / &n, self.d.clone()).ok()
    }

    pub fn div(&self, o: &QuadSurd) -> Option<QuadSurd> {
        self.mul(&o.recip()?)
    }

    /// Exact sign.
    pub fn signum(&self) -> i32 {
        let su = sgn(&self.u);
        let sv = sgn(&self.v);
        if sv == 0 || su == sv {
            return if su != 0 { su } else { sv };
        }
        if su == 0 {
            return sv;
        }
        // Opposite signs: compare u² with v²d.
        let dr = BigRational::from_integer(self.d.clone());
        match (&self.u * &self.u).cmp(&(&self.v * &self.v * dr)) {
            Ordering::Greater => su,
            Ordering::Less => sv,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> QuadSurd {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact comparison when radicands are compatible.
    pub fn cmp_exact(&self, o: &QuadSurd) -> Option<Ordering> {
        let s = self.sub(o)?.signum();
        Some(s.cmp(&0))
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.u) + rat_to_f64(&self.v) * rat_to_f64(&BigRational::from_integer(self.d.clone())).sqrt()
    }

    pub fn to_ball(&self, prec: u64) -> Ball {
        let u = Ball::from_rational(&self.u, prec);
        if self.v.is_zero() {
            return u;
        }
        let r = Ball::from_bigint(&self.d, prec + 8).sqrt().expect("positive radicand");
        u.add(&r.mul(&Ball::from_rational(&self.v, prec)))
    }
}

fn sgn(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for QuadSurd {
    /// `(9+√6)/18`, `-64/225`, `-(35+27√5)/100`, `16√11`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            return write!(f, "{}", fmt_rat(&self.u));
        }
        let l = self.u.denom().lcm(self.v.denom());
        let mut un = self.u.numer() * (&l / self.u.denom());
        let mut vn = self.v.numer() * (&l / self.v.denom());
        let neg = !un.is_positive() && vn.is_negative();
        if neg {
            un = -un;
            vn = -vn;
        }
        let root = |c: &BigInt| -> String {
            if c.is_one() {
                format!("√{}", self.d)
            } else if *c == -BigInt::one() {
                format!("-√{}", self.d)
            } else {
                format!("{c}√{}", self.d)
            }
        };
        let body = if un.is_zero() {
            root(&vn)
        } else if vn.is_negative() {
            format!("{un}{}", root(&vn))
        } else {
            format!("{un}+{}", root(&vn))
        };
        let sign = if neg { "-" } else { "" };
        if l.is_one() {
            if un.is_zero() {
                write!(f, "{sign}{body}")
            } else if neg {
                write!(f, "-({body})")
            } else {
                write!(f, "{body}")
            }
        } else if un.is_zero() {
            write!(f, "{sign}{body}/{l}")
        } else {
            write!(f, "{sign}({body})/{l}")
        }
    }
}

impl FromStr for QuadSurd {
    type Err = Error;

    /// Accepts the forms produced by `Display`, with `√d` or `sqrt(d)`.
    fn from_str(s: &str) -> Result<QuadSurd> {
        let bad = || Error::parse(s, "not a quadratic surd");
        let t: String = s.replace("sqrt(", "√(").chars().filter(|c| !c.is_whitespace()).collect();
        let (neg, t) = match t.strip_prefix('-') {
            Some(r) if r.starts_with('(') => (true, r.to_string()),
            _ => (false, t),
        };
        let (body, den) = if let Some(r) = t.strip_prefix('(') {
            let close = r.rfind(')').ok_or_else(bad)?;
            let after = &r[close + 1..];
            let den = match after.strip_prefix('/') {
                Some(d) => parse_rat(d).ok_or_else(bad)?,
                None if after.is_empty() => BigRational::one(),
                None => return Err(bad()),
            };
            (r[..close].to_string(), den)
        } else if let Some((a, b)) = split_last_div(&t) {
            (a, parse_rat(&b).ok_or_else(bad)?)
        } else {
            (t.clone(), BigRational::one())
        };
        let mut acc = QuadSurd::from_int(0);
        for term in split_terms(&body) {
            let q = parse_term(&term).ok_or_else(bad)?;
            acc = acc.add(&q).ok_or_else(bad)?;
        }
        let acc = acc.scale(&(BigRational::one() / den));
        Ok(if neg { acc.neg() } else { acc })
    }
}

fn split_last_div(t: &str) -> Option<(String, String)> {
    // "27√5/100" style: a single term over an integer.
    let i = t.rfind('/')?;
    let (a, b) = (&t[..i], &t[i + 1..]);
    if a.contains('√') && !a[1..].contains(['+', '-']) {
        Some((a.to_string(), b.to_string()))
    } else {
        None
    }
}

fn split_terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for (i, c) in s.chars().enumerate() {
        if (c == '+' || c == '-') && i > 0 {
            out.push(std::mem::take(&mut cur));
        }
        if c != '+' {
            cur.push(c);
        }
    }
    out.push(cur);
    out
}

fn parse_term(t: &str) -> Option<QuadSurd> {
    let t = t.replace(['(', ')'], "");
    if let Some((c, d)) = t.split_once('√') {
        let c = match c {
            "" => BigRational::one(),
            "-" => -BigRational::one(),
            c => parse_rat(c.trim_end_matches('*'))?,
        };
        let d: BigInt = d.parse().ok()?;
        QuadSurd::new(BigRational::zero(), c, d).ok()
    } else {
        Some(QuadSurd::rational(parse_rat(&t)?))
    }
}
