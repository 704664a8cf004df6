//! Truncated sums modulo prime powers and the printed supercongruences.

use crate::error::{Error, Result};
use crate::exact_arith::{bernoulli, is_prime, legendre, mod_inverse, rat_mod};
use crate::identity_db::{Identity, Weight};
use crate::kernels::{Kernel, KernelStream};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Largest prime accepted for mod-`p^6` checks.
pub const PMAX_E6: u64 = 100;
/// Largest prime accepted for mod-`p^2` checks.
pub const PMAX_E2: u64 = 300;

/// Summand `w(k)/k^e · Π kernels(k) / m^k`, without a right-hand side.
#[derive(Clone, Debug)]
pub struct SummandSpec {
    pub weight: Weight,
    pub k_power: u32,
    pub base: BigRational,
    pub kernels: Vec<Kernel>,
}

impl From<&Identity> for SummandSpec {
    fn from(id: &Identity) -> Self {
        SummandSpec { weight: id.weight.clone(), k_power: id.k_power, base: id.base.clone(), kernels: id.kernels.clone() }
    }
}

impl SummandSpec {
    pub fn new(weight: &str, base: BigRational, kernels: &str) -> Result<SummandSpec> {
        Ok(SummandSpec { weight: weight.parse()?, k_power: 0, base, kernels: Kernel::parse_list(kernels)? })
    }

    /// The summand of the mod-`p^6` congruence after identity 1.6:
    /// `(28k²+18k+3) C(2k,k)^4 C(3k,k) / (−64)^k`.
    pub fn conj1() -> SummandSpec {
        SummandSpec::new("28k^2+18k+3", BigRational::from_integer((-64).into()), "B(2,1)^4 B(3,1)").expect("valid literal")
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(())
}

/// `Σ_{k<p} summand(k) mod p^e`, computed termwise in `Z/p^e`.
pub fn partial_sum_mod(spec: &SummandSpec, p: u64, e: u32) -> Result<BigInt> {
    check_prime(p)?;
    if e == 0 {
        return Err(Error::Domain("exponent e must be at least 1".into()));
    }
    let modulus = BigInt::from(p).pow(e);
    let inv = |d: &BigInt, k: u64, what: &str| {
        mod_inverse(d, &modulus)
            .ok_or_else(|| Error::Domain(format!("p = {p} divides the denominator of the {what} at k = {k}")))
    };
    let m_inv = inv(spec.base.numer(), 1, "factor 1/m^k")? * spec.base.denom() % &modulus;
    let mut streams: Vec<KernelStream> = spec.kernels.iter().map(KernelStream::new).collect();
    let mut acc = BigInt::zero();
    let mut mk = BigInt::one();
    for k in 0..p {
        let mut t = BigInt::one();
        for s in &mut streams {
            let f = s.next_frac().to_rational();
            t = t * f.numer() % &modulus * inv(f.denom(), k, "kernel value")? % &modulus;
        }
        let kr = BigRational::from_integer(k.into());
        let mut w = spec.weight.eval(&kr);
        if spec.k_power > 0 {
            if k == 0 {
                mk = mk * &m_inv % &modulus;
                continue;
            }
            w /= BigInt::from(k).pow(spec.k_power);
        }
        let wm = (w.numer() % &modulus) * inv(w.denom(), k, "weight")? % &modulus;
        acc = (acc + t * wm % &modulus * &mk).mod_floor(&modulus);
        mk = mk * &m_inv % &modulus;
    }
    Ok(acc)
}

/// Which side of `a x² + b y²` is targeted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    P,
    TwoP,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::P => write!(f, "p"),
            Target::TwoP => write!(f, "2p"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormRepresentation {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub target: Target,
    pub solution: Option<(u64, u64)>,
}

/// Solve `a x² + b y² = p` (or `2p`) with `x, y ≥ 0`, minimal `y` first.
pub fn represent_form(p: u64, a: u64, b: u64, target: Target) -> FormRepresentation {
    let n = match target {
        Target::P => p,
        Target::TwoP => 2 * p,
    };
    let mut solution = None;
    let mut y = 0u64;
    while a > 0 && b * y * y <= n {
        let rest = n - b * y * y;
        if rest % a == 0 {
            let x2 = rest / a;
            let x = x2.sqrt();
            if x * x == x2 {
                solution = Some((x, y));
                break;
            }
        }
        y += 1;
    }
    FormRepresentation { p, a, b, target, solution }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceReport {
    pub p: u64,
    pub e: u32,
    pub computed: BigInt,
    /// `None` when no case of the prediction applies.
    pub predicted: Option<BigInt>,
    pub case: String,
    pub form: Option<FormRepresentation>,
    pub matches: bool,
}

impl CongruenceReport {
    fn new(p: u64, e: u32, computed: BigInt, predicted: Option<BigInt>, case: String) -> Self {
        let matches = predicted.as_ref() == Some(&computed);
        CongruenceReport { p, e, computed, predicted, case, form: None, matches }
    }
}

/// `Σ_{k<p} (28k²+18k+3) C(2k,k)^4 C(3k,k)/(−64)^k ≡ 3p² − (7/2) p⁵ B_{p−3} (mod p⁶)`.
pub fn check_conj1(p: u64) -> Result<CongruenceReport> {
    check_prime(p)?;
    if p < 3 {
        return Err(Error::Domain("the congruence is stated for odd primes".into()));
    }
    let e = 6;
    let modulus = BigInt::from(p).pow(e);
    let computed = partial_sum_mod(&SummandSpec::conj1(), p, e)?;
    let pb = BigInt::from(p);
    let b = bernoulli(p as i64 - 3)?;
    let pred = BigRational::from_integer(&pb * &pb * 3)
        - BigRational::new(7.into(), 2.into()) * BigRational::from_integer(pb.pow(5)) * b;
    let predicted = rat_mod(&pred, &modulus)
        .ok_or_else(|| Error::Domain(format!("B_{} has a denominator divisible by {p}", p - 3)))?;
    Ok(CongruenceReport::new(p, e, computed, Some(predicted), "3p^2 - (7/2)p^5 B_{p-3}".into()))
}

/// The catalog summand of identity 5.9 with the weight replaced.
fn conj5_spec(weight: &str) -> SummandSpec {
    SummandSpec::new(weight, BigRational::new(2160.into(), (324 * 324).into()), "B(2,1) S5(-324)").expect("valid literal")
}

/// Legendre signs `((−1/p), (p/3), (p/5), (p/7))`.
pub fn conj5_signs(p: u64) -> Result<[i32; 4]> {
    let pb = BigInt::from(p);
    Ok([legendre(&BigInt::from(-1), p)?, legendre(&pb, 3)?, legendre(&pb, 5)?, legendre(&pb, 7)?])
}

/// One line of the nine-way case split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conj5Case {
    /// Required `((−1/p), (p/3), (p/5), (p/7))`.
    pub signs: [i32; 4],
    pub a: u64,
    pub b: u64,
    pub target: Target,
    /// Prediction `cx·x² + cp·p`.
    pub cx: i64,
    pub cp: i64,
}

pub const CONJ5_CASES: [Conj5Case; 8] = [
    Conj5Case { signs: [1, 1, 1, 1], a: 1, b: 105, target: Target::P, cx: 4, cp: -2 },
    Conj5Case { signs: [1, -1, -1, 1], a: 1, b: 105, target: Target::TwoP, cx: 2, cp: -2 },
    Conj5Case { signs: [-1, -1, -1, -1], a: 3, b: 35, target: Target::P, cx: -12, cp: 2 },
    Conj5Case { signs: [-1, 1, 1, -1], a: 3, b: 35, target: Target::TwoP, cx: -6, cp: 2 },
    Conj5Case { signs: [1, -1, 1, -1], a: 5, b: 21, target: Target::P, cx: 20, cp: -2 },
    Conj5Case { signs: [1, 1, -1, -1], a: 5, b: 21, target: Target::TwoP, cx: 10, cp: -2 },
    Conj5Case { signs: [-1, 1, -1, 1], a: 7, b: 15, target: Target::P, cx: 28, cp: -2 },
    Conj5Case { signs: [-1, -1, 1, 1], a: 7, b: 15, target: Target::TwoP, cx: 14, cp: -2 },
];

impl Conj5Case {
    pub fn label(&self) -> String {
        let x = if self.cx.abs() == 1 { String::new() } else { self.cx.abs().to_string() };
        let lead = if self.cx > 0 {
            format!("{x}x^2 - {}p", self.cp.abs())
        } else {
            format!("{}p - {x}x^2", self.cp)
        };
        let a = if self.a == 1 { String::new() } else { self.a.to_string() };
        format!("{lead}, {}={a}x^2+{}y^2", self.target, self.b)
    }
}

/// Cases whose sign pattern matches `p`; empty when `(−105/p) = −1` or
/// `p | 105`.
pub fn conj5_matching_cases(p: u64) -> Result<Vec<Conj5Case>> {
    let s = conj5_signs(p)?;
    Ok(CONJ5_CASES.iter().copied().filter(|c| c.signs == s).collect())
}

/// `(−105/p)`.
pub fn kronecker_m105(p: u64) -> Result<i32> {
    legendre(&BigInt::from(-105), p)
}

/// Both congruences after identity 5.9 for a prime `p > 5`:
/// the linear-weight sum `≡ p(−1/p)(54 + 49(p/15))` and the nine-case
/// `x²`-form prediction for the weightless sum, all mod `p²`.
pub fn check_conj5_congruences(p: u64) -> Result<(CongruenceReport, CongruenceReport)> {
    check_prime(p)?;
    if p <= 5 {
        return Err(Error::Domain("the congruences are stated for primes p > 5".into()));
    }
    let e = 2;
    let pb = BigInt::from(p);
    let modulus = &pb * &pb;
    let [m1, s3, s5, _] = conj5_signs(p)?;
    let computed1 = partial_sum_mod(&conj5_spec("357k+103"), p, e)?;
    let pred1 = (&pb * m1 * (54 + 49 * s3 * s5)).mod_floor(&modulus);
    let first = CongruenceReport::new(p, e, computed1, Some(pred1), "p(-1/p)(54+49(p/15))".into());

    let computed2 = partial_sum_mod(&conj5_spec("1"), p, e)?;
    let second = if kronecker_m105(p)? == -1 {
        CongruenceReport::new(p, e, computed2, Some(BigInt::zero()), "0, (-105/p)=-1".into())
    } else {
        let cases = conj5_matching_cases(p)?;
        match cases.as_slice() {
            [c] => {
                let form = represent_form(p, c.a, c.b, c.target);
                let predicted = form.solution.map(|(x, _)| {
                    let x2 = BigInt::from(x) * x;
                    (x2 * c.cx + &pb * c.cp).mod_floor(&modulus)
                });
                let mut r = CongruenceReport::new(p, e, computed2, predicted, c.label());
                r.form = Some(form);
                r
            }
            _ => CongruenceReport::new(p, e, computed2, None, "no case applies (p divides 105)".into()),
        }
    };
    Ok((first, second))
}
