//! Leading exponential growth of each kernel family.
//!
//! Every family value behaves like `Σ c_i μ_i^n · n^(power)` for a finite
//! root set `{μ_i}`; the dominant roots fix the geometric ratio of a series.

use super::{Kernel, QArg, Side};
use crate::error::{Error, Result};
use crate::exact_arith::{rat_to_f64, QuadSurd};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// One root of a family's characteristic set.
#[derive(Clone, Debug)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    /// Exact value for a real root, exact modulus for a nonreal one.
    pub exact: Option<QuadSurd>,
    /// Minimal polynomial (coefficients from the constant term up) when the
    /// root is not a quadratic surd.
    pub poly: Option<Vec<BigRational>>,
}

impl Root {
    fn real(q: QuadSurd) -> Root {
        Root { re: q.to_f64(), im: 0.0, exact: Some(q), poly: None }
    }

    fn rational(q: BigRational) -> Root {
        Root::real(QuadSurd::rational(q))
    }

    fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    fn is_real(&self) -> bool {
        self.im == 0.0
    }

    fn mul(&self, o: &Root) -> Root {
        let re = self.re * o.re - self.im * o.im;
        let im = self.re * o.im + self.im * o.re;
        let exact = match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => a.mul(b),
            _ => None,
        };
        Root { re, im, exact, poly: None }
    }

    fn pow(&self, e: u32) -> Root {
        let mut acc = Root::rational(BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Dominant growth of a kernel product.
#[derive(Clone, Debug)]
pub struct Growth {
    /// Signed dominant root when real, modulus when a complex pair (or two
    /// opposite real roots) dominate; `None` when not a quadratic surd.
    pub value: Option<QuadSurd>,
    /// Floating value matching `value` (signed real root or modulus).
    pub approx: f64,
    /// The dominant part alternates in an irregular way: a complex pair or a
    /// `±μ` tie.
    pub oscillating: bool,
    /// Minimal polynomial of a non-surd dominant root.
    pub poly: Option<Vec<BigRational>>,
}

impl Growth {
    pub fn one() -> Growth {
        Growth { value: Some(QuadSurd::from_int(1)), approx: 1.0, oscillating: false, poly: None }
    }

    pub fn mul(&self, o: &Growth) -> Growth {
        let value = match (&self.value, &o.value) {
            (Some(a), Some(b)) => a.mul(b),
            _ => None,
        };
        let poly = if value.is_none() { self.poly.clone().or_else(|| o.poly.clone()) } else { None };
        Growth { value, approx: self.approx * o.approx, oscillating: self.oscillating || o.oscillating, poly }
    }

    fn from_roots(roots: &[Root]) -> Growth {
        let top = roots.iter().map(Root::modulus).fold(0.0, f64::max);
        let tol = 1e-10 * top.max(1e-300);
        let dom: Vec<&Root> = roots.iter().filter(|r| (r.modulus() - top).abs() <= tol).collect();
        let first = dom[0];
        let nonreal = dom.iter().any(|r| !r.is_real());
        let mixed_sign = dom.iter().any(|r| r.is_real() && (r.re > 0.0) != (first.re > 0.0));
        let oscillating = nonreal || mixed_sign;
        if oscillating {
            let value = first.exact.as_ref().map(|q| q.abs());
            let poly = if value.is_none() { first.poly.clone() } else { None };
            Growth { value, approx: top, oscillating, poly }
        } else {
            Growth { value: first.exact.clone(), approx: first.re, oscillating, poly: first.poly.clone() }
        }
    }
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Roots of `L² + bL + c`.
fn quadratic(b: &BigRational, c: &BigRational) -> Vec<Root> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let disc = b * b - c * r(4);
    let mid = -(b * &half);
    if !disc.is_negative() {
        let s = QuadSurd::sqrt_rational(&disc).expect("nonnegative").scale(&half);
        let m = QuadSurd::rational(mid);
        vec![Root::real(m.add(&s).unwrap()), Root::real(m.sub(&s).unwrap())]
    } else {
        // Conjugate pair with product c.
        let modulus = QuadSurd::sqrt_rational(c).expect("positive product");
        let re = rat_to_f64(&mid);
        let im = rat_to_f64(&(-disc)).sqrt() / 2.0;
        vec![
            Root { re, im, exact: Some(modulus.clone()), poly: None },
            Root { re, im: -im, exact: Some(modulus), poly: None },
        ]
    }
}

/// Complex roots of a monic polynomial with coefficients from the constant
/// term up, by Durand–Kerner iteration.
fn numeric_roots(coeffs: &[f64]) -> Vec<(f64, f64)> {
    let deg = coeffs.len() - 1;
    let scale = 1.0 + coeffs[..deg].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<(f64, f64)> = (0..deg)
        .map(|i| {
            let t = 0.4 + i as f64 * 2.0 * std::f64::consts::PI / deg as f64;
            (scale * t.cos(), scale * t.sin())
        })
        .collect();
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let cdiv = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut p = (1.0, 0.0);
            for c in coeffs.iter().rev().skip(1) {
                p = cmul(p, z[i]);
                p.0 += c;
            }
            let mut q = (1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    q = cmul(q, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = cdiv(p, q);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            delta = delta.max(step.0.hypot(step.1));
        }
        if delta < 1e-15 * scale {
            break;
        }
    }
    z
}

/// Best rational approximations of `x` with denominators up to `max_den`.
fn convergents(x: f64, max_den: i64) -> Vec<BigRational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        out.push(BigRational::new(BigInt::from(h2), BigInt::from(k2)));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    out
}

fn eval_poly(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Roots of a monic cubic with rational coefficients `[c0, c1, c2, 1]`,
/// exact whenever a rational root exists.
fn cubic(coeffs: &[BigRational]) -> Vec<Root> {
    let fc: Vec<f64> = coeffs.iter().map(rat_to_f64).collect();
    let approx = numeric_roots(&fc);
    for &(re, im) in &approx {
        if im.abs() > 1e-9 * (1.0 + re.abs()) {
            continue;
        }
        for cand in convergents(re, 1_000_000) {
            if eval_poly(coeffs, &cand).is_zero() {
                // Deflate: L³ + c2 L² + c1 L + c0 = (L − t)(L² + b L + c).
                let b = &coeffs[2] + &cand;
                let c = &coeffs[1] + &cand * &b;
                let mut roots = vec![Root::rational(cand)];
                roots.extend(quadratic(&b, &c));
                return roots;
            }
        }
    }
    approx
        .into_iter()
        .map(|(re, im)| Root { re, im, exact: None, poly: Some(coeffs.to_vec()) })
        .collect()
}

impl Kernel {
    /// Characteristic roots of this kernel.
    pub fn roots(&self) -> Result<Vec<Root>> {
        let rat = |q: BigRational| vec![Root::rational(q)];
        let ints = |v: &[i64]| v.iter().map(|&n| Root::rational(r(n))).collect::<Vec<_>>();
        Ok(match self {
            Kernel::Binom { a, b, exp } => {
                let (a, b) = (*a as u32, *b as u32);
                let num = BigInt::from(a).pow(a);
                let den = BigInt::from(b).pow(b) * BigInt::from(a - b).pow(a - b);
                let g = BigRational::new(num, den);
                rat(if *exp >= 0 { g.pow(*exp) } else { g.recip().pow(-*exp) })
            }
            Kernel::Trinomial { b, c, step, power } => {
                let b = BigRational::from_integer(b.clone());
                let c = BigRational::from_integer(c.clone());
                let base = quadratic(&(-(&b * r(2))), &(&b * &b - c * r(4)));
                base.iter().map(|x| x.pow(step * power)).collect()
            }
            Kernel::Apery(x) => {
                // L³ − (3x+8)L² + (3x²−20x+16)L − (x³−x²)
                let x2 = x * x;
                cubic(&[
                    -(&x2 * x - &x2),
                    &x2 * r(3) - x * r(20) + r(16),
                    -(x * r(3) + r(8)),
                    r(1),
                ])
            }
            Kernel::SConj5(x) => {
                // With y = 1/x: L³ − (27y²+3y)L² + 3y²L − y³
                let y = x.recip();
                let y2 = &y * &y;
                cubic(&[-(&y2 * &y), &y2 * r(3), -(&y2 * r(27) + &y * r(3)), r(1)])
            }
            Kernel::S1(x) => vec![
                Root::rational(x * r(4) + r(4)),
                Root::rational(x * r(4)),
                Root::rational(r(4)),
            ],
            Kernel::S2(x) => vec![Root::rational(r(16)), Root::rational(x * r(4))],
            Kernel::W(x) => {
                let x2 = x * x;
                quadratic(&(-(x + r(2)) * r(8) / &x2), &(r(16) / &x2))
            }
            Kernel::FPlus(x) => vec![Root::rational((x + r(1)) * r(4)), Root::rational((x - r(1)) * r(4))],
            Kernel::FMinus(x) => quadratic(&(x * r(8)), &((x * x + r(1)) * r(16))),
            Kernel::G(y) => {
                let s = r(1) + y * r(4);
                let d = r(1) - y * r(4);
                quadratic(&(-(s * r(2))), &(&d * &d))
            }
            Kernel::H(x) => quadratic(&(-(x * r(16))), &r(-64)),
            Kernel::Domb(x) => {
                let d = r(1) - x;
                quadratic(&(-(r(1) + x) * r(8)), &(&d * &d * r(16)))
            }
            Kernel::PConj6(x) => quadratic(&r(-16), &(-(x * r(16)))),
            Kernel::Clf => ints(&[16, 8]),
            Kernel::SConj6 => {
                let mut v = ints(&[80, 16]);
                v.push(Root::rational(BigRational::new(40.into(), 3.into())));
                v
            }
            Kernel::Aq | Kernel::Bq | Kernel::Cq => ints(&[-1]),
            Kernel::QConv(fs) => {
                let mut side = [BigRational::one(), BigRational::one()];
                for f in fs {
                    let g = match f.arg {
                        QArg::Central => r(4),
                        QArg::Rat(_) => r(-1),
                    };
                    let i = if f.side == Side::K { 0 } else { 1 };
                    side[i] *= g.pow(f.exp as i32);
                }
                let [a, b] = side;
                if a == b {
                    rat(a)
                } else {
                    vec![Root::rational(a), Root::rational(b)]
                }
            }
            Kernel::Dual { lambda, inner } => {
                let mut prods = vec![Root::rational(BigRational::one())];
                for k in inner {
                    let rs = k.roots()?;
                    prods = prods.iter().flat_map(|p| rs.iter().map(move |q| p.mul(q))).collect();
                }
                let lf = rat_to_f64(lambda);
                // The dual's generating function is A(−x/(1−x))/(1−x), which
                // adds a possible singularity at x = 1.
                let unit = Root::rational(BigRational::one());
                prods
                    .into_iter()
                    .map(|mu| {
                        let exact = match (&mu.exact, mu.is_real()) {
                            (Some(q), true) => {
                                QuadSurd::from_int(1).sub(&q.scale(lambda))
                            }
                            _ => None,
                        };
                        Root { re: 1.0 - lf * mu.re, im: -lf * mu.im, exact, poly: None }
                    })
                    .chain(std::iter::once(unit))
                    .collect()
            }
        })
    }

    /// Dominant root of this kernel.
    pub fn growth(&self) -> Result<Growth> {
        let roots = self.roots()?;
        if roots.is_empty() {
            return Err(Error::Unsupported(format!("no growth data for {self}")));
        }
        Ok(Growth::from_roots(&roots))
    }
}

/// Dominant growth of a product of kernels.
pub fn growth_of(ks: &[Kernel]) -> Result<Growth> {
    ks.iter().try_fold(Growth::one(), |g, k| Ok(g.mul(&k.growth()?)))
}
