//! Exact sequential evaluation of kernel values.

use super::{Kernel, QArg, QFactor, Side};
use crate::exact_arith::{binom_int, Ball};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Unreduced fraction with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frac {
    pub num: BigInt,
    pub den: BigInt,
}

impl Frac {
    pub fn int(n: BigInt) -> Frac {
        Frac { num: n, den: BigInt::one() }
    }

    pub fn new(num: BigInt, den: BigInt) -> Frac {
        if den.is_negative() {
            Frac { num: -num, den: -den }
        } else {
            Frac { num, den }
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    pub fn mul(&self, o: &Frac) -> Frac {
        Frac { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    pub fn pow(&self, e: u32) -> Frac {
        Frac { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_ball(&self, prec: u64) -> Ball {
        Ball::from_ratio(&self.num, &self.den, prec)
    }
}

/// `T_n(b,c)` by its three-term recurrence, keeping only two values.
#[derive(Clone, Debug)]
pub struct TrinomialIter {
    b: BigInt,
    disc: BigInt,
    n: u64,
    prev: BigInt,
    cur: BigInt,
}

impl TrinomialIter {
    pub fn new(b: BigInt, c: BigInt) -> TrinomialIter {
        let disc = &b * &b - c * 4;
        TrinomialIter { b, disc, n: 0, prev: BigInt::zero(), cur: BigInt::one() }
    }

    pub fn current(&self) -> &BigInt {
        &self.cur
    }

    pub fn advance(&mut self) {
        let n = self.n;
        let next = (&self.b * &self.cur * (2 * n + 1) - &self.disc * &self.prev * n) / (n + 1);
        self.prev = std::mem::replace(&mut self.cur, next);
        self.n += 1;
    }

    pub fn advance_to(&mut self, n: u64) {
        while self.n < n {
            self.advance();
        }
    }
}

/// `C(u0 + u1·k, v0 + v1·k)^mult` inside a defining sum.
#[derive(Clone, Copy, Debug)]
struct BinomFactor {
    u0: i64,
    u1: i64,
    v0: i64,
    v1: i64,
    mult: u32,
}

const fn bf(u0: i64, u1: i64, v0: i64, v1: i64, mult: u32) -> BinomFactor {
    BinomFactor { u0, u1, v0, v1, mult }
}

/// Multiply `d` by `num/den`, `mult` times; each step is an exact division.
fn scale(d: &mut BigInt, num: i64, den: i64, mult: u32) {
    for _ in 0..mult {
        *d *= num;
        *d /= den;
    }
}

/// Move `C(u,v)` to `C(u+du, v+dv)` through nonzero intermediate values.
fn walk(d: &mut BigInt, f: &BinomFactor, k: i64) {
    let (mut u, mut v) = (f.u0 + f.u1 * k, f.v0 + f.v1 * k);
    let (mut du, mut dv) = (f.u1, f.v1);
    while du != 0 || dv != 0 {
        let (num, den);
        if du > 0 && dv > 0 {
            (num, den) = (u + 1, v + 1);
            u += 1;
            v += 1;
            du -= 1;
            dv -= 1;
        } else if du < 0 && dv < 0 {
            (num, den) = (v, u);
            u -= 1;
            v -= 1;
            du += 1;
            dv += 1;
        } else if dv < 0 {
            (num, den) = (v, u - v + 1);
            v -= 1;
            dv += 1;
        } else if du > 0 {
            (num, den) = (u + 1, u + 1 - v);
            u += 1;
            du -= 1;
        } else if du < 0 {
            (num, den) = (u - v, u);
            u -= 1;
            du += 1;
        } else {
            (num, den) = (u - v, v + 1);
            v += 1;
            dv -= 1;
        }
        scale(d, num, den, f.mult);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SumFamily {
    Apery,
    S1,
    S2,
    W,
    FPlus,
    FMinus,
    G,
    SConj5,
    PConj6,
    Domb,
    H,
}

/// One defining sum `Σ_{k0≤k≤n} c(n,k) x^(E + s(k−k0))` laid out for
/// evaluation as `x^E · Σ c(n,k0+i) y^i`.
struct SumLayout {
    k0: i64,
    factors: Vec<BinomFactor>,
    /// `y = x^s`, with any `(−1)^k` folded in.
    y: BigRational,
    e: i64,
    negate: bool,
}

fn layout(fam: SumFamily, x: &BigRational, n: i64) -> SumLayout {
    use SumFamily::*;
    let inv = || x.recip();
    let half = (n + 1) / 2;
    let (k0, factors, y, e, negate) = match fam {
        Apery => (0, vec![bf(n, 0, 0, 1, 2), bf(n, 1, 0, 1, 1)], inv(), n, false),
        S1 => (0, vec![bf(n, 0, 0, 1, 1), bf(0, 2, 0, 1, 1), bf(2 * n, -2, n, -1, 1)], inv(), n, false),
        S2 => (0, vec![bf(0, 2, 0, 1, 2), bf(2 * n, -2, n, -1, 1)], inv(), n, false),
        W => (
            0,
            vec![bf(n, 1, 0, 2, 1), bf(0, 2, 0, 1, 2), bf(2 * n, -2, n, -1, 1)],
            inv(),
            -n,
            false,
        ),
        FPlus => (half, vec![bf(n, 0, 0, 1, 2), bf(0, 2, n, 0, 1)], x * x, 2 * half - n, false),
        FMinus => (half, vec![bf(n, 0, 0, 1, 2), bf(0, 2, n, 0, 1)], -(x * x), 2 * half - n, half % 2 == 1),
        G => (0, vec![bf(n, 0, 0, 1, 2), bf(0, 2, 0, 1, 1)], x.clone(), 0, false),
        SConj5 => (0, vec![bf(n, 0, 0, 1, 1), bf(n, 2, 0, 2, 1), bf(0, 2, 0, 1, 1)], inv(), -n, false),
        PConj6 => (half, vec![bf(0, 2, 0, 1, 2), bf(0, 1, n, -1, 1)], inv(), n - half, false),
        Domb => (
            0,
            vec![bf(n, 0, 0, 1, 2), bf(0, 2, 0, 1, 1), bf(2 * n, -2, n, -1, 1)],
            x.clone(),
            0,
            false,
        ),
        H => (
            half,
            vec![bf(n, 0, 0, 1, 1), bf(0, 2, n, 0, 1), bf(0, 2, 0, 1, 1), bf(2 * n, -2, n, -1, 1)],
            x * x,
            2 * half - n,
            false,
        ),
    };
    // The k-range of the layout is shifted so that factor arguments are
    // expressed in terms of the absolute k.
    SumLayout { k0, factors, y, e, negate }
}

fn rat_pow(x: &BigRational, e: i64) -> (BigInt, BigInt) {
    let a = e.unsigned_abs() as u32;
    let (n, d) = (x.numer().pow(a), x.denom().pow(a));
    if e >= 0 {
        (n, d)
    } else {
        (d, n)
    }
}

/// Exact defining-sum value at `n`.
fn defining_sum(fam: SumFamily, x: &BigRational, n: u64) -> Frac {
    let n = n as i64;
    let lay = layout(fam, x, n);
    let len = n - lay.k0;
    let mut d = BigInt::one();
    for f in &lay.factors {
        let c = binom_int(f.u0 + f.u1 * lay.k0, f.v0 + f.v1 * lay.k0).expect("valid binomial");
        d *= c.pow(f.mult);
    }
    let p = lay.y.numer().clone();
    let q = lay.y.denom().clone();
    let mut acc = BigInt::zero();
    for i in 0..=len {
        acc = acc * &q + &d;
        if i < len {
            for f in &lay.factors {
                walk(&mut d, f, lay.k0 + i);
            }
            d *= &p;
        }
    }
    let (xn, xd) = rat_pow(x, lay.e);
    let num = if lay.negate { -(acc * xn) } else { acc * xn };
    Frac::new(num, q.pow(len as u32) * xd)
}

/// `S_n^(2)(x)` via a three-term recurrence for `q^n S_n` with `x = p/q`:
/// `(N+1)² b_{N+1} = 2(4N²p+8N²q+2Np+8Nq+p+2q) b_N
///   − 4p(4N²p+32N²q−4Np−16Nq+p+8q) b_{N−1} + 256p²q(N−1)² b_{N−2}`.
#[derive(Clone, Debug)]
struct S2Rec {
    p: BigInt,
    q: BigInt,
    n: u64,
    /// `b_n, b_{n−1}, b_{n−2}`
    w: [BigInt; 3],
    qn: BigInt,
}

impl S2Rec {
    fn new(x: &BigRational) -> S2Rec {
        S2Rec {
            p: x.numer().clone(),
            q: x.denom().clone(),
            n: 0,
            w: [BigInt::one(), BigInt::zero(), BigInt::zero()],
            qn: BigInt::one(),
        }
    }

    fn value(&self) -> Frac {
        Frac::new(self.w[0].clone(), self.qn.clone())
    }

    fn advance(&mut self) {
        let nn = BigInt::from(self.n);
        let n2 = &nn * &nn;
        let (p, q) = (&self.p, &self.q);
        let c0 = (p * &n2 * 4 + q * &n2 * 8 + p * &nn * 2 + q * &nn * 8 + p + q * 2) * 2;
        let c1 = p * (p * &n2 * 4 + q * &n2 * 32 - p * &nn * 4 - q * &nn * 16 + p + q * 8) * 4;
        let nm1 = &nn - 1;
        let c2 = p * p * q * &nm1 * &nm1 * 256;
        let den = (&nn + 1) * (&nn + 1);
        let next = (c0 * &self.w[0] - c1 * &self.w[1] + c2 * &self.w[2]) / den;
        let [b0, b1, _] = std::mem::take(&mut self.w);
        self.w = [next, b0, b1];
        self.qn *= &self.q;
        self.n += 1;
    }
}

/// Catalan–Larcombe–French numbers by
/// `(k+1)² P_{k+1} = (24k(k+1)+8) P_k − 128k² P_{k−1}`.
#[derive(Clone, Debug)]
struct ClfRec {
    n: u64,
    prev: BigInt,
    cur: BigInt,
}

impl ClfRec {
    fn advance(&mut self) {
        let k = self.n;
        let next = (&self.cur * (24 * k * (k + 1) + 8) - &self.prev * (128 * k * k)) / ((k + 1) * (k + 1));
        self.prev = std::mem::replace(&mut self.cur, next);
        self.n += 1;
    }
}

/// `s_n` from seeds 1, 24, 976 and the order-three recurrence
/// `3(n+2)(n+3)² s_{n+3} = 51200(n+1)²(n+3) s_n − 1920(4n³+24n²+46n+29) s_{n+1}
///   + 8(n+2)(41n²+205n+255) s_{n+2}`.
#[derive(Clone, Debug)]
struct S6Rec {
    n: u64,
    /// `s_n, s_{n+1}, s_{n+2}`
    w: [BigInt; 3],
}

impl S6Rec {
    fn new() -> S6Rec {
        S6Rec { n: 0, w: [BigInt::one(), BigInt::from(24), BigInt::from(976)] }
    }

    fn advance(&mut self) {
        let n = BigInt::from(self.n);
        let a = BigInt::from(51200) * (&n + 1) * (&n + 1) * (&n + 3);
        let b = BigInt::from(1920) * (&n * &n * &n * 4 + &n * &n * 24 + &n * 46 + 29);
        let c = BigInt::from(8) * (&n + 2) * (&n * &n * 41 + &n * 205 + 255);
        let d = BigInt::from(3) * (&n + 2) * (&n + 3) * (&n + 3);
        let next = (a * &self.w[0] - b * &self.w[1] + c * &self.w[2]) / d;
        let [_, s1, s2] = std::mem::take(&mut self.w);
        self.w = [s1, s2, next];
        self.n += 1;
    }
}

/// Convolution `Σ_k (±1)^k Π_f C(arg_f, idx_f)^e_f` over a common denominator.
#[derive(Clone, Debug)]
struct ConvState {
    factors: Vec<QFactor>,
    alternating: bool,
    /// Per rational factor, `N_f(i) = Π_{j<i} (p − jq)` for the cached range.
    rising: Vec<Vec<BigInt>>,
    central: Vec<BigInt>,
}

impl ConvState {
    fn new(factors: Vec<QFactor>, alternating: bool) -> ConvState {
        let rising = factors.iter().map(|_| vec![BigInt::one()]).collect();
        ConvState { factors, alternating, rising, central: vec![BigInt::one()] }
    }

    fn extend(&mut self, n: usize) {
        for (f, r) in self.factors.iter().zip(self.rising.iter_mut()) {
            if let QArg::Rat(x) = &f.arg {
                while r.len() <= n {
                    let j = r.len() as i64 - 1;
                    let next = r.last().unwrap() * (x.numer() - x.denom() * j);
                    r.push(next);
                }
            }
        }
        while self.central.len() <= n {
            let i = self.central.len() as u64 - 1;
            let next = self.central.last().unwrap() * (4 * i + 2) / (i + 1);
            self.central.push(next);
        }
    }

    fn value(&mut self, n: u64) -> Frac {
        let nu = n as usize;
        self.extend(nu);
        // tail[i] = Π_{j=i+1}^{n} (q·j), so that C(x,i) = N(i)·tail[i] / (q^n n!).
        let mut den = BigInt::one();
        let mut scaled: Vec<Option<Vec<BigInt>>> = Vec::with_capacity(self.factors.len());
        for (f, r) in self.factors.iter().zip(&self.rising) {
            match &f.arg {
                QArg::Central => scaled.push(None),
                QArg::Rat(x) => {
                    let q = x.denom();
                    let mut tail = vec![BigInt::one(); nu + 1];
                    for i in (0..nu).rev() {
                        tail[i] = &tail[i + 1] * q * (i as u64 + 1);
                    }
                    let vals: Vec<BigInt> = (0..=nu).map(|i| &r[i] * &tail[i]).collect();
                    den *= (&tail[0]).pow(f.exp);
                    scaled.push(Some(vals));
                }
            }
        }
        let mut sum = BigInt::zero();
        for k in 0..=nu {
            let mut t = BigInt::one();
            for (f, s) in self.factors.iter().zip(&scaled) {
                let i = match f.side {
                    Side::K => k,
                    Side::J => nu - k,
                };
                let v = match s {
                    None => &self.central[i],
                    Some(vals) => &vals[i],
                };
                t *= v.pow(f.exp);
            }
            if self.alternating && k % 2 == 1 {
                sum -= t;
            } else {
                sum += t;
            }
        }
        Frac::new(sum, den)
    }
}

/// `a*_n = Σ C(n,k) (−1)^k λ^k Π inner(k)`.
struct DualState {
    lambda: BigRational,
    inner: Vec<KernelStream>,
    cache: Vec<BigRational>,
}

impl DualState {
    fn value(&mut self, n: u64) -> Frac {
        let n = n as usize;
        while self.cache.len() <= n {
            let k = self.cache.len() as i32;
            let mut v = self.lambda.pow(k);
            for s in &mut self.inner {
                v *= s.next_frac().to_rational();
            }
            self.cache.push(v);
        }
        // Common denominator keeps the inner loop in integers.
        let l = self.cache[..=n].iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
        let mut acc = BigInt::zero();
        let mut c = BigInt::one();
        for (k, v) in self.cache[..=n].iter().enumerate() {
            let t = &c * v.numer() * (&l / v.denom());
            if k % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
            c = c * (n - k) / (k + 1);
        }
        Frac::new(acc, l)
    }
}

enum State {
    Binom { a: u64, b: u64, exp: i32, val: BigInt },
    Trin { it: TrinomialIter, step: u32, power: u32 },
    Sum { fam: SumFamily, x: BigRational },
    S2(S2Rec),
    Clf(ClfRec),
    S6(S6Rec),
    Conv(ConvState),
    Dual(DualState),
}

/// Sequential exact values of one kernel, starting at index 0.
pub struct KernelStream {
    n: u64,
    state: State,
}

fn qf(x: (i64, i64), side: Side, exp: u32) -> QFactor {
    QFactor { arg: QArg::Rat(BigRational::new(x.0.into(), x.1.into())), side, exp }
}

impl KernelStream {
    /// The kernel should already have passed [`Kernel::validate`].
    pub fn new(kernel: &Kernel) -> KernelStream {
        let sum = |fam, x: &BigRational| State::Sum { fam, x: x.clone() };
        let alt = |x: (i64, i64), y: (i64, i64)| {
            State::Conv(ConvState::new(vec![qf(x, Side::K, 2), qf(y, Side::J, 1)], true))
        };
        let state = match kernel {
            Kernel::Binom { a, b, exp } => {
                State::Binom { a: *a as u64, b: *b as u64, exp: *exp, val: BigInt::one() }
            }
            Kernel::Trinomial { b, c, step, power } => {
                State::Trin { it: TrinomialIter::new(b.clone(), c.clone()), step: *step, power: *power }
            }
            Kernel::Apery(x) => sum(SumFamily::Apery, x),
            Kernel::S1(x) => sum(SumFamily::S1, x),
            Kernel::S2(x) => State::S2(S2Rec::new(x)),
            Kernel::W(x) => sum(SumFamily::W, x),
            Kernel::FPlus(x) => sum(SumFamily::FPlus, x),
            Kernel::FMinus(x) => sum(SumFamily::FMinus, x),
            Kernel::G(x) => sum(SumFamily::G, x),
            Kernel::SConj5(x) => sum(SumFamily::SConj5, x),
            Kernel::PConj6(x) => sum(SumFamily::PConj6, x),
            Kernel::Domb(x) => sum(SumFamily::Domb, x),
            Kernel::H(x) => sum(SumFamily::H, x),
            Kernel::Clf => State::Clf(ClfRec { n: 0, prev: BigInt::zero(), cur: BigInt::one() }),
            Kernel::SConj6 => State::S6(S6Rec::new()),
            Kernel::Aq => alt((-1, 3), (-2, 3)),
            Kernel::Bq => alt((-1, 4), (-3, 4)),
            Kernel::Cq => alt((-1, 6), (-5, 6)),
            Kernel::QConv(fs) => State::Conv(ConvState::new(fs.clone(), false)),
            Kernel::Dual { lambda, inner } => State::Dual(DualState {
                lambda: lambda.clone(),
                inner: inner.iter().map(KernelStream::new).collect(),
                cache: Vec::new(),
            }),
        };
        KernelStream { n: 0, state }
    }

    /// Index of the value the next call to [`next_frac`](Self::next_frac) returns.
    /// Value at the current index, then advance.
    pub fn next_frac(&mut self) -> Frac {
        let n = self.n;
        let v = match &mut self.state {
            State::Binom { a, b, exp, val } => {
                let out = if *exp > 0 {
                    Frac::int(val.pow(*exp as u32))
                } else {
                    Frac::new(BigInt::one(), val.pow(exp.unsigned_abs()))
                };
                // C(a(n+1), b(n+1)) from C(an, bn).
                let (a, b) = (*a, *b);
                for i in 1..=a {
                    *val *= a * n + i;
                }
                for i in 1..=b {
                    *val /= b * n + i;
                }
                for i in 1..=(a - b) {
                    *val /= (a - b) * n + i;
                }
                out
            }
            State::Trin { it, step, power } => {
                let out = Frac::int(it.current().pow(*power));
                it.advance_to((n + 1) * *step as u64);
                out
            }
            State::Sum { fam, x } => defining_sum(*fam, x, n),
            State::S2(r) => {
                let out = r.value();
                r.advance();
                out
            }
            State::Clf(r) => {
                let out = Frac::int(r.cur.clone());
                r.advance();
                out
            }
            State::S6(r) => {
                let out = Frac::int(r.w[0].clone());
                r.advance();
                out
            }
            State::Conv(c) => c.value(n),
            State::Dual(d) => d.value(n),
        };
        self.n += 1;
        v
    }

    /// Move forward so the next value returned is at index `k`.
    pub fn skip_to(&mut self, k: u64) {
        match &mut self.state {
            State::Sum { .. } | State::Conv(_) if k >= self.n => self.n = k,
            State::Trin { it, step, .. } if k >= self.n => {
                it.advance_to(k * *step as u64);
                self.n = k;
            }
            _ => {
                while self.n < k {
                    self.next_frac();
                }
            }
        }
    }
}

/// `S2_n(x)` by its defining sum; the stream uses a three-term recurrence.
pub fn s2_direct(x: &BigRational, n: u64) -> BigRational {
    defining_sum(SumFamily::S2, x, n).to_rational()
}
