//! Ball-arithmetic evaluation of catalog series with guarded tail bounds,
//! exact convergence ratios and the dual-sequence and binomial transforms.

use crate::error::{Error, Result};
use crate::exact_arith::{binom_int, fmt_rat, prec_for_digits, Ball, QuadSurd};
use crate::identity_db::{Identity, RhsExpr, Weight};
use crate::kernels::{growth_of, Kernel, KernelStream, QArg, QFactor, Side};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Terms examined before the ratio guard is enforced (at least).
pub const BURN_IN: u64 = 50;

/// Hard cap on the number of summed terms.
pub const MAX_TERMS: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Verified { digits: u32 },
    /// `bound` is a lower bound on `|LHS − RHS|`.
    Refuted { bound: f64 },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Verified { .. } => "VERIFIED",
            Verdict::Refuted { .. } => "REFUTED",
            Verdict::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified { digits } => write!(f, "VERIFIED({digits})"),
            Verdict::Refuted { bound } => write!(f, "REFUTED(|LHS-RHS| >= {bound:.3e})"),
            Verdict::Inconclusive { reason } => write!(f, "INCONCLUSIVE({reason})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvalReport {
    pub code: String,
    pub digits: u32,
    pub lhs: Ball,
    pub rhs: Ball,
    /// Upper bound on `|LHS − RHS|`.
    pub diff_bound: f64,
    pub terms: u64,
    /// `|r|` of the convergence ratio.
    pub ratio: f64,
    /// True when the published right-hand side was used although a
    /// corrected one exists.
    pub published_rhs: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// Compare against the published right-hand side even when a corrected
    /// value is recorded.
    pub published_rhs: bool,
    pub max_terms: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { published_rhs: false, max_terms: MAX_TERMS }
    }
}

/// What the engine knows about the geometric rate of a series.
#[derive(Clone, Debug)]
pub struct RatioInfo {
    /// Exact limit of `t_{k+1}/t_k`, or its modulus (with the sign of the
    /// base) when the dominant part oscillates.
    pub exact: Option<QuadSurd>,
    pub abs: f64,
    pub oscillating: bool,
}

pub fn ratio_info(id: &Identity) -> Result<RatioInfo> {
    let g = growth_of(&id.kernels)?;
    let base = &id.base;
    let exact = g.value.as_ref().and_then(|v| v.div(&QuadSurd::rational(base.clone())));
    let abs = (g.approx / rat_f64(base)).abs();
    Ok(RatioInfo { exact, abs, oscillating: g.oscillating })
}

/// Exact geometric ratio `lim t_{k+1}/t_k`.
pub fn convergence_ratio(id: &Identity) -> Result<QuadSurd> {
    let info = ratio_info(id)?;
    info.exact.ok_or_else(|| {
        Error::Unsupported(format!("{}: dominant growth is not a quadratic surd (|r| ≈ {:.6})", id.code, info.abs))
    })
}

/// `ρ = |r| + (1 − |r|)/2`.
pub fn safety_ratio(abs_r: f64) -> f64 {
    abs_r + (1.0 - abs_r) / 2.0
}

fn rat_f64(q: &BigRational) -> f64 {
    crate::exact_arith::rat_to_f64(q)
}

fn check_convergent(id: &Identity, info: &RatioInfo) -> Result<()> {
    let diverges = match &info.exact {
        Some(r) => r.abs().cmp_exact(&QuadSurd::from_int(1)) != Some(Ordering::Less),
        None => info.abs >= 1.0 - 1e-12,
    };
    if diverges {
        let shown = info.exact.as_ref().map(|r| r.to_string()).unwrap_or_else(|| format!("{:.6}", info.abs));
        return Err(Error::NonConvergent(format!("{}: |ratio| = |{shown}| is not below 1", id.code)));
    }
    Ok(())
}

/// Burn-in long enough for polynomial factors to stop dominating `ρ/|r|`.
fn burn_in(abs_r: f64, rho: f64) -> u64 {
    if abs_r <= 0.0 {
        return BURN_IN;
    }
    let slack = rho / abs_r - 1.0;
    BURN_IN.max((4.0 / slack).ceil() as u64)
}

/// Estimated `N` with `|t_N|·ρ/(1−ρ) < 10^−(digits+2)`.
pub fn terms_needed(id: &Identity, digits: u32) -> Result<u64> {
    let info = ratio_info(id)?;
    check_convergent(id, &info)?;
    if digits == 0 {
        return Ok(1);
    }
    let rho = safety_ratio(info.abs);
    let decay = -info.abs.log10();
    if decay <= 0.0 || !decay.is_finite() {
        return Ok(1);
    }
    let need = digits as f64 + 2.0 + (rho / (1.0 - rho)).log10().max(0.0);
    Ok((need / decay).ceil() as u64 + id.start as u64)
}

/// Exact ratio `C(a(k+1), b(k+1)) / C(ak, bk)`.
fn binom_step(a: u64, b: u64, k: u64) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=a {
        num *= a * k + i;
    }
    for i in 1..=b {
        den *= b * k + i;
    }
    for i in 1..=(a - b) {
        den *= (a - b) * k + i;
    }
    BigRational::new(num, den)
}

/// Sequential term balls `t_start, t_start+1, …`.
struct TermGen<'a> {
    id: &'a Identity,
    k: u64,
    prec: u64,
    /// `Π C(ak,bk)^e / m^k` as a ball.
    hyper: Ball,
    binoms: Vec<(u64, u64, i32)>,
    streams: Vec<KernelStream>,
}

impl<'a> TermGen<'a> {
    fn new(id: &'a Identity, prec: u64) -> TermGen<'a> {
        let mut binoms = Vec::new();
        let mut streams = Vec::new();
        for k in &id.kernels {
            match k {
                Kernel::Binom { a, b, exp } => binoms.push((*a as u64, *b as u64, *exp)),
                other => streams.push(KernelStream::new(other)),
            }
        }
        TermGen { id, k: 0, prec, hyper: Ball::from_int(1, prec), binoms, streams }
    }

    /// Term at the current index, then advance.
    fn next(&mut self) -> Ball {
        let k = self.k;
        let mut t = self.hyper.clone();
        for s in &mut self.streams {
            let f = s.next_frac();
            if f.is_zero() {
                t = Ball::zero(self.prec);
            } else {
                t = t.mul(&f.to_ball(self.prec));
            }
        }
        if k >= self.id.start as u64 {
            let kr = BigRational::from_integer(BigInt::from(k));
            let mut w = self.id.weight.eval(&kr);
            if self.id.k_power > 0 {
                w /= BigRational::from_integer(BigInt::from(k).pow(self.id.k_power));
            }
            t = t.mul_rational(&w);
        }
        let mut step = BigRational::one() / &self.id.base;
        for &(a, b, e) in &self.binoms {
            let r = binom_step(a, b, k);
            step *= if e > 0 { r.pow(e) } else { r.recip().pow(-e) };
        }
        self.hyper = self.hyper.mul_rational(&step);
        self.k += 1;
        t
    }
}

struct Summation {
    sum: Ball,
    terms: u64,
    guard: Option<String>,
}

/// Sum until the tail bound is below `2^tail_log2`.
///
/// With a single dominant real root the guard is the termwise ratio test
/// `|t_{k+1}| ≤ ρ|t_k|` and the tail is `|t_N|·ρ/(1−ρ)`. When the dominant
/// part oscillates the termwise ratio has no limit, so the guard and the
/// tail use the running envelope `B_k = max(|t_k|, ρ·B_{k−1})` instead.
fn sum_series(id: &Identity, prec: u64, info: &RatioInfo, tail_log2: f64, max_terms: u64) -> Summation {
    let rho = safety_ratio(info.abs);
    let log_rho = rho.log2();
    let tail_factor = (rho / (1.0 - rho)).log2() + 1.0;
    let burn = id.start as u64 + burn_in(info.abs, rho);
    let mut gen = TermGen::new(id, prec);
    for _ in 0..id.start {
        gen.next();
    }
    let mut sum = Ball::zero(prec);
    // log2 of the quantity the guard compares against.
    let mut prev = f64::NEG_INFINITY;
    let mut n = 0u64;
    let tail_ball = |bound: f64| Ball::error_pow2(bound.ceil().max(-1e9) as i64, prec);
    loop {
        let k = gen.k;
        let t = gen.next();
        let lt = t.log2_upper();
        sum = sum.add(&t);
        n += 1;
        let allowed = prev + log_rho;
        if k > burn && lt > allowed + 1e-9 {
            let what = if info.oscillating { "ρ·envelope" } else { "ρ·|t_{k-1}|" };
            return Summation {
                sum: sum.add(&tail_ball(lt.max(prev) + tail_factor)),
                terms: n,
                guard: Some(format!(
                    "ratio guard violated at k = {k}: |t_k| ≈ 2^{lt:.1} exceeds {what} ≈ 2^{allowed:.1} (ρ = {rho:.6})"
                )),
            };
        }
        prev = if info.oscillating || lt == f64::NEG_INFINITY { lt.max(allowed) } else { lt };
        let bound = prev + tail_factor;
        if k >= burn && bound.ceil() <= tail_log2 {
            return Summation { sum: sum.add(&tail_ball(bound)), terms: n, guard: None };
        }
        if n >= max_terms {
            return Summation {
                sum: sum.add(&tail_ball(bound)),
                terms: n,
                guard: Some(format!("term cap {max_terms} reached before the tail bound met the target")),
            };
        }
    }
}

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Enclosure of the series value with radius at most `10^−digits / 4`
/// unless the guard trips. Returns the ball, terms used and any diagnostic.
pub fn lhs_ball(id: &Identity, digits: u32, max_terms: u64) -> Result<(Ball, u64, Option<String>)> {
    id.validate()?;
    let info = ratio_info(id)?;
    check_convergent(id, &info)?;
    let target_log2 = -(digits as f64) * LOG2_10 - 2.0;
    let tail_log2 = target_log2 - 2.0;
    let est = terms_needed(id, digits)?;
    let mut prec = prec_for_digits(digits) + 2 * (64 - est.max(1).leading_zeros() as u64) + 16;
    for _ in 0..5 {
        let s = sum_series(id, prec, &info, tail_log2, max_terms);
        if s.guard.is_some() {
            return Ok((s.sum, s.terms, s.guard));
        }
        let r = s.sum.log2_rad();
        if r <= target_log2 {
            return Ok((s.sum, s.terms, None));
        }
        // Rounding dominated: cancellation ate the guard bits.
        prec += (r - target_log2).ceil() as u64 + 32;
    }
    Err(Error::Internal(format!("{}: precision escalation did not converge", id.code)))
}

pub fn evaluate(id: &Identity, digits: u32) -> Result<EvalReport> {
    evaluate_with(id, digits, &EvalOptions::default())
}

pub fn evaluate_with(id: &Identity, digits: u32, opts: &EvalOptions) -> Result<EvalReport> {
    if digits == 0 {
        return Err(Error::Domain("digits must be at least 1".into()));
    }
    let rhs_expr = if opts.published_rhs { &id.rhs } else { id.effective_rhs() };
    evaluate_against(id, rhs_expr, digits, opts.max_terms).map(|mut r| {
        r.published_rhs = opts.published_rhs && id.alt_rhs.is_some();
        r
    })
}

/// Evaluate `id` and compare with an arbitrary right-hand side.
pub fn evaluate_against(id: &Identity, rhs_expr: &RhsExpr, digits: u32, max_terms: u64) -> Result<EvalReport> {
    let info = ratio_info(id)?;
    let (lhs, terms, guard) = lhs_ball(id, digits, max_terms)?;
    let rhs = rhs_expr.value(digits + 1);
    let diff = lhs.sub(&rhs);
    let diff_bound = 2f64.powf(diff.log2_upper());
    let verdict = if let Some(g) = guard {
        Verdict::Inconclusive { reason: g }
    } else if lhs.overlaps(&rhs) {
        let combined = lhs.rad_rational() + rhs.rad_rational();
        let tol = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits));
        if combined <= tol {
            Verdict::Verified { digits }
        } else {
            Verdict::Inconclusive { reason: "balls overlap but are wider than the requested tolerance".into() }
        }
    } else if lhs.separated_by(&rhs, 10) {
        let gap = diff.mid_rational().abs() - diff.rad_rational();
        Verdict::Refuted { bound: rat_f64(&gap) }
    } else {
        Verdict::Inconclusive { reason: "balls are disjoint by less than 10× their combined radius".into() }
    };
    Ok(EvalReport {
        code: id.code.clone(),
        digits,
        lhs,
        rhs,
        diff_bound,
        terms,
        ratio: info.abs,
        published_rhs: false,
        verdict,
    })
}

/// Exact partial sum `Σ_{start ≤ k < n} t_k`.
pub fn partial_sum_exact(id: &Identity, n: u64) -> Result<BigRational> {
    let mut streams: Vec<KernelStream> = id.kernels.iter().map(KernelStream::new).collect();
    let mut acc = BigRational::zero();
    let mut mk = BigRational::one();
    for k in 0..n {
        let mut t = BigRational::one();
        for s in &mut streams {
            t *= s.next_frac().to_rational();
        }
        if k >= id.start as u64 {
            let kr = BigRational::from_integer(BigInt::from(k));
            let mut w = id.weight.eval(&kr);
            if id.k_power > 0 {
                w /= BigRational::from_integer(BigInt::from(k).pow(id.k_power));
            }
            acc += t * w / &mk;
        }
        mk *= &id.base;
    }
    Ok(acc)
}

/// `t_{k+1}/t_k` in floating point. Kernels defined by sums jump straight to
/// index `k`.
pub fn empirical_ratio(id: &Identity, k: u64) -> Result<f64> {
    let prec = 128;
    let kr = BigRational::from_integer(BigInt::from(k));
    let k1 = &kr + BigRational::one();
    let (w0, w1) = (id.weight.eval(&kr), id.weight.eval(&k1));
    if w0.is_zero() || k == 0 && id.k_power > 0 {
        return Err(Error::Domain(format!("{}: term {k} vanishes", id.code)));
    }
    let mut step = w1 / w0 / &id.base;
    if id.k_power > 0 {
        step *= (&kr / &k1).pow(id.k_power as i32);
    }
    let mut r = Ball::from_rational(&step, prec);
    for kern in &id.kernels {
        match kern {
            Kernel::Binom { a, b, exp } => {
                let s = binom_step(*a as u64, *b as u64, k);
                r = r.mul_rational(&if *exp > 0 { s.pow(*exp) } else { s.recip().pow(-*exp) });
            }
            other => {
                let mut s = KernelStream::new(other);
                s.skip_to(k);
                let (x, y) = (s.next_frac(), s.next_frac());
                if x.is_zero() {
                    return Err(Error::Domain(format!("{}: kernel {other} vanishes at {k}", id.code)));
                }
                r = r.mul(&y.to_ball(prec)).div(&x.to_ball(prec))?;
            }
        }
    }
    Ok(r.to_f64())
}

/// Integer linear weight `αk + β` proportional to `(b, c)`, with `gcd = 1`
/// and `α > 0` (or `β > 0` when `α = 0`). Returns the weight and the factor
/// it was multiplied by.
pub fn normalize_linear(b: &BigRational, c: &BigRational) -> (Weight, BigRational) {
    if b.is_zero() && c.is_zero() {
        return (Weight::from_coeffs(vec![BigRational::zero()]), BigRational::one());
    }
    let l = b.denom().lcm(c.denom());
    let bi = (b * BigRational::from_integer(l.clone())).to_integer();
    let ci = (c * BigRational::from_integer(l.clone())).to_integer();
    let mut g = bi.gcd(&ci);
    let lead = if bi.is_zero() { &ci } else { &bi };
    if lead.is_negative() {
        g = -g;
    }
    let scale = BigRational::new(l, g.clone());
    (Weight::linear(bi / &g, ci / &g), scale)
}

/// Linear weight `(b, c)` of `bk + c`, or an error.
fn linear_parts(id: &Identity) -> Result<(BigRational, BigRational)> {
    if id.weight.degree() > 1 {
        return Err(Error::Unsupported(format!("{}: weight {} is not linear", id.code, id.weight)));
    }
    let c = id.weight.0[0].clone();
    let b = id.weight.0.get(1).cloned().unwrap_or_else(BigRational::zero);
    Ok((b, c))
}

/// Dual kernel list `DUAL(1)[rest]`, collapsing a double dual.
fn dual_of(rest: Vec<Kernel>) -> Vec<Kernel> {
    if let [Kernel::Dual { lambda, inner }] = rest.as_slice() {
        if lambda.is_one() {
            return inner.clone();
        }
    }
    vec![Kernel::Dual { lambda: BigRational::one(), inner: rest }]
}

/// Identity transform through the dual sequence: from
/// `Σ (bk+c) C(2k,k) a_k / m^k` to `Σ (bmk+2b+(m−4)c) C(2k,k) a*_k / (4−m)^k`,
/// with the right-hand side multiplied by `(m−4)√((m−4)/m)`.
///
/// `f⁺_k(x)` and `f⁻_k(x)` kernels are rewritten as `(−1)^k f_k(±x²)` over
/// the base `−xm`, whose dual is `g_k(±x²)`.
pub fn transform_dual(id: &Identity) -> Result<Identity> {
    let unsupported = |m: &str| Error::Unsupported(format!("{}: {m}", id.code));
    if id.k_power != 0 || id.start != 0 {
        return Err(unsupported("dual transform needs e = 0 and start index 0"));
    }
    let (b, c) = linear_parts(id)?;
    let pos = id
        .kernels
        .iter()
        .position(|k| matches!(k, Kernel::Binom { a: 2, b: 1, exp } if *exp >= 1))
        .ok_or_else(|| unsupported("no C(2k,k) factor"))?;
    let mut rest = id.kernels.clone();
    match &mut rest[pos] {
        Kernel::Binom { exp, .. } if *exp > 1 => *exp -= 1,
        _ => {
            rest.remove(pos);
        }
    }
    let mut m = id.base.clone();
    let new_rest = match rest.as_slice() {
        [Kernel::FPlus(x)] => {
            m = -(x * &m);
            vec![Kernel::G(x * x)]
        }
        [Kernel::FMinus(x)] => {
            m = -(x * &m);
            vec![Kernel::G(-(x * x))]
        }
        _ => dual_of(rest),
    };
    let four = BigRational::from_integer(4.into());
    if m.is_zero() || m == four {
        return Err(unsupported("base must differ from 0 and 4"));
    }
    let q = (&m - &four) / &m;
    if q.is_negative() {
        return Err(unsupported("(m−4)/m is negative, the scale factor is not real"));
    }
    let nb = &b * &m;
    let nc = &b * BigRational::from_integer(2.into()) + (&m - &four) * &c;
    let (weight, s) = normalize_linear(&nb, &nc);
    // √(p/q) = √(pq)/q
    let coeff = (&m - &four) * &s / BigRational::from_integer(q.denom().clone());
    let rad = q.numer() * q.denom();
    let scale = |r: &RhsExpr| r.scale(&coeff, &rad);
    let mut kernels = vec![Kernel::Binom { a: 2, b: 1, exp: 1 }];
    for k in new_rest {
        match (kernels.last_mut(), &k) {
            (Some(Kernel::Binom { a, b, exp }), Kernel::Binom { a: a2, b: b2, exp: e2 }) if a == a2 && b == b2 => {
                *exp += e2
            }
            _ => kernels.push(k),
        }
    }
    let out = Identity {
        code: format!("{}'", id.code),
        start: 0,
        weight,
        k_power: 0,
        base: &four - &m,
        kernels,
        rhs: scale(&id.rhs)?,
        alt_rhs: id.alt_rhs.as_ref().map(scale).transpose()?,
        status: id.status,
        note: format!("dual-sequence transform of {}", id.code),
    };
    out.validate()?;
    Ok(out)
}

/// Closed forms for `DUAL(−1/4)[C(2k,k)·x_k]` of the three rational-binomial
/// sequences.
fn binomial_dual_simplified(lambda: &BigRational, ks: &[Kernel]) -> Option<Kernel> {
    if *lambda != BigRational::new((-1).into(), 4.into()) {
        return None;
    }
    let [first, second] = ks else { return None };
    if !first.is_central_binomial() {
        return None;
    }
    let den = match second {
        Kernel::Aq => [(1, 3), (2, 3), (1, 6), (5, 6)],
        Kernel::Bq => [(1, 8), (3, 8), (5, 8), (7, 8)],
        Kernel::Cq => [(1, 12), (5, 12), (7, 12), (11, 12)],
        _ => return None,
    };
    let f = |(n, d): (i64, i64), side| QFactor { arg: QArg::Rat(BigRational::new((-n).into(), d.into())), side, exp: 1 };
    Some(match second {
        Kernel::Aq => Kernel::QConv(vec![f(den[0], Side::K), f(den[1], Side::J), f(den[2], Side::K), f(den[3], Side::J)]),
        _ => Kernel::QConv(vec![f(den[0], Side::K), f(den[1], Side::K), f(den[2], Side::J), f(den[3], Side::J)]),
    })
}

/// Binomial-transform partner with the rescale parameter chosen
/// automatically: `λ = −1/4` (which yields the rational-binomial closed
/// forms) when that series converges, else `λ = 1`.
pub fn transform_binomial(id: &Identity) -> Result<Identity> {
    let quarter = BigRational::new((-1).into(), 4.into());
    let mut last = None;
    for lambda in [quarter, BigRational::one()] {
        match transform_binomial_with(id, &lambda) {
            Ok(t) => {
                if id.weight.is_zero() {
                    return Ok(t);
                }
                let info = ratio_info(&t)?;
                match check_convergent(&t, &info) {
                    Ok(()) => return Ok(t),
                    Err(e) => last = Some(e),
                }
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// With `f(k) = λ^k K(k)` and `1 − m = Mλ`, rewrite
/// `Σ (Bk+C) K(k)/M^k` as `Σ (bn+c)/m^n Σ_k C(n,k)(−1)^k f(k)`, using
/// `Σ (bn+c)/m^n a*_n = m/(m−1)² Σ (bmk+b+(m−1)c) f(k)/(1−m)^k`.
pub fn transform_binomial_with(id: &Identity, lambda: &BigRational) -> Result<Identity> {
    let unsupported = |m: &str| Error::Unsupported(format!("{}: {m}", id.code));
    if id.k_power != 0 || id.start != 0 {
        return Err(unsupported("binomial transform needs e = 0 and start index 0"));
    }
    if lambda.is_zero() {
        return Err(Error::Domain("rescale parameter must be nonzero".into()));
    }
    let (bb, cc) = linear_parts(id)?;
    let one = BigRational::one();
    let m = &one - &id.base * lambda;
    if m.is_zero() || m == one {
        return Err(unsupported("transformed base m must differ from 0 and 1"));
    }
    let b = &bb / &m;
    let c = (&cc - &b) / (&m - &one);
    let (weight, s) = normalize_linear(&b, &c);
    let factor = &s * &m / ((&m - &one) * (&m - &one));
    let kernel = binomial_dual_simplified(lambda, &id.kernels)
        .unwrap_or_else(|| Kernel::Dual { lambda: lambda.clone(), inner: id.kernels.clone() });
    let scale = |r: &RhsExpr| r.scale(&factor, &BigInt::one());
    let out = Identity {
        code: format!("{}b", id.code),
        start: 0,
        weight,
        k_power: 0,
        base: m,
        kernels: vec![kernel],
        rhs: scale(&id.rhs)?,
        alt_rhs: id.alt_rhs.as_ref().map(scale).transpose()?,
        status: id.status,
        note: format!("binomial transform of {} with rescale {}", id.code, fmt_rat(lambda)),
    };
    out.validate()?;
    Ok(out)
}

/// Both sides of the finite double-sum interchange behind the dual
/// transform, for a prefix `a_0..a_N`:
///
/// `Σ_{n≤N} w(n) C(2n,n)/(4−m)^n Σ_{k≤n} C(n,k)(−1)^k a_k`
/// and `Σ_{k≤N} (−1)^k a_k Σ_{k≤n≤N} w(n) C(2n,n) C(n,k)/(4−m)^n`
/// with `w(n) = bmn + 2b + (m−4)c`.
pub fn dual_interchange_sides(
    a: &[BigRational],
    b: &BigRational,
    c: &BigRational,
    m: &BigRational,
) -> Result<(BigRational, BigRational)> {
    let four = BigRational::from_integer(4.into());
    let base = &four - m;
    if base.is_zero() {
        return Err(Error::Domain("m = 4 makes the base vanish".into()));
    }
    let w = |n: usize| b * m * BigRational::from_integer(n.into()) + b * BigRational::from_integer(2.into()) + (m - &four) * c;
    let binom = |n: usize, k: usize| BigRational::from_integer(binom_int(n as i64, k as i64).expect("k ≥ 0"));
    let sign = |k: usize| if k % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    let n_max = a.len();
    let coef: Vec<BigRational> = (0..n_max).map(|n| w(n) * binom(2 * n, n) / base.pow(n as i32)).collect();
    let mut left = BigRational::zero();
    for n in 0..n_max {
        let inner: BigRational = (0..=n).map(|k| binom(n, k) * sign(k) * &a[k]).sum();
        left += &coef[n] * inner;
    }
    let mut right = BigRational::zero();
    for k in 0..n_max {
        let inner: BigRational = (k..n_max).map(|n| &coef[n] * binom(n, k)).sum();
        right += sign(k) * &a[k] * inner;
    }
    Ok((left, right))
}

/// Numeric value of `Σ_{n≥k} (bmn+2b+(m−4)c) C(2n,n) C(n,k)/(4−m)^n` in f64,
/// summed until terms are negligible; requires `|4/(4−m)| < 1`.
pub fn dual_inner_sum_f64(k: u64, b: f64, c: f64, m: f64) -> Result<f64> {
    let q = 4.0 / (4.0 - m);
    if q.abs() >= 1.0 {
        return Err(Error::NonConvergent(format!("inner sum diverges for m = {m}")));
    }
    // C(2n,n) C(n,k) / (4−m)^n, built by its term ratio.
    let mut t = (0..k).fold(1.0, |acc, i| acc * ((2 * i + 1) * (2 * i + 2)) as f64 / ((i + 1) * (i + 1)) as f64)
        / (4.0 - m).powi(k as i32);
    let mut sum = 0.0;
    let mut n = k;
    loop {
        let add = (b * m * n as f64 + 2.0 * b + (m - 4.0) * c) * t;
        sum += add;
        if n > k + 20 && add.abs() < 1e-18 * sum.abs().max(1e-300) {
            return Ok(sum);
        }
        let nf = n as f64;
        t *= (2.0 * nf + 1.0) * (2.0 * nf + 2.0) / ((nf + 1.0) * (nf + 1.0 - k as f64)) / (4.0 - m);
        n += 1;
        if n > k + 100_000 {
            return Err(Error::Internal("inner sum did not settle".into()));
        }
    }
}

/// The closed form `(m−4)√((m−4)/m)(bk+c) C(2k,k)/(−m)^k` of the inner sum.
pub fn dual_inner_closed_f64(k: u64, b: f64, c: f64, m: f64) -> f64 {
    let cb = (0..k).fold(1.0, |acc, i| acc * ((2 * i + 1) * (2 * i + 2)) as f64 / ((i + 1) * (i + 1)) as f64);
    (m - 4.0) * ((m - 4.0) / m).sqrt() * (b * k as f64 + c) * cb / (-m).powi(k as i32)
}

impl EvalReport {
    /// Decimal rendering of the LHS midpoint with `digits` places.
    pub fn lhs_decimal(&self) -> String {
        self.lhs.to_decimal(self.digits as usize)
    }

    pub fn rhs_decimal(&self) -> String {
        self.rhs.to_decimal(self.digits as usize)
    }
}
