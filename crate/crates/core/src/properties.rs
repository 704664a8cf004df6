//! Structural claims: q-logconvexity of four polynomial families, the leading
//! asymptotic of `T_n(b,c)`, and exact checks of the combinatorial side
//! identities that accompany the series.

use crate::error::{Error, Result};
use crate::exact_arith::{binom_int, binom_rat, const_pi, sqrt_ball, Ball};
use crate::kernels::{dual, kernel_stream, s2_direct, trinomial_t, trinomial_t_direct, Kernel};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Integer polynomial in `q`, lowest degree first.
pub type Poly = Vec<BigInt>;

/// The four q-polynomial families conjectured to be q-logconvex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyFamily {
    /// `Σ C(n,k)² C(n+k,k) q^k`
    AperyQ,
    /// `Σ C(n,k) C(2k,k) C(2n−2k,n−k) q^k`
    S1Q,
    /// `Σ C(n,k)² C(2k,k) C(2n−2k,n−k) q^k`
    S2Q,
    /// `Σ C(n+k,2k) C(2k,k)² C(2n−2k,n−k) q^k`
    WQ,
}

impl PolyFamily {
    pub const ALL: [PolyFamily; 4] = [PolyFamily::AperyQ, PolyFamily::S1Q, PolyFamily::S2Q, PolyFamily::WQ];

    pub fn name(self) -> &'static str {
        match self {
            PolyFamily::AperyQ => "APERY_Q",
            PolyFamily::S1Q => "S1_Q",
            PolyFamily::S2Q => "S2_Q",
            PolyFamily::WQ => "W_Q",
        }
    }

    /// Coefficients of `P_n(q)`.
    pub fn poly(self, n: u64) -> Poly {
        let n = n as i64;
        let b = |a: i64, k: i64| binom_int(a, k).expect("nonnegative arguments");
        (0..=n)
            .map(|k| match self {
                PolyFamily::AperyQ => b(n, k).pow(2) * b(n + k, k),
                PolyFamily::S1Q => b(n, k) * b(2 * k, k) * b(2 * n - 2 * k, n - k),
                PolyFamily::S2Q => b(n, k).pow(2) * b(2 * k, k) * b(2 * n - 2 * k, n - k),
                PolyFamily::WQ => b(n + k, 2 * k) * b(2 * k, k).pow(2) * b(2 * n - 2 * k, n - k),
            })
            .collect()
    }
}

impl std::str::FromStr for PolyFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<PolyFamily> {
        PolyFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s) || f.name().replace('_', "").eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::parse(s, "unknown polynomial family"))
    }
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_sub(a: &[BigInt], b: &[BigInt]) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// `P_{n−1}P_{n+1} − P_n²` for one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QlcRow {
    pub n: u64,
    pub diff: Poly,
    /// Degree of the first negative coefficient, if any.
    pub first_negative: Option<usize>,
}

impl QlcRow {
    pub fn nonnegative(&self) -> bool {
        self.first_negative.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QlcReport {
    pub family: String,
    pub rows: Vec<QlcRow>,
}

impl QlcReport {
    pub fn all_nonnegative(&self) -> bool {
        self.rows.iter().all(QlcRow::nonnegative)
    }

    pub fn first_counterexample(&self) -> Option<&QlcRow> {
        self.rows.iter().find(|r| !r.nonnegative())
    }
}

/// Coefficient signs of `P_{n−1}P_{n+1} − P_n²` for `1 ≤ n ≤ n_max`.
pub fn qlogconvex_check(family: PolyFamily, n_max: u64) -> QlcReport {
    qlogconvex_check_with(family.name(), n_max, |n| family.poly(n))
}

/// As [`qlogconvex_check`] for an arbitrary polynomial sequence.
pub fn qlogconvex_check_with(name: &str, n_max: u64, poly: impl Fn(u64) -> Poly) -> QlcReport {
    let polys: Vec<Poly> = (0..=n_max + 1).map(&poly).collect();
    let rows = (1..=n_max as usize)
        .map(|n| {
            let diff = poly_sub(&poly_mul(&polys[n - 1], &polys[n + 1]), &poly_mul(&polys[n], &polys[n]));
            let first_negative = diff.iter().position(|c| c.is_negative());
            QlcRow { n: n as u64, diff, first_negative }
        })
        .collect();
    QlcReport { family: name.to_string(), rows }
}

/// `T_n(b,c)` divided by its leading asymptotic
/// `(b+2√c)^(n+1/2) / (2 c^(1/4) √(nπ))`.
pub fn asymptotic_check(b: u64, c: u64, n: u64) -> Result<Ball> {
    if b == 0 || c == 0 || n == 0 {
        return Err(Error::Domain(format!("asymptotic check needs b, c, n ≥ 1 (got {b}, {c}, {n})")));
    }
    let digits = 30;
    let t = trinomial_t(n, &BigInt::from(b), &BigInt::from(c));
    let prec = t.bits().max(64) + crate::exact_arith::prec_for_digits(digits);
    let root_c = sqrt_ball(&BigRational::from_integer(c.into()), digits)?;
    let base = root_c.mul_i64(2).add(&Ball::from_int(b, prec));
    let leading = base.pow(n as u32).mul(&base.sqrt()?);
    let scale = root_c.sqrt()?.mul_i64(2).mul(&const_pi(digits).mul_i64(n as i64).sqrt()?);
    Ball::from_bigint(&t, prec).mul(&scale).div(&leading)
}

/// Outcome of one family of side identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteEntry {
    pub name: String,
    /// Human-readable index range that was checked.
    pub range: String,
    /// First index at which the two sides disagree.
    pub first_failure: Option<u64>,
}

impl SuiteEntry {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

impl fmt::Display for SuiteEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_failure {
            None => write!(f, "PASS  {} ({})", self.name, self.range),
            Some(i) => write!(f, "FAIL  {} ({}): first failure at {i}", self.name, self.range),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub n_max: u64,
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(SuiteEntry::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteEntry> {
        self.entries.iter().filter(|e| !e.passed())
    }
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ri(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn b(n: i64, k: i64) -> BigInt {
    binom_int(n, k).expect("nonnegative arguments")
}

fn bq(x: &BigRational, k: i64) -> BigRational {
    binom_rat(x, k).expect("nonnegative index")
}

fn pow_rat(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

fn sign(k: i64) -> BigRational {
    if k % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

fn stream(s: &str, n_max: u64) -> Vec<BigRational> {
    let ks = Kernel::parse_list(s).expect("valid kernel literal");
    kernel_stream(&ks[0], n_max).expect("valid kernel")
}

fn first_mismatch(n_max: u64, lhs: impl Fn(i64) -> BigRational, rhs: impl Fn(i64) -> BigRational) -> Option<u64> {
    (0..=n_max as i64).find(|&n| lhs(n) != rhs(n)).map(|n| n as u64)
}

/// Direct defining sum for the Catalan–Larcombe–French numbers.
pub fn clf_direct(n: i64) -> BigInt {
    (0..=n).map(|k| (b(2 * k, k) * b(2 * n - 2 * k, n - k)).pow(2) / b(n, k)).sum()
}

/// `P_2..=P_{n_max}` generated by the three-term recurrence from the given
/// seeds and compared with the defining sum; the first disagreeing index is
/// returned. Seeds are inputs, so the check starts at `k = 2`.
pub fn clf_recurrence_check(p0: &BigRational, p1: &BigRational, n_max: u64) -> Option<u64> {
    let (mut prev, mut cur) = (p0.clone(), p1.clone());
    for k in 1..n_max as i64 {
        let next = (ri((24 * k * (k + 1) + 8).into()) * &cur - ri((128 * k * k).into()) * &prev) / ri(((k + 1) * (k + 1)).into());
        if next != ri(clf_direct(k + 1)) {
            return Some(k as u64 + 1);
        }
        prev = std::mem::replace(&mut cur, next);
    }
    None
}

/// `s_n = Σ 5^k C(2k,k)² C(2n−2k,n−k)² / C(n,k)`.
pub fn s6_direct(n: i64) -> BigInt {
    (0..=n)
        .map(|k| BigInt::from(5).pow(k as u32) * (b(2 * k, k) * b(2 * n - 2 * k, n - k)).pow(2) / b(n, k))
        .sum()
}

/// `s_n` from seeds `1, 24, 976` and the four-term recurrence.
pub fn s6_recurrence(n_max: u64) -> Vec<BigRational> {
    let mut s: Vec<BigRational> = [1, 24, 976].iter().map(|&v| ri(v.into())).collect();
    let mut n = 0i64;
    while (s.len() as u64) <= n_max {
        let i = |v: i64| ri(v.into());
        let num = i(51200 * (n + 1) * (n + 1) * (n + 3)) * &s[n as usize]
            - i(1920 * (4 * n * n * n + 24 * n * n + 46 * n + 29)) * &s[n as usize + 1]
            + i(8 * (n + 2) * (41 * n * n + 205 * n + 255)) * &s[n as usize + 2];
        s.push(num / i(3 * (n + 2) * (n + 3) * (n + 3)));
        n += 1;
    }
    s.truncate(n_max as usize + 1);
    s
}

/// `Σ (−1)^k C(x,k)² C(y,n−k)`.
fn alt_conv(x: &BigRational, y: &BigRational, n: i64) -> BigRational {
    (0..=n).map(|k| sign(k) * bq(x, k) * bq(x, k) * bq(y, n - k)).sum()
}

/// `Σ C(p,k) C(q,k) C(r,n−k) C(s,n−k)`.
fn quad_conv(p: &BigRational, q: &BigRational, rr: &BigRational, s: &BigRational, n: i64) -> BigRational {
    (0..=n).map(|k| bq(p, k) * bq(q, k) * bq(rr, n - k) * bq(s, n - k)).sum()
}

/// `f_n(x) = Σ C(n,k)² C(2k,n) x^k`.
fn f_poly(x: &BigRational, n: i64) -> BigRational {
    (0..=n).map(|k| ri(b(n, k).pow(2) * b(2 * k, n)) * pow_rat(x, k)).sum()
}

/// The rational-binomial sequences `a_n, b_n, c_n`: the pair `(x, y)` of the
/// alternating convolution, the arguments of the printed `(−4)^n/C(2n,n)`
/// form, and the arguments of the remark's reduction to
/// `Σ C(n,k) C(2k,k) x_k / 4^k` (`k, k, n−k, n−k` order throughout).
struct RationalFamily {
    name: &'static str,
    x: BigRational,
    y: BigRational,
    printed: [BigRational; 4],
    reduction: [BigRational; 4],
}

fn rational_families() -> Vec<RationalFamily> {
    vec![
        RationalFamily {
            name: "a",
            x: r(-1, 3),
            y: r(-2, 3),
            printed: [r(-2, 3), r(-1, 6), r(-1, 3), r(-5, 6)],
            reduction: [r(-1, 3), r(-1, 6), r(-2, 3), r(-5, 6)],
        },
        RationalFamily {
            name: "b",
            x: r(-1, 4),
            y: r(-3, 4),
            printed: [r(-1, 8), r(-5, 8), r(-3, 8), r(-7, 8)],
            reduction: [r(-1, 8), r(-3, 8), r(-5, 8), r(-7, 8)],
        },
        RationalFamily {
            name: "c",
            x: r(-1, 6),
            y: r(-5, 6),
            printed: [r(-1, 12), r(-7, 12), r(-5, 12), r(-11, 12)],
            reduction: [r(-1, 12), r(-5, 12), r(-7, 12), r(-11, 12)],
        },
    ]
}

/// Sample arguments for the `f`/`g` relations.
fn f_args() -> Vec<BigRational> {
    vec![r(1, 1), r(6, 1), r(-3, 1), r(1, 2), r(-7, 5)]
}

/// Exact checks of every combinatorial side identity for indices up to
/// `n_max`. Families are independent; a failure in one does not stop the rest.
pub fn run_identity_suite(n_max: u64) -> SuiteReport {
    let range = format!("n ≤ {n_max}");
    let mut entries = Vec::new();
    let mut push = |name: String, range: &str, first_failure: Option<u64>| {
        entries.push(SuiteEntry { name, range: range.to_string(), first_failure })
    };

    let mut t_fail = None;
    'outer: for bb in -3i64..=3 {
        for cc in -3i64..=3 {
            let (bi, ci) = (BigInt::from(bb), BigInt::from(cc));
            for n in 0..=n_max {
                if trinomial_t(n, &bi, &ci) != trinomial_t_direct(n, &bi, &ci) {
                    t_fail = Some(n);
                    break 'outer;
                }
            }
        }
    }
    push("T_n(b,c) recurrence = direct sum, (b,c) ∈ [-3,3]²".into(), &range, t_fail);

    let s1m = stream("S1(-1)", n_max);
    push(
        "S1_n(-1) = C(n,n/2)² or 0".into(),
        &range,
        first_mismatch(n_max, |n| s1m[n as usize].clone(), |n| if n % 2 == 0 { ri(b(n, n / 2).pow(2)) } else { BigRational::zero() }),
    );
    let s1p = stream("S1(1)", n_max);
    push(
        "S1_n(1) = Σ C(n,2k) C(2k,k)² 4^(n-2k)".into(),
        &range,
        first_mismatch(
            n_max,
            |n| s1p[n as usize].clone(),
            |n| ri((0..=n / 2).map(|k| b(n, 2 * k) * b(2 * k, k).pow(2) * BigInt::from(4).pow((n - 2 * k) as u32)).sum()),
        ),
    );

    for x in [r(4, 1), r(-14, 1), r(7, 3), r(-1, 5)] {
        let s2 = stream(&format!("S2({x})"), n_max);
        push(
            format!("S2_n({x}) recurrence stream = defining sum"),
            &range,
            first_mismatch(n_max, |n| s2[n as usize].clone(), |n| s2_direct(&x, n as u64)),
        );
    }

    let clf = stream("CLF", n_max);
    push("CLF recurrence stream = defining sum".into(), &range, first_mismatch(n_max, |n| clf[n as usize].clone(), |n| ri(clf_direct(n))));
    let p6 = stream("P6(-4)", n_max);
    push(
        "CLF P_n = 2^n P_n(-4)".into(),
        &range,
        first_mismatch(n_max, |n| ri(clf_direct(n)), |n| ri(BigInt::from(2).pow(n as u32)) * &p6[n as usize]),
    );
    push(
        "CLF P_n = 2^n Σ C(n,2k) C(2k,k)² 4^(n-2k)".into(),
        &range,
        first_mismatch(
            n_max,
            |n| ri(clf_direct(n)),
            |n| ri(BigInt::from(2).pow(n as u32) * (0..=n / 2).map(|k| b(n, 2 * k) * b(2 * k, k).pow(2) * BigInt::from(4).pow((n - 2 * k) as u32)).sum::<BigInt>()),
        ),
    );
    push("CLF three-term recurrence from P_0 = 1, P_1 = 8".into(), &range, clf_recurrence_check(&r(1, 1), &r(8, 1), n_max));
    push(
        "Σ (-1)^k C(2k,k)² C(2n-2k,n-k)² / C(n,k) = 4^n C(n,n/2)² or 0".into(),
        &range,
        first_mismatch(
            n_max,
            |n| (0..=n).map(|k| sign(k) * ri((b(2 * k, k) * b(2 * n - 2 * k, n - k)).pow(2) / b(n, k))).sum(),
            |n| if n % 2 == 0 { ri(BigInt::from(4).pow(n as u32) * b(n, n / 2).pow(2)) } else { BigRational::zero() },
        ),
    );
    let div_fail = (0..=n_max as i64)
        .find(|&n| (0..=n).any(|k| !(b(2 * k, k) * b(2 * n - 2 * k, n - k) % b(n, k)).is_zero()))
        .map(|n| n as u64);
    push("C(n,k) divides C(2k,k) C(2n-2k,n-k)".into(), &range, div_fail);

    let s6 = stream("S6", n_max);
    let s6r = s6_recurrence(n_max);
    push("s_n stream = defining sum".into(), &range, first_mismatch(n_max, |n| s6[n as usize].clone(), |n| ri(s6_direct(n))));
    push(
        "s_n four-term recurrence from 1, 24, 976".into(),
        &range,
        first_mismatch(n_max, |n| s6r[n as usize].clone(), |n| ri(s6_direct(n))),
    );

    for fam in rational_families() {
        let code = match fam.name {
            "a" => "AQ",
            "b" => "BQ",
            _ => "CQ",
        };
        let ks = stream(code, n_max);
        push(
            format!("{}_n kernel = Σ (-1)^k C(x,k)² C(y,n-k)", fam.name),
            &range,
            first_mismatch(n_max, |n| ks[n as usize].clone(), |n| alt_conv(&fam.x, &fam.y, n)),
        );
        push(
            format!("{}_n symmetric form Σ (-1)^k C(y,k)² C(x,n-k)", fam.name),
            &range,
            first_mismatch(n_max, |n| alt_conv(&fam.x, &fam.y, n), |n| alt_conv(&fam.y, &fam.x, n)),
        );
        let [p, q, rr, s] = &fam.printed;
        push(
            format!("{}_n = (-4)^n / C(2n,n) · Σ C({p},k) C({q},k) C({rr},n-k) C({s},n-k)", fam.name),
            &range,
            first_mismatch(
                n_max,
                |n| alt_conv(&fam.x, &fam.y, n),
                |n| ri(BigInt::from(-4).pow(n as u32)) / ri(b(2 * n, n)) * quad_conv(p, q, rr, s, n),
            ),
        );
        let [p, q, rr, s] = &fam.reduction;
        let weighted: Vec<BigRational> =
            (0..=n_max as i64).map(|k| ri(b(2 * k, k)) * alt_conv(&fam.x, &fam.y, k) / ri(BigInt::from(4).pow(k as u32))).collect();
        push(
            format!("Σ C({p},k) C({q},k) C({rr},n-k) C({s},n-k) = Σ C(n,k) C(2k,k) {}_k / 4^k", fam.name),
            &range,
            first_mismatch(
                n_max,
                |n| quad_conv(p, q, rr, s, n),
                |n| (0..=n).map(|k| ri(b(n, k)) * &weighted[k as usize]).sum(),
            ),
        );
    }

    for (x, y) in [(r(-1, 3), r(-2, 3)), (r(-1, 4), r(-3, 4)), (r(-1, 6), r(-5, 6)), (r(2, 7), r(-9, 7))] {
        push(
            format!("x+y+1=0 symmetry at (x,y) = ({x},{y})"),
            &range,
            first_mismatch(n_max, |n| alt_conv(&x, &y, n), |n| alt_conv(&y, &x, n)),
        );
    }

    push(
        "f_n(1) = Σ C(n,k)³".into(),
        &range,
        first_mismatch(n_max, |n| f_poly(&BigRational::one(), n), |n| ri((0..=n).map(|k| b(n, k).pow(3)).sum())),
    );
    for x in f_args() {
        push(
            format!("f_n({x}) two defining sums agree"),
            &range,
            first_mismatch(n_max, |n| f_poly(&x, n), |n| (0..=n).map(|k| ri(b(n, k) * b(2 * k, k) * b(k, n - k)) * pow_rat(&x, k)).sum()),
        );
        let fp = stream(&format!("FP({x})"), n_max);
        let fm = stream(&format!("FM({x})"), n_max);
        push(
            format!("f+_n({x}) = x^-n f_n(x²)"),
            &range,
            first_mismatch(n_max, |n| fp[n as usize].clone(), |n| pow_rat(&x, -n) * f_poly(&(&x * &x), n)),
        );
        push(
            format!("f-_n({x}) = x^-n f_n(-x²)"),
            &range,
            first_mismatch(n_max, |n| fm[n as usize].clone(), |n| pow_rat(&x, -n) * f_poly(&-(&x * &x), n)),
        );
        let signed: Vec<BigRational> = (0..=n_max as i64).map(|k| sign(k) * f_poly(&x, k)).collect();
        let g = stream(&format!("G({x})"), n_max);
        let d = dual(&signed);
        push(
            format!("Σ C(n,k) (-1)^k (-1)^k f_k({x}) = g_n({x})"),
            &range,
            first_mismatch(n_max, |n| d[n as usize].clone(), |n| g[n as usize].clone()),
        );
    }

    push(
        "Σ C(n,k) C(2k,n) C(2k,k) C(2n-2k,n-k) (-1)^(n-k) = Σ C(n,k)² C(2k,k) C(2n-2k,n-k)".into(),
        &range,
        first_mismatch(
            n_max,
            |n| (0..=n).map(|k| sign(n - k) * ri(b(n, k) * b(2 * k, n) * b(2 * k, k) * b(2 * n - 2 * k, n - k))).sum(),
            |n| ri((0..=n).map(|k| b(n, k).pow(2) * b(2 * k, k) * b(2 * n - 2 * k, n - k)).sum()),
        ),
    );

    let trin: Vec<BigRational> = (0..=n_max).map(|n| ri(trinomial_t(n, &BigInt::from(1), &BigInt::from(16)))).collect();
    let back = dual(&dual(&trin));
    push("dual is an involution on T_n(1,16)".into(), &range, first_mismatch(n_max, |n| back[n as usize].clone(), |n| trin[n as usize].clone()));

    SuiteReport { n_max, entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apery_q_small() {
        assert_eq!(PolyFamily::AperyQ.poly(1), vec![BigInt::from(1), BigInt::from(2)]);
        let rep = qlogconvex_check(PolyFamily::AperyQ, 1);
        assert!(rep.all_nonnegative());
    }

    #[test]
    fn constant_double_gives_zero() {
        let rep = qlogconvex_check_with("ONE", 5, |_| vec![BigInt::one()]);
        assert!(rep.all_nonnegative());
        assert!(rep.rows.iter().all(|r| r.diff.is_empty()));
    }

    #[test]
    fn wrong_clf_seed_fails_at_two() {
        assert_eq!(clf_recurrence_check(&r(1, 1), &r(9, 1), 10), Some(2));
        assert_eq!(clf_recurrence_check(&r(1, 1), &r(8, 1), 10), None);
    }

    #[test]
    fn tiny_suite_passes() {
        assert!(run_identity_suite(1).all_pass());
    }

    #[test]
    fn asymptote_small_n() {
        let v = asymptotic_check(3, 2, 1).unwrap().to_f64();
        assert!(v.is_finite() && v > 0.0);
    }
}
