//! Sequence families appearing inside summands.
//!
//! A summand's kernel is an ordered list of [`Kernel`] factors whose values at
//! index `k` are multiplied together. Every family yields an exact rational
//! for each `k ≥ 0`.

mod eval;
mod growth;
mod syntax;

pub use eval::{s2_direct, Frac, KernelStream};
pub use growth::{growth_of, Growth, Root};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Where a factor of a rational-binomial convolution is indexed:
/// `K` uses `k`, `J` uses `n − k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    K,
    J,
}

/// Upper argument of a convolution factor: `C` is `C(2i,i)`, otherwise
/// `C(x,i)` for rational `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QArg {
    Central,
    Rat(BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QFactor {
    pub arg: QArg,
    pub side: Side,
    pub exp: u32,
}

/// One factor of a summand kernel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// `C(ak, bk)^exp`; negative exponents put the binomial in the denominator.
    Binom { a: u32, b: u32, exp: i32 },
    /// `T_{step·k}(b,c)^power`.
    Trinomial { b: BigInt, c: BigInt, step: u32, power: u32 },
    /// `Σ C(n,k)² C(n+k,k) x^(n−k)`
    Apery(BigRational),
    /// `Σ C(n,k) C(2k,k) C(2n−2k,n−k) x^(n−k)`
    S1(BigRational),
    /// `Σ C(2k,k)² C(2n−2k,n−k) x^(n−k)`
    S2(BigRational),
    /// `Σ C(n+k,2k) C(2k,k)² C(2n−2k,n−k) x^−(n+k)`
    W(BigRational),
    /// `Σ C(n,k)² C(2k,n) x^(2k−n)`
    FPlus(BigRational),
    /// `Σ C(n,k)² C(2k,n) (−1)^k x^(2k−n)`
    FMinus(BigRational),
    /// `Σ C(n,k)² C(2k,k) x^k`
    G(BigRational),
    /// `Σ C(n,k) C(n+2k,2k) C(2k,k) x^−(n+k)`
    SConj5(BigRational),
    /// `Σ C(2k,k)² C(k,n−k) x^(n−k)`
    PConj6(BigRational),
    /// `Σ C(n,k)² C(2k,k) C(2n−2k,n−k) x^k` (Domb numbers at x = 1)
    Domb(BigRational),
    /// `Σ C(n,k) C(2k,n) C(2k,k) C(2n−2k,n−k) x^(2k−n)`
    H(BigRational),
    /// Catalan–Larcombe–French numbers.
    Clf,
    /// `Σ 5^k C(2k,k)² C(2n−2k,n−k)² / C(n,k)`
    SConj6,
    /// `Σ (−1)^k C(−1/3,k)² C(−2/3,n−k)`
    Aq,
    /// `Σ (−1)^k C(−1/4,k)² C(−3/4,n−k)`
    Bq,
    /// `Σ (−1)^k C(−1/6,k)² C(−5/6,n−k)`
    Cq,
    /// `Σ_k Π factors`, each factor a binomial indexed by `k` or `n − k`.
    QConv(Vec<QFactor>),
    /// `Σ_k C(n,k) (−1)^k λ^k Π inner(k)`: the dual of `λ^k Π inner(k)`.
    Dual { lambda: BigRational, inner: Vec<Kernel> },
}

impl Kernel {
    /// Parse a whitespace-separated kernel list such as `B(2,1)^2 T(1,16)`.
    pub fn parse_list(s: &str) -> Result<Vec<Kernel>> {
        syntax::parse_list(s)
    }

    /// Canonical text for a kernel list.
    pub fn fmt_list(ks: &[Kernel]) -> String {
        ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ")
    }

    /// Check family parameter domains.
    pub fn validate(&self) -> Result<()> {
        let nonzero = |x: &BigRational, name: &str| {
            if x.is_zero() {
                Err(Error::Domain(format!("{name}(0) has negative powers of zero")))
            } else {
                Ok(())
            }
        };
        match self {
            Kernel::Binom { a, b, exp } => {
                if b > a || *exp == 0 {
                    return Err(Error::Domain(format!("B({a},{b})^{exp} is not a valid binomial factor")));
                }
                Ok(())
            }
            Kernel::Trinomial { step, power, .. } => {
                if *step == 0 || *power == 0 {
                    return Err(Error::Domain("trinomial step and power must be positive".into()));
                }
                Ok(())
            }
            Kernel::W(x) => nonzero(x, "W"),
            Kernel::FPlus(x) => nonzero(x, "FP"),
            Kernel::FMinus(x) => nonzero(x, "FM"),
            Kernel::SConj5(x) => nonzero(x, "S5"),
            Kernel::H(x) => nonzero(x, "H"),
            Kernel::QConv(fs) => {
                if fs.is_empty() {
                    return Err(Error::Domain("empty convolution".into()));
                }
                Ok(())
            }
            Kernel::Dual { inner, .. } => inner.iter().try_for_each(|k| k.validate()),
            _ => Ok(()),
        }
    }

    /// The `C(2k,k)` factor that the dual transform pivots on.
    pub fn is_central_binomial(&self) -> bool {
        matches!(self, Kernel::Binom { a: 2, b: 1, exp: 1 })
    }

    /// Families with a cheap exact integer recurrence (streamed without
    /// defining sums).
    pub fn has_recurrence(&self) -> bool {
        matches!(self, Kernel::Trinomial { .. } | Kernel::Clf | Kernel::SConj6)
    }
}

/// `T_n(b,c)`, the coefficient of `x^n` in `(x² + bx + c)^n`, by the
/// three-term recurrence `(n+1)T_{n+1} = (2n+1)b T_n − n(b²−4c) T_{n−1}`.
pub fn trinomial_t(n: u64, b: &BigInt, c: &BigInt) -> BigInt {
    let mut t = eval::TrinomialIter::new(b.clone(), c.clone());
    t.advance_to(n);
    t.current().clone()
}

/// `T_n(b,c)` by the direct sum `Σ C(n,2k) C(2k,k) b^(n−2k) c^k`.
pub fn trinomial_t_direct(n: u64, b: &BigInt, c: &BigInt) -> BigInt {
    let mut s = BigInt::zero();
    let mut k = 0u64;
    while 2 * k <= n {
        let t = crate::exact_arith::binom_int(n as i64, 2 * k as i64).unwrap()
            * crate::exact_arith::binom_int(2 * k as i64, k as i64).unwrap()
            * b.pow((n - 2 * k) as u32)
            * c.pow(k as u32);
        s += t;
        k += 1;
    }
    s
}

/// Exact value of the kernel at index `k`.
pub fn kernel_term(kernel: &Kernel, k: u64) -> Result<BigRational> {
    kernel.validate()?;
    let mut s = KernelStream::new(kernel);
    s.skip_to(k);
    Ok(s.next_frac().to_rational())
}

/// Exact values for indices `0..=up_to`.
pub fn kernel_stream(kernel: &Kernel, up_to: u64) -> Result<Vec<BigRational>> {
    kernel.validate()?;
    let mut s = KernelStream::new(kernel);
    Ok((0..=up_to).map(|_| s.next_frac().to_rational()).collect())
}

/// Dual sequence `a*_n = Σ C(n,k) (−1)^k a_k` on a finite prefix.
pub fn dual(seq: &[BigRational]) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(seq.len());
    for n in 0..seq.len() {
        let mut acc = BigRational::zero();
        let mut c = BigInt::one();
        for (k, a) in seq.iter().enumerate().take(n + 1) {
            let t = a * &c;
            if k % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
            c = c * (n - k) / (k + 1);
        }
        out.push(acc);
    }
    out
}

/// Product of kernel values at `k`.
pub fn kernels_product(ks: &[Kernel], k: u64) -> Result<BigRational> {
    let mut p = BigRational::one();
    for kern in ks {
        p *= kernel_term(kern, k)?;
    }
    Ok(p)
}

impl std::fmt::Display for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        syntax::fmt_kernel(self, f)
    }
}
