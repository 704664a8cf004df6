//! The identity catalog: summand specifications, symbolic right-hand sides
//! and the versioned TOML file format (see `docs/catalog-schema.md`).

use crate::error::{Error, Result};
use crate::exact_arith::{
    const_k, const_pi, const_zeta3, fmt_rat, parse_rat, prec_for_digits, rat_to_f64, sqrt_ball, squarefree_split,
    Ball,
};
use crate::kernels::{kernels_product, Kernel};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Deserialize;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub const SCHEMA_VERSION: u32 = 1;

const BUNDLED: &str = include_str!("../data/catalog.toml");

/// Transcendental factor of a right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    InvPi,
    PiSq,
    InvPiSq,
    Zeta3,
    KL2,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::InvPi => "INV_PI",
            Constant::PiSq => "PI_SQ",
            Constant::InvPiSq => "INV_PI_SQ",
            Constant::Zeta3 => "ZETA3",
            Constant::KL2 => "K_L2",
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Constant::InvPi => "/π",
            Constant::PiSq => "·π²",
            Constant::InvPiSq => "/π²",
            Constant::Zeta3 => "·ζ(3)",
            Constant::KL2 => "·K",
        }
    }

    pub fn ball(self, digits: u32) -> Ball {
        match self {
            Constant::InvPi => Ball::from_int(1, prec_for_digits(digits)).div(&const_pi(digits + 2)).expect("π ≠ 0"),
            Constant::PiSq => const_pi(digits + 2).sqr(),
            Constant::InvPiSq => {
                Ball::from_int(1, prec_for_digits(digits)).div(&const_pi(digits + 2).sqr()).expect("π ≠ 0")
            }
            Constant::Zeta3 => const_zeta3(digits),
            Constant::KL2 => const_k(digits),
        }
    }
}

impl FromStr for Constant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Constant> {
        Ok(match s {
            "INV_PI" => Constant::InvPi,
            "PI_SQ" => Constant::PiSq,
            "INV_PI_SQ" => Constant::InvPiSq,
            "ZETA3" => Constant::Zeta3,
            "K_L2" => Constant::KL2,
            _ => return Err(Error::parse(s, "unknown constant")),
        })
    }
}

/// `(Σ coeff·√radicand) · constant` with distinct squarefree radicands in
/// increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RhsExpr {
    pub terms: Vec<(BigRational, BigInt)>,
    pub constant: Constant,
}

impl RhsExpr {
    /// Canonicalize: extract squares, merge equal radicands, drop zeros.
    pub fn new(terms: Vec<(BigRational, BigInt)>, constant: Constant) -> Result<RhsExpr> {
        let mut merged: BTreeMap<BigInt, BigRational> = BTreeMap::new();
        for (c, d) in terms {
            if d.is_negative() {
                return Err(Error::Validation(format!("negative radicand {d}")));
            }
            if d.is_zero() {
                continue;
            }
            let (s, d) = squarefree_split(&d);
            *merged.entry(d).or_insert_with(BigRational::zero) += c * s;
        }
        let terms: Vec<_> = merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|(d, c)| (c, d)).collect();
        Ok(RhsExpr { terms, constant })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiply the algebraic part by `c·√d`.
    pub fn scale(&self, c: &BigRational, d: &BigInt) -> Result<RhsExpr> {
        let terms = self.terms.iter().map(|(a, r)| (a * c, r * d)).collect();
        RhsExpr::new(terms, self.constant)
    }

    /// Parse the algebraic part written as `a + b*sqrt(d) - ...`.
    pub fn parse_terms(s: &str, constant: Constant) -> Result<RhsExpr> {
        let bad = |m: &str| Error::parse(s, m.to_string());
        let norm = s.replace(" - ", " + -");
        let mut terms = Vec::new();
        for t in norm.split(" + ") {
            let t = t.trim();
            let (c, d) = match t.find("sqrt(") {
                Some(i) => {
                    let inner = t[i + 5..].strip_suffix(')').ok_or_else(|| bad("missing `)`"))?;
                    let d: BigInt = inner.parse().map_err(|_| bad("bad radicand"))?;
                    let c = match t[..i].trim_end_matches('*') {
                        "" => BigRational::one(),
                        "-" => -BigRational::one(),
                        c => parse_rat(c).ok_or_else(|| bad("bad coefficient"))?,
                    };
                    (c, d)
                }
                None => (parse_rat(t).ok_or_else(|| bad("bad term"))?, BigInt::one()),
            };
            terms.push((c, d));
        }
        RhsExpr::new(terms, constant)
    }

    /// Algebraic part in file syntax, e.g. `18720/19*sqrt(14) + 40608/95*sqrt(2)`.
    pub fn terms_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (c, d)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            let body = if d.is_one() {
                fmt_rat(&a)
            } else if a.is_one() {
                format!("sqrt({d})")
            } else {
                format!("{}*sqrt({d})", fmt_rat(&a))
            };
            match (i, neg) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }

    pub fn approx(&self) -> f64 {
        let alg: f64 = self.terms.iter().map(|(c, d)| rat_to_f64(c) * d.to_f64().unwrap_or(f64::NAN).sqrt()).sum();
        let pi = std::f64::consts::PI;
        alg * match self.constant {
            Constant::InvPi => 1.0 / pi,
            Constant::PiSq => pi * pi,
            Constant::InvPiSq => 1.0 / (pi * pi),
            Constant::Zeta3 => 1.202_056_903_159_594_2,
            Constant::KL2 => 0.781_302_412_896_486_3,
        }
    }

    /// Ball enclosing the value with radius at most `10^-digits`.
    pub fn value(&self, digits: u32) -> Ball {
        // Guard digits for the size of the coefficients and the constant.
        let mag = self.approx().abs().max(1.0).log10().ceil() as u32;
        let inner = digits + mag + 6 + self.terms.len() as u32;
        let prec = prec_for_digits(inner);
        let mut alg = Ball::zero(prec);
        for (c, d) in &self.terms {
            let r = sqrt_ball(&BigRational::from_integer(d.clone()), inner).expect("nonnegative radicand");
            alg = alg.add(&r.mul_rational(c));
        }
        alg.mul(&self.constant.ball(inner)).with_prec(prec_for_digits(digits))
    }
}

impl fmt::Display for RhsExpr {
    /// Human form such as `(39/8)√65/π`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, d)| {
                if d.is_one() {
                    fmt_rat(c)
                } else if c.is_one() {
                    format!("√{d}")
                } else if *c == -BigRational::one() {
                    format!("-√{d}")
                } else if c.is_integer() {
                    format!("{}√{d}", c)
                } else {
                    format!("({})√{d}", fmt_rat(c))
                }
            })
            .collect();
        let body = parts.join(" + ").replace("+ -", "- ");
        if parts.len() > 1 {
            write!(f, "({body}){}", self.constant.symbol())
        } else {
            write!(f, "{body}{}", self.constant.symbol())
        }
    }
}

/// Polynomial summand weight in `k`, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight(pub Vec<BigRational>);

impl Weight {
    pub fn linear(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Weight {
        Weight::from_coeffs(vec![BigRational::from_integer(b.into()), BigRational::from_integer(a.into())])
    }

    pub fn from_coeffs(mut c: Vec<BigRational>) -> Weight {
        while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        if c.is_empty() {
            c.push(BigRational::zero());
        }
        Weight(c)
    }

    pub fn eval(&self, k: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * k + c)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// `(α, β)` when the weight is `αk + β` with integer coefficients.
    pub fn as_linear(&self) -> Option<(BigInt, BigInt)> {
        if self.0.len() > 2 || self.0.iter().any(|c| !c.is_integer()) {
            return None;
        }
        let b = self.0[0].to_integer();
        let a = self.0.get(1).map(|c| c.to_integer()).unwrap_or_default();
        Some((a, b))
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Accepts `28k^2-18k+3`, `-5/9*k+4/27`, `1500000k+87659`.
    fn from_str(s: &str) -> Result<Weight> {
        let bad = || Error::parse(s, "bad weight polynomial");
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in t.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut coeffs: Vec<BigRational> = Vec::new();
        for term in terms {
            let term = term.strip_prefix('+').unwrap_or(&term);
            let (c, e) = match term.find('k') {
                None => (term.to_string(), 0usize),
                Some(i) => {
                    let e = match &term[i + 1..] {
                        "" => 1,
                        r => r.strip_prefix('^').and_then(|x| x.parse().ok()).ok_or_else(bad)?,
                    };
                    (term[..i].trim_end_matches('*').to_string(), e)
                }
            };
            let c = match c.as_str() {
                "" if e > 0 => BigRational::one(),
                "-" if e > 0 => -BigRational::one(),
                c => parse_rat(c).ok_or_else(bad)?,
            };
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigRational::zero());
            }
            coeffs[e] += c;
        }
        Ok(Weight::from_coeffs(coeffs))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() && !(e == 0 && first) {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let coef = if e > 0 && a.is_one() {
                String::new()
            } else if e > 0 && !a.is_integer() {
                format!("{}*", fmt_rat(&a))
            } else {
                fmt_rat(&a)
            };
            let var = match e {
                0 => String::new(),
                1 => "k".to_string(),
                e => format!("k^{e}"),
            };
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => "-",
                (false, false) => "+",
            };
            write!(f, "{sign}{coef}{var}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Conjectural,
    Proved,
    Corrected,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Conjectural => "conjectural",
            Status::Proved => "proved",
            Status::Corrected => "corrected",
        }
    }
}

impl FromStr for Status {
    type Err = Error;
    fn from_str(s: &str) -> Result<Status> {
        Ok(match s {
            "conjectural" => Status::Conjectural,
            "proved" => Status::Proved,
            "corrected" => Status::Corrected,
            _ => return Err(Error::parse(s, "unknown status")),
        })
    }
}

/// One series identity `Σ_{k≥start} w(k)/k^e · Π kernels(k) / m^k = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub code: String,
    pub start: u32,
    pub weight: Weight,
    pub k_power: u32,
    pub base: BigRational,
    pub kernels: Vec<Kernel>,
    pub rhs: RhsExpr,
    pub alt_rhs: Option<RhsExpr>,
    pub status: Status,
    pub note: String,
}

impl Identity {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Validation(format!("{}: {m}", self.code)));
        if self.base.is_zero() {
            return fail("base m must be nonzero".into());
        }
        if self.start > 1 {
            return fail("start index must be 0 or 1".into());
        }
        if self.k_power > 0 && self.start != 1 {
            return fail("a k^e denominator requires start index 1".into());
        }
        if self.kernels.is_empty() {
            return fail("empty kernel list".into());
        }
        for k in &self.kernels {
            k.validate().map_err(|e| Error::Validation(format!("{}: {e}", self.code)))?;
        }
        Ok(())
    }

    /// Exact summand at index `k`.
    pub fn term_value(&self, k: u64) -> Result<BigRational> {
        if k < self.start as u64 {
            return Err(Error::Domain(format!("{}: index {k} is below the start index {}", self.code, self.start)));
        }
        let kr = BigRational::from_integer(BigInt::from(k));
        let mut t = self.weight.eval(&kr) * kernels_product(&self.kernels, k)?;
        if self.k_power > 0 {
            t /= BigInt::from(k).pow(self.k_power);
        }
        Ok(t / self.base.pow(k as i32))
    }

    /// Ball for the published right-hand side.
    pub fn rhs_value(&self, digits: u32) -> Ball {
        self.rhs.value(digits)
    }

    /// The right-hand side used for verification: the corrected value when
    /// one is recorded, otherwise the published one.
    pub fn effective_rhs(&self) -> &RhsExpr {
        self.alt_rhs.as_ref().unwrap_or(&self.rhs)
    }

    /// One-line human description.
    pub fn summary(&self) -> String {
        let kpow = if self.k_power > 0 { format!("/k^{}", self.k_power) } else { String::new() };
        format!(
            "Σ_{{k≥{}}} ({}){} · {} / ({})^k = {}",
            self.start,
            self.weight,
            kpow,
            Kernel::fmt_list(&self.kernels),
            fmt_rat(&self.base),
            self.rhs
        )
    }
}

/// All identities, in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub schema_version: u32,
    pub identities: Vec<Identity>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    schema_version: u32,
    #[serde(default)]
    identity: Vec<RawIdentity>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdentity {
    code: String,
    status: String,
    start: u32,
    weight: String,
    #[serde(default)]
    k_power: u32,
    base: String,
    kernel: String,
    rhs: String,
    constant: String,
    alt_rhs: Option<String>,
    #[serde(default)]
    note: String,
}

impl RawIdentity {
    fn convert(self) -> Result<Identity> {
        let code = self.code.clone();
        let ctx = |e: Error| match e {
            Error::Parse { msg, code: what } => Error::parse(code.clone(), format!("{msg} (`{what}`)")),
            other => Error::parse(code.clone(), other.to_string()),
        };
        let constant: Constant = self.constant.parse().map_err(ctx)?;
        let id = Identity {
            code: self.code.clone(),
            start: self.start,
            weight: self.weight.parse().map_err(ctx)?,
            k_power: self.k_power,
            base: parse_rat(&self.base).ok_or_else(|| Error::parse(code.clone(), format!("bad base `{}`", self.base)))?,
            kernels: Kernel::parse_list(&self.kernel).map_err(ctx)?,
            rhs: RhsExpr::parse_terms(&self.rhs, constant).map_err(ctx)?,
            alt_rhs: self.alt_rhs.as_deref().map(|s| RhsExpr::parse_terms(s, constant)).transpose().map_err(ctx)?,
            status: self.status.parse().map_err(ctx)?,
            note: self.note,
        };
        Ok(id)
    }
}

fn toml_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Counts reported by [`Catalog::census`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub total: usize,
    pub by_status: BTreeMap<String, usize>,
    pub by_constant: BTreeMap<String, usize>,
    /// Conjectural series whose right-hand side is a multiple of 1/π.
    pub conjectural_inv_pi: usize,
}

impl Catalog {
    /// The catalog shipped inside the crate.
    pub fn bundled() -> Catalog {
        Catalog::from_toml_str(BUNDLED).expect("bundled catalog is valid")
    }

    pub fn bundled_text() -> &'static str {
        BUNDLED
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Catalog::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Catalog> {
        if text.trim().is_empty() {
            return Err(Error::parse("catalog", "empty file"));
        }
        let raw: RawCatalog = toml::from_str(text).map_err(|e| Error::parse("catalog", e.to_string()))?;
        if raw.schema_version != SCHEMA_VERSION {
            return Err(Error::Validation(format!(
                "schema version {} does not match supported version {SCHEMA_VERSION}",
                raw.schema_version
            )));
        }
        let identities = raw.identity.into_iter().map(RawIdentity::convert).collect::<Result<Vec<_>>>()?;
        let cat = Catalog { schema_version: raw.schema_version, identities };
        cat.validate()?;
        Ok(cat)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for id in &self.identities {
            if !seen.insert(id.code.as_str()) {
                return Err(Error::Validation(format!("duplicate identity code {}", id.code)));
            }
            id.validate()?;
        }
        Ok(())
    }

    /// Canonical text; `from_toml_str(to_toml_string())` is the identity.
    pub fn to_toml_string(&self) -> String {
        let mut out = format!("schema_version = {}\n", self.schema_version);
        for id in &self.identities {
            out.push_str("\n[[identity]]\n");
            out.push_str(&id_to_toml(id));
        }
        out
    }

    pub fn get(&self, code: &str) -> Option<&Identity> {
        self.identities.iter().find(|i| i.code == code)
    }

    pub fn len(&self) -> usize {
        self.identities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.identities.is_empty()
    }

    pub fn census(&self) -> Census {
        let mut c = Census { total: self.len(), ..Census::default() };
        for id in &self.identities {
            *c.by_status.entry(id.status.name().to_string()).or_default() += 1;
            *c.by_constant.entry(id.rhs.constant.name().to_string()).or_default() += 1;
            if id.status == Status::Conjectural && id.rhs.constant == Constant::InvPi {
                c.conjectural_inv_pi += 1;
            }
        }
        c
    }
}

/// One `[[identity]]` body in canonical field order.
pub fn id_to_toml(id: &Identity) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
    kv("code", toml_str(&id.code));
    kv("status", toml_str(id.status.name()));
    kv("start", id.start.to_string());
    kv("weight", toml_str(&id.weight.to_string()));
    if id.k_power > 0 {
        kv("k_power", id.k_power.to_string());
    }
    kv("base", toml_str(&fmt_rat(&id.base)));
    kv("kernel", toml_str(&Kernel::fmt_list(&id.kernels)));
    kv("rhs", toml_str(&id.rhs.terms_string()));
    if let Some(a) = &id.alt_rhs {
        kv("alt_rhs", toml_str(&a.terms_string()));
    }
    kv("constant", toml_str(id.rhs.constant.name()));
    if !id.note.is_empty() {
        kv("note", toml_str(&id.note));
    }
    out
}
