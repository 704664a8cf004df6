//! Text form of kernel lists.
//!
//! ```text
//! B(2,1)^-2   T(10,121)^3   T2(7,1)   A(-8)   W(1/4)   CLF   AQ
//! QC[C@k,-1/3@k^2,-2/3@j]   DUAL(1)[B(2,1) T(1,16)]
//! ```

use super::{Kernel, QArg, QFactor, Side};
use crate::error::{Error, Result};
use crate::exact_arith::{fmt_rat, parse_rat};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

fn err(s: &str, msg: impl Into<String>) -> Error {
    Error::parse(s, msg.into())
}

/// Split at whitespace that is not inside brackets or parentheses.
fn split_top(s: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = None;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(err(s, "unbalanced brackets"));
                }
            }
            _ => {}
        }
        if c.is_whitespace() && depth == 0 {
            if let Some(st) = start.take() {
                out.push(&s[st..i]);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if depth != 0 {
        return Err(err(s, "unbalanced brackets"));
    }
    if let Some(st) = start {
        out.push(&s[st..]);
    }
    Ok(out)
}

pub(super) fn parse_list(s: &str) -> Result<Vec<Kernel>> {
    let parts = split_top(s)?;
    if parts.is_empty() {
        return Err(err(s, "empty kernel list"));
    }
    parts.into_iter().map(parse_one).collect()
}

/// `body^e` with the exponent optional.
fn split_pow(s: &str) -> (&str, Option<&str>) {
    match s.rfind('^') {
        Some(i) if !s[i..].contains([')', ']']) => (&s[..i], Some(&s[i + 1..])),
        _ => (s, None),
    }
}

/// `NAME(args)` → (`NAME`, `args`).
fn call(s: &str) -> Option<(&str, &str)> {
    let open = s.find('(')?;
    let inner = s.strip_suffix(')')?;
    Some((&s[..open], &inner[open + 1..]))
}

fn rat_arg(full: &str, a: &str) -> Result<BigRational> {
    parse_rat(a).ok_or_else(|| err(full, format!("bad rational argument `{a}`")))
}

fn int_arg<T: std::str::FromStr>(full: &str, a: &str) -> Result<T> {
    a.trim().parse().map_err(|_| err(full, format!("bad integer argument `{a}`")))
}

fn parse_one(s: &str) -> Result<Kernel> {
    // DUAL(λ)[...] carries a bracketed list that may itself contain `^`.
    if let Some(rest) = s.strip_prefix("DUAL(") {
        let close = rest.find(')').ok_or_else(|| err(s, "missing `)`"))?;
        let lambda = rat_arg(s, &rest[..close])?;
        let list = rest[close + 1..]
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| err(s, "DUAL needs a bracketed kernel list"))?;
        let inner = parse_list(list)?;
        return Ok(Kernel::Dual { lambda, inner });
    }
    if let Some(rest) = s.strip_prefix("QC[") {
        let body = rest.strip_suffix(']').ok_or_else(|| err(s, "missing `]`"))?;
        let fs = body.split(',').map(|f| parse_qfactor(s, f.trim())).collect::<Result<Vec<_>>>()?;
        return Ok(Kernel::QConv(fs));
    }
    let (body, pow) = split_pow(s);
    let exp: i64 = match pow {
        Some(p) => int_arg(s, p)?,
        None => 1,
    };
    let simple = |k: Kernel| {
        if pow.is_some() {
            Err(err(s, "this family takes no exponent"))
        } else {
            Ok(k)
        }
    };
    match body {
        "CLF" => return simple(Kernel::Clf),
        "S6" => return simple(Kernel::SConj6),
        "AQ" => return simple(Kernel::Aq),
        "BQ" => return simple(Kernel::Bq),
        "CQ" => return simple(Kernel::Cq),
        _ => {}
    }
    let (name, args) = call(body).ok_or_else(|| err(s, "unknown kernel"))?;
    let args: Vec<&str> = args.split(',').map(str::trim).collect();
    let one = |k: fn(BigRational) -> Kernel| -> Result<Kernel> {
        if args.len() != 1 {
            return Err(err(s, "expected one argument"));
        }
        simple(k(rat_arg(s, args[0])?))
    };
    let k = match name {
        "B" => {
            if args.len() != 2 {
                return Err(err(s, "B takes two arguments"));
            }
            Kernel::Binom { a: int_arg(s, args[0])?, b: int_arg(s, args[1])?, exp: exp as i32 }
        }
        "T" | "T2" | "T3" => {
            if args.len() != 2 {
                return Err(err(s, "T takes two arguments"));
            }
            if exp < 1 {
                return Err(err(s, "trinomial power must be positive"));
            }
            let step = match name {
                "T" => 1,
                "T2" => 2,
                _ => 3,
            };
            Kernel::Trinomial {
                b: int_arg::<BigInt>(s, args[0])?,
                c: int_arg::<BigInt>(s, args[1])?,
                step,
                power: exp as u32,
            }
        }
        "A" => one(Kernel::Apery)?,
        "S1" => one(Kernel::S1)?,
        "S2" => one(Kernel::S2)?,
        "W" => one(Kernel::W)?,
        "FP" => one(Kernel::FPlus)?,
        "FM" => one(Kernel::FMinus)?,
        "G" => one(Kernel::G)?,
        "S5" => one(Kernel::SConj5)?,
        "P6" => one(Kernel::PConj6)?,
        "DOMB" => one(Kernel::Domb)?,
        "H" => one(Kernel::H)?,
        _ => return Err(err(s, format!("unknown kernel family `{name}`"))),
    };
    k.validate()?;
    Ok(k)
}

fn parse_qfactor(full: &str, f: &str) -> Result<QFactor> {
    let (arg, rest) = f.split_once('@').ok_or_else(|| err(full, "factor needs `@k` or `@j`"))?;
    let (side, exp) = match rest.split_once('^') {
        Some((sd, e)) => (sd, int_arg::<u32>(full, e)?),
        None => (rest, 1),
    };
    let side = match side {
        "k" => Side::K,
        "j" => Side::J,
        _ => return Err(err(full, format!("bad side `{side}`"))),
    };
    if exp == 0 {
        return Err(err(full, "zero exponent"));
    }
    let arg = if arg == "C" { QArg::Central } else { QArg::Rat(rat_arg(full, arg)?) };
    Ok(QFactor { arg, side, exp })
}

pub(super) fn fmt_kernel(k: &Kernel, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let r = fmt_rat;
    match k {
        Kernel::Binom { a, b, exp } => {
            write!(f, "B({a},{b})")?;
            if *exp != 1 {
                write!(f, "^{exp}")?;
            }
            Ok(())
        }
        Kernel::Trinomial { b, c, step, power } => {
            let name = match step {
                1 => "T".to_string(),
                s => format!("T{s}"),
            };
            write!(f, "{name}({b},{c})")?;
            if *power != 1 {
                write!(f, "^{power}")?;
            }
            Ok(())
        }
        Kernel::Apery(x) => write!(f, "A({})", r(x)),
        Kernel::S1(x) => write!(f, "S1({})", r(x)),
        Kernel::S2(x) => write!(f, "S2({})", r(x)),
        Kernel::W(x) => write!(f, "W({})", r(x)),
        Kernel::FPlus(x) => write!(f, "FP({})", r(x)),
        Kernel::FMinus(x) => write!(f, "FM({})", r(x)),
        Kernel::G(x) => write!(f, "G({})", r(x)),
        Kernel::SConj5(x) => write!(f, "S5({})", r(x)),
        Kernel::PConj6(x) => write!(f, "P6({})", r(x)),
        Kernel::Domb(x) => write!(f, "DOMB({})", r(x)),
        Kernel::H(x) => write!(f, "H({})", r(x)),
        Kernel::Clf => write!(f, "CLF"),
        Kernel::SConj6 => write!(f, "S6"),
        Kernel::Aq => write!(f, "AQ"),
        Kernel::Bq => write!(f, "BQ"),
        Kernel::Cq => write!(f, "CQ"),
        Kernel::QConv(fs) => {
            let parts: Vec<String> = fs
                .iter()
                .map(|q| {
                    let a = match &q.arg {
                        QArg::Central => "C".to_string(),
                        QArg::Rat(x) => r(x),
                    };
                    let s = match q.side {
                        Side::K => "k",
                        Side::J => "j",
                    };
                    if q.exp == 1 {
                        format!("{a}@{s}")
                    } else {
                        format!("{a}@{s}^{}", q.exp)
                    }
                })
                .collect();
            write!(f, "QC[{}]", parts.join(","))
        }
        Kernel::Dual { lambda, inner } => write!(f, "DUAL({})[{}]", r(lambda), Kernel::fmt_list(inner)),
    }
}
