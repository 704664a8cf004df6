use crate::{exit, Cli, Command, Format, Selection};
use piseries_core::congruences::{self, CongruenceReport, PMAX_E2, PMAX_E6};
use piseries_core::exact_arith::{fmt_rat, parse_rat, primes_in};
use piseries_core::identity_db::id_to_toml;
use piseries_core::properties::{self, PolyFamily};
use piseries_core::series_engine::{self, EvalOptions};
use piseries_core::{Catalog, EvalReport, Identity, Verdict};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fmt::Write as _;

pub struct Output {
    pub text: String,
    pub code: u8,
}

pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { message: message.into(), code: exit::USAGE }
    }

    fn data(message: impl Into<String>) -> Failure {
        Failure { message: message.into(), code: exit::DATA }
    }
}

type Result<T> = std::result::Result<T, Failure>;

pub fn run(cli: &Cli) -> Result<Output> {
    let catalog = match &cli.catalog {
        Some(path) => Catalog::load(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?,
        None => Catalog::bundled(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| Failure::usage(format!("cannot start {} worker threads: {e}", cli.jobs)))?;
    let fmt = cli.format;
    match &cli.command {
        Command::Verify { sel, digits, published_rhs } => {
            let ids = select(&catalog, sel)?;
            pool.install(|| verify(&ids, *digits, *published_rhs, fmt))
        }
        Command::Ratio { sel } => ratio(&select(&catalog, sel)?, fmt),
        Command::Dual { code, verify } => {
            let id = lookup(&catalog, code)?;
            let t = series_engine::transform_dual(id).map_err(|e| Failure::data(format!("{code}: {e}")))?;
            transformed(&t, *verify, fmt)
        }
        Command::TransformBinomial { code, lambda, verify } => {
            let id = lookup(&catalog, code)?;
            let t = match lambda {
                Some(s) => {
                    let l = parse_rat(s).ok_or_else(|| Failure::usage(format!("bad rational `{s}` for --lambda")))?;
                    series_engine::transform_binomial_with(id, &l)
                }
                None => series_engine::transform_binomial(id),
            }
            .map_err(|e| Failure::data(format!("{code}: {e}")))?;
            transformed(&t, *verify, fmt)
        }
        Command::Congruence { conj1, pmin, pmax, .. } => pool.install(|| congruence(*conj1, *pmin, *pmax, fmt)),
        Command::Qlc { family, nmax } => qlc(family.as_deref(), *nmax, fmt),
        Command::Asymptote { b, c, n } => asymptote(*b, *c, n, fmt),
        Command::Suite { nmax } => suite(*nmax, fmt),
        Command::List => list(&catalog, fmt),
    }
}

fn lookup<'a>(catalog: &'a Catalog, code: &str) -> Result<&'a Identity> {
    catalog.get(code).ok_or_else(|| Failure::usage(format!("unknown identity code `{code}`")))
}

fn select(catalog: &Catalog, sel: &Selection) -> Result<Vec<Identity>> {
    if sel.all {
        return Ok(catalog.identities.clone());
    }
    sel.code.iter().map(|c| lookup(catalog, c).cloned()).collect()
}

fn json_text(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialise");
    s.push('\n');
    s
}

fn verdict_code(v: &Verdict) -> u8 {
    match v {
        Verdict::Verified { .. } => exit::OK,
        Verdict::Refuted { .. } => exit::REFUTED,
        Verdict::Inconclusive { .. } => exit::INCONCLUSIVE,
    }
}

/// REFUTED outranks INCONCLUSIVE, which outranks VERIFIED.
fn worst(codes: impl IntoIterator<Item = u8>) -> u8 {
    codes.into_iter().fold(exit::OK, |acc, c| match (acc, c) {
        (exit::REFUTED, _) | (_, exit::REFUTED) => exit::REFUTED,
        (exit::INCONCLUSIVE, _) | (_, exit::INCONCLUSIVE) => exit::INCONCLUSIVE,
        _ => exit::OK,
    })
}

/// An evaluation outcome; engine errors become INCONCLUSIVE rows.
struct Row {
    code: String,
    report: Option<EvalReport>,
    verdict: Verdict,
}

fn evaluate_row(id: &Identity, digits: u32, published_rhs: bool) -> Row {
    let opts = EvalOptions { published_rhs, ..EvalOptions::default() };
    match series_engine::evaluate_with(id, digits, &opts) {
        Ok(r) => Row { code: id.code.clone(), verdict: r.verdict.clone(), report: Some(r) },
        Err(e) => Row { code: id.code.clone(), report: None, verdict: Verdict::Inconclusive { reason: e.to_string() } },
    }
}

fn row_json(row: &Row) -> Value {
    let mut v = json!({
        "code": row.code,
        "verdict": row.verdict.label(),
    });
    match &row.verdict {
        Verdict::Verified { digits } => v["verified_digits"] = json!(digits),
        Verdict::Refuted { bound } => v["difference_at_least"] = json!(format!("{bound:.6e}")),
        Verdict::Inconclusive { reason } => v["reason"] = json!(reason),
    }
    if let Some(r) = &row.report {
        v["digits"] = json!(r.digits);
        v["terms"] = json!(r.terms);
        v["lhs"] = json!(r.lhs_decimal());
        v["rhs"] = json!(r.rhs_decimal());
        v["difference_at_most"] = json!(format!("{:.6e}", r.diff_bound));
        v["ratio_abs"] = json!(format!("{:.6e}", r.ratio));
        v["published_rhs"] = json!(r.published_rhs);
    }
    v
}

fn row_text(row: &Row) -> String {
    let mut s = format!("{:<8} {:<12}", row.code, row.verdict.label());
    if let Some(r) = &row.report {
        let _ = write!(s, " terms={:<7} |LHS-RHS|<={:.2e}", r.terms, r.diff_bound);
        if r.published_rhs {
            s.push_str(" (published RHS)");
        }
    }
    match &row.verdict {
        Verdict::Refuted { bound } => {
            let _ = write!(s, " |LHS-RHS|>={bound:.3e}");
        }
        Verdict::Inconclusive { reason } => {
            let _ = write!(s, " {reason}");
        }
        Verdict::Verified { .. } => {}
    }
    s
}

fn verify(ids: &[Identity], digits: u32, published_rhs: bool, fmt: Format) -> Result<Output> {
    let rows: Vec<Row> = ids.par_iter().map(|id| evaluate_row(id, digits, published_rhs)).collect();
    let count = |label: &str| rows.iter().filter(|r| r.verdict.label() == label).count();
    let (v, r, i) = (count("VERIFIED"), count("REFUTED"), count("INCONCLUSIVE"));
    let code = worst(rows.iter().map(|r| verdict_code(&r.verdict)));
    let text = match fmt {
        Format::Json => json_text(json!({
            "command": "verify",
            "digits": digits,
            "results": rows.iter().map(row_json).collect::<Vec<_>>(),
            "summary": {"total": rows.len(), "verified": v, "refuted": r, "inconclusive": i},
        })),
        Format::Text => {
            let mut s = String::new();
            for row in &rows {
                let _ = writeln!(s, "{}", row_text(row));
            }
            let _ = writeln!(s, "{v}/{} verified at {digits} digits, {r} refuted, {i} inconclusive", rows.len());
            s
        }
    };
    Ok(Output { text, code })
}

fn ratio(ids: &[Identity], fmt: Format) -> Result<Output> {
    let rows: Vec<(String, std::result::Result<String, String>, Option<f64>)> = ids
        .iter()
        .map(|id| {
            let exact = series_engine::convergence_ratio(id).map(|q| q.to_string()).map_err(|e| e.to_string());
            let abs = series_engine::ratio_info(id).ok().map(|i| i.abs);
            (id.code.clone(), exact, abs)
        })
        .collect();
    let code = if rows.iter().all(|r| r.1.is_ok()) { exit::OK } else { exit::INCONCLUSIVE };
    let text = match fmt {
        Format::Json => json_text(json!({
            "command": "ratio",
            "results": rows.iter().map(|(c, e, a)| match e {
                Ok(q) => json!({"code": c, "ratio": q, "abs": a.map(|x| format!("{x:.6e}"))}),
                Err(m) => json!({"code": c, "error": m, "abs": a.map(|x| format!("{x:.6e}"))}),
            }).collect::<Vec<_>>(),
        })),
        Format::Text => rows
            .iter()
            .map(|(c, e, a)| {
                let abs = a.map(|x| format!("  |r|={x:.6e}")).unwrap_or_default();
                match e {
                    Ok(q) => format!("{c:<8} {q}{abs}\n"),
                    Err(m) => format!("{c:<8} ({m}){abs}\n"),
                }
            })
            .collect(),
    };
    Ok(Output { text, code })
}

fn transformed(t: &Identity, verify_digits: Option<u32>, fmt: Format) -> Result<Output> {
    let entry = id_to_toml(t);
    let row = verify_digits.map(|d| evaluate_row(t, d.max(1), false));
    let code = row.as_ref().map_or(exit::OK, |r| verdict_code(&r.verdict));
    let text = match fmt {
        Format::Json => {
            let mut v = json!({"code": t.code, "identity": entry, "summary": t.summary()});
            if let Some(r) = &row {
                v["verification"] = row_json(r);
            }
            json_text(v)
        }
        Format::Text => {
            let mut s = format!("# {}\n[[identity]]\n{entry}", t.summary());
            if let Some(r) = &row {
                let _ = writeln!(s, "# {}", row_text(r));
            }
            s
        }
    };
    Ok(Output { text, code })
}

fn congruence_json(r: &CongruenceReport) -> Value {
    json!({
        "p": r.p,
        "modulus": format!("p^{}", r.e),
        "computed": r.computed.to_string(),
        "predicted": r.predicted.as_ref().map(|x| x.to_string()),
        "case": r.case,
        "form": r.form.as_ref().and_then(|f| f.solution.map(|(x, y)| json!({
            "a": f.a, "b": f.b, "target": f.target.to_string(), "x": x, "y": y,
        }))),
        "matches": r.matches,
    })
}

fn congruence_text(label: &str, r: &CongruenceReport) -> String {
    let predicted = r.predicted.as_ref().map_or("-".to_string(), |x| x.to_string());
    let form = r
        .form
        .as_ref()
        .and_then(|f| {
            let a = if f.a == 1 { String::new() } else { format!("{}*", f.a) };
            f.solution.map(|(x, y)| format!(" [{}={a}{x}^2+{}*{y}^2]", f.target, f.b))
        })
        .unwrap_or_default();
    let status = match (&r.predicted, r.matches) {
        (_, true) => "OK",
        (None, false) => "NO-CASE",
        (Some(_), false) => "MISMATCH",
    };
    format!(
        "p={:<4} {label:<6} mod p^{}  computed={:<12} predicted={:<12} {status:<8} {}{form}\n",
        r.p, r.e, r.computed, predicted, r.case
    )
}

fn report_code(r: &CongruenceReport) -> u8 {
    match (&r.predicted, r.matches) {
        (_, true) => exit::OK,
        (None, false) => exit::INCONCLUSIVE,
        (Some(_), false) => exit::REFUTED,
    }
}

fn congruence(conj1: bool, pmin: u64, pmax: u64, fmt: Format) -> Result<Output> {
    let (cap, lo) = if conj1 { (PMAX_E6, 5) } else { (PMAX_E2, 7) };
    if pmax > cap {
        return Err(Failure::usage(format!("--pmax {pmax} exceeds the cap of {cap} for this congruence")));
    }
    let primes = primes_in(pmin.max(lo), pmax);
    let rows: Vec<Vec<(&str, CongruenceReport)>> = primes
        .par_iter()
        .map(|&p| {
            if conj1 {
                congruences::check_conj1(p).map(|r| vec![("conj1", r)])
            } else {
                congruences::check_conj5_congruences(p).map(|(a, b)| vec![("first", a), ("second", b)])
            }
        })
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Failure::data(e.to_string()))?;
    let flat: Vec<&(&str, CongruenceReport)> = rows.iter().flatten().collect();
    let code = worst(flat.iter().map(|(_, r)| report_code(r)));
    let name = if conj1 { "conj1" } else { "conj5" };
    let text = match fmt {
        Format::Json => json_text(json!({
            "command": "congruence",
            "family": name,
            "results": flat.iter().map(|(l, r)| {
                let mut v = congruence_json(r);
                v["which"] = json!(l);
                v
            }).collect::<Vec<_>>(),
            "all_match": flat.iter().all(|(_, r)| r.matches),
        })),
        Format::Text => {
            let mut s: String = flat.iter().map(|(l, r)| congruence_text(l, r)).collect();
            let ok = flat.iter().filter(|(_, r)| r.matches).count();
            let _ = writeln!(s, "{ok}/{} congruences hold for primes in [{}, {pmax}]", flat.len(), pmin.max(lo));
            s
        }
    };
    Ok(Output { text, code })
}

fn qlc(family: Option<&str>, nmax: u64, fmt: Format) -> Result<Output> {
    let families: Vec<PolyFamily> = match family {
        Some(f) => vec![f.parse().map_err(|e: piseries_core::Error| Failure::usage(e.to_string()))?],
        None => PolyFamily::ALL.to_vec(),
    };
    let reports: Vec<_> = families.iter().map(|&f| properties::qlogconvex_check(f, nmax)).collect();
    let code = if reports.iter().all(|r| r.all_nonnegative()) { exit::OK } else { exit::REFUTED };
    let text = match fmt {
        Format::Json => json_text(json!({
            "command": "qlc",
            "nmax": nmax,
            "results": reports.iter().map(|r| json!({
                "family": r.family,
                "nonnegative": r.all_nonnegative(),
                "first_counterexample": r.first_counterexample().map(|row| json!({
                    "n": row.n,
                    "degree": row.first_negative,
                    "coefficients": row.diff.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                })),
            })).collect::<Vec<_>>(),
        })),
        Format::Text => reports
            .iter()
            .map(|r| match r.first_counterexample() {
                None => format!("{:<8} n=1..{nmax}: all coefficients nonnegative\n", r.family),
                Some(row) => format!(
                    "{:<8} n={}: coefficient of q^{} is negative\n",
                    r.family,
                    row.n,
                    row.first_negative.unwrap_or_default()
                ),
            })
            .collect(),
    };
    Ok(Output { text, code })
}

fn asymptote(b: u64, c: u64, ns: &[u64], fmt: Format) -> Result<Output> {
    let mut rows = Vec::new();
    for &n in ns {
        let r = properties::asymptotic_check(b, c, n).map_err(|e| Failure::usage(e.to_string()))?;
        rows.push((n, r.to_decimal(20), (r.to_f64() - 1.0).abs()));
    }
    let text = match fmt {
        Format::Json => json_text(json!({
            "command": "asymptote",
            "b": b,
            "c": c,
            "results": rows.iter().map(|(n, r, d)| json!({"n": n, "ratio": r, "deviation": format!("{d:.6e}")})).collect::<Vec<_>>(),
        })),
        Format::Text => rows
            .iter()
            .map(|(n, r, d)| format!("T_{n}({b},{c}) / leading term = {r}  |ratio-1|={d:.3e}\n"))
            .collect(),
    };
    Ok(Output { text, code: exit::OK })
}

fn suite(nmax: u64, fmt: Format) -> Result<Output> {
    let rep = properties::run_identity_suite(nmax);
    let code = if rep.all_pass() { exit::OK } else { exit::REFUTED };
    let text = match fmt {
        Format::Json => json_text(json!({
            "command": "suite",
            "nmax": nmax,
            "results": rep.entries.iter().map(|e| json!({
                "name": e.name, "range": e.range, "passed": e.passed(), "first_failure": e.first_failure,
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s: String = rep.entries.iter().map(|e| format!("{e}\n")).collect();
            let passed = rep.entries.iter().filter(|e| e.passed()).count();
            let _ = writeln!(s, "{passed}/{} identity families pass", rep.entries.len());
            s
        }
    };
    Ok(Output { text, code })
}

fn list(catalog: &Catalog, fmt: Format) -> Result<Output> {
    let text = match fmt {
        Format::Json => json_text(json!({
            "command": "list",
            "schema_version": catalog.schema_version,
            "identities": catalog.identities.iter().map(|id| json!({
                "code": id.code,
                "status": id.status.name(),
                "constant": id.rhs.constant.name(),
                "base": fmt_rat(&id.base),
                "summary": id.summary(),
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s: String = catalog
                .identities
                .iter()
                .map(|id| format!("{:<8} {:<11} {}\n", id.code, id.status.name(), id.summary()))
                .collect();
            let _ = writeln!(s, "{} identities", catalog.len());
            s
        }
    };
    Ok(Output { text, code: exit::OK })
}
