use apery_core::asymptotics::{dyson_rate_fit, ratio_limit};
use apery_core::closed_form::s_k_closed;
use apery_core::genfunc::{g_coeffs, rho1_coeffs, rho2_coeffs};
use apery_core::series::s_k_series;
use apery_core::verify::{run_suite, Suite};
use apery_core::{BigRational, ClosedForm, Error, HPReal, Precision, Result};
use rayon::prelude::*;
use serde_json::Value;

use crate::report::{rational, real, short, verdict, Report, Row};
use crate::{Cli, Command, Method};

pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Eval { z, k, eps, method } => eval(z, *k, eps.as_deref(), *method, prec(cli, 256)?),
        Command::Table { z, kmin, kmax } => table(z, *kmin, *kmax, prec(cli, 256)?),
        Command::Limit { z } => limit(z, prec(cli, 256)?),
        Command::Rate { z, kmin, kmax } => rate(z, *kmin, *kmax, prec(cli, 512)?),
        Command::Genfunc { z, kmax } => genfunc(z, *kmax, prec(cli, 256)?),
        Command::Verify { suite } => verify(suite, prec(cli, 256)?),
    }
}

fn prec(cli: &Cli, default: u32) -> Result<Precision> {
    Precision::new(cli.bits.unwrap_or(default))
}

fn usage(detail: String) -> Error {
    Error::Domain { func: "apery", detail }
}

fn row(pairs: Vec<(&str, Value)>) -> Row {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

// A default series accuracy a couple of ulps above the resolution of the result;
// |S_k(z)| <= S_k(|z|) sizes it.
fn default_eps(z: &BigRational, k: i64, p: Precision) -> Result<HPReal> {
    let one = HPReal::one(64);
    let za = if *z < BigRational::from_integer(0.into()) { -z } else { z.clone() };
    let mag = if k >= 0 {
        s_k_closed(&za, k as u32, Precision::new(64)?).map(|v| v.abs()).unwrap_or_else(|_| one.clone())
    } else {
        one.clone()
    };
    let mag = if mag > one { mag } else { one };
    Ok(mag.mul_pow2(2 - p.bits() as i64))
}

fn eval(z: &BigRational, k: i64, eps: Option<&str>, method: Method, p: Precision) -> Result<Report> {
    if k < 0 && method == Method::Closed {
        return Err(usage("the closed form needs k >= 0; use --method series".into()));
    }
    let eps = match eps {
        Some(s) => HPReal::parse(s, p.working())?,
        None => default_eps(z, k, p)?,
    };
    let closed = if k >= 0 && method != Method::Series {
        let cf = ClosedForm::new(z, k as u32)?;
        let v = cf.value(p)?;
        Some((cf, v))
    } else {
        None
    };
    let series = if method != Method::Closed { Some(s_k_series(z, k, p, &eps)?) } else { None };

    let mut rep = Report::new("eval", Some(z), p);
    let value = closed.as_ref().map(|c| &c.1).or(series.as_ref().map(|s| &s.value)).expect("a method ran");
    let mut r = row(vec![("k", k.into())]);
    if let Some((cf, v)) = &closed {
        r.insert("r1".into(), rational(&cf.r1));
        r.insert("r2".into(), rational(&cf.r2));
        r.insert("value".into(), real(value, p));
        r.insert("closed".into(), real(v, p));
    } else {
        r.insert("value".into(), real(value, p));
    }
    if let Some(s) = &series {
        r.insert("series".into(), real(&s.value, p));
        r.insert("series_terms".into(), s.terms_used.into());
        r.insert("series_tail".into(), short(&s.tail_bound));
        r.insert("eps".into(), short(&eps));
    }
    if let (Some((_, c)), Some(s)) = (&closed, &series) {
        let diff = (c - &s.value).abs();
        let tol = &eps + c.abs().mul_pow2(2 - p.bits() as i64);
        r.insert("difference".into(), short(&diff));
        rep.verdicts.push(verdict("closed form vs series", short(&diff), short(&tol), diff <= tol));
    }
    rep.rows.push(r);
    Ok(rep)
}

fn table(z: &BigRational, kmin: u32, kmax: u32, p: Precision) -> Result<Report> {
    if kmax < kmin {
        return Err(usage(format!("kmax {kmax} is below kmin {kmin}")));
    }
    let lim = ratio_limit(z, p)?.limit;
    let w = p.working();
    let rows = (kmin..=kmax)
        .into_par_iter()
        .map(|k| {
            let cf = ClosedForm::new(z, k)?;
            let ratio = HPReal::from_rational(&(&cf.r1 / &cf.r2), w);
            let residual = (&ratio - &lim).abs();
            Ok(row(vec![
                ("k", k.into()),
                ("r1", rational(&cf.r1)),
                ("r2", rational(&cf.r2)),
                ("ratio", real(&ratio.with_prec(p.bits()), p)),
                ("residual", real(&residual.with_prec(p.bits()), p)),
            ]))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = Report::new("table", Some(z), p);
    rep.summary = Some(row(vec![("limit", real(&lim, p))]));
    rep.rows = rows;
    Ok(rep)
}

fn limit(z: &BigRational, p: Precision) -> Result<Report> {
    let rl = ratio_limit(z, p)?;
    let mut rep = Report::new("limit", Some(z), p);
    rep.rows.push(row(vec![("limit", real(&rl.limit, p)), ("rhs", real(&rl.rhs, p))]));
    Ok(rep)
}

fn rate(z: &BigRational, kmin: u32, kmax: u32, p: Precision) -> Result<Report> {
    let rep_ = dyson_rate_fit(z, kmin, kmax, p)?;
    let fitted = rep_.fitted_rate.to_f64();
    let target = rep_.target_rate.to_f64();
    let mut rep = Report::new("rate", Some(z), p);
    rep.summary = Some(row(vec![
        ("kmin", kmin.into()),
        ("kmax", kmax.into()),
        ("fitted_rate", rep_.fitted_rate.to_decimal_string(6).into()),
        ("plain_rate", rep_.plain_rate.to_decimal_string(6).into()),
        ("target_rate", real(&rep_.target_rate, p)),
        ("relative_deviation", format!("{:.4}", (fitted / target - 1.0).abs()).into()),
        ("envelope_ks", rep_.envelope_ks.iter().map(|&k| Value::from(k)).collect()),
        ("extrapolated", rep_.extrapolated.into()),
    ]));
    rep.rows = rep_.rows.iter().map(|(k, r)| row(vec![("k", (*k).into()), ("residual", short(r))])).collect();
    Ok(rep)
}

fn genfunc(z: &BigRational, kmax: u32, p: Precision) -> Result<Report> {
    let n = kmax as usize;
    let (g, (rho1, rho2)) = rayon::join(|| g_coeffs(z, n, p), || rayon::join(|| rho1_coeffs(z, n, p), || rho2_coeffs(z, n, p)));
    let (g, rho1, rho2) = (g?, rho1?, rho2?);
    let w = p.working();
    let rows = (0..=kmax)
        .into_par_iter()
        .map(|k| {
            let cf = ClosedForm::new(z, k)?;
            let s = s_k_closed(z, k, p)?;
            let i = k as usize;
            let e1 = (&rho1[i] - HPReal::from_rational(&cf.r1, w)).abs();
            let e2 = (&rho2[i] - HPReal::from_rational(&cf.r2, w)).abs();
            let eg = (&g[i] - &s).abs();
            Ok(row(vec![
                ("k", k.into()),
                ("r1", rational(&cf.r1)),
                ("rho1", real(&rho1[i], p)),
                ("rho1_error", short(&e1)),
                ("r2", rational(&cf.r2)),
                ("rho2", real(&rho2[i], p)),
                ("rho2_error", short(&e2)),
                ("s_k", real(&s, p)),
                ("g", real(&g[i], p)),
                ("g_error", short(&eg)),
            ]))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = Report::new("genfunc", Some(z), p);
    rep.rows = rows;
    Ok(rep)
}

fn verify(suite: &str, p: Precision) -> Result<Report> {
    let suites = Suite::parse_list(suite)?;
    let checks: Vec<_> = suites.par_iter().map(|&s| run_suite(s, p)).collect::<Vec<_>>().concat();
    let mut rep = Report::new("verify", None, p);
    let passed = checks.iter().filter(|c| c.passed).count();
    rep.summary = Some(row(vec![
        ("suites", suites.iter().map(|s| Value::from(s.name())).collect()),
        ("checks", checks.len().into()),
        ("passed", passed.into()),
        ("failed", (checks.len() - passed).into()),
    ]));
    rep.verdicts = checks
        .into_iter()
        .map(|c| {
            row(vec![
                ("suite", c.suite.name().into()),
                ("name", c.name.into()),
                ("measured", c.measured.into()),
                ("tolerance", c.tolerance.into()),
                ("passed", c.passed.into()),
                ("expected_failure", c.expected_failure.into()),
            ])
        })
        .collect();
    Ok(rep)
}
