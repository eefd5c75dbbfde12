//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::process::Command;

use apery_core::asymptotics::{asym_ratio, dyson_rate_fit, r2_asym_rows, ratio_limit, ratio_residual};
use apery_core::closed_form::{s_k_closed, s_k_via_2f1, s_k_z1_borwein, ClosedForm};
use apery_core::exact::parse_rational;
use apery_core::genfunc::{g_coeffs, rho1_coeffs, rho2_coeffs};
use apery_core::hp::pi_prec;
use apery_core::series::{
    appendix_l_closed, appendix_l_quadrature, pfq_negk, power_sum_closed, power_sum_partial, s_k_series,
};
use apery_core::{BigInt, BigRational, HPReal, Precision, Result};
use rayon::prelude::*;

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn tol(e10: i32) -> HPReal {
    HPReal::parse(&format!("1e{e10}"), 128).unwrap()
}

fn bits(b: u32) -> Precision {
    Precision::new(b).unwrap()
}

/// Tracks the worst `|a-b|` against a fixed tolerance.
struct Worst {
    tol: i32,
    worst: HPReal,
    at: String,
}

impl Worst {
    fn new(tol: i32) -> Self {
        Worst { tol, worst: HPReal::zero(64), at: String::new() }
    }

    fn see(&mut self, a: &HPReal, b: &HPReal, at: impl Into<String>) {
        let d = (a - b).abs();
        if d > self.worst || self.at.is_empty() {
            self.worst = d;
            self.at = at.into();
        }
    }

    fn ok(&self) -> bool {
        self.worst <= tol(self.tol)
    }

    fn show(&self) -> String {
        let w = if self.worst.is_zero() { "0".into() } else { self.worst.to_sci_string(3) };
        format!("max {w} at {} (tol 1e{})", self.at, self.tol)
    }
}

type Outcome = Result<(bool, String)>;

fn c1_paths() -> Outcome {
    let p = bits(256);
    let mut a = Worst::new(-40);
    let mut b = Worst::new(-38);
    for z in ["1/2", "1", "2", "3", "7/2"] {
        for k in 0..=12u32 {
            let s = s_k_series(&q(z), k as i64, p, &tol(-45))?.value;
            a.see(&s_k_closed(&q(z), k, p)?, &s, format!("z={z},k={k}"));
            b.see(&s_k_via_2f1(&q(z), k, p)?, &s, format!("z={z},k={k}"));
        }
    }
    Ok((a.ok() && b.ok(), format!("closed {}; 2F1 {}", a.show(), b.show())))
}

fn c2_anchors() -> Outcome {
    let mut ok = true;
    let mut seen = Vec::new();
    for (z, k, r1, r2) in [("2", 0, "1", "2"), ("2", 1, "3", "4"), ("2", 2, "11", "14"), ("1", 1, "2/3", "4/3")] {
        let cf = ClosedForm::new(&q(z), k)?;
        ok &= cf.r1 == q(r1) && cf.r2 == q(r2);
        seen.push(format!("z={z},k={k}:({},{})", cf.r1, cf.r2));
    }
    Ok((ok, seen.join(" ")))
}

fn c3_borwein() -> Outcome {
    let p = bits(256);
    let mut w = Worst::new(-40);
    for k in 1..=10 {
        w.see(&s_k_z1_borwein(k, p)?, &s_k_closed(&q("1"), k, p)?, format!("k={k}"));
    }
    Ok((w.ok(), w.show()))
}

fn c4_genfunc() -> Outcome {
    let p = bits(256);
    let mut rho = Worst::new(-30);
    let mut g = Worst::new(-30);
    for z in ["1", "2"] {
        let r1 = rho1_coeffs(&q(z), 10, p)?;
        let r2 = rho2_coeffs(&q(z), 10, p)?;
        let gc = g_coeffs(&q(z), 10, p)?;
        for k in 0..=10u32 {
            let cf = ClosedForm::new(&q(z), k)?;
            let i = k as usize;
            rho.see(&r1[i], &HPReal::from_rational(&cf.r1, 300), format!("rho1 z={z},k={k}"));
            rho.see(&r2[i], &HPReal::from_rational(&cf.r2, 300), format!("rho2 z={z},k={k}"));
            g.see(&gc[i], &s_k_series(&q(z), k as i64, p, &tol(-45))?.value, format!("z={z},k={k}"));
        }
    }
    Ok((rho.ok() && g.ok(), format!("rho {}; G {}", rho.show(), g.show())))
}

fn c5_appendix() -> Outcome {
    let p = bits(128);
    let mut w = Worst::new(-20);
    for n in 1..=4u32 {
        for z in ["1", "2", "3"] {
            let nn = BigRational::from_integer(n.into());
            let quad = appendix_l_quadrature(&nn, &(&nn + BigRational::from_integer(1.into())), &q(z), p)?;
            w.see(&quad, &appendix_l_closed(n, &q(z), p)?, format!("n={n},z={z}"));
        }
    }
    let mut anchor = Worst::new(-20);
    let want = HPReal::one(160) + pi_prec(160).mul_pow2(-1);
    anchor.see(&appendix_l_closed(1, &q("2"), p)?, &want, "n=1,z=2");
    Ok((w.ok() && anchor.ok(), format!("{}; 1+pi/2 {}", w.show(), anchor.show())))
}

fn c6_rate() -> Outcome {
    let p = bits(512);
    let rep = dyson_rate_fit(&q("2"), 5, 35, p)?;
    let (f, t) = (rep.fitted_rate.to_f64(), rep.target_rate.to_f64());
    let rel = (f / t - 1.0).abs();
    let pi4 = pi_prec(600).mul_pow2(-2);
    let mut w = Worst::new(-20);
    w.see(&ratio_residual(&q("2"), 1, p)?, &(&pi4 - HPReal::from_rational(&q("3/4"), 600)).abs(), "k=1");
    w.see(&ratio_residual(&q("2"), 2, p)?, &(HPReal::from_rational(&q("11/14"), 600) - &pi4).abs(), "k=2");
    Ok((rel <= 0.10 && w.ok(), format!("fitted {f:.4} vs Q {t:.4} ({:.2}% off, tol 10%); residuals {}", rel * 100.0, w.show())))
}

fn c7_limit() -> Outcome {
    let p = bits(256);
    let mut w = Worst::new(-20);
    w.see(&ratio_limit(&q("2"), p)?.rhs, &HPReal::zero(64), "z=2");
    let mut vanishing = Vec::new();
    for z in ["1/2", "1", "3/2", "2", "5/2", "3"] {
        if ratio_limit(&q(z), p)?.rhs.abs() < tol(-10) {
            vanishing.push(z);
        }
    }
    let shrink = ratio_residual(&q("1"), 5, p)? / ratio_residual(&q("1"), 25, p)?;
    let ok = w.ok() && vanishing == ["2"] && shrink >= tol(3);
    Ok((ok, format!("rhs(2) {}; vanishing on grid {vanishing:?}; z=1 shrink {}", w.show(), shrink.to_sci_string(3))))
}

fn c8_asymptotics() -> Outcome {
    let p = bits(256);
    let mut devs = Vec::new();
    let mut ok = true;
    for z in ["1", "2", "3"] {
        let row = &r2_asym_rows(&q(z), &[40], p)?[0];
        let dev = (&row.ratio - HPReal::one(64)).abs();
        ok &= dev <= HPReal::parse("0.05", 64)?;
        devs.push(format!("z={z}:{}", dev.to_decimal_string(4)));
    }
    let mut w = Worst::new(-20);
    for z in ["1", "2", "3"] {
        w.see(&asym_ratio(&q(z), 40, p)?, &ratio_limit(&q(z), p)?.limit, format!("z={z}"));
    }
    Ok((ok && w.ok(), format!("|r2/r2_asym-1| at k=40 {} (tol 0.05); asym ratio vs limit {}", devs.join(" "), w.show())))
}

fn c9_negk() -> Outcome {
    let p = bits(256);
    let mut a = Worst::new(-25);
    let want = pi_prec(300).square().div_bigint(&BigInt::from(18));
    a.see(&s_k_series(&q("1"), -2, p, &tol(-30))?.value, &want, "pi^2/18");
    let mut b = Worst::new(-25);
    for k in 1..=4u32 {
        for z in ["1/2", "1", "2", "3"] {
            let s = s_k_series(&q(z), -(k as i64), p, &tol(-35))?.value;
            b.see(&s.mul_pow2(1), &pfq_negk(k, &q(z), p)?.mul_rational(&q(z)), format!("k={k},z={z}"));
        }
    }
    // without the factor z the identity misses by pi/2 at z=2, k=1
    let s = s_k_series(&q("2"), -1, p, &tol(-35))?.value;
    let gap = (s.mul_pow2(1) - pfq_negk(1, &q("2"), p)?).abs();
    let mut c = Worst::new(-20);
    c.see(&gap, &pi_prec(300).mul_pow2(-1), "gap vs pi/2");
    Ok((a.ok() && b.ok() && c.ok(), format!("pi^2/18 {}; with z {}; without z {}", a.show(), b.show(), c.show())))
}

fn c10_power_sums() -> Outcome {
    let mut ok = true;
    let mut worst = 0.0f64;
    for pe in 1..=8u32 {
        for x in ["1/5", "1/2", "3/4"] {
            let c = power_sum_closed(pe, &q(x))?;
            let (s, tail) = power_sum_partial(pe, &q(x), 600)?;
            let d = if c > s { &c - &s } else { &s - &c };
            ok &= d <= tail;
            let frac = HPReal::from_rational(&d, 64).to_f64() / HPReal::from_rational(&tail, 64).to_f64();
            worst = worst.max(frac);
        }
    }
    Ok((ok, format!("24 cases, max |closed-partial|/tail = {worst:.6}")))
}

fn c11_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_apery");
    let commands: Vec<Vec<&str>> = vec![
        vec!["eval", "--z", "2", "--k", "1", "--bits", "256", "--method", "both", "--format", "json"],
        vec!["table", "--z", "2", "--kmax", "2"],
        vec!["table", "--z", "2", "--kmax", "2", "--format", "csv"],
        vec!["eval", "--z", "1", "--k", "-2"],
        vec!["limit", "--z", "1"],
        vec!["rate"],
        vec!["genfunc", "--z", "2", "--kmax", "5"],
        vec!["verify", "--suite", "all", "--bits", "256"],
    ];
    let runs: Vec<(String, bool)> = commands
        .par_iter()
        .map(|args| {
            let go = || Command::new(exe).args(args).env_remove("APERY_BITS").output().expect("run apery");
            let (a, b) = rayon::join(go, go);
            let same = a.stdout == b.stdout && a.status == b.status && !a.stdout.is_empty();
            (args.join(" "), same)
        })
        .collect();
    let bad: Vec<_> = runs.iter().filter(|r| !r.1).map(|r| r.0.clone()).collect();
    Ok((bad.is_empty(), format!("{} commands run twice, {} differed {bad:?}", runs.len(), bad.len())))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 path agreement", c1_paths),
        ("2 exact anchors", c2_anchors),
        ("3 Borwein-Girgensohn cross-check", c3_borwein),
        ("4 generating functions", c4_genfunc),
        ("5 appendix integral", c5_appendix),
        ("6 decay rate", c6_rate),
        ("7 ratio limit", c7_limit),
        ("8 asymptotic estimates", c8_asymptotics),
        ("9 negative indices", c9_negk),
        ("10 power-sum identity", c10_power_sums),
        ("11 CLI determinism", c11_determinism),
    ];
    let results: Vec<(bool, String)> = criteria
        .par_iter()
        .map(|(_, f)| f().unwrap_or_else(|e| (false, format!("error: {e}"))))
        .collect();
    let mut failed = 0;
    for ((name, _), (ok, detail)) in criteria.iter().zip(&results) {
        println!("{} criterion {name}: {detail}", if *ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
