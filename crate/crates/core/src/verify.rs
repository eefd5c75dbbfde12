//! Named verification suites. Every check carries what was measured, the
//! tolerance it was held to, and the verdict.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::asymptotics::{asym_ratio, dyson_rate_fit, r2_asym_rows, ratio_limit, ratio_residual};
use crate::closed_form::{f21_contiguity, f21_special, s_k_closed, s_k_via_2f1, s_k_z1_borwein, ClosedForm};
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, rat, stirling2_row};
use crate::genfunc::{g_coeffs, rho1_coeffs, rho1_point, rho1_point_mixed, rho2_coeffs, series_exp_t};
use crate::hp::{irrational_factor, pi_prec, HPReal, Precision};
use crate::series::{
    appendix_l_closed, appendix_l_quadrature, hyp2f1_series, pfq_negk, power_sum_closed, power_sum_partial, s_k_series,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Stirling,
    Eq6,
    Appendix,
    Borwein,
    Genfunc,
    Negk,
    Asym,
    Paths,
}

impl Suite {
    pub const ALL: [Suite; 8] =
        [Suite::Stirling, Suite::Eq6, Suite::Appendix, Suite::Borwein, Suite::Genfunc, Suite::Negk, Suite::Asym, Suite::Paths];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Stirling => "stirling",
            Suite::Eq6 => "eq6",
            Suite::Appendix => "appendix",
            Suite::Borwein => "borwein",
            Suite::Genfunc => "genfunc",
            Suite::Negk => "negk",
            Suite::Asym => "asym",
            Suite::Paths => "paths",
        }
    }

    /// Parses one suite name, or `"all"` for every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse { what: "suite", input: s.to_string() })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: String,
    pub tolerance: String,
    pub passed: bool,
    /// The check asserts that a known-wrong form really does fail.
    pub expected_failure: bool,
}

struct Recorder {
    suite: Suite,
    checks: Vec<Check>,
}

fn sci(x: &HPReal) -> String {
    if x.is_zero() {
        "0".to_string()
    } else {
        x.to_sci_string(4)
    }
}

fn dec(e10: i32) -> HPReal {
    HPReal::parse(&format!("1e{e10}"), 128).expect("literal")
}

fn q(s: &str) -> BigRational {
    crate::exact::parse_rational(s).expect("literal")
}

impl Recorder {
    fn new(suite: Suite) -> Self {
        Recorder { suite, checks: Vec::new() }
    }

    fn push(&mut self, name: String, measured: String, tolerance: String, passed: bool, expected_failure: bool) {
        self.checks.push(Check { suite: self.suite, name, measured, tolerance, passed, expected_failure });
    }

    /// `|a - b| <= 10^e10`
    fn close(&mut self, name: String, a: &HPReal, b: &HPReal, e10: i32) {
        let d = (a - b).abs();
        let passed = d <= dec(e10);
        self.push(name, sci(&d), format!("1e{e10}"), passed, false);
    }

    fn exact(&mut self, name: String, ok: bool, detail: String) {
        self.push(name, detail, "exact".into(), ok, false);
    }

    fn error(&mut self, name: String, e: &Error) {
        self.push(name, format!("error: {e}"), "-".into(), false, false);
    }

    /// Runs a fallible block, recording an error as a failed check.
    fn guard(&mut self, name: &str, f: impl FnOnce(&mut Self) -> Result<()>) {
        if let Err(e) = f(self) {
            self.error(name.to_string(), &e);
        }
    }
}

pub fn run_suite(suite: Suite, p: Precision) -> Vec<Check> {
    let mut r = Recorder::new(suite);
    match suite {
        Suite::Stirling => stirling(&mut r),
        Suite::Eq6 => eq6(&mut r),
        Suite::Appendix => appendix(&mut r),
        Suite::Borwein => borwein(&mut r, p),
        Suite::Genfunc => genfunc(&mut r, p),
        Suite::Negk => negk(&mut r, p),
        Suite::Asym => asym(&mut r, p),
        Suite::Paths => paths(&mut r, p),
    }
    r.checks
}

pub fn run_suites(suites: &[Suite], p: Precision) -> Vec<Check> {
    suites.iter().flat_map(|&s| run_suite(s, p)).collect()
}

fn at_least(p: Precision, bits: u32) -> Precision {
    if p.bits() >= bits {
        p
    } else {
        p.widen(bits - p.bits())
    }
}

fn stirling(r: &mut Recorder) {
    let mut bad = 0;
    for k in 0..=20u32 {
        let row = stirling2_row(k);
        for j in 0..=k {
            let mut acc = BigInt::zero();
            for m in 0..=j {
                let t = binomial(j as u64, m as i64) * num_traits::pow(BigInt::from(m), k as usize);
                if (j - m) % 2 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            if acc != &row[j as usize] * factorial(j) {
                bad += 1;
            }
        }
    }
    r.exact("recurrence_vs_alternating_sum_k<=20".into(), bad == 0, format!("{bad} mismatches"));

    // Bell numbers from Aitken's array
    let mut bells = vec![BigInt::one()];
    let mut tri = vec![BigInt::one()];
    for _ in 0..15 {
        let mut next = vec![tri.last().unwrap().clone()];
        for v in &tri {
            let last = next.last().unwrap().clone();
            next.push(last + v);
        }
        bells.push(next[0].clone());
        tri = next;
    }
    let bad = (0..=15u32).filter(|&k| stirling2_row(k).iter().sum::<BigInt>() != bells[k as usize]).count();
    r.exact("row_sums_are_bell_numbers_k<=15".into(), bad == 0, format!("{bad} mismatches"));

    let anchors = [(4u32, 2u32, 7i64), (7, 7, 1), (3, 2, 3), (10, 5, 42525)];
    let ok = anchors.iter().all(|&(k, j, v)| stirling2_row(k)[j as usize] == BigInt::from(v));
    r.exact("anchor_values".into(), ok, "S(4,2)=7 S(7,7)=1 S(3,2)=3 S(10,5)=42525".into());
}

fn eq6(r: &mut Recorder) {
    for pe in 1..=8u32 {
        for x in ["1/5", "1/2", "3/4"] {
            let name = format!("power_sum p={pe} X={x}");
            r.guard(&name.clone(), |r| {
                let c = power_sum_closed(pe, &q(x))?;
                let (s, tail) = power_sum_partial(pe, &q(x), 600)?;
                let d = (&c - &s).abs();
                let ok = d <= tail;
                r.push(name, sci(&HPReal::from_rational(&d, 64)), format!("tail {}", sci(&HPReal::from_rational(&tail, 64))), ok, false);
                Ok(())
            });
        }
    }
    r.guard("power_sum anchors", |r| {
        let ok = power_sum_closed(1, &q("1/2"))? == rat(2, 1) && power_sum_closed(2, &q("1/2"))? == rat(6, 1);
        r.exact("power_sum anchors p=1,2 X=1/2".into(), ok, "2, 6".into());
        Ok(())
    });
}

fn appendix(r: &mut Recorder) {
    let p = Precision::new(128).expect("valid");
    for n in 1..=4u32 {
        for z in ["1", "2", "3"] {
            let name = format!("quadrature_vs_closed n={n} z={z}");
            r.guard(&name.clone(), |r| {
                let a = appendix_l_quadrature(&rat(n as i64, 1), &rat(n as i64 + 1, 1), &q(z), p)?;
                let b = appendix_l_closed(n, &q(z), p)?;
                r.close(name, &a, &b, -20);
                Ok(())
            });
        }
    }
    r.guard("n=1 z=2", |r| {
        let v = appendix_l_closed(1, &q("2"), p)?;
        let want = pi_prec(160).mul_pow2(-1) + HPReal::one(160);
        r.close("closed n=1 z=2 equals 1+pi/2".into(), &v, &want, -20);
        let v = appendix_l_quadrature(&rat(1, 1), &rat(2, 1), &q("2"), p)?;
        r.close("quadrature n=1 z=2 equals 1+pi/2".into(), &v, &want, -20);
        Ok(())
    });
}

fn borwein(r: &mut Recorder, p: Precision) {
    for k in 1..=10u32 {
        let name = format!("borwein_vs_closed z=1 k={k}");
        r.guard(&name.clone(), |r| {
            let a = s_k_z1_borwein(k, p)?;
            let b = s_k_closed(&q("1"), k, p)?;
            r.close(name, &a, &b, -40);
            Ok(())
        });
    }
}

fn genfunc(r: &mut Recorder, p: Precision) {
    for z in ["1", "2"] {
        r.guard(&format!("rho z={z}"), |r| {
            let rho1 = rho1_coeffs(&q(z), 10, p)?;
            let rho2 = rho2_coeffs(&q(z), 10, p)?;
            let g = g_coeffs(&q(z), 10, p)?;
            for k in 0..=10u32 {
                let cf = ClosedForm::new(&q(z), k)?;
                r.close(format!("rho1 coefficient z={z} k={k}"), &rho1[k as usize], &HPReal::from_rational(&cf.r1, p.bits()), -30);
                r.close(format!("rho2 coefficient z={z} k={k}"), &rho2[k as usize], &HPReal::from_rational(&cf.r2, p.bits()), -30);
                let s = s_k_series(&q(z), k as i64, p, &dec(-45))?;
                r.close(format!("G coefficient vs series z={z} k={k}"), &g[k as usize], &s.value, -30);
            }
            Ok(())
        });
    }
    for z in ["1", "2", "3"] {
        r.guard(&format!("decomposition z={z}"), |r| {
            let g = g_coeffs(&q(z), 10, p)?;
            let a = rho1_coeffs(&q(z), 10, p)?;
            let b = rho2_coeffs(&q(z), 10, p)?;
            let f = irrational_factor(&q(z), p)?;
            let worst = (0..=10).map(|k| (&g[k] - (&a[k] + &b[k] * &f)).abs() / g[k].abs()).fold(HPReal::zero(p.bits()), |m, d| if d > m { d } else { m });
            let ok = worst <= dec(-30);
            r.push(format!("G = rho1 + rho2 * factor z={z} k<=10 (relative)"), sci(&worst), "1e-30".into(), ok, false);
            Ok(())
        });
    }
    r.guard("mixed form", |r| {
        let a = rho1_point(&q("2"), &q("1/10"), p)?;
        let b = rho1_point_mixed(&q("2"), &q("1/10"), p)?;
        r.close("rho1 acos/asin form equals simplified form at z=2 t=1/10".into(), &a, &b, -30);
        Ok(())
    });
    r.guard("sqrt squared", |r| {
        let a = series_exp_t(&rat(1, 1), 13, p).scale_rational(&rat(-2, 1)).add_constant(&rat(4, 1));
        let s = a.sqrt()?;
        let b = s.mul(&s);
        let worst = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).abs()).fold(HPReal::zero(p.bits()), |m, d| if d > m { d } else { m });
        let ok = worst <= dec(-40);
        r.push("series sqrt squared gives back 4-2e^t to order 12".into(), sci(&worst), "1e-40".into(), ok, false);
        Ok(())
    });
}

fn negk(r: &mut Recorder, p: Precision) {
    r.guard("pi^2/18", |r| {
        let s = s_k_series(&q("1"), -2, p, &dec(-30))?;
        let want = pi_prec(p.working()).square().div_bigint(&BigInt::from(18));
        r.close("S_-2(1) equals pi^2/18".into(), &s.value, &want, -25);
        Ok(())
    });
    for k in 1..=4u32 {
        for z in ["1/2", "1", "2", "3"] {
            let name = format!("2 S_-{k}({z}) equals z pFq");
            r.guard(&name.clone(), |r| {
                let s = s_k_series(&q(z), -(k as i64), p, &dec(-35))?;
                let h = pfq_negk(k, &q(z), p)?;
                r.close(name, &s.value.mul_pow2(1), &h.mul_rational(&q(z)), -25);
                Ok(())
            });
        }
    }
    r.guard("without z", |r| {
        // the identity without the factor z is off by exactly pi/2 here
        let s = s_k_series(&q("2"), -1, p, &dec(-35))?;
        let h = pfq_negk(1, &q("2"), p)?;
        let gap = (s.value.mul_pow2(1) - &h).abs();
        let half_pi = pi_prec(p.working()).mul_pow2(-1);
        let d = (&gap - &half_pi).abs();
        let ok = d <= dec(-20);
        r.push("2 S_-1(2) - pFq (no factor z) misses by pi/2".into(), sci(&gap), "pi/2 +- 1e-20".into(), ok, true);
        Ok(())
    });
}

fn asym(r: &mut Recorder, p: Precision) {
    // exact R2 against its estimate
    for z in ["1", "2", "3"] {
        r.guard(&format!("r2 estimate z={z}"), |r| {
            let ks: Vec<u32> = (30..=40).collect();
            let rows = r2_asym_rows(&q(z), &ks, p)?;
            let dev: Vec<HPReal> = rows.iter().map(|row| (&row.ratio - HPReal::one(p.bits())).abs()).collect();
            let last = dev.last().unwrap();
            let ok = *last <= HPReal::from_rational(&rat(1, 20), 64);
            r.push(format!("|r2/r2_asym - 1| at k=40 z={z}"), last.to_decimal_string(6), "0.05".into(), ok, false);
            let trend = (5..dev.len()).all(|i| dev[i] < *dev[i - 5..i].iter().fold(&dev[i - 5], |m, d| if d > m { d } else { m }));
            r.push(
                format!("|r2/r2_asym - 1| below max of previous five, k=35..40 z={z}"),
                format!("{} -> {}", dev[0].to_decimal_string(4), last.to_decimal_string(4)),
                "nonincreasing".into(),
                trend,
                false,
            );
            Ok(())
        });
    }
    for z in ["1/2", "1", "2", "3"] {
        r.guard(&format!("asym ratio z={z}"), |r| {
            let lim = ratio_limit(&q(z), p)?.limit;
            let a = asym_ratio(&q(z), 5, p)?;
            let b = asym_ratio(&q(z), 40, p)?;
            r.close(format!("r1_asym/r2_asym equals limit z={z} k=5"), &a, &lim, -20);
            r.close(format!("r1_asym/r2_asym equals limit z={z} k=40"), &b, &lim, -20);
            Ok(())
        });
    }
    r.guard("limit", |r| {
        let rl = ratio_limit(&q("2"), p)?;
        r.close("limit rhs vanishes at z=2".into(), &rl.rhs, &HPReal::zero(p.bits()), -20);
        let mut vanishing = Vec::new();
        for z in ["1/2", "1", "3/2", "2", "5/2", "3"] {
            if ratio_limit(&q(z), p)?.rhs.abs() < dec(-10) {
                vanishing.push(z);
            }
        }
        r.push("limit rhs vanishes only at z=2 on the grid".into(), format!("{vanishing:?}"), "[\"2\"]".into(), vanishing == ["2"], false);
        let a = ratio_residual(&q("1"), 5, p)?;
        let b = ratio_residual(&q("1"), 25, p)?;
        let shrink = &a / &b;
        r.push("z=1 residual shrink k=5 -> k=25".into(), sci(&shrink), ">= 1e3".into(), shrink >= dec(3), false);
        Ok(())
    });
    r.guard("rate", |r| {
        let p512 = at_least(p, 512);
        let pi4 = pi_prec(p512.working()).mul_pow2(-2);
        let a = ratio_residual(&q("2"), 1, p512)?;
        r.close("residual k=1 equals |3/4 - pi/4|".into(), &a, &(&pi4 - HPReal::from_rational(&rat(3, 4), p512.working())).abs(), -20);
        let b = ratio_residual(&q("2"), 2, p512)?;
        r.close("residual k=2 equals |11/14 - pi/4|".into(), &b, &(HPReal::from_rational(&rat(11, 14), p512.working()) - &pi4).abs(), -20);
        let rep = dyson_rate_fit(&q("2"), 5, 35, p512)?;
        let f = rep.fitted_rate.to_f64();
        let t = rep.target_rate.to_f64();
        let rel = (f / t - 1.0).abs();
        r.push(
            "envelope-fitted decay rate within 10% of Q at z=2, k=5..35".into(),
            format!("{f:.4} vs {t:.4}"),
            "10%".into(),
            rel <= 0.10,
            false,
        );
        Ok(())
    });
}

fn paths(r: &mut Recorder, p: Precision) {
    for z in ["1/2", "1", "2", "3", "7/2"] {
        for k in 0..=12u32 {
            r.guard(&format!("paths z={z} k={k}"), |r| {
                let s = s_k_series(&q(z), k as i64, p, &dec(-45))?;
                let c = s_k_closed(&q(z), k, p)?;
                let h = s_k_via_2f1(&q(z), k, p)?;
                r.close(format!("closed vs series z={z} k={k}"), &c, &s.value, -40);
                r.close(format!("2F1 sum vs series z={z} k={k}"), &h, &s.value, -38);
                Ok(())
            });
        }
    }
    for n in 1..=8u32 {
        for x in ["1/3", "1", "3"] {
            r.guard(&format!("f21 n={n} X={x}"), |r| {
                let a = f21_special(n, &q(x), p)?;
                let b = f21_contiguity(n, &q(x), p)?;
                r.close(format!("f21 special vs contiguity n={n} X={x}"), &a, &b, -40);
                if q(x) <= BigRational::one() {
                    let d = hyp2f1_series(&rat(-1, 2), &rat(n as i64, 1), &rat(2 * n as i64 + 1, 2), &-q(x), p)?;
                    r.close(format!("f21 special vs direct series n={n} X={x}"), &a, &d, -40);
                }
                Ok(())
            });
        }
    }
    r.guard("anchors", |r| {
        let want = [(0, 1, 2), (1, 3, 4), (2, 11, 14)];
        for (k, a, b) in want {
            let cf = ClosedForm::new(&q("2"), k)?;
            r.exact(format!("R1,R2 at z=2 k={k}"), cf.r1 == rat(a, 1) && cf.r2 == rat(b, 1), format!("({}, {})", cf.r1, cf.r2));
        }
        let cf = ClosedForm::new(&q("1"), 1)?;
        r.exact("R1,R2 at z=1 k=1".into(), cf.r1 == rat(2, 3) && cf.r2 == rat(4, 3), format!("({}, {})", cf.r1, cf.r2));
        let bad = (0..=30).filter(|&k| ClosedForm::new(&q("2"), k).map(|c| !(c.r1.is_integer() && c.r2.is_integer())).unwrap_or(true)).count();
        r.exact("R1,R2 integral at z=2 for k<=30".into(), bad == 0, format!("{bad} non-integral"));
        Ok(())
    });
}
