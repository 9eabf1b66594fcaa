//! Batch front end: counting runs, convergence tables, identity suites and
//! saddle-point experiments with machine-readable output.
//!
//! High-precision values are serialized as decimal strings with an explicit
//! digit count so runs reproduce bit-identically across platforms.

use crate::asym::{asym_fixed, asym_free, EndpointMode};
use crate::chars::{
    branching_sum_check, det_identity_check, qhyp_sum_check, specialized_eval, BranchingCheck,
    DetIdentity, QhypCheck, SpecEval,
};
use crate::error::{Error, Result};
use crate::exact::{count_exact_free_total, count_exact_with, PrecisionPolicy};
use crate::geometry::{parse_half, parity_feasible, Family, Point, RegionSpec, StepSet, WalkProblem};
use crate::mp::{bits_for_digits, unit_root, Real};
use crate::oracle::count_dp_capped;
use crate::saddle::{approx_coeff, exact_coeff, solve_saddle, SaddleProblem};
use num_bigint::BigInt;
use serde::Serialize;
use std::io::Write;
use std::time::Instant;

/// Output format of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// A fully validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandConfig,
    pub precision_digits: u32,
    pub format: OutputFormat,
    pub out: Option<std::path::PathBuf>,
}

#[derive(Clone, Debug)]
pub enum CommandConfig {
    Count {
        family: Family,
        steps: StepSet,
        n: usize,
        m2: i64,
        start: Point,
        end: Option<Point>,
        ks: Vec<u64>,
        dp_budget: usize,
    },
    Converge {
        family: Family,
        steps: StepSet,
        n: usize,
        m2: i64,
        start: Point,
        end: Option<Point>,
        mode: EndpointMode,
        ks: Vec<u64>,
    },
    Identities {
        suite: String,
        seed: u64,
    },
    Saddle {
        m: i64,
        rs: Vec<i64>,
        d2: i64,
        ks: Vec<u64>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub all_ok: bool,
    pub max_ratio_error: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report<R: Serialize> {
    pub config: serde_json::Value,
    pub rows: Vec<R>,
    pub summary: Summary,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountRow {
    pub k: u64,
    pub dp_count: Option<String>,
    pub exact_count: String,
    pub agreement: bool,
    pub dp_micros: Option<u64>,
    pub exact_micros: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergeRow {
    pub k: u64,
    pub exact: String,
    pub estimate: String,
    pub ratio: String,
    pub case_label: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityRow {
    pub name: String,
    pub params: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SaddleRow {
    pub k: u64,
    pub exact: String,
    pub approx: String,
    pub ratio: String,
    pub subexponential: bool,
}

/// Serialize either the JSON report or a CSV of the row fields.
pub fn render<R: Serialize>(report: &Report<R>, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => {
            serde_json::to_string_pretty(report).map_err(|e| Error::invalid(e.to_string()))
        }
        OutputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            for row in &report.rows {
                wtr.serialize(row).map_err(|e| Error::invalid(e.to_string()))?;
            }
            let bytes = wtr.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
        }
    }
}

fn emit(text: &str, out: &Option<std::path::PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            println!();
        }
    }
    Ok(())
}

pub fn run_count(config: &RunConfig) -> Result<(Report<CountRow>, i32)> {
    let CommandConfig::Count { family, steps, n, m2, start, end, ks, dp_budget } =
        &config.command
    else {
        return Err(Error::invalid("not a count config"));
    };
    let region = RegionSpec::new(*family, *n, *m2)?;
    let end = end
        .clone()
        .ok_or_else(|| Error::invalid("count requires an end point"))?;
    let policy = PrecisionPolicy {
        start_digits: config.precision_digits.max(32),
        ..PrecisionPolicy::default()
    };
    let mut rows = Vec::new();
    let mut all_ok = true;
    for &k in ks {
        let problem = WalkProblem::new(region, *steps, start.clone(), Some(end.clone()), k)?;
        let t0 = Instant::now();
        let exact = count_exact_with(&problem, &policy)?;
        let exact_micros = t0.elapsed().as_micros() as u64;
        let (dp_count, dp_micros) = if *dp_budget > 0 {
            let t1 = Instant::now();
            match count_dp_capped(&problem, *dp_budget) {
                Ok(v) => (Some(v), Some(t1.elapsed().as_micros() as u64)),
                Err(Error::ResourceLimit(_)) => (None, None),
                Err(e) => return Err(e),
            }
        } else {
            (None, None)
        };
        let agreement = dp_count.as_ref().map(|d| *d == exact).unwrap_or(true);
        all_ok &= agreement;
        rows.push(CountRow {
            k,
            dp_count: dp_count.map(|v| v.to_string()),
            exact_count: exact.to_string(),
            agreement,
            dp_micros,
            exact_micros,
        });
    }
    let report = Report {
        config: config_json(config),
        rows,
        summary: Summary { all_ok, max_ratio_error: None },
    };
    Ok((report, if all_ok { 0 } else { 1 }))
}

pub fn run_converge(config: &RunConfig) -> Result<(Report<ConvergeRow>, i32)> {
    let CommandConfig::Converge { family, steps, n, m2, start, end, mode, ks } = &config.command
    else {
        return Err(Error::invalid("not a converge config"));
    };
    match mode {
        EndpointMode::Fixed if end.is_none() => {
            return Err(Error::invalid("fixed-endpoint convergence requires an end point"))
        }
        EndpointMode::Free if end.is_some() => {
            return Err(Error::invalid("free-endpoint convergence forbids an end point"))
        }
        _ => {}
    }
    let region = RegionSpec::new(*family, *n, *m2)?;
    let digits = config.precision_digits.max(64);
    let max_k = ks.iter().max().copied().unwrap_or(0) as u32;
    let bits = bits_for_digits(digits + max_k);
    let policy = PrecisionPolicy::direct();
    let mut rows = Vec::new();
    let mut all_ok = true;
    let mut max_err: Option<f64> = None;
    for &k in ks {
        let (exact, est) = if *mode == EndpointMode::Free {
            let exact = count_exact_free_total(&region, *steps, start, k, &policy)?;
            let est = asym_free(&region, *steps, start, k, bits)?;
            (exact, est)
        } else {
            let end = end
                .clone()
                .ok_or_else(|| Error::invalid("converge without --free requires an end point"))?;
            let problem = WalkProblem::new(region, *steps, start.clone(), Some(end), k)?;
            let exact = if parity_feasible(&problem) {
                count_exact_with(&problem, &policy)?
            } else {
                num_traits::Zero::zero()
            };
            let est = asym_fixed(&problem, bits)?;
            (exact, est)
        };
        if est.case_label == "parity-zero" {
            let ok = num_traits::Zero::is_zero(&exact);
            all_ok &= ok;
            rows.push(ConvergeRow {
                k,
                exact: exact.to_string(),
                estimate: "0".to_string(),
                ratio: String::new(),
                case_label: est.case_label,
            });
            continue;
        }
        let exact_real = Real::from_bigint(&BigInt::from(exact.clone()), bits);
        let ratio = exact_real.div(&est.value);
        let err = (ratio.to_f64() - 1.0).abs();
        max_err = Some(max_err.map_or(err, |m| m.max(err)));
        all_ok &= err.is_finite();
        rows.push(ConvergeRow {
            k,
            exact: exact.to_string(),
            estimate: est.value.to_decimal_string(digits.min(60)),
            ratio: format!("{:.12}", ratio.to_f64()),
            case_label: est.case_label,
        });
    }
    let report = Report {
        config: config_json(config),
        rows,
        summary: Summary { all_ok, max_ratio_error: max_err },
    };
    Ok((report, if all_ok { 0 } else { 1 }))
}

pub fn run_identities(config: &RunConfig) -> Result<(Report<IdentityRow>, i32)> {
    let CommandConfig::Identities { suite, seed } = &config.command else {
        return Err(Error::invalid("not an identities config"));
    };
    let digits = config.precision_digits.max(50);
    let mut rows = Vec::new();
    let mut push = |name: &str, params: String, ok: bool| {
        rows.push(IdentityRow { name: name.to_string(), params, ok, detail: String::new() });
    };
    let run_b = suite == "all" || suite == "b";
    let run_c = suite == "all" || suite == "c";
    let run_branching = suite == "all" || suite == "branching";
    if run_b {
        let bits = bits_for_digits(digits.max(60));
        for n in 1..=4usize {
            for rep in 0..5u64 {
                // deterministic generic points on the unit circle
                let ys: Vec<crate::mp::Complex> = (0..n)
                    .map(|j| {
                        let idx = (seed + rep * 17 + j as u64 * 13) % 97 + 1;
                        unit_root(idx as i64, 101, bits)
                    })
                    .collect();
                for which in [
                    DetIdentity::Ortho1,
                    DetIdentity::Ortho2,
                    DetIdentity::Ortho3,
                    DetIdentity::Sympl,
                ] {
                    let ok = det_identity_check(which, &ys)?;
                    push(
                        &format!("det-{which:?}").to_lowercase(),
                        format!("n={n} rep={rep}"),
                        ok,
                    );
                }
            }
        }
    }
    if run_c {
        for n in 1..=3usize {
            for m in (n as i64)..=6 {
                let out = specialized_eval(&SpecEval::SoOddRectangle { n, m }, digits)?;
                push("so-odd-rectangle", format!("n={n} m={m}"), out.matched);
                let out = specialized_eval(&SpecEval::SoOddRectangleSigned { n, m }, digits)?;
                push("so-odd-rectangle-signed", format!("n={n} m={m}"), out.matched);
            }
            for m in (n as i64 + 1)..=6 {
                let out = specialized_eval(&SpecEval::SchurRectangleAtRoot { n, m }, digits)?;
                push("schur-rectangle-at-root", format!("n={n} m={m}"), out.matched);
            }
            for c in 1..=3 {
                for p in 0..=n {
                    let out = specialized_eval(&SpecEval::SchurNearRectangle { n, c, p }, digits)?;
                    push("schur-near-rectangle", format!("n={n} c={c} p={p}"), out.matched);
                }
                let out = specialized_eval(&SpecEval::SchurRectangleSigned { n, c }, digits)?;
                push("schur-rectangle-signed", format!("n={n} c={c}"), out.matched);
            }
            for c2 in 0..=4 {
                let out = specialized_eval(&SpecEval::SpinSum { n, c2 }, digits)?;
                push("spin-sum", format!("n={n} 2c={c2}"), out.matched);
                let out = specialized_eval(&SpecEval::SpinSumSigned { n, c2 }, digits)?;
                push("spin-sum-signed", format!("n={n} 2c={c2}"), out.matched);
            }
        }
        for nn in 0..=5u32 {
            let b = num_rational::BigRational::new(BigInt::from(2 + (*seed % 5) as i64), BigInt::from(1));
            let q = num_rational::BigRational::new(BigInt::from(1), BigInt::from(3));
            let ok = qhyp_sum_check(&QhypCheck::Terminating2Phi1 { nn, b, q })?;
            push("terminating-2phi1", format!("N={nn}"), ok);
        }
        let q = num_rational::BigRational::new(BigInt::from(1), BigInt::from(4));
        let sqrt_a = &q * &q * &q;
        let b = num_rational::BigRational::new(BigInt::from(1), BigInt::from(256)).recip();
        let ok = qhyp_sum_check(&QhypCheck::JacksonLimit {
            q,
            sqrt_a,
            b: b.recip(),
            digits: digits.max(50),
        })?;
        push("jackson-limit", "q=1/4 A=q^6 B=q^-4".to_string(), ok);
    }
    if run_branching {
        for n in 1..=2usize {
            for p in 0..=3i64 {
                let ok = branching_sum_check(&BranchingCheck::SchurToSoOdd { n, p })?;
                push("schur-to-so-odd", format!("n={n} p={p}"), ok);
            }
            for c in 0..=2i64 {
                for r in 1..=n {
                    let ok = branching_sum_check(&BranchingCheck::SpToSchur { n, c, r })?;
                    push("sp-to-schur", format!("n={n} c={c} r={r}"), ok);
                }
            }
            for (a2, b2) in [(2i64, 2i64), (3, 1), (2, 0)] {
                let ok = branching_sum_check(&BranchingCheck::SoEvenInterval { n, a2, b2 })?;
                push("so-even-interval", format!("n={n} 2a={a2} 2b={b2}"), ok);
            }
        }
    }
    let all_ok = rows.iter().all(|r| r.ok);
    let report = Report {
        config: config_json(config),
        rows,
        summary: Summary { all_ok, max_ratio_error: None },
    };
    Ok((report, if all_ok { 0 } else { 1 }))
}

pub fn run_saddle(config: &RunConfig) -> Result<(Report<SaddleRow>, i32)> {
    let CommandConfig::Saddle { m, rs, d2, ks } = &config.command else {
        return Err(Error::invalid("not a saddle config"));
    };
    let digits = config.precision_digits.max(64);
    solve_saddle(*m, rs)?;
    let mut rows = Vec::new();
    let mut all_ok = true;
    let mut max_err: Option<f64> = None;
    for &k in ks {
        let problem = SaddleProblem::new(*m, rs.clone(), *d2, k)?;
        let bits = bits_for_digits(digits + k as u32);
        let est = approx_coeff(&problem, bits)?;
        let exact = exact_coeff(&problem)?;
        let exact_abs = exact.abs();
        if est.subexponential {
            rows.push(SaddleRow {
                k,
                exact: exact.re.to_decimal_string(12),
                approx: "0".to_string(),
                ratio: String::new(),
                subexponential: true,
            });
            continue;
        }
        let ratio = exact_abs.with_bits(bits).div(&est.modulus());
        let err = (ratio.to_f64() - 1.0).abs();
        max_err = Some(max_err.map_or(err, |e| e.max(err)));
        all_ok &= err.is_finite();
        rows.push(SaddleRow {
            k,
            exact: exact.re.to_decimal_string(12),
            approx: est.value.to_decimal_string(12),
            ratio: format!("{:.9}", ratio.to_f64()),
            subexponential: false,
        });
    }
    let report = Report {
        config: config_json(config),
        rows,
        summary: Summary { all_ok, max_ratio_error: max_err },
    };
    Ok((report, if all_ok { 0 } else { 1 }))
}

fn config_json(config: &RunConfig) -> serde_json::Value {
    let command = match &config.command {
        CommandConfig::Count { family, steps, n, m2, start, end, ks, dp_budget } => {
            serde_json::json!({
                "command": "count",
                "family": family.as_str(),
                "steps": steps.as_str(),
                "n": n,
                "m": half_str(*m2),
                "start": start.display(),
                "end": end.as_ref().map(|e| e.display()),
                "k": ks,
                "dp_budget": dp_budget,
            })
        }
        CommandConfig::Converge { family, steps, n, m2, start, end, mode, ks } => {
            serde_json::json!({
                "command": "converge",
                "family": family.as_str(),
                "steps": steps.as_str(),
                "n": n,
                "m": half_str(*m2),
                "start": start.display(),
                "end": end.as_ref().map(|e| e.display()),
                "free": *mode == EndpointMode::Free,
                "k": ks,
            })
        }
        CommandConfig::Identities { suite, seed } => {
            serde_json::json!({ "command": "identities", "suite": suite, "seed": seed })
        }
        CommandConfig::Saddle { m, rs, d2, ks } => {
            serde_json::json!({
                "command": "saddle",
                "m": m,
                "rs": rs,
                "d": half_str(*d2),
                "k": ks,
            })
        }
    };
    serde_json::json!({
        "run": command,
        "precision_digits": config.precision_digits,
        "format": match config.format { OutputFormat::Json => "json", OutputFormat::Csv => "csv" },
    })
}

fn half_str(v2: i64) -> String {
    if v2 % 2 == 0 {
        format!("{}", v2 / 2)
    } else {
        format!("{v2}/2")
    }
}

/// Parses `a..b` (inclusive), `a,b,c`, or a single value into a k list.
pub fn parse_k_spec(spec: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = spec.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| Error::invalid("bad k range"))?;
        let b: u64 = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|_| Error::invalid("bad k range"))?;
        if b < a {
            return Err(Error::invalid("k range must be increasing"));
        }
        Ok((a..=b).collect())
    } else if spec.contains(',') {
        spec.split(',')
            .map(|s| s.trim().parse().map_err(|_| Error::invalid("bad k list")))
            .collect()
    } else {
        Ok(vec![spec.trim().parse().map_err(|_| Error::invalid("bad k"))?])
    }
}

pub fn parse_family(s: &str) -> Result<Family> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "a" => Family::AlcoveA,
        "b" => Family::AlcoveB,
        "c" => Family::AlcoveC,
        "d" => Family::AlcoveD,
        "circle" | "m-circle" | "circ" => Family::CircleM,
        other => return Err(Error::invalid(format!("unknown family '{other}'"))),
    })
}

pub fn parse_steps(s: &str) -> Result<StepSet> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "pos" | "positive" | "positive-standard" => StepSet::PositiveStandard,
        "std" | "standard" => StepSet::Standard,
        "diag" | "diagonal" => StepSet::Diagonal,
        other => return Err(Error::invalid(format!("unknown step set '{other}'"))),
    })
}

pub fn parse_m(s: &str) -> Result<i64> {
    parse_half(s)
}

/// Dispatches a run and writes its output; returns the process exit code.
pub fn execute(config: &RunConfig) -> i32 {
    let rendered: Result<(String, i32)> = match &config.command {
        CommandConfig::Count { .. } => {
            run_count(config).and_then(|(r, code)| Ok((render(&r, config.format)?, code)))
        }
        CommandConfig::Converge { .. } => {
            run_converge(config).and_then(|(r, code)| Ok((render(&r, config.format)?, code)))
        }
        CommandConfig::Identities { .. } => {
            run_identities(config).and_then(|(r, code)| Ok((render(&r, config.format)?, code)))
        }
        CommandConfig::Saddle { .. } => {
            run_saddle(config).and_then(|(r, code)| Ok((render(&r, config.format)?, code)))
        }
    };
    match rendered {
        Ok((text, code)) => {
            if let Err(e) = emit(&text, &config.out) {
                eprintln!("error: {e}");
                return 3;
            }
            code
        }
        Err(e) => {
            // machine-readable error record on stderr
            let record = serde_json::json!({ "error": e.to_string() });
            eprintln!("{record}");
            e.exit_code()
        }
    }
}
