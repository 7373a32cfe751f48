//! `pinned-walkers`: verification suites, exact variance tables and Monte
//! Carlo runs for unit-distance walkers with a pinned endpoint gap.
//!
//! Exit codes: 0 success, 1 a mathematical identity failed, 2 usage or
//! resource error.

mod output;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use pinned_walkers::chain::exact_sigma2;
use pinned_walkers::lazy::{
    asymptotic_ratio_scan, lazy_pmf, llt_constant_scan, mixture_variance, rational_f64, sigma2_from_pmf, sigma2_star,
    u_k, HRule, LazyWalk,
};
use pinned_walkers::sim::{derive_seed, estimate_variance, simulate, InitialShape, Parallelism};
use pinned_walkers::sums::sigma2_closed_form;
use pinned_walkers::verify::{run_suite, Fault, VerifyOptions};
use pinned_walkers::{Error, Limits, WalkParams};

use output::{csv_err, csv_writer, io_err, open_sink, sig12, OutputError};

#[derive(Parser, Debug)]
#[command(name = "pinned-walkers", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exhaustively check every combinatorial and chain identity for small K.
    Verify {
        /// Largest K enumerated (all valid h are checked for each K).
        #[arg(long = "k-max-enum", alias = "K-max-enum", default_value_t = 8)]
        k_max_enum: usize,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Exact limit variance of the first walker.
    Variance {
        #[arg(long = "K", alias = "k")]
        k: i64,
        #[arg(long)]
        h: i64,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// Monte Carlo estimate of the variance, with an optional trajectory dump.
    Simulate(SimulateArgs),
    /// Per-K comparison of the pinned, bound and unconstrained variances (h = 0).
    Table {
        #[arg(long = "K-max", alias = "k-max", default_value_t = 400)]
        k_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// K·σ² along h = const or h = ⌊K^α⌋.
    Scan {
        #[arg(long = "K-max", alias = "k-max", default_value_t = 400)]
        k_max: usize,
        /// Fixed gap (repeatable).
        #[arg(long)]
        h: Vec<usize>,
        /// Exponent for h = ⌊K^α⌋ (repeatable). With neither --h nor --alpha
        /// the grid 0.25, 0.5, 0.7, 0.75, 0.8 is used.
        #[arg(long)]
        alpha: Vec<f64>,
        /// Write one CSV per rule into this directory instead of stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Empirical constant of the Gaussian local limit approximation.
    LltConstant {
        #[arg(long = "n-max", default_value_t = 200)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Variance of the Gaussian mixture given the law of the number of flat steps.
    Mixture {
        #[arg(long = "K", alias = "k")]
        k: usize,
        /// Comma-separated `l:p` pairs with rational p, e.g. `0:1/3,1:1/3,2:1/3`.
        #[arg(long)]
        pmf: String,
    },
}

#[derive(clap::Args, Debug)]
struct SimulateArgs {
    #[arg(long = "K", alias = "k")]
    k: i64,
    #[arg(long)]
    h: i64,
    /// Steps per replica.
    #[arg(long, default_value_t = 10_000)]
    n: u64,
    #[arg(long, default_value_t = 10_000)]
    replicas: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trajectory sampling stride.
    #[arg(long, default_value_t = 1)]
    stride: u64,
    /// Worker threads (default: available cores).
    #[arg(long)]
    parallelism: Option<usize>,
    #[arg(long, value_enum, default_value_t = InitialArg::DownUp)]
    initial: InitialArg,
    /// CSV dump of replica 0 (`step,z1,twice_area`).
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Variance report destination (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Method {
    Formula,
    Stationary,
    Llt,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InitialArg {
    DownUp,
    Uniform,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultArg {
    Zerosum,
}

enum Failure {
    Identity(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<OutputError> for Failure {
    fn from(e: OutputError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits::from_env();
    let result = match cli.command {
        Command::Verify { k_max_enum, inject_fault } => cmd_verify(k_max_enum, inject_fault, limits),
        Command::Variance { k, h, method } => cmd_variance(k, h, method, limits),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Table { k_max, out } => cmd_table(k_max, out.as_deref()),
        Command::Scan { k_max, h, alpha, out_dir } => cmd_scan(k_max, &h, &alpha, out_dir.as_deref()),
        Command::LltConstant { n_max, out } => cmd_llt_constant(n_max, out.as_deref()),
        Command::Mixture { k, pmf } => cmd_mixture(k, &pmf),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identity(msg)) => {
            eprintln!("identity violated: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_verify(k_max: usize, fault: Option<FaultArg>, limits: Limits) -> CmdResult {
    let opts = VerifyOptions {
        k_max,
        limits,
        fault: fault.map(|FaultArg::Zerosum| Fault::ZeroSumSign),
    };
    let report = run_suite(&opts)?;
    for o in &report.outcomes {
        println!("{o}");
    }
    if report.passed() {
        println!("all identities hold for K <= {k_max}");
        Ok(())
    } else {
        let failed: Vec<_> = report.outcomes.iter().filter(|o| !o.passed()).map(|o| o.name).collect();
        Err(Failure::Identity(failed.join(", ")))
    }
}

fn print_value(label: &str, v: &BigRational) {
    println!("{label:<11} {}/{} ≈ {}", v.numer(), v.denom(), sig12(rational_f64(v)));
}

fn cmd_variance(k: i64, h: i64, method: Method, limits: Limits) -> CmdResult {
    let params = WalkParams::new(k, h)?;
    let formula = || sigma2_closed_form(params);
    let llt = || sigma2_from_pmf(&lazy_pmf(params.k()), params.h() as i64);
    let value = match method {
        Method::Formula => {
            let v = formula();
            print_value("formula", &v);
            v
        }
        Method::Llt => {
            let v = llt();
            print_value("llt", &v);
            v
        }
        Method::Stationary => {
            let v = exact_sigma2(params, &limits)?.stationary;
            print_value("stationary", &v);
            v
        }
        Method::All => {
            let f = formula();
            let s = exact_sigma2(params, &limits)?.stationary;
            let l = llt();
            print_value("formula", &f);
            print_value("stationary", &s);
            print_value("llt", &l);
            if f != s || f != l {
                return Err(Failure::Identity(format!("{params}: the three variance methods disagree")));
            }
            f
        }
    };
    let scaled = &value * BigInt::from(params.k());
    println!("K*sigma2    {}", sig12(rational_f64(&scaled)));
    Ok(())
}

#[derive(Serialize)]
struct VarianceReport {
    #[serde(rename = "K")]
    k: usize,
    h: usize,
    n: u64,
    replicas: u64,
    seed: u64,
    estimate: f64,
    std_error: f64,
    exact_value_numerator: serde_json::Number,
    exact_value_denominator: serde_json::Number,
}

fn big_number(b: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&b.to_string()).expect("decimal integers are valid JSON numbers")
}

fn cmd_simulate(a: &SimulateArgs) -> CmdResult {
    let params = WalkParams::new(a.k, a.h)?;
    if a.replicas < 2 || a.n == 0 || a.stride == 0 {
        return Err(Failure::Usage("--n and --stride must be positive and --replicas at least 2".into()));
    }
    let initial = match a.initial {
        InitialArg::DownUp => InitialShape::DownThenUp,
        InitialArg::Uniform => InitialShape::Uniform,
    };
    let parallelism = a.parallelism.map(Parallelism::from_count).unwrap_or_else(Parallelism::available);

    if let Some(path) = &a.trajectory {
        let t = simulate(params, a.n, derive_seed(a.seed, 0), a.stride, initial)?;
        let mut w = csv_writer(Some(path))?;
        w.write_record(["step", "z1", "twice_area"]).map_err(csv_err(Some(path)))?;
        for s in &t.samples {
            w.write_record([s.step.to_string(), s.z1.to_string(), s.twice_area.to_string()])
                .map_err(csv_err(Some(path)))?;
        }
        w.flush().map_err(io_err(Some(path)))?;
    }

    let est = estimate_variance(params, a.n, a.replicas, a.seed, parallelism, initial)?;
    let exact = sigma2_closed_form(params);
    let exact_f = rational_f64(&exact);
    let report = VarianceReport {
        k: params.k(),
        h: params.h(),
        n: a.n,
        replicas: a.replicas,
        seed: a.seed,
        estimate: est.estimate,
        std_error: est.std_error,
        exact_value_numerator: big_number(exact.numer()),
        exact_value_denominator: big_number(exact.denom()),
    };
    let out = a.out.as_deref();
    match a.format {
        Format::Json => {
            let mut sink = open_sink(out)?;
            serde_json::to_writer_pretty(&mut sink, &report)
                .map_err(|e| OutputError { path: out.map(Path::to_path_buf), source: e.into() })?;
            writeln!(sink).and_then(|_| sink.flush()).map_err(io_err(out))?;
        }
        Format::Csv => {
            let mut w = csv_writer(out)?;
            w.write_record([
                "K",
                "h",
                "n",
                "replicas",
                "seed",
                "estimate",
                "std_error",
                "exact_value_numerator",
                "exact_value_denominator",
            ])
            .map_err(csv_err(out))?;
            w.write_record([
                report.k.to_string(),
                report.h.to_string(),
                report.n.to_string(),
                report.replicas.to_string(),
                report.seed.to_string(),
                sig12(report.estimate),
                sig12(report.std_error),
                exact.numer().to_string(),
                exact.denom().to_string(),
            ])
            .map_err(csv_err(out))?;
            w.flush().map_err(io_err(out))?;
        }
    }
    eprintln!(
        "{params}: estimate {} ± {}, exact {}/{} ≈ {}, z-score {:+.3}",
        sig12(est.estimate),
        sig12(est.std_error),
        exact.numer(),
        exact.denom(),
        sig12(exact_f),
        est.z_score(exact_f)
    );
    Ok(())
}

fn cmd_table(k_max: usize, out: Option<&Path>) -> CmdResult {
    let mut w = csv_writer(out)?;
    w.write_record([
        "K",
        "sigma2_num",
        "sigma2_den",
        "sigma2_float",
        "two_over_K",
        "two_over_K_plus_2",
        "u_K",
        "sigma2_star_num",
        "sigma2_star_den",
        "flagged",
    ])
    .map_err(csv_err(out))?;
    let mut flagged = 0usize;
    for pmf in LazyWalk::new().take(k_max + 1).skip(2).step_by(2) {
        let k = pmf.n();
        let sigma2 = sigma2_from_pmf(&pmf, 0);
        let star = sigma2_star(k);
        let bad = sigma2 <= star;
        flagged += bad as usize;
        w.write_record([
            k.to_string(),
            sigma2.numer().to_string(),
            sigma2.denom().to_string(),
            sig12(rational_f64(&sigma2)),
            sig12(2.0 / k as f64),
            sig12(2.0 / (k + 2) as f64),
            sig12(rational_f64(&u_k(&pmf))),
            star.numer().to_string(),
            star.denom().to_string(),
            bad.to_string(),
        ])
        .map_err(csv_err(out))?;
    }
    w.flush().map_err(io_err(out))?;
    eprintln!("{flagged} rows with sigma2_(K,0) <= 2/(K+2) for even K <= {k_max}");
    Ok(())
}

fn scan_rules(h: &[usize], alpha: &[f64]) -> Vec<(String, HRule)> {
    let mut rules: Vec<(String, HRule)> = h.iter().map(|&h| (format!("h_{h}"), HRule::Fixed(h))).collect();
    rules.extend(alpha.iter().map(|&a| (format!("alpha_{a}"), HRule::Power(a))));
    if rules.is_empty() {
        rules = [0.25, 0.5, 0.7, 0.75, 0.8]
            .into_iter()
            .map(|a| (format!("alpha_{a}"), HRule::Power(a)))
            .collect();
    }
    rules
}

fn cmd_scan(k_max: usize, h: &[usize], alpha: &[f64], out_dir: Option<&Path>) -> CmdResult {
    let rules = scan_rules(h, alpha);
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(io_err(Some(dir)))?;
    }
    let header = ["K", "h", "sigma2_num", "sigma2_den", "sigma2_float", "K_times_sigma2", "u_K"];
    let mut shared = match out_dir {
        None => {
            let mut w = csv_writer(None)?;
            w.write_record(header).map_err(csv_err(None))?;
            Some(w)
        }
        Some(_) => None,
    };
    for (name, rule) in rules {
        let rows = asymptotic_ratio_scan(rule, k_max)?;
        let path = out_dir.map(|d| d.join(format!("{name}.csv")));
        let mut own;
        let w = match &mut shared {
            Some(w) => w,
            None => {
                own = csv_writer(path.as_deref())?;
                own.write_record(header).map_err(csv_err(path.as_deref()))?;
                &mut own
            }
        };
        for r in rows {
            w.write_record([
                r.k.to_string(),
                r.h.to_string(),
                r.sigma2.numer().to_string(),
                r.sigma2.denom().to_string(),
                sig12(r.sigma2_f64),
                sig12(r.k_times_sigma2),
                r.u_k.map(sig12).unwrap_or_default(),
            ])
            .map_err(csv_err(path.as_deref()))?;
        }
        w.flush().map_err(io_err(path.as_deref()))?;
    }
    Ok(())
}

fn cmd_llt_constant(n_max: usize, out: Option<&Path>) -> CmdResult {
    if n_max == 0 {
        return Err(Failure::Usage("--n-max must be positive".into()));
    }
    let scan = llt_constant_scan(n_max);
    let mut w = csv_writer(out)?;
    w.write_record(["n", "c_n"]).map_err(csv_err(out))?;
    for (n, c) in &scan {
        w.write_record([n.to_string(), sig12(*c)]).map_err(csv_err(out))?;
    }
    w.flush().map_err(io_err(out))?;
    let max = scan.iter().map(|p| p.1).fold(0.0, f64::max);
    eprintln!("empirical constant max_n c_n = {}", sig12(max));
    Ok(())
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            (d != BigInt::from(0)).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(BigInt::from_str(s).ok()?)),
    }
}

fn cmd_mixture(k: usize, pmf: &str) -> CmdResult {
    let mut law = BTreeMap::new();
    for item in pmf.split(',').filter(|s| !s.trim().is_empty()) {
        let parsed = item
            .split_once(':')
            .and_then(|(l, p)| Some((l.trim().parse::<usize>().ok()?, parse_rational(p)?)));
        let Some((l, p)) = parsed else {
            return Err(Failure::Usage(format!("cannot parse pmf entry `{item}`")));
        };
        *law.entry(l).or_insert_with(|| BigRational::from_integer(0.into())) += p;
    }
    let v = mixture_variance(k, &law)?;
    print_value("mixture", &v);
    Ok(())
}
