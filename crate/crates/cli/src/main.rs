//! `adelic`: reproducible experiments on the divisibility statistics of
//! polynomial values. Reports go to stdout, diagnostics to stderr.

mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adelic_core::euclid::{has_common_factor_traced, CommonFactorOptions};
use adelic_core::limitlaw::{LimitSamples, DEFAULT_SIM_PMAX};
use adelic_core::padic::DEFAULT_CAP;
use adelic_core::{
    bezout_certificate, count_common_zeros, ekedahl_poonen_density, sample_statistic, simulate_gcd,
    simulate_nlcm, simulate_scaled_lcm_limit, ErrorKind, ExperimentConfig, MultiPoly,
    SimulationConfig, Statistic, DEFAULT_BUDGET,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use input::read_poly_file;
use report::{float_histogram, histogram, histogram_json, num, render, render_csv, Manifest};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(adelic_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) => match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Precondition => 3,
                ErrorKind::Budget => 4,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<adelic_core::Error> for CliError {
    fn from(e: adelic_core::Error) -> Self {
        CliError::Lib(e)
    }
}

#[derive(Parser)]
#[command(
    name = "adelic",
    version,
    about = "Divisibility statistics of polynomial values"
)]
struct Cli {
    /// Worker threads (default: all available cores). Results do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LimitStat {
    /// Limit of the gcd of the values.
    #[value(name = "G")]
    G,
    /// Limit of the normalized lcm.
    #[value(name = "L")]
    L,
    /// Limit of the lcm scaled by `n^(d_1 + .. + d_m)`.
    ScaledLcm,
}

impl LimitStat {
    fn name(self) -> &'static str {
        match self {
            LimitStat::G => "G",
            LimitStat::L => "L",
            LimitStat::ScaledLcm => "scaled-lcm",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FiniteStat {
    Gcd,
    Lcm,
    Nlcm,
    ScaledLcm,
}

impl From<FiniteStat> for Statistic {
    fn from(s: FiniteStat) -> Self {
        match s {
            FiniteStat::Gcd => Statistic::Gcd,
            FiniteStat::Lcm => Statistic::Lcm,
            FiniteStat::Nlcm => Statistic::Nlcm,
            FiniteStat::ScaledLcm => Statistic::ScaledLcm,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Euler-product density of points where all polynomials are coprime.
    Density {
        #[arg(long)]
        polys: PathBuf,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(2..))]
        pmax: u64,
    },
    /// Sample the limiting random variables through p-adic valuations.
    Simulate {
        #[arg(long, value_enum)]
        stat: LimitStat,
        #[arg(long)]
        polys: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SIM_PMAX, value_parser = clap::value_parser!(u64).range(2..))]
        pmax: u64,
        #[arg(long, default_value_t = DEFAULT_CAP, value_parser = clap::value_parser!(u32).range(1..))]
        cap: u32,
    },
    /// Monte Carlo of a statistic at uniform points of {1..n}^s.
    Empirical {
        #[arg(long, value_enum)]
        stat: FiniteStat,
        #[arg(long)]
        polys: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Decide whether the polynomials share a factor of positive degree.
    CheckCommonFactor {
        #[arg(long)]
        polys: PathBuf,
    },
    /// Integer Bezout identity for coprime univariate polynomials.
    Certificate {
        #[arg(long)]
        polys: PathBuf,
    },
    /// Count common zeros over F_p, once per `--p`.
    Count {
        #[arg(long)]
        polys: PathBuf,
        #[arg(long = "p", required = true)]
        p: Vec<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
        {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn budget() -> Result<u64, CliError> {
    match std::env::var("ADELIC_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "ADELIC_BUDGET must be a nonnegative integer, got `{v}`"
            ))
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn poly_strings(fs: &[MultiPoly]) -> Value {
    fs.iter().map(MultiPoly::to_canonical_string).collect()
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Density { polys, pmax } => density(cli.format, polys, *pmax),
        Command::Simulate {
            stat,
            polys,
            trials,
            seed,
            pmax,
            cap,
        } => simulate(cli.format, *stat, polys, *trials, *seed, *pmax, *cap),
        Command::Empirical {
            stat,
            polys,
            n,
            trials,
            seed,
        } => empirical(cli.format, *stat, polys, *n, *trials, *seed),
        Command::CheckCommonFactor { polys } => check(cli.format, polys),
        Command::Certificate { polys } => certificate(cli.format, polys),
        Command::Count { polys, p } => count(cli.format, polys, p),
    }
}

fn density(format: Format, path: &Path, pmax: u64) -> Result<String, CliError> {
    let input = read_poly_file(path)?;
    let budget = budget()?;
    let r = ekedahl_poonen_density(&input.polys, pmax, budget)?;
    let manifest = Manifest::new("density", &input)
        .flag("pmax", pmax)
        .flag("budget", budget);
    if format == Format::Csv {
        let rows: Vec<Vec<String>> = r
            .factors
            .iter()
            .map(|f| {
                vec![
                    f.p.to_string(),
                    f.s_p.to_string(),
                    report::round12(f.factor).to_string(),
                ]
            })
            .collect();
        return Ok(render_csv(&manifest, "p,s_p,factor", &rows));
    }
    let (lo, hi) = r.bracket();
    let factors: Vec<Value> = r
        .factors
        .iter()
        .map(|f| json!({ "p": f.p, "s_p": f.s_p, "factor": num(f.factor) }))
        .collect();
    let result = json!({
        "polys": poly_strings(&input.polys),
        "nvars": input.nvars,
        "P_max": r.pmax,
        "partial": num(r.partial),
        "tail_lo": num(r.tail_lo),
        "tail_hi": num(r.tail_hi),
        "bracket": [num(lo), num(hi)],
        "tail_constant": num(r.tail_constant),
        "safety_factor": num(r.safety_factor),
        "tail_label": "heuristic",
        "factors": factors,
    });
    Ok(render(&manifest, result))
}

fn simulate(
    format: Format,
    stat: LimitStat,
    path: &Path,
    trials: u64,
    seed: u64,
    pmax: u64,
    cap: u32,
) -> Result<String, CliError> {
    let input = read_poly_file(path)?;
    let budget = budget()?;
    let cfg = SimulationConfig {
        trials,
        pmax,
        cap,
        seed,
        budget,
    };
    let set = match stat {
        LimitStat::G => simulate_gcd(&input.polys, &cfg)?,
        LimitStat::L => simulate_nlcm(&input.polys, &cfg)?,
        LimitStat::ScaledLcm => simulate_scaled_lcm_limit(&input.polys, &cfg)?,
    };
    let hist = match &set.samples {
        LimitSamples::ScaledLcm(v) => float_histogram(v),
        _ => histogram(&set.to_empirical()?),
    };
    let mut manifest = Manifest::new("simulate", &input)
        .flag("stat", stat.name())
        .flag("trials", trials)
        .flag("seed", seed)
        .flag("pmax", pmax)
        .flag("cap", cap)
        .flag("budget", budget);
    manifest.seed = Some(seed);
    if format == Format::Csv {
        return Ok(render_csv(&manifest, "value,count", &csv_rows(&hist)));
    }
    // probability that no prime above P_max contributes, under the fitted tail
    let (tail, tail_bracket) = match set.tail {
        Some(t) => (
            json!({ "constant": num(t.constant), "mass_bound": num(t.mass_bound) }),
            json!([num((1.0 - t.mass_bound).max(0.0)), num(1.0)]),
        ),
        None => (Value::Null, Value::Null),
    };
    let result = json!({
        "statistic": stat.name(),
        "polys": poly_strings(&input.polys),
        "P_max": set.pmax,
        "cap": set.cap,
        "trials": set.trials,
        "seed": set.seed,
        "histogram": histogram_json(&hist),
        "censored": set.censored,
        "tail": tail,
        "tail_bracket": tail_bracket,
        "tail_label": "heuristic",
    });
    Ok(render(&manifest, result))
}

fn empirical(
    format: Format,
    stat: FiniteStat,
    path: &Path,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<String, CliError> {
    let input = read_poly_file(path)?;
    let statistic = Statistic::from(stat);
    let cfg = ExperimentConfig {
        n,
        trials,
        seed,
        fs: input.polys.clone(),
        statistic,
    };
    let dist = sample_statistic(&cfg)?;
    let hist = histogram(&dist);
    let mut manifest = Manifest::new("empirical", &input)
        .flag("stat", statistic.name())
        .flag("n", n)
        .flag("trials", trials)
        .flag("seed", seed);
    manifest.seed = Some(seed);
    if format == Format::Csv {
        return Ok(render_csv(&manifest, "value,count", &csv_rows(&hist)));
    }
    let result = json!({
        "statistic": statistic.name(),
        "polys": poly_strings(&input.polys),
        "n": n,
        "trials": trials,
        "seed": seed,
        "histogram": histogram_json(&hist),
        "degenerate": dist.degenerate,
    });
    Ok(render(&manifest, result))
}

fn check(format: Format, path: &Path) -> Result<String, CliError> {
    require_json(format, "check-common-factor")?;
    let input = read_poly_file(path)?;
    let r = has_common_factor_traced(&input.polys, CommonFactorOptions::default())?;
    let manifest = Manifest::new("check-common-factor", &input);
    let result = json!({
        "polys": poly_strings(&input.polys),
        "common_factor": r.common_factor,
        "method_trace": r.method_trace,
    });
    Ok(render(&manifest, result))
}

fn certificate(format: Format, path: &Path) -> Result<String, CliError> {
    require_json(format, "certificate")?;
    let input = read_poly_file(path)?;
    let cert = bezout_certificate(&input.polys)?;
    let manifest = Manifest::new("certificate", &input);
    let result = json!({
        "polys": poly_strings(&input.polys),
        "A": cert.a.to_string(),
        "cofactors": poly_strings(&cert.cofactors),
        "verified": cert.verify(&input.polys),
    });
    Ok(render(&manifest, result))
}

fn count(format: Format, path: &Path, primes: &[u64]) -> Result<String, CliError> {
    let input = read_poly_file(path)?;
    let budget = budget()?;
    let reports = primes
        .iter()
        .map(|&p| count_common_zeros(&input.polys, p, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let manifest = Manifest::new("count", &input)
        .flag("p", primes.to_vec())
        .flag("budget", budget);
    if format == Format::Csv {
        // timings only appear here; the JSON report stays reproducible
        let rows: Vec<Vec<String>> = reports
            .iter()
            .map(|r| {
                vec![
                    r.p.to_string(),
                    r.count.to_string(),
                    format!("{:.3}", r.elapsed.as_secs_f64() * 1e3),
                ]
            })
            .collect();
        return Ok(render_csv(&manifest, "p,count,elapsed_ms", &rows));
    }
    let counts: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "p": r.p, "count": r.count, "method": r.method.tag() }))
        .collect();
    let result = json!({
        "polys": poly_strings(&input.polys),
        "counts": counts,
    });
    Ok(render(&manifest, result))
}

fn require_json(format: Format, command: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage(format!("{command} only writes JSON"))),
    }
}

fn csv_rows(hist: &[(String, u64)]) -> Vec<Vec<String>> {
    hist.iter()
        .map(|(v, c)| vec![v.clone(), c.to_string()])
        .collect()
}
