//! `iwalk`: exact analysis of the involution random walk on S_n.

mod cache;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use iwalk_core::bounds::{
    analytic_psi_report, analytic_sweep, ds_sweep, ds_upper_bound, parity_lower_bound, parity_sweep,
    sweep_csv, upper_mixing_bound, wilson_lower_bound, wilson_sweep, BoundReport, SweepRow,
};
use iwalk_core::characters::character;
use iwalk_core::exact::{format_rational, parse_rational, rat, to_f64};
use iwalk_core::order::{conjecture_csv, conjecture_sweep, limiting_order_check, LikelihoodOrder};
use iwalk_core::partition::{class_size, enumerate_cycle_types};
use iwalk_core::spectrum::{
    eigenvalue_closed_form, eigenvalue_direct, eigenvalue_recursive, SINGLE_QUERY_CAP, DEFAULT_TABLE_CAP,
};
use iwalk_core::walk::{
    convolution_oracle_capped, distribution_at_time_capped, monte_carlo_estimate, separation, total_variation,
    FourierInverter, DISTRIBUTION_CAP,
};
use iwalk_core::{CycleType, Partition, WalkParams};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::output::{emit, rational, Artifact, CliResult, Failure, Format};

#[derive(Parser)]
#[command(name = "iwalk", version, about = "Exact analysis of the involution random walk on S_n")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Directory for cached eigenvalue tables.
    #[arg(long, global = true, env = "IWALK_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the artifact under this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print timing and cache information to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    /// Lift the default size caps on tables, distributions and oracles.
    #[arg(long, global = true)]
    unsafe_caps: bool,
}

#[derive(Args, Clone)]
struct Walk {
    /// Degree of the symmetric group; even and at least 2.
    #[arg(long)]
    n: usize,
    /// Probability of discarding each 2-cycle, as "num/den" or a decimal.
    #[arg(long, value_parser = parse_p)]
    p: BigRational,
}

impl Walk {
    fn params(&self) -> CliResult<WalkParams> {
        Ok(WalkParams::new(self.n, self.p.clone())?)
    }
}

#[derive(Args, Clone)]
struct Times {
    /// Time step, or the first step of a sweep with --t-max.
    #[arg(long)]
    t: Option<usize>,
    /// Last step of a sweep.
    #[arg(long)]
    t_max: Option<usize>,
}

impl Times {
    fn range(&self) -> CliResult<Vec<usize>> {
        match (self.t, self.t_max) {
            (None, None) => Err(Failure::Usage("give --t, --t-max, or both".into())),
            (Some(t), None) => Ok(vec![t]),
            (start, Some(end)) => {
                let start = start.unwrap_or(0);
                if start > end {
                    return Err(Failure::Usage(format!("--t {start} is after --t-max {end}")));
                }
                Ok((start..=end).collect())
            }
        }
    }

    fn single(&self) -> Option<usize> {
        if self.t_max.is_none() {
            self.t
        } else {
            None
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Walk eigenvalues: a full table or a single partition.
    Eigen {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_p)]
        p: BigRational,
        /// A single partition such as "3,1"; omit for the full table.
        #[arg(long)]
        partition: Option<Partition>,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
    },
    /// Irreducible character values.
    Character {
        #[arg(long)]
        partition: Partition,
        /// Cycle type as "length:multiplicity" pairs, e.g. "1:2,2:1"; omit for all classes.
        #[arg(long)]
        class: Option<String>,
    },
    /// Exact or sampled class distribution at time t.
    Dist {
        #[command(flatten)]
        walk: Walk,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value_t = DistMethod::Fourier)]
        method: DistMethod,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact total variation distance to uniform.
    Tv {
        #[command(flatten)]
        walk: Walk,
        #[command(flatten)]
        times: Times,
    },
    /// Exact separation distance, optionally against the conjectured formula.
    Sep {
        #[command(flatten)]
        walk: Walk,
        #[command(flatten)]
        times: Times,
        /// Compare with the conjectured closed form (needs p = 1/2).
        #[arg(long)]
        conjecture: bool,
    },
    /// Mixing bounds.
    Bounds {
        #[command(flatten)]
        walk: Walk,
        #[arg(long, value_enum)]
        kind: BoundChoice,
        #[command(flatten)]
        times: Times,
        /// Row index for the analytic eigenvalue bound; omit to sweep all.
        #[arg(long)]
        i: Option<usize>,
        /// Offset constant for the upper mixing estimate.
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        c: f64,
    },
    /// Likelihood order at time t, or the time it settles.
    Order {
        #[command(flatten)]
        walk: Walk,
        #[arg(long)]
        t: Option<usize>,
        /// Search for the time after which the order is cycle-lexicographic.
        #[arg(long)]
        find_limit: bool,
        #[arg(long, default_value_t = iwalk_core::order::DEFAULT_T_MAX)]
        t_max: usize,
    },
    /// Run verification suites; exit 1 if an asserted check fails.
    Verify {
        #[command(flatten)]
        walk: Walk,
        /// Comma-separated suites, or "all".
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Manage the eigenvalue table cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Compute and store tables for every listed n and p.
    Warm {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', value_parser = parse_p, required = true)]
        p: Vec<BigRational>,
    },
    /// List cached tables and whether each one is valid.
    Inspect,
    /// Remove all cached tables.
    Clear,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Recursive,
    Closed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DistMethod {
    Fourier,
    Convolve,
    Mc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundChoice {
    Ds,
    Wilson,
    Parity,
    Analytic,
    Invup,
}

fn parse_p(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Size limits; `--unsafe-caps` lifts them all.
pub struct Caps {
    pub table: usize,
    pub single: usize,
    pub distribution: usize,
    pub oracle: usize,
    pub orthogonality: usize,
}

impl Caps {
    fn new(unsafe_caps: bool) -> Self {
        if unsafe_caps {
            Caps {
                table: usize::MAX,
                single: usize::MAX,
                distribution: usize::MAX,
                oracle: usize::MAX,
                orthogonality: usize::MAX,
            }
        } else {
            Caps {
                table: DEFAULT_TABLE_CAP,
                single: SINGLE_QUERY_CAP,
                distribution: DISTRIBUTION_CAP,
                oracle: DISTRIBUTION_CAP,
                orthogonality: 14,
            }
        }
    }
}

pub struct Settings {
    pub cache: Option<Cache>,
    pub caps: Caps,
    pub verbose: bool,
}

impl Settings {
    pub fn note(&self, message: &str) {
        if self.verbose {
            eprintln!("iwalk: {message}");
        }
    }
}

fn check_cap(n: usize, cap: usize, what: &'static str) -> CliResult<()> {
    if n > cap {
        return Err(iwalk_core::Error::CapExceeded { what, n, cap }.into());
    }
    Ok(())
}

fn p_tag(p: &BigRational) -> String {
    format!("{}-{}", p.numer(), p.denom())
}

fn stem(command: &str, params: &WalkParams) -> String {
    format!("{command}_n{}_p{}", params.n(), p_tag(params.p()))
}

fn header(command: &str, params: &WalkParams) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("n".into(), json!(params.n()));
    m.insert("p".into(), rational(params.p()));
    m
}

fn with(mut base: serde_json::Map<String, Value>, extra: Value) -> Value {
    if let Value::Object(extra) = extra {
        base.extend(extra);
    }
    Value::Object(base)
}

fn eigen(
    settings: &Settings,
    n: usize,
    p: BigRational,
    partition: Option<Partition>,
    method: Method,
) -> CliResult<Artifact> {
    let params = WalkParams::new(n, p)?;
    let method_name = match method {
        Method::Direct => "direct",
        Method::Recursive => "recursive",
        Method::Closed => "closed",
    };
    let evaluate = |lambda: &Partition| -> CliResult<Option<BigRational>> {
        Ok(match method {
            Method::Direct => Some(eigenvalue_direct(lambda, &params)?),
            Method::Recursive => Some(eigenvalue_recursive(lambda, &params)?),
            Method::Closed => eigenvalue_closed_form(lambda, &params),
        })
    };
    let csv_header = "partition,psi_num,psi_den,float_approx\n";
    let csv_row = |lambda: &Partition, v: &BigRational| {
        format!("\"{lambda}\",{},{},{:e}\n", v.numer(), v.denom(), to_f64(v))
    };
    if let Some(lambda) = partition {
        check_cap(n, settings.caps.single, "single eigenvalue")?;
        if lambda.size() != n {
            return Err(iwalk_core::Error::SizeMismatch { left: lambda.size(), right: n }.into());
        }
        let value = evaluate(&lambda)?
            .ok_or_else(|| Failure::Usage(format!("no closed form is known for shape {lambda}")))?;
        let json = with(
            header("eigen", &params),
            json!({
                "method": method_name,
                "partition": lambda.to_string(),
                "psi": rational(&value),
                "float_approx": to_f64(&value),
            }),
        );
        let csv = format!("{csv_header}{}", csv_row(&lambda, &value));
        return Ok(Artifact::json(format!("{}_{}", stem("eigen", &params), lambda.to_string().replace(',', "-")), json)
            .with_csv(csv));
    }
    let values: Vec<(Partition, BigRational)> = match method {
        Method::Direct => cache::table(settings, &params)?.values.into_iter().collect(),
        _ => {
            check_cap(n, settings.caps.table, "eigenvalue table")?;
            let mut out = Vec::new();
            for lambda in iwalk_core::partition::enumerate_partitions(n) {
                if let Some(v) = evaluate(&lambda)? {
                    out.push((lambda, v));
                }
            }
            out.sort_by(|a, b| a.0.cmp(&b.0));
            out
        }
    };
    let psi: serde_json::Map<String, Value> = values.iter().map(|(l, v)| (l.to_string(), rational(v))).collect();
    let csv: String = std::iter::once(csv_header.to_string())
        .chain(values.iter().map(|(l, v)| csv_row(l, v)))
        .collect();
    let json = with(header("eigen", &params), json!({ "method": method_name, "psi": psi }));
    Ok(Artifact::json(stem("eigen", &params), json).with_csv(csv))
}

fn character_cmd(lambda: Partition, class: Option<String>) -> CliResult<Artifact> {
    let n = lambda.size();
    let classes = match class {
        Some(s) => vec![CycleType::parse(&s, n)?],
        None => enumerate_cycle_types(n),
    };
    let mut rows = Vec::new();
    let mut csv = String::from("class,class_size,value\n");
    for alpha in &classes {
        let value = character(&lambda, alpha)?;
        csv.push_str(&format!("\"{alpha}\",{},{value}\n", class_size(alpha)));
        rows.push(json!({ "class": alpha.to_string(), "value": value.to_string() }));
    }
    let json = json!({
        "command": "character",
        "n": n,
        "partition": lambda.to_string(),
        "values": rows,
    });
    Ok(Artifact::json(format!("character_{}", lambda.to_string().replace(',', "-")), json).with_csv(csv))
}

fn dist(
    settings: &Settings,
    walk: &Walk,
    t: usize,
    method: DistMethod,
    samples: u64,
    seed: u64,
) -> CliResult<Artifact> {
    let params = walk.params()?;
    let name = format!("{}_t{t}", stem("dist", &params));
    let exact = |m: DistMethod| match m {
        DistMethod::Convolve => convolution_oracle_capped(&params, t, settings.caps.oracle),
        _ => distribution_at_time_capped(&params, t, settings.caps.distribution),
    };
    match method {
        DistMethod::Fourier | DistMethod::Convolve => {
            let d = exact(method)?;
            let probs = d.to_json_value()["probs"].clone();
            let json = with(
                header("dist", &params),
                json!({
                    "method": if method == DistMethod::Fourier { "fourier" } else { "convolve" },
                    "t": t,
                    "probs": probs,
                }),
            );
            Ok(Artifact::json(name, json).with_csv(d.to_csv()))
        }
        DistMethod::Mc => {
            let start = Instant::now();
            let est = monte_carlo_estimate(&params, t, samples, seed)?;
            settings.note(&format!("sampled {samples} walks ({:.3} ms)", start.elapsed().as_secs_f64() * 1e3));
            let rows = est.rows();
            let mut csv = String::from("class,count,frequency,std_error\n");
            for r in &rows {
                csv.push_str(&format!("\"{}\",{},{:e},{:e}\n", r.class, r.count, r.frequency, r.std_error));
            }
            let deviation = if params.n() <= settings.caps.distribution {
                json!(est.max_sigma_deviation(&exact(DistMethod::Fourier)?))
            } else {
                Value::Null
            };
            let json = with(
                header("dist", &params),
                json!({
                    "method": "mc",
                    "t": t,
                    "samples": samples,
                    "seed": seed,
                    "rows": rows,
                    "max_sigma_deviation": deviation,
                }),
            );
            Ok(Artifact::json(format!("{name}_mc"), json).with_csv(csv))
        }
    }
}

fn tv(settings: &Settings, walk: &Walk, times: &Times) -> CliResult<Artifact> {
    let params = walk.params()?;
    let ts = times.range()?;
    let inverter = FourierInverter::new(&params, settings.caps.distribution)?;
    let mut rows = Vec::new();
    let mut csv = String::from("t,tv_num,tv_den,float_approx\n");
    for &t in &ts {
        let v = total_variation(&inverter.at(t));
        csv.push_str(&format!("{t},{},{},{:e}\n", v.numer(), v.denom(), to_f64(&v)));
        rows.push(json!({ "t": t, "tv": rational(&v), "float_approx": to_f64(&v) }));
    }
    let json = with(header("tv", &params), json!({ "rows": rows }));
    Ok(Artifact::json(format!("{}_t{}-{}", stem("tv", &params), ts[0], ts[ts.len() - 1]), json).with_csv(csv))
}

fn sep(settings: &Settings, walk: &Walk, times: &Times, conjecture: bool) -> CliResult<Artifact> {
    let params = walk.params()?;
    let ts = times.range()?;
    let name = format!("{}_t{}-{}", stem("sep", &params), ts[0], ts[ts.len() - 1]);
    if conjecture {
        if *params.p() != rat(1, 2) {
            return Err(Failure::Usage(format!(
                "--conjecture needs p = 1/2, got {}",
                format_rational(params.p())
            )));
        }
        check_cap(params.n(), settings.caps.distribution, "exact distribution")?;
        let rows = conjecture_sweep(params.n(), ts)?;
        let json_rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "t": r.t,
                    "exact": rational(&r.exact),
                    "argmax": r.argmax.to_string(),
                    "conjectured": rational(&r.conjectured_exact),
                    "conjectured_float": r.conjectured,
                    "n_cycle_deficit": rational(&r.n_cycle_deficit),
                    "match": r.matches,
                    "terms_decreasing": r.terms_decreasing,
                })
            })
            .collect();
        let json = with(header("sep", &params), json!({ "conjecture": true, "rows": json_rows }));
        return Ok(Artifact::json(format!("{name}_conjecture"), json).with_csv(conjecture_csv(&rows)));
    }
    let inverter = FourierInverter::new(&params, settings.caps.distribution)?;
    let mut rows = Vec::new();
    let mut csv = String::from("t,sep_num,sep_den,argmax,float_approx\n");
    for &t in &ts {
        let (v, argmax) = separation(&inverter.at(t));
        csv.push_str(&format!("{t},{},{},\"{argmax}\",{:e}\n", v.numer(), v.denom(), to_f64(&v)));
        rows.push(json!({
            "t": t,
            "exact": rational(&v),
            "argmax": argmax.to_string(),
            "float_approx": to_f64(&v),
        }));
    }
    let json = with(header("sep", &params), json!({ "conjecture": false, "rows": rows }));
    Ok(Artifact::json(name, json).with_csv(csv))
}

fn bound_report_json(params: &WalkParams, report: &BoundReport, extra: Value) -> Value {
    let mut body = serde_json::to_value(report).expect("report serializes");
    if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
        b.extend(e);
    }
    with(header("bounds", params), body)
}

fn sweep_artifact(name: String, params: &WalkParams, kind: &str, index: &str, rows: &[SweepRow]) -> Artifact {
    let json = with(
        header("bounds", params),
        json!({ "kind": kind, "index": index, "rows": rows }),
    );
    Artifact::json(name, json).with_csv(sweep_csv(rows, index))
}

fn bounds(
    settings: &Settings,
    walk: &Walk,
    kind: BoundChoice,
    times: &Times,
    i: Option<usize>,
    c: f64,
) -> CliResult<Artifact> {
    let params = walk.params()?;
    let (kind_name, timed) = match kind {
        BoundChoice::Ds => ("ds-upper", true),
        BoundChoice::Wilson => ("wilson-lower", true),
        BoundChoice::Parity => ("parity-lower", true),
        BoundChoice::Analytic => ("analytic-psi", false),
        BoundChoice::Invup => ("invup", false),
    };
    let name = format!("{}_{kind_name}", stem("bounds", &params));
    if timed {
        if kind != BoundChoice::Parity {
            check_cap(params.n(), settings.caps.distribution, "exact distribution")?;
        }
        if let Some(t) = times.single() {
            let report = match kind {
                BoundChoice::Ds => ds_upper_bound(&params, t)?,
                BoundChoice::Wilson => wilson_lower_bound(&params, t)?,
                _ => parity_lower_bound(&params, t)?,
            };
            return Ok(Artifact::json(format!("{name}_t{t}"), bound_report_json(&params, &report, json!({ "t": t }))));
        }
        let ts = times.range()?;
        let label = format!("{name}_t{}-{}", ts[0], ts[ts.len() - 1]);
        let rows = match kind {
            BoundChoice::Ds => ds_sweep(&params, ts)?,
            BoundChoice::Wilson => wilson_sweep(&params, ts)?,
            _ => parity_sweep(&params, ts)?,
        };
        return Ok(sweep_artifact(label, &params, kind_name, "t", &rows));
    }
    match kind {
        BoundChoice::Analytic => match i {
            Some(i) => {
                let report = analytic_psi_report(params.n(), i, params.p())?;
                Ok(Artifact::json(format!("{name}_i{i}"), bound_report_json(&params, &report, json!({}))))
            }
            None => {
                check_cap(params.n(), settings.caps.table, "eigenvalue table")?;
                let rows = analytic_sweep(&params)?;
                Ok(sweep_artifact(name, &params, kind_name, "i", &rows))
            }
        },
        _ => {
            let report = upper_mixing_bound(&params, c);
            Ok(Artifact::json(name, bound_report_json(&params, &report, json!({}))))
        }
    }
}

fn order_json(order: &LikelihoodOrder) -> Value {
    let violations: Vec<[String; 2]> = order
        .cycle_lex_violations()
        .iter()
        .map(|(a, b)| [a.to_string(), b.to_string()])
        .collect();
    json!({
        "t": order.t,
        "ranked": order.ranked,
        "ties": order.ties.iter().map(|g| g.iter().map(|a| a.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "cycle_lex": violations.is_empty(),
        "violations": violations,
    })
}

fn order(settings: &Settings, walk: &Walk, t: Option<usize>, find_limit: bool, t_max: usize) -> CliResult<Artifact> {
    let params = walk.params()?;
    if find_limit {
        // The sweep always runs under the library's distribution cap.
        check_cap(params.n(), DISTRIBUTION_CAP, "exact distribution")?;
        let report = limiting_order_check(&params, t_max)?;
        let mut body = serde_json::to_value(&report).expect("report serializes");
        body["final_order"] = order_json(&report.final_order);
        if let Value::Object(b) = &mut body {
            b.remove("n");
            b.remove("p");
        }
        let json = with(header("order", &params), json!({ "find_limit": true }));
        let json = with(json.as_object().cloned().unwrap_or_default(), body);
        return Ok(Artifact::json(format!("{}_limit{t_max}", stem("order", &params)), json));
    }
    let t = t.ok_or_else(|| Failure::Usage("order needs --t or --find-limit".into()))?;
    let inverter = FourierInverter::new(&params, settings.caps.distribution)?;
    let lo = LikelihoodOrder::from_distribution(&inverter.at(t), t);
    let mut csv = String::from("rank,class,prob_num,prob_den,float_approx\n");
    for (k, r) in lo.ranked.iter().enumerate() {
        csv.push_str(&format!(
            "{},\"{}\",{},{},{:e}\n",
            k + 1,
            r.class,
            r.prob.numer(),
            r.prob.denom(),
            to_f64(&r.prob)
        ));
    }
    let json = with(
        header("order", &params),
        with(serde_json::Map::from_iter([("find_limit".to_string(), json!(false))]), order_json(&lo)),
    );
    Ok(Artifact::json(format!("{}_t{t}", stem("order", &params)), json).with_csv(csv))
}

fn cache_cmd(settings: &Settings, action: CacheAction) -> CliResult<Artifact> {
    let cache = settings
        .cache
        .as_ref()
        .ok_or_else(|| Failure::Usage("no cache directory: set --cache-dir or IWALK_CACHE_DIR".into()))?;
    let dir = cache.dir().display().to_string();
    match action {
        CacheAction::Warm { n, p } => {
            let mut stored = Vec::new();
            for &n in &n {
                for p in &p {
                    let params = WalkParams::new(n, p.clone())?;
                    cache::table(settings, &params)?;
                    stored.push(cache::file_name(&params));
                }
            }
            let json = json!({ "command": "cache", "action": "warm", "dir": dir, "files": stored });
            Ok(Artifact::json("cache_warm", json))
        }
        CacheAction::Inspect => {
            let entries = cache.inspect()?;
            let json = json!({ "command": "cache", "action": "inspect", "dir": dir, "entries": entries });
            Ok(Artifact::json("cache_inspect", json))
        }
        CacheAction::Clear => {
            let removed = cache.clear()?;
            let json = json!({ "command": "cache", "action": "clear", "dir": dir, "files": removed });
            Ok(Artifact::json("cache_clear", json))
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let settings = Settings {
        cache: cli.global.cache_dir.clone().map(Cache::new),
        caps: Caps::new(cli.global.unsafe_caps),
        verbose: cli.global.verbose,
    };
    if cli.global.format == Format::Csv && matches!(cli.command, Command::Verify { .. } | Command::Cache { .. }) {
        return Err(Failure::Usage("--format csv is not available for verify or cache; use json".into()));
    }
    let start = Instant::now();
    let mut verification: Option<String> = None;
    let artifact = match cli.command {
        Command::Eigen {
            n,
            p,
            partition,
            method,
        } => eigen(&settings, n, p, partition, method)?,
        Command::Character { partition, class } => character_cmd(partition, class)?,
        Command::Dist {
            walk,
            t,
            method,
            samples,
            seed,
        } => dist(&settings, &walk, t, method, samples, seed)?,
        Command::Tv { walk, times } => tv(&settings, &walk, &times)?,
        Command::Sep {
            walk,
            times,
            conjecture,
        } => sep(&settings, &walk, &times, conjecture)?,
        Command::Bounds {
            walk,
            kind,
            times,
            i,
            c,
        } => bounds(&settings, &walk, kind, &times, i, c)?,
        Command::Order {
            walk,
            t,
            find_limit,
            t_max,
        } => order(&settings, &walk, t, find_limit, t_max)?,
        Command::Verify { walk, suite } => {
            let params = walk.params()?;
            let suites = verify::parse_suites(&suite)?;
            let report = verify::run(&settings, &params, &suites, suite.trim() == "all")?;
            if !report.passed {
                let failed = report.json["failures"]
                    .as_array()
                    .map(|f| f.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(", "))
                    .unwrap_or_default();
                verification = Some(format!("verification failed: {failed}"));
            }
            Artifact::json(format!("{}_verify", stem("verify", &params)), report.json)
        }
        Command::Cache { action } => cache_cmd(&settings, action)?,
    };
    emit(&artifact, cli.global.format, cli.global.out.as_deref())?;
    settings.note(&format!("elapsed {:.3} ms", start.elapsed().as_secs_f64() * 1e3));
    match verification {
        Some(message) => Err(Failure::Verification(message)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("iwalk: error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
