//! Thin experiment runner over the library: estimate, solve, bound, and
//! sweep growth rates from the command line, with JSON or CSV output.
//!
//! Exit codes: 0 when the run and every requested assertion succeed, 1 for
//! runtime failures (budget exhausted, no convergence, a failed check), 2
//! for usage errors (unknown family, malformed file, incompatible method).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bdep::bounds::corollary1_sandwich;
use bdep::graph::Graph;
use bdep::sim::{clt_sample, derive_replica_seed, estimate_gamma, GrowthRule, SimConfig};
use bdep::solvable::{gamma_hub_party, gamma_nn_complete, gamma_nn_complete_exact, rational_to_f64};
use bdep::star::gamma_star_series;
use bdep::stats::{ks_centered_normal, sample_variance, variance_ratio_test};
use bdep::surface::{gamma_via_surface_chain, TruncationRule, DEFAULT_STATE_BUDGET};
use bdep::Error;

#[derive(Parser)]
#[command(name = "bdep", version, about = "Growth rates of ballistic deposition on graphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Root RNG seed; replica and sweep-point seeds are derived from it.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write results to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format. Defaults to json, except sweep which defaults to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for replica and sweep parallelism (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run every method that applies to the graph and compare the answers.
    #[arg(long, global = true)]
    cross_check: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Compute or estimate the growth rate of one graph.
    Gamma(GammaArgs),
    /// Spectral upper bound and embedded-star lower bound for one graph.
    Bounds(BoundsArgs),
    /// Normality check on standardized height fluctuations.
    Clt(CltArgs),
    /// Nearest-neighbour variant on the complete graph: exact rational rate.
    Nn(NnArgs),
    /// Growth rate across a one-parameter family, one row per size.
    Sweep(SweepArgs),
    /// Structural metrics of a graph (degrees, girth, distances).
    GraphInfo(GraphArgs),
}

#[derive(Args)]
struct GammaArgs {
    /// Family descriptor like complete:6, star:3, theorem1:1,1,4, or a
    /// JSON graph file path.
    #[arg(long)]
    graph: String,
    #[arg(long, value_enum, default_value_t = Method::Mc)]
    method: Method,
    /// Deposition events per replica; scientific notation accepted.
    #[arg(long, value_parser = parse_count, default_value = "100000")]
    steps: u64,
    #[arg(long, value_parser = parse_count, default_value = "8")]
    replicas: u64,
    /// Height cap for the truncated-chain method.
    #[arg(long, default_value_t = 16)]
    m: u32,
    /// Tolerance for the series and chain methods.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Monte Carlo replicas of the deposition process.
    Mc,
    /// Truncated surface-profile chain, solved exactly.
    Chain,
    /// Hub-party closed form.
    ClosedForm,
    /// Star series with certified tail.
    Series,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    graph: String,
    /// Attach a Monte Carlo estimate between the bounds (0 = skip).
    #[arg(long, value_parser = parse_count, default_value = "0")]
    steps: u64,
    #[arg(long, value_parser = parse_count, default_value = "8")]
    replicas: u64,
}

#[derive(Args)]
struct CltArgs {
    #[arg(long)]
    graph: String,
    #[arg(long, value_parser = parse_count, default_value = "100000")]
    steps: u64,
    #[arg(long, value_parser = parse_count, default_value = "400")]
    replicas: u64,
    /// Significance level for the normality gate.
    #[arg(long, default_value_t = 0.01)]
    level: f64,
    /// Also test the min-height version and compare the two variances.
    #[arg(long)]
    min: bool,
}

#[derive(Args)]
struct NnArgs {
    /// Complete-graph size.
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// Graph family taking one size argument: cycle, path, star, complete,
    /// cocktail.
    #[arg(long)]
    family: String,
    /// Inclusive size range, e.g. 4..40.
    #[arg(long)]
    n: String,
    #[arg(long, value_enum, default_value_t = SweepMethod::Mc)]
    method: SweepMethod,
    #[arg(long, value_parser = parse_count, default_value = "100000")]
    steps: u64,
    #[arg(long, value_parser = parse_count, default_value = "8")]
    replicas: u64,
    #[arg(long, default_value_t = 16)]
    m: u32,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMethod {
    Mc,
    Chain,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    graph: String,
}

/// Parse a replica or step count, accepting scientific notation for round
/// numbers ("1e6"); the value must be an exact nonnegative integer below
/// 2^53.
fn parse_count(s: &str) -> Result<u64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = t.parse().map_err(|_| format!("not a number: {t}"))?;
    if !v.is_finite() || v < 0.0 {
        return Err(format!("count out of range: {t}"));
    }
    if v > 9_007_199_254_740_992.0 {
        return Err(format!("count too large to represent exactly: {t}"));
    }
    if v.fract() != 0.0 {
        return Err(format!("count must be a whole number: {t}"));
    }
    Ok(v as u64)
}

fn load_graph(spec: &str) -> bdep::Result<Graph> {
    if spec.ends_with(".json") || Path::new(spec).exists() {
        Graph::from_file(Path::new(spec))
    } else {
        Graph::from_family_str(spec)
    }
}

/// Hub-party parameters of a family descriptor, when the named graph is a
/// hub-party instance.
fn hub_party_params(spec: &str) -> Option<(usize, usize, usize)> {
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a.trim())),
        None => (spec.trim(), None),
    };
    match name {
        "hubparty" | "theorem1" => {
            let parts: Vec<usize> =
                args?.split(',').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
            (parts.len() == 3).then(|| (parts[0], parts[1], parts[2]))
        }
        "butterfly" => Some((1, 2, 2)),
        "cocktail" | "cocktail_party" => Some((0, 1, args?.parse().ok()?)),
        "cycle" if args == Some("4") => Some((0, 1, 4)),
        "star" if args == Some("3") => Some((1, 1, 2)),
        _ => None,
    }
}

/// Leaf-plus-centre size of a star descriptor, for the series method.
fn star_size(spec: &str) -> Option<usize> {
    let (name, args) = spec.split_once(':')?;
    (name.trim() == "star").then(|| args.trim().parse().ok())?
}

fn classify(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::InvalidParameter(_)
        | Error::InvalidGraph(_)
        | Error::Io(_)
        | Error::VertexOutOfRange { .. } => 2,
        _ => 1,
    }
}

struct Outcome {
    config: Value,
    results: Value,
    module: &'static str,
    operation: &'static str,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        // Ignore the error from a second initialization in the same process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let started = Instant::now();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(classify(&e));
        }
    };
    let pass = out.pass;
    let text = render(&cli.global, &cli.command, out, started);
    if let Err(e) = emit(&cli.global, &text) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: &Cli) -> bdep::Result<Outcome> {
    match &cli.command {
        Command::Gamma(a) => run_gamma(&cli.global, a),
        Command::Bounds(a) => run_bounds(&cli.global, a),
        Command::Clt(a) => run_clt(&cli.global, a),
        Command::Nn(a) => run_nn(&cli.global, a),
        Command::Sweep(a) => run_sweep(&cli.global, a),
        Command::GraphInfo(a) => run_graph_info(a),
    }
}

fn gamma_one_method(
    g: &Graph,
    spec: &str,
    method: Method,
    seed: u64,
    a: &GammaArgs,
) -> bdep::Result<Value> {
    match method {
        Method::Mc => {
            let cfg = SimConfig::discrete(seed, a.steps).with_replicas(a.replicas as usize);
            let est = estimate_gamma(g, &cfg, GrowthRule::Nnn)?;
            Ok(serde_json::to_value(&est).expect("report serializes"))
        }
        Method::Chain => {
            let rep = gamma_via_surface_chain(
                g,
                a.m.max(g.vertex_count() as u32),
                a.tol,
                DEFAULT_STATE_BUDGET,
                TruncationRule::ResetProject,
            )?;
            Ok(json!({
                "gamma": rep.gamma,
                "cap": rep.cap,
                "states": rep.states,
                "difference": rep.difference,
                "tail_bound": rep.tail_bound,
            }))
        }
        Method::ClosedForm => {
            let (hubs, clones, party) = hub_party_params(spec).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "closed form needs a hub-party graph (theorem1:N,n,m), not {spec}"
                ))
            })?;
            let gamma = gamma_hub_party(hubs, clones, party)?;
            Ok(json!({
                "gamma": gamma,
                "hubs": hubs, "clones": clones, "party": party,
            }))
        }
        Method::Series => {
            let n = star_size(spec).ok_or_else(|| {
                Error::InvalidParameter(format!("series needs a star graph (star:n), not {spec}"))
            })?;
            let sv = gamma_star_series(n, a.tol)?;
            Ok(json!({
                "gamma": sv.value,
                "tail_bound": sv.tail_bound,
                "terms": sv.terms,
            }))
        }
    }
}

fn method_provenance(m: Method) -> (&'static str, &'static str) {
    match m {
        Method::Mc => ("sim", "estimate_gamma"),
        Method::Chain => ("surface", "gamma_via_surface_chain"),
        Method::ClosedForm => ("solvable", "gamma_hub_party"),
        Method::Series => ("star", "gamma_star_series"),
    }
}

fn run_gamma(global: &Global, a: &GammaArgs) -> bdep::Result<Outcome> {
    let g = load_graph(&a.graph)?;
    let config = json!({
        "command": "gamma", "graph": a.graph, "seed": global.seed,
        "steps": a.steps, "replicas": a.replicas, "m": a.m, "tol": a.tol,
        "cross_check": global.cross_check,
    });

    if !global.cross_check {
        let results = gamma_one_method(&g, &a.graph, a.method, global.seed, a)?;
        let (module, operation) = method_provenance(a.method);
        return Ok(Outcome { config, results, module, operation, pass: true });
    }

    // Every applicable method; a chain whose state space exceeds the budget
    // is reported as skipped rather than failing the comparison.
    let mut values: Vec<(&str, f64, f64)> = Vec::new(); // name, value, slack
    let mut details = serde_json::Map::new();
    let mut skipped: Vec<String> = Vec::new();

    let mc = gamma_one_method(&g, &a.graph, Method::Mc, global.seed, a)?;
    let se = mc["stderr"].as_f64().unwrap_or(0.0);
    values.push(("mc", mc["gamma_hat"].as_f64().unwrap(), 4.0 * se));
    details.insert("mc".into(), mc);

    match gamma_one_method(&g, &a.graph, Method::Chain, global.seed, a) {
        Ok(v) => {
            values.push(("chain", v["gamma"].as_f64().unwrap(), 0.0));
            details.insert("chain".into(), v);
        }
        Err(Error::StateBudget { .. }) | Err(Error::NoConvergence(_)) => {
            skipped.push("chain".into());
        }
        Err(e) => return Err(e),
    }
    if hub_party_params(&a.graph).is_some() {
        let v = gamma_one_method(&g, &a.graph, Method::ClosedForm, global.seed, a)?;
        values.push(("closed-form", v["gamma"].as_f64().unwrap(), 0.0));
        details.insert("closed_form".into(), v);
    }
    if star_size(&a.graph).is_some_and(|n| n >= 2) {
        let v = gamma_one_method(&g, &a.graph, Method::Series, global.seed, a)?;
        values.push(("series", v["gamma"].as_f64().unwrap(), 0.0));
        details.insert("series".into(), v);
    }

    // Deterministic methods must agree to 1e-4; Monte Carlo gets four
    // standard errors of slack on top.
    let mut max_disc = 0.0f64;
    let mut pass = true;
    let mut comparisons = Vec::new();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let (na, va, sa) = values[i];
            let (nb, vb, sb) = values[j];
            let disc = (va - vb).abs();
            let ok = disc <= 1e-4 + sa + sb;
            pass &= ok;
            max_disc = max_disc.max(disc);
            comparisons.push(json!({
                "pair": format!("{na}/{nb}"), "discrepancy": disc, "ok": ok,
            }));
        }
    }
    details.insert("comparisons".into(), Value::Array(comparisons));
    details.insert("max_discrepancy".into(), json!(max_disc));
    details.insert("skipped".into(), json!(skipped));
    details.insert("agree".into(), json!(pass));
    Ok(Outcome {
        config,
        results: Value::Object(details),
        module: "cli",
        operation: "cross_check",
        pass,
    })
}

fn run_bounds(global: &Global, a: &BoundsArgs) -> bdep::Result<Outcome> {
    let g = load_graph(&a.graph)?;
    let config = json!({
        "command": "bounds", "graph": a.graph, "seed": global.seed,
        "steps": a.steps, "replicas": a.replicas,
    });
    let cfg = (a.steps > 0)
        .then(|| SimConfig::discrete(global.seed, a.steps).with_replicas(a.replicas as usize));
    let rep = corollary1_sandwich(&g, cfg.as_ref())?;
    let pass = rep.lower <= rep.upper;
    Ok(Outcome {
        config,
        results: serde_json::to_value(&rep).expect("report serializes"),
        module: "bounds",
        operation: "corollary1_sandwich",
        pass,
    })
}

fn run_clt(global: &Global, a: &CltArgs) -> bdep::Result<Outcome> {
    let g = load_graph(&a.graph)?;
    let config = json!({
        "command": "clt", "graph": a.graph, "seed": global.seed,
        "steps": a.steps, "replicas": a.replicas, "level": a.level, "min": a.min,
    });
    let cfg = SimConfig::discrete(global.seed, a.steps).with_replicas(a.replicas as usize);
    let max_sample = clt_sample(&g, &cfg, false)?;
    // A point mass (complete graphs: the max rises by one every event) is
    // the zero-variance limit; there is nothing for a KS test to reject.
    let ks_or_degenerate = |values: &[f64]| -> bdep::Result<(Value, bool)> {
        if sample_variance(values) <= 1e-12 {
            return Ok((Value::Null, true));
        }
        let ks = ks_centered_normal(values)?;
        let ok = ks.passes(a.level);
        let v = json!({
            "statistic": ks.statistic, "p_value": ks.p_value,
            "n": ks.n, "sigma": ks.sigma, "pass": ok,
        });
        Ok((v, ok))
    };
    let (ks, mut pass) = ks_or_degenerate(&max_sample.values)?;
    let degenerate = ks.is_null();
    let mut results = json!({
        "gamma_used": max_sample.gamma_used,
        "exact_reference": max_sample.exact_reference,
        "sigma2_hat": sample_variance(&max_sample.values),
        "degenerate": degenerate,
        "ks": ks,
        "level": a.level,
    });
    if a.min {
        let min_sample = clt_sample(&g, &cfg, true)?;
        let (ks_min, min_ok) = ks_or_degenerate(&min_sample.values)?;
        pass &= min_ok;
        let ratio = if degenerate || ks_min.is_null() {
            Value::Null
        } else {
            let r = variance_ratio_test(&max_sample.values, &min_sample.values)?;
            pass &= r.indistinguishable(a.level);
            json!({
                "f_statistic": r.f_statistic, "p_value": r.p_value,
                "indistinguishable": r.indistinguishable(a.level),
            })
        };
        results["min"] = json!({
            "sigma2_hat": sample_variance(&min_sample.values),
            "ks": ks_min,
            "variance_ratio": ratio,
        });
    }
    results["pass"] = json!(pass);
    Ok(Outcome { config, results, module: "sim", operation: "clt_sample", pass })
}

fn run_nn(global: &Global, a: &NnArgs) -> bdep::Result<Outcome> {
    let config = json!({"command": "nn", "n": a.n, "seed": global.seed});
    let formula = gamma_nn_complete(a.n)?;
    let mut results = json!({"n": a.n, "formula": formula});
    let mut pass = true;
    // The rational chain solve is cheap up to moderate sizes; beyond that
    // only the closed formula is reported.
    if a.n <= 64 {
        let exact = gamma_nn_complete_exact(a.n)?;
        let float = rational_to_f64(&exact);
        results["exact"] = json!(format!("{exact}"));
        results["float"] = json!(float);
        if global.cross_check {
            let ok = (formula - float).abs() <= 1e-10 * float.abs();
            results["formula_matches_exact"] = json!(ok);
            pass = ok;
        }
    }
    Ok(Outcome {
        config,
        results,
        module: "solvable",
        operation: "gamma_nn_complete",
        pass,
    })
}

fn run_sweep(global: &Global, a: &SweepArgs) -> bdep::Result<Outcome> {
    let (lo, hi) = a
        .n
        .split_once("..")
        .and_then(|(l, h)| Some((l.trim().parse::<usize>().ok()?, h.trim().parse::<usize>().ok()?)))
        .ok_or_else(|| Error::Parse(format!("size range must look like 4..40, not {}", a.n)))?;
    if lo > hi {
        return Err(Error::InvalidParameter(format!("empty size range {lo}..{hi}")));
    }
    let config = json!({
        "command": "sweep", "family": a.family, "n": a.n, "seed": global.seed,
        "method": match a.method { SweepMethod::Mc => "mc", SweepMethod::Chain => "chain" },
        "steps": a.steps, "replicas": a.replicas, "m": a.m, "tol": a.tol,
    });
    let mut rows = Vec::new();
    for n in lo..=hi {
        let spec = format!("{}:{}", a.family, n);
        let g = Graph::from_family_str(&spec)?;
        let seed = derive_replica_seed(global.seed, n);
        let row = match a.method {
            SweepMethod::Mc => {
                let cfg = SimConfig::discrete(seed, a.steps).with_replicas(a.replicas as usize);
                let est = estimate_gamma(&g, &cfg, GrowthRule::Nnn)?;
                json!({
                    "family": a.family, "n": n, "gamma": est.gamma_hat,
                    "stderr": est.stderr, "ci95_lo": est.ci95_lo,
                    "ci95_hi": est.ci95_hi, "seed": seed,
                })
            }
            SweepMethod::Chain => {
                let rep = gamma_via_surface_chain(
                    &g,
                    a.m.max(g.vertex_count() as u32),
                    a.tol,
                    DEFAULT_STATE_BUDGET,
                    TruncationRule::ResetProject,
                )?;
                json!({
                    "family": a.family, "n": n, "gamma": rep.gamma,
                    "stderr": Value::Null, "ci95_lo": Value::Null,
                    "ci95_hi": Value::Null, "seed": seed,
                })
            }
        };
        rows.push(row);
    }
    Ok(Outcome {
        config,
        results: json!({"rows": rows}),
        module: "cli",
        operation: "sweep",
        pass: true,
    })
}

fn run_graph_info(a: &GraphArgs) -> bdep::Result<Outcome> {
    let g = load_graph(&a.graph)?;
    let m = g.metrics();
    let config = json!({"command": "graph-info", "graph": a.graph});
    let results = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "intensities": g.intensities(),
        "max_degree": m.max_degree,
        "girth": m.girth,
        "is_regular": m.is_regular,
        "distances": m.distances,
    });
    Ok(Outcome {
        config,
        results,
        module: "graph",
        operation: "metrics",
        pass: true,
    })
}

fn render(global: &Global, command: &Command, out: Outcome, started: Instant) -> String {
    let format = global.format.unwrap_or(match command {
        Command::Sweep(_) => Format::Csv,
        _ => Format::Json,
    });
    match format {
        Format::Json => {
            let record = json!({
                "config": out.config,
                "results": out.results,
                "pass": out.pass,
                "provenance": {
                    "module": out.module,
                    "operation": out.operation,
                    "version": env!("CARGO_PKG_VERSION"),
                },
                "duration_ms": started.elapsed().as_secs_f64() * 1e3,
            });
            let mut s = serde_json::to_string_pretty(&record).expect("record serializes");
            s.push('\n');
            s
        }
        Format::Csv => render_csv(&out.results),
    }
}

/// Data-only CSV: a row table renders with a header from the first row's
/// keys; any other result object renders as key,value lines.
fn render_csv(results: &Value) -> String {
    let mut s = String::new();
    if let Some(rows) = results.get("rows").and_then(Value::as_array) {
        if let Some(first) = rows.first().and_then(Value::as_object) {
            let preferred =
                ["family", "n", "method", "gamma", "stderr", "ci95_lo", "ci95_hi", "seed"];
            let mut cols: Vec<&String> =
                preferred.iter().filter_map(|p| first.keys().find(|k| k == p)).collect();
            cols.extend(first.keys().filter(|k| !preferred.contains(&k.as_str())));
            s.push_str(&cols.iter().map(|c| csv_escape(c)).collect::<Vec<_>>().join(","));
            s.push('\n');
            for row in rows {
                let cells: Vec<String> =
                    cols.iter().map(|c| csv_cell(&row[c.as_str()])).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
        }
        return s;
    }
    let mut flat = Vec::new();
    flatten("", results, &mut flat);
    for (k, v) in flat {
        s.push_str(&format!("{},{}\n", csv_escape(&k), csv_cell(&v)));
    }
    s
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => out.push((prefix.to_string(), other.clone())),
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => csv_escape(s),
        Value::Null => String::new(),
        other => csv_escape(&other.to_string()),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit(global: &Global, text: &str) -> std::io::Result<()> {
    match &global.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
