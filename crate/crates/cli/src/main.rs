mod audit;
mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mstratio::constructions::supmax_check;
use mstratio::persistence::{chromatic_norms, ratio_from_norms, zero_dim_diagram, CutoffPolicy};
use mstratio::render::{render_svg, RenderOptions};
use mstratio::search::{
    brute_force_max, local_search, random_coloring, sample_max, Schedule, DEFAULT_MAX_POINTS,
};
use mstratio::{
    build_construction, habitat_summary, multiway_ratio, Coloring, Metric, PointCloud,
    PointSetDocument,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::{write_out, CliError};

/// MST-ratio of bi-colored lattice point sets.
#[derive(Debug, Parser)]
#[command(name = "mstratio", version)]
struct Cli {
    /// Run the configuration stored in this JSON file instead of the command line.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the resolved configuration to this file before running.
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Emit the point-set document of a construction.
    Gen(GenArgs),
    /// MST-ratio, tree lengths and chromatic norms of one instance.
    Ratio(RatioArgs),
    /// Ratio against closed form over a parameter range, as CSV.
    Sweep(SweepArgs),
    /// Exhaustive (or sampled) maximum over all two-colorings.
    Brute(BruteArgs),
    /// Seeded single-flip local search with simulated annealing.
    Anneal(AnnealArgs),
    /// Rooms, houses, blocks, compounds and backyards of class 0.
    Habitat(HabitatArgs),
    /// Zero-dimensional chromatic persistence norms.
    Persist(PersistArgs),
    /// Cost table, gap inequalities and randomized lemma audits.
    Audit(AuditArgs),
    /// SVG drawing of an instance.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum MetricArg {
    Euclidean,
    Hex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
struct Source {
    /// Named construction, e.g. `fig8`, `stretched:r=200`, `packing:ninth:n=60`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    construction: Option<String>,

    /// Point-set document to read instead of a construction.
    #[arg(long = "in", value_name = "FILE")]
    #[serde(default, rename = "in", skip_serializing_if = "Option::is_none")]
    input: Option<PathBuf>,

    /// Torus period for torus constructions.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    torus: Option<u32>,

    /// Distance used for the trees; defaults to Euclidean on the cloud's topology.
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metric: Option<MetricArg>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
struct Sink {
    /// Output path, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
struct GenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: Source,
    #[command(flatten)]
    #[serde(flatten)]
    sink: Sink,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
struct RatioArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: Source,
    #[command(flatten)]
    #[serde(flatten)]
    sink: Sink,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
struct SweepArgs {
    /// `stretched` (over r), `checkerboard`, `three-way` or `packing:FAMILY` (over n).
    #[arg(long)]
    family: String,
    /// Comma-separated parameter values.
    #[arg(long, value_delimiter = ',', required_unless_present = "range")]
    #[serde(default)]
    values: Vec<f64>,
    /// Inclusive range `start:end:step`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    range: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    sink: Sink,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
struct BruteArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: Source,
    #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
    max_points: usize,
    /// Evaluate this many random colorings instead of all of them.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    sink: Sink,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
struct AnnealArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: Source,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    #[arg(long, default_value_t = 0.05)]
    t0: f64,
    #[arg(long, default_value_t = 0.999)]
    alpha: f64,
    /// Start from the instance's own coloring instead of a random one.
    #[arg(long)]
    #[serde(default)]
    keep_coloring: bool,
    /// `json` for the best coloring and summary, `csv` for the trace.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    #[serde(flatten)]
    sink: Sink,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
struct HabitatArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: Source,
    #[arg(long, default_value_t = 1)]
    k_max: u32,
    #[command(flatten)]
    #[serde(flatten)]
    sink: Sink,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
struct PersistArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: Source,
    /// `max-finite`, `exclude`, or a number.
    #[arg(long, default_value = "max-finite")]
    cutoff: String,
    /// With `--format csv`, the diagram to print: `b`, `c` or `a`.
    #[arg(long, default_value = "b")]
    diagram: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    #[serde(flatten)]
    sink: Sink,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub(crate) struct AuditArgs {
    /// Largest level of the gap audit.
    #[arg(long, default_value_t = 1000)]
    pub k_max: u32,
    /// Random cases per randomized audit.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Torus period of the backyard audit.
    #[arg(long, default_value_t = 10)]
    pub torus: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub sink: Sink,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
struct RenderArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: Source,
    /// Thickening levels of class 0 to fill, e.g. `1,2`.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    thicken: Vec<u32>,
    #[arg(long)]
    #[serde(default)]
    hide_edges: bool,
    #[command(flatten)]
    #[serde(flatten)]
    sink: Sink,
}

struct Loaded {
    name: String,
    cloud: PointCloud,
    coloring: Coloring,
    metric: Metric,
    closed_form: Option<f64>,
}

fn load(source: &Source) -> Result<Loaded, CliError> {
    let mut loaded = match (&source.construction, &source.input) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config("give either --construction or --in, not both".into()))
        }
        (None, None) => return Err(CliError::Config("give --construction or --in".into())),
        (Some(name), None) => {
            let inst = build_construction(name, source.torus)?;
            Loaded {
                name: inst.name,
                cloud: inst.cloud,
                coloring: inst.coloring,
                metric: inst.metric,
                closed_form: inst.closed_form,
            }
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))?;
            let doc = PointSetDocument::from_json(&text)?;
            let cloud = doc.to_cloud()?;
            let coloring = doc.coloring(cloud.len())?;
            Loaded {
                name: path.display().to_string(),
                metric: Metric::euclidean_for(cloud.topology()),
                cloud,
                coloring,
                closed_form: None,
            }
        }
    };
    if let Some(m) = source.metric {
        let topology = loaded.cloud.topology();
        loaded.metric = match m {
            MetricArg::Euclidean => Metric::euclidean_for(topology),
            MetricArg::Hex => Metric::hex_for(topology),
        };
    }
    Ok(loaded)
}

fn run(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Gen(a) => {
            let l = load(&a.source)?;
            let doc = PointSetDocument::from_cloud(&l.cloud, Some(&l.coloring));
            write_out(&a.sink.out, &(doc.to_json() + "\n"))
        }
        Command::Ratio(a) => cmd_ratio(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Brute(a) => cmd_brute(a),
        Command::Anneal(a) => cmd_anneal(a),
        Command::Habitat(a) => {
            let l = load(&a.source)?;
            let s = habitat_summary(&l.cloud, &l.coloring.class(0), a.k_max)?;
            let value = json!({
                "name": l.name,
                "summary": s,
                "backyard_bound": (1..=a.k_max)
                    .map(|k| mstratio::check_backyard_bound(&s, k))
                    .collect::<Vec<_>>(),
            });
            write_out(&a.sink.out, &output::to_json(&value))
        }
        Command::Persist(a) => cmd_persist(a),
        Command::Audit(a) => audit::run(a),
        Command::Render(a) => {
            let l = load(&a.source)?;
            let opts = RenderOptions {
                thickenings: a.thicken.clone(),
                hide_edges: a.hide_edges,
            };
            write_out(&a.sink.out, &render_svg(&l.cloud, &l.coloring, l.metric, &opts)?)
        }
    }
}

fn cmd_ratio(a: &RatioArgs) -> Result<(), CliError> {
    let l = load(&a.source)?;
    let report = multiway_ratio(&l.cloud, &l.coloring, l.metric)?;
    let mut value = json!({
        "name": l.name,
        "points": l.cloud.len(),
        "metric": l.metric,
        "len_b": report.len_b,
        "len_complement": report.len_complement,
        "len_a": report.len_a,
        "ratio": report.ratio,
        "counts": report.counts,
        "class_lengths": report.class_lengths,
        "supmax_ok": supmax_check(&report),
    });
    if let Some(c) = l.closed_form {
        value["closed_form"] = json!(c);
    }
    let both_classes = l.coloring.arity() == 2 && report.counts.iter().all(|&c| c > 0);
    if both_classes {
        let norms = chromatic_norms(&l.cloud, &l.coloring, l.metric, CutoffPolicy::ExcludeInfinite)?;
        value["norms_excluding_infinity"] = json!({
            "domain": norms.domain_norm,
            "image": norms.image_norm,
            "kernel": norms.kernel_norm,
        });
    }
    write_out(&a.sink.out, &output::to_json(&value))
}

fn parse_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("range {spec:?} is not start:end:step"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, end, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || end < start {
        return Err(bad());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| start + k as f64 * step).collect())
}

fn cmd_sweep(a: &SweepArgs) -> Result<(), CliError> {
    let mut values = a.values.clone();
    if let Some(r) = &a.range {
        values.extend(parse_range(r)?);
    }
    if values.is_empty() {
        return Err(CliError::Config("the parameter range is empty".into()));
    }
    let key = if a.family == "stretched" { "r" } else { "n" };
    let rows: Vec<Result<String, CliError>> = values
        .par_iter()
        .map(|&v| {
            let param = output::fmt(v);
            let inst = build_construction(&format!("{}:{key}={param}", a.family), None)?;
            let r = multiway_ratio(&inst.cloud, &inst.coloring, inst.metric)?;
            let (closed, diff) = match inst.closed_form {
                Some(c) => (output::fmt(c), output::fmt((r.ratio - c).abs())),
                None => (String::new(), String::new()),
            };
            Ok(format!("{param},{},{closed},{diff}\n", output::fmt(r.ratio)))
        })
        .collect();
    let mut out = String::from("param,ratio,closed_form,abs_diff\n");
    for row in rows {
        out.push_str(&row?);
    }
    write_out(&a.sink.out, &out)
}

fn cmd_brute(a: &BruteArgs) -> Result<(), CliError> {
    let l = load(&a.source)?;
    let (coloring, report) = match a.samples {
        Some(s) => sample_max(&l.cloud, l.metric, s, a.seed)?,
        None => brute_force_max(&l.cloud, l.metric, a.max_points)?,
    };
    let value = json!({
        "name": l.name,
        "mode": if a.samples.is_some() { "sampled" } else { "exhaustive" },
        "ratio": report.ratio,
        "report": report,
        "labels": coloring.labels(),
    });
    write_out(&a.sink.out, &output::to_json(&value))
}

fn cmd_anneal(a: &AnnealArgs) -> Result<(), CliError> {
    let l = load(&a.source)?;
    let init = if a.keep_coloring {
        l.coloring.clone()
    } else {
        random_coloring(l.cloud.len(), a.seed)
    };
    let schedule = Schedule {
        t0: a.t0,
        alpha: a.alpha,
    };
    let trace = local_search(&l.cloud, l.metric, &init, a.seed, a.budget, schedule)?;
    match a.format {
        Format::Csv => write_out(&a.sink.out, &trace.to_csv()),
        _ => {
            let doc = PointSetDocument::from_cloud(&l.cloud, Some(&trace.best_coloring));
            let value = json!({
                "name": l.name,
                "seed": trace.seed,
                "initial_ratio": trace.initial_ratio,
                "best_ratio": trace.best_ratio,
                "accepted_steps": trace.steps.len(),
                "local_max": trace.local_max,
                "best": doc,
            });
            write_out(&a.sink.out, &output::to_json(&value))
        }
    }
}

fn cmd_persist(a: &PersistArgs) -> Result<(), CliError> {
    let l = load(&a.source)?;
    let policy = match a.cutoff.as_str() {
        "max-finite" => CutoffPolicy::MaxFiniteDeath,
        "exclude" => CutoffPolicy::ExcludeInfinite,
        q => CutoffPolicy::Fixed(
            q.parse()
                .map_err(|_| CliError::Config(format!("bad cutoff {q:?}")))?,
        ),
    };
    let norms = chromatic_norms(&l.cloud, &l.coloring, l.metric, policy)?;
    if a.format == Format::Csv {
        let subset = match a.diagram.as_str() {
            "b" => l.coloring.class(0),
            "c" => l.coloring.class(1),
            "a" => (0..l.cloud.len()).collect(),
            d => return Err(CliError::Config(format!("unknown diagram {d:?}"))),
        };
        let diagram = zero_dim_diagram(&l.cloud, &subset, l.metric, f64::INFINITY)?;
        return write_out(&a.sink.out, &diagram.to_csv());
    }
    let value = json!({
        "name": l.name,
        "norms": norms,
        "ratio_from_norms": ratio_from_norms(&norms)?,
    });
    write_out(&a.sink.out, &output::to_json(&value))
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("MSTRATIO_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Config(format!("MSTRATIO_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn resolve(cli: &Cli) -> Result<Command, CliError> {
    match (&cli.config, &cli.command) {
        (Some(path), None) => read_config(path),
        (None, Some(c)) => Ok(c.clone()),
        (Some(_), Some(_)) => Err(CliError::Config("--config replaces the subcommand".into())),
        (None, None) => Err(CliError::Config("no subcommand given".into())),
    }
}

fn read_config(path: &Path) -> Result<Command, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| {
        let command = resolve(&cli)?;
        if let Some(path) = &cli.save_config {
            let text = serde_json::to_string_pretty(&command).expect("config serializes") + "\n";
            fs::write(path, text).map_err(|e| CliError::Io(path.clone(), e))?;
        }
        run(&command)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mstratio: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
