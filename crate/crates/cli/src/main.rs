use clap::{Args, Parser, Subcommand, ValueEnum};
use nicolor::harness::{
    csv_row, records_to_json, run_experiment, run_with_colorings, Algorithm, CustomParams, ExperimentSpec, GraphSpec,
    RunRecord, CSV_HEADER,
};
use nicolor::verify::{check_edge_coloring, check_vertex_coloring};
use nicolor::{EdgeColoring, Graph, LegalVariant, MsgMode, VertexColoring};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "nicolor", version, about = "Distributed coloring of graphs with bounded neighborhood independence")]
struct Cli {
    /// Default directory for reports when no explicit output path is given.
    #[arg(long, env = "NICOLOR_OUT_DIR", global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph and write it as an edge list.
    Gen {
        /// Generator, e.g. `gnd:1000,16`, `line:bipartite:9,9`, `hyperline:3,40,200`.
        kind: GraphSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run one experiment and print its JSON report.
    Run(RunArgs),
    /// Check a coloring file against a graph file.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Vertex)]
        kind: Kind,
    },
    /// Sweep a graph template over several degrees and emit CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Vertex,
    Edge,
}

#[derive(Args)]
struct AlgArgs {
    #[arg(long = "alg")]
    algorithm: Option<Algorithm>,
    /// `thm45:3/4`, `thm46`, `thm46:2`, `thm48_3:1/2`, `improved` or `custom`.
    #[arg(long)]
    preset: Option<String>,
    /// `b=..,p=..,lambda=..[,Lambda=..]`.
    #[arg(long)]
    params: Option<CustomParams>,
    /// Neighborhood independence bound; computed when omitted.
    #[arg(long)]
    c: Option<u64>,
    #[arg(long, default_value = "wide")]
    msg_mode: MsgMode,
    /// `fast`, `simple` or `improved`.
    #[arg(long, default_value = "fast")]
    variant: LegalVariant,
    #[arg(long)]
    p_prime: Option<u64>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// `const:k`, `power:a` or `log`.
    #[arg(long = "g")]
    g_fn: Option<String>,
    #[arg(long)]
    round_cap: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    reps: u32,
}

impl AlgArgs {
    fn spec(&self, graph: GraphSpec) -> AnyResult<ExperimentSpec> {
        let algorithm = self.algorithm.ok_or("--alg is required")?;
        Ok(ExperimentSpec {
            preset: self.preset.clone(),
            params: self.params,
            c: self.c,
            msg_mode: self.msg_mode,
            variant: self.variant,
            p_prime: self.p_prime,
            d: self.d,
            kappa: self.kappa,
            eta: self.eta,
            g_fn: self.g_fn.clone(),
            round_cap: self.round_cap,
            seed: self.seed,
            repetitions: self.reps,
            ..ExperimentSpec::new(graph, algorithm)
        })
    }
}

#[derive(Args)]
struct RunArgs {
    /// Generator spec; `file:<path>` reads an edge list.
    #[arg(long, required_unless_present = "spec")]
    graph: Option<GraphSpec>,
    /// A JSON experiment spec; other flags are ignored when given.
    #[arg(long, conflicts_with = "graph")]
    spec: Option<PathBuf>,
    #[command(flatten)]
    alg: AlgArgs,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write the coloring (first repetition) to this file.
    #[arg(long)]
    coloring_out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Generator spec with `{delta}` placeholders, e.g. `line:bipartite:{delta},{delta}`.
    #[arg(long)]
    graph: String,
    /// Values substituted for `{delta}`.
    #[arg(long, value_delimiter = ',', required = true)]
    deltas: Vec<u64>,
    #[command(flatten)]
    alg: AlgArgs,
    /// CSV destination.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write all JSON records here.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type AnyResult<T> = Result<T, Box<dyn std::error::Error>>;

/// Returns whether every produced coloring passed verification.
fn dispatch(cli: Cli) -> AnyResult<bool> {
    let dir = cli.out_dir.as_deref();
    match cli.cmd {
        Cmd::Gen { kind, seed, out } => {
            let g = kind.generate(seed)?;
            emit(out.as_deref(), &g.to_edge_list())?;
            Ok(true)
        }
        Cmd::Verify { graph, coloring, kind } => {
            let g = Graph::parse_edge_list(&std::fs::read_to_string(graph)?)?;
            let text = std::fs::read_to_string(coloring)?;
            let report = match kind {
                Kind::Vertex => check_vertex_coloring(&g, &VertexColoring::parse(&text)?)?,
                Kind::Edge => check_edge_coloring(&g, &EdgeColoring::parse(&text)?)?,
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.passed())
        }
        Cmd::Run(args) => run(args, dir),
        Cmd::Bench(args) => bench(args, dir),
    }
}

fn run(args: RunArgs, dir: Option<&Path>) -> AnyResult<bool> {
    let spec = match (&args.spec, args.graph) {
        (Some(path), _) => serde_json::from_str::<ExperimentSpec>(&std::fs::read_to_string(path)?)?,
        (None, Some(graph)) => args.alg.spec(graph)?,
        (None, None) => return Err("run needs --graph or --spec".into()),
    };
    let runs = run_with_colorings(&spec)?;
    if let (Some(path), Some((_, col))) = (&args.coloring_out, runs.first()) {
        std::fs::write(path, col.to_text())?;
    }
    let records: Vec<RunRecord> = runs.into_iter().map(|(r, _)| r).collect();
    let out = args.out.or_else(|| spec.output.as_ref().map(PathBuf::from)).or_else(|| {
        dir.map(|d| d.join(format!("{}-{}-{}.json", spec.algorithm, sanitize(&spec.graph.to_string()), spec.seed)))
    });
    emit(out.as_deref(), &records_to_json(&records))?;
    Ok(all_passed(&records))
}

fn bench(args: BenchArgs, dir: Option<&Path>) -> AnyResult<bool> {
    let mut records = Vec::new();
    for delta in &args.deltas {
        let graph: GraphSpec = args.graph.replace("{delta}", &delta.to_string()).parse()?;
        records.extend(run_experiment(&args.alg.spec(graph)?)?);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in &records {
        w.write_record(csv_row(r))?;
    }
    let table = String::from_utf8(w.into_inner()?)?;
    let alg = args.alg.algorithm.map_or("none", |a| a.name());
    let stem = format!("bench-{alg}-{}", sanitize(&args.graph));
    let csv_out = args.out.or_else(|| dir.map(|d| d.join(format!("{stem}.csv"))));
    let json_out = args.json.or_else(|| dir.map(|d| d.join(format!("{stem}.json"))));
    emit(csv_out.as_deref(), &table)?;
    if let Some(path) = json_out {
        emit(Some(&path), &serde_json::to_string_pretty(&records)?)?;
    }
    Ok(all_passed(&records))
}

fn all_passed(records: &[RunRecord]) -> bool {
    let ok = records.iter().all(|r| r.verification.passed());
    if !ok {
        eprintln!("verification failed; witnesses are in the report");
    }
    ok
}

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

fn emit(path: Option<&Path>, text: &str) -> AnyResult<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(p, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}
