//! `reeb-synth` command-line tool.
//!
//! Exit codes: 0 on success, 1 when the input is well formed but a check
//! fails, 2 on unreadable or malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use reeb_synth::exec::Exec;
use reeb_synth::graph::{
    check_theorem2_conditions, check_theorem6_conditions, classify_route, parse_graph, LabeledGraph, Mode,
};
use reeb_synth::mesh::{parse_rmesh, ScalarMesh};
use reeb_synth::plan::{plan, plan_graph, simulate_fiber_transitions};
use reeb_synth::random::{gen_random_with, LabelMode, RandomOptions};
use reeb_synth::reeb::build_augmented_reeb;
use reeb_synth::synth::synthesize;
use reeb_synth::verify::{roundtrip_with, verify_roundtrip};

#[derive(Parser)]
#[command(
    name = "reeb-synth",
    version,
    about = "Realize labeled Reeb graphs as PL surfaces and check them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph and report its vertex conditions and routes.
    Validate {
        graph: PathBuf,
        /// Print the graph as DOT instead.
        #[arg(long)]
        dot: bool,
    },
    /// Build the construction plan and sweep its fiber transitions.
    Plan {
        graph: PathBuf,
        /// Fiber dimension; defaults to the graph's own mode.
        #[arg(long)]
        dim: Option<u32>,
        /// Write the plan as JSON here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Mesh a binary graph.
    Synthesize {
        graph: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write an OFF file with a generated layout.
        #[arg(long)]
        off: Option<PathBuf>,
    },
    /// Compute the Reeb graph of a mesh.
    Reeb {
        mesh: PathBuf,
        /// Keep regular nodes instead of smoothing them out.
        #[arg(long)]
        augmented: bool,
        #[arg(long)]
        dot: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that a mesh realizes a graph.
    Verify {
        graph: PathBuf,
        mesh: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Synthesize and verify one graph, or a batch of random graphs.
    Roundtrip {
        graph: Option<PathBuf>,
        #[arg(long)]
        batch: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Vertex count of random graphs; cycles from 2 up to this value.
        #[arg(long, default_value_t = 12)]
        vertices: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print a random connected graph.
    GenRandom {
        #[arg(long, default_value_t = 8)]
        vertices: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra edges beyond a spanning tree.
        #[arg(long)]
        extra: Option<usize>,
        #[arg(long, value_enum, default_value_t = Labels::Mixed)]
        labels: Labels,
        /// Generate a general-mode graph of this dimension.
        #[arg(long)]
        general: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Labels {
    Mixed,
    Zero,
    One,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Domain(String),
    Input(String),
}

type CmdResult = Result<(), Failure>;

fn input<E: std::fmt::Display>(context: &Path) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", context.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(input(path))
}

fn read_graph(path: &Path) -> Result<LabeledGraph, Failure> {
    parse_graph(&read(path)?).map_err(input(path))
}

fn read_mesh(path: &Path) -> Result<ScalarMesh, Failure> {
    parse_rmesh(&read(path)?).map_err(input(path))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(input(path))?;
    tmp.write_all(contents.as_bytes()).map_err(input(path))?;
    tmp.persist(path)
        .map_err(|e| Failure::Input(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

fn emit(output: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match output {
        Some(path) => write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn validate(path: &Path, dot: bool) -> CmdResult {
    let g = read_graph(path)?;
    if dot {
        print!("{}", g.to_dot());
        return Ok(());
    }
    println!(
        "{}: {} vertices, {} edges, mode {}",
        path.display(),
        g.vertex_count(),
        g.edges().len(),
        match g.mode() {
            Mode::Binary => "binary".to_string(),
            Mode::General { dimension } => format!("general {dimension}"),
        }
    );
    let report = match g.mode() {
        Mode::Binary => check_theorem2_conditions(&g),
        Mode::General { .. } => check_theorem6_conditions(&g),
    };
    for c in &report.checks {
        println!(
            "vertex {}: {} ({})",
            c.vertex,
            if c.pass { "ok" } else { "needs folds" },
            c.reason
        );
    }
    if g.mode() == Mode::Binary {
        for (v, tag) in classify_route(&g) {
            println!(
                "route {v}: {}",
                serde_json::to_string(&tag).expect("route serializes")
            );
        }
    } else if !report.pass {
        return Err(Failure::Domain(
            "a degree-1 vertex carries a label above 2".into(),
        ));
    }
    Ok(())
}

fn plan_cmd(path: &Path, dim: Option<u32>, output: Option<&Path>) -> CmdResult {
    let g = read_graph(path)?;
    let planned = match dim {
        None => plan_graph(&g),
        Some(d) => {
            let routes = if d == 1 && g.mode() == Mode::Binary {
                classify_route(&g)
            } else {
                Default::default()
            };
            plan(&g, &routes, d)
        }
    }
    .map_err(|e| Failure::Domain(e.to_string()))?;
    let sim = simulate_fiber_transitions(&planned);
    emit(output, &format!("{}\n", planned.to_json()))?;
    eprintln!(
        "{} models, {} tubes; fiber sweep {}",
        planned.models.len(),
        planned.tubes.len(),
        if sim.pass { "passes" } else { "fails" }
    );
    match sim.failure {
        Some((model, reason)) => Err(Failure::Domain(format!("model {model}: {reason}"))),
        None => Ok(()),
    }
}

fn synthesize_cmd(path: &Path, output: &Path, off: Option<&Path>) -> CmdResult {
    let g = read_graph(path)?;
    let planned = plan_graph(&g).map_err(|e| Failure::Domain(e.to_string()))?;
    let sim = simulate_fiber_transitions(&planned);
    if let Some((model, reason)) = sim.failure {
        return Err(Failure::Domain(format!("model {model}: {reason}")));
    }
    let mesh = synthesize(&planned).map_err(|e| Failure::Domain(e.to_string()))?;
    write_atomic(output, &mesh.to_rmesh())?;
    if let Some(off) = off {
        let laid_out = mesh.clone().with_level_layout();
        write_atomic(
            off,
            &laid_out.to_off().map_err(|e| Failure::Domain(e.to_string()))?,
        )?;
    }
    eprintln!(
        "{} vertices, {} triangles, {} ideal edges, euler characteristic {}",
        mesh.vertex_count(),
        mesh.triangles.len(),
        mesh.ideal.len(),
        mesh.euler_characteristic()
    );
    Ok(())
}

fn reeb_cmd(path: &Path, augmented: bool, dot: bool, output: Option<&Path>) -> CmdResult {
    let mesh = read_mesh(path)?;
    mesh.validate().map_err(|e| Failure::Domain(e.to_string()))?;
    let full = build_augmented_reeb(&mesh).map_err(|e| Failure::Domain(e.to_string()))?;
    let graph = if augmented {
        full
    } else {
        full.smooth_inessential()
    };
    emit(output, &if dot { graph.to_dot() } else { graph.to_rgl() })
}

fn verify_cmd(graph: &Path, mesh: &Path, json: bool) -> CmdResult {
    let g = read_graph(graph)?;
    let m = read_mesh(mesh)?;
    let report = verify_roundtrip(&g, &m);
    print!(
        "{}",
        if json {
            report.to_json() + "\n"
        } else {
            report.to_text()
        }
    );
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Domain("mesh does not realize the graph".into()))
    }
}

fn roundtrip_cmd(
    graph: Option<&Path>,
    batch: Option<usize>,
    seed: u64,
    vertices: usize,
    json: bool,
) -> CmdResult {
    if let Some(path) = graph {
        let g = read_graph(path)?;
        let (_, report) = roundtrip_with(&g, Exec::default()).map_err(|e| Failure::Domain(e.to_string()))?;
        print!(
            "{}",
            if json {
                report.to_json() + "\n"
            } else {
                report.to_text()
            }
        );
        return if report.pass {
            Ok(())
        } else {
            Err(Failure::Domain("round trip failed".into()))
        };
    }
    let count = batch.ok_or_else(|| Failure::Input("give a graph file or --batch N".into()))?;
    let vertices = vertices.max(2);
    let seeds: Vec<u64> = (seed..seed + count as u64).collect();
    // Instances are independent; each one runs sequentially inside.
    let outcomes = Exec::default().map(&seeds, |&s| {
        let n = 2 + (s as usize % (vertices - 1));
        let g = gen_random_with(&RandomOptions::binary(n), s);
        match roundtrip_with(&g, Exec::Sequential) {
            Ok((_, report)) if report.pass => Ok(()),
            Ok((_, report)) => Err(report.failure.unwrap_or_default()),
            Err(e) => Err(e.to_string()),
        }
    });
    let mut failed = 0;
    for (s, outcome) in seeds.iter().zip(&outcomes) {
        if let Err(why) = outcome {
            failed += 1;
            println!("seed {s}: FAIL ({why})");
        }
    }
    println!("{}/{} round trips passed", count - failed, count);
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Domain(format!("{failed} round trips failed")))
    }
}

struct GenArgs {
    vertices: usize,
    seed: u64,
    extra: Option<usize>,
    labels: Labels,
    general: Option<u32>,
}

fn gen_cmd(args: GenArgs, output: Option<&Path>) -> CmdResult {
    let mut opts = match args.general {
        Some(d) if d < 2 => return Err(Failure::Input("--general needs a dimension of at least 2".into())),
        Some(d) => RandomOptions::general(args.vertices, d),
        None => RandomOptions::binary(args.vertices),
    };
    if let Some(extra) = args.extra {
        opts.extra_edges = extra;
    }
    opts.labels = match args.labels {
        Labels::Mixed => LabelMode::Mixed,
        Labels::Zero => LabelMode::AllZero,
        Labels::One => LabelMode::AllOne,
    };
    emit(output, &gen_random_with(&opts, args.seed).to_rgl())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Validate { graph, dot } => validate(&graph, dot),
        Command::Plan { graph, dim, output } => plan_cmd(&graph, dim, output.as_deref()),
        Command::Synthesize { graph, output, off } => synthesize_cmd(&graph, &output, off.as_deref()),
        Command::Reeb {
            mesh,
            augmented,
            dot,
            output,
        } => reeb_cmd(&mesh, augmented, dot, output.as_deref()),
        Command::Verify { graph, mesh, json } => verify_cmd(&graph, &mesh, json),
        Command::Roundtrip {
            graph,
            batch,
            seed,
            vertices,
            json,
        } => roundtrip_cmd(graph.as_deref(), batch, seed, vertices, json),
        Command::GenRandom {
            vertices,
            seed,
            extra,
            labels,
            general,
            output,
        } => gen_cmd(
            GenArgs {
                vertices,
                seed,
                extra,
                labels,
                general,
            },
            output.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
