//! `spiral`: spiral and ring partition analysis of tiling patches.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spiral_core::detect::{DetectOptions, GraphPolicy};
use spiral_core::geometry::Point;

use crate::commands::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "spiral",
    version,
    about = "Find spiral and ring partitions in finite tiling patches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic patch with its ground truth.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Check a patch for overlaps, degenerate tiles and disconnection.
    Validate { input: String },
    /// List contact graph edges.
    Graph {
        input: String,
        #[arg(long, value_enum, default_value_t = GraphArg::Dg)]
        kind: GraphArg,
    },
    /// List edge classes.
    Classify {
        input: String,
        #[arg(long)]
        similarity: bool,
    },
    /// Search all cuts for a spiral partition.
    Analyze {
        input: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check one cut given by class ids.
    Verify {
        input: String,
        /// Segmental class ids, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        classes: Vec<usize>,
        /// Pointwise class ids cut by a K-extension, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        cg_classes: Option<Vec<usize>>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Search for a strong ring partition.
    Ring {
        input: String,
        /// Also run the spiral search and report the combined strength.
        #[arg(long)]
        strength: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Draw a patch, optionally with a report, as SVG.
    Render {
        input: String,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Overlay the direct contact graph.
        #[arg(long)]
        graph: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum GenKind {
    SquareGrid { n: usize },
    RectSpiral { turns: usize },
    AnnulusRings { rings: usize, sectors: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphArg {
    Dg,
    Cg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    DgOnly,
    DgFirst,
    CgAlways,
}

#[derive(Debug, Clone, Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = PolicyArg::DgFirst)]
    graph_policy: PolicyArg,
    #[arg(long, default_value_t = 16)]
    max_classes: usize,
    /// Hamilton search node expansions per candidate.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 32)]
    path_limit: usize,
    /// Required winding of each thread, in radians.
    #[arg(long, default_value_t = std::f64::consts::TAU)]
    min_winding: f64,
    /// Spiral center as `x,y`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    center: Option<Point>,
    #[arg(long)]
    similarity: bool,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let x: f64 = x.trim().parse().map_err(|e| format!("bad x: {e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("bad y: {e}"))?;
    if !(x.is_finite() && y.is_finite()) {
        return Err("coordinates must be finite".into());
    }
    Ok(Point::new(x, y))
}

impl RunArgs {
    fn options(&self) -> Result<DetectOptions, CliError> {
        if self.budget == 0 || self.path_limit == 0 || self.max_classes == 0 {
            return Err(CliError::BadArg("budgets and limits must be positive".into()));
        }
        if !(self.min_winding > 0.0 && self.min_winding.is_finite()) {
            return Err(CliError::BadArg("--min-winding must be positive".into()));
        }
        if self.workers == Some(0) {
            return Err(CliError::BadArg("--workers must be positive".into()));
        }
        Ok(DetectOptions {
            policy: match self.graph_policy {
                PolicyArg::DgOnly => GraphPolicy::DgOnly,
                PolicyArg::DgFirst => GraphPolicy::DgFirst,
                PolicyArg::CgAlways => GraphPolicy::CgAlways,
            },
            max_classes: self.max_classes,
            hamilton_budget: self.budget,
            path_limit: self.path_limit,
            min_winding: self.min_winding,
            center: self.center,
            similarity: self.similarity,
            workers: self.workers,
            ..DetectOptions::default()
        })
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Gen { kind, out } => {
            let spec = match kind {
                GenKind::SquareGrid { n } => spiral_core::corpus::GeneratorSpec::SquareGrid { n },
                GenKind::RectSpiral { turns } => spiral_core::corpus::GeneratorSpec::RectSpiral { turns },
                GenKind::AnnulusRings { rings, sectors } => {
                    spiral_core::corpus::GeneratorSpec::AnnulusRings { rings, sectors }
                }
            };
            commands::gen(spec, out.as_deref())
        }
        Command::Validate { input } => commands::validate(&input),
        Command::Graph { input, kind } => commands::graph(&input, kind == GraphArg::Cg),
        Command::Classify { input, similarity } => commands::classify(&input, similarity),
        Command::Analyze { input, run } => commands::analyze(&input, &run.options()?, run.out.as_deref()),
        Command::Verify {
            input,
            classes,
            cg_classes,
            run,
        } => commands::verify(
            &input,
            &classes,
            cg_classes.as_deref(),
            &run.options()?,
            run.out.as_deref(),
        ),
        Command::Ring { input, strength, run } => commands::ring(&input, strength, &run.options()?, run.out.as_deref()),
        Command::Render {
            input,
            report,
            graph,
            out,
        } => commands::render(&input, report.as_deref(), graph, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::EXIT_INPUT)
        }
    }
}
