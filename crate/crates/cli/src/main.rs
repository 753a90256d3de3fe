//! Multi-seed experiment runner.
//!
//! ```text
//! commdet --graph karate.txt --backend exact --subproblem-size 25 --seeds 30
//! commdet --graph karate.txt --backends exact,anneal,qaoa --max-qubits 25
//! ```

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use commdet::experiment::{comparison_to_json, csv_document, run_seed, ExperimentSummary};
use commdet::{
    read_edge_list, AnnealConfig, Backend, Graph, QaoaConfig, QaoaOptimizer, SearchConfig,
    SolverKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Optimizer {
    /// Grid seeding refined by Nelder-Mead
    GridNm,
    Grid,
}

#[derive(Debug, Parser)]
#[command(
    name = "commdet",
    version,
    about = "Two-way modularity community detection with pluggable subproblem solvers"
)]
struct Args {
    /// Edge-list file ('%' or '#' comments, two labels per line)
    #[arg(long)]
    graph: PathBuf,

    /// Name reported in the output (defaults to the file stem)
    #[arg(long)]
    graph_name: Option<String>,

    #[arg(long, value_parser = parse_kind, conflicts_with = "backends", default_value = "exact")]
    backend: SolverKind,

    /// Comma-separated backends to compare on the same seeds
    #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
    backends: Option<Vec<SolverKind>>,

    #[arg(long, default_value_t = 25)]
    subproblem_size: usize,

    /// Run seeds 0..N
    #[arg(long, default_value_t = 30, conflicts_with = "seed_list")]
    seeds: u64,

    /// Explicit comma-separated seeds
    #[arg(long, value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,

    #[arg(long, default_value_t = 500)]
    max_iters: usize,

    /// Defaults to 1 for exact and 5 for stochastic backends
    #[arg(long)]
    patience: Option<usize>,

    #[arg(long, default_value_t = 2)]
    qaoa_depth: usize,

    #[arg(long, default_value_t = 1024)]
    qaoa_samples: usize,

    #[arg(long, value_enum, default_value_t = Optimizer::GridNm)]
    qaoa_optimizer: Optimizer,

    #[arg(long, default_value_t = 8)]
    qaoa_grid_points: usize,

    #[arg(long, default_value_t = 20)]
    max_qubits: usize,

    #[arg(long, default_value_t = 1000)]
    sweeps: usize,

    #[arg(long, default_value_t = 10)]
    restarts: usize,

    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for running seeds (defaults to available cores)
    #[arg(long)]
    jobs: Option<usize>,
}

fn parse_kind(s: &str) -> Result<SolverKind, String> {
    s.parse::<SolverKind>().map_err(|e| e.to_string())
}

impl Args {
    fn backend_kinds(&self) -> Vec<SolverKind> {
        match &self.backends {
            Some(list) => list.clone(),
            None => vec![self.backend],
        }
    }

    fn seeds(&self) -> Vec<u64> {
        match &self.seed_list {
            Some(list) => list.clone(),
            None => (0..self.seeds).collect(),
        }
    }

    fn backend(&self, kind: SolverKind) -> Backend {
        match kind {
            SolverKind::Exact => Backend::Exact,
            SolverKind::Anneal => Backend::Anneal(AnnealConfig {
                sweeps: self.sweeps,
                restarts: self.restarts,
                ..AnnealConfig::default()
            }),
            SolverKind::Qaoa => Backend::Qaoa(QaoaConfig {
                depth: self.qaoa_depth,
                samples: self.qaoa_samples,
                optimizer: match self.qaoa_optimizer {
                    Optimizer::GridNm => QaoaOptimizer::GridThenNelderMead,
                    Optimizer::Grid => QaoaOptimizer::GridOnly,
                },
                grid_points_per_angle: self.qaoa_grid_points,
                max_qubits: self.max_qubits,
                ..QaoaConfig::default()
            }),
        }
    }

    fn search_config(&self, kind: SolverKind) -> SearchConfig {
        let mut cfg = SearchConfig::new(self.backend(kind), 0);
        cfg.subproblem_size = self.subproblem_size;
        cfg.max_iters = self.max_iters;
        if let Some(p) = self.patience {
            cfg.patience = p;
        }
        cfg
    }

    fn graph_name(&self) -> String {
        self.graph_name.clone().unwrap_or_else(|| {
            self.graph
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "graph".to_owned())
        })
    }

    /// Checks that clap cannot express; failures here are usage errors.
    fn validate(&self) -> anyhow::Result<()> {
        let kinds = self.backend_kinds();
        if self.backends.is_some() && kinds.len() < 2 {
            bail!("--backends needs at least two backends (use --backend for one)");
        }
        let mut unique = kinds.clone();
        unique.sort_by_key(|k| k.name());
        unique.dedup();
        if unique.len() != kinds.len() {
            bail!("--backends lists a backend more than once");
        }
        if self.seeds().is_empty() {
            bail!("at least one seed is required");
        }
        if self.subproblem_size == 0 || self.max_iters == 0 || self.patience == Some(0) {
            bail!("--subproblem-size, --max-iters and --patience must be at least 1");
        }
        if self.jobs == Some(0) {
            bail!("--jobs must be at least 1");
        }
        Ok(())
    }
}

fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let graph = read_edge_list(BufReader::new(file))
        .with_context(|| format!("cannot read {}", path.display()))?
        .with_context(|| format!("cannot parse {}", path.display()))?;
    Ok(graph)
}

fn run(args: &Args) -> anyhow::Result<String> {
    let graph = load_graph(&args.graph)?;
    let name = args.graph_name();
    let seeds = args.seeds();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().context("cannot start worker pool")?;

    let mut summaries = Vec::new();
    for kind in args.backend_kinds() {
        let cfg = args.search_config(kind);
        let per_seed = pool
            .install(|| {
                seeds
                    .par_iter()
                    .map(|&seed| run_seed(&graph, &cfg, &cfg.backend, seed))
                    .collect::<Result<Vec<_>, _>>()
            })
            .with_context(|| format!("{kind} backend failed"))?;
        summaries.push(ExperimentSummary::new(name.clone(), kind.name(), per_seed));
    }

    Ok(match (args.format, args.backends.is_some()) {
        (Format::Csv, _) => csv_document(&summaries),
        (Format::Json, true) => comparison_to_json(&name, &summaries),
        (Format::Json, false) => summaries[0].to_json(),
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Err(e) = args.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let text = match run(&args) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let written = match &args.output {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("cannot write to stdout"),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
