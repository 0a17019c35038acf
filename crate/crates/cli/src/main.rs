use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cubic_tsp::connectivity::{circuit_partition, dump_circuits, is_2_edge_connected};
use cubic_tsp::reductions::{reduce_to_fixpoint, Outcome};
use cubic_tsp::search::{solve_with, Solution, SolveOptions, Strategy, TourResult};
use cubic_tsp::toolkit::{
    bench, default_seed, exhaustive_forced, generate, held_karp, random_four_cycles, read_instance, serialize, BenchOptions,
    GeneratorSpec, Kind, Named, WeightSpec,
};
use cubic_tsp::{Error, Instance};

#[derive(Parser)]
#[command(name = "cubic-tsp", version, about = "Exact forced TSP on multigraphs of maximum degree 3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Full,
    Simple,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Dp,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    RandomCubic,
    Cycle,
    FourCycles,
    Petersen,
    K4,
    K33,
    Prism,
    MoebiusKantor,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "full")]
        strategy: StrategyArg,
        /// Search statistics and the root circuit structure on stderr.
        #[arg(long)]
        stats: bool,
        /// Measure audit summary on stderr.
        #[arg(long)]
        audit: bool,
        /// Enumerate all matchings in the 4-cycle base case.
        #[arg(long)]
        fourcycle_bruteforce: bool,
        /// One stderr line per reduction step.
        #[arg(long)]
        trace_reductions: bool,
    },
    /// Solve with a reference algorithm.
    Oracle {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "dp")]
        method: Method,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long, value_enum, default_value = "random-cubic")]
        kind: GenKind,
        /// Vertex count, or number of squares for `four-cycles`.
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        allow_parallel: bool,
        /// Unit weights instead of random rationals.
        #[arg(long)]
        unit: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve every file in a directory and tabulate the runs.
    Bench {
        dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Solve with the full measure audit and print the report.
    Audit { file: PathBuf },
}

fn load(file: &PathBuf) -> Result<Instance> {
    read_instance(file).with_context(|| format!("reading {}", file.display()))
}

/// Prints the result and returns the exit code for it.
fn report(inst: &Instance, result: &TourResult) -> u8 {
    match result {
        TourResult::Optimal { cost, edges } => {
            println!("OPTIMAL {cost}");
            let mut pairs: Vec<(u32, u32)> = edges
                .iter()
                .map(|&e| {
                    let (a, b) = inst.graph.edge(e).ends;
                    (a.0.min(b.0) + 1, a.0.max(b.0) + 1)
                })
                .collect();
            pairs.sort();
            for (a, b) in pairs {
                println!("{a} {b}");
            }
            0
        }
        TourResult::Infeasible => {
            println!("INFEASIBLE");
            1
        }
    }
}

fn root_structure(inst: &Instance) -> Result<String> {
    let (reduced, log, outcome) = reduce_to_fixpoint(inst)?;
    let mut s = format!("root_reductions: {}\n", log.len());
    match outcome {
        Outcome::Reduced => {
            for h in reduced.u_components() {
                if !h.is_trivial() && is_2_edge_connected(&reduced, &h) {
                    s.push_str(&dump_circuits(&circuit_partition(&reduced, &h)?));
                }
            }
        }
        Outcome::Solved(_) => s.push_str("root: solved by reduction\n"),
        Outcome::Infeasible(w) => s.push_str(&format!("root: infeasible ({})\n", w.name())),
    }
    Ok(s)
}

fn print_stats(sol: &Solution) {
    let st = &sol.stats;
    eprintln!("nodes: {}", st.nodes);
    eprintln!("leaves: {}", st.leaves);
    eprintln!("max_depth: {}", st.max_depth);
    eprintln!("base_cases: {}", st.base_cases);
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve { file, strategy, stats, audit, fourcycle_bruteforce, trace_reductions } => {
            let inst = load(&file)?;
            let strategy = match strategy {
                StrategyArg::Full => Strategy::Full,
                StrategyArg::Simple => Strategy::Simple,
            };
            let opts = SolveOptions { strategy, audit, trace: trace_reductions, fourcycle_bruteforce, ..Default::default() };
            let sol = solve_with(&inst, &opts)?;
            for line in &sol.trace {
                eprintln!("{line}");
            }
            if stats {
                print_stats(&sol);
                eprint!("{}", root_structure(&inst)?);
            }
            if let Some(r) = &sol.report {
                eprint!("{}", r.render());
            }
            Ok(report(&inst, &sol.result))
        }
        Command::Oracle { file, method } => {
            let inst = load(&file)?;
            let result = match method {
                Method::Dp => held_karp(&inst)?,
                Method::Exhaustive => exhaustive_forced(&inst)?,
            };
            Ok(report(&inst, &result))
        }
        Command::Gen { kind, n, seed, allow_parallel, unit, out } => {
            let seed = seed.unwrap_or_else(default_seed);
            let weights = if unit { WeightSpec::Unit } else { WeightSpec::default() };
            let inst = match kind {
                GenKind::FourCycles => random_four_cycles(n, 0.3, seed, weights)?,
                other => {
                    let kind = match other {
                        GenKind::RandomCubic => Kind::RandomCubic { n },
                        GenKind::Cycle => Kind::Cycle { n },
                        GenKind::Petersen => Kind::Named(Named::Petersen),
                        GenKind::K4 => Kind::Named(Named::K4),
                        GenKind::K33 => Kind::Named(Named::K33),
                        GenKind::Prism => Kind::Named(Named::Prism),
                        GenKind::MoebiusKantor => Kind::Named(Named::MoebiusKantor),
                        GenKind::FourCycles => unreachable!(),
                    };
                    generate(&GeneratorSpec { kind, seed, weights, allow_parallel })?
                }
            };
            let text = serialize(&inst);
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Bench { dir, jobs } => {
            if !dir.is_dir() {
                bail!("{} is not a directory", dir.display());
            }
            let table = bench(&dir, &BenchOptions { jobs, ..Default::default() })?;
            print!("{}", table.render());
            for (file, err) in &table.errors {
                eprintln!("error: {file}: {err}");
            }
            Ok(0)
        }
        Command::Audit { file } => {
            let inst = load(&file)?;
            let opts = SolveOptions { audit: true, ..Default::default() };
            let sol = solve_with(&inst, &opts)?;
            let code = report(&inst, &sol.result);
            if let Some(r) = &sol.report {
                print!("{}", r.render());
            }
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = matches!(e.downcast_ref::<Error>(), Some(Error::Internal(_) | Error::InvalidState(_)));
            ExitCode::from(if internal { 3 } else { 2 })
        }
    }
}
