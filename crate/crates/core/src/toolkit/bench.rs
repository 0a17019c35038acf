//! Batch runs over a directory of instance files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Weight;
use crate::search::{solve_with, SolveOptions, Strategy, TourResult};
use crate::toolkit::io::read_instance;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub id: String,
    pub n: usize,
    pub optimal: bool,
    pub cost: Option<Weight>,
    pub nodes: u64,
    pub leaves: u64,
    pub mu0: Weight,
    pub seconds: f64,
}

impl BenchRecord {
    /// `leaves / 2^(0.3 mu0)`.
    pub fn ratio(&self) -> f64 {
        self.leaves as f64 / 2f64.powf(0.3 * self.mu0.to_f64().unwrap_or(0.0))
    }
}

#[derive(Clone, Debug, Default)]
pub struct BenchTable {
    pub records: Vec<BenchRecord>,
    /// Files that could not be read or solved, with the reason.
    pub errors: Vec<(String, String)>,
}

impl BenchTable {
    pub fn max_ratio(&self) -> Option<f64> {
        self.records.iter().map(BenchRecord::ratio).reduce(f64::max)
    }

    /// Tab-separated rows with a header, then the aggregate ratio.
    pub fn render(&self) -> String {
        let mut s = String::from("id\tn\tstatus\tcost\tnodes\tleaves\tmu0\tseconds\n");
        for r in &self.records {
            let status = if r.optimal { "OPTIMAL" } else { "INFEASIBLE" };
            let cost = r.cost.as_ref().map_or("-".to_string(), |c| c.to_string());
            let _ = writeln!(
                s,
                "{}\t{}\t{status}\t{cost}\t{}\t{}\t{}\t{:.4}",
                r.id, r.n, r.nodes, r.leaves, r.mu0, r.seconds
            );
        }
        if let Some(m) = self.max_ratio() {
            let _ = writeln!(s, "max_ratio\t{m:.6}");
        }
        s
    }
}

#[derive(Clone, Debug, Default)]
pub struct BenchOptions {
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub strategy: Strategy,
}

fn run_one(path: &Path, strategy: Strategy) -> Result<BenchRecord> {
    let inst = read_instance(path)?;
    let opts = SolveOptions { strategy, audit: true, ..Default::default() };
    let start = Instant::now();
    let sol = solve_with(&inst, &opts)?;
    let seconds = start.elapsed().as_secs_f64();
    let report = sol.report.expect("audit requested");
    let (optimal, cost) = match sol.result {
        TourResult::Optimal { cost, .. } => (true, Some(cost)),
        TourResult::Infeasible => (false, None),
    };
    Ok(BenchRecord {
        id: path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
        n: inst.n(),
        optimal,
        cost,
        nodes: sol.stats.nodes,
        leaves: sol.stats.leaves,
        mu0: report.mu0,
        seconds,
    })
}

/// Solves every regular file in `dir` with the audit enabled. Records are
/// ordered by file name.
pub fn bench(dir: impl AsRef<Path>, opts: &BenchOptions) -> Result<BenchTable> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let results: Vec<(String, Result<BenchRecord>)> = pool.install(|| {
        files.par_iter().map(|p| (p.display().to_string(), run_one(p, opts.strategy))).collect()
    });
    let mut table = BenchTable::default();
    for (name, r) in results {
        match r {
            Ok(rec) => table.records.push(rec),
            Err(e) => table.errors.push((name, e.to_string())),
        }
    }
    Ok(table)
}
