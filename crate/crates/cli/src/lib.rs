//! Solver dispatch, benchmark harness and report formatting behind the `srg`
//! binary.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use srg_core::constructive::{hfo_solve, ro_solve};
use srg_core::fitness::evaluate;
use srg_core::{
    aco, ga, load_instance, AcoConfig, ColumnMode, FitnessConfig, FitnessMode, GaConfig, Grouping,
    GroupingFile, Instance, PenaltyBreakdown,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Algorithm {
    Hfo,
    Ro,
    Aco,
    Ga,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Hfo, Algorithm::Ro, Algorithm::Aco, Algorithm::Ga];

    pub fn is_deterministic(self) -> bool {
        self == Algorithm::Hfo
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Hfo => "HFO",
            Algorithm::Ro => "RO",
            Algorithm::Aco => "ACO",
            Algorithm::Ga => "GA",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hfo" => Ok(Algorithm::Hfo),
            "ro" => Ok(Algorithm::Ro),
            "aco" => Ok(Algorithm::Aco),
            "ga" => Ok(Algorithm::Ga),
            _ => Err(format!("unknown algorithm `{s}` (expected hfo, ro, aco or ga)")),
        }
    }
}

/// Everything a solver run needs apart from the instance and seed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub fitness: FitnessConfig,
    pub aco: AcoConfig,
    pub ga: GaConfig,
}

impl SolverSettings {
    pub fn with_mode(mut self, mode: ColumnMode) -> Self {
        self.fitness.limits = self.fitness.limits.with_mode(mode);
        self
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub grouping: Grouping,
    pub breakdown: PenaltyBreakdown,
    pub wall_time: f64,
}

/// Runs one solver. `seed` is ignored by HFO.
pub fn solve_once(instance: &Instance, algorithm: Algorithm, settings: &SolverSettings, seed: u64) -> Solution {
    let start = Instant::now();
    let fitness = &settings.fitness;
    let (grouping, breakdown) = match algorithm {
        Algorithm::Hfo => {
            let g = hfo_solve(instance, fitness);
            let b = evaluate(instance, &g, fitness);
            (g, b)
        }
        Algorithm::Ro => {
            let g = ro_solve(instance, fitness, seed);
            let b = evaluate(instance, &g, fitness);
            (g, b)
        }
        Algorithm::Aco => {
            let out = aco::aco_solve(instance, &settings.aco.with_seed(seed), fitness);
            (out.grouping, out.breakdown)
        }
        Algorithm::Ga => {
            let out = ga::ga_solve(instance, &settings.ga.with_seed(seed), fitness);
            (out.grouping, out.breakdown)
        }
    };
    Solution {
        grouping,
        breakdown,
        wall_time: start.elapsed().as_secs_f64(),
    }
}

/// File written by `srg solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub settings: SolverSettings,
    pub breakdown: PenaltyBreakdown,
    pub grouping: GroupingFile,
}

impl SolutionFile {
    pub fn new(instance: &Instance, algorithm: Algorithm, settings: &SolverSettings, seed: u64, solution: &Solution) -> Self {
        SolutionFile {
            algorithm,
            seed,
            settings: *settings,
            breakdown: solution.breakdown,
            grouping: solution.grouping.to_file(instance),
        }
    }
}

/// Reads a grouping from either a solution file or a bare grouping file.
pub fn read_grouping_file(path: &Path) -> Result<GroupingFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let inner = value.get("grouping").cloned().unwrap_or(value);
    serde_json::from_value(inner).with_context(|| format!("{} is not a grouping", path.display()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub fitness: f64,
    pub groups: usize,
    pub feasible: bool,
    pub wall_time: f64,
}

/// Repeated runs of one algorithm on one instance under one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub algorithm: Algorithm,
    pub columns: ColumnMode,
    pub fitness_mode: FitnessMode,
    pub runs: Vec<RunRecord>,
    pub min: f64,
    pub max: f64,
    pub avg: f64,
}

impl RunReport {
    pub fn from_runs(instance: &str, algorithm: Algorithm, settings: &SolverSettings, runs: Vec<RunRecord>) -> Self {
        let fitness: Vec<f64> = runs.iter().map(|r| r.fitness).collect();
        let min = fitness.iter().copied().fold(f64::INFINITY, f64::min);
        let max = fitness.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let avg = fitness.iter().sum::<f64>() / fitness.len().max(1) as f64;
        RunReport {
            instance: instance.to_string(),
            algorithm,
            columns: settings.fitness.limits.mode,
            fitness_mode: settings.fitness.mode,
            runs,
            min,
            max,
            // keeps min <= avg <= max despite summation rounding
            avg: avg.clamp(min, max),
        }
    }
}

/// Runs `runs` seeded repetitions (seeds `base_seed + i`). HFO runs once and
/// its record is replicated.
pub fn run_repeated(
    instance: &Instance,
    algorithm: Algorithm,
    settings: &SolverSettings,
    runs: usize,
    base_seed: u64,
) -> RunReport {
    let record = |seed: u64| {
        let s = solve_once(instance, algorithm, settings, seed);
        RunRecord {
            seed,
            fitness: s.breakdown.fitness,
            groups: s.breakdown.group_count,
            feasible: s.breakdown.is_feasible(),
            wall_time: s.wall_time,
        }
    };
    let records = if algorithm.is_deterministic() {
        let first = record(base_seed);
        (0..runs as u64)
            .map(|i| RunRecord {
                seed: base_seed + i,
                ..first.clone()
            })
            .collect()
    } else {
        (0..runs as u64)
            .into_par_iter()
            .map(|i| record(base_seed + i))
            .collect()
    };
    RunReport::from_runs(instance.name(), algorithm, settings, records)
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub runs: usize,
    pub base_seed: u64,
    pub columns: Vec<ColumnMode>,
    pub algorithms: Vec<Algorithm>,
    /// Run every algorithm in dynamic mode instead of ACO only.
    pub all_dynamic: bool,
    pub cohort_year: Option<u32>,
    pub settings: SolverSettings,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            runs: 10,
            base_seed: 0,
            columns: vec![ColumnMode::Fixed, ColumnMode::Dynamic],
            algorithms: Algorithm::ALL.to_vec(),
            all_dynamic: false,
            cohort_year: None,
            settings: SolverSettings::default(),
        }
    }
}

impl BenchOptions {
    fn algorithms_for(&self, columns: ColumnMode) -> Vec<Algorithm> {
        match columns {
            ColumnMode::Dynamic if !self.all_dynamic => {
                self.algorithms.iter().copied().filter(|&a| a == Algorithm::Aco).collect()
            }
            _ => self.algorithms.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceError {
    pub path: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub runs: usize,
    pub base_seed: u64,
    pub reports: Vec<RunReport>,
    pub errors: Vec<InstanceError>,
}

impl BenchReport {
    pub fn find(&self, instance: &str, algorithm: Algorithm, columns: ColumnMode) -> Option<&RunReport> {
        self.reports
            .iter()
            .find(|r| r.instance == instance && r.algorithm == algorithm && r.columns == columns)
    }

    /// One table per column mode: a row per instance, min/max/avg columns per
    /// algorithm, fitness to two decimals.
    pub fn markdown(&self) -> String {
        let mut out = String::new();
        for columns in [ColumnMode::Fixed, ColumnMode::Dynamic] {
            let rows: Vec<&RunReport> = self.reports.iter().filter(|r| r.columns == columns).collect();
            if rows.is_empty() {
                continue;
            }
            let mut algorithms: Vec<Algorithm> = Vec::new();
            let mut instances: Vec<&str> = Vec::new();
            for r in &rows {
                if !algorithms.contains(&r.algorithm) {
                    algorithms.push(r.algorithm);
                }
                if !instances.contains(&r.instance.as_str()) {
                    instances.push(&r.instance);
                }
            }
            let label = match columns {
                ColumnMode::Fixed => "fixed",
                ColumnMode::Dynamic => "dynamic",
            };
            let _ = writeln!(
                out,
                "### {label} columns, {} fitness, {} run(s), base seed {}\n",
                rows[0].fitness_mode, self.runs, self.base_seed
            );
            out.push_str("| Instance |");
            for a in &algorithms {
                let _ = write!(out, " {a} min | {a} max | {a} avg |");
            }
            out.push_str("\n|---|");
            out.push_str(&"---:|".repeat(algorithms.len() * 3));
            out.push('\n');
            for inst in instances {
                let _ = write!(out, "| {inst} |");
                for &a in &algorithms {
                    match rows.iter().find(|r| r.instance == inst && r.algorithm == a) {
                        Some(r) => {
                            let _ = write!(out, " {:.2} | {:.2} | {:.2} |", r.min, r.max, r.avg);
                        }
                        None => out.push_str(" - | - | - |"),
                    }
                }
                out.push('\n');
            }
            out.push('\n');
        }
        if !self.errors.is_empty() {
            out.push_str("### errors\n\n| File | Error |\n|---|---|\n");
            for e in &self.errors {
                let _ = writeln!(out, "| {} | {} |", e.path, e.error.replace('|', "\\|"));
            }
        }
        out
    }
}

/// Instance files (`.csv`, `.tsv`, `.txt`) in a directory, sorted by name.
pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading directory {}", dir.display()))? {
        let path = entry?.path();
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        if path.is_file() && matches!(ext.as_deref(), Some("csv" | "tsv" | "txt")) {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        bail!("no instance files (.csv, .tsv, .txt) in {}", dir.display());
    }
    Ok(files)
}

/// Benchmarks every instance file. Unreadable files become error rows.
pub fn bench(files: &[PathBuf], options: &BenchOptions) -> BenchReport {
    let mut instances = Vec::new();
    let mut errors = Vec::new();
    for path in files {
        match load_instance(path, options.cohort_year) {
            Ok(i) => instances.push(i),
            Err(e) => errors.push(InstanceError {
                path: path.display().to_string(),
                error: e.to_string(),
            }),
        }
    }

    let mut cells = Vec::new();
    for &columns in &options.columns {
        let settings = options.settings.with_mode(columns);
        for algorithm in options.algorithms_for(columns) {
            for instance in &instances {
                cells.push((instance, algorithm, settings));
            }
        }
    }
    let reports = cells
        .par_iter()
        .map(|(instance, algorithm, settings)| {
            run_repeated(instance, *algorithm, settings, options.runs, options.base_seed)
        })
        .collect();

    BenchReport {
        runs: options.runs,
        base_seed: options.base_seed,
        reports,
        errors,
    }
}
