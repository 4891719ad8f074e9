use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use srg_cli::{
    bench, instance_files, read_grouping_file, solve_once, Algorithm, BenchOptions, SolutionFile,
    SolverSettings,
};
use srg_core::{
    check_constraints, generate_instance, load_instance, write_instance, AcoConfig, ColumnLimits,
    ColumnMode, CrossoverKind, FitnessConfig, FitnessMode, GaConfig, GeneratorSpec, Instance,
    SelectionKind,
};

#[derive(Parser)]
#[command(name = "srg", version, about = "Student result grouping solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and write the grouping as JSON.
    Solve(SolveArgs),
    /// Run repeated seeded solves over a directory of instances.
    Bench(BenchArgs),
    /// Validate a grouping file against an instance.
    Check(CheckArgs),
    /// Generate a synthetic instance.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Fixed,
    Dynamic,
}

impl From<ModeArg> for ColumnMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Fixed => ColumnMode::Fixed,
            ModeArg::Dynamic => ColumnMode::Dynamic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FitnessArg {
    Strict,
    PaperCompat,
}

impl From<FitnessArg> for FitnessMode {
    fn from(m: FitnessArg) -> Self {
        match m {
            FitnessArg::Strict => FitnessMode::Strict,
            FitnessArg::PaperCompat => FitnessMode::PaperCompat,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CrossoverArg {
    SinglePoint,
    TwoPoint,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectionArg {
    Tournament,
    Roulette,
}

#[derive(Args)]
struct ConfigArgs {
    /// Fitness size-term variant.
    #[arg(long, value_enum, default_value = "paper-compat")]
    fitness: FitnessArg,
    /// Override the cohort year (default: latest year in the file).
    #[arg(long)]
    cohort_year: Option<u32>,
    #[arg(long, default_value_t = 13)]
    new_limit: usize,
    #[arg(long, default_value_t = 13)]
    old_limit: usize,
    #[arg(long, default_value_t = 26)]
    total_limit: usize,

    #[arg(long, help_heading = "ACO")]
    aco_rho: Option<f64>,
    #[arg(long, help_heading = "ACO")]
    aco_alpha: Option<f64>,
    #[arg(long, help_heading = "ACO")]
    aco_beta: Option<f64>,
    #[arg(long, help_heading = "ACO")]
    aco_ants: Option<usize>,
    #[arg(long, help_heading = "ACO")]
    aco_iterations: Option<usize>,
    #[arg(long, help_heading = "ACO")]
    aco_stall: Option<usize>,
    #[arg(long, help_heading = "ACO")]
    aco_t_max: Option<f64>,
    #[arg(long, help_heading = "ACO")]
    aco_t_min: Option<f64>,

    #[arg(long, help_heading = "GA")]
    ga_population: Option<usize>,
    #[arg(long, help_heading = "GA")]
    ga_tournament: Option<usize>,
    #[arg(long, help_heading = "GA")]
    ga_p_crossover: Option<f64>,
    #[arg(long, help_heading = "GA")]
    ga_p_mutation: Option<f64>,
    #[arg(long, value_enum, help_heading = "GA")]
    ga_crossover: Option<CrossoverArg>,
    #[arg(long, value_enum, help_heading = "GA")]
    ga_selection: Option<SelectionArg>,
    #[arg(long, help_heading = "GA")]
    ga_stall: Option<usize>,
}

fn probability(name: &str, p: f64) -> Result<f64> {
    anyhow::ensure!((0.0..=1.0).contains(&p), "--{name} must lie in [0, 1], got {p}");
    Ok(p)
}

impl ConfigArgs {
    fn settings(&self, mode: ColumnMode) -> Result<SolverSettings> {
        let limits = ColumnLimits {
            new_limit: self.new_limit,
            old_limit: self.old_limit,
            total_limit: self.total_limit,
            mode,
        };
        let mut aco = AcoConfig::default();
        if let Some(v) = self.aco_rho {
            aco.rho = probability("aco-rho", v)?;
        }
        if let Some(v) = self.aco_alpha {
            aco.alpha = v;
        }
        if let Some(v) = self.aco_beta {
            aco.beta = v;
        }
        if let Some(v) = self.aco_ants {
            aco.num_ants = v;
        }
        if let Some(v) = self.aco_iterations {
            aco.num_iterations = v;
        }
        if let Some(v) = self.aco_stall {
            aco.stall_limit = v;
        }
        if let Some(v) = self.aco_t_max {
            aco.t_max = v;
        }
        if let Some(v) = self.aco_t_min {
            aco.t_min = v;
        }
        anyhow::ensure!(
            aco.t_min > 0.0 && aco.t_min <= aco.t_max,
            "pheromone bounds must satisfy 0 < t_min <= t_max"
        );
        anyhow::ensure!(aco.num_ants > 0, "--aco-ants must be positive");

        let mut ga = GaConfig::default();
        if let Some(v) = self.ga_population {
            ga.population_size = v;
        }
        if let Some(v) = self.ga_tournament {
            ga.tournament_size = v;
        }
        if let Some(v) = self.ga_p_crossover {
            ga.p_crossover = probability("ga-p-crossover", v)?;
        }
        if let Some(v) = self.ga_p_mutation {
            ga.p_mutation = probability("ga-p-mutation", v)?;
        }
        if let Some(v) = self.ga_crossover {
            ga.crossover_kind = match v {
                CrossoverArg::SinglePoint => CrossoverKind::SinglePoint,
                CrossoverArg::TwoPoint => CrossoverKind::TwoPoint,
                CrossoverArg::Uniform => CrossoverKind::Uniform,
            };
        }
        if let Some(v) = self.ga_selection {
            ga.selection_kind = match v {
                SelectionArg::Tournament => SelectionKind::Tournament,
                SelectionArg::Roulette => SelectionKind::Roulette,
            };
        }
        if let Some(v) = self.ga_stall {
            ga.stall_generations = v;
        }
        anyhow::ensure!(ga.population_size >= 2, "--ga-population must be at least 2");
        anyhow::ensure!(ga.tournament_size >= 1, "--ga-tournament must be positive");

        Ok(SolverSettings {
            fitness: FitnessConfig::new(limits, self.fitness.into()),
            aco,
            ga,
        })
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Registration file (student, course, year rows).
    instance: PathBuf,
    #[arg(long, short)]
    algorithm: Algorithm,
    #[arg(long, value_enum, default_value = "fixed")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the solution JSON (default: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of instance files.
    #[arg(env = "SRG_DATASET_DIR")]
    dir: PathBuf,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    /// Base seed; run i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Column modes to benchmark.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "fixed,dynamic")]
    mode: Vec<ModeArg>,
    /// Algorithms to benchmark.
    #[arg(long, value_delimiter = ',', default_value = "hfo,ro,aco,ga")]
    algorithm: Vec<Algorithm>,
    /// Run every selected algorithm in dynamic mode, not only ACO.
    #[arg(long)]
    all_dynamic: bool,
    /// Output prefix; writes PREFIX.json and PREFIX.md (default: Markdown to stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct CheckArgs {
    instance: PathBuf,
    /// Solution or grouping JSON.
    grouping: PathBuf,
    #[arg(long, value_enum, default_value = "fixed")]
    mode: ModeArg,
    #[arg(long)]
    cohort_year: Option<u32>,
    #[arg(long, default_value_t = 13)]
    new_limit: usize,
    #[arg(long, default_value_t = 13)]
    old_limit: usize,
    #[arg(long, default_value_t = 26)]
    total_limit: usize,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    students: usize,
    #[arg(long)]
    new_courses: usize,
    #[arg(long)]
    old_courses: usize,
    #[arg(long, default_value_t = 1)]
    min_registrations: usize,
    #[arg(long)]
    max_registrations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (default: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn load(path: &Path, cohort_year: Option<u32>) -> Result<Instance> {
    let instance = load_instance(path, cohort_year).with_context(|| format!("loading {}", path.display()))?;
    for c in instance.future_courses() {
        eprintln!(
            "warning: course {} introduced in year {} after cohort year {}; treated as old",
            c.id,
            c.intro_year,
            instance.cohort_year()
        );
    }
    Ok(instance)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn solve(args: SolveArgs) -> Result<u8> {
    let instance = load(&args.instance, args.config.cohort_year)?;
    let settings = args.config.settings(args.mode.into())?;
    let solution = solve_once(&instance, args.algorithm, &settings, args.seed);
    let file = SolutionFile::new(&instance, args.algorithm, &settings, args.seed, &solution);
    write_output(args.out.as_deref(), &(serde_json::to_string_pretty(&file)? + "\n"))?;
    let b = &solution.breakdown;
    eprintln!(
        "{} {}: fitness {:.2} ({} mode), {} group(s), unfit {}, size {}, unassigned {}, {}",
        args.algorithm,
        instance.name(),
        b.fitness,
        b.mode,
        b.group_count,
        b.unfit,
        b.size,
        b.unassigned,
        if b.is_feasible() { "feasible" } else { "infeasible" }
    );
    Ok(if b.is_feasible() { 0 } else { 2 })
}

fn run_bench(args: BenchArgs) -> Result<u8> {
    let files = instance_files(&args.dir)?;
    let options = BenchOptions {
        runs: args.runs.max(1),
        base_seed: args.seed,
        columns: args.mode.iter().map(|&m| m.into()).collect(),
        algorithms: args.algorithm.clone(),
        all_dynamic: args.all_dynamic,
        cohort_year: args.config.cohort_year,
        settings: args.config.settings(ColumnMode::Fixed)?,
    };
    let report = bench(&files, &options);
    for e in &report.errors {
        eprintln!("error: {}: {}", e.path, e.error);
    }
    let markdown = report.markdown();
    match &args.out {
        Some(prefix) => {
            let json = prefix.with_extension("json");
            let md = prefix.with_extension("md");
            write_output(Some(&json), &(serde_json::to_string_pretty(&report)? + "\n"))?;
            write_output(Some(&md), &markdown)?;
            eprintln!("wrote {} and {}", json.display(), md.display());
        }
        None => write_output(None, &markdown)?,
    }
    Ok(0)
}

fn check(args: CheckArgs) -> Result<u8> {
    let instance = load(&args.instance, args.cohort_year)?;
    let file = read_grouping_file(&args.grouping)?;
    let limits = ColumnLimits {
        new_limit: args.new_limit,
        old_limit: args.old_limit,
        total_limit: args.total_limit,
        mode: args.mode.into(),
    };
    let report = check_constraints(&instance, &file, &limits);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        for g in &report.groups {
            println!(
                "group {}: {} student(s), {} new, {} old",
                g.group, g.size, g.new_courses, g.old_courses
            );
        }
        for v in &report.violations {
            println!("violation: {v}");
        }
        println!("{}", if report.is_feasible() { "feasible" } else { "infeasible" });
    }
    Ok(if report.is_feasible() { 0 } else { 2 })
}

fn gen(args: GenArgs) -> Result<u8> {
    let spec = GeneratorSpec {
        students: args.students,
        new_courses: args.new_courses,
        old_courses: args.old_courses,
        registrations: args.min_registrations..=args.max_registrations,
        seed: args.seed,
    };
    let instance = generate_instance(&spec)?;
    let mut buf = Vec::new();
    write_instance(&instance, &mut buf)?;
    write_output(args.out.as_deref(), &String::from_utf8(buf)?)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => run_bench(a),
        Command::Check(a) => check(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
