use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use udmis::bench::{
    census_command, fit_command, run_experiment, CensusRow, ExperimentConfig, ExperimentKind, FitCommandKind, FitParams,
    SolverKind,
};
use udmis::bnb::{bnb_solve, export_ilp, BnbConfig};
use udmis::clock::ClockKind;
use udmis::graph::{brute_force_census, er_instance, rewire, ud_lattice_instance, Instance, InstanceKind, LatticeSpec, Occupancy};
use udmis::mcmc::{pt_run, sa_run, Bias, PtConfig, SaConfig, SaSchedule};
use udmis::sla::{sla_solve, sla_solve_with_order, SlaConfig, SlaMode, DEFAULT_MAX_VARIANTS};
use udmis::{Error, Result};

#[derive(Parser)]
#[command(name = "mis-bench", version, about = "MIS solvers and benchmarks on unit-disk lattice graphs")]
struct Cli {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = ClockKind::Wall)]
    clock: ClockKind,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Rewire the edges of an instance (seeded from the instance seed).
    Rewire {
        input: PathBuf,
        /// Fraction of edges to rewire, in parts per thousand.
        #[arg(long)]
        epsilon_ppt: u32,
    },
    /// Solve one instance and print a JSON result.
    Solve(SolveArgs),
    /// Census CSV (|MIS|, degeneracies, hardness) of instance files.
    Census {
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_VARIANTS)]
        max_variants: usize,
    },
    /// Write the integer program as LP text.
    ExportIlp { input: PathBuf },
    /// Run an experiment grid and write result rows as CSV.
    Bench(BenchArgs),
    /// Fit result rows.
    Fit {
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: FitCommandKind,
        #[arg(long)]
        solver: Option<String>,
        #[arg(long, default_value_t = 0.02)]
        percentile: f64,
        #[arg(long, default_value_t = udmis::metrics::DEFAULT_HARDNESS_THRESHOLD)]
        threshold: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Ud,
    Er,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenKind::Ud)]
    kind: GenKind,
    #[arg(long = "L", default_value_t = 13)]
    l: u32,
    #[arg(long, default_value_t = 800)]
    rho_ppt: u32,
    #[arg(long, default_value_t = 2)]
    r2: u32,
    /// Occupy sites independently instead of drawing an exact count.
    #[arg(long)]
    bernoulli: bool,
    /// Keep disconnected draws.
    #[arg(long)]
    allow_disconnected: bool,
    /// Node count (er).
    #[arg(long)]
    n: Option<usize>,
    /// Edge count (er).
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Sla,
    Bnb,
    Sa,
    Pt,
    Brute,
}

#[derive(Args, Clone)]
struct SaArgs {
    #[arg(long, default_value_t = 32)]
    depth: usize,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, default_value_t = 1.0)]
    t_start: f64,
    #[arg(long, default_value_t = 0.05)]
    t_end: f64,
    /// add,swap,remove weights.
    #[arg(long, default_value = "4,4,1")]
    bias: String,
    #[arg(long, default_value_t = 100)]
    shots: usize,
}

impl SaArgs {
    fn config(&self, seed: u64) -> Result<SaConfig> {
        let w: Vec<f64> = self
            .bias
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidConfig(format!("--bias: {e}")))?;
        let [add, swap, remove] = w[..] else {
            return Err(Error::InvalidConfig("--bias takes three weights".into()));
        };
        let cfg = SaConfig {
            schedule: SaSchedule { t_start: self.t_start, t_end: self.t_end, depth: self.depth },
            num_restarts: self.restarts,
            bias: Bias { add, swap, remove },
            seed,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = SolverArg::Sla)]
    solver: SolverArg,
    /// Count degeneracies (sla).
    #[arg(long)]
    census: bool,
    #[arg(long)]
    time_limit: Option<f64>,
    /// Known optimum; bnb stops when it is reached, sa reports success.
    #[arg(long)]
    target: Option<usize>,
    /// Plain degree-0/1 reductions only (bnb).
    #[arg(long)]
    no_dominance: bool,
    #[command(flatten)]
    sa: SaArgs,
    /// Comma-separated ladder, hottest first (pt).
    #[arg(long, default_value = "2,1,0.5,0.25,0.1")]
    ladder: String,
    #[arg(long, default_value_t = 32)]
    sweeps: usize,
    #[arg(long, default_value_t = 1)]
    exchange_interval: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(value_enum)]
    kind: ExperimentKind,
    /// JSON experiment config; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "L", value_delimiter = ',')]
    l: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    rho_ppt: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    r2: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    epsilon_ppt: Option<Vec<u32>>,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long, value_enum, value_delimiter = ',')]
    solvers: Option<Vec<SolverKind>>,
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    max_jobs: Option<usize>,
    /// Leave timing columns empty so outputs compare byte for byte.
    #[arg(long)]
    strip_timing: bool,
    /// Also write shot-level SA rows here.
    #[arg(long)]
    shots_out: Option<PathBuf>,
    #[command(flatten)]
    sa: SaArgs,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_line(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen(a) => {
            let inst = match a.kind {
                GenKind::Ud => {
                    let spec = LatticeSpec {
                        occupancy: if a.bernoulli { Occupancy::Bernoulli } else { Occupancy::FixedCount },
                        connected: !a.allow_disconnected,
                        ..LatticeSpec::new(a.l, a.rho_ppt, a.r2, cli.seed)
                    };
                    ud_lattice_instance(&spec)?
                }
                GenKind::Er => {
                    let (Some(n), Some(m)) = (a.n, a.m) else {
                        return Err(Error::InvalidConfig("er needs --n and --m".into()));
                    };
                    er_instance(n, m, cli.seed)?
                }
            };
            emit(&cli.out, &inst.to_json())?;
        }
        Cmd::Rewire { input, epsilon_ppt } => {
            if epsilon_ppt > 1000 {
                return Err(Error::InvalidConfig(format!("epsilon_ppt {epsilon_ppt} > 1000")));
            }
            let inst = Instance::read(&input)?;
            let graph = rewire(&inst.graph, epsilon_ppt as f64 / 1000.0, inst.seed)?;
            let out = Instance { kind: InstanceKind::Rewired, epsilon_ppt: Some(epsilon_ppt), graph, ..inst };
            emit(&cli.out, &out.to_json())?;
        }
        Cmd::Solve(a) => {
            let inst = Instance::read(&a.input)?;
            let g = &inst.graph;
            let text = match a.solver {
                SolverArg::Sla => {
                    let cfg = if a.census { SlaConfig::census() } else { SlaConfig::size_only() };
                    let r = match g.coords() {
                        Some(_) => sla_solve(g, &cfg)?,
                        None => sla_solve_with_order(g, &(0..g.n()).collect::<Vec<_>>(), &cfg)?,
                    };
                    let mut v = r.to_json();
                    v["mode"] = serde_json::to_value(if a.census { SlaMode::Census } else { SlaMode::SizeOnly })?;
                    json_line(&v)?
                }
                SolverArg::Bnb => {
                    let cfg = BnbConfig {
                        time_limit: a.time_limit,
                        target: a.target,
                        clock: cli.clock,
                        dominance: !a.no_dominance,
                        ..Default::default()
                    };
                    json_line(&bnb_solve(g, &cfg)?)?
                }
                SolverArg::Sa => json_line(&sa_run(g, &a.sa.config(cli.seed)?, a.target)?)?,
                SolverArg::Pt => {
                    let ladder: Vec<f64> = a
                        .ladder
                        .split(',')
                        .map(|s| s.trim().parse::<f64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|e| Error::InvalidConfig(format!("--ladder: {e}")))?;
                    let cfg = PtConfig::new(ladder, a.sweeps, a.exchange_interval, cli.seed);
                    json_line(&pt_run(g, &cfg)?)?
                }
                SolverArg::Brute => {
                    let c = brute_force_census(g)?;
                    json_line(&serde_json::json!({
                        "mis_size": c.mis_size,
                        "d_mis": c.d_mis.to_string(),
                        "d_mis_m1": c.d_mis_m1.to_string(),
                    }))?
                }
            };
            emit(&cli.out, &text)?;
        }
        Cmd::Census { inputs, max_variants } => {
            let mut rows = Vec::new();
            for p in &inputs {
                let inst = Instance::read(p)?;
                let id = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                rows.push(census_command(&inst, &id, max_variants)?);
            }
            emit(&cli.out, &CensusRow::csv(&rows)?)?;
        }
        Cmd::ExportIlp { input } => emit(&cli.out, &export_ilp(&Instance::read(&input)?.graph))?,
        Cmd::Bench(a) => {
            let mut cfg = match &a.config {
                Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)
                    .map_err(|e| Error::InvalidConfig(format!("{}: {e}", p.display())))?,
                None => ExperimentConfig::preset(a.kind),
            };
            cfg.kind = a.kind;
            cfg.master_seed = cli.seed;
            cfg.workers = cli.workers;
            if let Some(v) = a.l {
                cfg.l_list = v;
            }
            if let Some(v) = a.rho_ppt {
                cfg.rho_ppt_list = v;
            }
            if let Some(v) = a.r2 {
                cfg.r2_list = v;
            }
            if let Some(v) = a.epsilon_ppt {
                cfg.epsilon_ppt_list = v;
            }
            if let Some(v) = a.seeds {
                cfg.seeds_per_point = v;
            }
            if let Some(v) = a.solvers {
                cfg.solvers = v;
            }
            if let Some(v) = a.max_jobs {
                cfg.max_jobs = v;
            }
            cfg.bnb.time_limit = a.time_limit.or(cfg.bnb.time_limit);
            if a.config.is_none() {
                cfg.sa = a.sa.config(0)?;
                cfg.shots = a.sa.shots;
            }
            let out = run_experiment(&cfg, cli.clock, a.strip_timing)?;
            match &cli.out {
                Some(p) => out.write(p)?,
                None => emit(&None, &out.csv()?)?,
            }
            if let Some(p) = &a.shots_out {
                std::fs::write(p, out.shots_csv()?)?;
            }
            if out.all_failed() {
                eprintln!("mis-bench: all {} jobs failed", out.rows.len());
                return Ok(ExitCode::from(3));
            }
        }
        Cmd::Fit { input, kind, solver, percentile, threshold } => {
            let text = std::fs::read_to_string(&input)?;
            let r = fit_command(&text, kind, &FitParams { solver, percentile, threshold })?;
            emit(&cli.out, &json_line(&r)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("mis-bench: {e}");
            match e {
                Error::InvalidConfig(_) | Error::InvalidSpec(_) | Error::InvalidInput(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
