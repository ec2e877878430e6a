//! Experiment grids: generate instances, run solvers on a worker pool, and
//! emit rows in a fixed order.
//!
//! Every (parameter point, seed index) pair gets its own instance seed
//! derived from the master seed, so the grid and all solver randomness are
//! independent of worker count and scheduling. Only timing columns differ
//! between runs; `strip_timing` blanks them.

use std::path::Path;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bnb::{bnb_solve, BnbConfig, BnbStatus};
use crate::clock::{ClockKind, Stopwatch};
use crate::error::{Error, Result};
use crate::graph::{brute_force_census, rewired_instance, ud_lattice_instance, Census, Instance, LatticeSpec};
use crate::mcmc::{estimate_pmis_detailed, pt_run, PtConfig, SaConfig, ShotRecord};
use crate::metrics::{
    fit_loglinear_top, fit_pmis_powerlaw, hardness, tts99_from_counts, tts_hardness_scaling, FitResult, HardnessRecord,
    DEFAULT_HARDNESS_THRESHOLD,
};
use crate::rng::{derive_seed, Stream};
use crate::sla::{sla_solve, sla_solve_with_order, SlaConfig, DEFAULT_MAX_VARIANTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Scaling,
    Radius,
    Rewire,
    Hardness,
    Filling,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::Radius => "radius",
            ExperimentKind::Rewire => "rewire",
            ExperimentKind::Hardness => "hardness",
            ExperimentKind::Filling => "filling",
        }
    }

    fn index(&self) -> u64 {
        *self as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Sla,
    Bnb,
    Sa,
    Pt,
    Brute,
}

impl SolverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Sla => "sla",
            SolverKind::Bnb => "bnb",
            SolverKind::Sa => "sa",
            SolverKind::Pt => "pt",
            SolverKind::Brute => "brute",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(rename = "L_list")]
    pub l_list: Vec<u32>,
    pub rho_ppt_list: Vec<u32>,
    pub r2_list: Vec<u32>,
    /// Empty for plain lattices.
    #[serde(default)]
    pub epsilon_ppt_list: Vec<u32>,
    pub seeds_per_point: usize,
    pub solvers: Vec<SolverKind>,
    pub sa: SaConfig,
    /// Independent SA runs per instance for the success probability.
    pub shots: usize,
    pub pt: PtConfig,
    pub bnb: BnbConfig,
    pub sla_max_variants: usize,
    pub master_seed: u64,
    pub workers: usize,
    /// Upper limit on instances times solvers.
    pub max_jobs: usize,
}

impl ExperimentConfig {
    /// Desk-scale defaults for each experiment kind.
    pub fn preset(kind: ExperimentKind) -> Self {
        use SolverKind::*;
        let (l_list, rho, r2, eps, seeds, solvers) = match kind {
            ExperimentKind::Scaling => (vec![7, 9, 11], vec![800], vec![2], vec![], 50, vec![Sla, Bnb, Sa]),
            ExperimentKind::Radius => (vec![13], vec![800], vec![1, 2, 4, 5, 8, 9, 10, 13, 16], vec![], 25, vec![Sla, Bnb]),
            ExperimentKind::Rewire => (vec![13], vec![800], vec![2], vec![0, 250, 500, 750, 1000], 25, vec![Bnb]),
            ExperimentKind::Hardness => (vec![13], vec![800], vec![2], vec![], 100, vec![Sla, Sa]),
            ExperimentKind::Filling => (vec![13], vec![700, 750, 800, 850, 900], vec![2], vec![], 25, vec![Sla, Bnb]),
        };
        ExperimentConfig {
            kind,
            l_list,
            rho_ppt_list: rho,
            r2_list: r2,
            epsilon_ppt_list: eps,
            seeds_per_point: seeds,
            solvers,
            sa: SaConfig::default(),
            shots: 100,
            pt: PtConfig::new(vec![2.0, 1.0, 0.5, 0.25, 0.1], 32, 1, 0),
            bnb: BnbConfig::default(),
            sla_max_variants: DEFAULT_MAX_VARIANTS,
            master_seed: 0,
            workers: 1,
            max_jobs: 1_000_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.solvers.is_empty() {
            return bad("at least one solver is required");
        }
        if self.l_list.is_empty() || self.rho_ppt_list.is_empty() || self.r2_list.is_empty() {
            return bad("L, rho and r2 lists must be non-empty");
        }
        if self.seeds_per_point == 0 {
            return bad("seeds_per_point must be positive");
        }
        if self.workers == 0 {
            return bad("workers must be positive");
        }
        if self.solvers.contains(&SolverKind::Sa) && self.shots == 0 {
            return bad("shots must be positive when sa is requested");
        }
        if self.epsilon_ppt_list.iter().any(|&e| e > 1000) {
            return bad("epsilon_ppt must be at most 1000");
        }
        for &l in &self.l_list {
            for &rho in &self.rho_ppt_list {
                for &r2 in &self.r2_list {
                    LatticeSpec::new(l, rho, r2, 0).validate().map_err(|e| Error::InvalidConfig(e.to_string()))?;
                }
            }
        }
        let jobs = self.grid().len() * self.solvers.len();
        if jobs > self.max_jobs {
            return Err(Error::InvalidConfig(format!("{jobs} jobs exceed the budget of {}", self.max_jobs)));
        }
        self.sa.validate()?;
        Ok(())
    }

    /// Instance grid in canonical order.
    pub fn grid(&self) -> Vec<GridPoint> {
        let eps: Vec<Option<u32>> = if self.epsilon_ppt_list.is_empty() {
            vec![None]
        } else {
            self.epsilon_ppt_list.iter().map(|&e| Some(e)).collect()
        };
        let base = derive_seed(self.master_seed, Stream::Instance, self.kind.index());
        let mut out = Vec::new();
        let mut point = 0usize;
        for &l in &self.l_list {
            for &rho in &self.rho_ppt_list {
                for &r2 in &self.r2_list {
                    // rewiring levels share the base lattice of a seed index
                    let lattice_seed = derive_seed(base, Stream::Instance, point as u64);
                    for (ei, &e) in eps.iter().enumerate() {
                        for s in 0..self.seeds_per_point {
                            out.push(GridPoint {
                                point: point * eps.len() + ei,
                                seed_index: s,
                                l,
                                rho_ppt: rho,
                                r2,
                                epsilon_ppt: e,
                                seed: derive_seed(lattice_seed, Stream::Instance, s as u64),
                            });
                        }
                    }
                    point += 1;
                }
            }
        }
        out
    }
}

/// One instance of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    pub point: usize,
    pub seed_index: usize,
    pub l: u32,
    pub rho_ppt: u32,
    pub r2: u32,
    pub epsilon_ppt: Option<u32>,
    pub seed: u64,
}

impl GridPoint {
    pub fn instance_id(&self) -> String {
        let mut id = format!("L{}-rho{}-r{}", self.l, self.rho_ppt, self.r2);
        if let Some(e) = self.epsilon_ppt {
            id.push_str(&format!("-e{e}"));
        }
        id.push_str(&format!("-s{}", self.seed_index));
        id
    }

    pub fn spec(&self) -> LatticeSpec {
        LatticeSpec::new(self.l, self.rho_ppt, self.r2, self.seed)
    }

    pub fn instance(&self) -> Result<Instance> {
        match self.epsilon_ppt {
            None => ud_lattice_instance(&self.spec()),
            Some(e) => rewired_instance(&self.spec(), e),
        }
    }
}

/// One CSV row. Absent values serialize as empty fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance_id: String,
    pub solver: String,
    #[serde(rename = "L")]
    pub l: Option<u32>,
    pub rho_ppt: Option<u32>,
    pub r2: Option<u32>,
    pub epsilon_ppt: Option<u32>,
    pub n: Option<usize>,
    pub seed: u64,
    pub mis_size: Option<usize>,
    pub d_mis: Option<String>,
    pub d_mis_m1: Option<String>,
    pub hardness: Option<f64>,
    pub tts_s: Option<f64>,
    pub tto_s: Option<f64>,
    pub p_mis: Option<f64>,
    pub shots: Option<usize>,
    pub status: String,
}

impl ResultRow {
    fn blank(p: &GridPoint, solver: SolverKind) -> Self {
        ResultRow {
            instance_id: p.instance_id(),
            solver: solver.as_str().into(),
            l: Some(p.l),
            rho_ppt: Some(p.rho_ppt),
            r2: Some(p.r2),
            epsilon_ppt: p.epsilon_ppt,
            n: None,
            seed: p.seed,
            mis_size: None,
            d_mis: None,
            d_mis_m1: None,
            hardness: None,
            tts_s: None,
            tto_s: None,
            p_mis: None,
            shots: None,
            status: String::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status.starts_with("error")
    }

    pub fn strip_timing(&mut self) {
        self.tts_s = None;
        self.tto_s = None;
    }
}

/// Shot-level SA record tagged with its instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotRow {
    pub instance_id: String,
    pub shot: usize,
    pub best_size: usize,
    pub success: bool,
    pub proposals: u64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub config: ExperimentConfig,
    pub code_version: &'static str,
    pub clock: ClockKind,
    pub instances: usize,
    pub rows: usize,
    pub failed_rows: usize,
    pub strip_timing: bool,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub shots: Vec<ShotRow>,
    pub manifest: Manifest,
}

impl ExperimentOutput {
    pub fn all_failed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(ResultRow::failed)
    }

    pub fn csv(&self) -> Result<String> {
        rows_to_csv(&self.rows)
    }

    pub fn shots_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.shots {
            w.serialize(r)?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).expect("csv is utf-8"))
    }

    /// Writes the CSV to `path` and the manifest next to it.
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.csv()?)?;
        std::fs::write(manifest_path(path), serde_json::to_string_pretty(&self.manifest)? + "\n")?;
        Ok(())
    }
}

pub fn manifest_path(csv: &Path) -> std::path::PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".manifest.json");
    s.into()
}

pub fn rows_to_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(ROW_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).expect("csv is utf-8"))
}

pub const ROW_HEADER: [&str; 17] = [
    "instance_id", "solver", "L", "rho_ppt", "r2", "epsilon_ppt", "n", "seed", "mis_size", "d_mis", "d_mis_m1",
    "hardness", "tts_s", "tto_s", "p_mis", "shots", "status",
];

pub fn read_rows(text: &str) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers()?.clone();
    for h in ROW_HEADER {
        if !headers.iter().any(|x| x == h) {
            return Err(Error::Parse(format!("missing column {h}")));
        }
    }
    r.deserialize().map(|x| x.map_err(Error::from)).collect()
}

fn err_status(e: &Error) -> String {
    format!("error: {e}")
}

/// Runs every requested solver on one grid point.
fn run_point(p: &GridPoint, cfg: &ExperimentConfig, clock: ClockKind) -> (Vec<ResultRow>, Vec<ShotRow>) {
    let mut solvers = cfg.solvers.clone();
    solvers.sort();
    solvers.dedup();
    let inst = match p.instance() {
        Ok(i) => i,
        Err(e) => {
            let rows = solvers
                .iter()
                .map(|&s| ResultRow { status: err_status(&e), ..ResultRow::blank(p, s) })
                .collect();
            return (rows, Vec::new());
        }
    };
    let g = &inst.graph;
    let mut rows: Vec<ResultRow> = solvers
        .iter()
        .map(|&s| ResultRow { n: Some(g.n()), status: "ok".into(), ..ResultRow::blank(p, s) })
        .collect();
    let mut census: Option<Census> = None;
    let mut optimum: Option<usize> = None;
    let mut shot_rows = Vec::new();

    for (row, &solver) in rows.iter_mut().zip(&solvers) {
        match solver {
            SolverKind::Sla => {
                let size_cfg = SlaConfig { max_variants: cfg.sla_max_variants, ..SlaConfig::size_only() };
                let sw = Stopwatch::start(clock);
                let sized = sla_solve(g, &size_cfg);
                let t = sw.elapsed();
                let counted = SlaConfig { max_variants: cfg.sla_max_variants, ..SlaConfig::census() };
                match sized.and_then(|r| sla_solve(g, &counted).map(|c| (r, c))) {
                    Ok((_, c)) => {
                        row.tts_s = Some(t);
                        row.tto_s = Some(t);
                        optimum = Some(c.mis_size);
                        census = c.census();
                    }
                    Err(e) => row.status = err_status(&e),
                }
            }
            SolverKind::Brute => match brute_force_census(g) {
                Ok(c) => {
                    optimum = Some(c.mis_size);
                    census.get_or_insert(c);
                }
                Err(e) => row.status = err_status(&e),
            },
            SolverKind::Bnb => {
                let bcfg = BnbConfig { clock, ..cfg.bnb };
                match bnb_solve(g, &bcfg) {
                    Ok(r) => {
                        row.mis_size = Some(r.mis_size);
                        row.tts_s = r.tts;
                        row.tto_s = r.tto;
                        row.status = r.status.as_str().into();
                        if r.status == BnbStatus::Optimal {
                            optimum.get_or_insert(r.mis_size);
                        }
                    }
                    Err(e) => row.status = err_status(&e),
                }
            }
            SolverKind::Sa | SolverKind::Pt => {}
        }
    }
    // heuristics need the optimum from an exact solver
    for (row, &solver) in rows.iter_mut().zip(&solvers) {
        match solver {
            SolverKind::Sa => {
                let sa = SaConfig { seed: derive_seed(p.seed, Stream::Shot, solver as u64), ..cfg.sa };
                let Some(opt) = optimum else {
                    row.status = "error: no exact optimum for success probability".into();
                    continue;
                };
                match estimate_pmis_detailed(g, &sa, cfg.shots, opt) {
                    Ok((est, shots)) => {
                        row.mis_size = shots.iter().map(|s| s.best_size).max();
                        row.p_mis = Some(est.p_point);
                        row.shots = Some(est.shots);
                        match tts99_from_counts(est.mean_run_time.max(f64::MIN_POSITIVE), est.successes, est.shots) {
                            Ok(t) => {
                                row.tts_s = Some(t.value);
                                if t.censored {
                                    row.status = "censored".into();
                                }
                            }
                            Err(e) => row.status = err_status(&e),
                        }
                        shot_rows.extend(shots.into_iter().map(|s: ShotRecord| ShotRow {
                            instance_id: row.instance_id.clone(),
                            shot: s.shot,
                            best_size: s.best_size,
                            success: s.success,
                            proposals: s.proposals,
                            wall_time_s: s.wall_time_s,
                        }));
                    }
                    Err(e) => row.status = err_status(&e),
                }
            }
            SolverKind::Pt => {
                let pt = PtConfig { seed: derive_seed(p.seed, Stream::Shot, solver as u64), ..cfg.pt.clone() };
                match pt_run(g, &pt) {
                    Ok(r) => {
                        row.mis_size = Some(r.best_size);
                        row.tts_s = Some(r.wall_time);
                        if let Some(opt) = optimum {
                            row.p_mis = Some(if r.best_size >= opt { 1.0 } else { 0.0 });
                            row.shots = Some(1);
                        }
                    }
                    Err(e) => row.status = err_status(&e),
                }
            }
            _ => {}
        }
    }
    if let Some(c) = &census {
        for row in rows.iter_mut() {
            if matches!(row.solver.as_str(), "sla" | "brute") && !row.failed() {
                row.mis_size = Some(c.mis_size);
            }
            row.d_mis = Some(c.d_mis.to_string());
            row.d_mis_m1 = Some(c.d_mis_m1.to_string());
            row.hardness = hardness(c.mis_size, &c.d_mis, &c.d_mis_m1).ok();
        }
    }
    (rows, shot_rows)
}

/// Runs the whole grid on `cfg.workers` threads. Rows come back sorted by
/// (parameter point, seed index, solver) whatever the scheduling.
pub fn run_experiment(cfg: &ExperimentConfig, clock: ClockKind, strip_timing: bool) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let grid = cfg.grid();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let results: Vec<(Vec<ResultRow>, Vec<ShotRow>)> =
        pool.install(|| grid.par_iter().map(|p| run_point(p, cfg, clock)).collect());
    let mut rows = Vec::new();
    let mut shots = Vec::new();
    for (r, s) in results {
        rows.extend(r);
        shots.extend(s);
    }
    if strip_timing {
        rows.iter_mut().for_each(ResultRow::strip_timing);
        shots.iter_mut().for_each(|s| s.wall_time_s = 0.0);
    }
    let manifest = Manifest {
        config: cfg.clone(),
        code_version: env!("CARGO_PKG_VERSION"),
        clock,
        instances: grid.len(),
        rows: rows.len(),
        failed_rows: rows.iter().filter(|r| r.failed()).count(),
        strip_timing,
    };
    Ok(ExperimentOutput { rows, shots, manifest })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FitCommandKind {
    Loglinear,
    Powerlaw,
    TtsHardness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    /// Only rows of this solver; all rows when `None`.
    pub solver: Option<String>,
    pub percentile: f64,
    pub threshold: f64,
}

impl Default for FitParams {
    fn default() -> Self {
        FitParams { solver: None, percentile: 0.02, threshold: DEFAULT_HARDNESS_THRESHOLD }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitOutput {
    pub fit: FitResult,
    /// The (x, y) points offered to the fit, before any filtering.
    pub points: Vec<(f64, f64)>,
}

/// Fits result rows and returns the fit with its input points.
pub fn fit_command(csv_text: &str, kind: FitCommandKind, params: &FitParams) -> Result<FitOutput> {
    let rows = read_rows(csv_text)?;
    let rows: Vec<&ResultRow> = rows
        .iter()
        .filter(|r| params.solver.as_deref().is_none_or(|s| r.solver == s))
        .filter(|r| !r.failed())
        .collect();
    match kind {
        FitCommandKind::Loglinear => {
            let pts: Vec<(usize, f64)> = rows.iter().filter_map(|r| Some((r.n?, r.tts_s?))).filter(|p| p.1 > 0.0).collect();
            let fit = fit_loglinear_top(&pts, params.percentile)?;
            Ok(FitOutput { fit, points: pts.iter().map(|&(n, t)| (n as f64, t)).collect() })
        }
        FitCommandKind::Powerlaw => {
            let pts: Vec<(f64, f64)> = rows.iter().filter_map(|r| Some((r.hardness?, r.p_mis?))).collect();
            Ok(FitOutput { fit: fit_pmis_powerlaw(&pts)?, points: pts })
        }
        FitCommandKind::TtsHardness => {
            let pts: Vec<(f64, f64)> = rows.iter().filter_map(|r| Some((r.hardness?, r.tts_s?))).collect();
            Ok(FitOutput { fit: tts_hardness_scaling(&pts, params.threshold)?, points: pts })
        }
    }
}

/// Census CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub instance_id: String,
    pub n: usize,
    #[serde(rename = "L")]
    pub l: Option<u32>,
    pub rho_ppt: Option<u32>,
    pub r2: Option<u32>,
    pub seed: u64,
    pub mis_size: usize,
    pub d_mis: String,
    pub d_mis_m1: String,
    pub hardness: f64,
}

impl CensusRow {
    pub fn record(&self) -> Result<HardnessRecord> {
        let parse = |s: &str| s.parse::<BigUint>().map_err(|e| Error::Parse(e.to_string()));
        HardnessRecord::new(self.instance_id.clone(), self.n, self.mis_size, parse(&self.d_mis)?, parse(&self.d_mis_m1)?)
    }

    pub fn csv(rows: &[CensusRow]) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).expect("csv is utf-8"))
    }
}

/// Census of one instance by the counting sweep. Graphs without
/// coordinates are swept in node-id order.
pub fn census_command(inst: &Instance, instance_id: &str, max_variants: usize) -> Result<CensusRow> {
    let g = &inst.graph;
    let cfg = SlaConfig { max_variants, ..SlaConfig::census() };
    let r = match g.coords() {
        Some(_) => sla_solve(g, &cfg)?,
        None => sla_solve_with_order(g, &(0..g.n()).collect::<Vec<_>>(), &cfg)?,
    };
    let c = r.census().expect("census mode returns counts");
    let h = hardness(c.mis_size, &c.d_mis, &c.d_mis_m1)?;
    Ok(CensusRow {
        instance_id: instance_id.into(),
        n: g.n(),
        l: inst.l,
        rho_ppt: inst.rho_ppt,
        r2: inst.r2,
        seed: inst.seed,
        mis_size: c.mis_size,
        d_mis: c.d_mis.to_string(),
        d_mis_m1: c.d_mis_m1.to_string(),
        hardness: h,
    })
}
