//! Feasible-space Markov chain heuristics: simulated annealing and parallel
//! tempering over independent sets.
//!
//! The chain state is always an independent set. Valid moves are tracked
//! incrementally in [`MoveTables`]: adding a node with no selected neighbor,
//! removing a selected node, and swapping a node whose only selected
//! neighbor is `u` with `u`. Proposals pick a move class by bias weight
//! (empty classes excluded), then a uniform member, and are accepted by the
//! Metropolis rule on the change in set size. Detailed balance is not
//! enforced.

use std::time::Instant;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{validate_independent_set, Graph};
use crate::rng::{derive_seed, stream_rng, Rng, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeClass {
    InSet,
    Free,
    OneNeighbor,
    Blocked,
}

/// Incremental bookkeeping of the valid moves from the current set.
#[derive(Debug, Clone)]
pub struct MoveTables<'g> {
    graph: &'g Graph,
    sel_nb_count: Vec<u32>,
    // xor of selected neighbor ids; equals the neighbor when the count is 1
    sel_nb_xor: Vec<usize>,
    class: Vec<NodeClass>,
    pos: Vec<usize>,
    in_set: Vec<usize>,
    free: Vec<usize>,
    one_nb: Vec<usize>,
}

/// A proposed move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Add(usize),
    /// Bring in `add`, drop its unique selected neighbor `remove`.
    Swap { add: usize, remove: usize },
    Remove(usize),
}

impl Move {
    pub fn delta(&self) -> i32 {
        match self {
            Move::Add(_) => 1,
            Move::Swap { .. } => 0,
            Move::Remove(_) => -1,
        }
    }
}

impl<'g> MoveTables<'g> {
    /// Tables for the independent set `set`.
    pub fn new(graph: &'g Graph, set: &[usize]) -> Result<Self> {
        if !validate_independent_set(graph, set)? {
            return Err(Error::InvalidInput("initial set is not independent".into()));
        }
        let n = graph.n();
        let mut selected = vec![false; n];
        for &v in set {
            selected[v] = true;
        }
        let mut t = MoveTables {
            graph,
            sel_nb_count: vec![0; n],
            sel_nb_xor: vec![0; n],
            class: vec![NodeClass::Blocked; n],
            pos: vec![usize::MAX; n],
            in_set: Vec::new(),
            free: Vec::new(),
            one_nb: Vec::new(),
        };
        for v in (0..n).filter(|&v| selected[v]) {
            for &w in graph.neighbors(v) {
                t.sel_nb_count[w] += 1;
                t.sel_nb_xor[w] ^= v;
            }
        }
        for v in 0..n {
            let c = if selected[v] {
                NodeClass::InSet
            } else {
                Self::class_for_count(t.sel_nb_count[v])
            };
            t.class[v] = c;
            let at = t.list_mut(c).map(|list| {
                list.push(v);
                list.len() - 1
            });
            if let Some(at) = at {
                t.pos[v] = at;
            }
        }
        Ok(t)
    }

    fn class_for_count(c: u32) -> NodeClass {
        match c {
            0 => NodeClass::Free,
            1 => NodeClass::OneNeighbor,
            _ => NodeClass::Blocked,
        }
    }

    fn list_mut(&mut self, c: NodeClass) -> Option<&mut Vec<usize>> {
        match c {
            NodeClass::InSet => Some(&mut self.in_set),
            NodeClass::Free => Some(&mut self.free),
            NodeClass::OneNeighbor => Some(&mut self.one_nb),
            NodeClass::Blocked => None,
        }
    }

    fn set_class(&mut self, v: usize, c: NodeClass) {
        let old = self.class[v];
        if old == c {
            return;
        }
        let p = self.pos[v];
        let moved = self.list_mut(old).and_then(|list| {
            list.swap_remove(p);
            list.get(p).copied()
        });
        if let Some(moved) = moved {
            self.pos[moved] = p;
        }
        self.pos[v] = usize::MAX;
        let at = self.list_mut(c).map(|list| {
            list.push(v);
            list.len() - 1
        });
        if let Some(at) = at {
            self.pos[v] = at;
        }
        self.class[v] = c;
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn in_set(&self) -> &[usize] {
        &self.in_set
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn one_nb(&self) -> &[usize] {
        &self.one_nb
    }

    pub fn size(&self) -> usize {
        self.in_set.len()
    }

    pub fn sel_nb_count(&self, v: usize) -> u32 {
        self.sel_nb_count[v]
    }

    pub fn is_selected(&self, v: usize) -> bool {
        self.class[v] == NodeClass::InSet
    }

    /// Current set, sorted.
    pub fn selected(&self) -> Vec<usize> {
        let mut s = self.in_set.clone();
        s.sort_unstable();
        s
    }

    fn add(&mut self, u: usize) {
        debug_assert_eq!(self.class[u], NodeClass::Free);
        self.set_class(u, NodeClass::InSet);
        for &w in self.graph.neighbors(u) {
            self.sel_nb_count[w] += 1;
            self.sel_nb_xor[w] ^= u;
            let c = Self::class_for_count(self.sel_nb_count[w]);
            self.set_class(w, c);
        }
    }

    fn remove(&mut self, u: usize) {
        debug_assert_eq!(self.class[u], NodeClass::InSet);
        for &w in self.graph.neighbors(u) {
            self.sel_nb_count[w] -= 1;
            self.sel_nb_xor[w] ^= u;
            let c = Self::class_for_count(self.sel_nb_count[w]);
            self.set_class(w, c);
        }
        self.set_class(u, NodeClass::Free);
    }

    /// Applies a move; panics if it is not valid for the current state.
    pub fn apply(&mut self, mv: Move) {
        match mv {
            Move::Add(u) => self.add(u),
            Move::Remove(u) => self.remove(u),
            Move::Swap { add, remove } => {
                self.remove(remove);
                self.add(add);
            }
        }
    }

    /// Draws a move class by `bias` over the non-empty classes, then a
    /// uniform member. `None` only for the empty graph.
    pub fn propose(&self, bias: &Bias, rng: &mut Rng) -> Option<Move> {
        let wa = if self.free.is_empty() { 0.0 } else { bias.add };
        let ws = if self.one_nb.is_empty() { 0.0 } else { bias.swap };
        let wr = if self.in_set.is_empty() { 0.0 } else { bias.remove };
        let total = wa + ws + wr;
        if total <= 0.0 {
            return None;
        }
        let x = rng.gen::<f64>() * total;
        let mv = if x < wa {
            Move::Add(self.free[rng.gen_range(0..self.free.len())])
        } else if x < wa + ws {
            let v = self.one_nb[rng.gen_range(0..self.one_nb.len())];
            Move::Swap { add: v, remove: self.sel_nb_xor[v] }
        } else {
            Move::Remove(self.in_set[rng.gen_range(0..self.in_set.len())])
        };
        Some(mv)
    }

    /// One Metropolis step at temperature `t`. Returns the size change of
    /// the proposed move and whether it was applied.
    pub fn propose_and_apply(&mut self, t: f64, bias: &Bias, rng: &mut Rng) -> (i32, bool) {
        let Some(mv) = self.propose(bias, rng) else {
            debug_assert_eq!(self.graph.n(), 0, "no valid move on a non-empty graph");
            return (0, false);
        };
        let d = mv.delta();
        let ok = metropolis_accept(d, t, rng);
        if ok {
            self.apply(mv);
        }
        (d, ok)
    }

    /// Compares against tables rebuilt from scratch.
    pub fn is_consistent(&self) -> bool {
        let Ok(fresh) = MoveTables::new(self.graph, &self.in_set) else {
            return false;
        };
        let sorted = |v: &[usize]| {
            let mut v = v.to_vec();
            v.sort_unstable();
            v
        };
        fresh.sel_nb_count == self.sel_nb_count
            && fresh.class == self.class
            && sorted(&fresh.in_set) == sorted(&self.in_set)
            && sorted(&fresh.free) == sorted(&self.free)
            && sorted(&fresh.one_nb) == sorted(&self.one_nb)
            && self.pos_valid()
            && (0..self.graph.n())
                .filter(|&v| self.sel_nb_count[v] == 1)
                .all(|v| self.class[self.sel_nb_xor[v]] == NodeClass::InSet)
    }

    fn pos_valid(&self) -> bool {
        [&self.in_set, &self.free, &self.one_nb]
            .iter()
            .all(|list| list.iter().enumerate().all(|(i, &v)| self.pos[v] == i))
    }
}

/// Metropolis rule for a change `delta` in set size.
pub fn metropolis_accept(delta: i32, t: f64, rng: &mut Rng) -> bool {
    delta >= 0 || rng.gen::<f64>() < (delta as f64 / t).exp()
}

/// Relative proposal weights of the three move classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bias {
    pub add: f64,
    pub swap: f64,
    pub remove: f64,
}

impl Default for Bias {
    fn default() -> Self {
        Bias { add: 4.0, swap: 4.0, remove: 1.0 }
    }
}

impl Bias {
    fn validate(&self) -> Result<()> {
        let w = [self.add, self.swap, self.remove];
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) || w.iter().sum::<f64>() <= 0.0 {
            return Err(Error::InvalidConfig(format!("bad bias weights {w:?}")));
        }
        Ok(())
    }
}

/// Geometric cooling from `t_start` to `t_end` over `depth` sweeps of `N`
/// proposals each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaSchedule {
    pub t_start: f64,
    pub t_end: f64,
    pub depth: usize,
}

impl Default for SaSchedule {
    fn default() -> Self {
        SaSchedule { t_start: 1.0, t_end: 0.05, depth: 32 }
    }
}

impl SaSchedule {
    fn validate(&self) -> Result<()> {
        if !(self.t_start > 0.0 && self.t_end > 0.0 && self.t_end <= self.t_start) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < t_end <= t_start, got {} and {}",
                self.t_end, self.t_start
            )));
        }
        if self.depth == 0 {
            return Err(Error::InvalidConfig("depth must be positive".into()));
        }
        Ok(())
    }

    /// Per-proposal ratio for a run of `steps` proposals.
    pub fn ratio(&self, steps: usize) -> f64 {
        if steps <= 1 {
            1.0
        } else {
            (self.t_end / self.t_start).powf(1.0 / (steps - 1) as f64)
        }
    }
}

/// Starting state of each restart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitState {
    #[default]
    Empty,
    /// Greedy maximal set over a random node permutation.
    RandomGreedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaConfig {
    pub schedule: SaSchedule,
    pub num_restarts: usize,
    pub bias: Bias,
    pub seed: u64,
    #[serde(default)]
    pub init: InitState,
}

impl Default for SaConfig {
    fn default() -> Self {
        SaConfig {
            schedule: SaSchedule::default(),
            num_restarts: 1,
            bias: Bias::default(),
            seed: 0,
            init: InitState::Empty,
        }
    }
}

impl SaConfig {
    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        self.bias.validate()?;
        if self.num_restarts == 0 {
            return Err(Error::InvalidConfig("num_restarts must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaResult {
    pub best_size: usize,
    pub best_set: Vec<usize>,
    pub per_restart_best: Vec<usize>,
    pub proposals: u64,
    /// `best_size >= target` when a target was given.
    pub success: Option<bool>,
    pub wall_time: f64,
}

fn initial_set(g: &Graph, init: InitState, rng: &mut Rng) -> Vec<usize> {
    match init {
        InitState::Empty => Vec::new(),
        InitState::RandomGreedy => {
            use rand::seq::SliceRandom;
            let mut perm: Vec<usize> = (0..g.n()).collect();
            perm.shuffle(rng);
            let mut blocked = vec![false; g.n()];
            let mut set = Vec::new();
            for v in perm {
                if !blocked[v] {
                    set.push(v);
                    blocked[v] = true;
                    for &w in g.neighbors(v) {
                        blocked[w] = true;
                    }
                }
            }
            set
        }
    }
}

/// Runs `depth * N` proposals under the cooling schedule; returns the best
/// set seen and the number of proposals.
fn anneal(g: &Graph, cfg: &SaConfig, rng: &mut Rng) -> (Vec<usize>, u64) {
    let start = initial_set(g, cfg.init, rng);
    let mut tables = MoveTables::new(g, &start).expect("initial set is independent");
    let steps = cfg.schedule.depth * g.n();
    let ratio = cfg.schedule.ratio(steps);
    let mut t = cfg.schedule.t_start;
    let mut best = tables.selected();
    for _ in 0..steps {
        let (d, ok) = tables.propose_and_apply(t, &cfg.bias, rng);
        if ok && d > 0 && tables.size() > best.len() {
            best = tables.selected();
        }
        t *= ratio;
    }
    (best, steps as u64)
}

/// Simulated annealing with `num_restarts` independent runs from fresh
/// sub-seeded streams; keeps the best set over all runs.
pub fn sa_run(g: &Graph, cfg: &SaConfig, target: Option<usize>) -> Result<SaResult> {
    cfg.validate()?;
    let clock = Instant::now();
    let mut best: Vec<usize> = Vec::new();
    let mut per_restart = Vec::with_capacity(cfg.num_restarts);
    let mut proposals = 0;
    for r in 0..cfg.num_restarts {
        let mut rng = stream_rng(cfg.seed, Stream::Restart, r as u64);
        let (set, p) = anneal(g, cfg, &mut rng);
        proposals += p;
        per_restart.push(set.len());
        if set.len() > best.len() {
            best = set;
        }
    }
    let success = target.map(|t| best.len() >= t);
    Ok(SaResult {
        best_size: best.len(),
        best_set: best,
        per_restart_best: per_restart,
        proposals,
        success,
        wall_time: clock.elapsed().as_secs_f64(),
    })
}

/// Success-probability estimate from repeated independent runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmisEstimate {
    pub successes: usize,
    pub shots: usize,
    pub p_point: f64,
    pub zero_success: bool,
    /// Mean wall time of one run (seconds).
    pub mean_run_time: f64,
}

/// Outcome of one shot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub shot: usize,
    pub best_size: usize,
    pub success: bool,
    pub proposals: u64,
    pub wall_time_s: f64,
}

/// Estimates the probability that one run (`cfg`, including its restarts)
/// reaches `optimum`, using `shots` runs with distinct derived seeds.
pub fn estimate_pmis(g: &Graph, cfg: &SaConfig, shots: usize, optimum: usize) -> Result<PmisEstimate> {
    estimate_pmis_detailed(g, cfg, shots, optimum).map(|(e, _)| e)
}

pub fn estimate_pmis_detailed(
    g: &Graph,
    cfg: &SaConfig,
    shots: usize,
    optimum: usize,
) -> Result<(PmisEstimate, Vec<ShotRecord>)> {
    if shots == 0 {
        return Err(Error::InvalidInput("shots must be at least 1".into()));
    }
    cfg.validate()?;
    let mut records = Vec::with_capacity(shots);
    for shot in 0..shots {
        let shot_cfg = SaConfig { seed: derive_seed(cfg.seed, Stream::Shot, shot as u64), ..*cfg };
        let r = sa_run(g, &shot_cfg, Some(optimum))?;
        records.push(ShotRecord {
            shot,
            best_size: r.best_size,
            success: r.success == Some(true),
            proposals: r.proposals,
            wall_time_s: r.wall_time,
        });
    }
    let successes = records.iter().filter(|r| r.success).count();
    let mean = records.iter().map(|r| r.wall_time_s).sum::<f64>() / shots as f64;
    Ok((
        PmisEstimate {
            successes,
            shots,
            p_point: successes as f64 / shots as f64,
            zero_success: successes == 0,
            mean_run_time: mean,
        },
        records,
    ))
}

/// Replica-exchange acceptance for swapping the states of chains at
/// temperatures `t_i` and `t_j` holding sets of size `size_i` and `size_j`.
/// Larger sets move toward the colder chain.
pub fn exchange_probability(t_i: f64, t_j: f64, size_i: usize, size_j: usize) -> f64 {
    let x = (1.0 / t_i - 1.0 / t_j) * (size_j as f64 - size_i as f64);
    x.exp().min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PtConfig {
    /// Strictly decreasing temperatures, hottest first.
    pub ladder: Vec<f64>,
    pub sweeps: usize,
    pub exchange_interval: usize,
    pub seed: u64,
    pub bias: Bias,
}

impl PtConfig {
    pub fn new(ladder: Vec<f64>, sweeps: usize, exchange_interval: usize, seed: u64) -> Self {
        PtConfig { ladder, sweeps, exchange_interval, seed, bias: Bias::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.ladder.len() < 2 {
            return Err(Error::InvalidConfig("ladder needs at least two temperatures".into()));
        }
        if self.ladder.iter().any(|&t| !(t > 0.0)) || self.ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidConfig("ladder must be positive and strictly decreasing".into()));
        }
        if self.exchange_interval == 0 {
            return Err(Error::InvalidConfig("exchange_interval must be positive".into()));
        }
        self.bias.validate()
    }
}

/// Parallel tempering: one chain per ladder temperature, `N` proposals per
/// chain per sweep, and an exchange round every `exchange_interval` sweeps
/// alternating between even and odd adjacent pairs.
pub fn pt_run(g: &Graph, cfg: &PtConfig) -> Result<SaResult> {
    cfg.validate()?;
    let clock = Instant::now();
    let k = cfg.ladder.len();
    let mut chains: Vec<MoveTables> = (0..k).map(|_| MoveTables::new(g, &[])).collect::<Result<_>>()?;
    let mut rngs: Vec<Rng> = (0..k).map(|i| stream_rng(cfg.seed, Stream::Tempering, i as u64)).collect();
    let mut xrng = stream_rng(cfg.seed, Stream::Tempering, k as u64);
    let mut best: Vec<usize> = Vec::new();
    let mut per_chain_best = vec![0usize; k];
    let mut proposals = 0u64;
    let mut round = 0usize;
    for sweep in 0..cfg.sweeps {
        for (i, chain) in chains.iter_mut().enumerate() {
            for _ in 0..g.n() {
                let (d, ok) = chain.propose_and_apply(cfg.ladder[i], &cfg.bias, &mut rngs[i]);
                if ok && d > 0 {
                    per_chain_best[i] = per_chain_best[i].max(chain.size());
                    if chain.size() > best.len() {
                        best = chain.selected();
                    }
                }
            }
            proposals += g.n() as u64;
        }
        if (sweep + 1) % cfg.exchange_interval == 0 {
            let mut i = round % 2;
            while i + 1 < k {
                let p = exchange_probability(cfg.ladder[i], cfg.ladder[i + 1], chains[i].size(), chains[i + 1].size());
                if xrng.gen::<f64>() < p {
                    chains.swap(i, i + 1);
                }
                i += 2;
            }
            round += 1;
        }
    }
    Ok(SaResult {
        best_size: best.len(),
        best_set: best,
        per_restart_best: per_chain_best,
        proposals,
        success: None,
        wall_time: clock.elapsed().as_secs_f64(),
    })
}

/// `-sum x_i + penalty * sum_{(i,j) in E} x_i x_j`.
pub fn penalty_energy(g: &Graph, x: &[bool], penalty: f64) -> Result<f64> {
    if x.len() != g.n() {
        return Err(Error::InvalidInput(format!(
            "assignment has {} entries for {} nodes",
            x.len(),
            g.n()
        )));
    }
    let ones = x.iter().filter(|&&b| b).count() as f64;
    let violated = g.edges().iter().filter(|&&(i, j)| x[i] && x[j]).count() as f64;
    Ok(-ones + penalty * violated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{brute_force_census, generate_er_gnm, Graph};
    use crate::rng::rng_from_seed;

    #[test]
    fn init_examples() {
        let k4 = Graph::complete(4);
        let t = MoveTables::new(&k4, &[0]).unwrap();
        assert_eq!(t.selected(), vec![0]);
        assert!(t.free().is_empty());
        let mut one: Vec<usize> = t.one_nb().to_vec();
        one.sort();
        assert_eq!(one, vec![1, 2, 3]);

        let p3 = Graph::path(3);
        let t = MoveTables::new(&p3, &[1]).unwrap();
        assert!(t.free().is_empty());
        let mut one: Vec<usize> = t.one_nb().to_vec();
        one.sort();
        assert_eq!(one, vec![0, 2]);

        let t = MoveTables::new(&p3, &[]).unwrap();
        assert_eq!(t.free().len(), 3);
        assert!(t.one_nb().is_empty());

        assert!(MoveTables::new(&p3, &[0, 1]).is_err());
    }

    #[test]
    fn swap_on_path() {
        let p3 = Graph::path(3);
        let mut t = MoveTables::new(&p3, &[1]).unwrap();
        t.apply(Move::Swap { add: 0, remove: 1 });
        assert_eq!(t.selected(), vec![0]);
        assert_eq!(t.free(), &[2]);
        assert!(t.is_consistent());
        let fresh = MoveTables::new(&p3, &[0]).unwrap();
        assert_eq!(fresh.free(), t.free());
    }

    #[test]
    fn swap_proposal_targets_unique_neighbor() {
        let p3 = Graph::path(3);
        let t = MoveTables::new(&p3, &[1]).unwrap();
        let bias = Bias { add: 0.0, swap: 1.0, remove: 0.0 };
        let mut rng = rng_from_seed(1);
        for _ in 0..20 {
            match t.propose(&bias, &mut rng).unwrap() {
                Move::Swap { add, remove } => {
                    assert!(add == 0 || add == 2);
                    assert_eq!(remove, 1);
                }
                m => panic!("unexpected {m:?}"),
            }
        }
    }

    #[test]
    fn metropolis_probabilities() {
        let mut rng = rng_from_seed(3);
        assert!((0..1000).all(|_| metropolis_accept(1, 1e-9, &mut rng)));
        assert!((0..1000).all(|_| metropolis_accept(0, 1e-9, &mut rng)));
        let trials = 100_000;
        let hits = (0..trials).filter(|_| metropolis_accept(-1, 1.0, &mut rng)).count();
        let p = (-1.0f64).exp();
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((hits as f64 / trials as f64 - p).abs() < 3.0 * sigma);
    }

    #[test]
    fn random_moves_keep_tables_consistent() {
        for seed in 0..10 {
            let g = generate_er_gnm(25, 40, seed).unwrap();
            let mut t = MoveTables::new(&g, &[]).unwrap();
            let mut rng = rng_from_seed(seed);
            for _ in 0..2000 {
                t.propose_and_apply(0.7, &Bias::default(), &mut rng);
                assert!(validate_independent_set(&g, t.in_set()).unwrap());
            }
            assert!(t.is_consistent());
        }
    }

    #[test]
    fn sa_examples() {
        let cfg = SaConfig::default();
        assert_eq!(sa_run(&Graph::empty(3), &cfg, None).unwrap().best_size, 3);
        let r = sa_run(&Graph::complete(4), &cfg, None).unwrap();
        assert_eq!(r.best_size, 1);
        assert_eq!(r.proposals, 32 * 4);
        let cfg4 = SaConfig { num_restarts: 4, ..cfg };
        let ok = (0..100)
            .filter(|&s| {
                let c = SaConfig { seed: s, ..cfg4 };
                sa_run(&Graph::path(3), &c, Some(2)).unwrap().success == Some(true)
            })
            .count();
        assert!(ok >= 99);
    }

    #[test]
    fn sa_is_deterministic_and_honest() {
        let g = generate_er_gnm(24, 40, 5).unwrap();
        let mis = brute_force_census(&g).unwrap().mis_size;
        let cfg = SaConfig { num_restarts: 3, seed: 9, ..Default::default() };
        let a = sa_run(&g, &cfg, Some(mis)).unwrap();
        let b = sa_run(&g, &cfg, Some(mis)).unwrap();
        assert_eq!((a.best_set.clone(), a.per_restart_best.clone()), (b.best_set, b.per_restart_best));
        assert!(a.best_size <= mis);
        assert!(validate_independent_set(&g, &a.best_set).unwrap());
    }

    #[test]
    fn config_validation() {
        let bad = SaConfig { num_restarts: 0, ..Default::default() };
        assert!(sa_run(&Graph::path(3), &bad, None).is_err());
        let bad = SaConfig {
            schedule: SaSchedule { t_start: 0.1, t_end: 1.0, depth: 4 },
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SaConfig { bias: Bias { add: -1.0, swap: 1.0, remove: 1.0 }, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn schedule_is_geometric() {
        let s = SaSchedule { t_start: 1.0, t_end: 0.01, depth: 2 };
        let r = s.ratio(101);
        assert!((r.powi(100) - 0.01).abs() < 1e-12);
        assert_eq!(s.ratio(1), 1.0);
    }

    #[test]
    fn pmis_examples() {
        let cfg = SaConfig::default();
        let e = estimate_pmis(&Graph::empty(3), &cfg, 10, 3).unwrap();
        assert_eq!((e.successes, e.p_point, e.zero_success), (10, 1.0, false));
        let e = estimate_pmis(&Graph::complete(4), &cfg, 10, 1).unwrap();
        assert_eq!(e.p_point, 1.0);
        assert!(estimate_pmis(&Graph::empty(3), &cfg, 0, 3).is_err());
    }

    #[test]
    fn exchange_rule() {
        assert_eq!(exchange_probability(1.0, 1.0, 3, 9), 1.0);
        // bigger set on the hot chain always moves down
        assert_eq!(exchange_probability(2.0, 0.5, 5, 4), 1.0);
        let p = exchange_probability(2.0, 0.5, 4, 5);
        assert!((p - (-1.5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn pt_examples() {
        let r = pt_run(&Graph::empty(4), &PtConfig::new(vec![2.0, 0.5], 4, 1, 1)).unwrap();
        assert_eq!(r.best_size, 4);
        let r = pt_run(&Graph::path(3), &PtConfig::new(vec![2.0, 0.1], 32, 1, 7)).unwrap();
        assert_eq!(r.best_size, 2);
        assert!(pt_run(&Graph::path(3), &PtConfig::new(vec![0.5, 2.0], 4, 1, 1)).is_err());
        assert!(pt_run(&Graph::path(3), &PtConfig::new(vec![0.5], 4, 1, 1)).is_err());
    }

    #[test]
    fn penalty_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(penalty_energy(&k4, &[true, false, false, false], 2.0).unwrap(), -1.0);
        assert_eq!(penalty_energy(&k4, &[true, true, false, false], 2.0).unwrap(), 0.0);
        assert_eq!(penalty_energy(&k4, &[false; 4], 2.0).unwrap(), 0.0);
        assert!(penalty_energy(&k4, &[false; 3], 2.0).is_err());
    }

    #[test]
    fn penalty_minimum_is_mis() {
        for seed in 0..10 {
            let g = generate_er_gnm(12, 20, seed).unwrap();
            let mis = brute_force_census(&g).unwrap().mis_size as f64;
            let min = (0u32..1 << 12)
                .map(|m| {
                    let x: Vec<bool> = (0..12).map(|i| m >> i & 1 == 1).collect();
                    penalty_energy(&g, &x, 2.0).unwrap()
                })
                .fold(f64::INFINITY, f64::min);
            assert_eq!(min, -mis);
        }
    }
}
