//! Exact branch and bound for MIS.
//!
//! Depth-first search branching on a maximum-degree free vertex, include
//! branch first. Degree-0 and degree-1 vertices are fixed at every search
//! node, dominated vertices are dropped (optional), and a greedy clique cover of the free vertices bounds what the
//! subtree can still add. No primal heuristics are used: incumbents come
//! only from leaves of the search tree, so the time at which the optimum is
//! first seen is a property of the search itself.

use serde::{Deserialize, Serialize};

use crate::clock::{ClockKind, Stopwatch};
use crate::error::Result;
use crate::graph::Graph;

/// Fixed-size bitset over graph nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for v in 0..n {
            b.insert(v);
        }
        b
    }

    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    fn contains(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and_count(&self, other: &Bits) -> u32 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones()).sum()
    }

    fn difference_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn intersect_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= b;
        }
    }

    /// Whether `self ∩ free`, plus `u`, lies inside `within`.
    fn closed_subset_within(&self, u: usize, within: &Bits, free: &Bits) -> bool {
        within.contains(u)
            && self.0.iter().zip(&free.0).zip(&within.0).all(|((a, f), w)| a & f & !w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

fn adjacency_bits(g: &Graph) -> Vec<Bits> {
    (0..g.n())
        .map(|v| {
            let mut b = Bits::empty(g.n());
            for &w in g.neighbors(v) {
                b.insert(w);
            }
            b
        })
        .collect()
}

/// Result of the degree-0/degree-1 reductions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// Remaining graph, relabelled to `0..residual.n()`.
    pub residual: Graph,
    /// Original ids of the residual nodes.
    pub residual_ids: Vec<usize>,
    /// Original ids forced into every maximum independent set found.
    pub forced_in: Vec<usize>,
    /// `forced_in.len()`; MIS(g) = offset + MIS(residual).
    pub offset: usize,
}

/// Repeatedly takes isolated vertices and pendant vertices (deleting the
/// pendant's neighbor), lowest id first.
pub fn reduce(g: &Graph) -> Reduction {
    let n = g.n();
    let adj = adjacency_bits(g);
    let mut alive = Bits::full(n);
    let mut forced = Vec::new();
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..n {
            if !alive.contains(v) {
                continue;
            }
            match adj[v].and_count(&alive) {
                0 => {
                    forced.push(v);
                    alive.remove(v);
                    changed = true;
                }
                1 => {
                    let mut nb = adj[v].clone();
                    nb.intersect_with(&alive);
                    let w = nb.first().expect("one live neighbor");
                    forced.push(v);
                    alive.remove(v);
                    alive.remove(w);
                    changed = true;
                }
                _ => {}
            }
        }
    }
    let keep: Vec<usize> = alive.iter().collect();
    forced.sort_unstable();
    Reduction {
        residual: g.induced(&keep),
        residual_ids: keep,
        offset: forced.len(),
        forced_in: forced,
    }
}

fn greedy_clique_cover(adj: &[Bits], free: &Bits) -> usize {
    let mut uncovered = free.clone();
    let mut cliques = 0;
    while let Some(seed) = uncovered.first() {
        uncovered.remove(seed);
        let mut cand = uncovered.clone();
        cand.intersect_with(&adj[seed]);
        while let Some(c) = cand.first() {
            uncovered.remove(c);
            cand.remove(c);
            cand.intersect_with(&adj[c]);
        }
        cliques += 1;
    }
    cliques
}

/// Number of cliques in a greedy partition of `free` (lowest-id seeds,
/// lowest-id growth). An upper bound on the MIS of the induced subgraph.
pub fn clique_cover_bound(g: &Graph, free: &[usize]) -> usize {
    let adj = adjacency_bits(g);
    let mut f = Bits::empty(g.n());
    for &v in free {
        f.insert(v);
    }
    greedy_clique_cover(&adj, &f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchRule {
    #[default]
    MaxDegreeFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BnbConfig {
    /// Seconds; `None` runs to completion.
    pub time_limit: Option<f64>,
    /// Known optimum. The search stops once an incumbent of this size is
    /// found. A target below the true optimum stops early with a
    /// meaningless time-to-solution; that is the caller's responsibility.
    pub target: Option<usize>,
    /// No primal rounding or warm starts. The engine has none, so this only
    /// documents the protocol.
    pub disable_rounding_heuristics: bool,
    pub branch_rule: BranchRule,
    pub clock: ClockKind,
    /// Drop a vertex whose closed neighborhood contains a neighbor's closed
    /// neighborhood, at every search node.
    #[serde(default = "yes")]
    pub dominance: bool,
}

fn yes() -> bool {
    true
}

impl Default for BnbConfig {
    fn default() -> Self {
        BnbConfig {
            time_limit: None,
            target: None,
            disable_rounding_heuristics: true,
            branch_rule: BranchRule::MaxDegreeFirst,
            clock: ClockKind::Wall,
            dominance: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BnbStatus {
    Optimal,
    TargetReached,
    Timeout,
}

impl BnbStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            BnbStatus::Optimal => "optimal",
            BnbStatus::TargetReached => "target-reached",
            BnbStatus::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncumbentEvent {
    pub time: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BnbResult {
    pub mis_size: usize,
    pub witness: Vec<usize>,
    /// Time to prove optimality; set when `status` is optimal.
    pub tto: Option<f64>,
    /// Time the final incumbent size first appeared; unset on timeout.
    pub tts: Option<f64>,
    pub incumbents: Vec<IncumbentEvent>,
    pub nodes_explored: u64,
    pub status: BnbStatus,
}

struct Search<'a> {
    adj: &'a [Bits],
    clock: Stopwatch,
    limit: Option<f64>,
    target: Option<usize>,
    best: Vec<usize>,
    incumbents: Vec<IncumbentEvent>,
    nodes: u64,
    stop: Option<BnbStatus>,
    dominance: bool,
}

impl Search<'_> {
    fn record(&mut self, cur: &[usize]) {
        if cur.len() > self.best.len() || (self.incumbents.is_empty() && cur.is_empty()) {
            self.best = cur.to_vec();
            self.incumbents.push(IncumbentEvent {
                time: self.clock.elapsed(),
                size: cur.len(),
            });
            if self.target.is_some_and(|t| cur.len() >= t) {
                self.stop = Some(BnbStatus::TargetReached);
            }
        }
    }

    fn dfs(&mut self, mut free: Bits, cur: &mut Vec<usize>) {
        if self.stop.is_some() {
            return;
        }
        self.nodes += 1;
        if self.nodes % 1024 == 1 {
            if let Some(l) = self.limit {
                if self.clock.elapsed() > l {
                    self.stop = Some(BnbStatus::Timeout);
                    return;
                }
            }
        }
        let depth = cur.len();
        // forced choices: isolated and pendant free vertices
        loop {
            let mut fixed = false;
            let mut v_iter = free.first();
            while let Some(v) = v_iter {
                match self.adj[v].and_count(&free) {
                    0 => {
                        cur.push(v);
                        free.remove(v);
                        fixed = true;
                    }
                    1 => {
                        let mut nb = self.adj[v].clone();
                        nb.intersect_with(&free);
                        let w = nb.first().expect("one free neighbor");
                        cur.push(v);
                        free.remove(v);
                        free.remove(w);
                        fixed = true;
                    }
                    _ => {}
                }
                v_iter = next_after(&free, v);
            }
            if !fixed && self.dominance {
                // v is dominated by a neighbor u when N[u] is inside N[v];
                // some MIS avoids v
                let mut v_iter = free.first();
                while let Some(v) = v_iter {
                    let mut nv = self.adj[v].clone();
                    nv.intersect_with(&free);
                    nv.insert(v);
                    let dominated = nv.iter().any(|u| u != v && self.adj[u].closed_subset_within(u, &nv, &free));
                    v_iter = next_after(&free, v);
                    if dominated {
                        free.remove(v);
                        fixed = true;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        if free.is_empty() {
            self.record(cur);
            cur.truncate(depth);
            return;
        }
        let bound = greedy_clique_cover(self.adj, &free);
        if cur.len() + bound <= self.best.len() {
            cur.truncate(depth);
            return;
        }
        let mut pick = usize::MAX;
        let mut pick_deg = 0;
        for v in free.iter() {
            let d = self.adj[v].and_count(&free);
            if d > pick_deg {
                pick_deg = d;
                pick = v;
            }
        }
        let mut with = free.clone();
        with.difference_with(&self.adj[pick]);
        with.remove(pick);
        cur.push(pick);
        self.dfs(with, cur);
        cur.pop();
        let mut without = free;
        without.remove(pick);
        self.dfs(without, cur);
        cur.truncate(depth);
    }
}

fn next_after(b: &Bits, v: usize) -> Option<usize> {
    let start = v + 1;
    let mut i = start / 64;
    if i >= b.0.len() {
        return None;
    }
    let mut w = b.0[i] & (!0u64 << (start % 64));
    loop {
        if w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
        i += 1;
        if i >= b.0.len() {
            return None;
        }
        w = b.0[i];
    }
}

/// Exact MIS by branch and bound.
pub fn bnb_solve(g: &Graph, cfg: &BnbConfig) -> Result<BnbResult> {
    let adj = adjacency_bits(g);
    let mut s = Search {
        adj: &adj,
        clock: Stopwatch::start(cfg.clock),
        limit: cfg.time_limit,
        target: cfg.target,
        best: Vec::new(),
        incumbents: Vec::new(),
        nodes: 0,
        stop: None,
        dominance: cfg.dominance,
    };
    let mut cur = Vec::new();
    s.dfs(Bits::full(g.n()), &mut cur);
    let end = s.clock.elapsed();
    let status = s.stop.unwrap_or(BnbStatus::Optimal);
    let mut witness = s.best;
    witness.sort_unstable();
    let tts = match status {
        BnbStatus::Timeout => None,
        _ => s.incumbents.last().map(|e| e.time),
    };
    Ok(BnbResult {
        mis_size: witness.len(),
        witness,
        tto: (status == BnbStatus::Optimal).then_some(end),
        tts,
        incumbents: s.incumbents,
        nodes_explored: s.nodes,
        status,
    })
}

/// The MIS integer program in LP text format: maximize the sum of binaries
/// subject to `x_i + x_j <= 1` for every edge, in canonical edge order.
pub fn export_ilp(g: &Graph) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    out.push_str("\\ Maximum independent set\n");
    out.push_str("Maximize\n obj:");
    if g.n() == 0 {
        out.push_str(" 0");
    }
    for v in 0..g.n() {
        if v > 0 {
            out.push_str(if v % 10 == 0 { "\n  +" } else { " +" });
        }
        write!(out, " x{v}").unwrap();
    }
    out.push_str("\nSubject To\n");
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        writeln!(out, " e{k}: x{i} + x{j} <= 1").unwrap();
    }
    out.push_str("Binary\n");
    for v in 0..g.n() {
        write!(out, " x{v}").unwrap();
        if v % 10 == 9 || v + 1 == g.n() {
            out.push('\n');
        }
    }
    out.push_str("End\n");
    out
}
