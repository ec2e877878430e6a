//! Exact sweeping-line dynamic program.
//!
//! Nodes are processed in sweep order. The state after each step is a table
//! of *variants*: one entry per distinct set of blocked frontier nodes, where
//! the frontier is the set of unprocessed nodes with at least one processed
//! neighbor and a frontier node is blocked when one of its processed
//! neighbors is selected. Two partial assignments with the same blocked set
//! admit exactly the same completions, so each table entry only needs the
//! largest partial set size reaching it (plus, in census mode, how many
//! partial sets reach that size and that size minus one).
//!
//! Census merging keeps the two top sizes per entry. This is exact: a partial
//! set that ends up in a global independent set of size |MIS| - 1 can trail
//! the best partial set with the same blocked frontier by at most one, since
//! swapping in the better prefix would otherwise beat |MIS|.
//!
//! In size-only mode an entry is also dropped when another entry blocks a
//! subset of its frontier nodes with at least the same size (every completion
//! of the dropped entry is available to the dominating one).

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hash};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;
use rustc_hash::FxHasher;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{validate_independent_set, Census, Graph};

type FxMap<K, V> = HashMap<K, V, BuildHasherDefault<FxHasher>>;

/// Default cap on the number of variants held at any step.
pub const DEFAULT_MAX_VARIANTS: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlaMode {
    /// |MIS| and one witness.
    SizeOnly,
    /// |MIS|, D_MIS and D_MIS-1; no witness.
    Census,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepOrder {
    /// Sort by x, then y.
    XThenY,
    /// Sort by y, then x.
    YThenX,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlaConfig {
    pub mode: SlaMode,
    /// Drop subset-dominated variants (size-only mode).
    pub dominance: bool,
    /// Reconstruct a witness set (size-only mode).
    pub witness: bool,
    pub max_variants: usize,
}

impl SlaConfig {
    pub fn size_only() -> Self {
        SlaConfig {
            mode: SlaMode::SizeOnly,
            dominance: true,
            witness: true,
            max_variants: DEFAULT_MAX_VARIANTS,
        }
    }

    pub fn census() -> Self {
        SlaConfig {
            mode: SlaMode::Census,
            dominance: false,
            witness: false,
            max_variants: DEFAULT_MAX_VARIANTS,
        }
    }
}

impl Default for SlaConfig {
    fn default() -> Self {
        Self::size_only()
    }
}

/// Output of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SlaResult {
    pub mis_size: usize,
    /// Present in census mode.
    pub d_mis: Option<BigUint>,
    pub d_mis_m1: Option<BigUint>,
    /// Present in size-only mode when requested; sorted ascending.
    pub witness: Option<Vec<usize>>,
    pub variants_peak: usize,
    pub steps: usize,
    pub wall_time: f64,
}

impl SlaResult {
    pub fn census(&self) -> Option<Census> {
        Some(Census {
            mis_size: self.mis_size,
            d_mis: self.d_mis.clone()?,
            d_mis_m1: self.d_mis_m1.clone()?,
        })
    }

    /// Result JSON; counts are decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mis_size": self.mis_size,
            "d_mis": self.d_mis.as_ref().map(|c| c.to_string()),
            "d_mis_m1": self.d_mis_m1.as_ref().map(|c| c.to_string()),
            "witness": self.witness,
            "variants_peak": self.variants_peak,
            "steps": self.steps,
            "wall_time_s": self.wall_time,
        })
    }
}

/// Nodes sorted by coordinates. Requires coordinates.
pub fn sweep_order(g: &Graph) -> Result<Vec<usize>> {
    sweep_order_with(g, SweepOrder::XThenY)
}

pub fn sweep_order_with(g: &Graph, order: SweepOrder) -> Result<Vec<usize>> {
    let coords = g.coords().ok_or(Error::RequiresCoordinates)?;
    let mut perm: Vec<usize> = (0..g.n()).collect();
    match order {
        SweepOrder::XThenY => perm.sort_by_key(|&v| (coords[v].0, coords[v].1, v)),
        SweepOrder::YThenX => perm.sort_by_key(|&v| (coords[v].1, coords[v].0, v)),
    }
    Ok(perm)
}

/// Fibonacci number `Fib(L + 1)` with `Fib(1) = Fib(2) = 1`; bounds the
/// variant count on Union-Jack lattices of side `L`.
pub fn fib_bound(l: u32) -> u128 {
    let (mut a, mut b) = (1u128, 1u128);
    for _ in 1..l {
        let c = a.saturating_add(b);
        a = b;
        b = c;
    }
    b
}

/// Solves with the coordinate sweep order.
pub fn sla_solve(g: &Graph, cfg: &SlaConfig) -> Result<SlaResult> {
    let order = sweep_order(g)?;
    sla_solve_with_order(g, &order, cfg)
}

/// Solves with a caller-supplied node order (any permutation is exact; the
/// variant count depends on how local the order is).
pub fn sla_solve_with_order(g: &Graph, order: &[usize], cfg: &SlaConfig) -> Result<SlaResult> {
    let start = Instant::now();
    let mut state = SweepState::new(g, order, cfg)?;
    while !state.is_done() {
        state.advance()?;
    }
    let mut res = state.finish()?;
    res.wall_time = start.elapsed().as_secs_f64();
    if let Some(w) = &res.witness {
        if w.len() != res.mis_size || !validate_independent_set(g, w)? {
            return Err(Error::InvalidInput("witness reconstruction failed".into()));
        }
    }
    Ok(res)
}

// ---------------------------------------------------------------------------
// frontier plan

#[derive(Debug, Clone)]
struct Step {
    node: usize,
    /// Slot of `node` if it already sits on the frontier.
    slot: Option<usize>,
    /// Slots of the unprocessed neighbors of `node` after this step.
    include: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Plan {
    steps: Vec<Step>,
    /// Frontier contents (slot -> node) after each step.
    width: usize,
}

fn plan(g: &Graph, order: &[usize]) -> Result<Plan> {
    let n = g.n();
    if order.len() != n {
        return Err(Error::InvalidInput("order length differs from node count".into()));
    }
    let mut pos = vec![usize::MAX; n];
    for (t, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::InvalidInput("order is not a permutation".into()));
        }
        pos[v] = t;
    }
    let mut slot_of = vec![usize::MAX; n];
    let mut free: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = Default::default();
    let mut width = 0usize;
    let mut steps = Vec::with_capacity(n);
    for (t, &v) in order.iter().enumerate() {
        let slot = (slot_of[v] != usize::MAX).then_some(slot_of[v]);
        if let Some(s) = slot {
            free.push(std::cmp::Reverse(s));
            slot_of[v] = usize::MAX;
        }
        let mut include = Vec::new();
        for &w in g.neighbors(v) {
            if pos[w] > t {
                if slot_of[w] == usize::MAX {
                    let s = match free.pop() {
                        Some(std::cmp::Reverse(s)) => s,
                        None => {
                            width += 1;
                            width - 1
                        }
                    };
                    slot_of[w] = s;
                }
                include.push(slot_of[w]);
            }
        }
        steps.push(Step { node: v, slot, include });
    }
    Ok(Plan { steps, width })
}

// ---------------------------------------------------------------------------
// keys

trait BitKey: Clone + Eq + Hash + Ord + std::fmt::Debug {
    fn zeros(width: usize) -> Self;
    fn test(&self, slot: usize) -> bool;
    fn set(&mut self, slot: usize);
    fn clear(&mut self, slot: usize);
    fn or_assign(&mut self, other: &Self);
    fn ones(&self) -> u32;
}

impl BitKey for u64 {
    fn zeros(_: usize) -> Self {
        0
    }
    fn test(&self, slot: usize) -> bool {
        *self >> slot & 1 == 1
    }
    fn set(&mut self, slot: usize) {
        *self |= 1 << slot;
    }
    fn clear(&mut self, slot: usize) {
        *self &= !(1 << slot);
    }
    fn or_assign(&mut self, other: &Self) {
        *self |= *other;
    }
    fn ones(&self) -> u32 {
        self.count_ones()
    }
}

impl BitKey for u128 {
    fn zeros(_: usize) -> Self {
        0
    }
    fn test(&self, slot: usize) -> bool {
        *self >> slot & 1 == 1
    }
    fn set(&mut self, slot: usize) {
        *self |= 1 << slot;
    }
    fn clear(&mut self, slot: usize) {
        *self &= !(1 << slot);
    }
    fn or_assign(&mut self, other: &Self) {
        *self |= *other;
    }
    fn ones(&self) -> u32 {
        self.count_ones()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
struct WideKey(Box<[u64]>);

impl BitKey for WideKey {
    fn zeros(width: usize) -> Self {
        WideKey(vec![0; width.div_ceil(64).max(1)].into_boxed_slice())
    }
    fn test(&self, slot: usize) -> bool {
        self.0[slot / 64] >> (slot % 64) & 1 == 1
    }
    fn set(&mut self, slot: usize) {
        self.0[slot / 64] |= 1 << (slot % 64);
    }
    fn clear(&mut self, slot: usize) {
        self.0[slot / 64] &= !(1 << (slot % 64));
    }
    fn or_assign(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a |= *b;
        }
    }
    fn ones(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
}

// ---------------------------------------------------------------------------
// subset index: binary trie over frontier slots

struct SubsetTrie {
    width: usize,
    nodes: Vec<[u32; 2]>,
}

impl SubsetTrie {
    fn new(width: usize) -> Self {
        SubsetTrie { width, nodes: vec![[0, 0]] }
    }

    fn insert<K: BitKey>(&mut self, key: &K) {
        let mut cur = 0usize;
        for s in 0..self.width {
            let b = key.test(s) as usize;
            let next = self.nodes[cur][b];
            cur = if next == 0 {
                self.nodes.push([0, 0]);
                let id = (self.nodes.len() - 1) as u32;
                self.nodes[cur][b] = id;
                id as usize
            } else {
                next as usize
            };
        }
    }

    /// Whether some inserted key is a subset of `key`.
    fn has_subset_of<K: BitKey>(&self, key: &K, stack: &mut Vec<(u32, u32)>) -> bool {
        if self.nodes.len() == 1 {
            return false;
        }
        stack.clear();
        stack.push((0, 0));
        while let Some((node, depth)) = stack.pop() {
            if depth as usize == self.width {
                return true;
            }
            let [zero, one] = self.nodes[node as usize];
            if one != 0 && key.test(depth as usize) {
                stack.push((one, depth + 1));
            }
            if zero != 0 {
                stack.push((zero, depth + 1));
            }
        }
        false
    }
}

// ---------------------------------------------------------------------------
// engine

const TOOK: u32 = 1 << 31;

struct Engine<'g, K: BitKey> {
    graph: &'g Graph,
    plan: Plan,
    cfg: SlaConfig,
    t: usize,
    keys: Vec<K>,
    best: Vec<u32>,
    counts: Vec<(BigUint, BigUint)>,
    back: Vec<Vec<u32>>,
    peak: usize,
}

impl<'g, K: BitKey> Engine<'g, K> {
    fn new(graph: &'g Graph, plan: Plan, cfg: SlaConfig) -> Self {
        let width = plan.width;
        let census = cfg.mode == SlaMode::Census;
        Engine {
            graph,
            plan,
            cfg,
            t: 0,
            keys: vec![K::zeros(width)],
            best: vec![0],
            counts: if census { vec![(BigUint::from(1u32), BigUint::zero())] } else { Vec::new() },
            back: Vec::new(),
            peak: 1,
        }
    }

    fn census(&self) -> bool {
        self.cfg.mode == SlaMode::Census
    }

    fn track_back(&self) -> bool {
        !self.census() && self.cfg.witness
    }

    fn advance(&mut self) -> Result<usize> {
        let step = &self.plan.steps[self.t];
        let width = self.plan.width;
        let mut mask = K::zeros(width);
        for &s in &step.include {
            mask.set(s);
        }
        let census = self.census();
        let track = self.track_back();
        let limit = self.cfg.max_variants;

        let mut index: FxMap<K, u32> = FxMap::default();
        index.reserve(self.keys.len() * 2);
        let mut keys: Vec<K> = Vec::with_capacity(self.keys.len() * 2);
        let mut best: Vec<u32> = Vec::with_capacity(self.keys.len() * 2);
        let mut counts: Vec<(BigUint, BigUint)> = Vec::new();
        let mut back: Vec<u32> = Vec::new();

        for p in 0..self.keys.len() {
            let key = &self.keys[p];
            let blocked = step.slot.is_some_and(|s| key.test(s));
            let mut k0 = key.clone();
            if let Some(s) = step.slot {
                k0.clear(s);
            }
            let children = if blocked {
                [Some(k0), None]
            } else {
                let mut k1 = k0.clone();
                k1.or_assign(&mask);
                [Some(k0), Some(k1)]
            };
            for (took, child) in children.into_iter().enumerate() {
                let Some(child) = child else { continue };
                let b = self.best[p] + took as u32;
                let link = p as u32 | if took == 1 { TOOK } else { 0 };
                match index.get(&child) {
                    None => {
                        index.insert(child.clone(), keys.len() as u32);
                        keys.push(child);
                        best.push(b);
                        if census {
                            counts.push(self.counts[p].clone());
                        }
                        if track {
                            back.push(link);
                        }
                        if keys.len() > limit {
                            return Err(Error::Budget { variants_peak: keys.len(), limit });
                        }
                    }
                    Some(&i) => {
                        let i = i as usize;
                        let eb = best[i];
                        if census {
                            let (c, c1) = &self.counts[p];
                            merge_counts(&mut best[i], &mut counts[i], b, c, c1);
                        } else if b > eb {
                            best[i] = b;
                            if track {
                                back[i] = link;
                            }
                        }
                    }
                }
            }
        }
        drop(index);

        if self.cfg.dominance && !census && keys.len() > 1 {
            let keep = dominance_filter(&keys, &best, width);
            if keep.len() < keys.len() {
                keys = keep.iter().map(|&i| keys[i].clone()).collect();
                best = keep.iter().map(|&i| best[i]).collect();
                if track {
                    back = keep.iter().map(|&i| back[i]).collect();
                }
            }
        }

        self.peak = self.peak.max(keys.len());
        self.keys = keys;
        self.best = best;
        self.counts = counts;
        if track {
            self.back.push(back);
        }
        self.t += 1;
        Ok(step.node)
    }

    fn finish(&self) -> Result<SlaResult> {
        // all frontier slots are empty once every node is processed
        debug_assert!(self.keys.len() == 1);
        let mis = self.best[0] as usize;
        let (d_mis, d_mis_m1) = if self.census() {
            let (c, c1) = self.counts[0].clone();
            (Some(c), Some(c1))
        } else {
            (None, None)
        };
        let witness = self.track_back().then(|| {
            let mut w = Vec::with_capacity(mis);
            let mut idx = 0usize;
            for t in (0..self.t).rev() {
                let link = self.back[t][idx];
                if link & TOOK != 0 {
                    w.push(self.plan.steps[t].node);
                }
                idx = (link & !TOOK) as usize;
            }
            w.sort_unstable();
            w
        });
        Ok(SlaResult {
            mis_size: mis,
            d_mis,
            d_mis_m1,
            witness,
            variants_peak: self.peak,
            steps: self.t,
            wall_time: 0.0,
        })
    }

    fn blocked_nodes(&self) -> Vec<Vec<usize>> {
        let frontier = self.frontier_slots();
        self.keys
            .iter()
            .map(|k| {
                let mut v: Vec<usize> = frontier
                    .iter()
                    .filter(|(s, _)| k.test(*s))
                    .map(|&(_, node)| node)
                    .collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// `(slot, node)` pairs of the current frontier.
    fn frontier_slots(&self) -> Vec<(usize, usize)> {
        let mut pos = vec![usize::MAX; self.graph.n()];
        for (t, s) in self.plan.steps.iter().enumerate() {
            pos[s.node] = t;
        }
        let mut seen = vec![false; self.graph.n()];
        let mut out = Vec::new();
        for s in &self.plan.steps[..self.t] {
            for &w in self.graph.neighbors(s.node).iter().filter(|&&w| pos[w] >= self.t) {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        // a frontier node keeps its slot until it is processed
        let mut slots = Vec::with_capacity(out.len());
        for w in out {
            let slot = self.plan.steps[pos[w]].slot.expect("frontier node has a slot");
            slots.push((slot, w));
        }
        slots.sort_unstable();
        slots
    }
}

// Census merge of an incoming (b, c, c1) into the stored (best, counts).
fn merge_counts(
    best: &mut u32,
    stored: &mut (BigUint, BigUint),
    b: u32,
    c: &BigUint,
    c1: &BigUint,
) {
    let eb = *best;
    if b == eb {
        stored.0 += c;
        stored.1 += c1;
    } else if b == eb + 1 {
        let old_best = std::mem::replace(&mut stored.0, c.clone());
        stored.1 = c1 + old_best;
        *best = b;
    } else if b + 1 == eb {
        stored.1 += c;
    } else if b > eb {
        *stored = (c.clone(), c1.clone());
        *best = b;
    }
}

// Indices of entries not dominated by another entry whose key is a subset
// with at least the same best; returned in ascending order.
fn dominance_filter<K: BitKey>(keys: &[K], best: &[u32], width: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| {
        best[b]
            .cmp(&best[a])
            .then(keys[a].ones().cmp(&keys[b].ones()))
            .then(a.cmp(&b))
    });
    let mut trie = SubsetTrie::new(width);
    let mut stack = Vec::new();
    let mut keep = Vec::with_capacity(keys.len());
    for i in idx {
        if trie.has_subset_of(&keys[i], &mut stack) {
            continue;
        }
        trie.insert(&keys[i]);
        keep.push(i);
    }
    keep.sort_unstable();
    keep
}

trait SweepEngine {
    fn advance(&mut self) -> Result<usize>;
    fn finish(&self) -> Result<SlaResult>;
    fn step(&self) -> usize;
    fn len(&self) -> usize;
    fn peak(&self) -> usize;
    fn variants(&self) -> Vec<VariantView>;
    fn frontier(&self) -> Vec<usize>;
}

impl<K: BitKey> SweepEngine for Engine<'_, K> {
    fn advance(&mut self) -> Result<usize> {
        Engine::advance(self)
    }
    fn finish(&self) -> Result<SlaResult> {
        Engine::finish(self)
    }
    fn step(&self) -> usize {
        self.t
    }
    fn len(&self) -> usize {
        self.keys.len()
    }
    fn peak(&self) -> usize {
        self.peak
    }
    fn variants(&self) -> Vec<VariantView> {
        let blocked = self.blocked_nodes();
        blocked
            .into_iter()
            .enumerate()
            .map(|(i, blocked)| VariantView {
                blocked,
                best: self.best[i] as usize,
                counts: self.counts.get(i).cloned(),
            })
            .collect()
    }
    fn frontier(&self) -> Vec<usize> {
        let mut f: Vec<usize> = self.frontier_slots().into_iter().map(|(_, v)| v).collect();
        f.sort_unstable();
        f
    }
}

/// Snapshot of one variant, for inspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantView {
    /// Blocked frontier nodes.
    pub blocked: Vec<usize>,
    pub best: usize,
    /// `(count_best, count_best_m1)` in census mode.
    pub counts: Option<(BigUint, BigUint)>,
}

/// Step-by-step sweep over a fixed node order.
pub struct SweepState<'g> {
    engine: Box<dyn SweepEngine + 'g>,
    total: usize,
}

impl<'g> SweepState<'g> {
    pub fn new(g: &'g Graph, order: &[usize], cfg: &SlaConfig) -> Result<Self> {
        let plan = plan(g, order)?;
        let width = plan.width;
        let engine: Box<dyn SweepEngine + 'g> = if width <= 64 {
            Box::new(Engine::<u64>::new(g, plan, *cfg))
        } else if width <= 128 {
            Box::new(Engine::<u128>::new(g, plan, *cfg))
        } else {
            Box::new(Engine::<WideKey>::new(g, plan, *cfg))
        };
        Ok(SweepState { engine, total: g.n() })
    }

    /// Processes the next node in order and returns it.
    pub fn advance(&mut self) -> Result<usize> {
        if self.is_done() {
            return Err(Error::InvalidInput("sweep already complete".into()));
        }
        self.engine.advance()
    }

    pub fn is_done(&self) -> bool {
        self.engine.step() == self.total
    }

    pub fn processed_count(&self) -> usize {
        self.engine.step()
    }

    pub fn variant_count(&self) -> usize {
        self.engine.len()
    }

    pub fn variants_peak(&self) -> usize {
        self.engine.peak()
    }

    /// Unprocessed nodes adjacent to the processed region.
    pub fn frontier(&self) -> Vec<usize> {
        self.engine.frontier()
    }

    pub fn variants(&self) -> Vec<VariantView> {
        self.engine.variants()
    }

    /// Result once every node has been processed.
    pub fn finish(&self) -> Result<SlaResult> {
        if !self.is_done() {
            return Err(Error::InvalidInput("sweep not complete".into()));
        }
        self.engine.finish()
    }
}
