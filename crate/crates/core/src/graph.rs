//! Instance graphs: unit-disk lattices, G(n, m) graphs and rewired
//! interpolations between them, plus the exhaustive census oracle.

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};

/// Integer lattice coordinate `(x, y)`.
pub type Coord = (i32, i32);

/// Attempts allowed when resampling for a single connected component.
pub const MAX_RESAMPLE_ATTEMPTS: u32 = 1000;

/// Largest graph [`brute_force_census`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 34;

/// Simple undirected graph with canonical edge order.
///
/// Edges are stored as `(i, j)` with `i < j`, sorted lexicographically, and
/// every neighbor list is sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    coords: Option<Vec<Coord>>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list in any order and orientation.
    ///
    /// Self-loops, duplicate edges and out-of-range endpoints are rejected.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        coords: Option<Vec<Coord>>,
    ) -> Result<Self> {
        if let Some(c) = &coords {
            if c.len() != n {
                return Err(Error::InvalidInput(format!(
                    "{} coordinates for {} nodes",
                    c.len(),
                    n
                )));
            }
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidInput(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop at {a}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if list.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate edge".into()));
        }
        Ok(Self::from_sorted_edges(n, list, coords))
    }

    fn from_sorted_edges(n: usize, edges: Vec<(usize, usize)>, coords: Option<Vec<Coord>>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(i, j) in &edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Graph { n, coords, edges, adj }
    }

    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_edges(n, Vec::new(), None)
    }

    /// Complete graph on `n` nodes.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_sorted_edges(n, edges, None)
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_sorted_edges(n, edges, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn coords(&self) -> Option<&[Coord]> {
        self.coords.as_deref()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && self.adj[i].binary_search(&j).is_ok()
    }

    /// Same graph with coordinates dropped.
    pub fn without_coords(&self) -> Self {
        Graph { coords: None, ..self.clone() }
    }

    /// Same edges, new coordinates.
    pub fn with_coords(&self, coords: Vec<Coord>) -> Result<Self> {
        if coords.len() != self.n {
            return Err(Error::InvalidInput("coordinate count mismatch".into()));
        }
        Ok(Graph { coords: Some(coords), ..self.clone() })
    }

    /// True for graphs with at most one connected component (the empty
    /// graph on zero nodes counts as connected).
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Subgraph induced by `keep`, relabelled to `0..keep.len()` in the given
    /// order. Coordinates are carried over.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (k, &v) in keep.iter().enumerate() {
            pos[v] = k;
        }
        let mut edges = Vec::new();
        for &(i, j) in &self.edges {
            if pos[i] != usize::MAX && pos[j] != usize::MAX {
                edges.push((pos[i].min(pos[j]), pos[i].max(pos[j])));
            }
        }
        edges.sort_unstable();
        let coords = self.coords.as_ref().map(|c| keep.iter().map(|&v| c[v]).collect());
        Graph::from_sorted_edges(keep.len(), edges, coords)
    }
}

/// How lattice sites are occupied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Occupancy {
    /// Exactly `round(rho * L^2)` distinct sites, drawn without replacement.
    #[default]
    FixedCount,
    /// Each site independently occupied with probability `rho`.
    Bernoulli,
}

/// Parameters of a random unit-disk lattice instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    /// Lattice side length.
    pub l: u32,
    /// Filling fraction in parts per thousand.
    pub rho_ppt: u32,
    /// Squared disk radius in units of the squared lattice spacing.
    pub r2: u32,
    pub seed: u64,
    #[serde(default)]
    pub occupancy: Occupancy,
    /// Resample until the instance is a single component.
    #[serde(default = "default_true")]
    pub connected: bool,
}

fn default_true() -> bool {
    true
}

impl LatticeSpec {
    pub fn new(l: u32, rho_ppt: u32, r2: u32, seed: u64) -> Self {
        LatticeSpec {
            l,
            rho_ppt,
            r2,
            seed,
            occupancy: Occupancy::FixedCount,
            connected: true,
        }
    }

    /// `round(rho * L^2)`, rounding halves up.
    pub fn node_count(&self) -> usize {
        let sites = self.l as u64 * self.l as u64;
        ((sites * self.rho_ppt as u64 + 500) / 1000) as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::InvalidSpec("L must be at least 1".into()));
        }
        if self.rho_ppt == 0 || self.rho_ppt > 1000 {
            return Err(Error::InvalidSpec(format!(
                "rho_ppt {} outside 1..=1000",
                self.rho_ppt
            )));
        }
        if self.r2 == 0 {
            return Err(Error::InvalidSpec("r2 must be at least 1".into()));
        }
        if self.occupancy == Occupancy::FixedCount && self.node_count() == 0 {
            return Err(Error::InvalidSpec(format!(
                "rho * L^2 rounds to zero nodes (L={}, rho_ppt={})",
                self.l, self.rho_ppt
            )));
        }
        Ok(())
    }
}

/// Unit-disk graph on distinct integer sites: `(i, j)` is an edge iff the
/// squared distance is at most `r2`. Nodes keep the order of `coords`.
pub fn unit_disk_graph(coords: Vec<Coord>, r2: u32) -> Result<Graph> {
    let n = coords.len();
    let r = (r2 as f64).sqrt() as i32 + 1;
    let mut cells = std::collections::HashMap::with_capacity(n);
    for (v, &c) in coords.iter().enumerate() {
        if cells.insert(c, v).is_some() {
            return Err(Error::InvalidInput(format!("duplicate site {c:?}")));
        }
    }
    let mut edges = Vec::new();
    for (v, &(x, y)) in coords.iter().enumerate() {
        for dx in -r..=r {
            for dy in -r..=r {
                let d2 = (dx * dx + dy * dy) as i64;
                if d2 == 0 || d2 > r2 as i64 {
                    continue;
                }
                if let Some(&w) = cells.get(&(x + dx, y + dy)) {
                    if v < w {
                        edges.push((v, w));
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted_edges(n, edges, Some(coords)))
}

/// Every site of the `L x L` lattice, in `(x, y)` order.
pub fn full_lattice(l: u32, r2: u32) -> Result<Graph> {
    let l = l as i32;
    let coords = (0..l).flat_map(|x| (0..l).map(move |y| (x, y))).collect();
    unit_disk_graph(coords, r2)
}

fn draw_sites(spec: &LatticeSpec, attempt: u32) -> Vec<Coord> {
    let mut rng = stream_rng(spec.seed, Stream::Placement, attempt as u64);
    let l = spec.l as usize;
    let mut sites: Vec<usize> = match spec.occupancy {
        Occupancy::FixedCount => index::sample(&mut rng, l * l, spec.node_count()).into_vec(),
        Occupancy::Bernoulli => {
            let p = spec.rho_ppt as f64 / 1000.0;
            (0..l * l).filter(|_| rng.gen_bool(p)).collect()
        }
    };
    sites.sort_unstable();
    sites
        .into_iter()
        .map(|s| ((s / l) as i32, (s % l) as i32))
        .collect()
}

/// Kind of a stored instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    UdLattice,
    ErGnm,
    Rewired,
}

/// A generated graph together with everything needed to regenerate it.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub kind: InstanceKind,
    pub l: Option<u32>,
    pub rho_ppt: Option<u32>,
    pub r2: Option<u32>,
    pub seed: u64,
    pub epsilon_ppt: Option<u32>,
    pub graph: Graph,
    pub resample_attempts: u32,
}

/// Draws a unit-disk lattice instance, resampling with derived sub-seeds
/// until it is connected (when `spec.connected` is set).
pub fn ud_lattice_instance(spec: &LatticeSpec) -> Result<Instance> {
    spec.validate()?;
    for attempt in 0..MAX_RESAMPLE_ATTEMPTS {
        let sites = draw_sites(spec, attempt);
        if sites.is_empty() {
            continue;
        }
        let g = unit_disk_graph(sites, spec.r2)?;
        if !spec.connected || g.is_connected() {
            return Ok(Instance {
                kind: InstanceKind::UdLattice,
                l: Some(spec.l),
                rho_ppt: Some(spec.rho_ppt),
                r2: Some(spec.r2),
                seed: spec.seed,
                epsilon_ppt: None,
                graph: g,
                resample_attempts: attempt + 1,
            });
        }
    }
    Err(Error::ResampleExhausted { attempts: MAX_RESAMPLE_ATTEMPTS })
}

/// Random unit-disk lattice graph; see [`ud_lattice_instance`].
pub fn generate_ud_lattice(spec: &LatticeSpec) -> Result<Graph> {
    ud_lattice_instance(spec).map(|i| i.graph)
}

/// Largest possible Union-Jack edge count `4L^2 - 6L + 2` and its expected
/// value `rho^2 (4L^2 - 6L + 2)` under independent site occupancy.
pub fn edge_count_bounds(l: u32, rho: f64) -> (u64, f64) {
    let l = l as i64;
    let max = (4 * l * l - 6 * l + 2).max(0) as u64;
    (max, rho * rho * max as f64)
}

/// `2|E| / (n(n-1))`.
pub fn graph_density(g: &Graph) -> Result<f64> {
    if g.n < 2 {
        return Err(Error::UndefinedDensity);
    }
    let n = g.n as f64;
    Ok(2.0 * g.edge_count() as f64 / (n * (n - 1.0)))
}

fn pair_from_index(k: u64) -> (usize, usize) {
    // pairs (i, j), i < j, enumerated as j = 1.., i = 0..j
    let j = ((((8 * k + 1) as f64).sqrt() + 1.0) / 2.0).floor() as u64;
    let mut j = j.max(1);
    while j * (j - 1) / 2 > k {
        j -= 1;
    }
    while (j + 1) * j / 2 <= k {
        j += 1;
    }
    let i = k - j * (j - 1) / 2;
    (i as usize, j as usize)
}

/// Uniform sample from all graphs with `n` nodes and `m` edges.
pub fn generate_er_gnm(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let pairs = n as u64 * n.saturating_sub(1) as u64 / 2;
    if m as u64 > pairs {
        return Err(Error::InvalidSpec(format!(
            "{m} edges requested but only {pairs} pairs exist on {n} nodes"
        )));
    }
    let mut rng = stream_rng(seed, Stream::Erdos, 0);
    let mut edges: Vec<(usize, usize)> = if pairs <= usize::MAX as u64 / 2 {
        index::sample(&mut rng, pairs as usize, m)
            .into_iter()
            .map(|k| pair_from_index(k as u64))
            .collect()
    } else {
        return Err(Error::InvalidSpec("graph too large".into()));
    };
    edges.sort_unstable();
    Ok(Graph::from_sorted_edges(n, edges, None))
}

/// G(n, m) instance record.
pub fn er_instance(n: usize, m: usize, seed: u64) -> Result<Instance> {
    Ok(Instance {
        kind: InstanceKind::ErGnm,
        l: None,
        rho_ppt: None,
        r2: None,
        seed,
        epsilon_ppt: None,
        graph: generate_er_gnm(n, m, seed)?,
        resample_attempts: 1,
    })
}

/// Replaces `round(epsilon * |E|)` uniformly chosen edges, one at a time,
/// by uniformly random non-edges. Node count, edge count and coordinates
/// are preserved.
pub fn rewire(g: &Graph, epsilon: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidInput(format!("epsilon {epsilon} outside [0, 1]")));
    }
    let m = g.edge_count();
    let k = (epsilon * m as f64).round() as usize;
    if k == 0 {
        return Ok(g.clone());
    }
    let pairs = g.n * (g.n - 1) / 2;
    // a replacement must differ from every current edge and from the edge
    // it replaces, so there are exactly `pairs - m` candidates
    if pairs <= m {
        return Err(Error::NoNonEdge);
    }
    let mut rng = stream_rng(seed, Stream::Rewire, 0);
    let chosen = index::sample(&mut rng, m, k).into_vec();
    let mut slots = g.edges.clone();
    let mut present: HashSet<(usize, usize)> = slots.iter().copied().collect();
    for idx in chosen {
        let old = slots[idx];
        present.remove(&old);
        let new = loop {
            let a = rng.gen_range(0..g.n);
            let b = rng.gen_range(0..g.n);
            if a == b {
                continue;
            }
            let e = (a.min(b), a.max(b));
            if e != old && !present.contains(&e) {
                break e;
            }
        };
        present.insert(new);
        slots[idx] = new;
    }
    slots.sort_unstable();
    Ok(Graph::from_sorted_edges(g.n, slots, g.coords.clone()))
}

/// Rewired unit-disk lattice instance. The rewiring stream is seeded from
/// the instance seed.
pub fn rewired_instance(spec: &LatticeSpec, epsilon_ppt: u32) -> Result<Instance> {
    if epsilon_ppt > 1000 {
        return Err(Error::InvalidSpec(format!("epsilon_ppt {epsilon_ppt} > 1000")));
    }
    let base = ud_lattice_instance(spec)?;
    let graph = rewire(&base.graph, epsilon_ppt as f64 / 1000.0, spec.seed)?;
    Ok(Instance {
        kind: InstanceKind::Rewired,
        epsilon_ppt: Some(epsilon_ppt),
        graph,
        ..base
    })
}

/// |MIS| together with the number of independent sets of size |MIS| and
/// |MIS| - 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub mis_size: usize,
    pub d_mis: BigUint,
    pub d_mis_m1: BigUint,
}

impl Census {
    pub fn new(mis_size: usize, d_mis: impl Into<BigUint>, d_mis_m1: impl Into<BigUint>) -> Self {
        Census {
            mis_size,
            d_mis: d_mis.into(),
            d_mis_m1: d_mis_m1.into(),
        }
    }
}

type Poly = [u64; BRUTE_FORCE_LIMIT + 1];

fn binomial_row(k: usize) -> Poly {
    let mut p = [0u64; BRUTE_FORCE_LIMIT + 1];
    p[0] = 1;
    for i in 1..=k {
        for j in (1..=i).rev() {
            p[j] += p[j - 1];
        }
    }
    p
}

// Independence polynomial of the subgraph induced by `mask`:
// I(G) = I(G - v) + x I(G - N[v]) on a maximum-degree vertex v.
fn independence_poly(adj: &[u64], mask: u64) -> Poly {
    let mut best = None;
    let mut best_deg = 0;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & mask).count_ones();
        if d > best_deg {
            best_deg = d;
            best = Some(v);
        }
    }
    let Some(v) = best else {
        return binomial_row(mask.count_ones() as usize);
    };
    let without = independence_poly(adj, mask & !(1u64 << v));
    let with = independence_poly(adj, mask & !(adj[v] | (1u64 << v)));
    let mut out = without;
    for k in 0..BRUTE_FORCE_LIMIT {
        out[k + 1] += with[k];
    }
    out
}

/// Exact census by exhaustive enumeration, for graphs with at most
/// [`BRUTE_FORCE_LIMIT`] nodes. Counts every independent set of the two
/// sizes, maximal or not.
pub fn brute_force_census(g: &Graph) -> Result<Census> {
    if g.n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit { n: g.n, limit: BRUTE_FORCE_LIMIT });
    }
    let adj: Vec<u64> = (0..g.n)
        .map(|v| g.adj[v].iter().fold(0u64, |m, &w| m | (1u64 << w)))
        .collect();
    let full = if g.n == 64 { u64::MAX } else { (1u64 << g.n) - 1 };
    let poly = independence_poly(&adj, full);
    let mis = (0..=g.n).rev().find(|&k| poly[k] > 0).unwrap_or(0);
    let m1 = if mis == 0 { 0 } else { poly[mis - 1] };
    Ok(Census::new(mis, poly[mis], m1))
}

/// True iff no edge has both endpoints in `set`.
pub fn validate_independent_set(g: &Graph, set: &[usize]) -> Result<bool> {
    let mut inside = vec![false; g.n];
    for &v in set {
        if v >= g.n {
            return Err(Error::InvalidInput(format!("node {v} out of range")));
        }
        inside[v] = true;
    }
    Ok(!g.edges.iter().any(|&(i, j)| inside[i] && inside[j]))
}
