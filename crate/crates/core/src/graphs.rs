//! Random regular graphs, random colorings and an exact Cheeger oracle.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sampler::Seed;
use crate::stats::MCEstimate;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("no simple connected pairing after {0} attempts")]
    RejectionBudget(usize),
    #[error("graph is not {0}")]
    Invalid(String),
    #[error("exact Cheeger enumeration is limited to {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
}

pub const RETRY_CAP: usize = 1000;
pub const EXACT_MAX: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularGraph {
    pub n: usize,
    pub d: usize,
    pub edges: Vec<(u32, u32)>,
    #[serde(skip)]
    adj: Vec<Vec<u32>>,
}

impl RegularGraph {
    /// Validates a simple, connected, regular graph.
    pub fn from_edges(n: usize, edges: Vec<(u32, u32)>) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            if a == b || a as usize >= n || b as usize >= n {
                return Err(GraphError::Invalid(format!("simple: bad edge ({a}, {b})")));
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(GraphError::Invalid("simple: repeated edge".into()));
            }
        }
        let d = adj.first().map_or(0, Vec::len);
        if adj.iter().any(|l| l.len() != d) {
            return Err(GraphError::Invalid("regular".into()));
        }
        let g = RegularGraph { n, d, edges, adj };
        if !g.is_connected() {
            return Err(GraphError::Invalid("connected".into()));
        }
        Ok(g)
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w as usize);
                }
            }
        }
        count == self.n
    }

    /// Number of edges with exactly one endpoint in the set.
    pub fn boundary(&self, in_set: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| in_set[a as usize] != in_set[b as usize])
            .count()
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n as u32)
            .flat_map(|a| (a + 1..n as u32).map(move |b| (a, b)))
            .collect();
        Self::from_edges(n, edges).expect("complete graph")
    }

    pub fn cycle(n: usize) -> Self {
        let edges = (0..n as u32).map(|a| (a, (a + 1) % n as u32)).collect();
        Self::from_edges(n, edges).expect("cycle")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, edges).expect("Petersen graph")
    }
}

/// `|boundary| / min(|A|, n - |A|)`; `None` when either side is empty.
pub fn h_star(g: &RegularGraph, in_set: &[bool]) -> Option<f64> {
    let k = in_set.iter().filter(|&&b| b).count();
    let m = k.min(g.n - k);
    (m > 0).then(|| g.boundary(in_set) as f64 / m as f64)
}

/// Uniform simple connected `d`-regular graph from the pairing model by rejection.
pub fn random_regular(n: usize, d: usize, seed: Seed) -> Result<RegularGraph, GraphError> {
    if d < 3 || n <= d || (n * d) % 2 == 1 {
        return Err(GraphError::BadParameters(format!(
            "need d >= 3, n > d and n d even (n = {n}, d = {d})"
        )));
    }
    let mut rng = seed.rng();
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    for _ in 0..RETRY_CAP {
        stubs.shuffle(&mut rng);
        let edges: Vec<(u32, u32)> = stubs
            .chunks_exact(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        if let Ok(g) = RegularGraph::from_edges(n, edges) {
            return Ok(g);
        }
    }
    Err(GraphError::RejectionBudget(RETRY_CAP))
}

/// Per-trial record of a coloring experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphTrial {
    pub n: usize,
    pub d: usize,
    /// Region target size; 0 for vertex colorings.
    pub s: usize,
    pub trial: usize,
    pub boundary_edges: usize,
    pub black_count: usize,
    pub h_star: Option<f64>,
    pub seed: Seed,
}

impl GraphTrial {
    pub const CSV_HEADER: [&'static str; 8] =
        ["n", "d", "s", "trial", "boundary_edges", "black_count", "h_star", "seed"];

    pub fn csv_fields(&self) -> [String; 8] {
        [
            self.n.to_string(),
            self.d.to_string(),
            self.s.to_string(),
            self.trial.to_string(),
            self.boundary_edges.to_string(),
            self.black_count.to_string(),
            self.h_star.map_or_else(|| "inf".into(), crate::isokawa::fmt),
            self.seed.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoringSummary {
    pub h_star: MCEstimate,
    pub boundary: MCEstimate,
    pub trials: Vec<GraphTrial>,
}

fn summarize(trials: Vec<GraphTrial>, seed: Seed) -> ColoringSummary {
    let hs: Vec<f64> = trials.iter().filter_map(|t| t.h_star).collect();
    let excluded = trials.len() - hs.len();
    let bs: Vec<f64> = trials.iter().map(|t| t.boundary_edges as f64).collect();
    ColoringSummary {
        h_star: MCEstimate::from_samples(&hs, excluded, seed),
        boundary: MCEstimate::from_samples(&bs, 0, seed),
        trials,
    }
}

/// Colors a uniform half of the vertices black, `trials` times.
pub fn half_coloring_estimate(
    g: &RegularGraph,
    trials: usize,
    seed: Seed,
) -> Result<ColoringSummary, GraphError> {
    if g.n % 2 == 1 {
        return Err(GraphError::BadParameters("half coloring needs n even".into()));
    }
    let rows = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = seed.with_stream(t as u64);
            let mut rng = s.rng();
            let mut in_set = vec![false; g.n];
            for v in rand::seq::index::sample(&mut rng, g.n, g.n / 2) {
                in_set[v] = true;
            }
            GraphTrial {
                n: g.n,
                d: g.d,
                s: 0,
                trial: t,
                boundary_edges: g.boundary(&in_set),
                black_count: g.n / 2,
                h_star: h_star(g, &in_set),
                seed: s,
            }
        })
        .collect();
    Ok(summarize(rows, seed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPartition {
    pub region_of: Vec<usize>,
    pub sizes: Vec<usize>,
    pub s: usize,
}

impl RegionPartition {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Edges joining two different regions.
    pub fn inter_region_edges(&self, g: &RegularGraph) -> usize {
        g.edges
            .iter()
            .filter(|&&(a, b)| self.region_of[a as usize] != self.region_of[b as usize])
            .count()
    }

    /// Checks connectivity of every region and the size window `[s, max_size]`.
    pub fn check(&self, adj: &dyn Fn(usize) -> Vec<usize>, max_size: usize) -> Result<(), String> {
        let n = self.region_of.len();
        for (r, &size) in self.sizes.iter().enumerate() {
            if size < self.s || size > max_size {
                return Err(format!("region {r} has size {size}"));
            }
            let start = (0..n).find(|&v| self.region_of[v] == r).ok_or("empty region")?;
            let mut seen = vec![false; n];
            seen[start] = true;
            let mut stack = vec![start];
            let mut count = 1;
            while let Some(v) = stack.pop() {
                for w in adj(v) {
                    if !seen[w] && self.region_of[w] == r {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
            if count != size {
                return Err(format!("region {r} is disconnected"));
            }
        }
        Ok(())
    }
}

/// Cuts a rooted tree, given by `parent` and a post-order, into connected regions.
///
/// A vertex closes a region once its pending subtree reaches `s` vertices;
/// the leftover piece at the root joins a region hanging below it.
pub fn regions_from_tree(parent: &[usize], post_order: &[usize], s: usize) -> RegionPartition {
    let n = parent.len();
    let root = *post_order.last().expect("non-empty tree");
    let mut pending = vec![1usize; n];
    let mut region_of = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &v in post_order {
        if v != root {
            children[parent[v]].push(v);
        }
    }
    // closed[v]: v heads a region already cut
    let mut closed = vec![false; n];
    for &v in post_order {
        for &c in &children[v] {
            if !closed[c] {
                pending[v] += pending[c];
            }
        }
        if pending[v] >= s {
            closed[v] = true;
            let id = sizes.len();
            let mut stack = vec![v];
            let mut size = 0;
            while let Some(x) = stack.pop() {
                region_of[x] = id;
                size += 1;
                for &c in &children[x] {
                    if !closed[c] {
                        stack.push(c);
                    }
                }
            }
            sizes.push(size);
        }
    }
    if !closed[root] {
        // the leftover component around the root touches some closed subtree
        let mut stack = vec![root];
        let mut piece = Vec::new();
        let mut target = None;
        while let Some(x) = stack.pop() {
            piece.push(x);
            for &c in &children[x] {
                if closed[c] {
                    target = target.or(Some(region_of[c]));
                } else {
                    stack.push(c);
                }
            }
        }
        match target {
            Some(id) => {
                for x in piece.iter().copied() {
                    region_of[x] = id;
                }
                sizes[id] += piece.len();
            }
            None => {
                for x in piece.iter().copied() {
                    region_of[x] = 0;
                }
                sizes.push(piece.len());
            }
        }
    }
    RegionPartition { region_of, sizes, s }
}

/// Random depth-first spanning tree cut into regions of size in `[s, d s]`.
pub fn spanning_tree_regions(g: &RegularGraph, s: usize, seed: Seed) -> Result<RegionPartition, GraphError> {
    if s < 2 || g.n < 2 * s {
        return Err(GraphError::BadParameters(format!("need s >= 2 and n >= 2 s (s = {s})")));
    }
    let mut rng = seed.rng();
    let root = rng.random_range(0..g.n);
    let mut parent = vec![usize::MAX; g.n];
    let mut seen = vec![false; g.n];
    let mut post = Vec::with_capacity(g.n);
    // iterative DFS with shuffled neighbour lists
    let mut order: Vec<Vec<u32>> = (0..g.n)
        .map(|v| {
            let mut l = g.neighbors(v).to_vec();
            l.shuffle(&mut rng);
            l
        })
        .collect();
    let mut stack = vec![root];
    seen[root] = true;
    parent[root] = root;
    while let Some(&v) = stack.last() {
        if let Some(w) = order[v].pop() {
            let w = w as usize;
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        } else {
            post.push(v);
            stack.pop();
        }
    }
    Ok(regions_from_tree(&parent, &post, s))
}

/// Colors each region black or white with probability 1/2, `trials` times.
pub fn region_coloring_estimate(
    g: &RegularGraph,
    p: &RegionPartition,
    trials: usize,
    seed: Seed,
) -> Result<ColoringSummary, GraphError> {
    if p.len() < 2 {
        return Err(GraphError::BadParameters("need at least two regions".into()));
    }
    let rows = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = seed.with_stream(t as u64);
            let mut rng = s.rng();
            let colors: Vec<bool> = (0..p.len()).map(|_| rng.random::<bool>()).collect();
            let in_set: Vec<bool> = p.region_of.iter().map(|&r| colors[r]).collect();
            GraphTrial {
                n: g.n,
                d: g.d,
                s: p.s,
                trial: t,
                boundary_edges: g.boundary(&in_set),
                black_count: in_set.iter().filter(|&&b| b).count(),
                h_star: h_star(g, &in_set),
                seed: s,
            }
        })
        .collect();
    Ok(summarize(rows, seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactCheeger {
    pub value: f64,
    /// Bitmask of an optimal set.
    pub witness: u32,
}

/// Minimum of `|boundary A| / |A|` over nonempty `A` with `|A| <= n/2`, by Gray-code enumeration.
pub fn exact_cheeger(g: &RegularGraph) -> Result<ExactCheeger, GraphError> {
    let n = g.n;
    if n > EXACT_MAX {
        return Err(GraphError::TooLarge { n, max: EXACT_MAX });
    }
    if n < 2 {
        return Err(GraphError::BadParameters("need at least two vertices".into()));
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let mut mask = 0u32;
    let mut boundary: i64 = 0;
    let mut best = ExactCheeger {
        value: f64::INFINITY,
        witness: 0,
    };
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let inside = (nbr[v] & mask).count_ones() as i64;
        let deg = nbr[v].count_ones() as i64;
        if mask & (1 << v) == 0 {
            boundary += deg - 2 * inside;
        } else {
            boundary -= deg - 2 * inside;
        }
        mask ^= 1 << v;
        let k = mask.count_ones() as usize;
        if k >= 1 && 2 * k <= n {
            let h = boundary as f64 / k as f64;
            if h < best.value {
                best = ExactCheeger {
                    value: h,
                    witness: mask,
                };
            }
        }
    }
    Ok(best)
}

/// Ball of depth `k` in the `d`-regular tree, plus its count of edges leaving the ball.
pub fn tree_ball(d: usize, k: usize) -> (usize, Vec<(u32, u32)>, usize) {
    let mut edges = Vec::new();
    let mut frontier = vec![0u32];
    let mut n = 1u32;
    for depth in 0..k {
        let mut next = Vec::new();
        for &v in &frontier {
            let kids = if depth == 0 { d } else { d - 1 };
            for _ in 0..kids {
                edges.push((v, n));
                next.push(n);
                n += 1;
            }
        }
        frontier = next;
    }
    let outside = frontier.len() * (d - 1);
    (n as usize, edges, outside)
}

/// `h*` of the whole tree ball: leaving edges over vertex count.
pub fn tree_ball_h_star(d: usize, k: usize) -> f64 {
    let (n, edges, outside) = tree_ball(d, k);
    // recount the leaving edges from degrees: each vertex has d edges in the full tree
    let mut deg = vec![0usize; n];
    for (a, b) in &edges {
        deg[*a as usize] += 1;
        deg[*b as usize] += 1;
    }
    let leaving: usize = deg.iter().map(|&x| d - x).sum();
    debug_assert_eq!(leaving, outside);
    leaving as f64 / n as f64
}
