//! Problem instances: undirected simple graphs, seeded generators and exact
//! classical oracles for maximum independent set.

use std::fmt;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Exhaustive enumeration guard for the brute-force oracle.
pub const ORACLE_MAX_VERTICES: usize = 26;

/// An undirected simple graph with vertices labeled `0..n-1`.
///
/// Edges are stored as unordered pairs `(u, v)` with `u < v`; per-vertex
/// sorted neighbor lists are derived at construction and cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Rejects self-loops, duplicate edges
    /// and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::QubitOutOfRange {
                    index: u.max(v),
                    n_qubits: n,
                });
            }
            if u == v {
                return Err(Error::invalid_config("edges", format!("self-loop at vertex {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid_config("edges", "duplicate edge"));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: normalized,
            adjacency,
        })
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

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Serializes to the edge-list text format: first line `n m`, then one
    /// `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list text format.
    pub fn from_edge_list(text: &str, origin: &Path) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(origin, "empty file"))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(origin, "bad header: expected `n m`"))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(origin, "bad header: expected `n m`"))?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::parse(origin, format!("bad edge line: {line}")))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::parse(origin, format!("bad edge line: {line}")))?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::parse(
                origin,
                format!("header declares {m} edges, found {}", edges.len()),
            ));
        }
        Self::from_edges(n, &edges)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_edge_list(&text, path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_edge_list()).map_err(|e| Error::io(path, e))
    }
}

/// A candidate vertex subset encoded as a bitmask: bit `v` set means vertex
/// `v` is in the set. Rendered with vertex 0 leftmost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    n: usize,
    bits: u64,
}

impl Assignment {
    pub fn new(n: usize, bits: u64) -> Self {
        debug_assert!(n <= 64);
        debug_assert!(n == 64 || bits < (1u64 << n));
        Assignment { n, bits }
    }

    /// Parses a bitstring like `10100`, vertex 0 first.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for (v, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1 << v,
                '0' => {}
                _ => {
                    return Err(Error::invalid_config(
                        "assignment",
                        format!("invalid bit character {c:?}"),
                    ))
                }
            }
        }
        Ok(Assignment { n: s.len(), bits })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Value of `x_v`.
    pub fn get(&self, v: usize) -> bool {
        (self.bits >> v) & 1 == 1
    }

    /// Number of selected vertices.
    pub fn popcount(&self) -> u32 {
        self.bits.count_ones()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in 0..self.n {
            write!(f, "{}", if self.get(v) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Exact result of the brute-force maximum-independent-set search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisOracleResult {
    /// MIS size alpha(G).
    pub alpha: u32,
    /// All maximum independent sets, in increasing bitmask order.
    pub optima: Vec<Assignment>,
}

/// Generates an Erdos-Renyi graph: each unordered pair is an edge
/// independently with probability `p_edge`. Deterministic per seed.
pub fn generate_er(n: usize, p_edge: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::invalid_config("n", "vertex count must be >= 1"));
    }
    if !(0.0..=1.0).contains(&p_edge) {
        return Err(Error::invalid_config(
            "p_edge",
            format!("edge probability {p_edge} not in [0, 1]"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p_edge) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Generates a random `d`-regular simple graph via the pairing model:
/// `d` stubs per vertex are shuffled and paired; any self-loop or multi-edge
/// restarts the whole pairing. Deterministic per seed.
pub fn generate_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if n == 0 || d >= n || !(n * d).is_multiple_of(2) {
        return Err(Error::InfeasibleDegreeSequence { n, d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'restart: loop {
        // Fisher-Yates shuffle via explicit swaps keeps the draw order pinned.
        for i in (1..stubs.len()).rev() {
            let j = rng.gen_range(0..=i);
            stubs.swap(i, j);
        }
        let mut seen = std::collections::HashSet::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'restart;
            }
        }
        let edges: Vec<(usize, usize)> = stubs.chunks(2).map(|p| (p[0], p[1])).collect();
        return Graph::from_edges(n, &edges);
    }
}

/// True iff no edge has both endpoints selected.
pub fn is_independent(g: &Graph, x: &Assignment) -> Result<bool> {
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    Ok(g.edges().iter().all(|&(u, v)| !(x.get(u) && x.get(v))))
}

/// Selected-vertex count: the quantity maximized by the MIS problem.
pub fn classical_objective(x: &Assignment) -> u32 {
    x.popcount()
}

/// Penalty form of the objective: selected vertices minus `lambda` per
/// violated edge. Requires `lambda > 1` so violations never pay off.
pub fn penalty_energy(g: &Graph, x: &Assignment, lambda: f64) -> Result<f64> {
    if lambda <= 1.0 {
        return Err(Error::invalid_config(
            "lambda",
            format!("multiplier {lambda} must exceed 1"),
        ));
    }
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    let violations = g
        .edges()
        .iter()
        .filter(|&&(u, v)| x.get(u) && x.get(v))
        .count();
    Ok(f64::from(x.popcount()) - lambda * violations as f64)
}

/// Exhaustively enumerates all `2^n` assignments and returns the MIS size
/// together with every maximum independent set.
pub fn brute_force_mis(g: &Graph) -> Result<MisOracleResult> {
    let n = g.n();
    if n > ORACLE_MAX_VERTICES {
        return Err(Error::InstanceTooLarge {
            n,
            max: ORACLE_MAX_VERTICES,
        });
    }
    // Edge bitmask test: x is independent iff no edge mask is fully inside x.
    let edge_masks: Vec<u64> = g
        .edges()
        .iter()
        .map(|&(u, v)| (1u64 << u) | (1u64 << v))
        .collect();
    let mut alpha = 0u32;
    let mut optima: Vec<Assignment> = Vec::new();
    for bits in 0..(1u64 << n) {
        if edge_masks.iter().any(|&m| m & !bits == 0) {
            continue;
        }
        let size = bits.count_ones();
        if size > alpha {
            alpha = size;
            optima.clear();
        }
        if size == alpha {
            optima.push(Assignment::new(n, bits));
        }
    }
    Ok(MisOracleResult { alpha, optima })
}

/// Stable identifier used in benchmark outputs: `fam-n-seed`.
pub fn graph_id(family: &str, n: usize, seed: u64) -> String {
    format!("{family}-{n}-{seed}")
}
