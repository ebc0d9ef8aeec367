//! Immutable undirected graphs in compressed sparse row form, plus the exact
//! stationary analytics of the degree-proportional random walk.
//!
//! Degree convention: a self-loop appears once in its vertex's neighbor list
//! and adds **1** to the degree (not the 2 of the usual handshake convention).
//! With this convention `D = Σ_v degree(v) = Σ_{u,v} A_uv` counts the diagonal
//! once, which is what keeps `E[D] = W` exact in the expected-degree model, and
//! a walker that picks its self-loop entry simply stays put.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Largest supported vertex count. Keeps `Σ degree²` inside `u64` for any
/// graph that fits in memory.
pub const MAX_VERTICES: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    /// `offsets[v]..offsets[v + 1]` indexes `targets`; equivalently the
    /// cumulative degree sequence.
    offsets: Vec<u64>,
    targets: Vec<Vertex>,
    self_loops_allowed: bool,
    self_loops: usize,
}

impl Graph {
    /// Builds a graph from an unordered edge list. Duplicate edges (in either
    /// orientation) collapse into one.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)], allow_self_loops: bool) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        let mut counts = vec![0u64; n + 1];
        for &(u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: w as u64, n });
                }
            }
            if u == v {
                if !allow_self_loops {
                    return Err(Error::SelfLoopDisallowed(u as u64));
                }
                counts[u as usize + 1] += 1;
            } else {
                counts[u as usize + 1] += 1;
                counts[v as usize + 1] += 1;
            }
        }
        for i in 1..=n {
            counts[i] += counts[i - 1];
        }
        let raw_offsets = counts;
        let mut cursor = raw_offsets.clone();
        let mut raw = vec![0 as Vertex; raw_offsets[n] as usize];
        for &(u, v) in edges {
            raw[cursor[u as usize] as usize] = v;
            cursor[u as usize] += 1;
            if u != v {
                raw[cursor[v as usize] as usize] = u;
                cursor[v as usize] += 1;
            }
        }

        // Sort each list and compact duplicates in place.
        let mut offsets = vec![0u64; n + 1];
        let mut write = 0usize;
        let mut self_loops = 0usize;
        for v in 0..n {
            let (lo, hi) = (raw_offsets[v] as usize, raw_offsets[v + 1] as usize);
            raw[lo..hi].sort_unstable();
            let mut prev: Option<Vertex> = None;
            for i in lo..hi {
                let x = raw[i];
                if prev != Some(x) {
                    raw[write] = x;
                    write += 1;
                    prev = Some(x);
                    if x as usize == v {
                        self_loops += 1;
                    }
                }
            }
            offsets[v + 1] = write as u64;
        }
        raw.truncate(write);
        raw.shrink_to_fit();

        Ok(Graph { offsets, targets: raw, self_loops_allowed: allow_self_loops, self_loops })
    }

    /// Wraps prebuilt CSR arrays whose lists are sorted, duplicate-free and
    /// loop-free.
    pub(crate) fn from_csr_unchecked(offsets: Vec<u64>, targets: Vec<Vertex>) -> Graph {
        debug_assert_eq!(*offsets.last().unwrap() as usize, targets.len());
        debug_assert!(offsets.windows(2).enumerate().all(|(v, w)| {
            let list = &targets[w[0] as usize..w[1] as usize];
            list.windows(2).all(|p| p[0] < p[1]) && !list.contains(&(v as Vertex))
        }));
        Graph { offsets, targets, self_loops_allowed: false, self_loops: 0 }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        (self.offsets[v as usize + 1] - self.offsets[v as usize]) as usize
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    /// Cumulative degrees; `offsets()[v + 1] - offsets()[v] == degree(v)`.
    #[inline]
    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    /// `D = Σ_v degree(v)`.
    #[inline]
    pub fn total_degree(&self) -> u64 {
        self.offsets[self.n()]
    }

    pub fn self_loops_allowed(&self) -> bool {
        self.self_loops_allowed
    }

    pub fn self_loop_count(&self) -> usize {
        self.self_loops
    }

    /// Number of undirected edges, self-loops included.
    pub fn edge_count(&self) -> usize {
        (self.total_degree() as usize - self.self_loops) / 2 + self.self_loops
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u <= v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n() as Vertex)
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v >= u).map(move |&v| (u, v)))
    }

    pub fn degrees(&self) -> impl Iterator<Item = u64> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().max().unwrap_or(0) as usize
    }

    /// Breadth-first reachability from vertex 0. The empty graph and the
    /// single vertex are connected.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0 as Vertex]);
        seen[0] = true;
        let mut reached = 1usize;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }

    /// Writes the `u v` edge-list text format, one edge per line, `u <= v`.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# n={} edges={}", self.n(), self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        out.flush()?;
        Ok(())
    }

    /// Parses the edge-list text format. Blank lines and anything after `#`
    /// are ignored. When `n` is `None` it is one more than the largest id seen.
    pub fn read_edge_list<R: BufRead>(input: R, n: Option<usize>, allow_self_loops: bool) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut max_id: Option<u64> = None;
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::EdgeListParse { line: idx + 1, msg };
            let mut fields = body.split_whitespace();
            let mut id = || -> Result<u64> {
                let tok = fields.next().ok_or_else(|| parse_err("expected two vertex ids".into()))?;
                tok.parse::<u64>().map_err(|e| parse_err(format!("bad vertex id {tok:?}: {e}")))
            };
            let (u, v) = (id()?, id()?);
            if fields.next().is_some() {
                return Err(parse_err("trailing fields".into()));
            }
            if u.max(v) >= MAX_VERTICES as u64 {
                return Err(Error::TooManyVertices { n: u.max(v) as usize + 1, max: MAX_VERTICES });
            }
            max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
            edges.push((u as Vertex, v as Vertex));
        }
        let n = n.unwrap_or_else(|| max_id.map_or(0, |m| m as usize + 1));
        Graph::from_edges(n, &edges, allow_self_loops)
    }
}

/// The walk's invariant distribution, `π_v = degree(v) / D`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pub probs: Vec<f64>,
}

pub fn stationary_distribution(g: &Graph) -> Result<StationaryDistribution> {
    let total = g.total_degree();
    if total == 0 {
        return Err(Error::NoEdges);
    }
    let total = total as f64;
    Ok(StationaryDistribution { probs: g.degrees().map(|d| d as f64 / total).collect() })
}

/// Exact integer degree sums and the coincidence rate `Σ_v π_v²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStatistics {
    /// `D = Σ degree(v)`.
    pub d: u64,
    /// `D₂ = Σ degree(v)(degree(v) - 1)`, the number of ordered two-stars.
    pub d2: u64,
    /// `Σ degree(v)² = D₂ + D`.
    pub sum_deg_sq: u64,
    /// `Σ π_v² = Σ degree² / D²`.
    pub coincidence_rate: f64,
}

pub fn degree_statistics(g: &Graph) -> Result<DegreeStatistics> {
    let d = g.total_degree();
    if d == 0 {
        return Err(Error::NoEdges);
    }
    let mut d2 = 0u64;
    let mut sum_deg_sq = 0u64;
    for k in g.degrees() {
        let sq = k.checked_mul(k).expect("degree square overflows u64");
        sum_deg_sq = sum_deg_sq.checked_add(sq).expect("sum of squared degrees overflows u64");
        d2 += k * k.saturating_sub(1);
    }
    let df = d as f64;
    Ok(DegreeStatistics { d, d2, sum_deg_sq, coincidence_rate: sum_deg_sq as f64 / (df * df) })
}

/// Stationary-start predictions: `E[τ(t)] = t·Σπ²` and the upper bound
/// `E[γ(t)] <= 1 - exp(-β·E[τ(t)])` from Jensen's inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoincidenceBounds {
    pub expected_tau: f64,
    pub gamma_upper: f64,
}

pub fn coincidence_bounds(g: &Graph, t: f64, beta: f64) -> Result<CoincidenceBounds> {
    let rate = degree_statistics(g)?.coincidence_rate;
    bounds_from_rate(rate, t, beta)
}

pub fn bounds_from_rate(rate: f64, t: f64, beta: f64) -> Result<CoincidenceBounds> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time horizon must be finite and >= 0, got {t}")));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::invalid(format!("beta must be finite and >= 0, got {beta}")));
    }
    let expected_tau = t * rate;
    Ok(CoincidenceBounds { expected_tau, gamma_upper: -(-beta * expected_tau).exp_m1() })
}
