//! Graph families: complete, circulant, random regular, `G(n,p)` and the
//! expected-degree model.
//!
//! Random families are sampled from a [`StreamRng`](crate::rng::StreamRng)
//! derived from the spec's seed, single-threaded, so the same [`GenSpec`]
//! yields the same edge set on every run and every thread count.

mod chung_lu;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, MAX_VERTICES};
use crate::rng::{derive_seed, stream, StreamRng};

pub use chung_lu::{
    check_assumptions, power_law_offset, sample_naive as expected_degree_naive,
    sample_sorted_skip as expected_degree_skip, AssumptionReport, MaxDegreeRule, PowerLawParams,
    WeightSequence,
};

/// Above this many vertices the `O(n²)` pair scans switch to skip sampling.
pub const NAIVE_SCAN_LIMIT: usize = 20_000;
pub const DEFAULT_REGULAR_RETRIES: u32 = 1000;
pub const DEFAULT_CONNECT_RETRIES: u32 = 100;

pub fn complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::invalid(format!("complete graph needs n >= 2, got {n}")));
    }
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
    }
    let n32 = n as Vertex;
    let offsets = (0..=n as u64).map(|v| v * (n as u64 - 1)).collect();
    let mut targets = Vec::with_capacity(n * (n - 1));
    for u in 0..n32 {
        targets.extend(0..u);
        targets.extend(u + 1..n32);
    }
    Ok(Graph::from_csr_unchecked(offsets, targets))
}

/// `v ~ v±1, …, v±k (mod n)`: a connected `2k`-regular graph.
pub fn circulant(n: usize, k: usize) -> Result<Graph> {
    if k < 1 || n < 2 * k + 1 {
        return Err(Error::invalid(format!("circulant needs k >= 1 and n >= 2k+1, got n={n}, k={k}")));
    }
    let edges: Vec<_> = (0..n)
        .flat_map(|v| (1..=k).map(move |j| (v as Vertex, ((v + j) % n) as Vertex)))
        .collect();
    Graph::from_edges(n, &edges, false)
}

/// Uniform simple `r`-regular graph by the pairing model: shuffle `n·r`
/// stubs, pair them in order, and reject the whole pairing on any self-loop
/// or repeated edge.
pub fn random_regular<R: Rng>(n: usize, r: usize, max_retries: u32, rng: &mut R) -> Result<Graph> {
    if r < 2 || r >= n {
        return Err(Error::invalid(format!("random regular graph needs 2 <= r < n, got n={n}, r={r}")));
    }
    if (n * r) % 2 != 0 {
        return Err(Error::invalid(format!("n·r must be even, got n={n}, r={r}")));
    }
    let mut stubs: Vec<Vertex> = (0..n as Vertex).flat_map(|v| std::iter::repeat_n(v, r)).collect();
    let mut pairs: Vec<(Vertex, Vertex)> = Vec::with_capacity(n * r / 2);
    for _ in 0..max_retries {
        stubs.shuffle(rng);
        pairs.clear();
        pairs.extend(stubs.chunks_exact(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))));
        if pairs.iter().any(|(u, v)| u == v) {
            continue;
        }
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Graph::from_edges(n, &pairs, false);
    }
    Err(Error::RetriesExhausted { what: "random regular pairing", limit: max_retries })
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("p must lie in [0, 1], got {p}")))
    }
}

/// `G(n,p)` by one Bernoulli draw per pair. With `self_loops` each diagonal
/// pair is also included with probability `p` (the expected-degree model with
/// `w_v = np`).
pub fn gnp_naive<R: Rng>(n: usize, p: f64, self_loops: bool, rng: &mut R) -> Vec<(Vertex, Vertex)> {
    let mut edges = Vec::new();
    for u in 0..n {
        let start = if self_loops { u } else { u + 1 };
        for v in start..n {
            if rng.random::<f64>() < p {
                edges.push((u as Vertex, v as Vertex));
            }
        }
    }
    edges
}

/// `G(n,p)` by geometric skips over the row-major lower triangle
/// (Batagelj and Brandes); `O(n + edges)` expected time.
pub fn gnp_skip<R: Rng>(n: usize, p: f64, self_loops: bool, rng: &mut R) -> Vec<(Vertex, Vertex)> {
    if p <= 0.0 || n == 0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return gnp_naive(n, 1.0, self_loops, rng);
    }
    let log_q = (-p).ln_1p();
    let mut edges = Vec::with_capacity((p * (n as f64) * (n as f64) / 2.0) as usize + 16);
    // Row v holds columns 0..v (plus v itself with self-loops).
    let row_len = |v: u64| if self_loops { v + 1 } else { v };
    let (mut v, mut w): (u64, u64) = if self_loops { (0, 0) } else { (1, 0) };
    let n = n as u64;
    let mut first = true;
    loop {
        let r = 1.0 - rng.random::<f64>();
        let skip = (r.ln() / log_q).floor();
        if skip >= u64::MAX as f64 / 4.0 {
            break;
        }
        w = w.saturating_add(skip as u64 + u64::from(!first));
        first = false;
        while v < n && w >= row_len(v) {
            w -= row_len(v);
            v += 1;
        }
        if v >= n {
            break;
        }
        edges.push((v as Vertex, w as Vertex));
    }
    edges
}

pub fn gnp<R: Rng>(n: usize, p: f64, self_loops: bool, rng: &mut R) -> Result<Graph> {
    check_probability(p)?;
    let edges = if n <= NAIVE_SCAN_LIMIT { gnp_naive(n, p, self_loops, rng) } else { gnp_skip(n, p, self_loops, rng) };
    Graph::from_edges(n, &edges, self_loops)
}

/// Samples the expected-degree model. Weights need not be sorted; the skip
/// sampler runs on a nonincreasing relabelling and maps vertices back.
pub fn expected_degree<R: Rng>(weights: &WeightSequence, self_loops: bool, rng: &mut R) -> Result<Graph> {
    ExpectedDegreeSampler::new(weights)?.sample(self_loops, rng)
}

struct ExpectedDegreeSampler {
    sorted: Vec<f64>,
    /// `labels[i]` is the original vertex of sorted position `i`; `None` when
    /// the input was already nonincreasing.
    labels: Option<Vec<Vertex>>,
    total: f64,
}

impl ExpectedDegreeSampler {
    fn new(weights: &WeightSequence) -> Result<Self> {
        weights.ensure_valid_probabilities()?;
        let (sorted, labels) = if weights.is_nonincreasing() {
            (weights.weights().to_vec(), None)
        } else {
            let mut order: Vec<Vertex> = (0..weights.n() as Vertex).collect();
            let w = weights.weights();
            order.sort_by(|&a, &b| w[b as usize].total_cmp(&w[a as usize]));
            (order.iter().map(|&i| w[i as usize]).collect(), Some(order))
        };
        Ok(ExpectedDegreeSampler { sorted, labels, total: weights.total() })
    }

    fn sample<R: Rng>(&self, self_loops: bool, rng: &mut R) -> Result<Graph> {
        let n = self.sorted.len();
        let mut edges = if n <= NAIVE_SCAN_LIMIT {
            chung_lu::sample_naive(&self.sorted, self.total, self_loops, rng)
        } else {
            chung_lu::sample_sorted_skip(&self.sorted, self.total, self_loops, rng)
        };
        if let Some(labels) = &self.labels {
            for e in &mut edges {
                *e = (labels[e.0 as usize], labels[e.1 as usize]);
            }
        }
        Graph::from_edges(n, &edges, self_loops)
    }
}

/// Where the expected degrees of an expected-degree graph come from.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    PowerLaw { n: usize, gamma: f64, d: f64, m: MaxDegreeRule },
    Uniform { n: usize, w: f64 },
    Explicit(Vec<f64>),
}

impl WeightSpec {
    pub fn build(&self) -> Result<WeightSequence> {
        match self {
            WeightSpec::PowerLaw { n, gamma, d, m } => {
                if !(*gamma > 2.0) {
                    return Err(Error::invalid("gamma must exceed 2"));
                }
                let m = m.resolve(*n, *gamma, *d)?;
                WeightSequence::power_law(*n, *gamma, *d, m)
            }
            WeightSpec::Uniform { n, w } => WeightSequence::uniform(*n, *w),
            WeightSpec::Explicit(w) => WeightSequence::from_weights(w.clone()),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            WeightSpec::PowerLaw { n, .. } | WeightSpec::Uniform { n, .. } => *n,
            WeightSpec::Explicit(w) => w.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Complete { n: usize },
    Circulant { n: usize, k: usize },
    RandomRegular { n: usize, r: usize, max_retries: u32 },
    Gnp { n: usize, p: f64, self_loops: bool },
    ExpectedDegree { weights: WeightSpec, self_loops: bool },
    Edges { n: usize, edges: Vec<(Vertex, Vertex)>, self_loops: bool },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Complete { .. } => "complete",
            Family::Circulant { .. } => "circulant",
            Family::RandomRegular { .. } => "random_regular",
            Family::Gnp { .. } => "gnp",
            Family::ExpectedDegree { .. } => "expected_degree",
            Family::Edges { .. } => "edges",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Family::Complete { n }
            | Family::Circulant { n, .. }
            | Family::RandomRegular { n, .. }
            | Family::Gnp { n, .. }
            | Family::Edges { n, .. } => *n,
            Family::ExpectedDegree { weights, .. } => weights.n(),
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Family::RandomRegular { .. } | Family::Gnp { .. } | Family::ExpectedDegree { .. })
    }

    /// The expected-degree weights behind this family, when it is an instance
    /// of that model (`G(n,p)` only with self-loops, where `w_v = np`).
    pub fn weight_sequence(&self) -> Option<Result<WeightSequence>> {
        match self {
            Family::ExpectedDegree { weights, .. } => Some(weights.build()),
            Family::Gnp { n, p, self_loops: true } => Some(WeightSequence::uniform(*n, *n as f64 * p)),
            _ => None,
        }
    }
}

/// A reproducible recipe for one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub family: Family,
    pub seed: u64,
    /// Resample random families (fresh derived seeds) until connected, at most
    /// this many attempts.
    pub require_connected: Option<u32>,
}

impl GenSpec {
    pub fn new(family: Family, seed: u64) -> GenSpec {
        GenSpec { family, seed, require_connected: None }
    }

    pub fn connected(mut self, max_attempts: u32) -> GenSpec {
        self.require_connected = Some(max_attempts);
        self
    }

    pub fn with_seed(&self, seed: u64) -> GenSpec {
        GenSpec { seed, ..self.clone() }
    }

    pub fn generate(&self) -> Result<Graph> {
        self.sampler()?.sample(self.seed)
    }

    /// Validates parameters and precomputes what every sample shares.
    pub fn sampler(&self) -> Result<GraphSampler> {
        let prepared = match &self.family {
            Family::Complete { n } => Prepared::Fixed(complete(*n)?),
            Family::Circulant { n, k } => Prepared::Fixed(circulant(*n, *k)?),
            Family::Edges { n, edges, self_loops } => Prepared::Fixed(Graph::from_edges(*n, edges, *self_loops)?),
            Family::RandomRegular { n, r, max_retries } => {
                if *r < 2 || r >= n || (n * r) % 2 != 0 {
                    return Err(Error::invalid(format!(
                        "random regular graph needs 2 <= r < n and n·r even, got n={n}, r={r}"
                    )));
                }
                Prepared::Regular { n: *n, r: *r, max_retries: *max_retries }
            }
            Family::Gnp { n, p, self_loops } => {
                check_probability(*p)?;
                if self.require_connected.is_some() && *n > 1 && (*n as f64) * p < (*n as f64).ln() {
                    log::warn!("G({n}, {p}) is below the np > log n connectivity regime; expect retries");
                }
                Prepared::Gnp { n: *n, p: *p, self_loops: *self_loops }
            }
            Family::ExpectedDegree { weights, self_loops } => {
                let w = weights.build()?;
                Prepared::ExpectedDegree { sampler: ExpectedDegreeSampler::new(&w)?, self_loops: *self_loops }
            }
        };
        Ok(GraphSampler { prepared, require_connected: self.require_connected })
    }
}

enum Prepared {
    Fixed(Graph),
    Regular { n: usize, r: usize, max_retries: u32 },
    Gnp { n: usize, p: f64, self_loops: bool },
    ExpectedDegree { sampler: ExpectedDegreeSampler, self_loops: bool },
}

/// A validated [`GenSpec`] that can be sampled repeatedly with different seeds.
pub struct GraphSampler {
    prepared: Prepared,
    require_connected: Option<u32>,
}

impl GraphSampler {
    fn draw(&self, rng: &mut StreamRng) -> Result<Graph> {
        match &self.prepared {
            Prepared::Fixed(g) => Ok(g.clone()),
            Prepared::Regular { n, r, max_retries } => random_regular(*n, *r, *max_retries, rng),
            Prepared::Gnp { n, p, self_loops } => gnp(*n, *p, *self_loops, rng),
            Prepared::ExpectedDegree { sampler, self_loops } => sampler.sample(*self_loops, rng),
        }
    }

    /// Attempt 0 uses `seed` directly; connectivity retries use
    /// `derive_seed(seed, attempt)`.
    pub fn sample(&self, seed: u64) -> Result<Graph> {
        let Some(limit) = self.require_connected else {
            return self.draw(&mut stream(seed));
        };
        let attempts = if matches!(self.prepared, Prepared::Fixed(_)) { 1 } else { limit.max(1) };
        for attempt in 0..attempts {
            let s = if attempt == 0 { seed } else { derive_seed(seed, attempt as u64) };
            let g = self.draw(&mut stream(s))?;
            if g.is_connected() {
                return Ok(g);
            }
        }
        Err(Error::RetriesExhausted { what: "connected sample", limit: attempts })
    }
}
