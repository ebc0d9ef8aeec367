//! Event-driven simulation of two independent continuous-time random walks.
//!
//! Each walker holds at its vertex for an `Exp(1)` time and then jumps to a
//! uniformly chosen entry of its neighbor list; a self-loop entry is a jump
//! back to the same vertex. Both walkers start independently from the
//! stationary distribution `π_v = degree(v)/D`.
//!
//! Every walker owns its random stream: replicate seed `s` gives walker X the
//! stream `derive_seed(s, 0)` and walker Y `derive_seed(s, 1)`, so either
//! trajectory is a function of the graph and its own stream only. The two
//! event sequences are merged in time order and the coincidence time `τ(t)` is
//! accumulated exactly over the maximal intervals where positions agree.

use std::time::{Duration, Instant};

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{bounds_from_rate, degree_statistics, Graph, Vertex};
use crate::rng::{derive_seed, stream, StreamRng};
use crate::stats::Summary;

/// Draws `v` with probability `degree(v)/D` by locating a uniform half-edge
/// in the cumulative degree array.
pub fn sample_stationary<R: Rng>(g: &Graph, rng: &mut R) -> Result<Vertex> {
    let total = g.total_degree();
    if total == 0 {
        return Err(Error::NoEdges);
    }
    let r = rng.random_range(0..total);
    Ok((g.offsets().partition_point(|&o| o <= r) - 1) as Vertex)
}

/// One walker: its position, its own random stream and the time of its next jump.
pub struct Walker<'g> {
    graph: &'g Graph,
    rng: StreamRng,
    position: Vertex,
    next_jump: f64,
    jumps: u64,
}

impl<'g> Walker<'g> {
    /// Starts from `π` using the walker's own stream.
    pub fn stationary(graph: &'g Graph, seed: u64) -> Result<Walker<'g>> {
        let mut rng = stream(seed);
        let start = sample_stationary(graph, &mut rng)?;
        Ok(Walker::with_rng(graph, rng, start))
    }

    /// Starts from a given vertex, which must have at least one neighbor entry.
    pub fn at(graph: &'g Graph, start: Vertex, seed: u64) -> Result<Walker<'g>> {
        if start as usize >= graph.n() {
            return Err(Error::VertexOutOfRange { vertex: start as u64, n: graph.n() });
        }
        if graph.degree(start) == 0 {
            return Err(Error::invalid(format!("walker cannot start on isolated vertex {start}")));
        }
        Ok(Walker::with_rng(graph, stream(seed), start))
    }

    fn with_rng(graph: &'g Graph, mut rng: StreamRng, position: Vertex) -> Walker<'g> {
        let next_jump: f64 = rng.sample(Exp1);
        Walker { graph, rng, position, next_jump, jumps: 0 }
    }

    pub fn position(&self) -> Vertex {
        self.position
    }

    pub fn next_jump_time(&self) -> f64 {
        self.next_jump
    }

    pub fn jumps(&self) -> u64 {
        self.jumps
    }

    /// Performs the pending jump and schedules the next one. Returns the new
    /// position.
    pub fn jump(&mut self) -> Vertex {
        let nbrs = self.graph.neighbors(self.position);
        self.position = nbrs[self.rng.random_range(0..nbrs.len())];
        self.next_jump += self.rng.sample::<f64, _>(Exp1);
        self.jumps += 1;
        self.position
    }

    /// Position at time `t`, which must not precede the last jump performed.
    pub fn advance_to(&mut self, t: f64) -> Vertex {
        while self.next_jump <= t {
            self.jump();
        }
        self.position
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkerId {
    /// The susceptible walker.
    X,
    /// The infected walker.
    Y,
}

/// Hook into every jump of a pair simulation.
pub trait PairObserver {
    fn on_jump(&mut self, walker: WalkerId, time: f64, from: Vertex, to: Vertex);
}

impl PairObserver for () {
    #[inline]
    fn on_jump(&mut self, _: WalkerId, _: f64, _: Vertex, _: Vertex) {}
}

/// Runs both walkers to `horizon` and returns the coincidence time.
pub fn run_pair<'g, O: PairObserver>(x: &mut Walker<'g>, y: &mut Walker<'g>, horizon: f64, observer: &mut O) -> f64 {
    let mut tau = 0.0;
    let mut met_at = (x.position == y.position).then_some(0.0);
    loop {
        let (id, walker) = if x.next_jump <= y.next_jump { (WalkerId::X, &mut *x) } else { (WalkerId::Y, &mut *y) };
        let now = walker.next_jump;
        if now >= horizon {
            break;
        }
        let from = walker.position;
        let to = walker.jump();
        observer.on_jump(id, now, from, to);
        let together = x.position == y.position;
        match (met_at, together) {
            (Some(start), false) => {
                tau += now - start;
                met_at = None;
            }
            (None, true) => met_at = Some(now),
            _ => {}
        }
    }
    if let Some(start) = met_at {
        tau += horizon - start;
    }
    tau
}

/// Only stationary starts are supported; the coincidence identity needs them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitMode {
    #[default]
    Stationary,
    Fixed { x: Vertex, y: Vertex },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub t_horizon: f64,
    pub beta: f64,
    pub replicates: usize,
    pub master_seed: u64,
    pub init: InitMode,
}

impl SimConfig {
    pub fn new(t_horizon: f64, beta: f64, replicates: usize, master_seed: u64) -> SimConfig {
        SimConfig { t_horizon, beta, replicates, master_seed, init: InitMode::Stationary }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_horizon >= 0.0 && self.t_horizon.is_finite()) {
            return Err(Error::invalid(format!("t must be finite and >= 0, got {}", self.t_horizon)));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::invalid(format!("beta must be finite and >= 0, got {}", self.beta)));
        }
        if self.replicates < 1 {
            return Err(Error::invalid("replicates must be at least 1"));
        }
        if let InitMode::Fixed { .. } = self.init {
            return Err(Error::Unsupported("non-stationary initial positions".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoincidenceResult {
    pub tau: f64,
    /// `1 - exp(-β τ)`: the infection probability given the path.
    pub infection_prob: f64,
    pub jumps_x: u64,
    pub jumps_y: u64,
    pub final_positions: (Vertex, Vertex),
}

pub fn infection_probability(beta: f64, tau: f64) -> f64 {
    -(-beta * tau).exp_m1()
}

/// One replicate: walkers X and Y on streams `derive_seed(seed, 0)` and
/// `derive_seed(seed, 1)`.
pub fn simulate_pair(g: &Graph, t_horizon: f64, beta: f64, seed: u64) -> Result<CoincidenceResult> {
    SimConfig::new(t_horizon, beta, 1, seed).validate()?;
    if !g.is_connected() {
        log::warn!("simulating on a disconnected graph; the walk is not irreducible");
    }
    simulate_pair_unchecked(g, t_horizon, beta, seed)
}

fn simulate_pair_unchecked(g: &Graph, t_horizon: f64, beta: f64, seed: u64) -> Result<CoincidenceResult> {
    let mut x = Walker::stationary(g, derive_seed(seed, 0))?;
    let mut y = Walker::stationary(g, derive_seed(seed, 1))?;
    let tau = run_pair(&mut x, &mut y, t_horizon, &mut ());
    Ok(CoincidenceResult {
        tau,
        infection_prob: infection_probability(beta, tau),
        jumps_x: x.jumps,
        jumps_y: y.jumps,
        final_positions: (x.position, y.position),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MCEstimate {
    pub mean_tau: f64,
    pub stderr_tau: f64,
    pub mean_infection_prob: f64,
    pub stderr_infection_prob: f64,
    pub replicates: usize,
    pub elapsed: Duration,
}

/// Replicate `i` uses seed `derive_seed(cfg.master_seed, i)`. Replicates run
/// in parallel and are summarised in index order, so the estimate does not
/// depend on the worker count.
pub fn estimate_tau(g: &Graph, cfg: &SimConfig) -> Result<MCEstimate> {
    cfg.validate()?;
    if cfg.replicates < 2 {
        return Err(Error::invalid("estimation needs at least 2 replicates"));
    }
    if !g.is_connected() {
        log::warn!("simulating on a disconnected graph; the walk is not irreducible");
    }
    let started = Instant::now();
    let results: Vec<(f64, f64)> = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|i| {
            simulate_pair_unchecked(g, cfg.t_horizon, cfg.beta, derive_seed(cfg.master_seed, i))
                .map(|r| (r.tau, r.infection_prob))
        })
        .collect::<Result<_>>()?;
    let taus: Vec<f64> = results.iter().map(|r| r.0).collect();
    let probs: Vec<f64> = results.iter().map(|r| r.1).collect();
    let (tau, prob) = (Summary::of(&taus), Summary::of(&probs));
    Ok(MCEstimate {
        mean_tau: tau.mean,
        stderr_tau: tau.stderr,
        mean_infection_prob: prob.mean,
        stderr_infection_prob: prob.stderr,
        replicates: cfg.replicates,
        elapsed: started.elapsed(),
    })
}

/// Monte Carlo estimate set against the stationary-start predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub mc: MCEstimate,
    /// `t Σπ²`.
    pub predicted_tau: f64,
    /// `1 - exp(-β t Σπ²)`.
    pub gamma_upper: f64,
    /// `mean_infection_prob <= gamma_upper + 3·stderr`.
    pub jensen_satisfied: bool,
    /// `|mean_tau - predicted_tau| / stderr_tau`.
    pub z_score: f64,
}

pub fn validate_bounds(g: &Graph, cfg: &SimConfig) -> Result<BoundCheck> {
    let rate = degree_statistics(g)?.coincidence_rate;
    let bounds = bounds_from_rate(rate, cfg.t_horizon, cfg.beta)?;
    let mc = estimate_tau(g, cfg)?;
    let z_score = Summary { count: mc.replicates, mean: mc.mean_tau, variance: f64::NAN, stderr: mc.stderr_tau }
        .z_score(bounds.expected_tau);
    Ok(BoundCheck {
        jensen_satisfied: mc.mean_infection_prob <= bounds.gamma_upper + 3.0 * mc.stderr_infection_prob,
        predicted_tau: bounds.expected_tau,
        gamma_upper: bounds.gamma_upper,
        z_score,
        mc,
    })
}
