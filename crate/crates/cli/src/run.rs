//! Executes a validated spec into result rows.
//!
//! Run `i` (grid order) uses `derive_seed(master, i)` as its seed. Within a
//! run, the graph is drawn from `derive_seed(seed, 0)` and the walks from
//! `derive_seed(seed, 1)`; a sweep point's graph `j` uses `derive_seed(seed, j)`;
//! an ensemble passes the run seed straight to the ensemble estimator.

use std::time::Instant;

use coinwalk_core::generators::{Family, GenSpec, WeightSpec};
use coinwalk_core::graph::{degree_statistics, Graph};
use coinwalk_core::moments::{closed_form, ensemble_estimate, predict_scaling};
use coinwalk_core::rng::derive_seed;
use coinwalk_core::stats::compensated_sum;
use coinwalk_core::walk::{validate_bounds, SimConfig};
use rayon::prelude::*;

use crate::row::ResultRow;
use crate::spec::{ExperimentSpec, GraphSpec, Kind};
use crate::CliError;

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Record per-row wall time. Off by default so output is reproducible.
    pub timing: bool,
}

#[derive(Debug, Clone, Copy)]
enum Job<'a> {
    Graph(&'a GraphSpec),
    Point { gamma: f64, n: usize },
}

fn plan(spec: &ExperimentSpec, kind: Kind) -> Vec<Job<'_>> {
    match kind {
        Kind::Analyze | Kind::Simulate | Kind::Ensemble => spec.graphs.iter().map(Job::Graph).collect(),
        Kind::Sweep | Kind::Predict => {
            let grid = spec.grid.as_ref().expect("sections checked");
            grid.gamma.iter().flat_map(|&gamma| grid.n.iter().map(move |&n| Job::Point { gamma, n })).collect()
        }
    }
}

/// One row per graph or grid point, in grid order. Failed runs become
/// error-tagged rows; only an unrunnable spec is an `Err`.
pub fn run_experiment(spec: &ExperimentSpec, kind: Kind, opts: &RunOptions) -> Result<Vec<ResultRow>, CliError> {
    spec.check_sections(kind)?;
    let jobs = plan(spec, kind);
    Ok(jobs.par_iter().enumerate().map(|(run, job)| run_job(spec, kind, run, *job, opts)).collect())
}

fn run_job(spec: &ExperimentSpec, kind: Kind, run: usize, job: Job<'_>, opts: &RunOptions) -> ResultRow {
    let start = Instant::now();
    let seed = derive_seed(spec.seed, run as u64);
    let mut row = ResultRow {
        kind: Some(kind.as_str().into()),
        run: Some(run as u64),
        seed: Some(seed),
        status: Some("ok".into()),
        ..Default::default()
    };
    let outcome = match job {
        Job::Graph(g) => graph_run(spec, kind, g, seed, &mut row),
        Job::Point { gamma, n } => point_run(spec, kind, gamma, n, seed, &mut row),
    };
    if let Err(e) = outcome {
        log::warn!("run {run} failed: {e}");
        row.status = Some("error".into());
        row.error = Some(e.to_string());
    }
    if opts.timing {
        row.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    row
}

/// Parameters and closed-form predictions that need no sampling.
fn describe(g: Option<&GraphSpec>, family: &Family, row: &mut ResultRow) -> coinwalk_core::Result<()> {
    row.n = Some(family.n() as u64);
    match family {
        Family::Gnp { p, .. } => row.p = Some(*p),
        Family::ExpectedDegree { weights: WeightSpec::Uniform { w, .. }, .. } => row.d = Some(*w),
        _ => {}
    }
    if let Some(GraphSpec::Edges { .. } | GraphSpec::EdgeList { .. }) = g {
        return Ok(());
    }
    let Some(weights) = family.weight_sequence() else {
        return Ok(());
    };
    let w = weights?;
    let cf = closed_form(&w)?;
    row.ed = Some(cf.expected_d);
    row.var_d = Some(cf.var_d);
    row.ed2 = Some(cf.expected_d2);
    row.var_d2_bound = Some(cf.var_d2_bound);
    if let Some(pl) = w.power_law_params() {
        row.gamma = Some(pl.gamma);
        row.d = Some(pl.d);
        row.m = Some(pl.m);
        let pred = predict_scaling(pl.gamma, pl.d, pl.m)?;
        row.leading_estimate = Some(pred.leading_estimate);
        row.regime = Some(pred.regime.as_str().into());
        row.growth_exponent = Some(pred.growth_exponent);
    }
    Ok(())
}

fn observe(g: &Graph, row: &mut ResultRow) -> coinwalk_core::Result<()> {
    let stats = degree_statistics(g)?;
    row.edges = Some(g.edge_count() as u64);
    row.degree_sum = Some(stats.d);
    row.two_stars = Some(stats.d2);
    row.sum_pi_sq = Some(stats.coincidence_rate);
    row.n_sum_pi_sq = Some(g.n() as f64 * stats.coincidence_rate);
    row.connected = Some(g.is_connected());
    Ok(())
}

fn graph_run(
    spec: &ExperimentSpec,
    kind: Kind,
    g: &GraphSpec,
    seed: u64,
    row: &mut ResultRow,
) -> coinwalk_core::Result<()> {
    row.family = Some(g.name().into());
    let family = g.to_family(&spec.base_dir)?;
    describe(Some(g), &family, row)?;
    let gen = GenSpec { family, seed: derive_seed(seed, 0), require_connected: g.require_connected() };
    match kind {
        Kind::Analyze => observe(&gen.generate()?, row),
        Kind::Simulate => {
            let sim = spec.sim.as_ref().expect("sections checked");
            let graph = gen.generate()?;
            observe(&graph, row)?;
            let check = validate_bounds(&graph, &SimConfig::new(sim.t, sim.beta, sim.replicates, derive_seed(seed, 1)))?;
            row.t = Some(sim.t);
            row.beta = Some(sim.beta);
            row.replicates = Some(sim.replicates as u64);
            row.mean_tau = Some(check.mc.mean_tau);
            row.stderr_tau = Some(check.mc.stderr_tau);
            row.predicted_tau = Some(check.predicted_tau);
            row.z_score = Some(check.z_score);
            row.mean_infection_prob = Some(check.mc.mean_infection_prob);
            row.stderr_infection_prob = Some(check.mc.stderr_infection_prob);
            row.gamma_upper = Some(check.gamma_upper);
            row.jensen_satisfied = Some(check.jensen_satisfied);
            Ok(())
        }
        Kind::Ensemble => {
            let reps = spec.ensemble.as_ref().expect("sections checked").replicates;
            let st = ensemble_estimate(&gen, reps, seed)?;
            row.replicates = Some(reps as u64);
            row.sample_mean_d = Some(st.sample_mean_d);
            row.sample_var_d = Some(st.sample_var_d);
            row.sample_mean_d2 = Some(st.sample_mean_d2);
            row.sample_var_d2 = Some(st.sample_var_d2);
            Ok(())
        }
        Kind::Sweep | Kind::Predict => unreachable!("grid kinds have no graph list"),
    }
}

fn point_run(
    spec: &ExperimentSpec,
    kind: Kind,
    gamma: f64,
    n: usize,
    seed: u64,
    row: &mut ResultRow,
) -> coinwalk_core::Result<()> {
    let grid = spec.grid.as_ref().expect("sections checked");
    row.family = Some("power_law".into());
    row.gamma = Some(gamma);
    row.d = Some(grid.d);
    let family = Family::ExpectedDegree {
        weights: WeightSpec::PowerLaw { n, gamma, d: grid.d, m: grid.m.into() },
        self_loops: grid.self_loops,
    };
    describe(None, &family, row)?;
    if kind == Kind::Predict {
        return Ok(());
    }
    let sampler = GenSpec::new(family, 0).sampler()?;
    let graphs = grid.graphs_per_point;
    let rates = (0..graphs)
        .into_par_iter()
        .map(|j| {
            let g = sampler.sample(derive_seed(seed, j as u64))?;
            if graphs == 1 {
                let mut single = ResultRow::default();
                observe(&g, &mut single)?;
                return Ok((degree_statistics(&g)?.coincidence_rate, Some(single)));
            }
            Ok((degree_statistics(&g)?.coincidence_rate, None))
        })
        .collect::<coinwalk_core::Result<Vec<_>>>()?;
    row.graphs = Some(graphs as u64);
    if let Some((_, Some(single))) = rates.first() {
        row.edges = single.edges;
        row.degree_sum = single.degree_sum;
        row.two_stars = single.two_stars;
        row.connected = single.connected;
    }
    let mean = compensated_sum(rates.iter().map(|r| r.0)) / graphs as f64;
    row.sum_pi_sq = Some(mean);
    row.n_sum_pi_sq = Some(n as f64 * mean);
    Ok(())
}
