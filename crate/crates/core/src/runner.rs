//! Dataset-level orchestration: runs an enumeration engine per DMU, feeds
//! the event stream into score accumulators, and merges results in DMU
//! order. DMUs are independent units of work and may run on a thread pool;
//! inside one DMU the tree walk stays sequential because warm starts chain
//! parent to child.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::dea::{Dataset, ModelSpec};
use crate::engine::{
    enumerate_exact, enumerate_exhaustive, EngineError, EnumerationStats, ScoreSink,
};
use crate::instances::GeneratorConfig;
use crate::lp::SolverOptions;
use crate::scores::{MaterializeSink, MultiModelAccumulator, ScoreError, SelectionModel};

/// Largest mask width for which per-mask scores are materialized (`2^q`
/// values per DMU).
pub const MAX_MATERIALIZE_Q: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EngineKind {
    Exact,
    Exhaustive,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error("dataset error: {0}")]
    Dataset(#[from] crate::dea::DatasetError),
    #[error("mask width {0} too large to materialize per-subset scores (max {MAX_MATERIALIZE_Q})")]
    TooWideToMaterialize(usize),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

fn enumerate(
    engine: EngineKind,
    dataset: &Dataset,
    dmu_index: usize,
    spec: ModelSpec,
    options: &SolverOptions,
    sink: &mut dyn ScoreSink,
) -> Result<EnumerationStats, EngineError> {
    match engine {
        EngineKind::Exact => enumerate_exact(dataset, dmu_index, spec, options, sink),
        EngineKind::Exhaustive => enumerate_exhaustive(dataset, dmu_index, spec, options, sink),
    }
}

/// Expected score and standard deviation of one DMU under one model.
#[derive(Clone, Debug, Serialize)]
pub struct ModelScore {
    pub model: String,
    pub expected: f64,
    pub std_dev: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DmuOutcome {
    pub dmu: String,
    pub scores: Vec<ModelScore>,
    pub stats: EnumerationStats,
}

pub fn score_dmu(
    dataset: &Dataset,
    dmu_index: usize,
    spec: ModelSpec,
    models: &[SelectionModel],
    engine: EngineKind,
    options: &SolverOptions,
) -> Result<DmuOutcome, RunError> {
    let mut acc = MultiModelAccumulator::new(dataset.q(), models)?;
    let stats = enumerate(engine, dataset, dmu_index, spec, options, &mut acc)?;
    let results = acc.finish()?;
    let scores = models
        .iter()
        .zip(results)
        .map(|(model, (expected, std_dev))| ModelScore {
            model: model.label(),
            expected,
            std_dev,
        })
        .collect();
    Ok(DmuOutcome { dmu: dataset.dmu_names()[dmu_index].clone(), scores, stats })
}

/// Runs `work` for every DMU, optionally across a thread pool, and returns
/// results in DMU index order.
fn per_dmu<T, F>(dataset: &Dataset, threads: usize, work: F) -> Result<Vec<T>, RunError>
where
    T: Send,
    F: Fn(usize) -> Result<T, RunError> + Sync + Send,
{
    let n = dataset.n_dmus();
    if threads <= 1 {
        (0..n).map(work).collect()
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| RunError::ThreadPool(e.to_string()))?;
        pool.install(|| (0..n).into_par_iter().map(work).collect())
    }
}

pub fn score_dataset(
    dataset: &Dataset,
    spec: ModelSpec,
    models: &[SelectionModel],
    engine: EngineKind,
    options: &SolverOptions,
    threads: usize,
) -> Result<Vec<DmuOutcome>, RunError> {
    per_dmu(dataset, threads, |dmu| {
        score_dmu(dataset, dmu, spec, models, engine, options)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvePoint {
    pub pbar: f64,
    pub expected: f64,
    pub std_dev: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DmuCurve {
    pub dmu: String,
    pub points: Vec<CurvePoint>,
    pub stats: EnumerationStats,
}

/// Scores one DMU under a common-Bernoulli model per grid value, in one
/// enumeration pass.
pub fn curve_dmu(
    dataset: &Dataset,
    dmu_index: usize,
    spec: ModelSpec,
    grid: &[f64],
    engine: EngineKind,
    options: &SolverOptions,
) -> Result<DmuCurve, RunError> {
    let models: Vec<SelectionModel> =
        grid.iter().map(|&p| SelectionModel::CommonBernoulli(p)).collect();
    let mut acc = MultiModelAccumulator::new(dataset.q(), &models)?;
    let stats = enumerate(engine, dataset, dmu_index, spec, options, &mut acc)?;
    let points = grid
        .iter()
        .zip(acc.finish()?)
        .map(|(&pbar, (expected, std_dev))| CurvePoint { pbar, expected, std_dev })
        .collect();
    Ok(DmuCurve { dmu: dataset.dmu_names()[dmu_index].clone(), points, stats })
}

pub fn curve_dataset(
    dataset: &Dataset,
    spec: ModelSpec,
    grid: &[f64],
    engine: EngineKind,
    options: &SolverOptions,
    threads: usize,
) -> Result<Vec<DmuCurve>, RunError> {
    per_dmu(dataset, threads, |dmu| curve_dmu(dataset, dmu, spec, grid, engine, options))
}

/// All `2^q` per-subset scores of one DMU, indexed by mask bits.
pub fn materialize_dmu(
    dataset: &Dataset,
    dmu_index: usize,
    spec: ModelSpec,
    engine: EngineKind,
    options: &SolverOptions,
) -> Result<(Vec<f64>, EnumerationStats), RunError> {
    let q = dataset.q();
    if q > MAX_MATERIALIZE_Q {
        return Err(RunError::TooWideToMaterialize(q));
    }
    let mut sink = MaterializeSink::new(q);
    let stats = enumerate(engine, dataset, dmu_index, spec, options, &mut sink)?;
    Ok((sink.finish()?, stats))
}

/// One cell of an engine benchmark: both engines over a generated instance.
#[derive(Clone, Debug, Serialize)]
pub struct BenchCell {
    pub n_dmus: usize,
    pub q: usize,
    pub exact_lps: u64,
    pub exhaustive_lps: u64,
    #[serde(serialize_with = "crate::runner::serialize_secs")]
    pub exact_time: Duration,
    #[serde(serialize_with = "crate::runner::serialize_secs")]
    pub exhaustive_time: Duration,
    /// Every per-mask score from the exact engine matched the exhaustive
    /// oracle within the prune tolerance.
    pub scores_match: bool,
}

pub(crate) fn serialize_secs<S: serde::Serializer>(
    d: &Duration,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl BenchCell {
    /// Solved-problem counts as a percentage of the exhaustive run, and its
    /// complement.
    pub fn lps_ratio_percent(&self) -> f64 {
        100.0 * self.exact_lps as f64 / self.exhaustive_lps as f64
    }

    pub fn lps_reduction_percent(&self) -> f64 {
        100.0 - self.lps_ratio_percent()
    }

    pub fn time_ratio_percent(&self) -> f64 {
        100.0 * self.exact_time.as_secs_f64() / self.exhaustive_time.as_secs_f64().max(1e-12)
    }

    pub fn time_reduction_percent(&self) -> f64 {
        100.0 - self.time_ratio_percent()
    }
}

/// Generates an instance and runs both engines over every DMU, comparing
/// per-mask scores.
pub fn bench_cell(
    config: &GeneratorConfig,
    spec: ModelSpec,
    options: &SolverOptions,
    threads: usize,
) -> Result<BenchCell, RunError> {
    let dataset = crate::instances::generate_random(config)?;
    let q = dataset.q();
    if q > MAX_MATERIALIZE_Q {
        return Err(RunError::TooWideToMaterialize(q));
    }

    let t0 = Instant::now();
    let exhaustive = per_dmu(&dataset, threads, |dmu| {
        materialize_dmu(&dataset, dmu, spec, EngineKind::Exhaustive, options)
    })?;
    let exhaustive_time = t0.elapsed();

    let t1 = Instant::now();
    let exact = per_dmu(&dataset, threads, |dmu| {
        materialize_dmu(&dataset, dmu, spec, EngineKind::Exact, options)
    })?;
    let exact_time = t1.elapsed();

    let mut exact_lps = 0;
    let mut exhaustive_lps = 0;
    let mut scores_match = true;
    for ((oracle, ex_stats), (scores, xa_stats)) in exhaustive.iter().zip(exact.iter()) {
        exhaustive_lps += ex_stats.lps_solved;
        exact_lps += xa_stats.lps_solved;
        if oracle
            .iter()
            .zip(scores)
            .any(|(a, b)| (a - b).abs() > crate::engine::PRUNE_TOL)
        {
            scores_match = false;
        }
    }
    Ok(BenchCell {
        n_dmus: dataset.n_dmus(),
        q,
        exact_lps,
        exhaustive_lps,
        exact_time,
        exhaustive_time,
        scores_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::generate_random;

    #[test]
    fn score_dataset_orders_results_by_dmu_index() {
        let config = GeneratorConfig { n_dmus: 6, n_outputs: 3, seed: 11, ..Default::default() };
        let ds = generate_random(&config).unwrap();
        let models = vec![SelectionModel::MaxEntropy];
        let seq = score_dataset(
            &ds,
            ModelSpec::CRS,
            &models,
            EngineKind::Exact,
            &SolverOptions::default(),
            1,
        )
        .unwrap();
        let par = score_dataset(
            &ds,
            ModelSpec::CRS,
            &models,
            EngineKind::Exact,
            &SolverOptions::default(),
            3,
        )
        .unwrap();
        assert_eq!(seq.len(), 6);
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!(a.dmu, b.dmu);
            assert_eq!(a.scores[0].expected.to_bits(), b.scores[0].expected.to_bits());
            assert_eq!(a.scores[0].std_dev.to_bits(), b.scores[0].std_dev.to_bits());
        }
    }
}
