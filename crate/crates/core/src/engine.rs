//! Subset enumeration over the candidate variables.
//!
//! Both engines stream scores to a [`ScoreSink`] and return counters. The
//! exhaustive engine cold-solves every non-empty mask and is the correctness
//! oracle. The exact engine first solves the full mask, whose score bounds
//! every subset's score from above, orders the candidates by their dual
//! multipliers (largest first), and then walks the subset tree depth first:
//! children extend the parent by one candidate of strictly higher ordered
//! index and are re-solved with the dual simplex from the parent's basis.
//! A node whose score reaches the full-mask bound closes its entire subtree
//! in one event, since scores are monotone in the variable set.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::dea::{
    build_lp, clamp_theta, dual_weights, efficiency_score, DeaError, Dataset, ModelSpec,
};
use crate::lp::{solve_dual_warmstart, solve_primal, Basis, SolveStatus, SolverOptions};
use crate::mask::SubsetMask;

/// A node is pruned when its score is within this tolerance of the full-mask
/// bound. Matches the warm/cold objective agreement bound; the
/// oracle-equivalence tests gate both constants together.
pub const PRUNE_TOL: f64 = 1e-7;

/// Consumer of the per-subset score stream. Over one enumeration the events
/// cover each of the `2^q` masks exactly once: `point` covers a single mask,
/// `closed_subtree` covers `prefix` extended by every subset of `free`.
pub trait ScoreSink {
    fn point(&mut self, mask: SubsetMask, theta: f64);
    fn closed_subtree(&mut self, prefix: SubsetMask, free: SubsetMask, theta: f64);
}

/// Counters for one DMU's enumeration.
///
/// `lps_solved` counts evaluated subset problems, including the occasional
/// degenerate mask that is assigned its score by convention instead of an LP
/// solve, so the exhaustive engine always reports exactly `2^q - 1`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct EnumerationStats {
    pub lps_solved: u64,
    /// Masks covered by a bound prune without solving (descendants of a
    /// pruned node).
    pub nodes_pruned_by_bound: u64,
    /// Masks covered by the pruned-seed superset shortcut.
    pub nodes_assigned_by_seed: u64,
    /// Closed-subtree events emitted.
    pub subtrees_closed_form: u64,
    #[serde(serialize_with = "serialize_duration_secs")]
    pub wall_time: Duration,
    pub warmstart_fallbacks: u64,
}

fn serialize_duration_secs<S: serde::Serializer>(
    d: &Duration,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl EnumerationStats {
    pub fn merge(&mut self, other: &EnumerationStats) {
        self.lps_solved += other.lps_solved;
        self.nodes_pruned_by_bound += other.nodes_pruned_by_bound;
        self.nodes_assigned_by_seed += other.nodes_assigned_by_seed;
        self.subtrees_closed_form += other.subtrees_closed_form;
        self.wall_time += other.wall_time;
        self.warmstart_fallbacks += other.warmstart_fallbacks;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrderingSource {
    DualWeights,
    DatasetOrder,
}

/// Order in which the exact engine introduces candidates: `permutation[k]`
/// is the candidate (dataset order) explored at tree level `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateOrdering {
    permutation: Vec<usize>,
    source: OrderingSource,
}

impl CandidateOrdering {
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn source(&self) -> OrderingSource {
        self.source
    }

    pub fn dataset_order(q: usize) -> Self {
        Self { permutation: (0..q).collect(), source: OrderingSource::DatasetOrder }
    }

    /// Translates a mask over tree levels into dataset-candidate bits.
    pub fn to_dataset_mask(&self, level_bits: u32, q: usize) -> SubsetMask {
        let mut mask = SubsetMask::empty(q);
        for (level, &cand) in self.permutation.iter().enumerate() {
            if level_bits & (1 << level) != 0 {
                mask = mask.with(cand);
            }
        }
        mask
    }

    /// Translates a dataset-candidate mask into tree-level bits.
    pub fn to_level_bits(&self, mask: &SubsetMask) -> u32 {
        let mut bits = 0u32;
        for (level, &cand) in self.permutation.iter().enumerate() {
            if mask.contains(cand) {
                bits |= 1 << level;
            }
        }
        bits
    }
}

/// Sorts candidates by weight descending, ties broken by dataset index
/// ascending.
pub(crate) fn ordering_from_weights(weights: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..weights.len()).collect();
    idx.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    idx
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Dea(#[from] DeaError),
    #[error("enumeration requires at least one candidate variable")]
    NoCandidates,
}

/// Candidate ordering for one DMU from the dual multipliers of its full-mask
/// solve, highest first.
pub fn candidate_ordering(
    dataset: &Dataset,
    dmu_index: usize,
    spec: ModelSpec,
    options: &SolverOptions,
) -> Result<CandidateOrdering, EngineError> {
    let (_, _, ordering) = solve_full_mask(dataset, dmu_index, spec, options)?;
    Ok(ordering)
}

fn solve_full_mask(
    dataset: &Dataset,
    dmu_index: usize,
    spec: ModelSpec,
    options: &SolverOptions,
) -> Result<(f64, Basis, CandidateOrdering), EngineError> {
    let q = dataset.q();
    if q == 0 {
        return Err(EngineError::NoCandidates);
    }
    let full = SubsetMask::full(q);
    let lp = build_lp(dataset, dmu_index, &full, spec)?;
    let sol = solve_primal(&lp, options).map_err(DeaError::from)?;
    if sol.status != SolveStatus::Optimal {
        return Err(DeaError::UnexpectedStatus { status: sol.status, mask: full }.into());
    }
    let theta = clamp_theta(sol.objective, &full)?;
    let weights = dual_weights(&sol, dataset, &full);
    let ordering = CandidateOrdering {
        permutation: ordering_from_weights(&weights),
        source: OrderingSource::DualWeights,
    };
    Ok((theta, sol.basis, ordering))
}

/// Cold-solves every non-empty mask in ascending mask-integer order and
/// emits `2^q` events (the empty mask scores 1 by convention).
pub fn enumerate_exhaustive(
    dataset: &Dataset,
    dmu_index: usize,
    spec: ModelSpec,
    options: &SolverOptions,
    sink: &mut dyn ScoreSink,
) -> Result<EnumerationStats, EngineError> {
    let q = dataset.q();
    if q == 0 {
        return Err(EngineError::NoCandidates);
    }
    let start = Instant::now();
    sink.point(SubsetMask::empty(q), 1.0);
    let mut stats = EnumerationStats::default();
    for bits in 1..(1u32 << q) {
        let mask = SubsetMask::from_bits(bits, q);
        let theta = efficiency_score(dataset, dmu_index, &mask, spec, options)?;
        sink.point(mask, theta);
        stats.lps_solved += 1;
    }
    stats.wall_time = start.elapsed();
    Ok(stats)
}

/// Pruned, warm-started enumeration. Every mask is covered exactly once and
/// scores agree with [`enumerate_exhaustive`] within [`PRUNE_TOL`] per mask.
pub fn enumerate_exact(
    dataset: &Dataset,
    dmu_index: usize,
    spec: ModelSpec,
    options: &SolverOptions,
    sink: &mut dyn ScoreSink,
) -> Result<EnumerationStats, EngineError> {
    let start = Instant::now();
    let (theta_full, _full_basis, ordering) =
        solve_full_mask(dataset, dmu_index, spec, options)?;
    let q = dataset.q();
    // suffix_bits[k] = dataset-candidate bits of the levels k..q, i.e. the
    // free set below a node whose deepest level is k - 1.
    let mut suffix_bits = vec![0u32; q + 1];
    for k in (0..q).rev() {
        suffix_bits[k] = suffix_bits[k + 1] | (1 << ordering.permutation()[k]);
    }
    sink.point(SubsetMask::empty(q), 1.0);
    let mut walk = TreeWalk {
        dataset,
        dmu_index,
        spec,
        options,
        sink,
        perm: ordering.permutation(),
        suffix_bits: &suffix_bits,
        q,
        full_bits: SubsetMask::full(q).bits(),
        theta_full,
        seeds: Vec::new(),
        stats: EnumerationStats { lps_solved: 1, ..EnumerationStats::default() },
    };
    // The root's children (singletons) have no solved ancestor, so they are
    // cold solves; everything deeper warm-starts from its parent.
    walk.visit_children(0, 0, None)?;
    let mut stats = walk.stats;
    stats.wall_time = start.elapsed();
    Ok(stats)
}

struct TreeWalk<'a> {
    dataset: &'a Dataset,
    dmu_index: usize,
    spec: ModelSpec,
    options: &'a SolverOptions,
    sink: &'a mut dyn ScoreSink,
    perm: &'a [usize],
    suffix_bits: &'a [u32],
    q: usize,
    full_bits: u32,
    theta_full: f64,
    seeds: Vec<u32>,
    stats: EnumerationStats,
}

impl TreeWalk<'_> {
    fn visit_children(
        &mut self,
        from_level: usize,
        base_bits: u32,
        parent_basis: Option<&Basis>,
    ) -> Result<(), EngineError> {
        for level in from_level..self.q {
            let child_bits = base_bits | (1 << self.perm[level]);
            let child = SubsetMask::from_bits(child_bits, self.q);
            let free = SubsetMask::from_bits(self.suffix_bits[level + 1], self.q);
            let subtree_size = 1u64 << (self.q - 1 - level);

            // Supersets of a pruned seed inherit the full-mask score without
            // a solve.
            if self.seeds.iter().any(|&s| child_bits & s == s) {
                self.sink.closed_subtree(child, free, self.theta_full);
                self.stats.nodes_assigned_by_seed += subtree_size;
                self.stats.subtrees_closed_form += 1;
                continue;
            }

            // The full mask was already solved as the upper bound.
            if child_bits == self.full_bits {
                self.sink.point(child, self.theta_full);
                continue;
            }

            if !self.dataset.mask_effective(&child) {
                // Convention-scored; never pruned on (its 1 is not an LP
                // value, so the monotone bound argument does not apply).
                self.stats.lps_solved += 1;
                self.sink.point(child, 1.0);
                if level + 1 < self.q {
                    self.visit_children(level + 1, child_bits, parent_basis)?;
                }
                continue;
            }

            let lp = build_lp(self.dataset, self.dmu_index, &child, self.spec)?;
            let sol = match parent_basis {
                Some(basis) => {
                    solve_dual_warmstart(&lp, basis, self.options).map_err(DeaError::from)?
                }
                None => solve_primal(&lp, self.options).map_err(DeaError::from)?,
            };
            if sol.status != SolveStatus::Optimal {
                return Err(DeaError::UnexpectedStatus { status: sol.status, mask: child }.into());
            }
            self.stats.lps_solved += 1;
            if sol.warmstart_fallback {
                self.stats.warmstart_fallbacks += 1;
            }
            let theta = clamp_theta(sol.objective, &child)?;

            if (theta - self.theta_full).abs() <= PRUNE_TOL {
                // Monotonicity sandwiches every descendant between theta and
                // the full-mask bound, so the whole subtree closes at once.
                self.sink.closed_subtree(child, free, self.theta_full);
                self.seeds.push(child_bits);
                self.stats.nodes_pruned_by_bound += subtree_size - 1;
                self.stats.subtrees_closed_form += 1;
                continue;
            }

            self.sink.point(child, theta);
            if level + 1 < self.q {
                self.visit_children(level + 1, child_bits, Some(&sol.basis))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_sorts_descending_with_index_ties() {
        // Weights 0.3, 0.3, 0.1 at indices 0, 1, 2: ties keep dataset order.
        assert_eq!(ordering_from_weights(&[0.3, 0.3, 0.1]), vec![0, 1, 2]);
        assert_eq!(ordering_from_weights(&[0.1, 0.3, 0.3]), vec![1, 2, 0]);
        assert_eq!(ordering_from_weights(&[0.0, 0.0, 1.0]), vec![2, 0, 1]);
    }

    #[test]
    fn level_mask_round_trip() {
        let ordering = CandidateOrdering {
            permutation: vec![2, 0, 3, 1],
            source: OrderingSource::DualWeights,
        };
        let level_bits = 0b0101u32; // levels 0 and 2 -> candidates 2 and 3
        let mask = ordering.to_dataset_mask(level_bits, 4);
        assert_eq!(mask.to_string(), "0011");
        assert_eq!(ordering.to_level_bits(&mask), level_bits);
    }
}
