//! Selection probability models and the aggregation of per-subset scores
//! into expected values and variances.
//!
//! A selection model assigns each mask `b` a weight `w(b)`; the robust score
//! is `E = sum_b w(b) * theta_b` with the empty mask contributing score 1 by
//! convention, and `V = sum_b w(b) * theta_b^2 - E^2`. Product-form models
//! (independent Bernoulli selection, possibly Beta-mixed) admit closed-form
//! sums over any subtree of masks, which is what lets the enumeration engine
//! emit closed-subtree events instead of materializing `2^q` scores.

use serde::Serialize;
use thiserror::Error;

use crate::engine::ScoreSink;
use crate::mask::SubsetMask;
use crate::numeric::{binomial, gauss_legendre_unit, KahanSum};

/// Probability model over subsets of the `q` candidate variables.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SelectionModel {
    /// Independent Bernoulli selection with one probability per candidate,
    /// in dataset candidate order.
    ExpertBernoulli(Vec<f64>),
    /// The entropy-maximizing choice: every mask weighs `1 / 2^q`.
    MaxEntropy,
    /// Independent Beta priors on the selection probabilities; the weight of
    /// a mask is `prod(alpha_c or gamma_c) / prod(alpha_c + gamma_c)`.
    BetaIndependent { alpha: Vec<f64>, gamma: Vec<f64> },
    /// A single selection probability shared by all candidates and uniform
    /// on [0,1]: mask weight `1 / ((q+1) * C(q, |b|))`.
    CommonUniform,
    /// A single known selection probability shared by all candidates.
    CommonBernoulli(f64),
}

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("selection model parameters invalid: {0}")]
    Param(String),
    #[error("score source does not cover all masks: {0}")]
    Coverage(String),
}

impl SelectionModel {
    pub fn validate(&self, q: usize) -> Result<(), ScoreError> {
        match self {
            SelectionModel::ExpertBernoulli(p) => {
                if p.len() != q {
                    return Err(ScoreError::Param(format!(
                        "{} probabilities for {q} candidates",
                        p.len()
                    )));
                }
                if p.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                    return Err(ScoreError::Param("probabilities must lie in [0,1]".into()));
                }
            }
            SelectionModel::MaxEntropy | SelectionModel::CommonUniform => {}
            SelectionModel::BetaIndependent { alpha, gamma } => {
                if alpha.len() != q || gamma.len() != q {
                    return Err(ScoreError::Param(format!(
                        "{}/{} Beta parameters for {q} candidates",
                        alpha.len(),
                        gamma.len()
                    )));
                }
                if alpha.iter().chain(gamma).any(|&v| !(v > 0.0 && v.is_finite())) {
                    return Err(ScoreError::Param("Beta parameters must be positive".into()));
                }
            }
            SelectionModel::CommonBernoulli(p) => {
                if !(0.0..=1.0).contains(p) {
                    return Err(ScoreError::Param(format!("pbar {p} outside [0,1]")));
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self {
            SelectionModel::ExpertBernoulli(_) => "expert".into(),
            SelectionModel::MaxEntropy => "entropy".into(),
            SelectionModel::BetaIndependent { .. } => "beta".into(),
            SelectionModel::CommonUniform => "common-uniform".into(),
            SelectionModel::CommonBernoulli(p) => format!("common-bernoulli({p})"),
        }
    }
}

/// Weight of a single mask under `model`.
pub fn subset_probability(model: &SelectionModel, mask: &SubsetMask) -> f64 {
    let q = mask.width();
    match model {
        SelectionModel::ExpertBernoulli(p) => {
            let mut w = 1.0;
            for c in 0..q {
                w *= if mask.contains(c) { p[c] } else { 1.0 - p[c] };
            }
            w
        }
        SelectionModel::MaxEntropy => 0.5f64.powi(q as i32),
        SelectionModel::BetaIndependent { alpha, gamma } => {
            let mut w = 1.0;
            for c in 0..q {
                let num = if mask.contains(c) { alpha[c] } else { gamma[c] };
                w *= num / (alpha[c] + gamma[c]);
            }
            w
        }
        SelectionModel::CommonUniform => {
            let k = mask.popcount() as u32;
            1.0 / ((q as f64 + 1.0) * binomial(q as u32, k) as f64)
        }
        SelectionModel::CommonBernoulli(p) => {
            let k = mask.popcount() as i32;
            p.powi(k) * (1.0 - p).powi(q as i32 - k)
        }
    }
}

/// Sum of `subset_probability` over `prefix` extended by every subset of
/// `free` (the empty extension included).
///
/// Product-form models marginalize: each free coordinate's two branches sum
/// to one, so the weight is the product over the determined coordinates
/// alone. The common-uniform model sums its popcount-dependent weights with
/// exact binomial counts.
pub fn subtree_weight(model: &SelectionModel, prefix: &SubsetMask, free: &SubsetMask) -> f64 {
    debug_assert!(prefix.is_disjoint_from(free));
    let q = prefix.width();
    match model {
        SelectionModel::ExpertBernoulli(p) => {
            let mut w = 1.0;
            for c in 0..q {
                if !free.contains(c) {
                    w *= if prefix.contains(c) { p[c] } else { 1.0 - p[c] };
                }
            }
            w
        }
        SelectionModel::MaxEntropy => 0.5f64.powi((q - free.popcount()) as i32),
        SelectionModel::BetaIndependent { alpha, gamma } => {
            let mut w = 1.0;
            for c in 0..q {
                if !free.contains(c) {
                    let num = if prefix.contains(c) { alpha[c] } else { gamma[c] };
                    w *= num / (alpha[c] + gamma[c]);
                }
            }
            w
        }
        SelectionModel::CommonUniform => {
            let k = prefix.popcount() as u32;
            let f = free.popcount() as u32;
            let mut sum = KahanSum::new();
            for j in 0..=f {
                let ways = binomial(f, j) as f64;
                let weight = (q as f64 + 1.0) * binomial(q as u32, k + j) as f64;
                sum.add(ways / weight);
            }
            sum.value()
        }
        SelectionModel::CommonBernoulli(p) => {
            let determined = q - free.popcount();
            let k = prefix.popcount() as i32;
            p.powi(k) * (1.0 - p).powi(determined as i32 - k)
        }
    }
}

/// Entropy of the independent selection distribution, natural log. With
/// independent coordinates the `2^q`-term sum collapses to the sum of binary
/// entropies, with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> f64 {
    fn h(v: f64) -> f64 {
        let mut acc = 0.0;
        if v > 0.0 {
            acc -= v * v.ln();
        }
        if v < 1.0 {
            acc -= (1.0 - v) * (1.0 - v).ln();
        }
        acc
    }
    p.iter().map(|&v| h(v)).sum()
}

/// One enumeration event: a single scored mask, or a whole closed subtree
/// sharing one score.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScoreEvent {
    Point { mask: SubsetMask, theta: f64 },
    Closed { prefix: SubsetMask, free: SubsetMask, theta: f64 },
}

/// A complete account of all `2^q` per-subset scores, either materialized
/// (index = mask bits) or as a stream of events.
#[derive(Clone, Copy, Debug)]
pub enum ScoreSource<'a> {
    Dense { q: usize, theta: &'a [f64] },
    Events { q: usize, events: &'a [ScoreEvent] },
}

impl ScoreSource<'_> {
    pub fn q(&self) -> usize {
        match self {
            ScoreSource::Dense { q, .. } | ScoreSource::Events { q, .. } => *q,
        }
    }

    fn validate_coverage(&self) -> Result<(), ScoreError> {
        let q = self.q();
        let total = 1u64 << q;
        match self {
            ScoreSource::Dense { theta, .. } => {
                if theta.len() as u64 != total {
                    return Err(ScoreError::Coverage(format!(
                        "dense source has {} entries, expected {total}",
                        theta.len()
                    )));
                }
            }
            ScoreSource::Events { events, .. } => {
                let mut covered = 0u64;
                for ev in events.iter() {
                    covered += match ev {
                        ScoreEvent::Point { .. } => 1,
                        ScoreEvent::Closed { free, .. } => 1u64 << free.popcount(),
                    };
                }
                if covered != total {
                    return Err(ScoreError::Coverage(format!(
                        "events cover {covered} masks, expected {total}"
                    )));
                }
                if q <= 20 {
                    let mut seen = vec![false; total as usize];
                    for ev in events.iter() {
                        match ev {
                            ScoreEvent::Point { mask, .. } => {
                                if std::mem::replace(&mut seen[mask.bits() as usize], true) {
                                    return Err(ScoreError::Coverage(format!(
                                        "mask {mask} covered twice"
                                    )));
                                }
                            }
                            ScoreEvent::Closed { prefix, free, .. } => {
                                for m in prefix.extensions(free) {
                                    if std::mem::replace(&mut seen[m.bits() as usize], true) {
                                        return Err(ScoreError::Coverage(format!(
                                            "mask {m} covered twice"
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Expected score and variance under `model`. Accumulation order is the
/// ascending mask integer for dense sources and event order for streams.
pub fn moments(source: &ScoreSource<'_>, model: &SelectionModel) -> Result<(f64, f64), ScoreError> {
    let q = source.q();
    model.validate(q)?;
    source.validate_coverage()?;
    let mut e = KahanSum::new();
    let mut m2 = KahanSum::new();
    match source {
        ScoreSource::Dense { theta, .. } => {
            for bits in 0..theta.len() {
                let mask = SubsetMask::from_bits(bits as u32, q);
                let w = subset_probability(model, &mask);
                e.add(w * theta[bits]);
                m2.add(w * theta[bits] * theta[bits]);
            }
        }
        ScoreSource::Events { events, .. } => {
            for ev in events.iter() {
                let (w, theta) = match ev {
                    ScoreEvent::Point { mask, theta } => {
                        (subset_probability(model, mask), *theta)
                    }
                    ScoreEvent::Closed { prefix, free, theta } => {
                        (subtree_weight(model, prefix, free), *theta)
                    }
                };
                e.add(w * theta);
                m2.add(w * theta * theta);
            }
        }
    }
    let e = e.value();
    let v = m2.value() - e * e;
    debug_assert!(v >= -1e-12, "variance fell below the clamp floor: {v}");
    Ok((e, v.max(0.0)))
}

pub fn expected_score(
    source: &ScoreSource<'_>,
    model: &SelectionModel,
) -> Result<f64, ScoreError> {
    moments(source, model).map(|(e, _)| e)
}

pub fn score_variance(
    source: &ScoreSource<'_>,
    model: &SelectionModel,
) -> Result<f64, ScoreError> {
    moments(source, model).map(|(_, v)| v)
}

/// Expected score and standard deviation per grid value of the shared
/// selection probability. The 0.5 grid point coincides exactly with the
/// maximum-entropy score.
pub fn pbar_curve(
    source: &ScoreSource<'_>,
    grid: &[f64],
) -> Result<Vec<(f64, f64, f64)>, ScoreError> {
    grid.iter()
        .map(|&pbar| {
            let (e, v) = moments(source, &SelectionModel::CommonBernoulli(pbar))?;
            Ok((pbar, e, v.sqrt()))
        })
        .collect()
}

/// Both sides of the identity between the common-uniform expected score and
/// the integral of the common-Bernoulli expected score over the shared
/// probability.
///
/// The right side is Gauss-Legendre quadrature; the integrand is a degree-q
/// polynomial in the shared probability, so `node_count >= ceil((q+1)/2)`
/// integrates it exactly.
pub fn uniform_integral_check(
    source: &ScoreSource<'_>,
    node_count: usize,
) -> Result<(f64, f64), ScoreError> {
    let q = source.q();
    let needed = (q + 1).div_ceil(2);
    if node_count < needed {
        return Err(ScoreError::Param(format!(
            "{node_count} quadrature nodes cannot integrate a degree-{q} polynomial exactly; need {needed}"
        )));
    }
    let lhs = expected_score(source, &SelectionModel::CommonUniform)?;
    let (nodes, weights) = gauss_legendre_unit(node_count);
    let mut rhs = KahanSum::new();
    for (&x, &w) in nodes.iter().zip(&weights) {
        let e = expected_score(source, &SelectionModel::CommonBernoulli(x))?;
        rhs.add(w * e);
    }
    Ok((lhs, rhs.value()))
}

// ---- sinks -----------------------------------------------------------------

/// Streaming accumulator of `(E, V)` for several models in one enumeration
/// pass.
pub struct MultiModelAccumulator {
    q: usize,
    models: Vec<SelectionModel>,
    sums_e: Vec<KahanSum>,
    sums_m2: Vec<KahanSum>,
    covered: u64,
}

impl MultiModelAccumulator {
    pub fn new(q: usize, models: &[SelectionModel]) -> Result<Self, ScoreError> {
        for model in models {
            model.validate(q)?;
        }
        Ok(Self {
            q,
            models: models.to_vec(),
            sums_e: vec![KahanSum::new(); models.len()],
            sums_m2: vec![KahanSum::new(); models.len()],
            covered: 0,
        })
    }

    fn absorb(&mut self, weights: impl Fn(&SelectionModel) -> f64, theta: f64) {
        for (idx, model) in self.models.iter().enumerate() {
            let w = weights(model);
            self.sums_e[idx].add(w * theta);
            self.sums_m2[idx].add(w * theta * theta);
        }
    }

    /// `(E, sqrt V)` per model, in the order the models were supplied.
    pub fn finish(self) -> Result<Vec<(f64, f64)>, ScoreError> {
        let total = 1u64 << self.q;
        if self.covered != total {
            return Err(ScoreError::Coverage(format!(
                "enumeration covered {} of {total} masks",
                self.covered
            )));
        }
        Ok(self
            .sums_e
            .iter()
            .zip(&self.sums_m2)
            .map(|(e, m2)| {
                let e = e.value();
                let v = (m2.value() - e * e).max(0.0);
                (e, v.sqrt())
            })
            .collect())
    }
}

impl ScoreSink for MultiModelAccumulator {
    fn point(&mut self, mask: SubsetMask, theta: f64) {
        self.absorb(|model| subset_probability(model, &mask), theta);
        self.covered += 1;
    }

    fn closed_subtree(&mut self, prefix: SubsetMask, free: SubsetMask, theta: f64) {
        self.absorb(|model| subtree_weight(model, &prefix, &free), theta);
        self.covered += 1u64 << free.popcount();
    }
}

/// Collects the full `2^q` score vector, expanding closed subtrees.
pub struct MaterializeSink {
    q: usize,
    theta: Vec<f64>,
    seen: Vec<bool>,
}

impl MaterializeSink {
    pub fn new(q: usize) -> Self {
        let total = 1usize << q;
        Self { q, theta: vec![0.0; total], seen: vec![false; total] }
    }

    /// Scores indexed by mask bits; errors if any mask was missed or
    /// double-covered.
    pub fn finish(self) -> Result<Vec<f64>, ScoreError> {
        if let Some(bits) = self.seen.iter().position(|&s| !s) {
            return Err(ScoreError::Coverage(format!(
                "mask {} never scored",
                SubsetMask::from_bits(bits as u32, self.q)
            )));
        }
        Ok(self.theta)
    }

    fn put(&mut self, bits: usize, theta: f64) {
        debug_assert!(!self.seen[bits], "mask scored twice");
        self.theta[bits] = theta;
        self.seen[bits] = true;
    }
}

impl ScoreSink for MaterializeSink {
    fn point(&mut self, mask: SubsetMask, theta: f64) {
        self.put(mask.bits() as usize, theta);
    }

    fn closed_subtree(&mut self, prefix: SubsetMask, free: SubsetMask, theta: f64) {
        let masks: Vec<usize> = prefix.extensions(&free).map(|m| m.bits() as usize).collect();
        for bits in masks {
            self.put(bits, theta);
        }
    }
}

/// Records the raw event stream for later replay through [`ScoreSource`].
#[derive(Clone, Debug, Default)]
pub struct EventLog {
    events: Vec<ScoreEvent>,
}

impl EventLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn events(&self) -> &[ScoreEvent] {
        &self.events
    }

    pub fn as_source(&self, q: usize) -> ScoreSource<'_> {
        ScoreSource::Events { q, events: &self.events }
    }
}

impl ScoreSink for EventLog {
    fn point(&mut self, mask: SubsetMask, theta: f64) {
        self.events.push(ScoreEvent::Point { mask, theta });
    }

    fn closed_subtree(&mut self, prefix: SubsetMask, free: SubsetMask, theta: f64) {
        self.events.push(ScoreEvent::Closed { prefix, free, theta });
    }
}

/// Fans one event stream out to two sinks.
pub struct TeeSink<'a> {
    pub first: &'a mut dyn ScoreSink,
    pub second: &'a mut dyn ScoreSink,
}

impl ScoreSink for TeeSink<'_> {
    fn point(&mut self, mask: SubsetMask, theta: f64) {
        self.first.point(mask, theta);
        self.second.point(mask, theta);
    }

    fn closed_subtree(&mut self, prefix: SubsetMask, free: SubsetMask, theta: f64) {
        self.first.closed_subtree(prefix, free, theta);
        self.second.closed_subtree(prefix, free, theta);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(bits: u32, q: usize) -> SubsetMask {
        SubsetMask::from_bits(bits, q)
    }

    #[test]
    fn common_uniform_weight_example() {
        // q=4, |b|=2: 1 / (5 * C(4,2)) = 1/30.
        let w = subset_probability(&SelectionModel::CommonUniform, &mask(0b0011, 4));
        assert!((w - 1.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn max_entropy_weight_is_uniform() {
        let w = subset_probability(&SelectionModel::MaxEntropy, &mask(0b101010101, 9));
        assert_eq!(w, 1.0 / 512.0);
    }

    #[test]
    fn beta_weight_example() {
        // q=2, alpha=(2,1), gamma=(1,1), b=(1,0): (2*1)/((3)(2)) = 1/3.
        let model = SelectionModel::BetaIndependent { alpha: vec![2.0, 1.0], gamma: vec![1.0, 1.0] };
        let w = subset_probability(&model, &mask(0b01, 2));
        assert!((w - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn model_coincidences_are_exact() {
        for q in 1..=12usize {
            let beta11 = SelectionModel::BetaIndependent {
                alpha: vec![1.0; q],
                gamma: vec![1.0; q],
            };
            for bits in 0..(1u32 << q) {
                let m = mask(bits, q);
                let we = subset_probability(&SelectionModel::MaxEntropy, &m);
                let wb = subset_probability(&SelectionModel::CommonBernoulli(0.5), &m);
                let wbeta = subset_probability(&beta11, &m);
                assert_eq!(we, wb);
                assert_eq!(we, wbeta);
            }
        }
    }

    #[test]
    fn subtree_weight_matches_brute_force() {
        let models = [
            SelectionModel::ExpertBernoulli(vec![0.4, 0.8, 1.0, 0.25, 0.6]),
            SelectionModel::MaxEntropy,
            SelectionModel::BetaIndependent {
                alpha: vec![2.0, 1.0, 0.5, 3.0, 1.5],
                gamma: vec![1.0, 1.0, 2.0, 0.5, 4.0],
            },
            SelectionModel::CommonUniform,
            SelectionModel::CommonBernoulli(0.37),
        ];
        let q = 5;
        for model in &models {
            for prefix_bits in [0u32, 0b00001, 0b01001] {
                for free_bits in [0u32, 0b00110, 0b10110] {
                    let prefix = mask(prefix_bits, q);
                    let free = mask(free_bits, q);
                    let closed = subtree_weight(model, &prefix, &free);
                    let brute: f64 =
                        prefix.extensions(&free).map(|m| subset_probability(model, &m)).sum();
                    assert!(
                        (closed - brute).abs() < 1e-14,
                        "{model:?} prefix={prefix} free={free}: {closed} vs {brute}"
                    );
                }
            }
        }
    }

    #[test]
    fn subtree_weight_spec_examples() {
        // MaxEntropy, q=4, two determined coordinates, f=2.
        let w = subtree_weight(
            &SelectionModel::MaxEntropy,
            &mask(0b0001, 4),
            &mask(0b1100, 4),
        );
        assert!((w - 0.25).abs() < 1e-15);
        // CommonUniform, q=4, prefix popcount 1, f=2 -> 1/6.
        let w = subtree_weight(
            &SelectionModel::CommonUniform,
            &mask(0b0001, 4),
            &mask(0b0110, 4),
        );
        assert!((w - 1.0 / 6.0).abs() < 1e-15);
        // f = 0 degenerates to the point weight.
        let m = SelectionModel::CommonBernoulli(0.3);
        let p = mask(0b0101, 4);
        assert_eq!(subtree_weight(&m, &p, &mask(0, 4)), subset_probability(&m, &p));
    }

    #[test]
    fn normalization_all_models() {
        for q in 1..=10usize {
            let models = [
                SelectionModel::ExpertBernoulli((0..q).map(|c| 0.1 + 0.08 * c as f64).collect()),
                SelectionModel::MaxEntropy,
                SelectionModel::BetaIndependent {
                    alpha: (0..q).map(|c| 0.5 + c as f64).collect(),
                    gamma: (0..q).map(|c| 1.5 + 0.3 * c as f64).collect(),
                },
                SelectionModel::CommonUniform,
                SelectionModel::CommonBernoulli(0.73),
            ];
            for model in &models {
                let mut sum = KahanSum::new();
                for bits in 0..(1u32 << q) {
                    sum.add(subset_probability(model, &mask(bits, q)));
                }
                assert!(
                    (sum.value() - 1.0).abs() < 1e-12,
                    "{model:?} q={q}: sum = {}",
                    sum.value()
                );
            }
        }
    }

    #[test]
    fn q1_entropy_expectation() {
        // theta(empty)=1, theta({0})=t: MaxEntropy expectation (1+t)/2.
        let t = 0.62;
        let theta = [1.0, t];
        let source = ScoreSource::Dense { q: 1, theta: &theta };
        let e = expected_score(&source, &SelectionModel::MaxEntropy).unwrap();
        assert!((e - (1.0 + t) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn constant_scores_have_zero_variance() {
        let theta = vec![1.0; 16];
        let source = ScoreSource::Dense { q: 4, theta: &theta };
        let (e, v) = moments(&source, &SelectionModel::CommonUniform).unwrap();
        assert!((e - 1.0).abs() < 1e-15);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn degenerate_expert_probabilities_pick_one_mask() {
        let theta: Vec<f64> = (0..16).map(|b| 0.3 + 0.04 * b as f64).collect();
        let source = ScoreSource::Dense { q: 4, theta: &theta };
        let model = SelectionModel::ExpertBernoulli(vec![1.0, 0.0, 1.0, 0.0]);
        let (e, v) = moments(&source, &model).unwrap();
        assert_eq!(e, theta[0b0101]);
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn expectation_bounded_by_score_range() {
        let theta: Vec<f64> = (0..32).map(|b| 0.2 + 0.025 * b as f64).collect();
        let source = ScoreSource::Dense { q: 5, theta: &theta };
        let lo = theta.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = theta.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for model in [
            SelectionModel::ExpertBernoulli(vec![0.9, 0.1, 0.5, 0.3, 0.7]),
            SelectionModel::MaxEntropy,
            SelectionModel::CommonUniform,
            SelectionModel::CommonBernoulli(0.2),
        ] {
            let e = expected_score(&source, &model).unwrap();
            assert!(e >= lo - 1e-12 && e <= hi + 1e-12);
        }
    }

    #[test]
    fn expectation_is_linear_in_scores() {
        let theta: Vec<f64> = (0..16).map(|b| 0.1 + 0.05 * b as f64).collect();
        let scaled: Vec<f64> = theta.iter().map(|t| 0.5 * t).collect();
        let model = SelectionModel::CommonUniform;
        let e1 =
            expected_score(&ScoreSource::Dense { q: 4, theta: &theta }, &model).unwrap();
        let e2 =
            expected_score(&ScoreSource::Dense { q: 4, theta: &scaled }, &model).unwrap();
        assert!((e2 - 0.5 * e1).abs() < 1e-15);
    }

    #[test]
    fn entropy_closed_form_and_bounds() {
        let q = 9;
        let half = vec![0.5; q];
        let h = entropy(&half);
        assert!((h - 9.0 * std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(entropy(&vec![1.0; 5]), 0.0);
        assert_eq!(entropy(&vec![0.0; 5]), 0.0);
    }

    #[test]
    fn entropy_matches_brute_force_sum() {
        let p = [0.1, 0.5, 0.9, 0.33, 0.0, 1.0, 0.72];
        let q = p.len();
        let closed = entropy(&p);
        let model = SelectionModel::ExpertBernoulli(p.to_vec());
        let mut brute = KahanSum::new();
        for bits in 0..(1u32 << q) {
            let w = subset_probability(&model, &mask(bits, q));
            if w > 0.0 {
                brute.add(-w * w.ln());
            }
        }
        assert!((closed - brute.value()).abs() < 1e-12);
    }

    #[test]
    fn q1_integral_identity() {
        let t = 0.4;
        let theta = [1.0, t];
        let source = ScoreSource::Dense { q: 1, theta: &theta };
        let (lhs, rhs) = uniform_integral_check(&source, 4).unwrap();
        assert!((lhs - (1.0 + t) / 2.0).abs() < 1e-14);
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn pbar_half_equals_entropy_exactly() {
        let theta: Vec<f64> = (0..64).map(|b| (b as f64 / 64.0).sqrt()).collect();
        let source = ScoreSource::Dense { q: 6, theta: &theta };
        let curve = pbar_curve(&source, &[0.25, 0.5, 0.75]).unwrap();
        let ent = expected_score(&source, &SelectionModel::MaxEntropy).unwrap();
        assert_eq!(curve[1].1, ent);
    }

    #[test]
    fn coverage_violations_are_rejected() {
        let theta = [1.0, 0.5, 0.25];
        let source = ScoreSource::Dense { q: 2, theta: &theta };
        assert!(matches!(
            expected_score(&source, &SelectionModel::MaxEntropy),
            Err(ScoreError::Coverage(_))
        ));
        let events = [ScoreEvent::Point { mask: mask(0b00, 2), theta: 1.0 }];
        let source = ScoreSource::Events { q: 2, events: &events };
        assert!(matches!(
            expected_score(&source, &SelectionModel::MaxEntropy),
            Err(ScoreError::Coverage(_))
        ));
        // Double cover with the right total count is also caught.
        let events = [
            ScoreEvent::Point { mask: mask(0b00, 2), theta: 1.0 },
            ScoreEvent::Point { mask: mask(0b00, 2), theta: 1.0 },
            ScoreEvent::Point { mask: mask(0b01, 2), theta: 1.0 },
            ScoreEvent::Point { mask: mask(0b10, 2), theta: 1.0 },
        ];
        let source = ScoreSource::Events { q: 2, events: &events };
        assert!(matches!(
            expected_score(&source, &SelectionModel::MaxEntropy),
            Err(ScoreError::Coverage(_))
        ));
    }

    #[test]
    fn accumulator_agrees_with_dense_moments() {
        let theta: Vec<f64> = (0..32).map(|b| 1.0 / (1.0 + b as f64)).collect();
        let models = vec![
            SelectionModel::ExpertBernoulli(vec![0.2, 0.9, 0.5, 0.7, 0.1]),
            SelectionModel::CommonUniform,
        ];
        let mut acc = MultiModelAccumulator::new(5, &models).unwrap();
        for bits in 0..32u32 {
            acc.point(mask(bits, 5), theta[bits as usize]);
        }
        let results = acc.finish().unwrap();
        let source = ScoreSource::Dense { q: 5, theta: &theta };
        for (idx, model) in models.iter().enumerate() {
            let (e, v) = moments(&source, model).unwrap();
            assert!((results[idx].0 - e).abs() < 1e-14);
            assert!((results[idx].1 - v.sqrt()).abs() < 1e-14);
        }
    }
}
