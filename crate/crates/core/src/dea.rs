//! Radial envelopment model construction and per-subset efficiency scores.
//!
//! For a DMU under evaluation and a mask over the candidate variables, the
//! LP minimizes the radial input contraction `theta` subject to one `<=` row
//! per input, one `>=` row per output, and (under variable returns to scale)
//! a convexity row over the intensity weights.
//!
//! The LP always has the same shape for a given dataset and scale choice:
//! columns `[theta, lambda_1..lambda_n]`, rows for every input in dataset
//! order (the implicit constant input last among inputs), then every output
//! in dataset order, then the convexity row. Variables excluded by the mask
//! contribute an all-zero row rather than disappearing, so a basis from one
//! mask remains dimensionally valid for every other mask.

use serde::Serialize;
use thiserror::Error;

use crate::lp::{
    solve_primal, ConstraintSense, LinearProgram, LpError, LpSolution, SolveStatus, SolverOptions,
};
use crate::mask::{SubsetMask, MAX_MASK_WIDTH};

/// Slack allowed when clamping an LP optimum into `[0, 1]`; larger
/// excursions indicate a modeling or solver bug rather than float noise.
pub const CLAMP_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VarRole {
    Input,
    Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Fixed,
    Candidate,
}

#[derive(Clone, Debug, Serialize)]
pub struct VariableDef {
    pub name: String,
    pub role: VarRole,
    pub membership: Membership,
}

impl VariableDef {
    pub fn new(name: impl Into<String>, role: VarRole, membership: Membership) -> Self {
        Self { name: name.into(), role, membership }
    }
}

/// Returns-to-scale choice: `Crs` is the constant-returns radial model,
/// `Vrs` adds the convexity row over the intensity weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum ReturnsToScale {
    #[default]
    Crs,
    Vrs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct ModelSpec {
    pub returns_to_scale: ReturnsToScale,
}

impl ModelSpec {
    pub const CRS: ModelSpec = ModelSpec { returns_to_scale: ReturnsToScale::Crs };
    pub const VRS: ModelSpec = ModelSpec { returns_to_scale: ReturnsToScale::Vrs };
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("dataset must contain at least one DMU")]
    Empty,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("value for DMU `{dmu}`, variable `{var}` is negative or non-finite: {value}")]
    BadValue { dmu: String, var: String, value: f64 },
    #[error("dataset has no input variable (and constant-input mode is off)")]
    NoInputs,
    #[error("dataset has no output variable")]
    NoOutputs,
    #[error("DMU `{0}` has no strictly positive output value")]
    NoPositiveOutput(String),
    #[error("{q} candidate variables exceed the supported maximum of {max}", max = MAX_MASK_WIDTH)]
    TooManyCandidates { q: usize },
}

/// DMU records plus the variable roster. Values are stored DMU-major.
#[derive(Clone, Debug, Serialize)]
pub struct Dataset {
    dmu_names: Vec<String>,
    variables: Vec<VariableDef>,
    values: Vec<f64>,
    constant_input_mode: bool,
    #[serde(skip)]
    input_vars: Vec<usize>,
    #[serde(skip)]
    output_vars: Vec<usize>,
    #[serde(skip)]
    candidate_vars: Vec<usize>,
    #[serde(skip)]
    candidate_pos: Vec<Option<usize>>,
}

impl Dataset {
    pub fn new(
        dmu_names: Vec<String>,
        variables: Vec<VariableDef>,
        values: Vec<f64>,
        constant_input_mode: bool,
    ) -> Result<Self, DatasetError> {
        let n = dmu_names.len();
        let v = variables.len();
        if n == 0 {
            return Err(DatasetError::Empty);
        }
        if values.len() != n * v {
            return Err(DatasetError::Dimension(format!(
                "{n} DMUs x {v} variables needs {} values, got {}",
                n * v,
                values.len()
            )));
        }
        for (i, var) in variables.iter().enumerate() {
            if variables[..i].iter().any(|other| other.name == var.name) {
                return Err(DatasetError::DuplicateVariable(var.name.clone()));
            }
        }
        for d in 0..n {
            for j in 0..v {
                let value = values[d * v + j];
                if !value.is_finite() || value < 0.0 {
                    return Err(DatasetError::BadValue {
                        dmu: dmu_names[d].clone(),
                        var: variables[j].name.clone(),
                        value,
                    });
                }
            }
        }
        let input_vars: Vec<usize> =
            (0..v).filter(|&j| variables[j].role == VarRole::Input).collect();
        let output_vars: Vec<usize> =
            (0..v).filter(|&j| variables[j].role == VarRole::Output).collect();
        if input_vars.is_empty() && !constant_input_mode {
            return Err(DatasetError::NoInputs);
        }
        if output_vars.is_empty() {
            return Err(DatasetError::NoOutputs);
        }
        for d in 0..n {
            if !output_vars.iter().any(|&j| values[d * v + j] > 0.0) {
                return Err(DatasetError::NoPositiveOutput(dmu_names[d].clone()));
            }
        }
        let candidate_vars: Vec<usize> = (0..v)
            .filter(|&j| variables[j].membership == Membership::Candidate)
            .collect();
        if candidate_vars.len() > MAX_MASK_WIDTH {
            return Err(DatasetError::TooManyCandidates { q: candidate_vars.len() });
        }
        let mut candidate_pos = vec![None; v];
        for (pos, &j) in candidate_vars.iter().enumerate() {
            candidate_pos[j] = Some(pos);
        }
        Ok(Self {
            dmu_names,
            variables,
            values,
            constant_input_mode,
            input_vars,
            output_vars,
            candidate_vars,
            candidate_pos,
        })
    }

    pub fn n_dmus(&self) -> usize {
        self.dmu_names.len()
    }

    pub fn dmu_names(&self) -> &[String] {
        &self.dmu_names
    }

    pub fn variables(&self) -> &[VariableDef] {
        &self.variables
    }

    pub fn value(&self, dmu: usize, var: usize) -> f64 {
        self.values[dmu * self.variables.len() + var]
    }

    pub fn constant_input_mode(&self) -> bool {
        self.constant_input_mode
    }

    /// Number of candidate variables (the mask width).
    pub fn q(&self) -> usize {
        self.candidate_vars.len()
    }

    /// Dataset-order variable indices of the candidates.
    pub fn candidate_vars(&self) -> &[usize] {
        &self.candidate_vars
    }

    /// Whether `var` participates in the model under `mask`.
    pub fn var_active(&self, var: usize, mask: &SubsetMask) -> bool {
        match self.candidate_pos[var] {
            None => true,
            Some(pos) => mask.contains(pos),
        }
    }

    /// True when the effective variable set has at least one input and one
    /// output. Masks failing this are assigned score 1 by convention.
    pub fn mask_effective(&self, mask: &SubsetMask) -> bool {
        let has_input = self.constant_input_mode
            || self.input_vars.iter().any(|&j| self.var_active(j, mask));
        let has_output = self.output_vars.iter().any(|&j| self.var_active(j, mask));
        has_input && has_output
    }

    /// LP constraint rows for this dataset: inputs, then outputs, then the
    /// convexity row under VRS.
    pub fn lp_row_count(&self, spec: ModelSpec) -> usize {
        let convexity = usize::from(spec.returns_to_scale == ReturnsToScale::Vrs);
        self.input_vars.len()
            + usize::from(self.constant_input_mode)
            + self.output_vars.len()
            + convexity
    }

    /// LP row index of a dataset variable (independent of returns to scale).
    pub fn lp_row_of_var(&self, var: usize) -> usize {
        match self.variables[var].role {
            VarRole::Input => self.input_vars.iter().position(|&j| j == var).unwrap(),
            VarRole::Output => {
                self.input_vars.len()
                    + usize::from(self.constant_input_mode)
                    + self.output_vars.iter().position(|&j| j == var).unwrap()
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum DeaError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("DMU index {0} out of range")]
    BadDmuIndex(usize),
    #[error("mask width {got} does not match the dataset's {expected} candidates")]
    MaskWidth { expected: usize, got: usize },
    #[error("mask {mask} leaves the model without inputs or without outputs")]
    DegenerateMask { mask: SubsetMask },
    #[error("solver returned {status:?} for mask {mask}; positive-data envelopment LPs must be optimal")]
    UnexpectedStatus { status: SolveStatus, mask: SubsetMask },
    #[error("score {theta} for mask {mask} exceeds [0,1] beyond the {CLAMP_SLACK} clamp slack")]
    ClampExceeded { theta: f64, mask: SubsetMask },
}

/// Builds the envelopment LP for `dmu_index` under `mask`.
///
/// Columns are `[theta, lambda_1..lambda_n]`, all bounded below by zero.
/// Rows follow [`Dataset::lp_row_of_var`]; variables excluded by the mask
/// produce all-zero rows so LP dimensions never change with the mask.
pub fn build_lp(
    dataset: &Dataset,
    dmu_index: usize,
    mask: &SubsetMask,
    spec: ModelSpec,
) -> Result<LinearProgram, DeaError> {
    if dmu_index >= dataset.n_dmus() {
        return Err(DeaError::BadDmuIndex(dmu_index));
    }
    if mask.width() != dataset.q() {
        return Err(DeaError::MaskWidth { expected: dataset.q(), got: mask.width() });
    }
    if !dataset.mask_effective(mask) {
        return Err(DeaError::DegenerateMask { mask: *mask });
    }
    let n = dataset.n_dmus();
    let cols = 1 + n;
    let n_rows = dataset.lp_row_count(spec);
    let mut rows = vec![vec![0.0; cols]; n_rows];
    let mut senses = Vec::with_capacity(n_rows);
    let mut rhs = Vec::with_capacity(n_rows);
    senses.resize(n_rows, ConstraintSense::Le);
    rhs.resize(n_rows, 0.0);

    for &var in &dataset.input_vars {
        let r = dataset.lp_row_of_var(var);
        senses[r] = ConstraintSense::Le;
        rhs[r] = 0.0;
        if dataset.var_active(var, mask) {
            rows[r][0] = -dataset.value(dmu_index, var);
            for j in 0..n {
                rows[r][1 + j] = dataset.value(j, var);
            }
        }
    }
    if dataset.constant_input_mode {
        let r = dataset.input_vars.len();
        senses[r] = ConstraintSense::Le;
        rhs[r] = 0.0;
        rows[r][0] = -1.0;
        for j in 0..n {
            rows[r][1 + j] = 1.0;
        }
    }
    for &var in &dataset.output_vars {
        let r = dataset.lp_row_of_var(var);
        senses[r] = ConstraintSense::Ge;
        if dataset.var_active(var, mask) {
            rhs[r] = dataset.value(dmu_index, var);
            for j in 0..n {
                rows[r][1 + j] = dataset.value(j, var);
            }
        } else {
            rhs[r] = 0.0;
        }
    }
    if spec.returns_to_scale == ReturnsToScale::Vrs {
        let r = n_rows - 1;
        senses[r] = ConstraintSense::Eq;
        rhs[r] = 1.0;
        for j in 0..n {
            rows[r][1 + j] = 1.0;
        }
    }

    let mut objective = vec![0.0; cols];
    objective[0] = 1.0;
    LinearProgram::new(objective, rows, senses, rhs).map_err(DeaError::from)
}

/// Clamps an LP optimum into `[0, 1]`, rejecting excursions beyond
/// [`CLAMP_SLACK`].
pub fn clamp_theta(theta: f64, mask: &SubsetMask) -> Result<f64, DeaError> {
    if theta < -CLAMP_SLACK || theta > 1.0 + CLAMP_SLACK {
        return Err(DeaError::ClampExceeded { theta, mask: *mask });
    }
    Ok(theta.clamp(0.0, 1.0))
}

/// Efficiency score of one DMU under one mask.
///
/// Masks whose effective variable set lacks an input or an output (the empty
/// mask included) score 1 by convention without solving an LP.
pub fn efficiency_score(
    dataset: &Dataset,
    dmu_index: usize,
    mask: &SubsetMask,
    spec: ModelSpec,
    options: &SolverOptions,
) -> Result<f64, DeaError> {
    if dmu_index >= dataset.n_dmus() {
        return Err(DeaError::BadDmuIndex(dmu_index));
    }
    if mask.width() != dataset.q() {
        return Err(DeaError::MaskWidth { expected: dataset.q(), got: mask.width() });
    }
    if !dataset.mask_effective(mask) {
        return Ok(1.0);
    }
    let lp = build_lp(dataset, dmu_index, mask, spec)?;
    let solution = solve_primal(&lp, options)?;
    if solution.status != SolveStatus::Optimal {
        return Err(DeaError::UnexpectedStatus { status: solution.status, mask: *mask });
    }
    clamp_theta(solution.objective, mask)
}

/// Importance of each candidate variable at an optimal solution: the
/// absolute row multiplier of its constraint, zero for unselected candidates.
pub fn dual_weights(solution: &LpSolution, dataset: &Dataset, mask: &SubsetMask) -> Vec<f64> {
    dataset
        .candidate_vars
        .iter()
        .enumerate()
        .map(|(pos, &var)| {
            if mask.contains(pos) {
                solution.row_multipliers[dataset.lp_row_of_var(var)].abs()
            } else {
                0.0
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_dmu_dataset() -> Dataset {
        // A: x=1, y=2; B: x=1, y=4.
        Dataset::new(
            vec!["A".into(), "B".into()],
            vec![
                VariableDef::new("x", VarRole::Input, Membership::Fixed),
                VariableDef::new("y", VarRole::Output, Membership::Candidate),
            ],
            vec![1.0, 2.0, 1.0, 4.0],
            false,
        )
        .unwrap()
    }

    #[test]
    fn single_ratio_ccr() {
        let ds = two_dmu_dataset();
        let mask = SubsetMask::full(1);
        let theta =
            efficiency_score(&ds, 0, &mask, ModelSpec::CRS, &SolverOptions::default()).unwrap();
        assert!((theta - 0.5).abs() < 1e-9, "theta = {theta}");
        let theta_b =
            efficiency_score(&ds, 1, &mask, ModelSpec::CRS, &SolverOptions::default()).unwrap();
        assert!((theta_b - 1.0).abs() < 1e-9);
    }

    #[test]
    fn empty_mask_scores_one() {
        let ds = two_dmu_dataset();
        let mask = SubsetMask::empty(1);
        let theta =
            efficiency_score(&ds, 0, &mask, ModelSpec::CRS, &SolverOptions::default()).unwrap();
        assert_eq!(theta, 1.0);
    }

    #[test]
    fn lone_dmu_spans_its_own_frontier() {
        let ds = Dataset::new(
            vec!["only".into()],
            vec![
                VariableDef::new("x", VarRole::Input, Membership::Fixed),
                VariableDef::new("y", VarRole::Output, Membership::Candidate),
            ],
            vec![3.0, 7.0],
            false,
        )
        .unwrap();
        let theta = efficiency_score(
            &ds,
            0,
            &SubsetMask::full(1),
            ModelSpec::CRS,
            &SolverOptions::default(),
        )
        .unwrap();
        assert!((theta - 1.0).abs() < 1e-9);
    }

    #[test]
    fn vrs_adds_one_equality_row_of_ones() {
        let ds = two_dmu_dataset();
        let lp = build_lp(&ds, 0, &SubsetMask::full(1), ModelSpec::VRS).unwrap();
        let eq_rows: Vec<usize> = (0..lp.num_rows())
            .filter(|&r| lp.senses()[r] == ConstraintSense::Eq)
            .collect();
        assert_eq!(eq_rows.len(), 1);
        let r = eq_rows[0];
        assert_eq!(r, lp.num_rows() - 1);
        assert_eq!(lp.rhs()[r], 1.0);
        assert_eq!(lp.rows()[r][0], 0.0);
        assert!(lp.rows()[r][1..].iter().all(|&v| v == 1.0));
    }

    #[test]
    fn degenerate_mask_is_rejected_by_build_but_scored_one() {
        // Candidate input and candidate output; selecting only the input
        // leaves no outputs.
        let ds = Dataset::new(
            vec!["A".into(), "B".into()],
            vec![
                VariableDef::new("x", VarRole::Input, Membership::Candidate),
                VariableDef::new("y", VarRole::Output, Membership::Candidate),
            ],
            vec![1.0, 2.0, 1.0, 4.0],
            false,
        )
        .unwrap();
        let input_only = SubsetMask::from_bits(0b01, 2);
        assert!(matches!(
            build_lp(&ds, 0, &input_only, ModelSpec::CRS),
            Err(DeaError::DegenerateMask { .. })
        ));
        let theta =
            efficiency_score(&ds, 0, &input_only, ModelSpec::CRS, &SolverOptions::default())
                .unwrap();
        assert_eq!(theta, 1.0);
    }

    #[test]
    fn dual_weights_single_output() {
        let ds = two_dmu_dataset();
        let mask = SubsetMask::full(1);
        let lp = build_lp(&ds, 0, &mask, ModelSpec::CRS).unwrap();
        let sol = solve_primal(&lp, &SolverOptions::default()).unwrap();
        let weights = dual_weights(&sol, &ds, &mask);
        assert_eq!(weights.len(), 1);
        assert!(weights[0] > 0.0, "binding output row must carry a multiplier");
    }

    #[test]
    fn dataset_rejects_negative_values() {
        let err = Dataset::new(
            vec!["A".into()],
            vec![
                VariableDef::new("x", VarRole::Input, Membership::Fixed),
                VariableDef::new("y", VarRole::Output, Membership::Candidate),
            ],
            vec![1.0, -2.0],
            false,
        )
        .unwrap_err();
        assert!(matches!(err, DatasetError::BadValue { .. }));
    }

    #[test]
    fn dataset_rejects_all_zero_outputs() {
        let err = Dataset::new(
            vec!["A".into()],
            vec![
                VariableDef::new("x", VarRole::Input, Membership::Fixed),
                VariableDef::new("y", VarRole::Output, Membership::Candidate),
            ],
            vec![1.0, 0.0],
            false,
        )
        .unwrap_err();
        assert!(matches!(err, DatasetError::NoPositiveOutput(_)));
    }
}
