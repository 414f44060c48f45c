//! Problem data, options, and solution types for the LP kernel.

use thiserror::Error;

/// Row sense of one linear constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintSense {
    Le,
    Ge,
    Eq,
}

/// A dense linear program in minimization form.
///
/// Variables default to `[0, +inf)`; a variable marked free ignores its
/// stored bounds entirely.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    senses: Vec<ConstraintSense>,
    rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    free: Vec<bool>,
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("invalid start basis: {0}")]
    InvalidBasis(String),
    #[error("basis matrix numerically singular")]
    SingularBasis,
    #[error("numerical trouble: {0}")]
    Numerical(String),
}

impl LinearProgram {
    /// Builds an LP with default bounds (`x >= 0`).
    pub fn new(
        objective: Vec<f64>,
        rows: Vec<Vec<f64>>,
        senses: Vec<ConstraintSense>,
        rhs: Vec<f64>,
    ) -> Result<Self, LpError> {
        let n = objective.len();
        let lp = Self {
            objective,
            rows,
            senses,
            rhs,
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
            free: vec![false; n],
        };
        lp.validate()?;
        Ok(lp)
    }

    pub fn set_lower_bound(&mut self, var: usize, lo: f64) {
        self.lower[var] = lo;
    }

    pub fn set_upper_bound(&mut self, var: usize, hi: f64) {
        self.upper[var] = hi;
    }

    pub fn mark_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn senses(&self) -> &[ConstraintSense] {
        &self.senses
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Effective bounds of a variable, free flags applied.
    pub fn bounds(&self, var: usize) -> (f64, f64) {
        if self.free[var] {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            (self.lower[var], self.upper[var])
        }
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let m = self.rows.len();
        let n = self.objective.len();
        if self.senses.len() != m || self.rhs.len() != m {
            return Err(LpError::Dimension(format!(
                "{} rows but {} senses and {} rhs entries",
                m,
                self.senses.len(),
                self.rhs.len()
            )));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != n {
                return Err(LpError::Dimension(format!(
                    "row {i} has {} coefficients, objective has {n}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(LpError::NonFinite("constraint matrix"));
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        if self.rhs.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("rhs"));
        }
        for j in 0..n {
            let (lo, hi) = self.bounds(j);
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(LpError::Dimension(format!("variable {j} has empty bounds")));
            }
        }
        Ok(())
    }
}

/// A simplex basis: one column index per row of the standardized problem.
///
/// Standardized columns are the structural variables `0..n` followed by one
/// slack/surplus column per row (`n + i` for row `i`). Nonbasic variables
/// are placed at their lower bound (or at zero when free), which is the only
/// case the enumeration engine produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    indices: Vec<usize>,
}

impl Basis {
    pub fn new(indices: Vec<usize>) -> Self {
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Slack column index for `row` in the standardized space of `lp`.
    pub fn slack_index(lp: &LinearProgram, row: usize) -> usize {
        lp.num_cols() + row
    }

    pub(crate) fn check_shape(&self, lp: &LinearProgram) -> Result<(), LpError> {
        let m = lp.num_rows();
        let limit = lp.num_cols() + m;
        if self.indices.len() != m {
            return Err(LpError::InvalidBasis(format!(
                "basis has {} entries for {m} rows",
                self.indices.len()
            )));
        }
        let mut seen = vec![false; limit];
        for &j in &self.indices {
            if j >= limit {
                return Err(LpError::InvalidBasis(format!(
                    "index {j} outside standardized column space of size {limit}"
                )));
            }
            if seen[j] {
                return Err(LpError::InvalidBasis(format!("index {j} repeated")));
            }
            seen[j] = true;
        }
        Ok(())
    }
}

/// Termination status of a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Result of one solve. `row_multipliers` are the constraint duals in the
/// original (unscaled) row space; `basis` indexes the standardized columns
/// and is only meaningful when `status` is `Optimal`.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: SolveStatus,
    pub objective: f64,
    pub primal_values: Vec<f64>,
    pub row_multipliers: Vec<f64>,
    pub basis: Basis,
    pub iterations: usize,
    pub warmstart_fallback: bool,
}

/// Tolerances and limits. All tolerances apply to the row-scaled system.
#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub feas_tol: f64,
    pub opt_tol: f64,
    pub gap_tol: f64,
    /// `None` selects `50 * (rows + cols)` for the problem at hand.
    pub max_iterations: Option<usize>,
    /// Consecutive degenerate pivots before pricing switches to Bland's rule.
    pub anti_cycling_threshold: usize,
    /// Dump per-iteration pivot lines to stderr.
    pub verbose: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            feas_tol: 1e-9,
            opt_tol: 1e-9,
            gap_tol: 1e-7,
            max_iterations: None,
            anti_cycling_threshold: 50,
            verbose: false,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), LpError> {
        if !(self.feas_tol > 0.0 && self.opt_tol > 0.0 && self.gap_tol > 0.0) {
            return Err(LpError::InvalidOptions("tolerances must be positive".into()));
        }
        if self.max_iterations == Some(0) {
            return Err(LpError::InvalidOptions("max_iterations must be >= 1".into()));
        }
        if self.anti_cycling_threshold == 0 {
            return Err(LpError::InvalidOptions(
                "anti_cycling_threshold must be >= 1".into(),
            ));
        }
        Ok(())
    }

    pub fn effective_max_iterations(&self, lp: &LinearProgram) -> usize {
        self.max_iterations
            .unwrap_or_else(|| 50 * (lp.num_rows() + lp.num_cols()).max(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_rows() {
        let err = LinearProgram::new(
            vec![1.0, 0.0],
            vec![vec![1.0]],
            vec![ConstraintSense::Le],
            vec![1.0],
        )
        .unwrap_err();
        assert!(matches!(err, LpError::Dimension(_)));
    }

    #[test]
    fn rejects_non_finite_data() {
        let err = LinearProgram::new(
            vec![f64::NAN],
            vec![vec![1.0]],
            vec![ConstraintSense::Le],
            vec![1.0],
        )
        .unwrap_err();
        assert!(matches!(err, LpError::NonFinite(_)));
    }

    #[test]
    fn basis_shape_checks() {
        let lp = LinearProgram::new(
            vec![1.0],
            vec![vec![1.0], vec![2.0]],
            vec![ConstraintSense::Le, ConstraintSense::Le],
            vec![1.0, 2.0],
        )
        .unwrap();
        assert!(Basis::new(vec![1, 2]).check_shape(&lp).is_ok());
        assert!(Basis::new(vec![1]).check_shape(&lp).is_err());
        assert!(Basis::new(vec![1, 1]).check_shape(&lp).is_err());
        assert!(Basis::new(vec![1, 3]).check_shape(&lp).is_err());
    }

    #[test]
    fn options_validation() {
        let mut opts = SolverOptions::default();
        assert!(opts.validate().is_ok());
        opts.anti_cycling_threshold = 0;
        assert!(opts.validate().is_err());
        let mut opts = SolverOptions::default();
        opts.feas_tol = 0.0;
        assert!(opts.validate().is_err());
    }
}
