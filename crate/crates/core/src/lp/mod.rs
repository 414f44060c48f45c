//! Dense linear-programming kernel.
//!
//! [`solve_primal`] runs a two-phase primal simplex for cold solves;
//! [`solve_dual_warmstart`] re-solves a modified problem with the dual
//! simplex starting from a caller-supplied basis, falling back to the primal
//! path when the start basis cannot be made dual feasible. Problems here are
//! tiny (a few hundred rows at most), so everything is dense and the basis
//! inverse is kept explicitly.

mod problem;
mod simplex;

pub use problem::{
    Basis, ConstraintSense, LinearProgram, LpError, LpSolution, SolveStatus, SolverOptions,
};

use simplex::Worker;

/// Solves `lp` from scratch with the two-phase primal simplex.
pub fn solve_primal(lp: &LinearProgram, options: &SolverOptions) -> Result<LpSolution, LpError> {
    lp.validate()?;
    options.validate()?;
    let mut worker = Worker::new(lp, options);
    worker.solve_primal_cold()
}

/// Re-solves `lp` with the dual simplex from `start`.
///
/// `start` must index the standardized column space of `lp` (structural
/// variables first, then one slack/surplus per row). If the basis is
/// singular or dual infeasible beyond the bound-flip repair, the solve falls
/// back to [`solve_primal`] and the returned solution has
/// `warmstart_fallback` set.
pub fn solve_dual_warmstart(
    lp: &LinearProgram,
    start: &Basis,
    options: &SolverOptions,
) -> Result<LpSolution, LpError> {
    lp.validate()?;
    options.validate()?;
    start.check_shape(lp)?;
    let mut worker = Worker::new(lp, options);
    match worker.solve_dual_from(start)? {
        Some(solution) => Ok(solution),
        None => {
            let mut cold = Worker::new(lp, options);
            let mut solution = cold.solve_primal_cold()?;
            solution.warmstart_fallback = true;
            Ok(solution)
        }
    }
}
