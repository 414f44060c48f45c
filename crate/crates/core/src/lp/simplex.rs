//! Bounded-variable simplex over an explicitly maintained basis inverse.
//!
//! Standardized column space: structural variables `0..ns`, then one
//! slack/surplus per row (`ns + i`, sign +1 for `<=`/`=` rows and -1 for
//! `>=` rows; `=` rows get `[0, 0]` bounds), then one artificial slot per
//! row used only inside phase 1 of a cold solve. Rows are scaled by their
//! max-abs coefficient before anything else; all tolerances apply to the
//! scaled system and duals are unscaled on extraction.

use super::problem::{
    Basis, ConstraintSense, LinearProgram, LpError, LpSolution, SolveStatus, SolverOptions,
};

const PIVOT_TOL: f64 = 1e-10;
const SINGULAR_TOL: f64 = 1e-11;
const DEGENERATE_STEP: f64 = 1e-11;
const REFACTOR_EVERY: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable resting at zero.
    FreeAtZero,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum LoopExit {
    Optimal,
    Unbounded,
    Infeasible,
    IterationLimit,
}

pub(super) struct Worker<'a> {
    opts: &'a SolverOptions,
    m: usize,
    ns: usize,
    /// Scaled structural coefficients, row-major `m x ns`.
    a: Vec<f64>,
    b: Vec<f64>,
    cost: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    aux_sign: Vec<f64>,
    art_sign: Vec<f64>,
    art_active: Vec<bool>,
    row_scale: Vec<f64>,
    max_iter: usize,

    state: Vec<VarState>,
    x: Vec<f64>,
    basis: Vec<usize>,
    /// Row-major `m x m` basis inverse.
    binv: Vec<f64>,
    iterations: usize,
    pivots_since_refactor: usize,
    degenerate_streak: usize,
    bland: bool,
    phase1: bool,
}

impl<'a> Worker<'a> {
    pub(super) fn new(lp: &LinearProgram, opts: &'a SolverOptions) -> Self {
        let m = lp.num_rows();
        let ns = lp.num_cols();
        let total = ns + 2 * m;

        let mut row_scale = vec![1.0; m];
        let mut a = vec![0.0; m * ns];
        let mut b = vec![0.0; m];
        for i in 0..m {
            let row = &lp.rows()[i];
            let max_abs = row.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            let s = if max_abs > 1e-300 { 1.0 / max_abs } else { 1.0 };
            row_scale[i] = s;
            for j in 0..ns {
                a[i * ns + j] = row[j] * s;
            }
            b[i] = lp.rhs()[i] * s;
        }

        let mut lo = vec![0.0; total];
        let mut hi = vec![0.0; total];
        for j in 0..ns {
            let (l, h) = lp.bounds(j);
            lo[j] = l;
            hi[j] = h;
        }
        let mut aux_sign = vec![1.0; m];
        for i in 0..m {
            let aux = ns + i;
            match lp.senses()[i] {
                ConstraintSense::Le => {
                    lo[aux] = 0.0;
                    hi[aux] = f64::INFINITY;
                }
                ConstraintSense::Ge => {
                    aux_sign[i] = -1.0;
                    lo[aux] = 0.0;
                    hi[aux] = f64::INFINITY;
                }
                ConstraintSense::Eq => {
                    lo[aux] = 0.0;
                    hi[aux] = 0.0;
                }
            }
            // Artificial slots stay fixed at zero until activated.
            lo[ns + m + i] = 0.0;
            hi[ns + m + i] = 0.0;
        }

        let mut cost = vec![0.0; total];
        cost[..ns].copy_from_slice(lp.objective());

        Self {
            opts,
            m,
            ns,
            a,
            b,
            cost,
            lo,
            hi,
            aux_sign,
            art_sign: vec![1.0; m],
            art_active: vec![false; m],
            row_scale,
            max_iter: opts.effective_max_iterations(lp),
            state: vec![VarState::AtLower; total],
            x: vec![0.0; total],
            basis: Vec::new(),
            binv: vec![0.0; m * m],
            iterations: 0,
            pivots_since_refactor: 0,
            degenerate_streak: 0,
            bland: false,
            phase1: false,
        }
    }

    fn aux_col(&self, row: usize) -> usize {
        self.ns + row
    }

    fn art_col(&self, row: usize) -> usize {
        self.ns + self.m + row
    }

    fn is_art(&self, col: usize) -> bool {
        col >= self.ns + self.m
    }

    fn col_entry(&self, row: usize, col: usize) -> f64 {
        if col < self.ns {
            self.a[row * self.ns + col]
        } else if col < self.ns + self.m {
            if col - self.ns == row {
                self.aux_sign[row]
            } else {
                0.0
            }
        } else if col - self.ns - self.m == row {
            self.art_sign[row]
        } else {
            0.0
        }
    }

    fn phase_cost(&self, col: usize) -> f64 {
        if self.phase1 {
            if self.is_art(col) && self.art_active[col - self.ns - self.m] {
                1.0
            } else {
                0.0
            }
        } else {
            self.cost[col]
        }
    }

    /// `w = B^-1 a_col`. Unit columns reduce to a signed column of `binv`.
    fn ftran(&self, col: usize, w: &mut [f64]) {
        let m = self.m;
        if col < self.ns {
            for i in 0..m {
                let mut acc = 0.0;
                for k in 0..m {
                    acc += self.binv[i * m + k] * self.a[k * self.ns + col];
                }
                w[i] = acc;
            }
        } else {
            let (row, sign) = if col < self.ns + m {
                (col - self.ns, self.aux_sign[col - self.ns])
            } else {
                (col - self.ns - m, self.art_sign[col - self.ns - m])
            };
            for i in 0..m {
                w[i] = sign * self.binv[i * m + row];
            }
        }
    }

    /// `y = c_B^T B^-1` for the current phase costs.
    fn duals(&self) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (i, &col) in self.basis.iter().enumerate() {
            let cb = self.phase_cost(col);
            if cb != 0.0 {
                for k in 0..m {
                    y[k] += cb * self.binv[i * m + k];
                }
            }
        }
        y
    }

    fn price(&self, y: &[f64], col: usize) -> f64 {
        if col < self.ns {
            let mut acc = 0.0;
            for i in 0..self.m {
                acc += y[i] * self.a[i * self.ns + col];
            }
            acc
        } else if col < self.ns + self.m {
            y[col - self.ns] * self.aux_sign[col - self.ns]
        } else {
            y[col - self.ns - self.m] * self.art_sign[col - self.ns - self.m]
        }
    }

    fn reduced_cost(&self, y: &[f64], col: usize) -> f64 {
        self.phase_cost(col) - self.price(y, col)
    }

    fn is_fixed(&self, col: usize) -> bool {
        self.lo[col] == self.hi[col]
    }

    /// Rebuilds `binv` from the current basis by Gauss-Jordan elimination.
    fn refactorize(&mut self) -> Result<(), LpError> {
        let m = self.m;
        if m == 0 {
            return Ok(());
        }
        let mut mat = vec![0.0; m * m];
        for (k, &col) in self.basis.iter().enumerate() {
            for i in 0..m {
                mat[i * m + k] = self.col_entry(i, col);
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for k in 0..m {
            let mut piv_row = k;
            let mut piv_val = mat[k * m + k].abs();
            for r in (k + 1)..m {
                let v = mat[r * m + k].abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = r;
                }
            }
            if piv_val < SINGULAR_TOL {
                return Err(LpError::SingularBasis);
            }
            if piv_row != k {
                for j in 0..m {
                    mat.swap(k * m + j, piv_row * m + j);
                    inv.swap(k * m + j, piv_row * m + j);
                }
            }
            let piv = mat[k * m + k];
            for j in 0..m {
                mat[k * m + j] /= piv;
                inv[k * m + j] /= piv;
            }
            for r in 0..m {
                if r == k {
                    continue;
                }
                let f = mat[r * m + k];
                if f != 0.0 {
                    for j in 0..m {
                        mat[r * m + j] -= f * mat[k * m + j];
                        inv[r * m + j] -= f * inv[k * m + j];
                    }
                }
            }
        }
        self.binv = inv;
        self.pivots_since_refactor = 0;
        Ok(())
    }

    /// Recomputes basic values from the nonbasic point: `x_B = B^-1 (b - N x_N)`.
    fn recompute_basics(&mut self) {
        let m = self.m;
        let mut r = self.b.clone();
        for col in 0..self.ns + 2 * m {
            if self.state[col] != VarState::Basic && self.x[col] != 0.0 {
                let xj = self.x[col];
                for i in 0..m {
                    r[i] -= self.col_entry(i, col) * xj;
                }
            }
        }
        for i in 0..m {
            let mut acc = 0.0;
            for k in 0..m {
                acc += self.binv[i * m + k] * r[k];
            }
            self.x[self.basis[i]] = acc;
        }
    }

    /// Applies a basis exchange at `row` with entering column `col` whose
    /// ftran is `w`. Caller has already updated the primal values.
    fn update_basis(&mut self, row: usize, col: usize, w: &[f64]) {
        let m = self.m;
        let piv = w[row];
        for i in 0..m {
            if i == row {
                continue;
            }
            let f = w[i] / piv;
            if f != 0.0 {
                for k in 0..m {
                    self.binv[i * m + k] -= f * self.binv[row * m + k];
                }
            }
        }
        for k in 0..m {
            self.binv[row * m + k] /= piv;
        }
        self.basis[row] = col;
        self.state[col] = VarState::Basic;
        self.pivots_since_refactor += 1;
    }

    fn note_step(&mut self, step: f64) {
        if step.abs() <= DEGENERATE_STEP {
            self.degenerate_streak += 1;
            if self.degenerate_streak >= self.opts.anti_cycling_threshold {
                self.bland = true;
            }
        } else {
            self.degenerate_streak = 0;
        }
    }

    fn maybe_refactor(&mut self) -> Result<(), LpError> {
        if self.pivots_since_refactor >= REFACTOR_EVERY {
            self.refactorize()?;
            self.recompute_basics();
        }
        Ok(())
    }

    // ---- cold solve -------------------------------------------------------

    fn init_cold(&mut self) {
        let m = self.m;
        for j in 0..self.ns {
            if self.lo[j].is_finite() {
                self.state[j] = VarState::AtLower;
                self.x[j] = self.lo[j];
            } else if self.hi[j].is_finite() {
                self.state[j] = VarState::AtUpper;
                self.x[j] = self.hi[j];
            } else {
                self.state[j] = VarState::FreeAtZero;
                self.x[j] = 0.0;
            }
        }
        self.basis = Vec::with_capacity(m);
        for i in 0..m {
            let mut resid = self.b[i];
            for j in 0..self.ns {
                if self.x[j] != 0.0 {
                    resid -= self.a[i * self.ns + j] * self.x[j];
                }
            }
            let aux = self.aux_col(i);
            let v = resid * self.aux_sign[i];
            let slack = self.opts.feas_tol * (1.0 + self.b[i].abs());
            if v >= self.lo[aux] - slack && v <= self.hi[aux] + slack {
                self.basis.push(aux);
                self.state[aux] = VarState::Basic;
                self.x[aux] = v;
            } else {
                let art = self.art_col(i);
                self.art_sign[i] = if resid >= 0.0 { 1.0 } else { -1.0 };
                self.art_active[i] = true;
                self.lo[art] = 0.0;
                self.hi[art] = f64::INFINITY;
                self.basis.push(art);
                self.state[art] = VarState::Basic;
                self.x[art] = resid.abs();
                self.state[aux] = VarState::AtLower;
                self.x[aux] = 0.0;
            }
        }
        for i in 0..m {
            for k in 0..m {
                self.binv[i * m + k] = 0.0;
            }
            let sign = if self.art_active[i] {
                self.art_sign[i]
            } else {
                self.aux_sign[i]
            };
            self.binv[i * m + i] = sign;
        }
    }

    pub(super) fn solve_primal_cold(&mut self) -> Result<LpSolution, LpError> {
        self.init_cold();
        if self.art_active.iter().any(|&a| a) {
            self.phase1 = true;
            match self.primal_loop()? {
                LoopExit::Optimal => {}
                LoopExit::IterationLimit => {
                    return Ok(self.extract(SolveStatus::IterationLimit, false));
                }
                LoopExit::Unbounded | LoopExit::Infeasible => {
                    return Err(LpError::Numerical("phase 1 did not converge".into()));
                }
            }
            let infeas: f64 = (0..self.m)
                .filter(|&i| self.art_active[i])
                .map(|i| self.x[self.art_col(i)])
                .sum();
            let b_inf = self.b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if infeas > self.opts.feas_tol * (1.0 + b_inf) * self.m.max(1) as f64 {
                self.phase1 = false;
                return Ok(self.extract(SolveStatus::Infeasible, false));
            }
            self.pivot_out_artificials()?;
            self.retire_artificials();
            self.phase1 = false;
            self.bland = false;
            self.degenerate_streak = 0;
        }
        match self.primal_loop()? {
            LoopExit::Optimal => self.finish_optimal(),
            LoopExit::Unbounded => Ok(self.extract(SolveStatus::Unbounded, false)),
            LoopExit::IterationLimit => Ok(self.extract(SolveStatus::IterationLimit, false)),
            LoopExit::Infeasible => Err(LpError::Numerical("primal loop reported infeasible".into())),
        }
    }

    fn retire_artificials(&mut self) {
        for i in 0..self.m {
            if self.art_active[i] {
                let art = self.art_col(i);
                self.lo[art] = 0.0;
                self.hi[art] = 0.0;
                self.art_active[i] = false;
                if self.state[art] != VarState::Basic {
                    self.state[art] = VarState::AtLower;
                    self.x[art] = 0.0;
                }
            }
        }
    }

    /// Degenerate swaps that remove any artificial still basic after phase 1.
    /// The standardized matrix has full row rank (every row owns a unit
    /// slack column), so a replacement column always exists.
    fn pivot_out_artificials(&mut self) -> Result<(), LpError> {
        let m = self.m;
        for r in 0..m {
            if !self.is_art(self.basis[r]) {
                continue;
            }
            let rho: Vec<f64> = (0..m).map(|k| self.binv[r * m + k]).collect();
            let alpha_of = |w: &Worker<'_>, col: usize| -> f64 {
                if col < w.ns {
                    (0..m).map(|i| rho[i] * w.a[i * w.ns + col]).sum()
                } else {
                    rho[col - w.ns] * w.aux_sign[col - w.ns]
                }
            };
            let mut entering = None;
            let aux = self.aux_col(r);
            if self.state[aux] != VarState::Basic && alpha_of(self, aux).abs() > PIVOT_TOL {
                entering = Some(aux);
            } else {
                for col in 0..self.ns + m {
                    if self.state[col] == VarState::Basic {
                        continue;
                    }
                    if alpha_of(self, col).abs() > PIVOT_TOL {
                        entering = Some(col);
                        break;
                    }
                }
            }
            let col = entering.ok_or(LpError::SingularBasis)?;
            let mut w = vec![0.0; m];
            self.ftran(col, &mut w);
            let leaving = self.basis[r];
            self.x[leaving] = 0.0;
            self.state[leaving] = VarState::AtLower;
            let art_row = leaving - self.ns - m;
            self.lo[leaving] = 0.0;
            self.hi[leaving] = 0.0;
            self.art_active[art_row] = false;
            self.update_basis(r, col, &w);
        }
        Ok(())
    }

    // ---- primal iteration -------------------------------------------------

    fn primal_loop(&mut self) -> Result<LoopExit, LpError> {
        loop {
            if self.iterations >= self.max_iter {
                return Ok(LoopExit::IterationLimit);
            }
            self.maybe_refactor()?;
            let y = self.duals();
            let Some((col, dir)) = self.price_entering(&y) else {
                return Ok(LoopExit::Optimal);
            };
            let mut w = vec![0.0; self.m];
            self.ftran(col, &mut w);
            match self.primal_ratio(col, dir, &w) {
                Ratio::Unbounded => {
                    if self.opts.verbose {
                        eprintln!("simplex: unbounded ray on column {col}");
                    }
                    return Ok(LoopExit::Unbounded);
                }
                Ratio::BoundFlip(step) => {
                    for i in 0..self.m {
                        self.x[self.basis[i]] -= dir * step * w[i];
                    }
                    self.x[col] = if self.state[col] == VarState::AtLower {
                        self.state[col] = VarState::AtUpper;
                        self.hi[col]
                    } else {
                        self.state[col] = VarState::AtLower;
                        self.lo[col]
                    };
                    self.iterations += 1;
                    self.note_step(step);
                }
                Ratio::Pivot { row, step, leaves_at_upper } => {
                    if self.opts.verbose {
                        eprintln!(
                            "simplex: iter {} enter {col} leave {} step {step:.3e}",
                            self.iterations, self.basis[row]
                        );
                    }
                    for i in 0..self.m {
                        self.x[self.basis[i]] -= dir * step * w[i];
                    }
                    self.x[col] += dir * step;
                    let leaving = self.basis[row];
                    if leaves_at_upper {
                        self.x[leaving] = self.hi[leaving];
                        self.state[leaving] = VarState::AtUpper;
                    } else {
                        self.x[leaving] = self.lo[leaving];
                        self.state[leaving] = VarState::AtLower;
                    }
                    if self.is_art(leaving) {
                        self.lo[leaving] = 0.0;
                        self.hi[leaving] = 0.0;
                        self.x[leaving] = 0.0;
                        self.art_active[leaving - self.ns - self.m] = false;
                    }
                    self.update_basis(row, col, &w);
                    self.iterations += 1;
                    self.note_step(step);
                }
            }
        }
    }

    /// Dantzig pricing with a sticky Bland fallback once the degenerate
    /// streak passes the anti-cycling threshold. Returns the entering column
    /// and its direction of motion (+1 increase, -1 decrease).
    fn price_entering(&self, y: &[f64]) -> Option<(usize, f64)> {
        let tol = self.opts.opt_tol;
        let mut best: Option<(usize, f64, f64)> = None;
        for col in 0..self.ns + self.m {
            if self.state[col] == VarState::Basic || self.is_fixed(col) {
                continue;
            }
            let d = self.reduced_cost(y, col);
            let (viol, dir) = match self.state[col] {
                VarState::AtLower => (-d, 1.0),
                VarState::AtUpper => (d, -1.0),
                VarState::FreeAtZero => (d.abs(), if d < 0.0 { 1.0 } else { -1.0 }),
                VarState::Basic => unreachable!(),
            };
            if viol <= tol {
                continue;
            }
            if self.bland {
                return Some((col, dir));
            }
            match best {
                Some((_, bv, _)) if bv >= viol => {}
                _ => best = Some((col, viol, dir)),
            }
        }
        best.map(|(col, _, dir)| (col, dir))
    }

    fn primal_ratio(&self, col: usize, dir: f64, w: &[f64]) -> Ratio {
        let own_range = self.hi[col] - self.lo[col];
        let mut best_step = if own_range.is_finite() { own_range } else { f64::INFINITY };
        let mut best: Option<(usize, bool)> = None;
        for i in 0..self.m {
            let delta = dir * w[i];
            if delta.abs() <= PIVOT_TOL {
                continue;
            }
            let bi = self.basis[i];
            let xi = self.x[bi];
            let (step, leaves_at_upper) = if delta > 0.0 {
                if !self.lo[bi].is_finite() {
                    continue;
                }
                (((xi - self.lo[bi]) / delta).max(0.0), false)
            } else {
                if !self.hi[bi].is_finite() {
                    continue;
                }
                (((xi - self.hi[bi]) / delta).max(0.0), true)
            };
            let better = step < best_step
                || (step == best_step && best.map_or(false, |(r, _)| bi < self.basis[r]));
            if better {
                best_step = step;
                best = Some((i, leaves_at_upper));
            }
        }
        match best {
            Some((row, leaves_at_upper)) => Ratio::Pivot { row, step: best_step, leaves_at_upper },
            None if best_step.is_finite() => Ratio::BoundFlip(best_step),
            None => Ratio::Unbounded,
        }
    }

    // ---- dual iteration ---------------------------------------------------

    pub(super) fn solve_dual_from(&mut self, start: &Basis) -> Result<Option<LpSolution>, LpError> {
        self.basis = start.indices().to_vec();
        for col in 0..self.ns + 2 * self.m {
            self.state[col] = if self.lo[col].is_finite() {
                VarState::AtLower
            } else if self.hi[col].is_finite() {
                VarState::AtUpper
            } else {
                VarState::FreeAtZero
            };
            self.x[col] = match self.state[col] {
                VarState::AtLower => self.lo[col],
                VarState::AtUpper => self.hi[col],
                _ => 0.0,
            };
        }
        for &col in start.indices() {
            self.state[col] = VarState::Basic;
        }
        match self.refactorize() {
            Ok(()) => {}
            Err(LpError::SingularBasis) => return Ok(None),
            Err(e) => return Err(e),
        }
        self.recompute_basics();
        if !self.repair_dual_feasibility() {
            return Ok(None);
        }
        match self.dual_loop()? {
            LoopExit::Optimal => match self.finish_optimal() {
                Ok(sol) => Ok(Some(sol)),
                // Numerical trouble on the warm path falls back to a cold solve.
                Err(LpError::Numerical(_)) | Err(LpError::SingularBasis) => Ok(None),
                Err(e) => Err(e),
            },
            LoopExit::Infeasible => Ok(Some(self.extract(SolveStatus::Infeasible, false))),
            LoopExit::IterationLimit => Ok(Some(self.extract(SolveStatus::IterationLimit, false))),
            LoopExit::Unbounded => Err(LpError::Numerical("dual loop reported unbounded".into())),
        }
    }

    /// Flips nonbasic variables whose reduced cost has the wrong sign onto
    /// their other bound when that bound is finite. Returns false when the
    /// start basis is dual infeasible beyond such repairs.
    fn repair_dual_feasibility(&mut self) -> bool {
        let y = self.duals();
        let tol = self.opts.opt_tol;
        let mut flipped = false;
        for col in 0..self.ns + self.m {
            if self.state[col] == VarState::Basic || self.is_fixed(col) {
                continue;
            }
            let d = self.reduced_cost(&y, col);
            match self.state[col] {
                VarState::AtLower if d < -tol => {
                    if self.hi[col].is_finite() {
                        self.state[col] = VarState::AtUpper;
                        self.x[col] = self.hi[col];
                        flipped = true;
                    } else {
                        return false;
                    }
                }
                VarState::AtUpper if d > tol => {
                    if self.lo[col].is_finite() {
                        self.state[col] = VarState::AtLower;
                        self.x[col] = self.lo[col];
                        flipped = true;
                    } else {
                        return false;
                    }
                }
                VarState::FreeAtZero if d.abs() > tol => return false,
                _ => {}
            }
        }
        if flipped {
            self.recompute_basics();
        }
        true
    }

    fn dual_loop(&mut self) -> Result<LoopExit, LpError> {
        loop {
            if self.iterations >= self.max_iter {
                return Ok(LoopExit::IterationLimit);
            }
            self.maybe_refactor()?;
            let Some((row, below)) = self.select_leaving() else {
                return Ok(LoopExit::Optimal);
            };
            let y = self.duals();
            let m = self.m;
            let rho: Vec<f64> = (0..m).map(|k| self.binv[row * m + k]).collect();
            let mut best: Option<(usize, f64)> = None;
            for col in 0..self.ns + m {
                if self.state[col] == VarState::Basic || self.is_fixed(col) {
                    continue;
                }
                let alpha = if col < self.ns {
                    (0..m).map(|i| rho[i] * self.a[i * self.ns + col]).sum::<f64>()
                } else {
                    rho[col - self.ns] * self.aux_sign[col - self.ns]
                };
                let eligible = match (self.state[col], below) {
                    (VarState::AtLower, true) => alpha < -PIVOT_TOL,
                    (VarState::AtUpper, true) => alpha > PIVOT_TOL,
                    (VarState::AtLower, false) => alpha > PIVOT_TOL,
                    (VarState::AtUpper, false) => alpha < -PIVOT_TOL,
                    (VarState::FreeAtZero, _) => alpha.abs() > PIVOT_TOL,
                    (VarState::Basic, _) => unreachable!(),
                };
                if !eligible {
                    continue;
                }
                let ratio = self.reduced_cost(&y, col) / alpha;
                let better = match best {
                    None => true,
                    // Below-lower ratios are <= 0 and we want the largest;
                    // above-upper ratios are >= 0 and we want the smallest.
                    Some((_, br)) => {
                        if below {
                            ratio > br
                        } else {
                            ratio < br
                        }
                    }
                };
                if better {
                    best = Some((col, ratio));
                }
            }
            let Some((col, _)) = best else {
                return Ok(LoopExit::Infeasible);
            };
            let mut w = vec![0.0; m];
            self.ftran(col, &mut w);
            if w[row].abs() <= PIVOT_TOL {
                return Err(LpError::Numerical("dual pivot vanished".into()));
            }
            let leaving = self.basis[row];
            let target = if below { self.lo[leaving] } else { self.hi[leaving] };
            let delta = (self.x[leaving] - target) / w[row];
            let dual_step = self.reduced_cost(&y, col).abs();
            for i in 0..m {
                if i != row {
                    self.x[self.basis[i]] -= delta * w[i];
                }
            }
            self.x[col] += delta;
            self.x[leaving] = target;
            self.state[leaving] = if below { VarState::AtLower } else { VarState::AtUpper };
            if self.opts.verbose {
                eprintln!(
                    "dual simplex: iter {} enter {col} leave {leaving} delta {delta:.3e}",
                    self.iterations
                );
            }
            self.update_basis(row, col, &w);
            self.iterations += 1;
            self.note_step(dual_step);
        }
    }

    /// Most-violated basic variable, or smallest-index in Bland mode.
    /// Returns the row and whether the violation is below the lower bound.
    fn select_leaving(&self) -> Option<(usize, bool)> {
        let tol = self.opts.feas_tol;
        let mut best: Option<(usize, bool, f64)> = None;
        for i in 0..self.m {
            let bi = self.basis[i];
            let xi = self.x[bi];
            let scale = 1.0 + xi.abs();
            let (viol, below) = if self.lo[bi].is_finite() && xi < self.lo[bi] - tol * scale {
                (self.lo[bi] - xi, true)
            } else if self.hi[bi].is_finite() && xi > self.hi[bi] + tol * scale {
                (xi - self.hi[bi], false)
            } else {
                continue;
            };
            if self.bland {
                match best {
                    Some((r, _, _)) if self.basis[r] <= bi => {}
                    _ => best = Some((i, below, viol)),
                }
            } else {
                match best {
                    Some((r, _, bv)) if bv > viol || (bv == viol && self.basis[r] < bi) => {}
                    _ => best = Some((i, below, viol)),
                }
            }
        }
        best.map(|(row, below, _)| (row, below))
    }

    // ---- verification and extraction --------------------------------------

    fn finish_optimal(&mut self) -> Result<LpSolution, LpError> {
        for attempt in 0..3 {
            match self.verify() {
                Verify::Ok => return Ok(self.extract(SolveStatus::Optimal, true)),
                Verify::PrimalViolation if attempt < 2 => {
                    self.refactorize()?;
                    self.recompute_basics();
                    match self.dual_loop()? {
                        LoopExit::Optimal => {}
                        LoopExit::IterationLimit => {
                            return Ok(self.extract(SolveStatus::IterationLimit, false))
                        }
                        _ => return Err(LpError::Numerical("cleanup dual loop failed".into())),
                    }
                }
                Verify::DualViolation if attempt < 2 => {
                    self.refactorize()?;
                    self.recompute_basics();
                    match self.primal_loop()? {
                        LoopExit::Optimal => {}
                        LoopExit::IterationLimit => {
                            return Ok(self.extract(SolveStatus::IterationLimit, false))
                        }
                        _ => return Err(LpError::Numerical("cleanup primal loop failed".into())),
                    }
                }
                _ => break,
            }
        }
        Err(LpError::Numerical("optimality certificates failed to settle".into()))
    }

    fn verify(&self) -> Verify {
        let m = self.m;
        for i in 0..m {
            let mut lhs = 0.0;
            for j in 0..self.ns {
                if self.x[j] != 0.0 {
                    lhs += self.a[i * self.ns + j] * self.x[j];
                }
            }
            lhs += self.aux_sign[i] * self.x[self.aux_col(i)];
            lhs += self.art_sign[i] * self.x[self.art_col(i)];
            if (lhs - self.b[i]).abs() > self.opts.feas_tol * (1.0 + self.b[i].abs()) {
                return Verify::PrimalViolation;
            }
        }
        for col in 0..self.ns + 2 * m {
            let x = self.x[col];
            let slack = self.opts.feas_tol * (1.0 + x.abs());
            if x < self.lo[col] - slack || x > self.hi[col] + slack {
                return Verify::PrimalViolation;
            }
        }
        let y = self.duals();
        let mut dual_obj = y.iter().zip(&self.b).map(|(yi, bi)| yi * bi).sum::<f64>();
        for col in 0..self.ns + m {
            if self.state[col] == VarState::Basic {
                continue;
            }
            let d = self.reduced_cost(&y, col);
            let tol = self.opts.opt_tol * (1.0 + self.phase_cost(col).abs());
            let bad = match self.state[col] {
                VarState::AtLower => !self.is_fixed(col) && d < -tol,
                VarState::AtUpper => !self.is_fixed(col) && d > tol,
                VarState::FreeAtZero => d.abs() > tol,
                VarState::Basic => false,
            };
            if bad {
                return Verify::DualViolation;
            }
            if self.x[col] != 0.0 {
                dual_obj += d * self.x[col];
            }
        }
        let primal_obj: f64 = (0..self.ns).map(|j| self.cost[j] * self.x[j]).sum();
        if (primal_obj - dual_obj).abs() > self.opts.gap_tol * (1.0 + primal_obj.abs()) {
            return Verify::PrimalViolation;
        }
        Verify::Ok
    }

    fn extract(&self, status: SolveStatus, assert_clean: bool) -> LpSolution {
        let objective: f64 = (0..self.ns).map(|j| self.cost[j] * self.x[j]).sum();
        let y = self.duals();
        let row_multipliers: Vec<f64> =
            (0..self.m).map(|i| y[i] * self.row_scale[i]).collect();
        if assert_clean {
            debug_assert!(
                self.basis.iter().all(|&c| c < self.ns + self.m),
                "artificial column left in an optimal basis"
            );
        }
        LpSolution {
            status,
            objective,
            primal_values: self.x[..self.ns].to_vec(),
            row_multipliers,
            basis: Basis::new(self.basis.clone()),
            iterations: self.iterations,
            warmstart_fallback: false,
        }
    }
}

enum Ratio {
    Pivot { row: usize, step: f64, leaves_at_upper: bool },
    BoundFlip(f64),
    Unbounded,
}

enum Verify {
    Ok,
    PrimalViolation,
    DualViolation,
}

#[cfg(test)]
mod tests {
    use super::super::{solve_dual_warmstart, solve_primal};
    use super::*;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn single_active_bound() {
        // minimize x subject to x >= 1.
        let lp = LinearProgram::new(
            vec![1.0],
            vec![vec![1.0]],
            vec![ConstraintSense::Ge],
            vec![1.0],
        )
        .unwrap();
        let sol = solve_primal(&lp, &opts()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-12);
        assert!((sol.primal_values[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_ray() {
        // minimize -x with x >= 0 and no constraints.
        let lp = LinearProgram::new(vec![-1.0], vec![], vec![], vec![]).unwrap();
        let sol = solve_primal(&lp, &opts()).unwrap();
        assert_eq!(sol.status, SolveStatus::Unbounded);
    }

    #[test]
    fn lone_dmu_is_self_efficient() {
        // minimize theta s.t. lambda <= theta, 2 lambda >= 2.
        let lp = LinearProgram::new(
            vec![1.0, 0.0],
            vec![vec![-1.0, 1.0], vec![0.0, 2.0]],
            vec![ConstraintSense::Le, ConstraintSense::Ge],
            vec![0.0, 2.0],
        )
        .unwrap();
        let sol = solve_primal(&lp, &opts()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-9);
        assert!((sol.primal_values[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        // x <= -1 with x >= 0.
        let lp = LinearProgram::new(
            vec![1.0],
            vec![vec![1.0]],
            vec![ConstraintSense::Le],
            vec![-1.0],
        )
        .unwrap();
        let sol = solve_primal(&lp, &opts()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
    }

    #[test]
    fn equality_row_solved() {
        // minimize x + y s.t. x + y = 2, x - y <= 0.
        let lp = LinearProgram::new(
            vec![1.0, 1.0],
            vec![vec![1.0, 1.0], vec![1.0, -1.0]],
            vec![ConstraintSense::Eq, ConstraintSense::Le],
            vec![2.0, 0.0],
        )
        .unwrap();
        let sol = solve_primal(&lp, &opts()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 2.0).abs() < 1e-9);
    }

    #[test]
    fn resolve_with_own_basis_takes_no_pivots() {
        let lp = LinearProgram::new(
            vec![1.0, 0.0],
            vec![vec![-1.0, 1.0], vec![0.0, 2.0]],
            vec![ConstraintSense::Le, ConstraintSense::Ge],
            vec![0.0, 2.0],
        )
        .unwrap();
        let cold = solve_primal(&lp, &opts()).unwrap();
        let warm = solve_dual_warmstart(&lp, &cold.basis, &opts()).unwrap();
        assert_eq!(warm.status, SolveStatus::Optimal);
        assert_eq!(warm.iterations, 0);
        assert!(!warm.warmstart_fallback);
        assert!((warm.objective - cold.objective).abs() < 1e-12);
    }

    #[test]
    fn free_variable_handled() {
        // minimize y s.t. y >= x - 1, y >= -x + 1 with x free: optimum 0 at x=1.
        let mut lp = LinearProgram::new(
            vec![0.0, 1.0],
            vec![vec![-1.0, 1.0], vec![1.0, 1.0]],
            vec![ConstraintSense::Ge, ConstraintSense::Ge],
            vec![-1.0, 1.0],
        )
        .unwrap();
        lp.mark_free(0);
        let sol = solve_primal(&lp, &opts()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!(sol.objective.abs() < 1e-9);
        assert!((sol.primal_values[0] - 1.0).abs() < 1e-9);
    }
}
