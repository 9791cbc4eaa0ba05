//! Bounded dual simplex on a factorized basis.
//!
//! The variables are the structurals `0 <= x_j <= upper_j` and one activity
//! `y_i` per row with `lo_i <= y_i <= hi_i`, tied together by `A x - y = 0`.
//! Rows with one infinite side are boxed by the range their activity spans,
//! so every variable is bounded and any basis is made dual feasible by
//! moving nonbasics to the bound their reduced cost prefers. One dual
//! simplex therefore serves cold starts and the bound changes made by
//! branch-and-bound, which restart from the parent's basis.

use std::time::Instant;

use super::factor::{Column, Factor};

const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const VERIFY_TOL: f64 = 1e-7;
const REFACTOR_EVERY: usize = 100;
/// Consecutive dual degenerate pivots before switching to Bland's rule.
const DEGENERATE_RUN: usize = 50;
const CUTOFF_TOL: f64 = 1e-7;
/// Violation that brings a row into the working model.
const ACTIVATE_TOL: f64 = 1e-8;
const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LpRow {
    pub terms: Vec<(usize, f64)>,
    pub lo: f64,
    pub hi: f64,
}

/// `maximize costs·x` subject to `lo <= a·x <= hi` per row and
/// `0 <= x_j <= upper_j` with every `upper_j` finite.
#[derive(Debug, Clone, Default)]
pub(crate) struct LpModel {
    pub costs: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<LpRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RawStatus {
    Optimal,
    Infeasible,
    Numerical,
    TimedOut,
    /// The objective bound fell to the cutoff before optimality.
    Cutoff,
}

#[derive(Debug, Clone)]
pub(crate) struct LpOutcome {
    pub status: RawStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

/// Basis and nonbasic bound choices, enough to restart a solve.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Basis {
    basic: Vec<usize>,
    at_upper: Vec<bool>,
}

/// Rows are brought into the basis lazily: a solve works on the rows found
/// violated so far and adds any others its optimum violates, then resumes.
#[derive(Debug, Clone)]
pub(crate) struct DualSimplex {
    n: usize,
    /// Rows in the working model.
    m: usize,
    /// Every row of the model with duplicate terms merged.
    pool: Vec<LpRow>,
    active: Vec<bool>,
    /// Structural columns over the working rows.
    cols: Vec<Column>,
    /// Activity columns `-e_i`.
    unit: Vec<(usize, f64)>,
    /// Structural entries of each working row.
    rows: Vec<Vec<(usize, f64)>>,
    /// Minimization costs over structurals then activities.
    cost: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    basic: Vec<usize>,
    pos: Vec<usize>,
    at_upper: Vec<bool>,
    x: Vec<f64>,
    d: Vec<f64>,
    /// Dual devex reference weights per basis position.
    weight: Vec<f64>,
    factor: Factor,
    /// Solves stop once the objective bound is below this.
    cutoff: f64,
    pub iterations: usize,
}

impl DualSimplex {
    pub fn new(model: &LpModel) -> Self {
        let n = model.costs.len();
        debug_assert!(model.upper.iter().all(|u| u.is_finite() && *u >= 0.0));
        let pool = model
            .rows
            .iter()
            .map(|row| {
                let mut terms: Vec<(usize, f64)> = Vec::with_capacity(row.terms.len());
                for &(j, a) in &row.terms {
                    match terms.iter_mut().find(|e| e.0 == j) {
                        Some(e) => e.1 += a,
                        None => terms.push((j, a)),
                    }
                }
                terms.retain(|e| e.1 != 0.0);
                // a one-sided row is boxed by the range its activity spans
                let (mut lo, mut hi) = (0.0, 0.0);
                for &(j, a) in &terms {
                    lo += (a * model.upper[j]).min(0.0);
                    hi += (a * model.upper[j]).max(0.0);
                }
                LpRow { terms, lo: row.lo.max(lo - 1.0), hi: row.hi.min(hi + 1.0) }
            })
            .collect();
        let cost: Vec<f64> = model.costs.iter().map(|c| -c).collect();
        let at_upper: Vec<bool> = cost.iter().map(|&c| c < 0.0).collect();
        let mut lp = DualSimplex {
            n,
            m: 0,
            pool,
            active: vec![false; model.rows.len()],
            cols: vec![Vec::new(); n],
            unit: Vec::new(),
            rows: Vec::new(),
            cost,
            lo: vec![0.0; n],
            hi: model.upper.clone(),
            basic: Vec::new(),
            pos: vec![NONE; n],
            at_upper,
            x: vec![0.0; n],
            d: vec![0.0; n],
            weight: Vec::new(),
            factor: Factor::default(),
            cutoff: f64::NEG_INFINITY,
            iterations: 0,
        };
        for j in 0..n {
            lp.x[j] = lp.nonbasic_value(j);
        }
        lp.activate_violated();
        lp
    }

    /// Adds the rows violated by the current structural values as basic
    /// activities. Returns whether any were added.
    fn activate_violated(&mut self) -> bool {
        let before = self.m;
        for g in 0..self.pool.len() {
            if self.active[g] {
                continue;
            }
            let row = &self.pool[g];
            let act: f64 = row.terms.iter().map(|&(j, a)| a * self.x[j]).sum();
            if act >= row.lo - ACTIVATE_TOL && act <= row.hi + ACTIVATE_TOL {
                continue;
            }
            self.active[g] = true;
            let i = self.m;
            for &(j, a) in &row.terms {
                self.cols[j].push((i, a));
            }
            self.rows.push(row.terms.clone());
            self.unit.push((i, -1.0));
            self.cost.push(0.0);
            self.lo.push(row.lo);
            self.hi.push(row.hi);
            self.basic.push(self.n + i);
            self.pos.push(i);
            self.at_upper.push(false);
            self.x.push(act);
            self.d.push(0.0);
            self.weight.push(1.0);
            self.m += 1;
        }
        self.m > before
    }

    pub fn snapshot(&self) -> Basis {
        Basis { basic: self.basic.clone(), at_upper: self.at_upper.clone() }
    }

    /// Restores a basis taken by `snapshot`; rows activated since then
    /// join it with basic activities.
    pub fn restore(&mut self, basis: &Basis) {
        let known = basis.basic.len();
        self.basic.clear();
        self.basic.extend_from_slice(&basis.basic);
        self.basic.extend((known..self.m).map(|i| self.n + i));
        self.at_upper[..self.n + known].copy_from_slice(&basis.at_upper);
        self.at_upper[self.n + known..].iter_mut().for_each(|u| *u = false);
        self.pos.iter_mut().for_each(|p| *p = NONE);
        for (p, &v) in self.basic.iter().enumerate() {
            self.pos[v] = p;
        }
    }

    /// Returns to the all-activity basis with structurals at the bounds
    /// their costs prefer.
    pub fn reset(&mut self) {
        self.basic.clear();
        self.basic.extend((0..self.m).map(|i| self.n + i));
        self.pos.iter_mut().for_each(|p| *p = NONE);
        for i in 0..self.m {
            self.pos[self.n + i] = i;
        }
        for j in 0..self.n + self.m {
            self.at_upper[j] = j < self.n && self.cost[j] < 0.0;
        }
        self.weight.iter_mut().for_each(|w| *w = 1.0);
    }

    /// Stops later solves as soon as the maximization objective is known
    /// to end below `level`.
    pub fn set_cutoff(&mut self, level: f64) {
        self.cutoff = level;
    }

    /// Sets the bounds of structural `j`.
    pub fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        debug_assert!(j < self.n && lo <= hi);
        self.lo[j] = lo;
        self.hi[j] = hi;
    }

    fn column(&self, j: usize) -> &[(usize, f64)] {
        if j < self.n {
            &self.cols[j]
        } else {
            std::slice::from_ref(&self.unit[j - self.n])
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        if self.lo[j] == self.hi[j] || !self.at_upper[j] {
            self.lo[j]
        } else {
            self.hi[j]
        }
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.hi[j] - self.lo[j] <= 0.0
    }

    /// Factorizes the basis, swapping in activities for any dependent
    /// columns.
    fn refactor(&mut self) {
        loop {
            let columns: Vec<&[(usize, f64)]> = self.basic.iter().map(|&v| self.column(v)).collect();
            match Factor::factorize(self.m, &columns) {
                Ok(f) => {
                    self.factor = f;
                    return;
                }
                Err(singular) => {
                    for (&p, &i) in singular.positions.iter().zip(&singular.rows) {
                        let out = self.basic[p];
                        let slack = self.n + i;
                        self.pos[out] = NONE;
                        self.at_upper[out] = self.hi[out].is_finite()
                            && (!self.lo[out].is_finite() || self.x[out] - self.lo[out] > self.hi[out] - self.x[out]);
                        self.basic[p] = slack;
                        self.pos[slack] = p;
                    }
                    self.weight.iter_mut().for_each(|w| *w = 1.0);
                }
            }
        }
    }

    fn recompute_primal(&mut self) {
        let mut b = vec![0.0; self.m];
        for j in 0..self.n + self.m {
            if self.pos[j] != NONE {
                continue;
            }
            let v = self.nonbasic_value(j);
            self.x[j] = v;
            if v == 0.0 {
                continue;
            }
            if j < self.n {
                for &(i, a) in &self.cols[j] {
                    b[i] -= a * v;
                }
            } else {
                b[j - self.n] += v;
            }
        }
        self.factor.ftran(&mut b);
        for (p, &v) in self.basic.iter().enumerate() {
            self.x[v] = b[p];
        }
    }

    fn recompute_dual(&mut self) {
        let mut y: Vec<f64> = self.basic.iter().map(|&v| self.cost[v]).collect();
        self.factor.btran(&mut y);
        for j in 0..self.n + self.m {
            self.d[j] = if self.pos[j] != NONE {
                0.0
            } else if j < self.n {
                self.cost[j] - self.cols[j].iter().map(|&(i, a)| y[i] * a).sum::<f64>()
            } else {
                y[j - self.n]
            };
        }
    }

    /// Moves nonbasic variables to the bound their reduced cost prefers.
    fn restore_dual_feasibility(&mut self) {
        for j in 0..self.n + self.m {
            if self.pos[j] == NONE && !self.is_fixed(j) {
                if self.d[j] < -DUAL_TOL {
                    self.at_upper[j] = true;
                } else if self.d[j] > DUAL_TOL {
                    self.at_upper[j] = false;
                }
            }
        }
    }

    /// Fresh factorization and solution vectors.
    fn reinvert(&mut self) {
        self.refactor();
        self.recompute_dual();
        self.restore_dual_feasibility();
        self.recompute_primal();
    }

    fn infeasibility(&self, p: usize) -> f64 {
        let v = self.basic[p];
        let x = self.x[v];
        if x < self.lo[v] - PRIMAL_TOL {
            self.lo[v] - x
        } else if x > self.hi[v] + PRIMAL_TOL {
            x - self.hi[v]
        } else {
            0.0
        }
    }

    fn choose_leaving(&self, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for p in 0..self.m {
            let inf = self.infeasibility(p);
            if inf == 0.0 {
                continue;
            }
            let better = if bland {
                best.is_none_or(|(b, _)| self.basic[p] < self.basic[b])
            } else {
                let score = inf * inf / self.weight[p];
                best.is_none_or(|(_, s)| score > s)
            };
            if better {
                best = Some((p, inf * inf / self.weight[p]));
            }
        }
        best.map(|(p, _)| p)
    }

    /// Row `r` of `B^-1 [A -I]` over the nonbasic variables, as a dense
    /// vector plus the indices that may be nonzero.
    fn pivot_row(&mut self, r: usize, rho: &mut Vec<f64>, alpha: &mut [f64], touched: &mut Vec<usize>) {
        rho.clear();
        rho.resize(self.m, 0.0);
        rho[r] = 1.0;
        self.factor.btran(rho);
        for &j in touched.iter() {
            alpha[j] = 0.0;
        }
        touched.clear();
        for (i, &ri) in rho.iter().enumerate() {
            if ri == 0.0 {
                continue;
            }
            for &(j, a) in &self.rows[i] {
                if alpha[j] == 0.0 {
                    // marks the entry as listed even if the sum cancels
                    touched.push(j);
                    alpha[j] = f64::MIN_POSITIVE;
                }
                alpha[j] += ri * a;
            }
            let s = self.n + i;
            alpha[s] = -ri;
            touched.push(s);
        }
    }

    /// Dual ratio test with bound flipping. `rising` is whether the
    /// leaving variable has to increase to reach its violated bound, by
    /// `infeasibility`. Boxed candidates whose breakpoints can be passed
    /// without reversing the dual slope are collected in `flips`; the
    /// returned variable enters the basis.
    fn choose_entering(
        &self,
        alpha: &[f64],
        touched: &[usize],
        rising: bool,
        infeasibility: f64,
        bland: bool,
        flips: &mut Vec<usize>,
    ) -> Option<usize> {
        flips.clear();
        let sign = if rising { 1.0 } else { -1.0 };
        let mut cands: Vec<(f64, usize, f64)> = touched
            .iter()
            .filter_map(|&j| {
                if self.pos[j] != NONE || self.is_fixed(j) {
                    return None;
                }
                let a = alpha[j];
                if a.abs() <= PIVOT_TOL {
                    return None;
                }
                let dir = if self.at_upper[j] { -1.0 } else { 1.0 };
                if sign * -a * dir <= 0.0 {
                    return None;
                }
                let slack = if self.at_upper[j] { -self.d[j] } else { self.d[j] };
                Some((slack.max(0.0) / a.abs(), j, a.abs()))
            })
            .collect();
        if cands.is_empty() {
            return None;
        }
        if bland {
            return cands.iter().min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1))).map(|c| c.1);
        }
        cands.sort_unstable_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let mut slope = infeasibility;
        let mut k = 0;
        while k + 1 < cands.len() {
            let (_, j, a) = cands[k];
            let range = self.hi[j] - self.lo[j];
            if !range.is_finite() || slope - a * range <= 0.0 {
                break;
            }
            slope -= a * range;
            flips.push(j);
            k += 1;
        }
        // Harris pass over the breakpoints close to the stopping one
        let limit = cands[k].0 + DUAL_TOL / cands[k].2;
        let mut best = k;
        for (t, c) in cands.iter().enumerate().skip(k + 1) {
            if c.0 > limit {
                break;
            }
            if c.2 > cands[best].2 {
                best = t;
            }
        }
        Some(cands[best].1)
    }

    pub fn solve(&mut self, deadline: Option<Instant>) -> RawStatus {
        loop {
            let status = self.run(deadline);
            if status != RawStatus::Optimal || !self.activate_violated() {
                return status;
            }
        }
    }

    /// Dual simplex over the working rows.
    fn run(&mut self, deadline: Option<Instant>) -> RawStatus {
        self.reinvert();
        let mut alpha = vec![0.0; self.n + self.m];
        let mut touched: Vec<usize> = Vec::new();
        let mut flips: Vec<usize> = Vec::new();
        let mut rho = Vec::with_capacity(self.m);
        let mut col = Vec::with_capacity(self.m);
        let mut shift = Vec::with_capacity(self.m);
        let mut degenerate = 0;
        let mut suspicious = false;
        let cap = 20 * (self.n + self.m) + 10_000;
        let start = self.iterations;
        loop {
            if self.iterations - start >= cap {
                return RawStatus::Numerical;
            }
            if self.factor.updates() >= REFACTOR_EVERY {
                self.reinvert();
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    return RawStatus::TimedOut;
                }
            }
            if self.cutoff > f64::NEG_INFINITY {
                // with the reduced costs dual feasible this bounds the optimum
                let bound: f64 = -(0..self.n).map(|j| self.cost[j] * self.x[j]).sum::<f64>();
                if bound < self.cutoff - CUTOFF_TOL * (1.0 + self.cutoff.abs()) {
                    return RawStatus::Cutoff;
                }
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let Some(r) = self.choose_leaving(bland) else {
                return RawStatus::Optimal;
            };
            self.pivot_row(r, &mut rho, &mut alpha, &mut touched);
            let leaving = self.basic[r];
            let rising = self.x[leaving] < self.lo[leaving];
            let infeasibility = self.infeasibility(r);
            let Some(q) = self.choose_entering(&alpha, &touched, rising, infeasibility, bland, &mut flips) else {
                if self.factor.updates() > 0 || !suspicious {
                    // confirm on a fresh factorization before giving up
                    suspicious = true;
                    self.reinvert();
                    continue;
                }
                return RawStatus::Infeasible;
            };

            col.clear();
            col.resize(self.m, 0.0);
            for &(i, a) in self.column(q) {
                col[i] = a;
            }
            self.factor.ftran_entering(&mut col);
            let piv = col[r];
            if piv.abs() <= PIVOT_TOL || (piv - alpha[q]).abs() > 1e-6 * (1.0 + piv.abs()) {
                if self.factor.updates() == 0 {
                    return RawStatus::Numerical;
                }
                self.reinvert();
                continue;
            }
            suspicious = false;
            self.iterations += 1;

            let theta = self.d[q] / piv;
            for &j in &touched {
                if self.pos[j] == NONE && alpha[j] != 0.0 {
                    self.d[j] -= theta * alpha[j];
                }
            }
            self.d[q] = 0.0;
            self.d[leaving] = -theta;
            if theta.abs() <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }

            if !flips.is_empty() {
                shift.clear();
                shift.resize(self.m, 0.0);
                for &j in &flips {
                    let delta = if self.at_upper[j] { self.lo[j] - self.hi[j] } else { self.hi[j] - self.lo[j] };
                    self.at_upper[j] = !self.at_upper[j];
                    self.x[j] += delta;
                    if j < self.n {
                        for &(i, a) in &self.cols[j] {
                            shift[i] -= a * delta;
                        }
                    } else {
                        shift[j - self.n] += delta;
                    }
                }
                self.factor.ftran(&mut shift);
                for (p, &v) in shift.iter().enumerate() {
                    if v != 0.0 {
                        self.x[self.basic[p]] += v;
                    }
                }
            }
            let target = if rising { self.lo[leaving] } else { self.hi[leaving] };
            let step = (self.x[leaving] - target) / piv;
            self.x[q] += step;
            for (p, &c) in col.iter().enumerate() {
                if c != 0.0 {
                    self.x[self.basic[p]] -= c * step;
                }
            }
            self.x[leaving] = target;

            let wr = self.weight[r];
            for (p, &c) in col.iter().enumerate() {
                if p != r && c != 0.0 {
                    let ratio = c / piv;
                    self.weight[p] = self.weight[p].max(ratio * ratio * wr);
                }
            }
            self.weight[r] = (wr / (piv * piv)).max(1.0);

            let stable = self.factor.update(r);
            self.basic[r] = q;
            self.pos[q] = r;
            self.pos[leaving] = NONE;
            self.at_upper[leaving] = !rising && self.lo[leaving] != self.hi[leaving];
            if !stable {
                self.reinvert();
            }
        }
    }

    /// Structural values of the current basis, checked against the model.
    pub fn outcome(&mut self, model: &LpModel, status: RawStatus) -> LpOutcome {
        let n = self.n;
        let iterations = self.iterations;
        let fail = |status| LpOutcome { status, x: vec![0.0; n], objective: 0.0, iterations };
        if status != RawStatus::Optimal {
            return fail(status);
        }
        self.refactor();
        self.recompute_primal();
        let mut x = self.x[..n].to_vec();
        for (j, xj) in x.iter_mut().enumerate() {
            if *xj < self.lo[j] - VERIFY_TOL || *xj > self.hi[j] + VERIFY_TOL {
                return fail(RawStatus::Numerical);
            }
            *xj = xj.clamp(self.lo[j], self.hi[j]);
        }
        for r in &model.rows {
            let act: f64 = r.terms.iter().map(|&(j, a)| a * x[j]).sum();
            if act < r.lo - VERIFY_TOL || act > r.hi + VERIFY_TOL {
                return fail(RawStatus::Numerical);
            }
        }
        let objective = model.costs.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpOutcome { status: RawStatus::Optimal, x, objective, iterations: self.iterations }
    }
}

pub(crate) fn simplex(model: &LpModel, deadline: Option<Instant>) -> LpOutcome {
    for r in &model.rows {
        if r.lo > r.hi + PRIMAL_TOL {
            return LpOutcome { status: RawStatus::Infeasible, x: vec![0.0; model.costs.len()], objective: 0.0, iterations: 0 };
        }
    }
    let mut lp = DualSimplex::new(model);
    let status = lp.solve(deadline);
    lp.outcome(model, status)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(terms: &[(usize, f64)], lo: f64, hi: f64) -> LpRow {
        LpRow { terms: terms.to_vec(), lo, hi }
    }

    #[test]
    fn small_maximization() {
        // max 3x + 2y, x + y <= 1.5, x - y >= -0.5
        let model = LpModel {
            costs: vec![3.0, 2.0],
            upper: vec![1.0, 1.0],
            rows: vec![row(&[(0, 1.0), (1, 1.0)], f64::NEG_INFINITY, 1.5), row(&[(0, 1.0), (1, -1.0)], -0.5, f64::INFINITY)],
        };
        let out = simplex(&model, None);
        assert_eq!(out.status, RawStatus::Optimal);
        assert!((out.objective - 4.0).abs() < 1e-9, "{out:?}");
        assert!((out.x[0] - 1.0).abs() < 1e-9 && (out.x[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn reaches_equalities() {
        // min x + y (as max -x - y) with x + y = 1.2, y >= 0.7
        let model = LpModel {
            costs: vec![-1.0, -1.0],
            upper: vec![1.0, 1.0],
            rows: vec![row(&[(0, 1.0), (1, 1.0)], 1.2, 1.2), row(&[(1, 1.0)], 0.7, f64::INFINITY)],
        };
        let out = simplex(&model, None);
        assert_eq!(out.status, RawStatus::Optimal);
        assert!((out.objective + 1.2).abs() < 1e-9);
        assert!(out.x[1] >= 0.7 - 1e-9);
    }

    #[test]
    fn detects_infeasibility() {
        let model =
            LpModel { costs: vec![1.0, 1.0], upper: vec![1.0, 1.0], rows: vec![row(&[(0, 1.0), (1, 1.0)], 2.5, f64::INFINITY)] };
        assert_eq!(simplex(&model, None).status, RawStatus::Infeasible);
    }

    #[test]
    fn warm_start_after_bound_change() {
        // max x + y + z, x + y + z <= 2, x + y <= 1.5
        let model = LpModel {
            costs: vec![1.0, 1.0, 1.0],
            upper: vec![1.0, 1.0, 1.0],
            rows: vec![
                row(&[(0, 1.0), (1, 1.0), (2, 1.0)], f64::NEG_INFINITY, 2.0),
                row(&[(0, 1.0), (1, 1.0)], f64::NEG_INFINITY, 1.5),
            ],
        };
        let mut lp = DualSimplex::new(&model);
        assert_eq!(lp.solve(None), RawStatus::Optimal);
        let basis = lp.snapshot();
        lp.set_bounds(2, 0.0, 0.0);
        let out = {
            let s = lp.solve(None);
            lp.outcome(&model, s)
        };
        assert_eq!(out.status, RawStatus::Optimal);
        assert!((out.objective - 1.5).abs() < 1e-9, "{out:?}");
        lp.restore(&basis);
        lp.set_bounds(2, 0.0, 1.0);
        lp.set_bounds(0, 1.0, 1.0);
        lp.set_bounds(1, 1.0, 1.0);
        assert_eq!(lp.solve(None), RawStatus::Infeasible);
    }
}
