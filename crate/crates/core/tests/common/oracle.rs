//! Depth-first implicit enumeration over 0/1 assignments with bound
//! propagation, used to derive expected optima independently of the
//! simplex-based solver.

use tableqa::ilp::{IlpProblem, Sense, VarKind};

pub struct Optimum {
    pub objective: f64,
    pub values: Vec<bool>,
}

const EPS: f64 = 1e-9;

struct Row {
    terms: Vec<(usize, f64)>,
    lo: f64,
    hi: f64,
    /// Activity of variables fixed to 1.
    fixed: f64,
    /// Sums of positive and negative coefficients of free variables.
    free_pos: f64,
    free_neg: f64,
}

impl Row {
    fn min(&self) -> f64 {
        self.fixed + self.free_neg
    }

    fn max(&self) -> f64 {
        self.fixed + self.free_pos
    }

    fn satisfiable(&self) -> bool {
        self.min() <= self.hi + EPS && self.max() >= self.lo - EPS
    }

    /// Value a free variable is forced to, if any.
    fn forces(&self, a: f64) -> Option<bool> {
        let (min_if_on, max_if_on, min_if_off, max_if_off) = if a > 0.0 {
            (self.min() + a, self.max(), self.min(), self.max() - a)
        } else {
            (self.min(), self.max() + a, self.min() - a, self.max())
        };
        let on_ok = min_if_on <= self.hi + EPS && max_if_on >= self.lo - EPS;
        let off_ok = min_if_off <= self.hi + EPS && max_if_off >= self.lo - EPS;
        match (on_ok, off_ok) {
            (true, false) => Some(true),
            (false, true) => Some(false),
            _ => None,
        }
    }
}

struct Search<'a> {
    problem: &'a IlpProblem,
    costs: Vec<f64>,
    order: Vec<usize>,
    incidence: Vec<Vec<(usize, f64)>>,
    rows: Vec<Row>,
    state: Vec<Option<bool>>,
    trail: Vec<usize>,
    fixed_obj: f64,
    free_gain: f64,
    best: Option<Optimum>,
}

impl Search<'_> {
    fn set(&mut self, j: usize, on: bool) {
        let c = self.costs[j];
        if c > 0.0 {
            self.free_gain -= c;
        }
        if on {
            self.fixed_obj += c;
        }
        self.state[j] = Some(on);
        self.trail.push(j);
        for &(r, a) in &self.incidence[j] {
            let row = &mut self.rows[r];
            if a > 0.0 {
                row.free_pos -= a;
            } else {
                row.free_neg -= a;
            }
            if on {
                row.fixed += a;
            }
        }
    }

    fn unset(&mut self, j: usize) {
        let on = self.state[j].take().unwrap();
        let c = self.costs[j];
        if c > 0.0 {
            self.free_gain += c;
        }
        if on {
            self.fixed_obj -= c;
        }
        for &(r, a) in &self.incidence[j] {
            let row = &mut self.rows[r];
            if a > 0.0 {
                row.free_pos += a;
            } else {
                row.free_neg += a;
            }
            if on {
                row.fixed -= a;
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let j = self.trail.pop().unwrap();
            self.unset(j);
        }
    }

    /// Assigns and propagates; false on a conflict.
    fn assign(&mut self, j: usize, on: bool) -> bool {
        let mut queue = vec![(j, on)];
        while let Some((j, on)) = queue.pop() {
            match self.state[j] {
                Some(v) if v == on => continue,
                Some(_) => return false,
                None => {}
            }
            self.set(j, on);
            for k in 0..self.incidence[j].len() {
                let r = self.incidence[j][k].0;
                let row = &self.rows[r];
                if !row.satisfiable() {
                    return false;
                }
                for &(v, a) in &row.terms {
                    if self.state[v].is_none() {
                        if let Some(val) = row.forces(a) {
                            queue.push((v, val));
                        }
                    }
                }
            }
        }
        true
    }

    fn dfs(&mut self, depth: usize) {
        if let Some(b) = &self.best {
            if self.fixed_obj + self.free_gain <= b.objective + 1e-9 {
                return;
            }
        }
        let Some(pos) = (depth..self.order.len()).find(|&d| self.state[self.order[d]].is_none()) else {
            let values: Vec<bool> = self.state.iter().map(|s| s.unwrap()).collect();
            assert!(self.problem.is_feasible(&values));
            let objective = self.problem.objective(&values);
            if self.best.as_ref().is_none_or(|b| objective > b.objective + 1e-9) {
                self.best = Some(Optimum { objective, values });
            }
            return;
        };
        let j = self.order[pos];
        for on in [true, false] {
            let mark = self.trail.len();
            if self.assign(j, on) {
                self.dfs(pos + 1);
            }
            self.undo_to(mark);
        }
    }
}

/// Maximum objective over all feasible assignments, or `None` when there
/// is none. Options are branched on first, then edges, then the rest.
pub fn enumerate_optimum(problem: &IlpProblem) -> Option<Optimum> {
    let index = problem.var_index();
    let n = problem.vars.len();
    let mut incidence = vec![Vec::new(); n];
    let mut rows = Vec::new();
    for (r, c) in problem.cons.iter().enumerate() {
        let (lo, hi) = match c.sense {
            Sense::Le => (f64::NEG_INFINITY, c.rhs),
            Sense::Ge => (c.rhs, f64::INFINITY),
            Sense::Eq => (c.rhs, c.rhs),
        };
        let mut row = Row { terms: Vec::new(), lo, hi, fixed: 0.0, free_pos: 0.0, free_neg: 0.0 };
        for (name, a) in &c.terms {
            let j = index[name.as_str()];
            incidence[j].push((r, *a));
            row.terms.push((j, *a));
            if *a > 0.0 {
                row.free_pos += a;
            } else {
                row.free_neg += a;
            }
        }
        if !row.satisfiable() {
            return None;
        }
        rows.push(row);
    }
    let rank = |j: usize| match problem.vars[j].kind() {
        Some(VarKind::ActiveOption) => 0,
        Some(k) if k.is_edge() => 1,
        _ => 2,
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| rank(j));
    let costs: Vec<f64> = problem.vars.iter().map(|v| v.objective_coeff).collect();
    let free_gain = costs.iter().filter(|&&c| c > 0.0).sum();
    let mut s = Search {
        problem,
        costs,
        order,
        incidence,
        rows,
        state: vec![None; n],
        trail: Vec::new(),
        fixed_obj: 0.0,
        free_gain,
        best: None,
    };
    // initial propagation from rows that already force values
    for r in 0..s.rows.len() {
        let free: Vec<(usize, f64)> = s.rows[r].terms.iter().copied().filter(|&(v, _)| s.state[v].is_none()).collect();
        for (v, a) in free {
            if s.state[v].is_some() {
                continue;
            }
            if let Some(val) = s.rows[r].forces(a) {
                if !s.assign(v, val) {
                    return None;
                }
            }
        }
    }
    s.dfs(0);
    s.best
}
