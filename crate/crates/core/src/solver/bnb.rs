use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use super::simplex::{Basis, DualSimplex, LpModel, RawStatus};
use super::{IlpSolution, Indexed, SolveStatus};
use crate::error::{Error, Result};
use crate::ilp::IlpProblem;

const INT_TOL: f64 = 1e-6;

enum NodeEval {
    Infeasible,
    Integral(Vec<bool>),
    Fractional { x: Vec<f64>, bound: f64, basis: Basis },
}

struct Node {
    bound: f64,
    seq: u64,
    fixed: Vec<Option<bool>>,
    x: Vec<f64>,
    basis: Basis,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // max-heap on bound, earlier nodes first among equal bounds
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound).then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Search<'a> {
    problem: &'a IlpProblem,
    model: LpModel,
    lp: DualSimplex,
    deadline: Instant,
    lp_iterations: usize,
    nodes: usize,
}

impl Search<'_> {
    fn apply_fixings(lp: &mut DualSimplex, fixed: &[Option<bool>]) {
        for (j, f) in fixed.iter().enumerate() {
            match f {
                Some(true) => lp.set_bounds(j, 1.0, 1.0),
                Some(false) => lp.set_bounds(j, 0.0, 0.0),
                None => lp.set_bounds(j, 0.0, 1.0),
            }
        }
    }

    /// Solves the relaxation under `fixed`, restarting from `start` when
    /// given and from scratch if that runs into numerical trouble.
    fn evaluate(&mut self, fixed: &[Option<bool>], start: Option<&Basis>) -> Result<Option<NodeEval>> {
        self.nodes += 1;
        let mut outcome = None;
        if let Some(basis) = start {
            self.lp.restore(basis);
            Self::apply_fixings(&mut self.lp, fixed);
            let before = self.lp.iterations;
            let status = self.lp.solve(Some(self.deadline));
            let out = self.lp.outcome(&self.model, status);
            self.lp_iterations += self.lp.iterations - before;
            if out.status != RawStatus::Numerical {
                outcome = Some(out);
            }
        }
        let out = match outcome {
            Some(out) => out,
            None => {
                self.lp.reset();
                Self::apply_fixings(&mut self.lp, fixed);
                let before = self.lp.iterations;
                let status = self.lp.solve(Some(self.deadline));
                let out = self.lp.outcome(&self.model, status);
                self.lp_iterations += self.lp.iterations - before;
                out
            }
        };
        match out.status {
            RawStatus::Optimal => {}
            RawStatus::Infeasible | RawStatus::Cutoff => return Ok(Some(NodeEval::Infeasible)),
            RawStatus::TimedOut => return Ok(None),
            RawStatus::Numerical => return Err(Error::Numerical("LP relaxation failed to converge".into())),
        }
        let x = out.x;
        if x.iter().all(|&v| v <= INT_TOL || v >= 1.0 - INT_TOL) {
            let values: Vec<bool> = x.iter().map(|&v| v >= 0.5).collect();
            if self.problem.is_feasible(&values) {
                return Ok(Some(NodeEval::Integral(values)));
            }
        }
        Ok(Some(NodeEval::Fractional { x, bound: out.objective, basis: self.lp.snapshot() }))
    }

    /// Most fractional free variable, ties broken by name.
    fn branch_var(&self, node: &Node) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for (j, &v) in node.x.iter().enumerate() {
            if node.fixed[j].is_some() {
                continue;
            }
            let frac = (v - v.floor()).min(v.ceil() - v);
            if frac <= 1e-9 {
                continue;
            }
            let better = match best {
                None => true,
                Some((bf, bj)) => {
                    frac > bf + 1e-12 || ((frac - bf).abs() <= 1e-12 && self.problem.vars[j].name < self.problem.vars[bj].name)
                }
            };
            if better {
                best = Some((frac, j));
            }
        }
        best.map(|(_, j)| j)
    }
}

/// Best-first branch-and-bound over LP relaxations. A positive `gap`
/// prunes nodes whose bound exceeds the incumbent by less than
/// `gap * |incumbent|`.
pub fn solve_ilp(problem: &IlpProblem, time_limit: Duration, gap: f64) -> Result<IlpSolution> {
    let n = problem.vars.len();
    let ix = Indexed::new(problem)?;
    let model = LpModel { costs: ix.costs, upper: vec![1.0; n], rows: ix.rows };
    let lp = DualSimplex::new(&model);
    let mut search = Search { problem, model, lp, deadline: Instant::now() + time_limit, lp_iterations: 0, nodes: 0 };
    let mut incumbent: Option<(Vec<bool>, f64)> = None;
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut timed_out = false;

    let prune_level = |inc: &Option<(Vec<bool>, f64)>| inc.as_ref().map(|(_, z)| z + (gap * z.abs()).max(1e-9));
    let mut offer = |eval: NodeEval,
                     fixed: Vec<Option<bool>>,
                     incumbent: &mut Option<(Vec<bool>, f64)>,
                     heap: &mut BinaryHeap<Node>| match eval {
        NodeEval::Infeasible => {}
        NodeEval::Integral(values) => {
            let z = problem.objective(&values);
            if incumbent.as_ref().is_none_or(|(_, best)| z > best + 1e-9) {
                *incumbent = Some((values, z));
            }
        }
        NodeEval::Fractional { x, bound, basis } => {
            if prune_level(incumbent).is_none_or(|level| bound > level) {
                seq += 1;
                heap.push(Node { bound, seq, fixed, x, basis });
            }
        }
    };

    let root = vec![None; n];
    match search.evaluate(&root, None)? {
        Some(eval) => offer(eval, root, &mut incumbent, &mut heap),
        None => timed_out = true,
    }
    while let Some(node) = heap.pop() {
        if timed_out {
            break;
        }
        if prune_level(&incumbent).is_some_and(|level| node.bound <= level) {
            break;
        }
        if Instant::now() >= search.deadline {
            timed_out = true;
            break;
        }
        let Some(j) = search.branch_var(&node) else {
            return Err(Error::Numerical("rounded relaxation violates constraints".into()));
        };
        for value in [true, false] {
            search.lp.set_cutoff(prune_level(&incumbent).unwrap_or(f64::NEG_INFINITY));
            let mut fixed = node.fixed.clone();
            fixed[j] = Some(value);
            match search.evaluate(&fixed, Some(&node.basis))? {
                Some(eval) => offer(eval, fixed, &mut incumbent, &mut heap),
                None => {
                    timed_out = true;
                    break;
                }
            }
        }
    }
    let (status, (values, objective)) = match incumbent {
        Some(inc) if !timed_out => (SolveStatus::Optimal, inc),
        Some(inc) => (SolveStatus::Timeout, inc),
        None if timed_out => (SolveStatus::Timeout, (vec![false; n], f64::NEG_INFINITY)),
        None => (SolveStatus::Infeasible, (vec![false; n], f64::NEG_INFINITY)),
    };
    log::debug!(
        "{n} variables, {} constraints: {status:?} objective {objective} after {} nodes, {} LP iterations",
        problem.cons.len(),
        search.nodes,
        search.lp_iterations
    );
    Ok(IlpSolution { values, objective, status, nodes_explored: search.nodes, lp_iterations: search.lp_iterations })
}
