//! Exact 0/1 maximization: LP relaxation by simplex, best-first
//! branch-and-bound, and exhaustive enumeration for small instances.

mod bnb;
mod brute;
mod factor;
mod simplex;

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;

use crate::error::Result;
use crate::ilp::{IlpProblem, Sense};
use simplex::{LpModel, LpRow, RawStatus};

pub use bnb::solve_ilp;
pub use brute::{brute_force_solve, MAX_BRUTE_FORCE_VARS};

pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution {
    /// Aligned with the problem's variables.
    pub values: Vec<f64>,
    pub objective: f64,
    pub status: LpStatus,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IlpSolution {
    /// Aligned with the problem's variables.
    pub values: Vec<bool>,
    /// Negative infinity when no feasible assignment is known.
    pub objective: f64,
    pub status: SolveStatus,
    pub nodes_explored: usize,
    pub lp_iterations: usize,
}

impl IlpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn assignment<'p>(&self, problem: &'p IlpProblem) -> BTreeMap<&'p str, bool> {
        problem.vars.iter().zip(&self.values).map(|(v, &x)| (v.name.as_str(), x)).collect()
    }

    pub fn active_names<'p>(&self, problem: &'p IlpProblem) -> Vec<&'p str> {
        problem.vars.iter().zip(&self.values).filter(|(_, &x)| x).map(|(v, _)| v.name.as_str()).collect()
    }
}

/// Index-based form of a problem shared by the LP and ILP solvers.
#[derive(Debug, Clone)]
pub(crate) struct Indexed {
    pub costs: Vec<f64>,
    pub rows: Vec<LpRow>,
}

impl Indexed {
    pub fn new(problem: &IlpProblem) -> Result<Self> {
        problem.validate()?;
        let index = problem.var_index();
        let rows = problem
            .cons
            .iter()
            .map(|c| {
                let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
                for (name, a) in &c.terms {
                    *acc.entry(index[name.as_str()]).or_default() += a;
                }
                let terms = acc.into_iter().filter(|&(_, a)| a != 0.0).collect();
                let (lo, hi) = match c.sense {
                    Sense::Le => (f64::NEG_INFINITY, c.rhs),
                    Sense::Ge => (c.rhs, f64::INFINITY),
                    Sense::Eq => (c.rhs, c.rhs),
                };
                LpRow { terms, lo, hi }
            })
            .collect();
        Ok(Indexed { costs: problem.vars.iter().map(|v| v.objective_coeff).collect(), rows })
    }
}

/// Solves the LP relaxation with every variable in `[0, 1]`.
pub fn solve_lp(problem: &IlpProblem) -> Result<LpSolution> {
    let ix = Indexed::new(problem)?;
    let n = ix.costs.len();
    let model = LpModel { upper: vec![1.0; n], costs: ix.costs, rows: ix.rows };
    let out = simplex::simplex(&model, None);
    let status = match out.status {
        RawStatus::Optimal => LpStatus::Optimal,
        RawStatus::Infeasible => LpStatus::Infeasible,
        RawStatus::Numerical | RawStatus::TimedOut | RawStatus::Cutoff => LpStatus::NumericalFailure,
    };
    Ok(LpSolution { values: out.x, objective: out.objective, status, iterations: out.iterations })
}
