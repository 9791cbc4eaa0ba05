use super::{IlpSolution, Indexed, SolveStatus};
use crate::error::{Error, Result};
use crate::ilp::IlpProblem;

pub const MAX_BRUTE_FORCE_VARS: usize = 24;

const TOL: f64 = 1e-6;

/// Enumerates all `2^n` assignments in Gray-code order. Among optimal
/// assignments the one whose values, listed by ascending variable name, is
/// lexicographically smallest wins.
pub fn brute_force_solve(problem: &IlpProblem) -> Result<IlpSolution> {
    let n = problem.vars.len();
    if n > MAX_BRUTE_FORCE_VARS {
        return Err(Error::TooManyVariables { max: MAX_BRUTE_FORCE_VARS, found: n });
    }
    let ix = Indexed::new(problem)?;
    // bit (n-1-rank) holds the variable of the given name rank so that
    // numeric mask order equals lexicographic order by name
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| problem.vars[a].name.cmp(&problem.vars[b].name));
    let mut bit_of = vec![0u32; n];
    for (rank, &v) in order.iter().enumerate() {
        bit_of[v] = (n - 1 - rank) as u32;
    }
    let mut var_at_bit = vec![0usize; n];
    for v in 0..n {
        var_at_bit[bit_of[v] as usize] = v;
    }
    let mut incidence: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (r, row) in ix.rows.iter().enumerate() {
        for &(j, a) in &row.terms {
            incidence[j].push((r, a));
        }
    }
    let violated = |r: usize, act: f64| act < ix.rows[r].lo - TOL || act > ix.rows[r].hi + TOL;
    let mut activity = vec![0.0; ix.rows.len()];
    let mut n_violated = (0..ix.rows.len()).filter(|&r| violated(r, 0.0)).count();
    let mut objective = 0.0;
    let mut mask: u64 = 0;
    let mut best: Option<(u64, f64)> = (n_violated == 0).then_some((0, 0.0));
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        let v = var_at_bit[bit];
        mask ^= 1 << bit;
        let sign = if mask >> bit & 1 == 1 { 1.0 } else { -1.0 };
        objective += sign * ix.costs[v];
        for &(r, a) in &incidence[v] {
            let before = violated(r, activity[r]);
            activity[r] += sign * a;
            let after = violated(r, activity[r]);
            match (before, after) {
                (true, false) => n_violated -= 1,
                (false, true) => n_violated += 1,
                _ => {}
            }
        }
        if n_violated == 0 {
            let replace = match best {
                None => true,
                Some((bm, bo)) => objective > bo + 1e-9 || ((objective - bo).abs() <= 1e-9 && mask < bm),
            };
            if replace {
                best = Some((mask, objective));
            }
        }
    }
    let nodes = 1usize << n;
    Ok(match best {
        Some((m, _)) => {
            let values: Vec<bool> = (0..n).map(|v| m >> bit_of[v] & 1 == 1).collect();
            let objective = problem.objective(&values);
            IlpSolution { values, objective, status: SolveStatus::Optimal, nodes_explored: nodes, lp_iterations: 0 }
        }
        None => IlpSolution {
            values: vec![false; n],
            objective: f64::NEG_INFINITY,
            status: SolveStatus::Infeasible,
            nodes_explored: nodes,
            lp_iterations: 0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{IlpVariable, LinearConstraint, Sense};

    #[test]
    fn empty_problem() {
        let s = brute_force_solve(&IlpProblem::new()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.objective, 0.0);
        assert!(s.values.is_empty());
    }

    #[test]
    fn negative_coefficient_stays_off() {
        let mut p = IlpProblem::new();
        p.vars.push(IlpVariable::new("x", -5.0));
        let s = brute_force_solve(&p).unwrap();
        assert_eq!(s.values, vec![false]);
        assert_eq!(s.objective, 0.0);
    }

    #[test]
    fn ties_resolve_by_name_order() {
        let mut p = IlpProblem::new();
        p.vars.push(IlpVariable::new("b", 1.0));
        p.vars.push(IlpVariable::new("a", 1.0));
        p.cons.push(LinearConstraint::new(vec![("a".into(), 1.0), ("b".into(), 1.0)], Sense::Eq, 1.0, "one"));
        // (a, b) = (0, 1) is lexicographically smaller than (1, 0)
        assert_eq!(brute_force_solve(&p).unwrap().values, vec![true, false]);
    }

    #[test]
    fn too_many() {
        let mut p = IlpProblem::new();
        for i in 0..25 {
            p.vars.push(IlpVariable::new(format!("x{i}"), 1.0));
        }
        assert!(matches!(brute_force_solve(&p), Err(Error::TooManyVariables { max: 24, found: 25 })));
    }
}
