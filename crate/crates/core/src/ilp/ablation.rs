use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{IlpProblem, LinearConstraint, Sense, VarKind};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ablation {
    #[default]
    None,
    /// At most one active row across all tables, hence a single table.
    NoMultirow,
    /// Drop relation-match variables, penalties and constraints.
    NoRelationMatch,
}

impl FromStr for Ablation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "none" => Ok(Ablation::None),
            "no_multirow" => Ok(Ablation::NoMultirow),
            "no_relation_match" => Ok(Ablation::NoRelationMatch),
            other => Err(Error::Config(format!("unknown ablation mode {other:?}"))),
        }
    }
}

impl fmt::Display for Ablation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ablation::None => "none",
            Ablation::NoMultirow => "no_multirow",
            Ablation::NoRelationMatch => "no_relation_match",
        })
    }
}

fn names_of(problem: &IlpProblem, kind: VarKind) -> Vec<(String, f64)> {
    problem.vars.iter().filter(|v| v.kind() == Some(kind)).map(|v| (v.name.clone(), 1.0)).collect()
}

pub fn apply_ablation(mut problem: IlpProblem, mode: Ablation) -> IlpProblem {
    match mode {
        Ablation::None => {}
        Ablation::NoMultirow => {
            problem.cons.retain(|c| c.tag != "max_tables_to_chain" && c.tag != "max_rows_per_table");
            let rows = names_of(&problem, VarKind::ActiveRow);
            let tables = names_of(&problem, VarKind::ActiveTable);
            if !rows.is_empty() {
                problem.cons.push(LinearConstraint::new(rows, Sense::Le, 1.0, "single_row"));
            }
            if !tables.is_empty() {
                problem.cons.push(LinearConstraint::new(tables, Sense::Le, 1.0, "single_table"));
            }
        }
        Ablation::NoRelationMatch => {
            let dropped: HashSet<String> = problem
                .vars
                .iter()
                .filter(|v| matches!(v.kind(), Some(VarKind::RelationMatchQuad | VarKind::ColumnColumnRelation)))
                .map(|v| v.name.clone())
                .collect();
            problem.vars.retain(|v| !dropped.contains(&v.name));
            problem.cons.retain(|c| !c.tag.starts_with("relation_"));
            debug_assert!(problem.cons.iter().all(|c| c.terms.iter().all(|(n, _)| !dropped.contains(n))));
        }
    }
    problem
}
