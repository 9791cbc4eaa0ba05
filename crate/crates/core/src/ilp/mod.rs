//! The support-graph integer program: variables, linear constraints and the
//! builders that instantiate them for one question.

mod ablation;
mod build;
mod constraints;
mod params;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ablation::{apply_ablation, Ablation};
pub use build::{build_problem, build_variables, ModelContext, TableView};
pub use constraints::build_constraints;
pub use params::{CellCellMode, ModelConstants, ModelParams, ObjectiveWeights, Thresholds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    CellCell,
    CellQcons,
    HeaderQcons,
    CellOption,
    HeaderOption,
    ColumnOption,
    TableOption,
    /// Penalty variable for an annotated column pair whose relation is not
    /// expressed in the question.
    ColumnColumnRelation,
    ActiveTable,
    ActiveRow,
    ActiveColumn,
    ActiveHeader,
    ActiveCell,
    ActiveQcons,
    ActiveOption,
    AuxWhichActive,
    AuxWhichAligned,
    AuxCellProximity,
    RelationMatchQuad,
}

impl VarKind {
    /// Edges of the support graph proper.
    pub fn is_edge(self) -> bool {
        matches!(
            self,
            VarKind::CellCell | VarKind::CellQcons | VarKind::HeaderQcons | VarKind::CellOption | VarKind::HeaderOption
        )
    }
}

/// A node of the problem. `table` indexes [`IlpProblem::table_ids`], `row`
/// is the row index in the original table and `qcons` is a token position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Element {
    Table { table: usize },
    Row { table: usize, row: usize },
    Column { table: usize, col: usize },
    Header { table: usize, col: usize },
    Cell { table: usize, row: usize, col: usize },
    Qcons { pos: usize },
    Option { m: usize },
}

impl Element {
    pub fn table(&self) -> Option<usize> {
        match *self {
            Element::Table { table }
            | Element::Row { table, .. }
            | Element::Column { table, .. }
            | Element::Header { table, .. }
            | Element::Cell { table, .. } => Some(table),
            Element::Qcons { .. } | Element::Option { .. } => None,
        }
    }
}

/// Model-side description of a variable. Not part of the JSON exchange format.
#[derive(Debug, Clone, PartialEq)]
pub struct VarMeta {
    pub kind: VarKind,
    pub ends: Vec<Element>,
    /// Alignment score `w(e)` for edge kinds, zero otherwise.
    pub score: f64,
    /// Option edge on a cell or column strongly tied to the which-term.
    pub which_hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IlpVariable {
    pub name: String,
    #[serde(rename = "coeff")]
    pub objective_coeff: f64,
    #[serde(skip)]
    pub meta: Option<VarMeta>,
}

impl IlpVariable {
    pub fn new(name: impl Into<String>, objective_coeff: f64) -> Self {
        IlpVariable { name: name.into(), objective_coeff, meta: None }
    }

    pub fn kind(&self) -> Option<VarKind> {
        self.meta.as_ref().map(|m| m.kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Sense {
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Sense::Le => lhs <= rhs + tol,
            Sense::Ge => lhs >= rhs - tol,
            Sense::Eq => (lhs - rhs).abs() <= tol,
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub terms: Vec<(String, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    pub tag: String,
}

impl LinearConstraint {
    pub fn new(terms: Vec<(String, f64)>, sense: Sense, rhs: f64, tag: impl Into<String>) -> Self {
        LinearConstraint { terms, sense, rhs, tag: tag.into() }
    }
}

/// `maximize cᵀx` subject to linear constraints, `x` binary.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IlpProblem {
    pub vars: Vec<IlpVariable>,
    pub cons: Vec<LinearConstraint>,
    /// Ids of the tables referenced by [`Element`] indices.
    #[serde(skip)]
    pub table_ids: Vec<String>,
}

impl IlpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var_index(&self) -> HashMap<&str, usize> {
        self.vars.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect()
    }

    pub fn find(&self, name: &str) -> Option<&IlpVariable> {
        self.vars.iter().find(|v| v.name == name)
    }

    pub fn objective(&self, values: &[bool]) -> f64 {
        self.vars.iter().zip(values).filter(|(_, &on)| on).map(|(v, _)| v.objective_coeff).sum()
    }

    /// Checks unique names and that every term refers to a declared variable.
    pub fn validate(&self) -> Result<()> {
        let index = self.var_index();
        if index.len() != self.vars.len() {
            let mut seen = std::collections::HashSet::new();
            let dup = self.vars.iter().find(|v| !seen.insert(v.name.as_str())).expect("duplicate exists");
            return Err(Error::DuplicateVariable(dup.name.clone()));
        }
        for c in &self.cons {
            for (name, _) in &c.terms {
                if !index.contains_key(name.as_str()) {
                    return Err(Error::UndeclaredVariable { tag: c.tag.clone(), var: name.clone() });
                }
            }
        }
        Ok(())
    }

    /// Constraints violated by a 0/1 assignment aligned with `vars`.
    pub fn violations(&self, values: &[bool], tol: f64) -> Vec<&LinearConstraint> {
        let index = self.var_index();
        self.cons
            .iter()
            .filter(|c| {
                let lhs: f64 = c.terms.iter().filter(|(n, _)| values[index[n.as_str()]]).map(|(_, a)| a).sum();
                !c.sense.holds(lhs, c.rhs, tol)
            })
            .collect()
    }

    pub fn is_feasible(&self, values: &[bool]) -> bool {
        self.violations(values, 1e-6).is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }

    pub fn from_json(src: &str) -> serde_json::Result<Self> {
        serde_json::from_str(src)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let p = Self::from_json(&src).map_err(|source| Error::Json { path: path.to_owned(), source })?;
        p.validate()?;
        Ok(p)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn count_kind(&self, kind: VarKind) -> usize {
        self.vars.iter().filter(|v| v.kind() == Some(kind)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let mut p = IlpProblem::new();
        p.vars.push(IlpVariable::new("x1", 1.0));
        p.vars.push(IlpVariable::new("x2", 2.0));
        p.cons.push(LinearConstraint::new(vec![("x1".into(), 1.0), ("x2".into(), 1.0)], Sense::Le, 1.0, "cap"));
        let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(v["vars"][1]["name"], "x2");
        assert_eq!(v["vars"][1]["coeff"], 2.0);
        assert_eq!(v["cons"][0]["terms"][0][0], "x1");
        assert_eq!(v["cons"][0]["sense"], "<=");
        assert_eq!(v["cons"][0]["tag"], "cap");
        assert_eq!(IlpProblem::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn validation_catches_bad_references() {
        let mut p = IlpProblem::new();
        p.vars.push(IlpVariable::new("x", 1.0));
        p.cons.push(LinearConstraint::new(vec![("y".into(), 1.0)], Sense::Le, 1.0, "t"));
        assert!(matches!(p.validate(), Err(Error::UndeclaredVariable { .. })));
        p.cons.clear();
        p.vars.push(IlpVariable::new("x", 2.0));
        assert!(matches!(p.validate(), Err(Error::DuplicateVariable(_))));
    }

    #[test]
    fn feasibility_check() {
        let mut p = IlpProblem::new();
        p.vars.push(IlpVariable::new("a", 1.0));
        p.vars.push(IlpVariable::new("b", 1.0));
        p.cons.push(LinearConstraint::new(vec![("a".into(), 1.0), ("b".into(), 1.0)], Sense::Eq, 1.0, "one"));
        assert!(p.is_feasible(&[true, false]));
        assert!(!p.is_feasible(&[true, true]));
        assert_eq!(p.objective(&[true, false]), 1.0);
    }
}
