//! Support graphs read off optimal assignments, their structural checks,
//! statistics and the per-question feature vector.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ilp::{Element, IlpProblem, VarKind};
use crate::knowledge::JoinMap;
use crate::question::Question;
use crate::solver::IlpSolution;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CellId {
    pub table: String,
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RowId {
    pub table: String,
    pub row: usize,
}

/// A column or its header.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ColumnId {
    pub table: String,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    Qcons(usize),
    Option(usize),
    Cell(CellId),
    Header(ColumnId),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Edge {
    pub kind: VarKind,
    pub from: Node,
    pub to: Node,
    pub weight: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SupportGraph {
    pub active_options: BTreeSet<usize>,
    pub active_qcons: BTreeSet<usize>,
    pub active_cells: BTreeSet<CellId>,
    pub active_rows: BTreeSet<RowId>,
    pub active_columns: BTreeSet<ColumnId>,
    pub active_headers: BTreeSet<ColumnId>,
    pub active_tables: BTreeSet<String>,
    pub edges: Vec<Edge>,
    pub objective: f64,
}

impl SupportGraph {
    /// The chosen option when exactly one is active.
    pub fn active_option(&self) -> Option<usize> {
        (self.active_options.len() == 1).then(|| *self.active_options.first().unwrap())
    }

    /// Active column indices per active row.
    pub fn row_signatures(&self) -> BTreeMap<RowId, BTreeSet<usize>> {
        let mut out: BTreeMap<RowId, BTreeSet<usize>> = BTreeMap::new();
        for c in &self.active_cells {
            out.entry(RowId { table: c.table.clone(), row: c.row }).or_default().insert(c.col);
        }
        out
    }
}

fn node(ids: &[String], e: &Element) -> Option<Node> {
    Some(match *e {
        Element::Qcons { pos } => Node::Qcons(pos),
        Element::Option { m } => Node::Option(m),
        Element::Cell { table, row, col } => Node::Cell(CellId { table: ids[table].clone(), row, col }),
        Element::Header { table, col } => Node::Header(ColumnId { table: ids[table].clone(), col }),
        _ => return None,
    })
}

/// Collects the elements and edges whose variables are set in an optimal
/// solution. Variables without model metadata are ignored.
pub fn extract_support_graph(problem: &IlpProblem, solution: &IlpSolution) -> Result<SupportGraph> {
    if !solution.is_optimal() {
        return Err(Error::NotOptimal(format!("{:?}", solution.status)));
    }
    let ids = &problem.table_ids;
    let mut g = SupportGraph { objective: solution.objective, ..Default::default() };
    for (var, _) in problem.vars.iter().zip(&solution.values).filter(|(_, &on)| on) {
        let Some(meta) = &var.meta else { continue };
        if meta.kind.is_edge() {
            let (Some(from), Some(to)) = (node(ids, &meta.ends[0]), node(ids, &meta.ends[1])) else {
                continue;
            };
            g.edges.push(Edge { kind: meta.kind, from, to, weight: meta.score });
            continue;
        }
        match (meta.kind, meta.ends.first()) {
            (VarKind::ActiveOption, Some(&Element::Option { m })) => {
                g.active_options.insert(m);
            }
            (VarKind::ActiveQcons, Some(&Element::Qcons { pos })) => {
                g.active_qcons.insert(pos);
            }
            (VarKind::ActiveCell, Some(&Element::Cell { table, row, col })) => {
                g.active_cells.insert(CellId { table: ids[table].clone(), row, col });
            }
            (VarKind::ActiveRow, Some(&Element::Row { table, row })) => {
                g.active_rows.insert(RowId { table: ids[table].clone(), row });
            }
            (VarKind::ActiveColumn, Some(&Element::Column { table, col })) => {
                g.active_columns.insert(ColumnId { table: ids[table].clone(), col });
            }
            (VarKind::ActiveHeader, Some(&Element::Header { table, col })) => {
                g.active_headers.insert(ColumnId { table: ids[table].clone(), col });
            }
            (VarKind::ActiveTable, Some(&Element::Table { table })) => {
                g.active_tables.insert(ids[table].clone());
            }
            _ => {}
        }
    }
    Ok(g)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Structural checks on a support graph; an empty list means valid.
pub fn verify_support_graph(g: &SupportGraph, question: &Question, join_map: &JoinMap) -> Vec<String> {
    let mut out = Vec::new();
    if g.active_options.len() != 1 {
        out.push(format!("property 1: expected one active option, found {}", g.active_options.len()));
    }
    if g.active_options.iter().any(|&m| m >= question.options.len()) {
        out.push("property 1: active option out of range".into());
    }
    if g.active_qcons.is_empty() {
        out.push("property 1: no active question constituent".into());
    }
    if g.active_cells.is_empty() {
        out.push("property 1: no active cell".into());
    }
    for e in &g.edges {
        if e.weight <= 0.0 || e.weight.is_nan() {
            out.push(format!("property 2: edge {:?} - {:?} has weight {}", e.from, e.to, e.weight));
        }
        if let (Node::Cell(a), Node::Cell(b)) = (&e.from, &e.to) {
            if a.table == b.table || !join_map.joinable(&a.table, a.col, &b.table, b.col) {
                out.push(format!("property 3: cells {a:?} and {b:?} lack a sanctioned header join"));
            }
        }
    }

    // connectivity of the graph augmented with same-row and cell-header edges
    let mut nodes: BTreeSet<Node> = BTreeSet::new();
    nodes.extend(g.active_options.iter().map(|&m| Node::Option(m)));
    nodes.extend(g.active_qcons.iter().map(|&p| Node::Qcons(p)));
    nodes.extend(g.active_cells.iter().cloned().map(Node::Cell));
    nodes.extend(g.active_headers.iter().cloned().map(Node::Header));
    for e in &g.edges {
        nodes.insert(e.from.clone());
        nodes.insert(e.to.clone());
    }
    let index: BTreeMap<&Node, usize> = nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let mut uf = UnionFind((0..nodes.len()).collect());
    for e in &g.edges {
        uf.union(index[&e.from], index[&e.to]);
    }
    let mut first_in_row: BTreeMap<(&str, usize), usize> = BTreeMap::new();
    for c in &g.active_cells {
        let i = index[&Node::Cell(c.clone())];
        match first_in_row.get(&(c.table.as_str(), c.row)) {
            Some(&j) => uf.union(i, j),
            None => {
                first_in_row.insert((c.table.as_str(), c.row), i);
            }
        }
        let header = Node::Header(ColumnId { table: c.table.clone(), col: c.col });
        if let Some(&h) = index.get(&header) {
            uf.union(i, h);
        }
    }
    let roots: BTreeSet<usize> = (0..nodes.len()).map(|i| uf.find(i)).collect();
    if roots.len() > 1 {
        out.push(format!("property 4: augmented graph has {} components", roots.len()));
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GraphStats {
    pub n_variables: usize,
    pub n_constraints: usize,
    pub lp_iterations: usize,
    pub n_active_rows: usize,
    pub n_active_tables: usize,
    pub model_build_seconds: f64,
    pub solve_seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FeatureVector {
    pub avg_qcons_alignment: f64,
    pub min_qcons_alignment: f64,
    pub active_qcons: f64,
    pub active_qcons_fraction: f64,
    pub avg_choice_alignment: f64,
    pub sum_choice_alignment: f64,
    pub active_cells: f64,
    pub avg_edge_alignment: f64,
    pub min_edge_alignment: f64,
    pub log_variables: f64,
    pub log_constraints: f64,
}

pub const N_GRAPH_FEATURES: usize = 11;

impl FeatureVector {
    pub fn to_array(&self) -> [f64; N_GRAPH_FEATURES] {
        [
            self.avg_qcons_alignment,
            self.min_qcons_alignment,
            self.active_qcons,
            self.active_qcons_fraction,
            self.avg_choice_alignment,
            self.sum_choice_alignment,
            self.active_cells,
            self.avg_edge_alignment,
            self.min_edge_alignment,
            self.log_variables,
            self.log_constraints,
        ]
    }
}

fn avg(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

fn min(xs: &[f64]) -> f64 {
    xs.iter().copied().reduce(f64::min).unwrap_or(0.0)
}

fn ln_count(n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        (n as f64).ln()
    }
}

/// Averages and minimums over empty edge sets are zero.
pub fn extract_features(g: &SupportGraph, question: &Question, stats: &GraphStats) -> FeatureVector {
    let weights = |pred: fn(VarKind) -> bool| -> Vec<f64> { g.edges.iter().filter(|e| pred(e.kind)).map(|e| e.weight).collect() };
    let qcons = weights(|k| matches!(k, VarKind::CellQcons | VarKind::HeaderQcons));
    let choice = weights(|k| matches!(k, VarKind::CellOption | VarKind::HeaderOption));
    let all = weights(|_| true);
    let n_cons = question.constituents.len();
    FeatureVector {
        avg_qcons_alignment: avg(&qcons),
        min_qcons_alignment: min(&qcons),
        active_qcons: g.active_qcons.len() as f64,
        active_qcons_fraction: if n_cons == 0 { 0.0 } else { g.active_qcons.len() as f64 / n_cons as f64 },
        avg_choice_alignment: avg(&choice),
        sum_choice_alignment: choice.iter().sum(),
        active_cells: g.active_cells.len() as f64,
        avg_edge_alignment: avg(&all),
        min_edge_alignment: min(&all),
        log_variables: ln_count(stats.n_variables),
        log_constraints: ln_count(stats.n_constraints),
    }
}
