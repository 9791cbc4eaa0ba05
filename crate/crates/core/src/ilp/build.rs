//! Pairwise, unary and auxiliary variable creation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Element, IlpProblem, IlpVariable, LinearConstraint, ModelParams, Sense, VarKind, VarMeta};
use crate::alignment::{match_relations, similarity, AlignmentScorer, RelationMatch};
use crate::error::{Error, Result};
use crate::knowledge::{JoinMap, Table};
use crate::question::{detect_which_term, Question, WhichTermSpan};

/// A table restricted to the rows that survived filtering.
#[derive(Debug, Clone)]
pub struct TableView<'a> {
    pub table: &'a Table,
    pub rows: Vec<usize>,
}

impl<'a> TableView<'a> {
    pub fn all_rows(table: &'a Table) -> Self {
        TableView { table, rows: (0..table.rows.len()).collect() }
    }
}

/// Inputs of one model instance besides the scorer and parameters.
#[derive(Debug, Clone)]
pub struct ModelContext<'a> {
    pub question: &'a Question,
    pub tables: Vec<TableView<'a>>,
    pub join_map: &'a JoinMap,
    /// Relation mentions per entry of `tables`.
    pub relation_matches: Vec<Vec<RelationMatch>>,
    pub which: WhichTermSpan,
}

impl<'a> ModelContext<'a> {
    pub fn new(question: &'a Question, tables: Vec<TableView<'a>>, join_map: &'a JoinMap) -> Result<Self> {
        let relation_matches = tables.iter().map(|tv| match_relations(question, tv.table)).collect::<Result<_>>()?;
        Ok(ModelContext { question, tables, join_map, relation_matches, which: detect_which_term(question) })
    }

    pub fn table_id(&self, i: usize) -> &str {
        &self.tables[i].table.id
    }
}

pub(crate) mod names {
    use super::Element;

    pub fn element(ctx_ids: &[String], e: &Element) -> String {
        match *e {
            Element::Table { table } => ctx_ids[table].clone(),
            Element::Row { table, row } => format!("{},r{row}", ctx_ids[table]),
            Element::Column { table, col } | Element::Header { table, col } => format!("{},c{col}", ctx_ids[table]),
            Element::Cell { table, row, col } => format!("{},r{row},c{col}", ctx_ids[table]),
            Element::Qcons { pos } => format!("q{pos}"),
            Element::Option { m } => format!("a{m}"),
        }
    }

    pub fn unary(ids: &[String], e: &Element) -> String {
        let prefix = match e {
            Element::Table { .. } => "T",
            Element::Row { .. } => "R",
            Element::Column { .. } => "L",
            Element::Header { .. } => "H",
            Element::Cell { .. } => "C",
            Element::Qcons { .. } => "Q",
            Element::Option { .. } => "A",
        };
        format!("{prefix}({})", element(ids, e))
    }
}

/// Accumulates variables with unique names.
pub(crate) struct VarSink<'p> {
    pub problem: &'p mut IlpProblem,
    pub index: HashMap<String, usize>,
}

impl<'p> VarSink<'p> {
    pub fn new(problem: &'p mut IlpProblem) -> Self {
        let index = problem.vars.iter().enumerate().map(|(i, v)| (v.name.clone(), i)).collect();
        VarSink { problem, index }
    }

    pub fn add(&mut self, name: String, coeff: f64, kind: VarKind, ends: Vec<Element>, score: f64) -> usize {
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        let i = self.problem.vars.len();
        self.index.insert(name.clone(), i);
        self.problem.vars.push(IlpVariable {
            name,
            objective_coeff: coeff,
            meta: Some(VarMeta { kind, ends, score, which_hit: false }),
        });
        i
    }

    pub fn add_unary(&mut self, e: Element, kind: VarKind, coeff: f64) -> usize {
        let name = names::unary(&self.problem.table_ids, &e);
        self.add(name, coeff, kind, vec![e], 0.0)
    }
}

fn score_or_zero(r: Result<f64>) -> Result<f64> {
    match r {
        Err(Error::EmptyHypothesis(_)) => Ok(0.0),
        other => other,
    }
}

fn passes(score: f64, threshold: f64) -> bool {
    score > 0.0 && score >= threshold
}

/// Creates every variable of the model plus the exactly-one-option
/// constraint. The result is completed by [`super::build_constraints`].
pub fn build_variables(ctx: &ModelContext<'_>, scorer: &dyn AlignmentScorer, params: &ModelParams) -> Result<IlpProblem> {
    let th = &params.thresholds;
    let k = &params.constants;
    let w = &params.weights;
    let q = ctx.question;

    let mut problem = IlpProblem { table_ids: ctx.tables.iter().map(|t| t.table.id.clone()).collect(), ..Default::default() };
    let ids = problem.table_ids.clone();
    let mut sink = VarSink::new(&mut problem);

    let options: Vec<usize> =
        (0..q.options.len()).map(|m| sink.add_unary(Element::Option { m }, VarKind::ActiveOption, 0.0)).collect();

    // which-term relevance of cells and headers, reused by the aligned boost
    let which: Vec<&str> = ctx
        .which
        .constituent_indices
        .iter()
        .take(k.which_term_span)
        .filter_map(|&p| q.constituent_at(p).map(|ci| q.constituents[ci].text.as_str()))
        .collect();
    let which_hit = |text: &str| -> Result<bool> {
        for wt in &which {
            if score_or_zero(scorer.entail(wt, text))? > k.min_alignment_which_term {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let mut which_edges: Vec<usize> = Vec::new();

    // cell <-> question constituent, cell <-> option
    for (ti, tv) in ctx.tables.iter().enumerate() {
        let header_hits: Vec<bool> = tv.table.headers.iter().map(|h| which_hit(h)).collect::<Result<_>>()?;
        for &row in &tv.rows {
            for (col, text) in tv.table.rows[row].iter().enumerate() {
                let cell = Element::Cell { table: ti, row, col };
                let cell_name = names::element(&ids, &cell);
                for c in &q.constituents {
                    let s = score_or_zero(scorer.entail(&c.text, text))?;
                    if passes(s, th.min_cell_qcons_alignment) {
                        let name = format!("CQ({cell_name}|q{})", c.position);
                        sink.add(name, s, VarKind::CellQcons, vec![cell, Element::Qcons { pos: c.position }], s);
                    }
                }
                let hit = header_hits[col] || which_hit(text)?;
                for (m, opt) in q.options.iter().enumerate() {
                    if opt.content.is_empty() {
                        continue;
                    }
                    let s = score_or_zero(scorer.entail(text, &opt.phrase()))?;
                    if passes(s, th.min_cell_qchoice_alignment) {
                        let name = format!("CA({cell_name}|a{m})");
                        let v = sink.add(name, s, VarKind::CellOption, vec![cell, Element::Option { m }], s);
                        if hit {
                            which_edges.push(v);
                        }
                    }
                }
            }
        }
        for (col, text) in tv.table.headers.iter().enumerate() {
            let header = Element::Header { table: ti, col };
            let hname = names::element(&ids, &header);
            for c in &q.constituents {
                let s = score_or_zero(scorer.entail(&c.text, text))?;
                if passes(s, th.min_title_qcons_alignment) {
                    let name = format!("HQ({hname}|q{})", c.position);
                    sink.add(name, s, VarKind::HeaderQcons, vec![header, Element::Qcons { pos: c.position }], s);
                }
            }
            for (m, opt) in q.options.iter().enumerate() {
                if opt.content.is_empty() {
                    continue;
                }
                let s = score_or_zero(scorer.entail(text, &opt.phrase()))?;
                if passes(s, th.min_title_qchoice_alignment) {
                    let name = format!("HA({hname}|a{m})");
                    let v = sink.add(name, s, VarKind::HeaderOption, vec![header, Element::Option { m }], s);
                    if header_hits[col] {
                        which_edges.push(v);
                    }
                }
            }
        }
    }

    // inter-table cell <-> cell, only across sanctioned header joins
    for ti in 0..ctx.tables.len() {
        for tj in ti + 1..ctx.tables.len() {
            let (a, b) = (&ctx.tables[ti], &ctx.tables[tj]);
            for ka in 0..a.table.width() {
                for kb in 0..b.table.width() {
                    if !ctx.join_map.joinable(&a.table.id, ka, &b.table.id, kb) {
                        continue;
                    }
                    for &ra in &a.rows {
                        for &rb in &b.rows {
                            let s = score_or_zero(similarity(&a.table.rows[ra][ka], &b.table.rows[rb][kb], scorer))?;
                            if passes(s, th.min_cell_cell_alignment) {
                                let ea = Element::Cell { table: ti, row: ra, col: ka };
                                let eb = Element::Cell { table: tj, row: rb, col: kb };
                                let name = format!("CC({}|{})", names::element(&ids, &ea), names::element(&ids, &eb));
                                sink.add(name, params.cell_cell_coeff(s), VarKind::CellCell, vec![ea, eb], s);
                            }
                        }
                    }
                }
            }
        }
    }

    // unary activity variables for every touched element
    let edges: Vec<(VarKind, Vec<Element>)> = sink
        .problem
        .vars
        .iter()
        .filter_map(|v| v.meta.as_ref())
        .filter(|m| m.kind.is_edge())
        .map(|m| (m.kind, m.ends.clone()))
        .collect();
    let mut cells = BTreeSet::new();
    let mut headers = BTreeSet::new();
    let mut qcons = BTreeSet::new();
    let mut col_opts: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for (_, ends) in &edges {
        for e in ends {
            match *e {
                Element::Cell { .. } => {
                    cells.insert(*e);
                }
                Element::Header { .. } => {
                    headers.insert(*e);
                }
                Element::Qcons { .. } => {
                    qcons.insert(*e);
                }
                _ => {}
            }
        }
        if let [Element::Cell { table, col, .. } | Element::Header { table, col }, Element::Option { m }] = ends[..] {
            col_opts.insert((table, col, m));
        }
    }
    let mut rows = BTreeSet::new();
    let mut columns = BTreeSet::new();
    let mut tables = BTreeSet::new();
    for e in cells.iter().chain(headers.iter()) {
        match *e {
            Element::Cell { table, row, col } => {
                rows.insert((table, row));
                columns.insert((table, col));
                tables.insert(table);
            }
            Element::Header { table, col } => {
                columns.insert((table, col));
                tables.insert(table);
            }
            _ => unreachable!(),
        }
    }
    for &table in &tables {
        sink.add_unary(Element::Table { table }, VarKind::ActiveTable, params.table_coeff());
    }
    for &(table, row) in &rows {
        sink.add_unary(Element::Row { table, row }, VarKind::ActiveRow, w.active_row);
    }
    for &(table, col) in &columns {
        sink.add_unary(Element::Column { table, col }, VarKind::ActiveColumn, w.active_column);
    }
    for e in &headers {
        sink.add_unary(*e, VarKind::ActiveHeader, w.active_header);
    }
    for e in &cells {
        sink.add_unary(*e, VarKind::ActiveCell, w.active_cell);
    }
    for e in &qcons {
        sink.add_unary(*e, VarKind::ActiveQcons, w.active_qcons);
    }

    // column/table-for-option aggregates
    let mut table_opts = BTreeSet::new();
    for &(table, col, m) in &col_opts {
        let ends = vec![Element::Column { table, col }, Element::Option { m }];
        let name = format!("LA({}|a{m})", names::element(&ids, &ends[0]));
        sink.add(name, 0.0, VarKind::ColumnOption, ends, 0.0);
        table_opts.insert((table, m));
    }
    for &(table, m) in &table_opts {
        let ends = vec![Element::Table { table }, Element::Option { m }];
        let name = format!("TA({}|a{m})", ids[table]);
        sink.add(name, 0.0, VarKind::TableOption, ends, 0.0);
    }

    for &v in &which_edges {
        if let Some(meta) = sink.problem.vars[v].meta.as_mut() {
            meta.which_hit = true;
        }
    }

    // which-term auxiliaries
    if ctx.which.present && !edges.is_empty() {
        sink.add("WHICH_ACTIVE".into(), w.aux_which, VarKind::AuxWhichActive, vec![], 0.0);
        if !which_edges.is_empty() {
            sink.add("WHICH_ALIGNED".into(), w.aux_which, VarKind::AuxWhichAligned, vec![], 0.0);
        }
    }

    // proximity boosts: one cell aligned to two nearby constituents
    let mut per_cell: BTreeMap<Element, Vec<usize>> = BTreeMap::new();
    for (kind, ends) in &edges {
        if let (VarKind::CellQcons, [cell, Element::Qcons { pos }]) = (kind, &ends[..]) {
            per_cell.entry(*cell).or_default().push(*pos);
        }
    }
    for (cell, positions) in &per_cell {
        for (i, &p1) in positions.iter().enumerate() {
            for &p2 in &positions[i + 1..] {
                let (lo, hi) = (p1.min(p2), p1.max(p2));
                let dist = hi - lo;
                if dist <= k.qcons_coalign_max_dist {
                    let name = format!("PROX({}|q{lo},q{hi})", names::element(&ids, cell));
                    let ends = vec![*cell, Element::Qcons { pos: lo }, Element::Qcons { pos: hi }];
                    sink.add(name, ModelParams::proximity_coeff(dist), VarKind::AuxCellProximity, ends, 0.0);
                }
            }
        }
    }

    // relation matching: matched mentions and unmatched-relation penalties
    for (ti, tv) in ctx.tables.iter().enumerate() {
        for m in &ctx.relation_matches[ti] {
            let rel = &tv.table.relations[m.relation];
            let ends = vec![
                Element::Column { table: ti, col: rel.from_col },
                Element::Column { table: ti, col: rel.to_col },
                Element::Qcons { pos: m.q_from },
                Element::Qcons { pos: m.q_to },
            ];
            if !ends[..2].iter().all(|c| sink.index.contains_key(&names::unary(&ids, c))) {
                continue;
            }
            let name = format!("RM({},c{},c{}|q{},q{})", ids[ti], rel.from_col, rel.to_col, m.q_from, m.q_to);
            sink.add(name, k.relation_match_coeff, VarKind::RelationMatchQuad, ends, 0.0);
        }
        for (ri, rel) in tv.table.relations.iter().enumerate() {
            let aligned = |col: usize| {
                edges.iter().any(|(kind, ends)| {
                    *kind == VarKind::CellQcons
                        && matches!(ends[0], Element::Cell { table, col: c, .. } if table == ti && c == col)
                })
            };
            if aligned(rel.from_col) && aligned(rel.to_col) {
                let ends = vec![Element::Column { table: ti, col: rel.from_col }, Element::Column { table: ti, col: rel.to_col }];
                let name = format!("LL({},c{},c{}|r{ri})", ids[ti], rel.from_col, rel.to_col);
                sink.add(name, k.no_relation_match_coeff, VarKind::ColumnColumnRelation, ends, 0.0);
            }
        }
    }

    let opt_terms: Vec<(String, f64)> = options.iter().map(|&i| (sink.problem.vars[i].name.clone(), 1.0)).collect();
    problem.cons.push(LinearConstraint::new(opt_terms.clone(), Sense::Le, 1.0, "single_option"));
    problem.cons.push(LinearConstraint::new(opt_terms, Sense::Ge, 1.0, "single_option"));
    Ok(problem)
}

/// Variables followed by the full constraint catalog.
pub fn build_problem(ctx: &ModelContext<'_>, scorer: &dyn AlignmentScorer, params: &ModelParams) -> Result<IlpProblem> {
    let partial = build_variables(ctx, scorer, params)?;
    super::build_constraints(partial, ctx, params)
}
