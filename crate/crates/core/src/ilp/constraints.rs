//! The constraint catalog linking edges, unary activity variables and the
//! structural requirements on a support graph.

use std::collections::{BTreeMap, HashMap};

use super::build::{names, ModelContext};
use super::{Element, IlpProblem, LinearConstraint, ModelParams, Sense, VarKind};
use crate::error::{Error, Result};
use crate::text::tokenize;

type Terms = Vec<(usize, f64)>;

struct Emitter<'p> {
    problem: &'p IlpProblem,
    out: Vec<LinearConstraint>,
}

impl Emitter<'_> {
    fn emit(&mut self, terms: Terms, sense: Sense, rhs: f64, tag: &str) {
        debug_assert!(!terms.is_empty(), "{tag}");
        let terms = terms.into_iter().map(|(i, a)| (self.problem.vars[i].name.clone(), a)).collect();
        self.out.push(LinearConstraint::new(terms, sense, rhs, tag));
    }

    /// `unary >= e` for each edge.
    fn each_implies(&mut self, unary: usize, edges: &[usize], tag: &str) {
        for &e in edges {
            self.emit(vec![(unary, 1.0), (e, -1.0)], Sense::Ge, 0.0, tag);
        }
    }

    /// `sum(edges) >= unary`.
    fn needs_some(&mut self, unary: usize, edges: &[usize], tag: &str) {
        let mut t: Terms = edges.iter().map(|&e| (e, 1.0)).collect();
        t.push((unary, -1.0));
        self.emit(t, Sense::Ge, 0.0, tag);
    }

    /// `sum(vars) <= k * owner`: a budget that also vanishes with its owner.
    fn cap(&mut self, vars: &[usize], owner: usize, k: usize, tag: &str) {
        if !vars.is_empty() {
            let mut t: Terms = vars.iter().map(|&v| (v, 1.0)).collect();
            t.push((owner, -(k as f64)));
            self.emit(t, Sense::Le, 0.0, tag);
        }
    }

    fn sum_le(&mut self, vars: &[usize], rhs: f64, tag: &str) {
        if !vars.is_empty() {
            self.emit(vars.iter().map(|&v| (v, 1.0)).collect(), Sense::Le, rhs, tag);
        }
    }
}

#[derive(Default)]
struct Groups {
    /// Edges incident to each cell, header, row, column, table, constituent, option.
    cell: BTreeMap<Element, Vec<usize>>,
    header: BTreeMap<Element, Vec<usize>>,
    row: BTreeMap<(usize, usize), Vec<usize>>,
    row_nonchoice: BTreeMap<(usize, usize), Vec<usize>>,
    row_nonquestion: BTreeMap<(usize, usize), Vec<usize>>,
    column: BTreeMap<(usize, usize), Vec<usize>>,
    table: BTreeMap<usize, Vec<usize>>,
    table_nonchoice: BTreeMap<usize, Vec<usize>>,
    qcons: BTreeMap<usize, Vec<usize>>,
    option: BTreeMap<usize, Vec<usize>>,
    column_option: BTreeMap<(usize, usize, usize), Vec<usize>>,
    /// Cell-cell edges per unordered table pair.
    inter_table: BTreeMap<(usize, usize), Vec<usize>>,
    /// Cell-question edges keyed by (cell, position).
    cell_qcons: BTreeMap<(Element, usize), usize>,
}

fn cell_parts(e: &Element) -> (usize, usize, usize) {
    match *e {
        Element::Cell { table, row, col } => (table, row, col),
        _ => unreachable!("not a cell: {e:?}"),
    }
}

fn group(problem: &IlpProblem) -> Groups {
    let mut g = Groups::default();
    for (i, v) in problem.vars.iter().enumerate() {
        let Some(meta) = &v.meta else { continue };
        if !meta.kind.is_edge() {
            continue;
        }
        let touch_cell = |g: &mut Groups, cell: &Element, nonchoice: bool, nonquestion: bool| {
            let (t, r, c) = cell_parts(cell);
            g.cell.entry(*cell).or_default().push(i);
            g.row.entry((t, r)).or_default().push(i);
            g.column.entry((t, c)).or_default().push(i);
            g.table.entry(t).or_default().push(i);
            if nonchoice {
                g.row_nonchoice.entry((t, r)).or_default().push(i);
                g.table_nonchoice.entry(t).or_default().push(i);
            }
            if nonquestion {
                g.row_nonquestion.entry((t, r)).or_default().push(i);
            }
        };
        match (meta.kind, &meta.ends[..]) {
            (VarKind::CellCell, [a, b]) => {
                touch_cell(&mut g, a, true, true);
                touch_cell(&mut g, b, true, true);
                let (ta, tb) = (a.table().unwrap(), b.table().unwrap());
                g.inter_table.entry((ta.min(tb), ta.max(tb))).or_default().push(i);
            }
            (VarKind::CellQcons, [cell, Element::Qcons { pos }]) => {
                touch_cell(&mut g, cell, true, false);
                g.qcons.entry(*pos).or_default().push(i);
                g.cell_qcons.insert((*cell, *pos), i);
            }
            (VarKind::CellOption, [cell, Element::Option { m }]) => {
                touch_cell(&mut g, cell, false, true);
                g.option.entry(*m).or_default().push(i);
                let (t, _, c) = cell_parts(cell);
                g.column_option.entry((t, c, *m)).or_default().push(i);
            }
            (VarKind::HeaderQcons, [h @ Element::Header { table, col }, Element::Qcons { pos }]) => {
                g.header.entry(*h).or_default().push(i);
                g.column.entry((*table, *col)).or_default().push(i);
                g.table.entry(*table).or_default().push(i);
                g.table_nonchoice.entry(*table).or_default().push(i);
                g.qcons.entry(*pos).or_default().push(i);
            }
            (VarKind::HeaderOption, [h @ Element::Header { table, col }, Element::Option { m }]) => {
                g.header.entry(*h).or_default().push(i);
                g.column.entry((*table, *col)).or_default().push(i);
                g.table.entry(*table).or_default().push(i);
                g.option.entry(*m).or_default().push(i);
                g.column_option.entry((*table, *col, *m)).or_default().push(i);
            }
            (kind, ends) => unreachable!("malformed edge {kind:?} {ends:?}"),
        }
    }
    g
}

/// Adds the full constraint catalog to a problem produced by
/// [`super::build_variables`].
pub fn build_constraints(mut problem: IlpProblem, ctx: &ModelContext<'_>, params: &ModelParams) -> Result<IlpProblem> {
    let k = &params.constants;
    let th = &params.thresholds;
    let g = group(&problem);
    let index: HashMap<String, usize> = problem.vars.iter().enumerate().map(|(i, v)| (v.name.clone(), i)).collect();
    let ids = problem.table_ids.clone();
    let unary = |e: Element| -> Option<usize> { index.get(&names::unary(&ids, &e)).copied() };
    let need = |e: Element| -> Result<usize> {
        let name = names::unary(&ids, &e);
        index.get(&name).copied().ok_or(Error::UndeclaredVariable { tag: "unary".into(), var: name })
    };
    let by_kind = |kind: VarKind| -> Vec<usize> {
        problem.vars.iter().enumerate().filter(|(_, v)| v.kind() == Some(kind)).map(|(i, _)| i).collect()
    };
    let mut em = Emitter { problem: &problem, out: Vec::new() };

    // activity linking in both directions
    for (&(t, r), edges) in &g.row {
        let row = need(Element::Row { table: t, row: r })?;
        em.needs_some(row, edges, "row_needs_edge");
    }
    for (&h, edges) in &g.header {
        let header = need(h)?;
        em.each_implies(header, edges, "header_active_if_edge");
        let Element::Header { table: t, col: c } = h else { unreachable!() };
        let col = need(Element::Column { table: t, col: c })?;
        em.each_implies(col, &[header], "column_active_if_header");
        em.needs_some(header, edges, "header_needs_edge");
        let weighted: Terms = edges.iter().map(|&e| (e, problem.vars[e].meta.as_ref().unwrap().score)).collect();
        let mut t = weighted;
        t.push((header, -th.min_active_title_aggr_alignment));
        em.emit(t, Sense::Ge, 0.0, "header_aggregate_alignment");
        let to_options: Vec<usize> =
            edges.iter().copied().filter(|&e| problem.vars[e].kind() == Some(VarKind::HeaderOption)).collect();
        if to_options.len() > 1 {
            em.cap(&to_options, header, 1, "header_single_option");
        }
    }
    for (&(t, c), edges) in &g.column {
        let col = need(Element::Column { table: t, col: c })?;
        em.needs_some(col, edges, "column_needs_edge");
    }
    for (&t, edges) in &g.table {
        let table = need(Element::Table { table: t })?;
        em.needs_some(table, edges, "table_needs_edge");
    }
    for m in 0..ctx.question.options.len() {
        let opt = need(Element::Option { m })?;
        let edges = g.option.get(&m).map(Vec::as_slice).unwrap_or(&[]);
        em.each_implies(opt, edges, "option_active_if_edge");
        em.needs_some(opt, edges, "option_needs_edge");
    }
    for (&pos, edges) in &g.qcons {
        let qc = need(Element::Qcons { pos })?;
        em.each_implies(qc, edges, "qcons_active_if_edge");
        em.needs_some(qc, edges, "qcons_needs_edge");
    }

    // budgets
    let tables = by_kind(VarKind::ActiveTable);
    em.sum_le(&tables, k.max_tables_to_chain as f64, "max_tables_to_chain");
    let rows = by_kind(VarKind::ActiveRow);
    for &t in g.table.keys() {
        let in_table: Vec<usize> =
            rows.iter().copied().filter(|&r| problem.vars[r].meta.as_ref().unwrap().ends[0].table() == Some(t)).collect();
        let table = need(Element::Table { table: t })?;
        em.cap(&in_table, table, k.max_rows_per_table, "max_rows_per_table");
        for &r in &in_table {
            em.each_implies(table, &[r], "row_implies_table");
        }
    }
    let qcons = by_kind(VarKind::ActiveQcons);
    if qcons.is_empty() {
        // no constituent can be active, so no option can be supported
        let opts = by_kind(VarKind::ActiveOption);
        em.sum_le(&opts, 0.0, "min_active_qcons");
    } else {
        em.emit(qcons.iter().map(|&q| (q, 1.0)).collect(), Sense::Ge, k.min_active_qcons as f64, "min_active_qcons");
    }

    // cell activity
    for (&cell, edges) in &g.cell {
        let c = need(cell)?;
        em.each_implies(c, edges, "cell_active_if_edge");
        // edges reach rows and columns through their cells
        let (t, r, col) = cell_parts(&cell);
        em.each_implies(need(Element::Row { table: t, row: r })?, &[c], "row_active_if_cell");
        em.each_implies(need(Element::Column { table: t, col })?, &[c], "column_active_if_cell");
        let mut t: Terms = edges.iter().map(|&e| (e, problem.vars[e].meta.as_ref().unwrap().score)).collect();
        t.push((c, -th.min_active_cell_aggr_alignment));
        em.emit(t, Sense::Ge, 0.0, "cell_aggregate_alignment");
        em.cap(edges, c, k.max_alignments_per_cell, "max_alignments_per_cell");
        // only one option is ever active, so a cell supports at most one
        let to_options: Vec<usize> =
            edges.iter().copied().filter(|&e| problem.vars[e].kind() == Some(VarKind::CellOption)).collect();
        if to_options.len() > 1 {
            em.cap(&to_options, c, 1, "cell_single_option");
        }
    }
    let mut column_cells: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut row_cells: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &cell in g.cell.keys() {
        let (t, r, c) = cell_parts(&cell);
        let v = need(cell)?;
        column_cells.entry((t, c)).or_default().push(v);
        row_cells.entry((t, r)).or_default().push(v);
    }
    for &(t, c) in g.column.keys() {
        let col = need(Element::Column { table: t, col: c })?;
        let cells = column_cells.get(&(t, c)).map(Vec::as_slice).unwrap_or(&[]);
        em.needs_some(col, cells, "column_needs_active_cell");
        let table = need(Element::Table { table: t })?;
        em.emit(vec![(col, 1.0), (table, -1.0)], Sense::Le, 0.0, "column_implies_table");
    }
    for &t in g.table.keys() {
        let table = need(Element::Table { table: t })?;
        let cols: Vec<usize> = g
            .column
            .keys()
            .filter(|(tt, _)| *tt == t)
            .map(|&(t, c)| need(Element::Column { table: t, col: c }))
            .collect::<Result<_>>()?;
        em.needs_some(table, &cols, "table_needs_column");
    }

    // column/table-for-option aggregates
    let col_opt = |t: usize, c: usize, m: usize| index.get(&format!("LA({},c{c}|a{m})", ids[t])).copied();
    let table_opt = |t: usize, m: usize| index.get(&format!("TA({}|a{m})", ids[t])).copied();
    let mut per_table_option: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut per_column: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (&(t, c, m), edges) in &g.column_option {
        let la = col_opt(t, c, m).expect("column-option variable exists");
        for &e in edges {
            em.emit(vec![(e, 1.0), (la, -1.0)], Sense::Le, 0.0, "column_choice_if_alignment");
        }
        em.needs_some(la, edges, "column_choice_needs_alignment");
        let ta = table_opt(t, m).expect("table-option variable exists");
        em.emit(vec![(la, 1.0), (ta, -1.0)], Sense::Le, 0.0, "column_choice_implies_table_choice");
        per_table_option.entry((t, m)).or_default().push(la);
        per_column.entry((t, c)).or_default().push(la);
    }
    let mut per_option_tables: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&(t, m), cols) in &per_table_option {
        let ta = table_opt(t, m).expect("table-option variable exists");
        em.needs_some(ta, cols, "table_choice_needs_column_choice");
        em.cap(cols, ta, k.max_active_choice_column, "max_active_choice_column");
        em.cap(cols, ta, k.max_active_choice_column_vars, "max_active_choice_column_vars");
        let nonchoice = g.table_nonchoice.get(&t).map(Vec::as_slice).unwrap_or(&[]);
        em.needs_some(ta, nonchoice, "table_choice_needs_nonchoice");
        per_option_tables.entry(m).or_default().push(ta);
    }
    for (&m, tas) in &per_option_tables {
        let opt = need(Element::Option { m })?;
        em.cap(tas, opt, k.max_active_table_choice_alignments, "max_active_table_choice_alignments");
    }
    for (&(t, c), las) in &per_column {
        let col = need(Element::Column { table: t, col: c })?;
        em.cap(las, col, k.max_active_column_choice_alignments, "max_active_column_choice_alignments");
    }

    // which-term boosts
    if let Some(&wa) = index.get("WHICH_ACTIVE") {
        em.emit(vec![(wa, 1.0)], Sense::Ge, 1.0, "which_term_active");
    }
    if let Some(&wl) = index.get("WHICH_ALIGNED") {
        let edges: Vec<usize> = problem
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.meta.as_ref().is_some_and(|m| m.which_hit))
            .map(|(i, _)| i)
            .collect();
        em.needs_some(wl, &edges, "which_term_aligned");
    }

    // per-constituent cap and coalignment distance rules
    for (&pos, edges) in &g.qcons {
        em.cap(edges, need(Element::Qcons { pos })?, k.max_alignments_per_qcons, "max_alignments_per_qcons");
    }
    let mut cell_positions: BTreeMap<Element, Vec<(usize, usize)>> = BTreeMap::new();
    for (&(cell, pos), &v) in &g.cell_qcons {
        cell_positions.entry(cell).or_default().push((pos, v));
    }
    for (cell, list) in &cell_positions {
        for (i, &(p1, v1)) in list.iter().enumerate() {
            for &(p2, v2) in &list[i + 1..] {
                let (lo, hi) = (p1.min(p2), p1.max(p2));
                if hi - lo > k.qcons_coalign_max_dist {
                    em.emit(vec![(v1, 1.0), (v2, 1.0)], Sense::Le, 1.0, "qcons_far_coalign");
                } else {
                    let name = format!("PROX({}|q{lo},q{hi})", names::element(&ids, cell));
                    let prox = index[&name];
                    em.emit(vec![(prox, 1.0), (v1, -1.0)], Sense::Le, 0.0, "proximity_boost");
                    em.emit(vec![(prox, 1.0), (v2, -1.0)], Sense::Le, 0.0, "proximity_boost");
                }
            }
        }
    }

    // relation matching
    let col_edges_to = |t: usize, col: usize, pos: Option<usize>, invert: bool| -> Vec<usize> {
        g.cell_qcons
            .iter()
            .filter(|((cell, p), _)| {
                let (ct, _, cc) = cell_parts(cell);
                ct == t && cc == col && pos.is_none_or(|q| (*p == q) != invert)
            })
            .map(|(_, &v)| v)
            .collect()
    };
    let quads = by_kind(VarKind::RelationMatchQuad);
    for &rm in &quads {
        let ends = &problem.vars[rm].meta.as_ref().unwrap().ends;
        let (
            Element::Column { table: t, col: kf },
            Element::Column { col: kt, .. },
            Element::Qcons { pos: pf },
            Element::Qcons { pos: pt },
        ) = (ends[0], ends[1], ends[2], ends[3])
        else {
            unreachable!()
        };
        for c in [kf, kt] {
            let col = need(Element::Column { table: t, col: c })?;
            em.emit(vec![(rm, 1.0), (col, -1.0)], Sense::Le, 0.0, "relation_match_columns");
        }
        for (c, p) in [(kf, pf), (kt, pt)] {
            let aligned = col_edges_to(t, c, Some(p), false);
            em.needs_some(rm, &aligned, "relation_match_alignment");
            for e in col_edges_to(t, c, Some(p), true) {
                em.emit(vec![(rm, 1.0), (e, 1.0)], Sense::Le, 1.0, "relation_match_position");
            }
        }
    }
    for pen in by_kind(VarKind::ColumnColumnRelation) {
        let ends = &problem.vars[pen].meta.as_ref().unwrap().ends;
        let (Element::Column { table: t, col: kf }, Element::Column { col: kt, .. }) = (ends[0], ends[1]) else { unreachable!() };
        let matching: Vec<usize> = quads
            .iter()
            .copied()
            .filter(|&q| {
                let e = &problem.vars[q].meta.as_ref().unwrap().ends;
                e[0] == ends[0] && e[1] == ends[1]
            })
            .collect();
        let from: Vec<(usize, usize)> = g
            .cell_qcons
            .iter()
            .filter(|((c, _), _)| {
                let (ct, _, cc) = cell_parts(c);
                ct == t && cc == kf
            })
            .map(|((_, p), &v)| (*p, v))
            .collect();
        let to: Vec<(usize, usize)> = g
            .cell_qcons
            .iter()
            .filter(|((c, _), _)| {
                let (ct, _, cc) = cell_parts(c);
                ct == t && cc == kt
            })
            .map(|((_, p), &v)| (*p, v))
            .collect();
        for &(pa, va) in &from {
            for &(pb, vb) in &to {
                if pa == pb {
                    continue;
                }
                let mut terms: Terms = vec![(va, 1.0), (vb, 1.0), (pen, -1.0)];
                terms.extend(matching.iter().map(|&q| (q, -1.0)));
                em.emit(terms, Sense::Le, 1.0, "relation_required");
            }
        }
    }

    // row structure
    for (&(t, r), cells) in &row_cells {
        let row = need(Element::Row { table: t, row: r })?;
        let mut terms: Terms = cells.iter().map(|&c| (c, 1.0)).collect();
        terms.push((row, -(k.min_active_cells_per_row as f64)));
        em.emit(terms, Sense::Ge, 0.0, "min_active_cells_per_row");
        let nonchoice = g.row_nonchoice.get(&(t, r)).map(Vec::as_slice).unwrap_or(&[]);
        em.needs_some(row, nonchoice, "row_needs_nonchoice");
        let nonquestion = g.row_nonquestion.get(&(t, r)).map(Vec::as_slice).unwrap_or(&[]);
        em.needs_some(row, nonquestion, "row_needs_nonquestion");
    }
    let mut rows_by_table: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(t, r) in row_cells.keys() {
        rows_by_table.entry(t).or_default().push(r);
    }
    for (&t, rs) in &rows_by_table {
        let table = ctx.tables[t].table;
        // an active row holds an active cell in every active column, so all
        // active rows of a table share one activity signature
        for &r in rs {
            let row = need(Element::Row { table: t, row: r })?;
            for col in 0..table.width() {
                let Some(column) = unary(Element::Column { table: t, col }) else { continue };
                let mut terms = vec![(row, 1.0), (column, 1.0)];
                if let Some(cell) = unary(Element::Cell { table: t, row: r, col }) {
                    terms.push((cell, -1.0));
                }
                em.emit(terms, Sense::Le, 1.0, "row_signature");
            }
        }
        for (a, &ra) in rs.iter().enumerate() {
            for &rb in &rs[a + 1..] {
                let va = need(Element::Row { table: t, row: ra })?;
                let vb = need(Element::Row { table: t, row: rb })?;
                let differing: Terms = (0..table.width())
                    .filter(|&c| tokenize(&table.rows[ra][c]) != tokenize(&table.rows[rb][c]))
                    .filter_map(|c| unary(Element::Column { table: t, col: c }))
                    .map(|v| (v, 1.0))
                    .collect();
                let mut terms = differing;
                terms.push((va, -1.0));
                terms.push((vb, -1.0));
                em.emit(terms, Sense::Ge, -1.0, "row_distinct");
            }
        }
    }

    // any two active tables must be joined by an active cell-cell edge
    for (a, &ta) in tables.iter().enumerate() {
        for &tb in &tables[a + 1..] {
            let (ia, ib) = (
                problem.vars[ta].meta.as_ref().unwrap().ends[0].table().unwrap(),
                problem.vars[tb].meta.as_ref().unwrap().ends[0].table().unwrap(),
            );
            let key = (ia.min(ib), ia.max(ib));
            let mut terms = vec![(ta, 1.0), (tb, 1.0)];
            terms.extend(g.inter_table.get(&key).into_iter().flatten().map(|&e| (e, -1.0)));
            em.emit(terms, Sense::Le, 1.0, "inter_table_link");
        }
    }

    let out = em.out;
    problem.cons.extend(out);
    problem.validate()?;
    Ok(problem)
}
