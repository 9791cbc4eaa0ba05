//! Direct statement of the model's structural rules over an assignment,
//! written against variable semantics rather than generated rows.

use std::collections::{BTreeMap, BTreeSet};

use tableqa::ilp::{Element, IlpProblem, ModelParams, VarKind};
use tableqa::knowledge::Table;
use tableqa::text::tokenize;

#[derive(Default)]
struct Active {
    edges: Vec<(VarKind, Vec<Element>, f64)>,
    units: BTreeSet<Element>,
    col_opt: BTreeSet<(usize, usize, usize)>,
    table_opt: BTreeSet<(usize, usize)>,
    which_active: bool,
    which_aligned: bool,
    prox: Vec<Vec<Element>>,
    rm: Vec<Vec<Element>>,
    ll: Vec<Vec<Element>>,
}

fn cell_of(e: &Element) -> Option<(usize, usize, usize)> {
    match *e {
        Element::Cell { table, row, col } => Some((table, row, col)),
        _ => None,
    }
}

/// Names of the rules an assignment breaks; empty means acceptable.
pub fn violated_rules(problem: &IlpProblem, tables: &[&Table], params: &ModelParams, values: &[bool]) -> BTreeSet<&'static str> {
    let k = &params.constants;
    let th = &params.thresholds;
    let mut bad = BTreeSet::new();
    let mut a = Active::default();
    let mut declared_units = BTreeSet::new();
    let mut which_edges_exist = Vec::new();
    let mut all_rm = Vec::new();
    for (v, &on) in problem.vars.iter().zip(values) {
        let m = v.meta.as_ref().expect("model variable");
        if m.kind == VarKind::AuxWhichAligned || m.which_hit {
            which_edges_exist.push((m.ends.clone(), on, m.which_hit));
        }
        if m.kind == VarKind::RelationMatchQuad {
            all_rm.push(m.ends.clone());
        }
        match m.kind {
            kind if kind.is_edge() => {
                if on {
                    a.edges.push((kind, m.ends.clone(), m.score));
                }
            }
            VarKind::ColumnOption => {
                if let [Element::Column { table, col }, Element::Option { m: opt }] = m.ends[..] {
                    if on {
                        a.col_opt.insert((table, col, opt));
                    }
                }
            }
            VarKind::TableOption => {
                if let [Element::Table { table }, Element::Option { m: opt }] = m.ends[..] {
                    if on {
                        a.table_opt.insert((table, opt));
                    }
                }
            }
            VarKind::AuxWhichActive => a.which_active = on,
            VarKind::AuxWhichAligned => a.which_aligned = on,
            VarKind::AuxCellProximity => {
                if on {
                    a.prox.push(m.ends.clone());
                }
            }
            VarKind::RelationMatchQuad => {
                if on {
                    a.rm.push(m.ends.clone());
                }
            }
            VarKind::ColumnColumnRelation => {
                if on {
                    a.ll.push(m.ends.clone());
                }
            }
            _ => {
                declared_units.insert(m.ends[0]);
                if on {
                    a.units.insert(m.ends[0]);
                }
            }
        }
    }
    let on = |e: Element| a.units.contains(&e);
    let mut check = |ok: bool, rule: &'static str| {
        if !ok {
            bad.insert(rule);
        }
    };

    // what each active edge touches
    let touched = |ends: &[Element]| -> Vec<Element> {
        let mut out = Vec::new();
        for e in ends {
            out.push(*e);
            match *e {
                Element::Cell { table, row, col } => {
                    out.push(Element::Row { table, row });
                    out.push(Element::Column { table, col });
                    out.push(Element::Table { table });
                }
                Element::Header { table, col } => {
                    out.push(Element::Column { table, col });
                    out.push(Element::Table { table });
                }
                _ => {}
            }
        }
        out
    };
    let mut support: BTreeMap<Element, Vec<(VarKind, f64)>> = BTreeMap::new();
    for (kind, ends, w) in &a.edges {
        for e in touched(ends) {
            support.entry(e).or_default().push((*kind, *w));
        }
    }

    // every active edge switches on its elements, and every active element
    // has an incident active edge
    for (_, ends, _) in &a.edges {
        for e in touched(ends) {
            check(on(e), "edge implies elements");
        }
    }
    for e in &a.units {
        check(support.contains_key(e), "element needs edge");
    }

    let options: Vec<_> = a.units.iter().filter(|e| matches!(e, Element::Option { .. })).collect();
    check(options.len() == 1, "one option");
    let tables_on: Vec<usize> = a
        .units
        .iter()
        .filter_map(|e| match *e {
            Element::Table { table } => Some(table),
            _ => None,
        })
        .collect();
    check(tables_on.len() <= k.max_tables_to_chain, "table budget");
    let mut rows_per_table: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in &a.units {
        if let Element::Row { table, row } = *e {
            rows_per_table.entry(table).or_default().push(row);
        }
    }
    check(rows_per_table.values().all(|r| r.len() <= k.max_rows_per_table), "row budget");
    let qcons_on = a.units.iter().filter(|e| matches!(e, Element::Qcons { .. })).count();
    check(qcons_on >= k.min_active_qcons, "min constituents");

    // aggregate alignment of active cells and headers
    for e in &a.units {
        if matches!(e, Element::Cell { .. } | Element::Header { .. }) {
            let direct: f64 = a.edges.iter().filter(|(_, ends, _)| ends.contains(e)).map(|(_, _, w)| w).sum();
            let min = if matches!(e, Element::Cell { .. }) {
                th.min_active_cell_aggr_alignment
            } else {
                th.min_active_title_aggr_alignment
            };
            check(direct >= min - 1e-9, "aggregate alignment");
            if let Element::Cell { .. } = e {
                let n = a.edges.iter().filter(|(_, ends, _)| ends.contains(e)).count();
                check(n <= k.max_alignments_per_cell, "cell alignment cap");
            }
        }
    }
    // active columns hold an active cell and sit in an active table
    for e in &a.units {
        if let Element::Column { table, col } = *e {
            let has_cell = a.units.iter().any(|u| matches!(*u, Element::Cell { table: t, col: c, .. } if t == table && c == col));
            check(has_cell, "column needs cell");
            check(on(Element::Table { table }), "column implies table");
        }
        if let Element::Table { table } = *e {
            check(a.units.iter().any(|u| matches!(*u, Element::Column { table: t, .. } if t == table)), "table needs column");
        }
    }

    // option columns and tables
    let mut option_edge_cols: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for (kind, ends, _) in &a.edges {
        if matches!(kind, VarKind::CellOption | VarKind::HeaderOption) {
            let (t, c) = match ends[0] {
                Element::Cell { table, col, .. } | Element::Header { table, col } => (table, col),
                _ => unreachable!(),
            };
            if let Element::Option { m } = ends[1] {
                option_edge_cols.insert((t, c, m));
            }
        }
    }
    check(option_edge_cols == a.col_opt, "column choice iff alignment");
    let tables_from_cols: BTreeSet<(usize, usize)> = a.col_opt.iter().map(|&(t, _, m)| (t, m)).collect();
    check(tables_from_cols == a.table_opt, "table choice iff column choice");
    for &(t, m) in &a.table_opt {
        let cols = a.col_opt.iter().filter(|&&(tt, _, mm)| tt == t && mm == m).count();
        check(cols <= k.max_active_choice_column.min(k.max_active_choice_column_vars), "choice columns per table");
        let nonchoice = a.edges.iter().any(|(kind, ends, _)| {
            matches!(kind, VarKind::CellQcons | VarKind::HeaderQcons | VarKind::CellCell)
                && ends.iter().any(|e| e.table() == Some(t))
        });
        check(nonchoice, "table choice needs non-choice alignment");
    }
    let mut per_column: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(t, c, _) in &a.col_opt {
        *per_column.entry((t, c)).or_default() += 1;
    }
    check(per_column.values().all(|&n| n <= k.max_active_column_choice_alignments), "options per column");
    let mut per_option: BTreeMap<usize, usize> = BTreeMap::new();
    for &(_, m) in &a.table_opt {
        *per_option.entry(m).or_default() += 1;
    }
    check(per_option.values().all(|&n| n <= k.max_active_table_choice_alignments), "tables per option");

    // which-term auxiliaries
    let which_declared = problem.vars.iter().any(|v| v.kind() == Some(VarKind::AuxWhichActive));
    if which_declared {
        check(a.which_active, "which active");
    }
    if a.which_aligned {
        check(which_edges_exist.iter().any(|(_, on, hit)| *on && *hit), "which aligned needs edge");
    }

    // constituents: alignment cap, far co-alignment, proximity
    let mut per_qcons: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cell_qcons: BTreeMap<(usize, usize, usize), Vec<usize>> = BTreeMap::new();
    for (kind, ends, _) in &a.edges {
        if let [x, Element::Qcons { pos }] = ends[..] {
            *per_qcons.entry(pos).or_default() += 1;
            if *kind == VarKind::CellQcons {
                cell_qcons.entry(cell_of(&x).unwrap()).or_default().push(pos);
            }
        }
    }
    check(per_qcons.values().all(|&n| n <= k.max_alignments_per_qcons), "constituent alignment cap");
    for ps in cell_qcons.values() {
        for (i, p) in ps.iter().enumerate() {
            for q in &ps[i + 1..] {
                check(p.abs_diff(*q) <= k.qcons_coalign_max_dist, "far co-alignment");
            }
        }
    }
    for ends in &a.prox {
        let cell = cell_of(&ends[0]).unwrap();
        let ps = cell_qcons.get(&cell).cloned().unwrap_or_default();
        let both = ends[1..].iter().all(|e| matches!(e, Element::Qcons { pos } if ps.contains(pos)));
        check(both, "proximity needs both alignments");
    }

    // relation matching
    let cq_in_col = |t: usize, c: usize| -> Vec<usize> {
        cell_qcons.iter().filter(|((ct, _, cc), _)| *ct == t && *cc == c).flat_map(|(_, ps)| ps.clone()).collect()
    };
    for ends in &a.rm {
        let [Element::Column { table: t, col: cf }, Element::Column { col: ct, .. }, Element::Qcons { pos: pf }, Element::Qcons { pos: pt }] =
            ends[..]
        else {
            unreachable!()
        };
        check(on(ends[0]) && on(ends[1]), "relation columns");
        let from = cq_in_col(t, cf);
        let to = cq_in_col(t, ct);
        check(from.contains(&pf) && to.contains(&pt), "relation alignment");
        check(from.iter().all(|&p| p == pf) && to.iter().all(|&p| p == pt), "relation position");
    }
    for ends in
        problem.vars.iter().filter(|v| v.kind() == Some(VarKind::ColumnColumnRelation)).map(|v| &v.meta.as_ref().unwrap().ends)
    {
        let [Element::Column { table: t, col: cf }, Element::Column { col: ct, .. }] = ends[..] else { unreachable!() };
        let from = cq_in_col(t, cf);
        let to = cq_in_col(t, ct);
        let needs = from.iter().any(|p| to.iter().any(|q| p != q));
        let matched = a.rm.iter().any(|r| r[0] == ends[0] && r[1] == ends[1]);
        let penalized = a.ll.iter().any(|l| l == ends);
        if needs {
            check(matched || penalized, "relation required");
        }
    }
    let _ = all_rm;

    // rows
    let mut cells_per_row: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    for e in &a.units {
        if let Element::Cell { table, row, col } = *e {
            cells_per_row.entry((table, row)).or_default().insert(col);
        }
    }
    for (&t, rows) in &rows_per_table {
        for &r in rows {
            let cells = cells_per_row.get(&(t, r)).cloned().unwrap_or_default();
            check(cells.len() >= k.min_active_cells_per_row, "row fill");
            let in_row = |e: &Element| matches!(*e, Element::Cell { table, row, .. } if table == t && row == r);
            let nonchoice = a
                .edges
                .iter()
                .any(|(kind, ends, _)| matches!(kind, VarKind::CellQcons | VarKind::CellCell) && ends.iter().any(in_row));
            let nonquestion = a
                .edges
                .iter()
                .any(|(kind, ends, _)| matches!(kind, VarKind::CellOption | VarKind::CellCell) && ends.iter().any(in_row));
            check(nonchoice, "row non-choice");
            check(nonquestion, "row non-question");
        }
        for (i, &r1) in rows.iter().enumerate() {
            for &r2 in &rows[i + 1..] {
                let s1 = cells_per_row.get(&(t, r1)).cloned().unwrap_or_default();
                let s2 = cells_per_row.get(&(t, r2)).cloned().unwrap_or_default();
                check(s1 == s2, "row signature");
                let table = tables[t];
                let differs = (0..table.width()).any(|c| {
                    on(Element::Column { table: t, col: c }) && tokenize(&table.rows[r1][c]) != tokenize(&table.rows[r2][c])
                });
                check(differs, "row distinct");
            }
        }
    }

    // active tables are pairwise linked
    for (i, &t1) in tables_on.iter().enumerate() {
        for &t2 in &tables_on[i + 1..] {
            let linked = a.edges.iter().any(|(kind, ends, _)| {
                *kind == VarKind::CellCell && {
                    let (x, y) = (ends[0].table().unwrap(), ends[1].table().unwrap());
                    (x, y) == (t1, t2) || (x, y) == (t2, t1)
                }
            });
            check(linked, "tables linked");
        }
    }
    let _ = declared_units;
    bad
}

/// Assignments on which the generated rows and the rule checker disagree.
pub fn exhaustive_discrepancies(problem: &IlpProblem, tables: &[&Table], params: &ModelParams) -> (usize, usize) {
    let n = problem.vars.len();
    assert!(n <= 18, "{n} variables");
    let mut feasible = 0;
    let mut mismatches = 0;
    let mut values = vec![false; n];
    for mask in 0u32..(1 << n) {
        for (j, v) in values.iter_mut().enumerate() {
            *v = mask >> j & 1 == 1;
        }
        let rows_ok = problem.is_feasible(&values);
        let rules_ok = violated_rules(problem, tables, params, &values).is_empty();
        feasible += rows_ok as usize;
        if rows_ok != rules_ok {
            mismatches += 1;
            if mismatches <= 3 {
                let on: Vec<&str> = problem.vars.iter().zip(&values).filter(|(_, &x)| x).map(|(v, _)| v.name.as_str()).collect();
                eprintln!("rows {rows_ok} rules {:?}: {on:?}", violated_rules(problem, tables, params, &values));
            }
        }
    }
    (feasible, mismatches)
}
