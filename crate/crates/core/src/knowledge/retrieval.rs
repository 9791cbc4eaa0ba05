//! TF-IDF table selection and per-table row filtering.

use std::collections::{BTreeSet, HashMap};

use super::{Table, TableCorpus};
use crate::question::Question;
use crate::text::tokenize;

pub const DEFAULT_TABLES: usize = 7;
pub const DEFAULT_ROWS: usize = 20;

fn question_terms(question: &Question) -> BTreeSet<&str> {
    question.constituents.iter().map(|c| c.text.as_str()).collect()
}

fn term_counts(table: &Table) -> HashMap<String, usize> {
    let mut counts = HashMap::new();
    for text in table.headers.iter().chain(table.rows.iter().flatten()) {
        for tok in tokenize(text) {
            *counts.entry(tok).or_insert(0) += 1;
        }
    }
    counts
}

/// TF-IDF score of every table against the question's content terms, in
/// corpus order. TF is the raw count, IDF is `ln(N / df)`.
pub fn table_scores(question: &Question, corpus: &TableCorpus) -> Vec<f64> {
    let terms = question_terms(question);
    let counts: Vec<_> = corpus.tables.iter().map(term_counts).collect();
    let n = corpus.tables.len() as f64;
    let idf: HashMap<&str, f64> = terms
        .iter()
        .map(|t| {
            let df = counts.iter().filter(|c| c.contains_key(*t)).count();
            (*t, if df == 0 { 0.0 } else { (n / df as f64).ln() })
        })
        .collect();
    counts.iter().map(|c| terms.iter().map(|t| c.get(*t).copied().unwrap_or(0) as f64 * idf[t]).sum()).collect()
}

/// The `k` best tables by TF-IDF, ties broken by ascending table id.
pub fn select_tables<'c>(question: &Question, corpus: &'c TableCorpus, k: usize) -> Vec<&'c Table> {
    let scores = table_scores(question, corpus);
    let mut order: Vec<usize> = (0..corpus.tables.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then_with(|| corpus.tables[a].id.cmp(&corpus.tables[b].id)));
    order.into_iter().take(k).map(|i| &corpus.tables[i]).collect()
}

/// Indices of the `n` rows sharing the most distinct question terms, ties
/// broken by ascending row index.
pub fn select_rows(question: &Question, table: &Table, n: usize) -> Vec<usize> {
    let terms = question_terms(question);
    let overlap: Vec<usize> = table
        .rows
        .iter()
        .map(|row| {
            let toks: BTreeSet<String> = row.iter().flat_map(|c| tokenize(c)).collect();
            terms.iter().filter(|t| toks.contains(**t)).count()
        })
        .collect();
    let mut order: Vec<usize> = (0..table.rows.len()).collect();
    order.sort_by(|&a, &b| overlap[b].cmp(&overlap[a]).then(a.cmp(&b)));
    order.truncate(n);
    order
}
