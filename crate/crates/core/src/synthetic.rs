//! Deterministic desk-scale workload: a handful of science-flavoured tables
//! whose cells share enough vocabulary with one question to produce a model
//! with about a thousand variables.

use crate::error::Result;
use crate::knowledge::{JoinMap, Table, TableCorpus};
use crate::question::Question;
use crate::text::Stopwords;

const QUESTION: &str = "Which process changes liquid water into vapor when warm air moves over the ocean surface?";
const OPTIONS: [&str; 4] = ["evaporation", "condensation", "freezing", "melting"];

const WORDS: [&str; 32] = [
    "water",
    "vapor",
    "liquid",
    "ocean",
    "surface",
    "warm",
    "air",
    "process",
    "evaporation",
    "condensation",
    "freezing",
    "melting",
    "cloud",
    "rock",
    "soil",
    "plant",
    "energy",
    "heat",
    "ice",
    "river",
    "wind",
    "light",
    "salt",
    "gas",
    "solid",
    "animal",
    "forest",
    "layer",
    "sand",
    "moon",
    "storm",
    "season",
];

#[derive(Debug, Clone)]
pub struct Workload {
    pub corpus: TableCorpus,
    pub question: Question,
}

fn cell(t: usize, r: usize, c: usize) -> String {
    let n = WORDS.len();
    let a = WORDS[(t * 31 + r * 7 + c * 3) % n];
    let b = WORDS[(t * 17 + r * 5 + c * 11 + 1) % n];
    if a == b {
        a.to_owned()
    } else {
        format!("{a} {b}")
    }
}

/// `n_tables` tables of `n_rows` rows and `width` columns, chained by joins
/// from the last column of each table to the first column of the next.
pub fn workload(n_tables: usize, n_rows: usize, width: usize) -> Result<Workload> {
    let stopwords = Stopwords::bundled();
    let mut tables = Vec::with_capacity(n_tables);
    let mut join_map = JoinMap::new();
    for t in 0..n_tables {
        let id = format!("t{t}");
        let headers = (0..width).map(|c| WORDS[(t * 5 + c * 9 + 12) % WORDS.len()].to_owned()).collect();
        let rows = (0..n_rows).map(|r| (0..width).map(|c| cell(t, r, c)).collect()).collect();
        tables.push(Table::new(id.clone(), format!("table {t}"), headers, rows)?);
        if t + 1 < n_tables {
            join_map.insert(&id, width - 1, &format!("t{}", t + 1), 0, 1);
        }
    }
    let question = Question::parse("desk", QUESTION, &OPTIONS, Some(0), &stopwords)?;
    let corpus = TableCorpus::new(tables, stopwords, join_map)?;
    Ok(Workload { corpus, question })
}

/// Seven tables of twenty rows with three columns each.
pub fn desk_scale() -> Result<Workload> {
    workload(7, 20, 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let a = desk_scale().unwrap();
        let b = desk_scale().unwrap();
        assert_eq!(a.corpus.len(), 7);
        assert!(a.corpus.tables.iter().all(|t| t.rows.len() == 20 && t.headers.len() == 3));
        assert_eq!(a.corpus.tables, b.corpus.tables);
        assert_eq!(a.corpus.join_map.len(), 6);
    }
}
