//! Semi-structured table knowledge: n-ary string predicates with headers,
//! column-relation annotations and a cross-table join map.

mod io;
mod retrieval;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{normalize, Stopwords};

pub use io::{load_corpus, load_corpus_with, save_corpus, METADATA_FILE};
pub use retrieval::{select_rows, select_tables, table_scores, DEFAULT_ROWS, DEFAULT_TABLES};

/// Annotated semantic relation between two columns of one table, with the
/// surface patterns (`X` and `Y` placeholders) that express it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnRelation {
    #[serde(rename = "name")]
    pub relation_name: String,
    pub from_col: usize,
    pub to_col: usize,
    pub patterns: Vec<String>,
}

impl ColumnRelation {
    fn validate(&self, table: &str, width: usize) -> Result<()> {
        let bad = |reason: String| Error::InvalidTable { table: table.to_owned(), reason };
        if self.from_col == self.to_col {
            return Err(bad(format!("relation `{}` links a column to itself", self.relation_name)));
        }
        if self.from_col >= width || self.to_col >= width {
            return Err(bad(format!("relation `{}` column out of range", self.relation_name)));
        }
        for p in &self.patterns {
            let words: Vec<&str> = p.split_whitespace().collect();
            let xs = words.iter().filter(|w| **w == "X").count();
            let ys = words.iter().filter(|w| **w == "Y").count();
            if xs != 1 || ys != 1 {
                return Err(Error::MalformedPattern(p.clone()));
            }
        }
        Ok(())
    }
}

/// A k-column table; every row is one instance of the predicate.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub id: String,
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub relations: Vec<ColumnRelation>,
    pub is_open_ie: bool,
}

impl Table {
    /// Builds a table, normalizing every header and cell.
    pub fn new(id: impl Into<String>, title: impl Into<String>, headers: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self> {
        let table = Table {
            id: id.into(),
            title: title.into(),
            headers: headers.iter().map(|h| normalize(h)).collect(),
            rows: rows.iter().map(|r| r.iter().map(|c| normalize(c)).collect()).collect(),
            relations: Vec::new(),
            is_open_ie: false,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn with_relations(mut self, relations: Vec<ColumnRelation>) -> Result<Self> {
        self.relations = relations;
        self.validate()?;
        Ok(self)
    }

    pub fn open_ie(mut self, flag: bool) -> Self {
        self.is_open_ie = flag;
        self
    }

    pub fn width(&self) -> usize {
        self.headers.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::InvalidTable { table: self.id.clone(), reason };
        if self.id.is_empty() {
            return Err(bad("empty id".into()));
        }
        if self.headers.is_empty() {
            return Err(bad("no headers".into()));
        }
        if let Some(k) = self.headers.iter().position(String::is_empty) {
            return Err(bad(format!("header {k} is empty")));
        }
        for (j, row) in self.rows.iter().enumerate() {
            if row.len() != self.width() {
                return Err(bad(format!("row {j} has {} cells, expected {}", row.len(), self.width())));
            }
            if let Some(k) = row.iter().position(String::is_empty) {
                return Err(bad(format!("row {j} cell {k} is empty")));
            }
        }
        for rel in &self.relations {
            rel.validate(&self.id, self.width())?;
        }
        Ok(())
    }
}

type ColumnKey = (String, usize);

/// Manually curated 0/1 weights saying which header pairs across tables form
/// a meaningful join. Symmetric; absent pairs weigh 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JoinMap {
    entries: BTreeMap<(ColumnKey, ColumnKey), u8>,
}

impl JoinMap {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(t1: &str, c1: usize, t2: &str, c2: usize) -> (ColumnKey, ColumnKey) {
        let a = (t1.to_owned(), c1);
        let b = (t2.to_owned(), c2);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Sets the weight of a header pair; any non-zero weight is stored as 1.
    pub fn insert(&mut self, t1: &str, c1: usize, t2: &str, c2: usize, weight: u8) {
        self.entries.insert(Self::key(t1, c1, t2, c2), u8::from(weight != 0));
    }

    pub fn weight(&self, t1: &str, c1: usize, t2: &str, c2: usize) -> u8 {
        self.entries.get(&Self::key(t1, c1, t2, c2)).copied().unwrap_or(0)
    }

    pub fn joinable(&self, t1: &str, c1: usize, t2: &str, c2: usize) -> bool {
        self.weight(t1, c1, t2, c2) == 1
    }

    /// Entries in canonical order as `(t1, c1, t2, c2, weight)`.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize, &str, usize, u8)> {
        self.entries.iter().map(|(((t1, c1), (t2, c2)), w)| (t1.as_str(), *c1, t2.as_str(), *c2, *w))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The immutable knowledge base. Safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct TableCorpus {
    pub tables: Vec<Table>,
    pub stopwords: Stopwords,
    pub join_map: JoinMap,
}

impl TableCorpus {
    pub fn new(tables: Vec<Table>, stopwords: Stopwords, join_map: JoinMap) -> Result<Self> {
        let corpus = TableCorpus { tables, stopwords, join_map };
        corpus.validate()?;
        Ok(corpus)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for t in &self.tables {
            if !seen.insert(t.id.as_str()) {
                return Err(Error::DuplicateTable(t.id.clone()));
            }
            t.validate()?;
        }
        if self.stopwords.is_empty() {
            return Err(Error::Config("stopword set is empty".into()));
        }
        Ok(())
    }

    pub fn table(&self, id: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.id == id)
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }
}
