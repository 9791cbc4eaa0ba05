//! On-disk corpus format: one UTF-8 TSV per table plus a JSON metadata file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ColumnRelation, JoinMap, Table, TableCorpus};
use crate::error::{Error, Result};
use crate::text::{normalize, Stopwords};

pub const METADATA_FILE: &str = "corpus.json";

#[derive(Debug, Serialize, Deserialize)]
struct Metadata {
    tables: Vec<TableMeta>,
    #[serde(default)]
    joins: Vec<JoinMeta>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TableMeta {
    id: String,
    file: String,
    #[serde(default)]
    title: String,
    #[serde(default)]
    open_ie: bool,
    #[serde(default)]
    relations: Vec<ColumnRelation>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JoinMeta {
    t1: String,
    c1: usize,
    t2: String,
    c2: usize,
    weight: u8,
}

/// Loads a corpus using the bundled stopword list.
pub fn load_corpus(dir: &Path) -> Result<TableCorpus> {
    load_corpus_with(dir, Stopwords::bundled())
}

pub fn load_corpus_with(dir: &Path, stopwords: Stopwords) -> Result<TableCorpus> {
    let meta_path = dir.join(METADATA_FILE);
    if !meta_path.is_file() {
        let has_tsv = fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|e| e.ok())
            .any(|e| e.path().extension().is_some_and(|x| x == "tsv"));
        return Err(if has_tsv { Error::MissingMetadata(meta_path) } else { Error::NoTables(dir.to_owned()) });
    }
    let raw = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let meta: Metadata = serde_json::from_str(&raw).map_err(|source| Error::Json { path: meta_path.clone(), source })?;
    if meta.tables.is_empty() {
        return Err(Error::NoTables(dir.to_owned()));
    }

    let mut tables = Vec::with_capacity(meta.tables.len());
    for tm in meta.tables {
        let path = dir.join(&tm.file);
        let (headers, rows) = read_tsv(&path)?;
        let mut table = Table { id: tm.id, title: tm.title, headers, rows, relations: tm.relations, is_open_ie: tm.open_ie };
        // headers/cells are already normalized by read_tsv
        table.relations.iter_mut().for_each(|r| r.relation_name = r.relation_name.trim().to_owned());
        tables.push(table);
    }

    let mut join_map = JoinMap::new();
    for j in meta.joins {
        for (t, c) in [(&j.t1, j.c1), (&j.t2, j.c2)] {
            let known = tables.iter().find(|tb| &tb.id == t).map(|tb| c < tb.width());
            if known != Some(true) {
                return Err(Error::InvalidTable { table: t.clone(), reason: format!("join references unknown column {c}") });
            }
        }
        if j.weight > 1 {
            return Err(Error::InvalidTable { table: j.t1, reason: "join weight must be 0 or 1".into() });
        }
        join_map.insert(&j.t1, j.c1, &j.t2, j.c2, j.weight);
    }

    TableCorpus::new(tables, stopwords, join_map)
}

fn read_tsv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let src = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut headers: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (idx, line) in src.lines().enumerate() {
        let lineno = idx + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let cells: Vec<String> = line.split('\t').map(normalize).collect();
        if let Some(col) = cells.iter().position(String::is_empty) {
            return Err(Error::EmptyCell { file: path.to_owned(), line: lineno, col });
        }
        match &headers {
            None => headers = Some(cells),
            Some(h) if h.len() != cells.len() => {
                return Err(Error::RaggedRow { file: path.to_owned(), line: lineno, expected: h.len(), found: cells.len() })
            }
            Some(_) => rows.push(cells),
        }
    }
    let headers =
        headers.ok_or_else(|| Error::InvalidTable { table: path.display().to_string(), reason: "no header line".into() })?;
    Ok((headers, rows))
}

/// Writes `corpus` to `dir` as `<id>.tsv` files plus the metadata file.
pub fn save_corpus(corpus: &TableCorpus, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut meta = Metadata { tables: Vec::new(), joins: Vec::new() };
    for t in &corpus.tables {
        let file = format!("{}.tsv", t.id);
        let mut out = t.headers.join("\t");
        out.push('\n');
        for row in &t.rows {
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        let path: PathBuf = dir.join(&file);
        fs::write(&path, out).map_err(|e| Error::io(&path, e))?;
        meta.tables.push(TableMeta {
            id: t.id.clone(),
            file,
            title: t.title.clone(),
            open_ie: t.is_open_ie,
            relations: t.relations.clone(),
        });
    }
    for (t1, c1, t2, c2, weight) in corpus.join_map.iter() {
        meta.joins.push(JoinMeta { t1: t1.into(), c1, t2: t2.into(), c2, weight });
    }
    let path = dir.join(METADATA_FILE);
    let json = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    fs::write(&path, json).map_err(|e| Error::io(&path, e))
}
