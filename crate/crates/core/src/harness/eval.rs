use std::thread;

use serde::Serialize;

use super::{answer_question, AnswerSelection, Config};
use crate::error::{Error, Result};
use crate::knowledge::TableCorpus;
use crate::question::Question;

/// 1 for a sole correct choice, `1/k` for a k-way tie containing the gold
/// option, 0 otherwise.
pub fn score_answer(selection: &AnswerSelection, gold: usize) -> f64 {
    if selection.chosen.contains(&gold) {
        1.0 / selection.chosen.len() as f64
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalRecord {
    pub id: String,
    pub gold: usize,
    pub selection: AnswerSelection,
    pub score: f64,
}

/// Per-question statistics averaged over a dataset. Times are rounded to
/// hundredths of a second.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MeanStats {
    pub n_variables: f64,
    pub n_constraints: f64,
    pub lp_iterations: f64,
    pub n_active_rows: f64,
    pub n_active_tables: f64,
    pub model_build_seconds: f64,
    pub solve_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    /// Mean score as a percentage.
    pub score: f64,
    pub n_questions: usize,
    pub n_abstained: usize,
    pub n_ties: usize,
    pub mean_stats: MeanStats,
    pub records: Vec<EvalRecord>,
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

pub fn summarize(records: Vec<EvalRecord>) -> EvalReport {
    let n = records.len().max(1) as f64;
    let mean = |f: &dyn Fn(&EvalRecord) -> f64| records.iter().map(f).sum::<f64>() / n;
    let mean_stats = MeanStats {
        n_variables: mean(&|r| r.selection.stats.n_variables as f64),
        n_constraints: mean(&|r| r.selection.stats.n_constraints as f64),
        lp_iterations: mean(&|r| r.selection.stats.lp_iterations as f64),
        n_active_rows: mean(&|r| r.selection.stats.n_active_rows as f64),
        n_active_tables: mean(&|r| r.selection.stats.n_active_tables as f64),
        model_build_seconds: round2(mean(&|r| r.selection.stats.model_build_seconds)),
        solve_seconds: round2(mean(&|r| r.selection.stats.solve_seconds)),
    };
    EvalReport {
        score: 100.0 * mean(&|r| r.score),
        n_questions: records.len(),
        n_abstained: records.iter().filter(|r| r.selection.abstained()).count(),
        n_ties: records.iter().filter(|r| r.selection.is_tie()).count(),
        mean_stats,
        records,
    }
}

fn evaluate_one(q: &Question, corpus: &TableCorpus, config: &Config) -> Result<EvalRecord> {
    let gold = q.answer_key.ok_or_else(|| Error::InvalidQuestion { id: q.id.clone(), reason: "missing answer key".into() })?;
    let selection = answer_question(q, corpus, config)?;
    let score = score_answer(&selection, gold);
    Ok(EvalRecord { id: q.id.clone(), gold, selection, score })
}

/// Answers every question, fanning out over the available cores. Records
/// keep the dataset order.
pub fn evaluate(dataset: &[Question], corpus: &TableCorpus, config: &Config) -> Result<EvalReport> {
    if dataset.is_empty() {
        return Err(Error::Config("empty question set".into()));
    }
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(dataset.len());
    let chunk = dataset.len().div_ceil(workers);
    let results: Vec<Result<Vec<EvalRecord>>> = thread::scope(|s| {
        let handles: Vec<_> = dataset
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|q| evaluate_one(q, corpus, config)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("evaluation worker panicked")).collect()
    });
    let mut records = Vec::with_capacity(dataset.len());
    for r in results {
        records.extend(r?);
    }
    Ok(summarize(records))
}
