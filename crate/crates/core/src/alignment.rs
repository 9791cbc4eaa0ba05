//! Phrase-level entailment and similarity scoring, plus spotting of
//! column-relation patterns in question text.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knowledge::Table;
use crate::question::Question;
use crate::text::{normalize, Stopwords};

/// Directional phrase entailment scorer with outputs in `[0, 1]`.
///
/// Implementations are shared between worker threads, so they must be
/// stateless or synchronize internally.
pub trait AlignmentScorer: Send + Sync {
    fn name(&self) -> &str;

    /// How strongly `premise` entails `hypothesis`.
    fn entail(&self, premise: &str, hypothesis: &str) -> Result<f64>;
}

fn content_set(text: &str, stopwords: &Stopwords) -> BTreeSet<String> {
    stopwords.content_tokens(text).into_iter().collect()
}

/// Asymmetric word overlap `|T ∩ H| / |H|` over distinct non-stopword tokens.
pub fn overlap_entail(premise: &str, hypothesis: &str, stopwords: &Stopwords) -> Result<f64> {
    let h = content_set(hypothesis, stopwords);
    if h.is_empty() {
        return Err(Error::EmptyHypothesis(hypothesis.to_owned()));
    }
    let t = content_set(premise, stopwords);
    Ok(h.intersection(&t).count() as f64 / h.len() as f64)
}

/// The default scorer, backed by [`overlap_entail`].
#[derive(Debug, Clone, Default)]
pub struct OverlapScorer {
    stopwords: Stopwords,
}

impl OverlapScorer {
    pub fn new(stopwords: Stopwords) -> Self {
        OverlapScorer { stopwords }
    }
}

impl AlignmentScorer for OverlapScorer {
    fn name(&self) -> &str {
        "word-overlap"
    }

    fn entail(&self, premise: &str, hypothesis: &str) -> Result<f64> {
        overlap_entail(premise, hypothesis, &self.stopwords)
    }
}

/// Symmetric similarity: the larger of the two entailment directions.
pub fn similarity(a: &str, b: &str, scorer: &dyn AlignmentScorer) -> Result<f64> {
    Ok(scorer.entail(a, b)?.max(scorer.entail(b, a)?))
}

/// A question span that instantiates one of a table's relation patterns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationMatch {
    pub relation_name: String,
    /// Index into the table's `relations`.
    pub relation: usize,
    /// Token position of the constituent bound to `X`.
    pub q_from: usize,
    /// Token position of the constituent bound to `Y`.
    pub q_to: usize,
    pub pattern: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum PatternToken {
    X,
    Y,
    Literal(String),
}

fn compile_pattern(pattern: &str) -> Result<Vec<PatternToken>> {
    let mut out = Vec::new();
    for word in pattern.split_whitespace() {
        match word {
            "X" => out.push(PatternToken::X),
            "Y" => out.push(PatternToken::Y),
            w => out.extend(normalize(w).split(' ').filter(|s| !s.is_empty()).map(|s| PatternToken::Literal(s.into()))),
        }
    }
    let count = |p: &PatternToken| out.iter().filter(|t| *t == p).count();
    if count(&PatternToken::X) != 1 || count(&PatternToken::Y) != 1 {
        return Err(Error::MalformedPattern(pattern.to_owned()));
    }
    Ok(out)
}

/// Every place in the question where a relation pattern of `table` matches
/// verbatim, with `X` and `Y` each bound to a single constituent.
pub fn match_relations(question: &Question, table: &Table) -> Result<Vec<RelationMatch>> {
    let tokens = &question.tokens;
    let is_constituent = |pos: usize| question.constituent_at(pos).is_some();
    let mut matches = Vec::new();
    for (ri, rel) in table.relations.iter().enumerate() {
        for pattern in &rel.patterns {
            let compiled = compile_pattern(pattern)?;
            if compiled.len() > tokens.len() {
                continue;
            }
            for start in 0..=tokens.len() - compiled.len() {
                let (mut x, mut y) = (None, None);
                let ok = compiled.iter().enumerate().all(|(i, pt)| {
                    let pos = start + i;
                    match pt {
                        PatternToken::Literal(lit) => tokens[pos] == *lit,
                        PatternToken::X => {
                            x = Some(pos);
                            is_constituent(pos)
                        }
                        PatternToken::Y => {
                            y = Some(pos);
                            is_constituent(pos)
                        }
                    }
                });
                if let (true, Some(q_from), Some(q_to)) = (ok, x, y) {
                    let m = RelationMatch {
                        relation_name: rel.relation_name.clone(),
                        relation: ri,
                        q_from,
                        q_to,
                        pattern: pattern.clone(),
                    };
                    if !matches
                        .iter()
                        .any(|o: &RelationMatch| o.relation == m.relation && o.q_from == m.q_from && o.q_to == m.q_to)
                    {
                        matches.push(m);
                    }
                }
            }
        }
    }
    Ok(matches)
}
