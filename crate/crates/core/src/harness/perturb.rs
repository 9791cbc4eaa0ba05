use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::question::Question;
use crate::text::{normalize, stem, Stopwords};

pub const DEFAULT_VARIANTS: usize = 10;
pub const DEFAULT_POOL: usize = 30;

/// Replacement candidates: frequent words that are plain alphabetic,
/// not stopwords, and share neither surface form nor stem with the
/// question or its gold option. Order is preserved, duplicates dropped.
pub fn replacement_pool(
    question: &Question,
    gold: usize,
    freq_words: &[impl AsRef<str>],
    stopwords: &Stopwords,
    pool: usize,
) -> Vec<String> {
    let mut blocked: BTreeSet<String> = BTreeSet::new();
    for tok in question.tokens.iter().chain(&question.options[gold].tokens) {
        blocked.insert(tok.clone());
        blocked.insert(stem(tok).to_owned());
    }
    let mut seen = BTreeSet::new();
    freq_words
        .iter()
        .map(|w| w.as_ref().trim().to_lowercase())
        .filter(|w| !w.is_empty() && w.chars().all(|c| c.is_alphabetic()))
        .filter(|w| !stopwords.contains(w) && !blocked.contains(w) && !blocked.contains(stem(w)))
        .filter(|w| seen.insert(w.clone()))
        .take(pool)
        .collect()
}

/// Variants of a question whose incorrect options are replaced by frequent
/// words. Variant `v` fills the `t`-th incorrect slot with pool entry
/// `(3v + t) mod |pool|`, so consecutive variants walk the pool.
pub fn perturb_question(
    question: &Question,
    freq_words: &[impl AsRef<str>],
    n_variants: usize,
    pool: usize,
    stopwords: &Stopwords,
) -> Result<Vec<Question>> {
    let gold = question
        .answer_key
        .ok_or_else(|| Error::InvalidQuestion { id: question.id.clone(), reason: "missing answer key".into() })?;
    let words = replacement_pool(question, gold, freq_words, stopwords, pool);
    let wrong = question.options.len() - 1;
    if words.len() < wrong.max(3) {
        return Err(Error::PoolTooSmall(words.len()));
    }
    (0..n_variants)
        .map(|v| {
            let mut t = 0;
            let options: Vec<String> = question
                .options
                .iter()
                .enumerate()
                .map(|(m, opt)| {
                    if m == gold {
                        opt.text.clone()
                    } else {
                        let w = words[(wrong * v + t) % words.len()].clone();
                        t += 1;
                        w
                    }
                })
                .collect();
            debug_assert!(options.iter().all(|o| !normalize(o).is_empty()));
            Question::parse(format!("{}-p{v}", question.id), &question.text, &options, Some(gold), stopwords)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ny() -> Question {
        Question::parse(
            "ny",
            "In New York State, the longest period of daylight occurs during which month?",
            &["March", "June", "December", "September"],
            Some(1),
            &Stopwords::bundled(),
        )
        .unwrap()
    }

    #[test]
    fn filters_question_words_and_stems() {
        let sw = Stopwords::bundled();
        let pool =
            replacement_pool(&ny(), 1, &["daylight", "months", "the", "x-ray", "june", "eastern", "eastern", "states"], &sw, 30);
        assert_eq!(pool, vec!["eastern"]);
    }

    #[test]
    fn too_small_pool() {
        let err = perturb_question(&ny(), &["eastern", "history"], 10, 30, &Stopwords::bundled());
        assert!(matches!(err, Err(Error::PoolTooSmall(2))));
    }

    #[test]
    fn round_robin_variants() {
        let words = ["eastern", "history", "years", "water", "energy"];
        let vs = perturb_question(&ny(), &words, 3, 30, &Stopwords::bundled()).unwrap();
        let texts: Vec<Vec<String>> = vs.iter().map(|q| q.option_texts()).collect();
        assert_eq!(texts[0], ["eastern", "June", "history", "years"]);
        assert_eq!(texts[1], ["water", "June", "energy", "eastern"]);
        assert!(vs.iter().all(|q| q.text == ny().text && q.answer_key == Some(1)));
    }
}
