//! Question parsing into lexical constituents and answer options.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{normalize, tokenize, Stopwords};

/// Maximum number of constituents after "which" that count as the which-term.
pub const WHICH_TERM_SPAN: usize = 2;

/// A non-stopword token of the question with its position in the
/// normalized token sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constituent {
    pub text: String,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerOption {
    /// Text as given, for display.
    pub text: String,
    /// All normalized tokens.
    pub tokens: Vec<String>,
    /// Normalized tokens with stopwords removed; used for alignment.
    pub content: Vec<String>,
}

impl AnswerOption {
    /// Normalized phrase fed to alignment scorers.
    pub fn phrase(&self) -> String {
        self.tokens.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub text: String,
    /// Full normalized token sequence, stopwords included.
    pub tokens: Vec<String>,
    pub constituents: Vec<Constituent>,
    pub options: Vec<AnswerOption>,
    pub answer_key: Option<usize>,
}

impl Question {
    pub fn parse(
        id: impl Into<String>,
        text: &str,
        options: &[impl AsRef<str>],
        answer_key: Option<usize>,
        stopwords: &Stopwords,
    ) -> Result<Self> {
        let id = id.into();
        let invalid = |reason: &str| Error::InvalidQuestion { id: id.clone(), reason: reason.to_owned() };
        if normalize(text).is_empty() {
            return Err(invalid("empty text"));
        }
        if options.is_empty() {
            return Err(invalid("no options"));
        }
        if let Some(k) = answer_key {
            if k >= options.len() {
                return Err(invalid("answer key out of range"));
            }
        }
        let tokens = tokenize(text);
        let constituents: Vec<Constituent> = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| !stopwords.contains(t))
            .map(|(position, t)| Constituent { text: t.clone(), position })
            .collect();
        if constituents.is_empty() {
            return Err(Error::NoConstituents(id));
        }
        let options = options
            .iter()
            .map(|o| {
                let tokens = tokenize(o.as_ref());
                let content = tokens.iter().filter(|t| !stopwords.contains(t)).cloned().collect();
                AnswerOption { text: o.as_ref().trim().to_owned(), tokens, content }
            })
            .collect();
        Ok(Question { id, text: text.to_owned(), tokens, constituents, options, answer_key })
    }

    /// Index into `constituents` of the constituent at token `position`.
    pub fn constituent_at(&self, position: usize) -> Option<usize> {
        self.constituents.binary_search_by_key(&position, |c| c.position).ok()
    }

    pub fn option_texts(&self) -> Vec<String> {
        self.options.iter().map(|o| o.text.clone()).collect()
    }
}

/// Constituents that directly follow the first "which" in the question.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WhichTermSpan {
    pub present: bool,
    /// Token positions of the which-term constituents.
    pub constituent_indices: Vec<usize>,
}

pub fn detect_which_term(question: &Question) -> WhichTermSpan {
    let Some(at) = question.tokens.iter().position(|t| t == "which") else {
        return WhichTermSpan::default();
    };
    let constituent_indices =
        question.constituents.iter().filter(|c| c.position > at).take(WHICH_TERM_SPAN).map(|c| c.position).collect();
    WhichTermSpan { present: true, constituent_indices }
}

/// One line of a questions JSONL file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionRecord {
    pub id: String,
    pub question: String,
    pub options: Vec<String>,
    #[serde(rename = "answerKey", default, skip_serializing_if = "Option::is_none")]
    pub answer_key: Option<usize>,
}

impl QuestionRecord {
    pub fn parse(&self, stopwords: &Stopwords) -> Result<Question> {
        Question::parse(self.id.clone(), &self.question, &self.options, self.answer_key, stopwords)
    }
}

impl From<&Question> for QuestionRecord {
    fn from(q: &Question) -> Self {
        QuestionRecord { id: q.id.clone(), question: q.text.clone(), options: q.option_texts(), answer_key: q.answer_key }
    }
}

pub fn read_question_records(path: &Path) -> Result<Vec<QuestionRecord>> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    src.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|source| Error::Json { path: path.to_owned(), source }))
        .collect()
}

pub fn load_questions(path: &Path, stopwords: &Stopwords) -> Result<Vec<Question>> {
    read_question_records(path)?.iter().map(|r| r.parse(stopwords)).collect()
}

pub fn write_questions(path: &Path, questions: &[Question]) -> Result<()> {
    let mut out = String::new();
    for q in questions {
        out.push_str(&serde_json::to_string(&QuestionRecord::from(q)).expect("record serializes"));
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}
