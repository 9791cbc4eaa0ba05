//! Question answering over semi-structured tables by searching for the best
//! support graph with a 0/1 integer program.

pub mod alignment;
pub mod error;
pub mod harness;
pub mod ilp;
pub mod knowledge;
pub mod question;
pub mod solver;
pub mod support;
pub mod synthetic;
pub mod text;

pub use error::{Error, Result};
pub use harness::{answer_question, AnswerSelection, Config};
pub use ilp::{IlpProblem, IlpVariable, LinearConstraint, Sense};
pub use knowledge::{JoinMap, Table, TableCorpus};
pub use question::Question;
pub use solver::{solve_ilp, IlpSolution, SolveStatus};
pub use support::{GraphStats, SupportGraph};
