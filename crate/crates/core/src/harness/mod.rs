//! End-to-end answering, exam scoring, ensembles and perturbation.

mod config;
mod ensemble;
mod eval;
mod perturb;
mod pipeline;

pub use config::{Config, RunSettings};
pub use ensemble::{
    ensemble_choice, examples_from_scores, option_features, predict_ensemble, solver_features, train_ensemble, EnsembleExample,
    EnsembleModel, SolverScores, SOLVER_FEATURES,
};
pub use eval::{evaluate, score_answer, summarize, EvalRecord, EvalReport, MeanStats};
pub use perturb::{perturb_question, replacement_pool, DEFAULT_POOL, DEFAULT_VARIANTS};
pub use pipeline::{
    answer_problem, answer_question, build_question_problem, build_question_problem_with, option_objectives, AnswerSelection,
};
