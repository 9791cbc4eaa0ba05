use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use super::Config;
use crate::alignment::{AlignmentScorer, OverlapScorer};
use crate::error::Result;
use crate::ilp::{apply_ablation, build_problem, Element, IlpProblem, LinearConstraint, ModelContext, Sense, TableView, VarKind};
use crate::knowledge::{select_rows, select_tables, TableCorpus};
use crate::question::Question;
use crate::solver::{solve_ilp, IlpSolution, SolveStatus};
use crate::support::{extract_features, extract_support_graph, FeatureVector, GraphStats, SupportGraph};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnswerSelection {
    /// The winning option, or every option tied with it. Empty when the
    /// model has no feasible support graph.
    pub chosen: Vec<usize>,
    /// Objective of each option that won a disable-and-resolve round.
    pub per_option_objective: BTreeMap<usize, f64>,
    pub support: Option<SupportGraph>,
    pub features: Option<FeatureVector>,
    pub stats: GraphStats,
    /// The first solve hit the time limit; `chosen` holds its incumbent.
    pub timed_out: bool,
}

impl AnswerSelection {
    pub fn abstained(&self) -> bool {
        self.chosen.is_empty()
    }

    pub fn is_tie(&self) -> bool {
        self.chosen.len() > 1
    }
}

/// Retrieval, filtering and model construction for one question.
pub fn build_question_problem(question: &Question, corpus: &TableCorpus, config: &Config) -> Result<IlpProblem> {
    let scorer = OverlapScorer::new(corpus.stopwords.clone());
    build_question_problem_with(question, corpus, config, &scorer)
}

pub fn build_question_problem_with(
    question: &Question,
    corpus: &TableCorpus,
    config: &Config,
    scorer: &dyn AlignmentScorer,
) -> Result<IlpProblem> {
    let run = &config.run;
    let tables: Vec<TableView> = select_tables(question, corpus, corpus.len())
        .into_iter()
        .filter(|t| run.use_open_ie || !t.is_open_ie)
        .take(run.k_tables)
        .map(|table| {
            let mut rows = select_rows(question, table, run.n_rows);
            rows.sort_unstable();
            TableView { table, rows }
        })
        .collect();
    let ctx = ModelContext::new(question, tables, &corpus.join_map)?;
    let problem = build_problem(&ctx, scorer, &config.model)?;
    Ok(apply_ablation(problem, run.ablation))
}

fn active_option(problem: &IlpProblem, solution: &IlpSolution) -> Option<usize> {
    problem.vars.iter().zip(&solution.values).find_map(|(v, &on)| match v.meta.as_ref() {
        Some(m) if on && m.kind == VarKind::ActiveOption => match m.ends[0] {
            Element::Option { m } => Some(m),
            _ => None,
        },
        _ => None,
    })
}

fn option_var(problem: &IlpProblem, m: usize) -> Option<String> {
    problem
        .vars
        .iter()
        .find(|v| v.meta.as_ref().is_some_and(|meta| meta.kind == VarKind::ActiveOption && meta.ends[0] == Element::Option { m }))
        .map(|v| v.name.clone())
}

fn pin(problem: &mut IlpProblem, m: usize, value: f64, tag: &str) {
    if let Some(name) = option_var(problem, m) {
        problem.cons.push(LinearConstraint::new(vec![(name, 1.0)], Sense::Eq, value, tag));
    }
}

/// Solves the model, then repeatedly disables the current winner and
/// re-solves; options whose objective stays within `tie_epsilon` of the
/// first optimum are tied with it.
pub fn answer_question(question: &Question, corpus: &TableCorpus, config: &Config) -> Result<AnswerSelection> {
    let started = Instant::now();
    let problem = build_question_problem(question, corpus, config)?;
    let build_seconds = started.elapsed().as_secs_f64();
    answer_problem(question, problem, config, build_seconds)
}

/// Tie handling and support extraction on an already built model.
pub fn answer_problem(question: &Question, problem: IlpProblem, config: &Config, build_seconds: f64) -> Result<AnswerSelection> {
    let mut stats = GraphStats {
        n_variables: problem.vars.len(),
        n_constraints: problem.cons.len(),
        model_build_seconds: build_seconds,
        ..Default::default()
    };
    let solve_started = Instant::now();
    let first = solve_ilp(&problem, config.time_limit(), config.run.gap)?;
    stats.solve_seconds = solve_started.elapsed().as_secs_f64();
    stats.lp_iterations = first.lp_iterations;
    let mut selection = AnswerSelection {
        chosen: Vec::new(),
        per_option_objective: BTreeMap::new(),
        support: None,
        features: None,
        stats,
        timed_out: first.status == SolveStatus::Timeout,
    };
    let Some(winner) = active_option(&problem, &first).filter(|_| first.status != SolveStatus::Infeasible) else {
        return Ok(selection);
    };
    selection.chosen.push(winner);
    selection.per_option_objective.insert(winner, first.objective);
    if first.status == SolveStatus::Timeout {
        log::warn!("{}: time limit reached, answering with the incumbent", question.id);
        return Ok(selection);
    }
    let graph = extract_support_graph(&problem, &first)?;
    selection.stats.n_active_rows = graph.active_rows.len();
    selection.stats.n_active_tables = graph.active_tables.len();
    selection.features = Some(extract_features(&graph, question, &selection.stats));
    selection.support = Some(graph);

    let mut reduced = problem;
    let mut last = winner;
    while selection.per_option_objective.len() < question.options.len() {
        pin(&mut reduced, last, 0.0, "disable_option");
        let next = solve_ilp(&reduced, config.time_limit(), config.run.gap)?;
        if next.status != SolveStatus::Optimal {
            break;
        }
        let Some(m) = active_option(&reduced, &next) else { break };
        selection.per_option_objective.insert(m, next.objective);
        if (first.objective - next.objective).abs() >= config.run.tie_epsilon {
            break;
        }
        selection.chosen.push(m);
        last = m;
    }
    selection.chosen.sort_unstable();
    Ok(selection)
}

/// Optimal objective with each option forced active, `None` where no
/// support graph exists for that option.
pub fn option_objectives(
    question: &Question,
    corpus: &TableCorpus,
    config: &Config,
) -> Result<Vec<Option<(f64, FeatureVector)>>> {
    let started = Instant::now();
    let problem = build_question_problem(question, corpus, config)?;
    let build_seconds = started.elapsed().as_secs_f64();
    (0..question.options.len())
        .map(|m| {
            let mut forced = problem.clone();
            pin(&mut forced, m, 1.0, "force_option");
            if option_var(&forced, m).is_none() {
                return Ok(None);
            }
            let s = solve_ilp(&forced, config.time_limit(), config.run.gap)?;
            if !s.is_optimal() {
                return Ok(None);
            }
            let graph = extract_support_graph(&forced, &s)?;
            let stats = GraphStats {
                n_variables: forced.vars.len(),
                n_constraints: forced.cons.len(),
                lp_iterations: s.lp_iterations,
                n_active_rows: graph.active_rows.len(),
                n_active_tables: graph.active_tables.len(),
                model_build_seconds: build_seconds,
                solve_seconds: 0.0,
            };
            Ok(Some((s.objective, extract_features(&graph, question, &stats))))
        })
        .collect()
}
