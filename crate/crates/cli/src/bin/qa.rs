use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use tableqa::harness::{
    answer_question, ensemble_choice, evaluate, examples_from_scores, option_objectives, perturb_question, predict_ensemble,
    train_ensemble, AnswerSelection, Config, EnsembleModel, SolverScores, DEFAULT_POOL, DEFAULT_VARIANTS,
};
use tableqa::ilp::Ablation;
use tableqa::knowledge::{load_corpus_with, TableCorpus};
use tableqa::question::{load_questions, write_questions, Question};
use tableqa::support::verify_support_graph;
use tableqa::text::Stopwords;

#[derive(Parser)]
#[command(name = "qa", about = "Answer multiple-choice questions from a table corpus")]
struct Cli {
    /// Flat TOML file overriding model and run settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Stopword list, one word per line; defaults to the bundled list.
    #[arg(long, global = true)]
    stopwords: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Answer the questions in a JSONL file.
    Answer {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        question: PathBuf,
        #[arg(long)]
        ablation: Option<Ablation>,
        /// Print the full selection as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Score a question set and write a JSON report.
    Eval {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        questions: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        ablation: Option<Ablation>,
    },
    /// Emit support graphs, features and structural checks as JSON.
    Explain {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        question: PathBuf,
        #[arg(long)]
        ablation: Option<Ablation>,
    },
    /// Replace incorrect options with frequent words.
    Perturb {
        #[arg(long)]
        questions: PathBuf,
        /// Ranked word list, one per line, most frequent first.
        #[arg(long)]
        freq_words: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VARIANTS)]
        variants: usize,
        #[arg(long, default_value_t = DEFAULT_POOL)]
        pool: usize,
    },
    /// Per-option objectives and graph features in the ensemble score format.
    ScoreOptions {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        questions: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "tableqa")]
        name: String,
    },
    #[command(subcommand)]
    Ensemble(EnsembleCommand),
}

#[derive(Subcommand)]
enum EnsembleCommand {
    /// Fit the combination model on a development set.
    Train {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        questions: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// Predict option probabilities; scores against gold when available.
    Predict {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        questions: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
}

fn letter(m: usize) -> char {
    (b'A' + m as u8) as char
}

fn describe(q: &Question, sel: &AnswerSelection) -> String {
    if sel.abstained() {
        return format!("{}: abstain", q.id);
    }
    let chosen: Vec<String> = sel.chosen.iter().map(|&m| format!("({}) {}", letter(m), q.options[m].text)).collect();
    let objective = sel.per_option_objective.get(&sel.chosen[0]).copied().unwrap_or(f64::NAN);
    let mut line = format!("{}: {} objective {:.4}", q.id, chosen.join(" | "), objective);
    if sel.is_tie() {
        line.push_str(&format!(" ({}-way tie)", sel.chosen.len()));
    }
    if sel.timed_out {
        line.push_str(" [time limit]");
    }
    line
}

struct Env {
    config: Config,
    stopwords: Stopwords,
}

impl Env {
    fn corpus(&self, dir: &Path) -> Result<TableCorpus> {
        load_corpus_with(dir, self.stopwords.clone()).with_context(|| format!("loading corpus {}", dir.display()))
    }

    fn questions(&self, path: &Path) -> Result<Vec<Question>> {
        load_questions(path, &self.stopwords).with_context(|| format!("loading questions {}", path.display()))
    }

    fn with_ablation(&self, ablation: Option<Ablation>) -> Config {
        let mut c = self.config.clone();
        if let Some(a) = ablation {
            c.run.ablation = a;
        }
        c
    }
}

fn gold_map(questions: &[Question]) -> BTreeMap<String, usize> {
    questions.iter().filter_map(|q| q.answer_key.map(|g| (q.id.clone(), g))).collect()
}

fn main() -> Result<()> {
    env_logger::init();
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let stopwords = match &cli.stopwords {
        Some(p) => Stopwords::from_file(p)?,
        None => Stopwords::bundled(),
    };
    let env = Env { config, stopwords };

    match cli.command {
        Command::Answer { corpus, question, ablation, json } => {
            let corpus = env.corpus(&corpus)?;
            let config = env.with_ablation(ablation);
            for q in env.questions(&question)? {
                let sel = answer_question(&q, &corpus, &config)?;
                if json {
                    println!("{}", serde_json::to_string_pretty(&sel)?);
                } else {
                    println!("{}", describe(&q, &sel));
                }
            }
        }
        Command::Eval { corpus, questions, report, ablation } => {
            let corpus = env.corpus(&corpus)?;
            let questions = env.questions(&questions)?;
            let rep = evaluate(&questions, &corpus, &env.with_ablation(ablation))?;
            for (q, r) in questions.iter().zip(&rep.records) {
                println!("{}  score {:.3}", describe(q, &r.selection), r.score);
            }
            println!(
                "score {:.1} over {} questions ({} abstained, {} ties); mean build {:.2}s solve {:.2}s",
                rep.score,
                rep.n_questions,
                rep.n_abstained,
                rep.n_ties,
                rep.mean_stats.model_build_seconds,
                rep.mean_stats.solve_seconds
            );
            if let Some(path) = report {
                fs::write(&path, serde_json::to_string_pretty(&rep)?).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Explain { corpus, question, ablation } => {
            let corpus = env.corpus(&corpus)?;
            let config = env.with_ablation(ablation);
            for q in env.questions(&question)? {
                let sel = answer_question(&q, &corpus, &config)?;
                let violations = sel.support.as_ref().map(|g| verify_support_graph(g, &q, &corpus.join_map)).unwrap_or_default();
                let out = serde_json::json!({
                    "id": q.id,
                    "chosen": sel.chosen,
                    "support_graph": sel.support,
                    "features": sel.features,
                    "stats": sel.stats,
                    "violations": violations,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            }
        }
        Command::Perturb { questions, freq_words, out, variants, pool } => {
            let words: Vec<String> = fs::read_to_string(&freq_words)
                .with_context(|| format!("reading {}", freq_words.display()))?
                .lines()
                .map(str::to_owned)
                .collect();
            let mut all = Vec::new();
            for q in env.questions(&questions)? {
                all.extend(perturb_question(&q, &words, variants, pool, &env.stopwords)?);
            }
            write_questions(&out, &all)?;
            println!("wrote {} questions to {}", all.len(), out.display());
        }
        Command::ScoreOptions { corpus, questions, out, name } => {
            let corpus = env.corpus(&corpus)?;
            let mut scores = SolverScores { solver: name, scores: BTreeMap::new(), features: BTreeMap::new() };
            for q in env.questions(&questions)? {
                let per = option_objectives(&q, &corpus, &env.config)?;
                scores.scores.insert(q.id.clone(), per.iter().map(|p| p.as_ref().map_or(0.0, |(z, _)| *z)).collect());
                scores.features.insert(
                    q.id.clone(),
                    per.iter().map(|p| p.as_ref().map(|(_, f)| f.to_array().to_vec()).unwrap_or_else(|| vec![0.0; 11])).collect(),
                );
            }
            fs::write(&out, serde_json::to_string_pretty(&scores)?).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Ensemble(EnsembleCommand::Train { scores, questions, model }) => {
            let files = SolverScores::load_dir(&scores)?;
            let gold = gold_map(&env.questions(&questions)?);
            let examples: Vec<_> =
                examples_from_scores(&files, &gold).into_iter().filter(|(id, _)| gold.contains_key(id)).map(|(_, e)| e).collect();
            if examples.is_empty() {
                bail!("no question has scores from every solver and a gold answer");
            }
            let m = train_ensemble(files.iter().map(|f| f.solver.clone()).collect(), &examples)?;
            m.save(&model)?;
            println!("trained on {} questions with {} features", examples.len(), m.weights.len());
        }
        Command::Ensemble(EnsembleCommand::Predict { scores, questions, model }) => {
            let m = EnsembleModel::load(&model)?;
            let files = SolverScores::load_dir(&scores)?;
            let names: Vec<String> = files.iter().map(|f| f.solver.clone()).collect();
            if names != m.solvers {
                bail!("score files {names:?} do not match the model's solvers {:?}", m.solvers);
            }
            let gold = gold_map(&env.questions(&questions)?);
            let mut total = 0.0;
            let mut n = 0;
            for (id, ex) in examples_from_scores(&files, &gold) {
                let probs = predict_ensemble(&m, &ex.features);
                let chosen = ensemble_choice(&probs);
                let shown: Vec<String> = probs.iter().map(|p| format!("{p:.3}")).collect();
                let letters: String = chosen.iter().map(|&c| letter(c)).collect();
                match gold.get(&id) {
                    Some(&g) => {
                        let s = if chosen.contains(&g) { 1.0 / chosen.len() as f64 } else { 0.0 };
                        total += s;
                        n += 1;
                        println!("{id}: {letters} [{}] score {s:.3}", shown.join(", "));
                    }
                    None => println!("{id}: {letters} [{}]", shown.join(", ")),
                }
            }
            if n > 0 {
                println!("score {:.1} over {n} questions", 100.0 * total / n as f64);
            }
        }
    }
    Ok(())
}
