//! Logistic-regression combination of per-option scores from several base
//! solvers plus support-graph features.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::support::N_GRAPH_FEATURES;

pub const SOLVER_FEATURES: usize = 4;

const LEARNING_RATE: f64 = 0.5;
const TOLERANCE: f64 = 1e-6;
const MAX_EPOCHS: usize = 200_000;

/// Per-option scores of one base solver, keyed by question id. `features`
/// optionally carries the 11 support-graph features per option.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverScores {
    pub solver: String,
    pub scores: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub features: BTreeMap<String, Vec<Vec<f64>>>,
}

impl SolverScores {
    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&src).map_err(|source| Error::Json { path: path.to_owned(), source })
    }

    /// Every `*.json` file of a directory, sorted by solver name.
    pub fn load_dir(dir: &Path) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            if path.extension().is_some_and(|e| e == "json") {
                out.push(Self::load(&path)?);
            }
        }
        out.sort_by(|a, b| a.solver.cmp(&b.solver));
        Ok(out)
    }
}

/// Raw score, score normalized by the sum over options (0 when the sum is
/// 0), softmax, and a best-option indicator (lowest index wins ties).
pub fn solver_features(scores: &[f64]) -> Vec<[f64; SOLVER_FEATURES]> {
    let total: f64 = scores.iter().sum();
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let z: f64 = exp.iter().sum();
    let best = scores.iter().position(|&s| s == max);
    scores
        .iter()
        .enumerate()
        .map(|(i, &s)| [s, if total == 0.0 { 0.0 } else { s / total }, exp[i] / z, if Some(i) == best { 1.0 } else { 0.0 }])
        .collect()
}

/// Feature rows, one per option: 4 features per solver followed by the
/// graph features when given.
pub fn option_features(solver_scores: &[&[f64]], graph: Option<&[Vec<f64>]>) -> Vec<Vec<f64>> {
    let n = solver_scores.first().map_or_else(|| graph.map_or(0, |g| g.len()), |s| s.len());
    let per_solver: Vec<_> = solver_scores.iter().map(|s| solver_features(s)).collect();
    (0..n)
        .map(|i| {
            let mut row: Vec<f64> = per_solver.iter().flat_map(|f| f[i]).collect();
            if let Some(g) = graph {
                row.extend(&g[i]);
            }
            row
        })
        .collect()
}

/// One training question: a feature row per option and the gold index.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleExample {
    pub features: Vec<Vec<f64>>,
    pub gold: usize,
}

/// Assembles examples from score files; questions missing from any file
/// are skipped. Graph features are taken from the first file carrying them.
pub fn examples_from_scores(files: &[SolverScores], gold: &BTreeMap<String, usize>) -> Vec<(String, EnsembleExample)> {
    let graph_source = files.iter().find(|f| !f.features.is_empty());
    let Some(first) = files.first() else { return Vec::new() };
    first
        .scores
        .keys()
        .filter_map(|qid| {
            let scores: Vec<&[f64]> = files.iter().map(|f| f.scores.get(qid).map(Vec::as_slice)).collect::<Option<_>>()?;
            let n = scores[0].len();
            if scores.iter().any(|s| s.len() != n) {
                return None;
            }
            let graph = match graph_source {
                Some(src) => Some(src.features.get(qid)?.as_slice()),
                None => None,
            };
            if graph.is_some_and(|g| g.len() != n || g.iter().any(|r| r.len() != N_GRAPH_FEATURES)) {
                return None;
            }
            let features = option_features(&scores, graph);
            Some((qid.clone(), EnsembleExample { features, gold: gold.get(qid).copied().unwrap_or(0) }))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleModel {
    pub solvers: Vec<String>,
    /// Feature standardization applied before the linear score.
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub trained: bool,
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl EnsembleModel {
    fn score(&self, row: &[f64]) -> f64 {
        let z: f64 = row.iter().zip(&self.mean).zip(&self.scale).zip(&self.weights).map(|(((x, m), s), w)| w * (x - m) / s).sum();
        z + self.bias
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).expect("model serializes");
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&src).map_err(|source| Error::Json { path: path.to_owned(), source })
    }
}

/// Fits a logistic regression over (question, option) pairs labelled by
/// whether the option is gold, using full-batch gradient descent on
/// standardized features until the log-loss changes by less than 1e-6.
/// When every pair carries the same label the weights stay zero.
pub fn train_ensemble(solvers: Vec<String>, dev: &[EnsembleExample]) -> Result<EnsembleModel> {
    let rows: Vec<(&[f64], f64)> = dev
        .iter()
        .flat_map(|ex| ex.features.iter().enumerate().map(move |(i, r)| (r.as_slice(), if i == ex.gold { 1.0 } else { 0.0 })))
        .collect();
    let Some(&(first, _)) = rows.first() else {
        return Err(Error::Ensemble("no training examples".into()));
    };
    let d = first.len();
    if rows.iter().any(|(r, _)| r.len() != d) {
        return Err(Error::Ensemble("feature rows differ in length".into()));
    }
    let n = rows.len() as f64;
    let mean: Vec<f64> = (0..d).map(|j| rows.iter().map(|(r, _)| r[j]).sum::<f64>() / n).collect();
    let scale: Vec<f64> = (0..d)
        .map(|j| {
            let var = rows.iter().map(|(r, _)| (r[j] - mean[j]).powi(2)).sum::<f64>() / n;
            if var > 1e-12 {
                var.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    let mut model = EnsembleModel { solvers, mean, scale, weights: vec![0.0; d], bias: 0.0, trained: true };
    let positives = rows.iter().filter(|(_, y)| *y == 1.0).count();
    if positives == 0 || positives == rows.len() {
        return Ok(model);
    }
    let xs: Vec<Vec<f64>> =
        rows.iter().map(|(r, _)| r.iter().zip(&model.mean).zip(&model.scale).map(|((x, m), s)| (x - m) / s).collect()).collect();
    let mut prev_loss = f64::INFINITY;
    for _ in 0..MAX_EPOCHS {
        let mut grad = vec![0.0; d];
        let mut grad_b = 0.0;
        let mut loss = 0.0;
        for (x, (_, y)) in xs.iter().zip(&rows) {
            let z: f64 = x.iter().zip(&model.weights).map(|(a, w)| a * w).sum::<f64>() + model.bias;
            let p = sigmoid(z);
            loss += if *y == 1.0 { -p.max(1e-300).ln() } else { -(1.0 - p).max(1e-300).ln() };
            let err = p - y;
            for (g, a) in grad.iter_mut().zip(x) {
                *g += err * a;
            }
            grad_b += err;
        }
        loss /= n;
        for (w, g) in model.weights.iter_mut().zip(&grad) {
            *w -= LEARNING_RATE * g / n;
        }
        model.bias -= LEARNING_RATE * grad_b / n;
        if (prev_loss - loss).abs() < TOLERANCE {
            break;
        }
        prev_loss = loss;
    }
    if model.weights.iter().any(|w| !w.is_finite()) || !model.bias.is_finite() {
        return Err(Error::Ensemble("training diverged".into()));
    }
    Ok(model)
}

/// Probability of each option being correct.
pub fn predict_ensemble(model: &EnsembleModel, features: &[Vec<f64>]) -> Vec<f64> {
    features.iter().map(|row| sigmoid(model.score(row))).collect()
}

/// Options sharing the highest probability.
pub fn ensemble_choice(probs: &[f64]) -> Vec<usize> {
    let max = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..probs.len()).filter(|&i| (probs[i] - max).abs() <= 1e-12).collect()
}
