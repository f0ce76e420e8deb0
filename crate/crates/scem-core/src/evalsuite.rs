//! Semantic evaluation: silhouette-based categorization, word-pair
//! similarity against human scores, and the sweep drivers (dimension grid,
//! corpus-size experiment) built on top of them.
//!
//! Scores must be comparable across runs and across worker schedules, so
//! every sweep cell derives its own seed from the base seed and its grid
//! coordinates, and categorization canonicalizes category/word order before
//! any floating-point accumulation.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::corpus::SubsampleChain;
use crate::error::{Error, Result};
use crate::lexicon::build_vocabulary;
use crate::lsa::{train_lsa_with, LsaParams};
use crate::scalar::Scalar;
use crate::seed;
use crate::semspace::Embedding;
use crate::sgns::{train_sgns, SgnsParams};
use crate::stats;

const RANDOM_STREAM: u64 = 0xBA5E;

/// Named word categories for the silhouette test.
#[derive(Debug, Clone, PartialEq)]
pub struct CategorySet {
    categories: Vec<(String, Vec<String>)>,
}

impl CategorySet {
    /// A word may appear in exactly one category: the silhouette coefficient
    /// needs a single-valued category assignment.
    pub fn new(categories: Vec<(String, Vec<String>)>) -> Result<Self> {
        let mut seen_categories = BTreeSet::new();
        let mut seen_words = BTreeSet::new();
        for (name, words) in &categories {
            if !seen_categories.insert(name.as_str()) {
                return Err(Error::GroundTruth(format!("duplicate category {name:?}")));
            }
            if words.is_empty() {
                return Err(Error::GroundTruth(format!("category {name:?} is empty")));
            }
            for w in words {
                if !seen_words.insert(w.as_str()) {
                    return Err(Error::GroundTruth(format!(
                        "word {w:?} appears more than once (category {name:?})"
                    )));
                }
            }
        }
        Ok(CategorySet { categories })
    }

    pub fn categories(&self) -> &[(String, Vec<String>)] {
        &self.categories
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    /// Parses "category<TAB>word" lines. Blank lines are ignored; category
    /// order is first occurrence.
    pub fn from_tsv_reader<R: BufRead>(r: R) -> Result<Self> {
        let mut order: Vec<String> = Vec::new();
        let mut words: Vec<Vec<String>> = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<category tsv>", e))?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let (cat, word) = line.split_once('\t').ok_or_else(|| {
                Error::GroundTruth(format!("line {}: expected category<TAB>word", i + 1))
            })?;
            if cat.is_empty() || word.is_empty() || word.contains('\t') {
                return Err(Error::GroundTruth(format!(
                    "line {}: malformed category/word pair {line:?}",
                    i + 1
                )));
            }
            match order.iter().position(|c| c == cat) {
                Some(idx) => words[idx].push(word.to_string()),
                None => {
                    order.push(cat.to_string());
                    words.push(vec![word.to_string()]);
                }
            }
        }
        CategorySet::new(order.into_iter().zip(words).collect())
    }

    pub fn from_tsv_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv_reader(BufReader::new(file))
    }
}

/// Word pairs with human similarity judgements in [0, 10].
#[derive(Debug, Clone, PartialEq)]
pub struct WordPair {
    pub w1: String,
    pub w2: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordPairSet {
    pairs: Vec<WordPair>,
}

impl WordPairSet {
    pub fn new(pairs: Vec<WordPair>) -> Result<Self> {
        for (i, p) in pairs.iter().enumerate() {
            if !(0.0..=10.0).contains(&p.score) {
                return Err(Error::GroundTruth(format!(
                    "pair {} ({},{}) has score {} outside [0,10]",
                    i + 1,
                    p.w1,
                    p.w2,
                    p.score
                )));
            }
        }
        Ok(WordPairSet { pairs })
    }

    pub fn pairs(&self) -> &[WordPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Parses "word1,word2,score" rows after one header line. Fields are
    /// split on plain commas; quoting is not supported because the fixtures
    /// are single words.
    pub fn from_csv_reader<R: Read>(r: R) -> Result<Self> {
        let reader = BufReader::new(r);
        let mut pairs = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<word pair csv>", e))?;
            let line = line.trim_end_matches('\r');
            if i == 0 || line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::GroundTruth(format!(
                    "row {}: expected word1,word2,score, got {line:?}",
                    i + 1
                )));
            }
            let score: f64 = fields[2].trim().parse().map_err(|_| {
                Error::GroundTruth(format!("row {}: unparseable score {:?}", i + 1, fields[2]))
            })?;
            pairs.push(WordPair {
                w1: fields[0].to_string(),
                w2: fields[1].to_string(),
                score,
            });
        }
        WordPairSet::new(pairs)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(file)
    }
}

/// Silhouette value with its components, s = (b - a) / max(a, b).
#[derive(Debug, Clone, Serialize)]
pub struct PerWordSilhouette {
    pub word: String,
    pub category: String,
    pub a: f64,
    pub b: f64,
    pub s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SilhouetteReport {
    pub per_word: Vec<PerWordSilhouette>,
    /// Arithmetic mean of the per-word coefficients, exactly.
    pub score: f64,
    /// Words without a usable vector, plus words whose category fell below
    /// two usable members.
    pub skipped: Vec<String>,
}

fn silhouette_components(
    dist: &Array2<f64>,
    labels: &[usize],
    index: usize,
) -> Result<(f64, f64, f64)> {
    let n = labels.len();
    if dist.nrows() != n || dist.ncols() != n {
        return Err(Error::Config(format!(
            "distance matrix is {}x{}, labels {n}",
            dist.nrows(),
            dist.ncols()
        )));
    }
    if index >= n {
        return Err(Error::Config(format!("index {index} out of range {n}")));
    }
    let own = labels[index];
    let n_categories = labels.iter().collect::<BTreeSet<_>>().len();
    if n_categories < 2 {
        return Err(Error::Insufficient(
            "silhouette needs at least 2 categories".into(),
        ));
    }
    let own_members = labels.iter().filter(|&&l| l == own).count();
    if own_members < 2 {
        return Err(Error::Insufficient(format!(
            "silhouette needs at least 2 members in category {own}"
        )));
    }

    let mut a = 0.0;
    let mut other: std::collections::BTreeMap<usize, (f64, usize)> = Default::default();
    for j in 0..n {
        if j == index {
            continue;
        }
        let d = dist[(index, j)];
        if labels[j] == own {
            a += d;
        } else {
            let e = other.entry(labels[j]).or_insert((0.0, 0));
            e.0 += d;
            e.1 += 1;
        }
    }
    a /= (own_members - 1) as f64;
    let b = other
        .values()
        .map(|&(sum, count)| sum / count as f64)
        .fold(f64::INFINITY, f64::min);
    let denom = a.max(b);
    let s = if denom == 0.0 { 0.0 } else { (b - a) / denom };
    Ok((a, b, s))
}

/// Silhouette coefficient of one point over a precomputed distance matrix.
pub fn silhouette_coefficient(dist: &Array2<f64>, labels: &[usize], index: usize) -> Result<f64> {
    silhouette_components(dist, labels, index).map(|(_, _, s)| s)
}

/// Runs the categorization test: cosine-complement distances, silhouette
/// coefficient per usable word, mean as the score.
///
/// Words are usable when they are in the vocabulary with a nonzero vector.
/// Categories are evaluated only while they keep at least 2 usable words;
/// the rest of their words are reported as skipped. Input order never
/// matters: categories and words are processed in sorted order, so permuting
/// the category set reproduces the identical report.
pub fn categorization_test<F: Scalar>(
    emb: &Embedding<F>,
    cats: &CategorySet,
) -> Result<SilhouetteReport> {
    let mut sorted: Vec<(&str, Vec<&str>)> = cats
        .categories()
        .iter()
        .map(|(name, words)| {
            let mut ws: Vec<&str> = words.iter().map(String::as_str).collect();
            ws.sort_unstable();
            (name.as_str(), ws)
        })
        .collect();
    sorted.sort_unstable_by_key(|(name, _)| *name);

    let mut skipped: Vec<String> = Vec::new();
    let mut kept: Vec<(&str, Vec<&str>)> = Vec::new();
    let mut coverage: Vec<String> = Vec::new();
    for (name, words) in &sorted {
        let (usable, missing): (Vec<&str>, Vec<&str>) = words
            .iter()
            .partition(|w| emb.contains(w) && !emb.is_dead(w));
        skipped.extend(missing.iter().map(|w| w.to_string()));
        coverage.push(format!("{name}: {} usable", usable.len()));
        if usable.len() < 2 {
            skipped.extend(usable.iter().map(|w| w.to_string()));
        } else {
            kept.push((name, usable));
        }
    }
    if kept.len() < 2 {
        return Err(Error::Insufficient(format!(
            "categorization needs at least 2 categories with 2 usable words each; coverage: {}",
            coverage.join(", ")
        )));
    }

    let flat: Vec<(&str, usize)> = kept
        .iter()
        .enumerate()
        .flat_map(|(c, (_, words))| words.iter().map(move |&w| (w, c)))
        .collect();
    let n = flat.len();
    let labels: Vec<usize> = flat.iter().map(|&(_, c)| c).collect();
    let mut dist = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            let d = emb.distance(flat[i].0, flat[j].0)?;
            dist[(i, j)] = d;
            dist[(j, i)] = d;
        }
    }

    let mut per_word = Vec::with_capacity(n);
    let mut total = 0.0;
    for (i, &(word, c)) in flat.iter().enumerate() {
        let (a, b, s) = silhouette_components(&dist, &labels, i)?;
        total += s;
        per_word.push(PerWordSilhouette {
            word: word.to_string(),
            category: kept[c].0.to_string(),
            a,
            b,
            s,
        });
    }
    Ok(SilhouetteReport {
        score: total / n as f64,
        per_word,
        skipped,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WordPairReport {
    pub rho: f64,
    pub n_used: usize,
    pub skipped: Vec<(String, String)>,
}

/// Spearman correlation between human pair scores and model similarities,
/// over the pairs whose both words are usable.
pub fn wordpair_test<F: Scalar>(emb: &Embedding<F>, pairs: &WordPairSet) -> Result<WordPairReport> {
    let mut human = Vec::new();
    let mut model = Vec::new();
    let mut skipped = Vec::new();
    for p in pairs.pairs() {
        let usable =
            |w: &str| emb.contains(w) && !emb.is_dead(w);
        if usable(&p.w1) && usable(&p.w2) {
            human.push(p.score);
            model.push(emb.similarity(&p.w1, &p.w2)?);
        } else {
            skipped.push((p.w1.clone(), p.w2.clone()));
        }
    }
    if human.len() < 2 {
        return Err(Error::Insufficient(format!(
            "word-pair test needs at least 2 usable pairs, got {} of {}",
            human.len(),
            pairs.len()
        )));
    }
    Ok(WordPairReport {
        rho: stats::spearman(&human, &model)?,
        n_used: human.len(),
        skipped,
    })
}

fn default_oversampling() -> usize {
    10
}

fn default_power_iterations() -> usize {
    2
}

fn default_scale() -> bool {
    true
}

fn default_epochs() -> usize {
    5
}

fn default_lr_initial() -> f64 {
    0.025
}

fn default_lr_final() -> f64 {
    1e-4
}

fn default_subsample_t() -> f64 {
    1e-3
}

/// A trainable model for sweeps and the dream case study. Dim and seed are
/// supplied per grid cell, everything else is fixed by the config. `Random`
/// is a deliberately uninformative baseline: vectors drawn from a standard
/// normal, never trained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Lsa {
        #[serde(default = "default_oversampling")]
        oversampling: usize,
        #[serde(default = "default_power_iterations")]
        power_iterations: usize,
        #[serde(default = "default_scale")]
        scale_by_singular_values: bool,
    },
    Sgns {
        window: usize,
        negatives: usize,
        #[serde(default = "default_epochs")]
        epochs: usize,
        #[serde(default = "default_lr_initial")]
        lr_initial: f64,
        #[serde(default = "default_lr_final")]
        lr_final: f64,
        #[serde(default = "default_subsample_t")]
        subsample_t: f64,
    },
    Random,
}

impl ModelConfig {
    pub fn lsa_default() -> Self {
        ModelConfig::Lsa {
            oversampling: default_oversampling(),
            power_iterations: default_power_iterations(),
            scale_by_singular_values: default_scale(),
        }
    }

    pub fn sgns_default(window: usize, negatives: usize) -> Self {
        ModelConfig::Sgns {
            window,
            negatives,
            epochs: default_epochs(),
            lr_initial: default_lr_initial(),
            lr_final: default_lr_final(),
            subsample_t: default_subsample_t(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ModelConfig::Lsa { .. } => "lsa".into(),
            ModelConfig::Sgns {
                window, negatives, ..
            } => format!("sgns_w{window}_n{negatives}"),
            ModelConfig::Random => "random".into(),
        }
    }

    pub fn window(&self) -> Option<usize> {
        match self {
            ModelConfig::Sgns { window, .. } => Some(*window),
            _ => None,
        }
    }

    pub fn negatives(&self) -> Option<usize> {
        match self {
            ModelConfig::Sgns { negatives, .. } => Some(*negatives),
            _ => None,
        }
    }

    /// Trains (or, for `Random`, fabricates) an embedding at the given
    /// dimension and seed. Returns the embedding plus training warnings.
    pub fn train<F: Scalar>(
        &self,
        corpus: &Corpus,
        dim: usize,
        seed: u64,
    ) -> Result<(Embedding<F>, Vec<String>)> {
        match self {
            ModelConfig::Lsa {
                oversampling,
                power_iterations,
                scale_by_singular_values,
            } => {
                let params = LsaParams {
                    dim,
                    seed,
                    oversampling: *oversampling,
                    power_iterations: *power_iterations,
                    scale_by_singular_values: *scale_by_singular_values,
                };
                train_lsa_with(corpus, &params)
            }
            ModelConfig::Sgns {
                window,
                negatives,
                epochs,
                lr_initial,
                lr_final,
                subsample_t,
            } => {
                let params = SgnsParams {
                    dim,
                    window: *window,
                    negatives: *negatives,
                    epochs: *epochs,
                    lr_initial: *lr_initial,
                    lr_final: *lr_final,
                    subsample_t: *subsample_t,
                    seed,
                };
                Ok((train_sgns(corpus, &params)?, Vec::new()))
            }
            ModelConfig::Random => {
                if corpus.is_empty() {
                    return Err(Error::EmptyCorpus);
                }
                let vocab = build_vocabulary(corpus, 0);
                let mut rng = seed::rng_from(&[seed, RANDOM_STREAM]);
                let matrix = Array2::from_shape_fn((vocab.len(), dim), |_| {
                    F::sample_standard_normal(&mut rng)
                });
                let fingerprint = format!("{{\"model\":\"random\",\"dim\":{dim},\"seed\":{seed}}}");
                let emb = Embedding::new(
                    vocab.words().to_vec(),
                    vocab.corpus_counts().to_vec(),
                    matrix,
                    "random",
                    fingerprint,
                )?;
                Ok((emb, Vec::new()))
            }
        }
    }
}

/// One evaluated grid cell.
#[derive(Debug, Clone, Serialize)]
pub struct SweepCell {
    pub level: usize,
    /// Token count of the corpus the cell trained on; the x axis of the
    /// corpus-size plots.
    pub tokens: usize,
    pub model: String,
    pub dim: usize,
    pub window: Option<usize>,
    pub negatives: Option<usize>,
    pub repetition: usize,
    pub score: f64,
    /// Marks the winning dim within this (level, model, repetition) slice.
    pub best: bool,
    pub warnings: Vec<String>,
}

/// Best-dim scores aggregated over repetitions for one (level, model).
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub level: usize,
    pub tokens: usize,
    pub model: String,
    pub repetitions: usize,
    pub mean_best_score: f64,
    /// Sample standard deviation of the best scores; 0 for one repetition.
    pub spread: f64,
    pub best_dims: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub cells: Vec<SweepCell>,
    pub summaries: Vec<SweepSummary>,
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::Config("dimension list is empty".into()));
    }
    let unique: BTreeSet<usize> = dims.iter().copied().collect();
    if unique.len() != dims.len() {
        return Err(Error::Config(format!(
            "dimension list contains duplicates: {dims:?}"
        )));
    }
    Ok(())
}

pub const DEFAULT_SWEEP_DIMS: [usize; 7] = [7, 15, 25, 50, 100, 200, 400];

/// Trains and scores one (model, dim) slice. Cells are independent: each
/// derives its seed from the base seed and its dim, and they run in
/// parallel. `best` is marked on the highest score, smallest dim on ties.
pub fn dimension_sweep<F: Scalar>(
    corpus: &Corpus,
    config: &ModelConfig,
    dims: &[usize],
    cats: &CategorySet,
    base_seed: u64,
) -> Result<Vec<SweepCell>> {
    check_dims(dims)?;
    let mut sorted_dims: Vec<usize> = dims.to_vec();
    sorted_dims.sort_unstable();
    let label = config.label();
    let mut cells: Vec<SweepCell> = sorted_dims
        .par_iter()
        .map(|&dim| {
            let cell_seed = seed::mix(&[base_seed, dim as u64]);
            let run = || -> Result<SweepCell> {
                let (emb, warnings) = config.train::<F>(corpus, dim, cell_seed)?;
                let report = categorization_test(&emb, cats)?;
                Ok(SweepCell {
                    level: 0,
                    tokens: corpus.token_count(),
                    model: label.clone(),
                    dim,
                    window: config.window(),
                    negatives: config.negatives(),
                    repetition: 0,
                    score: report.score,
                    best: false,
                    warnings,
                })
            };
            run().map_err(|e| e.in_cell(format!("model {label}, dim {dim}")))
        })
        .collect::<Result<_>>()?;
    mark_best(&mut cells);
    Ok(cells)
}

fn mark_best(cells: &mut [SweepCell]) {
    debug_assert!(cells.windows(2).all(|w| w[0].dim < w[1].dim));
    if let Some(best) = cells
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            // strict ordering: later cells win only on strictly higher score,
            // so the smallest dim takes ties
            a.score
                .partial_cmp(&b.score)
                .expect("finite scores")
                .then(ib.cmp(ia))
        })
        .map(|(i, _)| i)
    {
        cells[best].best = true;
    }
}

/// Runs the full corpus-size experiment: for every chain level, model, and
/// repetition, a dimension sweep; summaries keep the best-dim score per
/// repetition and aggregate mean and spread.
pub fn corpus_size_experiment<F: Scalar>(
    chain: &SubsampleChain,
    models: &[ModelConfig],
    dims: &[usize],
    cats: &CategorySet,
    repetitions: usize,
    base_seed: u64,
) -> Result<SweepReport> {
    check_dims(dims)?;
    if chain.levels.is_empty() {
        return Err(Error::Config("subsample chain has no levels".into()));
    }
    if models.is_empty() {
        return Err(Error::Config("no models configured".into()));
    }
    if repetitions < 1 {
        return Err(Error::Config("repetitions must be at least 1".into()));
    }

    let mut jobs = Vec::new();
    for level in 0..chain.levels.len() {
        for (model_idx, model) in models.iter().enumerate() {
            for rep in 0..repetitions {
                jobs.push((level, model_idx, model, rep));
            }
        }
    }
    let slices: Vec<Vec<SweepCell>> = jobs
        .par_iter()
        .map(|&(level, model_idx, model, rep)| {
            let corpus = &chain.levels[level];
            let slice_seed = seed::mix(&[base_seed, level as u64, model_idx as u64, rep as u64]);
            dimension_sweep::<F>(corpus, model, dims, cats, slice_seed)
                .map(|mut cells| {
                    for c in &mut cells {
                        c.level = level;
                        c.repetition = rep;
                    }
                    cells
                })
                .map_err(|e| e.in_cell(format!("level {level}, repetition {rep}")))
        })
        .collect::<Result<_>>()?;

    let cells: Vec<SweepCell> = slices.into_iter().flatten().collect();
    let mut summaries = Vec::new();
    for level in 0..chain.levels.len() {
        for model in models {
            let label = model.label();
            let best_cells: Vec<&SweepCell> = cells
                .iter()
                .filter(|c| c.level == level && c.model == label && c.best)
                .collect();
            let scores: Vec<f64> = best_cells.iter().map(|c| c.score).collect();
            let mean = scores.iter().sum::<f64>() / scores.len() as f64;
            let spread = if scores.len() < 2 {
                0.0
            } else {
                (scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>()
                    / (scores.len() - 1) as f64)
                    .sqrt()
            };
            summaries.push(SweepSummary {
                level,
                tokens: chain.levels[level].token_count(),
                model: label,
                repetitions,
                mean_best_score: mean,
                spread,
                best_dims: best_cells.iter().map(|c| c.dim).collect(),
            });
        }
    }
    Ok(SweepReport { cells, summaries })
}
