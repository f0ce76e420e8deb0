//! The escape/chase case study. One dreamer's reports form a series; a
//! model trained on the series ranks every vocabulary word by similarity to
//! the target ("run"), and the best rank among the escape/chase inflections
//! is regressed (log-linearly) against a human-annotated escape/chase
//! fraction. Repetitions over derived seeds give a slope sample per model,
//! and two slope samples are compared with the two-sample KS test.
//!
//! Series whose target is rare are excluded up front, and a series whose
//! probe forms are all out of vocabulary is reported as excluded rather
//! than assigned a fabricated maximal rank; both would otherwise distort
//! the regression.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{load_corpus, Corpus, CorpusFormat, Stopwords, TokenDocument};
use crate::error::{Error, Result};
use crate::evalsuite::ModelConfig;
use crate::scalar::Scalar;
use crate::seed;
use crate::semspace::NeighborList;
use crate::stats::{ks_two_sample, loglinear_fit, KsResult, RegressionFit};

/// Target word whose neighborhood the case study inspects.
pub const DEFAULT_TARGET: &str = "run";

/// The eight escape/chase inflections probed against the target.
pub const DEFAULT_PROBE_FORMS: [&str; 8] = [
    "escape", "escapes", "escaping", "escaped", "chase", "chases", "chasing", "chased",
];

/// Series with fewer target occurrences than this are excluded by default.
pub const DEFAULT_MIN_TARGET_COUNT: usize = 5;

/// Default number of repetitions in [`dreams_experiment`].
pub const DEFAULT_REPETITIONS: usize = 10;

/// One dream series: a named corpus with one report per document.
#[derive(Debug, Clone)]
pub struct DreamSeries {
    name: String,
    reports: Corpus,
    target_count: usize,
}

impl DreamSeries {
    /// Wraps a cleaned corpus. The stored count is for [`DEFAULT_TARGET`];
    /// experiments that probe a different target recount via [`count_of`].
    ///
    /// [`count_of`]: DreamSeries::count_of
    pub fn new(name: impl Into<String>, reports: Corpus) -> Self {
        let mut series = DreamSeries {
            name: name.into(),
            reports,
            target_count: 0,
        };
        series.target_count = series.count_of(DEFAULT_TARGET);
        series
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn reports(&self) -> &Corpus {
        &self.reports
    }

    /// Occurrences of [`DEFAULT_TARGET`] across the cleaned reports.
    pub fn target_count(&self) -> usize {
        self.target_count
    }

    /// Occurrences of an arbitrary token across the cleaned reports.
    pub fn count_of(&self, word: &str) -> usize {
        self.reports
            .documents()
            .iter()
            .map(|d| d.tokens.iter().filter(|t| *t == word).count())
            .sum()
    }

    /// Distinct tokens over all reports.
    pub fn vocabulary(&self) -> BTreeSet<String> {
        self.reports
            .documents()
            .iter()
            .flat_map(|d| d.tokens.iter().cloned())
            .collect()
    }
}

/// Per-series escape/chase fractions keyed by series name.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundTruth {
    fractions: BTreeMap<String, f64>,
}

impl GroundTruth {
    pub fn new(fractions: BTreeMap<String, f64>) -> Result<Self> {
        for (name, f) in &fractions {
            if !(0.0..=1.0).contains(f) {
                return Err(Error::GroundTruth(format!(
                    "series {name:?}: fraction {f} outside [0, 1]"
                )));
            }
        }
        Ok(GroundTruth { fractions })
    }

    pub fn fraction(&self, name: &str) -> Option<f64> {
        self.fractions.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.fractions.iter().map(|(n, f)| (n.as_str(), *f))
    }

    /// Parses "series,fraction" rows after one header line. Plain commas,
    /// no quoting; series names are file stems and contain no commas.
    pub fn from_csv_reader<R: Read>(r: R) -> Result<Self> {
        let reader = BufReader::new(r);
        let mut fractions = BTreeMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<ground truth csv>", e))?;
            let line = line.trim_end_matches('\r');
            if i == 0 || line.is_empty() {
                continue;
            }
            let row = i + 1;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 2 {
                return Err(Error::GroundTruth(format!(
                    "row {row}: expected series,fraction, got {line:?}"
                )));
            }
            let name = fields[0].trim();
            let f: f64 = fields[1].trim().parse().map_err(|_| {
                Error::GroundTruth(format!("row {row}: unparseable fraction {:?}", fields[1]))
            })?;
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::GroundTruth(format!(
                    "row {row}: fraction {f} outside [0, 1] for series {name:?}"
                )));
            }
            if fractions.insert(name.to_owned(), f).is_some() {
                return Err(Error::GroundTruth(format!(
                    "row {row}: duplicate series {name:?}"
                )));
            }
        }
        Ok(GroundTruth { fractions })
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(file)
    }
}

/// The target word and the probe forms ranked against it.
///
/// Inflections are a fixed enumerated set rather than a stemmer's output,
/// so the probe list is deterministic and auditable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProbeSetRaw")]
pub struct ProbeSet {
    target: String,
    forms: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeSetRaw {
    target: String,
    forms: Vec<String>,
}

impl TryFrom<ProbeSetRaw> for ProbeSet {
    type Error = Error;

    fn try_from(raw: ProbeSetRaw) -> Result<Self> {
        ProbeSet::new(raw.target, raw.forms)
    }
}

impl ProbeSet {
    pub fn new(target: impl Into<String>, forms: Vec<String>) -> Result<Self> {
        let target = target.into();
        if target.is_empty() {
            return Err(Error::Config("probe target is empty".into()));
        }
        if forms.is_empty() {
            return Err(Error::Config("probe set needs at least one form".into()));
        }
        let mut seen = BTreeSet::new();
        for form in &forms {
            if form.is_empty() {
                return Err(Error::Config("probe set contains an empty form".into()));
            }
            if *form == target {
                return Err(Error::Config(format!(
                    "target {target:?} may not appear among its own probe forms"
                )));
            }
            if !seen.insert(form.as_str()) {
                return Err(Error::Config(format!("duplicate probe form {form:?}")));
            }
        }
        Ok(ProbeSet { target, forms })
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn forms(&self) -> &[String] {
        &self.forms
    }
}

impl Default for ProbeSet {
    fn default() -> Self {
        ProbeSet::new(
            DEFAULT_TARGET,
            DEFAULT_PROBE_FORMS.iter().map(|s| s.to_string()).collect(),
        )
        .expect("built-in probe set is valid")
    }
}

/// A joined collection: every series has a ground-truth row; ground-truth
/// rows without a series file are listed in `unmatched_ground_truth`.
#[derive(Debug, Clone)]
pub struct SeriesCollection {
    pub series: Vec<DreamSeries>,
    pub ground_truth: GroundTruth,
    pub unmatched_ground_truth: Vec<String>,
}

impl SeriesCollection {
    pub fn join(series: Vec<DreamSeries>, ground_truth: GroundTruth) -> Result<Self> {
        let mut names = BTreeSet::new();
        for s in &series {
            if !names.insert(s.name().to_owned()) {
                return Err(Error::Config(format!(
                    "duplicate series name {:?}",
                    s.name()
                )));
            }
            if ground_truth.fraction(s.name()).is_none() {
                return Err(Error::GroundTruth(format!(
                    "no ground-truth row for series {:?}",
                    s.name()
                )));
            }
        }
        let unmatched_ground_truth = ground_truth
            .iter()
            .filter(|(n, _)| !names.contains(*n))
            .map(|(n, _)| n.to_owned())
            .collect();
        Ok(SeriesCollection {
            series,
            ground_truth,
            unmatched_ground_truth,
        })
    }
}

/// Loads a directory of "<series name>.txt" files (one report per line,
/// cleaned through the corpus pipeline) and joins them with a
/// "series,fraction" CSV. Series are ordered by file name.
pub fn load_series_collection(
    dir: &Path,
    ground_truth_path: &Path,
    stopwords: &Stopwords,
) -> Result<SeriesCollection> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| Error::io(dir, e))?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "txt"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Config(format!(
            "no .txt series files in {}",
            dir.display()
        )));
    }
    let ground_truth = GroundTruth::from_csv_path(ground_truth_path)?;
    let mut series = Vec::with_capacity(paths.len());
    for path in &paths {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| Error::Config(format!("series file name {path:?} is not UTF-8")))?;
        let reports = load_corpus(path, CorpusFormat::OneDocPerLine, stopwords)?;
        series.push(DreamSeries::new(name, reports));
    }
    SeriesCollection::join(series, ground_truth)
}

/// Trains one model on the series alone and returns the best (minimum)
/// rank of any probe form relative to the target, or `None` when no probe
/// form is in the trained vocabulary.
pub fn series_rank<F: Scalar>(
    series: &DreamSeries,
    model: &ModelConfig,
    dim: usize,
    probes: &ProbeSet,
    seed: u64,
) -> Result<Option<usize>> {
    let (embedding, _warnings) = model.train::<F>(series.reports(), dim, seed)?;
    embedding.min_rank_distance(probes.target(), probes.forms().iter().map(String::as_str))
}

/// Whether each series gets its own embedding or one embedding serves the
/// whole collection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainingScope {
    /// One model per series. Neighborhoods reflect a single dreamer's text.
    PerSeries,
    /// One model on the concatenated collection per repetition; each
    /// series' rank query is restricted to that series' own vocabulary.
    WholeCorpus,
}

/// Parameters of [`dreams_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DreamExperimentConfig {
    pub model: ModelConfig,
    pub dim: usize,
    pub probes: ProbeSet,
    pub min_target_count: usize,
    pub repetitions: usize,
    pub scope: TrainingScope,
    pub base_seed: u64,
}

impl DreamExperimentConfig {
    pub fn new(model: ModelConfig, dim: usize, base_seed: u64) -> Self {
        DreamExperimentConfig {
            model,
            dim,
            probes: ProbeSet::default(),
            min_target_count: DEFAULT_MIN_TARGET_COUNT,
            repetitions: DEFAULT_REPETITIONS,
            scope: TrainingScope::PerSeries,
            base_seed,
        }
    }
}

/// One series' outcome in the designated (first) repetition. `rank` is
/// `None` when every probe form was unusable in that embedding.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesOutcome {
    pub name: String,
    pub fraction: f64,
    pub rank: Option<usize>,
}

/// Regression outcome of one repetition; `fit` and `error` are mutually
/// exclusive. A failed repetition is recorded, never fabricated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepetitionFit {
    pub repetition: usize,
    pub fit: Option<RegressionFit>,
    pub error: Option<String>,
}

/// Full experiment report. The per-series outcomes show repetition 0, the
/// designated sample repetition; its fit (`fits[0]`) carries the Pearson r
/// and p-value quoted alongside scatter plots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DreamExperimentReport {
    pub series: Vec<SeriesOutcome>,
    pub fits: Vec<RepetitionFit>,
    pub mean_slope: f64,
    pub excluded: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

impl DreamExperimentReport {
    /// Slopes of the repetitions whose regression succeeded.
    pub fn successful_slopes(&self) -> Vec<f64> {
        self.fits
            .iter()
            .filter_map(|f| f.fit.as_ref().map(|fit| fit.slope))
            .collect()
    }

    pub fn designated_fit(&self) -> Option<&RegressionFit> {
        self.fits.first().and_then(|f| f.fit.as_ref())
    }
}

/// Runs the rank-versus-fraction regression over repeated trainings.
///
/// Eligibility is decided from the text alone: a series participates when
/// the target occurs at least `min_target_count` times and at least one
/// probe form is present. Per repetition `r`, per-series seeds are derived
/// from `(base_seed, r, series name)`, so results do not depend on job
/// scheduling. Each repetition's (fraction, rank) points are fitted with
/// [`loglinear_fit`]; a repetition with fewer than 3 usable points or a
/// degenerate fit is marked failed. The mean slope averages successful
/// repetitions only.
pub fn dreams_experiment<F: Scalar>(
    collection: &SeriesCollection,
    config: &DreamExperimentConfig,
) -> Result<DreamExperimentReport> {
    if config.repetitions == 0 {
        return Err(Error::Config("repetitions must be at least 1".into()));
    }
    let target = config.probes.target();
    let mut excluded: Vec<(String, String)> = Vec::new();
    let mut usable: Vec<(&DreamSeries, f64)> = Vec::new();
    for s in &collection.series {
        let fraction = collection.ground_truth.fraction(s.name()).ok_or_else(|| {
            Error::GroundTruth(format!("no ground-truth row for series {:?}", s.name()))
        })?;
        let count = s.count_of(target);
        if count < config.min_target_count {
            excluded.push((
                s.name().to_owned(),
                format!(
                    "target {target:?} appears {count} times, fewer than {}",
                    config.min_target_count
                ),
            ));
            continue;
        }
        let vocabulary = s.vocabulary();
        if !config.probes.forms().iter().any(|f| vocabulary.contains(f)) {
            excluded.push((
                s.name().to_owned(),
                "no probe form in the series vocabulary".to_owned(),
            ));
            continue;
        }
        usable.push((s, fraction));
    }
    if usable.len() < 3 {
        return Err(Error::Insufficient(format!(
            "{} series have the target and a probe form; the regression needs 3",
            usable.len()
        )));
    }

    let reps = config.repetitions;
    // ranks[r][i] for usable series i in repetition r; warnings come from
    // the designated repetition (they depend on the text, not the seed).
    let mut ranks: Vec<Vec<Option<usize>>> = vec![vec![None; usable.len()]; reps];
    let mut warnings: BTreeSet<String> = BTreeSet::new();
    match config.scope {
        TrainingScope::PerSeries => {
            let jobs: Vec<(usize, usize)> = (0..reps)
                .flat_map(|r| (0..usable.len()).map(move |i| (r, i)))
                .collect();
            let results: Vec<(usize, usize, Option<usize>, Vec<String>)> = jobs
                .par_iter()
                .map(|&(r, i)| {
                    let (s, _) = usable[i];
                    let context = || format!("series {:?}, repetition {r}", s.name());
                    let job_seed =
                        seed::mix(&[config.base_seed, r as u64, seed::hash_str(s.name())]);
                    let (embedding, warns) = config
                        .model
                        .train::<F>(s.reports(), config.dim, job_seed)
                        .map_err(|e| e.in_cell(context()))?;
                    let rank = embedding
                        .min_rank_distance(
                            target,
                            config.probes.forms().iter().map(String::as_str),
                        )
                        .map_err(|e| e.in_cell(context()))?;
                    Ok((r, i, rank, warns))
                })
                .collect::<Result<Vec<_>>>()?;
            for (r, i, rank, warns) in results {
                ranks[r][i] = rank;
                if r == 0 {
                    for w in warns {
                        warnings.insert(format!("{}: {w}", usable[i].0.name()));
                    }
                }
            }
        }
        TrainingScope::WholeCorpus => {
            let merged = merge_collection(&collection.series);
            let vocabularies: Vec<BTreeSet<String>> =
                usable.iter().map(|(s, _)| s.vocabulary()).collect();
            let results: Vec<(Vec<Option<usize>>, Vec<String>)> = (0..reps)
                .into_par_iter()
                .map(|r| {
                    let job_seed = seed::mix(&[config.base_seed, r as u64]);
                    let (embedding, warns) = config
                        .model
                        .train::<F>(&merged, config.dim, job_seed)
                        .map_err(|e| e.in_cell(format!("whole corpus, repetition {r}")))?;
                    let mut row = Vec::with_capacity(usable.len());
                    for ((s, _), vocabulary) in usable.iter().zip(&vocabularies) {
                        let rank = embedding
                            .min_rank_distance_within(
                                target,
                                config.probes.forms().iter().map(String::as_str),
                                vocabulary,
                            )
                            .map_err(|e| {
                                e.in_cell(format!("series {:?}, repetition {r}", s.name()))
                            })?;
                        row.push(rank);
                    }
                    Ok((row, warns))
                })
                .collect::<Result<Vec<_>>>()?;
            for (r, (row, warns)) in results.into_iter().enumerate() {
                ranks[r] = row;
                if r == 0 {
                    warnings.extend(warns);
                }
            }
        }
    }

    let mut fits = Vec::with_capacity(reps);
    for (r, row) in ranks.iter().enumerate() {
        let points: Vec<(f64, f64)> = usable
            .iter()
            .zip(row)
            .filter_map(|((_, fraction), rank)| rank.map(|k| (*fraction, k as f64)))
            .collect();
        if points.len() < 3 {
            fits.push(RepetitionFit {
                repetition: r,
                fit: None,
                error: Some(format!(
                    "{} usable points, the regression needs 3",
                    points.len()
                )),
            });
            continue;
        }
        match loglinear_fit(&points) {
            Ok(fit) => fits.push(RepetitionFit {
                repetition: r,
                fit: Some(fit),
                error: None,
            }),
            Err(e) => fits.push(RepetitionFit {
                repetition: r,
                fit: None,
                error: Some(e.to_string()),
            }),
        }
    }

    let slopes: Vec<f64> = fits
        .iter()
        .filter_map(|f| f.fit.as_ref().map(|fit| fit.slope))
        .collect();
    if slopes.is_empty() {
        return Err(Error::Insufficient(
            "no repetition produced a regression fit".into(),
        ));
    }
    let mean_slope = slopes.iter().sum::<f64>() / slopes.len() as f64;

    let series = usable
        .iter()
        .zip(&ranks[0])
        .map(|((s, fraction), rank)| SeriesOutcome {
            name: s.name().to_owned(),
            fraction: *fraction,
            rank: *rank,
        })
        .collect();

    Ok(DreamExperimentReport {
        series,
        fits,
        mean_slope,
        excluded,
        warnings: warnings.into_iter().collect(),
    })
}

/// Two-sample KS test over the successful slopes of two reports.
pub fn compare_models(a: &DreamExperimentReport, b: &DreamExperimentReport) -> Result<KsResult> {
    let sa = a.successful_slopes();
    let sb = b.successful_slopes();
    if sa.len() < 2 || sb.len() < 2 {
        return Err(Error::Insufficient(format!(
            "model comparison needs 2 successful repetitions per report, got {} and {}",
            sa.len(),
            sb.len()
        )));
    }
    ks_two_sample(&sa, &sb)
}

/// Trains on the series alone and lists the `k` nearest words to `target`.
/// `min_count` filters rare words; per-series listings default it to 0
/// because single-series counts are small.
pub fn series_neighborhood<F: Scalar>(
    series: &DreamSeries,
    model: &ModelConfig,
    dim: usize,
    target: &str,
    k: usize,
    min_count: u64,
    seed: u64,
) -> Result<NeighborList> {
    let (embedding, _warnings) = model.train::<F>(series.reports(), dim, seed)?;
    embedding.neighbors(target, k, min_count)
}

fn merge_collection(series: &[DreamSeries]) -> Corpus {
    let mut documents = Vec::new();
    for s in series {
        for d in s.reports().documents() {
            documents.push(TokenDocument {
                doc_id: format!("{}/{}", s.name(), d.doc_id),
                tokens: d.tokens.clone(),
            });
        }
    }
    Corpus::from_documents(
        documents,
        format!("dream collection ({} series)", series.len()),
    )
}
