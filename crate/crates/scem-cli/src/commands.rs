//! One function per subcommand. Each resolves its options in place (so the
//! provenance object records effective values), loads inputs, delegates to
//! scem-core, and writes artifacts through [`crate::output`]. Warnings and
//! exclusions go to stderr; stdout carries one summary line per command.

use std::collections::BTreeSet;
use std::error::Error;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use scem_core::corpus::{load_corpus, nested_subsamples, Corpus, CorpusFormat, Stopwords};
use scem_core::dreamcase::{
    dreams_experiment, load_series_collection, DreamExperimentConfig, ProbeSet, TrainingScope,
    DEFAULT_MIN_TARGET_COUNT, DEFAULT_PROBE_FORMS, DEFAULT_REPETITIONS, DEFAULT_TARGET,
};
use scem_core::evalsuite::{
    categorization_test, corpus_size_experiment, wordpair_test, CategorySet, ModelConfig,
    WordPairSet, DEFAULT_SWEEP_DIMS,
};
use scem_core::lsa::{train_lsa_with, LsaParams};
use scem_core::sgns::{train_sgns_with, Parallelism, SgnsParams};
use scem_core::synth::write_corpus_text;
use scem_core::Embedding32;

use crate::output::{write_csv, write_json_report, write_sidecar, Provenance};
use crate::{
    CleanOpts, DreamsOpts, EvalOpts, FormatKind, Global, ModelKind, NeighborsOpts, SweepOpts,
    TestKind, TrainOpts,
};

type CmdResult = Result<(), Box<dyn Error>>;

/// Names both ways to supply the missing value.
fn require<T>(value: Option<T>, flag: &str, config_key: &str) -> Result<T, Box<dyn Error>> {
    value.ok_or_else(|| format!("missing {flag} (config key {config_key})").into())
}

fn stopwords_from(spec: Option<&str>) -> Result<Stopwords, Box<dyn Error>> {
    match spec.unwrap_or("english") {
        "english" => Ok(Stopwords::english()),
        "none" => Ok(Stopwords::empty()),
        path => Ok(Stopwords::from_file(Path::new(path))?),
    }
}

fn load_line_corpus(path: &Path, stopwords: &Stopwords) -> Result<Corpus, Box<dyn Error>> {
    Ok(load_corpus(path, CorpusFormat::OneDocPerLine, stopwords)?)
}

fn print_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

pub fn clean(global: &Global, mut opts: CleanOpts) -> CmdResult {
    let input = require(opts.input.clone(), "--input", "clean.input")?;
    let format = *opts.format.get_or_insert(FormatKind::Line);
    opts.stopwords.get_or_insert_with(|| "english".into());
    let output = opts
        .output
        .get_or_insert_with(|| PathBuf::from("cleaned.txt"))
        .clone();
    let prov = Provenance::new("clean", global, &opts)?;

    let stopwords = stopwords_from(opts.stopwords.as_deref())?;
    let corpus_format = match format {
        FormatKind::Line => CorpusFormat::OneDocPerLine,
        FormatKind::Dir => CorpusFormat::OneFilePerDoc,
    };
    let corpus = load_corpus(&input, corpus_format, &stopwords)?;

    let path = global.output_dir.join(output);
    write_corpus_text(&corpus, &path)?;
    write_sidecar(&path, &prov)?;

    let vocab: BTreeSet<&str> = corpus
        .documents()
        .iter()
        .flat_map(|d| d.tokens.iter().map(String::as_str))
        .collect();
    println!(
        "cleaned {} documents, {} tokens, {} distinct words -> {}",
        corpus.len(),
        corpus.token_count(),
        vocab.len(),
        path.display()
    );
    Ok(())
}

pub fn train(global: &Global, mut opts: TrainOpts) -> CmdResult {
    let input = require(opts.input.clone(), "--input", "train.input")?;
    opts.stopwords.get_or_insert_with(|| "english".into());
    let model = *opts.model.get_or_insert(ModelKind::Lsa);
    let dim = *opts.dim.get_or_insert(100);
    let output = opts
        .output
        .get_or_insert_with(|| PathBuf::from("embedding.bin"))
        .clone();
    let prov = Provenance::new("train", global, &opts)?;

    let stopwords = stopwords_from(opts.stopwords.as_deref())?;
    let corpus = load_line_corpus(&input, &stopwords)?;

    let (embedding, warnings) = match model {
        ModelKind::Lsa => {
            let mut params = LsaParams::new(dim, global.seed);
            if let Some(v) = opts.oversampling {
                params.oversampling = v;
            }
            if let Some(v) = opts.power_iterations {
                params.power_iterations = v;
            }
            if opts.no_scale {
                params.scale_by_singular_values = false;
            }
            train_lsa_with::<f32>(&corpus, &params)?
        }
        ModelKind::Sgns => {
            let mut params = SgnsParams::new(
                dim,
                opts.window.unwrap_or(5),
                opts.negatives.unwrap_or(5),
                global.seed,
            );
            if let Some(v) = opts.epochs {
                params.epochs = v;
            }
            if let Some(v) = opts.lr_initial {
                params.lr_initial = v;
            }
            if let Some(v) = opts.lr_final {
                params.lr_final = v;
            }
            if let Some(v) = opts.subsample_t {
                params.subsample_t = v;
            }
            let mode = if global.deterministic {
                Parallelism::Deterministic
            } else {
                Parallelism::Workers(global.jobs)
            };
            (train_sgns_with::<f32>(&corpus, &params, mode)?, Vec::new())
        }
        ModelKind::Random => ModelConfig::Random.train::<f32>(&corpus, dim, global.seed)?,
    };
    print_warnings(&warnings);

    let path = global.output_dir.join(output);
    let file = fs::File::create(&path).map_err(|e| format!("write {}: {e}", path.display()))?;
    embedding.write_binary(BufWriter::new(file))?;
    write_sidecar(&path, &prov)?;

    // The fingerprint holds the effective parameters, clamping included.
    let effective: serde_json::Value = serde_json::from_str(embedding.params_fingerprint())?;
    println!(
        "{}",
        serde_json::json!({
            "model": embedding.model_tag(),
            "vocabulary": embedding.len(),
            "dim": embedding.dim(),
            "params": effective,
            "output": path.display().to_string(),
        })
    );
    Ok(())
}

pub fn eval(global: &Global, mut opts: EvalOpts) -> CmdResult {
    let embedding_path = require(opts.embedding.clone(), "--embedding", "eval.embedding")?;
    let test = require(opts.test, "--test", "eval.test")?;
    let fixture = require(opts.fixture.clone(), "--fixture", "eval.fixture")?;
    let default_name = match test {
        TestKind::Categories => "eval_categories.json",
        TestKind::Wordsim => "eval_wordsim.json",
    };
    let output = opts
        .output
        .get_or_insert_with(|| PathBuf::from(default_name))
        .clone();
    let prov = Provenance::new("eval", global, &opts)?;

    let embedding = Embedding32::load(&embedding_path)?;
    let path = global.output_dir.join(output);
    match test {
        TestKind::Categories => {
            let categories = CategorySet::from_tsv_path(&fixture)?;
            let report = categorization_test(&embedding, &categories)?;
            write_json_report(&path, &prov, &report)?;
            println!(
                "silhouette {:.6} over {} words ({} skipped) -> {}",
                report.score,
                report.per_word.len(),
                report.skipped.len(),
                path.display()
            );
        }
        TestKind::Wordsim => {
            let pairs = WordPairSet::from_csv_path(&fixture)?;
            let report = wordpair_test(&embedding, &pairs)?;
            write_json_report(&path, &prov, &report)?;
            println!(
                "spearman rho {:.6} over {} pairs ({} skipped) -> {}",
                report.rho,
                report.n_used,
                report.skipped.len(),
                path.display()
            );
        }
    }
    Ok(())
}

pub fn sweep(global: &Global, mut opts: SweepOpts) -> CmdResult {
    let corpus_path = require(opts.corpus.clone(), "--corpus", "sweep.corpus")?;
    let categories_path = require(opts.categories.clone(), "--categories", "sweep.categories")?;
    opts.stopwords.get_or_insert_with(|| "english".into());
    let levels = *opts.levels.get_or_insert(4);
    let min_docs = *opts.min_docs.get_or_insert(100);
    let dims = opts
        .dims
        .get_or_insert_with(|| DEFAULT_SWEEP_DIMS.to_vec())
        .clone();
    let kinds = opts
        .models
        .get_or_insert_with(|| vec![ModelKind::Lsa, ModelKind::Sgns])
        .clone();
    let window = *opts.window.get_or_insert(5);
    let negatives = *opts.negatives.get_or_insert(5);
    let repetitions = *opts.repetitions.get_or_insert(1);
    let prefix = opts.prefix.get_or_insert_with(|| "sweep".into()).clone();
    let prov = Provenance::new("sweep", global, &opts)?;

    let stopwords = stopwords_from(opts.stopwords.as_deref())?;
    let corpus = load_line_corpus(&corpus_path, &stopwords)?;
    let categories = CategorySet::from_tsv_path(&categories_path)?;
    // Coverage repair keeps every category word present at every level.
    let required: BTreeSet<String> = categories
        .categories()
        .iter()
        .flat_map(|(_, words)| words.iter().cloned())
        .collect();
    let chain = nested_subsamples(&corpus, levels, min_docs, &required, global.seed)?;
    let models: Vec<ModelConfig> = kinds
        .iter()
        .map(|k| k.to_config(window, negatives))
        .collect();
    let report =
        corpus_size_experiment::<f32>(&chain, &models, &dims, &categories, repetitions, global.seed)?;

    let json_path = global.output_dir.join(format!("{prefix}.json"));
    write_json_report(&json_path, &prov, &report)?;

    let cell_rows: Vec<Vec<String>> = report
        .cells
        .iter()
        .map(|c| {
            vec![
                c.level.to_string(),
                c.tokens.to_string(),
                c.model.clone(),
                c.dim.to_string(),
                c.window.map(|v| v.to_string()).unwrap_or_default(),
                c.negatives.map(|v| v.to_string()).unwrap_or_default(),
                c.repetition.to_string(),
                format!("{}", c.score),
                c.best.to_string(),
                c.warnings.join("; "),
            ]
        })
        .collect();
    write_csv(
        &global.output_dir.join(format!("{prefix}_cells.csv")),
        &prov,
        &[
            "level",
            "tokens",
            "model",
            "dim",
            "window",
            "negatives",
            "repetition",
            "score",
            "best",
            "warnings",
        ],
        &cell_rows,
    )?;

    let summary_rows: Vec<Vec<String>> = report
        .summaries
        .iter()
        .map(|s| {
            vec![
                s.level.to_string(),
                s.tokens.to_string(),
                s.model.clone(),
                s.repetitions.to_string(),
                format!("{}", s.mean_best_score),
                format!("{}", s.spread),
                s.best_dims
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
            ]
        })
        .collect();
    write_csv(
        &global.output_dir.join(format!("{prefix}_summary.csv")),
        &prov,
        &[
            "level",
            "tokens",
            "model",
            "repetitions",
            "mean_best_score",
            "spread",
            "best_dims",
        ],
        &summary_rows,
    )?;

    for cell in &report.cells {
        for w in &cell.warnings {
            eprintln!(
                "warning: level {} {} dim {}: {w}",
                cell.level, cell.model, cell.dim
            );
        }
    }
    println!(
        "swept {} cells across {} levels -> {}",
        report.cells.len(),
        chain.levels.len(),
        json_path.display()
    );
    Ok(())
}

pub fn dreams(global: &Global, mut opts: DreamsOpts) -> CmdResult {
    let series_dir = require(opts.series.clone(), "--series", "dreams.series")?;
    let ground_truth = require(
        opts.ground_truth.clone(),
        "--ground-truth",
        "dreams.ground_truth",
    )?;
    opts.stopwords.get_or_insert_with(|| "english".into());
    let model_kind = *opts.model.get_or_insert(ModelKind::Lsa);
    let dim = *opts.dim.get_or_insert(200);
    let window = *opts.window.get_or_insert(15);
    let negatives = *opts.negatives.get_or_insert(10);
    let repetitions = *opts.repetitions.get_or_insert(DEFAULT_REPETITIONS);
    let min_target_count = *opts.min_target_count.get_or_insert(DEFAULT_MIN_TARGET_COUNT);
    let target = opts
        .target
        .get_or_insert_with(|| DEFAULT_TARGET.into())
        .clone();
    let forms = opts
        .probe_forms
        .get_or_insert_with(|| DEFAULT_PROBE_FORMS.iter().map(|s| s.to_string()).collect())
        .clone();
    let prefix = opts.prefix.get_or_insert_with(|| "dreams".into()).clone();
    let prov = Provenance::new("dreams", global, &opts)?;

    let stopwords = stopwords_from(opts.stopwords.as_deref())?;
    let collection = load_series_collection(&series_dir, &ground_truth, &stopwords)?;
    for name in &collection.unmatched_ground_truth {
        eprintln!("warning: ground-truth row {name:?} has no series file");
    }

    let config = DreamExperimentConfig {
        model: model_kind.to_config(window, negatives),
        dim,
        probes: ProbeSet::new(target, forms)?,
        min_target_count,
        repetitions,
        scope: if opts.whole_corpus {
            TrainingScope::WholeCorpus
        } else {
            TrainingScope::PerSeries
        },
        base_seed: global.seed,
    };
    let report = dreams_experiment::<f32>(&collection, &config)?;

    print_warnings(&report.warnings);
    for (name, reason) in &report.excluded {
        eprintln!("excluded {name:?}: {reason}");
    }
    for fit in &report.fits {
        if let Some(err) = &fit.error {
            eprintln!("warning: repetition {} failed: {err}", fit.repetition);
        }
    }

    let json_path = global.output_dir.join(format!("{prefix}.json"));
    write_json_report(&json_path, &prov, &report)?;

    let point_rows: Vec<Vec<String>> = report
        .series
        .iter()
        .map(|s| {
            vec![
                s.name.clone(),
                format!("{}", s.fraction),
                s.rank.map(|r| r.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    write_csv(
        &global.output_dir.join(format!("{prefix}_points.csv")),
        &prov,
        &["series", "fraction", "rank"],
        &point_rows,
    )?;

    let fit_rows: Vec<Vec<String>> = report
        .fits
        .iter()
        .map(|f| match &f.fit {
            Some(fit) => vec![
                f.repetition.to_string(),
                format!("{}", fit.slope),
                format!("{}", fit.intercept),
                format!("{}", fit.pearson_r),
                format!("{}", fit.p_value),
                fit.n.to_string(),
            ],
            None => vec![
                f.repetition.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ],
        })
        .collect();
    write_csv(
        &global.output_dir.join(format!("{prefix}_fits.csv")),
        &prov,
        &["repetition", "slope", "intercept", "r", "p", "n"],
        &fit_rows,
    )?;

    println!(
        "mean slope {:.4} over {} successful repetitions; {} series used, {} excluded -> {}",
        report.mean_slope,
        report.successful_slopes().len(),
        report.series.len(),
        report.excluded.len(),
        json_path.display()
    );
    Ok(())
}

pub fn neighbors(global: &Global, mut opts: NeighborsOpts) -> CmdResult {
    let embedding_path = require(opts.embedding.clone(), "--embedding", "neighbors.embedding")?;
    let word = require(opts.word.clone(), "--word", "neighbors.word")?;
    let k = *opts.k.get_or_insert(25);
    let min_count = *opts.min_count.get_or_insert(0);
    let output = opts
        .output
        .get_or_insert_with(|| PathBuf::from(format!("neighbors_{word}.csv")))
        .clone();
    let prov = Provenance::new("neighbors", global, &opts)?;

    let embedding = Embedding32::load(&embedding_path)?;
    let list = embedding.neighbors(&word, k, min_count)?;

    let rows: Vec<Vec<String>> = list
        .entries
        .iter()
        .enumerate()
        .map(|(i, (w, sim))| vec![(i + 1).to_string(), w.clone(), format!("{sim}")])
        .collect();
    let path = global.output_dir.join(output);
    write_csv(&path, &prov, &["rank", "word", "similarity"], &rows)?;
    println!(
        "{} neighbors of {:?} -> {}",
        list.entries.len(),
        word,
        path.display()
    );
    Ok(())
}
