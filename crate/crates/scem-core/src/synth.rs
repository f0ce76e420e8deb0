//! Synthetic fixture generators. A planted-category corpus gives the
//! models a recoverable structure (topic blocks with shared background
//! noise), and a synthetic dream collection plants escape/chase fractions
//! spanning [0, 1]. Both stand in for licensed corpora in tests, demos,
//! and end-to-end pipeline runs, and both write disk fixtures in exactly
//! the formats the loaders parse.
//!
//! Generated vocabulary is made of consonant-vowel pseudo-words, filtered
//! against the built-in English stopword list, the case-study target, and
//! the probe forms, so cleaning a generated file changes nothing.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::corpus::{Corpus, Stopwords, TokenDocument};
use crate::dreamcase::{
    DreamSeries, GroundTruth, SeriesCollection, DEFAULT_PROBE_FORMS, DEFAULT_TARGET,
};
use crate::error::{Error, Result};
use crate::evalsuite::{CategorySet, WordPair, WordPairSet};
use crate::scalar::unit_f64;
use crate::seed::{rng_from, uniform_index};

const PLANT_STREAM: u64 = 0x9E8D;
const PAIR_STREAM: u64 = 0x3A1B;
const DREAM_STREAM: u64 = 0xDEA3;

const CONSONANTS: [char; 14] = [
    'b', 'd', 'f', 'g', 'k', 'l', 'm', 'n', 'p', 'r', 's', 't', 'v', 'z',
];
const VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'u'];

/// Deterministic pseudo-word supply: two-syllable then three-syllable
/// consonant-vowel words in enumeration order, skipping stopwords, the
/// case-study target, and the probe forms. Independent of any seed, so a
/// pool of size n is always the same n words.
fn pseudo_words(count: usize) -> Vec<String> {
    let stopwords = Stopwords::english();
    let banned = |w: &str| {
        stopwords.contains(w) || w == DEFAULT_TARGET || DEFAULT_PROBE_FORMS.contains(&w)
    };
    let syllables: Vec<String> = CONSONANTS
        .iter()
        .flat_map(|&c| VOWELS.iter().map(move |&v| format!("{c}{v}")))
        .collect();
    let mut words = Vec::with_capacity(count);
    'outer: for len in 2..=3 {
        let mut indices = vec![0usize; len];
        loop {
            let word: String = indices.iter().map(|&i| syllables[i].as_str()).collect();
            if !banned(&word) {
                words.push(word);
                if words.len() == count {
                    break 'outer;
                }
            }
            // Odometer increment over syllable indices.
            let mut pos = len;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                indices[pos] += 1;
                if indices[pos] < syllables.len() {
                    break;
                }
                indices[pos] = 0;
                if pos == 0 {
                    break;
                }
            }
            if indices.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    assert_eq!(words.len(), count, "pseudo-word supply exhausted");
    words
}

/// Parameters of [`planted_corpus`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlantedCorpusParams {
    pub n_categories: usize,
    pub words_per_category: usize,
    pub n_docs: usize,
    pub tokens_per_doc: usize,
    /// Probability that a token comes from the document's topic instead of
    /// the shared background pool.
    pub topic_probability: f64,
    pub background_words: usize,
    /// Zipf exponent of the background frequency spectrum; 0 makes the
    /// background uniform. A heavy head gives the corpus the frequent
    /// ubiquitous words that idf weighting is there to suppress.
    pub background_exponent: f64,
    pub seed: u64,
}

impl PlantedCorpusParams {
    pub fn new(n_docs: usize, seed: u64) -> Self {
        PlantedCorpusParams {
            n_categories: 8,
            words_per_category: 8,
            n_docs,
            tokens_per_doc: 16,
            topic_probability: 0.2,
            background_words: 1200,
            background_exponent: 1.0,
            seed,
        }
    }
}

/// Generates a corpus of topic-assigned documents together with the
/// planted categories. Documents cycle through topics, so every prefix
/// subsample stays close to balanced; each token is a topic word with
/// probability `topic_probability`, otherwise a background word.
pub fn planted_corpus(params: &PlantedCorpusParams) -> Result<(Corpus, CategorySet)> {
    if params.n_categories < 2 || params.words_per_category < 2 {
        return Err(Error::Config(
            "planted corpus needs at least 2 categories of at least 2 words".into(),
        ));
    }
    if params.n_docs < params.n_categories {
        return Err(Error::Config(format!(
            "{} documents cannot cover {} categories",
            params.n_docs, params.n_categories
        )));
    }
    if params.tokens_per_doc == 0 {
        return Err(Error::Config("tokens_per_doc must be positive".into()));
    }
    if !(0.0..=1.0).contains(&params.topic_probability) {
        return Err(Error::Config(format!(
            "topic_probability {} outside [0, 1]",
            params.topic_probability
        )));
    }
    if params.background_words == 0 && params.topic_probability < 1.0 {
        return Err(Error::Config(
            "background pool is empty but topic_probability < 1".into(),
        ));
    }
    if !params.background_exponent.is_finite() || params.background_exponent < 0.0 {
        return Err(Error::Config(format!(
            "background_exponent {} must be finite and nonnegative",
            params.background_exponent
        )));
    }

    let planted = params.n_categories * params.words_per_category;
    let pool = pseudo_words(planted + params.background_words);
    let (topic_words, background) = pool.split_at(planted);

    // Cumulative Zipf distribution over the background pool, last entry
    // pinned to 1.0 so every unit draw lands inside the table.
    let background_cdf: Vec<f64> = {
        let weights: Vec<f64> = (0..params.background_words)
            .map(|r| 1.0 / ((r + 1) as f64).powf(params.background_exponent))
            .collect();
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        *cdf.last_mut().unwrap() = 1.0;
        cdf
    };
    let categories: Vec<(String, Vec<String>)> = (0..params.n_categories)
        .map(|c| {
            let start = c * params.words_per_category;
            (
                format!("cat{c}"),
                topic_words[start..start + params.words_per_category].to_vec(),
            )
        })
        .collect();

    let mut rng = rng_from(&[params.seed, PLANT_STREAM]);
    let mut documents = Vec::with_capacity(params.n_docs);
    for i in 0..params.n_docs {
        let topic = &categories[i % params.n_categories].1;
        let tokens = (0..params.tokens_per_doc)
            .map(|_| {
                if unit_f64(&mut rng) < params.topic_probability {
                    topic[uniform_index(&mut rng, topic.len())].clone()
                } else {
                    let u = unit_f64(&mut rng);
                    background[background_cdf.partition_point(|&c| c < u)].clone()
                }
            })
            .collect();
        documents.push(TokenDocument {
            doc_id: format!("D{i:05}"),
            tokens,
        });
    }
    let corpus = Corpus::from_documents(
        documents,
        format!("planted synthetic corpus (seed {})", params.seed),
    );
    Ok((corpus, CategorySet::new(categories)?))
}

/// Builds a word-pair fixture from planted categories: every within-category
/// pair scores high (7.5 to 9.5), and `cross_pairs` randomly drawn
/// cross-category pairs score low (0.5 to 2.5).
pub fn planted_word_pairs(
    categories: &CategorySet,
    cross_pairs: usize,
    seed: u64,
) -> Result<WordPairSet> {
    if categories.len() < 2 {
        return Err(Error::Config(
            "word pairs need at least 2 categories".into(),
        ));
    }
    let mut rng = rng_from(&[seed, PAIR_STREAM]);
    let mut pairs = Vec::new();
    for (_, words) in categories.categories() {
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                pairs.push(WordPair {
                    w1: words[i].clone(),
                    w2: words[j].clone(),
                    score: 7.5 + 2.0 * unit_f64(&mut rng),
                });
            }
        }
    }
    for _ in 0..cross_pairs {
        let a = uniform_index(&mut rng, categories.len());
        let b = (a + 1 + uniform_index(&mut rng, categories.len() - 1)) % categories.len();
        let (_, wa) = &categories.categories()[a];
        let (_, wb) = &categories.categories()[b];
        pairs.push(WordPair {
            w1: wa[uniform_index(&mut rng, wa.len())].clone(),
            w2: wb[uniform_index(&mut rng, wb.len())].clone(),
            score: 0.5 + 2.0 * unit_f64(&mut rng),
        });
    }
    WordPairSet::new(pairs)
}

/// Parameters of [`dream_collection`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DreamCollectionParams {
    pub n_series: usize,
    pub reports_per_series: usize,
    /// Reports containing the target, exactly once each. The planted
    /// fraction of them put the target in a chase context.
    pub run_reports: usize,
    /// Run-free reports that keep probe forms in vocabulary even when the
    /// planted fraction is 0.
    pub chase_only_reports: usize,
    pub filler_words: usize,
    pub seed: u64,
}

impl DreamCollectionParams {
    pub fn new(seed: u64) -> Self {
        DreamCollectionParams {
            n_series: 30,
            reports_per_series: 48,
            run_reports: 12,
            chase_only_reports: 6,
            filler_words: 90,
            seed,
        }
    }
}

/// Generates a collection of dream series whose planted escape/chase
/// fractions are evenly spaced over [0, 1] (series i of n gets
/// i / (n - 1)). In a series with fraction f, round(f * run_reports) of
/// the target's occurrences sit in a chase context (probe forms plus chase
/// ambience words); the rest sit among neutral companions. Chase-only
/// reports and filler reports complete each series.
pub fn dream_collection(params: &DreamCollectionParams) -> Result<SeriesCollection> {
    if params.n_series < 2 {
        return Err(Error::Config(
            "fractions need at least 2 series to span [0, 1]".into(),
        ));
    }
    if params.run_reports < 5 {
        return Err(Error::Config(
            "run_reports below 5 would make every series ineligible".into(),
        ));
    }
    if params.reports_per_series < params.run_reports + params.chase_only_reports {
        return Err(Error::Config(format!(
            "{} reports cannot hold {} run reports plus {} chase reports",
            params.reports_per_series, params.run_reports, params.chase_only_reports
        )));
    }
    if params.filler_words < 10 {
        return Err(Error::Config("filler pool needs at least 10 words".into()));
    }

    let pool = pseudo_words(20 + params.filler_words);
    let ambience = &pool[0..10];
    let neutral = &pool[10..20];
    let filler = &pool[20..];

    let mut series = Vec::with_capacity(params.n_series);
    let mut fractions = BTreeMap::new();
    for i in 0..params.n_series {
        let name = format!("s{i:02}");
        let fraction = i as f64 / (params.n_series - 1) as f64;
        let chase_runs = (fraction * params.run_reports as f64).round() as usize;
        let mut rng = rng_from(&[params.seed, DREAM_STREAM, i as u64]);
        let mut pick = |set: &[String], n: usize, out: &mut Vec<String>| {
            for _ in 0..n {
                out.push(set[uniform_index(&mut rng, set.len())].clone());
            }
        };

        let mut documents = Vec::with_capacity(params.reports_per_series);
        // 1-based ids match what reloading the written file produces.
        let push_doc = |documents: &mut Vec<TokenDocument>, tokens: Vec<String>| {
            documents.push(TokenDocument {
                doc_id: format!("L{}", documents.len() + 1),
                tokens,
            });
        };
        let probe_forms: Vec<String> = DEFAULT_PROBE_FORMS.iter().map(|s| s.to_string()).collect();
        for r in 0..params.run_reports {
            let mut tokens = vec![DEFAULT_TARGET.to_string()];
            if r < chase_runs {
                pick(&probe_forms, 2, &mut tokens);
                pick(ambience, 3, &mut tokens);
                pick(filler, 3, &mut tokens);
            } else {
                pick(neutral, 4, &mut tokens);
                pick(filler, 3, &mut tokens);
            }
            push_doc(&mut documents, tokens);
        }
        for _ in 0..params.chase_only_reports {
            let mut tokens = Vec::new();
            pick(&probe_forms, 2, &mut tokens);
            pick(ambience, 3, &mut tokens);
            pick(filler, 3, &mut tokens);
            push_doc(&mut documents, tokens);
        }
        for _ in params.run_reports + params.chase_only_reports..params.reports_per_series {
            let mut tokens = Vec::new();
            pick(filler, 8, &mut tokens);
            push_doc(&mut documents, tokens);
        }

        let corpus = Corpus::from_documents(
            documents,
            format!("synthetic dream series {name} (fraction {fraction})"),
        );
        series.push(DreamSeries::new(&name, corpus));
        fractions.insert(name, fraction);
    }

    SeriesCollection::join(series, GroundTruth::new(fractions)?)
}

/// Writes one document per line, tokens separated by single spaces. The
/// output parses back through the cleaning pipeline unchanged.
pub fn write_corpus_text(corpus: &Corpus, path: &Path) -> Result<()> {
    let mut out = String::new();
    for d in corpus.documents() {
        out.push_str(&d.tokens.join(" "));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Writes "category<TAB>word" lines in category order.
pub fn write_categories_tsv(categories: &CategorySet, path: &Path) -> Result<()> {
    let mut out = String::new();
    for (name, words) in categories.categories() {
        for w in words {
            out.push_str(&format!("{name}\t{w}\n"));
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Writes "word1,word2,score" rows under a header.
pub fn write_word_pairs_csv(pairs: &WordPairSet, path: &Path) -> Result<()> {
    let mut out = String::from("word1,word2,score\n");
    for p in pairs.pairs() {
        out.push_str(&format!("{},{},{}\n", p.w1, p.w2, p.score));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Writes "<name>.txt" per series into `series_dir` (created if absent)
/// and the ground-truth CSV, in the layout [`load_series_collection`]
/// expects.
///
/// [`load_series_collection`]: crate::dreamcase::load_series_collection
pub fn write_dream_collection(
    collection: &SeriesCollection,
    series_dir: &Path,
    ground_truth_path: &Path,
) -> Result<()> {
    fs::create_dir_all(series_dir).map_err(|e| Error::io(series_dir, e))?;
    for s in &collection.series {
        write_corpus_text(s.reports(), &series_dir.join(format!("{}.txt", s.name())))?;
    }
    let mut out = String::from("series,fraction\n");
    for (name, fraction) in collection.ground_truth.iter() {
        out.push_str(&format!("{name},{fraction}\n"));
    }
    fs::write(ground_truth_path, out).map_err(|e| Error::io(ground_truth_path, e))
}
