//! Corpus ingestion, cleaning, and nested subsampling.
//!
//! Cleaning follows three rules applied in one pass: maximal alphabetic
//! runs become lowercased tokens, maximal numeric runs collapse to the
//! sentinel token `NUM`, and everything else is a separator. Stopwords are
//! removed after lowercasing. Mixed runs split naturally: "3rd" yields
//! `NUM` + "rd".

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::seed::{rng_from, uniform_index};

/// The replacement token for numeric runs. An alphabetic run that already
/// spells exactly `NUM` is preserved verbatim (not lowercased); otherwise
/// cleaning its own output would rewrite the sentinel and break idempotence.
pub const NUM_TOKEN: &str = "NUM";

const SUBSAMPLE_STREAM: u64 = 0x5AB5;

/// Stopword filter. The embedded default is a fixed 127-word English list;
/// any replacement list can be loaded from a file of one word per line.
#[derive(Debug, Clone)]
pub struct Stopwords {
    set: HashSet<String>,
}

impl Stopwords {
    pub fn english() -> Self {
        Self::from_words(
            include_str!("../data/stopwords_en.txt")
                .lines()
                .map(str::to_owned),
        )
    }

    pub fn from_words<I: IntoIterator<Item = String>>(words: I) -> Self {
        let set = words
            .into_iter()
            .map(|w| w.trim().to_owned())
            .filter(|w| !w.is_empty())
            .collect();
        Stopwords { set }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_words(text.lines().map(str::to_owned)))
    }

    pub fn empty() -> Self {
        Stopwords {
            set: HashSet::new(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.set.contains(word)
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// One document after cleaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenDocument {
    pub doc_id: String,
    pub tokens: Vec<String>,
}

/// An ordered collection of cleaned documents.
///
/// Fields are private so `token_count` can never drift from the documents.
#[derive(Debug, Clone)]
pub struct Corpus {
    documents: Vec<TokenDocument>,
    provenance: String,
    token_count: usize,
}

impl Corpus {
    pub fn from_documents(documents: Vec<TokenDocument>, provenance: impl Into<String>) -> Self {
        let token_count = documents.iter().map(|d| d.tokens.len()).sum();
        Corpus {
            documents,
            provenance: provenance.into(),
            token_count,
        }
    }

    pub fn documents(&self) -> &[TokenDocument] {
        &self.documents
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Total token tally; corpus "size" is measured in tokens.
    pub fn token_count(&self) -> usize {
        self.token_count
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

/// Accepted on-disk corpus layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// UTF-8 text file, one document per line (line order preserved).
    OneDocPerLine,
    /// Directory of UTF-8 `.txt` files, one document per file
    /// (lexicographic file-name order); doc_id is the file stem.
    OneFilePerDoc,
}

/// Cleans raw text into tokens.
pub fn clean_text(text: &str, stopwords: &Stopwords) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut run = String::new();
    while let Some(&c) = chars.peek() {
        if c.is_alphabetic() {
            run.clear();
            while let Some(&c) = chars.peek() {
                if c.is_alphabetic() {
                    run.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            if run == NUM_TOKEN {
                tokens.push(NUM_TOKEN.to_owned());
                continue;
            }
            // Lowercasing can introduce non-alphabetic combining marks
            // (e.g. dotted capital I); re-splitting keeps every emitted
            // token a pure alphabetic run, which makes cleaning idempotent.
            let lower = run.to_lowercase();
            for piece in lower.split(|c: char| !c.is_alphabetic()) {
                if !piece.is_empty() && !stopwords.contains(piece) {
                    tokens.push(piece.to_owned());
                }
            }
        } else if c.is_numeric() {
            while let Some(&c) = chars.peek() {
                if c.is_numeric() {
                    chars.next();
                } else {
                    break;
                }
            }
            tokens.push(NUM_TOKEN.to_owned());
        } else {
            chars.next();
        }
    }
    tokens
}

pub fn clean_document(doc_id: impl Into<String>, text: &str, stopwords: &Stopwords) -> TokenDocument {
    TokenDocument {
        doc_id: doc_id.into(),
        tokens: clean_text(text, stopwords),
    }
}

/// Loads and cleans a corpus from disk. Document order is deterministic:
/// line order, or lexicographic file order.
pub fn load_corpus(path: &Path, format: CorpusFormat, stopwords: &Stopwords) -> Result<Corpus> {
    let documents = match format {
        CorpusFormat::OneDocPerLine => {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            let mut lines: Vec<&[u8]> = bytes.split(|b| *b == b'\n').collect();
            if lines.last().is_some_and(|l| l.is_empty()) {
                lines.pop();
            }
            let mut docs = Vec::with_capacity(lines.len());
            for (i, raw) in lines.iter().enumerate() {
                let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
                let text = std::str::from_utf8(raw).map_err(|_| Error::Decode {
                    path: path.to_owned(),
                    position: i + 1,
                })?;
                docs.push(clean_document(format!("L{}", i + 1), text, stopwords));
            }
            docs
        }
        CorpusFormat::OneFilePerDoc => {
            let mut files = Vec::new();
            let entries = fs::read_dir(path).map_err(|e| Error::io(path, e))?;
            for entry in entries {
                let entry = entry.map_err(|e| Error::io(path, e))?;
                let p = entry.path();
                if p.extension().is_some_and(|e| e == "txt") {
                    files.push(p);
                }
            }
            files.sort();
            let mut docs = Vec::with_capacity(files.len());
            for (i, file) in files.iter().enumerate() {
                let bytes = fs::read(file).map_err(|e| Error::io(file, e))?;
                let text = String::from_utf8(bytes).map_err(|_| Error::Decode {
                    path: file.clone(),
                    position: i + 1,
                })?;
                let stem = file
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| format!("doc{i}"));
                docs.push(clean_document(stem, &text, stopwords));
            }
            docs
        }
    };
    Ok(Corpus::from_documents(documents, path.display().to_string()))
}

/// A chain of progressively smaller corpora, each a subset of the previous
/// level, with coverage repair guaranteeing the required words survive.
#[derive(Debug, Clone)]
pub struct SubsampleChain {
    pub levels: Vec<Corpus>,
    pub required_words: BTreeSet<String>,
    pub seed: u64,
}

/// Geometric size schedule from `n` down to `min_docs` over `n_levels`.
pub fn subsample_sizes(n: usize, n_levels: usize, min_docs: usize) -> Vec<usize> {
    if n_levels == 1 {
        return vec![n];
    }
    let ratio = min_docs as f64 / n as f64;
    (0..n_levels)
        .map(|i| {
            let frac = i as f64 / (n_levels - 1) as f64;
            (n as f64 * ratio.powf(frac)).round() as usize
        })
        .collect()
}

/// Builds nested subsamples of `corpus`.
///
/// Level 0 is the full corpus. Each deeper level is a uniform random subset
/// of the previous one, sized by `subsample_sizes`. After sampling a level,
/// while any required word is missing, a uniformly chosen document of the
/// level is swapped for a uniformly chosen discarded document (of the
/// parent level) that contains the missing word; drawing repairs from the
/// parent keeps the chain strictly nested.
pub fn nested_subsamples(
    corpus: &Corpus,
    n_levels: usize,
    min_docs: usize,
    required_words: &BTreeSet<String>,
    seed: u64,
) -> Result<SubsampleChain> {
    if n_levels < 1 {
        return Err(Error::Config("n_levels must be at least 1".into()));
    }
    if min_docs < 1 {
        return Err(Error::Config("min_docs must be at least 1".into()));
    }
    let n = corpus.len();
    if min_docs > n {
        return Err(Error::Config(format!(
            "min_docs {min_docs} exceeds corpus size {n}"
        )));
    }

    // Per-document required-word incidence, used by coverage checks.
    let doc_required: Vec<BTreeSet<&str>> = corpus
        .documents()
        .iter()
        .map(|d| {
            d.tokens
                .iter()
                .filter_map(|t| required_words.get(t.as_str()).map(|w| w.as_str()))
                .collect()
        })
        .collect();
    for word in required_words {
        if !doc_required.iter().any(|s| s.contains(word.as_str())) {
            return Err(Error::MissingRequiredWord(word.clone()));
        }
    }

    let sizes = subsample_sizes(n, n_levels, min_docs);
    let mut index_levels: Vec<Vec<usize>> = vec![(0..n).collect()];
    for (level, &target) in sizes.iter().enumerate().skip(1) {
        let parent = index_levels.last().unwrap().clone();
        let mut rng = rng_from(&[seed, SUBSAMPLE_STREAM, level as u64]);

        // Partial Fisher-Yates: the first `target` entries are a uniform
        // subset of the parent; sorting restores parent document order.
        let mut pool = parent.clone();
        for j in 0..target {
            let r = j + uniform_index(&mut rng, pool.len() - j);
            pool.swap(j, r);
        }
        let mut selected: Vec<usize> = pool[..target].to_vec();
        selected.sort_unstable();

        let missing_word = |selected: &[usize]| {
            required_words
                .iter()
                .find(|w| !selected.iter().any(|&d| doc_required[d].contains(w.as_str())))
        };
        let mut repairs = 0usize;
        let repair_cap = 1000 + 100 * required_words.len();
        while let Some(word) = missing_word(&selected) {
            if repairs >= repair_cap {
                return Err(Error::Config(format!(
                    "coverage repair did not converge at level {level} (word {word:?})"
                )));
            }
            let in_level: HashSet<usize> = selected.iter().copied().collect();
            let candidates: Vec<usize> = parent
                .iter()
                .copied()
                .filter(|d| !in_level.contains(d) && doc_required[*d].contains(word.as_str()))
                .collect();
            debug_assert!(!candidates.is_empty(), "parent level lost coverage");
            let victim = uniform_index(&mut rng, selected.len());
            let replacement = candidates[uniform_index(&mut rng, candidates.len())];
            selected[victim] = replacement;
            selected.sort_unstable();
            repairs += 1;
        }
        index_levels.push(selected);
    }

    let levels = index_levels
        .iter()
        .enumerate()
        .map(|(i, indices)| {
            let docs: Vec<TokenDocument> = indices
                .iter()
                .map(|&d| corpus.documents()[d].clone())
                .collect();
            Corpus::from_documents(docs, format!("{}#level{}", corpus.provenance(), i))
        })
        .collect();
    Ok(SubsampleChain {
        levels,
        required_words: required_words.clone(),
        seed,
    })
}
