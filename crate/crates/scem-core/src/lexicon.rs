//! Vocabularies, sparse word-by-document count matrices, and the tf-idf
//! weighting applied before the SVD.

use std::collections::{HashMap, HashSet};
use std::io::Write;

use ndarray::Array2;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed::hash_str;

/// Word inventory of a corpus with per-word totals.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    words: Vec<String>,
    index_of: HashMap<String, usize>,
    corpus_count: Vec<u64>,
    doc_frequency: Vec<u64>,
    n_documents: usize,
}

impl Vocabulary {
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index_of.get(word).copied()
    }

    pub fn word(&self, index: usize) -> &str {
        &self.words[index]
    }

    pub fn corpus_count(&self, index: usize) -> u64 {
        self.corpus_count[index]
    }

    pub fn corpus_counts(&self) -> &[u64] {
        &self.corpus_count
    }

    pub fn doc_frequency(&self, index: usize) -> u64 {
        self.doc_frequency[index]
    }

    pub fn n_documents(&self) -> usize {
        self.n_documents
    }

    /// FNV hash over the word list; identifies a vocabulary in dumps.
    pub fn fingerprint(&self) -> u64 {
        let mut h = 0u64;
        for w in &self.words {
            h = h.rotate_left(5) ^ hash_str(w);
        }
        h
    }
}

/// Builds the vocabulary of `corpus`, keeping words whose total count is
/// strictly greater than `min_count` (0 keeps every occurring word). Word
/// order is first-occurrence order.
pub fn build_vocabulary(corpus: &Corpus, min_count: u64) -> Vocabulary {
    let mut order: Vec<String> = Vec::new();
    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut dfs: HashMap<String, u64> = HashMap::new();
    let mut seen_in_doc: HashSet<&str> = HashSet::new();
    for doc in corpus.documents() {
        seen_in_doc.clear();
        for token in &doc.tokens {
            match counts.get_mut(token) {
                Some(c) => *c += 1,
                None => {
                    counts.insert(token.clone(), 1);
                    order.push(token.clone());
                }
            }
        }
        // Second pass per document for document frequency; `seen_in_doc`
        // borrows from the document, not the maps, to avoid re-hashing keys.
        for token in &doc.tokens {
            if seen_in_doc.insert(token) {
                *dfs.entry(token.clone()).or_insert(0) += 1;
            }
        }
    }

    let mut words = Vec::new();
    let mut corpus_count = Vec::new();
    let mut doc_frequency = Vec::new();
    let mut index_of = HashMap::new();
    for w in order {
        let c = counts[&w];
        if c > min_count {
            index_of.insert(w.clone(), words.len());
            corpus_count.push(c);
            doc_frequency.push(dfs[&w]);
            words.push(w);
        }
    }
    Vocabulary {
        words,
        index_of,
        corpus_count,
        doc_frequency,
        n_documents: corpus.len(),
    }
}

/// Sparse |V| x N count matrix, stored by document column. Each column
/// holds (word index, count) pairs sorted by word index.
#[derive(Debug, Clone)]
pub struct TermDocMatrix {
    pub n_words: usize,
    pub n_docs: usize,
    cols: Vec<Vec<(usize, u32)>>,
}

impl TermDocMatrix {
    pub fn column(&self, doc: usize) -> &[(usize, u32)] {
        &self.cols[doc]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }
}

/// Counts occurrences of each vocabulary word per document. Tokens outside
/// the vocabulary are ignored.
pub fn count_matrix(corpus: &Corpus, vocab: &Vocabulary) -> TermDocMatrix {
    let cols = corpus
        .documents()
        .iter()
        .map(|doc| {
            let mut counts: HashMap<usize, u32> = HashMap::new();
            for token in &doc.tokens {
                if let Some(w) = vocab.index_of(token) {
                    *counts.entry(w).or_insert(0) += 1;
                }
            }
            let mut col: Vec<(usize, u32)> = counts.into_iter().collect();
            col.sort_unstable_by_key(|&(w, _)| w);
            col
        })
        .collect();
    TermDocMatrix {
        n_words: vocab.len(),
        n_docs: corpus.len(),
        cols,
    }
}

/// Sparse tf-idf matrix with unit-norm document columns.
#[derive(Debug, Clone)]
pub struct WeightedTermDocMatrix<F: Scalar> {
    pub n_words: usize,
    pub n_docs: usize,
    cols: Vec<Vec<(usize, F)>>,
}

/// Applies tf-idf: weight(w, d) = count(w, d) * log2(N / df(w)), then each
/// nonzero document column is scaled to unit Euclidean norm. A word that
/// occurs in every document gets weight 0 everywhere.
pub fn tfidf<F: Scalar>(counts: &TermDocMatrix, vocab: &Vocabulary) -> WeightedTermDocMatrix<F> {
    let n = counts.n_docs as f64;
    let idf: Vec<f64> = (0..vocab.len())
        .map(|w| (n / vocab.doc_frequency(w) as f64).log2())
        .collect();
    let cols = (0..counts.n_docs)
        .map(|d| {
            let mut col: Vec<(usize, F)> = counts
                .column(d)
                .iter()
                .filter_map(|&(w, c)| {
                    let v = f64::from(c) * idf[w];
                    (v != 0.0).then_some((w, F::of(v)))
                })
                .collect();
            let norm = col
                .iter()
                .map(|&(_, v)| v * v)
                .fold(F::zero(), |acc, x| acc + x)
                .sqrt();
            if norm > F::zero() {
                for (_, v) in &mut col {
                    *v /= norm;
                }
            }
            col
        })
        .collect();
    WeightedTermDocMatrix {
        n_words: counts.n_words,
        n_docs: counts.n_docs,
        cols,
    }
}

impl<F: Scalar> WeightedTermDocMatrix<F> {
    /// Wraps an arbitrary dense matrix in the sparse column layout, so the
    /// SVD can be driven directly by matrices that did not come from a
    /// corpus (verification suites, planted fixtures).
    pub fn from_dense(a: &ndarray::ArrayView2<F>) -> Self {
        let (n_words, n_docs) = a.dim();
        let cols = (0..n_docs)
            .map(|d| {
                (0..n_words)
                    .filter_map(|w| {
                        let v = a[(w, d)];
                        (v != F::zero()).then_some((w, v))
                    })
                    .collect()
            })
            .collect();
        WeightedTermDocMatrix {
            n_words,
            n_docs,
            cols,
        }
    }

    pub fn column(&self, doc: usize) -> &[(usize, F)] {
        &self.cols[doc]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Dense product M * B, where M is |V| x N and B is N x k.
    pub fn multiply_right(&self, b: &ndarray::ArrayView2<F>) -> Array2<F> {
        assert_eq!(b.nrows(), self.n_docs);
        let k = b.ncols();
        let mut out = Array2::zeros((self.n_words, k));
        for (d, col) in self.cols.iter().enumerate() {
            let brow = b.row(d);
            for &(w, v) in col {
                let mut orow = out.row_mut(w);
                for (o, &bv) in orow.iter_mut().zip(brow.iter()) {
                    *o += v * bv;
                }
            }
        }
        out
    }

    /// Dense product M^T * B, where M is |V| x N and B is |V| x k.
    pub fn multiply_transpose(&self, b: &ndarray::ArrayView2<F>) -> Array2<F> {
        assert_eq!(b.nrows(), self.n_words);
        let k = b.ncols();
        let mut out = Array2::zeros((self.n_docs, k));
        for (d, col) in self.cols.iter().enumerate() {
            let mut orow = out.row_mut(d);
            for &(w, v) in col {
                let brow = b.row(w);
                for (o, &bv) in orow.iter_mut().zip(brow.iter()) {
                    *o += v * bv;
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Array2<F> {
        let mut out = Array2::zeros((self.n_words, self.n_docs));
        for (d, col) in self.cols.iter().enumerate() {
            for &(w, v) in col {
                out[(w, d)] = v;
            }
        }
        out
    }

    /// Writes the sparse triplet dump: a one-line JSON header (shape and
    /// vocabulary hash) followed by "word_index doc_index value" lines.
    pub fn write_triplets<W: Write>(&self, vocab: &Vocabulary, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "{{\"n_words\":{},\"n_docs\":{},\"vocabulary_hash\":\"{:016x}\"}}",
            self.n_words,
            self.n_docs,
            vocab.fingerprint()
        )?;
        for (d, col) in self.cols.iter().enumerate() {
            for &(w, v) in col {
                writeln!(out, "{} {} {}", w, d, v)?;
            }
        }
        Ok(())
    }
}

/// Validates that `vocab` covers a corpus built with the same settings;
/// used by pipelines that accept a pre-built vocabulary.
pub fn check_vocabulary_covers(corpus: &Corpus, vocab: &Vocabulary) -> Result<()> {
    if corpus.len() > vocab.n_documents() {
        return Err(Error::Config(format!(
            "vocabulary was built from {} documents but the corpus has {}",
            vocab.n_documents(),
            corpus.len()
        )));
    }
    Ok(())
}
