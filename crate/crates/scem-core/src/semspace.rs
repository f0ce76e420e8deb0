//! Embedding storage and similarity queries.
//!
//! An [`Embedding`] is an immutable word-to-vector table plus the corpus
//! counts needed by frequency filters. All-zero rows ("dead words", e.g.
//! words occurring in every document under tf-idf) are tracked explicitly:
//! the cosine of a zero vector is undefined, so querying one is an error
//! rather than a silent 0.
//!
//! # File formats
//!
//! Binary (`save`/`load`): magic `SCEM1`, then little-endian fields:
//! u32 tag length + model tag, u32 dim, u64 vocabulary size, u32 length +
//! params fingerprint (JSON), then per word a u32 length + UTF-8 bytes +
//! u64 corpus count, then all rows as f32 values. Counts are persisted so
//! a loaded embedding still supports min-count neighbor filters.
//!
//! Text (`write_text`/`read_text`): one line per word, the word followed
//! by `dim` floats, space-separated. Floats print with enough digits to
//! round-trip exactly.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAGIC: &[u8; 5] = b"SCEM1";

#[derive(Debug, Clone)]
pub struct Embedding<F: Scalar> {
    words: Vec<String>,
    index_of: HashMap<String, usize>,
    counts: Vec<u64>,
    matrix: Array2<F>,
    model_tag: String,
    params_fingerprint: String,
    dead: BTreeSet<usize>,
}

/// Nearest neighbors of a target word, descending similarity.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborList {
    pub target: String,
    pub entries: Vec<(String, f64)>,
    pub min_count: u64,
}

impl<F: Scalar> Embedding<F> {
    pub fn new(
        words: Vec<String>,
        counts: Vec<u64>,
        matrix: Array2<F>,
        model_tag: impl Into<String>,
        params_fingerprint: impl Into<String>,
    ) -> Result<Self> {
        if words.len() != matrix.nrows() || words.len() != counts.len() {
            return Err(Error::Config(format!(
                "embedding shape mismatch: {} words, {} counts, {} rows",
                words.len(),
                counts.len(),
                matrix.nrows()
            )));
        }
        let mut index_of = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index_of.insert(w.clone(), i).is_some() {
                return Err(Error::Config(format!("duplicate word {w:?} in embedding")));
            }
        }
        let dead = matrix
            .rows()
            .into_iter()
            .enumerate()
            .filter(|(_, row)| row.iter().all(|v| *v == F::zero()))
            .map(|(i, _)| i)
            .collect();
        Ok(Embedding {
            words,
            index_of,
            counts,
            matrix,
            model_tag: model_tag.into(),
            params_fingerprint: params_fingerprint.into(),
            dead,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn model_tag(&self) -> &str {
        &self.model_tag
    }

    pub fn params_fingerprint(&self) -> &str {
        &self.params_fingerprint
    }

    pub fn matrix(&self) -> &Array2<F> {
        &self.matrix
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index_of.contains_key(word)
    }

    pub fn corpus_count(&self, word: &str) -> Option<u64> {
        self.index_of.get(word).map(|&i| self.counts[i])
    }

    pub fn vector(&self, word: &str) -> Option<ArrayView1<'_, F>> {
        self.index_of.get(word).map(|&i| self.matrix.row(i))
    }

    /// Words whose vectors are all-zero and therefore unqueryable.
    pub fn dead_words(&self) -> impl Iterator<Item = &str> {
        self.dead.iter().map(|&i| self.words[i].as_str())
    }

    pub fn is_dead(&self, word: &str) -> bool {
        self.index_of
            .get(word)
            .is_some_and(|i| self.dead.contains(i))
    }

    fn live_index(&self, word: &str) -> Result<usize> {
        let &i = self
            .index_of
            .get(word)
            .ok_or_else(|| Error::OutOfVocabulary(word.to_owned()))?;
        if self.dead.contains(&i) {
            return Err(Error::DeadWord(word.to_owned()));
        }
        Ok(i)
    }

    /// Cosine of two rows, accumulated in f64 for both scalar widths.
    fn cosine_by_index(&self, i: usize, j: usize) -> f64 {
        let (mut dot, mut ni, mut nj) = (0.0f64, 0.0f64, 0.0f64);
        for (a, b) in self.matrix.row(i).iter().zip(self.matrix.row(j)) {
            let (a, b) = (a.as_f64(), b.as_f64());
            dot += a * b;
            ni += a * a;
            nj += b * b;
        }
        dot / (ni.sqrt() * nj.sqrt())
    }

    /// Cosine similarity in [-1, 1]. Errors on out-of-vocabulary or dead
    /// words (the offending word is named).
    pub fn similarity(&self, w1: &str, w2: &str) -> Result<f64> {
        let i = self.live_index(w1)?;
        let j = self.live_index(w2)?;
        Ok(self.cosine_by_index(i, j))
    }

    /// Cosine distance: 1 - similarity, in [0, 2].
    pub fn distance(&self, w1: &str, w2: &str) -> Result<f64> {
        Ok(1.0 - self.similarity(w1, w2)?)
    }

    /// Live candidate indices around `target`: everything except the
    /// target itself and dead words, optionally frequency-filtered.
    fn candidates(&self, target: usize, min_count: u64) -> Vec<usize> {
        (0..self.words.len())
            .filter(|&i| i != target && !self.dead.contains(&i) && self.counts[i] >= min_count)
            .collect()
    }

    /// The `k` most similar in-filter words. Ties break by ascending word
    /// order; fewer than `k` entries are returned when the filter leaves
    /// fewer candidates.
    pub fn neighbors(&self, target: &str, k: usize, min_count: u64) -> Result<NeighborList> {
        let t = self.live_index(target)?;
        let mut scored: Vec<(usize, f64)> = self
            .candidates(t, min_count)
            .into_iter()
            .map(|i| (i, self.cosine_by_index(t, i)))
            .collect();
        scored.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap()
                .then_with(|| self.words[a.0].cmp(&self.words[b.0]))
        });
        scored.truncate(k);
        Ok(NeighborList {
            target: target.to_owned(),
            entries: scored
                .into_iter()
                .map(|(i, s)| (self.words[i].clone(), s))
                .collect(),
            min_count,
        })
    }

    fn rank_among(&self, t: usize, p: usize, candidates: &[usize]) -> usize {
        let ps = self.cosine_by_index(t, p);
        let pword = &self.words[p];
        let mut ahead = 0usize;
        for &i in candidates {
            if i == p {
                continue;
            }
            let s = self.cosine_by_index(t, i);
            if s > ps || (s == ps && self.words[i] < *pword) {
                ahead += 1;
            }
        }
        ahead + 1
    }

    /// 1-based position of `probe` when all live vocabulary words except
    /// `target` are ordered by descending similarity to `target` (ties by
    /// ascending word order). Rank 1 is the nearest word.
    pub fn rank_distance(&self, target: &str, probe: &str) -> Result<usize> {
        if target == probe {
            return Err(Error::Config(format!(
                "rank_distance probe equals target ({target:?})"
            )));
        }
        let t = self.live_index(target)?;
        let p = self.live_index(probe)?;
        let candidates = self.candidates(t, 0);
        Ok(self.rank_among(t, p, &candidates))
    }

    /// Minimum rank over the probes that are present (and live) in the
    /// vocabulary; `None` when no probe is usable. A missing probe is
    /// never substituted with a fabricated rank.
    pub fn min_rank_distance<'a, I>(&self, target: &str, probes: I) -> Result<Option<usize>>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let t = self.live_index(target)?;
        let candidates = self.candidates(t, 0);
        let mut best: Option<usize> = None;
        for probe in probes {
            if probe == target {
                continue;
            }
            match self.index_of.get(probe) {
                Some(&p) if !self.dead.contains(&p) => {
                    let r = self.rank_among(t, p, &candidates);
                    best = Some(best.map_or(r, |b| b.min(r)));
                }
                _ => {}
            }
        }
        Ok(best)
    }

    /// `min_rank_distance` restricted to a candidate word set: ranks are
    /// computed among `allowed` words only (intersected with the live
    /// vocabulary, target excluded). Used when one shared embedding serves
    /// queries scoped to a sub-corpus vocabulary.
    pub fn min_rank_distance_within<'a, I>(
        &self,
        target: &str,
        probes: I,
        allowed: &BTreeSet<String>,
    ) -> Result<Option<usize>>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let t = self.live_index(target)?;
        let candidates: Vec<usize> = (0..self.words.len())
            .filter(|&i| {
                i != t && !self.dead.contains(&i) && allowed.contains(self.words[i].as_str())
            })
            .collect();
        let mut best: Option<usize> = None;
        for probe in probes {
            if probe == target {
                continue;
            }
            match self.index_of.get(probe) {
                Some(&p) if !self.dead.contains(&p) && allowed.contains(probe) => {
                    let r = self.rank_among(t, p, &candidates);
                    best = Some(best.map_or(r, |b| b.min(r)));
                }
                _ => {}
            }
        }
        Ok(best)
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        write_bytes(&mut w, self.model_tag.as_bytes())?;
        w.write_all(&(self.dim() as u32).to_le_bytes())?;
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        write_bytes(&mut w, self.params_fingerprint.as_bytes())?;
        for (word, count) in self.words.iter().zip(&self.counts) {
            write_bytes(&mut w, word.as_bytes())?;
            w.write_all(&count.to_le_bytes())?;
        }
        for v in self.matrix.iter() {
            w.write_all(&v.as_f32().to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let bad = |msg: &str| Error::EmbeddingFormat(msg.to_owned());
        let mut magic = [0u8; 5];
        r.read_exact(&mut magic)
            .map_err(|_| bad("file too short for magic"))?;
        if &magic != MAGIC {
            return Err(bad("bad magic; not an embedding file"));
        }
        let model_tag = read_string(&mut r, "model tag")?;
        let dim = read_u32(&mut r, "dim")? as usize;
        let vocab = read_u64(&mut r, "vocabulary size")? as usize;
        let params_fingerprint = read_string(&mut r, "params fingerprint")?;
        let mut words = Vec::with_capacity(vocab);
        let mut counts = Vec::with_capacity(vocab);
        for _ in 0..vocab {
            words.push(read_string(&mut r, "word")?);
            counts.push(read_u64(&mut r, "word count")?);
        }
        let mut data = Vec::with_capacity(vocab * dim);
        let mut buf = [0u8; 4];
        for _ in 0..vocab * dim {
            r.read_exact(&mut buf)
                .map_err(|_| bad("truncated vector data"))?;
            data.push(F::widen_f32(f32::from_le_bytes(buf)));
        }
        let matrix = Array2::from_shape_vec((vocab, dim), data)
            .map_err(|_| bad("inconsistent matrix shape"))?;
        Embedding::new(words, counts, matrix, model_tag, params_fingerprint)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_binary(BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_binary(BufReader::new(file))
    }

    /// Plain-text interchange format: word then `dim` floats per line.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (i, word) in self.words.iter().enumerate() {
            write!(w, "{word}")?;
            for v in self.matrix.row(i) {
                write!(w, " {}", v.as_f32())?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Reads the plain-text format. Counts are not part of the text format
    /// and load as zero. The dimension is inferred from the first line.
    pub fn read_text<R: Read>(r: R, model_tag: &str) -> Result<Self> {
        let reader = BufReader::new(r);
        let mut words = Vec::new();
        let mut data: Vec<F> = Vec::new();
        let mut dim: Option<usize> = None;
        for (lineno, line) in reader.lines().enumerate() {
            let line =
                line.map_err(|_| Error::EmbeddingFormat(format!("unreadable line {lineno}")))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let word = parts.next().unwrap().to_owned();
            let values: Vec<F> = parts
                .map(|p| {
                    p.parse::<f32>().map(F::widen_f32).map_err(|_| {
                        Error::EmbeddingFormat(format!("bad float {p:?} on line {}", lineno + 1))
                    })
                })
                .collect::<Result<_>>()?;
            match dim {
                None => dim = Some(values.len()),
                Some(d) if d != values.len() => {
                    return Err(Error::EmbeddingFormat(format!(
                        "line {} has {} values, expected {d}",
                        lineno + 1,
                        values.len()
                    )));
                }
                _ => {}
            }
            words.push(word);
            data.extend(values);
        }
        let dim = dim.unwrap_or(0);
        let n = words.len();
        let counts = vec![0; n];
        let matrix = Array2::from_shape_vec((n, dim), data)
            .map_err(|_| Error::EmbeddingFormat("inconsistent matrix shape".into()))?;
        Embedding::new(words, counts, matrix, model_tag, "{}")
    }
}

fn write_bytes<W: Write>(w: &mut W, bytes: &[u8]) -> std::io::Result<()> {
    w.write_all(&(bytes.len() as u32).to_le_bytes())?;
    w.write_all(bytes)
}

fn read_u32<R: Read>(r: &mut R, what: &str) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)
        .map_err(|_| Error::EmbeddingFormat(format!("truncated {what}")))?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(r: &mut R, what: &str) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)
        .map_err(|_| Error::EmbeddingFormat(format!("truncated {what}")))?;
    Ok(u64::from_le_bytes(buf))
}

fn read_string<R: Read>(r: &mut R, what: &str) -> Result<String> {
    let len = read_u32(r, what)? as usize;
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)
        .map_err(|_| Error::EmbeddingFormat(format!("truncated {what}")))?;
    String::from_utf8(buf).map_err(|_| Error::EmbeddingFormat(format!("{what} is not UTF-8")))
}
