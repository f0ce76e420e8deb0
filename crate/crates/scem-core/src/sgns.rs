//! Skip-gram with negative sampling.
//!
//! The trainer follows the classic word2vec recipe: per-position dynamic
//! window, unigram^0.75 noise distribution, linear learning-rate decay over
//! all scheduled positions, and frequent-word subsampling. Two execution
//! modes exist. Deterministic mode walks documents in order on one thread
//! and is bitwise reproducible for a given seed. Worker mode updates the
//! shared parameter matrices lock-free from several threads; write races are
//! tolerated by design, so its output varies run to run.
//!
//! RNG streams are derived per (epoch, document), never from a shared
//! counter, so the sampled windows, noise words, and subsample decisions are
//! identical in both modes; only the float races differ.

use std::sync::atomic::{AtomicU64, Ordering};

use ndarray::{Array1, Array2, ArrayView1};
use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::lexicon::{build_vocabulary, Vocabulary};
use crate::scalar::{unit_f64, Scalar};
use crate::seed::{self, uniform_index};
use crate::semspace::Embedding;

pub const MODEL_TAG_SGNS: &str = "sgns";

const INIT_STREAM: u64 = 0x1217;
const TRAIN_STREAM: u64 = 0x7A11;
const PROBE_STREAM: u64 = 0x9B0E;

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

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SgnsParams {
    pub dim: usize,
    /// Maximum context offset; the effective window per position is drawn
    /// uniformly from 1..=window.
    pub window: usize,
    /// Noise samples per positive pair.
    pub negatives: usize,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_lr_initial")]
    pub lr_initial: f64,
    #[serde(default = "default_lr_final")]
    pub lr_final: f64,
    /// Frequent-word threshold; a value <= 0 disables subsampling.
    #[serde(default = "default_subsample_t")]
    pub subsample_t: f64,
    pub seed: u64,
}

impl SgnsParams {
    pub fn new(dim: usize, window: usize, negatives: usize, seed: u64) -> Self {
        SgnsParams {
            dim,
            window,
            negatives,
            epochs: default_epochs(),
            lr_initial: default_lr_initial(),
            lr_final: default_lr_final(),
            subsample_t: default_subsample_t(),
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::Config("sgns dim must be at least 1".into()));
        }
        if self.window < 1 {
            return Err(Error::Config("sgns window must be at least 1".into()));
        }
        if self.negatives < 1 {
            return Err(Error::Config("sgns negatives must be at least 1".into()));
        }
        if !(self.lr_initial > self.lr_final && self.lr_final > 0.0) {
            return Err(Error::Config(format!(
                "sgns learning rates must satisfy lr_initial > lr_final > 0, got {} and {}",
                self.lr_initial, self.lr_final
            )));
        }
        Ok(())
    }
}

/// How training work is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    /// Single-threaded, bitwise reproducible. The default for anything that
    /// gets compared across runs.
    Deterministic,
    /// Lock-free multi-worker updates; nondeterministic output. 0 means one
    /// worker per available core.
    Workers(usize),
}

/// Noise distribution over the vocabulary, p(w) proportional to
/// corpus_count(w)^0.75.
#[derive(Debug, Clone)]
pub struct NoiseDistribution {
    cumulative: Vec<f64>,
}

impl NoiseDistribution {
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Config("noise distribution needs a vocabulary".into()));
        }
        if let Some(i) = counts.iter().position(|&c| c == 0) {
            return Err(Error::Config(format!(
                "noise distribution requires positive counts; word index {i} has count 0"
            )));
        }
        let weights: Vec<f64> = counts.iter().map(|&c| (c as f64).powf(0.75)).collect();
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        // Pin the tail so a unit draw in [0,1) can never fall past the end.
        *cumulative.last_mut().expect("nonempty") = 1.0;
        Ok(NoiseDistribution { cumulative })
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    pub fn probability(&self, index: usize) -> f64 {
        if index == 0 {
            self.cumulative[0]
        } else {
            self.cumulative[index] - self.cumulative[index - 1]
        }
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> usize {
        let u = unit_f64(rng);
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1)
    }
}

fn sigmoid<F: Scalar>(x: F) -> F {
    F::one() / (F::one() + (-x).exp())
}

/// Stable softplus: ln(1 + e^x) without overflow for large x.
fn softplus<F: Scalar>(x: F) -> F {
    x.max(F::zero()) + (-x.abs()).exp().ln_1p()
}

/// Loss of one positive (center, context) pair with its negative samples:
/// -ln sigma(c.v) - sum ln sigma(-c.n). Center is an input vector; context
/// and negatives are output vectors.
pub fn sgns_pair_loss<F: Scalar>(
    center: ArrayView1<F>,
    context: ArrayView1<F>,
    negatives: &[ArrayView1<F>],
) -> Result<F> {
    check_dims(center, context, negatives)?;
    let mut loss = softplus(-center.dot(&context));
    for neg in negatives {
        loss += softplus(center.dot(neg));
    }
    Ok(loss)
}

/// Gradients of `sgns_pair_loss` with respect to each input.
#[derive(Debug, Clone)]
pub struct PairGradients<F: Scalar> {
    pub center: Array1<F>,
    pub context: Array1<F>,
    pub negatives: Vec<Array1<F>>,
}

pub fn sgns_pair_gradients<F: Scalar>(
    center: ArrayView1<F>,
    context: ArrayView1<F>,
    negatives: &[ArrayView1<F>],
) -> Result<PairGradients<F>> {
    check_dims(center, context, negatives)?;
    let pos_coef = sigmoid(center.dot(&context)) - F::one();
    let mut grad_center = context.mapv(|v| v * pos_coef);
    let grad_context = center.mapv(|v| v * pos_coef);
    let grad_negatives = negatives
        .iter()
        .map(|neg| {
            let coef = sigmoid(center.dot(neg));
            for (g, &n) in grad_center.iter_mut().zip(neg.iter()) {
                *g += coef * n;
            }
            center.mapv(|v| v * coef)
        })
        .collect();
    Ok(PairGradients {
        center: grad_center,
        context: grad_context,
        negatives: grad_negatives,
    })
}

fn check_dims<F: Scalar>(
    center: ArrayView1<F>,
    context: ArrayView1<F>,
    negatives: &[ArrayView1<F>],
) -> Result<()> {
    let dim = center.len();
    if context.len() != dim || negatives.iter().any(|n| n.len() != dim) {
        return Err(Error::Config(format!(
            "sgns pair dimension mismatch: center {dim}, context {}, negatives {:?}",
            context.len(),
            negatives.iter().map(|n| n.len()).collect::<Vec<_>>()
        )));
    }
    Ok(())
}

/// Per-word keep probability min(1, sqrt(t / f(w))) with f the relative
/// corpus frequency. A non-positive threshold keeps everything.
pub(crate) fn subsample_keep_probabilities(vocab: &Vocabulary, t: f64, total_tokens: usize) -> Vec<f64> {
    if t <= 0.0 {
        return vec![1.0; vocab.len()];
    }
    let total = total_tokens as f64;
    (0..vocab.len())
        .map(|w| {
            let f = vocab.corpus_count(w) as f64 / total;
            (t / f).sqrt().min(1.0)
        })
        .collect()
}

/// Initial input vectors, uniform in [-0.5/dim, 0.5/dim], filled row-major
/// from a stream derived only from the seed.
pub(crate) fn initial_input_vectors<F: Scalar>(n_words: usize, dim: usize, seed: u64) -> Vec<F> {
    let mut rng = seed::rng_from(&[seed, INIT_STREAM]);
    let scale = 1.0 / dim as f64;
    (0..n_words * dim)
        .map(|_| F::of((unit_f64(&mut rng) - 0.5) * scale))
        .collect()
}

fn load_row<F: Scalar>(store: &[AtomicU64], base: usize, out: &mut [F]) {
    for (x, o) in out.iter_mut().enumerate() {
        *o = F::from_bits64(store[base + x].load(Ordering::Relaxed));
    }
}

/// One positive-or-negative update of the pair (center -> target). Reads the
/// live target row, accumulates the center correction in `neu1e`, and writes
/// the target row back. `center_row` is a snapshot taken at pair start; the
/// center row itself is only written once per pair, after all targets.
fn update_target<F: Scalar>(
    syn1: &[AtomicU64],
    dim: usize,
    center_row: &[F],
    target: usize,
    label: F,
    lr: F,
    neu1e: &mut [F],
) {
    let l1 = target * dim;
    let mut f = F::zero();
    for (x, &c) in center_row.iter().enumerate() {
        f += c * F::from_bits64(syn1[l1 + x].load(Ordering::Relaxed));
    }
    let g = (label - sigmoid(f)) * lr;
    for (x, &c) in center_row.iter().enumerate() {
        let s1 = F::from_bits64(syn1[l1 + x].load(Ordering::Relaxed));
        neu1e[x] += g * s1;
        syn1[l1 + x].store((s1 + g * c).to_bits64(), Ordering::Relaxed);
    }
    let _ = dim;
}

struct DocJob<'a> {
    tokens: &'a [usize],
    doc_index: usize,
    /// Tokens preceding this document in corpus order; fixes the position of
    /// this document on the learning-rate schedule.
    doc_offset: usize,
}

#[allow(clippy::too_many_arguments)]
fn train_document<F: Scalar>(
    syn0: &[AtomicU64],
    syn1: &[AtomicU64],
    job: &DocJob,
    epoch: usize,
    params: &SgnsParams,
    keep_prob: &[f64],
    noise: &NoiseDistribution,
    total_tokens: usize,
    total_updates: f64,
) {
    let dim = params.dim;
    let mut rng = seed::rng_from(&[
        params.seed,
        TRAIN_STREAM,
        epoch as u64,
        job.doc_index as u64,
    ]);
    let subsampling = params.subsample_t > 0.0;

    // Surviving tokens keep their raw position so the learning-rate schedule
    // does not depend on subsample outcomes.
    let mut sen: Vec<(usize, usize)> = Vec::with_capacity(job.tokens.len());
    for (pos, &w) in job.tokens.iter().enumerate() {
        if subsampling && unit_f64(&mut rng) >= keep_prob[w] {
            continue;
        }
        sen.push((w, pos));
    }
    if sen.len() < 2 {
        return;
    }

    let mut center_row = vec![F::zero(); dim];
    let mut neu1e = vec![F::zero(); dim];
    for j in 0..sen.len() {
        let (center, raw_pos) = sen[j];
        let tick = (epoch * total_tokens + job.doc_offset + raw_pos) as f64;
        let lr = params.lr_initial + (params.lr_final - params.lr_initial) * (tick / total_updates);
        let lr = F::of(lr.max(params.lr_final));
        let b = 1 + uniform_index(&mut rng, params.window);
        let lo = j.saturating_sub(b);
        let hi = (j + b).min(sen.len() - 1);
        let l0 = center * dim;
        for m in lo..=hi {
            if m == j {
                continue;
            }
            let context = sen[m].0;
            load_row(syn0, l0, &mut center_row);
            neu1e.iter_mut().for_each(|v| *v = F::zero());
            update_target(syn1, dim, &center_row, context, F::one(), lr, &mut neu1e);
            for _ in 0..params.negatives {
                let target = noise.sample(&mut rng);
                update_target(syn1, dim, &center_row, target, F::zero(), lr, &mut neu1e);
            }
            for (x, &e) in neu1e.iter().enumerate() {
                let cur = F::from_bits64(syn0[l0 + x].load(Ordering::Relaxed));
                syn0[l0 + x].store((cur + e).to_bits64(), Ordering::Relaxed);
            }
        }
    }
}

/// Probe pairs with pre-drawn negatives, used to trace the objective across
/// epochs on fixed inputs.
struct ResolvedProbe {
    center: usize,
    context: usize,
    negatives: Vec<usize>,
}

fn measure_probes<F: Scalar>(
    syn0: &[AtomicU64],
    syn1: &[AtomicU64],
    dim: usize,
    probes: &[ResolvedProbe],
) -> f64 {
    if probes.is_empty() {
        return 0.0;
    }
    let mut center = vec![F::zero(); dim];
    let mut target = vec![F::zero(); dim];
    let total: f64 = probes
        .iter()
        .map(|p| {
            load_row(syn0, p.center * dim, &mut center);
            load_row(syn1, p.context * dim, &mut target);
            let c = ArrayView1::from(&center[..]);
            let mut loss = softplus(-c.dot(&ArrayView1::from(&target[..]))).as_f64();
            for &n in &p.negatives {
                load_row(syn1, n * dim, &mut target);
                loss += softplus(c.dot(&ArrayView1::from(&target[..]))).as_f64();
            }
            loss
        })
        .sum();
    total / probes.len() as f64
}

/// Trains in deterministic single-threaded mode.
pub fn train_sgns<F: Scalar>(corpus: &Corpus, params: &SgnsParams) -> Result<Embedding<F>> {
    train_sgns_with(corpus, params, Parallelism::Deterministic)
}

pub fn train_sgns_with<F: Scalar>(
    corpus: &Corpus,
    params: &SgnsParams,
    mode: Parallelism,
) -> Result<Embedding<F>> {
    let (embedding, _) = train_impl(corpus, params, mode, &[])?;
    Ok(embedding)
}

/// Like `train_sgns`, additionally reporting the mean loss over the given
/// (center, context) probe pairs before training and after each epoch. The
/// negatives for each probe are drawn once, up front, from the noise
/// distribution. Probe words must be in the vocabulary.
pub fn train_sgns_traced<F: Scalar>(
    corpus: &Corpus,
    params: &SgnsParams,
    probes: &[(String, String)],
) -> Result<(Embedding<F>, Vec<f64>)> {
    train_impl(corpus, params, Parallelism::Deterministic, probes)
}

fn train_impl<F: Scalar>(
    corpus: &Corpus,
    params: &SgnsParams,
    mode: Parallelism,
    probes: &[(String, String)],
) -> Result<(Embedding<F>, Vec<f64>)> {
    params.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let vocab = build_vocabulary(corpus, 0);
    if vocab.len() < 2 {
        return Err(Error::Insufficient(format!(
            "sgns needs a vocabulary of at least 2 words for negative sampling, got {}",
            vocab.len()
        )));
    }
    let dim = params.dim;
    let noise = NoiseDistribution::from_counts(vocab.corpus_counts())?;
    let total_tokens = corpus.token_count();
    let keep_prob = subsample_keep_probabilities(&vocab, params.subsample_t, total_tokens);

    let mut jobs = Vec::with_capacity(corpus.len());
    let mut offset = 0usize;
    let mut id_docs: Vec<Vec<usize>> = Vec::with_capacity(corpus.len());
    for doc in corpus.documents() {
        let ids = doc
            .tokens
            .iter()
            .map(|t| vocab.index_of(t).expect("vocabulary covers its corpus"))
            .collect::<Vec<_>>();
        id_docs.push(ids);
    }
    for (doc_index, ids) in id_docs.iter().enumerate() {
        jobs.push(DocJob {
            tokens: ids,
            doc_index,
            doc_offset: offset,
        });
        offset += ids.len();
    }

    let syn0: Vec<AtomicU64> = initial_input_vectors::<F>(vocab.len(), dim, params.seed)
        .into_iter()
        .map(|v| AtomicU64::new(v.to_bits64()))
        .collect();
    let syn1: Vec<AtomicU64> = (0..vocab.len() * dim)
        .map(|_| AtomicU64::new(F::zero().to_bits64()))
        .collect();

    let resolved_probes = resolve_probes(&vocab, &noise, params, probes)?;
    let mut trace = Vec::new();
    if !resolved_probes.is_empty() {
        trace.push(measure_probes::<F>(&syn0, &syn1, dim, &resolved_probes));
    }

    let total_updates = (params.epochs * total_tokens).max(1) as f64;
    let pool = match mode {
        Parallelism::Deterministic => None,
        Parallelism::Workers(n) => {
            let mut builder = rayon::ThreadPoolBuilder::new();
            if n > 0 {
                builder = builder.num_threads(n);
            }
            Some(builder.build().map_err(|e| {
                Error::Config(format!("failed to build sgns worker pool: {e}"))
            })?)
        }
    };

    for epoch in 0..params.epochs {
        let run_doc = |job: &DocJob| {
            train_document::<F>(
                &syn0,
                &syn1,
                job,
                epoch,
                params,
                &keep_prob,
                &noise,
                total_tokens,
                total_updates,
            )
        };
        match &pool {
            None => jobs.iter().for_each(run_doc),
            Some(pool) => pool.install(|| {
                use rayon::prelude::*;
                jobs.par_iter().for_each(run_doc);
            }),
        }
        if !resolved_probes.is_empty() {
            trace.push(measure_probes::<F>(&syn0, &syn1, dim, &resolved_probes));
        }
    }

    let matrix = Array2::from_shape_vec(
        (vocab.len(), dim),
        syn0.iter()
            .map(|a| F::from_bits64(a.load(Ordering::Relaxed)))
            .collect(),
    )
    .expect("embedding shape");
    let fingerprint = serde_json::to_string(params)
        .map_err(|e| Error::Config(format!("failed to serialize sgns params: {e}")))?;
    let embedding = Embedding::new(
        vocab.words().to_vec(),
        vocab.corpus_counts().to_vec(),
        matrix,
        MODEL_TAG_SGNS,
        fingerprint,
    )?;
    Ok((embedding, trace))
}

fn resolve_probes(
    vocab: &Vocabulary,
    noise: &NoiseDistribution,
    params: &SgnsParams,
    probes: &[(String, String)],
) -> Result<Vec<ResolvedProbe>> {
    let mut rng = seed::rng_from(&[params.seed, PROBE_STREAM]);
    probes
        .iter()
        .map(|(c, x)| {
            let center = vocab
                .index_of(c)
                .ok_or_else(|| Error::OutOfVocabulary(c.clone()))?;
            let context = vocab
                .index_of(x)
                .ok_or_else(|| Error::OutOfVocabulary(x.clone()))?;
            let negatives = (0..params.negatives).map(|_| noise.sample(&mut rng)).collect();
            Ok(ResolvedProbe {
                center,
                context,
                negatives,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TokenDocument;
    use ndarray::Array1;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    fn corpus_from(docs: Vec<Vec<&str>>) -> Corpus {
        let documents = docs
            .into_iter()
            .enumerate()
            .map(|(i, tokens)| TokenDocument {
                doc_id: format!("d{i}"),
                tokens: tokens.into_iter().map(str::to_string).collect(),
            })
            .collect();
        Corpus::from_documents(documents, "test")
    }

    /// Two topics with disjoint vocabularies, documents interleaved.
    fn topic_corpus(docs_per_topic: usize, seed: u64) -> Corpus {
        let topic_a = ["ship", "sail", "mast", "deck", "wave", "anchor", "rope", "tide"];
        let topic_b = ["flour", "yeast", "oven", "dough", "crust", "knead", "bake", "loaf"];
        let mut rng = seed::rng_from(&[seed, 0xC0]);
        let mut documents = Vec::new();
        for i in 0..docs_per_topic * 2 {
            let words: &[&str] = if i % 2 == 0 { &topic_a } else { &topic_b };
            let tokens = (0..8)
                .map(|_| words[uniform_index(&mut rng, words.len())].to_string())
                .collect();
            documents.push(TokenDocument {
                doc_id: format!("d{i}"),
                tokens,
            });
        }
        Corpus::from_documents(documents, "topics")
    }

    fn mean_cosines(emb: &Embedding<f32>, a: &[&str], b: &[&str]) -> (f64, f64) {
        let mut within = Vec::new();
        let mut across = Vec::new();
        for g in [a, b] {
            for (i, w1) in g.iter().enumerate() {
                for w2 in &g[i + 1..] {
                    within.push(emb.similarity(w1, w2).unwrap());
                }
            }
        }
        for w1 in a {
            for w2 in b {
                across.push(emb.similarity(w1, w2).unwrap());
            }
        }
        (
            within.iter().sum::<f64>() / within.len() as f64,
            across.iter().sum::<f64>() / across.len() as f64,
        )
    }

    #[test]
    fn pair_loss_at_zero_dots() {
        let c = Array1::from(vec![0.0f64; 4]);
        let v = Array1::from(vec![0.5f64, -0.5, 0.25, 0.0]);
        let n = Array1::from(vec![1.0f64, 1.0, 1.0, 1.0]);
        let loss = sgns_pair_loss(c.view(), v.view(), &[n.view()]).unwrap();
        assert!((loss - 2.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn pair_loss_saturates_to_zero() {
        let c = Array1::from(vec![30.0f64, 0.0]);
        let v = Array1::from(vec![30.0f64, 0.0]);
        let n = Array1::from(vec![-30.0f64, 0.0]);
        let loss = sgns_pair_loss(c.view(), v.view(), &[n.view()]).unwrap();
        assert!(loss >= 0.0);
        assert!(loss < 1e-9, "loss {loss}");
    }

    #[test]
    fn pair_loss_dimension_mismatch() {
        let c = Array1::from(vec![0.0f64; 4]);
        let v = Array1::from(vec![0.0f64; 3]);
        assert!(matches!(
            sgns_pair_loss(c.view(), v.view(), &[]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn gradients_match_finite_differences() {
        let dim = 10;
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        let step = 1e-5;
        for case in 0..120 {
            let n_neg = 1 + case % 4;
            let sample = |rng: &mut ChaCha8Rng| {
                Array1::from(
                    (0..dim)
                        .map(|_| 0.4 * f64::sample_standard_normal(rng))
                        .collect::<Vec<_>>(),
                )
            };
            let center = sample(&mut rng);
            let context = sample(&mut rng);
            let negatives: Vec<Array1<f64>> = (0..n_neg).map(|_| sample(&mut rng)).collect();
            let neg_views: Vec<_> = negatives.iter().map(|n| n.view()).collect();
            let grads =
                sgns_pair_gradients(center.view(), context.view(), &neg_views).unwrap();

            let check = |analytic: &Array1<f64>, which: usize, coord: usize| {
                let bump = |delta: f64| {
                    let mut c = center.clone();
                    let mut v = context.clone();
                    let mut ns = negatives.clone();
                    match which {
                        0 => c[coord] += delta,
                        1 => v[coord] += delta,
                        w => ns[w - 2][coord] += delta,
                    }
                    let views: Vec<_> = ns.iter().map(|n| n.view()).collect();
                    sgns_pair_loss(c.view(), v.view(), &views).unwrap()
                };
                let fd = (bump(step) - bump(-step)) / (2.0 * step);
                let denom = fd.abs().max(1e-3);
                assert!(
                    (analytic[coord] - fd).abs() / denom < 1e-4,
                    "case {case} vector {which} coord {coord}: {} vs {}",
                    analytic[coord],
                    fd
                );
            };
            for coord in 0..dim {
                check(&grads.center, 0, coord);
                check(&grads.context, 1, coord);
                for (g, grad) in grads.negatives.iter().enumerate() {
                    check(grad, g + 2, coord);
                }
            }
        }
    }

    #[test]
    fn noise_probabilities_sum_to_one() {
        let noise = NoiseDistribution::from_counts(&[1000, 400, 200, 100, 50, 20, 10, 5, 2, 1])
            .unwrap();
        let total: f64 = (0..noise.len()).map(|i| noise.probability(i)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((0..noise.len()).all(|i| noise.probability(i) > 0.0));
    }

    #[test]
    fn noise_rejects_zero_counts() {
        assert!(NoiseDistribution::from_counts(&[3, 0, 5]).is_err());
        assert!(NoiseDistribution::from_counts(&[]).is_err());
    }

    #[test]
    fn noise_empirical_frequencies_track_powered_counts() {
        let counts = [1000u64, 400, 200, 100, 50, 20, 10, 5, 2, 1];
        let noise = NoiseDistribution::from_counts(&counts).unwrap();
        let mut rng = seed::rng_from(&[2]);
        let draws = 1_000_000;
        let mut hits = vec![0usize; counts.len()];
        for _ in 0..draws {
            hits[noise.sample(&mut rng)] += 1;
        }
        for (i, &h) in hits.iter().enumerate() {
            let p = noise.probability(i);
            if p >= 0.01 {
                let observed = h as f64 / draws as f64;
                let rel = (observed - p).abs() / p;
                assert!(rel < 0.01, "word {i}: observed {observed}, expected {p}");
            }
        }
    }

    #[test]
    fn subsample_keep_probability_formula() {
        let corpus = corpus_from(vec![vec![
            "a", "a", "a", "a", "a", "a", "a", "a", // f = 8/16
            "b", "b", "b", "b", // f = 4/16
            "c", "d", "e", "f", // rare
        ]]);
        let vocab = build_vocabulary(&corpus, 0);
        let t = 0.125;
        let keep = subsample_keep_probabilities(&vocab, t, corpus.token_count());
        let ia = vocab.index_of("a").unwrap();
        let ib = vocab.index_of("b").unwrap();
        let ic = vocab.index_of("c").unwrap();
        assert!((keep[ia] - 0.5).abs() < 1e-12); // sqrt(0.125 / 0.5)
        assert!((keep[ib] - (0.125f64 / 0.25).sqrt()).abs() < 1e-12);
        assert!((keep[ic] - 1.0).abs() < 1e-12); // clamped
        let disabled = subsample_keep_probabilities(&vocab, 0.0, corpus.token_count());
        assert!(disabled.iter().all(|&k| k == 1.0));
    }

    #[test]
    fn epochs_zero_returns_initialization() {
        let corpus = corpus_from(vec![
            vec!["a", "b", "c"],
            vec!["b", "c", "d"],
        ]);
        let mut params = SgnsParams::new(6, 2, 2, 42);
        params.epochs = 0;
        let emb = train_sgns::<f64>(&corpus, &params).unwrap();
        let bound = 0.5 / 6.0;
        for &v in emb.matrix().iter() {
            assert!(v >= -bound && v < bound, "init value {v} outside range");
        }
        let init = initial_input_vectors::<f64>(emb.len(), 6, 42);
        for (a, b) in emb.matrix().iter().zip(init.iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn topic_blocks_separate_after_training() {
        let corpus = topic_corpus(2500, 7);
        let mut params = SgnsParams::new(16, 2, 3, 11);
        params.epochs = 3;
        let emb = train_sgns::<f32>(&corpus, &params).unwrap();
        let a = ["ship", "sail", "mast", "deck", "wave", "anchor", "rope", "tide"];
        let b = ["flour", "yeast", "oven", "dough", "crust", "knead", "bake", "loaf"];
        let (within, across) = mean_cosines(&emb, &a, &b);
        assert!(
            within > across,
            "within-topic {within} should exceed cross-topic {across}"
        );
    }

    #[test]
    fn probe_loss_nonincreasing_across_epochs() {
        let probes: Vec<(String, String)> = [
            ("ship", "sail"),
            ("mast", "deck"),
            ("flour", "yeast"),
            ("oven", "dough"),
            ("wave", "anchor"),
            ("bake", "loaf"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        let mut transitions = 0;
        let mut violations = 0;
        for seed in 0..5 {
            let corpus = topic_corpus(600, seed);
            let mut params = SgnsParams::new(12, 2, 3, seed * 31 + 1);
            params.epochs = 5;
            let (_, trace) = train_sgns_traced::<f32>(&corpus, &params, &probes).unwrap();
            assert_eq!(trace.len(), 6);
            for w in trace.windows(2) {
                transitions += 1;
                if w[1] > w[0] {
                    violations += 1;
                }
            }
        }
        assert!(
            (violations as f64) <= 0.05 * transitions as f64,
            "{violations} increases out of {transitions} epoch transitions"
        );
    }

    #[test]
    fn deterministic_mode_is_bitwise_reproducible() {
        let corpus = topic_corpus(40, 3);
        let mut params = SgnsParams::new(8, 2, 2, 5);
        params.epochs = 2;
        let a = train_sgns::<f32>(&corpus, &params).unwrap();
        let b = train_sgns::<f32>(&corpus, &params).unwrap();
        assert_eq!(a.words(), b.words());
        for (x, y) in a.matrix().iter().zip(b.matrix().iter()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        params.seed = 6;
        let c = train_sgns::<f32>(&corpus, &params).unwrap();
        assert!(a.matrix().iter().zip(c.matrix().iter()).any(|(x, y)| x != y));
    }

    #[test]
    fn worker_mode_produces_finite_vectors() {
        let corpus = topic_corpus(60, 9);
        let mut params = SgnsParams::new(8, 2, 2, 5);
        params.epochs = 2;
        let emb = train_sgns_with::<f32>(&corpus, &params, Parallelism::Workers(4)).unwrap();
        assert!(emb.matrix().iter().all(|v| v.is_finite()));
        assert_eq!(emb.model_tag(), MODEL_TAG_SGNS);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let empty = Corpus::from_documents(vec![], "empty");
        let params = SgnsParams::new(4, 2, 2, 1);
        assert!(matches!(
            train_sgns::<f32>(&empty, &params),
            Err(Error::EmptyCorpus)
        ));

        let one_word = corpus_from(vec![vec!["solo", "solo", "solo"]]);
        assert!(matches!(
            train_sgns::<f32>(&one_word, &params),
            Err(Error::Insufficient(_))
        ));

        let corpus = corpus_from(vec![vec!["a", "b"]]);
        let mut bad = SgnsParams::new(4, 2, 2, 1);
        bad.lr_final = 0.05;
        assert!(matches!(
            train_sgns::<f32>(&corpus, &bad),
            Err(Error::Config(_))
        ));
        let mut zero_window = SgnsParams::new(4, 2, 2, 1);
        zero_window.window = 0;
        assert!(train_sgns::<f32>(&corpus, &zero_window).is_err());
    }

    #[test]
    fn params_fingerprint_round_trips() {
        let params = SgnsParams::new(100, 15, 10, 77);
        let json = serde_json::to_string(&params).unwrap();
        let back: SgnsParams = serde_json::from_str(&json).unwrap();
        assert_eq!(params, back);
        assert!(serde_json::from_str::<SgnsParams>(
            "{\"dim\":4,\"window\":2,\"negatives\":2,\"seed\":1,\"bogus\":3}"
        )
        .is_err());
    }
}
