//! Counter-based embeddings: tf-idf matrix factored by a seeded randomized
//! truncated SVD.
//!
//! The factorization follows the sketch-and-solve scheme: project the
//! weighted matrix onto a random Gaussian subspace, orthonormalize, optionally
//! run power iterations to sharpen the spectrum, then solve the small problem
//! exactly with a Jacobi SVD. On matrices whose short side is small the
//! sketch is widened to the full short side, which makes the result exact up
//! to rounding rather than approximate.

use ndarray::{s, Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::lexicon::{build_vocabulary, count_matrix, tfidf, WeightedTermDocMatrix};
use crate::linalg::{jacobi_svd, orthonormalize_columns};
use crate::scalar::Scalar;
use crate::seed;
use crate::semspace::Embedding;

pub const MODEL_TAG_LSA: &str = "lsa";

const SKETCH_STREAM: u64 = 0xD1A7;

/// Below this short-side width the sketch covers the whole short side, so the
/// factorization is exact (the randomized path only pays off on big inputs).
const EXACT_WIDTH_CAP: usize = 64;

fn default_oversampling() -> usize {
    10
}

fn default_power_iterations() -> usize {
    2
}

fn default_scale() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LsaParams {
    /// Target rank. Clamped to min(|V|, N) at factorization time.
    pub dim: usize,
    pub seed: u64,
    /// Extra sketch columns beyond `dim`.
    #[serde(default = "default_oversampling")]
    pub oversampling: usize,
    #[serde(default = "default_power_iterations")]
    pub power_iterations: usize,
    /// Word vectors are rows of U·diag(S) when true, rows of bare U when
    /// false. Scaling changes cosines; true is the classical convention.
    #[serde(default = "default_scale")]
    pub scale_by_singular_values: bool,
}

impl LsaParams {
    pub fn new(dim: usize, seed: u64) -> Self {
        LsaParams {
            dim,
            seed,
            oversampling: default_oversampling(),
            power_iterations: default_power_iterations(),
            scale_by_singular_values: default_scale(),
        }
    }
}

/// Rank-k factorization M ≈ U·diag(S)·Vt with orthonormal U columns and Vt
/// rows, singular values non-increasing.
#[derive(Debug, Clone)]
pub struct SvdFactors<F: Scalar> {
    pub u: Array2<F>,
    pub s: Array1<F>,
    pub vt: Array2<F>,
}

impl<F: Scalar> SvdFactors<F> {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// Dense U·diag(S)·Vt, for residual checks on small matrices.
    pub fn reconstruct(&self) -> Array2<F> {
        let mut scaled = self.u.clone();
        for (j, mut col) in scaled.columns_mut().into_iter().enumerate() {
            col.mapv_inplace(|v| v * self.s[j]);
        }
        scaled.dot(&self.vt)
    }
}

/// Seeded randomized truncated SVD of the weighted term-document matrix.
///
/// `params.dim` is clamped to min(|V|, N); the caller decides whether the
/// clamp deserves a warning. Deterministic for a given seed: the Gaussian
/// sketch is filled in row-major order from a stream derived only from the
/// seed, so results do not depend on thread count.
pub fn truncated_svd<F: Scalar>(
    m: &WeightedTermDocMatrix<F>,
    params: &LsaParams,
) -> Result<SvdFactors<F>> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let min_dim = m.n_words.min(m.n_docs);
    if params.dim == 0 {
        return Err(Error::Config("svd rank must be at least 1".into()));
    }
    let k = params.dim.min(min_dim);
    let l = if min_dim <= EXACT_WIDTH_CAP {
        min_dim
    } else {
        (k + params.oversampling).min(min_dim)
    };

    let mut rng = seed::rng_from(&[params.seed, SKETCH_STREAM]);
    let omega_flat: Vec<F> = (0..m.n_docs * l)
        .map(|_| F::sample_standard_normal(&mut rng))
        .collect();
    let omega = Array2::from_shape_vec((m.n_docs, l), omega_flat).expect("sketch shape");

    let mut q = m.multiply_right(&omega.view());
    orthonormalize_columns(&mut q);
    for _ in 0..params.power_iterations {
        let mut z = m.multiply_transpose(&q.view());
        orthonormalize_columns(&mut z);
        q = m.multiply_right(&z.view());
        orthonormalize_columns(&mut q);
    }

    // W = MᵀQ is N×l and l ≤ min_dim ≤ N, so it is tall enough for the
    // one-sided Jacobi. From W = Uw·diag(S)·Vwt and QᵀM = Wᵀ it follows that
    // M ≈ (Q·Vwtᵀ)·diag(S)·Uwᵀ.
    let w = m.multiply_transpose(&q.view());
    let (uw, sw, vwt) = jacobi_svd(&w);

    let u_full = q.dot(&vwt.t());
    let mut u = u_full.slice(s![.., ..k]).to_owned();
    let s = sw.slice(s![..k]).to_owned();
    let mut vt = uw.t().slice(s![..k, ..]).to_owned();

    // Deterministic sign convention: in each column of U the entry of
    // largest magnitude (first such index on ties) is made positive.
    for j in 0..k {
        let col = u.column(j);
        let mut best = 0;
        for (i, v) in col.iter().enumerate() {
            if v.abs() > col[best].abs() {
                best = i;
            }
        }
        if col[best] < F::zero() {
            u.column_mut(j).mapv_inplace(|v| -v);
            vt.row_mut(j).mapv_inplace(|v| -v);
        }
    }

    Ok(SvdFactors { u, s, vt })
}

/// Trains an LSA embedding with default oversampling and power iterations.
/// Returns the embedding plus any warnings (currently only dim clamping).
pub fn train_lsa<F: Scalar>(
    corpus: &Corpus,
    dim: usize,
    seed: u64,
) -> Result<(Embedding<F>, Vec<String>)> {
    train_lsa_with(corpus, &LsaParams::new(dim, seed))
}

pub fn train_lsa_with<F: Scalar>(
    corpus: &Corpus,
    params: &LsaParams,
) -> Result<(Embedding<F>, Vec<String>)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let vocab = build_vocabulary(corpus, 0);
    let counts = count_matrix(corpus, &vocab);
    let weighted: WeightedTermDocMatrix<F> = tfidf(&counts, &vocab);
    if weighted.is_zero() {
        // A single document (or any corpus where every word hits every
        // document) zeroes the idf term everywhere.
        return Err(Error::ZeroMatrix);
    }

    let mut warnings = Vec::new();
    let min_dim = vocab.len().min(corpus.len());
    let mut effective = params.clone();
    if effective.dim > min_dim {
        warnings.push(format!(
            "lsa dim clamped from {} to {} (vocabulary {}, documents {})",
            effective.dim,
            min_dim,
            vocab.len(),
            corpus.len()
        ));
        effective.dim = min_dim;
    }

    let factors = truncated_svd(&weighted, &effective)?;
    let k = factors.rank();
    let mut matrix = factors.u;
    if effective.scale_by_singular_values {
        for j in 0..k {
            let sj = factors.s[j];
            matrix.column_mut(j).mapv_inplace(|v| v * sj);
        }
    }

    let fingerprint = serde_json::to_string(&effective)
        .map_err(|e| Error::Config(format!("failed to serialize lsa params: {e}")))?;
    let embedding = Embedding::new(
        vocab.words().to_vec(),
        vocab.corpus_counts().to_vec(),
        matrix,
        MODEL_TAG_LSA,
        fingerprint,
    )?;
    Ok((embedding, warnings))
}
