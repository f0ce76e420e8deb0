//! Independent reference implementations used to verify the production
//! code. Everything here favors obviousness over speed: a different
//! algorithm, written directly from the defining formula, with no code
//! shared with the module under test. Compiled for unit tests and, behind
//! the `reference-oracles` feature, for downstream verification suites.
//! Not intended for production use.

use ndarray::Array2;

/// Eigenvalues of a symmetric matrix by classic two-sided cyclic Jacobi,
/// returned in descending order.
pub fn symmetric_eigenvalues(a: &Array2<f64>) -> Vec<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let mut m = a.clone();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() < 1e-300_f64.max(1e-15 * frobenius(&m)) {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = c * t;
                // M <- J^T M J with J the (p,q) rotation.
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = c * mip - s * miq;
                    m[(i, q)] = s * mip + c * miq;
                }
                for i in 0..n {
                    let mpi = m[(p, i)];
                    let mqi = m[(q, i)];
                    m[(p, i)] = c * mpi - s * mqi;
                    m[(q, i)] = s * mpi + c * mqi;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eig
}

fn frobenius(a: &Array2<f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// All singular values of a dense matrix, descending, via eigenvalues of
/// the Gram matrix on the smaller side.
pub fn singular_values(a: &Array2<f64>) -> Vec<f64> {
    let (m, n) = a.dim();
    let gram = if n <= m { a.t().dot(a) } else { a.dot(&a.t()) };
    symmetric_eigenvalues(&gram)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect()
}

/// Frobenius norm of the optimal rank-k residual, by Eckart-Young:
/// sqrt of the squared singular values beyond the first k.
pub fn optimal_rank_k_residual(a: &Array2<f64>, k: usize) -> f64 {
    singular_values(a)
        .into_iter()
        .skip(k)
        .map(|s| s * s)
        .sum::<f64>()
        .sqrt()
}

/// Silhouette coefficients straight from the defining formula, one double
/// loop per point. `dist` is a full pairwise distance matrix and `labels`
/// assigns each point to a category; every category must have >= 2 points.
pub fn silhouette_brute(dist: &Array2<f64>, labels: &[usize]) -> Vec<f64> {
    let n = labels.len();
    let n_cats = labels.iter().max().map_or(0, |m| m + 1);
    (0..n)
        .map(|i| {
            let mut sums = vec![0.0f64; n_cats];
            let mut counts = vec![0usize; n_cats];
            for j in 0..n {
                if j != i {
                    sums[labels[j]] += dist[(i, j)];
                    counts[labels[j]] += 1;
                }
            }
            let a = sums[labels[i]] / counts[labels[i]] as f64;
            let b = (0..n_cats)
                .filter(|&c| c != labels[i] && counts[c] > 0)
                .map(|c| sums[c] / counts[c] as f64)
                .fold(f64::INFINITY, f64::min);
            if a.max(b) == 0.0 {
                0.0
            } else {
                (b - a) / a.max(b)
            }
        })
        .collect()
}

/// Two-sample KS statistic by evaluating both ECDFs at every sample point.
pub fn ks_statistic_brute(a: &[f64], b: &[f64]) -> f64 {
    let ecdf = |s: &[f64], t: f64| s.iter().filter(|&&v| v <= t).count() as f64 / s.len() as f64;
    a.iter()
        .chain(b)
        .map(|&t| (ecdf(a, t) - ecdf(b, t)).abs())
        .fold(0.0, f64::max)
}

/// 1-based rank of `probe` among all words (except `target`) ordered by
/// descending cosine similarity to `target`, ties broken by ascending
/// word order. Cosines are computed inline from the rows of `matrix`.
pub fn rank_brute(matrix: &Array2<f64>, words: &[String], target: usize, probe: usize) -> usize {
    let cosine = |i: usize, j: usize| {
        let (mut dot, mut ni, mut nj) = (0.0f64, 0.0f64, 0.0f64);
        for (a, b) in matrix.row(i).iter().zip(matrix.row(j)) {
            dot += a * b;
            ni += a * a;
            nj += b * b;
        }
        dot / (ni.sqrt() * nj.sqrt())
    };
    let mut candidates: Vec<usize> = (0..words.len()).filter(|&w| w != target).collect();
    candidates.sort_by(|&a, &b| {
        cosine(target, b)
            .partial_cmp(&cosine(target, a))
            .unwrap()
            .then_with(|| words[a].cmp(&words[b]))
    });
    1 + candidates.iter().position(|&w| w == probe).unwrap()
}

/// Ordinary least squares of y on x via the closed-form 2x2 normal
/// equations, solved by Cramer's rule. Returns (slope, intercept).
pub fn ols_closed_form(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    (slope, intercept)
}
