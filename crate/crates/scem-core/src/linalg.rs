//! Dense kernels backing the truncated SVD: modified Gram-Schmidt
//! orthonormalization and a one-sided Jacobi SVD for the small projected
//! problem. Everything here is seed-free and exactly reproducible.

use ndarray::{Array1, Array2};

use crate::scalar::Scalar;

/// Finds a unit vector orthogonal to the first `built` columns of `a` by
/// scanning canonical basis vectors. Because the residual norms of all m
/// candidates square-sum to m - built, some candidate always clears the
/// sqrt((m - built) / (2m)) bar.
fn completion_column<F: Scalar>(a: &Array2<F>, built: usize) -> Array1<F> {
    let m = a.nrows();
    assert!(built < m, "no orthogonal direction left");
    let threshold = F::of(((m - built) as f64 / (2.0 * m as f64)).sqrt());
    for e in 0..m {
        let mut cand = Array1::zeros(m);
        cand[e] = F::one();
        for _ in 0..2 {
            for j in 0..built {
                let proj = a.column(j).dot(&cand);
                for (c, &b) in cand.iter_mut().zip(a.column(j)) {
                    *c = *c - proj * b;
                }
            }
        }
        let norm = cand.dot(&cand).sqrt();
        if norm > threshold {
            cand.mapv_inplace(|x| x / norm);
            return cand;
        }
    }
    unreachable!("completion scan exhausted the canonical basis");
}

/// Orthonormalizes the columns of `a` in place (modified Gram-Schmidt with
/// one reorthogonalization pass). Columns that collapse to numerical zero
/// are replaced by canonical-basis completions, so the output always has
/// exactly full column rank.
pub fn orthonormalize_columns<F: Scalar>(a: &mut Array2<F>) {
    let (m, n) = a.dim();
    assert!(n <= m, "more columns than rows cannot be orthonormal");
    let eps = F::epsilon() * F::of(m as f64).sqrt();
    for j in 0..n {
        let norm0 = a.column(j).dot(&a.column(j)).sqrt();
        for _ in 0..2 {
            for i in 0..j {
                let proj = a.column(i).dot(&a.column(j));
                let basis: Vec<F> = a.column(i).iter().copied().collect();
                for (x, b) in a.column_mut(j).iter_mut().zip(basis) {
                    *x = *x - proj * b;
                }
            }
        }
        let norm = a.column(j).dot(&a.column(j)).sqrt();
        if norm > eps * norm0.max(F::one()) && norm > F::zero() {
            a.column_mut(j).mapv_inplace(|x| x / norm);
        } else {
            let fill = completion_column(a, j);
            a.column_mut(j).assign(&fill);
        }
    }
}

/// Thin SVD of a tall matrix (m >= n) by one-sided Jacobi rotations.
///
/// Returns (U, S, Vt) with U m x n (orthonormal columns), S descending,
/// Vt n x n (orthonormal rows). Left vectors for zero singular values are
/// deterministic canonical completions, so U is orthonormal even for
/// rank-deficient input.
pub fn jacobi_svd<F: Scalar>(b: &Array2<F>) -> (Array2<F>, Array1<F>, Array2<F>) {
    let (m, n) = b.dim();
    assert!(m >= n, "jacobi_svd expects a tall matrix, got {m}x{n}");
    let mut w = b.to_owned();
    let mut v: Array2<F> = Array2::eye(n);
    let tol = F::epsilon() * F::of(8.0);

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let app = w.column(p).dot(&w.column(p));
                let aqq = w.column(q).dot(&w.column(q));
                let apq = w.column(p).dot(&w.column(q));
                if apq.abs() <= tol * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (apq * F::of(2.0));
                let t = tau.signum() / (tau.abs() + (F::one() + tau * tau).sqrt());
                let c = F::one() / (F::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    w[(i, p)] = c * wp - s * wq;
                    w[(i, q)] = s * wp + c * wq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut norms: Vec<F> = (0..n)
        .map(|j| w.column(j).dot(&w.column(j)).sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Descending by norm; ties keep original column order for determinism.
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap());

    let sigma_max = order.first().map_or(F::zero(), |&j| norms[j]);
    let zero_cut = sigma_max * F::epsilon() * F::of(m as f64);
    let mut u = Array2::zeros((m, n));
    let mut s = Array1::zeros(n);
    let mut vt = Array2::zeros((n, n));
    for (rank, &j) in order.iter().enumerate() {
        if norms[j] <= zero_cut {
            norms[j] = F::zero();
        }
        s[rank] = norms[j];
        vt.row_mut(rank).assign(&v.column(j));
        if norms[j] > F::zero() {
            let col = w.column(j).mapv(|x| x / norms[j]);
            u.column_mut(rank).assign(&col);
        } else {
            let fill = completion_column(&u, rank);
            u.column_mut(rank).assign(&fill);
        }
    }
    (u, s, vt)
}

/// Max-norm of Q^T Q - I; zero for perfectly orthonormal columns.
#[cfg_attr(not(any(test, feature = "reference-oracles")), allow(dead_code))]
pub fn orthonormality_defect<F: Scalar>(q: &Array2<F>) -> F {
    let n = q.ncols();
    let mut worst = F::zero();
    for i in 0..n {
        for j in i..n {
            let d = q.column(i).dot(&q.column(j));
            let target = if i == j { F::one() } else { F::zero() };
            worst = worst.max((d - target).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use crate::scalar::Scalar;
    use crate::seed::rng_from;
    use approx::assert_abs_diff_eq;

    fn random_matrix(m: usize, n: usize, seed: u64) -> Array2<f64> {
        let mut rng = rng_from(&[seed]);
        Array2::from_shape_fn((m, n), |_| f64::sample_standard_normal(&mut rng))
    }

    #[test]
    fn gram_schmidt_produces_orthonormal_columns() {
        for seed in 0..5 {
            let mut a = random_matrix(30, 8, seed);
            orthonormalize_columns(&mut a);
            assert!(orthonormality_defect(&a) < 1e-13);
        }
    }

    #[test]
    fn gram_schmidt_completes_rank_deficient_input() {
        let mut a = Array2::zeros((10, 4));
        for i in 0..10 {
            a[(i, 0)] = (i as f64) + 1.0;
            a[(i, 1)] = 2.0 * ((i as f64) + 1.0); // duplicate direction
        }
        orthonormalize_columns(&mut a);
        assert!(orthonormality_defect(&a) < 1e-13);
    }

    #[test]
    fn jacobi_recovers_diagonal_singular_values() {
        let mut b = Array2::zeros((6, 4));
        let planted = [9.0, 4.0, 1.0, 0.25];
        for (j, &v) in planted.iter().enumerate() {
            b[(j, j)] = v;
        }
        let (u, s, vt) = jacobi_svd(&b);
        for (got, want) in s.iter().zip(planted) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
        assert!(orthonormality_defect(&u) < 1e-13);
        assert!(orthonormality_defect(&vt.t().to_owned()) < 1e-13);
    }

    #[test]
    fn jacobi_matches_gram_oracle_on_random_matrices() {
        for seed in 0..20 {
            let b = random_matrix(12, 7, 100 + seed);
            let (u, s, vt) = jacobi_svd(&b);
            let oracle = reference::singular_values(&b);
            for (got, want) in s.iter().zip(oracle) {
                assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
            }
            // Factorization must reproduce the input.
            let recon = u.dot(&Array2::from_diag(&s)).dot(&vt);
            let err = (&recon - &b).iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(err < 1e-12, "reconstruction error {err}");
        }
    }

    #[test]
    fn jacobi_handles_rank_deficiency_with_orthonormal_factors() {
        // Rank-2 matrix embedded in 5 columns.
        let a = random_matrix(9, 2, 7);
        let c = random_matrix(2, 5, 8);
        let b = a.dot(&c);
        let (u, s, vt) = jacobi_svd(&b);
        assert!(s[2] < 1e-10 && s[3] < 1e-10 && s[4] < 1e-10);
        assert!(orthonormality_defect(&u) < 1e-12);
        assert!(orthonormality_defect(&vt.t().to_owned()) < 1e-12);
    }
}
