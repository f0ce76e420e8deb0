//! Verification gates for the toolkit's core promises, end to end. Each
//! test checks one guarantee at its stated tolerance and time budget,
//! printing a `[PASS]` line with the measured numbers (visible with
//! `--nocapture`). Gates 1-4 compare kernels against independent oracles,
//! gates 5-6 reproduce the two headline experiments on synthetic data,
//! gates 7-8 pin the operational guarantees of the binary, and gate 9 runs
//! the same experiments on licensed corpora when environment variables
//! point at them (ignored otherwise).

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ndarray::{Array1, Array2};
use rand_core::RngCore;

use scem_core::corpus::{load_corpus, nested_subsamples, CorpusFormat, Stopwords};
use scem_core::dreamcase::{
    compare_models, dreams_experiment, load_series_collection, DreamExperimentConfig,
};
use scem_core::evalsuite::{categorization_test, CategorySet, ModelConfig};
use scem_core::lexicon::WeightedTermDocMatrix;
use scem_core::lsa::{truncated_svd, LsaParams};
use scem_core::reference;
use scem_core::seed;
use scem_core::semspace::Embedding;
use scem_core::sgns::{sgns_pair_gradients, sgns_pair_loss};
use scem_core::stats;
use scem_core::synth::{
    dream_collection, planted_corpus, write_corpus_text, write_dream_collection,
    DreamCollectionParams, PlantedCorpusParams,
};
use scem_core::Scalar;

fn gaussian_matrix<R: RngCore>(rows: usize, cols: usize, rng: &mut R) -> Array2<f64> {
    let data: Vec<f64> = (0..rows * cols)
        .map(|_| f64::sample_standard_normal(rng))
        .collect();
    Array2::from_shape_vec((rows, cols), data).unwrap()
}

fn frobenius(a: &Array2<f64>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Singular values via the eigenvalues of [[0, A], [A^T, 0]], which are
/// exactly +/- sigma. Unlike the Gram-matrix route, small singular values
/// come out to full absolute precision: no squaring, so no sqrt that
/// amplifies roundoff on a zero sigma to ~1e-7.
fn oracle_singular_values(a: &Array2<f64>) -> Vec<f64> {
    let (m, n) = a.dim();
    let mut aug = Array2::zeros((m + n, m + n));
    for i in 0..m {
        for j in 0..n {
            aug[(i, m + j)] = a[(i, j)];
            aug[(m + j, i)] = a[(i, j)];
        }
    }
    let eig = reference::symmetric_eigenvalues(&aug);
    eig.into_iter().take(m.min(n)).map(|v| v.max(0.0)).collect()
}

#[test]
fn gate_1_truncated_svd_matches_the_dense_oracle() {
    let start = Instant::now();
    let mut rng = seed::rng_from(&[0xACCE, 1]);
    for case in 0..50u64 {
        let rows = 2 + seed::uniform_index(&mut rng, 39);
        let cols = 2 + seed::uniform_index(&mut rng, 29);
        let k = 1 + seed::uniform_index(&mut rng, rows.min(cols).min(8));
        // Every third case is exactly rank-deficient, so the tail of the
        // spectrum is zero and the reconstruction is exact.
        let a = if case % 3 == 0 {
            let r = 1 + seed::uniform_index(&mut rng, rows.min(cols));
            let left = gaussian_matrix(rows, r, &mut rng);
            let right = gaussian_matrix(r, cols, &mut rng);
            left.dot(&right)
        } else {
            gaussian_matrix(rows, cols, &mut rng)
        };

        let m = WeightedTermDocMatrix::from_dense(&a.view());
        let params = LsaParams::new(k, seed::mix(&[7, case]));
        let factors = truncated_svd(&m, &params).unwrap();

        let oracle = oracle_singular_values(&a);
        for i in 0..k {
            assert!(
                (factors.s[i] - oracle[i]).abs() <= 1e-8,
                "case {case} ({rows}x{cols}, k {k}): sigma[{i}] {} vs oracle {}",
                factors.s[i],
                oracle[i]
            );
        }

        // Eckart-Young optimum from the oracle's tail.
        let best = oracle.iter().skip(k).map(|s| s * s).sum::<f64>().sqrt();
        let residual = frobenius(&(&a - &factors.reconstruct()));
        assert!(
            residual <= best * (1.0 + 1e-6) + 1e-9,
            "case {case}: residual {residual} exceeds optimal {best}"
        );
    }
    assert!(start.elapsed() < Duration::from_secs(30));
    println!(
        "[PASS] gate 1: 50 truncated SVDs within 1e-8 of the dense oracle, \
         reconstructions rank-k optimal ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn gate_2_silhouettes_match_brute_force() {
    let start = Instant::now();
    let mut rng = seed::rng_from(&[0xACCE, 2]);
    for case in 0..100 {
        let n_cats = 2 + seed::uniform_index(&mut rng, 5);
        let n_words = 2 * n_cats + seed::uniform_index(&mut rng, 61 - 2 * n_cats);
        let dim = 2 + seed::uniform_index(&mut rng, 9);

        let words: Vec<String> = (0..n_words).map(|i| format!("w{i:02}")).collect();
        let mut matrix = gaussian_matrix(n_words, dim, &mut rng);
        for mut row in matrix.rows_mut() {
            if row.iter().all(|v| *v == 0.0) {
                row[0] = 1.0;
            }
        }
        let emb = Embedding::<f64>::new(
            words.clone(),
            vec![1; n_words],
            matrix,
            "random",
            "{}",
        )
        .unwrap();

        let labels: Vec<usize> = (0..n_words).map(|i| i % n_cats).collect();
        let cats = CategorySet::new(
            (0..n_cats)
                .map(|c| {
                    let members = (0..n_words)
                        .filter(|i| i % n_cats == c)
                        .map(|i| words[i].clone())
                        .collect();
                    (format!("c{c}"), members)
                })
                .collect(),
        )
        .unwrap();

        let report = categorization_test(&emb, &cats).unwrap();
        assert_eq!(report.per_word.len(), n_words);
        assert!(report.skipped.is_empty());

        let mut dist = Array2::zeros((n_words, n_words));
        for i in 0..n_words {
            for j in 0..n_words {
                if i != j {
                    dist[(i, j)] = emb.distance(&words[i], &words[j]).unwrap();
                }
            }
        }
        let brute = reference::silhouette_brute(&dist, &labels);
        let brute_score = brute.iter().sum::<f64>() / n_words as f64;
        assert!(
            (report.score - brute_score).abs() < 1e-12,
            "case {case}: score {} vs brute {brute_score}",
            report.score
        );
        for p in &report.per_word {
            let i = words.iter().position(|w| w == &p.word).unwrap();
            assert!(
                (p.s - brute[i]).abs() < 1e-12,
                "case {case} word {}: {} vs brute {}",
                p.word,
                p.s,
                brute[i]
            );
        }
    }
    assert!(start.elapsed() < Duration::from_secs(10));
    println!(
        "[PASS] gate 2: 100 random embeddings scored within 1e-12 of brute-force \
         silhouettes ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn gate_3_sgns_gradients_match_finite_differences() {
    let start = Instant::now();
    let mut rng = seed::rng_from(&[0xACCE, 3]);
    let step = 1e-5;
    let mut configs = 0;
    for case in 0..120 {
        let dim = 1 + seed::uniform_index(&mut rng, 8);
        let n_neg = seed::uniform_index(&mut rng, 6);
        let mut sample = |n: usize| {
            Array1::from(
                (0..n)
                    .map(|_| 0.8 * f64::sample_standard_normal(&mut rng))
                    .collect::<Vec<_>>(),
            )
        };
        let center = sample(dim);
        let context = sample(dim);
        let negatives: Vec<Array1<f64>> = (0..n_neg).map(|_| sample(dim)).collect();
        let neg_views: Vec<_> = negatives.iter().map(|n| n.view()).collect();
        let grads = sgns_pair_gradients(center.view(), context.view(), &neg_views).unwrap();
        configs += 1;

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
            assert!(
                (analytic[coord] - fd).abs() / fd.abs().max(1e-3) < 1e-4,
                "case {case} vector {which} coord {coord}: analytic {} vs fd {fd}",
                analytic[coord]
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
    assert!(configs >= 100);
    assert!(start.elapsed() < Duration::from_secs(5));
    println!(
        "[PASS] gate 3: {configs} pair-loss configurations match central differences \
         within 1e-4 relative ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn gate_4_statistics_match_high_precision_fixtures() {
    #[derive(serde::Deserialize)]
    struct Fixtures {
        spearman: Vec<SpearmanCase>,
        pearson: Vec<PearsonCase>,
        loglinear: Vec<LoglinearCase>,
        ks: Vec<KsCase>,
    }
    #[derive(serde::Deserialize)]
    struct SpearmanCase {
        x: Vec<f64>,
        y: Vec<f64>,
        rho: f64,
    }
    #[derive(serde::Deserialize)]
    struct PearsonCase {
        x: Vec<f64>,
        y: Vec<f64>,
        r: f64,
        p: f64,
    }
    #[derive(serde::Deserialize)]
    struct LoglinearCase {
        x: Vec<f64>,
        y: Vec<f64>,
        slope: f64,
        intercept: f64,
        r: f64,
        p: f64,
    }
    #[derive(serde::Deserialize)]
    struct KsCase {
        a: Vec<f64>,
        b: Vec<f64>,
        d: f64,
        p: f64,
    }

    fn close(actual: f64, expected: f64, what: &str) {
        let tol = 1e-9 * expected.abs().max(1.0);
        assert!(
            (actual - expected).abs() <= tol,
            "{what}: got {actual}, expected {expected}"
        );
    }
    fn has_ties(v: &[f64]) -> bool {
        let mut s = v.to_vec();
        s.sort_by(f64::total_cmp);
        s.windows(2).any(|w| w[0] == w[1])
    }

    let start = Instant::now();
    let fx: Fixtures =
        serde_json::from_str(include_str!("../../scem-core/tests/data/stats_oracle.json"))
            .unwrap();

    assert!(fx.spearman.len() >= 20);
    assert!(
        fx.spearman.iter().any(|c| has_ties(&c.x) || has_ties(&c.y)),
        "the fixture set must exercise tie handling"
    );
    for (i, c) in fx.spearman.iter().enumerate() {
        close(
            stats::spearman(&c.x, &c.y).unwrap(),
            c.rho,
            &format!("spearman[{i}]"),
        );
    }

    assert!(fx.pearson.len() >= 20);
    for (i, c) in fx.pearson.iter().enumerate() {
        let (r, p) = stats::pearson(&c.x, &c.y).unwrap();
        close(r, c.r, &format!("pearson[{i}].r"));
        close(p, c.p, &format!("pearson[{i}].p"));
    }

    assert!(fx.loglinear.len() >= 20);
    for (i, c) in fx.loglinear.iter().enumerate() {
        let points: Vec<(f64, f64)> = c.x.iter().copied().zip(c.y.iter().copied()).collect();
        let fit = stats::loglinear_fit(&points).unwrap();
        close(fit.slope, c.slope, &format!("loglinear[{i}].slope"));
        close(fit.intercept, c.intercept, &format!("loglinear[{i}].intercept"));
        close(fit.pearson_r, c.r, &format!("loglinear[{i}].r"));
        close(fit.p_value, c.p, &format!("loglinear[{i}].p"));
    }

    assert!(fx.ks.len() >= 20);
    for (i, c) in fx.ks.iter().enumerate() {
        let result = stats::ks_two_sample(&c.a, &c.b).unwrap();
        close(result.statistic, c.d, &format!("ks[{i}].d"));
        close(result.p_value, c.p, &format!("ks[{i}].p"));
    }

    assert!(start.elapsed() < Duration::from_secs(5));
    println!(
        "[PASS] gate 4: {} spearman, {} pearson, {} log-linear, {} ks fixtures \
         all within 1e-9 ({:.2?})",
        fx.spearman.len(),
        fx.pearson.len(),
        fx.loglinear.len(),
        fx.ks.len(),
        start.elapsed()
    );
}

#[test]
fn gate_5_lsa_beats_sgns_on_small_planted_corpora() {
    let start = Instant::now();
    let (corpus, cats) = planted_corpus(&PlantedCorpusParams::new(20_000, 0xC0FFEE)).unwrap();
    let required: BTreeSet<String> = cats
        .categories()
        .iter()
        .flat_map(|(_, words)| words.iter().cloned())
        .collect();
    let chain = nested_subsamples(&corpus, 6, 600, &required, 0xC0FFEE).unwrap();
    assert_eq!(chain.levels.first().unwrap().len(), 20_000);
    assert_eq!(chain.levels.last().unwrap().len(), 600);
    let small = chain.levels.last().unwrap();

    let lsa = ModelConfig::lsa_default();
    let sgns = ModelConfig::sgns_default(15, 10);
    let mut wins = 0;
    let mut lsa_mean = 0.0;
    let mut sgns_mean = 0.0;
    for s in 0..10u64 {
        let (e, _) = lsa.train::<f32>(small, 25, s).unwrap();
        let lsa_score = categorization_test(&e, &cats).unwrap().score;
        let (e, _) = sgns.train::<f32>(small, 25, s).unwrap();
        let sgns_score = categorization_test(&e, &cats).unwrap().score;
        if lsa_score > sgns_score {
            wins += 1;
        }
        lsa_mean += lsa_score / 10.0;
        sgns_mean += sgns_score / 10.0;
    }
    assert!(
        wins >= 8,
        "lsa won only {wins}/10 runs (mean {lsa_mean:.3} vs {sgns_mean:.3})"
    );
    assert!(start.elapsed() < Duration::from_secs(300));
    println!(
        "[PASS] gate 5: at the 600-document level lsa beat sgns in {wins}/10 seeded \
         runs, mean silhouette {lsa_mean:.3} vs {sgns_mean:.3} ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn gate_6_dream_slopes_fall_and_beat_the_random_baseline() {
    let start = Instant::now();
    let collection = dream_collection(&DreamCollectionParams::new(21)).unwrap();
    assert_eq!(collection.series.len(), 30);

    let lsa_report = dreams_experiment::<f32>(
        &collection,
        &DreamExperimentConfig::new(ModelConfig::lsa_default(), 16, 99),
    )
    .unwrap();

    // The generator plants fractions spanning [0, 1] exactly.
    let fractions: Vec<f64> = lsa_report.series.iter().map(|s| s.fraction).collect();
    assert_eq!(fractions.iter().cloned().fold(f64::INFINITY, f64::min), 0.0);
    assert_eq!(fractions.iter().cloned().fold(f64::NEG_INFINITY, f64::max), 1.0);

    let falling = lsa_report
        .fits
        .iter()
        .filter(|f| {
            f.fit
                .as_ref()
                .is_some_and(|fit| fit.slope < -0.5 && fit.pearson_r < 0.0)
        })
        .count();
    assert_eq!(lsa_report.fits.len(), 10);
    assert!(
        falling >= 9,
        "only {falling}/10 repetitions had slope < -0.5 with negative correlation"
    );

    let random_report = dreams_experiment::<f32>(
        &collection,
        &DreamExperimentConfig::new(ModelConfig::Random, 16, 99),
    )
    .unwrap();
    let ks = compare_models(&lsa_report, &random_report).unwrap();
    assert!(
        ks.p_value < 0.01,
        "lsa and random slope distributions are not separated: D {} p {}",
        ks.statistic,
        ks.p_value
    );

    assert!(start.elapsed() < Duration::from_secs(600));
    println!(
        "[PASS] gate 6: {falling}/10 lsa repetitions slope < -0.5 with r < 0 \
         (mean slope {:.3}); ks vs random D {:.3} p {:.2e} ({:.2?})",
        lsa_report.mean_slope,
        ks.statistic,
        ks.p_value,
        start.elapsed()
    );
}

#[test]
fn gate_7_deterministic_cli_runs_are_bitwise_identical() {
    let bin = env!("CARGO_BIN_EXE_scem");
    let base = tempfile::TempDir::new().unwrap();

    // Identical relative layouts in two working directories, so every
    // artifact (provenance included) must come out byte for byte equal.
    let run = |name: &str| -> Vec<(String, Vec<u8>)> {
        let dir = base.path().join(name);
        fs::create_dir(&dir).unwrap();
        let (corpus, _) = planted_corpus(&PlantedCorpusParams::new(200, 3)).unwrap();
        write_corpus_text(&corpus, &dir.join("corpus.txt")).unwrap();
        let mut params = DreamCollectionParams::new(5);
        params.n_series = 8;
        let collection = dream_collection(&params).unwrap();
        write_dream_collection(&collection, &dir.join("series"), &dir.join("gt.csv")).unwrap();

        for args in [
            vec![
                "--deterministic",
                "--seed",
                "42",
                "--output-dir",
                "out",
                "train",
                "--input",
                "corpus.txt",
                "--model",
                "sgns",
                "--dim",
                "8",
                "--epochs",
                "10",
            ],
            vec![
                "--deterministic",
                "--seed",
                "42",
                "--output-dir",
                "out",
                "dreams",
                "--series",
                "series",
                "--ground-truth",
                "gt.csv",
                "--dim",
                "8",
                "--repetitions",
                "2",
            ],
        ] {
            let out = Command::new(bin)
                .current_dir(&dir)
                .args(&args)
                .output()
                .unwrap();
            assert!(
                out.status.success(),
                "{args:?} failed: {}",
                String::from_utf8_lossy(&out.stderr)
            );
        }

        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir.join("out"))
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (
                    e.file_name().to_string_lossy().into_owned(),
                    fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        files.sort_by(|a, b| a.0.cmp(&b.0));
        files
    };

    let first = run("a");
    let second = run("b");
    assert_eq!(first.len(), second.len());
    assert!(first.len() >= 5, "train and dreams artifacts expected");
    for ((name_a, bytes_a), (name_b, bytes_b)) in first.iter().zip(&second) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "{name_a} differs between identical runs");
    }
    println!(
        "[PASS] gate 7: {} artifacts from train + dreams identical across two \
         --deterministic runs",
        first.len()
    );
}

#[test]
fn gate_8_ineligible_series_never_reach_the_regression() {
    let dir = tempfile::TempDir::new().unwrap();
    let series_dir = dir.path().join("series");
    let gt_path = dir.path().join("gt.csv");

    let mut params = DreamCollectionParams::new(17);
    params.n_series = 4;
    let healthy = dream_collection(&params).unwrap();
    write_dream_collection(&healthy, &series_dir, &gt_path).unwrap();

    // Below the occurrence floor: "run" appears 3 times, probes present.
    fs::write(
        series_dir.join("rare.txt"),
        "run fence yard chase night\nrun river stone chase morning\nrun cellar door chase dusk\n",
    )
    .unwrap();
    // Probe-free: enough "run" occurrences but no escape or chase forms.
    fs::write(
        series_dir.join("noprobe.txt"),
        "run water garden tree\nrun stone bridge lane\nrun quiet morning field\n\
         run cellar lamp door\nrun harbor boat rope\nrun meadow fog bell\n\
         water garden lane field\nstone bridge lamp bell\n",
    )
    .unwrap();
    let mut gt = fs::read_to_string(&gt_path).unwrap();
    gt.push_str("rare,0.2\nnoprobe,0.8\n");
    fs::write(&gt_path, gt).unwrap();

    let collection =
        load_series_collection(&series_dir, &gt_path, &Stopwords::english()).unwrap();
    assert_eq!(collection.series.len(), 6);

    let mut config = DreamExperimentConfig::new(ModelConfig::lsa_default(), 4, 13);
    config.repetitions = 2;
    let report = dreams_experiment::<f32>(&collection, &config).unwrap();

    let excluded: Vec<&str> = report.excluded.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(excluded, ["noprobe", "rare"]);
    let reason_of = |name: &str| {
        report
            .excluded
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r.as_str())
            .unwrap()
    };
    assert!(reason_of("rare").contains("fewer than 5"), "{}", reason_of("rare"));
    assert!(
        reason_of("noprobe").contains("no probe form"),
        "{}",
        reason_of("noprobe")
    );

    // Only the four healthy series produce points, in every repetition.
    assert_eq!(report.series.len(), 4);
    assert!(report.series.iter().all(|s| s.name.starts_with('s')));
    for fit in &report.fits {
        let fit = fit.fit.as_ref().expect("healthy series fit");
        assert_eq!(fit.n, 4, "regression must use exactly the eligible series");
    }
    println!(
        "[PASS] gate 8: rare-target and probe-free series excluded with recorded \
         reasons; every regression used exactly 4 points"
    );
}

/// Checks the reference numbers that only licensed corpora can reproduce.
/// Point the variables at local copies and run with `--ignored`:
/// `SCEM_TASA_CORPUS` (cleaned one-document-per-line text),
/// `SCEM_TASA_CATEGORIES` (category TSV), `SCEM_DREAMBANK_SERIES`
/// (directory of series files), `SCEM_DREAMBANK_GROUND_TRUTH` (fraction CSV).
#[test]
#[ignore = "needs licensed corpora; see the doc comment for the environment variables"]
fn gate_9_licensed_corpora_reproduce_the_reference_numbers() {
    let var = |name: &str| {
        std::env::var(name).unwrap_or_else(|_| panic!("{name} must point at the licensed data"))
    };

    // Full-corpus categorization with skip-gram at window 15, negatives 10,
    // dimension 100 historically lands at silhouette 0.121.
    let corpus = load_corpus(
        Path::new(&var("SCEM_TASA_CORPUS")),
        CorpusFormat::OneDocPerLine,
        &Stopwords::english(),
    )
    .unwrap();
    let cats = CategorySet::from_tsv_path(Path::new(&var("SCEM_TASA_CATEGORIES"))).unwrap();
    let (sgns_emb, _) = ModelConfig::sgns_default(15, 10)
        .train::<f32>(&corpus, 100, 42)
        .unwrap();
    let sgns_score = categorization_test(&sgns_emb, &cats).unwrap().score;
    assert!(
        (sgns_score - 0.121).abs() <= 0.01,
        "sgns categorization silhouette {sgns_score:.3}, expected 0.121 +/- 0.01"
    );

    // Dream-series slopes: lsa at dimension 200 has a mean near -1.99,
    // skip-gram (window 15, negatives 10) at dimension 50 near -1.12.
    let collection = load_series_collection(
        Path::new(&var("SCEM_DREAMBANK_SERIES")),
        Path::new(&var("SCEM_DREAMBANK_GROUND_TRUTH")),
        &Stopwords::english(),
    )
    .unwrap();
    let lsa_report = dreams_experiment::<f32>(
        &collection,
        &DreamExperimentConfig::new(ModelConfig::lsa_default(), 200, 42),
    )
    .unwrap();
    assert!(
        (-2.6..=-1.4).contains(&lsa_report.mean_slope),
        "lsa mean slope {}, expected in [-2.6, -1.4]",
        lsa_report.mean_slope
    );
    let sgns_report = dreams_experiment::<f32>(
        &collection,
        &DreamExperimentConfig::new(ModelConfig::sgns_default(15, 10), 50, 42),
    )
    .unwrap();
    assert!(
        (-1.5..=-0.8).contains(&sgns_report.mean_slope),
        "sgns mean slope {}, expected in [-1.5, -0.8]",
        sgns_report.mean_slope
    );
    println!(
        "[PASS] gate 9: licensed corpora hit the reference numbers \
         (sgns silhouette {sgns_score:.3}; dream slopes lsa {:.2}, sgns {:.2})",
        lsa_report.mean_slope, sgns_report.mean_slope
    );
}
