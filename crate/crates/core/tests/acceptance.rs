#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints one PASS/FAIL line; exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use common::*;
use tsim::baseline::{cosine, jaccard};
use tsim::case_study::{self, ERRATA_TOLERANCE};
use tsim::{
    compute_stats, s_alpha_beta, sequence_vector, similarity_matrix, threshold_cluster,
    tsim as tsim_pair, Dataset, ItemStats, Measure, SimilarityConfig, SimilarityMatrix, StdMode,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn table4() -> Dataset {
    case_study_dataset()
}

fn default_matrix() -> SimilarityMatrix {
    similarity_matrix(&table4(), &SimilarityConfig::default()).unwrap()
}

fn ac1_gaussian_constants() -> Outcome {
    let ds = table4();
    let stats = compute_stats(&ds, StdMode::Sample).map_err(|e| e.to_string())?;
    let expected = [0.02732, 0.00584, 0.01832, 0.02732, 0.02732];
    let mut worst = 0.0f64;
    for (k, want) in expected.iter().enumerate() {
        let got = stats.unit_penalty(k);
        let diff = (got - want).abs();
        worst = worst.max(diff);
        ensure!(diff <= 5e-5, "{}: {got:.6} vs {want}", ITEMS[k]);
    }
    Ok(format!("max |diff| {worst:.2e} <= 5e-5"))
}

fn ac2_verified_cells() -> Outcome {
    let ds = table4();
    let stats = compute_stats(&ds, StdMode::Sample).unwrap();
    let cfg = SimilarityConfig::default();
    let golden = [
        ("T1", "T2", 0.59122),
        ("T1", "T3", 0.69180),
        ("T1", "T4", 0.87159),
        ("T1", "T6", 0.74430),
        ("T1", "T7", 0.74430),
        ("T1", "T9", 0.74317),
    ];
    let mut worst = 0.0f64;
    for (a, b, want) in golden {
        let got = tsim_pair(&ds, &stats, &cfg, a, b).map_err(|e| e.to_string())?;
        let diff = (got - want).abs();
        worst = worst.max(diff);
        ensure!(diff <= 2e-4, "TSIM({a},{b}) = {got:.6}, want {want}");
    }
    Ok(format!("6 cells, max |diff| {worst:.2e} <= 2e-4"))
}

fn ac3_errata_detection() -> Outcome {
    // independent brute force over the hand-typed rows
    let oracle = oracle_matrix(&ROWS);
    let engine = default_matrix();
    for i in 0..9 {
        for j in 0..9 {
            ensure!(
                (engine.get(i, j) - oracle[i][j]).abs() <= 1e-12,
                "engine/oracle disagree at ({},{})",
                tid(i),
                tid(j)
            );
        }
    }
    let t2t5 = oracle[1][4];
    let t2t3 = oracle[1][2];
    ensure!((t2t5 - 0.8288).abs() <= 1e-4, "(T2,T5) oracle {t2t5}");
    ensure!((t2t3 - 0.8743).abs() <= 1e-4, "(T2,T3) oracle {t2t3}");

    let mut expected = BTreeSet::new();
    for i in 0..9 {
        for j in (i + 1)..9 {
            if (oracle[i][j] - published(i, j)).abs() > ERRATA_TOLERANCE {
                expected.insert((tid(i), tid(j)));
            }
        }
    }
    let report = case_study::errata_report(&engine).map_err(|e| e.to_string())?;
    let listed: BTreeSet<_> = report
        .iter()
        .filter(|r| r.abs_diff > ERRATA_TOLERANCE)
        .map(|r| r.pair.clone())
        .collect();
    ensure!(
        listed == expected,
        "report lists {listed:?}, oracle expects {expected:?}"
    );
    for pair in [("T2", "T5"), ("T2", "T3")] {
        ensure!(
            listed.contains(&(pair.0.to_owned(), pair.1.to_owned())),
            "{pair:?} not reported"
        );
    }
    Ok(format!(
        "{} discrepant cells listed; (T2,T5) {t2t5:.4} vs 0.6545, (T2,T3) {t2t3:.4} vs 0.8651",
        listed.len()
    ))
}

fn ac4_boundary_cases() -> Outcome {
    let ds = Dataset::from_rows(
        vec!["a".into(), "b".into(), "c".into()],
        [
            ("same1", vec![1, 0, 1]),
            ("same2", vec![1, 0, 1]),
            ("empty1", vec![0, 0, 0]),
            ("empty2", vec![0, 0, 0]),
            ("other", vec![0, 1, 1]),
        ],
    )
    .unwrap();
    let stats = compute_stats(&ds, StdMode::Sample).unwrap();
    let cfg = SimilarityConfig::default();
    let same = tsim_pair(&ds, &stats, &cfg, "same1", "same2").unwrap();
    ensure!(same == 1.0, "identical pair gave {same}");
    let sv = sequence_vector(&ds, "empty1", "empty2").unwrap();
    let s = s_alpha_beta(&sv, &stats);
    ensure!(s == -1.0, "S for empty pair is {s}, expected the -1 branch");
    let empty = tsim_pair(&ds, &stats, &cfg, "empty1", "empty2").unwrap();
    ensure!(empty == 0.0 && !empty.is_nan(), "empty pair gave {empty}");
    Ok("identical -> 1.0, all-absent -> S=-1, TSIM=0.0".into())
}

fn ac5_average_case() -> Outcome {
    let ds = Dataset::from_rows(
        (0..4).map(|k| format!("i{k}")).collect(),
        [("a", vec![1, 0, 1, 0]), ("b", vec![0, 1, 0, 1])],
    )
    .unwrap();
    let cfg = SimilarityConfig::default();
    let mut worst = 0.0f64;
    for gamma in [0.5f64, 1.0, 2.0] {
        let stats = ItemStats {
            sigma: vec![1.0 / gamma; 4],
            n: 2,
            std_mode: StdMode::Sample,
        };
        let got = tsim_pair(&ds, &stats, &cfg, "a", "b").unwrap();
        let want = 0.5 * (1.0 - (-gamma * gamma).exp());
        worst = worst.max((got - want).abs());
        ensure!(
            (got - want).abs() <= 1e-12,
            "gamma {gamma}: {got} vs {want}"
        );
    }
    // same shape with sigma taken from the data: each column is [1, 0]
    let stats = compute_stats(&ds, StdMode::Sample).unwrap();
    let gamma = 1.0 / stats.sigma[0];
    let got = tsim_pair(&ds, &stats, &cfg, "a", "b").unwrap();
    let want = 0.5 * (1.0 - (-gamma * gamma).exp());
    ensure!(
        (got - want).abs() <= 1e-12,
        "data-derived sigma: {got} vs {want}"
    );
    Ok(format!(
        "gamma in {{0.5, 1, 2}}, max |diff| {worst:.1e} <= 1e-12"
    ))
}

fn ac6_cluster_reproduction() -> Outcome {
    let published = case_study::published_matrix();
    let want: BTreeSet<BTreeSet<String>> = [
        vec!["T1", "T2", "T3", "T4", "T6", "T9"],
        vec!["T7", "T8"],
        vec!["T5"],
    ]
    .iter()
    .map(|g| g.iter().map(|s| s.to_string()).collect())
    .collect();
    for t in [0.75, 0.80, 0.82] {
        let c = threshold_cluster(&published, t).map_err(|e| e.to_string())?;
        let got: BTreeSet<BTreeSet<String>> = c
            .clusters
            .iter()
            .map(|g| g.iter().cloned().collect())
            .collect();
        ensure!(got == want, "threshold {t}: {:?}", c.clusters);
    }
    Ok("3 clusters at thresholds 0.75, 0.80, 0.82".into())
}

fn random_rows() -> impl Strategy<Value = Vec<Vec<u32>>> {
    (2usize..9, 1usize..7, prop_oneof![Just(1u32), Just(4u32)])
        .prop_flat_map(|(n, m, max)| prop::collection::vec(prop::collection::vec(0..=max, m), n))
}

fn rows_dataset(rows: &[Vec<u32>]) -> Dataset {
    Dataset::from_rows(
        (0..rows[0].len()).map(|k| format!("i{k}")).collect(),
        rows.iter()
            .enumerate()
            .map(|(i, r)| (format!("T{i}"), r.clone())),
    )
    .unwrap()
}

fn ac7_property_suite() -> Outcome {
    const CASES: u32 = 1000;
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });

    runner
        .run(&random_rows(), |rows| {
            let ds = rows_dataset(&rows);
            let cfg = SimilarityConfig::default();
            let stats = compute_stats(&ds, StdMode::Sample).unwrap();
            let m = similarity_matrix(&ds, &cfg).unwrap();
            let sigmas = oracle_sigmas(&rows, true);
            for (k, s) in sigmas.iter().enumerate() {
                prop_assert!((stats.sigma[k] - s).abs() <= 1e-12, "stats oracle");
            }
            for (i, a) in ds.transactions().iter().enumerate() {
                for (j, b) in ds.transactions().iter().enumerate() {
                    let ab = tsim_pair(&ds, &stats, &cfg, a.tid(), b.tid()).unwrap();
                    let ba = tsim_pair(&ds, &stats, &cfg, b.tid(), a.tid()).unwrap();
                    prop_assert_eq!(ab, ba, "symmetry");
                    prop_assert!((0.0..=1.0).contains(&ab), "range");
                    prop_assert!((m.get(i, j) - ab).abs() <= 1e-15, "matrix/scalar");
                }
                if !a.is_all_absent() {
                    prop_assert_eq!(m.get(i, i), 1.0, "self-similarity");
                }
            }
            Ok(())
        })
        .map_err(|e| format!("tsim properties: {e}"))?;

    let matrices = (2usize..10).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(0.0f64..=1.0, n * (n - 1) / 2),
            0.0f64..=1.0,
            0.0f64..=1.0,
        )
    });
    runner
        .run(&matrices, |(n, upper, a, b)| {
            let mut values = vec![1.0; n * n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = it.next().unwrap();
                    values[i * n + j] = v;
                    values[j * n + i] = v;
                }
            }
            let ids: Vec<String> = (0..n).map(|i| format!("T{i}")).collect();
            let m = SimilarityMatrix::new(ids, values, Measure::Tsim).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let coarse = threshold_cluster(&m, lo).unwrap();
            let fine = threshold_cluster(&m, hi).unwrap();
            for c in [&coarse, &fine] {
                let mut seen = BTreeSet::new();
                for g in &c.clusters {
                    prop_assert!(!g.is_empty());
                    for id in g {
                        prop_assert!(seen.insert(id.clone()), "disjoint");
                    }
                }
                prop_assert_eq!(seen.len(), n, "covering");
            }
            let coarse_sets: Vec<BTreeSet<&String>> =
                coarse.clusters.iter().map(|g| g.iter().collect()).collect();
            for g in &fine.clusters {
                let g: BTreeSet<&String> = g.iter().collect();
                prop_assert!(coarse_sets.iter().any(|h| g.is_subset(h)), "monotonicity");
            }
            Ok(())
        })
        .map_err(|e| format!("clustering properties: {e}"))?;

    Ok(format!(
        "{CASES} datasets (symmetry, range, self-similarity, matrix/scalar, stats oracle), \
         {CASES} matrices (partition, monotonicity)"
    ))
}

fn ac8_baseline_contrast() -> Outcome {
    let ds = table4();
    let v = |t: &str| ds.get_vector(t).unwrap();
    let j = jaccard(v("T1"), v("T2"));
    let c = cosine(v("T1"), v("T2"));
    ensure!((j - 0.2).abs() <= 1e-12, "Jaccard(T1,T2) = {j}");
    ensure!((c - 1.0 / 3.0).abs() <= 1e-12, "Cosine(T1,T2) = {c}");

    // T2/T3 differ only on butter, T4/T6 only on jam
    let j_butter = jaccard(v("T2"), v("T3"));
    let j_jam = jaccard(v("T4"), v("T6"));
    ensure!(j_butter == j_jam, "Jaccard differs: {j_butter} vs {j_jam}");
    let m = default_matrix();
    let t_butter = m.get_by_id("T2", "T3").unwrap();
    let t_jam = m.get_by_id("T4", "T6").unwrap();
    let gap = (t_butter - t_jam).abs();
    ensure!(gap >= 1e-3, "TSIM gap only {gap}");
    Ok(format!(
        "Jaccard 0.2, Cosine 1/3; Jaccard {j_butter} for both butter-only and jam-only \
         mismatch, TSIM {t_butter:.6} vs {t_jam:.6} (gap {gap:.5})"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1 per-item Gaussian constants", ac1_gaussian_constants),
        ("AC2 verified golden cells", ac2_verified_cells),
        ("AC3 errata detection", ac3_errata_detection),
        ("AC4 boundary cases", ac4_boundary_cases),
        ("AC5 average-case formula", ac5_average_case),
        ("AC6 cluster reproduction", ac6_cluster_reproduction),
        ("AC7 property suite", ac7_property_suite),
        ("AC8 baseline contrast", ac8_baseline_contrast),
    ];

    let start = Instant::now();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    let _ = panic::take_hook();
    println!(
        "acceptance: {} passed, {failed} failed in {:.2?}",
        criteria.len() - failed,
        start.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
