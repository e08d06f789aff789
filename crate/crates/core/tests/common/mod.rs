//! Test-only reference material: the case-study rows and published table typed
//! out by hand, and a brute-force similarity oracle that shares no code with
//! the library.

#![allow(dead_code)]

pub const ITEMS: [&str; 5] = ["bread", "butter", "jam", "coffee", "milk"];

pub const ROWS: [[u32; 5]; 9] = [
    [1, 1, 1, 0, 0],
    [0, 0, 1, 1, 1],
    [0, 1, 1, 1, 1],
    [1, 1, 1, 0, 1],
    [0, 0, 1, 1, 0],
    [1, 1, 0, 0, 1],
    [1, 1, 0, 1, 0],
    [0, 1, 0, 1, 0],
    [0, 1, 1, 0, 1],
];

/// Published upper triangle, row by row.
pub const PUBLISHED_UPPER: [&[f64]; 8] = [
    &[
        0.59122, 0.6918, 0.8715, 0.6158, 0.7442, 0.7442, 0.6158, 0.7431,
    ],
    &[0.8651, 0.6894, 0.6545, 0.5948, 0.5948, 0.6152, 0.7402],
    &[0.7894, 0.7402, 0.6894, 0.6894, 0.7402, 0.8652],
    &[0.5894, 0.8652, 0.6894, 0.5894, 0.8652],
    &[0.4949, 0.6152, 0.6581, 0.6152],
    &[0.7390, 0.6140, 0.7402],
    &[0.8233, 0.5894],
    &[0.6152],
];

pub fn tid(i: usize) -> String {
    format!("T{}", i + 1)
}

pub fn published(i: usize, j: usize) -> f64 {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    PUBLISHED_UPPER[a][b - a - 1]
}

/// Mean and deviation in two passes over the column.
pub fn two_pass_std(column: &[f64], sample: bool) -> f64 {
    let n = column.len() as f64;
    let mean = column.iter().sum::<f64>() / n;
    let ss: f64 = column.iter().map(|x| (x - mean) * (x - mean)).sum();
    (ss / if sample { n - 1.0 } else { n }).sqrt()
}

pub fn oracle_sigmas<R: AsRef<[u32]>>(rows: &[R], sample: bool) -> Vec<f64> {
    let m = rows[0].as_ref().len();
    (0..m)
        .map(|k| {
            let col: Vec<f64> = rows.iter().map(|r| r.as_ref()[k] as f64).collect();
            two_pass_std(&col, sample)
        })
        .collect()
}

/// Brute-force TSIM straight from the definition, λ = 1.
pub fn oracle_pair(a: &[u32], b: &[u32], sigmas: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0usize;
    for k in 0..a.len() {
        let (x, y) = (a[k], b[k]);
        if x == 0 && y == 0 {
            continue;
        }
        den += 1;
        let diff = x as f64 - y as f64;
        let kernel = if diff == 0.0 {
            1.0
        } else if sigmas[k] == 0.0 {
            0.0
        } else {
            (-(diff / sigmas[k]).powi(2)).exp()
        };
        num += if x > 0 && y > 0 {
            0.5 * (1.0 + kernel)
        } else {
            -kernel
        };
    }
    if den == 0 {
        return 0.0;
    }
    (num / den as f64 + 1.0) / 2.0
}

pub fn oracle_matrix<R: AsRef<[u32]>>(rows: &[R]) -> Vec<Vec<f64>> {
    let sigmas = oracle_sigmas(rows, true);
    rows.iter()
        .map(|a| {
            rows.iter()
                .map(|b| oracle_pair(a.as_ref(), b.as_ref(), &sigmas))
                .collect()
        })
        .collect()
}

pub fn case_study_dataset() -> tsim::Dataset {
    tsim::Dataset::from_rows(
        ITEMS.iter().map(|s| s.to_string()).collect(),
        ROWS.iter().enumerate().map(|(i, r)| (tid(i), r.to_vec())),
    )
    .unwrap()
}
