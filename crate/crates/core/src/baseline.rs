//! Classical set and vector similarities used for comparison with TSIM.
//!
//! None of these look at how an item is distributed across the dataset, so a
//! mismatch on a rare item costs exactly as much as one on a common item.

use crate::model::TransactionVector;

/// |A ∩ B| / |A ∪ B| over presence flags; 0 when both are empty.
pub fn jaccard(a: &TransactionVector, b: &TransactionVector) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let (mut inter, mut union) = (0u32, 0u32);
    for (&x, &y) in a.presence().iter().zip(b.presence()) {
        inter += u32::from(x && y);
        union += u32::from(x || y);
    }
    if union == 0 {
        0.0
    } else {
        f64::from(inter) / f64::from(union)
    }
}

/// Cosine of the count vectors; 0 when either is all-zero.
pub fn cosine(a: &TransactionVector, b: &TransactionVector) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let (mut dot, mut na, mut nb) = (0.0f64, 0.0f64, 0.0f64);
    for (&x, &y) in a.counts().iter().zip(b.counts()) {
        let (x, y) = (f64::from(x), f64::from(y));
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    // rounding can push the ratio a hair past 1
    (dot / (na.sqrt() * nb.sqrt())).min(1.0)
}

/// `1 / (1 + d)` with `d` the Euclidean distance between count vectors.
pub fn euclidean_sim(a: &TransactionVector, b: &TransactionVector) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let d2: f64 = a
        .counts()
        .iter()
        .zip(b.counts())
        .map(|(&x, &y)| {
            let d = f64::from(x) - f64::from(y);
            d * d
        })
        .sum();
    1.0 / (1.0 + d2.sqrt())
}
