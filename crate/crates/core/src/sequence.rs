//! Item-wise comparison of two transactions.
//!
//! Every catalog item yields a `(delta, phi)` pair: the signed count difference
//! and a three-valued agreement flag. Only `|delta|` matters downstream.

use std::fmt;

use crate::error::Result;
use crate::model::{Dataset, TransactionVector};

/// Agreement of one item between two transactions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phi {
    /// Present in both (`1`).
    Match,
    /// Present in exactly one (`0`).
    Mismatch,
    /// Absent from both (`U`).
    BothAbsent,
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phi::Match => "1",
            Phi::Mismatch => "0",
            Phi::BothAbsent => "U",
        })
    }
}

pub fn phi(present_i: bool, present_j: bool) -> Phi {
    match (present_i, present_j) {
        (true, true) => Phi::Match,
        (false, false) => Phi::BothAbsent,
        _ => Phi::Mismatch,
    }
}

pub fn delta(count_i: u32, count_j: u32) -> i64 {
    i64::from(count_i) - i64::from(count_j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceEntry {
    pub delta: i64,
    pub phi: Phi,
}

impl SequenceEntry {
    pub fn new(count_i: u32, count_j: u32) -> Self {
        Self {
            delta: delta(count_i, count_j),
            phi: phi(count_i > 0, count_j > 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceVector {
    pub pair: (String, String),
    pub entries: Vec<SequenceEntry>,
}

impl SequenceVector {
    pub fn between(a: &TransactionVector, b: &TransactionVector) -> Self {
        assert_eq!(a.len(), b.len(), "transactions use different catalogs");
        let entries = a
            .counts()
            .iter()
            .zip(b.counts())
            .map(|(&ci, &cj)| SequenceEntry::new(ci, cj))
            .collect();
        Self {
            pair: (a.tid().to_owned(), b.tid().to_owned()),
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Renders as `⟨(d,φ),...⟩`, e.g. `⟨(1,0),(0,1),(0,U)⟩`.
impl fmt::Display for SequenceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "({},{})", e.delta, e.phi)?;
        }
        f.write_str("⟩")
    }
}

pub fn sequence_vector(ds: &Dataset, tid_i: &str, tid_j: &str) -> Result<SequenceVector> {
    let a = ds.get_vector(tid_i)?;
    let b = ds.get_vector(tid_j)?;
    Ok(SequenceVector::between(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn table4() -> Dataset {
        let items = ["bread", "butter", "jam", "coffee", "milk"]
            .map(String::from)
            .to_vec();
        Dataset::from_rows(
            items,
            [
                ("T1", vec![1, 1, 1, 0, 0]),
                ("T2", vec![0, 0, 1, 1, 1]),
                ("T5", vec![0, 0, 1, 1, 0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn phi_table() {
        assert_eq!(phi(true, true), Phi::Match);
        assert_eq!(phi(false, false), Phi::BothAbsent);
        assert_eq!(phi(true, false), Phi::Mismatch);
        assert_eq!(phi(false, true), Phi::Mismatch);
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(0, 4), -4);
        assert_eq!(delta(7, 7), 0);
        assert_eq!(delta(1, 0), 1);
    }

    #[test]
    fn t1_t2_vector() {
        let sv = sequence_vector(&table4(), "T1", "T2").unwrap();
        // delta is signed; the printed case-study form uses magnitudes
        let abs: Vec<_> = sv.entries.iter().map(|e| (e.delta.abs(), e.phi)).collect();
        use Phi::*;
        assert_eq!(
            abs,
            [
                (1, Mismatch),
                (1, Mismatch),
                (0, Match),
                (1, Mismatch),
                (1, Mismatch)
            ]
        );
        assert_eq!(sv.to_string(), "⟨(1,0),(1,0),(0,1),(-1,0),(-1,0)⟩");
    }

    #[test]
    fn t2_t5_follows_the_matrix() {
        let sv = sequence_vector(&table4(), "T2", "T5").unwrap();
        assert_eq!(sv.to_string(), "⟨(0,U),(0,U),(0,1),(0,1),(1,0)⟩");
    }

    #[test]
    fn self_pair() {
        let ds = table4();
        for tid in ["T1", "T2", "T5"] {
            let sv = sequence_vector(&ds, tid, tid).unwrap();
            assert!(sv
                .entries
                .iter()
                .all(|e| e.delta == 0 && matches!(e.phi, Phi::Match | Phi::BothAbsent)));
        }
    }

    #[test]
    fn counted_match() {
        let ds = Dataset::from_rows(vec!["a".into()], [("A", vec![3]), ("B", vec![1])]).unwrap();
        let sv = sequence_vector(&ds, "A", "B").unwrap();
        assert_eq!(
            sv.entries,
            [SequenceEntry {
                delta: 2,
                phi: Phi::Match
            }]
        );
    }

    #[test]
    fn unknown_tid() {
        assert!(matches!(
            sequence_vector(&table4(), "T1", "nope"),
            Err(Error::NotFound(_))
        ));
    }
}
