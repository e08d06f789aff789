//! Single-link threshold clustering: connected components of the graph whose
//! edges join pairs with similarity at or above a threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::similarity::{Measure, SimilarityMatrix};

/// Default cut; reproduces the nine-transaction case study from its published matrix.
pub const DEFAULT_THRESHOLD: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub measure: Measure,
    pub threshold: f64,
    /// Members follow matrix order; clusters are ordered by their first member.
    pub clusters: Vec<Vec<String>>,
}

impl Clustering {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    // smaller index becomes the root so roots are canonical
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

fn check_threshold(threshold: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidConfig(format!(
            "threshold must lie in [0, 1], got {threshold}"
        )));
    }
    Ok(())
}

pub fn threshold_cluster(matrix: &SimilarityMatrix, threshold: f64) -> Result<Clustering> {
    check_threshold(threshold)?;
    let n = matrix.len();
    let mut sets = DisjointSet::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if matrix.get(i, j) >= threshold {
                sets.union(i, j);
            }
        }
    }

    let mut slot_of_root = vec![usize::MAX; n];
    let mut clusters: Vec<Vec<String>> = Vec::new();
    for i in 0..n {
        let root = sets.find(i);
        if slot_of_root[root] == usize::MAX {
            slot_of_root[root] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[slot_of_root[root]].push(matrix.ids()[i].clone());
    }

    Ok(Clustering {
        measure: matrix.measure(),
        threshold,
        clusters,
    })
}

/// Clusters at thresholds `k / steps` for `k = 0..=steps`.
pub fn threshold_sweep(matrix: &SimilarityMatrix, steps: u32) -> Result<Vec<Clustering>> {
    if steps == 0 {
        return Err(Error::InvalidConfig("sweep needs at least 1 step".into()));
    }
    (0..=steps)
        .map(|k| threshold_cluster(matrix, f64::from(k) / f64::from(steps)))
        .collect()
}
