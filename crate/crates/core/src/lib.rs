//! Transaction similarity for market-basket data.
//!
//! Transactions over a fixed item catalog are compared item by item. Each
//! item's contribution is weighted by a Gaussian in the count difference,
//! scaled by how spread out that item is across the whole dataset, so that a
//! disagreement on an item nearly everyone buys costs less than one on an item
//! that splits the customers. The crate also provides Jaccard, cosine and
//! Euclidean baselines and single-link threshold clustering over any of the
//! resulting matrices.
//!
//! ```
//! use tsim::{case_study, similarity_matrix, threshold_cluster, SimilarityConfig};
//!
//! let ds = case_study::dataset();
//! let matrix = similarity_matrix(&ds, &SimilarityConfig::default()).unwrap();
//! assert!((matrix.get_by_id("T1", "T2").unwrap() - 0.59122).abs() < 1e-5);
//!
//! let clusters = threshold_cluster(&matrix, 0.8).unwrap();
//! assert!(clusters.len() > 1);
//! ```

pub mod baseline;
pub mod case_study;
pub mod cluster;
pub mod error;
pub mod io;
pub mod model;
pub mod pipeline;
pub mod sequence;
pub mod similarity;

pub use cluster::{threshold_cluster, threshold_sweep, Clustering, DEFAULT_THRESHOLD};
pub use error::{Error, Result};
pub use model::{Dataset, ItemCatalog, Mode, TransactionVector};
pub use pipeline::{run_pipeline, InputFormat, RunManifest};
pub use sequence::{delta, phi, sequence_vector, Phi, SequenceEntry, SequenceVector};
pub use similarity::{
    alpha, beta, compute_stats, s_alpha_beta, similarity_matrix, similarity_matrix_serial, tsim,
    ItemStats, Measure, SimilarityConfig, SimilarityMatrix, StdMode,
};
