//! Multilayer social-network analytics and link prediction.
//!
//! This crate models two or more online social networks as one multilayer
//! graph over a shared user universe, computes structural (Jaccard,
//! Adamic/Adar) and interaction (mentions, hashtags, colocations, distance)
//! features over single-layer and cross-layer neighbourhoods, assembles
//! labeled pair datasets for cross-network and multiplex link prediction,
//! and evaluates them with a from-scratch random forest under stratified
//! k-fold cross-validation with ROC/AUC reporting. A seeded synthetic
//! generator produces geo-social datasets with planted multiplexity so the
//! whole pipeline can be exercised end to end.
//!
//! Note on degree statistics: mean degrees are reported as edges per node
//! (|E|/|V|), not 2|E|/|V|; see [`graph::DatasetStats`].
//!
//! ```
//! use layerlink_core::graph::{LayerId, MultilayerGraph};
//! use layerlink_core::structural::{jaccard, NeighbourhoodScope};
//!
//! let edges = vec![
//!     (0usize, "ana", "bo"),
//!     (0, "ana", "cy"),
//!     (1, "ana", "bo"),
//!     (1, "dee", "bo"),
//! ];
//! let (g, _) = MultilayerGraph::build(&["twitter", "foursquare"], &[], &edges).unwrap();
//!
//! let ana = g.node_id("ana").unwrap();
//! assert_eq!(g.global_degree(ana).unwrap(), 2); // bo and cy
//! assert_eq!(g.core_degree(ana).unwrap(), 1);   // bo is on both layers
//!
//! let dee = g.node_id("dee").unwrap();
//! let overlap = jaccard(&g, ana, dee, NeighbourhoodScope::Global).unwrap();
//! assert_eq!(overlap, 0.5); // both know bo; ana also knows cy
//! ```

pub mod error;
pub mod eval;
pub mod features;
pub mod forest;
pub mod geo;
pub mod graph;
pub mod interaction;
pub mod io;
pub mod structural;
pub mod synth;

pub use error::{Error, Result};
pub use eval::{average_roc, cross_validate, roc_auc, CvReport, RocPoint, RocResult};
pub use features::{
    assemble, sample_pairs, validate_task_set, FeatureInputs, FeatureSetKind, LabeledDataset,
    LabeledPair, PredictionTask, SampledPair,
};
pub use forest::{train, DecisionTree, ForestConfig, MaxFeatures, TrainedForest};
pub use geo::{haversine_km, EARTH_RADIUS_KM};
pub use graph::{
    reciprocal_reduce, BuildReport, DatasetStats, EdgeSetKind, LayerId, MultilayerGraph, NodeId,
};
pub use interaction::{
    global_interaction, similarity_over_distance, CheckinRecord, HashtagIndex, HashtagRecord,
    MentionIndex, MentionRecord, VenueIndex, DEFAULT_COLOC_WINDOW_SECS,
};
pub use structural::{adamic_adar, jaccard, scoped_neighbourhood, NeighbourhoodScope};
pub use synth::{generate, GenConfig, RateMultipliers, SyntheticDataset};
