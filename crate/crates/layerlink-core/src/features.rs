//! Candidate-pair sampling and assembly of the three four-feature sets into
//! labeled datasets for the two prediction tasks.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{LayerId, MultilayerGraph, NodeId};
use crate::interaction::{
    global_interaction, similarity_over_distance, HashtagIndex, MentionIndex, VenueIndex,
    DEFAULT_COLOC_WINDOW_SECS, DEFAULT_DIST_EXPONENT, DEFAULT_SIM_EXPONENT,
};
use crate::structural::{adamic_adar, jaccard, NeighbourhoodScope};

/// The three fixed feature sets. Order of the four features inside a set is
/// part of the contract (it is the CSV column order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSetKind {
    /// mentions, hashtags, overlap_T, aa_sim_T
    Twitter,
    /// colocs, dist, overlap_F, aa_sim_F
    Foursquare,
    /// int_GN, sim_GN, overlap_CN, aa_sim_CN
    Multilayer,
}

impl FeatureSetKind {
    pub fn feature_names(&self) -> [&'static str; 4] {
        match self {
            FeatureSetKind::Twitter => ["mentions", "hashtags", "overlap_T", "aa_sim_T"],
            FeatureSetKind::Foursquare => ["colocs", "dist", "overlap_F", "aa_sim_F"],
            FeatureSetKind::Multilayer => ["int_GN", "sim_GN", "overlap_CN", "aa_sim_CN"],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FeatureSetKind::Twitter => "twitter",
            FeatureSetKind::Foursquare => "foursquare",
            FeatureSetKind::Multilayer => "multilayer",
        }
    }
}

impl std::str::FromStr for FeatureSetKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "twitter" => Ok(FeatureSetKind::Twitter),
            "foursquare" => Ok(FeatureSetKind::Foursquare),
            "multilayer" => Ok(FeatureSetKind::Multilayer),
            other => Err(format!(
                "unknown feature set `{other}` (expected twitter, foursquare or multilayer)"
            )),
        }
    }
}

/// What is being predicted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionTask {
    /// Predict links on `target_layer` from features computed on
    /// `feature_layer`.
    CrossNetwork {
        feature_layer: LayerId,
        target_layer: LayerId,
    },
    /// Predict pairs linked on every layer against pairs linked on none.
    Multiplex,
}

impl PredictionTask {
    pub fn describe(&self, g: &MultilayerGraph) -> String {
        match self {
            PredictionTask::CrossNetwork {
                feature_layer,
                target_layer,
            } => format!(
                "cross:{}->{}",
                g.layer_names()[feature_layer.0],
                g.layer_names()[target_layer.0]
            ),
            PredictionTask::Multiplex => "multiplex".to_string(),
        }
    }
}

/// A candidate pair with its target label (+1 linked, -1 not).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampledPair {
    pub i: NodeId,
    pub j: NodeId,
    pub label: i8,
}

/// One assembled pair: the four features of its set, in fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPair {
    pub i: NodeId,
    pub j: NodeId,
    pub features: [f64; 4],
    pub label: i8,
}

/// A feature matrix with labels and the sampling metadata that produced it.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub kind: FeatureSetKind,
    pub task_name: String,
    pub pairs: Vec<LabeledPair>,
    pub seed: u64,
    pub negative_ratio: f64,
    /// Aligned with `pairs`: true where the distance feature was imputed.
    pub distance_imputed: Vec<bool>,
    /// Median of the defined pair distances, used for imputation (0 when no
    /// pair had a defined distance).
    pub median_distance_km: f64,
}

impl LabeledDataset {
    pub fn positives(&self) -> usize {
        self.pairs.iter().filter(|p| p.label > 0).count()
    }

    pub fn negatives(&self) -> usize {
        self.pairs.len() - self.positives()
    }

    pub fn imputed_count(&self) -> usize {
        self.distance_imputed.iter().filter(|&&b| b).count()
    }

    /// Rows as (features, label) slices for training.
    pub fn matrix(&self) -> (Vec<Vec<f64>>, Vec<i8>) {
        (
            self.pairs.iter().map(|p| p.features.to_vec()).collect(),
            self.pairs.iter().map(|p| p.label).collect(),
        )
    }
}

/// Sample positives and negatives for a task.
///
/// Cross-network: positives are every edge of the target layer; negatives
/// are uniform non-edges of that layer. Multiplex: positives are pairs
/// linked on every layer; negatives are pairs linked on none (pairs with
/// only some layers linked are excluded from the task entirely). Negatives
/// are drawn without replacement at `negative_ratio` negatives per positive.
pub fn sample_pairs(
    g: &MultilayerGraph,
    task: PredictionTask,
    negative_ratio: f64,
    seed: u64,
) -> Result<Vec<SampledPair>> {
    if negative_ratio <= 0.0 || !negative_ratio.is_finite() {
        return Err(Error::NegativeInput("negative_ratio", negative_ratio));
    }
    let n = g.node_count();
    let total_pairs = n.saturating_mul(n.saturating_sub(1)) / 2;

    type EdgeList = Vec<(u32, u32)>;
    let (positives, forbidden): (EdgeList, EdgeList) = match task {
        PredictionTask::CrossNetwork {
            feature_layer,
            target_layer,
        } => {
            if feature_layer == target_layer {
                return Err(Error::IdenticalLayers(feature_layer.0));
            }
            let positives = g.layer_edges(target_layer)?;
            let forbidden = positives.clone();
            (positives, forbidden)
        }
        PredictionTask::Multiplex => {
            let positives = g.intersection_edges();
            // Any link on any layer disqualifies a pair as a negative.
            let forbidden = g.union_edges();
            (positives, forbidden)
        }
    };

    if positives.is_empty() {
        return Err(Error::NoPositivePairs);
    }

    let available = total_pairs - forbidden.len();
    let wanted = (positives.len() as f64 * negative_ratio).round().max(1.0) as usize;
    if wanted > available {
        return Err(Error::NegativeRatioUnachievable {
            requested: negative_ratio,
            achievable: available,
            positives: positives.len(),
            max_ratio: available as f64 / positives.len() as f64,
        });
    }

    let forbidden_set: HashSet<(u32, u32)> = forbidden.iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut negatives: Vec<(u32, u32)> = Vec::with_capacity(wanted);
    let mut chosen: HashSet<(u32, u32)> = HashSet::with_capacity(wanted);

    if wanted * 4 >= available {
        // Dense case: enumerate the allowed pairs and take a seeded partial
        // shuffle instead of rejection sampling.
        let mut allowed: Vec<(u32, u32)> = Vec::with_capacity(available);
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                if !forbidden_set.contains(&(i, j)) {
                    allowed.push((i, j));
                }
            }
        }
        for k in 0..wanted {
            let pick = rng.gen_range(k..allowed.len());
            allowed.swap(k, pick);
            negatives.push(allowed[k]);
        }
    } else {
        while negatives.len() < wanted {
            let a = rng.gen_range(0..n as u32);
            let b = rng.gen_range(0..n as u32);
            if a == b {
                continue;
            }
            let pair = (a.min(b), a.max(b));
            if forbidden_set.contains(&pair) || !chosen.insert(pair) {
                continue;
            }
            negatives.push(pair);
        }
    }

    let mut out = Vec::with_capacity(positives.len() + negatives.len());
    out.extend(positives.into_iter().map(|(i, j)| SampledPair {
        i: NodeId(i),
        j: NodeId(j),
        label: 1,
    }));
    out.extend(negatives.into_iter().map(|(i, j)| SampledPair {
        i: NodeId(i),
        j: NodeId(j),
        label: -1,
    }));
    Ok(out)
}

/// Everything a feature set needs to evaluate a pair.
pub struct FeatureInputs<'a> {
    pub graph: &'a MultilayerGraph,
    pub mentions: &'a MentionIndex,
    pub hashtags: &'a HashtagIndex,
    pub venues: &'a VenueIndex,
    /// Layer whose structure backs the Twitter-style set (the layer that
    /// carries mention/hashtag events).
    pub social_layer: LayerId,
    /// Layer whose structure backs the Foursquare-style set (the layer that
    /// carries check-ins).
    pub mobility_layer: LayerId,
    pub coloc_window_secs: i64,
    pub sim_exponent: f64,
    pub dist_exponent: f64,
}

impl<'a> FeatureInputs<'a> {
    pub fn new(
        graph: &'a MultilayerGraph,
        mentions: &'a MentionIndex,
        hashtags: &'a HashtagIndex,
        venues: &'a VenueIndex,
        social_layer: LayerId,
        mobility_layer: LayerId,
    ) -> Self {
        FeatureInputs {
            graph,
            mentions,
            hashtags,
            venues,
            social_layer,
            mobility_layer,
            coloc_window_secs: DEFAULT_COLOC_WINDOW_SECS,
            sim_exponent: DEFAULT_SIM_EXPONENT,
            dist_exponent: DEFAULT_DIST_EXPONENT,
        }
    }
}

/// Reject set/task combinations whose features would include the structure
/// of the layer under prediction.
pub fn validate_task_set(
    task: PredictionTask,
    kind: FeatureSetKind,
    inputs: &FeatureInputs,
) -> Result<()> {
    if let PredictionTask::CrossNetwork { feature_layer, .. } = task {
        let expected = match kind {
            FeatureSetKind::Twitter => inputs.social_layer,
            FeatureSetKind::Foursquare => inputs.mobility_layer,
            FeatureSetKind::Multilayer => {
                return Err(Error::BadGenConfig(
                    "the multilayer set spans both layers and cannot be used for \
                     cross-network prediction"
                        .to_string(),
                ))
            }
        };
        if feature_layer != expected {
            return Err(Error::BadGenConfig(format!(
                "feature set `{}` is computed on layer {} but the task draws features from layer {}",
                kind.name(),
                expected.0,
                feature_layer.0
            )));
        }
    }
    Ok(())
}

/// Compute the set's four features for every sampled pair.
///
/// Distance (used by the Foursquare set's `dist` and the multilayer set's
/// `sim_GN` denominator) is undefined for users with two or fewer check-ins;
/// undefined distances are imputed with the median defined distance over the
/// pair list and flagged in the returned dataset.
pub fn assemble(
    inputs: &FeatureInputs,
    pairs: &[SampledPair],
    kind: FeatureSetKind,
    task_name: &str,
    seed: u64,
    negative_ratio: f64,
) -> Result<LabeledDataset> {
    let g = inputs.graph;
    for p in pairs {
        if p.i.0 as usize >= g.node_count() {
            return Err(Error::NodeOutOfRange(p.i.0 as usize));
        }
        if p.j.0 as usize >= g.node_count() {
            return Err(Error::NodeOutOfRange(p.j.0 as usize));
        }
    }

    // Pass 1: distances, so the imputation median covers this pair list.
    // The twitter set has no distance feature, so nothing to impute there.
    let uses_distance = !matches!(kind, FeatureSetKind::Twitter);
    let distances: Vec<Option<f64>> = if uses_distance {
        pairs
            .par_iter()
            .map(|p| {
                inputs
                    .venues
                    .pair_distance(g.node_name(p.i), g.node_name(p.j))
            })
            .collect()
    } else {
        vec![Some(0.0); pairs.len()]
    };
    let mut defined: Vec<f64> = distances.iter().filter_map(|d| *d).collect();
    defined.sort_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
    let median = if defined.is_empty() {
        0.0
    } else {
        defined[defined.len() / 2]
    };

    let rows: Result<Vec<LabeledPair>> = pairs
        .par_iter()
        .zip(distances.par_iter())
        .map(|(p, dist)| {
            let features = pair_features(inputs, p.i, p.j, kind, dist.unwrap_or(median))?;
            Ok(LabeledPair {
                i: p.i,
                j: p.j,
                features,
                label: p.label,
            })
        })
        .collect();

    Ok(LabeledDataset {
        kind,
        task_name: task_name.to_string(),
        pairs: rows?,
        seed,
        negative_ratio,
        distance_imputed: distances.iter().map(Option::is_none).collect(),
        median_distance_km: median,
    })
}

fn pair_features(
    inputs: &FeatureInputs,
    i: NodeId,
    j: NodeId,
    kind: FeatureSetKind,
    dist_km: f64,
) -> Result<[f64; 4]> {
    let g = inputs.graph;
    let (ni, nj) = (g.node_name(i), g.node_name(j));
    Ok(match kind {
        FeatureSetKind::Twitter => {
            let scope = NeighbourhoodScope::SingleLayer(inputs.social_layer);
            [
                inputs.mentions.count(ni, nj) as f64,
                inputs.hashtags.common(ni, nj) as f64,
                jaccard(g, i, j, scope)?,
                adamic_adar(g, i, j, scope)?,
            ]
        }
        FeatureSetKind::Foursquare => {
            let scope = NeighbourhoodScope::SingleLayer(inputs.mobility_layer);
            [
                inputs.venues.colocations(ni, nj, inputs.coloc_window_secs),
                dist_km,
                jaccard(g, i, j, scope)?,
                adamic_adar(g, i, j, scope)?,
            ]
        }
        FeatureSetKind::Multilayer => {
            let colocs = inputs.venues.colocations(ni, nj, inputs.coloc_window_secs);
            let mentions = inputs.mentions.count(ni, nj) as f64;
            let tags = inputs.hashtags.common(ni, nj) as f64;
            [
                global_interaction(&[colocs, mentions]),
                similarity_over_distance(tags, dist_km, inputs.sim_exponent, inputs.dist_exponent)?,
                jaccard(g, i, j, NeighbourhoodScope::Core)?,
                adamic_adar(g, i, j, NeighbourhoodScope::Core)?,
            ]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultilayerGraph;
    use crate::interaction::{CheckinRecord, HashtagRecord, MentionRecord};

    fn small_graph() -> MultilayerGraph {
        // Ten nodes; layer 1 ("foursquare") has 5 edges.
        let edges = vec![
            (0usize, "a", "b"),
            (0, "b", "c"),
            (0, "a", "c"),
            (1, "a", "b"),
            (1, "c", "d"),
            (1, "e", "f"),
            (1, "g", "h"),
            (1, "i", "j"),
        ];
        let nodes = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];
        MultilayerGraph::build(&["twitter", "foursquare"], &nodes, &edges)
            .unwrap()
            .0
    }

    #[test]
    fn cross_network_sampling_is_balanced_and_disjoint() {
        let g = small_graph();
        let task = PredictionTask::CrossNetwork {
            feature_layer: LayerId(0),
            target_layer: LayerId(1),
        };
        let pairs = sample_pairs(&g, task, 1.0, 42).unwrap();
        let pos: Vec<_> = pairs.iter().filter(|p| p.label > 0).collect();
        let neg: Vec<_> = pairs.iter().filter(|p| p.label < 0).collect();
        assert_eq!(pos.len(), 5);
        assert_eq!(neg.len(), 5);
        for p in &neg {
            assert!(!g.has_edge(LayerId(1), p.i, p.j).unwrap());
            assert!(p.i < p.j);
        }
    }

    #[test]
    fn multiplex_sampling_rejects_when_every_pair_is_linked() {
        // Triangle linked on both layers: no candidate negatives.
        let edges = vec![
            (0usize, "a", "b"),
            (0, "b", "c"),
            (0, "a", "c"),
            (1, "a", "b"),
            (1, "b", "c"),
            (1, "a", "c"),
        ];
        let g = MultilayerGraph::build(&["t", "f"], &[], &edges).unwrap().0;
        let err = sample_pairs(&g, PredictionTask::Multiplex, 1.0, 1).unwrap_err();
        assert!(matches!(err, Error::NegativeRatioUnachievable { .. }));
    }

    #[test]
    fn multiplex_negatives_have_no_link_on_any_layer() {
        let g = small_graph();
        let pairs = sample_pairs(&g, PredictionTask::Multiplex, 2.0, 9).unwrap();
        for p in pairs.iter().filter(|p| p.label < 0) {
            assert!(!g.has_edge(LayerId(0), p.i, p.j).unwrap());
            assert!(!g.has_edge(LayerId(1), p.i, p.j).unwrap());
        }
        // Positives are exactly the multiplex links.
        let pos: Vec<_> = pairs.iter().filter(|p| p.label > 0).collect();
        assert_eq!(pos.len(), 1); // only a-b is on both layers
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = small_graph();
        let task = PredictionTask::CrossNetwork {
            feature_layer: LayerId(0),
            target_layer: LayerId(1),
        };
        let a = sample_pairs(&g, task, 1.0, 7).unwrap();
        let b = sample_pairs(&g, task, 1.0, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dense_sampling_branch_is_valid_and_deterministic() {
        // 10 nodes and 7 union edges leave 38 candidate negatives; asking
        // for 30 forces the enumerate-and-shuffle path.
        let g = small_graph();
        let a = sample_pairs(&g, PredictionTask::Multiplex, 30.0, 5).unwrap();
        let b = sample_pairs(&g, PredictionTask::Multiplex, 30.0, 5).unwrap();
        assert_eq!(a, b);
        let neg: Vec<_> = a.iter().filter(|p| p.label < 0).collect();
        assert_eq!(neg.len(), 30);
        let mut seen = std::collections::HashSet::new();
        for p in &neg {
            assert!(seen.insert((p.i, p.j)), "duplicate negative {p:?}");
            assert!(!g.has_edge(LayerId(0), p.i, p.j).unwrap());
            assert!(!g.has_edge(LayerId(1), p.i, p.j).unwrap());
        }
    }

    #[test]
    fn sampling_without_positives_rejected() {
        // Layers are disjoint, so the multiplex task has no positives.
        let edges = vec![(0usize, "a", "b"), (1, "c", "d")];
        let g = MultilayerGraph::build(&["t", "f"], &[], &edges).unwrap().0;
        assert!(matches!(
            sample_pairs(&g, PredictionTask::Multiplex, 1.0, 1),
            Err(Error::NoPositivePairs)
        ));
    }

    #[test]
    fn cross_task_requires_distinct_layers() {
        let g = small_graph();
        let task = PredictionTask::CrossNetwork {
            feature_layer: LayerId(1),
            target_layer: LayerId(1),
        };
        assert!(matches!(
            sample_pairs(&g, task, 1.0, 7),
            Err(Error::IdenticalLayers(1))
        ));
    }

    fn empty_inputs<'a>(
        g: &'a MultilayerGraph,
        mentions: &'a MentionIndex,
        hashtags: &'a HashtagIndex,
        venues: &'a VenueIndex,
    ) -> FeatureInputs<'a> {
        FeatureInputs::new(g, mentions, hashtags, venues, LayerId(0), LayerId(1))
    }

    #[test]
    fn assemble_zero_events_gives_zero_vector_with_imputed_distance() {
        let g = small_graph();
        let mentions = MentionIndex::build(&[]);
        let hashtags = HashtagIndex::build(&[]);
        let venues = VenueIndex::build(&[]).unwrap();
        let inputs = empty_inputs(&g, &mentions, &hashtags, &venues);
        let pairs = vec![SampledPair {
            i: g.node_id("e").unwrap(),
            j: g.node_id("i").unwrap(),
            label: -1,
        }];
        let ds = assemble(&inputs, &pairs, FeatureSetKind::Foursquare, "t", 0, 1.0).unwrap();
        assert_eq!(ds.pairs[0].features, [0.0, 0.0, 0.0, 0.0]);
        assert_eq!(ds.distance_imputed, vec![true]);
        assert_eq!(ds.median_distance_km, 0.0);
    }

    #[test]
    fn assemble_matches_single_feature_calls() {
        let g = small_graph();
        let mentions = MentionIndex::build(&[
            MentionRecord {
                source: "a".into(),
                target: "b".into(),
                timestamp: 5,
            },
            MentionRecord {
                source: "b".into(),
                target: "a".into(),
                timestamp: 6,
            },
        ]);
        let hashtags = HashtagIndex::build(&[
            HashtagRecord {
                user: "a".into(),
                tag: "x".into(),
                timestamp: 0,
            },
            HashtagRecord {
                user: "b".into(),
                tag: "x".into(),
                timestamp: 1,
            },
        ]);
        let mk = |user: &str, venue: &str, t: i64| CheckinRecord {
            user: user.into(),
            venue: venue.into(),
            lat: 40.0,
            lon: -74.0,
            timestamp: t,
        };
        let venues = VenueIndex::build(&[
            mk("a", "v", 0),
            mk("a", "v", 10),
            mk("a", "v", 20),
            mk("b", "v", 30),
            mk("b", "v", 40),
            mk("b", "v", 50),
        ])
        .unwrap();
        let inputs = empty_inputs(&g, &mentions, &hashtags, &venues);
        let (i, j) = (g.node_id("a").unwrap(), g.node_id("b").unwrap());
        let pairs = vec![SampledPair { i, j, label: 1 }];

        for kind in [
            FeatureSetKind::Twitter,
            FeatureSetKind::Foursquare,
            FeatureSetKind::Multilayer,
        ] {
            let ds = assemble(&inputs, &pairs, kind, "t", 0, 1.0).unwrap();
            let f = ds.pairs[0].features;
            match kind {
                FeatureSetKind::Twitter => {
                    let scope = NeighbourhoodScope::SingleLayer(LayerId(0));
                    assert_eq!(f[0], mentions.count("a", "b") as f64);
                    assert_eq!(f[1], hashtags.common("a", "b") as f64);
                    assert_eq!(f[2], jaccard(&g, i, j, scope).unwrap());
                    assert_eq!(f[3], adamic_adar(&g, i, j, scope).unwrap());
                }
                FeatureSetKind::Foursquare => {
                    let scope = NeighbourhoodScope::SingleLayer(LayerId(1));
                    assert_eq!(f[0], venues.colocations("a", "b", 3600));
                    assert_eq!(f[1], venues.pair_distance("a", "b").unwrap());
                    assert_eq!(f[2], jaccard(&g, i, j, scope).unwrap());
                    assert_eq!(f[3], adamic_adar(&g, i, j, scope).unwrap());
                }
                FeatureSetKind::Multilayer => {
                    let colocs = venues.colocations("a", "b", 3600);
                    let m = mentions.count("a", "b") as f64;
                    assert_eq!(f[0], colocs + m);
                    let expected_sim = similarity_over_distance(
                        hashtags.common("a", "b") as f64,
                        venues.pair_distance("a", "b").unwrap(),
                        2.0,
                        1.0,
                    )
                    .unwrap();
                    assert_eq!(f[1], expected_sim);
                    assert_eq!(f[2], jaccard(&g, i, j, NeighbourhoodScope::Core).unwrap());
                    assert_eq!(
                        f[3],
                        adamic_adar(&g, i, j, NeighbourhoodScope::Core).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn multilayer_identical_core_neighbourhoods_put_one_in_position_three() {
        // a and b share core neighbour z on both layers and have no other
        // neighbours, so overlap_CN (index 2) is exactly 1.
        let edges = vec![
            (0usize, "a", "z"),
            (1, "a", "z"),
            (0, "b", "z"),
            (1, "b", "z"),
        ];
        let g = MultilayerGraph::build(&["twitter", "foursquare"], &[], &edges)
            .unwrap()
            .0;
        let mentions = MentionIndex::build(&[]);
        let hashtags = HashtagIndex::build(&[]);
        let venues = VenueIndex::build(&[]).unwrap();
        let inputs = empty_inputs(&g, &mentions, &hashtags, &venues);
        let pairs = vec![SampledPair {
            i: g.node_id("a").unwrap(),
            j: g.node_id("b").unwrap(),
            label: 1,
        }];
        let ds = assemble(&inputs, &pairs, FeatureSetKind::Multilayer, "t", 0, 1.0).unwrap();
        assert_eq!(ds.pairs[0].features[2], 1.0);
    }

    #[test]
    fn assemble_rejects_out_of_range_nodes() {
        let g = small_graph();
        let mentions = MentionIndex::build(&[]);
        let hashtags = HashtagIndex::build(&[]);
        let venues = VenueIndex::build(&[]).unwrap();
        let inputs = empty_inputs(&g, &mentions, &hashtags, &venues);
        let pairs = vec![SampledPair {
            i: NodeId(998),
            j: NodeId(999),
            label: 1,
        }];
        assert!(matches!(
            assemble(&inputs, &pairs, FeatureSetKind::Twitter, "t", 0, 1.0),
            Err(Error::NodeOutOfRange(998))
        ));
    }

    #[test]
    fn task_set_mismatch_rejected() {
        let g = small_graph();
        let mentions = MentionIndex::build(&[]);
        let hashtags = HashtagIndex::build(&[]);
        let venues = VenueIndex::build(&[]).unwrap();
        let inputs = empty_inputs(&g, &mentions, &hashtags, &venues);
        let task = PredictionTask::CrossNetwork {
            feature_layer: LayerId(0),
            target_layer: LayerId(1),
        };
        assert!(validate_task_set(task, FeatureSetKind::Twitter, &inputs).is_ok());
        assert!(validate_task_set(task, FeatureSetKind::Foursquare, &inputs).is_err());
        assert!(validate_task_set(task, FeatureSetKind::Multilayer, &inputs).is_err());
        assert!(
            validate_task_set(PredictionTask::Multiplex, FeatureSetKind::Twitter, &inputs).is_ok()
        );
    }
}
