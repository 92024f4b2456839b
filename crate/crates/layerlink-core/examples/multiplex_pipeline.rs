//! End-to-end pipeline on a small synthetic city:
//! - generate a two-layer geo-social dataset with planted multiplexity
//! - inspect multilayer degree statistics
//! - assemble the three feature sets for the multiplex-link task
//! - cross-validate a random forest on each and compare AUC
//!
//! Run with: `cargo run --example multiplex_pipeline --release`

use layerlink_core::features::{assemble, sample_pairs, FeatureInputs, FeatureSetKind};
use layerlink_core::forest::ForestConfig;
use layerlink_core::graph::LayerId;
use layerlink_core::interaction::{HashtagIndex, MentionIndex, VenueIndex};
use layerlink_core::synth::{generate, GenConfig};
use layerlink_core::{cross_validate, PredictionTask};

fn main() {
    let cfg = GenConfig {
        n_users: 800,
        n_venues: 120,
        seed: 7,
        ..GenConfig::default()
    };
    let data = generate(&cfg).expect("valid config");

    let stats = data.graph.dataset_stats();
    println!(
        "{} users, {} union edges, {} multiplex ({:.0}%)",
        stats.node_count,
        stats.union_edge_count,
        stats.multiplex_edge_count,
        100.0 * stats.multiplex_edge_count as f64 / stats.union_edge_count as f64
    );
    println!(
        "mean global degree {:.2}, mean core degree {:.2}",
        stats.mean_global_degree, stats.mean_core_degree
    );

    let venues = VenueIndex::build(&data.checkins).expect("consistent venues");
    let mentions = MentionIndex::build(&data.mentions);
    let hashtags = HashtagIndex::build(&data.hashtags);
    let inputs = FeatureInputs::new(
        &data.graph,
        &mentions,
        &hashtags,
        &venues,
        LayerId(0),
        LayerId(1),
    );

    let pairs = sample_pairs(&data.graph, PredictionTask::Multiplex, 1.0, cfg.seed)
        .expect("sampleable graph");
    println!(
        "\nmultiplex task: {} positives vs {} sampled negatives",
        pairs.iter().filter(|p| p.label > 0).count(),
        pairs.iter().filter(|p| p.label < 0).count()
    );

    let forest_cfg = ForestConfig {
        seed: cfg.seed,
        ..ForestConfig::default()
    };
    for kind in [
        FeatureSetKind::Twitter,
        FeatureSetKind::Foursquare,
        FeatureSetKind::Multilayer,
    ] {
        let ds = assemble(&inputs, &pairs, kind, "multiplex", cfg.seed, 1.0).expect("assembly");
        let (x, y) = ds.matrix();
        let report = cross_validate(&x, &y, &forest_cfg, 10, cfg.seed).expect("cv");
        println!(
            "{:<12} 10-fold mean AUC {:.3}",
            kind.name(),
            report.mean_auc
        );
    }
}
