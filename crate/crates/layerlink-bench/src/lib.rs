//! Shared fixtures for the pipeline benchmarks.

use layerlink_core::features::{sample_pairs, PredictionTask, SampledPair};
use layerlink_core::interaction::{HashtagIndex, MentionIndex, VenueIndex};
use layerlink_core::synth::{generate, GenConfig, SyntheticDataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub dataset: SyntheticDataset,
    pub venues: VenueIndex,
    pub mentions: MentionIndex,
    pub hashtags: HashtagIndex,
    pub multiplex_pairs: Vec<SampledPair>,
}

/// One mid-sized synthetic run shared by all benchmark groups.
pub fn fixture(n_users: usize) -> Fixture {
    let cfg = GenConfig {
        n_users,
        seed: 7,
        ..GenConfig::default()
    };
    let dataset = generate(&cfg).expect("valid config");
    let venues = VenueIndex::build(&dataset.checkins).expect("consistent checkins");
    let mentions = MentionIndex::build(&dataset.mentions);
    let hashtags = HashtagIndex::build(&dataset.hashtags);
    let multiplex_pairs =
        sample_pairs(&dataset.graph, PredictionTask::Multiplex, 1.0, 7).expect("sampling");
    Fixture {
        dataset,
        venues,
        mentions,
        hashtags,
        multiplex_pairs,
    }
}

/// Seeded random score/label vectors for the AUC benchmark.
pub fn scored_labels(n: usize) -> (Vec<f64>, Vec<i8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let scores = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let mut labels: Vec<i8> = (0..n)
        .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
        .collect();
    labels[0] = 1;
    labels[1] = -1;
    (scores, labels)
}
