//! From-scratch random forest: axis-aligned Gini trees over bootstrap
//! resamples with sqrt-feature subsampling.
//!
//! Training is bit-deterministic for a fixed seed: bootstrap indices come
//! from a per-tree stream, the feature subset at each node comes from a
//! generator derived from (tree, node path), candidate thresholds are
//! midpoints between sorted distinct values, and impurity ties break on the
//! lowest feature index then the lowest threshold. Deriving node generators
//! from the node path (rather than consuming one stream during recursion)
//! also makes a depth-d tree an exact truncation of the depth-(d+1) tree.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MODEL_FORMAT_VERSION: u32 = 1;

/// How many features each split may consider.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    /// ceil(sqrt(n_features)), the usual forest rule.
    Sqrt,
    All,
    Fixed(usize),
}

impl MaxFeatures {
    fn resolve(&self, n_features: usize) -> usize {
        match self {
            MaxFeatures::Sqrt => (n_features as f64).sqrt().ceil() as usize,
            MaxFeatures::All => n_features,
            MaxFeatures::Fixed(k) => (*k).clamp(1, n_features),
        }
        .max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 45,
            max_depth: 25,
            min_samples_split: 2,
            max_features: MaxFeatures::Sqrt,
            bootstrap: true,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    /// Positive-class fraction of the training samples in this leaf.
    Leaf { prob: f64 },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { prob } => return *prob,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedForest {
    format_version: u32,
    pub config: ForestConfig,
    n_features: usize,
    trees: Vec<DecisionTree>,
}

impl TrainedForest {
    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    /// Mean of the per-tree leaf probabilities.
    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features {
            return Err(Error::ArityMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        let sum: f64 = self.trees.iter().map(|t| t.predict(x)).sum();
        Ok(sum / self.trees.len() as f64)
    }

    /// Per-tree probabilities, in tree order.
    pub fn tree_probas(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_features {
            return Err(Error::ArityMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        Ok(self.trees.iter().map(|t| t.predict(x)).collect())
    }

    pub fn predict_batch(&self, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
        rows.par_iter().map(|x| self.predict_proba(x)).collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(self)?;
        fs::write(path, json)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let json = fs::read_to_string(path)?;
        let forest: TrainedForest =
            serde_json::from_str(&json).map_err(|e| Error::BadModelFile(e.to_string()))?;
        if forest.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::BadModelFile(format!(
                "format version {} (this build reads {})",
                forest.format_version, MODEL_FORMAT_VERSION
            )));
        }
        Ok(forest)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Train a forest on rows of equal arity with labels in {-1, +1}.
pub fn train(features: &[Vec<f64>], labels: &[i8], cfg: &ForestConfig) -> Result<TrainedForest> {
    if features.len() != labels.len() {
        return Err(Error::LengthMismatch {
            scores: features.len(),
            labels: labels.len(),
        });
    }
    if features.is_empty() {
        return Err(Error::SingleClass);
    }
    let n_features = features[0].len();
    for row in features {
        if row.len() != n_features {
            return Err(Error::ArityMismatch {
                expected: n_features,
                got: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("feature matrix"));
        }
    }
    for &y in labels {
        if y != 1 && y != -1 {
            return Err(Error::InvalidLabel(y as i64));
        }
    }
    let n_pos = labels.iter().filter(|&&y| y > 0).count();
    if n_pos == 0 || n_pos == labels.len() {
        return Err(Error::SingleClass);
    }

    let trees: Vec<DecisionTree> = (0..cfg.n_trees)
        .into_par_iter()
        .map(|t| {
            let tree_seed = splitmix64(cfg.seed ^ (t as u64).wrapping_mul(0xA24BAED4963EE407));
            build_tree(features, labels, cfg, tree_seed)
        })
        .collect();

    Ok(TrainedForest {
        format_version: MODEL_FORMAT_VERSION,
        config: *cfg,
        n_features,
        trees,
    })
}

struct TreeBuilder<'a> {
    features: &'a [Vec<f64>],
    labels: &'a [i8],
    cfg: &'a ForestConfig,
    tree_seed: u64,
    nodes: Vec<Node>,
}

fn build_tree(
    features: &[Vec<f64>],
    labels: &[i8],
    cfg: &ForestConfig,
    tree_seed: u64,
) -> DecisionTree {
    let n = features.len();
    let indices: Vec<usize> = if cfg.bootstrap {
        let mut rng = ChaCha8Rng::seed_from_u64(tree_seed);
        (0..n).map(|_| rng.gen_range(0..n)).collect()
    } else {
        (0..n).collect()
    };

    let mut builder = TreeBuilder {
        features,
        labels,
        cfg,
        tree_seed,
        nodes: Vec::new(),
    };
    builder.grow(indices, 1, 0);
    DecisionTree {
        nodes: builder.nodes,
    }
}

impl TreeBuilder<'_> {
    /// Recursively grow the subtree for `indices` at `depth`, identified by
    /// its root-to-node `path` (1 for the root, child = path * 2 + side).
    /// The feature subset at a node is derived from (tree seed, path), so
    /// trees of different max depth agree wherever both expand.
    fn grow(&mut self, indices: Vec<usize>, path: u64, depth: usize) -> usize {
        let n = indices.len();
        let n_pos = indices.iter().filter(|&&i| self.labels[i] > 0).count();
        let prob = n_pos as f64 / n as f64;

        if depth >= self.cfg.max_depth || n < self.cfg.min_samples_split || n_pos == 0 || n_pos == n
        {
            return self.leaf(prob);
        }

        let n_features = self.features[0].len();
        let k = self.cfg.max_features.resolve(n_features);
        let mut candidates: Vec<usize> = (0..n_features).collect();
        if k < n_features {
            let node_seed = splitmix64(self.tree_seed ^ path.wrapping_mul(0x9E3779B97F4A7C15));
            let mut rng = ChaCha8Rng::seed_from_u64(node_seed);
            for slot in 0..k {
                let pick = rng.gen_range(slot..n_features);
                candidates.swap(slot, pick);
            }
            candidates.truncate(k);
            candidates.sort_unstable();
        }

        let Some((feature, threshold)) =
            best_split(self.features, self.labels, &indices, &candidates)
        else {
            return self.leaf(prob);
        };

        let (mut left, mut right) = (Vec::new(), Vec::new());
        for &i in &indices {
            if self.features[i][feature] <= threshold {
                left.push(i);
            } else {
                right.push(i);
            }
        }
        debug_assert!(!left.is_empty() && !right.is_empty());

        let at = self.nodes.len();
        self.nodes.push(Node::Split {
            feature,
            threshold,
            left: 0,
            right: 0,
        });
        let l = self.grow(left, path << 1, depth + 1);
        let r = self.grow(right, (path << 1) | 1, depth + 1);
        if let Node::Split { left, right, .. } = &mut self.nodes[at] {
            *left = l;
            *right = r;
        }
        at
    }

    fn leaf(&mut self, prob: f64) -> usize {
        self.nodes.push(Node::Leaf { prob });
        self.nodes.len() - 1
    }
}

/// Lowest weighted Gini impurity over midpoint thresholds of the candidate
/// features. Ties keep the first candidate in (feature, threshold) order.
fn best_split(
    features: &[Vec<f64>],
    labels: &[i8],
    indices: &[usize],
    candidates: &[usize],
) -> Option<(usize, f64)> {
    let n = indices.len() as f64;
    let mut best: Option<(f64, usize, f64)> = None;

    for &f in candidates {
        let mut vals: Vec<(f64, bool)> = indices
            .iter()
            .map(|&i| (features[i][f], labels[i] > 0))
            .collect();
        vals.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite features"));

        let total_pos = vals.iter().filter(|(_, pos)| *pos).count() as f64;
        let mut left_pos = 0.0;
        for k in 0..vals.len() - 1 {
            if vals[k].1 {
                left_pos += 1.0;
            }
            let (a, b) = (vals[k].0, vals[k + 1].0);
            if a == b {
                continue;
            }
            let mut threshold = (a + b) / 2.0;
            if threshold >= b {
                // Adjacent floats can round the midpoint up to the higher
                // value; split on the lower value instead.
                threshold = a;
            }

            let nl = (k + 1) as f64;
            let nr = n - nl;
            let pl = left_pos / nl;
            let pr = (total_pos - left_pos) / nr;
            let gini_l = 1.0 - pl * pl - (1.0 - pl) * (1.0 - pl);
            let gini_r = 1.0 - pr * pr - (1.0 - pr) * (1.0 - pr);
            let weighted = (nl * gini_l + nr * gini_r) / n;

            let better = match best {
                None => true,
                Some((w, _, _)) => weighted < w,
            };
            if better {
                best = Some((weighted, f, threshold));
            }
        }
    }

    best.map(|(_, f, t)| (f, t))
}
