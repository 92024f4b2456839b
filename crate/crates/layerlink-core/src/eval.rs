//! ROC curves, AUC and stratified k-fold cross-validation.
//!
//! The ROC sweep visits each distinct score once, so tied scores move the
//! curve diagonally and the trapezoidal area equals the Mann-Whitney
//! statistic with half credit for ties.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::{train, ForestConfig};

/// One point of an ROC sweep: everything scoring at least `threshold` is
/// predicted positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocResult {
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

/// Per-fold curves plus their mean AUC.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub folds: Vec<RocResult>,
    pub mean_auc: f64,
    pub seed: u64,
}

/// Threshold sweep over the distinct scores, with trapezoidal AUC.
///
/// Labels must be -1 or +1 and both classes must be present.
pub fn roc_auc(scores: &[f64], labels: &[i8]) -> Result<RocResult> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("scores"));
    }
    for &y in labels {
        if y != 1 && y != -1 {
            return Err(Error::InvalidLabel(y as i64));
        }
    }
    let n_pos = labels.iter().filter(|&&y| y > 0).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("scores are finite")
    });

    let mut points = vec![RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut at = 0;
    while at < order.len() {
        let threshold = scores[order[at]];
        // Consume the whole tied block before emitting a point.
        while at < order.len() && scores[order[at]] == threshold {
            if labels[order[at]] > 0 {
                tp += 1;
            } else {
                fp += 1;
            }
            at += 1;
        }
        points.push(RocPoint {
            threshold,
            fpr: fp as f64 / n_neg as f64,
            tpr: tp as f64 / n_pos as f64,
        });
    }

    let mut auc = 0.0;
    for w in points.windows(2) {
        auc += (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0;
    }

    Ok(RocResult { points, auc })
}

/// Stratified k-fold cross-validation of the forest, reporting per-fold ROC
/// and the fold-averaged AUC.
///
/// Positives and negatives are shuffled separately and dealt cyclically so
/// fold sizes differ by at most one and every fold sees both classes; this
/// requires at least `k` samples of each class.
pub fn cross_validate(
    features: &[Vec<f64>],
    labels: &[i8],
    cfg: &ForestConfig,
    k: usize,
    seed: u64,
) -> Result<CvReport> {
    if k < 2 {
        return Err(Error::BadFoldCount(k));
    }
    if features.len() != labels.len() {
        return Err(Error::LengthMismatch {
            scores: features.len(),
            labels: labels.len(),
        });
    }
    let folds = assign_folds(labels, k, seed)?;

    let mut fold_results = Vec::with_capacity(k);
    for fold in 0..k {
        let (mut train_x, mut train_y) = (Vec::new(), Vec::new());
        let (mut test_x, mut test_y) = (Vec::new(), Vec::new());
        for (i, &assigned) in folds.iter().enumerate() {
            if assigned == fold {
                test_x.push(features[i].clone());
                test_y.push(labels[i]);
            } else {
                train_x.push(features[i].clone());
                train_y.push(labels[i]);
            }
        }
        let fold_cfg = ForestConfig {
            seed: cfg.seed.wrapping_add(fold as u64),
            ..*cfg
        };
        let forest = train(&train_x, &train_y, &fold_cfg)?;
        let scores = forest.predict_batch(&test_x)?;
        fold_results.push(roc_auc(&scores, &test_y)?);
    }

    let mean_auc = fold_results.iter().map(|r| r.auc).sum::<f64>() / k as f64;
    Ok(CvReport {
        folds: fold_results,
        mean_auc,
        seed,
    })
}

/// Stratified fold assignment: returns the fold index of every sample.
pub fn assign_folds(labels: &[i8], k: usize, seed: u64) -> Result<Vec<usize>> {
    let mut pos: Vec<usize> = Vec::new();
    let mut neg: Vec<usize> = Vec::new();
    for (i, &y) in labels.iter().enumerate() {
        match y {
            1 => pos.push(i),
            -1 => neg.push(i),
            other => return Err(Error::InvalidLabel(other as i64)),
        }
    }
    if pos.len() < k || neg.len() < k {
        return Err(Error::TooSmallForFolds {
            folds: k,
            positives: pos.len(),
            negatives: neg.len(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    shuffle(&mut pos, &mut rng);
    shuffle(&mut neg, &mut rng);

    // Deal positives round-robin, then continue dealing negatives from the
    // next fold so overall fold sizes stay within one of each other.
    let mut folds = vec![0usize; labels.len()];
    let mut next = 0usize;
    for &i in pos.iter().chain(neg.iter()) {
        folds[i] = next;
        next = (next + 1) % k;
    }
    Ok(folds)
}

fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// Vertically average fold curves onto a fixed FPR grid. Each fold
/// contributes its running-maximum TPR at or below the grid FPR; thresholds
/// are averaged the same way.
pub fn average_roc(folds: &[RocResult], grid_points: usize) -> Vec<RocPoint> {
    assert!(grid_points >= 2, "need at least the two endpoints");
    let mut out = Vec::with_capacity(grid_points);
    for g in 0..grid_points {
        let x = g as f64 / (grid_points - 1) as f64;
        let (mut tpr_sum, mut thr_sum) = (0.0, 0.0);
        for fold in folds {
            let mut tpr = 0.0f64;
            let mut thr = f64::INFINITY;
            for p in &fold.points {
                if p.fpr <= x + 1e-12 {
                    tpr = tpr.max(p.tpr);
                    thr = p.threshold;
                } else {
                    break;
                }
            }
            tpr_sum += tpr;
            thr_sum += thr;
        }
        out.push(RocPoint {
            threshold: thr_sum / folds.len() as f64,
            fpr: x,
            tpr: tpr_sum / folds.len() as f64,
        });
    }
    out
}
