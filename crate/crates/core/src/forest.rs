//! Seeded random-forest classifier with stratified k-fold cross-validation.
//!
//! Everything here is deterministic under a fixed seed: per-tree RNG streams
//! are derived by seed-splitting, fold shuffling and per-fold forest seeds
//! come from the same derivation, and every tie (equal Gini, equal votes)
//! breaks by a fixed rule. Identical inputs therefore give identical reports
//! regardless of how callers schedule the work.
//!
//! Trees are plain CART: bootstrap sample of size `n`, Gini-impurity splits
//! over a random subset of features, midpoint thresholds between consecutive
//! distinct values, leaves at class purity or the minimum split size.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::features::FeatureMatrix;

/// Hyperparameters; the defaults are the common random-forest choices.
#[derive(Debug, Clone, Serialize)]
pub struct ForestConfig {
    pub num_trees: usize,
    /// Candidate features per split; `None` means `floor(sqrt(d))`.
    pub max_features: Option<usize>,
    pub min_samples_split: usize,
    /// `None` grows trees to purity.
    pub max_depth: Option<usize>,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            num_trees: 100,
            max_features: None,
            min_samples_split: 2,
            max_depth: None,
            seed: 0,
        }
    }
}

/// Cross-validation outcome: per-fold accuracies plus pooled confusion
/// counts (`confusion[true][predicted]`, classes ascending).
#[derive(Debug, Clone, Serialize)]
pub struct CvReport {
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// Population standard deviation over folds.
    pub std_accuracy: f64,
    pub classes: Vec<i64>,
    pub confusion: Vec<Vec<usize>>,
    pub seed: u64,
    pub config: ForestConfig,
}

#[derive(Debug, Error)]
pub enum ForestError {
    #[error("stratified {k}-fold needs at least {k} samples, got {total}")]
    TooFewSamples { k: usize, total: usize },
    #[error("prediction row has {got} features, forest was trained on {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("cannot train on an empty sample set")]
    EmptyInput,
}

/// Derives an independent RNG stream seed from a master seed. `domain`
/// separates uses (trees, folds, …), `index` the stream within a use;
/// the mix is a splitmix64 finalizer.
pub fn derive_seed(master: u64, domain: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(domain.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

// Domains 1-3 belong to this module; 4 is claimed by the pipeline's
// cross-validation repetitions.
const DOMAIN_TREE: u64 = 1;
const DOMAIN_FOLD_SHUFFLE: u64 = 2;
const DOMAIN_FOLD_FOREST: u64 = 3;

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf {
        class_idx: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn predict(&self, row: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { class_idx } => return *class_idx,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}

/// A trained forest; immutable and freely shareable.
#[derive(Debug, Clone)]
pub struct Forest {
    /// Distinct class labels seen in training, ascending.
    pub classes: Vec<i64>,
    num_features: usize,
    trees: Vec<Tree>,
}

/// Index of the winning count; equal counts go to the smaller class index.
fn argmax_tie_to_smaller(counts: &[usize]) -> usize {
    let mut best = 0;
    for (idx, &c) in counts.iter().enumerate().skip(1) {
        if c > counts[best] {
            best = idx;
        }
    }
    best
}

/// Trains a forest of `cfg.num_trees` CART trees on bootstrap samples.
///
/// A single-class input yields a constant predictor with a warning rather
/// than an error.
pub fn train(x: &[Vec<f64>], y: &[i64], cfg: &ForestConfig) -> Result<Forest, ForestError> {
    let n = x.len();
    if n == 0 || y.len() != n {
        return Err(ForestError::EmptyInput);
    }
    let d = x[0].len();
    assert!(x.iter().all(|row| row.len() == d), "ragged feature rows");

    let mut classes: Vec<i64> = y.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() == 1 {
        log::warn!("training set has a single class {}; forest degenerates to a constant", classes[0]);
    }
    let y_idx: Vec<usize> = y
        .iter()
        .map(|label| classes.binary_search(label).expect("label in classes"))
        .collect();

    let max_features = cfg
        .max_features
        .unwrap_or_else(|| (d as f64).sqrt().floor() as usize)
        .clamp(usize::from(d > 0), d);

    let trees = (0..cfg.num_trees)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, DOMAIN_TREE, i as u64));
            let sample: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            let mut builder = TreeBuilder {
                x,
                y_idx: &y_idx,
                num_classes: classes.len(),
                num_features: d,
                max_features,
                min_samples_split: cfg.min_samples_split,
                max_depth: cfg.max_depth,
                rng,
                nodes: Vec::new(),
            };
            builder.build(sample, 0);
            Tree {
                nodes: builder.nodes,
            }
        })
        .collect();

    Ok(Forest {
        classes,
        num_features: d,
        trees,
    })
}

struct TreeBuilder<'a> {
    x: &'a [Vec<f64>],
    y_idx: &'a [usize],
    num_classes: usize,
    num_features: usize,
    max_features: usize,
    min_samples_split: usize,
    max_depth: Option<usize>,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
}

impl TreeBuilder<'_> {
    /// Builds the subtree over `samples` (bootstrap indices, duplicates kept)
    /// and returns its node index.
    fn build(&mut self, samples: Vec<usize>, depth: usize) -> usize {
        let mut counts = vec![0usize; self.num_classes];
        for &s in &samples {
            counts[self.y_idx[s]] += 1;
        }
        let majority = argmax_tie_to_smaller(&counts);
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let depth_capped = self.max_depth.is_some_and(|cap| depth >= cap);
        if pure || samples.len() < self.min_samples_split || depth_capped {
            return self.push(Node::Leaf {
                class_idx: majority,
            });
        }

        // Candidate features: a partial Fisher-Yates draw. The draw happens
        // before we know whether any candidate can split, so RNG consumption
        // depends only on tree shape, never on feature values.
        let mut pool: Vec<usize> = (0..self.num_features).collect();
        let picks = self.max_features.min(self.num_features);
        for i in 0..picks {
            let j = self.rng.gen_range(i..self.num_features);
            pool.swap(i, j);
        }

        let mut best: Option<(f64, usize, f64)> = None; // (weighted gini, feature, threshold)
        for &feature in &pool[..picks] {
            let mut ordered: Vec<(f64, usize)> = samples
                .iter()
                .map(|&s| (self.x[s][feature], self.y_idx[s]))
                .collect();
            ordered.sort_by(|a, b| a.0.total_cmp(&b.0));

            let total = ordered.len() as f64;
            let mut left = vec![0usize; self.num_classes];
            let mut right = counts.clone();
            for i in 0..ordered.len() - 1 {
                let class = ordered[i].1;
                left[class] += 1;
                right[class] -= 1;
                if ordered[i].0 == ordered[i + 1].0 {
                    continue;
                }
                let nl = (i + 1) as f64;
                let nr = total - nl;
                let sq = |cs: &[usize]| cs.iter().map(|&c| (c * c) as f64).sum::<f64>();
                let weighted = ((nl - sq(&left) / nl) + (nr - sq(&right) / nr)) / total;
                let threshold = (ordered[i].0 + ordered[i + 1].0) / 2.0;
                if best.is_none_or(|(g, _, _)| weighted < g) {
                    best = Some((weighted, feature, threshold));
                }
            }
        }

        let Some((_, feature, threshold)) = best else {
            // Every candidate feature is constant on this node.
            return self.push(Node::Leaf {
                class_idx: majority,
            });
        };

        let (left_samples, right_samples): (Vec<usize>, Vec<usize>) = samples
            .into_iter()
            .partition(|&s| self.x[s][feature] <= threshold);
        let placeholder = self.push(Node::Leaf { class_idx: 0 });
        let left = self.build(left_samples, depth + 1);
        let right = self.build(right_samples, depth + 1);
        self.nodes[placeholder] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        placeholder
    }

    fn push(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }
}

/// Majority vote of the trees on each row; ties go to the smaller class id.
pub fn predict(forest: &Forest, rows: &[Vec<f64>]) -> Result<Vec<i64>, ForestError> {
    rows.iter()
        .map(|row| {
            if row.len() != forest.num_features {
                return Err(ForestError::WidthMismatch {
                    expected: forest.num_features,
                    got: row.len(),
                });
            }
            let mut votes = vec![0usize; forest.classes.len()];
            for tree in &forest.trees {
                votes[tree.predict(row)] += 1;
            }
            Ok(forest.classes[argmax_tie_to_smaller(&votes)])
        })
        .collect()
}

/// Assigns each sample to one of `k` folds, stratified by class.
///
/// Per class (ascending), sample order is shuffled and dealt round-robin
/// into folds, continuing from wherever the previous class stopped — so
/// both per-class and overall fold sizes differ by at most one.
pub fn stratified_kfold(
    class_labels: &[i64],
    k: usize,
    seed: u64,
) -> Result<Vec<usize>, ForestError> {
    assert!(k >= 2, "cross-validation needs at least 2 folds");
    if class_labels.len() < k {
        return Err(ForestError::TooFewSamples {
            k,
            total: class_labels.len(),
        });
    }
    let mut classes: Vec<i64> = class_labels.to_vec();
    classes.sort_unstable();
    classes.dedup();

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, DOMAIN_FOLD_SHUFFLE, 0));
    let mut fold = vec![0usize; class_labels.len()];
    let mut cursor = 0usize;
    for class in classes {
        let mut members: Vec<usize> = (0..class_labels.len())
            .filter(|&i| class_labels[i] == class)
            .collect();
        members.shuffle(&mut rng);
        for m in members {
            fold[m] = cursor % k;
            cursor += 1;
        }
    }
    Ok(fold)
}

/// Stratified k-fold cross-validation of a forest over a feature matrix.
///
/// Fold `f` trains on the other folds with a seed derived from
/// `(cfg.seed, f)` and predicts fold `f`; accuracies and pooled confusion
/// counts are reported.
pub fn cross_validate(
    matrix: &FeatureMatrix,
    k: usize,
    cfg: &ForestConfig,
) -> Result<CvReport, ForestError> {
    let labels: Vec<i64> = matrix.rows.iter().map(|r| r.class_label).collect();
    let fold_of = stratified_kfold(&labels, k, cfg.seed)?;

    let mut classes = labels.clone();
    classes.sort_unstable();
    classes.dedup();
    let mut confusion = vec![vec![0usize; classes.len()]; classes.len()];
    let mut fold_accuracies = Vec::with_capacity(k);

    for f in 0..k {
        let (mut train_x, mut train_y) = (Vec::new(), Vec::new());
        let (mut test_x, mut test_y) = (Vec::new(), Vec::new());
        for (row, &assigned) in matrix.rows.iter().zip(&fold_of) {
            if assigned == f {
                test_x.push(row.values.clone());
                test_y.push(row.class_label);
            } else {
                train_x.push(row.values.clone());
                train_y.push(row.class_label);
            }
        }
        let fold_cfg = ForestConfig {
            seed: derive_seed(cfg.seed, DOMAIN_FOLD_FOREST, f as u64),
            ..cfg.clone()
        };
        let forest = train(&train_x, &train_y, &fold_cfg)?;
        let predictions = predict(&forest, &test_x)?;
        let mut correct = 0usize;
        for (truth, pred) in test_y.iter().zip(&predictions) {
            if truth == pred {
                correct += 1;
            }
            let ti = classes.binary_search(truth).expect("known class");
            let pi = classes.binary_search(pred).expect("known class");
            confusion[ti][pi] += 1;
        }
        fold_accuracies.push(correct as f64 / test_y.len() as f64);
    }

    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / k as f64;
    let variance = fold_accuracies
        .iter()
        .map(|a| (a - mean_accuracy).powi(2))
        .sum::<f64>()
        / k as f64;
    Ok(CvReport {
        fold_accuracies,
        mean_accuracy,
        std_accuracy: variance.sqrt(),
        classes,
        confusion,
        seed: cfg.seed,
        config: cfg.clone(),
    })
}
