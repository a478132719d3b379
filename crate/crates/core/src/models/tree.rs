//! CART trees shared by every forest: Gini splits for classification,
//! variance-reduction splits for regression, axis-aligned thresholds at
//! midpoints between distinct values, ties broken toward the lowest feature
//! index and threshold.

use rand::Rng;
use rand::seq::SliceRandom;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum LeafValue {
    /// Normalized class distribution of the training rows in the leaf.
    Classes(Vec<f64>),
    /// Mean training target of the leaf.
    Value(f64),
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum TreeNode {
    Split { feature: usize, threshold: f64, left: u32, right: u32 },
    Leaf { value: LeafValue },
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn leaf_of(&self, row: &[f64]) -> &LeafValue {
        let mut node = 0usize;
        loop {
            match &self.nodes[node] {
                TreeNode::Split { feature, threshold, left, right } => {
                    node = if row[*feature] <= *threshold { *left as usize } else { *right as usize };
                }
                TreeNode::Leaf { value } => return value,
            }
        }
    }
}

/// Target values a tree is grown against.
pub enum TreeTarget<'a> {
    Classes { y: &'a [usize], n_classes: usize },
    Values(&'a [f64]),
}

pub struct GrowSettings {
    /// Candidate features per split; 0 means all.
    pub mtry: usize,
    pub min_leaf: usize,
}

struct Grower<'a> {
    x: &'a [Vec<f64>],
    target: &'a TreeTarget<'a>,
    settings: &'a GrowSettings,
    n_features: usize,
    n_total: f64,
    nodes: Vec<TreeNode>,
    /// Impurity decrease accumulated per feature, weighted by node size.
    importance: Vec<f64>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    decrease: f64,
}

pub struct GrownTree {
    pub tree: Tree,
    pub importance: Vec<f64>,
}

/// Grow one unpruned tree over the given rows.
pub fn grow(
    x: &[Vec<f64>],
    rows: &[usize],
    target: &TreeTarget<'_>,
    settings: &GrowSettings,
    rng: &mut impl Rng,
) -> GrownTree {
    let n_features = x[0].len();
    let mut grower = Grower {
        x,
        target,
        settings,
        n_features,
        n_total: rows.len() as f64,
        nodes: Vec::new(),
        importance: vec![0.0; n_features],
    };
    grower.grow_node(rows, rng);
    GrownTree { tree: Tree { nodes: grower.nodes }, importance: grower.importance }
}

impl Grower<'_> {
    fn grow_node(&mut self, rows: &[usize], rng: &mut impl Rng) -> u32 {
        let index = self.nodes.len() as u32;
        if rows.len() < 2 * self.settings.min_leaf || self.is_pure(rows) {
            self.nodes.push(TreeNode::Leaf { value: self.leaf_value(rows) });
            return index;
        }
        let candidates = self.candidate_features(rng);
        let Some(split) = self.best_split(rows, &candidates) else {
            self.nodes.push(TreeNode::Leaf { value: self.leaf_value(rows) });
            return index;
        };

        self.importance[split.feature] += rows.len() as f64 / self.n_total * split.decrease;

        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
            rows.iter().partition(|&&r| self.x[r][split.feature] <= split.threshold);

        // Reserve the split slot, then grow children.
        self.nodes.push(TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left: 0,
            right: 0,
        });
        let left = self.grow_node(&left_rows, rng);
        let right = self.grow_node(&right_rows, rng);
        if let TreeNode::Split { left: l, right: r, .. } = &mut self.nodes[index as usize] {
            *l = left;
            *r = right;
        }
        index
    }

    fn is_pure(&self, rows: &[usize]) -> bool {
        match self.target {
            TreeTarget::Classes { y, .. } => rows.iter().all(|&r| y[r] == y[rows[0]]),
            TreeTarget::Values(y) => rows.iter().all(|&r| y[r] == y[rows[0]]),
        }
    }

    fn leaf_value(&self, rows: &[usize]) -> LeafValue {
        match self.target {
            TreeTarget::Classes { y, n_classes } => {
                let mut counts = vec![0.0; *n_classes];
                for &r in rows {
                    counts[y[r]] += 1.0;
                }
                let total: f64 = counts.iter().sum();
                for c in &mut counts {
                    *c /= total;
                }
                LeafValue::Classes(counts)
            }
            TreeTarget::Values(y) => {
                let sum: f64 = rows.iter().map(|&r| y[r]).sum();
                LeafValue::Value(sum / rows.len() as f64)
            }
        }
    }

    fn candidate_features(&self, rng: &mut impl Rng) -> Vec<usize> {
        let mtry = self.settings.mtry;
        if mtry == 0 || mtry >= self.n_features {
            return (0..self.n_features).collect();
        }
        let mut all: Vec<usize> = (0..self.n_features).collect();
        all.shuffle(rng);
        let mut picked = all[..mtry].to_vec();
        picked.sort_unstable();
        picked
    }

    fn best_split(&self, rows: &[usize], candidates: &[usize]) -> Option<BestSplit> {
        let mut best: Option<BestSplit> = None;
        for &feature in candidates {
            let found = match self.target {
                TreeTarget::Classes { y, n_classes } => {
                    self.scan_gini(rows, feature, y, *n_classes)
                }
                TreeTarget::Values(y) => self.scan_variance(rows, feature, y),
            };
            if let Some(split) = found {
                let better = match &best {
                    None => true,
                    Some(b) => split.decrease > b.decrease + 1e-15,
                };
                if better {
                    best = Some(split);
                }
            }
        }
        best
    }

    fn scan_gini(
        &self,
        rows: &[usize],
        feature: usize,
        y: &[usize],
        n_classes: usize,
    ) -> Option<BestSplit> {
        let n = rows.len();
        let mut ordered: Vec<(f64, usize)> = rows.iter().map(|&r| (self.x[r][feature], y[r])).collect();
        ordered.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

        let mut total = vec![0.0f64; n_classes];
        for &(_, c) in &ordered {
            total[c] += 1.0;
        }
        let nf = n as f64;
        let parent = 1.0 - total.iter().map(|c| (c / nf) * (c / nf)).sum::<f64>();

        let mut left = vec![0.0f64; n_classes];
        let mut best: Option<BestSplit> = None;
        for i in 0..n - 1 {
            left[ordered[i].1] += 1.0;
            if ordered[i].0 == ordered[i + 1].0 {
                continue;
            }
            let nl = (i + 1) as f64;
            let nr = nf - nl;
            if (nl as usize) < self.settings.min_leaf || (nr as usize) < self.settings.min_leaf {
                continue;
            }
            let mut gini_l = 1.0;
            let mut gini_r = 1.0;
            for (c, l) in left.iter().enumerate() {
                let r = total[c] - l;
                gini_l -= (l / nl) * (l / nl);
                gini_r -= (r / nr) * (r / nr);
            }
            let decrease = parent - (nl * gini_l + nr * gini_r) / nf;
            if decrease > 1e-12 && best.as_ref().is_none_or(|b| decrease > b.decrease + 1e-15) {
                best = Some(BestSplit {
                    feature,
                    threshold: 0.5 * (ordered[i].0 + ordered[i + 1].0),
                    decrease,
                });
            }
        }
        best
    }

    fn scan_variance(&self, rows: &[usize], feature: usize, y: &[f64]) -> Option<BestSplit> {
        let n = rows.len();
        let mut ordered: Vec<(f64, f64)> = rows.iter().map(|&r| (self.x[r][feature], y[r])).collect();
        ordered.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

        let nf = n as f64;
        let total_sum: f64 = ordered.iter().map(|&(_, t)| t).sum();
        let total_sq: f64 = ordered.iter().map(|&(_, t)| t * t).sum();
        let parent = total_sq / nf - (total_sum / nf) * (total_sum / nf);

        let mut left_sum = 0.0;
        let mut left_sq = 0.0;
        let mut best: Option<BestSplit> = None;
        for i in 0..n - 1 {
            left_sum += ordered[i].1;
            left_sq += ordered[i].1 * ordered[i].1;
            if ordered[i].0 == ordered[i + 1].0 {
                continue;
            }
            let nl = (i + 1) as f64;
            let nr = nf - nl;
            if (nl as usize) < self.settings.min_leaf || (nr as usize) < self.settings.min_leaf {
                continue;
            }
            let var_l = left_sq / nl - (left_sum / nl) * (left_sum / nl);
            let right_sum = total_sum - left_sum;
            let right_sq = total_sq - left_sq;
            let var_r = right_sq / nr - (right_sum / nr) * (right_sum / nr);
            let decrease = parent - (nl * var_l + nr * var_r) / nf;
            if decrease > 1e-12 && best.as_ref().is_none_or(|b| decrease > b.decrease + 1e-15) {
                best = Some(BestSplit {
                    feature,
                    threshold: 0.5 * (ordered[i].0 + ordered[i + 1].0),
                    decrease,
                });
            }
        }
        best
    }
}
