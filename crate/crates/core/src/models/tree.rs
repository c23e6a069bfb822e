use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf {
        score: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// CART classifier with Gini impurity.
///
/// A node is split whenever it is impure, the depth limit allows it and at
/// least one feature takes two distinct values; the split minimising the
/// weighted child impurity wins, earlier features and thresholds on ties.
/// Thresholds are midpoints between consecutive distinct values.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    width: usize,
}

fn gini(pos: f64, n: f64) -> f64 {
    let p = pos / n;
    2.0 * p * (1.0 - p)
}

struct Builder<'a> {
    x: &'a Matrix,
    y: &'a [u8],
    max_depth: Option<usize>,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn best_split(&self, idx: &[usize]) -> Option<(usize, f64)> {
        let n = idx.len() as f64;
        let mut best: Option<(usize, f64)> = None;
        let mut best_impurity = f64::INFINITY;
        let mut sorted = idx.to_vec();
        let total_pos = idx.iter().filter(|&&i| self.y[i] == 1).count() as f64;
        for f in 0..self.x.cols() {
            sorted.sort_by(|&a, &b| {
                self.x
                    .get(a, f)
                    .total_cmp(&self.x.get(b, f))
                    .then(a.cmp(&b))
            });
            let mut left_pos = 0.0;
            for p in 1..sorted.len() {
                left_pos += f64::from(self.y[sorted[p - 1]]);
                let lo = self.x.get(sorted[p - 1], f);
                let hi = self.x.get(sorted[p], f);
                if lo >= hi {
                    continue;
                }
                let nl = p as f64;
                let nr = n - nl;
                let impurity = (nl * gini(left_pos, nl) + nr * gini(total_pos - left_pos, nr)) / n;
                if impurity < best_impurity - 1e-12 {
                    best_impurity = impurity;
                    let mid = lo + (hi - lo) / 2.0;
                    best = Some((f, if mid < hi { mid } else { lo }));
                }
            }
        }
        best
    }

    fn build(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let pos = idx.iter().filter(|&&i| self.y[i] == 1).count();
        let score = pos as f64 / idx.len() as f64;
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { score });
        let pure = pos == 0 || pos == idx.len();
        if pure || self.max_depth.is_some_and(|d| depth >= d) {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&idx) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = idx
            .into_iter()
            .partition(|&i| self.x.get(i, feature) <= threshold);
        let left = self.build(l, depth + 1);
        let right = self.build(r, depth + 1);
        self.nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }
}

impl DecisionTree {
    pub fn fit(x: &Matrix, y: &[u8], max_depth: Option<usize>) -> Self {
        let mut b = Builder {
            x,
            y,
            max_depth,
            nodes: Vec::new(),
        };
        b.build((0..x.rows()).collect(), 0);
        DecisionTree {
            nodes: b.nodes,
            width: x.cols(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Positive fraction of the leaf reached by `row`.
    pub fn score(&self, row: &[f64]) -> f64 {
        let mut id = 0;
        loop {
            match self.nodes[id] {
                Node::Leaf { score } => return score,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    id = if row[feature] <= threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], id: usize) -> usize {
            match nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> (Matrix, Vec<u8>) {
        let x = Matrix::from_row_vecs(&[
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
        ]);
        (x, vec![0, 1, 1, 0])
    }

    fn accuracy(t: &DecisionTree, x: &Matrix, y: &[u8]) -> f64 {
        (0..x.rows())
            .filter(|&i| u8::from(t.score(x.row(i)) >= 0.5) == y[i])
            .count() as f64
            / y.len() as f64
    }

    #[test]
    fn stump_cannot_learn_xor() {
        let (x, y) = xor();
        let t = DecisionTree::fit(&x, &y, Some(1));
        assert_eq!(t.depth(), 1);
        assert_eq!(accuracy(&t, &x, &y), 0.5);
    }

    #[test]
    fn unlimited_tree_fits_xor() {
        let (x, y) = xor();
        let t = DecisionTree::fit(&x, &y, None);
        assert_eq!(accuracy(&t, &x, &y), 1.0);
        assert_eq!(t.depth(), 2);
    }

    #[test]
    fn pure_leaf_scores_one() {
        let x = Matrix::from_row_vecs(&[vec![0.0], vec![1.0], vec![2.0]]);
        let t = DecisionTree::fit(&x, &[1, 1, 1], None);
        assert_eq!(t.depth(), 0);
        assert_eq!(t.score(&[5.0]), 1.0);
    }

    #[test]
    fn midpoint_threshold() {
        let x = Matrix::from_row_vecs(&[vec![1.0], vec![3.0]]);
        let t = DecisionTree::fit(&x, &[0, 1], None);
        assert_eq!(t.score(&[1.9]), 0.0);
        assert_eq!(t.score(&[2.1]), 1.0);
    }

    #[test]
    fn duplicate_points_with_mixed_labels_stay_a_leaf() {
        let x = Matrix::from_row_vecs(&[vec![1.0], vec![1.0], vec![1.0]]);
        let t = DecisionTree::fit(&x, &[0, 1, 1], None);
        assert_eq!(t.depth(), 0);
        assert!((t.score(&[1.0]) - 2.0 / 3.0).abs() < 1e-15);
    }
}
