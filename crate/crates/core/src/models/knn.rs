use crate::matrix::Matrix;

/// Euclidean k-nearest-neighbour classifier. Equidistant neighbours are
/// taken in training-row order.
#[derive(Debug, Clone, PartialEq)]
pub struct Knn {
    x: Matrix,
    y: Vec<u8>,
    k: usize,
}

impl Knn {
    pub fn fit(x: &Matrix, y: &[u8], k: usize) -> Self {
        Knn {
            x: x.clone(),
            y: y.to_vec(),
            k: k.clamp(1, x.rows().max(1)),
        }
    }

    pub fn width(&self) -> usize {
        self.x.cols()
    }

    /// Fraction of positive labels among the `k` nearest training rows.
    pub fn score(&self, row: &[f64]) -> f64 {
        let mut d: Vec<(f64, usize)> = (0..self.x.rows())
            .map(|i| {
                let dist: f64 = self
                    .x
                    .row(i)
                    .iter()
                    .zip(row)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (dist, i)
            })
            .collect();
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if self.k < d.len() {
            d.select_nth_unstable_by(self.k - 1, cmp);
        }
        let pos = d[..self.k].iter().filter(|(_, i)| self.y[*i] == 1).count();
        pos as f64 / self.k as f64
    }
}
