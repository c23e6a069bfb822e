use nalgebra::{DMatrix, DVector};

use super::{ModelError, Result};
use crate::matrix::Matrix;

const GRAD_TOL: f64 = 1e-6;
const MAX_ITER: usize = 100;
const RIDGE: f64 = 1e-10;

/// L2-penalised logistic regression fitted by damped Newton steps.
///
/// Minimises `Σ log(1 + exp(-s·z)) + ‖w‖² / (2C)` with an unpenalised
/// intercept; `C = 0` means no penalty. Iterates until the gradient norm is at
/// most 1e-6 or the iteration cap is hit (separable data without a penalty
/// never converges; the weights are then simply large).
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticRegression {
    weights: Vec<f64>,
    intercept: f64,
    /// Set when training saw a single class.
    constant: Option<f64>,
    iterations: usize,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(z))` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

struct Problem<'a> {
    x: &'a Matrix,
    y: &'a [u8],
    penalty: f64,
}

impl Problem<'_> {
    fn linear(&self, theta: &DVector<f64>, i: usize) -> f64 {
        let d = self.x.cols();
        theta[d]
            + self
                .x
                .row(i)
                .iter()
                .zip(theta.iter())
                .map(|(a, b)| a * b)
                .sum::<f64>()
    }

    fn objective(&self, theta: &DVector<f64>) -> f64 {
        let d = self.x.cols();
        let loss: f64 = (0..self.x.rows())
            .map(|i| {
                let z = self.linear(theta, i);
                if self.y[i] == 1 {
                    softplus(-z)
                } else {
                    softplus(z)
                }
            })
            .sum();
        loss + 0.5 * self.penalty * theta.rows(0, d).norm_squared()
    }

    fn gradient_hessian(&self, theta: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let d = self.x.cols();
        let mut g = DVector::zeros(d + 1);
        let mut h = DMatrix::zeros(d + 1, d + 1);
        let mut row = DVector::zeros(d + 1);
        for i in 0..self.x.rows() {
            row.rows_mut(0, d).copy_from_slice(self.x.row(i));
            row[d] = 1.0;
            let p = sigmoid(self.linear(theta, i));
            g.axpy(p - f64::from(self.y[i]), &row, 1.0);
            h.ger(p * (1.0 - p), &row, &row, 1.0);
        }
        for j in 0..d {
            g[j] += self.penalty * theta[j];
            h[(j, j)] += self.penalty;
        }
        (g, h)
    }
}

impl LogisticRegression {
    pub fn fit(x: &Matrix, y: &[u8], c: f64) -> Result<Self> {
        let d = x.cols();
        let pos = y.iter().filter(|&&v| v == 1).count();
        if pos == 0 || pos == y.len() {
            return Ok(LogisticRegression {
                weights: vec![0.0; d],
                intercept: 0.0,
                constant: Some(if pos == 0 { 0.0 } else { 1.0 }),
                iterations: 0,
            });
        }
        let penalty = if c > 0.0 { 1.0 / c } else { 0.0 };
        let problem = Problem { x, y, penalty };
        let mut theta = DVector::zeros(d + 1);
        let mut f = problem.objective(&theta);
        let mut iterations = 0;
        while iterations < MAX_ITER {
            let (g, mut h) = problem.gradient_hessian(&theta);
            if g.norm() <= GRAD_TOL {
                break;
            }
            iterations += 1;
            for j in 0..=d {
                h[(j, j)] += RIDGE;
            }
            let step = match h.cholesky() {
                Some(ch) => ch.solve(&g),
                None => g.clone(),
            };
            let slope = g.dot(&step);
            let mut t = 1.0;
            let mut accepted = false;
            while t > 1e-12 {
                let candidate = &theta - t * &step;
                let fc = problem.objective(&candidate);
                if fc <= f - 1e-4 * t * slope {
                    theta = candidate;
                    f = fc;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if !theta.iter().all(|v| v.is_finite()) {
            return Err(ModelError::SingularFit(
                "logistic regression weights overflowed".into(),
            ));
        }
        Ok(LogisticRegression {
            weights: theta.rows(0, d).iter().copied().collect(),
            intercept: theta[d],
            constant: None,
            iterations,
        })
    }

    pub fn width(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn score(&self, row: &[f64]) -> f64 {
        if let Some(c) = self.constant {
            return c;
        }
        sigmoid(
            self.intercept
                + self
                    .weights
                    .iter()
                    .zip(row)
                    .map(|(w, x)| w * x)
                    .sum::<f64>(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_one_dimensional() {
        let x = Matrix::from_row_vecs(&[
            vec![-2.0],
            vec![-1.0],
            vec![-0.5],
            vec![0.5],
            vec![1.0],
            vec![2.0],
        ]);
        let y = [0, 0, 0, 1, 1, 1];
        let m = LogisticRegression::fit(&x, &y, 1.0).unwrap();
        for i in 0..6 {
            assert_eq!(u8::from(m.score(x.row(i)) >= 0.5), y[i]);
        }
    }

    #[test]
    fn gradient_vanishes_at_solution() {
        // Independent check of stationarity: X^T(p - y) + w/C = 0 and Σ(p - y) = 0.
        let x = Matrix::from_row_vecs(&[
            vec![0.3, 1.0],
            vec![-1.2, 0.4],
            vec![0.8, -0.7],
            vec![1.5, 0.2],
            vec![-0.4, -1.1],
            vec![0.1, 0.9],
        ]);
        let y = [1, 0, 1, 0, 0, 1];
        let c = 2.0;
        let m = LogisticRegression::fit(&x, &y, c).unwrap();
        let mut g = [0.0; 3];
        for i in 0..6 {
            let r = m.score(x.row(i)) - f64::from(y[i]);
            g[0] += r * x.get(i, 0);
            g[1] += r * x.get(i, 1);
            g[2] += r;
        }
        g[0] += m.weights()[0] / c;
        g[1] += m.weights()[1] / c;
        assert!(g.iter().all(|v| v.abs() < 1e-6), "{g:?}");
    }

    #[test]
    fn zero_weights_score_half() {
        let m = LogisticRegression {
            weights: vec![0.0; 2],
            intercept: 0.0,
            constant: None,
            iterations: 0,
        };
        assert_eq!(m.score(&[3.0, -1.0]), 0.5);
    }

    #[test]
    fn single_class_is_constant() {
        let x = Matrix::from_row_vecs(&[vec![1.0], vec![2.0]]);
        let m = LogisticRegression::fit(&x, &[1, 1], 1.0).unwrap();
        assert_eq!(m.score(&[-100.0]), 1.0);
    }

    #[test]
    fn unpenalised_separable_stays_finite() {
        let x = Matrix::from_row_vecs(&[vec![-1.0], vec![1.0]]);
        let m = LogisticRegression::fit(&x, &[0, 1], 0.0).unwrap();
        assert!(m.score(&[1.0]) > 0.99);
        assert!(m.weights()[0].is_finite());
    }
}
