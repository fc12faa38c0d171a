//! Kernel machines trained in the dual: soft-margin classification and
//! epsilon-insensitive regression, both solved by [`smo`].
//!
//! A trained model is a kernel expansion
//! `f(x) = sum_i coef_i k(x_i, x) + b` over its support vectors, with
//! `coef_i = alpha_i y_i` for classification and `alpha_i - alpha_i*` for
//! regression.

mod dump;
mod kernel;
pub mod smo;

use serde::{Deserialize, Serialize};

pub use dump::{read_model, write_model, DumpedModel, ModelKind};
pub use kernel::{kernel_eval, kernel_matrix, Kernel};
pub use smo::SmoParams;

use crate::error::{Error, Result};
use smo::DualQp;

/// Coefficients with magnitude at or below this are not support vectors.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// Training data and regularisation for one dual problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmProblem {
    x: Vec<Vec<f64>>,
    y: Vec<f64>,
    c: f64,
    epsilon: f64,
}

impl SvmProblem {
    pub fn new(x: Vec<Vec<f64>>, y: Vec<f64>, c: f64, epsilon: f64) -> Result<Self> {
        if x.len() < 2 {
            return Err(Error::TooShort {
                needed: 2,
                got: x.len(),
            });
        }
        if x.len() != y.len() {
            return Err(Error::ShapeError(format!(
                "{} feature rows for {} targets",
                x.len(),
                y.len()
            )));
        }
        let dim = x[0].len();
        if x.iter().any(|r| r.len() != dim) {
            return Err(Error::ShapeError("feature rows differ in dimension".into()));
        }
        if x.iter().flatten().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidValue("training data must be finite".into()));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::BadC(c));
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::Config(format!(
                "epsilon must be non-negative, got {epsilon}"
            )));
        }
        Ok(Self { x, y, c, epsilon })
    }

    pub fn x(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.x[0].len()
    }

    fn check_labels(&self) -> Result<()> {
        if let Some(&bad) = self.y.iter().find(|&&v| v != 1.0 && v != -1.0) {
            return Err(Error::BadLabel(bad));
        }
        if !(self.y.contains(&1.0) && self.y.contains(&-1.0)) {
            return Err(Error::DegenerateLabels);
        }
        Ok(())
    }
}

/// Support vectors, their coefficients and the bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelExpansion {
    pub kernel: Kernel,
    pub support_vectors: Vec<Vec<f64>>,
    /// Row of each support vector in the training problem.
    pub support_indices: Vec<usize>,
    pub dual_coefficients: Vec<f64>,
    pub bias: f64,
    /// Feature dimension the model was trained on.
    pub dim: usize,
}

impl KernelExpansion {
    fn from_coefficients(kernel: Kernel, prob: &SvmProblem, coef: &[f64], bias: f64) -> Self {
        let mut out = Self {
            kernel,
            support_vectors: Vec::new(),
            support_indices: Vec::new(),
            dual_coefficients: Vec::new(),
            bias,
            dim: prob.dim(),
        };
        for (i, &a) in coef.iter().enumerate() {
            if a.abs() > SUPPORT_THRESHOLD {
                out.support_vectors.push(prob.x[i].clone());
                out.support_indices.push(i);
                out.dual_coefficients.push(a);
            }
        }
        out
    }

    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::ShapeError(format!(
                "model expects {} features, got {}",
                self.dim,
                x.len()
            )));
        }
        Ok(self.decision_unchecked(x))
    }

    fn decision_unchecked(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.dual_coefficients)
            .map(|(sv, &a)| a * self.kernel.eval_unchecked(sv, x))
            .sum::<f64>()
            + self.bias
    }

    /// Coefficient of every training row, zero for non-support vectors.
    pub fn dense_coefficients(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (&i, &a) in self.support_indices.iter().zip(&self.dual_coefficients) {
            out[i] = a;
        }
        out
    }

    pub fn n_support(&self) -> usize {
        self.support_vectors.len()
    }
}

/// Soft-margin binary classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvcModel {
    pub expansion: KernelExpansion,
    pub c: f64,
    pub updates: usize,
}

/// Epsilon-insensitive support vector regressor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvrModel {
    pub expansion: KernelExpansion,
    pub c: f64,
    pub epsilon: f64,
    pub updates: usize,
}

/// Common surface of the trained models.
pub trait KernelMachine {
    fn expansion(&self) -> &KernelExpansion;

    /// Maximum violation of the dual KKT conditions over `prob`: box and
    /// equality feasibility plus per-point complementarity measured with
    /// the model's own bias.
    fn kkt_residual(&self, prob: &SvmProblem) -> f64;

    /// Dual objective in maximisation form.
    fn dual_objective(&self, prob: &SvmProblem) -> f64;

    fn decision(&self, x: &[f64]) -> Result<f64> {
        self.expansion().decision(x)
    }
}

impl SvcModel {
    /// Class label, with a zero decision value mapped to `+1`.
    pub fn predict_class(&self, x: &[f64]) -> Result<f64> {
        Ok(if self.decision(x)? >= 0.0 { 1.0 } else { -1.0 })
    }

    /// Multipliers `alpha_i` for every training row.
    pub fn alphas(&self, prob: &SvmProblem) -> Vec<f64> {
        self.expansion
            .dense_coefficients(prob.len())
            .iter()
            .zip(prob.y())
            .map(|(a, y)| a * y)
            .collect()
    }
}

impl KernelMachine for SvcModel {
    fn expansion(&self) -> &KernelExpansion {
        &self.expansion
    }

    fn kkt_residual(&self, prob: &SvmProblem) -> f64 {
        let alpha = self.alphas(prob);
        let c = prob.c();
        let mut worst = alpha
            .iter()
            .zip(prob.y())
            .map(|(a, y)| a * y)
            .sum::<f64>()
            .abs();
        for (i, &a) in alpha.iter().enumerate() {
            worst = worst.max(-a).max(a - c);
            let margin = prob.y()[i] * self.expansion.decision_unchecked(&prob.x()[i]);
            let v = if a <= SUPPORT_THRESHOLD {
                (1.0 - margin).max(0.0)
            } else if a >= c - SUPPORT_THRESHOLD {
                (margin - 1.0).max(0.0)
            } else {
                (margin - 1.0).abs()
            };
            worst = worst.max(v);
        }
        worst
    }

    fn dual_objective(&self, prob: &SvmProblem) -> f64 {
        let alpha = self.alphas(prob);
        let coef = self.expansion.dense_coefficients(prob.len());
        let k = kernel_matrix(&self.expansion.kernel, prob.x());
        let n = prob.len();
        let quad: f64 = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| coef[i] * coef[j] * k[i * n + j])
                    .sum::<f64>()
            })
            .sum();
        alpha.iter().sum::<f64>() - 0.5 * quad
    }
}

impl KernelMachine for SvrModel {
    fn expansion(&self) -> &KernelExpansion {
        &self.expansion
    }

    fn kkt_residual(&self, prob: &SvmProblem) -> f64 {
        let beta = self.expansion.dense_coefficients(prob.len());
        let (c, eps) = (prob.c(), prob.epsilon());
        let mut worst = beta.iter().sum::<f64>().abs();
        for (i, &b) in beta.iter().enumerate() {
            worst = worst.max(b.abs() - c);
            let r = prob.y()[i] - self.expansion.decision_unchecked(&prob.x()[i]);
            let v = if b.abs() <= SUPPORT_THRESHOLD {
                (r.abs() - eps).max(0.0)
            } else if b >= c - SUPPORT_THRESHOLD {
                (eps - r).max(0.0)
            } else if b > 0.0 {
                (r - eps).abs()
            } else if b <= -c + SUPPORT_THRESHOLD {
                (r + eps).max(0.0)
            } else {
                (r + eps).abs()
            };
            worst = worst.max(v);
        }
        worst
    }

    fn dual_objective(&self, prob: &SvmProblem) -> f64 {
        let beta = self.expansion.dense_coefficients(prob.len());
        let k = kernel_matrix(&self.expansion.kernel, prob.x());
        let n = prob.len();
        let quad: f64 = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| beta[i] * beta[j] * k[i * n + j])
                    .sum::<f64>()
            })
            .sum();
        let linear: f64 = beta
            .iter()
            .zip(prob.y())
            .map(|(b, y)| prob.epsilon() * b.abs() - y * b)
            .sum();
        -(0.5 * quad + linear)
    }
}

pub fn train_svc(prob: &SvmProblem, kernel: Kernel) -> Result<SvcModel> {
    train_svc_with(prob, kernel, &SmoParams::default())
}

pub fn train_svc_with(prob: &SvmProblem, kernel: Kernel, params: &SmoParams) -> Result<SvcModel> {
    prob.check_labels()?;
    let n = prob.len();
    let k = kernel_matrix(&kernel, prob.x());
    let qp = DualQp {
        kernel: &k,
        n_points: n,
        index: (0..n).collect(),
        z: prob.y().to_vec(),
        p: vec![-1.0; n],
        c: prob.c(),
    };
    let sol = qp.solve(params)?;
    let coef: Vec<f64> = sol.alpha.iter().zip(prob.y()).map(|(a, y)| a * y).collect();
    Ok(SvcModel {
        expansion: KernelExpansion::from_coefficients(kernel, prob, &coef, sol.bias),
        c: prob.c(),
        updates: sol.updates,
    })
}

pub fn train_svr(prob: &SvmProblem, kernel: Kernel) -> Result<SvrModel> {
    train_svr_with(prob, kernel, &SmoParams::default())
}

/// Solves the epsilon-SVR dual over `(alpha, alpha*)` stacked as `2n`
/// variables with signs `+1` then `-1`.
pub fn train_svr_with(prob: &SvmProblem, kernel: Kernel, params: &SmoParams) -> Result<SvrModel> {
    let n = prob.len();
    let k = kernel_matrix(&kernel, prob.x());
    let eps = prob.epsilon();
    let mut z = vec![1.0; n];
    z.extend(std::iter::repeat_n(-1.0, n));
    let mut p: Vec<f64> = prob.y().iter().map(|y| eps - y).collect();
    p.extend(prob.y().iter().map(|y| eps + y));
    let qp = DualQp {
        kernel: &k,
        n_points: n,
        index: (0..n).chain(0..n).collect(),
        z,
        p,
        c: prob.c(),
    };
    let sol = qp.solve(params)?;
    let beta: Vec<f64> = (0..n).map(|i| sol.alpha[i] - sol.alpha[n + i]).collect();
    Ok(SvrModel {
        expansion: KernelExpansion::from_coefficients(kernel, prob, &beta, sol.bias),
        c: prob.c(),
        epsilon: eps,
        updates: sol.updates,
    })
}

/// `f(x)` for any trained model.
pub fn decision<M: KernelMachine>(model: &M, x: &[f64]) -> Result<f64> {
    model.decision(x)
}

pub fn kkt_residual<M: KernelMachine>(model: &M, prob: &SvmProblem) -> f64 {
    model.kkt_residual(prob)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point_svc() -> (SvmProblem, SvcModel) {
        let prob = SvmProblem::new(vec![vec![-1.0], vec![1.0]], vec![-1.0, 1.0], 1.0, 0.0).unwrap();
        let model = train_svc(&prob, Kernel::Linear).unwrap();
        (prob, model)
    }

    #[test]
    fn two_point_classifier_hand_solution() {
        let (prob, model) = two_point_svc();
        let alpha = model.alphas(&prob);
        assert!((alpha[0] - 0.5).abs() < 1e-8 && (alpha[1] - 0.5).abs() < 1e-8);
        assert!(model.expansion.bias.abs() < 1e-8);
        for x in [-2.0, -0.3, 0.5, 1.7] {
            assert!((model.decision(&[x]).unwrap() - x).abs() < 1e-8);
        }
        assert!((model.dual_objective(&prob) - 0.5).abs() < 1e-12);
        assert!(model.kkt_residual(&prob) <= 1e-6);
    }

    #[test]
    fn two_point_regression_interpolates() {
        let prob = SvmProblem::new(vec![vec![0.0], vec![2.0]], vec![0.0, 2.0], 1e6, 0.0).unwrap();
        let model = train_svr(&prob, Kernel::Linear).unwrap();
        for x in [-1.0, 0.0, 1.0, 2.0, 3.5] {
            assert!((model.decision(&[x]).unwrap() - x).abs() < 1e-6);
        }
    }

    #[test]
    fn flat_targets_have_no_support_vectors() {
        let x: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let prob = SvmProblem::new(x, vec![3.0; 6], 1.0, 0.1).unwrap();
        let model = train_svr(&prob, Kernel::rbf(2.0).unwrap()).unwrap();
        assert_eq!(model.expansion.n_support(), 0);
        assert!((model.expansion.bias - 3.0).abs() <= 0.1);
        assert_eq!(model.decision(&[10.0, -4.0]).unwrap(), model.expansion.bias);
    }

    #[test]
    fn label_errors() {
        let prob = SvmProblem::new(vec![vec![0.0], vec![1.0]], vec![1.0, 1.0], 1.0, 0.0).unwrap();
        assert_eq!(
            train_svc(&prob, Kernel::Linear).unwrap_err(),
            Error::DegenerateLabels
        );
        let prob = SvmProblem::new(vec![vec![0.0], vec![1.0]], vec![1.0, 0.0], 1.0, 0.0).unwrap();
        assert_eq!(
            train_svc(&prob, Kernel::Linear).unwrap_err(),
            Error::BadLabel(0.0)
        );
    }

    #[test]
    fn problem_validation() {
        assert!(matches!(
            SvmProblem::new(vec![vec![0.0]], vec![1.0], 1.0, 0.0),
            Err(Error::TooShort { .. })
        ));
        assert_eq!(
            SvmProblem::new(vec![vec![0.0], vec![1.0]], vec![1.0, -1.0], 0.0, 0.0).unwrap_err(),
            Error::BadC(0.0)
        );
        assert!(
            SvmProblem::new(vec![vec![0.0], vec![1.0, 2.0]], vec![1.0, -1.0], 1.0, 0.0).is_err()
        );
    }

    #[test]
    fn perturbed_model_violates_kkt() {
        let (prob, mut model) = two_point_svc();
        model.expansion.dual_coefficients[0] += 0.1;
        assert!(model.kkt_residual(&prob) > 1e-3);
    }

    #[test]
    fn zero_model_violates_kkt_on_varied_targets() {
        let prob = SvmProblem::new(
            vec![vec![0.0], vec![1.0], vec![2.0]],
            vec![0.0, 1.0, 5.0],
            1.0,
            0.1,
        )
        .unwrap();
        let mut model = train_svr(&prob, Kernel::Linear).unwrap();
        model.expansion.support_vectors.clear();
        model.expansion.support_indices.clear();
        model.expansion.dual_coefficients.clear();
        assert!(model.kkt_residual(&prob) > 0.0);
    }

    #[test]
    fn decision_sum_over_support_vectors_matches_full_sum() {
        let x: Vec<Vec<f64>> = (0..8)
            .map(|i| vec![(i as f64 * 0.7).sin(), i as f64 / 8.0])
            .collect();
        let y: Vec<f64> = (0..8)
            .map(|i| if i % 3 == 0 { 1.0 } else { -1.0 })
            .collect();
        let prob = SvmProblem::new(x, y, 1.0, 0.0).unwrap();
        let model = train_svc(&prob, Kernel::rbf(0.5).unwrap()).unwrap();
        let dense = model.expansion.dense_coefficients(prob.len());
        let probe = [0.2, 0.4];
        let full: f64 = prob
            .x()
            .iter()
            .zip(&dense)
            .map(|(xi, a)| a * model.expansion.kernel.eval(xi, &probe).unwrap())
            .sum::<f64>()
            + model.expansion.bias;
        assert!((full - model.decision(&probe).unwrap()).abs() < 1e-12);
        assert!(matches!(model.decision(&[1.0]), Err(Error::ShapeError(_))));
        assert_eq!(
            model.predict_class(&probe).unwrap(),
            model.decision(&probe).unwrap().signum()
        );
    }

    #[test]
    fn sign_of_zero_decision_is_positive() {
        let (_, mut model) = two_point_svc();
        model.expansion.bias = 0.0;
        assert_eq!(model.predict_class(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn iteration_cap_reports_no_convergence() {
        let x: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64]).collect();
        let y: Vec<f64> = (0..6).map(|i| (i as f64).powi(2)).collect();
        let prob = SvmProblem::new(x, y, 10.0, 0.0).unwrap();
        let params = SmoParams {
            tolerance: 1e-12,
            max_updates_per_point: 0,
        };
        assert!(matches!(
            train_svr_with(&prob, Kernel::Linear, &params),
            Err(Error::NoConvergence { .. })
        ));
    }
}
