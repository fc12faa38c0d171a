use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kernel function of a support vector machine.
///
/// The Gaussian kernel is `exp(-||a - b||^2 / sigma_squared)`. There is no
/// factor of two in the denominator, so `sigma_squared` here equals `2 s^2`
/// for libraries that write the kernel as `exp(-||a - b||^2 / (2 s^2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Kernel {
    Linear,
    Rbf { sigma_squared: f64 },
}

impl Kernel {
    pub fn rbf(sigma_squared: f64) -> Result<Self> {
        if !(sigma_squared > 0.0) || !sigma_squared.is_finite() {
            return Err(Error::Config(format!(
                "rbf sigma_squared must be positive, got {sigma_squared}"
            )));
        }
        Ok(Kernel::Rbf { sigma_squared })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Linear => "linear",
            Kernel::Rbf { .. } => "rbf",
        }
    }

    /// Evaluates the kernel, checking that the dimensions agree.
    pub fn eval(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        if a.len() != b.len() {
            return Err(Error::ShapeError(format!(
                "kernel arguments have dimensions {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(self.eval_unchecked(a, b))
    }

    pub(crate) fn eval_unchecked(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            Kernel::Rbf { sigma_squared } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-d2 / sigma_squared).exp()
            }
        }
    }
}

pub fn kernel_eval(k: &Kernel, a: &[f64], b: &[f64]) -> Result<f64> {
    k.eval(a, b)
}

/// Gram matrix of `x`, row-major `n x n`.
pub fn kernel_matrix(k: &Kernel, x: &[Vec<f64>]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = k.eval_unchecked(&x[i], &x[j]);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        let rbf = Kernel::rbf(2.0).unwrap();
        assert_eq!(rbf.eval(&[0.3, -1.0], &[0.3, -1.0]).unwrap(), 1.0);
        // ||a - b||^2 = 2 = sigma^2.
        let v = rbf.eval(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((v - (-1.0_f64).exp()).abs() < 1e-15);
        assert!((v - 0.3678794).abs() < 1e-7);
        assert_eq!(Kernel::Linear.eval(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 11.0);
    }

    #[test]
    fn errors() {
        assert!(Kernel::rbf(0.0).is_err());
        assert!(Kernel::rbf(-1.0).is_err());
        assert!(matches!(
            Kernel::Linear.eval(&[1.0], &[1.0, 2.0]),
            Err(Error::ShapeError(_))
        ));
    }

    #[test]
    fn gram_matrix_symmetric_unit_diagonal() {
        let x = vec![vec![0.1, 2.0], vec![-1.0, 0.5], vec![3.0, 3.0]];
        let k = kernel_matrix(&Kernel::rbf(1.5).unwrap(), &x);
        for i in 0..3 {
            assert_eq!(k[i * 3 + i], 1.0);
            for j in 0..3 {
                assert_eq!(k[i * 3 + j], k[j * 3 + i]);
            }
        }
    }
}
