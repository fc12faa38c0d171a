//! Sequential minimal optimisation for the box-and-equality constrained
//! quadratic program shared by the classification and regression duals:
//!
//! ```text
//! min_a  1/2 a' Q a + p' a   s.t.  z' a = 0,  0 <= a_t <= C,
//! Q_st = z_s z_t K(s, t),   z_t in {-1, +1}
//! ```
//!
//! Each step updates the maximal violating pair: `i` maximises `-z_t G_t`
//! over the variables that may move up along `z_t`, `j` minimises it over the
//! variables that may move down. The step stops when the gap between the two
//! drops below the tolerance, which is the first-order optimality condition
//! of the QP.

use crate::error::{Error, Result};

/// Curvature used when the pair direction is flat (duplicate points, or an
/// `alpha`/`alpha*` pair of the same regression point).
const TAU: f64 = 1e-12;

/// Solver controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoParams {
    /// Stop when the maximal violating pair gap is at most this.
    pub tolerance: f64,
    /// Pair-update cap, multiplied by the number of training points.
    pub max_updates_per_point: usize,
}

impl Default for SmoParams {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            max_updates_per_point: 10_000,
        }
    }
}

/// Dual QP over `m` variables whose Gram entries come from an `n x n`
/// kernel matrix via `index[t]`.
pub(crate) struct DualQp<'a> {
    pub kernel: &'a [f64],
    pub n_points: usize,
    pub index: Vec<usize>,
    pub z: Vec<f64>,
    pub p: Vec<f64>,
    pub c: f64,
}

pub(crate) struct DualSolution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub updates: usize,
}

impl DualQp<'_> {
    fn k(&self, s: usize, t: usize) -> f64 {
        self.kernel[self.index[s] * self.n_points + self.index[t]]
    }

    fn can_increase(&self, a: f64, z: f64) -> bool {
        if z > 0.0 {
            a < self.c
        } else {
            a > 0.0
        }
    }

    fn can_decrease(&self, a: f64, z: f64) -> bool {
        if z > 0.0 {
            a > 0.0
        } else {
            a < self.c
        }
    }

    /// Extreme `-z G` values over the up and down sets with their indices.
    fn violating_pair(
        &self,
        alpha: &[f64],
        grad: &[f64],
    ) -> (Option<(usize, f64)>, Option<(usize, f64)>) {
        let mut up: Option<(usize, f64)> = None;
        let mut low: Option<(usize, f64)> = None;
        for t in 0..alpha.len() {
            let v = -self.z[t] * grad[t];
            if self.can_increase(alpha[t], self.z[t]) && up.is_none_or(|(_, best)| v > best) {
                up = Some((t, v));
            }
            if self.can_decrease(alpha[t], self.z[t]) && low.is_none_or(|(_, best)| v < best) {
                low = Some((t, v));
            }
        }
        (up, low)
    }

    pub fn solve(&self, params: &SmoParams) -> Result<DualSolution> {
        let m = self.z.len();
        let mut alpha = vec![0.0; m];
        let mut grad = self.p.clone();
        let cap = params.max_updates_per_point.saturating_mul(self.n_points);
        let mut updates = 0;

        loop {
            let (up, low) = self.violating_pair(&alpha, &grad);
            let (Some((i, g_max)), Some((j, g_min))) = (up, low) else {
                break;
            };
            let gap = g_max - g_min;
            if gap <= params.tolerance {
                break;
            }
            if updates >= cap {
                return Err(Error::NoConvergence {
                    iterations: updates,
                    gap,
                });
            }

            let eta = (self.k(i, i) + self.k(j, j) - 2.0 * self.k(i, j)).max(TAU);
            let limit_i = if self.z[i] > 0.0 {
                self.c - alpha[i]
            } else {
                alpha[i]
            };
            let limit_j = if self.z[j] > 0.0 {
                alpha[j]
            } else {
                self.c - alpha[j]
            };
            let step = (gap / eta).min(limit_i).min(limit_j);

            let old_i = alpha[i];
            let old_j = alpha[j];
            alpha[i] = if step == limit_i {
                if self.z[i] > 0.0 {
                    self.c
                } else {
                    0.0
                }
            } else {
                (old_i + self.z[i] * step).clamp(0.0, self.c)
            };
            alpha[j] = if step == limit_j {
                if self.z[j] > 0.0 {
                    0.0
                } else {
                    self.c
                }
            } else {
                (old_j - self.z[j] * step).clamp(0.0, self.c)
            };
            let di = alpha[i] - old_i;
            let dj = alpha[j] - old_j;
            for (t, g) in grad.iter_mut().enumerate() {
                let zt = self.z[t];
                *g += zt * (self.z[i] * self.k(t, i) * di + self.z[j] * self.k(t, j) * dj);
            }
            updates += 1;
        }

        let bias = self.bias(&alpha, &grad);
        Ok(DualSolution {
            alpha,
            bias,
            updates,
        })
    }

    /// Average of `-z G` over free variables, or the midpoint of the feasible
    /// interval when every variable sits at a bound.
    fn bias(&self, alpha: &[f64], grad: &[f64]) -> f64 {
        let (mut sum, mut count) = (0.0, 0usize);
        for t in 0..alpha.len() {
            if alpha[t] > 0.0 && alpha[t] < self.c {
                sum += -self.z[t] * grad[t];
                count += 1;
            }
        }
        if count > 0 {
            return sum / count as f64;
        }
        match self.violating_pair(alpha, grad) {
            (Some((_, hi)), Some((_, lo))) => 0.5 * (hi + lo),
            (Some((_, v)), None) | (None, Some((_, v))) => v,
            (None, None) => 0.0,
        }
    }
}
