//! Dense projected-gradient solver for the SVM duals, used as an oracle
//! against the SMO implementation. It shares no code with the library.

/// `min 1/2 a'Qa + p'a  s.t.  z'a = 0, 0 <= a <= c`.
pub struct BoxQp {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub z: Vec<f64>,
    pub c: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl BoxQp {
    pub fn dim(&self) -> usize {
        self.p.len()
    }

    fn qa(&self, a: &[f64]) -> Vec<f64> {
        let m = self.dim();
        (0..m)
            .map(|i| dot(&self.q[i * m..(i + 1) * m], a))
            .collect()
    }

    pub fn objective(&self, a: &[f64]) -> f64 {
        0.5 * dot(a, &self.qa(a)) + dot(&self.p, a)
    }

    fn gradient(&self, a: &[f64]) -> Vec<f64> {
        self.qa(a).iter().zip(&self.p).map(|(x, y)| x + y).collect()
    }

    /// Euclidean projection onto the box intersected with `z'a = 0`, by
    /// bisection on the multiplier of the equality constraint.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let c = self.c;
        let at = |nu: f64| -> Vec<f64> {
            v.iter()
                .zip(&self.z)
                .map(|(vi, zi)| (vi - nu * zi).clamp(0.0, c))
                .collect()
        };
        let g = |nu: f64| dot(&self.z, &at(nu));
        let span = v.iter().fold(0.0_f64, |m, x| m.max(x.abs())) + c + 1.0;
        let (mut lo, mut hi) = (-span, span);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        at(0.5 * (lo + hi))
    }

    fn lipschitz(&self) -> f64 {
        let m = self.dim();
        (0..m)
            .map(|i| {
                self.q[i * m..(i + 1) * m]
                    .iter()
                    .map(|v| v.abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
            .max(1e-12)
    }

    /// Accelerated projected gradient with adaptive restart. Returns the
    /// minimiser estimate and its objective.
    pub fn solve(&self) -> (Vec<f64>, f64) {
        let m = self.dim();
        let step = 1.0 / self.lipschitz();
        let mut x = self.project(&vec![0.0; m]);
        let mut y = x.clone();
        let mut t = 1.0_f64;
        let mut fx = self.objective(&x);
        let mut checkpoint = fx;
        for it in 1..=200_000 {
            let g = self.gradient(&y);
            let trial: Vec<f64> = y.iter().zip(&g).map(|(a, b)| a - step * b).collect();
            let next = self.project(&trial);
            let f_next = self.objective(&next);
            let moved = next
                .iter()
                .zip(&y)
                .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
            if f_next > fx && t > 1.0 {
                // Restart momentum.
                y = x.clone();
                t = 1.0;
                continue;
            }
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let beta = (t - 1.0) / t_next;
            y = next
                .iter()
                .zip(&x)
                .map(|(a, b)| a + beta * (a - b))
                .collect();
            x = next;
            fx = f_next;
            t = t_next;
            if moved < 1e-12 {
                break;
            }
            if it % 2000 == 0 {
                if checkpoint - fx < 1e-14 {
                    break;
                }
                checkpoint = fx;
            }
        }
        (x, fx)
    }
}

pub fn linear_kernel(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b)
}

pub fn rbf_kernel(a: &[f64], b: &[f64], sigma_squared: f64) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    (-d2 / sigma_squared).exp()
}

/// Classification dual: `Q = yy' * K`, `p = -1`.
pub fn svc_qp(k: &dyn Fn(&[f64], &[f64]) -> f64, x: &[Vec<f64>], y: &[f64], c: f64) -> BoxQp {
    let n = x.len();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            q[i * n + j] = y[i] * y[j] * k(&x[i], &x[j]);
        }
    }
    BoxQp {
        q,
        p: vec![-1.0; n],
        z: y.to_vec(),
        c,
    }
}

/// Regression dual over `(alpha, alpha*)`:
/// `Q = [K -K; -K K]`, `p = [eps - y; eps + y]`, `z = [1; -1]`.
pub fn svr_qp(
    k: &dyn Fn(&[f64], &[f64]) -> f64,
    x: &[Vec<f64>],
    y: &[f64],
    c: f64,
    eps: f64,
) -> BoxQp {
    let n = x.len();
    let m = 2 * n;
    let mut q = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let s = if (i < n) == (j < n) { 1.0 } else { -1.0 };
            q[i * m + j] = s * k(&x[i % n], &x[j % n]);
        }
    }
    let mut p: Vec<f64> = y.iter().map(|v| eps - v).collect();
    p.extend(y.iter().map(|v| eps + v));
    let mut z = vec![1.0; n];
    z.extend(vec![-1.0; n]);
    BoxQp { q, p, z, c }
}
