//! Pearson, Kendall tau-b and Spearman rank correlation tests.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::dist::{normal_two_sided, student_t_two_sided};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationMethod {
    Pearson,
    Kendall,
    Spearman,
}

/// Coefficient, test statistic and two-sided p-value of one correlation
/// test. The statistic is `t` for Pearson, `z` for Kendall and `S` for
/// Spearman.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub method: CorrelationMethod,
    pub coefficient: f64,
    #[serde(with = "crate::extended_float")]
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

fn check_inputs(x: &[f64], y: &[f64]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::ShapeError(format!(
            "inputs have lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: x.len(),
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidValue(
            "correlation inputs must be finite".into(),
        ));
    }
    Ok(x.len())
}

fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("x".into()));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("y".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// `r * sqrt((n - 2) / (1 - r^2))`, infinite for a perfect correlation.
pub fn t_from_r(r: f64, n: usize) -> f64 {
    let denom = 1.0 - r * r;
    if denom <= 0.0 {
        return f64::INFINITY.copysign(r);
    }
    r * ((n as f64 - 2.0) / denom).sqrt()
}

pub fn pearson_test(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    let n = check_inputs(x, y)?;
    let r = pearson_r(x, y)?;
    let t = t_from_r(r, n);
    Ok(CorrelationResult {
        method: CorrelationMethod::Pearson,
        coefficient: r,
        statistic: t,
        p_value: student_t_two_sided(t, (n - 2) as f64),
        n,
    })
}

/// Sizes of the groups of equal values in `v`.
fn tie_groups(v: &[f64]) -> Vec<usize> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut groups = Vec::new();
    let mut run = 1;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            if run > 1 {
                groups.push(run);
            }
            run = 1;
        }
    }
    if run > 1 {
        groups.push(run);
    }
    groups
}

pub fn kendall_test(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    let n = check_inputs(x, y)?;
    let mut s: i64 = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = x[i].partial_cmp(&x[j]).unwrap();
            let dy = y[i].partial_cmp(&y[j]).unwrap();
            match (dx, dy) {
                (Ordering::Equal, _) | (_, Ordering::Equal) => {}
                (a, b) if a == b => s += 1,
                _ => s -= 1,
            }
        }
    }

    let nf = n as f64;
    let n0 = nf * (nf - 1.0) / 2.0;
    let tx = tie_groups(x);
    let ty = tie_groups(y);
    let pair_ties = |g: &[usize]| -> f64 { g.iter().map(|&t| (t * (t - 1)) as f64 / 2.0).sum() };
    let (n1, n2) = (pair_ties(&tx), pair_ties(&ty));
    if n0 == n1 {
        return Err(Error::ZeroVariance("x".into()));
    }
    if n0 == n2 {
        return Err(Error::ZeroVariance("y".into()));
    }
    let sf = s as f64;
    let tau = (sf / ((n0 - n1) * (n0 - n2)).sqrt()).clamp(-1.0, 1.0);

    // Tie-adjusted variance of S under independence.
    let sum = |g: &[usize], f: &dyn Fn(f64) -> f64| g.iter().map(|&t| f(t as f64)).sum::<f64>();
    let v0 = nf * (nf - 1.0) * (2.0 * nf + 5.0);
    let vt = sum(&tx, &|t| t * (t - 1.0) * (2.0 * t + 5.0));
    let vu = sum(&ty, &|t| t * (t - 1.0) * (2.0 * t + 5.0));
    let t1 = sum(&tx, &|t| t * (t - 1.0));
    let u1 = sum(&ty, &|t| t * (t - 1.0));
    let t2 = sum(&tx, &|t| t * (t - 1.0) * (t - 2.0));
    let u2 = sum(&ty, &|t| t * (t - 1.0) * (t - 2.0));
    let var = (v0 - vt - vu) / 18.0
        + t1 * u1 / (2.0 * nf * (nf - 1.0))
        + t2 * u2 / (9.0 * nf * (nf - 1.0) * (nf - 2.0));
    let z = sf / var.sqrt();

    Ok(CorrelationResult {
        method: CorrelationMethod::Kendall,
        coefficient: tau,
        statistic: z,
        p_value: normal_two_sided(z),
        n,
    })
}

/// 1-based ranks, ties receiving the average of the ranks they span.
pub fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's rho as the Pearson correlation of average ranks.
///
/// The reported statistic is `S = (n^3 - n)(1 - rho) / 6`, which equals the
/// sum of squared rank differences when there are no ties and stays
/// consistent with rho when there are.
pub fn spearman_test(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    let n = check_inputs(x, y)?;
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let rho = pearson_r(&rx, &ry)?;
    let nf = n as f64;
    let s = (nf * nf * nf - nf) * (1.0 - rho) / 6.0;
    let t = t_from_r(rho, n);
    Ok(CorrelationResult {
        method: CorrelationMethod::Spearman,
        coefficient: rho,
        statistic: s,
        p_value: student_t_two_sided(t, (n - 2) as f64),
        n,
    })
}

/// Sum of squared differences between average ranks.
pub fn squared_rank_differences(x: &[f64], y: &[f64]) -> f64 {
    average_ranks(x)
        .iter()
        .zip(average_ranks(y))
        .map(|(a, b)| (a - b).powi(2))
        .sum()
}

/// All three tests on the same pair of series.
pub fn correlation_suite(x: &[f64], y: &[f64]) -> Result<[CorrelationResult; 3]> {
    Ok([
        pearson_test(x, y)?,
        kendall_test(x, y)?,
        spearman_test(x, y)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force tau-b from pair enumeration.
    fn tau_b_oracle(x: &[f64], y: &[f64]) -> f64 {
        let (mut c, mut d, mut tx, mut ty) = (0.0_f64, 0.0, 0.0, 0.0);
        for i in 0..x.len() {
            for j in 0..i {
                let a = (x[i] - x[j]).signum() * f64::from(x[i] != x[j]);
                let b = (y[i] - y[j]).signum() * f64::from(y[i] != y[j]);
                if a * b > 0.0 {
                    c += 1.0;
                } else if a * b < 0.0 {
                    d += 1.0;
                } else if a == 0.0 && b != 0.0 {
                    tx += 1.0;
                } else if b == 0.0 && a != 0.0 {
                    ty += 1.0;
                }
            }
        }
        (c - d) / ((c + d + tx) * (c + d + ty)).sqrt()
    }

    #[test]
    fn kendall_three_point_cases() {
        let x = [1.0, 2.0, 3.0];
        assert_eq!(kendall_test(&x, &[4.0, 5.0, 6.0]).unwrap().coefficient, 1.0);
        assert_eq!(
            kendall_test(&x, &[3.0, 2.0, 1.0]).unwrap().coefficient,
            -1.0
        );
        let tau = kendall_test(&x, &[1.0, 3.0, 2.0]).unwrap().coefficient;
        assert!((tau - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn kendall_with_ties_matches_enumeration() {
        let x = [1.0, 2.0, 2.0, 3.0, 4.0, 4.0, 5.0];
        let y = [2.0, 1.0, 3.0, 3.0, 5.0, 4.0, 4.0];
        let r = kendall_test(&x, &y).unwrap();
        assert!((r.coefficient - tau_b_oracle(&x, &y)).abs() < 1e-14);
        assert!(r.p_value > 0.0 && r.p_value < 1.0);
    }

    #[test]
    fn kendall_z_without_ties() {
        // No ties: var(S) = n(n-1)(2n+5)/18.
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y = [2.0, 1.0, 4.0, 3.0, 6.0, 5.0];
        let r = kendall_test(&x, &y).unwrap();
        let s = 15.0 - 2.0 * 3.0; // 3 discordant pairs
        let z = s / (6.0_f64 * 5.0 * 17.0 / 18.0).sqrt();
        assert!((r.statistic - z).abs() < 1e-12);
    }

    #[test]
    fn spearman_cases() {
        let x = [1.0, 2.0, 3.0];
        let same = spearman_test(&x, &[10.0, 20.0, 30.0]).unwrap();
        assert_eq!(same.coefficient, 1.0);
        assert_eq!(same.statistic, 0.0);
        let rev = spearman_test(&x, &[3.0, 2.0, 1.0]).unwrap();
        assert_eq!(rev.coefficient, -1.0);
        assert_eq!(rev.statistic, 8.0);
        assert_eq!(squared_rank_differences(&x, &[3.0, 2.0, 1.0]), 8.0);
    }

    #[test]
    fn average_ranks_ties() {
        assert_eq!(
            average_ranks(&[10.0, 20.0, 20.0, 5.0]),
            vec![2.0, 3.5, 3.5, 1.0]
        );
    }

    #[test]
    fn pearson_perfect_and_table_values() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let r = pearson_test(&x, &y).unwrap();
        assert_eq!(r.coefficient, 1.0);
        assert_eq!(r.p_value, 0.0);

        assert!((t_from_r(0.9168, 51) - 16.070).abs() < 1e-3);
        assert!((t_from_r(0.8423, 51) - 10.939).abs() < 1e-3);
        let p = student_t_two_sided(t_from_r(0.9168, 51), 49.0);
        assert!((p / 3.61e-21 - 1.0).abs() < 0.02, "p = {p:e}");
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            pearson_test(&[1.0, 2.0], &[1.0, 2.0]),
            Err(Error::TooShort { .. })
        ));
        assert!(matches!(
            pearson_test(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::ZeroVariance(_))
        ));
        assert!(matches!(
            kendall_test(&[1.0, 2.0], &[2.0, 1.0]),
            Err(Error::TooShort { .. })
        ));
        assert!(matches!(
            spearman_test(&[1.0, 2.0, 3.0], &[1.0, 2.0]),
            Err(Error::ShapeError(_))
        ));
    }
}
