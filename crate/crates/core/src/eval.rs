//! Train/test splitting, regression metrics, repeated k-fold
//! cross-validation and grid search over the SVR penalty `C`.
//!
//! Every shuffle draws from a [`Xoshiro256PlusPlus`] generator seeded with
//! `seed_from_u64(seed)`, so results are a pure function of the inputs and
//! the seed.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Panel;
use crate::svm::{train_svr, Kernel, KernelMachine, SvmProblem};

pub const DEFAULT_C_GRID: [f64; 10] = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 3.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvSpec {
    pub folds: usize,
    pub repeats: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub rmse: f64,
    pub mae: f64,
    /// Absent when the observed values are constant.
    pub r_squared: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub mean_rmse: f64,
    pub sd_rmse: f64,
    /// Validation RMSE per fold, repeat-major.
    pub fold_rmse: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub c: f64,
    pub mean_rmse: f64,
    pub sd_rmse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneResult {
    /// Sorted by ascending `c`.
    pub grid: Vec<GridPoint>,
    pub best_c: f64,
}

impl TuneResult {
    pub fn best(&self) -> &GridPoint {
        self.grid
            .iter()
            .find(|g| g.c == self.best_c)
            .expect("best_c is a grid point")
    }
}

/// A split that keeps the original row indices of each side, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Panel,
    pub test: Panel,
    pub train_rows: Vec<usize>,
    pub test_rows: Vec<usize>,
}

/// Shuffles the rows and puts the first `ceil(fraction * n)` in the
/// training set. Both sides keep chronological order.
pub fn split(panel: &Panel, spec: &SplitSpec) -> Result<Split> {
    let f = spec.train_fraction;
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::BadFraction(f));
    }
    let n = panel.n_rows();
    if n < 3 {
        return Err(Error::TooShort { needed: 3, got: n });
    }
    let n_train = (f * n as f64).ceil() as usize;
    if n_train >= n {
        return Err(Error::BadFraction(f));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut Xoshiro256PlusPlus::seed_from_u64(spec.seed));
    let mut train_rows = order[..n_train].to_vec();
    let mut test_rows = order[n_train..].to_vec();
    train_rows.sort_unstable();
    test_rows.sort_unstable();
    Ok(Split {
        train: panel.select_rows(&train_rows)?,
        test: panel.select_rows(&test_rows)?,
        train_rows,
        test_rows,
    })
}

pub fn compute_metrics(y: &[f64], yhat: &[f64]) -> Result<Metrics> {
    if y.len() != yhat.len() {
        return Err(Error::ShapeError(format!(
            "{} observations for {} predictions",
            y.len(),
            yhat.len()
        )));
    }
    if y.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let n = y.len() as f64;
    let sse: f64 = y.iter().zip(yhat).map(|(a, b)| (a - b).powi(2)).sum();
    let sae: f64 = y.iter().zip(yhat).map(|(a, b)| (a - b).abs()).sum();
    let mean = y.iter().sum::<f64>() / n;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    Ok(Metrics {
        rmse: (sse / n).sqrt(),
        mae: sae / n,
        r_squared: (sst > 0.0).then(|| 1.0 - sse / sst),
    })
}

/// Validation row sets for every repeat and fold. The generator is seeded
/// once and reshuffles the rows at the start of each repeat; the first
/// `n % folds` folds receive one extra row.
pub fn fold_assignments(n: usize, spec: &CvSpec) -> Result<Vec<Vec<Vec<usize>>>> {
    if spec.folds < 2 {
        return Err(Error::Config(format!(
            "folds must be at least 2, got {}",
            spec.folds
        )));
    }
    if spec.repeats < 1 {
        return Err(Error::Config("repeats must be at least 1".into()));
    }
    if spec.folds > n {
        return Err(Error::TooFewRows {
            folds: spec.folds,
            rows: n,
        });
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(spec.seed);
    let base = n / spec.folds;
    let extra = n % spec.folds;
    let mut out = Vec::with_capacity(spec.repeats);
    for _ in 0..spec.repeats {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut folds = Vec::with_capacity(spec.folds);
        let mut start = 0;
        for k in 0..spec.folds {
            let size = base + usize::from(k < extra);
            folds.push(order[start..start + size].to_vec());
            start += size;
        }
        out.push(folds);
    }
    Ok(out)
}

struct Data {
    x: Vec<Vec<f64>>,
    y: Vec<f64>,
}

impl Data {
    fn of(panel: &Panel) -> Result<Self> {
        let x = panel.feature_rows();
        if x.first().is_none_or(|r| r.is_empty()) {
            return Err(Error::Schema("panel has no predictor columns".into()));
        }
        Ok(Self {
            x,
            y: panel.target().to_vec(),
        })
    }
}

fn fold_rmse(
    data: &Data,
    validation: &[usize],
    c: f64,
    kernel: Kernel,
    epsilon: f64,
) -> Result<f64> {
    let mut held_out = vec![false; data.y.len()];
    for &i in validation {
        held_out[i] = true;
    }
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for i in (0..data.y.len()).filter(|&i| !held_out[i]) {
        x.push(data.x[i].clone());
        y.push(data.y[i]);
    }
    let model = train_svr(&SvmProblem::new(x, y, c, epsilon)?, kernel)?;
    let mut obs = Vec::with_capacity(validation.len());
    let mut pred = Vec::with_capacity(validation.len());
    for &i in validation {
        obs.push(data.y[i]);
        pred.push(model.decision(&data.x[i])?);
    }
    Ok(compute_metrics(&obs, &pred)?.rmse)
}

fn summarise(fold_rmse: Vec<f64>) -> CvResult {
    let n = fold_rmse.len() as f64;
    let mean_rmse = fold_rmse.iter().sum::<f64>() / n;
    let var = fold_rmse
        .iter()
        .map(|r| (r - mean_rmse).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    CvResult {
        mean_rmse,
        sd_rmse: var.sqrt(),
        fold_rmse,
    }
}

fn cv_with(
    data: &Data,
    folds: &[Vec<Vec<usize>>],
    c: f64,
    kernel: Kernel,
    epsilon: f64,
) -> Result<CvResult> {
    let scores = folds
        .iter()
        .flatten()
        .map(|v| fold_rmse(data, v, c, kernel, epsilon))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarise(scores))
}

/// Repeated k-fold cross-validated RMSE of an SVR on the panel's target.
/// The reported SD is the sample SD over all folds of all repeats.
pub fn cross_validate(
    panel: &Panel,
    c: f64,
    kernel: Kernel,
    epsilon: f64,
    spec: &CvSpec,
) -> Result<CvResult> {
    let data = Data::of(panel)?;
    let folds = fold_assignments(data.y.len(), spec)?;
    cv_with(&data, &folds, c, kernel, epsilon)
}

/// Cross-validates every grid value on the same folds. Grid points are
/// evaluated on separate threads; each score depends only on its own `c`.
pub fn tune_c(
    panel: &Panel,
    grid: &[f64],
    kernel: Kernel,
    epsilon: f64,
    spec: &CvSpec,
) -> Result<TuneResult> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(&bad) = grid.iter().find(|&&c| !(c > 0.0 && c.is_finite())) {
        return Err(Error::BadC(bad));
    }
    let mut values = grid.to_vec();
    values.sort_by(f64::total_cmp);
    values.dedup();

    let data = Data::of(panel)?;
    let folds = fold_assignments(data.y.len(), spec)?;
    let scores: Vec<Result<CvResult>> = std::thread::scope(|s| {
        let handles: Vec<_> = values
            .iter()
            .map(|&c| {
                let (data, folds) = (&data, &folds);
                s.spawn(move || cv_with(data, folds, c, kernel, epsilon))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("grid worker panicked"))
            .collect()
    });

    let mut points = Vec::with_capacity(values.len());
    for (c, r) in values.iter().zip(scores) {
        let r = r?;
        points.push(GridPoint {
            c: *c,
            mean_rmse: r.mean_rmse,
            sd_rmse: r.sd_rmse,
        });
    }
    let best = points.iter().fold(&points[0], |best, p| {
        if p.mean_rmse < best.mean_rmse {
            p
        } else {
            best
        }
    });
    Ok(TuneResult {
        best_c: best.c,
        grid: points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Column;

    fn panel(n: usize) -> Panel {
        let years: Vec<i32> = (0..n as i32).map(|i| 2000 + i).collect();
        let x: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let z: Vec<f64> = (0..n).map(|i| ((i * 7) % 5) as f64 / 5.0).collect();
        let y: Vec<f64> = x.iter().zip(&z).map(|(a, b)| 2.0 * a - b + 0.3).collect();
        Panel::new(
            years,
            vec![
                Column::new("y", y),
                Column::new("x", x),
                Column::new("z", z),
            ],
            "y",
        )
        .unwrap()
    }

    #[test]
    fn split_counts_and_partition() {
        let p = panel(10);
        let s = split(
            &p,
            &SplitSpec {
                train_fraction: 0.7,
                seed: 3,
            },
        )
        .unwrap();
        assert_eq!(s.train.n_rows(), 7);
        assert_eq!(s.test.n_rows(), 3);
        let mut all: Vec<usize> = s.train_rows.iter().chain(&s.test_rows).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        let again = split(
            &p,
            &SplitSpec {
                train_fraction: 0.7,
                seed: 3,
            },
        )
        .unwrap();
        assert_eq!(again.train_rows, s.train_rows);
        for (&row, &year) in s.test_rows.iter().zip(s.test.years()) {
            assert_eq!(year, p.years()[row]);
        }
    }

    #[test]
    fn split_rejects_bad_fractions() {
        let p = panel(10);
        for f in [0.0, 1.0, -0.2, 1.5, f64::NAN, 0.95] {
            let r = split(
                &p,
                &SplitSpec {
                    train_fraction: f,
                    seed: 1,
                },
            );
            assert!(matches!(r, Err(Error::BadFraction(_))), "{f}");
        }
    }

    #[test]
    fn metric_examples() {
        let m = compute_metrics(&[1.0, 2.0, 4.0], &[1.0, 2.0, 4.0]).unwrap();
        assert_eq!((m.rmse, m.mae, m.r_squared), (0.0, 0.0, Some(1.0)));
        let m = compute_metrics(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!((m.rmse, m.mae, m.r_squared), (1.0, 1.0, None));
        let y = [1.0, 2.0, 6.0];
        let m = compute_metrics(&y, &[3.0; 3]).unwrap();
        assert!(m.r_squared.unwrap().abs() < 1e-15);
        assert!(matches!(
            compute_metrics(&[1.0], &[1.0, 2.0]),
            Err(Error::ShapeError(_))
        ));
    }

    #[test]
    fn folds_are_balanced_partitions() {
        let spec = CvSpec {
            folds: 4,
            repeats: 3,
            seed: 9,
        };
        let all = fold_assignments(10, &spec).unwrap();
        for repeat in &all {
            let sizes: Vec<usize> = repeat.iter().map(Vec::len).collect();
            assert_eq!(sizes, vec![3, 3, 2, 2]);
            let mut rows: Vec<usize> = repeat.iter().flatten().copied().collect();
            rows.sort_unstable();
            assert_eq!(rows, (0..10).collect::<Vec<_>>());
        }
        assert_ne!(all[0], all[1]);
        assert!(matches!(
            fold_assignments(
                3,
                &CvSpec {
                    folds: 4,
                    repeats: 1,
                    seed: 0
                }
            ),
            Err(Error::TooFewRows { folds: 4, rows: 3 })
        ));
    }

    #[test]
    fn leave_one_out_is_finite_and_repeatable() {
        let p = panel(5);
        let spec = CvSpec {
            folds: 5,
            repeats: 2,
            seed: 4,
        };
        let a = cross_validate(&p, 1.0, Kernel::Linear, 0.1, &spec).unwrap();
        let b = cross_validate(&p, 1.0, Kernel::Linear, 0.1, &spec).unwrap();
        assert!(a.mean_rmse.is_finite() && a.sd_rmse.is_finite());
        assert_eq!(a.mean_rmse.to_bits(), b.mean_rmse.to_bits());
        assert_eq!(a.sd_rmse.to_bits(), b.sd_rmse.to_bits());
    }

    #[test]
    fn exact_linear_target_is_interpolated() {
        let p = panel(20);
        let spec = CvSpec {
            folds: 5,
            repeats: 2,
            seed: 1,
        };
        let r = cross_validate(&p, 1e4, Kernel::Linear, 0.0, &spec).unwrap();
        assert!(r.mean_rmse <= 1e-6, "{}", r.mean_rmse);
    }

    #[test]
    fn tuning_grid_rules() {
        let p = panel(12);
        let spec = CvSpec {
            folds: 3,
            repeats: 2,
            seed: 5,
        };
        let one = tune_c(&p, &[0.8], Kernel::Linear, 0.1, &spec).unwrap();
        assert_eq!(one.best_c, 0.8);
        assert_eq!(one.grid.len(), 1);

        let a = tune_c(&p, &[2.0, 0.5, 1.0], Kernel::Linear, 0.1, &spec).unwrap();
        let b = tune_c(&p, &[1.0, 2.0, 0.5, 1.0], Kernel::Linear, 0.1, &spec).unwrap();
        assert_eq!(a, b);
        let min = a
            .grid
            .iter()
            .map(|g| g.mean_rmse)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(a.best().mean_rmse, min);
        assert!(a.grid.windows(2).all(|w| w[0].c < w[1].c));

        assert_eq!(
            tune_c(&p, &[], Kernel::Linear, 0.1, &spec),
            Err(Error::EmptyGrid)
        );
        assert_eq!(
            tune_c(&p, &[1.0, -1.0], Kernel::Linear, 0.1, &spec),
            Err(Error::BadC(-1.0))
        );
    }

    #[test]
    fn ties_go_to_the_smallest_c() {
        // Very large tubes make every model the constant bias, so all grid
        // points score the same.
        let p = panel(9);
        let spec = CvSpec {
            folds: 3,
            repeats: 1,
            seed: 2,
        };
        let r = tune_c(&p, &[3.0, 1.0, 2.0], Kernel::Linear, 100.0, &spec).unwrap();
        assert_eq!(r.grid[0].mean_rmse, r.grid[2].mean_rmse);
        assert_eq!(r.best_c, 1.0);
    }
}
