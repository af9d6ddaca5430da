//! Trace powers, eigenvalues and histograms of `S = X X^T`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::config::HistogramSpec;
use crate::error::{Result, SimError};

/// Highest trace power computed from `S`, `S^2`, `S^3` and `S^4`.
pub const MAX_TRACE_POWER: usize = 8;

/// Upper bound on the number of histogram bins.
pub const MAX_BINS: usize = 10_000;

pub fn covariance(x: &DMatrix<f64>) -> DMatrix<f64> {
    x * x.transpose()
}

fn frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(u, v)| u * v).sum()
}

fn asymmetry(s: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..s.nrows() {
        for j in 0..i {
            worst = worst.max((s[(i, j)] - s[(j, i)]).abs());
        }
    }
    worst
}

fn check_symmetric(s: &DMatrix<f64>) -> Result<()> {
    if !s.is_square() {
        return Err(SimError::NotSymmetric(f64::INFINITY));
    }
    let scale = s.amax().max(1.0);
    let a = asymmetry(s);
    if a > 1e-10 * scale {
        return Err(SimError::NotSymmetric(a));
    }
    Ok(())
}

/// `(1/p) Tr(S^k)` for `k = 1..=max_k`, using `Tr(S^(a+b)) = <S^a, S^b>`
/// with `a, b <= 4`.
pub fn empirical_moments(s: &DMatrix<f64>, max_k: usize) -> Result<Vec<f64>> {
    if max_k > MAX_TRACE_POWER {
        return Err(SimError::CostGuard {
            what: "trace power K",
            requested: max_k,
            limit: MAX_TRACE_POWER,
        });
    }
    check_symmetric(s)?;
    let p = s.nrows() as f64;
    let mut powers = vec![s.clone()];
    let needed = max_k.div_ceil(2);
    while powers.len() < needed {
        let next = s * powers.last().expect("non-empty");
        powers.push(next);
    }
    let mut out = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let t = if k == 1 {
            s.trace()
        } else {
            let a = k / 2;
            frobenius(&powers[a - 1], &powers[k - a - 1])
        };
        out.push(t / p);
    }
    Ok(out)
}

/// Nondecreasing eigenvalues of a symmetric matrix.
pub fn eigenvalues(s: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(s)?;
    let mut v: Vec<f64> = SymmetricEigen::new(s.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Eigenpairs sorted by eigenvalue; columns of the matrix are the vectors.
pub fn eigenpairs(s: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    check_symmetric(s)?;
    let eig = SymmetricEigen::new(s.clone());
    let mut order: Vec<usize> = (0..s.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let cols: Vec<DVector<f64>> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    Ok((values, DMatrix::from_columns(&cols)))
}

/// Eigenvalues of a covariance matrix, asserted non-negative up to
/// `1e-9 * max(1, largest)` and then clamped at zero.
pub fn psd_eigenvalues(s: &DMatrix<f64>) -> Result<Vec<f64>> {
    let mut v = eigenvalues(s)?;
    let scale = v.last().copied().unwrap_or(0.0).abs().max(1.0);
    if let Some(&low) = v.first() {
        if low < -1e-9 * scale {
            return Err(SimError::Numerical(format!(
                "covariance matrix has eigenvalue {low:e} below zero"
            )));
        }
    }
    for x in v.iter_mut() {
        *x = x.max(0.0);
    }
    Ok(v)
}

/// `sum lambda^k / p` for `k = 1..=max_k`.
pub fn power_sums(eigs: &[f64], max_k: usize) -> Vec<f64> {
    let p = eigs.len() as f64;
    (1..=max_k)
        .map(|k| eigs.iter().map(|l| l.powi(k as i32)).sum::<f64>() / p)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `counts.len() + 1` increasing edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("left_edge,right_edge,count\n");
        for (i, c) in self.counts.iter().enumerate() {
            s.push_str(&format!("{:.16e},{:.16e},{}\n", self.edges[i], self.edges[i + 1], c));
        }
        s
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Freedman-Diaconis bin count `range / (2 IQR m^(-1/3))`, at least 1 and at
/// most [`MAX_BINS`]; falls back to `sqrt(m)` bins when the IQR vanishes.
pub fn freedman_diaconis_bins(sorted: &[f64]) -> usize {
    let m = sorted.len();
    if m < 2 {
        return 1;
    }
    let range = sorted[m - 1] - sorted[0];
    if range <= 0.0 {
        return 1;
    }
    let iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
    let bins = if iqr > 0.0 {
        (range / (2.0 * iqr * (m as f64).powf(-1.0 / 3.0))).ceil()
    } else {
        (m as f64).sqrt().ceil()
    };
    (bins as usize).clamp(1, MAX_BINS)
}

/// Pools `values` into bins. Values outside explicit edges are dropped;
/// every value lands in a bin otherwise (the last bin is closed).
pub fn histogram(values: &[f64], spec: &HistogramSpec) -> Result<Histogram> {
    let edges = match &spec.edges {
        Some(e) => {
            if e.len() < 2 || e.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(SimError::InvalidConfig(
                    "histogram edges must be strictly increasing".into(),
                ));
            }
            e.clone()
        }
        None => {
            let mut sorted = values.to_vec();
            sorted.sort_by(f64::total_cmp);
            let (lo, hi) = match (sorted.first(), sorted.last()) {
                (Some(&a), Some(&b)) => (a, b),
                _ => (0.0, 1.0),
            };
            let bins = match spec.bins {
                Some(b) if b > MAX_BINS => {
                    return Err(SimError::CostGuard {
                        what: "histogram bins",
                        requested: b,
                        limit: MAX_BINS,
                    })
                }
                Some(b) => b.max(1),
                None => freedman_diaconis_bins(&sorted),
            };
            let hi = if hi > lo { hi } else { lo + 1.0 };
            let w = (hi - lo) / bins as f64;
            let mut e: Vec<f64> = (0..bins).map(|i| lo + w * i as f64).collect();
            e.push(hi);
            e
        }
    };
    let nb = edges.len() - 1;
    let mut counts = vec![0u64; nb];
    let (lo, hi) = (edges[0], edges[nb]);
    for &v in values {
        if v < lo || v > hi || v.is_nan() {
            continue;
        }
        let idx = edges.partition_point(|&e| e <= v).saturating_sub(1).min(nb - 1);
        counts[idx] += 1;
    }
    Ok(Histogram { edges, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_small_matrices() {
        let id = DMatrix::<f64>::identity(3, 3);
        assert_eq!(empirical_moments(&id, 2).unwrap(), vec![1.0, 1.0]);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0]));
        assert_eq!(empirical_moments(&d, 2).unwrap(), vec![2.5, 8.5]);
        let x = DMatrix::from_element(2, 2, 1.0 / 2f64.sqrt());
        let s = covariance(&x);
        let m = empirical_moments(&s, 2).unwrap();
        assert!((m[0] - 1.0).abs() < 1e-15 && (m[1] - 2.0).abs() < 1e-14);
        let e = eigenvalues(&s).unwrap();
        assert!(e[0].abs() < 1e-14 && (e[1] - 2.0).abs() < 1e-14);
        assert!(empirical_moments(&id, 9).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 2.0]));
        assert_eq!(eigenvalues(&d).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(eigenvalues(&DMatrix::zeros(3, 3)).unwrap(), vec![0.0; 3]);
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let e = eigenvalues(&m).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eigenvalues(&asym), Err(SimError::NotSymmetric(_))));
    }

    #[test]
    fn histogram_binning() {
        let v = [0.0, 0.5, 1.0, 1.5, 2.0];
        let h = histogram(&v, &HistogramSpec { bins: Some(2), edges: None }).unwrap();
        assert_eq!(h.counts, vec![2, 3]);
        let h = histogram(
            &v,
            &HistogramSpec {
                bins: None,
                edges: Some(vec![0.25, 1.25, 1.75]),
            },
        )
        .unwrap();
        assert_eq!(h.counts, vec![2, 1]);
        let h = histogram(&[1.0; 4], &HistogramSpec::default()).unwrap();
        assert_eq!(h.total(), 4);
        assert_eq!(
            h.to_csv().lines().next(),
            Some("left_edge,right_edge,count")
        );
    }

    #[test]
    fn fd_rule() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64 / 999.0).collect();
        // IQR 0.5, width 2*0.5/10 = 0.1
        assert_eq!(freedman_diaconis_bins(&v), 10);
    }
}
