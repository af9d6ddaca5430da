//! Replicated experiments and their aggregates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{EnsembleConfig, Family};
use crate::error::{Result, SimError};
use crate::sample::{sample_matrix, two_point_scaled_moments};
use crate::spectrum::{covariance, empirical_moments, histogram, power_sums, psd_eigenvalues, Histogram};

/// Relative agreement required between trace powers and eigenvalue power sums.
pub const POWER_SUM_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSample {
    pub replicate_id: u64,
    pub seed_used: u64,
    /// Sorted, clamped at zero.
    pub eigenvalues: Vec<f64>,
    /// `(1/p) Tr(S^k)` for `k = 1..=K`.
    pub empirical_moments: Vec<f64>,
    /// `(1/n) sum x^2 1{|x| > t_n}`.
    pub truncation_mass: f64,
    /// `(1/p) sum y^2` over the truncated entries.
    pub second_moment: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentStat {
    pub k: usize,
    pub mean: f64,
    /// Standard error of the mean; `NaN` for a single replicate.
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: EnsembleConfig,
    pub samples: Vec<SpectralSample>,
    pub moments: Vec<MomentStat>,
    pub histogram: Histogram,
    /// For the two-point family: the realized `n E[x^(2k)]`, keyed by `2k`.
    pub achieved_scaled_moments: Option<Vec<(usize, f64)>>,
}

impl ExperimentReport {
    pub fn moment(&self, k: usize) -> Option<&MomentStat> {
        self.moments.iter().find(|m| m.k == k)
    }

    pub fn moments_csv(&self) -> String {
        let mut s = String::from("k,mean,stderr\n");
        for m in &self.moments {
            s.push_str(&format!("{},{:.16e},{:.16e}\n", m.k, m.mean, m.stderr));
        }
        s
    }

    pub fn diagnostics_csv(&self) -> String {
        let mut s = String::from("replicate,seed,truncation_mass,second_moment\n");
        for r in &self.samples {
            s.push_str(&format!(
                "{},{},{:.16e},{:.16e}\n",
                r.replicate_id, r.seed_used, r.truncation_mass, r.second_moment
            ));
        }
        s
    }
}

pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// One replicate: sample, form `S`, and check its spectral contracts.
pub fn run_replicate(cfg: &EnsembleConfig, replicate: u64) -> Result<SpectralSample> {
    let sampled = sample_matrix(cfg, replicate)?;
    let s = covariance(&sampled.x);
    let moments = empirical_moments(&s, cfg.max_moment)?;
    let eigenvalues = psd_eigenvalues(&s)?;
    let sums = power_sums(&eigenvalues, cfg.max_moment);
    for (k, (a, b)) in moments.iter().zip(&sums).enumerate() {
        let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        // clamping tiny negative eigenvalues perturbs sums at roundoff level
        let slack = 1e-12 * eigenvalues.last().copied().unwrap_or(0.0).powi(k as i32 + 1);
        if (a - b).abs() > POWER_SUM_TOLERANCE * scale + slack {
            return Err(SimError::Numerical(format!(
                "replicate {replicate}: trace power {} = {a:e} but eigenvalue power sum = {b:e}",
                k + 1
            )));
        }
    }
    let second_moment = sampled.x.iter().map(|v| v * v).sum::<f64>() / cfg.p as f64;
    Ok(SpectralSample {
        replicate_id: replicate,
        seed_used: cfg.seed,
        eigenvalues,
        empirical_moments: moments,
        truncation_mass: sampled.truncation_mass,
        second_moment,
    })
}

/// Runs every replicate (in parallel on the current rayon pool) and
/// aggregates in replicate order, so results do not depend on scheduling.
pub fn run_experiment(cfg: &EnsembleConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let mut samples: Vec<SpectralSample> = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| run_replicate(cfg, r))
        .collect::<Result<Vec<_>>>()?;
    samples.sort_by_key(|s| s.replicate_id);
    let moments = (1..=cfg.max_moment)
        .map(|k| {
            let vals: Vec<f64> = samples.iter().map(|s| s.empirical_moments[k - 1]).collect();
            let (mean, stderr) = mean_and_stderr(&vals);
            MomentStat { k, mean, stderr }
        })
        .collect();
    let pooled: Vec<f64> = samples.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect();
    let histogram = histogram(&pooled, &cfg.histogram)?;
    let achieved_scaled_moments = match &cfg.family {
        Family::TriangularIid { c2, c4 } => Some(two_point_scaled_moments(*c2, *c4, cfg.max_moment)),
        Family::VarianceProfile { base, .. } => match **base {
            Family::TriangularIid { c2, c4 } => Some(two_point_scaled_moments(c2, c4, cfg.max_moment)),
            _ => None,
        },
        _ => None,
    };
    Ok(ExperimentReport {
        config: cfg.clone(),
        samples,
        moments,
        histogram,
        achieved_scaled_moments,
    })
}

/// A gnuplot script plotting `hist.csv` as boxes.
pub fn gnuplot_script(hist_csv: &str, title: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key off\n\
         set title '{}'\n\
         set xlabel 'eigenvalue'\n\
         set ylabel 'count'\n\
         set style fill solid 0.5\n\
         plot '{}' every ::1 using (($1+$2)/2):3:($2-$1) with boxes\n",
        title.replace('\'', ""),
        hist_csv
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stderr_of_constant_is_zero() {
        assert_eq!(mean_and_stderr(&[2.0, 2.0, 2.0]), (2.0, 0.0));
        assert!(mean_and_stderr(&[1.0]).1.is_nan());
    }

    #[test]
    fn small_experiment() {
        let cfg = EnsembleConfig::new(Family::IidStandardized, 20, 40)
            .with_replicates(3)
            .with_seed(5);
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.samples.len(), 3);
        assert_eq!(r.histogram.total(), 60);
        assert_eq!(r.moments.len(), 4);
        assert!(r.moments_csv().starts_with("k,mean,stderr\n1,"));
        assert_eq!(r.diagnostics_csv().lines().count(), 4);
    }
}
