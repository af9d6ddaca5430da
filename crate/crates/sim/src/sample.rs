//! Entry samplers and matrix construction.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::config::{EnsembleConfig, Family, Profile};
use crate::error::Result;

/// Generator for one replicate: ChaCha8 keyed by the experiment seed, with
/// the replicate index as the stream id. Entries are drawn in row-major order.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Tail constant `C_alpha` of a standard symmetric alpha-stable law:
/// `P(|X| > u) ~ C_alpha u^(-alpha)`.
pub fn stable_tail_constant(alpha: f64) -> f64 {
    if (alpha - 1.0).abs() < 1e-12 {
        2.0 / PI
    } else {
        (1.0 - alpha) / (statrs::function::gamma::gamma(2.0 - alpha) * (PI * alpha / 2.0).cos())
    }
}

/// `a_p` for the Pareto law with the stable tail: `P(|X| >= u) = C_alpha u^(-alpha)`.
pub fn stable_scale(alpha: f64, p: usize) -> f64 {
    (stable_tail_constant(alpha) * p as f64).powf(1.0 / alpha)
}

/// Chambers-Mallows-Stuck draw from the standard symmetric alpha-stable law
/// (characteristic function `exp(-|t|^alpha)`).
pub fn sample_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random_range(-FRAC_PI_2..FRAC_PI_2);
    if (alpha - 1.0).abs() < 1e-12 {
        return u.tan();
    }
    let w: f64 = Exp1.sample(rng);
    (alpha * u).sin() / u.cos().powf(1.0 / alpha)
        * ((u - alpha * u).cos() / w).powf((1.0 - alpha) / alpha)
}

enum Base {
    Gaussian { scale: f64 },
    Bernoulli { prob: f64 },
    TwoPoint { prob: f64, a: f64 },
    Stable { alpha: f64, a_p: f64, b: f64 },
}

impl Base {
    fn new(f: &Family, p: usize, n: usize) -> Base {
        let nf = n as f64;
        match *f {
            Family::IidStandardized | Family::DtTriangular => Base::Gaussian {
                scale: 1.0 / nf.sqrt(),
            },
            Family::SparseBernoulli { lambda } => Base::Bernoulli { prob: lambda / nf },
            Family::TriangularIid { c2, c4 } => Base::TwoPoint {
                prob: c2 * c2 / c4 / nf,
                a: (c4 / c2).sqrt(),
            },
            Family::HeavyTailStable { alpha, b } => Base::Stable {
                alpha,
                a_p: stable_scale(alpha, p),
                b,
            },
            Family::VarianceProfile { ref base, .. } => Base::new(base, p, n),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Base::Gaussian { scale } => {
                let z: f64 = StandardNormal.sample(rng);
                z * scale
            }
            Base::Bernoulli { prob } => {
                if rng.random::<f64>() < prob {
                    1.0
                } else {
                    0.0
                }
            }
            Base::TwoPoint { prob, a } => {
                let u: f64 = rng.random();
                if u < prob / 2.0 {
                    a
                } else if u < prob {
                    -a
                } else {
                    0.0
                }
            }
            Base::Stable { alpha, a_p, b } => {
                let x = sample_stable(alpha, rng) / a_p;
                if x.abs() <= b {
                    x
                } else {
                    0.0
                }
            }
        }
    }
}

/// A sampled `X` before and after truncation at `t_n`.
pub struct SampledMatrix {
    /// Entries `y_ij = x_ij 1{|x_ij| <= t_n}`.
    pub x: DMatrix<f64>,
    /// `(1/n) sum x_ij^2 1{|x_ij| > t_n}`.
    pub truncation_mass: f64,
}

/// Draws `X` for one replicate; deterministic in `(cfg.seed, replicate)`.
pub fn sample_matrix(cfg: &EnsembleConfig, replicate: u64) -> Result<SampledMatrix> {
    cfg.validate()?;
    let (p, n) = (cfg.p, cfg.n);
    let base = Base::new(&cfg.family, p, n);
    let profile = match &cfg.family {
        Family::VarianceProfile { profile, .. } => Some(profile.evaluator(p, n)?),
        Family::DtTriangular => Some(Profile::UpperTriangular.evaluator(p, n)?),
        _ => None,
    };
    let t_n = cfg.truncation.level(n);
    let mut rng = replicate_rng(cfg.seed, replicate);
    let mut x = DMatrix::<f64>::zeros(p, n);
    let mut cut = 0.0;
    for i in 0..p {
        for j in 0..n {
            let mut v = base.draw(&mut rng);
            if let Some(sigma) = &profile {
                v *= sigma(i + 1, j + 1);
            }
            if v.abs() > t_n {
                cut += v * v;
                v = 0.0;
            }
            x[(i, j)] = v;
        }
    }
    Ok(SampledMatrix {
        x,
        truncation_mass: cut / n as f64,
    })
}

/// `n E[x^(2k)]` of the two-point law realizing `(c2, c4)`, for `k = 1..=max_k`.
pub fn two_point_scaled_moments(c2: f64, c4: f64, max_k: usize) -> Vec<(usize, f64)> {
    let lambda = c2 * c2 / c4;
    let a2 = c4 / c2;
    (1..=max_k).map(|k| (2 * k, lambda * a2.powi(k as i32))).collect()
}
