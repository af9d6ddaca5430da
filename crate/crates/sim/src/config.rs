//! Ensemble descriptions, deserializable from TOML or JSON.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sscov_core::surface::Surface;

use crate::error::{Result, SimError};

/// Largest `p` or `n` accepted; dense `p x p` products dominate the cost.
pub const MAX_DIMENSION: usize = 5000;

/// Entry law of `X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    /// Standard normal entries scaled by `1/sqrt(n)`.
    IidStandardized,
    /// `Ber(lambda/n)` entries, unscaled.
    SparseBernoulli { lambda: f64 },
    /// `+-a` with probability `lambda/n` (random sign), else `0`, where
    /// `a^2 = c4/c2` and `lambda = c2^2/c4` so that `n E x^2 = c2` and
    /// `n E x^4 = c4`.
    TriangularIid { c2: f64, c4: f64 },
    /// Symmetric alpha-stable entries divided by `a_p` and zeroed beyond `b`.
    HeavyTailStable { alpha: f64, b: f64 },
    /// `sigma(i, j) * base_ij`.
    VarianceProfile { profile: Profile, base: Box<Family> },
    /// Gaussian entries scaled by `1/sqrt(n)` on the cells `i/p <= j/n`.
    DtTriangular,
}

/// Variance profile evaluated at 1-based indices `(i, j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    Constant { value: f64 },
    /// `(i + j)^2 / (2 n^2)`.
    SquaredIndexSum,
    /// `sin(pi (i + j) / (2n))`.
    SineIndexSum,
    /// `1{i/p <= j/n}`.
    UpperTriangular,
    /// Piecewise-constant table over `(i/p, j/n)`.
    Grid { rows: Vec<Vec<f64>> },
    /// Same as `Grid`, read from a comma-separated file.
    GridCsv { path: PathBuf },
}

impl Profile {
    /// Loads file-backed grids so the profile can be evaluated.
    pub fn resolve(&self) -> Result<Profile> {
        match self {
            Profile::GridCsv { path } => {
                let text = std::fs::read_to_string(path).map_err(|source| SimError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                let rows = parse_grid_rows(&text)?;
                Ok(Profile::Grid { rows })
            }
            other => Ok(other.clone()),
        }
    }

    /// The profile as a function of `(i, j)` for fixed dimensions.
    pub fn evaluator(&self, p: usize, n: usize) -> Result<Box<dyn Fn(usize, usize) -> f64 + Send + Sync>> {
        let nf = n as f64;
        let pf = p as f64;
        Ok(match self.resolve()? {
            Profile::Constant { value } => Box::new(move |_, _| value),
            Profile::SquaredIndexSum => Box::new(move |i, j| {
                let s = (i + j) as f64;
                s * s / (2.0 * nf * nf)
            }),
            Profile::SineIndexSum => {
                Box::new(move |i, j| (std::f64::consts::PI * (i + j) as f64 / (2.0 * nf)).sin())
            }
            Profile::UpperTriangular => Box::new(move |i, j| {
                if (i as f64) / pf <= (j as f64) / nf {
                    1.0
                } else {
                    0.0
                }
            }),
            Profile::Grid { rows } => {
                let surface = Surface::from_table(rows)?;
                // cell midpoints so a table of size p x n maps one-to-one
                Box::new(move |i, j| surface.eval((i as f64 - 0.5) / pf, (j as f64 - 0.5) / nf))
            }
            Profile::GridCsv { .. } => unreachable!("resolved above"),
        })
    }
}

fn parse_grid_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| SimError::InvalidConfig(format!("grid line {}: {e}", lineno + 1)))?;
        rows.push(row);
    }
    Ok(rows)
}

/// Truncation level `t_n`: entries with `|x| > t_n` are set to zero.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "TruncationRepr", into = "TruncationRepr")]
pub enum Truncation {
    #[default]
    Infinite,
    Value(f64),
    /// `t_n = n^(-1/3)`.
    CubeRootRule,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TruncationRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<TruncationRepr> for Truncation {
    type Error = String;
    fn try_from(r: TruncationRepr) -> std::result::Result<Self, String> {
        match r {
            TruncationRepr::Number(v) if v.is_infinite() && v > 0.0 => Ok(Truncation::Infinite),
            TruncationRepr::Number(v) if v > 0.0 => Ok(Truncation::Value(v)),
            TruncationRepr::Number(v) => Err(format!("truncation level must be positive, got {v}")),
            TruncationRepr::Text(s) => s.parse(),
        }
    }
}

impl From<Truncation> for TruncationRepr {
    fn from(t: Truncation) -> Self {
        match t {
            Truncation::Value(v) => TruncationRepr::Number(v),
            other => TruncationRepr::Text(other.to_string()),
        }
    }
}

impl std::str::FromStr for Truncation {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "inf" | "infinity" | "∞" | "none" => Ok(Truncation::Infinite),
            "n^-1/3" | "n^(-1/3)" | "n^{-1/3}" => Ok(Truncation::CubeRootRule),
            other => match other.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_infinite() => Ok(Truncation::Infinite),
                Ok(v) if v > 0.0 => Ok(Truncation::Value(v)),
                _ => Err(format!(
                    "truncation must be a positive number, \"inf\" or \"n^-1/3\", got {other:?}"
                )),
            },
        }
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truncation::Infinite => write!(f, "inf"),
            Truncation::Value(v) => write!(f, "{v}"),
            Truncation::CubeRootRule => write!(f, "n^-1/3"),
        }
    }
}

impl Truncation {
    pub fn level(&self, n: usize) -> f64 {
        match self {
            Truncation::Infinite => f64::INFINITY,
            Truncation::Value(v) => *v,
            Truncation::CubeRootRule => (n as f64).powf(-1.0 / 3.0),
        }
    }
}

/// Histogram binning for the pooled eigenvalues.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct HistogramSpec {
    /// Fixed number of equal-width bins over the sample range.
    pub bins: Option<usize>,
    /// Explicit, strictly increasing bin edges.
    pub edges: Option<Vec<f64>>,
}

fn default_replicates() -> usize {
    1
}

fn default_max_moment() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct EnsembleConfig {
    pub family: Family,
    pub p: usize,
    pub n: usize,
    #[serde(default)]
    pub truncation: Truncation,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    /// Highest trace power `K` reported.
    #[serde(default = "default_max_moment")]
    pub max_moment: usize,
    #[serde(default)]
    pub histogram: HistogramSpec,
}

impl EnsembleConfig {
    pub fn new(family: Family, p: usize, n: usize) -> Self {
        Self {
            family,
            p,
            n,
            truncation: Truncation::Infinite,
            seed: 0,
            replicates: 1,
            max_moment: default_max_moment(),
            histogram: HistogramSpec::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_truncation(mut self, t: Truncation) -> Self {
        self.truncation = t;
        self
    }

    pub fn with_max_moment(mut self, k: usize) -> Self {
        self.max_moment = k;
        self
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.p as f64 / self.n as f64
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SimError::InvalidConfig(m));
        if self.p == 0 || self.n == 0 {
            return bad(format!("p and n must be positive, got p={} n={}", self.p, self.n));
        }
        for (what, v) in [("p", self.p), ("n", self.n)] {
            if v > MAX_DIMENSION {
                return Err(SimError::CostGuard {
                    what: if what == "p" { "row dimension p" } else { "column dimension n" },
                    requested: v,
                    limit: MAX_DIMENSION,
                });
            }
        }
        if self.replicates == 0 {
            return bad("replicates must be at least 1".into());
        }
        if self.max_moment == 0 {
            return bad("max-moment must be at least 1".into());
        }
        if let Truncation::Value(v) = self.truncation {
            if !(v > 0.0) {
                return bad(format!("truncation level must be positive, got {v}"));
            }
        }
        if let Some(edges) = &self.histogram.edges {
            if edges.len() < 2 || edges.windows(2).any(|w| !(w[0] < w[1])) {
                return bad("histogram edges must be strictly increasing with at least two entries".into());
            }
        }
        if self.histogram.bins == Some(0) {
            return bad("histogram bins must be positive".into());
        }
        validate_family(&self.family, self.n, 0)
    }
}

fn validate_family(f: &Family, n: usize, depth: usize) -> Result<()> {
    let bad = |m: String| Err(SimError::InvalidConfig(m));
    let positive = |name: &str, v: f64| {
        if v.is_finite() && v > 0.0 {
            Ok(())
        } else {
            Err(SimError::InvalidConfig(format!("{name} must be positive and finite, got {v}")))
        }
    };
    match f {
        Family::IidStandardized | Family::DtTriangular => Ok(()),
        Family::SparseBernoulli { lambda } => {
            positive("lambda", *lambda)?;
            if *lambda > n as f64 {
                return bad(format!("lambda/n = {}/{n} is not a probability", lambda));
            }
            Ok(())
        }
        Family::TriangularIid { c2, c4 } => {
            positive("c2", *c2)?;
            positive("c4", *c4)?;
            if c2 * c2 / c4 > n as f64 {
                return bad(format!(
                    "c2^2/c4 = {} exceeds n = {n}; the two-point law cannot realize it",
                    c2 * c2 / c4
                ));
            }
            Ok(())
        }
        Family::HeavyTailStable { alpha, b } => {
            if !(*alpha > 0.0 && *alpha < 2.0) {
                return bad(format!("stable index alpha must lie in (0, 2), got {alpha}"));
            }
            if !(*b > 0.0) {
                return bad(format!("truncation level B must be positive, got {b}"));
            }
            Ok(())
        }
        Family::VarianceProfile { profile, base } => {
            if depth > 0 {
                return bad("variance profiles cannot be nested".into());
            }
            if let Profile::Constant { value } = profile {
                if !value.is_finite() {
                    return bad("profile constant must be finite".into());
                }
            }
            if matches!(**base, Family::DtTriangular) {
                return bad("the DT family already carries its own profile".into());
            }
            validate_family(base, n, depth + 1)
        }
    }
}
