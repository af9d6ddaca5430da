//! Real functions on the unit square, sampled on uniform midpoint grids.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type Kernel = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A function on `[0,1]^2`. The first argument is the row coordinate
/// (`i/p`), the second the column coordinate (`j/n`).
#[derive(Clone)]
pub struct Surface {
    label: String,
    f: Kernel,
}

impl fmt::Debug for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Surface").field(&self.label).finish()
    }
}

impl Surface {
    pub fn new(label: impl Into<String>, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |_, _| c)
    }

    /// Piecewise-constant surface from a table whose row `i` covers
    /// `x in [i/R, (i+1)/R)` and column `j` covers `u in [j/C, (j+1)/C)`.
    pub fn from_table(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::InvalidInput("grid table is empty".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("grid table rows have unequal lengths".into()));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("grid table has non-finite entries".into()));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        let cell = |t: f64, size: usize| ((t * size as f64) as usize).min(size - 1);
        Ok(Self::new(format!("grid {r}x{c}"), move |x, u| {
            flat[cell(x, r) * c + cell(u, c)]
        }))
    }

    /// Parses a comma-separated table (one grid row per line, `#` comments).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| Error::InvalidInput(format!("grid line {}: {e}", lineno + 1)))?;
            rows.push(row);
        }
        Self::from_table(rows)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64, u: f64) -> f64 {
        (self.f)(x, u)
    }

    /// `factor * self^power`.
    pub fn pow_scaled(&self, power: i32, factor: f64) -> Self {
        let f = self.f.clone();
        Self::new(format!("{factor}*({})^{power}", self.label), move |x, u| {
            factor * f(x, u).powi(power)
        })
    }

    /// Values at the `resolution x resolution` cell midpoints, row-major in `x`.
    pub fn sample(&self, resolution: usize) -> Vec<f64> {
        let h = 1.0 / resolution as f64;
        let mut out = Vec::with_capacity(resolution * resolution);
        for a in 0..resolution {
            let x = (a as f64 + 0.5) * h;
            for b in 0..resolution {
                out.push(self.eval(x, (b as f64 + 0.5) * h));
            }
        }
        out
    }

    /// `x -> integral of self(x, u) du` by the midpoint rule.
    pub fn row_marginal(&self, resolution: usize) -> impl Fn(f64) -> f64 + Send + Sync {
        let f = self.f.clone();
        let h = 1.0 / resolution as f64;
        move |x| (0..resolution).map(|b| f(x, (b as f64 + 0.5) * h)).sum::<f64>() * h
    }
}

/// The family `g_2, g_4, ...` keyed by even index.
#[derive(Clone, Debug, Default)]
pub struct GridFunctions {
    surfaces: BTreeMap<usize, Surface>,
}

impl GridFunctions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, index: usize, s: Surface) -> Result<Self> {
        self.insert(index, s)?;
        Ok(self)
    }

    pub fn insert(&mut self, index: usize, s: Surface) -> Result<()> {
        if index == 0 || index % 2 == 1 {
            return Err(Error::InvalidInput(format!(
                "g index must be a positive even integer, got {index}"
            )));
        }
        self.surfaces.insert(index, s);
        Ok(())
    }

    pub fn get(&self, index: usize) -> Option<&Surface> {
        self.surfaces.get(&index)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.surfaces.keys().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_sampling() {
        let s = Surface::new("xu", |x, u| x * u);
        let v = s.sample(2);
        assert_eq!(v, vec![0.0625, 0.1875, 0.1875, 0.5625]);
    }

    #[test]
    fn table_lookup_is_piecewise_constant() {
        let s = Surface::from_csv("1,2\n3,4\n").unwrap();
        assert_eq!(s.eval(0.1, 0.1), 1.0);
        assert_eq!(s.eval(0.1, 0.9), 2.0);
        assert_eq!(s.eval(0.9, 0.1), 3.0);
        assert_eq!(s.eval(1.0, 1.0), 4.0);
        assert!(Surface::from_csv("1,2\n3\n").is_err());
        assert!(Surface::from_csv("a,b").is_err());
        assert!(Surface::from_csv("").is_err());
    }

    #[test]
    fn odd_indices_rejected() {
        assert!(GridFunctions::new().with(3, Surface::constant(1.0)).is_err());
        assert!(GridFunctions::new().with(0, Surface::constant(1.0)).is_err());
    }

    #[test]
    fn marginal_of_product() {
        let f = Surface::new("xu", |x, u| x * u).row_marginal(64);
        assert!((f(0.5) - 0.25).abs() < 1e-12);
    }
}
