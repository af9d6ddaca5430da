//! Limiting spectral moments of `S = X X^T`.
//!
//! The `k`-th moment is a sum over special symmetric words of length `2k`.
//! A word with `b` letters and `r + 1` even generating vertices contributes
//! `y^r` times the integral over its `b + 1` generating-vertex coordinates of
//! `prod_j g_{s_j}(x_row(j), x_col(j))`, where letter `j` occurs `s_j` times
//! and first appears on the edge between vertices `row(j)` and `col(j)`.
//! When every `g_{2m}` is a constant `C_{2m}` the integral collapses to
//! `prod_j C_{s_j}`, which is evaluated in exact rational arithmetic.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{
    enumerate_partitions, special_symmetric_words, word_statistics, Word, DEFAULT_ENUMERATION_CAP,
};
use crate::surface::{GridFunctions, Surface};

/// Highest moment order the engine will expand (|SS(20)| is about 2e6 words).
pub const MAX_ORDER: usize = 10;

/// Values `C_2, C_4, ...` keyed by their even index. Odd entries are zero.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EvenSequence {
    values: BTreeMap<usize, f64>,
}

impl EvenSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut s = Self::new();
        for (i, v) in pairs {
            s.insert(i, v)?;
        }
        Ok(s)
    }

    /// `C_{2m} = value` for every `2m <= max_index`.
    pub fn constant(value: f64, max_index: usize) -> Result<Self> {
        Self::from_pairs((1..=max_index / 2).map(|m| (2 * m, value)))
    }

    /// The Marchenko-Pastur reduction: `C_2 = 1`, every higher entry `0`.
    pub fn marchenko_pastur(max_index: usize) -> Self {
        Self::from_pairs((1..=max_index / 2).map(|m| (2 * m, if m == 1 { 1.0 } else { 0.0 })))
            .expect("valid indices")
    }

    pub fn insert(&mut self, index: usize, value: f64) -> Result<()> {
        if index == 0 || index % 2 == 1 {
            return Err(Error::InvalidInput(format!(
                "sequence index must be a positive even integer, got {index}"
            )));
        }
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!("C_{index} is not finite")));
        }
        self.values.insert(index, value);
        Ok(())
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.values.get(&index).copied()
    }

    /// Parses `"2=1,4=0.5"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Self::new();
        for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (i, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("expected index=value, got {item:?}")))?;
            let i: usize = i
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad index in {item:?}")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad value in {item:?}")))?;
            s.insert(i, v)?;
        }
        Ok(s)
    }

    fn require(&self, index: usize) -> Result<f64> {
        self.get(index)
            .ok_or_else(|| Error::InvalidInput(format!("missing sequence entry C_{index}")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().map(|(&i, &v)| (i, v))
    }
}

/// One word's share of a moment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordContribution {
    pub word: Word,
    pub b: usize,
    pub r_plus_1: usize,
    /// `y^r`.
    pub weight: f64,
    /// `prod C_{s_j}` or the quadrature value of the integral.
    pub factor: f64,
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub k: usize,
    pub value: f64,
    /// Exact rational value as `num/den`, when computed exactly.
    pub exact: Option<String>,
    pub breakdown: Vec<WordContribution>,
    /// Quadrature error estimate `|value(G) - value(G/2)|`; zero when exact.
    pub error_estimate: f64,
}

impl MomentReport {
    pub fn contribution(&self, word: &Word) -> Option<f64> {
        self.breakdown
            .iter()
            .find(|c| &c.word == word)
            .map(|c| c.contribution)
    }

    pub fn breakdown_sum(&self) -> f64 {
        self.breakdown.iter().map(|c| c.contribution).sum()
    }
}

fn check_order(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidInput("moment order k must be at least 1".into()));
    }
    if k > MAX_ORDER {
        return Err(Error::SizeLimit {
            what: "moment order",
            requested: k as u128,
            cap: MAX_ORDER as u128,
        });
    }
    Ok(())
}

fn check_y(y: f64) -> Result<()> {
    if !(y.is_finite() && y > 0.0) {
        return Err(Error::InvalidInput(format!("aspect ratio y must be positive, got {y}")));
    }
    Ok(())
}

pub fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidInput(format!("{x} is not finite")))
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Pair-matched SS words of length `2k` with `r + 1` even generating
/// vertices: `C(k,r) C(k-1,r) / (r+1)`.
pub fn narayana(k: usize, r: usize) -> BigUint {
    if k == 0 || r >= k {
        return BigUint::zero();
    }
    binomial(k, r) * binomial(k - 1, r) / BigUint::from(r + 1)
}

pub fn mp_moment_exact(k: usize, y: &BigRational) -> BigRational {
    let mut total = BigRational::zero();
    let mut power = BigRational::one();
    for r in 0..k {
        total += BigRational::from_integer(BigInt::from(narayana(k, r))) * &power;
        power *= y;
    }
    total
}

/// Marchenko-Pastur moment `sum_r N(k, r) y^r`.
pub fn mp_moment(k: usize, y: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInput("moment order k must be at least 1".into()));
    }
    check_y(y)?;
    Ok(to_f64(&mp_moment_exact(k, &rational(y)?)))
}

/// Exact `sum_{SS(2k)} y^r prod C_{|block|}` with per-word terms.
pub fn moment_constant_exact(
    k: usize,
    y: &BigRational,
    c: &EvenSequence,
) -> Result<(BigRational, Vec<(Word, usize, BigRational, BigRational)>)> {
    check_order(k)?;
    let mut cache: BTreeMap<usize, BigRational> = BTreeMap::new();
    for index in (2..=2 * k).step_by(2) {
        cache.insert(index, rational(c.require(index)?)?);
    }
    let mut y_powers = vec![BigRational::one()];
    for r in 1..k {
        let next = &y_powers[r - 1] * y;
        y_powers.push(next);
    }
    let mut total = BigRational::zero();
    let mut terms = Vec::new();
    for word in special_symmetric_words(k) {
        let stats = word_statistics(&word);
        let mut factor = BigRational::one();
        for s in word.multiplicities() {
            factor *= &cache[&s];
        }
        let weight = y_powers[stats.r()].clone();
        total += &weight * &factor;
        terms.push((word, stats.r_plus_1, weight, factor));
    }
    Ok((total, terms))
}

/// `sum_{SS(2k)} y^r C_pi` evaluated exactly, reported in floating point.
pub fn moment_constant(k: usize, y: f64, c: &EvenSequence) -> Result<MomentReport> {
    check_y(y)?;
    let (total, terms) = moment_constant_exact(k, &rational(y)?, c)?;
    let breakdown = terms
        .into_iter()
        .map(|(word, r_plus_1, weight, factor)| WordContribution {
            b: word.distinct(),
            word,
            r_plus_1,
            weight: to_f64(&weight),
            factor: to_f64(&factor),
            contribution: to_f64(&(weight * factor)),
        })
        .collect();
    Ok(MomentReport {
        k,
        value: to_f64(&total),
        exact: Some(total.to_string()),
        breakdown,
        error_estimate: 0.0,
    })
}

/// Sparse Bernoulli limit: `C_{2m} = lambda` for every `m`.
pub fn moment_sparse(k: usize, y: f64, lambda: f64) -> Result<MomentReport> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidInput(format!("lambda must be positive, got {lambda}")));
    }
    moment_constant(k, y, &EvenSequence::constant(lambda, 2 * k)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
    pub lower_exact: String,
    pub upper_exact: String,
}

/// Free-Poisson / Poisson moment bounds for the sparse limit.
///
/// For `y <= 1`: `sum_{NCE(2k)} (lambda y)^|pi|` and `sum_{E(2k)} lambda^|pi|`.
/// For `y > 1`: `sum_{NCE(2k)} lambda^|pi|` and `sum_{E(2k)} (lambda y)^|pi|`.
pub fn poisson_sandwich(k: usize, y: f64, lambda: f64) -> Result<Sandwich> {
    if k == 0 {
        return Err(Error::InvalidInput("moment order k must be at least 1".into()));
    }
    check_y(y)?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidInput(format!("lambda must be positive, got {lambda}")));
    }
    let (lambda_q, y_q) = (rational(lambda)?, rational(y)?);
    let (lower_base, upper_base) = if y <= 1.0 {
        (&lambda_q * &y_q, lambda_q.clone())
    } else {
        (lambda_q.clone(), &lambda_q * &y_q)
    };
    let mut lower = BigRational::zero();
    let mut upper = BigRational::zero();
    for p in enumerate_partitions(2 * k, DEFAULT_ENUMERATION_CAP)? {
        if !p.is_even_blocks() {
            continue;
        }
        let b = p.block_count() as i32;
        upper += num_traits::pow::Pow::pow(&upper_base, b);
        if p.is_non_crossing() {
            lower += num_traits::pow::Pow::pow(&lower_base, b);
        }
    }
    Ok(Sandwich {
        lower: to_f64(&lower),
        upper: to_f64(&upper),
        lower_exact: lower.to_string(),
        upper_exact: upper.to_string(),
    })
}

/// The tree traced by an SS word: vertex 0 is `pi(0)` (a row vertex).
struct WordTree {
    /// Child edges per vertex: (child, letter multiplicity).
    children: Vec<Vec<(usize, usize)>>,
    is_row: Vec<bool>,
}

impl WordTree {
    fn build(word: &Word) -> Result<Self> {
        let mults = word.multiplicities();
        let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        let mut is_row = vec![true];
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut cur = 0usize;
        for (idx, &c) in word.letters().iter().enumerate() {
            let letter = c as usize - 1;
            if letter == edges.len() {
                let fresh = children.len();
                children.push(Vec::new());
                is_row.push((idx + 1) % 2 == 0);
                children[cur].push((fresh, mults[letter]));
                edges.push((cur, fresh));
                cur = fresh;
            } else {
                let (u, v) = edges[letter];
                cur = if cur == u {
                    v
                } else if cur == v {
                    u
                } else {
                    return Err(Error::Domain(format!("{word} is not special symmetric")));
                };
            }
        }
        if cur != 0 {
            return Err(Error::Domain(format!("{word} is not special symmetric")));
        }
        Ok(Self { children, is_row })
    }

    /// Midpoint-rule integral, eliminating leaves first.
    fn integrate(&self, samples: &BTreeMap<usize, Vec<f64>>, resolution: usize) -> f64 {
        let h = 1.0 / resolution as f64;
        let root = self.message(0, samples, resolution);
        root.iter().sum::<f64>() * h
    }

    fn message(&self, v: usize, samples: &BTreeMap<usize, Vec<f64>>, g: usize) -> Vec<f64> {
        let h = 1.0 / g as f64;
        let mut msg = vec![1.0; g];
        for &(child, size) in &self.children[v] {
            let inner = self.message(child, samples, g);
            let table = &samples[&size];
            for (a, slot) in msg.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (b, m) in inner.iter().enumerate() {
                    // table is indexed [row * g + col]
                    let kernel = if self.is_row[v] {
                        table[a * g + b]
                    } else {
                        table[b * g + a]
                    };
                    acc += kernel * m;
                }
                *slot *= acc * h;
            }
        }
        msg
    }
}

fn grid_pass(
    k: usize,
    y: f64,
    g: &GridFunctions,
    resolution: usize,
    words: &[Word],
) -> Result<(f64, Vec<WordContribution>)> {
    let mut samples = BTreeMap::new();
    for index in (2..=2 * k).step_by(2) {
        if let Some(s) = g.get(index) {
            samples.insert(index, s.sample(resolution));
        }
    }
    let mut total = 0.0;
    let mut breakdown = Vec::with_capacity(words.len());
    for word in words {
        let stats = word_statistics(word);
        for s in word.multiplicities() {
            if !samples.contains_key(&s) {
                return Err(Error::InvalidInput(format!(
                    "missing g_{s} required by word {word}"
                )));
            }
        }
        let integral = WordTree::build(word)?.integrate(&samples, resolution);
        let weight = y.powi(stats.r() as i32);
        let contribution = weight * integral;
        total += contribution;
        breakdown.push(WordContribution {
            word: word.clone(),
            b: stats.b,
            r_plus_1: stats.r_plus_1,
            weight,
            factor: integral,
            contribution,
        });
    }
    Ok((total, breakdown))
}

/// Moments for grid-sampled `g_{2m}` by midpoint quadrature on a
/// `resolution x resolution` grid.
pub fn moment_grid(k: usize, y: f64, g: &GridFunctions, resolution: usize) -> Result<MomentReport> {
    check_order(k)?;
    check_y(y)?;
    if resolution < 2 {
        return Err(Error::InvalidInput(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let words = special_symmetric_words(k);
    let (value, breakdown) = grid_pass(k, y, g, resolution, &words)?;
    let (coarse, _) = grid_pass(k, y, g, resolution / 2, &words)?;
    Ok(MomentReport {
        k,
        value,
        exact: None,
        breakdown,
        error_estimate: (value - coarse).abs(),
    })
}

/// Variance-profile moments: `g_{2m} = sigma^{2m} C_{2m}`.
pub fn moment_profile(
    k: usize,
    y: f64,
    sigma: &Surface,
    c: &EvenSequence,
    resolution: usize,
) -> Result<MomentReport> {
    check_order(k)?;
    let mut g = GridFunctions::new();
    for index in (2..=2 * k).step_by(2) {
        g.insert(index, sigma.pow_scaled(index as i32, c.require(index)?))?;
    }
    moment_grid(k, y, &g, resolution)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarlemanTerm {
    /// Half the moment index: the row concerns `alpha_{2k}`.
    pub k: usize,
    pub alpha: f64,
    /// `sum_{j <= k} alpha_{2j}^{-1/(2j)}`.
    pub partial_sum: f64,
}

/// Integer partitions of `n` into even parts, as (part, multiplicity) lists.
fn even_part_types(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(rest: usize, max_part: usize, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        let mut part = max_part.min(rest);
        if part % 2 == 1 {
            part -= 1;
        }
        while part >= 2 {
            for mult in 1..=rest / part {
                acc.push((part, mult));
                rec(rest - part * mult, part - 2, acc, out);
                acc.pop();
            }
            part -= 2;
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `sum_{sigma in P(2k)} M_sigma` with `M` zero on odd sizes, enumerated by
/// block type: a type with `m_j` blocks of size `j` is realized by
/// `(2k)! / prod (j!^m_j m_j!)` partitions.
pub fn carleman_alpha(bounds: &EvenSequence, two_k: usize) -> Result<BigRational> {
    let total_fact = factorial(two_k);
    let mut alpha = BigRational::zero();
    for ty in even_part_types(two_k) {
        let mut denom = BigUint::one();
        let mut weight = BigRational::one();
        for &(part, mult) in &ty {
            denom *= num_traits::pow::Pow::pow(factorial(part), mult) * factorial(mult);
            let m = rational(bounds.require(part)?)?;
            weight *= num_traits::pow::Pow::pow(&m, mult);
        }
        let count = BigInt::from(&total_fact / denom);
        alpha += BigRational::from_integer(count) * weight;
    }
    Ok(alpha)
}

/// Partial sums of `alpha_{2k}^{-1/(2k)}` for `k = 1..=max_k`; a diagnostic
/// for moment determinacy, not a decision procedure.
pub fn carleman_diagnostic(bounds: &EvenSequence, max_k: usize) -> Result<Vec<CarlemanTerm>> {
    if max_k == 0 {
        return Err(Error::InvalidInput("need at least one term".into()));
    }
    for (i, v) in bounds.iter() {
        if v < 0.0 {
            return Err(Error::InvalidInput(format!("bound M_{i} is negative")));
        }
    }
    let mut partial = 0.0;
    let mut out = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let alpha = to_f64(&carleman_alpha(bounds, 2 * k)?);
        partial += if alpha > 0.0 {
            alpha.powf(-1.0 / (2 * k) as f64)
        } else {
            f64::INFINITY
        };
        out.push(CarlemanTerm {
            k,
            alpha,
            partial_sum: partial,
        });
    }
    Ok(out)
}

/// Number of words with `t` letters, each in doubled runs and each used
/// `2m` times: `(mt)! / (t! (m!)^t)`.
pub fn star_word_count(m: usize, t: usize) -> BigUint {
    factorial(m * t) / (factorial(t) * num_traits::pow::Pow::pow(factorial(m), t))
}

/// Lower bound on the `mt`-th moment from the star-shaped words alone:
/// `(mt)! / (t! (m!)^t) * integral of f_{2m}(x)^t dx`, midpoint rule.
pub fn unbounded_support_bound(
    m: usize,
    t: usize,
    f: impl Fn(f64) -> f64,
    resolution: usize,
) -> Result<f64> {
    if m == 0 || t == 0 {
        return Err(Error::InvalidInput("m and t must be at least 1".into()));
    }
    if resolution == 0 {
        return Err(Error::InvalidInput("resolution must be positive".into()));
    }
    let h = 1.0 / resolution as f64;
    let integral: f64 = (0..resolution)
        .map(|a| f((a as f64 + 0.5) * h).powi(t as i32))
        .sum::<f64>()
        * h;
    let coeff = star_word_count(m, t)
        .to_f64()
        .ok_or_else(|| Error::NumericalContract("combinatorial factor overflows f64".into()))?;
    Ok(coeff * integral)
}

/// Where a limit model's `g_{2m}` come from.
#[derive(Clone, Debug)]
pub enum MomentSource {
    Constant(EvenSequence),
    Grid(GridFunctions),
    Profile { sigma: Surface, base: EvenSequence },
}

/// A limit model: aspect ratio plus entry-moment description.
#[derive(Clone, Debug)]
pub struct MomentSpec {
    y: f64,
    source: MomentSource,
}

impl MomentSpec {
    pub fn new(y: f64, source: MomentSource) -> Result<Self> {
        check_y(y)?;
        Ok(Self { y, source })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn evaluate(&self, k: usize, resolution: usize) -> Result<MomentReport> {
        match &self.source {
            MomentSource::Constant(c) => moment_constant(k, self.y, c),
            MomentSource::Grid(g) => moment_grid(k, self.y, g, resolution),
            MomentSource::Profile { sigma, base } => {
                moment_profile(k, self.y, sigma, base, resolution)
            }
        }
    }
}
