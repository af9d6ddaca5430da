//! Brute-force counting of circuits compatible with a word.
//!
//! A circuit of length `2k` is `pi(0), .., pi(2k) = pi(0)`; under the
//! covariance link even vertices are row indices in `1..=p` and odd vertices
//! are column indices in `1..=n`. Step `i` reads the matrix entry
//! `(row, col)`, which is `(pi(i-1), pi(i))` for odd `i` and `(pi(i), pi(i-1))`
//! for even `i`; this normalized pair is the edge key. Two steps of the same
//! parity therefore match componentwise and two steps of opposite parity match
//! swapped. Under the Wigner link every vertex ranges over `1..=N` and the key
//! is the unordered pair.
//!
//! The search assigns only generating vertices: a repeated letter's key plus
//! the previous vertex determines the next vertex uniquely under both links,
//! so no branching happens at non-generating steps.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{word_statistics, Word};

/// Default ceiling on candidate assignments explored by one census.
pub const DEFAULT_CENSUS_BUDGET: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Link {
    /// Sample covariance link: `L1(i,j) = (i,j)`, `L2(i,j) = (j,i)`.
    S,
    /// Wigner link: `(min(i,j), max(i,j))`.
    Wigner,
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Link::S => "S",
            Link::Wigner => "W",
        })
    }
}

/// How letter equality constrains edge keys.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchRule {
    /// Equal letters force equal keys; distinct letters may still collide.
    /// This is the class whose size is `p^(r+1) n^(b-r)` for SS words.
    #[default]
    Implied,
    /// Keys are equal exactly when letters are equal.
    Exact,
}

/// Index ranges of a circuit of length `2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitSpace {
    pub k: usize,
    pub p: u32,
    pub n: u32,
}

impl CircuitSpace {
    pub fn new(k: usize, p: u32, n: u32) -> Result<Self> {
        if k == 0 || p == 0 || n == 0 {
            return Err(Error::InvalidInput(format!(
                "circuit space needs k, p, n >= 1 (got k={k}, p={p}, n={n})"
            )));
        }
        Ok(Self { k, p, n })
    }

    fn range(&self, link: Link, position: usize) -> u32 {
        match link {
            Link::Wigner => self.p.max(self.n),
            Link::S if position % 2 == 0 => self.p,
            Link::S => self.n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    pub word: Word,
    pub link: Link,
    pub p: u32,
    pub n: u32,
    pub exact_count: u128,
    pub predicted_count: Option<u128>,
}

impl CensusResult {
    pub const CSV_HEADER: &'static str = "word,link,p,n,exact,predicted";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.word,
            self.link,
            self.p,
            self.n,
            self.exact_count,
            self.predicted_count
                .map_or_else(String::new, |c| c.to_string())
        )
    }
}

type Key = (u32, u32);

fn edge_key(link: Link, position: usize, prev: u32, cur: u32) -> Key {
    match link {
        Link::S if position % 2 == 1 => (prev, cur),
        Link::S => (cur, prev),
        Link::Wigner => (prev.min(cur), prev.max(cur)),
    }
}

/// The unique next vertex reproducing `key` from `prev`, if any.
fn forced_vertex(link: Link, position: usize, prev: u32, key: Key) -> Option<u32> {
    match link {
        Link::S if position % 2 == 1 => (prev == key.0).then_some(key.1),
        Link::S => (prev == key.1).then_some(key.0),
        Link::Wigner => {
            if prev == key.0 {
                Some(key.1)
            } else if prev == key.1 {
                Some(key.0)
            } else {
                None
            }
        }
    }
}

fn check_word(w: &Word) -> Result<()> {
    if w.len() % 2 == 1 {
        return Err(Error::InvalidInput(format!(
            "circuits have even length; word {w} has length {}",
            w.len()
        )));
    }
    Ok(())
}

fn checked_pow(base: u32, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

fn budget_error(requested: u128, budget: u128) -> Error {
    Error::SizeLimit {
        what: "census candidate assignments",
        requested,
        cap: budget,
    }
}

struct Search<'a, F: FnMut(&[u32])> {
    link: Link,
    space: CircuitSpace,
    rule: MatchRule,
    letters: &'a [u8],
    keys: Vec<Option<Key>>,
    pi: Vec<u32>,
    candidates: u128,
    visit: F,
}

impl<F: FnMut(&[u32])> Search<'_, F> {
    fn run(&mut self) {
        for v in 1..=self.space.range(self.link, 0) {
            self.candidates += 1;
            self.pi[0] = v;
            self.step(1);
        }
    }

    fn step(&mut self, i: usize) {
        let len = self.letters.len();
        if i > len {
            if self.pi[len] == self.pi[0] && self.exactness_holds() {
                (self.visit)(&self.pi);
            }
            return;
        }
        let letter = self.letters[i - 1] as usize - 1;
        let prev = self.pi[i - 1];
        match self.keys[letter] {
            Some(key) => {
                if let Some(v) = forced_vertex(self.link, i, prev, key) {
                    self.pi[i] = v;
                    self.step(i + 1);
                }
            }
            None if i == len => {
                // A first occurrence in the closing step cannot choose freely.
                let v = self.pi[0];
                self.pi[i] = v;
                self.keys[letter] = Some(edge_key(self.link, i, prev, v));
                self.step(i + 1);
                self.keys[letter] = None;
            }
            None => {
                for v in 1..=self.space.range(self.link, i) {
                    self.candidates += 1;
                    self.pi[i] = v;
                    self.keys[letter] = Some(edge_key(self.link, i, prev, v));
                    self.step(i + 1);
                }
                self.keys[letter] = None;
            }
        }
    }

    fn exactness_holds(&self) -> bool {
        if self.rule == MatchRule::Implied {
            return true;
        }
        let mut keys: Vec<Key> = self.keys.iter().map(|k| k.expect("all letters seen")).collect();
        keys.sort_unstable();
        keys.windows(2).all(|w| w[0] != w[1])
    }
}

/// Upper bound on candidate assignments explored by the generating-vertex search.
fn search_bound(w: &Word, link: Link, space: CircuitSpace) -> u128 {
    let stats = word_statistics(w);
    let mut bound = space.range(link, 0) as u128;
    for &pos in &stats.first_occurrences {
        if pos < w.len() {
            bound = bound.saturating_mul(space.range(link, pos) as u128);
        }
    }
    bound
}

/// Visits every circuit in the class of `w`, returning the number of
/// candidate assignments explored.
pub fn visit_circuits<F: FnMut(&[u32])>(
    w: &Word,
    link: Link,
    space: CircuitSpace,
    rule: MatchRule,
    budget: u128,
    visit: F,
) -> Result<u128> {
    check_word(w)?;
    if w.len() != 2 * space.k {
        return Err(Error::InvalidInput(format!(
            "word {w} does not have length 2k = {}",
            2 * space.k
        )));
    }
    let bound = search_bound(w, link, space);
    if bound > budget {
        return Err(budget_error(bound, budget));
    }
    let mut search = Search {
        link,
        space,
        rule,
        letters: w.letters(),
        keys: vec![None; w.distinct()],
        pi: vec![0; w.len() + 1],
        candidates: 0,
        visit,
    };
    search.run();
    Ok(search.candidates)
}

fn count(w: &Word, link: Link, p: u32, n: u32, rule: MatchRule, budget: u128) -> Result<u128> {
    check_word(w)?;
    let space = CircuitSpace::new(w.len() / 2, p, n)?;
    let mut total = 0u128;
    visit_circuits(w, link, space, rule, budget, |_| total += 1)?;
    Ok(total)
}

/// `|Pi_S(w)|` under the implied-match rule.
pub fn census_s(w: &Word, p: u32, n: u32, budget: u128) -> Result<CensusResult> {
    census_s_with(w, p, n, MatchRule::Implied, budget)
}

pub fn census_s_with(
    w: &Word,
    p: u32,
    n: u32,
    rule: MatchRule,
    budget: u128,
) -> Result<CensusResult> {
    Ok(CensusResult {
        word: w.clone(),
        link: Link::S,
        p,
        n,
        exact_count: count(w, Link::S, p, n, rule, budget)?,
        predicted_count: predicted_count_s(w, p, n),
    })
}

/// `|Pi_W(w)|` with vertices in `1..=big_n`, under the implied-match rule.
pub fn census_w(w: &Word, big_n: u32, budget: u128) -> Result<CensusResult> {
    census_w_with(w, big_n, MatchRule::Implied, budget)
}

pub fn census_w_with(w: &Word, big_n: u32, rule: MatchRule, budget: u128) -> Result<CensusResult> {
    let predicted = w
        .is_special_symmetric()
        .then(|| checked_pow(big_n, w.distinct() + 1));
    Ok(CensusResult {
        word: w.clone(),
        link: Link::Wigner,
        p: big_n,
        n: big_n,
        exact_count: count(w, Link::Wigner, big_n, big_n, rule, budget)?,
        predicted_count: predicted,
    })
}

/// `p^(r+1) n^(b-r)` for special symmetric words, `None` otherwise.
pub fn predicted_count_s(w: &Word, p: u32, n: u32) -> Option<u128> {
    if !w.is_special_symmetric() {
        return None;
    }
    let stats = word_statistics(w);
    Some(checked_pow(p, stats.r_plus_1).saturating_mul(checked_pow(n, stats.b - stats.r())))
}

/// Checks that every covariance-link circuit of `w` is also a Wigner-link
/// circuit of `w` on the vertex range `1..=max(p, n)`.
pub fn verify_containment(w: &Word, p: u32, n: u32, budget: u128) -> Result<bool> {
    check_word(w)?;
    let space = CircuitSpace::new(w.len() / 2, p, n)?;
    let letters = w.letters();
    let mut contained = true;
    visit_circuits(w, Link::S, space, MatchRule::Implied, budget, |pi| {
        if contained && !satisfies_implied(letters, Link::Wigner, pi) {
            contained = false;
        }
    })?;
    Ok(contained)
}

fn satisfies_implied(letters: &[u8], link: Link, pi: &[u32]) -> bool {
    let mut keys: Vec<Option<Key>> = vec![None; letters.len()];
    for (idx, &c) in letters.iter().enumerate() {
        let i = idx + 1;
        let key = edge_key(link, i, pi[i - 1], pi[i]);
        let slot = &mut keys[c as usize - 1];
        match slot {
            Some(existing) if *existing != key => return false,
            Some(_) => {}
            None => *slot = Some(key),
        }
    }
    true
}

/// Census by scanning every vertex tuple; independent of the generating-vertex
/// propagation and used to cross-check it.
pub fn census_exhaustive(
    w: &Word,
    link: Link,
    p: u32,
    n: u32,
    rule: MatchRule,
    budget: u128,
) -> Result<u128> {
    check_word(w)?;
    let space = CircuitSpace::new(w.len() / 2, p, n)?;
    let len = w.len();
    let ranges: Vec<u32> = (0..len).map(|i| space.range(link, i)).collect();
    let total = ranges
        .iter()
        .fold(1u128, |acc, &r| acc.saturating_mul(r as u128));
    if total > budget {
        return Err(budget_error(total, budget));
    }
    let letters = w.letters();
    let mut pi = vec![1u32; len + 1];
    let mut found = 0u128;
    loop {
        pi[len] = pi[0];
        let mut ok = true;
        'pairs: for i in 1..=len {
            let ki = edge_key(link, i, pi[i - 1], pi[i]);
            for j in i + 1..=len {
                let same_letter = letters[i - 1] == letters[j - 1];
                let same_key = ki == edge_key(link, j, pi[j - 1], pi[j]);
                let violated = match rule {
                    MatchRule::Implied => same_letter && !same_key,
                    MatchRule::Exact => same_letter != same_key,
                };
                if violated {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            found += 1;
        }
        // odometer over pi[0..len]
        let mut pos = 0;
        loop {
            if pos == len {
                return Ok(found);
            }
            if pi[pos] < ranges[pos] {
                pi[pos] += 1;
                break;
            }
            pi[pos] = 1;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_words;

    const B: u128 = DEFAULT_CENSUS_BUDGET;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn covariance_examples() {
        assert_eq!(census_s(&w("aa"), 2, 3, B).unwrap().exact_count, 6);
        assert_eq!(census_s(&w("abba"), 2, 2, B).unwrap().exact_count, 8);
        let crossing = census_s(&w("abab"), 2, 2, B).unwrap();
        assert!(crossing.exact_count < 8);
        assert_eq!(crossing.predicted_count, None);
    }

    #[test]
    fn wigner_examples() {
        assert_eq!(census_w(&w("aa"), 3, B).unwrap().exact_count, 9);
        assert_eq!(census_w(&w("abba"), 2, B).unwrap().exact_count, 8);
        let ratios: Vec<f64> = (2..=4)
            .map(|n| census_w(&w("abab"), n, B).unwrap().exact_count as f64 / (n as f64).powi(3))
            .collect();
        assert!(ratios[0] > ratios[1] && ratios[1] > ratios[2]);
    }

    #[test]
    fn predictions() {
        assert_eq!(predicted_count_s(&w("aabb"), 3, 5), Some(75));
        assert_eq!(predicted_count_s(&w("aa"), 4, 7), Some(28));
        assert_eq!(predicted_count_s(&w("abab"), 3, 3), None);
        assert_eq!(census_s(&w("aabb"), 3, 5, B).unwrap().exact_count, 75);
    }

    #[test]
    fn containment_examples() {
        assert!(verify_containment(&w("aa"), 2, 3, B).unwrap());
        assert!(verify_containment(&w("abba"), 2, 2, B).unwrap());
        assert!(verify_containment(&w("abab"), 2, 2, B).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let err = census_s(&w("abcdef"), 100, 100, 1000).unwrap_err();
        assert!(matches!(err, Error::SizeLimit { cap: 1000, .. }));
        assert!(census_exhaustive(&w("aabb"), Link::S, 10, 10, MatchRule::Implied, 100).is_err());
    }

    #[test]
    fn odd_length_words_are_rejected() {
        assert!(census_s(&w("aba"), 2, 2, B).is_err());
    }

    #[test]
    fn propagation_matches_exhaustive_scan() {
        for m in [2, 4, 6] {
            for word in enumerate_words(m, 14).unwrap() {
                for (p, n) in [(1, 2), (2, 2), (3, 2), (2, 3)] {
                    for rule in [MatchRule::Implied, MatchRule::Exact] {
                        let fast = census_s_with(&word, p, n, rule, B).unwrap().exact_count;
                        let slow = census_exhaustive(&word, Link::S, p, n, rule, B).unwrap();
                        assert_eq!(fast, slow, "S {word} p={p} n={n} {rule:?}");
                    }
                }
                for big_n in [2, 3] {
                    for rule in [MatchRule::Implied, MatchRule::Exact] {
                        let fast = census_w_with(&word, big_n, rule, B).unwrap().exact_count;
                        let slow =
                            census_exhaustive(&word, Link::Wigner, big_n, big_n, rule, B).unwrap();
                        assert_eq!(fast, slow, "W {word} N={big_n} {rule:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn exact_rule_excludes_coincident_letters() {
        // Distinct letters of "abba" coincide when the two row vertices agree.
        let exact = census_s_with(&w("abba"), 3, 2, MatchRule::Exact, B).unwrap();
        assert_eq!(exact.exact_count, 3 * 2 * 2);
    }

    #[test]
    fn csv_row_format() {
        let r = census_s(&w("abba"), 2, 2, B).unwrap();
        assert_eq!(r.csv_row(), "abba,S,2,2,8,8");
        let r = census_s(&w("abab"), 2, 2, B).unwrap();
        assert_eq!(r.csv_row(), "abab,S,2,2,4,");
    }
}
