//! Set partitions of `{1..m}`, their canonical words, and the special symmetric
//! classification.
//!
//! A partition is stored as sorted blocks ordered by least element. The same
//! object viewed position-by-position is a [`Word`]: position `i` carries the
//! index of the block containing `i`, with blocks numbered by first occurrence
//! (a restricted growth string). The two views are in bijection and every
//! cross-module key uses the word string (`a`, `b`, `c`, ...).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on the ground-set size for exhaustive enumeration.
/// Bell(14) is roughly 1.9e8 partitions.
pub const DEFAULT_ENUMERATION_CAP: usize = 14;

/// A partition of `{1..m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct Partition {
    m: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from arbitrary-order blocks, normalizing the order.
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.iter().any(|b| b.is_empty()) {
            return Err(Error::InvalidInput("partition has an empty block".into()));
        }
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        let m: usize = blocks.iter().map(Vec::len).sum();
        if m == 0 {
            return Err(Error::InvalidInput("partition of the empty set".into()));
        }
        let mut seen = vec![false; m + 1];
        for &x in blocks.iter().flatten() {
            if x == 0 || x > m || seen[x] {
                return Err(Error::InvalidInput(format!(
                    "blocks do not partition {{1..{m}}} (offending element {x})"
                )));
            }
            seen[x] = true;
        }
        Ok(Self { m, blocks })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block label (1-based, by least element) of every element of `{1..m}`.
    pub fn labels(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.m];
        for (j, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x - 1] = (j + 1) as u8;
            }
        }
        out
    }

    pub fn to_word(&self) -> Word {
        Word {
            letters: self.labels(),
        }
    }

    pub fn is_pair(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// Membership in E(m): every block has even size.
    pub fn is_even_blocks(&self) -> bool {
        self.blocks.iter().all(|b| b.len() % 2 == 0)
    }

    pub fn is_non_crossing(&self) -> bool {
        non_crossing_labels(&self.labels())
    }

    /// Multiset of block sizes, non-increasing.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }
}

impl TryFrom<Vec<Vec<usize>>> for Partition {
    type Error = Error;
    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        Partition::new(blocks)
    }
}

impl From<Partition> for Vec<Vec<usize>> {
    fn from(p: Partition) -> Self {
        p.blocks
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Canonical word: letters `1..=b` where letter `j` first appears before `j+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    /// Accepts a letter sequence that is already canonical.
    pub fn from_letters(letters: Vec<u8>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidInput("empty word".into()));
        }
        let mut next = 1u8;
        for &c in &letters {
            if c == 0 || c > next {
                return Err(Error::InvalidInput(format!(
                    "letters {letters:?} are not in first-occurrence order"
                )));
            }
            if c == next {
                next = next.checked_add(1).ok_or_else(|| {
                    Error::InvalidInput("more than 254 distinct letters".into())
                })?;
            }
        }
        Ok(Self { letters })
    }

    /// Relabels an arbitrary sequence by first occurrence.
    pub fn canonicalize<T: PartialEq>(seq: &[T]) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::InvalidInput("empty word".into()));
        }
        let mut seen: Vec<&T> = Vec::new();
        let mut letters = Vec::with_capacity(seq.len());
        for x in seq {
            let idx = match seen.iter().position(|s| *s == x) {
                Some(i) => i,
                None => {
                    seen.push(x);
                    seen.len() - 1
                }
            };
            if idx >= u8::MAX as usize {
                return Err(Error::InvalidInput("more than 254 distinct letters".into()));
            }
            letters.push(idx as u8 + 1);
        }
        Ok(Self { letters })
    }

    /// Parses a string such as `"abba"`; any alphabet is relabelled canonically.
    pub fn parse(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.iter().any(|c| c.is_whitespace()) {
            return Err(Error::InvalidInput(format!("word {s:?} contains whitespace")));
        }
        Self::canonicalize(&chars)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of distinct letters.
    pub fn distinct(&self) -> usize {
        self.letters.iter().copied().max().unwrap_or(0) as usize
    }

    /// Multiplicity of each letter, indexed by `letter - 1`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out = vec![0usize; self.distinct()];
        for &c in &self.letters {
            out[c as usize - 1] += 1;
        }
        out
    }

    pub fn to_partition(&self) -> Partition {
        let mut blocks = vec![Vec::new(); self.distinct()];
        for (i, &c) in self.letters.iter().enumerate() {
            blocks[c as usize - 1].push(i + 1);
        }
        Partition {
            m: self.letters.len(),
            blocks,
        }
    }

    pub fn is_special_symmetric(&self) -> bool {
        special_symmetric_labels(&self.letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.letters {
            write!(f, "{}", letter_char(c))?;
        }
        Ok(())
    }
}

fn letter_char(c: u8) -> char {
    match c {
        1..=26 => (b'a' + c - 1) as char,
        27..=52 => (b'A' + c - 27) as char,
        _ => char::from_u32(0x100 + c as u32).unwrap_or('?'),
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Special symmetric membership test.
///
/// Condition (i) is applied block by block from the last block (by least
/// element) backwards: with all later blocks deleted, the block must split
/// into maximal runs of consecutive positions, each of even length.
///
/// Condition (ii): between two successive elements of any block, every other
/// block appears equally often at odd and at even positions of the gap, where
/// the gap's positions are numbered from 1.
pub fn is_special_symmetric(p: &Partition) -> bool {
    special_symmetric_labels(&p.labels())
}

fn special_symmetric_labels(labels: &[u8]) -> bool {
    let m = labels.len();
    if m == 0 || m % 2 == 1 {
        return false;
    }
    let b = labels.iter().copied().max().unwrap_or(0) as usize;

    let mut seq = labels.to_vec();
    for letter in (1..=b as u8).rev() {
        if !runs_are_even(&seq, letter) {
            return false;
        }
        seq.retain(|&c| c != letter);
    }

    let mut last_seen = vec![usize::MAX; b + 1];
    let mut odd = vec![0usize; b + 1];
    let mut even = vec![0usize; b + 1];
    for (i, &c) in labels.iter().enumerate() {
        let c = c as usize;
        let prev = last_seen[c];
        last_seen[c] = i;
        if prev == usize::MAX {
            continue;
        }
        odd.iter_mut().for_each(|x| *x = 0);
        even.iter_mut().for_each(|x| *x = 0);
        for (offset, &d) in labels[prev + 1..i].iter().enumerate() {
            if offset % 2 == 0 {
                odd[d as usize] += 1;
            } else {
                even[d as usize] += 1;
            }
        }
        if odd.iter().zip(&even).any(|(o, e)| o != e) {
            return false;
        }
    }
    true
}

fn runs_are_even(seq: &[u8], letter: u8) -> bool {
    let mut run = 0usize;
    for &c in seq {
        if c == letter {
            run += 1;
        } else {
            if run % 2 == 1 {
                return false;
            }
            run = 0;
        }
    }
    run % 2 == 0
}

fn non_crossing_labels(labels: &[u8]) -> bool {
    let b = labels.iter().copied().max().unwrap_or(0) as usize;
    let mut first = vec![usize::MAX; b + 1];
    let mut last = vec![0usize; b + 1];
    for (i, &c) in labels.iter().enumerate() {
        let c = c as usize;
        if first[c] == usize::MAX {
            first[c] = i;
        }
        last[c] = i;
    }
    // An open block must be on top of the stack whenever it is revisited.
    let mut stack: Vec<usize> = Vec::new();
    for (i, &c) in labels.iter().enumerate() {
        let c = c as usize;
        if first[c] == i {
            if last[c] != i {
                stack.push(c);
            }
            continue;
        }
        if stack.last() != Some(&c) {
            return false;
        }
        if last[c] == i {
            stack.pop();
        }
    }
    true
}

/// Generating-vertex statistics of a word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordStatistics {
    /// Distinct letters.
    pub b: usize,
    /// Even generating vertices, `pi(0)` included.
    pub r_plus_1: usize,
    /// 1-based positions of first occurrences, one per letter.
    pub first_occurrences: Vec<usize>,
}

impl WordStatistics {
    /// Odd generating vertices.
    pub fn odd_generating(&self) -> usize {
        self.b + 1 - self.r_plus_1
    }

    /// The exponent `r` of `y` in a word's moment contribution.
    pub fn r(&self) -> usize {
        self.r_plus_1 - 1
    }
}

/// The generating indices are `0` and every first-occurrence position.
pub fn word_statistics(w: &Word) -> WordStatistics {
    let b = w.distinct();
    let mut first_occurrences = Vec::with_capacity(b);
    let mut next = 1u8;
    for (i, &c) in w.letters().iter().enumerate() {
        if c == next {
            first_occurrences.push(i + 1);
            next += 1;
        }
    }
    let r_plus_1 = 1 + first_occurrences.iter().filter(|&&i| i % 2 == 0).count();
    WordStatistics {
        b,
        r_plus_1,
        first_occurrences,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionClass {
    pub is_pair: bool,
    pub is_even_blocks: bool,
    pub is_non_crossing: bool,
    pub is_special_symmetric: bool,
    pub b: usize,
    pub r_plus_1: usize,
}

pub fn classify(p: &Partition) -> PartitionClass {
    let word = p.to_word();
    let stats = word_statistics(&word);
    PartitionClass {
        is_pair: p.is_pair(),
        is_even_blocks: p.is_even_blocks(),
        is_non_crossing: p.is_non_crossing(),
        is_special_symmetric: word.is_special_symmetric(),
        b: stats.b,
        r_plus_1: stats.r_plus_1,
    }
}

/// Restricted growth strings of length `m` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Words {
    current: Vec<u8>,
    // prefix_max[i] = max(current[0..=i])
    prefix_max: Vec<u8>,
    done: bool,
}

impl Words {
    fn new(m: usize) -> Self {
        Self {
            current: vec![1; m],
            prefix_max: vec![1; m],
            done: false,
        }
    }

    fn advance(&mut self) {
        let m = self.current.len();
        for i in (1..m).rev() {
            if self.current[i] <= self.prefix_max[i - 1] {
                self.current[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.current[i]);
                for j in i + 1..m {
                    self.current[j] = 1;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Words {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let out = Word {
            letters: self.current.clone(),
        };
        self.advance();
        Some(out)
    }
}

fn check_cap(m: usize, cap: usize) -> Result<()> {
    if m > cap {
        return Err(Error::SizeLimit {
            what: "partition ground-set size",
            requested: m as u128,
            cap: cap as u128,
        });
    }
    Ok(())
}

/// Every canonical word of length `m` (equivalently every partition of
/// `{1..m}`), in lexicographic order of the letter sequence.
pub fn enumerate_words(m: usize, cap: usize) -> Result<Words> {
    if m == 0 {
        return Err(Error::InvalidInput("ground set must be non-empty".into()));
    }
    check_cap(m, cap)?;
    Ok(Words::new(m))
}

/// Every partition of `{1..m}` exactly once; Bell(m) items.
pub fn enumerate_partitions(m: usize, cap: usize) -> Result<impl Iterator<Item = Partition>> {
    Ok(enumerate_words(m, cap)?.map(|w| w.to_partition()))
}

/// Bell numbers by the triangle recurrence; exact up to m = 25.
pub fn bell(m: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            let v = *next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// Special symmetric words of length `2k`, generated directly as closed walks
/// on a growing tree rooted at `pi(0)`, sorted canonically.
///
/// Each new letter adds a fresh vertex adjacent to the current one; a repeated
/// letter must traverse its tree edge from one of its endpoints.
pub fn special_symmetric_words(k: usize) -> Vec<Word> {
    struct Walk {
        len: usize,
        letters: Vec<u8>,
        // edge endpoints per letter; vertex 0 is the root
        edges: Vec<(usize, usize)>,
        depth: Vec<usize>,
        out: Vec<Word>,
    }

    fn step(w: &mut Walk, cur: usize) {
        let pos = w.letters.len();
        if pos == w.len {
            if cur == 0 {
                w.out.push(Word {
                    letters: w.letters.clone(),
                });
            }
            return;
        }
        let remaining = w.len - pos - 1;
        for j in 0..w.edges.len() {
            let (u, v) = w.edges[j];
            let next = if u == cur {
                v
            } else if v == cur {
                u
            } else {
                continue;
            };
            if w.depth[next] <= remaining {
                w.letters.push(j as u8 + 1);
                step(w, next);
                w.letters.pop();
            }
        }
        if w.depth[cur] + 1 <= remaining {
            let fresh = w.depth.len();
            w.depth.push(w.depth[cur] + 1);
            w.edges.push((cur, fresh));
            w.letters.push(w.edges.len() as u8);
            step(w, fresh);
            w.letters.pop();
            w.edges.pop();
            w.depth.pop();
        }
    }

    if k == 0 {
        return Vec::new();
    }
    let mut walk = Walk {
        len: 2 * k,
        letters: Vec::with_capacity(2 * k),
        edges: Vec::new(),
        depth: vec![0],
        out: Vec::new(),
    };
    step(&mut walk, 0);
    walk.out.sort();
    walk.out
}

/// Which SS words a census counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Restriction {
    All,
    PairMatched,
}

/// Grouping key of an SS count table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grouping {
    Total,
    Blocks,
    EvenGenerating,
    BlocksAndEvenGenerating,
    BlockSizes,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub b: Option<usize>,
    pub r_plus_1: Option<usize>,
    pub block_sizes: Option<Vec<usize>>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub k: usize,
    pub grouping: Grouping,
    pub restriction: Restriction,
    pub rows: Vec<CountRow>,
}

impl CountTable {
    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }

    /// Count of the row with the given `r + 1` (for the even-generating grouping).
    pub fn by_even_generating(&self, r_plus_1: usize) -> u64 {
        self.rows
            .iter()
            .filter(|r| r.r_plus_1 == Some(r_plus_1))
            .map(|r| r.count)
            .sum()
    }

    pub fn to_csv(&self) -> String {
        let opt = |x: Option<usize>| x.map_or_else(|| "*".to_string(), |v| v.to_string());
        let mut s = String::new();
        if self.grouping == Grouping::BlockSizes {
            s.push_str("k,b,r_plus_1,block_sizes,count\n");
        } else {
            s.push_str("k,b,r_plus_1,count\n");
        }
        for row in &self.rows {
            s.push_str(&format!("{},{},{}", self.k, opt(row.b), opt(row.r_plus_1)));
            if let Some(sizes) = &row.block_sizes {
                let joined: Vec<String> = sizes.iter().map(|x| x.to_string()).collect();
                s.push_str(&format!(",{}", joined.join(" ")));
            }
            s.push_str(&format!(",{}\n", row.count));
        }
        s
    }
}

/// Exhaustive count of SS(2k) over all Bell(2k) partitions.
pub fn count_ss(k: usize, by: Grouping, restriction: Restriction, cap: usize) -> Result<CountTable> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    type Key = (Option<usize>, Option<usize>, Option<Vec<usize>>);
    let mut table: BTreeMap<Key, u64> = BTreeMap::new();
    for word in enumerate_words(2 * k, cap)? {
        if restriction == Restriction::PairMatched && word.multiplicities().iter().any(|&c| c != 2)
        {
            continue;
        }
        if !word.is_special_symmetric() {
            continue;
        }
        let stats = word_statistics(&word);
        let key: Key = match by {
            Grouping::Total => (None, None, None),
            Grouping::Blocks => (Some(stats.b), None, None),
            Grouping::EvenGenerating => (None, Some(stats.r_plus_1), None),
            Grouping::BlocksAndEvenGenerating => (Some(stats.b), Some(stats.r_plus_1), None),
            Grouping::BlockSizes => (Some(stats.b), None, Some(word.to_partition().block_sizes())),
        };
        *table.entry(key).or_default() += 1;
    }
    let rows = table
        .into_iter()
        .map(|((b, r_plus_1, block_sizes), count)| CountRow {
            b,
            r_plus_1,
            block_sizes,
            count,
        })
        .collect();
    Ok(CountTable {
        k,
        grouping: by,
        restriction,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(blocks: &[&[usize]]) -> Partition {
        Partition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn bell_counts() {
        assert_eq!(enumerate_partitions(1, 14).unwrap().count(), 1);
        assert_eq!(enumerate_partitions(3, 14).unwrap().count(), 5);
        assert_eq!(enumerate_partitions(4, 14).unwrap().count(), 15);
        for m in 1..=9 {
            assert_eq!(enumerate_words(m, 14).unwrap().count() as u128, bell(m));
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let err = enumerate_words(15, 14).unwrap_err();
        assert!(matches!(err, Error::SizeLimit { cap: 14, requested: 15, .. }));
        assert!(enumerate_words(8, 6).is_err());
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(Partition::new(vec![vec![1, 3]]).is_err());
        assert!(Partition::new(vec![vec![]]).is_err());
        let p = Partition::new(vec![vec![4, 3], vec![2, 1]]).unwrap();
        assert_eq!(p.blocks(), &[vec![1, 2], vec![3, 4]]);
    }

    #[test]
    fn literature_examples() {
        assert!(is_special_symmetric(&part(&[&[1, 2, 5, 6], &[3, 4, 7, 8]])));
        assert!(!is_special_symmetric(&part(&[&[1, 2, 6, 7], &[3, 4, 5, 8]])));
        assert!(is_special_symmetric(&part(&[&[1, 2]])));
        assert!(!part(&[&[1, 2, 5, 6], &[3, 4, 7, 8]]).is_non_crossing());
    }

    #[test]
    fn odd_ground_sets_are_never_special_symmetric() {
        for m in [1, 3, 5, 7] {
            assert!(enumerate_partitions(m, 14)
                .unwrap()
                .all(|p| !is_special_symmetric(&p)));
        }
    }

    #[test]
    fn singletons_are_rejected() {
        // The last block {3,4} is a single even run, but {1} and {2} are not.
        assert!(!is_special_symmetric(&part(&[&[1], &[2], &[3, 4]])));
    }

    #[test]
    fn classify_small_cases() {
        let c = classify(&part(&[&[1, 2], &[3, 4]]));
        assert!(c.is_pair && c.is_even_blocks && c.is_non_crossing && c.is_special_symmetric);
        assert_eq!((c.b, c.r_plus_1), (2, 1));

        let c = classify(&part(&[&[1, 4], &[2, 3]]));
        assert!(c.is_pair && c.is_even_blocks && c.is_non_crossing && c.is_special_symmetric);
        assert_eq!((c.b, c.r_plus_1), (2, 2));

        let c = classify(&part(&[&[1, 3], &[2, 4]]));
        assert!(c.is_pair && c.is_even_blocks);
        assert!(!c.is_non_crossing && !c.is_special_symmetric);
    }

    #[test]
    fn statistics_of_short_words() {
        let s = word_statistics(&Word::parse("aabb").unwrap());
        assert_eq!((s.b, s.r_plus_1), (2, 1));
        assert_eq!(s.first_occurrences, vec![1, 3]);
        let s = word_statistics(&Word::parse("abba").unwrap());
        assert_eq!((s.b, s.r_plus_1), (2, 2));
        let s = word_statistics(&Word::parse("aa").unwrap());
        assert_eq!((s.b, s.r_plus_1), (1, 1));
        assert_eq!(s.odd_generating(), 1);
    }

    #[test]
    fn word_parsing() {
        assert_eq!(Word::parse("xyyx").unwrap().to_string(), "abba");
        assert!(Word::from_letters(vec![2, 1]).is_err());
        assert!(Word::parse("").is_err());
        let w = Word::parse("abcabc").unwrap();
        assert_eq!(w.distinct(), 3);
        assert_eq!(w.multiplicities(), vec![2, 2, 2]);
    }

    #[test]
    fn ss_counts_small() {
        let t = count_ss(1, Grouping::Total, Restriction::All, 14).unwrap();
        assert_eq!(t.total(), 1);
        let t = count_ss(2, Grouping::Total, Restriction::All, 14).unwrap();
        assert_eq!(t.total(), 3);
        let t = count_ss(2, Grouping::EvenGenerating, Restriction::PairMatched, 14).unwrap();
        assert_eq!(t.by_even_generating(1), 1);
        assert_eq!(t.by_even_generating(2), 1);
    }

    #[test]
    fn count_table_csv() {
        let t = count_ss(2, Grouping::BlocksAndEvenGenerating, Restriction::All, 14).unwrap();
        assert_eq!(t.to_csv(), "k,b,r_plus_1,count\n2,1,1,1\n2,2,1,1\n2,2,2,1\n");
        let t = count_ss(2, Grouping::Total, Restriction::All, 14).unwrap();
        assert_eq!(t.to_csv(), "k,b,r_plus_1,count\n2,*,*,3\n");
    }

    #[test]
    fn partition_json_is_block_list() {
        let p = part(&[&[3, 4, 7, 8], &[1, 2, 5, 6]]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[[1,2,5,6],[3,4,7,8]]");
        let back: Partition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Partition>("[[1,1]]").is_err());
    }

    #[test]
    fn generator_agrees_with_exhaustive_filter() {
        for k in 1..=5 {
            let filtered: Vec<Word> = enumerate_words(2 * k, 14)
                .unwrap()
                .filter(Word::is_special_symmetric)
                .collect();
            assert_eq!(special_symmetric_words(k), filtered, "k = {k}");
        }
    }
}
