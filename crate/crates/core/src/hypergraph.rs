//! Hypergraphs of special symmetric words.
//!
//! For a word of length `2k` tracing the circuit `pi(0), pi(1), ..., pi(2k) = pi(0)`,
//! element `i` of `{1..k}` stands for the even vertex `pi(2i - 2)` in `sigma`
//! and for the odd vertex `pi(2i - 1)` in `tau`. Odd vertex `pi(2i - 1)` is
//! adjacent to `pi(2i - 2)` and `pi(2i)`, so tau element `i` touches the sigma
//! blocks containing `i` and `i + 1` (cyclically, `k + 1` is `1`).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{
    enumerate_partitions, special_symmetric_words, word_statistics, Partition, Word,
};

/// Largest `k` for which the pair enumeration `Bell(k)^2` is attempted.
pub const MAX_PAIR_K: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    k: usize,
    sigma: Partition,
    tau: Partition,
}

impl Hypergraph {
    pub fn new(sigma: Partition, tau: Partition) -> Result<Self> {
        if sigma.m() != tau.m() {
            return Err(Error::InvalidInput(format!(
                "sigma partitions {{1..{}}} but tau partitions {{1..{}}}",
                sigma.m(),
                tau.m()
            )));
        }
        Ok(Self {
            k: sigma.m(),
            sigma,
            tau,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sigma(&self) -> &Partition {
        &self.sigma
    }

    pub fn tau(&self) -> &Partition {
        &self.tau
    }

    /// For each tau block, the indices (0-based) of the sigma blocks it touches.
    pub fn incidence(&self) -> Vec<BTreeSet<usize>> {
        let sl = self.sigma.labels();
        let k = self.k;
        self.tau
            .blocks()
            .iter()
            .map(|w| {
                w.iter()
                    .flat_map(|&i| [sl[i - 1] as usize - 1, sl[i % k] as usize - 1])
                    .collect()
            })
            .collect()
    }

    /// Distinct (sigma block, tau block) incidences: the edges of the
    /// bipartite incidence graph, which are the letters of the word.
    pub fn incidence_edges(&self) -> usize {
        self.incidence().iter().map(BTreeSet::len).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcyclicityReport {
    /// No two tau-edges share two or more sigma-vertices.
    pub pairwise: bool,
    /// The sigma/tau incidence graph is a forest.
    pub forest: bool,
}

impl AcyclicityReport {
    pub fn acyclic(&self) -> bool {
        self.pairwise && self.forest
    }

    pub fn criteria_disagree(&self) -> bool {
        self.pairwise != self.forest
    }
}

pub fn acyclicity(h: &Hypergraph) -> AcyclicityReport {
    let inc = h.incidence();
    let pairwise = inc.iter().enumerate().all(|(a, ea)| {
        inc[a + 1..]
            .iter()
            .all(|eb| ea.intersection(eb).count() <= 1)
    });
    // union-find over sigma blocks followed by tau blocks
    let ns = h.sigma.block_count();
    let mut parent: Vec<usize> = (0..ns + inc.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut forest = true;
    'outer: for (t, e) in inc.iter().enumerate() {
        for &s in e {
            let (a, b) = (find(&mut parent, s), find(&mut parent, ns + t));
            if a == b {
                forest = false;
                break 'outer;
            }
            parent[a] = b;
        }
    }
    AcyclicityReport { pairwise, forest }
}

pub fn is_acyclic(h: &Hypergraph) -> bool {
    acyclicity(h).acyclic()
}

fn partition_from_labels(labels: &[usize]) -> Partition {
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        blocks.entry(l).or_default().push(i + 1);
    }
    Partition::new(blocks.into_values().collect()).expect("labels cover 1..k")
}

/// Circuit vertices `pi(0..2k)` of a special symmetric word, numbered in
/// order of first visit.
fn circuit_vertices(w: &Word) -> Result<Vec<usize>> {
    let not_ss = || Error::Domain(format!("{w} is not special symmetric"));
    if w.is_empty() || w.len() % 2 == 1 || !w.is_special_symmetric() {
        return Err(not_ss());
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut next_vertex = 1;
    let mut path = vec![0usize];
    for &c in w.letters() {
        let cur = *path.last().expect("non-empty");
        let letter = c as usize - 1;
        let to = if letter == edges.len() {
            edges.push((cur, next_vertex));
            next_vertex += 1;
            next_vertex - 1
        } else {
            let (u, v) = edges[letter];
            if cur == u {
                v
            } else if cur == v {
                u
            } else {
                return Err(not_ss());
            }
        };
        path.push(to);
    }
    path.pop();
    Ok(path)
}

pub fn word_to_hypergraph(w: &Word) -> Result<Hypergraph> {
    let path = circuit_vertices(w)?;
    let k = path.len() / 2;
    let even: Vec<usize> = (0..k).map(|i| path[2 * i]).collect();
    let odd: Vec<usize> = (0..k).map(|i| path[2 * i + 1]).collect();
    Hypergraph::new(partition_from_labels(&even), partition_from_labels(&odd))
}

/// The word of the closed walk `sigma(1), tau(1), sigma(2), tau(2), ...`,
/// with one letter per distinct (sigma block, tau block) incidence.
fn walk_word(h: &Hypergraph) -> Word {
    let k = h.k;
    let (sl, tl) = (h.sigma.labels(), h.tau.labels());
    let mut keys = Vec::with_capacity(2 * k);
    for i in 0..k {
        keys.push((sl[i], tl[i]));
        keys.push((sl[(i + 1) % k], tl[i]));
    }
    Word::canonicalize(&keys).expect("length 2k is within the letter limit")
}

pub fn hypergraph_to_word(h: &Hypergraph) -> Result<Word> {
    let report = acyclicity(h);
    if !report.acyclic() {
        return Err(Error::Domain(format!(
            "hypergraph sigma={} tau={} has a cycle",
            h.sigma, h.tau
        )));
    }
    let w = walk_word(h);
    if h.sigma.block_count() + h.tau.block_count() != w.distinct() + 1 {
        return Err(Error::Domain(format!(
            "hypergraph sigma={} tau={} violates |sigma| + |tau| = b + 1",
            h.sigma, h.tau
        )));
    }
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCensusRow {
    pub b: usize,
    pub acyclic_pairs: u64,
    pub ss_words: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCensus {
    pub k: usize,
    pub rows: Vec<PairCensusRow>,
    /// Pairs on which the pairwise and forest criteria disagree.
    pub disagreements: Vec<(Partition, Partition, AcyclicityReport)>,
}

impl PairCensus {
    pub fn counts_match(&self) -> bool {
        self.rows.iter().all(|r| r.acyclic_pairs == r.ss_words)
    }
}

/// Enumerates every `(sigma, tau)` in `P(k)^2`, counts the acyclic ones with
/// `|sigma| + |tau| = b + 1` for each `b`, and compares with `|SS_b(2k)|`.
pub fn acyclic_pair_census(k: usize) -> Result<PairCensus> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if k > MAX_PAIR_K {
        return Err(Error::SizeLimit {
            what: "hypergraph pair enumeration k",
            requested: k as u128,
            cap: MAX_PAIR_K as u128,
        });
    }
    let parts: Vec<Partition> = enumerate_partitions(k, MAX_PAIR_K)?.collect();
    let mut acyclic: BTreeMap<usize, u64> = BTreeMap::new();
    let mut disagreements = Vec::new();
    for sigma in &parts {
        for tau in &parts {
            let h = Hypergraph::new(sigma.clone(), tau.clone())?;
            let report = acyclicity(&h);
            if report.criteria_disagree() {
                disagreements.push((sigma.clone(), tau.clone(), report.clone()));
            }
            let b = h.incidence_edges();
            if report.acyclic() && sigma.block_count() + tau.block_count() == b + 1 {
                *acyclic.entry(b).or_default() += 1;
            }
        }
    }
    let mut ss: BTreeMap<usize, u64> = BTreeMap::new();
    for w in special_symmetric_words(k) {
        *ss.entry(w.distinct()).or_default() += 1;
    }
    let rows = (1..=k)
        .map(|b| PairCensusRow {
            b,
            acyclic_pairs: acyclic.get(&b).copied().unwrap_or(0),
            ss_words: ss.get(&b).copied().unwrap_or(0),
        })
        .collect();
    Ok(PairCensus {
        k,
        rows,
        disagreements,
    })
}

/// `(a, l, multiset)`: letters, odd generating vertices, and the
/// non-increasing letter multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NoiryClassKey {
    pub a: usize,
    pub l: usize,
    pub b_multiset: Vec<usize>,
}

impl NoiryClassKey {
    pub fn new(a: usize, l: usize, mut b_multiset: Vec<usize>) -> Result<Self> {
        if b_multiset.len() != a || b_multiset.iter().any(|&b| b < 2) {
            return Err(Error::InvalidInput(format!(
                "class multiset {b_multiset:?} must have {a} entries, each at least 2"
            )));
        }
        b_multiset.sort_unstable_by(|x, y| y.cmp(x));
        Ok(Self { a, l, b_multiset })
    }

    pub fn of_word(w: &Word) -> Self {
        let stats = word_statistics(w);
        let mut b_multiset = w.multiplicities();
        b_multiset.sort_unstable_by(|x, y| y.cmp(x));
        Self {
            a: stats.b,
            l: stats.odd_generating(),
            b_multiset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiryTable {
    pub k: usize,
    pub classes: Vec<(NoiryClassKey, u64)>,
}

impl NoiryTable {
    pub fn total(&self) -> u64 {
        self.classes.iter().map(|(_, c)| c).sum()
    }

    pub fn get(&self, key: &NoiryClassKey) -> u64 {
        self.classes
            .iter()
            .find(|(k, _)| k == key)
            .map_or(0, |(_, c)| *c)
    }

    /// Marginal count over words with `l` odd generating vertices.
    pub fn by_odd_generating(&self, l: usize) -> u64 {
        self.classes
            .iter()
            .filter(|(k, _)| k.l == l)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,a,l,multiset,count\n");
        for (key, count) in &self.classes {
            let ms: Vec<String> = key.b_multiset.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                self.k,
                key.a,
                key.l,
                ms.join(" "),
                count
            ));
        }
        s
    }
}

/// Largest `k` for [`count_noiry_classes`].
pub const MAX_NOIRY_K: usize = 10;

pub fn count_noiry_classes(k: usize) -> Result<NoiryTable> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if k > MAX_NOIRY_K {
        return Err(Error::SizeLimit {
            what: "noiry class k",
            requested: k as u128,
            cap: MAX_NOIRY_K as u128,
        });
    }
    let mut table: BTreeMap<NoiryClassKey, u64> = BTreeMap::new();
    for w in special_symmetric_words(k) {
        *table.entry(NoiryClassKey::of_word(&w)).or_default() += 1;
    }
    Ok(NoiryTable {
        k,
        classes: table.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(blocks: &[&[usize]]) -> Partition {
        Partition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn literature_examples() {
        let h = word_to_hypergraph(&w("aa")).unwrap();
        assert_eq!((h.sigma(), h.tau()), (&part(&[&[1]]), &part(&[&[1]])));
        let h = word_to_hypergraph(&w("abba")).unwrap();
        assert_eq!(h.sigma(), &part(&[&[1], &[2]]));
        assert_eq!(h.tau(), &part(&[&[1, 2]]));
        assert!(is_acyclic(&h));
        let h = word_to_hypergraph(&w("aabb")).unwrap();
        assert_eq!(h.sigma(), &part(&[&[1, 2]]));
        assert_eq!(h.tau(), &part(&[&[1], &[2]]));
        assert_eq!(hypergraph_to_word(&h).unwrap(), w("aabb"));
    }

    #[test]
    fn double_edge_is_cyclic() {
        let h = Hypergraph::new(part(&[&[1], &[2]]), part(&[&[1], &[2]])).unwrap();
        let r = acyclicity(&h);
        assert!(!r.pairwise && !r.forest);
        assert!(hypergraph_to_word(&h).is_err());
    }

    #[test]
    fn triangle_separates_criteria() {
        let s = part(&[&[1], &[2], &[3]]);
        let h = Hypergraph::new(s.clone(), s).unwrap();
        let r = acyclicity(&h);
        assert!(r.pairwise && !r.forest);
    }

    #[test]
    fn non_ss_rejected() {
        assert!(matches!(word_to_hypergraph(&w("abab")), Err(Error::Domain(_))));
        assert!(Hypergraph::new(part(&[&[1]]), part(&[&[1, 2]])).is_err());
    }

    #[test]
    fn noiry_small_tables() {
        let t = count_noiry_classes(1).unwrap();
        assert_eq!(t.classes, vec![(NoiryClassKey::new(1, 1, vec![2]).unwrap(), 1)]);
        let t = count_noiry_classes(2).unwrap();
        assert_eq!(t.total(), 3);
        assert_eq!(t.get(&NoiryClassKey::new(1, 1, vec![4]).unwrap()), 1);
        assert_eq!(t.get(&NoiryClassKey::new(2, 1, vec![2, 2]).unwrap()), 1);
        assert_eq!(t.get(&NoiryClassKey::new(2, 2, vec![2, 2]).unwrap()), 1);
        assert_eq!(
            t.to_csv(),
            "k,a,l,multiset,count\n2,1,1,4,1\n2,2,1,2 2,1\n2,2,2,2 2,1\n"
        );
        assert!(NoiryClassKey::new(2, 1, vec![4]).is_err());
    }
}
