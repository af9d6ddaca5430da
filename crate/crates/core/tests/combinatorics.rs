use std::collections::BTreeSet;

use proptest::prelude::*;
use sscov_core::census::{census_exhaustive, census_s, census_w, MatchRule, DEFAULT_CENSUS_BUDGET};
use sscov_core::census::Link;
use sscov_core::partition::{
    count_ss, enumerate_words, special_symmetric_words, word_statistics, Grouping, Restriction,
    DEFAULT_ENUMERATION_CAP,
};
use sscov_core::{Partition, Word};

/// Walk oracle: a word is special symmetric exactly when reading it as a
/// closed walk (a fresh letter opens a fresh vertex, a repeated letter must be
/// crossed from one of its endpoints) returns to the start.
fn walk_oracle(letters: &[u8]) -> bool {
    let mut ends: Vec<(usize, usize)> = Vec::new();
    let mut vertices = 1;
    let mut at = 0;
    for &c in letters {
        let j = c as usize - 1;
        if j == ends.len() {
            ends.push((at, vertices));
            at = vertices;
            vertices += 1;
        } else if ends[j].0 == at {
            at = ends[j].1;
        } else if ends[j].1 == at {
            at = ends[j].0;
        } else {
            return false;
        }
    }
    at == 0
}

fn binomial(n: u64, r: u64) -> u64 {
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn filter_matches_walk_oracle_through_length_twelve() {
    let expected = [1u64, 3, 12, 57, 303, 1747];
    for k in 1..=6 {
        let mut count = 0;
        for w in enumerate_words(2 * k, DEFAULT_ENUMERATION_CAP).unwrap() {
            let oracle = walk_oracle(w.letters());
            assert_eq!(w.is_special_symmetric(), oracle, "{w}");
            count += oracle as u64;
        }
        assert_eq!(count, expected[k - 1]);
        assert_eq!(special_symmetric_words(k).len() as u64, count);
    }
}

#[test]
fn odd_lengths_are_never_special_symmetric() {
    for m in [1, 3, 5, 7] {
        assert!(enumerate_words(m, DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .all(|w| !w.is_special_symmetric()));
    }
}

#[test]
fn pair_matched_ss_are_the_non_crossing_pairings() {
    let catalan = [1u64, 2, 5, 14, 42];
    for k in 1..=5 {
        let mut ss = BTreeSet::new();
        let mut nc2 = BTreeSet::new();
        for w in enumerate_words(2 * k, DEFAULT_ENUMERATION_CAP).unwrap() {
            let p = w.to_partition();
            if !p.is_pair() {
                continue;
            }
            if w.is_special_symmetric() {
                ss.insert(w.clone());
            }
            if p.is_non_crossing() {
                nc2.insert(w);
            }
        }
        assert_eq!(ss, nc2);
        assert_eq!(ss.len() as u64, catalan[k - 1]);
    }
}

#[test]
fn narayana_refinement() {
    for k in 1..=6u64 {
        let t = count_ss(
            k as usize,
            Grouping::EvenGenerating,
            Restriction::PairMatched,
            DEFAULT_ENUMERATION_CAP,
        )
        .unwrap();
        for r in 0..k {
            let n = binomial(k, r) * binomial(k - 1, r) / (r + 1);
            assert_eq!(t.by_even_generating(r as usize + 1), n, "k={k} r={r}");
        }
    }
}

#[test]
fn non_crossing_even_partitions_are_special_symmetric() {
    for k in 1..=5 {
        for w in enumerate_words(2 * k, DEFAULT_ENUMERATION_CAP).unwrap() {
            let p = w.to_partition();
            if p.is_even_blocks() && p.is_non_crossing() {
                assert!(w.is_special_symmetric(), "{w}");
            }
            if w.is_special_symmetric() {
                assert!(p.is_even_blocks(), "{w}");
            }
        }
    }
}

#[test]
fn classification_examples() {
    let yes = Partition::new(vec![vec![1, 2, 5, 6], vec![3, 4, 7, 8]]).unwrap();
    let no = Partition::new(vec![vec![1, 2, 6, 7], vec![3, 4, 5, 8]]).unwrap();
    assert!(yes.to_word().is_special_symmetric());
    assert!(!no.to_word().is_special_symmetric());
}

#[test]
fn census_closed_form_for_all_short_ss_words() {
    for k in 1..=3 {
        for w in special_symmetric_words(k) {
            let s = word_statistics(&w);
            for p in 1..=3u32 {
                for n in 1..=3u32 {
                    let got = census_s(&w, p, n, DEFAULT_CENSUS_BUDGET).unwrap();
                    let closed =
                        (p as u128).pow(s.r_plus_1 as u32) * (n as u128).pow((s.b - s.r()) as u32);
                    assert_eq!(got.exact_count, closed, "{w} p={p} n={n}");
                    let brute = census_exhaustive(
                        &w,
                        Link::S,
                        p,
                        n,
                        MatchRule::Implied,
                        DEFAULT_CENSUS_BUDGET,
                    )
                    .unwrap();
                    assert_eq!(brute, closed);
                }
            }
            let wig = census_w(&w, 3, DEFAULT_CENSUS_BUDGET).unwrap();
            assert_eq!(wig.exact_count, 3u128.pow(s.b as u32 + 1), "{w}");
        }
    }
}

fn rgs(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..8, 1..=max_len).prop_map(|raw| {
        let mut out = Vec::with_capacity(raw.len());
        let mut top = 0u8;
        for r in raw {
            let c = (r % (top + 1)) + 1;
            top = top.max(c);
            out.push(c);
        }
        out
    })
}

proptest! {
    #[test]
    fn word_partition_round_trip(letters in rgs(12)) {
        let w = Word::from_letters(letters).unwrap();
        let p = w.to_partition();
        prop_assert_eq!(p.to_word(), w.clone());
        prop_assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn filter_agrees_with_walk(letters in rgs(14)) {
        let w = Word::from_letters(letters.clone()).unwrap();
        prop_assert_eq!(w.is_special_symmetric(), walk_oracle(&letters));
    }

    #[test]
    fn generating_vertices_split(letters in rgs(14)) {
        let w = Word::from_letters(letters).unwrap();
        let s = word_statistics(&w);
        prop_assert_eq!(s.odd_generating() + s.r_plus_1, s.b + 1);
        if w.is_special_symmetric() {
            prop_assert!(s.r_plus_1 >= 1 && s.r_plus_1 <= w.len() / 2);
        }
    }

    #[test]
    fn canonicalize_is_relabeling_invariant(letters in rgs(10), shift in 1u8..20) {
        let relabeled: Vec<u8> = letters.iter().map(|c| c.wrapping_mul(7).wrapping_add(shift)).collect();
        prop_assert_eq!(
            Word::canonicalize(&relabeled).unwrap(),
            Word::from_letters(letters).unwrap()
        );
    }
}
