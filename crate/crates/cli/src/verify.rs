//! Cross-module identity suite behind `sscov verify`.

use serde::Serialize;
use sscov_core::census::{
    census_s, census_w, predicted_count_s, verify_containment, DEFAULT_CENSUS_BUDGET,
};
use sscov_core::hypergraph::{
    acyclic_pair_census, count_noiry_classes, hypergraph_to_word, is_acyclic, word_to_hypergraph,
};
use sscov_core::moments::{
    moment_constant_exact, moment_grid, moment_sparse, mp_moment_exact, narayana,
    poisson_sandwich, rational, unbounded_support_bound, EvenSequence,
};
use sscov_core::partition::{
    count_ss, enumerate_words, special_symmetric_words, word_statistics, Grouping, Restriction,
    DEFAULT_ENUMERATION_CAP,
};
use sscov_core::surface::{GridFunctions, Surface};
use sscov_core::Partition;
use sscov_sim::spectrum::power_sums;
use sscov_sim::{run_experiment, EnsembleConfig, Family};

use crate::error::{CliError, Result};

/// Largest `--max-k` accepted (the pair census enumerates `Bell(k)^2` pairs).
pub const MAX_VERIFY_K: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub max_k: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{}  {:<18} {:<width$}  {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.module,
                c.name,
                c.detail
            ));
        }
        s
    }
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn record(&mut self, module: &'static str, name: String, result: Result<(bool, String)>) {
        let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check {
            module,
            name,
            passed,
            detail,
        });
    }
}

fn catalan(k: usize) -> u64 {
    // C_k = binom(2k, k) / (k + 1)
    let mut c = 1u64;
    for i in 0..k as u64 {
        c = c * (2 * (2 * i + 1)) / (i + 2);
    }
    c
}

pub fn run_suite(max_k: usize, seed: u64) -> Result<VerifyReport> {
    if max_k == 0 {
        return Err(CliError::Config("--max-k must be at least 1".into()));
    }
    if max_k > MAX_VERIFY_K {
        return Err(CliError::SizeLimit(format!(
            "--max-k {max_k} exceeds the verify limit of {MAX_VERIFY_K}"
        )));
    }
    let mut s = Suite { checks: Vec::new() };

    s.record("partition-core", "classification examples".into(), (|| {
        let yes = Partition::new(vec![vec![1, 2, 5, 6], vec![3, 4, 7, 8]])?;
        let no = Partition::new(vec![vec![1, 2, 6, 7], vec![3, 4, 5, 8]])?;
        let (a, b) = (yes.to_word().is_special_symmetric(), no.to_word().is_special_symmetric());
        Ok((a && !b, format!("{yes}: {a}, {no}: {b}")))
    })());

    for k in 1..=max_k {
        s.record("partition-core", format!("pair-matched SS = NC2, k={k}"), (|| {
            let mut ss = 0u64;
            let mut agree = true;
            for w in enumerate_words(2 * k, DEFAULT_ENUMERATION_CAP)? {
                let p = w.to_partition();
                if p.is_pair() {
                    let is_ss = w.is_special_symmetric();
                    agree &= is_ss == p.is_non_crossing();
                    ss += is_ss as u64;
                }
            }
            Ok((agree && ss == catalan(k), format!("{ss} words, Catalan {}", catalan(k))))
        })());
    }

    for k in 1..=max_k {
        s.record("partition-core", format!("Narayana refinement, k={k}"), (|| {
            let t = count_ss(k, Grouping::EvenGenerating, Restriction::PairMatched, DEFAULT_ENUMERATION_CAP)?;
            let got: Vec<u64> = (1..=k).map(|r1| t.by_even_generating(r1)).collect();
            let want: Vec<u64> = (0..k).map(|r| narayana(k, r).try_into().unwrap_or(u64::MAX)).collect();
            Ok((got == want, format!("{got:?}")))
        })());
    }

    let census_k = max_k.min(3);
    s.record("circuit-census", format!("closed-form census, 2k<={}", 2 * census_k), (|| {
        let mut words = 0;
        for k in 1..=census_k {
            for w in special_symmetric_words(k) {
                for p in 1..=3u32 {
                    for n in 1..=3u32 {
                        let c = census_s(&w, p, n, DEFAULT_CENSUS_BUDGET)?;
                        if Some(c.exact_count) != predicted_count_s(&w, p, n) {
                            return Ok((false, format!("{w} at p={p} n={n}: {}", c.exact_count)));
                        }
                    }
                }
                let stats = word_statistics(&w);
                if census_w(&w, 3, DEFAULT_CENSUS_BUDGET)?.exact_count != 3u128.pow(stats.b as u32 + 1) {
                    return Ok((false, format!("Wigner census of {w}")));
                }
                if !verify_containment(&w, 2, 3, DEFAULT_CENSUS_BUDGET)? {
                    return Ok((false, format!("containment fails for {w}")));
                }
                words += 1;
            }
        }
        Ok((true, format!("{words} words, (p,n) in {{1..3}}^2")))
    })());

    s.record("circuit-census", "MP coefficients from census".into(), (|| {
        // sum of p^(r+1) n^(b-r) / (p n^k) over pair-matched words at p = n
        // is the Catalan number; with p = 2, n = 1 it weights y^r with y = 2
        let k = census_k;
        let mut total = 0u128;
        for w in special_symmetric_words(k) {
            if w.multiplicities().iter().all(|&m| m == 2) {
                total += census_s(&w, 2, 1, DEFAULT_CENSUS_BUDGET)?.exact_count;
            }
        }
        let mp = mp_moment_exact(k, &rational(2.0)?) * rational(2.0)?;
        let want = mp.to_integer().to_string();
        Ok((total.to_string() == want, format!("k={k}: {total} vs {want}")))
    })());

    for k in 1..=max_k {
        s.record("moment-engine", format!("MP reduction, k={k}"), (|| {
            let y = rational(0.5)?;
            let (v, _) = moment_constant_exact(k, &y, &EvenSequence::marchenko_pastur(2 * k))?;
            let mp = mp_moment_exact(k, &y);
            Ok((v == mp, format!("{mp}")))
        })());
    }

    for k in 1..=max_k.min(4) {
        s.record("moment-engine", format!("Poisson sandwich, k={k}"), (|| {
            let mut worst = String::new();
            let mut ok = true;
            for lambda in [0.5, 1.0, 2.0] {
                for y in [0.5, 2.0] {
                    let m = moment_sparse(k, y, lambda)?.value;
                    let b = poisson_sandwich(k, y, lambda)?;
                    // at k = 1 the classes coincide and one side is an equality
                    let inside = if k == 1 {
                        b.lower <= m && m <= b.upper
                    } else {
                        b.lower < m && m < b.upper
                    };
                    if !inside {
                        ok = false;
                        worst = format!("lambda={lambda} y={y}: {} {m} {}", b.lower, b.upper);
                    }
                }
            }
            let detail = if ok {
                if k == 1 { "non-strict at k=1".to_string() } else { "strict".to_string() }
            } else {
                worst
            };
            Ok((ok, detail))
        })());
    }

    s.record("moment-engine", "quadrature vs exact".into(), (|| {
        let c = [(2, 1.25), (4, 0.5), (6, 2.0)];
        let seq = EvenSequence::from_pairs(c)?;
        let mut g = GridFunctions::new();
        for (i, v) in c {
            g.insert(i, Surface::constant(v))?;
        }
        let k = max_k.min(3);
        let (exact, _) = moment_constant_exact(k, &rational(0.5)?, &seq)?;
        let exact = sscov_core::moments::to_f64(&exact);
        let grid = moment_grid(k, 0.5, &g, 8)?.value;
        let prod = GridFunctions::new().with(2, Surface::new("xu", |x, u| x * u))?;
        let q = moment_grid(1, 1.0, &prod, 128)?.value;
        Ok((
            (exact - grid).abs() <= 1e-10 * exact && (q - 0.25).abs() <= 1e-6,
            format!("|diff|={:e}, int xu={q}", (exact - grid).abs()),
        ))
    })());

    s.record("moment-engine", "star-word support bound".into(), (|| {
        let g = (1..=4).try_fold(GridFunctions::new(), |g, m| {
            g.with(2 * m, Surface::constant(if m == 1 { 1.0 } else { 0.0 }))
        })?;
        for t in 1..=max_k.min(4) {
            let b = unbounded_support_bound(1, t, |_| 1.0, 64)?;
            let v = moment_grid(t, 1.0, &g, 8)?.value;
            if b > v {
                return Ok((false, format!("t={t}: {b} > {v}")));
            }
        }
        Ok((true, "bound <= MP moment".into()))
    })());

    let hyper_k = max_k.min(4);
    s.record("hypergraph-bridge", format!("round trip, 2k<={}", 2 * hyper_k), (|| {
        let mut n = 0;
        for k in 1..=hyper_k {
            for w in special_symmetric_words(k) {
                let h = word_to_hypergraph(&w)?;
                if !is_acyclic(&h) || hypergraph_to_word(&h)? != w {
                    return Ok((false, format!("{w}")));
                }
                n += 1;
            }
        }
        Ok((true, format!("{n} words")))
    })());

    s.record("hypergraph-bridge", format!("acyclic pairs = SS_b, k<={hyper_k}"), (|| {
        let mut disagreements = 0;
        for k in 1..=hyper_k {
            let c = acyclic_pair_census(k)?;
            if !c.counts_match() {
                return Ok((false, format!("k={k}: {:?}", c.rows)));
            }
            disagreements += c.disagreements.len();
        }
        Ok((true, format!("pairwise and forest criteria disagree on {disagreements} pairs")))
    })());

    s.record("hypergraph-bridge", format!("class totals, k<={max_k}"), (|| {
        for k in 1..=max_k {
            let t = count_noiry_classes(k)?;
            let n = special_symmetric_words(k).len() as u64;
            if t.total() != n {
                return Ok((false, format!("k={k}: {} vs {n}", t.total())));
            }
        }
        Ok((true, "totals equal |SS(2k)|".into()))
    })());

    s.record("ensemble-sim", "PSD spectra match trace powers".into(), (|| {
        let cfg = EnsembleConfig::new(Family::IidStandardized, 40, 80)
            .with_seed(seed)
            .with_replicates(2)
            .with_max_moment(4);
        let r = run_experiment(&cfg)?;
        for smp in &r.samples {
            let sums = power_sums(&smp.eigenvalues, 4);
            for (a, b) in smp.empirical_moments.iter().zip(&sums) {
                if (a - b).abs() > 1e-8 * a.abs() {
                    return Ok((false, format!("{a} vs {b}")));
                }
            }
        }
        Ok((true, format!("beta_2 = {:.4}", r.moments[1].mean)))
    })());

    let passed = s.checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        max_k,
        seed,
        passed,
        checks: s.checks,
    })
}
