//! Verb implementations. Each writes its artifacts under `--out` and prints
//! a one-line summary.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sscov_core::census::{
    census_s_with, census_w_with, verify_containment, CensusResult, MatchRule,
};
use sscov_core::hypergraph::{
    acyclic_pair_census, acyclicity, count_noiry_classes, hypergraph_to_word, word_to_hypergraph,
    Hypergraph,
};
use sscov_core::moments::{
    carleman_diagnostic, poisson_sandwich, unbounded_support_bound, EvenSequence, MomentReport,
    MomentSource, MomentSpec, Sandwich, MAX_ORDER,
};
use sscov_core::partition::{classify, count_ss, special_symmetric_words, Grouping, Restriction};
use sscov_core::surface::{GridFunctions, Surface};
use sscov_core::{Partition, Word};
use sscov_sim::experiment::gnuplot_script;
use sscov_sim::{run_experiment, EnsembleConfig, Family, Profile};

use crate::error::{CliError, Result};
use crate::{
    verify, CensusArgs, ClassifyArgs, Cli, Command, CountArgs, Format, GroupBy, HypergraphArgs,
    LinkArg, MomentsArgs, RuleArg, SimulateArgs, VerifyArgs, DEFAULT_SEED,
};

pub fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Classify(a) => classify_cmd(cli, a),
        Command::Count(a) => count_cmd(cli, a),
        Command::Census(a) => census_cmd(cli, a),
        Command::Moments(a) => moments_cmd(cli, a),
        Command::Simulate(a) => simulate_cmd(cli, a),
        Command::Hypergraph(a) => hypergraph_cmd(cli, a),
        Command::Verify(a) => verify_cmd(cli, a),
    }
}

/// Floats in CSV artifacts: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn out_dir(cli: &Cli) -> Result<&Path> {
    fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::Other(format!("cannot create {}: {e}", cli.out.display())))?;
    Ok(&cli.out)
}

fn write_artifact(cli: &Cli, name: &str, contents: &str) -> Result<PathBuf> {
    let path = out_dir(cli)?.join(name);
    fs::write(&path, contents)
        .map_err(|e| CliError::Other(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Other(e.to_string()))
}

fn parse_partition(text: &str) -> Result<Partition> {
    let blocks: Vec<Vec<usize>> = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("partition must be JSON blocks like [[1,2],[3,4]]: {e}")))?;
    Ok(Partition::new(blocks)?)
}

fn parse_word(text: &str) -> Result<Word> {
    Ok(Word::parse(text)?)
}

/// `3`, `1..6` (inclusive, as in the usage text), `1..=6` or `1-6`.
pub fn parse_k_range(text: &str) -> Result<Vec<usize>> {
    let t = text.trim();
    let bad = || CliError::Config(format!("bad order range {text:?}"));
    let (lo, hi) = if let Some((a, b)) = t.split_once("..=") {
        (a, b)
    } else if let Some((a, b)) = t.split_once("..") {
        (a, b)
    } else if let Some((a, b)) = t.split_once('-') {
        (a, b)
    } else {
        (t, t)
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || hi < lo {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

#[derive(Serialize)]
struct ClassifyOutput {
    partition: Partition,
    word: Word,
    is_pair: bool,
    is_even_blocks: bool,
    is_non_crossing: bool,
    is_special_symmetric: bool,
    b: usize,
    r_plus_1: usize,
}

fn classify_cmd(cli: &Cli, a: &ClassifyArgs) -> Result<()> {
    let p = match (&a.partition, &a.word) {
        (Some(p), _) => parse_partition(p)?,
        (None, Some(w)) => parse_word(w)?.to_partition(),
        (None, None) => return Err(CliError::Config("give --partition or --word".into())),
    };
    let c = classify(&p);
    let out = ClassifyOutput {
        word: p.to_word(),
        partition: p,
        is_pair: c.is_pair,
        is_even_blocks: c.is_even_blocks,
        is_non_crossing: c.is_non_crossing,
        is_special_symmetric: c.is_special_symmetric,
        b: c.b,
        r_plus_1: c.r_plus_1,
    };
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string(&out).map_err(|e| CliError::Other(e.to_string()))?),
        Format::Csv => {
            println!("partition,word,is_pair,is_even_blocks,is_non_crossing,is_special_symmetric,b,r_plus_1");
            println!(
                "\"{}\",{},{},{},{},{},{},{}",
                out.partition,
                out.word,
                out.is_pair,
                out.is_even_blocks,
                out.is_non_crossing,
                out.is_special_symmetric,
                out.b,
                out.r_plus_1
            );
        }
    }
    Ok(())
}

fn count_cmd(cli: &Cli, a: &CountArgs) -> Result<()> {
    let by = match a.by {
        GroupBy::Total => Grouping::Total,
        GroupBy::Blocks => Grouping::Blocks,
        GroupBy::EvenGenerating => Grouping::EvenGenerating,
        GroupBy::BlocksAndEvenGenerating => Grouping::BlocksAndEvenGenerating,
        GroupBy::BlockSizes => Grouping::BlockSizes,
    };
    let restriction = if a.pair_matched {
        Restriction::PairMatched
    } else {
        Restriction::All
    };
    let table = count_ss(a.k, by, restriction, a.cap)?;
    let path = match cli.format {
        Format::Csv => write_artifact(cli, "counts.csv", &table.to_csv())?,
        Format::Json => write_artifact(cli, "counts.json", &to_json(&table)?)?,
    };
    println!(
        "count: k={} rows={} total={} -> {}",
        a.k,
        table.rows.len(),
        table.total(),
        path.display()
    );
    Ok(())
}

fn census_cmd(cli: &Cli, a: &CensusArgs) -> Result<()> {
    let mut words: Vec<Word> = a.words.iter().map(|w| parse_word(w)).collect::<Result<_>>()?;
    if let Some(k) = a.ss_words {
        if k == 0 || k > MAX_ORDER {
            return Err(CliError::SizeLimit(format!(
                "--ss-words must lie in 1..={MAX_ORDER}, got {k}"
            )));
        }
        words.extend(special_symmetric_words(k));
    }
    if words.is_empty() {
        return Err(CliError::Config("give --word or --ss-words".into()));
    }
    let rule = match a.rule {
        RuleArg::Implied => MatchRule::Implied,
        RuleArg::Exact => MatchRule::Exact,
    };
    let mut rows: Vec<CensusResult> = Vec::new();
    let mut contained = true;
    for w in &words {
        if matches!(a.link, LinkArg::S | LinkArg::Both) {
            rows.push(census_s_with(w, a.p, a.n, rule, a.budget)?);
        }
        if matches!(a.link, LinkArg::W | LinkArg::Both) {
            rows.push(census_w_with(w, a.p.max(a.n), rule, a.budget)?);
        }
        if a.containment {
            contained &= verify_containment(w, a.p, a.n, a.budget)?;
        }
    }
    let path = match cli.format {
        Format::Csv => {
            let mut s = format!("{}\n", CensusResult::CSV_HEADER);
            for r in &rows {
                s.push_str(&r.csv_row());
                s.push('\n');
            }
            write_artifact(cli, "census.csv", &s)?
        }
        Format::Json => write_artifact(cli, "census.json", &to_json(&rows)?)?,
    };
    let mismatches = rows
        .iter()
        .filter(|r| r.predicted_count.is_some_and(|p| p != r.exact_count))
        .count();
    let mut summary = format!(
        "census: {} rows, {} differ from the closed form",
        rows.len(),
        mismatches
    );
    if a.containment {
        summary.push_str(&format!(", containment {}", if contained { "holds" } else { "FAILS" }));
    }
    println!("{summary} -> {}", path.display());
    Ok(())
}

fn parse_g_csv(spec: &str) -> Result<GridFunctions> {
    let mut g = GridFunctions::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (idx, path) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("expected index=path, got {item:?}")))?;
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("bad index in {item:?}")))?;
        let text = fs::read_to_string(path.trim())
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.trim())))?;
        g.insert(idx, Surface::from_csv(&text)?)?;
    }
    Ok(g)
}

struct MomentSetup {
    spec: MomentSpec,
    sparse: Option<f64>,
}

fn moment_setup(a: &MomentsArgs, max_k: usize) -> Result<MomentSetup> {
    let (source, sparse) = if a.mp {
        (MomentSource::Constant(EvenSequence::marchenko_pastur(2 * max_k)), None)
    } else if let Some(c) = &a.c {
        (MomentSource::Constant(EvenSequence::parse(c)?), None)
    } else if let Some(l) = a.sparse {
        (MomentSource::Constant(EvenSequence::constant(l, 2 * max_k)?), Some(l))
    } else if let Some(g) = &a.g_csv {
        (MomentSource::Grid(parse_g_csv(g)?), None)
    } else if let Some(path) = &a.sigma_csv {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = EvenSequence::parse(a.base.as_deref().unwrap_or_default())?;
        (
            MomentSource::Profile {
                sigma: Surface::from_csv(&text)?,
                base,
            },
            None,
        )
    } else {
        return Err(CliError::Config(
            "choose a source: --mp, --c, --sparse, --g-csv or --sigma-csv".into(),
        ));
    };
    Ok(MomentSetup {
        spec: MomentSpec::new(a.y, source)?,
        sparse,
    })
}

/// `x -> integral of g_{2m}(x, u) du` for the chosen source.
fn row_marginal(spec_source: &MomentsArgs, m: usize) -> Result<Box<dyn Fn(f64) -> f64>> {
    let res = spec_source.resolution;
    let index = 2 * m;
    if spec_source.mp {
        let v = if m == 1 { 1.0 } else { 0.0 };
        return Ok(Box::new(move |_| v));
    }
    if let Some(l) = spec_source.sparse {
        return Ok(Box::new(move |_| l));
    }
    if let Some(c) = &spec_source.c {
        let v = EvenSequence::parse(c)?
            .get(index)
            .ok_or_else(|| CliError::Config(format!("missing C_{index}")))?;
        return Ok(Box::new(move |_| v));
    }
    if let Some(g) = &spec_source.g_csv {
        let g = parse_g_csv(g)?;
        let s = g
            .get(index)
            .ok_or_else(|| CliError::Config(format!("missing g_{index}")))?
            .clone();
        return Ok(Box::new(s.row_marginal(res)));
    }
    if let Some(path) = &spec_source.sigma_csv {
        let text = fs::read_to_string(path)?;
        let base = EvenSequence::parse(spec_source.base.as_deref().unwrap_or_default())?;
        let c = base
            .get(index)
            .ok_or_else(|| CliError::Config(format!("missing C_{index}")))?;
        let s = Surface::from_csv(&text)?.pow_scaled(index as i32, c);
        return Ok(Box::new(s.row_marginal(res)));
    }
    Err(CliError::Config("no moment source".into()))
}

#[derive(Serialize)]
struct MomentRow {
    #[serde(flatten)]
    report: MomentReport,
    y: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    sandwich: Option<Sandwich>,
}

fn moments_cmd(cli: &Cli, a: &MomentsArgs) -> Result<()> {
    let ks = parse_k_range(&a.k)?;
    let max_k = *ks.last().expect("non-empty range");
    let setup = moment_setup(a, max_k)?;
    let mut rows = Vec::with_capacity(ks.len());
    for &k in &ks {
        let mut report = setup.spec.evaluate(k, a.resolution)?;
        if !a.breakdown {
            report.breakdown.clear();
        }
        let sandwich = match setup.sparse {
            Some(l) => Some(poisson_sandwich(k, a.y, l)?),
            None => None,
        };
        rows.push(MomentRow {
            report,
            y: a.y,
            sandwich,
        });
    }
    let path = match cli.format {
        Format::Csv => {
            let mut s = String::from("k,y,value,exact,error_estimate");
            if setup.sparse.is_some() {
                s.push_str(",lower,upper");
            }
            s.push('\n');
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{}",
                    r.report.k,
                    fmt_f64(r.y),
                    fmt_f64(r.report.value),
                    r.report.exact.clone().unwrap_or_default(),
                    fmt_f64(r.report.error_estimate)
                ));
                if let Some(sw) = &r.sandwich {
                    s.push_str(&format!(",{},{}", fmt_f64(sw.lower), fmt_f64(sw.upper)));
                }
                s.push('\n');
            }
            write_artifact(cli, "moments.csv", &s)?
        }
        Format::Json => write_artifact(cli, "moments.json", &to_json(&rows)?)?,
    };
    let mut summary = format!("moments: k={}..{} y={} -> {}", ks[0], max_k, a.y, path.display());

    if let Some(kk) = a.carleman {
        let bounds = EvenSequence::parse(a.c.as_deref().expect("clap requires --c"))?;
        let terms = carleman_diagnostic(&bounds, kk)?;
        let p = match cli.format {
            Format::Csv => {
                let mut s = String::from("k,alpha,partial_sum\n");
                for t in &terms {
                    s.push_str(&format!("{},{},{}\n", t.k, fmt_f64(t.alpha), fmt_f64(t.partial_sum)));
                }
                write_artifact(cli, "carleman.csv", &s)?
            }
            Format::Json => write_artifact(cli, "carleman.json", &to_json(&terms)?)?,
        };
        summary.push_str(&format!("; carleman -> {}", p.display()));
    }

    if let Some(mt) = &a.support_bound {
        let (m, t) = mt
            .split_once(':')
            .and_then(|(m, t)| Some((m.trim().parse::<usize>().ok()?, t.trim().parse::<usize>().ok()?)))
            .ok_or_else(|| CliError::Config(format!("--support-bound expects M:T, got {mt:?}")))?;
        let f = row_marginal(a, m)?;
        let bound = unbounded_support_bound(m, t, f, a.resolution)?;
        let moment = setup.spec.evaluate(m * t, a.resolution)?.value;
        let s = format!(
            "m,t,k,bound,moment,holds\n{m},{t},{},{},{},{}\n",
            m * t,
            fmt_f64(bound),
            fmt_f64(moment),
            bound <= moment
        );
        let p = write_artifact(cli, "support_bound.csv", &s)?;
        summary.push_str(&format!("; support bound {} <= {} -> {}", bound, moment, p.display()));
    }
    println!("{summary}");
    Ok(())
}

/// Reads an ensemble description: the whole file, or its `[simulate]` table.
/// Relative grid paths are taken relative to the config file.
pub fn load_ensemble_config(path: &Path) -> Result<EnsembleConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if let Some(toml::Value::Table(inner)) = table.remove("simulate") {
        table = inner;
    }
    let mut cfg: EnsembleConfig = toml::Value::Table(table)
        .try_into()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if let Family::VarianceProfile {
        profile: Profile::GridCsv { path: grid },
        ..
    } = &mut cfg.family
    {
        if grid.is_relative() {
            if let Some(dir) = path.parent() {
                *grid = dir.join(&*grid);
            }
        }
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct SimulationSummary<'a> {
    config: &'a EnsembleConfig,
    moments: &'a [sscov_sim::MomentStat],
    histogram: &'a sscov_sim::Histogram,
    truncation_mass: Vec<f64>,
    achieved_scaled_moments: &'a Option<Vec<(usize, f64)>>,
}

fn simulate_cmd(cli: &Cli, a: &SimulateArgs) -> Result<()> {
    let mut cfg = load_ensemble_config(&a.config)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let report = run_experiment(&cfg)?;
    write_artifact(cli, "moments.csv", &report.moments_csv())?;
    write_artifact(cli, "hist.csv", &report.histogram.to_csv())?;
    write_artifact(cli, "diag.csv", &report.diagnostics_csv())?;
    if a.gnuplot {
        let title = a
            .config
            .file_stem()
            .map_or_else(|| "spectrum".to_string(), |s| s.to_string_lossy().into_owned());
        write_artifact(cli, "hist.gp", &gnuplot_script("hist.csv", &title))?;
    }
    if cli.format == Format::Json {
        let summary = SimulationSummary {
            config: &report.config,
            moments: &report.moments,
            histogram: &report.histogram,
            truncation_mass: report.samples.iter().map(|s| s.truncation_mass).collect(),
            achieved_scaled_moments: &report.achieved_scaled_moments,
        };
        write_artifact(cli, "report.json", &to_json(&summary)?)?;
    }
    let first = report.moment(1).map_or(f64::NAN, |m| m.mean);
    println!(
        "simulate: p={} n={} replicates={} seed={} mean beta_1={} eigenvalues={} -> {}",
        cfg.p,
        cfg.n,
        cfg.replicates,
        cfg.seed,
        fmt_f64(first),
        report.histogram.total(),
        cli.out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct HypergraphOutput {
    word: Word,
    sigma: Partition,
    tau: Partition,
    /// Sigma-block indices (1-based) touched by each tau block.
    incidence: Vec<Vec<usize>>,
    pairwise: bool,
    forest: bool,
    acyclic: bool,
}

fn describe(h: &Hypergraph, word: Word) -> HypergraphOutput {
    let r = acyclicity(h);
    HypergraphOutput {
        word,
        sigma: h.sigma().clone(),
        tau: h.tau().clone(),
        incidence: h
            .incidence()
            .iter()
            .map(|e| e.iter().map(|v| v + 1).collect())
            .collect(),
        pairwise: r.pairwise,
        forest: r.forest,
        acyclic: r.acyclic(),
    }
}

fn hypergraph_cmd(cli: &Cli, a: &HypergraphArgs) -> Result<()> {
    if let Some(w) = &a.word {
        let w = parse_word(w)?;
        let h = word_to_hypergraph(&w)?;
        let out = to_json(&describe(&h, w))?;
        let path = write_artifact(cli, "hypergraph.json", &out)?;
        print!("{out}");
        println!("hypergraph: -> {}", path.display());
        return Ok(());
    }
    if let (Some(s), Some(t)) = (&a.sigma, &a.tau) {
        let h = Hypergraph::new(parse_partition(s)?, parse_partition(t)?)?;
        let w = hypergraph_to_word(&h)?;
        let out = to_json(&describe(&h, w))?;
        let path = write_artifact(cli, "hypergraph.json", &out)?;
        print!("{out}");
        println!("hypergraph: -> {}", path.display());
        return Ok(());
    }
    let Some(k) = a.k else {
        return Err(CliError::Config("give --word, --sigma/--tau or --k".into()));
    };
    let classes = count_noiry_classes(k)?;
    let census = acyclic_pair_census(k)?;
    let (p1, p2) = match cli.format {
        Format::Csv => {
            let mut s = String::from("k,b,acyclic_pairs,ss_words\n");
            for r in &census.rows {
                s.push_str(&format!("{},{},{},{}\n", k, r.b, r.acyclic_pairs, r.ss_words));
            }
            (
                write_artifact(cli, "noiry_classes.csv", &classes.to_csv())?,
                write_artifact(cli, "hypergraph_counts.csv", &s)?,
            )
        }
        Format::Json => (
            write_artifact(cli, "noiry_classes.json", &to_json(&classes)?)?,
            write_artifact(cli, "hypergraph_counts.json", &to_json(&census)?)?,
        ),
    };
    println!(
        "hypergraph: k={k} classes={} total={} counts {} criteria disagree on {} pairs -> {}, {}",
        classes.classes.len(),
        classes.total(),
        if census.counts_match() { "match" } else { "DIFFER" },
        census.disagreements.len(),
        p1.display(),
        p2.display()
    );
    Ok(())
}

fn verify_cmd(cli: &Cli, a: &VerifyArgs) -> Result<()> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let report = verify::run_suite(a.max_k, seed)?;
    let path = write_artifact(cli, "verify_report.json", &to_json(&report)?)?;
    print!("{}", report.table());
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!(
        "verify: {} checks, {} failed -> {}",
        report.checks.len(),
        failed,
        path.display()
    );
    if failed > 0 {
        return Err(CliError::Numerical(format!("{failed} verification checks failed")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("3").unwrap(), vec![3]);
        assert_eq!(parse_k_range("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_k_range("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_k_range("1-2").unwrap(), vec![1, 2]);
        assert!(parse_k_range("0..2").is_err());
        assert!(parse_k_range("3..1").is_err());
        assert!(parse_k_range("x").is_err());
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
    }
}
