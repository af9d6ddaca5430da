use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sscov(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sscov"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn config_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs"))
}

#[test]
fn classify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = sscov(
        dir.path(),
        &["--format", "json", "classify", "--partition", "[[1,2,5,6],[3,4,7,8]]"],
    );
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["is_special_symmetric"], true);
    assert_eq!(v["word"], "aabbaabb");
    let o = sscov(dir.path(), &["classify", "--word", "aabbbaab"]);
    assert!(stdout(&o).contains(",aabbbaab,false,true,false,false,2,"));
}

#[test]
fn count_table_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let o = sscov(dir.path(), &["count", "--k", "2"]);
    assert!(o.status.success(), "{o:?}");
    let csv = fs::read_to_string(dir.path().join("counts.csv")).unwrap();
    assert_eq!(csv, "k,b,r_plus_1,count\n2,1,1,1\n2,2,1,1\n2,2,2,1\n");
    assert!(stdout(&o).starts_with("count: k=2 rows=3 total=3"));
}

#[test]
fn census_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let o = sscov(
        dir.path(),
        &["census", "--word", "abba", "--word", "abab", "--p", "2", "--n", "2", "--containment"],
    );
    assert!(o.status.success(), "{o:?}");
    let csv = fs::read_to_string(dir.path().join("census.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "word,link,p,n,exact,predicted");
    assert_eq!(lines[1], "abba,S,2,2,8,8");
    assert!(lines[2].starts_with("abab,S,2,2,"));
    assert!(stdout(&o).contains("containment holds"));
}

#[test]
fn mp_moments_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = sscov(dir.path(), &["moments", "--mp", "--k", "1..6", "--y", "0.5"]);
    assert!(o.status.success(), "{o:?}");
    let csv = fs::read_to_string(dir.path().join("moments.csv")).unwrap();
    let values: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    // Narayana sums at y = 1/2
    assert_eq!(values[..4], [1.0, 1.5, 2.75, 5.625]);
    assert_eq!(values.len(), 6);
    assert!(csv.lines().nth(3).unwrap().contains(",11/4,"));
}

#[test]
fn sparse_moments_with_sandwich_and_json_breakdown() {
    let dir = tempfile::tempdir().unwrap();
    let o = sscov(dir.path(), &["moments", "--sparse", "3", "--k", "2", "--y", "0.5"]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("moments.csv")).unwrap();
    assert!(csv.starts_with("k,y,value,exact,error_estimate,lower,upper\n"));
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let nums: Vec<f64> = [2, 5, 6].iter().map(|&i| row[i].parse().unwrap()).collect();
    assert_eq!(nums, vec![16.5, 6.0, 30.0]);

    let o = sscov(
        dir.path(),
        &["--format", "json", "moments", "--c", "2=1,4=2", "--k", "2", "--breakdown"],
    );
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("moments.json")).unwrap()).unwrap();
    assert_eq!(v[0]["breakdown"].as_array().unwrap().len(), 3);
}

#[test]
fn grid_moments_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = dir.path().join("g2.csv");
    fs::write(&g2, "1,1\n1,1\n").unwrap();
    let spec = format!("2={}", g2.display());
    let o = sscov(
        dir.path(),
        &["moments", "--g-csv", &spec, "--k", "1", "--support-bound", "1:1"],
    );
    assert!(o.status.success(), "{o:?}");
    let sb = fs::read_to_string(dir.path().join("support_bound.csv")).unwrap();
    assert!(sb.trim_end().ends_with(",true"));

    let o = sscov(dir.path(), &["moments", "--c", "2=1,4=1,6=1", "--k", "1", "--carleman", "3"]);
    assert!(o.status.success());
    let c = fs::read_to_string(dir.path().join("carleman.csv")).unwrap();
    assert_eq!(c.lines().count(), 4);
    assert!(c.lines().nth(2).unwrap().starts_with("2,4.0000000000000000e0,"));
}

#[test]
fn hypergraph_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = sscov(dir.path(), &["hypergraph", "--word", "abba"]);
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("hypergraph.json")).unwrap()).unwrap();
    assert_eq!(v["sigma"], serde_json::json!([[1], [2]]));
    assert_eq!(v["tau"], serde_json::json!([[1, 2]]));
    assert_eq!(v["acyclic"], true);

    let o = sscov(dir.path(), &["hypergraph", "--sigma", "[[1,2]]", "--tau", "[[1],[2]]"]);
    assert!(stdout(&o).contains("\"word\": \"aabb\""));
    let o = sscov(dir.path(), &["hypergraph", "--sigma", "[[1],[2]]", "--tau", "[[1],[2]]"]);
    assert_eq!(o.status.code(), Some(1));

    let o = sscov(dir.path(), &["hypergraph", "--k", "2"]);
    assert!(o.status.success());
    let t = fs::read_to_string(dir.path().join("noiry_classes.csv")).unwrap();
    assert_eq!(t, "k,a,l,multiset,count\n2,1,1,4,1\n2,2,1,2 2,1\n2,2,2,2 2,1\n");
    let c = fs::read_to_string(dir.path().join("hypergraph_counts.csv")).unwrap();
    assert_eq!(c, "k,b,acyclic_pairs,ss_words\n2,1,1,1\n2,2,2,2\n");
}

#[test]
fn simulate_small_config_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    fs::write(
        &cfg,
        "[simulate]\np = 30\nn = 60\nreplicates = 3\n[simulate.family]\nkind = \"sparse-bernoulli\"\nlambda = 3.0\n",
    )
    .unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let cfg_s = cfg.to_str().unwrap();
    let oa = sscov(&a, &["--seed", "5", "--threads", "1", "simulate", "--config", cfg_s, "--gnuplot"]);
    let ob = sscov(&b, &["--seed", "5", "--threads", "3", "simulate", "--config", cfg_s]);
    assert!(oa.status.success() && ob.status.success(), "{oa:?}");
    for f in ["moments.csv", "hist.csv", "diag.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    assert!(a.join("hist.gp").exists());
    let hist = fs::read_to_string(a.join("hist.csv")).unwrap();
    let total: u64 = hist.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 90);
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sscov"))
        .env("SSCOV_OUT", dir.path())
        .args(["count", "--k", "1"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("counts.csv").exists());
}

#[test]
fn bundled_configs_parse() {
    for name in ["fig1.toml", "fig2.toml", "mp.toml", "dt.toml"] {
        let cfg = sscov_cli::commands::load_ensemble_config(&config_dir().join(name)).unwrap();
        cfg.validate().unwrap();
    }
}

#[test]
fn verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = sscov(dir.path(), &["verify", "--max-k", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(!s.contains("FAIL"));
    for module in ["partition-core", "circuit-census", "moment-engine", "ensemble-sim", "hypergraph-bridge"] {
        assert!(s.contains(module), "{module}");
    }
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify_report.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // malformed flags and config
    assert_eq!(sscov(dir.path(), &["moments", "--k", "x", "--mp"]).status.code(), Some(2));
    assert_eq!(sscov(dir.path(), &["classify", "--partition", "[[1,1]]"]).status.code(), Some(2));
    assert_eq!(sscov(dir.path(), &["frobnicate"]).status.code(), Some(2));
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "p = 3\n").unwrap();
    assert_eq!(
        sscov(dir.path(), &["simulate", "--config", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    // size limits
    assert_eq!(sscov(dir.path(), &["count", "--k", "9"]).status.code(), Some(3));
    assert_eq!(sscov(dir.path(), &["moments", "--mp", "--k", "11"]).status.code(), Some(3));
    assert_eq!(
        sscov(dir.path(), &["census", "--word", "abcabc", "--p", "5000", "--n", "5000"]).status.code(),
        Some(3)
    );
    assert_eq!(sscov(dir.path(), &["verify", "--max-k", "9"]).status.code(), Some(3));
    // domain errors
    assert_eq!(sscov(dir.path(), &["hypergraph", "--word", "abab"]).status.code(), Some(1));
}
