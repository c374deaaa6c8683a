//! End-to-end runs of the binary: file formats, metadata and exit codes.

use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn qcroots(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcroots")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn brute_count(d: i64, max_m: i64) -> usize {
    (1..=max_m).map(|m| (0..m).filter(|mu| (mu * mu - d).rem_euclid(m) == 0).count()).sum()
}

#[test]
fn roots_lists_every_root() {
    let out = qcroots(&["roots", "--D", "2", "--M", "100"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,mu"));
    assert_eq!(lines.count(), brute_count(2, 100));
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn roots_with_filter_and_negative_discriminant() {
    let out = qcroots(&["roots", "--D", "3", "--M", "2", "--n", "2", "--nu", "1"]);
    assert_eq!(stdout(&out), "m,mu\n2,1\n");
    let out = qcroots(&["roots", "--D", "-1", "--M", "10"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count() - 1, brute_count(-1, 10));
}

#[test]
fn classgroup_json() {
    let out = qcroots(&["classgroup", "--D", "10"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["D"], 10);
    assert_eq!(v["h_plus"], 2);
    assert_eq!(v["eps0"]["x"], 19);
    assert_eq!(v["eps0"]["y"], 6);
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    for c in classes {
        assert_eq!(c["form"].as_array().unwrap().len(), 3);
        assert_eq!(c["M_l"].as_array().unwrap().len(), 2);
        assert!(c["endpoints"][0].as_str().unwrap().contains("sqrt(10)"));
    }
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys.len(), 4);
}

#[test]
fn invalid_discriminant_is_a_validation_error() {
    let out = qcroots(&["compare", "--D", "5", "--N", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(report["error"], "validation");
    assert!(report["detail"].as_str().unwrap().contains("discriminant ≡ 1 mod 4"));

    let out = qcroots(&["roots", "--D", "2", "--M", "10", "--n", "3", "--nu", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qcroots(&["roots", "--D", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_cutoff_exceeds_the_budget() {
    let out = qcroots(&["paircorr-theory", "--D", "2", "--Q", "1e9"]);
    assert_eq!(out.status.code(), Some(4));
    let report: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(report["error"], "budget");
}

#[test]
fn correspond_check_has_no_failures() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pos.csv");
    let out = qcroots(&["correspond-check", "--D", "2", "--M", "10000", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["roundtrip_failures"], 0);
    assert_eq!(summary["checked"].as_u64().unwrap() as usize, brute_count(2, 10000));
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["m", "mu", "l", "t"]);
    assert_eq!(rows.len(), brute_count(2, 10000));
    let period = 2.0 * (3.0 + 2.0 * 2f64.sqrt()).ln();
    for r in &rows {
        let t: f64 = r[3].parse().unwrap();
        assert!((0.0..period).contains(&t));
    }
}

#[test]
fn correspond_check_reads_root_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("roots.csv");
    std::fs::write(&input, "m,mu\n7,3\n11,5\n").unwrap();
    let out = qcroots(&["correspond-check", "--D", "3", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "(7, 3) is not a root for D = 3");
    std::fs::write(&input, "m,mu\n11,5\n13,4\n1,0\n").unwrap();
    let out = qcroots(&["correspond-check", "--D", "3", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["checked"], 3);
}

#[test]
fn theory_csv_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("theory.csv");
    let out = qcroots(&[
        "paircorr-theory", "--D", "2", "--Q", "200", "--vmin", "-1", "--vmax", "1", "--step", "0.5", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["v", "w", "tail_bound"]);
    let vs: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(vs, [-1.0, -0.5, 0.0, 0.5, 1.0]);
    let meta = read_json(&dir.path().join("theory.csv.json"));
    assert_eq!(meta["format_version"], 1);
    assert_eq!(meta["config"]["subcommand"], "paircorr-theory");
    // Keys are written in a fixed order.
    let text = std::fs::read_to_string(dir.path().join("theory.csv.json")).unwrap();
    let results = &text[text.find("\"results\"").unwrap()..];
    let keys = ["\"D\"", "\"n\"", "\"nu\"", "\"Q\"", "\"kappa\"", "\"h_plus\"", "\"eps0\"", "\"coset_count\"", "\"normalization_choice\""];
    let positions: Vec<usize> = keys.iter().map(|k| results.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{positions:?}");
    assert_eq!(meta["results"]["normalization_choice"]["choice"], "composed");
    assert_eq!(meta["results"]["eps0"], "3+2*sqrt(2)");

    let out = qcroots(&["paircorr-theory", "--D", "2", "--Q", "20", "--max-tail", "1e-9"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn compare_smoke_run_is_fast_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cmp.csv");
    let start = Instant::now();
    let out = qcroots(&["compare", "--D", "3", "--N", "10000", "--no-check", "--out", path.to_str().unwrap()]);
    assert!(start.elapsed() < Duration::from_secs(5), "took {:?}", start.elapsed());
    assert!(out.status.success());
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["v_lo", "v_hi", "empirical", "theory", "tail_bound"]);
    assert_eq!(rows.len(), 80);
    for r in &rows {
        let vals: Vec<f64> = r.iter().map(|x| x.parse().unwrap()).collect();
        assert!(vals[0] < vals[1]);
        assert!(vals[2] >= 0.0 && vals[3] >= 0.0 && vals[4] >= 0.0);
    }
    let meta = read_json(&dir.path().join("cmp.csv.json"));
    assert_eq!(meta["config"]["N"], 10000);
    assert_eq!(meta["results"]["checked"], false);
    assert_eq!(meta["results"]["report"]["points"], 10000);
}

#[test]
fn compare_enforces_tolerances() {
    let out = qcroots(&["compare", "--D", "2", "--N", "2000", "--Q", "100", "--max-error", "1e-6"]);
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(report["error"], "tolerance");
    assert!(report["detail"]["max_error"].as_f64().unwrap() > 1e-6);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = qcroots(&[
            "counting", "--D", "2", "--N", "20000", "--lo", "0", "--hi", "2", "--sampling", "palm", "--samples",
            "5000", "--seed", "9", "--out", path.to_str().unwrap(), "--threads", "2",
        ]);
        assert!(out.status.success());
        let meta = std::fs::read_to_string(dir.path().join(format!("{name}.json"))).unwrap();
        (std::fs::read(&path).unwrap(), meta.replace(name, "X"))
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn empirical_gaps_and_weyl_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let pc = dir.path().join("pc.csv");
    let out = qcroots(&["paircorr-empirical", "--D", "2", "--N", "5000", "--out", pc.to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&pc);
    assert_eq!(header, ["v_lo", "v_hi", "count", "density"]);
    assert_eq!(rows.len(), 200);
    let meta = read_json(&dir.path().join("pc.csv.json"));
    assert_eq!(meta["results"]["N"], 5000);
    assert!(meta["results"]["M"].as_u64().unwrap() > 0);

    let gp = dir.path().join("gaps.csv");
    let out = qcroots(&["gaps", "--D", "2", "--N", "5000", "--out", gp.to_str().unwrap()]);
    assert!(out.status.success());
    let meta = read_json(&dir.path().join("gaps.csv.json"));
    assert!((meta["results"]["sum"].as_f64().unwrap() - 5000.0).abs() < 1e-9);

    let out = qcroots(&["weyl", "--D", "2", "--M", "1", "--h", "1,-1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "h,re,im,count,relative\n1,1.0,0.0,1,1.0\n-1,1.0,0.0,1,1.0\n");
    let out = qcroots(&["weyl", "--D", "2", "--M", "10", "--h", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
