use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn tnt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tnt")).args(args).env("TNT_THREADS", "2").output().expect("binary runs")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = tnt(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn construct(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["construct"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path.to_str().unwrap()]);
    assert_eq!(tnt(&full).status.code(), Some(0));
    path
}

#[test]
fn info_on_bundled_datasets() {
    let (code, v) = json(&["info", &data("M6_16.facets")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["f_vector"], serde_json::json!([16, 112, 448, 980, 1232, 840, 240]));
    assert_eq!(v["report"]["euler_characteristic"], 4);
    assert_eq!(v["inputs"][0]["hash"].as_str().unwrap().len(), 32);
    let (_, v) = json(&["info", &data("walkup_P.facets")]);
    assert_eq!(v["report"]["f_vector"], serde_json::json!([13, 42, 58, 37, 9]));
}

#[test]
fn info_flags_non_pure_and_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let np = dir.path().join("np.facets");
    std::fs::write(&np, "1 2 3\n3 4\n").unwrap();
    let (code, v) = json(&["info", np.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["pure"], false);
    let bad = dir.path().join("bad.facets");
    std::fs::write(&bad, "1 2 3\n1 two\n").unwrap();
    let out = tnt(&["info", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(tnt(&["info", dir.path().join("absent").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(tnt(&["bogus"]).status.code(), Some(2));
    assert_eq!(tnt(&["verify", &data("M6_16.facets"), "--suite", "nope"]).status.code(), Some(2));
    let m3 = construct(dir.path(), "m3.facets", &["dataset", "walkup_M3"]);
    assert_eq!(tnt(&["verify", m3.to_str().unwrap(), "--suite", "walkup_m3", "--seed", "1"]).status.code(), Some(0));
    let c46 = construct(dir.path(), "c46.facets", &["cyclic", "--dim", "4", "--n", "6"]);
    let (code, v) = json(&["verify", c46.to_str().unwrap(), "--suite", "walkup_m3", "--seed", "1"]);
    assert_eq!(code, 1);
    let witness = &v["report"]["details"]["tightness"]["verdict"];
    assert_eq!(witness["degree"], 1);
    // a stacked sphere that needs moves cannot be certified with no budget
    let s = construct(dir.path(), "s.facets", &["stacked", "--dim", "3", "--n", "12", "--seed", "4"]);
    assert_eq!(tnt(&["stacked", s.to_str().unwrap(), "--k", "1", "--seed", "1", "--budget", "0"]).status.code(), Some(3));
    assert_eq!(tnt(&["bounds", "six", "--chi", "4", "--f0", "14"]).status.code(), Some(2));
}

#[test]
fn bounds_commands() {
    let (code, v) = json(&["bounds", "six", "--chi", "4", "--f0", "14", "--two-neighborly"]);
    assert_eq!((code, &v["report"]["bound"]), (0, &serde_json::json!(364)));
    let (_, v) = json(&["bounds", "tight-neighborly", "--dim", "13", "--beta1", "2"]);
    assert_eq!(v["report"]["bound"], 35);
    let (_, v) = json(&["bounds", "glbc", "--dim", "5", "--k", "2", "--j", "2", "--f", "1,7,21"]);
    assert_eq!(v["report"]["bound"], 35);
    let (_, v) = json(&["bounds", "heawood", "--chi", "-2"]);
    assert_eq!(v["report"]["bound"], 9);
    let (code, _) = json(&["bounds", "dehn-sommerville", "--chi", "4", "--f", "16,112,448,980"]);
    assert_eq!(code, 0);
    let (code, _) = json(&["bounds", "dehn-sommerville", "--chi", "4", "--f", "16,112,448,981"]);
    assert_eq!(code, 1);
    let big = "10000000000000000000000000000000000000000";
    let (code, v) = json(&["bounds", "tight-neighborly", "--dim", "3", "--beta1", big]);
    assert_eq!(code, 0);
    assert!(v["report"]["bound"].is_string());
}

#[test]
fn stacked_certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let link = data("M6_16_link1.facets");
    let cert = dir.path().join("link1.cert.json");
    let out = tnt(&["stacked", &link, "--k", "2", "--seed", "7", "--certificate", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert!(parsed["moves"].as_array().unwrap().iter().all(|m| m["A"].is_array() && m["B"].is_array()));
    assert_eq!(tnt(&["check-certificate", &link, cert.to_str().unwrap()]).status.code(), Some(0));
    // replaying against a different complex fails
    let other = construct(dir.path(), "other.facets", &["simplex", "--dim", "6"]);
    assert_eq!(tnt(&["check-certificate", other.to_str().unwrap(), cert.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn randomized_commands_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let s = construct(dir.path(), "s.facets", &["stacked", "--dim", "3", "--n", "16", "--seed", "9"]);
    let p = s.to_str().unwrap();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            let mut out = tnt(&["--format", "json", "reduce", p, "--target-f0", "5", "--seed", "3"]).stdout;
            out.extend(tnt(&["--format", "json", "morse", p, "--orderings", "40", "--seed", "5"]).stdout);
            out.extend(tnt(&["--format", "json", "tight", p, "--imax", "1", "--sample", "50", "--seed", "2", "--ceiling", "8"]).stdout);
            out
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let (code, v) = json(&["reduce", p, "--target-f0", "5", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["f_vector"], serde_json::json!([5, 10, 10, 5]));
    let (code, v) = json(&["tight", p, "--imax", "1", "--sample", "50", "--seed", "2", "--ceiling", "8"]);
    assert!(code == 1 || code == 3);
    assert_eq!(v["report"]["mode"], "sampled, not exhaustive");
    assert_eq!(tnt(&["morse", p, "--orderings", "5"]).status.code(), Some(2));
}

#[test]
fn construct_families_and_link() {
    let dir = tempfile::tempdir().unwrap();
    let (_, v) = json(&["construct", "kuehnel", "--dim", "3"]);
    assert_eq!(v["report"]["f_vector"][0], 9);
    let a = construct(dir.path(), "a.facets", &["simplex", "--dim", "3"]);
    let b = construct(dir.path(), "b.facets", &["simplex", "--dim", "5"]);
    let (_, v) = json(&["construct", "product", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(v["report"]["f_vector"][0], 24);
    assert_eq!(v["inputs"].as_array().unwrap().len(), 2);
    let (_, v) = json(&["construct", "connected-sum", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(v["report"]["f_vector"], serde_json::json!([5, 9, 6]));
    let (_, v) = json(&["construct", "cross", "--dim", "3"]);
    assert_eq!(v["report"]["f_vector"], serde_json::json!([6, 12, 8]));
    let (_, v) = json(&["link", &data("M6_16.facets"), "--face", "1"]);
    assert_eq!(v["report"]["f_vector"][0], 14);
    let stored = std::fs::read_to_string(data("M6_16_link1.facets")).unwrap();
    let (_, fresh) = json(&["link", &data("M6_16.facets"), "--face", "1"]);
    assert_eq!(fresh["report"]["facets"].as_array().unwrap().len(), stored.lines().filter(|l| !l.starts_with('#')).count());
}
