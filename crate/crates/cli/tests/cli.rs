use std::path::PathBuf;
use std::process::{Command, Output};

fn nilcent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilcent"))
        .args(args)
        .env_remove("NILCENT_THREADS")
        .env_remove("NILCENT_GOLDEN_DIR")
        .output()
        .expect("run nilcent")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

#[test]
fn table_matches_golden_files() {
    for n in [6, 7] {
        let out = nilcent(&["table", "--n", &n.to_string()]);
        assert_eq!(out.status.code(), Some(0));
        let golden = std::fs::read_to_string(golden_dir().join(format!("table_n{n}.txt"))).unwrap();
        assert_eq!(stdout(&out), golden, "n={n}");

        let dir = golden_dir();
        let checked = nilcent(&["table", "--n", &n.to_string(), "--golden-dir", dir.to_str().unwrap()]);
        assert_eq!(checked.status.code(), Some(0));
    }
}

#[test]
fn table_mismatch_exits_one() {
    let dir = tempdir();
    std::fs::write(dir.join("table_n6.txt"), "(P1) (12)\n").unwrap();
    let out = nilcent(&["table", "--n", "6", "--golden-dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn enumerate_json_counts() {
    let out = nilcent(&["enumerate", "--n", "6", "--field", "C64", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 38);

    let out = nilcent(&["enumerate", "--n", "7", "--field", "C64", "--json"]);
    assert_eq!(json(&out).as_array().unwrap().len(), 56);
}

#[test]
fn enumerate_case_filter() {
    let out = nilcent(&["enumerate", "--n", "6", "--field", "Q", "--cases", "P1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let classes = json(&out);
    let classes = classes.as_array().unwrap();
    assert_eq!(classes.len(), 12);
    for c in classes {
        for case in c["cases"].as_array().unwrap() {
            assert_eq!(case["id"], "P1");
        }
    }
}

#[test]
fn enumerate_human_output() {
    let out = nilcent(&["enumerate", "--n", "3", "--field", "Fp:5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("(6)  P1(s=1)"), "{text}");
    assert!(text.trim_end().ends_with("classes"));
}

#[test]
fn witness_round_trips_through_jordan() {
    let out = nilcent(&["witness", "--n", "7", "--field", "Fp:11", "--partition", "5,3,3,3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["verified"], true);
    assert_eq!(doc["partition"], serde_json::json!([5, 3, 3, 3]));
    assert_eq!(doc["case"]["id"], "P8");

    let dir = tempdir();
    let path = dir.join("w.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let j = nilcent(&["jordan", "--field", "Fp:11", "--element", path.to_str().unwrap(), "--json"]);
    assert_eq!(j.status.code(), Some(0));
    assert_eq!(json(&j)["partition"], serde_json::json!([5, 3, 3, 3]));

    let plain = nilcent(&["jordan", "--field", "Fp:11", "--element", path.to_str().unwrap()]);
    assert_eq!(stdout(&plain).trim(), "(5,3^3)");

    let wrong = nilcent(&["jordan", "--field", "Q", "--element", path.to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn witness_failures() {
    let out = nilcent(&["witness", "--n", "7", "--field", "C64", "--partition", "14"]);
    assert_eq!(out.status.code(), Some(2));

    let out = nilcent(&["witness", "--n", "6", "--field", "Q", "--partition", "11,1"]);
    assert_eq!(out.status.code(), Some(1));

    // No rational special u: the P9 type has no witness over Q.
    let out = nilcent(&["witness", "--n", "9", "--field", "Q", "--partition", "5,5,5,3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_small_exhaustive() {
    let out = nilcent(&["verify", "--n", "3", "--field", "Fp:2", "--mode", "exhaustive", "--threads", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["candidates"], 4096);
    assert!(report["extras"].as_array().unwrap().is_empty());
    assert!(report["missing_guaranteed"].as_array().unwrap().is_empty());
}

#[test]
fn verify_sampled() {
    let out = nilcent(&["verify", "--n", "3", "--field", "Fp:3", "--mode", "sample", "--samples", "2000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["mode"]["kind"], "sampled");
}

#[test]
fn verify_rejects_bad_input() {
    for args in [
        &["verify", "--n", "3", "--field", "Q"][..],
        &["verify", "--n", "3", "--field", "C64"],
        &["verify", "--n", "3", "--field", "Fp:4"],
        &["verify", "--n", "9", "--field", "Fp:7", "--budget", "1000"],
    ] {
        assert_eq!(nilcent(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn special_u() {
    let out = nilcent(&["special-u", "--j", "3", "--alpha", "5", "--field", "Q"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["u"], "-1/1");

    let out = nilcent(&["special-u", "--j", "5", "--alpha", "7", "--field", "Q"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["u"].is_null());

    let out = nilcent(&["special-u", "--j", "5", "--alpha", "7", "--field", "Fp:11"]);
    assert_eq!(json(&out)["candidates"], serde_json::json!(["2", "6"]));

    let out = nilcent(&["special-u", "--j", "5", "--alpha", "7", "--field", "C64"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["h_j_abs"].as_f64().unwrap() < 1e-9);

    let out = nilcent(&["special-u", "--j", "2", "--alpha", "7", "--field", "Q"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["enumerate", "--n", "x", "--field", "Q"][..],
        &["enumerate", "--n", "4", "--field", "R"],
        &["enumerate", "--n", "4", "--field", "Q", "--cases", "P10"],
        &["witness", "--n", "4", "--field", "Q", "--partition", "a,b"],
        &["frobnicate"],
        &[],
    ] {
        assert_eq!(nilcent(args).status.code(), Some(2), "{args:?}");
    }
}

fn tempdir() -> PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!(
        "nilcent-cli-{}-{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
