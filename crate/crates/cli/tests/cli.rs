use std::path::PathBuf;
use std::process::{Command, Output};

use flagcode::{Field, Matrix};
use serde_json::Value;

fn flagcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagcode"))
        .args(args)
        .env_remove("SEGRE_THREADS")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = flagcode(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("flagcode-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn params_json() {
    assert_eq!(
        stdout(&["params", "--q", "2", "--n", "2", "--format", "json"]),
        "{\"N\":21,\"k\":8,\"d\":6,\"w_second\":8,\"w_max\":14}\n"
    );
    let v = json(&["params", "--p", "3", "--e", "1", "--n", "2"]);
    assert_eq!(v["N"], 52);
    assert_eq!(v["d"], 24);
    let v = json(&["params", "--q", "2", "--n", "2", "--segre"]);
    assert_eq!((v["N"].as_u64(), v["k"].as_u64(), v["d"].as_u64()), (Some(49), Some(9), Some(16)));
}

#[test]
fn params_csv() {
    assert_eq!(stdout(&["params", "--q", "4", "--n", "2", "--format", "csv"]), "N,k,d,w_second,w_max\n105,8,60,64,84\n");
}

#[test]
fn prime_power_q_matches_p_e() {
    let a = stdout(&["genmat", "--q", "4", "--n", "2"]);
    let b = stdout(&["genmat", "--p", "2", "--e", "2", "--n", "2"]);
    assert_eq!(a, b);
}

#[test]
fn genmat_formats_agree() {
    let csv = stdout(&["genmat", "--q", "3", "--n", "2"]);
    let v = json(&["genmat", "--q", "3", "--n", "2", "--format", "json"]);
    assert_eq!((v["rows"].as_u64(), v["cols"].as_u64()), (Some(8), Some(52)));
    let from_json: Vec<String> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row.as_array().unwrap().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    assert_eq!(csv.lines().collect::<Vec<_>>(), from_json);

    // CSV rows re-parse to a matrix of full rank
    let text = format!("8 52 3 1\n{}", csv.replace(',', " "));
    let g = Matrix::parse(&text).unwrap();
    assert_eq!(g.rank(), 8);
}

#[test]
fn genmat_columns_follow_flag_dump() {
    let dump = temp_file("flags.txt", "");
    let csv = stdout(&["genmat", "--q", "2", "--n", "2", "--dump-flags", dump.to_str().unwrap()]);
    let flags = std::fs::read_to_string(&dump).unwrap();
    assert_eq!(flags, stdout(&["dump-flags", "--q", "2", "--n", "2"]));
    assert_eq!(flags.lines().count(), 21);
    assert_eq!(csv.lines().next().unwrap().split(',').count(), 21);
    assert!(flags.starts_with("0 0 1 0 | 0 0 1\n"), "{flags}");
}

#[test]
fn dump_flags_lambda() {
    assert_eq!(stdout(&["dump-flags", "--q", "2", "--n", "2", "--variant", "lambda"]).lines().count(), 49);
}

#[test]
fn spectrum_formula_and_exhaustive() {
    let f = json(&["spectrum", "--q", "2", "--n", "2", "--mode", "formula"]);
    assert_eq!(f["mode"], "formula");
    assert_eq!(f["weights"], serde_json::json!([6, 8, 10, 12, 14]));
    assert_eq!(f["profiles"]["()"], 14);
    assert_eq!(f["profiles"]["(1,2)"], 6);
    let e = json(&["spectrum", "--q", "2", "--n", "2", "--mode", "exhaustive"]);
    assert_eq!(e["weights"], f["weights"]);
    let total: u64 = e["counts"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total, 256);
    assert_eq!(e["counts"]["0"], 1);
}

#[test]
fn spectrum_sampled_needs_seed() {
    let out = flagcode(&["spectrum", "--q", "2", "--n", "4", "--mode", "sampled"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&["spectrum", "--q", "2", "--n", "4", "--mode", "sampled", "--samples", "100", "--seed", "3"]);
    let total: u64 = v["counts"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total, 100);
}

#[test]
fn spectrum_too_large() {
    let out = flagcode(&["spectrum", "--q", "2", "--n", "5", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds"));
}

#[test]
fn encode_and_classify() {
    // E_11 over GF(2): rank 1, trace 1, a minimum-weight word
    let path = temp_file("e11.txt", "3 3 2 1\n1 0 0\n0 0 0\n0 0 0\n");
    let word = stdout(&["encode", "--matrix", path.to_str().unwrap()]);
    let values: Vec<u32> = word.trim().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(values.len(), 21);
    assert_eq!(values.iter().filter(|&&v| v != 0).count(), 6);

    let c = json(&["classify", "--matrix", path.to_str().unwrap()]);
    assert_eq!(c["weight"], 6);
    assert_eq!(c["kind"], "MINIMUM");
    assert_eq!(c["witness"], serde_json::json!([[1, 0, 0], [1, 0, 0]]));
}

#[test]
fn encode_matches_library() {
    let f = Field::from_order(3).unwrap();
    let m = Matrix::from_rows(&f, &[vec![0, 1, 2], vec![2, 1, 0], vec![1, 1, 1]]).unwrap();
    let path = temp_file("m3.txt", &m.to_text());
    let sys = flagcode::FlagSystem::build(2, &f, flagcode::Variant::Lambda1).unwrap();
    let expected: Vec<String> = sys.evaluate(&m).iter().map(u32::to_string).collect();
    assert_eq!(stdout(&["encode", "--matrix", path.to_str().unwrap()]), format!("{}\n", expected.join(",")));
}

#[test]
fn bad_matrix_file() {
    let path = temp_file("bad.txt", "3 3 2 1\n1 0\n");
    let out = flagcode(&["encode", "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = flagcode(&["classify", "--matrix", "/nonexistent/matrix.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["params", "--q", "6", "--n", "2"],
        vec!["params", "--q", "2", "--n", "0"],
        vec!["params", "--n", "2"],
        vec!["params", "--q", "2", "--p", "2", "--n", "2"],
        vec!["verify", "--q", "2", "--n", "2", "--checks", "weights,bogus"],
        vec!["verify", "--q", "2", "--n", "2", "--checks", "automorphism"],
        vec!["frobnicate"],
    ] {
        assert_eq!(flagcode(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_passes_at_3_2() {
    let out = flagcode(&["verify", "--q", "3", "--n", "2", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = v["checks"].as_object().unwrap();
    assert_eq!(checks.len(), 5);
    assert!(checks.values().all(|c| c["status"] == "pass"));
    assert_eq!(v["checks"]["minimality"]["counters"]["cutting_set_hyperplanes"], 3280);
}

#[test]
fn verify_reports_failure_with_status_1() {
    // GF(2), n = 2 carries 42 non-minimal words
    let out = flagcode(&["verify", "--q", "2", "--n", "2", "--checks", "minimality,weights"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"]["minimality"]["status"], "fail");
    assert_eq!(v["checks"]["minimality"]["counters"]["cutting_set_failures"], 42);
    assert_eq!(v["checks"]["weights"]["status"], "pass");
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["spectrum", "--q", "2", "--n", "3", "--mode", "exhaustive"];
    let base = stdout(&args);
    for t in ["1", "2", "7"] {
        let mut with = args.to_vec();
        with.extend(["--threads", t]);
        assert_eq!(stdout(&with), base);
        let env = Command::new(env!("CARGO_BIN_EXE_flagcode")).args(args).env("SEGRE_THREADS", t).output().unwrap();
        assert_eq!(String::from_utf8(env.stdout).unwrap(), base);
    }
}
