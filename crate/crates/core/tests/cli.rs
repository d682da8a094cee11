use std::process::Command;

use ambiclass::cli::VerificationRecord;
use serde_json::Value;

fn ambiclass(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ambiclass"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn records(stdout: &str) -> Vec<VerificationRecord> {
    stdout
        .lines()
        .map(|l| serde_json::from_str(l).expect("record parses"))
        .collect()
}

#[test]
fn verify_negative_range_ordinary() {
    let (code, out, err) = ambiclass(&["verify", "--min", "-100", "--max", "-3", "--cycle", "ordinary"]);
    assert_eq!(code, 0, "{err}");
    let recs = records(&out);
    assert!(!recs.is_empty());
    assert!(recs.iter().all(|r| r.matches && r.cycle == "ordinary"));
    assert!(recs.windows(2).all(|w| w[0].d < w[1].d));
    assert!(err.contains("mismatched=0"));
}

#[test]
fn verify_positive_range_both_cycles() {
    let (code, out, err) = ambiclass(&["verify", "--min", "5", "--max", "100", "--cycle", "both"]);
    assert_eq!(code, 0, "{err}");
    let recs = records(&out);
    assert!(recs.iter().all(|r| r.matches));
    for pair in recs.chunks(2) {
        assert_eq!(pair[0].d, pair[1].d);
        assert_eq!(pair[0].cycle, "ordinary");
        assert_eq!(pair[1].cycle, "narrow");
        assert!(pair[0].eps_norm.is_some());
    }
    let d12: Vec<_> = recs.iter().filter(|r| r.d == 12).collect();
    assert_eq!((d12[0].lhs, d12[1].lhs), (1, 2));
}

#[test]
fn json_schema_is_stable() {
    let (code, out, _) = ambiclass(&["verify", "--min", "-4", "--max", "-4"]);
    assert_eq!(code, 0);
    let first: Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    let keys: Vec<&str> = first.as_object().unwrap().keys().map(String::as_str).collect();
    let mut expected = vec![
        "D", "t", "cycle", "h", "lhs", "rhs", "norm_group_order", "unit_index", "eps_norm",
        "remark_applicable", "remark_holds", "match",
    ];
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    expected.sort_unstable();
    assert_eq!(sorted, expected);
    assert_eq!(first["eps_norm"], Value::Null);
    assert_eq!(first["cycle"], "ordinary");
    assert_eq!(first["D"], -4);
}

#[test]
fn csv_output_has_header_and_empty_nulls() {
    let (code, out, _) = ambiclass(&["verify", "--min", "-8", "--max", "-7", "--format", "csv", "--cycle", "ordinary"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "D,t,cycle,h,lhs,rhs,norm_group_order,unit_index,eps_norm,remark_applicable,remark_holds,match"
    );
    assert_eq!(lines[1], "-8,1,ordinary,1,1,1,1,1,,true,true,true");
    assert_eq!(lines[2], "-7,1,ordinary,1,1,1,1,1,,true,true,true");
}

#[test]
fn output_is_independent_of_job_count() {
    let base = ["verify", "--min", "-3000", "--max", "3000"];
    let (_, one, _) = ambiclass(&[&base[..], &["--jobs", "1"]].concat());
    let (_, four, _) = ambiclass(&[&base[..], &["--jobs", "4"]].concat());
    assert_eq!(one, four);
}

#[test]
fn output_file_and_unwritable_path() {
    let dir = std::env::temp_dir().join(format!("ambiclass-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.jsonl");
    let (code, out, _) = ambiclass(&["verify", "--min", "-20", "--max", "-3", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(!records(&written).is_empty());

    let bad = dir.join("missing").join("out.jsonl");
    let (code, _, err) = ambiclass(&["verify", "--min", "-20", "--max", "-3", "--out", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("cannot write"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(ambiclass(&["verify", "--min", "10", "--max", "5"]).0, 1);
    assert_eq!(ambiclass(&["verify", "--min", "1"]).0, 1);
    assert_eq!(ambiclass(&["nonsense"]).0, 1);
    assert_eq!(ambiclass(&["classgroup", "9"]).0, 1);
    assert_eq!(ambiclass(&["hilbert", "0", "3", "3"]).0, 1);
    assert_eq!(ambiclass(&["hilbert", "2", "3", "4"]).0, 1);
    assert_eq!(ambiclass(&["pell", "-4"]).0, 1);
}

#[test]
fn classgroup_output() {
    let (code, out, _) = ambiclass(&["classgroup", "-23"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["order"], 3);
    assert_eq!(v["structure"], serde_json::json!([3]));
    assert_eq!(v["ambiguous_count"], 1);
    assert_eq!(v["ambiguous"], serde_json::json!([[1, 1, 6]]));

    let (code, out, _) = ambiclass(&["classgroup", "-4"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["order"], 1);
    assert_eq!(v["structure"], serde_json::json!([]));

    let (code, out, _) = ambiclass(&["classgroup", "12"]);
    assert_eq!(code, 0);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["cycle"], "narrow");
    assert_eq!(lines[0]["order"], 2);
    assert_eq!(lines[1]["cycle"], "ordinary");
    assert_eq!(lines[1]["order"], 1);
}

#[test]
fn hilbert_output() {
    let (code, out, _) = ambiclass(&["hilbert", "-1", "-1", "all"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["product"], 1);
    let symbols = v["symbols"].as_array().unwrap();
    for s in symbols {
        let expected = if s["place"] == "2" || s["place"] == "inf" { -1 } else { 1 };
        assert_eq!(s["symbol"], expected);
    }

    let (_, out, _) = ambiclass(&["hilbert", "1", "5", "2"]);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["symbol"], 1);

    let (_, out, _) = ambiclass(&["hilbert", "2", "7", "7"]);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["symbol"], 1);

    let (_, out, _) = ambiclass(&["hilbert", "3/4", "-1", "inf"]);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["symbol"], 1);
}

#[test]
fn pell_output() {
    let (code, out, _) = ambiclass(&["pell", "12"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["period"], serde_json::json!([1, 2]));
    assert_eq!(v["unit_norm"], 1);
}
