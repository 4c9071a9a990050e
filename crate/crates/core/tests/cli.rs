use std::process::{Command, Output};

use serde_json::Value;
use starring::geninv::{verify_group, verify_penrose};
use starring::report::{validate_report_json, without_wall_time};
use starring::Matrix;

fn starring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Splits `invert` output into its `a†` and `a#` sections.
fn sections(text: &str) -> (Option<Matrix>, Option<Matrix>) {
    let (mp, group) = text.split_once("# a#").expect("a# section");
    let parse = |s: &str| (!s.contains("does not exist")).then(|| Matrix::parse_text(s).unwrap());
    (parse(mp), parse(group))
}

#[test]
fn invert_idempotent_rank_one() {
    let o = starring(&["invert", "--ring", "q", "--matrix", "1 1; 0 0"]);
    assert_eq!(o.status.code(), Some(0));
    let (mp, group) = sections(&stdout(&o));
    assert_eq!(mp.unwrap().to_inline(), "1/2 0; 1/2 0");
    assert_eq!(group.unwrap().to_inline(), "1 1; 0 0");
}

#[test]
fn invert_zero_and_nilpotent() {
    let (mp, group) = sections(&stdout(&starring(&[
        "invert", "--ring", "q", "--matrix", "0 0; 0 0",
    ])));
    assert!(mp.unwrap().is_zero() && group.unwrap().is_zero());

    let o = starring(&["invert", "--ring", "q", "--matrix", "0 1; 0 0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# a# does not exist"));
    assert_eq!(sections(&text).0.unwrap().to_inline(), "0 0; 1 0");
}

#[test]
fn invert_output_round_trips() {
    let cases = [
        ("q", "1 2 3; 2 4 6; 0 1 1"),
        ("qi", "1 i; -i 1"),
        ("qi", "2+i 0 1; 0 0 0; 1/2 -3i 1"),
        ("f3", "1 2; 2 1"),
        ("f5", "1 2; 3 1"),
        ("f22", "w 1; 1 1+w"),
        ("f32", "1+w 2; 0 0"),
    ];
    for (ring, text) in cases {
        let o = starring(&["invert", "--ring", ring, "--matrix", text]);
        assert_eq!(o.status.code(), Some(0), "{ring} {text}");
        let a =
            Matrix::parse_inline(starring::Field::from_short_name(ring).unwrap(), text).unwrap();
        let (mp, group) = sections(&stdout(&o));
        if let Some(mp) = mp {
            assert!(verify_penrose(&a, &mp).all(), "{ring} {text}");
        }
        if let Some(g) = group {
            assert!(verify_group(&a, &g).all(), "{ring} {text}");
        }
    }
}

#[test]
fn invert_reads_text_files() {
    let dir = std::env::temp_dir().join(format!("starring-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.txt");
    std::fs::write(&path, "# a partial isometry\nring gaussian n=2\n0 i\n0 0\n").unwrap();
    let o = starring(&[
        "invert",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mp"], serde_json::json!([["0", "0"], ["-1i", "0"]]));
    assert!(v["group"].is_null());

    let o = starring(&["invert", "--input", path.to_str().unwrap(), "--ring", "q"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn classify_examples() {
    let lines = |m: &str| stdout(&starring(&["classify", "--ring", "q", "--matrix", m]));
    let projection = lines("1 0; 0 0");
    assert!(projection.contains("projection true") && projection.contains("SEP true"));
    let d = lines("2 0; 0 0");
    assert!(d.contains("EP true") && d.contains("PI false") && d.contains("SEP false"));
    let n = lines("0 1; 0 0");
    assert!(
        n.contains("PI true")
            && n.contains("EP false")
            && n.contains("SEP false")
            && n.contains("R# false")
    );

    let o = starring(&[
        "classify", "--ring", "q", "--matrix", "0 1; 0 0", "--format", "json",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["isPi"], true);
    assert_eq!(v["inRsharp"], false);
}

#[test]
fn parse_errors_exit_2() {
    for args in [
        &["invert", "--ring", "q", "--matrix", "1 x; 0 0"][..],
        &["invert", "--ring", "q", "--matrix", "1 2; 3"],
        &["invert", "--ring", "q", "--matrix", "1 2 3; 4 5 6"],
        &["invert", "--ring", "f4", "--matrix", "1"],
        &["classify", "--matrix", "1 0; 0 1"],
        &["invert", "--ring", "q"],
        &["verify", "--ring", "q", "--unknown-flag", "--random"],
        &["frobnicate"],
    ] {
        let o = starring(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_exhaustive_json_is_schema_valid() {
    let o = starring(&[
        "verify",
        "--ring",
        "f3",
        "--dim",
        "2",
        "--exhaustive",
        "--entries",
        "all",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    validate_report_json(&v).unwrap();
    assert_eq!(v["totals"]["generated"], 81);
    assert_eq!(v["entries"].as_array().unwrap().len(), 30);
}

#[test]
fn verify_is_deterministic() {
    let args = [
        "verify",
        "--ring",
        "q",
        "--dim",
        "2",
        "--random",
        "--seed",
        "7",
        "--count",
        "100",
        "--entries",
        "T2.5",
        "--format",
        "json",
    ];
    let a = starring(&args);
    let b = starring(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(
        without_wall_time(&stdout(&a)),
        without_wall_time(&stdout(&b))
    );
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["entries"], serde_json::json!(["T2.5"]));
    assert_eq!(v["totals"]["generated"], 100);
}

#[test]
fn verify_writes_out_file() {
    let path = std::env::temp_dir().join(format!("starring-report-{}.json", std::process::id()));
    let o = starring(&[
        "verify",
        "--ring",
        "f2",
        "--exhaustive",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    validate_report_json(&v).unwrap();
    std::fs::remove_file(path).unwrap();
}

#[test]
fn verify_rejects_bad_specs() {
    for args in [
        &["verify", "--ring", "q", "--random", "--entries", "T9.9"][..],
        &["verify", "--ring", "q", "--exhaustive"],
        &["verify", "--ring", "f3", "--constructed", "ep"],
        &["verify", "--ring", "f3"],
        &["verify", "--ring", "f3", "--exhaustive", "--random"],
        &["verify", "--ring", "f5", "--dim", "4", "--exhaustive"],
        &["verify", "--ring", "f6", "--exhaustive"],
    ] {
        assert_eq!(starring(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn enumerate_lists_the_stream() {
    let o = starring(&["enumerate", "--ring", "f2", "--dim", "2", "--exhaustive"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 16);
    assert_eq!(text.lines().next(), Some("0 0; 0 0"));
    assert_eq!(text.lines().last(), Some("1 1; 1 1"));

    let o = starring(&[
        "enumerate",
        "--ring",
        "qi",
        "--dim",
        "3",
        "--constructed",
        "sep",
        "--count",
        "5",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
}

#[test]
fn theorems_table() {
    let text = stdout(&starring(&["theorems"]));
    let rows: Vec<&str> = text.lines().collect();
    let gated = rows
        .iter()
        .filter(|r| !r.contains("[informational]") && !r.starts_with('L'))
        .count();
    assert_eq!(gated, 29);
    assert!(rows
        .iter()
        .any(|r| r.starts_with("T3.4e") && r.contains("[informational]")));
    assert!(
        rows.iter().any(|r| r.starts_with("L3.1")) && rows.iter().any(|r| r.starts_with("L2.8"))
    );

    let section: Vec<String> = stdout(&starring(&["theorems", "--section", "3"]))
        .lines()
        .map(String::from)
        .collect();
    assert!(!section.is_empty());
    assert!(section.iter().all(|r| r.starts_with("T3.")));

    let v: Value =
        serde_json::from_slice(&starring(&["theorems", "--format", "json"]).stdout).unwrap();
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 32);
    assert_eq!(list[0]["id"], "T2.1");
    assert!(list
        .iter()
        .all(|r| r["expression"].is_string() && r["citation"].is_string()));
}
