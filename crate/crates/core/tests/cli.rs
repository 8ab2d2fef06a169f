use std::collections::BTreeMap;
use std::process::Command;

use hypercone::cli::{parse_m_list, run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use proptest::prelude::*;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hypercone").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = call(args);
    assert!(!out.is_empty(), "no output; stderr: {err}");
    (code, serde_json::from_str(&out).unwrap())
}

fn csv_rows(text: &str) -> Vec<BTreeMap<String, String>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            header
                .iter()
                .cloned()
                .zip(r.iter().map(String::from))
                .collect()
        })
        .collect()
}

/// Every CSV cell equals the matching JSON field.
fn assert_same_values(args: &[&str]) {
    let mut j = args.to_vec();
    j.extend(["--format", "json"]);
    let mut c = args.to_vec();
    c.extend(["--format", "csv"]);
    let (code_j, v) = json(&j);
    let (code_c, text, _) = call(&c);
    assert_eq!(code_j, code_c);
    let rows = csv_rows(&text);
    let jrows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), jrows.len());
    for (row, jrow) in rows.iter().zip(jrows) {
        assert_eq!(row["subcommand"], v["subcommand"].as_str().unwrap());
        assert_eq!(row["status"], v["status"].as_str().unwrap());
        for (k, val) in v["parameters"].as_object().unwrap() {
            assert_eq!(&row[k], val.as_str().unwrap(), "parameter {k}");
        }
        for col in v["columns"].as_array().unwrap() {
            let col = col.as_str().unwrap();
            assert_eq!(row[col], jrow[col].as_str().unwrap(), "column {col}");
        }
        assert_eq!(
            row.len(),
            2 + v["parameters"].as_object().unwrap().len() + v["columns"].as_array().unwrap().len()
        );
    }
}

const TABLE: [&str; 12] = [
    "5.881525129",
    "3.958758640",
    "2.829350458",
    "1.969224627",
    "1.352500103",
    "0.963594772",
    "0.728989161",
    "0.581153278",
    "0.481712568",
    "0.410855526",
    "0.357996307",
    "0.317117533",
];

#[test]
fn alpha_table_reproduces_known_values() {
    let (code, v) = json(&["alpha-table", "--m", "2..13", "--digits", "9"]);
    assert_eq!(code, EXIT_PASS);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for (row, want) in rows.iter().zip(TABLE) {
        assert_eq!(row["alpha"], want);
        let lo = row["isolator_lo"].as_str().unwrap();
        assert!(lo.contains('/') || lo.parse::<i64>().is_ok());
    }
    let (_, v) = json(&["alpha-table", "--m", "2017"]);
    assert_eq!(v["rows"][0]["alpha"], "0.001377480");
}

#[test]
fn digit_count_is_exact() {
    for digits in ["1", "4", "15"] {
        let (_, v) = json(&["alpha-table", "--m", "3,9", "--digits", digits]);
        for row in v["rows"].as_array().unwrap() {
            let s = row["alpha"].as_str().unwrap();
            let frac = s.split('.').nth(1).unwrap();
            assert_eq!(frac.len(), digits.parse::<usize>().unwrap(), "{s}");
        }
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["alpha-table", "--m", "1"],
        vec!["alpha-table", "--m", "3", "--digits", "0"],
        vec!["verify", "--which", "nope"],
        vec!["verify", "--which", "bracket", "--m", "7..3"],
        vec!["foliate", "--m", "1", "--alpha", "3"],
        vec!["foliate", "--m", "2", "--alpha", "x"],
        vec!["foliate", "--m", "2", "--alpha", "5"],
        vec!["subcalib", "--m", "2", "--alpha", "4", "--nr", "1"],
        vec!["subcalib", "--m", "1", "--alpha", "4"],
        vec![],
    ] {
        let (code, out, err) = call(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}: {err}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
}

#[test]
fn verify_families_pass() {
    for (which, range) in [
        ("bracket", "2..200"),
        ("q", "2..30"),
        ("quartic", "2..30"),
        ("identity", "2..30"),
        ("stability", "2..13"),
    ] {
        let (code, v) = json(&["verify", "--which", which, "--m", range]);
        assert_eq!(code, EXIT_PASS, "{which}: {}", v["failures"]);
        assert_eq!(v["status"], "pass");
    }
}

#[test]
fn verify_sturm_echoes_the_sign_table() {
    let (code, v) = json(&["verify", "--which", "sturm", "--m", "2,7,11,23,29"]);
    assert_eq!(code, EXIT_PASS);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["signs_at_zero"], "0-++--+++");
    for row in rows {
        assert_eq!(row["changes_at_zero"], "3");
        assert_eq!(row["changes_at_infinity"], "2");
        assert_eq!(row["signs_at_zero"].as_str().unwrap().len(), 9);
    }
}

#[test]
fn verify_lawson_grid() {
    let (code, v) = json(&["verify", "--which", "lawson", "--sum-max", "16"]);
    assert_eq!(code, EXIT_PASS);
    let rows = v["rows"].as_array().unwrap();
    // pairs k, h >= 2 with k + h <= 16
    assert_eq!(rows.len(), (4..=16).map(|s| s - 3).sum::<usize>());
    let find = |k: &str, h: &str| {
        rows.iter().find(|r| r["k"] == k && r["h"] == h).unwrap()["minimizing"].clone()
    };
    assert_eq!(find("2", "6"), "false");
    assert_eq!(find("4", "4"), "true");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "verify", "--which", "identity", "--m", "2..6", "--seed", "42",
    ];
    assert_eq!(call(&args).1, call(&args).1);
    let other = [
        "verify", "--which", "identity", "--m", "2..6", "--seed", "43",
    ];
    assert_eq!(call(&other).0, EXIT_PASS);
}

#[test]
fn csv_and_json_agree() {
    assert_same_values(&["alpha-table", "--m", "2..5"]);
    assert_same_values(&["verify", "--which", "sturm", "--m", "2,3"]);
    assert_same_values(&["verify", "--which", "lawson", "--sum-max", "8"]);
    assert_same_values(&[
        "subcalib", "--m", "2", "--alpha", "4", "--nr", "20", "--ny", "20",
    ]);
    assert_same_values(&["foliate", "--m", "2", "--alpha", "5", "--force"]);
    assert_same_values(&["foliate", "--m", "5", "--alpha", "2", "--n", "400"]);
}

#[test]
fn foliate_examples() {
    let dir = std::env::temp_dir().join(format!("hypercone-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curves.csv");
    let p = path.to_str().unwrap();
    let (code, v) = json(&[
        "foliate",
        "--m",
        "3",
        "--alpha",
        "4",
        "--lambdas",
        "0.5,1,2",
        "--out",
        p,
    ]);
    assert_eq!(code, EXIT_PASS, "{}", v["failures"]);
    for row in v["rows"].as_array().unwrap() {
        assert!(
            row["ode_residual"]
                .as_str()
                .unwrap()
                .parse::<f64>()
                .unwrap()
                < 1e-8
        );
    }

    let text = std::fs::read_to_string(&path).unwrap();
    let rows = csv_rows(&text);
    assert_eq!(
        text.lines().next().unwrap(),
        "branch,lambda,t,radial,height,w,v"
    );
    assert_eq!(rows.len(), 2 * 3 * 2001);
    for row in &rows {
        let r: f64 = row["radial"].parse().unwrap();
        let y: f64 = row["height"].parse().unwrap();
        let t: f64 = row["t"].parse().unwrap();
        assert!(r > 0.0 && y > 0.0);
        assert!((y.atan2(r) - t).abs() < 1e-12);
    }
    std::fs::remove_dir_all(&dir).unwrap();

    let (code, v) = json(&["foliate", "--m", "5", "--alpha", "2"]);
    assert_eq!(code, EXIT_PASS, "{}", v["failures"]);

    let (code, v) = json(&["foliate", "--m", "2", "--alpha", "5", "--force"]);
    assert_eq!(code, EXIT_FAIL);
    let note = v["failures"][0].as_str().unwrap();
    assert!(note.starts_with("margin < 0"), "{note}");
    let best: f64 = note
        .rsplit(' ')
        .next()
        .unwrap()
        .trim_end_matches(')')
        .parse()
        .unwrap();
    assert!(best < 0.0);
}

#[test]
fn subcalib_examples() {
    let (code, _) = json(&["subcalib", "--m", "2", "--alpha", "11"]);
    assert_eq!(code, EXIT_PASS);
    let (code, _) = json(&["subcalib", "--m", "12", "--alpha", "1"]);
    assert_eq!(code, EXIT_PASS);

    let (code, v) = json(&["subcalib", "--m", "2", "--alpha", "4"]);
    assert_eq!(code, EXIT_FAIL);
    let row = &v["rows"][0];
    assert_eq!(row["check"], "max_div_inside");
    assert!(row["value"].as_str().unwrap().parse::<f64>().unwrap() > 0.0);
    assert!(row["radial"].as_str().unwrap().parse::<f64>().unwrap() > 0.0);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_hypercone");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["alpha-table", "--m", "2,3"]), Some(0));
    assert_eq!(status(&["alpha-table", "--m", "1"]), Some(2));
    assert_eq!(status(&["subcalib", "--m", "2", "--alpha", "4"]), Some(1));
    assert_eq!(status(&["--help"]), Some(0));
}

proptest! {
    #[test]
    fn ranges_parse_inclusive(a in 2u64..500, len in 0u64..50) {
        let b = a + len;
        let ms = parse_m_list(&format!("{a}..{b}")).unwrap().0;
        prop_assert_eq!(ms.len() as u64, len + 1);
        prop_assert_eq!(ms[0], a);
        prop_assert_eq!(*ms.last().unwrap(), b);
    }

    #[test]
    fn lists_parse_in_order(ms in proptest::collection::vec(2u64..10_000, 1..10)) {
        let text = ms.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        prop_assert_eq!(parse_m_list(&text).unwrap().0, ms);
    }
}
