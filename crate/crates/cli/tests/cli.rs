//! End-to-end tests of the binary: output shapes and the exit-code
//! contract (0 ok / 10 obstructed / 2 usage / 3 unsolvable).

use std::process::{Command, Output};

use seifcalc_core::ObstructionReport;

fn seifcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seifcalc"))
        .args(args)
        .env_remove("SEIFCALC_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn check_exit_codes() {
    let obstructed = seifcalc(&["check", "(3,-17)(5,17)(7,17)"]);
    assert_eq!(code(&obstructed), 10);
    assert!(stdout(&obstructed).contains("H:           17"));
    assert!(stdout(&obstructed).contains("OBSTRUCTED"));

    let clean = seifcalc(&["check", "(5,-2)(3,-1)(4,3)"]);
    assert_eq!(code(&clean), 0);
    assert!(stdout(&clean).contains("H:           1"));
    assert!(stdout(&clean).contains("not obstructed"));

    let malformed = seifcalc(&["check", "(5,-2)(3,-1)"]);
    assert_eq!(code(&malformed), 2);

    let invalid = seifcalc(&["check", "(4,2)(3,1)(5,1)"]);
    assert_eq!(code(&invalid), 2);
}

#[test]
fn check_json_roundtrips_byte_for_byte() {
    let first = seifcalc(&["check", "--json", "(2,-3)(3,1)(7,9)"]);
    assert_eq!(code(&first), 10);
    let second = seifcalc(&["check", "--format", "json", "(2,-3)(3,1)(7,9)"]);
    assert_eq!(stdout(&first), stdout(&second));

    let line = stdout(&first);
    let report: ObstructionReport = serde_json::from_str(line.trim()).unwrap();
    assert!(report.obstructed);
    assert_eq!(serde_json::to_string(&report).unwrap(), line.trim());
}

#[test]
fn check_csv_has_header_and_row() {
    let out = seifcalc(&["check", "--format", "csv", "(2,-3)(3,1)(7,9)"]);
    assert_eq!(code(&out), 10);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "form,canonical,h,h1_factors,torque_profile,obstructed"
    );
    assert_eq!(
        lines.next().unwrap(),
        "\"(2,-3)(3,1)(7,9)\",\"(2,1)(3,1)(7,2) e0=-1\",5,\"5\",2,true"
    );
}

#[test]
fn drill_l15_pipeline() {
    let out = seifcalc(&[
        "drill",
        "(5,-2)(3,-1)(4,3)",
        "--fibre",
        "3",
        "--linking",
        "0",
        "--sign",
        "+",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out).trim(),
        "ambient L(15,4); summands L(5,3) # L(3,2); klein:false torus:false cable:false ball:false"
    );

    let out = seifcalc(&[
        "drill",
        "(5,-2)(3,-1)(4,3)",
        "--fibre",
        "3",
        "--linking",
        "1",
        "--sign",
        "+",
    ]);
    assert_eq!(code(&out), 0);
    // the elementary exclusions do not decide the L(19,4) knot
    assert!(stdout(&out).contains("ambient L(19,4)"));
    assert!(stdout(&out).contains("torus:true"));

    // H = 1 makes every linking number solvable: q = 4 l^2 + 15
    let out = seifcalc(&[
        "drill",
        "(5,-2)(3,-1)(4,3)",
        "--fibre",
        "3",
        "--linking",
        "2",
        "--sign",
        "+",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("ambient L(31,4)"));

    let unsolvable = seifcalc(&[
        "drill",
        "(3,-17)(5,17)(7,17)",
        "--fibre",
        "1",
        "--linking",
        "0",
        "--sign",
        "+",
    ]);
    assert_eq!(code(&unsolvable), 3);

    let json = seifcalc(&[
        "drill",
        "(5,-2)(3,-1)(4,3)",
        "--fibre",
        "3",
        "--linking",
        "0",
        "--sign",
        "+",
        "--json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(stdout(&json).trim()).unwrap();
    assert_eq!(doc["ambient"], "L(15,4)");
    assert_eq!(doc["summands"][0], "L(5,3)");
    assert_eq!(doc["cases"]["cable"], false);
}

#[test]
fn twist_commands() {
    let out = seifcalc(&[
        "twist",
        "(5,-2)(3,-1)(4,3)",
        "--fibre",
        "3",
        "--q",
        "15",
        "--t",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "(5,-2)(3,-1)(19,14)\nH = 1\n");

    let identity = seifcalc(&[
        "twist",
        "(5,-2)(3,-1)(4,3)",
        "--fibre",
        "3",
        "--q",
        "15",
        "--t",
        "0",
    ]);
    assert_eq!(stdout(&identity), "(5,-2)(3,-1)(4,3)\nH = 1\n");

    let ordinary = seifcalc(&[
        "twist",
        "(2,-3)(3,1)(7,9)",
        "--ordinary",
        "--n",
        "1",
        "--t",
        "1",
    ]);
    assert_eq!(stdout(&ordinary), "(2,-3)(3,1)(7,9)(2,-1)\nH = -32\n");

    // q = 14 is not an inverse of 3 mod 4
    let bad = seifcalc(&[
        "twist",
        "(5,-2)(3,-1)(4,3)",
        "--fibre",
        "3",
        "--q",
        "14",
        "--t",
        "1",
    ]);
    assert_eq!(code(&bad), 2);

    let neither = seifcalc(&["twist", "(5,-2)(3,-1)(4,3)", "--t", "1"]);
    assert_eq!(code(&neither), 2);
}

#[test]
fn search_writes_census_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("census");
    let out = seifcalc(&[
        "search",
        "--max-p",
        "5",
        "--max-h",
        "30",
        "--workers",
        "2",
        "--out",
        prefix.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();

    let summary_file: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(prefix.with_extension("summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["total_examined"], summary_file["total_examined"]);

    let records = std::fs::read_to_string(prefix.with_extension("records.jsonl")).unwrap();
    let parsed: Vec<serde_json::Value> = records
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(
        parsed.len() as u64,
        summary["total_obstructed"].as_u64().unwrap()
    );
    for record in &parsed {
        assert_eq!(record["report"]["obstructed"], true);
    }
}

#[test]
fn search_worker_env_overrides_flag() {
    let base = seifcalc(&[
        "search",
        "--max-p",
        "5",
        "--max-h",
        "30",
        "--workers",
        "1",
        "--json",
    ]);
    let with_env = Command::new(env!("CARGO_BIN_EXE_seifcalc"))
        .args([
            "search",
            "--max-p",
            "5",
            "--max-h",
            "30",
            "--workers",
            "1",
            "--json",
        ])
        .env("SEIFCALC_WORKERS", "3")
        .output()
        .unwrap();
    let a: serde_json::Value = serde_json::from_str(stdout(&base).trim()).unwrap();
    let b: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&with_env.stdout)).unwrap();
    assert_eq!(a["total_examined"], b["total_examined"]);
    assert_eq!(a["total_obstructed"], b["total_obstructed"]);
    assert_eq!(b["config"]["worker_count"], 3);

    let bad_env = Command::new(env!("CARGO_BIN_EXE_seifcalc"))
        .args(["search", "--max-p", "5", "--max-h", "30"])
        .env("SEIFCALC_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code().unwrap(), 2);
}

#[test]
fn search_rejects_invalid_config() {
    assert_eq!(code(&seifcalc(&["search", "--max-p", "1"])), 2);
    // no |H| and no e0 bound: the universe is infinite
    assert_eq!(code(&seifcalc(&["search", "--max-p", "5"])), 2);
    assert_eq!(
        code(&seifcalc(&["search", "--max-p", "5", "--max-e0", "1"])),
        0
    );
    assert_eq!(
        code(&seifcalc(&[
            "search", "--max-p", "5", "--max-h", "10", "--filter", "bogus"
        ])),
        2
    );
}

#[test]
fn dinv_commands() {
    let out = seifcalc(&["dinv", "5", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "-1/5, -1/5, 1/5, 1/5, 1");

    let test = seifcalc(&["dinv", "--test", "0,-2/5,-2/5,-8/5,-8/5", "--n", "5"]);
    assert_eq!(code(&test), 10);
    assert!(stdout(&test).contains("obstructed"));

    let selfmatch = seifcalc(&["dinv", "--test", "-1/5,-1/5,1/5,1/5,1", "--n", "5"]);
    assert_eq!(code(&selfmatch), 0);

    assert_eq!(code(&seifcalc(&["dinv", "4", "2"])), 2);
    assert_eq!(code(&seifcalc(&["dinv", "5"])), 2);

    let json = seifcalc(&["dinv", "2", "1", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(stdout(&json).trim()).unwrap();
    assert_eq!(doc["d"], serde_json::json!(["-1/4", "1/4"]));
}

#[test]
fn prop4_command() {
    let out = seifcalc(&["prop4", "3", "20", "37"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    for line in text.lines() {
        assert!(line.contains("residues (6, 11, 7, 3)"));
        assert!(line.ends_with("ok"));
    }

    assert_eq!(code(&seifcalc(&["prop4", "4"])), 2);

    let json = seifcalc(&["prop4", "54", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(stdout(&json).trim()).unwrap();
    assert_eq!(doc[0]["holds"], true);
    assert_eq!(doc[0]["h"], "17");
}

#[test]
fn no_arguments_is_a_usage_error() {
    let out = seifcalc(&[]);
    assert_eq!(code(&out), 2);
}
