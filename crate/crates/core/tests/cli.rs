use covariant_core::cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use covariant_core::verifier::SuiteReport;
use serde_json::Value;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn covariant(args: &[&str]) -> Output {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let argv = std::iter::once("covariant").chain(args.iter().copied());
    let code = run(argv, &mut stdout, &mut stderr);
    Output {
        code,
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn z3_table() -> &'static str {
    r#"{"order": 3, "table": [[0,1,2],[1,2,0],[2,0,1]], "labels": ["e","r","r2"]}"#
}

#[test]
fn verify_s3_json_has_84_passing_reports() {
    let out = covariant(&[
        "verify", "--group", "S3", "--trials", "100", "--seed", "7", "--format", "json",
    ]);
    assert_eq!(out.code, EXIT_PASS, "{}", out.stderr);
    let report: SuiteReport = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report.entries().count(), 84);
    assert!(report.all_pass());
    assert_eq!(report.seed, 7);
}

#[test]
fn json_output_is_byte_stable() {
    let args = [
        "verify", "--group", "D4", "--trials", "20", "--format", "json",
    ];
    assert_eq!(covariant(&args).stdout, covariant(&args).stdout);
}

#[test]
fn bad_table_names_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad_table.json");
    std::fs::write(&path, r#"{"order": 3, "table": [[0,1,2],[1,1,0],[2,0,1]]}"#).unwrap();
    let out = covariant(&["verify", "--group", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_USAGE);
    assert_eq!(out.stderr.lines().count(), 1, "{}", out.stderr);
    assert!(out.stderr.contains("row 1"), "{}", out.stderr);
    assert!(out.stderr.contains("bad_table.json"), "{}", out.stderr);
    assert!(out.stdout.is_empty());
}

#[test]
fn table_flag_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("z3.json");
    let report = dir.path().join("report.json");
    std::fs::write(&table, z3_table()).unwrap();
    let out = covariant(&[
        "verify",
        "--table",
        table.to_str().unwrap(),
        "--trials",
        "10",
        "--format",
        "json",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_PASS, "{}", out.stderr);
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    // Z3: trivial subgroup (1 character) and the whole group (3 characters).
    assert_eq!(doc["cases"].as_array().unwrap().len(), 4);
    assert_eq!(doc["cases"][0]["case_key"]["group"], "z3");
}

#[test]
fn missing_file_and_flags_are_usage_errors() {
    let out = covariant(&["verify", "--table", "/nonexistent/g.json"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("--table"), "{}", out.stderr);

    let out = covariant(&["verify"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("--group"));

    for (flag, value) in [
        ("--v", "-1"),
        ("--u", "0"),
        ("--tol", "0"),
        ("--trials", "0"),
        ("--v", "x"),
    ] {
        let out = covariant(&["verify", "--group", "Z2", flag, value]);
        assert_eq!(out.code, EXIT_USAGE, "{flag} {value}");
        assert!(out.stderr.contains(flag), "{flag}: {}", out.stderr);
        assert_eq!(out.stderr.lines().count(), 1);
    }

    let out = covariant(&["verify", "--group", "Q9"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("Q9"));

    let out = covariant(&["frobnicate"]);
    assert_eq!(out.code, EXIT_USAGE);
}

#[test]
fn weights_flags_are_applied() {
    let out = covariant(&[
        "verify", "--group", "Z4", "--u", "3", "--v", "2", "--trials", "5", "--format", "json",
    ]);
    assert_eq!(out.code, EXIT_PASS);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["cases"][0]["weights"]["w"], 1.5);

    let out = covariant(&[
        "verify", "--group", "Z4", "--v", "auto", "--trials", "5", "--format", "json",
    ]);
    assert_eq!(out.code, EXIT_PASS);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    for case in doc["cases"].as_array().unwrap() {
        let size = case["case_key"]["subgroup"].as_array().unwrap().len() as f64;
        assert!((case["weights"]["v"].as_f64().unwrap() * size - 1.0).abs() < 1e-15);
    }
}

#[test]
fn failing_theorem_gives_exit_one() {
    // A tolerance below rounding noise makes some residuals fail without
    // being a usage error.
    let out = covariant(&[
        "verify", "--group", "Heis3", "--trials", "5", "--tol", "1e-300",
    ]);
    assert_eq!(out.code, EXIT_FAIL, "{}", out.stderr);
    assert!(out.stdout.contains("failed"));
}

#[test]
fn verify_axb_default_grid_passes() {
    let out = covariant(&[
        "verify-axb",
        "--omega",
        "1.0",
        "--nodes",
        "128",
        "--format",
        "json",
    ]);
    assert_eq!(out.code, EXIT_PASS, "{}{}", out.stdout, out.stderr);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    let checks = doc["continuous"][0]["checks"].as_array().unwrap();
    for id in [
        "axb_weil",
        "axb_sigma",
        "axb_closed_form",
        "axb_adjointness",
        "axb_intertwine_L",
    ] {
        let c = checks.iter().find(|c| c["id"] == id).unwrap();
        assert!(c["residual"].as_f64().unwrap() <= 1e-5, "{id}");
    }
}

#[test]
fn verify_axb_rejects_coarse_grid() {
    let out = covariant(&["verify-axb", "--omega", "1", "--nodes", "32"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("--nodes"), "{}", out.stderr);
}

#[test]
fn report_combines_both_models() {
    let out = covariant(&[
        "report", "--group", "Z2", "--trials", "5", "--nodes", "128", "--format", "json",
    ]);
    assert_eq!(out.code, EXIT_PASS, "{}", out.stderr);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["cases"].as_array().unwrap().len(), 3);
    assert_eq!(doc["continuous"].as_array().unwrap().len(), 1);
}

fn enumerate_json(group: &str) -> Value {
    let out = covariant(&["enumerate", "--group", group, "--format", "json"]);
    assert_eq!(out.code, EXIT_PASS, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn subgroup_sizes(doc: &Value) -> Vec<u64> {
    let mut sizes: Vec<u64> = doc["normal_subgroups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["size"].as_u64().unwrap())
        .collect();
    sizes.sort_unstable();
    sizes
}

#[test]
fn enumerate_s3() {
    let doc = enumerate_json("S3");
    let by_size: Vec<(u64, usize)> = {
        let mut v: Vec<_> = doc["normal_subgroups"]
            .as_array()
            .unwrap()
            .iter()
            .map(|n| {
                (
                    n["size"].as_u64().unwrap(),
                    n["characters"].as_array().unwrap().len(),
                )
            })
            .collect();
        v.sort_unstable();
        v
    };
    assert_eq!(by_size, vec![(1, 1), (3, 3), (6, 2)]);
    let a3 = doc["normal_subgroups"]
        .as_array()
        .unwrap()
        .iter()
        .find(|n| n["size"] == 3)
        .unwrap();
    assert_eq!(a3["coset_representatives"].as_array().unwrap().len(), 2);

    let text = covariant(&["enumerate", "--group", "S3"]).stdout;
    assert!(text.contains("3 normal subgroups"));
    assert!(text.contains("(123)"));
}

#[test]
fn enumerate_trivial_and_q8() {
    let doc = enumerate_json("trivial");
    assert_eq!(subgroup_sizes(&doc), vec![1]);
    assert_eq!(
        doc["normal_subgroups"][0]["characters"]
            .as_array()
            .unwrap()
            .len(),
        1
    );

    assert_eq!(
        subgroup_sizes(&enumerate_json("Q8")),
        vec![1, 2, 4, 4, 4, 8]
    );
}

#[test]
fn groups_lists_families() {
    let out = covariant(&["groups"]);
    assert_eq!(out.code, EXIT_PASS);
    for family in ["Zn", "Dn", "Sn", "Q8", "Heisp"] {
        assert!(out.stdout.contains(family));
    }
    let out = covariant(&["groups", "--format", "json"]);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(doc.as_object().unwrap().contains_key("Q8"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_covariant");
    let status = std::process::Command::new(bin)
        .args(["verify", "--group", "Z2", "--trials", "5"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_PASS));
    let status = std::process::Command::new(bin)
        .args(["verify", "--group", "nope"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&status.stderr).contains("nope"));
}
