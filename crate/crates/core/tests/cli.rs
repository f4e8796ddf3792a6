use assert_cmd::Command;
use serde_json::Value;

fn opnodal() -> Command {
    Command::cargo_bin("opnodal").unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = opnodal().args(args).assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn table2_json_has_seventy_types() {
    let v = json(&["lattice", "table2", "--format", "json"]);
    let total: usize = v["rows"].as_array().unwrap().iter().map(|r| r["types"].as_array().unwrap().len()).sum();
    assert_eq!(total, 70);
}

#[test]
fn table3_text_lists_every_affine_type() {
    let out = opnodal().args(["lattice", "table3"]).assert().success().get_output().stdout.clone();
    let text = String::from_utf8(out).unwrap();
    for r in ["D4~", "D5~", "D6~", "D7~", "D8~", "E6~", "E7~", "E8~"] {
        assert!(text.contains(r), "{r} missing from\n{text}");
    }
}

#[test]
fn embed_reports_its_own_type() {
    let v = json(&["lattice", "embed", "--type", "D4+A1^4"]);
    assert_eq!(v["classified"], v["type"]);
    assert_eq!(v["vectors"].as_array().unwrap().len(), 8);
}

#[test]
fn embed_rejects_oversized_type() {
    opnodal().args(["lattice", "embed", "--type", "A9"]).assert().code(1);
    opnodal().args(["lattice", "embed", "--type", "Q3"]).assert().code(2);
}

#[test]
fn opcheck_reads_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"components": [], "multiplicities": [], "anticanonical": [3,1,1,1,1,1,1,1,1,1]}"#)
        .unwrap();
    opnodal().args(["lattice", "opcheck", "--file"]).arg(&bad).assert().code(1);
    opnodal().args(["lattice", "opcheck", "--file"]).arg(dir.path().join("missing.json")).assert().code(1);
}

#[test]
fn modulidim_prints_an_integer() {
    opnodal().args(["lattice", "modulidim", "--r", "9", "--s", "0"]).assert().success().stdout("1\n");
    opnodal().args(["lattice", "modulidim", "--r", "-1", "--s", "0"]).assert().code(1);
}

#[test]
fn riccati_list_e6_has_three_loci() {
    let v = json(&["riccati", "list", "--type", "E6", "--format", "json"]);
    let names: Vec<&str> = v["loci"].as_array().unwrap().iter().map(|l| l["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["C0", "Cinf", "Ck0=kinf"]);
}

#[test]
fn integrate_stays_on_the_locus() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let v = json(&[
        "painleve", "integrate", "--type", "E6", "--params", "k0=0,kinf=1", "--init", "chart=0,x=0,y=1", "--path",
        "0,1", "--out", csv.to_str().unwrap(),
    ]);
    assert_eq!(v["status"], "Completed");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t_re,t_im,chart,x_re,x_im,y_re,y_im"));
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(cols.len(), 7);
        assert!(cols[3].abs() < 1e-6 && cols[4].abs() < 1e-6, "{line}");
    }
}

#[test]
fn integrate_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let csv = dir.path().join(name);
        let out = opnodal()
            .args(["painleve", "integrate", "--type", "E7", "--params", "alpha=-0.5", "--init", "x=-2,y=0"])
            .args(["--path", "0,1+0.5i,2", "--out"])
            .arg(&csv)
            .assert()
            .success()
            .get_output()
            .stdout
            .clone();
        (out, std::fs::read(&csv).unwrap())
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a.1, b.1);
    let strip = |s: &[u8]| String::from_utf8(s.to_vec()).unwrap().lines().filter(|l| !l.contains("csv")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a.0), strip(&b.0));
}

#[test]
fn integrate_needs_an_atlas() {
    let dir = tempfile::tempdir().unwrap();
    opnodal()
        .args(["painleve", "integrate", "--type", "D5", "--params", "k0=0,kt=0,kinf=0", "--init", "x=0,y=0"])
        .args(["--path", "1,2", "--out"])
        .arg(dir.path().join("t.csv"))
        .assert()
        .code(1);
}

#[test]
fn integrate_reports_missing_chart() {
    let dir = tempfile::tempdir().unwrap();
    opnodal()
        .args(["painleve", "integrate", "--type", "E7", "--params", "alpha=-0.5", "--init", "x=1e-6,y=1e12"])
        .args(["--path", "0,0.1", "--rho", "10", "--out"])
        .arg(dir.path().join("t.csv"))
        .assert()
        .code(1);
}

#[test]
fn solve_crosses_the_pole() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let v = json(&[
        "riccati", "solve", "--type", "E6", "--locus", "C0", "--params", "k0=0,kinf=1", "--x0", "-1", "--path",
        "0,2", "--method", "linear", "--out", csv.to_str().unwrap(),
    ]);
    assert_eq!(v["pole_crossings"].as_array().unwrap().len(), 1);
    opnodal()
        .args(["riccati", "solve", "--type", "E6", "--locus", "C0", "--params", "k0=1,kinf=1", "--x0", "0"])
        .args(["--path", "0,1", "--out"])
        .arg(&csv)
        .assert()
        .code(1);
}

#[test]
fn reduce_gives_linear_form() {
    let v = json(&["riccati", "reduce", "--type", "E7", "--locus", "C"]);
    assert_eq!(v["riccati"]["a"], "-1");
    assert_eq!(v["linear"]["q"], "1/2*t");
}

#[test]
fn riccati_verify_passes_for_d4() {
    let v = json(&["riccati", "verify", "--type", "D4", "--samples", "20"]);
    assert_eq!(v["loci"].as_array().unwrap().len(), 5);
    assert!(v["loci"].as_array().unwrap().iter().all(|l| l["passed"] == true));
}

#[test]
fn config_reports_a2_for_e6() {
    let v = json(&["riccati", "config", "--type", "E6", "--params", "k0=0,kinf=0"]);
    assert_eq!(v["configuration"], "A2");
}

#[test]
fn nonexistence_for_e8_and_not_for_d4() {
    let v = json(&["riccati", "nonexistence", "--type", "E8"]);
    assert_eq!(v["catalog_size"], 0);
    opnodal().args(["riccati", "nonexistence", "--type", "D4"]).assert().code(1);
}

#[test]
fn usage_errors_print_the_synopsis() {
    let out = opnodal().args(["riccati", "list"]).assert().code(2).get_output().stderr.clone();
    assert!(String::from_utf8(out).unwrap().contains("Usage"));
    opnodal().args(["lattice", "table2", "--format", "xml"]).assert().code(2);
    opnodal().args(["verify", "all", "--seed", "x"]).assert().code(2);
}

#[test]
fn verify_all_passes() {
    let out = opnodal().args(["verify", "all"]).assert().success().get_output().stdout.clone();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 13);
}
