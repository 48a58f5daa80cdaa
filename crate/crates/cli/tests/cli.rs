use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridgirth"))
        .args(args)
        .env("GRIDGIRTH_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn verify_g3_passes() {
    let o = run(&["verify", "G3"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = records(&o);
    let girth = recs.iter().find(|r| r["check"] == "girth").unwrap();
    assert_eq!(girth["computed"], 10);
    assert!(recs.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn verify_fcc_spread() {
    let o = run(&["verify", "gammaFCC", "--spread-depth", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = records(&o);
    let s = recs.iter().find(|r| r["check"] == "spread@7").unwrap();
    assert_eq!(s["computed"], 171);
}

#[test]
fn mismatch_exits_one_and_lists_every_failure() {
    // The verbatim motif is not 3-regular, so degree and girth both disagree.
    let o = run(&["verify", "n5k3-motif"]);
    assert_eq!(o.status.code(), Some(1));
    let failed: Vec<_> = records(&o).into_iter().filter(|r| r["status"] == "fail").collect();
    assert_eq!(failed.len(), 2);
}

#[test]
fn table_output() {
    let o = run(&["verify", "G1", "--table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("construction"));
    assert!(text.lines().any(|l| l.starts_with("G1") && l.contains("girth") && l.ends_with("ok")));
}

#[test]
fn unknown_construction_is_a_usage_error() {
    let o = run(&["verify", "no-such-graph"]);
    assert_eq!(o.status.code(), Some(2));
    let recs = records(&o);
    assert_eq!(recs[0]["error"], "unknown_construction");
}

#[test]
fn bad_flags_are_rejected() {
    assert_eq!(run(&["hypercube", "6", "--degree", "3"]).status.code(), Some(2));
    assert_eq!(run(&["hypercube", "7", "--longest-cycle"]).status.code(), Some(2));
    assert_eq!(run(&["export", "G1", "--radius", "2", "--format", "svg"]).status.code(), Some(2));
    assert_eq!(run(&["export", "n5k4-qr", "--radius", "1", "--format", "off"]).status.code(), Some(2));
}

#[test]
fn hypercube_q6_cubic() {
    let o = run(&["hypercube", "6", "--degree", "3", "--min-girth", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let summary: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    let classes = summary["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0]["vertices"], 40);
    assert_eq!(classes[0]["edges"], 60);
    assert!(text.contains("gridgirth-certificate 1"));
    assert_eq!(text.lines().filter(|l| l.starts_with("class ")).count(), 1);
}

#[test]
fn hypercube_output_is_deterministic() {
    let args = ["hypercube", "5", "--min-girth", "8", "--ratio", "5/4"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn longest_cycle() {
    let o = run(&["hypercube", "4", "--longest-cycle"]);
    assert_eq!(records(&o)[0]["longest_induced_cycle"], 8);
}

#[test]
fn bound_report() {
    let o = run(&["bound", "3", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &records(&o)[0];
    assert_eq!(r["exact_bound"], 16);
    assert_eq!(r["corollary_bound"], 28);
}

#[test]
fn eliminate_reaches_empty_fixpoint() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("elim.cert");
    let o = run(&["eliminate", "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = &records(&o)[0];
    assert_eq!(r["fixpoint_empty"], true);
    let text = std::fs::read_to_string(cert).unwrap();
    assert!(text.ends_with("end\n"));
    let summary = gridgirth::hypercube::certificate::check_certificate(&text).unwrap();
    assert!(matches!(summary, gridgirth::hypercube::certificate::CertificateSummary::Elimination { .. }));
}

#[test]
fn exports() {
    let dot = stdout(&run(&["export", "G3", "--radius", "2", "--format", "dot"]));
    assert!(dot.starts_with("graph \"G3\" {"));
    let csv = stdout(&run(&["export", "G3", "--radius", "2", "--format", "csv"]));
    assert_eq!(csv.lines().next(), Some("a1,a2,a3,b1,b2,b3"));
    let off = stdout(&run(&["export", "gamma4-1", "--radius", "2", "--format", "off", "--shear", "1"]));
    let mut lines = off.lines();
    assert_eq!(lines.next(), Some("OFF"));
    let counts: Vec<usize> = lines.next().unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
    assert_eq!(off.lines().count(), 2 + counts[0] + counts[1]);
    // Same window, same edges as the CSV export.
    let csv4 = stdout(&run(&["export", "gamma4-1", "--radius", "2", "--format", "csv"]));
    assert_eq!(csv4.lines().count() - 1, counts[1]);
}

#[test]
fn list_has_every_entry() {
    let o = run(&["list"]);
    let recs = records(&o);
    assert!(recs.len() >= 18);
    assert!(recs.iter().any(|r| r["id"] == "gammaBCC" && r["spread"] == serde_json::json!([6, 93])));
}
