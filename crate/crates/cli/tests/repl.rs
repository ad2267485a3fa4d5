use std::fs;
use std::io::Cursor;
use std::path::Path;

use serde_json::Value;

/// Feeds `script` to `capakb repl` over the Pepper fixture, in-process.
fn session(extra: &[&str], script: &str) -> (u8, String, String) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let ttl = dir.join("pepper.ttl").display().to_string();
    let rules = dir.join("pepper.rules").display().to_string();
    let mut args = vec!["capakb", "repl", ttl.as_str(), rules.as_str()];
    args.extend(extra);
    let mut input = Cursor::new(script.as_bytes().to_vec());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = capakb_cli::run(args, &mut input, &mut out, &mut err, false);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn retracting_the_tracker_reports_lost_capabilities() {
    let (code, out, _) = session(&[], "retract ex:pepper ex:hasComponent ex:artrack\n");
    assert_eq!(code, 0);
    let mut lines = out.lines();
    let counts = lines.next().unwrap();
    assert!(counts.starts_with("added 0, removed "), "{counts}");
    let changes: Vec<&str> = lines.collect();
    assert!(changes.contains(&"removed: ex:pepper_capa a ex:ObjectLocalisationCapa"), "{out}");
    assert!(changes.contains(&"removed: ex:pepper_capa a ex:HandPointingCapa"), "{out}");
    assert!(!changes.iter().any(|l| l.contains("ScrewingCapability")));
}

#[test]
fn assert_then_retract_has_no_net_capability_change() {
    let script = "assert ex:pepper ex:hasComponent ex:gripper2\nretract ex:pepper ex:hasComponent ex:gripper2\n";
    let (_, out, _) = session(&[], script);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2, "{out}");
    // The component and its chain consequence come and go together.
    assert!(lines[0].starts_with("added 2, removed 0,"), "{out}");
    assert!(lines[1].starts_with("added 0, removed 2,"), "{out}");

    // Re-adding a lost component restores exactly what it took away.
    let script = "retract ex:pepper_hand ex:isHolding ex:screwdriver\nassert ex:pepper_hand ex:isHolding ex:screwdriver\n";
    let (_, out, _) = session(&[], script);
    let removed: Vec<&str> = out.lines().filter_map(|l| l.strip_prefix("removed: ")).collect();
    let added: Vec<&str> = out.lines().filter_map(|l| l.strip_prefix("added: ")).collect();
    assert_eq!(removed, vec!["ex:pepper_capa a ex:ScrewingCapability"]);
    assert_eq!(removed, added);
}

#[test]
fn explain_asserted_is_one_line_and_derived_is_a_tree() {
    let script = "explain ex:pepper ex:hasComponent ex:artrack\nexplain ex:pepper ex:hasComponent ex:realsense\n";
    let (_, out, _) = session(&[], script);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "ex:pepper ex:hasComponent ex:artrack  (asserted)");
    assert!(lines[1].starts_with("ex:pepper ex:hasComponent ex:realsense  [R3 "));
    assert_eq!(lines[2], "  ex:pepper ex:hasComponent ex:pepper_head  (asserted)");
    assert_eq!(lines[3], "  ex:pepper_head ex:hasComponent ex:realsense  (asserted)");
    assert_eq!(lines.len(), 4);
}

#[test]
fn errors_do_not_end_the_session() {
    let script = "assert zz:a ex:p ex:o\nretract ex:pepper_capa a ex:ScrewingCapability\nretract ex:ghost ex:p ex:o\nfrobnicate\nquery nonsense\nquery ask ex:pepper ex:hasComponent ex:realsense\n";
    let (code, out, _) = session(&[], script);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("error: 1:1: unknown prefix 'zz:'"), "{}", lines[0]);
    assert!(lines[1].starts_with("error: cannot retract derived fact ex:pepper_capa rdf:type ex:ScrewingCapability"));
    assert!(lines[2].contains("unknown term"));
    assert!(lines[3].contains("unknown command"));
    assert!(lines[4].starts_with("error:"));
    assert_eq!(lines[5], "yes (derived)");
}

#[test]
fn quit_stops_reading() {
    let (_, out, _) = session(&[], "quit\nquery ask ex:pepper ex:hasComponent ex:realsense\n");
    assert!(out.is_empty());
}

#[test]
fn save_writes_asserted_facts_unless_asked_for_more() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("plain.ttl");
    let full = dir.path().join("full.ttl");
    let graph = dir.path().join("g.dot");
    let script = format!(
        "save {}\nsave {} --with-derived\ndot {}\n",
        plain.display(),
        full.display(),
        graph.display()
    );
    let (_, out, _) = session(&[], &script);
    assert!(out.is_empty(), "{out}");
    let plain = fs::read_to_string(plain).unwrap();
    let full = fs::read_to_string(full).unwrap();
    assert!(!plain.contains("# derived"));
    assert!(full.contains("# derived"));
    assert!(fs::read_to_string(graph).unwrap().contains("digraph capakb"));

    let session_default = dir.path().join("default.ttl");
    session(&["--with-derived"], &format!("save {}\n", session_default.display()));
    assert_eq!(fs::read_to_string(session_default).unwrap(), full);
}

#[test]
fn json_lines_delta_reports() {
    let (_, out, _) = session(&["--format", "json-lines"], "retract ex:pepper ex:hasComponent ex:artrack\n");
    let records: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records[0]["kind"], "delta");
    assert!(records[1..].iter().all(|r| r["kind"] == "capability_change" && r["change"] == "removed"));
    assert!(records.iter().any(|r| r["o"] == "<http://ex.org/HandPointingCapa>"));
}

#[test]
fn repl_without_files_starts_empty() {
    let mut input = Cursor::new(b"assert <http://ex.org/a> <http://ex.org/p> <http://ex.org/b>\n".to_vec());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = capakb_cli::run(["capakb", "repl"], &mut input, &mut out, &mut err, false);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), "added 1, removed 0, rederived 0\n");
}
