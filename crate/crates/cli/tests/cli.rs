use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reeb-synth"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const THETA: &str = "mode binary\nv 0 0\nv 1 1\nv 2 2\ne 0 0 1 1\ne 1 1 2 0\ne 2 0 2 0\n";

#[test]
fn synthesize_then_verify_and_reeb() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.rgl"), THETA).unwrap();

    let out = run(
        &["synthesize", "g.rgl", "-o", "m.rmesh", "--off", "m.off"],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(std::fs::read_to_string(dir.path().join("m.off"))
        .unwrap()
        .starts_with("OFF"));

    let out = run(&["verify", "g.rgl", "m.rmesh", "--json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pass"], true);

    let out = run(&["reeb", "m.rmesh"], dir.path());
    let text = stdout(&out);
    assert_eq!(text.matches("# essential").count(), 4);

    let out = run(&["reeb", "m.rmesh", "--dot"], dir.path());
    let dot = stdout(&out);
    for needle in ["label=\"0\"", "label=\"1\"", "label=\"2\""] {
        assert!(dot.contains(needle), "{dot}");
    }
}

#[test]
fn verify_rejects_a_mesh_for_another_graph() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.rgl"), THETA).unwrap();
    std::fs::write(dir.path().join("k2.rgl"), "v 0 0\nv 1 2\ne 0 0 1 0\n").unwrap();
    assert_eq!(
        run(&["synthesize", "k2.rgl", "-o", "m.rmesh"], dir.path())
            .status
            .code(),
        Some(0)
    );
    let out = run(&["verify", "g.rgl", "m.rmesh"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn malformed_and_missing_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.rgl"), "v 0 zero\n").unwrap();
    assert_eq!(run(&["validate", "bad.rgl"], dir.path()).status.code(), Some(2));
    assert_eq!(
        run(&["validate", "missing.rgl"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(run(&["roundtrip"], dir.path()).status.code(), Some(2));
}

#[test]
fn validate_prints_dot_with_values_and_labels() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.rgl"), "v 0 -1/2\nv 1 3\ne 7 0 1 1\n").unwrap();
    let dot = stdout(&run(&["validate", "g.rgl", "--dot"], dir.path()));
    assert!(
        dot.contains("-1/2") && dot.contains("3") && dot.contains("label=\"1\""),
        "{dot}"
    );
}

#[test]
fn plan_writes_json_and_rejects_large_cap_labels() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("g.rgl"),
        "mode general 2\nv 0 0\nv 1 1\ne 0 0 1 2\n",
    )
    .unwrap();
    let out = run(&["plan", "g.rgl", "-o", "p.json"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let plan: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("p.json")).unwrap()).unwrap();
    assert_eq!(plan["dimension"], 2);

    std::fs::write(
        dir.path().join("big.rgl"),
        "mode general 2\nv 0 0\nv 1 1\ne 0 0 1 3\n",
    )
    .unwrap();
    assert_eq!(run(&["plan", "big.rgl"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["validate", "big.rgl"], dir.path()).status.code(), Some(1));
}

#[test]
fn gen_random_is_seeded_and_batches_pass() {
    let dir = tempfile::tempdir().unwrap();
    let a = stdout(&run(
        &["gen-random", "--vertices", "6", "--seed", "4"],
        dir.path(),
    ));
    let b = stdout(&run(
        &["gen-random", "--vertices", "6", "--seed", "4"],
        dir.path(),
    ));
    assert_eq!(a, b);
    assert!(a.starts_with("mode binary"));

    let out = run(
        &["gen-random", "--general", "3", "--seed", "1", "-o", "g.rgl"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let general = std::fs::read_to_string(dir.path().join("g.rgl")).unwrap();
    assert!(general.starts_with("mode general 3"));

    let out = run(
        &["roundtrip", "--batch", "12", "--seed", "40", "--vertices", "8"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("12/12 round trips passed"));
}
