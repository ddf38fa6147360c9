use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mealy-growth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn growth_csv() {
    let o = run(&["growth", "a3", "--nmax", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,delta,spherical,cumulative");
    assert_eq!(lines[9], "9,6,21,43");
    assert_eq!(lines[10], "10,5,20,48");
}

#[test]
fn growth_is_deterministic() {
    let a = run(&["growth", "a4", "--nmax", "12", "--format", "json"]);
    let b = run(&["growth", "a4", "--nmax", "12", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn growth_from_file_with_oracle() {
    let path = std::env::temp_dir().join(format!("mealy-cli-{}.mealy", std::process::id()));
    fs::write(
        &path,
        "automaton x\nalphabet 2\nstates 2\nq0: (q1,x1) (q1,x0)\nq1: (q1,x0) (q1,x1)\n",
    )
    .unwrap();
    let o = run(&[
        "growth",
        path.to_str().unwrap(),
        "--nmax",
        "4",
        "--direct-oracle",
    ]);
    fs::remove_file(&path).ok();
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn series_a5_prefix() {
    let o = run(&["series", "a5", "--nmax", "4"]);
    assert_eq!(stdout(&o), "n,coefficient\n0,1\n1,3\n2,6\n3,11\n4,18\n");
}

#[test]
fn normal_forms_a4() {
    let o = run(&["normal-forms", "a4", "--nmax", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "a2"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "a1"]).status.code(), Some(1));
    assert_eq!(run(&["growth", "zz"]).status.code(), Some(2));
    assert_eq!(
        run(&["growth", "a1", "--nmax", "30", "--element-cap", "100"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn verify_reports_the_printed_a1_relation() {
    let o = run(&["verify", "a1", "--format", "tsv"]);
    let text = stdout(&o);
    let failing: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing.len(), 1, "{text}");
    assert!(failing[0].contains("a1.presentation"));
}

#[test]
fn export_round_trip() {
    let dir = std::env::temp_dir().join(format!("mealy-cli-export-{}", std::process::id()));
    let o = run(&["export-corpus", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["a4", "a5-hit0"] {
        let a = dir.join(format!("{name}.mealy"));
        let r = dir.join(format!("{name}.relations.json"));
        let o = run(&["relations", a.to_str().unwrap(), r.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}");
    }
    let shipped = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    for entry in fs::read_dir(&dir).unwrap() {
        let entry = entry.unwrap();
        let fresh = fs::read(entry.path()).unwrap();
        let stored = fs::read(shipped.join(entry.file_name())).unwrap();
        assert_eq!(fresh, stored, "{:?}", entry.file_name());
    }
    fs::remove_dir_all(&dir).ok();
}
