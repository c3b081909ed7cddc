use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn geomatch(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geomatch"))
        .args(args)
        .current_dir(dir)
        .env_remove("GEOMATCH_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "ok.txt", "# two segments\n0 0 4 1\n1 3 5 4\n");
    write(d, "cross.txt", "0 0 2 2\n0 2 2 0\n");
    write(d, "collinear.txt", "0 0 1 1\n2 2 5 0\n");
    write(d, "bad.txt", "0 0 4 1\n1 3 five 4\n");

    let o = geomatch(d, &["validate", "ok.txt"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("perfect, non-crossing"));

    let o = geomatch(d, &["validate", "cross.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0-1 and 2-3 cross"));

    let o = geomatch(d, &["validate", "collinear.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("collinear triple (0, 1, 2)"));

    let o = geomatch(d, &["validate", "bad.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 5"));

    assert_eq!(geomatch(d, &["validate", "missing.txt"]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (flavor, size) in [("random", "6"), ("hv", "8"), ("chc", "6"), ("parallel-chords", "5"), ("general-odd", "1")] {
        let a = geomatch(d, &["gen", flavor, size, "--seed", "1"]);
        let b = geomatch(d, &["gen", flavor, size, "--seed", "1"]);
        assert_eq!(a.status.code(), Some(0), "{flavor}");
        assert_eq!(a.stdout, b.stdout, "{flavor}");
        write(d, "g.txt", &stdout(&a));
        assert_eq!(geomatch(d, &["validate", "g.txt"]).status.code(), Some(0), "{flavor}");
    }
    let chords = stdout(&geomatch(d, &["gen", "parallel-chords", "5"]));
    assert_eq!(chords.lines().count(), 5);
}

#[test]
fn seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let explicit = geomatch(d, &["gen", "random", "4", "--seed", "9"]);
    let from_env = Command::new(env!("CARGO_BIN_EXE_geomatch"))
        .args(["gen", "random", "4"])
        .env("GEOMATCH_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(explicit.stdout, from_env.stdout);
}

#[test]
fn transform_writes_a_short_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = geomatch(d, &["gen", "random", "4", "--seed", "5", "--out", "a.txt", "--partner", "b.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let o = geomatch(d, &["run", "transform", "a.txt", "b.txt", "--verify", "--oracle", "--out", "out", "--svg", "t.svg"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("verify: ok"));
    let length: usize = text.lines().find_map(|l| l.strip_prefix("length: ")).unwrap().parse().unwrap();
    assert!(length <= 4);
    let seq = fs::read_to_string(d.join("out/sequence.txt")).unwrap();
    assert_eq!(seq.matches("== step").count(), length + 1);
    for k in 0..=length {
        assert!(d.join(format!("t-{k}.svg")).exists());
    }
    // rendering the sequence file gives one drawing per step
    let o = geomatch(d, &["render", "out/sequence.txt", "r.svg"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(d.join(format!("r-{length}.svg")).exists());
}

#[test]
fn run_each_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    geomatch(d, &["gen", "hv", "6", "--seed", "4", "--out", "hv.txt"]);
    geomatch(d, &["gen", "chc", "6", "--seed", "4", "--out", "chc.txt"]);
    geomatch(d, &["gen", "random", "10", "--seed", "4", "--out", "r.txt"]);
    geomatch(d, &["gen", "random", "3", "--seed", "4", "--out", "r3.txt"]);
    for (alg, input) in [
        ("hv", "hv.txt"),
        ("chc", "chc.txt"),
        ("four-fifths", "r.txt"),
        ("crossings", "r.txt"),
        ("two-trees-search", "r3.txt"),
    ] {
        let o = geomatch(d, &["run", alg, input, "--verify", "--oracle", "--out", alg, "--svg", &format!("{alg}.svg")]);
        assert_eq!(o.status.code(), Some(0), "{alg}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("verify: ok"), "{alg}");
        assert!(d.join(format!("{alg}.svg")).exists(), "{alg}");
    }
    let o = geomatch(d, &["run", "four-fifths", "r.txt"]);
    assert!(stdout(&o).contains("guarantee: 8"));
    let out = fs::read_to_string(d.join("hv/matching.txt")).unwrap();
    write(d, "m.txt", &out);
    assert_eq!(geomatch(d, &["validate", "m.txt"]).status.code(), Some(0));
    assert!(d.join("crossings/left.txt").exists() && d.join("crossings/right.txt").exists());
}

#[test]
fn preconditions_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "diag.txt", "0 0 3 1\n5 5 9 6\n");
    write(d, "odd.txt", "0 0 4 1\n1 3 5 4\n7 0 9 2\n");
    assert_eq!(geomatch(d, &["run", "hv", "diag.txt"]).status.code(), Some(1));
    assert_eq!(geomatch(d, &["run", "four-fifths", "odd.txt"]).status.code(), Some(1));
    assert_eq!(geomatch(d, &["run", "no-such", "odd.txt"]).status.code(), Some(1));
    assert_eq!(geomatch(d, &["run", "transform", "odd.txt"]).status.code(), Some(1));
}

#[test]
fn shear_handles_repeated_x() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // points 0 and 2 share x = 0
    write(d, "a.txt", "0 0 4 1\n0 3 5 4\n");
    write(d, "b.txt", "0 0 0 3\n4 1 5 4\n");
    assert_eq!(geomatch(d, &["run", "transform", "a.txt", "b.txt"]).status.code(), Some(1));
    let o = geomatch(d, &["run", "transform", "a.txt", "b.txt", "--shear", "--verify", "--out", "o"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let seq = fs::read_to_string(d.join("o/sequence.txt")).unwrap();
    // written back in the original coordinates
    assert!(seq.starts_with("== step 0 ==\n0 0 4 1\n"));
}

#[test]
fn render_layers() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "one.txt", "0 0 3 1\n");
    let o = geomatch(d, &["render", "one.txt", "one.svg"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2 cells"));
    let svg = fs::read_to_string(d.join("one.svg")).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 2);
    assert!(svg.contains("id=\"extensions\"") && svg.contains("id=\"dual\""));
    let again = geomatch(d, &["render", "one.txt", "two.svg"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(svg, fs::read_to_string(d.join("two.svg")).unwrap());

    geomatch(d, &["render", "one.txt", "bare.svg", "--layers", "segments"]);
    let bare = fs::read_to_string(d.join("bare.svg")).unwrap();
    assert!(!bare.contains("<polygon") && bare.contains("id=\"segments\""));
    assert_ne!(geomatch(d, &["render", "one.txt", "x.svg", "--layers", "bogus"]).status.code(), Some(0));
}
