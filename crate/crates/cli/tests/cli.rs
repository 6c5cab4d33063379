use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twiso-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn twiso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twiso")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const P3: &str = "c path on three vertices\np tw 3 2\ne 1 2\ne 2 3\n";
const C4: &str = "p tw 4 4\ne 1 2\ne 1 4\ne 2 3\ne 3 4\n";
const C4_SHUFFLED: &str = "p tw 4 4\ne 1 3\ne 1 4\ne 2 3\ne 2 4\n";
const P4: &str = "p tw 4 3\ne 1 2\ne 2 3\ne 3 4\n";

#[test]
fn tdd_build_prints_records() {
    let g = scratch("p3.gr", P3);
    let out = twiso(&["tdd-build", g.to_str().unwrap(), "--root", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "b 1 0 1\nb 2 1 2\nb 3 2 3\n");
}

#[test]
fn width_and_augmented_tree() {
    let g = scratch("c4-width.gr", C4);
    let out = twiso(&["tdd-width", g.to_str().unwrap(), "-k", "2"]);
    assert_eq!(stdout(&out).trim(), "2");
    let out = twiso(&["augtree", g.to_str().unwrap(), "--root", "1"]);
    assert_eq!(stdout(&out).trim(), "B(1)[S(1)[B(2,4)[S(2,4)[B(3)]]]]");
}

#[test]
fn iso_commands_exit_codes() {
    let c4 = scratch("c4.gr", C4);
    let c4s = scratch("c4s.gr", C4_SHUFFLED);
    let p4 = scratch("p4.gr", P4);
    let (c4, c4s, p4) = (c4.to_str().unwrap(), c4s.to_str().unwrap(), p4.to_str().unwrap());
    for cmd in ["iso-tdw", "iso-tw"] {
        assert_eq!(twiso(&[cmd, c4, c4s, "-k", "2"]).status.code(), Some(0));
        assert_eq!(twiso(&[cmd, c4, p4, "-k", "2"]).status.code(), Some(1));
    }
    assert_eq!(twiso(&["iso-tw", c4, c4s, "-k", "1"]).status.code(), Some(2));
    let out = twiso(&["iso-brute", c4, c4s]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("map ")).count(), 4);
}

#[test]
fn iso_one_and_iso_both_with_decomposition_files() {
    let c4 = scratch("c4-one.gr", C4);
    let c4s = scratch("c4s-one.gr", C4_SHUFFLED);
    let d = scratch("c4.td", "p td 2 3 4\nb 1 1 2 4\nb 2 2 3 4\nt 1 2\nr 1\n");
    let ds = scratch("c4s.td", "p td 2 3 4\nb 1 1 3 4\nb 2 2 3 4\nt 1 2\n");
    let (c4, c4s, d, ds) = (c4.to_str().unwrap(), c4s.to_str().unwrap(), d.to_str().unwrap(), ds.to_str().unwrap());
    let out = twiso(&["iso-one", c4, d, c4s, "-k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("yes\nmap 1 "));
    assert_eq!(twiso(&["iso-both", c4, d, c4s, ds]).status.code(), Some(0));
    let coarse = scratch("coarse.td", "p td 1 4 4\nb 1 1 2 3 4\n");
    assert_eq!(twiso(&["iso-both", c4, d, c4s, coarse.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn canon_agrees_on_relabelings() {
    let c4 = scratch("c4-canon.gr", C4);
    let c4s = scratch("c4s-canon.gr", C4_SHUFFLED);
    let a = stdout(&twiso(&["canon-tdw", c4.to_str().unwrap(), "-k", "2"]));
    let b = stdout(&twiso(&["canon-tdw", c4s.to_str().unwrap(), "-k", "2"]));
    assert_eq!(a.lines().next(), b.lines().next());
    assert!(a.lines().next().unwrap().chars().all(|c| c.is_ascii_hexdigit()));
}

#[test]
fn json_records_are_single_lines() {
    let c4 = scratch("c4-json.gr", C4);
    let p4 = scratch("p4-json.gr", P4);
    let out = twiso(&["--json", "iso-brute", c4.to_str().unwrap(), p4.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    let record: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(record["command"], "iso-brute");
    assert_eq!(record["verdict"], "no");
    assert!(record["witness"].is_null());
    assert!(record["inputs"]["g"].is_string());
}

#[test]
fn gen_writes_files_that_round_trip() {
    let dir = std::env::temp_dir().join(format!("twiso-cli-gen-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let (gp, tp) = (dir.join("g.gr"), dir.join("g.td"));
    let out = twiso(&[
        "gen", "--n", "12", "--k", "2", "--ratio", "0.8", "--seed", "3",
        "--graph-out", gp.to_str().unwrap(), "--td-out", tp.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = twiso(&["iso-one", gp.to_str().unwrap(), tp.to_str().unwrap(), gp.to_str().unwrap(), "-k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let again = twiso(&["gen", "--n", "12", "--k", "2", "--ratio", "0.8", "--seed", "3"]);
    let text = stdout(&again);
    assert!(text.contains(&fs::read_to_string(&gp).unwrap()));
}

#[test]
fn usage_errors_exit_with_two() {
    let bad = scratch("bad.gr", "p tw 2 1\ne 1 5\n");
    assert_eq!(twiso(&["iso-brute", bad.to_str().unwrap(), bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(twiso(&["iso-tw"]).status.code(), Some(2));
    assert_eq!(twiso(&["gen", "--n", "2", "--k", "3", "--ratio", "0.5", "--seed", "1"]).status.code(), Some(2));
    let g = scratch("p3-root.gr", P3);
    assert_eq!(twiso(&["tdd-build", g.to_str().unwrap(), "--root", "9"]).status.code(), Some(2));
}
