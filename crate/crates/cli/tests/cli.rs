use std::path::PathBuf;
use std::process::{Command, Output};

fn flatknot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatknot")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("flatknot-cli-{}-{name}", std::process::id()))
}

#[test]
fn canon_prints_key_and_class() {
    let o = flatknot(&["canon", "O1O2O3U1U3U2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("key: OOOUUU [1 3 2]"), "{text}");
    assert!(text.contains("gauss: O1O2O3U1U3U2"), "{text}");
}

#[test]
fn ou_matching_input_is_accepted() {
    let o = flatknot(&["canon", "OOOUUU [1 3 2]"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("gauss: O1O2O3U1U3U2"));
}

#[test]
fn invariants_of_the_trefoil_shadow() {
    let o = flatknot(&["invariants", "--u", "--arrow", "--jk", "O1O2O3U1U3U2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("arrow: 2*K1^2 - K2"), "{text}");
    assert!(text.contains("J normalized: -3*z - 5"), "{text}");
    assert!(text.contains("genus: 2"), "{text}");
}

#[test]
fn invariants_json_is_a_record() {
    let o = flatknot(&["invariants", "--json", "O1O2O3U1U3U2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["crossings"], 3);
    assert_eq!(v["ou_word"], "OOOUUU");
    assert_eq!(v["arrow_poly"], "2*K1^2 - K2");
}

#[test]
fn reduce_removes_kinks() {
    let o = flatknot(&["reduce", "O1U1O2O3O4U2U4U3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "O1O2O3U1U3U2");
}

#[test]
fn symmetry_and_orbit_and_surface() {
    let o = flatknot(&["symmetry", "O1O2O3U1U3U2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("symmetry: "));
    let o = flatknot(&["orbit", "O1O2O3U1U3U2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).trim().is_empty());
    let o = flatknot(&["surface", "O1O2O3U1U3U2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("faces: 1"));
}

#[test]
fn slice_status_and_replay() {
    let o = flatknot(&["slice", "O1O2O3O4U1U3U4U2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status: not_slice"));

    let ribbon = "O1O2U3O4U5O6U4O7U1U2O5O3U7U6";
    let o = flatknot(&["slice", "--budget", "2,100000", ribbon]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let movie = text.strip_prefix("status: ribbon\n").expect("a ribbon movie");
    let path = temp_path("movie.txt");
    std::fs::write(&path, movie).unwrap();
    let o = flatknot(&["slice", "--replay", path.to_str().unwrap(), ribbon]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("valid movie: 1 saddles, 0 births, 1 deaths, ribbon: true"));
    // The movie does not start at the trefoil shadow.
    let o = flatknot(&["slice", "--replay", path.to_str().unwrap(), "O1O2O3U1U3U2"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tabulate_and_distinguish() {
    let path = temp_path("table.jsonl");
    let o = flatknot(&["tabulate", "--max-crossings", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("{\"schema_version\":1"));
    let o = flatknot(&["distinguish", "--table", path.to_str().unwrap(), "--battery", "phi", "--groups"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("5\t120\t8"), "{out}");
    assert!(out.lines().any(|l| l == "5.47 5.65"), "{out}");

    let o = flatknot(&["distinguish", "--table", path.to_str().unwrap(), "--battery", "jk_en"]);
    assert_eq!(o.status.code(), Some(0));

    // A table edited by hand fails validation.
    let edited = text.replacen("\"crossings\":3", "\"crossings\":4", 1);
    std::fs::write(&path, edited).unwrap();
    let o = flatknot(&["distinguish", "--table", path.to_str().unwrap(), "--battery", "phi"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    // Usage errors.
    assert_eq!(flatknot(&[]).status.code(), Some(1));
    assert_eq!(flatknot(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(flatknot(&["tabulate"]).status.code(), Some(1));
    assert_eq!(flatknot(&["distinguish", "--table", "/nonexistent/t.jsonl", "--battery", "phi"]).status.code(), Some(1));
    assert_eq!(flatknot(&["slice", "--budget", "x", "O1O2O3U1U3U2"]).status.code(), Some(1));
    assert_eq!(flatknot(&["slice"]).status.code(), Some(1));
    assert_eq!(flatknot(&["distinguish", "--table", "t.jsonl", "--battery", "nope"]).status.code(), Some(1));
    // Validation failures.
    assert_eq!(flatknot(&["canon", "O1O2U1"]).status.code(), Some(2));
    assert_eq!(flatknot(&["canon", "X1Y2"]).status.code(), Some(2));
    assert_eq!(flatknot(&["invariants", "OOOUUU [1 1 2]"]).status.code(), Some(2));
    // Help is not an error.
    assert_eq!(flatknot(&["--help"]).status.code(), Some(0));
}
