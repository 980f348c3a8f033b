use std::io::Write;
use std::process::{Command, Output};

fn nsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsa"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn infinitesimal_embeddings_compare() {
    let o = nsa(&["compare", "(< (nu2 eps) (starnu eps))"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("True"));
    assert_eq!(out.lines().last(), Some("PASS"));
    assert!(o.stderr.is_empty());
}

#[test]
fn functor_laws_summary() {
    let o = nsa(&["functor-laws", "--k", "3", "--s", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("instances, 0 failures"));
}

#[test]
fn malformed_formula_is_a_usage_error() {
    let f = file("(forall (x A) (R x x)");
    let o = nsa(&["transfer", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("syntax error at"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn transfer_of_a_sentence_file() {
    let f = file("(exists (x A) (forall (y A) (R x y)))");
    let o = nsa(&["transfer", path(&f), "--s", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("transfer: 57 instances, 0 failures"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(nsa(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nsa(&["stone", "--nope"]).status.code(), Some(2));
    assert_eq!(nsa(&[]).status.code(), Some(2));
    assert_eq!(nsa(&["eval", "(+ n"]).status.code(), Some(2));
    assert_eq!(nsa(&["nunustar", "(< x y)", "n"]).status.code(), Some(2));
}

#[test]
fn json_report_fields() {
    let o = nsa(&["--json", "stone"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "stone");
    assert!(v["instances"].as_u64().unwrap() > 0);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert!(v["details"].is_array());
}

#[test]
fn relator_round_trip_from_file() {
    let f = file("(lr (base b0 b1) (index e0 e1) (table (universe e1) (members ((b1)) ((b0) (b1)))))");
    let o = nsa(&["lr-run", path(&f), "--nx", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("classes of *X with |X| = 3: 3"));
}

#[test]
fn extension_from_file() {
    let ok = file(
        "(lr (base b0 b1) (index e0 e1) (principal ((e0 b1) (e1 b1))))\n\
         (extend (eta e1) (principal ((i0 b1) (i1 b0))))",
    );
    let o = nsa(&["extend", path(&ok)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("principal at e0=b1 e1=b1 e2=b0"));

    // The requested ultrafilter disagrees with L on the old coordinate.
    let bad = file(
        "(lr (base b0 b1) (index e0 e1) (principal ((e0 b1) (e1 b1))))\n\
         (extend (eta e1) (principal ((i0 b0) (i1 b0))))",
    );
    let o = nsa(&["extend", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().last(), Some("FAIL"));
}

#[test]
fn seeded_runs_are_deterministic() {
    let a = nsa(&["extend", "--random", "15", "--seed", "7"]);
    let b = nsa(&["extend", "--random", "15", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn nunustar_single_instance() {
    let o = nsa(&["nunustar", "(< x y)", "(* 2 n)", "n"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("True"));
}
