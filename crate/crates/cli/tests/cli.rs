use std::path::PathBuf;
use std::process::{Command, Output};

use gridhom_core::fixtures::random_weighted;
use gridhom_core::moves::Move;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gridhom"));
    c.env_remove("GRIDHOM_THREADS");
    c
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn p(path: &PathBuf) -> &str {
    path.to_str().unwrap()
}

#[test]
fn handcuff_table() {
    let o = run(&["compute", p(&data("handcuff_g2.grid"))]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("total dimension 4"), "{out}");
    // (M, A, 2A, dim) rows for a = 1, b = 2
    for row in [["0", "3", "6", "1"], ["-1", "2", "4", "1"], ["-1", "1", "2", "1"], ["-2", "0", "0", "1"]] {
        assert!(
            out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == row),
            "missing {row:?} in\n{out}"
        );
    }
}

#[test]
fn json_report() {
    let o = run(&["compute", p(&data("handcuff_g3.grid")), "--json", "--hat", "--tilde", "--euler"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["hat"]["total"], 8);
    assert_eq!(v["tilde"]["total"], 8 * 32);
    assert_eq!(v["input"]["n"], 7);
    assert_eq!(v["euler"]["hat_homology"]["display"], "0");
    let classes = v["hat"]["classes"].as_array().unwrap();
    assert!(classes.iter().all(|c| c["alex2"].as_i64().unwrap() >= 0));
}

#[test]
fn raw_keeps_absolute_gradings() {
    let norm: Value = serde_json::from_str(&stdout(&run(&["compute", p(&data("trefoil.grid")), "--json"]))).unwrap();
    let raw: Value =
        serde_json::from_str(&stdout(&run(&["compute", p(&data("trefoil.grid")), "--json", "--raw"]))).unwrap();
    assert_eq!(norm["normalized"], true);
    assert_eq!(raw["normalized"], false);
    let min = |v: &Value| v["hat"]["classes"].as_array().unwrap().iter().map(|c| c["alex2"].as_i64().unwrap()).min();
    assert_eq!(min(&norm), Some(0));
    assert_eq!(raw["hat"]["total"], 3);
}

#[test]
fn isolated_star() {
    let o = run(&["compute", p(&data("star.grid")), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["hat"]["total"], 1);
    assert_eq!(v["hat"]["classes"][0]["maslov"], 0);
}

#[test]
fn random_diagrams_match_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 5 {
        let Some(wd) = random_weighted(&mut rng, 5) else { continue };
        let f = write_tmp(&dir, &format!("r{done}.grid"), &wd.to_file().serialize());
        let o = run(&["compute", p(&f), "--tilde", "--check-oracle"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("oracle: agrees"));
        done += 1;
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_token = write_tmp(&dir, "a.grid", "n=2\nO Y\nX *\n");
    assert_eq!(code(&run(&["compute", p(&bad_token)])), 1);
    assert_eq!(code(&run(&["compute", "/nonexistent/file.grid"])), 1);
    let two_os = write_tmp(&dir, "b.grid", "n=2\nO O\nX *\n");
    assert_eq!(code(&run(&["compute", p(&two_os)])), 2);
    let unbalanced = write_tmp(&dir, "c.grid", "n=2\n. *\n* X\nweights= 1\n");
    let o = run(&["compute", p(&unbalanced)]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not balanced"));
    let wrong_count = run(&["compute", p(&data("trefoil.grid")), "--weights", "1,2"]);
    assert_eq!(code(&wrong_count), 3);
    let big = run(&["compute", p(&data("trefoil_good.grid")), "--check-oracle"]);
    assert_eq!(code(&big), 0);
    let no_sink = run(&["verify", "sink-source", p(&data("trefoil.grid"))]);
    assert_eq!(code(&no_sink), 2);
}

#[test]
fn verify_theorems() {
    let u = data("unknot_vertex.grid");
    let ut = data("unknot_vertex_top_left.grid");
    let t = data("trefoil_good.grid");
    let theta = data("theta_source_sink.grid");
    let bouquet = data("bouquet_good.grid");
    let cases: Vec<Vec<&str>> = vec![
        vec!["cut-edge", p(&u), p(&ut)],
        vec!["sink-source", p(&theta)],
        vec!["wedge", p(&bouquet), p(&ut)],
        vec!["connected-sum", p(&u), p(&ut)],
        vec!["disjoint", p(&t), p(&u)],
        vec!["kunneth", p(&u), p(&u)],
        vec!["cn-acyclic", "--from", "2", "--to", "6"],
    ];
    for args in cases {
        let mut full = vec!["verify"];
        full.extend(&args);
        let o = run(&full);
        let out = stdout(&o);
        assert_eq!(code(&o), 0, "{args:?}: {out}{}", String::from_utf8_lossy(&o.stderr));
        assert!(out.contains("PASS") && !out.contains("FAIL"), "{args:?}: {out}");
    }
}

#[test]
fn move_invariance_on_the_third_handcuff() {
    let o = run(&["verify", "move-invariance", p(&data("handcuff_g3.grid")), "--seed", "3", "--steps", "20", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["results"][0]["notes"].as_array().unwrap().len(), 20);
}

#[test]
fn trace_output() {
    let v: Value = serde_json::from_str(&stdout(&run(&["trace", p(&data("handcuff_g2.grid")), "--json"]))).unwrap();
    assert_eq!(v["skeleton"]["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(v["skeleton"]["edges"].as_array().unwrap().len(), 3);
    assert_eq!(v["vertex_weights"], serde_json::json!([1, 2]));
    let star: Value = serde_json::from_str(&stdout(&run(&["trace", p(&data("star.grid")), "--json"]))).unwrap();
    assert_eq!(star["skeleton"]["vertices"].as_array().unwrap().len(), 1);
    assert_eq!(star["skeleton"]["edges"].as_array().unwrap().len(), 0);
    let text = stdout(&run(&["trace", p(&data("handcuff_g2.grid")), "--weights", "2,0,5"]));
    assert!(text.contains("v0: in 2 out 2 weight 2"), "{text}");
}

#[test]
fn move_logs() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = data("handcuff_g2.grid");
    let original = gridhom_core::DiagramFile::parse(&std::fs::read_to_string(&g2).unwrap()).unwrap();

    let empty = write_tmp(&dir, "empty.json", "[]");
    let copy = stdout(&run(&["moves", p(&g2), p(&empty)]));
    assert_eq!(gridhom_core::DiagramFile::parse(&copy).unwrap(), original);

    // the X in row 0, column 3 of the second handcuff; its new O lands at (1, 4)
    let log = vec![Move::Stabilize { row: 0, col: 3 }, Move::Destabilize { row: 1, col: 4 }];
    let there_and_back = write_tmp(&dir, "tb.json", &serde_json::to_string(&log).unwrap());
    let o = run(&["moves", p(&g2), p(&there_and_back)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(gridhom_core::DiagramFile::parse(&stdout(&o)).unwrap(), original);

    let illegal = write_tmp(&dir, "bad.json", r#"[{"move":"cyclic_row","k":1},{"move":"stabilize","row":0,"col":0}]"#);
    let o = run(&["moves", p(&g2), p(&illegal)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("step 1"));

    let walk1 = stdout(&run(&["walk", p(&g2), "--seed", "9", "--steps", "20"]));
    let walk2 = stdout(&run(&["walk", p(&g2), "--seed", "9", "--steps", "20"]));
    assert_eq!(walk1, walk2);
    let wl = write_tmp(&dir, "walk.json", &walk1);
    let out = dir.path().join("out.grid");
    assert_eq!(code(&run(&["moves", p(&g2), p(&wl), "-o", p(&out)])), 0);
    let after = std::fs::read_to_string(&out).unwrap();
    let h1 = stdout(&run(&["compute", p(&g2)]));
    let h2 = stdout(&run(&["compute", p(&out)]));
    let tail = |s: &str| s.lines().skip(2).collect::<Vec<_>>().join("\n");
    assert_eq!(tail(&h1), tail(&h2), "{after}");
}

#[test]
fn output_is_independent_of_threads() {
    let g3 = data("handcuff_g3.grid");
    let args = ["compute", p(&g3), "--tilde", "--json"];
    let a = stdout(&run(&[&["--threads", "1"], &args[..]].concat()));
    let b = stdout(&run(&[&["--threads", "3"], &args[..]].concat()));
    let c = stdout(&bin().args(args).env("GRIDHOM_THREADS", "2").output().unwrap());
    assert_eq!(a, b);
    assert_eq!(a, c);
}
