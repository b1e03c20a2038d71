use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lipgraph(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lipgraph")).current_dir(dir).args(args).output().unwrap()
}

fn json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn laakso_level_two_has_thirty_vertices() {
    let d = tempfile::tempdir().unwrap();
    let o = lipgraph(d.path(), &["generate", "--family", "laakso", "--level", "2"]);
    assert_eq!(code(&o), 0);
    let g: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(g["n"], 30);
    assert_eq!(g["unit"], "1/16");
    assert_eq!(g["edges"].as_array().unwrap().len(), 36);
}

#[test]
fn transform_k4_certifies() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("k4.json"), r#"{"n": 4, "unit": "1", "edges": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#).unwrap();
    let o = lipgraph(
        d.path(),
        &["transform", "--in", "k4.json", "--epsilon", "1/2", "--certify", "--out", "m.json", "--map", "f.json", "--report", "r.json"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(d.path(), "r.json");
    assert_eq!(r["ok"], true);
    let (l, rr) = (r["l"].as_u64().unwrap(), r["r"].as_u64().unwrap());
    assert_eq!((rr, l), (1, 5));
    let lo: f64 = r["worst_lower"]["approx"].as_f64().unwrap();
    let hi: f64 = r["worst_upper"]["approx"].as_f64().unwrap();
    assert!(lo >= l as f64 && hi <= (l + 2 * rr) as f64);
    assert_eq!(json(d.path(), "f.json")["pairs"].as_array().unwrap().len(), 4);
}

#[test]
fn extract_refuses_unnormalized_embeddings() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(code(&lipgraph(p, &["generate", "--family", "diamond", "--level", "2", "--out", "d.json"])), 0);
    assert_eq!(code(&lipgraph(p, &["embed", "--in", "d.json", "--out", "f.json"])), 0);
    let mut f = json(p, "f.json");
    for (_, x) in f["points"].as_object_mut().unwrap() {
        for c in x.as_array_mut().unwrap() {
            let s = c.as_str().unwrap().to_string();
            *c = Value::String(format!("{}", lipgraph::rational::parse_rational(&s).unwrap() * lipgraph::rational::int(3)));
        }
    }
    fs::write(p.join("big.json"), f.to_string()).unwrap();
    let o = lipgraph(p, &["extract", "--family", "diamond", "--level", "2", "--embedding", "big.json", "--out", "t.json"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--normalize"));
    let o = lipgraph(p, &["extract", "--family", "diamond", "--level", "2", "--embedding", "big.json", "--normalize", "--certify", "--out", "t.json"]);
    assert_eq!(code(&o), 0);
    let t = json(p, "t.json");
    assert_eq!(t["certificate"]["delta"], "1");
    assert_eq!(t["nodes"].as_array().unwrap().len(), 7);
}

#[test]
fn schema_errors_name_file_and_field() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("bad.json"), r#"{"n": 2, "unit": "1", "edges": [[0, 2]]}"#).unwrap();
    let o = lipgraph(d.path(), &["transform", "--in", "bad.json"]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.json") && err.contains("edges[0][1]"), "{err}");
}

#[test]
fn usage_and_io_errors_exit_one() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&lipgraph(d.path(), &["frobnicate"])), 1);
    assert_eq!(code(&lipgraph(d.path(), &["transform", "--in", "missing.json"])), 1);
    assert_eq!(code(&lipgraph(d.path(), &["transform", "--in", "x", "--epsilon", "0.5"])), 1);
    assert_eq!(code(&lipgraph(d.path(), &["--help"])), 0);
}

#[test]
fn failed_certification_exits_two() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    lipgraph(p, &["generate", "--family", "laakso", "--level", "1", "--out", "l.json"]);
    lipgraph(p, &["embed", "--in", "l.json", "--out", "f.json"]);
    let o = lipgraph(p, &["extract", "--family", "laakso", "--level", "1", "--embedding", "f.json", "--certify", "--out", "st.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&lipgraph(p, &["verify", "witness", "--in", "st.json", "--delta", "2", "--out", "ok.json"])), 0);
    let o = lipgraph(p, &["verify", "witness", "--in", "st.json", "--delta", "5", "--out", "v.json"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(p, "v.json")["violation"]["kind"], "separation");

    fs::write(p.join("path.json"), r#"{"n": 3, "unit": "1", "edges": [[0,1],[1,2]]}"#).unwrap();
    fs::write(p.join("tri.json"), r#"{"n": 3, "unit": "1", "edges": [[0,1],[1,2],[0,2]]}"#).unwrap();
    fs::write(p.join("id.json"), r#"{"pairs": [[0,0],[1,1],[2,2]]}"#).unwrap();
    let args = ["verify", "distortion", "--map", "id.json", "--source", "path.json", "--target", "tri.json", "--max"];
    assert_eq!(code(&lipgraph(p, &[&args[..], &["2"]].concat())), 0);
    assert_eq!(code(&lipgraph(p, &[&args[..], &["3/2"]].concat())), 2);
}

#[test]
fn martingale_certifies_a_semitree() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    lipgraph(p, &["generate", "--family", "laakso", "--level", "2", "--out", "l.json"]);
    lipgraph(p, &["embed", "--in", "l.json", "--out", "f.json"]);
    lipgraph(p, &["extract", "--family", "laakso", "--level", "2", "--embedding", "f.json", "--out", "st.json"]);
    let o = lipgraph(p, &["martingale", "--semitree", "st.json", "--certify", "--levels", "mg.json"]);
    assert_eq!(code(&o), 0);
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["ok"], true);
    assert_eq!(rep["levels"].as_array().unwrap().len(), 2);
    assert_eq!(json(p, "mg.json")["levels"][2].as_array().unwrap().len(), 16);
    // a tree is not a semitree
    lipgraph(p, &["generate", "--family", "diamond", "--level", "1", "--out", "d.json"]);
    lipgraph(p, &["embed", "--in", "d.json", "--out", "g.json"]);
    lipgraph(p, &["extract", "--family", "diamond", "--level", "1", "--embedding", "g.json", "--out", "t.json"]);
    assert_eq!(code(&lipgraph(p, &["martingale", "--semitree", "t.json"])), 1);
}

#[test]
fn outputs_round_trip_through_the_parsers() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    lipgraph(p, &["generate", "--family", "diamond", "--level", "2", "--out", "d.json", "--inclusion", "inc.json"]);
    lipgraph(p, &["cube-l1", "--n", "2", "--out", "cube.json"]);
    lipgraph(p, &["embed", "--in", "d.json", "--out", "f.json"]);
    lipgraph(p, &["extract", "--family", "diamond", "--level", "2", "--embedding", "f.json", "--out", "t.json"]);
    let read = |n: &str| fs::read_to_string(p.join(n)).unwrap();
    use lipgraph::io::*;
    assert_eq!(write_graph(&parse_graph(&read("d.json")).unwrap()).unwrap(), read("d.json"));
    assert_eq!(write_map(&parse_map(&read("inc.json")).unwrap()).unwrap(), read("inc.json"));
    assert_eq!(write_points(&parse_points(&read("f.json")).unwrap()).unwrap(), read("f.json"));
    assert_eq!(write_witness(&parse_witness(&read("t.json")).unwrap()).unwrap(), read("t.json"));
    assert_eq!(write_cube_model(&parse_cube_model(&read("cube.json")).unwrap()).unwrap(), read("cube.json"));
    let o = lipgraph(p, &["verify", "cube-l1", "--in", "cube.json", "--out", "v.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(p, "v.json")["upper_ok"], true);
}

#[test]
fn seeded_runs_are_reproducible() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    lipgraph(p, &["generate", "--family", "tree3", "--level", "1", "--out", "t.json"]);
    let run = |seed: &str, tag: &str| {
        let out = format!("k{tag}.json");
        let man = format!("m{tag}.json");
        let o = lipgraph(p, &["expander", "plant", "--base-n", "64", "--seed", seed, "--target", "t.json", "--out", &out, "--manifest", &man]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        (fs::read(p.join(&out)).unwrap(), json(p, &man))
    };
    let (a, ma) = run("7", "a");
    let (b, mb) = run("7", "b");
    let (c, _) = run("8", "c");
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(ma["outputs"]["ka.json"], mb["outputs"]["kb.json"]);
    assert_eq!(ma["seed"], 7);
    assert_eq!(ma["verdicts"]["isometric_copy"], true);
}

#[test]
fn report_bundles_certifications() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    lipgraph(p, &["generate", "--family", "hamming", "--level", "3", "--out", "h.json"]);
    let o = lipgraph(p, &["report", "--in", "h.json", "--epsilon", "1/2"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["sandwich"]["ok"], true);
    assert_eq!(r["kuratowski"]["distortion"]["exact"], "1");
    assert_eq!(r["graph"]["diameter"], 3);
}
