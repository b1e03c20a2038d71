//! The shipped JSON schemas agree with the serializers on field names.

use std::fs;
use std::path::PathBuf;

use lipgraph::io::*;
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn schema(name: &str) -> Value {
    let path = root().join("schemas").join(name);
    serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap()
}

fn keys(v: &Value) -> Vec<String> {
    let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
    k.sort();
    k
}

fn check(schema: &Value, doc: &Value, what: &str) {
    let props = keys(&schema["properties"]);
    for k in keys(doc) {
        assert!(props.contains(&k), "{what}: field {k} missing from schema");
    }
    for r in schema["required"].as_array().unwrap() {
        assert!(doc.get(r.as_str().unwrap()).is_some(), "{what}: required {r} not written");
    }
    assert_eq!(schema["additionalProperties"], Value::Bool(false), "{what}");
}

fn seed_docs(target: &str) -> Vec<String> {
    let dir = root().join("fuzz/corpus").join(target);
    let mut paths: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths.into_iter().map(|p| fs::read_to_string(p).unwrap()).collect()
}

macro_rules! agree {
    ($name:ident, $file:expr, $parse:ident, $write:ident) => {
        #[test]
        fn $name() {
            let s = schema($file);
            let mut seen = 0;
            for text in seed_docs(stringify!($parse)) {
                if let Ok(v) = $parse(&text) {
                    let doc: Value = serde_json::from_str(&$write(&v).unwrap()).unwrap();
                    check(&s, &doc, $file);
                    seen += 1;
                }
            }
            assert!(seen > 0);
        }
    };
}

agree!(graph_schema, "graph.schema.json", parse_graph, write_graph);
agree!(points_schema, "pointset.schema.json", parse_points, write_points);
agree!(map_schema, "vertexmap.schema.json", parse_map, write_map);
agree!(witness_schema, "witness.schema.json", parse_witness, write_witness);
agree!(cube_model_schema, "cube-model.schema.json", parse_cube_model, write_cube_model);

#[test]
fn nested_witness_and_cube_fields() {
    let w = schema("witness.schema.json");
    let cert = &w["properties"]["certificate"];
    assert_eq!(keys(&cert["properties"]), ["delta", "lip"]);
    assert_eq!(w["properties"]["depth"]["maximum"], MAX_WITNESS_DEPTH);
    let c = schema("cube-model.schema.json");
    for text in seed_docs("parse_cube_model") {
        if let Ok(m) = parse_cube_model(&text) {
            let doc: Value = serde_json::from_str(&write_cube_model(&m).unwrap()).unwrap();
            check(&c["properties"]["params"], &doc["params"], "params");
        }
    }
}

#[test]
fn schemas_are_valid_json_with_ids() {
    for e in fs::read_dir(root().join("schemas")).unwrap() {
        let p = e.unwrap().path();
        let v: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(v["$id"].as_str().unwrap(), p.file_name().unwrap().to_str().unwrap());
    }
}
