//! Emitted artifacts conform to the schemas shipped in schemas/.

use arclab::cli;
use serde_json::Value;

fn schema(name: &str) -> jsonschema::Validator {
    let path = format!("{}/schemas/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn json_lines(args: &str) -> Vec<Value> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("arclab").chain(args.split_whitespace()),
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    String::from_utf8(out)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v
        .iter_errors(doc)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{errors:#?}\n{doc}");
}

#[test]
fn arc_certificates() {
    let v = schema("arc_certificate.schema.json");
    for args in [
        "maxarc --q 3 --full",
        "maxarc --q 4 --full --kind projective",
        "maxarc --q 9 --random 0.2 --seed 3 --greedy",
    ] {
        for doc in json_lines(args) {
            assert_valid(&v, &doc);
        }
    }
    let mut bad = json_lines("maxarc --q 3 --full").remove(0);
    bad["kind"] = "spherical".into();
    assert!(!v.is_valid(&bad));
}

#[test]
fn construction_certificates() {
    let v = schema("construction_certificate.schema.json");
    for seed in [1, 7, 19] {
        let docs = json_lines(&format!("construct --q 49 --l 4 --seed {seed}"));
        assert_valid(&v, &docs[0]);
    }
    let docs = json_lines("construct --q 121 --l 5 --seed 2");
    assert_valid(&v, &docs[0]);
    assert_valid(&schema("point_set.schema.json"), &docs[0]["points"]);
}

#[test]
fn experiment_outputs() {
    let trial = schema("trial_record.schema.json");
    let report = schema("experiment_report.schema.json");
    for mode in ["exact", "greedy", "skip"] {
        let docs = json_lines(&format!(
            "random-arc --q 11 --p-exp 1.2 --trials 30 --seed 5 --arc-mode {mode}"
        ));
        let (last, trials) = docs.split_last().unwrap();
        assert_eq!(trials.len(), 30);
        for t in trials {
            assert_valid(&trial, t);
        }
        assert_valid(&report, last);
    }
}
