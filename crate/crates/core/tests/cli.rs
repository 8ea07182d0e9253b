use std::path::PathBuf;

use arclab::cli::{self, EXIT_BUDGET, EXIT_OK, EXIT_PRECONDITION, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("arclab").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn data_lines(out: &str) -> Vec<&str> {
    out.lines().filter(|l| !l.starts_with('#')).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("arclab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn census_examples() {
    let (code, out, err) = run(&["census", "--q", "3", "--k", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.is_empty());
    assert_eq!(data_lines(&out)[1].split(',').nth(3), Some("72"));
    let (_, out, _) = run(&["census", "--q", "4", "--k", "1", "--kind", "affine"]);
    assert_eq!(data_lines(&out)[1].split(',').nth(3), Some("16"));
    let (_, out, _) = run(&["census", "--q", "3", "--k", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(data_lines(&out)[0]).unwrap();
    assert_eq!(v["count"], "54");
}

#[test]
fn construct_and_verify() {
    let (code, out, _) = run(&["construct", "--q", "49", "--l", "4", "--seed", "7"]);
    assert_eq!(code, EXIT_OK);
    let cert: serde_json::Value = serde_json::from_str(data_lines(&out)[0]).unwrap();
    assert_eq!(cert["no_l_tuples"], true);
    assert_eq!(cert["size_check"], true);
    assert_eq!(cert["triples_check"], true);

    let path = scratch("cert.json");
    std::fs::write(&path, &out).unwrap();
    let (code, out, _) = run(&["construct", "--verify", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("\"verified\":true"));

    let mut forged = cert.clone();
    forged["points"]["points"] = serde_json::json!((0..49).collect::<Vec<_>>());
    forged["size"] = 49.into();
    std::fs::write(&path, forged.to_string()).unwrap();
    let (code, out, _) = run(&["construct", "--verify", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(out.contains("\"verified\":false"));
}

#[test]
fn maxarc_certificate_roundtrip() {
    let (code, out, _) = run(&["maxarc", "--q", "3", "--full"]);
    assert_eq!(code, EXIT_OK);
    let cert: serde_json::Value = serde_json::from_str(data_lines(&out)[0]).unwrap();
    assert_eq!(cert["arc_size"], 4);
    assert_eq!(cert["optimal"], true);
    assert_eq!(cert["input_size"], 9);

    let path = scratch("arc.json");
    std::fs::write(&path, &out).unwrap();
    assert_eq!(
        run(&["maxarc", "--q", "3", "--verify", path.to_str().unwrap()]).0,
        EXIT_OK
    );
    std::fs::write(&path, r#"{"q":3,"kind":"affine","input_size":9,"arc_size":3,"optimal":true,"witness":[0,1,2],"nodes":1}"#).unwrap();
    assert_eq!(
        run(&["maxarc", "--q", "3", "--verify", path.to_str().unwrap()]).0,
        EXIT_PRECONDITION
    );

    let (code, _, _) = run(&["maxarc", "--q", "7", "--full", "--budget", "5"]);
    assert_eq!(code, EXIT_BUDGET);
}

#[test]
fn point_files_feed_tuples() {
    let path = scratch("points.txt");
    std::fs::write(&path, "5 affine\n0 1 2 3 4 7\n").unwrap();
    let (code, out, err) = run(&[
        "tuples",
        "--q",
        "5",
        "--points",
        path.to_str().unwrap(),
        "--l",
        "4",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: serde_json::Value = serde_json::from_str(data_lines(&out)[0]).unwrap();
    assert_eq!(v["size"], 6);
    assert_eq!(v["tuples"], "5");
    assert_eq!(v["triples"], "10");
    assert_eq!(v["incidences"], 36);
    assert_eq!(
        run(&["tuples", "--q", "7", "--points", path.to_str().unwrap()]).0,
        EXIT_PRECONDITION
    );
}

#[test]
fn out_dir_from_environment() {
    let dir = scratch("outdir");
    std::fs::create_dir_all(&dir).unwrap();
    std::env::set_var(cli::OUT_DIR_ENV, &dir);
    let (code, out, _) = run(&["mds", "--q", "3", "--n", "4", "--out", "mds.json"]);
    std::env::remove_var(cli::OUT_DIR_ENV);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(dir.join("mds.json")).unwrap();
    assert!(written.contains("\"b\":\"234\""));
    assert!(written.contains("\"mds_count\":\"16\""));
}

#[test]
fn usage_and_precondition_errors() {
    assert_eq!(run(&["census", "--q", "3"]).0, EXIT_USAGE);
    assert_eq!(
        run(&["census", "--q", "3", "--k", "2", "--nope"]).0,
        EXIT_USAGE
    );
    let (code, _, err) = run(&["random-arc", "--q", "9", "--p", "1.5"]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(err.starts_with("error: "));
    assert_eq!(
        run(&["bounds", "--q", "10", "--k", "3"]).0,
        EXIT_PRECONDITION
    );
    assert_eq!(
        run(&["mds", "--q", "4", "--n", "6", "--b", "1"]).0,
        EXIT_PRECONDITION
    );
    assert_eq!(
        run(&[
            "construct",
            "--q",
            "49",
            "--max-attempts",
            "1",
            "--seed",
            "1"
        ])
        .0,
        EXIT_BUDGET
    );
}

#[test]
fn supersat_and_container_outputs() {
    let (code, out, _) = run(&["supersat", "--q", "5", "--trials", "20", "--seed", "1"]);
    assert_eq!(code, EXIT_OK);
    let rows = data_lines(&out);
    assert_eq!(rows.len(), 21);
    assert!(rows[1..].iter().all(|r| r.ends_with(",true,true")));
    let (code, out, _) = run(&[
        "container-check",
        "--q",
        "1e40",
        "--t",
        "0.9",
        "--s",
        "0.1",
        "--delta",
        "0.01",
        "--codegrees",
        "4",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(data_lines(&out)[0]).unwrap();
    assert_eq!(v["checks"]["condition"]["holds"], true);
    let cg: serde_json::Value = serde_json::from_str(data_lines(&out)[1]).unwrap();
    assert_eq!(cg["codegrees"]["delta2_max"], 2);
}
