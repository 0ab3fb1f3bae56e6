use std::path::Path;

use lodlink_core::fixtures;

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("lodlink").chain(args.iter().copied());
    let code = lodlink_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn fixture(name: &str) -> String {
    fixtures::dir().join(name).to_string_lossy().into_owned()
}

fn at(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn validate_prints_triple_count() {
    assert_eq!(
        cli(&["validate", "--input", &fixture("initial.ttl")]),
        (0, "18 triples (TURTLE)\n".into(), String::new())
    );
    let (code, out, _) = cli(&["validate", "--input", &fixture("dblp.rdf"), "--format", "RDFXML"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("(RDFXML)\n"));
}

#[test]
fn usage_errors_exit_one() {
    let (code, out, err) = cli(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("Usage"));
    assert_eq!(cli(&["link"]).0, 1);
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("enrich"));
    let (code, _, err) = cli(&["paths", "--input", &fixture("dblp.rdf"), "--max-depth", "7"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn input_errors_exit_two_and_name_the_file() {
    let (code, out, err) = cli(&["link", "--spec", "missing.json"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("missing.json"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let bad = at(dir.path(), "bad.nt");
    std::fs::write(&bad, "<http://a> <http://b> .\n").unwrap();
    let (code, _, err) = cli(&["validate", "--input", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("bad.nt:1:"), "{err}");

    let spec = at(dir.path(), "rule.json");
    let mut v: serde_json::Value = serde_json::from_str(fixtures::SCENARIO_JSON).unwrap();
    v["rule"]["aggregate"]["children"] = serde_json::json!([]);
    std::fs::write(&spec, v.to_string()).unwrap();
    let (code, _, err) = cli(&[
        "link",
        "--spec",
        &spec,
        "--source",
        &fixture("initial.ttl"),
        "--target",
        &fixture("dblp.rdf"),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("min:"), "{err}");

    std::fs::write(&spec, "{\"rule\": ").unwrap();
    let (code, _, err) = cli(&["link", "--spec", &spec]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn runtime_errors_exit_three() {
    // the link target is described by none of the given dumps
    let (code, _, err) = cli(&[
        "enrich",
        "--graph",
        &fixture("initial.ttl"),
        "--links",
        &fixture("links_dblp.nt"),
        "--target",
        &fixture("acm.rdf"),
    ]);
    assert_eq!(code, 3);
    assert!(err.contains("DaviesWS11"), "{err}");

    let (code, _, _) = cli(&[
        "link",
        "--spec",
        &fixture("scenario.json"),
        "--out",
        "/nonexistent-dir/links.nt",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn link_overrides_and_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let spec = at(dir.path(), "task.json");
    let mut v: serde_json::Value = serde_json::from_str(fixtures::SCENARIO_JSON).unwrap();
    v["source"].as_object_mut().unwrap().remove("path");
    v["target"]["path"] = "elsewhere.rdf".into();
    std::fs::write(&spec, v.to_string()).unwrap();

    let (code, _, err) = cli(&["link", "--spec", &spec]);
    assert_eq!(code, 1, "{err}");
    let (code, _, err) = cli(&["link", "--spec", &spec, "--source", &fixture("initial.ttl")]);
    assert_eq!(code, 2);
    assert!(err.contains("elsewhere.rdf"), "{err}");

    let args = [
        "link",
        "--spec",
        &spec,
        "--source",
        &fixture("initial.ttl"),
        "--target",
        &fixture("dblp.rdf"),
    ];
    let (code, out, err) = cli(&args);
    assert_eq!(
        (code, out.as_str(), err.as_str()),
        (0, fixtures::LINKS_DBLP_NT, "1 links written\n")
    );
    // the single link scores below 1, so a threshold of 1 removes it
    let (code, out, _) = cli(&[&args[..], &["--threshold", "1"]].concat());
    assert_eq!((code, out.as_str()), (0, ""));
    let (code, out, _) = cli(&[&args[..], &["--no-blocking"]].concat());
    assert_eq!((code, out.as_str()), (0, fixtures::LINKS_DBLP_NT));
}

#[test]
fn profiling_commands() {
    let (code, out, _) = cli(&[
        "paths",
        "--input",
        &fixture("dblp.rdf"),
        "--entity-type",
        "akt:Book-Section-Reference",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("path\tfrequency\tterminal\tsamples"));
    assert!(
        out.contains("akt:has-author/akt:full-name\t1\tLITERAL\tJohn Davies | Paul Warren | York Sure\n"),
        "{out}"
    );

    let (code, out, _) = cli(&["lint", "--input", &fixture("dblp.rdf")]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("RESOURCE_VALUED_PATH\t")));

    let (code, out, _) = cli(&[
        "suggest",
        "--source",
        &fixture("initial.ttl"),
        "--target",
        &fixture("dblp.rdf"),
        "--source-type",
        "http://purl.org/linked-data/cube#DataSet",
        "--target-type",
        "akt:Book-Section-Reference",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out.lines().next(),
        Some("1.000\tdcterms:date\takt:has-date/akts:year-of")
    );
}

#[test]
fn enrich_writes_provenance_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let (prov, report) = (at(dir.path(), "p.tsv"), at(dir.path(), "r.json"));
    let (code, out, err) = cli(&[
        "enrich",
        "--graph",
        &fixture("initial.ttl"),
        "--links",
        &fixture("links_dblp.nt"),
        "--target",
        &fixture("dblp.rdf"),
        "--provenance",
        &prov,
        "--report",
        &report,
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("owl:sameAs"));
    let prov = std::fs::read_to_string(prov).unwrap();
    assert!(
        prov.lines()
            .all(|l| l.ends_with("\tdblp") || l.ends_with("\tlinks_dblp")),
        "{prov}"
    );
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(report["mode"], "MERGE");
    assert_eq!(report["added"].as_array().unwrap().len(), prov.lines().count());

    let policy = at(dir.path(), "policy.json");
    std::fs::write(
        &policy,
        r#"{"include": ["http://nowhere.example/p"], "exclude": ["http://nowhere.example/p"]}"#,
    )
    .unwrap();
    let (code, _, err) = cli(&[
        "enrich",
        "--graph",
        &fixture("initial.ttl"),
        "--links",
        &fixture("links_dblp.nt"),
        "--target",
        &fixture("dblp.rdf"),
        "--policy",
        &policy,
    ]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("policy.json"), "{err}");
}

#[test]
fn outputs_are_reproducible_and_inputs_untouched() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["initial.ttl", "dblp.rdf", "scenario.json", "links_dblp.nt"] {
        std::fs::copy(fixture(name), dir.path().join(name)).unwrap();
    }
    let before: Vec<Vec<u8>> = ["initial.ttl", "dblp.rdf", "scenario.json"]
        .iter()
        .map(|n| std::fs::read(dir.path().join(n)).unwrap())
        .collect();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let links = at(dir.path(), &format!("links-{i}.nt"));
        let merged = at(dir.path(), &format!("merged-{i}.ttl"));
        assert_eq!(
            cli(&["link", "--spec", &at(dir.path(), "scenario.json"), "--out", &links]).0,
            0
        );
        let args = [
            "enrich",
            "--graph",
            &at(dir.path(), "initial.ttl"),
            "--links",
            &links,
            "--target",
            &at(dir.path(), "dblp.rdf"),
            "--out",
            &merged,
        ];
        assert_eq!(cli(&args).0, 0);
        outputs.push((std::fs::read(links).unwrap(), std::fs::read(merged).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let after: Vec<Vec<u8>> = ["initial.ttl", "dblp.rdf", "scenario.json"]
        .iter()
        .map(|n| std::fs::read(dir.path().join(n)).unwrap())
        .collect();
    assert_eq!(before, after);
}
