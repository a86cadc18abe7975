//! Integration tests for the site format and the command-line binary:
//! fixture synchronization, round-tripping, diagnostics and
//! byte-determinism of every command on every bundled fixture.

use cdsite_cli::bundled::bundled_documents;
use cdsite_cli::{parse, serialize};
use std::path::PathBuf;
use std::process::Command;

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("bundled fixture exists")
}

#[test]
fn bundled_fixtures_match_generated_documents() {
    for (name, doc) in bundled_documents() {
        assert_eq!(
            fixture_text(name),
            serialize(&doc),
            "{name} is out of sync; run `cargo run -p cdsite-cli --example gen_fixtures`"
        );
    }
}

#[test]
fn round_trip_is_identity_on_parsed_documents() {
    for (name, _) in bundled_documents() {
        let text = fixture_text(name);
        let doc = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let reserialized = serialize(&doc);
        assert_eq!(text, reserialized, "{name}: serializer is not canonical");
        let doc2 = parse(&reserialized).unwrap();
        assert_eq!(doc, doc2, "{name}: parse ∘ serialize is not the identity");
    }
}

#[test]
fn empty_file_is_missing_category_block() {
    assert_eq!(parse("").unwrap_err(), "missing category block");
    assert_eq!(parse("# only a comment\n").unwrap_err(), "missing category block");
}

#[test]
fn diagnostics_carry_line_numbers_and_identifiers() {
    let bad = "[category]\nobjects: A B\nmorphism f: A -> C\n";
    let e = parse(bad).unwrap_err();
    assert!(e.starts_with("line 3:"), "{e}");
    assert!(e.contains("`C`"), "{e}");

    let dangling = "[category]\nobjects: A\n[cd]\nsquare Q: f f f f\n";
    let e = parse(dangling).unwrap_err();
    assert!(e.starts_with("line 4:") && e.contains("`f`"), "{e}");

    // non-total composition is rejected by the category validator
    let partial = "[category]\nobjects: A B C\nmorphism f: A -> B\nmorphism g: B -> C\n[cd]\n";
    let e = parse(partial).unwrap_err();
    assert!(e.contains("g") && e.contains("f"), "{e}");
}

#[test]
fn toy_parses_to_the_toy_site() {
    let doc = parse(&fixture_text("toy.site")).unwrap();
    assert_eq!(doc.cat.object_count(), 5);
    assert_eq!(doc.cd.squares().len(), 3);
    assert!(doc.density.is_some());
    assert!(doc.square("Q0").is_some());
    assert!(doc.presheaf("yX").is_some());
    assert!(doc.absheaf("Z").is_some());
}

/// All commands applicable to a fixture, with concrete arguments.
fn command_lines(fixture: &str) -> Vec<Vec<String>> {
    let doc = parse(&fixture_text(fixture)).unwrap();
    let mut cmds: Vec<Vec<&str>> = vec![
        vec!["validate"],
        vec!["topology"],
        vec!["simple-coverings"],
        vec!["check", "complete"],
        vec!["check", "regular"],
        vec!["check", "bounded"],
        vec!["cohdim"],
        vec!["chunky"],
        vec!["suite"],
    ];
    let path = fixture_path(fixture);
    let path = path.to_str().unwrap();
    let mut out: Vec<Vec<String>> = Vec::new();
    for c in cmds.drain(..) {
        let mut v: Vec<String> = c.iter().map(|s| s.to_string()).collect();
        v.push(path.to_string());
        out.push(v);
    }
    let arg = |parts: &[&str]| {
        let mut v = vec![parts[0].to_string(), path.to_string()];
        v.extend(parts[1..].iter().map(|s| s.to_string()));
        v
    };
    let sheaf = doc.presheaves.first().map(|p| p.name.clone()).unwrap();
    let absheaf = doc.absheaves.first().map(|p| p.name.clone()).unwrap();
    let object = doc.cat.object_name(doc.cat.objects().next().unwrap()).to_string();
    let morphism = doc
        .cat
        .morphisms()
        .find(|&m| !doc.cat.is_identity(m))
        .map(|m| doc.cat.morphism_name(m).to_string())
        .unwrap();
    out.push(arg(&["sheaf-check", &sheaf]));
    out.push(arg(&["sheafify", &sheaf]));
    out.push(arg(&["mv", "Q0", &absheaf]));
    out.push(arg(&["cohomology", &object, &absheaf, "1"]));
    out.push(arg(&["kq", "Q0"]));
    out.push(arg(&["cech-nerve", &morphism]));
    out.push(arg(&["radditivize", &sheaf]));
    out
}

fn run_binary(args: &[String]) -> (String, String) {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_cdsite"))
            .args(args)
            .output()
            .expect("binary runs");
        (
            String::from_utf8(out.stdout).unwrap(),
            String::from_utf8(out.stderr).unwrap(),
        )
    };
    run()
}

#[test]
fn every_command_is_byte_deterministic_on_every_fixture() {
    for fixture in ["toy.site", "circle.site", "finset2.site"] {
        for base in command_lines(fixture) {
            for format in ["text", "json"] {
                let mut args = base.clone();
                args.push("--format".into());
                args.push(format.into());
                let first = run_binary(&args);
                let second = run_binary(&args);
                assert_eq!(
                    first, second,
                    "{fixture}: `{}` not deterministic",
                    args.join(" ")
                );
                assert!(
                    !first.0.is_empty(),
                    "{fixture}: `{}` printed nothing",
                    args.join(" ")
                );
            }
        }
    }
}

#[test]
fn json_reports_deserialize_to_the_report_type() {
    for fixture in ["toy.site", "circle.site", "finset2.site"] {
        for base in command_lines(fixture) {
            let mut args = base.clone();
            args.push("--format".into());
            args.push("json".into());
            let (stdout, stderr) = run_binary(&args);
            assert!(stderr.is_empty(), "{fixture}: `{}`: {stderr}", args.join(" "));
            let report: cdsite_cli::Report =
                serde_json::from_str(&stdout).unwrap_or_else(|e| {
                    panic!("{fixture}: `{}` bad json: {e}", args.join(" "))
                });
            // checks are sorted by name
            let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
            let mut sorted = names.clone();
            sorted.sort();
            assert_eq!(names, sorted, "{fixture}: `{}`", args.join(" "));
        }
    }
}

#[test]
fn inapplicable_commands_name_the_missing_precondition() {
    // toy has no chunky block and is not chunky, so radditivize is
    // inapplicable
    let args: Vec<String> = vec![
        "radditivize".into(),
        fixture_path("toy.site").to_str().unwrap().into(),
        "yX".into(),
    ];
    let (stdout, _) = run_binary(&args);
    assert!(stdout.contains("inapplicable: "), "{stdout}");
    assert!(stdout.contains("not chunky"), "{stdout}");
}

#[test]
fn exit_status_reflects_failed_checks() {
    let status_of = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_cdsite"))
            .args(args)
            .output()
            .unwrap()
            .status
            .success()
    };
    let toy = fixture_path("toy.site");
    let toy = toy.to_str().unwrap();
    assert!(status_of(&["suite", toy]));
    // the toy category is not chunky: the chunky command fails honestly
    assert!(!status_of(&["chunky", toy]));
    // unknown identifiers fail
    assert!(!status_of(&["kq", toy, "missing"]));
}
