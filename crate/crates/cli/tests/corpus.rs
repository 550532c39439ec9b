use std::path::PathBuf;

use reprkit_cli::{
    emit_report, execute, parse_document, run_command, CliError, Command, Flags, Format, LinearityMode, Report, Request,
};

fn corpus(name: &str) -> (String, String) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples-docs")
        .join(name);
    (name.to_string(), std::fs::read_to_string(path).expect("corpus file"))
}

fn run(cmd: Command, doc: &str, names: &[&str], flags: &Flags) -> Result<Report, CliError> {
    let (file, text) = corpus(doc);
    let d = parse_document(&text)?;
    run_command(&Request::new(cmd, Some(&file), names), Some(&d), flags)
}

fn ok(cmd: Command, doc: &str, names: &[&str]) -> Report {
    run(cmd, doc, names, &Flags::default()).unwrap()
}

#[test]
fn membership_example_is_exact() {
    let r = ok(Command::CheckExact, "membership2.doc", &[]);
    assert_eq!(r.exit, 0);
    assert!(emit_report(&r, Format::Text).contains("exact: true"));
}

#[test]
fn closure_instance_passes_the_four_reduction_laws() {
    let r = ok(Command::CheckReduction, "closure-two-elt.doc", &[]);
    assert_eq!(r.exit, 0);
    let laws: Vec<&str> = r.verdicts.iter().map(|v| v.law.as_str()).collect();
    assert_eq!(laws, ["tau monotone", "models", "tau(phi e) ≤ e", "e ≤ tau(phi e)"]);
    assert!(r.verdicts.iter().all(|v| v.holds));
}

#[test]
fn broken_soundness_reports_the_dropped_pair() {
    let r = ok(Command::CheckRep, "broken-soundness.doc", &[]);
    assert_eq!(r.exit, 1);
    let w = &r.witnesses[0];
    assert_eq!(
        (w.law.as_str(), w.left.as_str(), w.right.as_str()),
        ("sound", "t", "e1")
    );
}

#[test]
fn closure_and_reduction_views_agree_on_the_corpus() {
    let r = ok(Command::CheckClosure, "closure-two-elt.doc", &[]);
    assert_eq!(r.exit, 0);
    assert_eq!(r.verdicts.len(), 2);
    assert!(r.findings.iter().any(|f| f.text.contains("valid, in agreement")));
}

#[test]
fn every_corpus_document_round_trips() {
    for doc in [
        "membership2.doc",
        "closure-two-elt.doc",
        "broken-soundness.doc",
        "mon-lifts.doc",
        "families.doc",
        "reduction-chain.doc",
    ] {
        let d = parse_document(&corpus(doc).1).unwrap();
        assert_eq!(parse_document(&d.print()).unwrap(), d, "{doc}");
    }
}

#[test]
fn structured_and_text_forms_carry_the_same_witnesses() {
    let r = ok(Command::CheckLinearity, "families.doc", &[]);
    assert_eq!(r.exit, 1);
    let text = emit_report(&r, Format::Text);
    let json: serde_json::Value = serde_json::from_str(&emit_report(&r, Format::Structured)).unwrap();
    let ws = json["witnesses"].as_array().unwrap();
    assert_eq!(ws.len(), r.witnesses.len());
    assert_eq!(text.matches("    witness: ").count(), ws.len());
    for w in ws {
        let line = format!(
            "witness: ({}, {})",
            w["left"].as_str().unwrap(),
            w["right"].as_str().unwrap()
        );
        assert!(text.contains(&line), "{line}");
    }
    for v in json["verdicts"].as_array().unwrap() {
        let line = format!("  {}: {}\n", v["law"].as_str().unwrap(), v["holds"]);
        assert!(text.contains(&line), "{line}");
    }
}

#[test]
fn reports_are_deterministic() {
    let flags = Flags::default();
    let (file, text) = corpus("families.doc");
    let req = Request::new(Command::CheckLinearity, Some(&file), &[]);
    let a = execute(&req, Some(&text), &flags, Format::Structured).unwrap();
    let b = execute(&req, Some(&text), &flags, Format::Structured).unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_moves_samples_but_not_exhaustive_verdicts() {
    let flags = |seed| Flags {
        seed,
        samples: 40,
        ..Flags::default()
    };
    let laws = |seed| run_command(&Request::new(Command::LawsRelcore, None, &[]), None, &flags(seed)).unwrap();
    let (a, b) = (laws(1), laws(2));
    assert_eq!(a.verdicts, b.verdicts);
    assert_ne!(a.scope, b.scope);
    let exact = |seed| run(Command::CheckExact, "membership2.doc", &[], &flags(seed)).unwrap();
    let (a, b) = (exact(1), exact(2));
    assert_eq!((a.verdicts, a.witnesses, a.scope), (b.verdicts, b.witnesses, b.scope));
}

#[test]
fn empty_document_is_an_input_error() {
    let d = parse_document("  # nothing here\n").unwrap();
    let e = run_command(
        &Request::new(Command::CheckRep, Some("x"), &[]),
        Some(&d),
        &Flags::default(),
    )
    .unwrap_err();
    assert!(matches!(e, CliError::EmptyDocument));
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn unknown_command_is_an_input_error() {
    let e = Command::parse("check", "everything").unwrap_err();
    assert_eq!(e.to_string(), "unknown command `check everything`");
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn budget_overrun_names_the_cap() {
    let flags = Flags {
        budget: 10,
        ..Flags::default()
    };
    let e = run(Command::HorInstantiate, "mon-lifts.doc", &["Mon", "A"], &flags).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    assert!(e.to_string().contains("cap is 10"), "{e}");
}

#[test]
fn missing_objects_are_input_errors() {
    for (cmd, doc, names) in [
        (Command::CheckMorphism, "membership2.doc", vec![]),
        (Command::CheckRep, "membership2.doc", vec!["Q"]),
        (Command::BuildProduct, "closure-two-elt.doc", vec!["R1"]),
        (Command::HorArrow, "mon-lifts.doc", vec!["A"]),
        (Command::ReduceCompose, "closure-two-elt.doc", vec!["r", "r"]),
    ] {
        let e = run(cmd, doc, &names, &Flags::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{cmd:?}: {e}");
    }
}

/// Every build output is itself a document whose representations validate.
#[test]
fn built_documents_parse_and_validate() {
    for (cmd, doc, names) in [
        (Command::BuildTrivial, "broken-soundness.doc", vec!["models"]),
        (Command::BuildMembership, "membership2.doc", vec!["A"]),
        (Command::BuildProduct, "closure-two-elt.doc", vec!["R1", "R2"]),
        (Command::ReduceCompose, "reduction-chain.doc", vec!["r", "keep"]),
    ] {
        let r = ok(cmd, doc, &names);
        assert_eq!(r.exit, 0, "{cmd:?}");
        let out = parse_document(r.document.as_deref().unwrap()).unwrap();
        let check = run_command(
            &Request::new(Command::CheckRep, Some("out"), &[]),
            Some(&out),
            &Flags::default(),
        );
        assert_eq!(check.unwrap().exit, 0, "{cmd:?}");
        if cmd == Command::BuildProduct {
            let m = run_command(
                &Request::new(Command::CheckMorphism, Some("out"), &[]),
                Some(&out),
                &Flags::default(),
            );
            assert_eq!(m.unwrap().verdicts.len(), 4);
        }
        if cmd == Command::ReduceCompose {
            let m = run_command(
                &Request::new(Command::CheckReduction, Some("out"), &[]),
                Some(&out),
                &Flags::default(),
            );
            assert_eq!(m.unwrap().exit, 0);
        }
    }
}

#[test]
fn hor_commands_on_the_monoid_example() {
    let inst = ok(Command::HorInstantiate, "mon-lifts.doc", &["A"]);
    assert_eq!(inst.exit, 0);
    assert!(inst.findings.iter().any(|f| f.text == "exact"));
    for f in ["swap", "collapse"] {
        assert_eq!(ok(Command::HorArrow, "mon-lifts.doc", &["Mon", f]).exit, 0);
    }
    let lift = ok(Command::HorLiftPreorder, "mon-lifts.doc", &["P"]);
    assert_eq!(lift.exit, 0);
    assert!(lift
        .verdicts
        .iter()
        .any(|v| v.law == "rule closure = tilde order" && v.holds));
    let flags = Flags {
        emit: true,
        ..Flags::default()
    };
    let arrow = run(Command::HorArrow, "mon-lifts.doc", &["swap"], &flags).unwrap();
    let out = parse_document(arrow.document.as_deref().unwrap()).unwrap();
    let m = run_command(
        &Request::new(Command::CheckMorphism, Some("out"), &[]),
        Some(&out),
        &Flags::default(),
    );
    assert_eq!(m.unwrap().exit, 0);
}

#[test]
fn hat_lift_of_a_corpus_representation() {
    let text = format!("{}\n{}", corpus("broken-soundness.doc").1, "hor Mon = mon(depth = 2)");
    let d = parse_document(&text.replace("{(t, e0)}", "{(t, e0), (t, e1)}")).unwrap();
    let r = run_command(
        &Request::new(Command::HorLiftRep, Some("x"), &["R"]),
        Some(&d),
        &Flags::default(),
    )
    .unwrap();
    assert_eq!(r.exit, 0);
    assert!(r.findings.iter().any(|f| f.text.starts_with("lift is")));
}

#[test]
fn linearity_classification_through_the_driver() {
    let r = ok(Command::CheckLinearity, "families.doc", &["member"]);
    let holds = |law: &str| r.verdicts.iter().find(|v| v.law == law).unwrap().holds;
    assert!(holds("right-linear") && !holds("left-linear"));
    let same = ok(Command::CheckLinearity, "families.doc", &["same-letters"]);
    assert_eq!(same.exit, 0);
    let flags = Flags {
        mode: LinearityMode::Agree,
        ..Flags::default()
    };
    let agree = run(Command::CheckLinearity, "families.doc", &["member"], &flags).unwrap();
    assert!(agree
        .verdicts
        .iter()
        .filter(|v| v.law.ends_with("modes agree"))
        .all(|v| v.holds));
    let nat = ok(Command::CheckNaturality, "families.doc", &[]);
    assert_eq!(nat.exit, 0);
}
