use super::*;
use crate::model::*;
use crate::resolve::resolve;
use crate::syntax::{parse, print};

const BASE: &str = r#"process
  name "P"
  version "1"
  timeline weeks 20
  layer dept description "Departments"
  milestone M1 position 3
    result
      artifact Spec description "spec"
    description "first"
  milestone M2 position 8
    description "second"
  scope S layer dept description "unit S"
    responsibility resp asmilestone "M1"
    responsibility cont asmilestone "M2"
  scope T layer dept description "unit T"
    responsibility noti asmilestone "M1"
  scope U layer dept description "unit U"
    responsibility cont asmilestone "M1"
end
"#;

fn doc() -> Document {
    Document::new(parse(BASE).into_result().unwrap())
}

fn text(doc: &Document) -> String {
    print(doc.model())
}

fn empty_doc() -> Document {
    Document::new(build_model(
        ProcessHeader::new("P", "1", TimelineSpec::Weeks { length_weeks: 10 }),
        vec![],
        vec![],
        vec![],
    ))
}

#[test]
fn add_milestone_to_empty_model() {
    let mut d = empty_doc();
    d.apply(Command::AddMilestone {
        name: "M1".into(),
        position: 3,
        span: None,
        description: String::new(),
    })
    .unwrap();
    assert_eq!(d.model().milestones().len(), 1);
    assert_eq!(d.history().undo_depth(), 1);
    assert_eq!(d.history().revision(), 1);
    let id = d.model().milestones()[0].id();
    assert!(matches!(d.model().lookup(id), Some(Node::Milestone(m)) if m.position == 3));
}

#[test]
fn remove_referenced_milestone_without_cascade() {
    let mut d = doc();
    let before = text(&d);
    let err = d
        .apply(Command::RemoveMilestone {
            name: "M1".into(),
            cascade: false,
        })
        .unwrap_err();
    assert_eq!(err.code(), "CMD_CONFLICT");
    assert_eq!(text(&d), before);
    assert_eq!(d.history().revision(), 0);
}

#[test]
fn cascade_removal_and_undo() {
    let mut d = doc();
    let before = text(&d);
    let removed_id = d.model().milestones()[0].id();
    d.apply(Command::RemoveMilestone {
        name: "M1".into(),
        cascade: true,
    })
    .unwrap();
    assert!(d.model().lookup(removed_id).is_none());
    assert!(d
        .model()
        .scopes()
        .iter()
        .all(|s| s.responsibilities.iter().all(|r| r.as_milestone != "M1")));
    assert!(resolve(d.model()).is_ok());
    d.undo().unwrap();
    assert_eq!(text(&d), before);
    // restored nodes get fresh ids
    assert!(d.model().lookup(removed_id).is_none());
}

#[test]
fn rename_rewrites_references() {
    let mut d = doc();
    d.apply(Command::RenameMilestone {
        from: "M1".into(),
        to: "Gate".into(),
    })
    .unwrap();
    let rewritten = d
        .model()
        .scopes()
        .iter()
        .flat_map(|s| &s.responsibilities)
        .filter(|r| r.as_milestone == "Gate")
        .count();
    assert_eq!(rewritten, 3);
    assert!(resolve(d.model()).is_ok());
}

#[test]
fn rename_onto_existing_name_conflicts() {
    let mut d = doc();
    let err = d
        .apply(Command::RenameMilestone {
            from: "M1".into(),
            to: "M2".into(),
        })
        .unwrap_err();
    assert_eq!(err.code(), "CMD_CONFLICT");
}

#[test]
fn invalid_arguments() {
    let mut d = doc();
    let cases = [
        Command::MoveMilestone {
            name: "M1".into(),
            position: -1,
        },
        Command::AddMilestone {
            name: "end".into(),
            position: 1,
            span: None,
            description: String::new(),
        },
        Command::AddMilestone {
            name: "M9".into(),
            position: 1,
            span: Some(SpanArg { start: -2, end: 3 }),
            description: String::new(),
        },
        Command::SetDescription {
            target: Target::Milestone { name: "M1".into() },
            description: "two\nlines".into(),
        },
        Command::AddLayer {
            name: "has space".into(),
            description: String::new(),
        },
    ];
    for cmd in cases {
        assert_eq!(d.apply(cmd).unwrap_err().code(), "CMD_INVALID_ARG");
    }
    assert_eq!(d.history().revision(), 0);
}

#[test]
fn missing_targets() {
    let mut d = doc();
    let cases = [
        Command::MoveMilestone {
            name: "Nope".into(),
            position: 1,
        },
        Command::AddScope {
            layer: "ghost".into(),
            name: "X".into(),
            description: String::new(),
        },
        Command::AddResponsibility {
            layer: "dept".into(),
            scope: "S".into(),
            milestone: "Nope".into(),
            kind: ResponsibilityKind::Noticing,
        },
        Command::RemoveResult {
            milestone: "M2".into(),
            name: "Spec".into(),
        },
        Command::RemoveResponsibility {
            layer: "dept".into(),
            scope: "T".into(),
            milestone: "M2".into(),
        },
    ];
    for cmd in cases {
        assert_eq!(d.apply(cmd).unwrap_err().code(), "CMD_TARGET_MISSING");
    }
}

#[test]
fn undo_redo_cycle() {
    let mut d = doc();
    let before = text(&d);
    d.apply(Command::AddResult {
        milestone: "M2".into(),
        name: "Report".into(),
        description: "final".into(),
    })
    .unwrap();
    let after = text(&d);
    d.undo().unwrap();
    assert_eq!(text(&d), before);
    d.redo().unwrap();
    assert_eq!(text(&d), after);
    assert_eq!(d.history().revision(), 3);
    assert_eq!(d.redo().unwrap_err(), CommandError::NothingToRedo);
}

#[test]
fn empty_history() {
    let mut d = doc();
    assert_eq!(d.undo().unwrap_err().code(), "CMD_NOTHING_TO_UNDO");
    assert_eq!(d.redo().unwrap_err().code(), "CMD_NOTHING_TO_REDO");
}

#[test]
fn apply_clears_redo() {
    let mut d = doc();
    d.apply(Command::MoveMilestone {
        name: "M1".into(),
        position: 4,
    })
    .unwrap();
    d.undo().unwrap();
    assert_eq!(d.history().redo_depth(), 1);
    d.apply(Command::MoveMilestone {
        name: "M2".into(),
        position: 9,
    })
    .unwrap();
    assert_eq!(d.redo().unwrap_err(), CommandError::NothingToRedo);
}

#[test]
fn batch_is_one_undo_step() {
    let mut d = doc();
    let before = text(&d);
    d.apply_batch(vec![
        Command::AddMilestone {
            name: "M3".into(),
            position: 12,
            span: Some(SpanArg { start: 10, end: 14 }),
            description: "third".into(),
        },
        Command::AddResponsibility {
            layer: "dept".into(),
            scope: "S".into(),
            milestone: "M3".into(),
            kind: ResponsibilityKind::Responsible,
        },
    ])
    .unwrap();
    assert_eq!(d.history().undo_depth(), 1);
    assert_eq!(d.history().revision(), 1);
    d.undo().unwrap();
    assert_eq!(text(&d), before);
}

#[test]
fn failing_batch_changes_nothing() {
    let mut d = doc();
    let before = d.model().clone();
    let ids = d.model().node_ids();
    let err = d
        .apply_batch(vec![
            Command::MoveMilestone {
                name: "M1".into(),
                position: 5,
            },
            Command::MoveMilestone {
                name: "Nope".into(),
                position: 5,
            },
        ])
        .unwrap_err();
    match err {
        CommandError::BatchFailed { index, source } => {
            assert_eq!(index, 1);
            assert_eq!(source.code(), "CMD_TARGET_MISSING");
        }
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(d.model(), &before);
    assert_eq!(d.model().node_ids(), ids);
    assert_eq!(d.history().revision(), 0);
    assert_eq!(d.history().undo_depth(), 0);
}

#[test]
fn empty_batch_is_a_no_op() {
    let mut d = doc();
    d.apply_batch(vec![]).unwrap();
    assert_eq!(d.history().revision(), 0);
    assert_eq!(d.history().undo_depth(), 0);
}

#[test]
fn every_variant_undoes() {
    let commands = vec![
        Command::AddLayer {
            name: "plants".into(),
            description: "Plants".into(),
        },
        Command::AddMilestone {
            name: "M3".into(),
            position: 1,
            span: None,
            description: String::new(),
        },
        Command::RemoveMilestone {
            name: "M2".into(),
            cascade: true,
        },
        Command::MoveMilestone {
            name: "M1".into(),
            position: 0,
        },
        Command::SetDescription {
            target: Target::Result {
                milestone: "M1".into(),
                name: "Spec".into(),
            },
            description: "new".into(),
        },
        Command::SetDescription {
            target: Target::Layer { name: "dept".into() },
            description: "d".into(),
        },
        Command::SetDescription {
            target: Target::Scope {
                layer: "dept".into(),
                name: "T".into(),
            },
            description: "t".into(),
        },
        Command::SetSpan {
            milestone: "M1".into(),
            span: Some(SpanArg { start: 0, end: 2 }),
        },
        Command::AddResult {
            milestone: "M2".into(),
            name: "Out".into(),
            description: String::new(),
        },
        Command::RemoveResult {
            milestone: "M1".into(),
            name: "Spec".into(),
        },
        Command::AddScope {
            layer: "dept".into(),
            name: "V".into(),
            description: String::new(),
        },
        Command::RemoveScope {
            layer: "dept".into(),
            name: "S".into(),
        },
        Command::AddResponsibility {
            layer: "dept".into(),
            scope: "T".into(),
            milestone: "M2".into(),
            kind: ResponsibilityKind::Responsible,
        },
        Command::RemoveResponsibility {
            layer: "dept".into(),
            scope: "S".into(),
            milestone: "M1".into(),
        },
        Command::SetResponsibilityKind {
            layer: "dept".into(),
            scope: "U".into(),
            milestone: "M1".into(),
            kind: ResponsibilityKind::Responsible,
        },
        Command::RenameMilestone {
            from: "M2".into(),
            to: "Final".into(),
        },
    ];
    for cmd in commands {
        let mut d = doc();
        let before = text(&d);
        d.apply(cmd.clone()).unwrap_or_else(|e| panic!("{cmd:?}: {e}"));
        let after = text(&d);
        assert_ne!(after, before, "{cmd:?} changed nothing");
        d.undo().unwrap();
        assert_eq!(text(&d), before, "{cmd:?}");
        d.redo().unwrap();
        assert_eq!(text(&d), after, "{cmd:?}");
        // registry stays complete
        for id in d.model().node_ids() {
            assert!(d.model().lookup(id).is_some());
        }
    }
}

#[test]
fn wire_format() {
    let cmd: Command =
        serde_json::from_str(r#"{"cmd":"AddMilestone","name":"M1","position":3,"description":"x"}"#).unwrap();
    assert_eq!(
        cmd,
        Command::AddMilestone {
            name: "M1".into(),
            position: 3,
            span: None,
            description: "x".into()
        }
    );
    let json = serde_json::to_value(Command::SetResponsibilityKind {
        layer: "L".into(),
        scope: "S".into(),
        milestone: "M".into(),
        kind: ResponsibilityKind::Noticing,
    })
    .unwrap();
    assert_eq!(json["cmd"], "SetResponsibilityKind");
    assert_eq!(json["kind"], "noticing");
    let target: Command = serde_json::from_str(
        r#"{"cmd":"SetDescription","target":{"kind":"scope","layer":"L","name":"S"},"description":""}"#,
    )
    .unwrap();
    assert!(matches!(
        target,
        Command::SetDescription {
            target: Target::Scope { .. },
            ..
        }
    ));
}
