use procdsl::Code;

const BASE: &str = r#"process
  name "Seeded"
  version "1"
  timeline weeks 40
  layer departments description "Units"
  milestone Start position 2 span 1 3
    result
      artifact Plan description "Plan"
    description "Start"
  milestone Finish position 30
    description "Finish"
  scope office layer departments description "Office"
    responsibility resp asmilestone "Start"
    responsibility cont asmilestone "Finish"
  scope plant layer departments description "Plant"
    responsibility resp asmilestone "Finish"
end
"#;

/// Valid file every seeded fixture is derived from.
pub fn seeded_base() -> &'static str {
    BASE
}

fn edit(find: &str, replace: &str) -> String {
    assert!(BASE.contains(find), "{find}");
    BASE.replacen(find, replace, 1)
}

/// Files that each violate exactly one rule, paired with the code and the
/// 1-based line it must be reported on.
pub fn seeded_violations() -> Vec<(Code, u32, String)> {
    vec![
        (
            Code::DanglingRef,
            17,
            edit(
                "    responsibility resp asmilestone \"Finish\"\nend",
                "    responsibility resp asmilestone \"Finish\"\n    responsibility noti asmilestone \"Ghost\"\nend",
            ),
        ),
        (
            Code::DupMilestone,
            12,
            edit(
                "  scope office",
                "  milestone Finish position 31\n    description \"again\"\n  scope office",
            ),
        ),
        (
            Code::DupScope,
            17,
            edit("end\n", "  scope plant layer departments description \"Twin\"\nend\n"),
        ),
        (
            Code::DupResp,
            17,
            edit(
                "    responsibility resp asmilestone \"Finish\"\nend",
                "    responsibility resp asmilestone \"Finish\"\n    responsibility noti asmilestone \"Finish\"\nend",
            ),
        ),
        (
            Code::UnknownLayer,
            17,
            edit("end\n", "  scope lab layer research description \"Lab\"\nend\n"),
        ),
        (Code::TimeOrder, 6, edit("span 1 3", "span 3 1")),
        (Code::PosBounds, 10, edit("position 30", "position 41")),
        (
            Code::NoResponsible,
            10,
            edit(
                "  scope plant layer departments description \"Plant\"\n    responsibility resp",
                "  scope plant layer departments description \"Plant\"\n    responsibility cont",
            ),
        ),
        (
            Code::DupLayer,
            6,
            edit(
                "  milestone Start",
                "  layer departments description \"Again\"\n  milestone Start",
            ),
        ),
        (
            Code::DupResult,
            9,
            edit(
                "      artifact Plan description \"Plan\"\n",
                "      artifact Plan description \"Plan\"\n      artifact Plan description \"Copy\"\n",
            ),
        ),
        (Code::BadTimeline, 4, edit("weeks 40", "weeks 0")),
    ]
}
