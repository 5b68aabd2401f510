use procdsl::{resolve, validate, validate_text, Code, Diagnostic, NodeId, ProcessModel};
use procdsl_testkit::{arbitrary_model, naive_diagnostics, rng, seeded_base, seeded_violations, valid_model, Shape};
use proptest::prelude::*;

fn pipeline(model: &ProcessModel) -> Vec<(Code, Option<NodeId>)> {
    let diagnostics: Vec<Diagnostic> = match resolve(model) {
        Ok(resolved) => validate(&resolved),
        Err(errors) => errors,
    };
    let mut pairs: Vec<_> = diagnostics.iter().map(|d| (d.code, d.node)).collect();
    pairs.sort();
    pairs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn agrees_with_naive_checker(seed in any::<u64>()) {
        let model = arbitrary_model(&mut rng(seed), Shape::SMALL);
        prop_assert_eq!(pipeline(&model), naive_diagnostics(&model));
    }

    #[test]
    fn generated_valid_models_are_clean(seed in any::<u64>()) {
        let model = valid_model(&mut rng(seed), Shape::ROUND_TRIP);
        prop_assert_eq!(pipeline(&model), vec![]);
    }
}

#[test]
fn base_fixture_is_clean() {
    assert!(validate_text(seeded_base()).is_empty());
}

#[test]
fn each_seeded_file_reports_only_its_code() {
    for (code, line, text) in seeded_violations() {
        let diagnostics = validate_text(&text);
        let codes: Vec<Code> = diagnostics.iter().map(|d| d.code).collect();
        assert_eq!(codes, vec![code], "{text}");
        assert_eq!(diagnostics[0].pos.map(|p| p.line), Some(line), "{code:?}");
        assert_eq!(diagnostics[0].severity, code.severity());
    }
}

#[test]
fn diagnostics_are_stable_across_runs() {
    for (_, _, text) in seeded_violations() {
        assert_eq!(validate_text(&text), validate_text(&text));
    }
}
