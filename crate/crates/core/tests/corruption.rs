use procdsl::{parse, validate_text};
use procdsl_testkit::{seeded_base, single_token_corruptions, MINIMAL, REFERENCE};

fn check_corpus(source: &str) {
    let corruptions = single_token_corruptions(source);
    assert!(corruptions.len() > 20);
    for c in corruptions {
        let diagnostics = parse(&c.text).diagnostics;
        assert!(
            diagnostics.iter().any(|d| d.pos.map(|p| p.line) == Some(c.line)),
            "{} (line {}): {:?}",
            c.description,
            c.line,
            diagnostics
        );
        // the whole pipeline must not panic either
        validate_text(&c.text);
    }
}

#[test]
fn minimal_file_corruptions() {
    check_corpus(MINIMAL);
}

#[test]
fn reference_file_corruptions() {
    check_corpus(REFERENCE);
}

#[test]
fn seeded_base_corruptions() {
    check_corpus(seeded_base());
}

#[test]
fn truncations_never_panic() {
    for cut in (0..REFERENCE.len()).filter(|&i| REFERENCE.is_char_boundary(i)) {
        let result = parse(&REFERENCE[..cut]);
        assert!(result.model.is_none() || cut + 1 >= REFERENCE.len());
    }
}
