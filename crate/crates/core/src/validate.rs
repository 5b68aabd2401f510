//! Semantic checks over a resolved model.

use std::collections::HashSet;

use crate::diagnostic::{has_errors, Code, Diagnostic};
use crate::model::ResponsibilityKind;
use crate::resolve::{resolve, ResolvedModel};
use crate::syntax::parse;

/// Runs every semantic rule and returns all violations in document order.
/// An empty list means the model is valid.
pub fn validate(resolved: &ResolvedModel<'_>) -> Vec<Diagnostic> {
    let model = resolved.model();
    let mut out = Vec::new();

    let max_position = model.header().timeline.max_position();
    if max_position.is_none() {
        out.push(Diagnostic {
            severity: Code::BadTimeline.severity(),
            code: Code::BadTimeline,
            message: "timeline must span at least one week or move forward in time".to_owned(),
            pos: None,
            node: None,
        });
    }

    let mut layer_names = HashSet::new();
    for layer in model.layers() {
        if !layer_names.insert(layer.name.as_str()) {
            out.push(Diagnostic::on(
                Code::DupLayer,
                layer.id(),
                format!("layer `{}` is declared more than once", layer.name),
            ));
        }
    }

    for milestone in model.milestones() {
        if let Some(span) = milestone.span {
            if span.start >= span.end {
                out.push(Diagnostic::on(
                    Code::TimeOrder,
                    milestone.id(),
                    format!(
                        "milestone `{}` starts at {} but ends at {}",
                        milestone.name, span.start, span.end
                    ),
                ));
            }
        }

        if let Some(max) = max_position {
            let mut offending = vec![milestone.position];
            if let Some(span) = milestone.span {
                offending.extend([span.start, span.end]);
            }
            offending.retain(|&p| p as u64 > max);
            if !offending.is_empty() {
                let listed: Vec<String> = offending.iter().map(u32::to_string).collect();
                out.push(Diagnostic::on(
                    Code::PosBounds,
                    milestone.id(),
                    format!(
                        "milestone `{}` lies outside the timeline 0..={max} (at {})",
                        milestone.name,
                        listed.join(", ")
                    ),
                ));
            }
        }

        let mut result_names = HashSet::new();
        for result in &milestone.results {
            if !result_names.insert(result.name.as_str()) {
                out.push(Diagnostic::on(
                    Code::DupResult,
                    result.id(),
                    format!(
                        "milestone `{}` lists result `{}` more than once",
                        milestone.name, result.name
                    ),
                ));
            }
        }

        let has_responsible = resolved.referrers(milestone.id()).iter().any(|&r| {
            matches!(
                model.lookup(r),
                Some(crate::model::Node::Responsibility(resp)) if resp.kind == ResponsibilityKind::Responsible
            )
        });
        if !has_responsible {
            out.push(Diagnostic::on(
                Code::NoResponsible,
                milestone.id(),
                format!("no scope is responsible for milestone `{}`", milestone.name),
            ));
        }
    }

    let mut scope_keys = HashSet::new();
    for scope in model.scopes() {
        if !layer_names.contains(scope.layer_name.as_str()) {
            out.push(Diagnostic::on(
                Code::UnknownLayer,
                scope.id(),
                format!(
                    "scope `{}` belongs to undeclared layer `{}`",
                    scope.name, scope.layer_name
                ),
            ));
        }
        if !scope_keys.insert((scope.layer_name.as_str(), scope.name.as_str())) {
            out.push(Diagnostic::on(
                Code::DupScope,
                scope.id(),
                format!(
                    "scope `{}` is declared more than once in layer `{}`",
                    scope.name, scope.layer_name
                ),
            ));
        }
        let mut targets = HashSet::new();
        for resp in &scope.responsibilities {
            if !targets.insert(resp.as_milestone.as_str()) {
                out.push(Diagnostic::on(
                    Code::DupResp,
                    resp.id(),
                    format!(
                        "scope `{}` has more than one responsibility for milestone `{}`",
                        scope.name, resp.as_milestone
                    ),
                ));
            }
        }
    }
    out
}

/// Parses, resolves and validates `text`, stopping after the first phase
/// that reports errors. Diagnostics carry source positions where known.
pub fn validate_text(text: &str) -> Vec<Diagnostic> {
    let parsed = parse(text);
    let Some(model) = parsed.model else {
        return parsed.diagnostics;
    };
    let mut diagnostics = parsed.diagnostics;
    match resolve(&model) {
        Ok(resolved) => diagnostics.extend(validate(&resolved)),
        Err(errors) => diagnostics.extend(errors),
    }
    parsed.source_map.locate(&mut diagnostics);
    diagnostics
}

/// True when `diagnostics` contains no errors; warnings are allowed.
pub fn is_valid(diagnostics: &[Diagnostic]) -> bool {
    !has_errors(diagnostics)
}
