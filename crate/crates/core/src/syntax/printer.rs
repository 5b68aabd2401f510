use std::fmt::Write;

use crate::model::{ProcessModel, TimelineSpec};

const INDENT: &str = "  ";

/// Renders `model` in canonical form: fixed keyword order, two-space
/// indentation, one declaration per line, trailing newline.
pub fn print(model: &ProcessModel) -> String {
    let mut out = String::new();
    let header = model.header();
    out.push_str("process\n");
    let _ = writeln!(out, "{INDENT}name {}", quote(&header.name));
    let _ = writeln!(out, "{INDENT}version {}", quote(&header.version));
    match &header.timeline {
        TimelineSpec::Weeks { length_weeks } => {
            let _ = writeln!(out, "{INDENT}timeline weeks {length_weeks}");
        }
        TimelineSpec::Calendar { start_date, end_date } => {
            let _ = writeln!(
                out,
                "{INDENT}timeline calendar {} {}",
                start_date.format("%Y-%m-%d"),
                end_date.format("%Y-%m-%d")
            );
        }
    }

    for layer in model.layers() {
        let _ = writeln!(
            out,
            "{INDENT}layer {} description {}",
            layer.name,
            quote(&layer.description)
        );
    }

    for milestone in model.milestones() {
        let _ = write!(
            out,
            "{INDENT}milestone {} position {}",
            milestone.name, milestone.position
        );
        if let Some(span) = milestone.span {
            let _ = write!(out, " span {} {}", span.start, span.end);
        }
        out.push('\n');
        if !milestone.results.is_empty() {
            let _ = writeln!(out, "{INDENT}{INDENT}result");
            for result in &milestone.results {
                let _ = writeln!(
                    out,
                    "{INDENT}{INDENT}{INDENT}artifact {} description {}",
                    result.name,
                    quote(&result.description)
                );
            }
        }
        let _ = writeln!(out, "{INDENT}{INDENT}description {}", quote(&milestone.description));
    }

    for scope in model.scopes() {
        let _ = writeln!(
            out,
            "{INDENT}scope {} layer {} description {}",
            scope.name,
            scope.layer_name,
            quote(&scope.description)
        );
        for resp in &scope.responsibilities {
            let _ = writeln!(
                out,
                "{INDENT}{INDENT}responsibility {} asmilestone {}",
                resp.kind.keyword(),
                quote(&resp.as_milestone)
            );
        }
    }
    out.push_str("end\n");
    out
}

fn quote(text: &str) -> String {
    let mut quoted = String::with_capacity(text.len() + 2);
    quoted.push('"');
    for c in text.chars() {
        if c == '"' || c == '\\' {
            quoted.push('\\');
        }
        quoted.push(c);
    }
    quoted.push('"');
    quoted
}
