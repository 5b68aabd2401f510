use procdsl::{Code, NodeId, ProcessModel, ResponsibilityKind, TimelinePosition, TimelineSpec};

/// One row of a brute-force view: milestone name, position and access kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleEntry {
    pub name: String,
    pub position: TimelinePosition,
    pub access: Option<ResponsibilityKind>,
}

fn rank(kind: ResponsibilityKind) -> u8 {
    match kind {
        ResponsibilityKind::Responsible => 2,
        ResponsibilityKind::Contributing => 1,
        ResponsibilityKind::Noticing => 0,
    }
}

fn limit(timeline: &TimelineSpec) -> Option<u64> {
    match timeline {
        TimelineSpec::Weeks { length_weeks } => (*length_weeks > 0).then_some(*length_weeks as u64),
        TimelineSpec::Calendar { start_date, end_date } => {
            let days = end_date.signed_duration_since(*start_date).num_days();
            (days > 0).then_some(days as u64)
        }
    }
}

/// Every (code, node) pair a checker must report, sorted.
///
/// Name-resolution failures suppress the semantic rules, mirroring the
/// phase ordering of the pipeline.
pub fn naive_diagnostics(model: &ProcessModel) -> Vec<(Code, Option<NodeId>)> {
    let ms = model.milestones();
    let mut out = Vec::new();

    for (i, m) in ms.iter().enumerate() {
        if ms[..i].iter().any(|e| e.name == m.name) {
            out.push((Code::DupMilestone, Some(m.id())));
        }
    }
    for s in model.scopes() {
        for r in &s.responsibilities {
            if !ms.iter().any(|m| m.name == r.as_milestone) {
                out.push((Code::DanglingRef, Some(r.id())));
            }
        }
    }
    if !out.is_empty() {
        out.sort();
        return out;
    }

    let max = limit(&model.header().timeline);
    if max.is_none() {
        out.push((Code::BadTimeline, None));
    }
    let layers = model.layers();
    for (i, l) in layers.iter().enumerate() {
        if layers[..i].iter().any(|e| e.name == l.name) {
            out.push((Code::DupLayer, Some(l.id())));
        }
    }
    for m in ms {
        if let Some(span) = m.span {
            if span.start >= span.end {
                out.push((Code::TimeOrder, Some(m.id())));
            }
        }
        if let Some(max) = max {
            let beyond = |p: u32| p as u64 > max;
            if beyond(m.position) || m.span.is_some_and(|s| beyond(s.start) || beyond(s.end)) {
                out.push((Code::PosBounds, Some(m.id())));
            }
        }
        for (j, r) in m.results.iter().enumerate() {
            if m.results[..j].iter().any(|e| e.name == r.name) {
                out.push((Code::DupResult, Some(r.id())));
            }
        }
        let owned = model.scopes().iter().any(|s| {
            s.responsibilities
                .iter()
                .any(|r| r.as_milestone == m.name && r.kind == ResponsibilityKind::Responsible)
        });
        if !owned {
            out.push((Code::NoResponsible, Some(m.id())));
        }
    }
    let scopes = model.scopes();
    for (i, s) in scopes.iter().enumerate() {
        if !layers.iter().any(|l| l.name == s.layer_name) {
            out.push((Code::UnknownLayer, Some(s.id())));
        }
        if scopes[..i]
            .iter()
            .any(|e| e.name == s.name && e.layer_name == s.layer_name)
        {
            out.push((Code::DupScope, Some(s.id())));
        }
        let rs = &s.responsibilities;
        for (j, r) in rs.iter().enumerate() {
            if rs[..j].iter().any(|e| e.as_milestone == r.as_milestone) {
                out.push((Code::DupResp, Some(r.id())));
            }
        }
    }
    out.sort();
    out
}

/// Milestones touched by the given scopes, each with the strongest access,
/// ordered by position then declaration.
fn strongest_access(model: &ProcessModel, include: impl Fn(&procdsl::Scope) -> bool) -> Vec<OracleEntry> {
    let mut rows: Vec<(u32, usize, OracleEntry)> = Vec::new();
    for (i, m) in model.milestones().iter().enumerate() {
        let mut best: Option<ResponsibilityKind> = None;
        for s in model.scopes().iter().filter(|s| include(s)) {
            for r in s.responsibilities.iter().filter(|r| r.as_milestone == m.name) {
                if best.is_none_or(|b| rank(r.kind) > rank(b)) {
                    best = Some(r.kind);
                }
            }
        }
        if best.is_some() {
            rows.push((
                m.position,
                i,
                OracleEntry {
                    name: m.name.clone(),
                    position: m.position,
                    access: best,
                },
            ));
        }
    }
    rows.sort_by_key(|(p, i, _)| (*p, *i));
    rows.into_iter().map(|(_, _, e)| e).collect()
}

/// Scope plan of the first scope named `scope` in `layer`; `None` if absent.
pub fn brute_scope_plan(model: &ProcessModel, layer: &str, scope: &str) -> Option<Vec<OracleEntry>> {
    let first = model
        .scopes()
        .iter()
        .position(|s| s.layer_name == layer && s.name == scope)?;
    let target = &model.scopes()[first];
    Some(strongest_access(model, |s| std::ptr::eq(s, target)))
}

/// Layer involvement of `layer`; `None` if the layer is not declared.
pub fn brute_layer_involvement(model: &ProcessModel, layer: &str) -> Option<Vec<OracleEntry>> {
    if !model.layers().iter().any(|l| l.name == layer) {
        return None;
    }
    Some(strongest_access(model, |s| s.layer_name == layer))
}

/// Inputs (names) and the subject of a milestone I/O view; `None` if the
/// milestone does not exist.
pub fn brute_milestone_io(model: &ProcessModel, milestone: &str) -> Option<Vec<String>> {
    let subject = model.milestones().iter().find(|m| m.name == milestone)?;
    let touches = |s: &procdsl::Scope, name: &str| s.responsibilities.iter().any(|r| r.as_milestone == name);
    let mut rows: Vec<(u32, usize, String)> = Vec::new();
    for (i, m) in model.milestones().iter().enumerate() {
        let related = m.position < subject.position
            && model
                .scopes()
                .iter()
                .any(|s| touches(s, &m.name) && touches(s, &subject.name));
        if related || std::ptr::eq(m, subject) {
            rows.push((m.position, i, m.name.clone()));
        }
    }
    rows.sort();
    Some(rows.into_iter().map(|(_, _, n)| n).collect())
}
