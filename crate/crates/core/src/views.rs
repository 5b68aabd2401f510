//! Layout-free projections of a resolved model for one organizational view.
//!
//! Views are recomputed from the model on every request; nothing here is
//! cached, so an edit to a milestone shows up in every view computed
//! afterwards. Entries carry domain data only. Icons, colors and coordinates
//! are the renderer's business.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::model::{Milestone, NodeId, ResponsibilityKind, ResultArtifact, Span, TimelinePosition};
use crate::resolve::ResolvedModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViewKind {
    ScopePlan,
    MilestoneList,
    MilestoneIo,
    LayerInvolvement,
}

impl ViewKind {
    pub const ALL: [ViewKind; 4] = [
        ViewKind::ScopePlan,
        ViewKind::MilestoneList,
        ViewKind::MilestoneIo,
        ViewKind::LayerInvolvement,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ViewKind::ScopePlan => "scope-plan",
            ViewKind::MilestoneList => "milestone-list",
            ViewKind::MilestoneIo => "milestone-io",
            ViewKind::LayerInvolvement => "layer-involvement",
        }
    }
}

impl fmt::Display for ViewKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ViewKind {
    type Err = ViewError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ViewKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ViewError::UnknownKind(s.to_owned()))
    }
}

/// Parameters selecting the subject of a view.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ViewSubject {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layer: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub milestone: Option<String>,
}

/// Role of an entry in a milestone input/output view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IoRole {
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArtifactEntry {
    pub id: NodeId,
    pub name: String,
    pub description: String,
}

impl From<&ResultArtifact> for ArtifactEntry {
    fn from(result: &ResultArtifact) -> Self {
        ArtifactEntry {
            id: result.id(),
            name: result.name.clone(),
            description: result.description.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViewEntry {
    pub id: NodeId,
    pub name: String,
    pub position: TimelinePosition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
    pub description: String,
    /// Set for scope plans and layer involvement views only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub access: Option<ResponsibilityKind>,
    /// Set for milestone input/output views only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub role: Option<IoRole>,
    pub results: Vec<ArtifactEntry>,
}

impl ViewEntry {
    fn of(milestone: &Milestone) -> Self {
        ViewEntry {
            id: milestone.id(),
            name: milestone.name.clone(),
            position: milestone.position,
            span: milestone.span,
            description: milestone.description.clone(),
            access: None,
            role: None,
            results: milestone.results.iter().map(ArtifactEntry::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViewModel {
    pub view_kind: ViewKind,
    pub subject: ViewSubject,
    /// Ordered by timeline position, ties by document order.
    pub entries: Vec<ViewEntry>,
}

impl ViewModel {
    /// Artifacts flowing into the subject of a milestone input/output view.
    pub fn inputs(&self) -> impl Iterator<Item = &ArtifactEntry> {
        self.entries
            .iter()
            .filter(|e| e.role == Some(IoRole::Input))
            .flat_map(|e| &e.results)
    }

    /// Artifacts produced by the subject of a milestone input/output view.
    pub fn outputs(&self) -> impl Iterator<Item = &ArtifactEntry> {
        self.entries
            .iter()
            .filter(|e| e.role == Some(IoRole::Output))
            .flat_map(|e| &e.results)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ViewError {
    #[error("no {what} named `{name}`")]
    UnknownSubject { what: &'static str, name: String },
    #[error("view `{kind}` needs a `{param}` parameter")]
    MissingParameter { kind: ViewKind, param: &'static str },
    #[error("unknown view kind `{0}`")]
    UnknownKind(String),
}

impl ViewError {
    pub fn code(&self) -> &'static str {
        match self {
            ViewError::UnknownSubject { .. } => "UNKNOWN_VIEW_SUBJECT",
            ViewError::MissingParameter { .. } => "MISSING_VIEW_PARAMETER",
            ViewError::UnknownKind(_) => "UNKNOWN_VIEW_KIND",
        }
    }
}

fn sort_entries(entries: &mut [ViewEntry], order: &BTreeMap<NodeId, usize>) {
    entries.sort_by_key(|e| (e.position, order.get(&e.id).copied().unwrap_or(usize::MAX)));
}

fn document_order(resolved: &ResolvedModel<'_>) -> BTreeMap<NodeId, usize> {
    resolved
        .model()
        .milestones()
        .iter()
        .enumerate()
        .map(|(i, m)| (m.id(), i))
        .collect()
}

/// Milestones referenced by one organizational unit, tagged with its access.
pub fn scope_plan(resolved: &ResolvedModel<'_>, layer: &str, scope: &str) -> Result<ViewModel, ViewError> {
    let model = resolved.model();
    let unit = model.scope(layer, scope).ok_or_else(|| ViewError::UnknownSubject {
        what: "scope",
        name: format!("{layer}/{scope}"),
    })?;

    let mut strongest: BTreeMap<NodeId, ResponsibilityKind> = BTreeMap::new();
    for resp in &unit.responsibilities {
        if let Some(target) = resolved.target(resp.id()) {
            let slot = strongest.entry(target).or_insert(resp.kind);
            if resp.kind.strength() > slot.strength() {
                *slot = resp.kind;
            }
        }
    }
    let mut entries: Vec<ViewEntry> = model
        .milestones()
        .iter()
        .filter_map(|m| {
            strongest.get(&m.id()).map(|&kind| ViewEntry {
                access: Some(kind),
                ..ViewEntry::of(m)
            })
        })
        .collect();
    sort_entries(&mut entries, &document_order(resolved));
    Ok(ViewModel {
        view_kind: ViewKind::ScopePlan,
        subject: ViewSubject {
            layer: Some(layer.to_owned()),
            scope: Some(scope.to_owned()),
            milestone: None,
        },
        entries,
    })
}

/// Every milestone once, by position.
pub fn milestone_list(resolved: &ResolvedModel<'_>) -> ViewModel {
    let mut entries: Vec<ViewEntry> = resolved.model().milestones().iter().map(ViewEntry::of).collect();
    sort_entries(&mut entries, &document_order(resolved));
    ViewModel {
        view_kind: ViewKind::MilestoneList,
        subject: ViewSubject::default(),
        entries,
    }
}

/// Outputs of a milestone and the inputs it draws on.
///
/// Outputs are the milestone's own results. Inputs are the results of every
/// milestone at a strictly earlier position that shares at least one
/// referencing scope with it.
pub fn milestone_io(resolved: &ResolvedModel<'_>, milestone: &str) -> Result<ViewModel, ViewError> {
    let model = resolved.model();
    let subject = model
        .milestones()
        .iter()
        .find(|m| m.name == milestone)
        .ok_or_else(|| ViewError::UnknownSubject {
            what: "milestone",
            name: milestone.to_owned(),
        })?;

    let scopes_touching = |target: NodeId| -> HashSet<usize> {
        model
            .scopes()
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                s.responsibilities
                    .iter()
                    .any(|r| resolved.target(r.id()) == Some(target))
            })
            .map(|(i, _)| i)
            .collect()
    };
    let subject_scopes = scopes_touching(subject.id());

    let mut entries: Vec<ViewEntry> = Vec::new();
    if !subject_scopes.is_empty() {
        for earlier in model.milestones().iter().filter(|m| m.position < subject.position) {
            if !scopes_touching(earlier.id()).is_disjoint(&subject_scopes) {
                entries.push(ViewEntry {
                    role: Some(IoRole::Input),
                    ..ViewEntry::of(earlier)
                });
            }
        }
    }
    entries.push(ViewEntry {
        role: Some(IoRole::Output),
        ..ViewEntry::of(subject)
    });
    sort_entries(&mut entries, &document_order(resolved));
    Ok(ViewModel {
        view_kind: ViewKind::MilestoneIo,
        subject: ViewSubject {
            milestone: Some(milestone.to_owned()),
            ..ViewSubject::default()
        },
        entries,
    })
}

/// Milestones touched by any scope of a layer, with the strongest access
/// among those scopes (responsible > contributing > noticing).
pub fn layer_involvement(resolved: &ResolvedModel<'_>, layer: &str) -> Result<ViewModel, ViewError> {
    let model = resolved.model();
    if model.layer(layer).is_none() {
        return Err(ViewError::UnknownSubject {
            what: "layer",
            name: layer.to_owned(),
        });
    }
    let mut strongest: BTreeMap<NodeId, ResponsibilityKind> = BTreeMap::new();
    for scope in model.scopes().iter().filter(|s| s.layer_name == layer) {
        for resp in &scope.responsibilities {
            if let Some(target) = resolved.target(resp.id()) {
                let slot = strongest.entry(target).or_insert(resp.kind);
                if resp.kind.strength() > slot.strength() {
                    *slot = resp.kind;
                }
            }
        }
    }
    let mut entries: Vec<ViewEntry> = model
        .milestones()
        .iter()
        .filter_map(|m| {
            strongest.get(&m.id()).map(|&kind| ViewEntry {
                access: Some(kind),
                ..ViewEntry::of(m)
            })
        })
        .collect();
    sort_entries(&mut entries, &document_order(resolved));
    Ok(ViewModel {
        view_kind: ViewKind::LayerInvolvement,
        subject: ViewSubject {
            layer: Some(layer.to_owned()),
            ..ViewSubject::default()
        },
        entries,
    })
}

/// Dispatches to the view named by `kind`, taking its subject from `params`.
pub fn compute_view(
    resolved: &ResolvedModel<'_>,
    kind: ViewKind,
    params: &ViewSubject,
) -> Result<ViewModel, ViewError> {
    let need = |value: &Option<String>, param| value.clone().ok_or(ViewError::MissingParameter { kind, param });
    match kind {
        ViewKind::ScopePlan => scope_plan(resolved, &need(&params.layer, "layer")?, &need(&params.scope, "scope")?),
        ViewKind::MilestoneList => Ok(milestone_list(resolved)),
        ViewKind::MilestoneIo => milestone_io(resolved, &need(&params.milestone, "milestone")?),
        ViewKind::LayerInvolvement => layer_involvement(resolved, &need(&params.layer, "layer")?),
    }
}
