//! Name resolution: binds each responsibility to the milestone it names.

use std::collections::HashMap;

use crate::diagnostic::{Code, Diagnostic};
use crate::model::{Milestone, NodeId, ProcessModel};

/// A model whose responsibility → milestone references are all bound.
#[derive(Debug, Clone)]
pub struct ResolvedModel<'a> {
    model: &'a ProcessModel,
    edges: HashMap<NodeId, NodeId>,
    reverse: HashMap<NodeId, Vec<NodeId>>,
}

impl<'a> ResolvedModel<'a> {
    pub fn model(&self) -> &'a ProcessModel {
        self.model
    }

    /// Milestone bound to a responsibility.
    pub fn target(&self, responsibility: NodeId) -> Option<NodeId> {
        self.edges.get(&responsibility).copied()
    }

    /// Responsibilities bound to a milestone, in document order.
    pub fn referrers(&self, milestone: NodeId) -> &[NodeId] {
        self.reverse.get(&milestone).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn edges(&self) -> &HashMap<NodeId, NodeId> {
        &self.edges
    }

    pub fn target_milestone(&self, responsibility: NodeId) -> Option<&'a Milestone> {
        let model = self.model;
        self.target(responsibility)
            .and_then(|id| model.milestones().iter().find(|m| m.id() == id))
    }
}

/// Binds every responsibility to the unique milestone carrying its
/// `as_milestone` name.
///
/// Fails with DUP_MILESTONE for each repeated milestone name (reported on the
/// later declaration) and DANGLING_REF for each responsibility naming no
/// milestone.
pub fn resolve(model: &ProcessModel) -> Result<ResolvedModel<'_>, Vec<Diagnostic>> {
    let mut diagnostics = Vec::new();
    let mut by_name: HashMap<&str, NodeId> = HashMap::with_capacity(model.milestones().len());
    for milestone in model.milestones() {
        if by_name.insert(&milestone.name, milestone.id()).is_some() {
            diagnostics.push(Diagnostic::on(
                Code::DupMilestone,
                milestone.id(),
                format!("milestone `{}` is declared more than once", milestone.name),
            ));
        }
    }

    let mut edges = HashMap::new();
    let mut reverse: HashMap<NodeId, Vec<NodeId>> = model.milestones().iter().map(|m| (m.id(), Vec::new())).collect();
    for scope in model.scopes() {
        for resp in &scope.responsibilities {
            match by_name.get(resp.as_milestone.as_str()) {
                Some(&target) => {
                    edges.insert(resp.id(), target);
                    reverse.entry(target).or_default().push(resp.id());
                }
                None => diagnostics.push(Diagnostic::on(
                    Code::DanglingRef,
                    resp.id(),
                    format!(
                        "scope `{}` refers to unknown milestone `{}`",
                        scope.name, resp.as_milestone
                    ),
                )),
            }
        }
    }

    if diagnostics.is_empty() {
        Ok(ResolvedModel { model, edges, reverse })
    } else {
        Err(diagnostics)
    }
}
