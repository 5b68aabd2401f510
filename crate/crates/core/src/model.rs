//! Abstract syntax graph of one process file and its node registry.
//!
//! A [`ProcessModel`] owns the header and the ordered declaration lists of a
//! document. Every layer, milestone, result artifact, scope and
//! responsibility carries a [`NodeId`] that is unique within the model and is
//! never handed out twice, even after the node is removed. The registry maps
//! those ids back to the node's slot so editors can address nodes without
//! holding references into the graph.
//!
//! Equality on node types and on the model is structural: NodeIds are
//! session-local and are ignored when comparing.

use std::collections::HashMap;
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// Opaque node identifier, unique within one model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct NodeId(u64);

impl NodeId {
    /// Placeholder carried by nodes that have not been inserted into a model.
    pub const UNASSIGNED: NodeId = NodeId(0);

    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Index on the document's time axis: a week index for week timelines, a day
/// offset from the start date for calendar timelines.
pub type TimelinePosition = u32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TimelineSpec {
    Weeks { length_weeks: u32 },
    Calendar { start_date: NaiveDate, end_date: NaiveDate },
}

impl TimelineSpec {
    /// Largest admissible position, or `None` when the timeline itself is
    /// malformed (zero weeks, or a calendar that does not move forward).
    pub fn max_position(&self) -> Option<u64> {
        match *self {
            TimelineSpec::Weeks { length_weeks } if length_weeks >= 1 => Some(length_weeks as u64),
            TimelineSpec::Calendar { start_date, end_date } if start_date < end_date => {
                Some((end_date - start_date).num_days() as u64)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProcessHeader {
    pub name: String,
    pub version: String,
    pub timeline: TimelineSpec,
}

impl ProcessHeader {
    pub fn new(name: impl Into<String>, version: impl Into<String>, timeline: TimelineSpec) -> Self {
        ProcessHeader {
            name: name.into(),
            version: version.into(),
            timeline,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResponsibilityKind {
    Responsible,
    Contributing,
    Noticing,
}

impl ResponsibilityKind {
    pub const ALL: [ResponsibilityKind; 3] = [
        ResponsibilityKind::Responsible,
        ResponsibilityKind::Contributing,
        ResponsibilityKind::Noticing,
    ];

    /// Surface keyword used in the file format.
    pub fn keyword(self) -> &'static str {
        match self {
            ResponsibilityKind::Responsible => "resp",
            ResponsibilityKind::Contributing => "cont",
            ResponsibilityKind::Noticing => "noti",
        }
    }

    /// Access intensity, higher is stronger.
    pub fn strength(self) -> u8 {
        match self {
            ResponsibilityKind::Responsible => 3,
            ResponsibilityKind::Contributing => 2,
            ResponsibilityKind::Noticing => 1,
        }
    }
}

impl fmt::Display for ResponsibilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResponsibilityKind::Responsible => "responsible",
            ResponsibilityKind::Contributing => "contributing",
            ResponsibilityKind::Noticing => "noticing",
        })
    }
}

/// Start/end pair on the timeline. Ordering is checked by the validator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: TimelinePosition,
    pub end: TimelinePosition,
}

impl Span {
    pub fn new(start: TimelinePosition, end: TimelinePosition) -> Self {
        Span { start, end }
    }
}

#[derive(Debug, Clone, Eq, Serialize)]
pub struct Layer {
    id: NodeId,
    pub name: String,
    pub description: String,
}

impl Layer {
    pub fn new(name: impl Into<String>, description: impl Into<String>) -> Self {
        Layer {
            id: NodeId::UNASSIGNED,
            name: name.into(),
            description: description.into(),
        }
    }

    pub fn id(&self) -> NodeId {
        self.id
    }
}

impl PartialEq for Layer {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.description == other.description
    }
}

#[derive(Debug, Clone, Eq, Serialize)]
pub struct ResultArtifact {
    id: NodeId,
    pub name: String,
    pub description: String,
}

impl ResultArtifact {
    pub fn new(name: impl Into<String>, description: impl Into<String>) -> Self {
        ResultArtifact {
            id: NodeId::UNASSIGNED,
            name: name.into(),
            description: description.into(),
        }
    }

    pub fn id(&self) -> NodeId {
        self.id
    }
}

impl PartialEq for ResultArtifact {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.description == other.description
    }
}

#[derive(Debug, Clone, Eq, Serialize)]
pub struct Milestone {
    id: NodeId,
    pub name: String,
    pub position: TimelinePosition,
    pub span: Option<Span>,
    pub results: Vec<ResultArtifact>,
    pub description: String,
}

impl Milestone {
    pub fn new(name: impl Into<String>, position: TimelinePosition, description: impl Into<String>) -> Self {
        Milestone {
            id: NodeId::UNASSIGNED,
            name: name.into(),
            position,
            span: None,
            results: Vec::new(),
            description: description.into(),
        }
    }

    pub fn with_span(mut self, start: TimelinePosition, end: TimelinePosition) -> Self {
        self.span = Some(Span::new(start, end));
        self
    }

    pub fn with_result(mut self, result: ResultArtifact) -> Self {
        self.results.push(result);
        self
    }

    pub fn id(&self) -> NodeId {
        self.id
    }
}

impl PartialEq for Milestone {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.position == other.position
            && self.span == other.span
            && self.results == other.results
            && self.description == other.description
    }
}

#[derive(Debug, Clone, Eq, Serialize)]
pub struct Responsibility {
    id: NodeId,
    pub kind: ResponsibilityKind,
    pub as_milestone: String,
}

impl Responsibility {
    pub fn new(kind: ResponsibilityKind, as_milestone: impl Into<String>) -> Self {
        Responsibility {
            id: NodeId::UNASSIGNED,
            kind,
            as_milestone: as_milestone.into(),
        }
    }

    pub fn id(&self) -> NodeId {
        self.id
    }
}

impl PartialEq for Responsibility {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.as_milestone == other.as_milestone
    }
}

#[derive(Debug, Clone, Eq, Serialize)]
pub struct Scope {
    id: NodeId,
    pub name: String,
    pub layer_name: String,
    pub description: String,
    pub responsibilities: Vec<Responsibility>,
}

impl Scope {
    pub fn new(name: impl Into<String>, layer_name: impl Into<String>, description: impl Into<String>) -> Self {
        Scope {
            id: NodeId::UNASSIGNED,
            name: name.into(),
            layer_name: layer_name.into(),
            description: description.into(),
            responsibilities: Vec::new(),
        }
    }

    pub fn with_responsibility(mut self, responsibility: Responsibility) -> Self {
        self.responsibilities.push(responsibility);
        self
    }

    pub fn id(&self) -> NodeId {
        self.id
    }
}

impl PartialEq for Scope {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.layer_name == other.layer_name
            && self.description == other.description
            && self.responsibilities == other.responsibilities
    }
}

/// Borrowed view of any registered node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Node<'a> {
    Layer(&'a Layer),
    Milestone(&'a Milestone),
    Result(&'a ResultArtifact),
    Scope(&'a Scope),
    Responsibility(&'a Responsibility),
}

impl Node<'_> {
    pub fn id(&self) -> NodeId {
        match self {
            Node::Layer(n) => n.id,
            Node::Milestone(n) => n.id,
            Node::Result(n) => n.id,
            Node::Scope(n) => n.id,
            Node::Responsibility(n) => n.id,
        }
    }
}

/// Where a node lives inside the declaration lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    Layer(usize),
    Milestone(usize),
    Result(usize, usize),
    Scope(usize),
    Responsibility(usize, usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct ProcessModel {
    pub(crate) header: ProcessHeader,
    pub(crate) layers: Vec<Layer>,
    pub(crate) milestones: Vec<Milestone>,
    pub(crate) scopes: Vec<Scope>,
    #[serde(skip)]
    registry: HashMap<NodeId, Slot>,
    #[serde(skip)]
    next_id: u64,
}

/// Assembles a model from declarations, assigning fresh ids to every node.
///
/// Total: duplicates and dangling references are accepted here and reported
/// later by [`crate::resolve`] and [`crate::validate`].
pub fn build_model(
    header: ProcessHeader,
    layers: Vec<Layer>,
    milestones: Vec<Milestone>,
    scopes: Vec<Scope>,
) -> ProcessModel {
    let mut model = ProcessModel {
        header,
        layers,
        milestones,
        scopes,
        registry: HashMap::new(),
        next_id: 1,
    };
    let mut next = model.next_id;
    let mut fresh = || {
        let id = NodeId(next);
        next += 1;
        id
    };
    for layer in &mut model.layers {
        layer.id = fresh();
    }
    for milestone in &mut model.milestones {
        milestone.id = fresh();
        for result in &mut milestone.results {
            result.id = fresh();
        }
    }
    for scope in &mut model.scopes {
        scope.id = fresh();
        for resp in &mut scope.responsibilities {
            resp.id = fresh();
        }
    }
    model.next_id = next;
    model.reindex();
    model
}

impl ProcessModel {
    pub fn header(&self) -> &ProcessHeader {
        &self.header
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn milestones(&self) -> &[Milestone] {
        &self.milestones
    }

    pub fn scopes(&self) -> &[Scope] {
        &self.scopes
    }

    /// Number of registered nodes.
    pub fn node_count(&self) -> usize {
        self.registry.len()
    }

    pub fn lookup(&self, id: NodeId) -> Option<Node<'_>> {
        let node = match *self.registry.get(&id)? {
            Slot::Layer(i) => Node::Layer(&self.layers[i]),
            Slot::Milestone(i) => Node::Milestone(&self.milestones[i]),
            Slot::Result(m, r) => Node::Result(&self.milestones[m].results[r]),
            Slot::Scope(i) => Node::Scope(&self.scopes[i]),
            Slot::Responsibility(s, r) => Node::Responsibility(&self.scopes[s].responsibilities[r]),
        };
        Some(node)
    }

    /// All milestones called `name`, in document order.
    pub fn milestones_by_name(&self, name: &str) -> Vec<&Milestone> {
        self.milestones.iter().filter(|m| m.name == name).collect()
    }

    pub fn layer(&self, name: &str) -> Option<&Layer> {
        self.layers.iter().find(|l| l.name == name)
    }

    pub fn scope(&self, layer: &str, name: &str) -> Option<&Scope> {
        self.scopes.iter().find(|s| s.layer_name == layer && s.name == name)
    }

    /// Every registered id in document order.
    pub fn node_ids(&self) -> Vec<NodeId> {
        let mut ids = Vec::with_capacity(self.registry.len());
        ids.extend(self.layers.iter().map(|l| l.id));
        for m in &self.milestones {
            ids.push(m.id);
            ids.extend(m.results.iter().map(|r| r.id));
        }
        for s in &self.scopes {
            ids.push(s.id);
            ids.extend(s.responsibilities.iter().map(|r| r.id));
        }
        ids
    }

    pub(crate) fn fresh_id(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    pub(crate) fn assign_milestone_ids(&mut self, milestone: &mut Milestone) {
        milestone.id = self.fresh_id();
        for result in &mut milestone.results {
            result.id = self.fresh_id();
        }
    }

    pub(crate) fn assign_scope_ids(&mut self, scope: &mut Scope) {
        scope.id = self.fresh_id();
        for resp in &mut scope.responsibilities {
            resp.id = self.fresh_id();
        }
    }

    pub(crate) fn assign_layer_id(&mut self, layer: &mut Layer) {
        layer.id = self.fresh_id();
    }

    pub(crate) fn assign_result_id(&mut self, result: &mut ResultArtifact) {
        result.id = self.fresh_id();
    }

    pub(crate) fn assign_responsibility_id(&mut self, resp: &mut Responsibility) {
        resp.id = self.fresh_id();
    }

    /// Rebuilds the registry from the declaration lists.
    pub(crate) fn reindex(&mut self) {
        self.registry.clear();
        for (i, layer) in self.layers.iter().enumerate() {
            self.registry.insert(layer.id, Slot::Layer(i));
        }
        for (i, milestone) in self.milestones.iter().enumerate() {
            self.registry.insert(milestone.id, Slot::Milestone(i));
            for (j, result) in milestone.results.iter().enumerate() {
                self.registry.insert(result.id, Slot::Result(i, j));
            }
        }
        for (i, scope) in self.scopes.iter().enumerate() {
            self.registry.insert(scope.id, Slot::Scope(i));
            for (j, resp) in scope.responsibilities.iter().enumerate() {
                self.registry.insert(resp.id, Slot::Responsibility(i, j));
            }
        }
    }
}

impl PartialEq for ProcessModel {
    fn eq(&self, other: &Self) -> bool {
        self.header == other.header
            && self.layers == other.layers
            && self.milestones == other.milestones
            && self.scopes == other.scopes
    }
}

impl Eq for ProcessModel {}
