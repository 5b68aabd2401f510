//! Reversible edit commands and undo/redo history.
//!
//! A [`Command`] names its targets by their document names rather than by
//! NodeId: undo re-creates removed nodes with fresh ids, and names survive
//! that while ids do not. Each command is planned against the current model
//! into a list of primitive [`Edit`]s; executing an edit returns the edit
//! that reverses it, so the inverse of a command is always computed from the
//! exact pre-state. Primitive edits address nodes by index, which is sound
//! because undo and redo replay strictly in stack order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    Layer, Milestone, ProcessModel, Responsibility, ResponsibilityKind, ResultArtifact, Scope, Span, TimelinePosition,
};
use crate::syntax::{is_identifier, is_representable_string};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanArg {
    pub start: i64,
    pub end: i64,
}

/// Node whose description a [`Command::SetDescription`] changes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    Layer { name: String },
    Milestone { name: String },
    Result { milestone: String, name: String },
    Scope { layer: String, name: String },
}

/// One user edit. Serialized as `{"cmd": "<Variant>", ...arguments}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "cmd")]
pub enum Command {
    AddLayer {
        name: String,
        #[serde(default)]
        description: String,
    },
    AddMilestone {
        name: String,
        position: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        span: Option<SpanArg>,
        #[serde(default)]
        description: String,
    },
    RemoveMilestone {
        name: String,
        #[serde(default)]
        cascade: bool,
    },
    MoveMilestone {
        name: String,
        position: i64,
    },
    SetDescription {
        target: Target,
        description: String,
    },
    SetSpan {
        milestone: String,
        span: Option<SpanArg>,
    },
    AddResult {
        milestone: String,
        name: String,
        #[serde(default)]
        description: String,
    },
    RemoveResult {
        milestone: String,
        name: String,
    },
    AddScope {
        layer: String,
        name: String,
        #[serde(default)]
        description: String,
    },
    RemoveScope {
        layer: String,
        name: String,
    },
    AddResponsibility {
        layer: String,
        scope: String,
        milestone: String,
        kind: ResponsibilityKind,
    },
    RemoveResponsibility {
        layer: String,
        scope: String,
        milestone: String,
    },
    SetResponsibilityKind {
        layer: String,
        scope: String,
        milestone: String,
        kind: ResponsibilityKind,
    },
    RenameMilestone {
        from: String,
        to: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommandError {
    #[error("{0}")]
    TargetMissing(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    InvalidArg(String),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("nothing to redo")]
    NothingToRedo,
    #[error("command {index} of the batch failed: {source}")]
    BatchFailed {
        index: usize,
        #[source]
        source: Box<CommandError>,
    },
}

impl CommandError {
    pub fn code(&self) -> &'static str {
        match self {
            CommandError::TargetMissing(_) => "CMD_TARGET_MISSING",
            CommandError::Conflict(_) => "CMD_CONFLICT",
            CommandError::InvalidArg(_) => "CMD_INVALID_ARG",
            CommandError::NothingToUndo => "CMD_NOTHING_TO_UNDO",
            CommandError::NothingToRedo => "CMD_NOTHING_TO_REDO",
            CommandError::BatchFailed { .. } => "CMD_BATCH_FAILED",
        }
    }
}

/// Primitive, index-addressed change to a model.
#[derive(Debug, Clone)]
enum Edit {
    InsertLayer {
        at: usize,
        layer: Layer,
    },
    RemoveLayer {
        at: usize,
    },
    SetLayerDescription {
        at: usize,
        description: String,
    },
    InsertMilestone {
        at: usize,
        milestone: Milestone,
    },
    RemoveMilestone {
        at: usize,
    },
    UpdateMilestone {
        at: usize,
        fields: MilestoneFields,
    },
    InsertResult {
        milestone: usize,
        at: usize,
        result: ResultArtifact,
    },
    RemoveResult {
        milestone: usize,
        at: usize,
    },
    SetResultDescription {
        milestone: usize,
        at: usize,
        description: String,
    },
    InsertScope {
        at: usize,
        scope: Scope,
    },
    RemoveScope {
        at: usize,
    },
    SetScopeDescription {
        at: usize,
        description: String,
    },
    InsertResponsibility {
        scope: usize,
        at: usize,
        responsibility: Responsibility,
    },
    RemoveResponsibility {
        scope: usize,
        at: usize,
    },
    UpdateResponsibility {
        scope: usize,
        at: usize,
        kind: ResponsibilityKind,
        as_milestone: String,
    },
}

/// Scalar fields of a milestone (everything but its results).
#[derive(Debug, Clone)]
struct MilestoneFields {
    name: String,
    position: TimelinePosition,
    span: Option<Span>,
    description: String,
}

impl MilestoneFields {
    fn of(m: &Milestone) -> Self {
        MilestoneFields {
            name: m.name.clone(),
            position: m.position,
            span: m.span,
            description: m.description.clone(),
        }
    }
}

/// Applies `edit` and returns the edit that undoes it. The registry is not
/// refreshed here; callers reindex once per command.
fn execute(model: &mut ProcessModel, edit: Edit) -> Edit {
    match edit {
        Edit::InsertLayer { at, mut layer } => {
            model.assign_layer_id(&mut layer);
            model.layers.insert(at, layer);
            Edit::RemoveLayer { at }
        }
        Edit::RemoveLayer { at } => Edit::InsertLayer {
            at,
            layer: model.layers.remove(at),
        },
        Edit::SetLayerDescription { at, description } => Edit::SetLayerDescription {
            at,
            description: std::mem::replace(&mut model.layers[at].description, description),
        },
        Edit::InsertMilestone { at, mut milestone } => {
            model.assign_milestone_ids(&mut milestone);
            model.milestones.insert(at, milestone);
            Edit::RemoveMilestone { at }
        }
        Edit::RemoveMilestone { at } => Edit::InsertMilestone {
            at,
            milestone: model.milestones.remove(at),
        },
        Edit::UpdateMilestone { at, fields } => {
            let m = &mut model.milestones[at];
            let previous = MilestoneFields::of(m);
            m.name = fields.name;
            m.position = fields.position;
            m.span = fields.span;
            m.description = fields.description;
            Edit::UpdateMilestone { at, fields: previous }
        }
        Edit::InsertResult {
            milestone,
            at,
            mut result,
        } => {
            model.assign_result_id(&mut result);
            model.milestones[milestone].results.insert(at, result);
            Edit::RemoveResult { milestone, at }
        }
        Edit::RemoveResult { milestone, at } => Edit::InsertResult {
            milestone,
            at,
            result: model.milestones[milestone].results.remove(at),
        },
        Edit::SetResultDescription {
            milestone,
            at,
            description,
        } => Edit::SetResultDescription {
            milestone,
            at,
            description: std::mem::replace(&mut model.milestones[milestone].results[at].description, description),
        },
        Edit::InsertScope { at, mut scope } => {
            model.assign_scope_ids(&mut scope);
            model.scopes.insert(at, scope);
            Edit::RemoveScope { at }
        }
        Edit::RemoveScope { at } => Edit::InsertScope {
            at,
            scope: model.scopes.remove(at),
        },
        Edit::SetScopeDescription { at, description } => Edit::SetScopeDescription {
            at,
            description: std::mem::replace(&mut model.scopes[at].description, description),
        },
        Edit::InsertResponsibility {
            scope,
            at,
            mut responsibility,
        } => {
            model.assign_responsibility_id(&mut responsibility);
            model.scopes[scope].responsibilities.insert(at, responsibility);
            Edit::RemoveResponsibility { scope, at }
        }
        Edit::RemoveResponsibility { scope, at } => Edit::InsertResponsibility {
            scope,
            at,
            responsibility: model.scopes[scope].responsibilities.remove(at),
        },
        Edit::UpdateResponsibility {
            scope,
            at,
            kind,
            as_milestone,
        } => {
            let r = &mut model.scopes[scope].responsibilities[at];
            let previous = Edit::UpdateResponsibility {
                scope,
                at,
                kind: r.kind,
                as_milestone: r.as_milestone.clone(),
            };
            r.kind = kind;
            r.as_milestone = as_milestone;
            previous
        }
    }
}

/// Executes `edits` in order and returns the list that reverts them.
fn run(model: &mut ProcessModel, edits: Vec<Edit>) -> Vec<Edit> {
    let mut inverse: Vec<Edit> = edits.into_iter().map(|e| execute(model, e)).collect();
    inverse.reverse();
    model.reindex();
    inverse
}

fn identifier(name: &str, what: &str) -> Result<(), CommandError> {
    if is_identifier(name) {
        Ok(())
    } else {
        Err(CommandError::InvalidArg(format!(
            "`{name}` is not a valid {what} name (letters, digits and `_`, starting with a letter, not a keyword)"
        )))
    }
}

fn text(value: &str) -> Result<(), CommandError> {
    if is_representable_string(value) {
        Ok(())
    } else {
        Err(CommandError::InvalidArg("text may not contain line breaks".to_owned()))
    }
}

fn position(value: i64) -> Result<TimelinePosition, CommandError> {
    TimelinePosition::try_from(value)
        .map_err(|_| CommandError::InvalidArg(format!("position {value} must be between 0 and {}", u32::MAX)))
}

fn span(value: Option<SpanArg>) -> Result<Option<Span>, CommandError> {
    value
        .map(|s| Ok(Span::new(position(s.start)?, position(s.end)?)))
        .transpose()
}

fn unique<T>(mut matches: impl Iterator<Item = T>, what: impl FnOnce() -> String) -> Result<T, CommandError> {
    match (matches.next(), matches.next()) {
        (Some(found), None) => Ok(found),
        (None, _) => Err(CommandError::TargetMissing(format!("no {}", what()))),
        (Some(_), Some(_)) => Err(CommandError::Conflict(format!("{} is ambiguous", what()))),
    }
}

fn milestone_index(model: &ProcessModel, name: &str) -> Result<usize, CommandError> {
    unique(
        model
            .milestones
            .iter()
            .enumerate()
            .filter(|(_, m)| m.name == name)
            .map(|(i, _)| i),
        || format!("milestone `{name}`"),
    )
}

fn layer_index(model: &ProcessModel, name: &str) -> Result<usize, CommandError> {
    unique(
        model
            .layers
            .iter()
            .enumerate()
            .filter(|(_, l)| l.name == name)
            .map(|(i, _)| i),
        || format!("layer `{name}`"),
    )
}

fn scope_index(model: &ProcessModel, layer: &str, name: &str) -> Result<usize, CommandError> {
    unique(
        model
            .scopes
            .iter()
            .enumerate()
            .filter(|(_, s)| s.layer_name == layer && s.name == name)
            .map(|(i, _)| i),
        || format!("scope `{name}` in layer `{layer}`"),
    )
}

fn result_index(model: &ProcessModel, milestone: usize, name: &str) -> Result<usize, CommandError> {
    let m = &model.milestones[milestone];
    unique(
        m.results
            .iter()
            .enumerate()
            .filter(|(_, r)| r.name == name)
            .map(|(i, _)| i),
        || format!("result `{name}` on milestone `{}`", m.name),
    )
}

fn responsibility_index(model: &ProcessModel, scope: usize, milestone: &str) -> Result<usize, CommandError> {
    let s = &model.scopes[scope];
    unique(
        s.responsibilities
            .iter()
            .enumerate()
            .filter(|(_, r)| r.as_milestone == milestone)
            .map(|(i, _)| i),
        || format!("responsibility of scope `{}` for milestone `{milestone}`", s.name),
    )
}

/// References to milestone `name` as (scope index, responsibility index).
fn references(model: &ProcessModel, name: &str) -> Vec<(usize, usize)> {
    model
        .scopes
        .iter()
        .enumerate()
        .flat_map(|(i, s)| {
            s.responsibilities
                .iter()
                .enumerate()
                .filter(|(_, r)| r.as_milestone == name)
                .map(move |(j, _)| (i, j))
        })
        .collect()
}

/// Checks `command` against `model` and lowers it to primitive edits.
fn plan(model: &ProcessModel, command: &Command) -> Result<Vec<Edit>, CommandError> {
    let edits = match command {
        Command::AddLayer { name, description } => {
            identifier(name, "layer")?;
            text(description)?;
            if model.layer(name).is_some() {
                return Err(CommandError::Conflict(format!("layer `{name}` already exists")));
            }
            vec![Edit::InsertLayer {
                at: model.layers.len(),
                layer: Layer::new(name.clone(), description.clone()),
            }]
        }
        Command::AddMilestone {
            name,
            position: pos,
            span: sp,
            description,
        } => {
            identifier(name, "milestone")?;
            text(description)?;
            let mut milestone = Milestone::new(name.clone(), position(*pos)?, description.clone());
            milestone.span = span(*sp)?;
            if !model.milestones_by_name(name).is_empty() {
                return Err(CommandError::Conflict(format!("milestone `{name}` already exists")));
            }
            vec![Edit::InsertMilestone {
                at: model.milestones.len(),
                milestone,
            }]
        }
        Command::RemoveMilestone { name, cascade } => {
            let at = milestone_index(model, name)?;
            let refs = references(model, name);
            if !refs.is_empty() && !cascade {
                return Err(CommandError::Conflict(format!(
                    "milestone `{name}` is still referenced by {} responsibilit{}",
                    refs.len(),
                    if refs.len() == 1 { "y" } else { "ies" }
                )));
            }
            // back to front so earlier indices stay valid
            let mut edits: Vec<Edit> = refs
                .into_iter()
                .rev()
                .map(|(scope, at)| Edit::RemoveResponsibility { scope, at })
                .collect();
            edits.push(Edit::RemoveMilestone { at });
            edits
        }
        Command::MoveMilestone { name, position: pos } => {
            let at = milestone_index(model, name)?;
            let fields = MilestoneFields {
                position: position(*pos)?,
                ..MilestoneFields::of(&model.milestones[at])
            };
            vec![Edit::UpdateMilestone { at, fields }]
        }
        Command::SetSpan { milestone, span: sp } => {
            let at = milestone_index(model, milestone)?;
            let fields = MilestoneFields {
                span: span(*sp)?,
                ..MilestoneFields::of(&model.milestones[at])
            };
            vec![Edit::UpdateMilestone { at, fields }]
        }
        Command::SetDescription { target, description } => {
            text(description)?;
            let description = description.clone();
            match target {
                Target::Layer { name } => vec![Edit::SetLayerDescription {
                    at: layer_index(model, name)?,
                    description,
                }],
                Target::Milestone { name } => {
                    let at = milestone_index(model, name)?;
                    let fields = MilestoneFields {
                        description,
                        ..MilestoneFields::of(&model.milestones[at])
                    };
                    vec![Edit::UpdateMilestone { at, fields }]
                }
                Target::Result { milestone, name } => {
                    let m = milestone_index(model, milestone)?;
                    vec![Edit::SetResultDescription {
                        milestone: m,
                        at: result_index(model, m, name)?,
                        description,
                    }]
                }
                Target::Scope { layer, name } => vec![Edit::SetScopeDescription {
                    at: scope_index(model, layer, name)?,
                    description,
                }],
            }
        }
        Command::AddResult {
            milestone,
            name,
            description,
        } => {
            let m = milestone_index(model, milestone)?;
            identifier(name, "artifact")?;
            text(description)?;
            if model.milestones[m].results.iter().any(|r| &r.name == name) {
                return Err(CommandError::Conflict(format!(
                    "milestone `{milestone}` already has a result `{name}`"
                )));
            }
            vec![Edit::InsertResult {
                milestone: m,
                at: model.milestones[m].results.len(),
                result: ResultArtifact::new(name.clone(), description.clone()),
            }]
        }
        Command::RemoveResult { milestone, name } => {
            let m = milestone_index(model, milestone)?;
            vec![Edit::RemoveResult {
                milestone: m,
                at: result_index(model, m, name)?,
            }]
        }
        Command::AddScope {
            layer,
            name,
            description,
        } => {
            identifier(name, "scope")?;
            text(description)?;
            layer_index(model, layer)?;
            if model.scope(layer, name).is_some() {
                return Err(CommandError::Conflict(format!(
                    "scope `{name}` already exists in layer `{layer}`"
                )));
            }
            vec![Edit::InsertScope {
                at: model.scopes.len(),
                scope: Scope::new(name.clone(), layer.clone(), description.clone()),
            }]
        }
        Command::RemoveScope { layer, name } => vec![Edit::RemoveScope {
            at: scope_index(model, layer, name)?,
        }],
        Command::AddResponsibility {
            layer,
            scope,
            milestone,
            kind,
        } => {
            let s = scope_index(model, layer, scope)?;
            milestone_index(model, milestone)?;
            if model.scopes[s]
                .responsibilities
                .iter()
                .any(|r| &r.as_milestone == milestone)
            {
                return Err(CommandError::Conflict(format!(
                    "scope `{scope}` already has a responsibility for `{milestone}`"
                )));
            }
            vec![Edit::InsertResponsibility {
                scope: s,
                at: model.scopes[s].responsibilities.len(),
                responsibility: Responsibility::new(*kind, milestone.clone()),
            }]
        }
        Command::RemoveResponsibility {
            layer,
            scope,
            milestone,
        } => {
            let s = scope_index(model, layer, scope)?;
            vec![Edit::RemoveResponsibility {
                scope: s,
                at: responsibility_index(model, s, milestone)?,
            }]
        }
        Command::SetResponsibilityKind {
            layer,
            scope,
            milestone,
            kind,
        } => {
            let s = scope_index(model, layer, scope)?;
            let at = responsibility_index(model, s, milestone)?;
            vec![Edit::UpdateResponsibility {
                scope: s,
                at,
                kind: *kind,
                as_milestone: milestone.clone(),
            }]
        }
        Command::RenameMilestone { from, to } => {
            let at = milestone_index(model, from)?;
            identifier(to, "milestone")?;
            if from != to && !model.milestones_by_name(to).is_empty() {
                return Err(CommandError::Conflict(format!("milestone `{to}` already exists")));
            }
            let fields = MilestoneFields {
                name: to.clone(),
                ..MilestoneFields::of(&model.milestones[at])
            };
            let mut edits = vec![Edit::UpdateMilestone { at, fields }];
            edits.extend(
                references(model, from)
                    .into_iter()
                    .map(|(scope, at)| Edit::UpdateResponsibility {
                        scope,
                        at,
                        kind: model.scopes[scope].responsibilities[at].kind,
                        as_milestone: to.clone(),
                    }),
            );
            edits
        }
    };
    Ok(edits)
}

#[derive(Debug, Clone)]
struct Entry {
    commands: Vec<Command>,
    /// Edits that move the model across this entry: the inverse while on
    /// the undo stack, the re-application while on the redo stack.
    edits: Vec<Edit>,
}

/// Undo/redo stacks of one editing session.
#[derive(Debug, Clone, Default)]
pub struct History {
    undo: Vec<Entry>,
    redo: Vec<Entry>,
    revision: u64,
}

impl History {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bumped once per applied, undone or redone step.
    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn undo_depth(&self) -> usize {
        self.undo.len()
    }

    pub fn redo_depth(&self) -> usize {
        self.redo.len()
    }

    /// Commands of the step `undo` would revert.
    pub fn next_undo(&self) -> Option<&[Command]> {
        self.undo.last().map(|e| e.commands.as_slice())
    }

    /// Commands of the step `redo` would re-apply.
    pub fn next_redo(&self) -> Option<&[Command]> {
        self.redo.last().map(|e| e.commands.as_slice())
    }
}

/// A model together with its editing history; the single writer of the
/// model while it is being edited.
#[derive(Debug, Clone)]
pub struct Document {
    model: ProcessModel,
    history: History,
}

impl Document {
    pub fn new(model: ProcessModel) -> Self {
        Document {
            model,
            history: History::new(),
        }
    }

    pub fn model(&self) -> &ProcessModel {
        &self.model
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    pub fn into_model(self) -> ProcessModel {
        self.model
    }

    /// Applies one command. On error the document is untouched.
    pub fn apply(&mut self, command: Command) -> Result<(), CommandError> {
        let edits = plan(&self.model, &command)?;
        let inverse = run(&mut self.model, edits);
        self.record(vec![command], inverse);
        Ok(())
    }

    /// Applies all commands as one undo step, or none of them.
    pub fn apply_batch(&mut self, commands: Vec<Command>) -> Result<(), CommandError> {
        match commands.len() {
            0 => return Ok(()),
            1 => {
                let command = commands.into_iter().next().expect("one command");
                return self.apply(command).map_err(|source| CommandError::BatchFailed {
                    index: 0,
                    source: Box::new(source),
                });
            }
            _ => {}
        }
        // Work on a copy so a failure leaves ids and the id counter intact.
        let mut working = self.model.clone();
        let mut inverse = Vec::new();
        for (index, command) in commands.iter().enumerate() {
            let edits = plan(&working, command).map_err(|source| CommandError::BatchFailed {
                index,
                source: Box::new(source),
            })?;
            let mut undo = run(&mut working, edits);
            undo.append(&mut inverse);
            inverse = undo;
        }
        self.model = working;
        self.record(commands, inverse);
        Ok(())
    }

    pub fn undo(&mut self) -> Result<(), CommandError> {
        let entry = self.history.undo.pop().ok_or(CommandError::NothingToUndo)?;
        let edits = run(&mut self.model, entry.edits);
        self.history.redo.push(Entry {
            commands: entry.commands,
            edits,
        });
        self.history.revision += 1;
        Ok(())
    }

    pub fn redo(&mut self) -> Result<(), CommandError> {
        let entry = self.history.redo.pop().ok_or(CommandError::NothingToRedo)?;
        let edits = run(&mut self.model, entry.edits);
        self.history.undo.push(Entry {
            commands: entry.commands,
            edits,
        });
        self.history.revision += 1;
        Ok(())
    }

    fn record(&mut self, commands: Vec<Command>, inverse: Vec<Edit>) {
        self.history.undo.push(Entry {
            commands,
            edits: inverse,
        });
        self.history.redo.clear();
        self.history.revision += 1;
    }
}

#[cfg(test)]
mod tests;
