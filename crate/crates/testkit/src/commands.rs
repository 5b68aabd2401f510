use std::collections::HashSet;

use procdsl::{Command, ProcessModel, ResponsibilityKind, SpanArg, Target};
use rand::seq::IndexedRandom;
use rand::Rng as _;

use crate::generate::{random_identifier, random_text};
use crate::Rng;

fn fresh(rng: &mut Rng, taken: impl IntoIterator<Item = String>) -> String {
    let taken: HashSet<String> = taken.into_iter().collect();
    loop {
        let name = random_identifier(rng);
        if !taken.contains(&name) {
            return name;
        }
    }
}

fn kind(rng: &mut Rng) -> ResponsibilityKind {
    *ResponsibilityKind::ALL.choose(rng).unwrap()
}

fn span(rng: &mut Rng) -> Option<SpanArg> {
    rng.random_bool(0.7).then(|| {
        let start = rng.random_range(0..60);
        SpanArg {
            start,
            end: start + rng.random_range(0..20),
        }
    })
}

fn milestone_names(model: &ProcessModel) -> Vec<String> {
    model.milestones().iter().map(|m| m.name.clone()).collect()
}

/// A command that applies cleanly to `model`.
///
/// Requires that milestone, layer, scope, result and per-scope
/// responsibility names are unique, as in models from `valid_model`; every
/// generated command preserves that property.
pub fn random_command(rng: &mut Rng, model: &ProcessModel) -> Command {
    loop {
        if let Some(cmd) = attempt(rng, model) {
            return cmd;
        }
    }
}

fn attempt(rng: &mut Rng, model: &ProcessModel) -> Option<Command> {
    let milestone = model.milestones().choose(rng);
    let layer = model.layers().choose(rng);
    let scope = model.scopes().choose(rng);
    let cmd = match rng.random_range(0..16) {
        0 => Command::AddLayer {
            name: fresh(rng, model.layers().iter().map(|l| l.name.clone())),
            description: random_text(rng),
        },
        1 | 2 => Command::AddMilestone {
            name: fresh(rng, milestone_names(model)),
            position: rng.random_range(0..100),
            span: span(rng),
            description: random_text(rng),
        },
        3 => Command::RemoveMilestone {
            name: milestone?.name.clone(),
            cascade: true,
        },
        4 => Command::MoveMilestone {
            name: milestone?.name.clone(),
            position: rng.random_range(0..100),
        },
        5 => Command::SetSpan {
            milestone: milestone?.name.clone(),
            span: span(rng),
        },
        6 => {
            let target = match rng.random_range(0..4) {
                0 => Target::Layer {
                    name: layer?.name.clone(),
                },
                1 => Target::Milestone {
                    name: milestone?.name.clone(),
                },
                2 => {
                    let m = milestone?;
                    Target::Result {
                        milestone: m.name.clone(),
                        name: m.results.choose(rng)?.name.clone(),
                    }
                }
                _ => {
                    let s = scope?;
                    Target::Scope {
                        layer: s.layer_name.clone(),
                        name: s.name.clone(),
                    }
                }
            };
            Command::SetDescription {
                target,
                description: random_text(rng),
            }
        }
        7 => {
            let m = milestone?;
            Command::AddResult {
                milestone: m.name.clone(),
                name: fresh(rng, m.results.iter().map(|r| r.name.clone())),
                description: random_text(rng),
            }
        }
        8 => {
            let m = milestone?;
            Command::RemoveResult {
                milestone: m.name.clone(),
                name: m.results.choose(rng)?.name.clone(),
            }
        }
        9 => {
            let l = layer?;
            let taken = model
                .scopes()
                .iter()
                .filter(|s| s.layer_name == l.name)
                .map(|s| s.name.clone());
            Command::AddScope {
                layer: l.name.clone(),
                name: fresh(rng, taken),
                description: random_text(rng),
            }
        }
        10 => {
            let s = scope?;
            Command::RemoveScope {
                layer: s.layer_name.clone(),
                name: s.name.clone(),
            }
        }
        11 | 12 => {
            let s = scope?;
            let m = milestone?;
            if s.responsibilities.iter().any(|r| r.as_milestone == m.name) {
                return None;
            }
            Command::AddResponsibility {
                layer: s.layer_name.clone(),
                scope: s.name.clone(),
                milestone: m.name.clone(),
                kind: kind(rng),
            }
        }
        13 => {
            let s = scope?;
            Command::RemoveResponsibility {
                layer: s.layer_name.clone(),
                scope: s.name.clone(),
                milestone: s.responsibilities.choose(rng)?.as_milestone.clone(),
            }
        }
        14 => {
            let s = scope?;
            Command::SetResponsibilityKind {
                layer: s.layer_name.clone(),
                scope: s.name.clone(),
                milestone: s.responsibilities.choose(rng)?.as_milestone.clone(),
                kind: kind(rng),
            }
        }
        _ => Command::RenameMilestone {
            from: milestone?.name.clone(),
            to: fresh(rng, milestone_names(model)),
        },
    };
    Some(cmd)
}

/// A command changing one field of an existing milestone: position, span,
/// description or name. Returns `None` for a model without milestones.
pub fn random_milestone_edit(rng: &mut Rng, model: &ProcessModel) -> Option<Command> {
    let name = model.milestones().choose(rng)?.name.clone();
    Some(match rng.random_range(0..4) {
        0 => Command::MoveMilestone {
            name,
            position: rng.random_range(0..100),
        },
        1 => Command::SetSpan {
            milestone: name,
            span: span(rng),
        },
        2 => Command::SetDescription {
            target: Target::Milestone { name },
            description: random_text(rng),
        },
        _ => Command::RenameMilestone {
            from: name,
            to: fresh(rng, milestone_names(model)),
        },
    })
}
