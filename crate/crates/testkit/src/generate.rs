use std::collections::HashSet;
use std::fmt::Write;

use chrono::{Duration, NaiveDate};
use procdsl::syntax::Keyword;
use procdsl::{
    build_model, Layer, Milestone, ProcessHeader, ProcessModel, Responsibility, ResponsibilityKind, ResultArtifact,
    Scope, Span, TimelineSpec,
};
use rand::seq::IndexedRandom;
use rand::Rng as _;

use crate::Rng;

/// Upper bounds for generated models.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub milestones: usize,
    pub scopes: usize,
    pub layers: usize,
    pub results: usize,
    pub responsibilities: usize,
}

impl Shape {
    pub const ROUND_TRIP: Shape = Shape {
        milestones: 50,
        scopes: 10,
        layers: 3,
        results: 3,
        responsibilities: 6,
    };

    pub const SMALL: Shape = Shape {
        milestones: 10,
        scopes: 5,
        layers: 3,
        results: 3,
        responsibilities: 4,
    };
}

const FIRST: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
const REST: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_0123456789";
const TEXT: &[char] = &[
    'a', 'b', 'e', 'o', 'x', 'Z', 'Q', ' ', ' ', '"', '\\', '/', '-', '.', ',', '(', ')', '0', '7', 'ü', 'ß', '€',
    '\t', '#', '@',
];

pub fn random_identifier(rng: &mut Rng) -> String {
    loop {
        let len = rng.random_range(0..8);
        let mut s = String::with_capacity(len + 1);
        s.push(*FIRST.choose(rng).unwrap() as char);
        for _ in 0..len {
            s.push(*REST.choose(rng).unwrap() as char);
        }
        if Keyword::from_word(&s).is_none() {
            return s;
        }
    }
}

fn fresh_identifier(rng: &mut Rng, taken: &mut HashSet<String>) -> String {
    loop {
        let s = random_identifier(rng);
        if taken.insert(s.clone()) {
            return s;
        }
    }
}

/// Single-line text including quotes and backslashes.
pub fn random_text(rng: &mut Rng) -> String {
    let len = rng.random_range(0..14);
    (0..len).map(|_| *TEXT.choose(rng).unwrap()).collect()
}

fn random_kind(rng: &mut Rng) -> ResponsibilityKind {
    *ResponsibilityKind::ALL.choose(rng).unwrap()
}

fn random_date(rng: &mut Rng) -> NaiveDate {
    NaiveDate::from_ymd_opt(2000, 1, 1).unwrap() + Duration::days(rng.random_range(0..15000))
}

/// Any model the grammar can express. Names may repeat, references may
/// dangle, layers may be undeclared and positions may overflow the timeline.
pub fn arbitrary_model(rng: &mut Rng, shape: Shape) -> ProcessModel {
    let timeline = if rng.random_bool(0.7) {
        TimelineSpec::Weeks {
            length_weeks: if rng.random_bool(0.9) {
                rng.random_range(0..80)
            } else {
                rng.random()
            },
        }
    } else {
        TimelineSpec::Calendar {
            start_date: random_date(rng),
            end_date: random_date(rng),
        }
    };
    let header = ProcessHeader::new(random_text(rng), random_text(rng), timeline);

    let reuse = |rng: &mut Rng, names: &[String]| -> Option<String> {
        if !names.is_empty() && rng.random_bool(0.15) {
            names.choose(rng).cloned()
        } else {
            None
        }
    };
    let position = |rng: &mut Rng| -> u32 {
        if rng.random_bool(0.9) {
            rng.random_range(0..90)
        } else {
            rng.random()
        }
    };

    let mut layer_names: Vec<String> = Vec::new();
    let mut layers = Vec::new();
    for _ in 0..rng.random_range(0..=shape.layers) {
        let name = reuse(rng, &layer_names).unwrap_or_else(|| random_identifier(rng));
        layer_names.push(name.clone());
        layers.push(Layer::new(name, random_text(rng)));
    }

    let mut milestone_names: Vec<String> = Vec::new();
    let mut milestones = Vec::new();
    for _ in 0..rng.random_range(0..=shape.milestones) {
        let name = reuse(rng, &milestone_names).unwrap_or_else(|| random_identifier(rng));
        milestone_names.push(name.clone());
        let mut m = Milestone::new(name, position(rng), random_text(rng));
        if rng.random_bool(0.4) {
            m.span = Some(Span::new(position(rng), position(rng)));
        }
        let mut result_names = Vec::new();
        for _ in 0..rng.random_range(0..=shape.results) {
            let name = reuse(rng, &result_names).unwrap_or_else(|| random_identifier(rng));
            result_names.push(name.clone());
            m.results.push(ResultArtifact::new(name, random_text(rng)));
        }
        milestones.push(m);
    }

    let mut scope_names: Vec<String> = Vec::new();
    let mut scopes = Vec::new();
    for _ in 0..rng.random_range(0..=shape.scopes) {
        let name = reuse(rng, &scope_names).unwrap_or_else(|| random_identifier(rng));
        scope_names.push(name.clone());
        let layer = match layer_names.choose(rng) {
            Some(l) if rng.random_bool(0.9) => l.clone(),
            _ => random_identifier(rng),
        };
        let mut s = Scope::new(name, layer, random_text(rng));
        for _ in 0..rng.random_range(0..=shape.responsibilities) {
            let target = match milestone_names.choose(rng) {
                Some(m) if rng.random_bool(0.9) => m.clone(),
                _ => random_identifier(rng),
            };
            s.responsibilities.push(Responsibility::new(random_kind(rng), target));
        }
        scopes.push(s);
    }

    build_model(header, layers, milestones, scopes)
}

/// A model that resolves and validates without any diagnostic.
pub fn valid_model(rng: &mut Rng, shape: Shape) -> ProcessModel {
    let (timeline, max) = if rng.random_bool(0.7) {
        let weeks = rng.random_range(10..=80);
        (TimelineSpec::Weeks { length_weeks: weeks }, weeks)
    } else {
        let start = random_date(rng);
        let days = rng.random_range(30..=400);
        (
            TimelineSpec::Calendar {
                start_date: start,
                end_date: start + Duration::days(days as i64),
            },
            days,
        )
    };
    let header = ProcessHeader::new(random_text(rng), random_text(rng), timeline);

    let milestone_count = rng.random_range(0..=shape.milestones);
    let layer_floor = usize::from(milestone_count > 0);
    let layer_count = rng.random_range(layer_floor..=shape.layers.max(layer_floor));
    let scope_count = if layer_count == 0 {
        0
    } else {
        rng.random_range(layer_floor..=shape.scopes.max(layer_floor))
    };

    let mut taken = HashSet::new();
    let layers: Vec<Layer> = (0..layer_count)
        .map(|_| Layer::new(fresh_identifier(rng, &mut taken), random_text(rng)))
        .collect();

    let mut taken = HashSet::new();
    let mut milestones: Vec<Milestone> = Vec::with_capacity(milestone_count);
    for _ in 0..milestone_count {
        let mut m = Milestone::new(
            fresh_identifier(rng, &mut taken),
            rng.random_range(0..=max),
            random_text(rng),
        );
        if rng.random_bool(0.4) {
            let start = rng.random_range(0..max);
            m.span = Some(Span::new(start, rng.random_range(start + 1..=max)));
        }
        let mut result_names = HashSet::new();
        for _ in 0..rng.random_range(0..=shape.results) {
            m.results.push(ResultArtifact::new(
                fresh_identifier(rng, &mut result_names),
                random_text(rng),
            ));
        }
        milestones.push(m);
    }

    let mut keys = HashSet::new();
    let mut scopes: Vec<Scope> = Vec::with_capacity(scope_count);
    for _ in 0..scope_count {
        let layer = layers.choose(rng).unwrap().name.clone();
        let name = loop {
            let candidate = random_identifier(rng);
            if keys.insert((layer.clone(), candidate.clone())) {
                break candidate;
            }
        };
        let mut s = Scope::new(name, layer, random_text(rng));
        let mut targets = HashSet::new();
        for _ in 0..rng.random_range(0..=shape.responsibilities.min(milestone_count)) {
            let target = milestones.choose(rng).unwrap().name.clone();
            if targets.insert(target.clone()) {
                s.responsibilities.push(Responsibility::new(random_kind(rng), target));
            }
        }
        scopes.push(s);
    }

    // every milestone needs an owner
    for m in &milestones {
        let owned = scopes.iter().any(|s| {
            s.responsibilities
                .iter()
                .any(|r| r.as_milestone == m.name && r.kind == ResponsibilityKind::Responsible)
        });
        if owned {
            continue;
        }
        let pick = rng.random_range(0..scopes.len());
        let scope = &mut scopes[pick];
        match scope.responsibilities.iter_mut().find(|r| r.as_milestone == m.name) {
            Some(existing) => existing.kind = ResponsibilityKind::Responsible,
            None => {
                let at = rng.random_range(0..=scope.responsibilities.len());
                scope
                    .responsibilities
                    .insert(at, Responsibility::new(ResponsibilityKind::Responsible, m.name.clone()));
            }
        }
    }

    build_model(header, layers, milestones, scopes)
}

/// Canonical-looking source text of a large valid model, written directly
/// rather than through the printer.
pub fn large_text(rng: &mut Rng, milestones: usize, scopes: usize) -> String {
    let weeks = 520;
    let layers = 5;
    let mut out = String::new();
    writeln!(
        out,
        "process\n  name \"Generated\"\n  version \"1\"\n  timeline weeks {weeks}"
    )
    .unwrap();
    for l in 0..layers {
        writeln!(out, "  layer layer{l} description \"Layer {l}\"").unwrap();
    }
    for m in 0..milestones {
        let pos = rng.random_range(1..weeks);
        writeln!(out, "  milestone m{m} position {pos} span {} {}", pos - 1, pos).unwrap();
        writeln!(out, "    result").unwrap();
        for a in 0..rng.random_range(1..4) {
            writeln!(out, "      artifact a{a} description \"artifact {a} of m{m}\"").unwrap();
        }
        writeln!(out, "    description \"Milestone number {m}\"").unwrap();
    }
    // each scope covers a disjoint slice of owners plus a few random extras
    let kinds = ["cont", "noti"];
    for s in 0..scopes {
        writeln!(out, "  scope s{s} layer layer{} description \"Scope {s}\"", s % layers).unwrap();
        let mut targets = HashSet::new();
        for m in (s..milestones).step_by(scopes.max(1)) {
            targets.insert(m);
            writeln!(out, "    responsibility resp asmilestone \"m{m}\"").unwrap();
        }
        for _ in 0..10 {
            let m = rng.random_range(0..milestones.max(1));
            if milestones > 0 && targets.insert(m) {
                let kind = kinds.choose(rng).unwrap();
                writeln!(out, "    responsibility {kind} asmilestone \"m{m}\"").unwrap();
            }
        }
    }
    out.push_str("end\n");
    out
}
