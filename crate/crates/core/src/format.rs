//! The line-oriented model file format.
//!
//! ```text
//! kind: cts
//! [conditions]
//! phi
//! phi'
//! phi' <= phi
//! [states]
//! x y
//! [actions]
//! a
//! [transitions]
//! x a y : phi'
//! ```
//!
//! `#` starts a comment. The same syntax describes a lattice transition system
//! when the header reads `kind: lats`; its edge labels are then elements of the
//! frame of downsets of the conditions.

use thiserror::Error;

use crate::frame::Frame;
use crate::models::{Cts, Edge, Lats, ModelError};
use crate::order::{OrderError, Poset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<ModelError> },
    #[error(transparent)]
    Model(Box<ModelError>),
}

impl From<ModelError> for FormatError {
    fn from(e: ModelError) -> Self {
        FormatError::Model(Box::new(e))
    }
}

impl FormatError {
    pub fn line(&self) -> Option<usize> {
        match self {
            FormatError::Syntax { line, .. } | FormatError::AtLine { line, .. } => Some(*line),
            FormatError::Model(_) => None,
        }
    }

    pub fn model_error(&self) -> Option<&ModelError> {
        match self {
            FormatError::AtLine { source, .. } | FormatError::Model(source) => Some(source.as_ref()),
            FormatError::Syntax { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Cts,
    Lats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Cts(Cts),
    Lats(Lats),
}

impl Model {
    pub fn kind(&self) -> Kind {
        match self {
            Model::Cts(_) => Kind::Cts,
            Model::Lats(_) => Kind::Lats,
        }
    }

    /// The conditional form, converting when necessary.
    pub fn to_cts(&self) -> Cts {
        match self {
            Model::Cts(m) => m.clone(),
            Model::Lats(m) => crate::models::lats_to_cts(m),
        }
    }

    pub fn to_lats(&self) -> Lats {
        match self {
            Model::Cts(m) => crate::models::cts_to_lats(m),
            Model::Lats(m) => m.clone(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Conditions,
    States,
    Actions,
    Transitions,
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses a model. With `close`, edge labels are replaced by their downward
/// closure instead of being rejected.
pub fn parse_model(text: &str, close: bool) -> Result<Model, FormatError> {
    let mut kind = None;
    let mut section = Section::Preamble;
    let mut conditions: Vec<(usize, String)> = Vec::new();
    let mut order: Vec<(usize, String, String)> = Vec::new();
    let mut states: Vec<(usize, String)> = Vec::new();
    let mut actions: Vec<(usize, String)> = Vec::new();
    let mut edges: Vec<(usize, Edge)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("kind:") {
            if kind.is_some() {
                return Err(syntax(line, "duplicate kind header"));
            }
            kind = Some(match rest.trim() {
                "cts" => Kind::Cts,
                "lats" => Kind::Lats,
                other => return Err(syntax(line, format!("unknown kind `{other}`"))),
            });
            continue;
        }
        if content.starts_with('[') {
            section = match content {
                "[conditions]" => Section::Conditions,
                "[states]" => Section::States,
                "[actions]" => Section::Actions,
                "[transitions]" => Section::Transitions,
                other => return Err(syntax(line, format!("unknown section `{other}`"))),
            };
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match section {
            Section::Preamble => return Err(syntax(line, "content outside of any section")),
            Section::Conditions => {
                if tokens.contains(&"<=") {
                    match tokens.as_slice() {
                        [lo, "<=", hi] => order.push((line, lo.to_string(), hi.to_string())),
                        _ => return Err(syntax(line, "expected `lower <= upper`")),
                    }
                } else {
                    conditions.extend(tokens.iter().map(|t| (line, t.to_string())));
                }
            }
            Section::States => states.extend(tokens.iter().map(|t| (line, t.to_string()))),
            Section::Actions => actions.extend(tokens.iter().map(|t| (line, t.to_string()))),
            Section::Transitions => {
                let (head, tail) = content
                    .split_once(':')
                    .ok_or_else(|| syntax(line, "expected `src action dst : conditions`"))?;
                let head: Vec<&str> = head.split_whitespace().collect();
                let [src, action, dst] = head.as_slice() else {
                    return Err(syntax(line, "expected `src action dst : conditions`"));
                };
                let label: Vec<&str> = tail.split_whitespace().collect();
                edges.push((line, Edge::new(src, action, dst, &label)));
            }
        }
    }

    let kind = kind.ok_or_else(|| syntax(1, "missing `kind: cts` or `kind: lats` header"))?;
    let line_of = |names: &[(usize, String)], name: &str| {
        names.iter().find(|(_, n)| n == name).map(|(l, _)| *l)
    };
    // Carrier errors are attributed to the line introducing the culprit.
    for list in [&conditions, &states, &actions] {
        let mut seen = std::collections::HashSet::new();
        for (line, name) in list.iter() {
            if !crate::order::is_valid_identifier(name) {
                return Err(FormatError::AtLine {
                    line: *line,
                    source: Box::new(ModelError::InvalidIdentifier(name.clone())),
                });
            }
            if !seen.insert(name.as_str()) {
                return Err(FormatError::AtLine {
                    line: *line,
                    source: Box::new(ModelError::Order(OrderError::DuplicateElement(name.clone()))),
                });
            }
        }
    }
    for (line, lo, hi) in &order {
        for name in [lo, hi] {
            if line_of(&conditions, name).is_none() {
                return Err(FormatError::AtLine {
                    line: *line,
                    source: Box::new(ModelError::UnknownCondition(name.clone())),
                });
            }
        }
    }
    let poset = Poset::new(
        conditions.iter().map(|(_, n)| n.as_str()),
        order.iter().map(|(_, lo, hi)| (lo.as_str(), hi.as_str())),
    )
    .map_err(|e| match &e {
        OrderError::AntisymmetryViolation { .. } => {
            // The line closing the first cycle.
            let line = (1..=order.len())
                .find(|&k| {
                    Poset::new(
                        conditions.iter().map(|(_, n)| n.as_str()),
                        order[..k].iter().map(|(_, lo, hi)| (lo.as_str(), hi.as_str())),
                    )
                    .is_err()
                })
                .map(|k| order[k - 1].0)
                .unwrap_or(1);
            FormatError::AtLine {
                line,
                source: Box::new(ModelError::Order(e)),
            }
        }
        _ => ModelError::Order(e).into(),
    })?;

    // Edge errors are located by re-validating edges one at a time.
    let state_names: Vec<&str> = states.iter().map(|(_, n)| n.as_str()).collect();
    let action_names: Vec<&str> = actions.iter().map(|(_, n)| n.as_str()).collect();
    let plain: Vec<Edge> = edges.iter().map(|(_, e)| e.clone()).collect();
    let built = match kind {
        Kind::Cts => Cts::from_edges(&state_names, &action_names, poset.clone(), plain, close).map(Model::Cts),
        Kind::Lats => Lats::from_edges(&state_names, &action_names, Frame::new(poset.clone()), plain, close)
            .map(Model::Lats),
    };
    built.map_err(|err| {
        let mut prefix = Vec::new();
        for (line, e) in &edges {
            prefix.push(e.clone());
            let attempt = Cts::from_edges(&state_names, &action_names, poset.clone(), prefix.clone(), close);
            if attempt.is_err() {
                return FormatError::AtLine {
                    line: *line,
                    source: Box::new(err),
                };
            }
        }
        err.into()
    })
}

fn write_header(out: &mut String, kind: &str, conditions: &Poset, states: &Poset, actions: &Poset) {
    out.push_str(&format!("kind: {kind}\n\n[conditions]\n"));
    for name in conditions.names() {
        out.push_str(name);
        out.push('\n');
    }
    for (lo, hi) in conditions.hasse_pairs() {
        out.push_str(&format!("{} <= {}\n", conditions.name(lo), conditions.name(hi)));
    }
    out.push_str("\n[states]\n");
    out.push_str(&states.names().join(" "));
    out.push_str("\n\n[actions]\n");
    out.push_str(&actions.names().join(" "));
    out.push_str("\n\n[transitions]\n");
}

fn write_edges(
    out: &mut String,
    states: &Poset,
    actions: &Poset,
    conditions: &Poset,
    edges: Vec<(usize, usize, usize, crate::order::Downset)>,
) {
    for (x, a, y, label) in edges {
        let conds: Vec<&str> = conditions.names_of(label.bits()).collect();
        out.push_str(&format!(
            "{} {} {} : {}\n",
            states.name(x),
            actions.name(a),
            states.name(y),
            conds.join(" ")
        ));
    }
}

/// Canonical text of a conditional transition system.
pub fn serialise_cts(m: &Cts) -> String {
    let mut out = String::new();
    write_header(&mut out, "cts", m.conditions(), m.states(), m.actions());
    write_edges(&mut out, m.states(), m.actions(), m.conditions(), m.edges());
    out
}

pub fn serialise_lats(m: &Lats) -> String {
    let mut out = String::new();
    let base = m.frame().base();
    write_header(&mut out, "lats", base, m.states(), m.actions());
    write_edges(&mut out, m.states(), m.actions(), base, m.edges());
    out
}

pub fn serialise_model(m: &Model) -> String {
    match m {
        Model::Cts(m) => serialise_cts(m),
        Model::Lats(m) => serialise_lats(m),
    }
}
