//! Conditional and lattice transition systems, their projections, and the
//! coalgebra that records upgrades explicitly.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bits::Bits;
use crate::frame::Frame;
use crate::order::{is_valid_identifier, Downset, OrderError, Poset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("the condition poset is empty")]
    NoConditions,
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown condition `{0}`")]
    UnknownCondition(String),
    #[error("transition {src} {action} {dst} is listed twice")]
    DuplicateTransition {
        src: String,
        action: String,
        dst: String,
    },
    #[error("label of {src} {action} {dst} is not downward closed: `{missing}` <= `{member}` is missing")]
    NotDownwardClosed {
        src: String,
        action: String,
        dst: String,
        member: String,
        missing: String,
    },
    #[error("successors of {state} under {action} shrink from `{lower}` to `{upper}`")]
    NotAntitone {
        state: String,
        action: String,
        lower: String,
        upper: String,
    },
}

/// One line of a transition listing: `src action dst : conditions`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: String,
    pub action: String,
    pub dst: String,
    pub conditions: Vec<String>,
}

impl Edge {
    pub fn new<S: AsRef<str>>(src: &str, action: &str, dst: &str, conditions: &[S]) -> Edge {
        Edge {
            src: src.to_string(),
            action: action.to_string(),
            dst: dst.to_string(),
            conditions: conditions.iter().map(|c| c.as_ref().to_string()).collect(),
        }
    }
}

fn carrier<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Poset, ModelError> {
    let names: Vec<String> = names.into_iter().map(|s| s.as_ref().to_string()).collect();
    if let Some(bad) = names.iter().find(|n| !is_valid_identifier(n)) {
        return Err(ModelError::InvalidIdentifier(bad.clone()));
    }
    Ok(Poset::discrete(names)?)
}

fn check_conditions(conditions: &Poset) -> Result<(), ModelError> {
    if conditions.is_empty() {
        return Err(ModelError::NoConditions);
    }
    if let Some(bad) = conditions.names().iter().find(|n| !is_valid_identifier(n)) {
        return Err(ModelError::InvalidIdentifier(bad.clone()));
    }
    Ok(())
}

/// Resolves edge lines to `(src, action, dst, label)` with labels as downsets.
fn resolve_edges(
    states: &Poset,
    actions: &Poset,
    conditions: &Poset,
    edges: impl IntoIterator<Item = Edge>,
    close: bool,
) -> Result<Vec<(usize, usize, usize, Downset)>, ModelError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for e in edges {
        let x = states
            .index_of(&e.src)
            .ok_or_else(|| ModelError::UnknownState(e.src.clone()))?;
        let a = actions
            .index_of(&e.action)
            .ok_or_else(|| ModelError::UnknownAction(e.action.clone()))?;
        let y = states
            .index_of(&e.dst)
            .ok_or_else(|| ModelError::UnknownState(e.dst.clone()))?;
        if !seen.insert((x, a, y)) {
            return Err(ModelError::DuplicateTransition {
                src: e.src,
                action: e.action,
                dst: e.dst,
            });
        }
        let mut set = Bits::empty(conditions.len());
        for c in &e.conditions {
            set.insert(
                conditions
                    .index_of(c)
                    .ok_or_else(|| ModelError::UnknownCondition(c.clone()))?,
            );
        }
        let label = if close {
            Downset(conditions.close_down(&set))
        } else {
            match conditions.check_downward_closed(&set) {
                Ok(()) => Downset(set),
                Err(OrderError::NotDownwardClosed { member, missing }) => {
                    return Err(ModelError::NotDownwardClosed {
                        src: e.src,
                        action: e.action,
                        dst: e.dst,
                        member,
                        missing,
                    })
                }
                Err(other) => return Err(other.into()),
            }
        };
        out.push((x, a, y, label));
    }
    Ok(out)
}

/// A conditional transition system: for each state, action and condition a
/// set of successors, growing as the condition gets smaller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cts {
    states: Poset,
    actions: Poset,
    conditions: Poset,
    /// `succ[x * |A| + a][φ]`.
    succ: Vec<Vec<Bits>>,
}

impl Cts {
    pub fn from_edges<S: AsRef<str>, T: AsRef<str>>(
        states: impl IntoIterator<Item = S>,
        actions: impl IntoIterator<Item = T>,
        conditions: Poset,
        edges: impl IntoIterator<Item = Edge>,
        close: bool,
    ) -> Result<Cts, ModelError> {
        let states = carrier(states)?;
        let actions = carrier(actions)?;
        check_conditions(&conditions)?;
        let resolved = resolve_edges(&states, &actions, &conditions, edges, close)?;
        let (nx, na, np) = (states.len(), actions.len(), conditions.len());
        let mut succ = vec![vec![Bits::empty(nx); np]; nx * na];
        for (x, a, y, label) in resolved {
            for phi in label.iter() {
                succ[x * na + a][phi].insert(y);
            }
        }
        Ok(Cts {
            states,
            actions,
            conditions,
            succ,
        })
    }

    /// Builds from a full successor table `succ[x][a][φ]`, rejecting tables
    /// whose successor sets are not antitone in the condition.
    pub fn from_table(
        states: Poset,
        actions: Poset,
        conditions: Poset,
        table: Vec<Vec<Vec<Bits>>>,
    ) -> Result<Cts, ModelError> {
        check_conditions(&conditions)?;
        let (na, np) = (actions.len(), conditions.len());
        let mut succ = Vec::with_capacity(states.len() * na);
        for (x, per_action) in table.into_iter().enumerate() {
            for (a, per_cond) in per_action.into_iter().enumerate() {
                assert_eq!(per_cond.len(), np, "one successor set per condition");
                for lower in 0..np {
                    for upper in 0..np {
                        if conditions.leq(lower, upper) && !per_cond[upper].is_subset(&per_cond[lower]) {
                            return Err(ModelError::NotAntitone {
                                state: states.name(x).to_string(),
                                action: actions.name(a).to_string(),
                                lower: conditions.name(lower).to_string(),
                                upper: conditions.name(upper).to_string(),
                            });
                        }
                    }
                }
                succ.push(per_cond);
            }
        }
        Ok(Cts {
            states,
            actions,
            conditions,
            succ,
        })
    }

    pub fn states(&self) -> &Poset {
        &self.states
    }

    pub fn actions(&self) -> &Poset {
        &self.actions
    }

    pub fn conditions(&self) -> &Poset {
        &self.conditions
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn num_conditions(&self) -> usize {
        self.conditions.len()
    }

    /// `f(x, a)(φ)`.
    pub fn successors(&self, x: usize, a: usize, phi: usize) -> &Bits {
        &self.succ[x * self.actions.len() + a][phi]
    }

    /// `{φ | y ∈ f(x, a)(φ)}`.
    pub fn label(&self, x: usize, a: usize, y: usize) -> Downset {
        let row = &self.succ[x * self.actions.len() + a];
        Downset(Bits::from_indices(
            self.conditions.len(),
            (0..self.conditions.len()).filter(|&phi| row[phi].contains(y)),
        ))
    }

    /// Every transition with a non-empty label, in index order.
    pub fn edges(&self) -> Vec<(usize, usize, usize, Downset)> {
        let mut out = Vec::new();
        for x in 0..self.num_states() {
            for a in 0..self.num_actions() {
                for y in 0..self.num_states() {
                    let l = self.label(x, a, y);
                    if !l.is_empty() {
                        out.push((x, a, y, l));
                    }
                }
            }
        }
        out
    }

    pub fn state(&self, name: &str) -> Result<usize, ModelError> {
        self.states
            .index_of(name)
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn action(&self, name: &str) -> Result<usize, ModelError> {
        self.actions
            .index_of(name)
            .ok_or_else(|| ModelError::UnknownAction(name.to_string()))
    }

    pub fn condition(&self, name: &str) -> Result<usize, ModelError> {
        self.conditions
            .index_of(name)
            .ok_or_else(|| ModelError::UnknownCondition(name.to_string()))
    }
}

/// A lattice transition system over the frame of downsets of a condition poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lats {
    states: Poset,
    actions: Poset,
    frame: Frame,
    /// `g[(x * |A| + a) * |X| + y]`.
    g: Vec<Downset>,
}

impl Lats {
    pub fn from_edges<S: AsRef<str>, T: AsRef<str>>(
        states: impl IntoIterator<Item = S>,
        actions: impl IntoIterator<Item = T>,
        frame: Frame,
        edges: impl IntoIterator<Item = Edge>,
        close: bool,
    ) -> Result<Lats, ModelError> {
        let states = carrier(states)?;
        let actions = carrier(actions)?;
        check_conditions(frame.base())?;
        let resolved = resolve_edges(&states, &actions, frame.base(), edges, close)?;
        let (nx, na) = (states.len(), actions.len());
        let mut g = vec![frame.bottom(); nx * na * nx];
        for (x, a, y, label) in resolved {
            g[(x * na + a) * nx + y] = label;
        }
        Ok(Lats {
            states,
            actions,
            frame,
            g,
        })
    }

    pub fn states(&self) -> &Poset {
        &self.states
    }

    pub fn actions(&self) -> &Poset {
        &self.actions
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    /// `g(x, a, y)`.
    pub fn weight(&self, x: usize, a: usize, y: usize) -> &Downset {
        let (nx, na) = (self.states.len(), self.actions.len());
        &self.g[(x * na + a) * nx + y]
    }

    pub fn edges(&self) -> Vec<(usize, usize, usize, Downset)> {
        let mut out = Vec::new();
        for x in 0..self.num_states() {
            for a in 0..self.num_actions() {
                for y in 0..self.num_states() {
                    let w = self.weight(x, a, y);
                    if !w.is_empty() {
                        out.push((x, a, y, w.clone()));
                    }
                }
            }
        }
        out
    }
}

pub fn cts_to_lats(m: &Cts) -> Lats {
    let (nx, na) = (m.num_states(), m.num_actions());
    let mut g = Vec::with_capacity(nx * na * nx);
    for x in 0..nx {
        for a in 0..na {
            for y in 0..nx {
                g.push(m.label(x, a, y));
            }
        }
    }
    Lats {
        states: m.states.clone(),
        actions: m.actions.clone(),
        frame: Frame::new(m.conditions.clone()),
        g,
    }
}

/// Conditions become the join-irreducibles of the frame, each named after the
/// base element generating it.
pub fn lats_to_cts(m: &Lats) -> Cts {
    let conditions = m.frame.join_irreducibles();
    let base = m.frame.base();
    let (nx, na, np) = (m.num_states(), m.num_actions(), conditions.len());
    let mut succ = vec![vec![Bits::empty(nx); np]; nx * na];
    for x in 0..nx {
        for a in 0..na {
            for y in 0..nx {
                let w = m.weight(x, a, y);
                for (j, row) in succ[x * na + a].iter_mut().enumerate() {
                    let generator = base.index_of(conditions.name(j)).expect("same names");
                    if base.below(generator).is_subset(w.bits()) {
                        row.insert(y);
                    }
                }
            }
        }
    }
    Cts {
        states: m.states.clone(),
        actions: m.actions.clone(),
        conditions,
        succ,
    }
}

/// A plain labelled transition system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    pub states: Poset,
    pub actions: Poset,
    pub edges: BTreeSet<(usize, usize, usize)>,
}

impl Lts {
    pub fn successors(&self, x: usize, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .range((x, a, 0)..(x, a + 1, 0))
            .map(|&(_, _, y)| y)
    }

    pub fn edge_names(&self) -> Vec<(String, String, String)> {
        self.edges
            .iter()
            .map(|&(x, a, y)| {
                (
                    self.states.name(x).to_string(),
                    self.actions.name(a).to_string(),
                    self.states.name(y).to_string(),
                )
            })
            .collect()
    }
}

/// The system running under the fixed condition `phi`.
pub fn project(m: &Cts, phi: &str) -> Result<Lts, ModelError> {
    let phi = m.condition(phi)?;
    Ok(project_at(m, phi))
}

pub fn project_at(m: &Cts, phi: usize) -> Lts {
    let mut edges = BTreeSet::new();
    for x in 0..m.num_states() {
        for a in 0..m.num_actions() {
            for y in m.successors(x, a, phi).iter() {
                edges.insert((x, a, y));
            }
        }
    }
    Lts {
        states: m.states.clone(),
        actions: m.actions.clone(),
        edges,
    }
}

/// Successor pairs `(state, condition)` reached from `(x, φ)` under each action,
/// where the condition records the version the step was taken in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpgradeCoalgebra {
    states: Vec<String>,
    actions: Poset,
    conditions: Poset,
    /// `alpha[(x * |Φ| + φ) * |A| + a]`, sorted and without duplicates.
    alpha: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoalgebraError {
    #[error("successors of ({state}, {condition}) under {action} are not contained in those at `{larger}`")]
    NotMonotone {
        state: String,
        action: String,
        condition: String,
        larger: String,
    },
    #[error("({state}, {condition}) under {action} reaches version `{version}` which is not below it")]
    VersionAboveAmbient {
        state: String,
        action: String,
        condition: String,
        version: String,
    },
}

impl UpgradeCoalgebra {
    /// `states` may be in any order; indices refer to positions in it.
    pub fn new(
        states: Vec<String>,
        actions: Poset,
        conditions: Poset,
        mut alpha: Vec<Vec<(usize, usize)>>,
    ) -> Self {
        assert_eq!(alpha.len(), states.len() * conditions.len() * actions.len());
        for entry in &mut alpha {
            entry.sort_unstable();
            entry.dedup();
        }
        UpgradeCoalgebra {
            states,
            actions,
            conditions,
            alpha,
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn actions(&self) -> &Poset {
        &self.actions
    }

    pub fn conditions(&self) -> &Poset {
        &self.conditions
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    fn slot(&self, x: usize, phi: usize, a: usize) -> usize {
        (x * self.conditions.len() + phi) * self.actions.len() + a
    }

    pub fn alpha(&self, x: usize, phi: usize, a: usize) -> &[(usize, usize)] {
        &self.alpha[self.slot(x, phi, a)]
    }

    /// `α(x, φ)` as one successor set per action.
    pub fn alpha_all(&self, x: usize, phi: usize) -> Vec<Vec<(usize, usize)>> {
        (0..self.actions.len())
            .map(|a| self.alpha(x, phi, a).to_vec())
            .collect()
    }

    pub fn set_alpha(&mut self, x: usize, phi: usize, a: usize, mut succ: Vec<(usize, usize)>) {
        succ.sort_unstable();
        succ.dedup();
        let slot = self.slot(x, phi, a);
        self.alpha[slot] = succ;
    }

    /// Checks monotonicity in the ambient condition and that versions never
    /// exceed it.
    pub fn validate(&self) -> Result<(), CoalgebraError> {
        let c = &self.conditions;
        for x in 0..self.states.len() {
            for phi in 0..c.len() {
                for a in 0..self.actions.len() {
                    let here = self.alpha(x, phi, a);
                    if let Some(&(_, v)) = here.iter().find(|&&(_, v)| !c.leq(v, phi)) {
                        return Err(CoalgebraError::VersionAboveAmbient {
                            state: self.states[x].clone(),
                            action: self.actions.name(a).to_string(),
                            condition: c.name(phi).to_string(),
                            version: c.name(v).to_string(),
                        });
                    }
                    for psi in 0..c.len() {
                        if c.leq(phi, psi) {
                            let there = self.alpha(x, psi, a);
                            if !here.iter().all(|p| there.binary_search(p).is_ok()) {
                                return Err(CoalgebraError::NotMonotone {
                                    state: self.states[x].clone(),
                                    action: self.actions.name(a).to_string(),
                                    condition: c.name(phi).to_string(),
                                    larger: c.name(psi).to_string(),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `α(x, φ, a) = {(x', φ') | x' ∈ f(x, a)(φ'), φ' ≤ φ}`.
pub fn coalgebra_encode(m: &Cts) -> UpgradeCoalgebra {
    let c = m.conditions();
    let mut alpha = Vec::with_capacity(m.num_states() * c.len() * m.num_actions());
    for x in 0..m.num_states() {
        for phi in 0..c.len() {
            for a in 0..m.num_actions() {
                let mut succ = Vec::new();
                for version in c.below(phi).iter() {
                    for y in m.successors(x, a, version).iter() {
                        succ.push((y, version));
                    }
                }
                alpha.push(succ);
            }
        }
    }
    UpgradeCoalgebra::new(m.states().names().to_vec(), m.actions().clone(), c.clone(), alpha)
}

/// Applies a Kleisli map `(x, φ) ↦ f(x)(φ)` to a successor value, per action:
/// `{(f(x')(φ'), φ') | (x', φ') ∈ p(a)}`.
pub fn v_hat_apply<T: Ord>(
    f: impl Fn(usize, usize) -> T,
    p: &[Vec<(usize, usize)>],
) -> Vec<BTreeSet<(T, usize)>> {
    p.iter()
        .map(|succ| succ.iter().map(|&(y, v)| (f(y, v), v)).collect())
        .collect()
}

/// Keeps the pairs whose condition is exactly `phi`.
pub fn version_filter<T: Clone>(c: &[(T, usize)], phi: usize) -> Vec<(T, usize)> {
    c.iter().filter(|(_, v)| *v == phi).cloned().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Filtering at `ψ ≤ φ` differs between ambient `φ` and ambient `ψ`.
    Restriction,
    /// Filtering at `ψ` not below `φ` is non-empty.
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpgradeViolation {
    pub state: usize,
    pub action: usize,
    pub ambient: usize,
    pub filter: usize,
    pub kind: ViolationKind,
}

/// Returns the least violation in the order state, action, ambient condition,
/// filter condition.
pub fn check_upgrade_preserving(c: &UpgradeCoalgebra) -> Result<(), UpgradeViolation> {
    let conds = c.conditions();
    for x in 0..c.num_states() {
        for a in 0..c.actions().len() {
            for phi in 0..conds.len() {
                for psi in 0..conds.len() {
                    let filtered = version_filter(c.alpha(x, phi, a), psi);
                    let (ok, kind) = if conds.leq(psi, phi) {
                        (
                            filtered == version_filter(c.alpha(x, psi, a), psi),
                            ViolationKind::Restriction,
                        )
                    } else {
                        (filtered.is_empty(), ViolationKind::Incomparable)
                    };
                    if !ok {
                        return Err(UpgradeViolation {
                            state: x,
                            action: a,
                            ambient: phi,
                            filter: psi,
                            kind,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}
