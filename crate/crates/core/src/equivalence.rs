//! Behavioural equivalences: per-condition bisimilarity, conditional
//! bisimulations and congruences, and the lattice-valued fixed point.

use std::collections::{BTreeSet, HashMap};

use crate::bits::Bits;
use crate::frame::implies_unchecked;
use crate::models::{project_at, Cts, Lats, Lts};
use crate::order::{Downset, Poset};

/// A partition of `0..n` whose classes are listed by least member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl Partition {
    /// Groups indices with equal keys.
    pub fn from_keys<K: std::hash::Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Partition {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let mut class_of = Vec::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, k) in keys.into_iter().enumerate() {
            let next = ids.len();
            let c = *ids.entry(k).or_insert(next);
            if c == classes.len() {
                classes.push(Vec::new());
            }
            classes[c].push(i);
            class_of.push(c);
        }
        Partition { class_of, classes }
    }

    pub fn single(n: usize) -> Partition {
        Partition::from_keys(std::iter::repeat_n((), n))
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn named(&self, names: &Poset) -> Vec<Vec<String>> {
        self.classes
            .iter()
            .map(|c| c.iter().map(|&i| names.name(i).to_string()).collect())
            .collect()
    }
}

/// Greatest strong bisimulation by signature refinement.
pub fn lts_bisimilarity(m: &Lts) -> Partition {
    let n = m.states.len();
    let mut current = Partition::single(n);
    loop {
        let next = Partition::from_keys((0..n).map(|x| {
            let sig: BTreeSet<(usize, usize)> = m
                .edges
                .range((x, 0, 0)..(x + 1, 0, 0))
                .map(|&(_, a, y)| (a, current.class_of[y]))
                .collect();
            (current.class_of[x], sig)
        }));
        if next.len() == current.len() {
            return next;
        }
        current = next;
    }
}

/// `R: X × X → O(Φ)`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeRelation {
    n: usize,
    table: Vec<Downset>,
}

impl LatticeRelation {
    pub fn constant(n: usize, value: Downset) -> Self {
        LatticeRelation {
            n,
            table: vec![value; n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Downset) -> Self {
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(f(x, y));
            }
        }
        LatticeRelation { n, table }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> &Downset {
        &self.table[x * self.n + y]
    }

    pub fn set(&mut self, x: usize, y: usize, value: Downset) {
        self.table[x * self.n + y] = value;
    }

    /// Pointwise inclusion.
    pub fn leq(&self, other: &LatticeRelation) -> bool {
        self.table.iter().zip(&other.table).all(|(a, b)| a.is_subset(b))
    }

    /// `{(x, y) | φ ∈ R(x, y)}` for every `φ`.
    pub fn slices(&self, conditions: usize) -> ConditionFamily {
        ConditionFamily::from_fn(self.n, conditions, |phi, x, y| self.get(x, y).contains(phi))
    }
}

/// One relation on states per condition; `rows[φ][x]` holds the `y` with
/// `x R_φ y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConditionFamily {
    rows: Vec<Vec<Bits>>,
}

impl ConditionFamily {
    pub fn from_fn(n: usize, conditions: usize, f: impl Fn(usize, usize, usize) -> bool) -> Self {
        let rows = (0..conditions)
            .map(|phi| {
                (0..n)
                    .map(|x| Bits::from_indices(n, (0..n).filter(|&y| f(phi, x, y))))
                    .collect()
            })
            .collect();
        ConditionFamily { rows }
    }

    /// Builds from pairs per condition.
    pub fn from_pairs(n: usize, per_condition: &[Vec<(usize, usize)>]) -> Self {
        let mut rows = vec![vec![Bits::empty(n); n]; per_condition.len()];
        for (phi, pairs) in per_condition.iter().enumerate() {
            for &(x, y) in pairs {
                rows[phi][x].insert(y);
            }
        }
        ConditionFamily { rows }
    }

    pub fn identity(n: usize, conditions: usize) -> Self {
        ConditionFamily::from_fn(n, conditions, |_, x, y| x == y)
    }

    pub fn num_conditions(&self) -> usize {
        self.rows.len()
    }

    pub fn num_states(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn related(&self, phi: usize, x: usize, y: usize) -> bool {
        self.rows[phi][x].contains(y)
    }

    pub fn relation(&self, phi: usize) -> &[Bits] {
        &self.rows[phi]
    }

    /// `R(x, y) = {φ | x R_φ y}`, assuming the family is antitone.
    pub fn to_lattice_relation(&self, conditions: &Poset) -> LatticeRelation {
        let n = self.num_states();
        LatticeRelation::from_fn(n, |x, y| {
            let set = Bits::from_indices(conditions.len(), (0..conditions.len()).filter(|&p| self.related(p, x, y)));
            conditions.downset(set).expect("antitone families give downsets")
        })
    }

    /// Pairwise union.
    pub fn union(&self, other: &ConditionFamily) -> ConditionFamily {
        ConditionFamily {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(p, q)| p.union(q)).collect())
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &ConditionFamily) -> bool {
        self.rows
            .iter()
            .zip(&other.rows)
            .all(|(a, b)| a.iter().zip(b).all(|(p, q)| p.is_subset(q)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BisimViolation {
    /// `x R_φ y` but not `x R_smaller y` although `smaller <= φ`.
    NotAntitone {
        x: usize,
        y: usize,
        condition: usize,
        smaller: usize,
    },
    /// The move `from -a-> successor` under `condition` has no matching move.
    Transfer {
        x: usize,
        y: usize,
        condition: usize,
        action: usize,
        successor: usize,
        side: Side,
    },
    NotEquivalence { condition: usize },
    /// `x` and `y` are related under `condition` but their successor classes
    /// differ.
    Unbalanced { x: usize, y: usize, condition: usize },
}

fn antitone_witness(m: &Cts, fam: &ConditionFamily) -> Option<BisimViolation> {
    let c = m.conditions();
    let n = m.num_states();
    for x in 0..n {
        for y in 0..n {
            for phi in 0..c.len() {
                for smaller in 0..c.len() {
                    if c.leq(smaller, phi) && fam.related(phi, x, y) && !fam.related(smaller, x, y) {
                        return Some(BisimViolation::NotAntitone {
                            x,
                            y,
                            condition: phi,
                            smaller,
                        });
                    }
                }
            }
        }
    }
    None
}

fn transfer_witness(m: &Cts, rel: &[Bits], phi: usize, x: usize, y: usize) -> Option<BisimViolation> {
    for a in 0..m.num_actions() {
        let (sx, sy) = (m.successors(x, a, phi), m.successors(y, a, phi));
        for x2 in sx.iter() {
            if !sy.iter().any(|y2| rel[x2].contains(y2)) {
                return Some(BisimViolation::Transfer {
                    x,
                    y,
                    condition: phi,
                    action: a,
                    successor: x2,
                    side: Side::Left,
                });
            }
        }
        for y2 in sy.iter() {
            if !sx.iter().any(|x2| rel[x2].contains(y2)) {
                return Some(BisimViolation::Transfer {
                    x,
                    y,
                    condition: phi,
                    action: a,
                    successor: y2,
                    side: Side::Right,
                });
            }
        }
    }
    None
}

/// Checks that the family is antitone and that each member is a bisimulation
/// on the corresponding projection.
pub fn is_conditional_bisimulation(m: &Cts, fam: &ConditionFamily) -> Result<(), BisimViolation> {
    if let Some(v) = antitone_witness(m, fam) {
        return Err(v);
    }
    for phi in 0..m.num_conditions() {
        let rel = fam.relation(phi);
        for x in 0..m.num_states() {
            for y in rel[x].iter() {
                if let Some(v) = transfer_witness(m, rel, phi, x, y) {
                    return Err(v);
                }
            }
        }
    }
    Ok(())
}

fn is_equivalence(rel: &[Bits]) -> bool {
    let n = rel.len();
    (0..n).all(|x| rel[x].contains(x))
        && (0..n).all(|x| rel[x].iter().all(|y| rel[y].contains(x)))
        && (0..n).all(|x| rel[x].iter().all(|y| rel[y].is_subset(&rel[x])))
}

/// Checks that each member is an equivalence whose classes agree on the
/// classes of their successors under that condition, and that the family is
/// antitone.
pub fn is_conditional_congruence(m: &Cts, fam: &ConditionFamily) -> Result<(), BisimViolation> {
    for phi in 0..m.num_conditions() {
        if !is_equivalence(fam.relation(phi)) {
            return Err(BisimViolation::NotEquivalence { condition: phi });
        }
    }
    if let Some(v) = antitone_witness(m, fam) {
        return Err(v);
    }
    for phi in 0..m.num_conditions() {
        let rel = fam.relation(phi);
        let kappa: Vec<usize> = (0..m.num_states())
            .map(|x| rel[x].iter().next().expect("reflexive"))
            .collect();
        let value = |x: usize| -> Vec<BTreeSet<usize>> {
            (0..m.num_actions())
                .map(|a| m.successors(x, a, phi).iter().map(|y| kappa[y]).collect())
                .collect()
        };
        for (x, row) in rel.iter().enumerate() {
            for y in row.iter() {
                if value(x) != value(y) {
                    return Err(BisimViolation::Unbalanced { x, y, condition: phi });
                }
            }
        }
    }
    Ok(())
}

/// Greatest conditional bisimulation by downward iteration from the full
/// family. Independent of the lattice formulation.
pub fn greatest_conditional_bisimilarity_naive(m: &Cts) -> ConditionFamily {
    naive_with_rounds(m).0
}

/// The naive greatest bisimulation together with the number of rounds that
/// removed at least one pair.
pub fn naive_with_rounds(m: &Cts) -> (ConditionFamily, usize) {
    let (n, np) = (m.num_states(), m.num_conditions());
    let c = m.conditions();
    let mut fam = ConditionFamily::from_fn(n, np, |_, _, _| true);
    let mut rounds = 0;
    loop {
        let next = ConditionFamily::from_fn(n, np, |phi, x, y| {
            fam.related(phi, x, y)
                && (0..np).all(|s| !c.leq(s, phi) || fam.related(s, x, y))
                && transfer_witness(m, fam.relation(phi), phi, x, y).is_none()
        });
        if next == fam {
            return (fam, rounds);
        }
        fam = next;
        rounds += 1;
    }
}

/// Result of the lattice fixed point.
#[derive(Clone, Debug)]
pub struct FixpointResult {
    pub relation: LatticeRelation,
    /// The first `n` with `R_n = R_{n+1}`.
    pub iterations: usize,
    /// `R_0, ..., R_n`.
    pub trace: Vec<LatticeRelation>,
}

fn fixpoint_step(m: &Lats, r: &LatticeRelation) -> LatticeRelation {
    let (n, na) = (m.num_states(), m.num_actions());
    let base = m.frame().base();
    let top = m.frame().top();
    let bottom = m.frame().bottom();
    LatticeRelation::from_fn(n, |x, y| {
        let mut acc = top.clone();
        for a in 0..na {
            for x2 in 0..n {
                let mut matched = bottom.clone();
                for y2 in 0..n {
                    matched = matched.union(&m.weight(y, a, y2).intersection(r.get(x2, y2)));
                }
                acc = acc.intersection(&implies_unchecked(base, m.weight(x, a, x2), &matched));
            }
            for y2 in 0..n {
                let mut matched = bottom.clone();
                for x2 in 0..n {
                    matched = matched.union(&m.weight(x, a, x2).intersection(r.get(x2, y2)));
                }
                acc = acc.intersection(&implies_unchecked(base, m.weight(y, a, y2), &matched));
            }
        }
        acc
    })
}

/// Iterates `R_{i+1} = F1(R_i) ⊓ F2(R_i)` from `R_0 = ⊤` until two successive
/// relations coincide.
pub fn lattice_bisim_fixpoint(m: &Lats) -> FixpointResult {
    let mut current = LatticeRelation::constant(m.num_states(), m.frame().top());
    let mut trace = vec![current.clone()];
    loop {
        let next = fixpoint_step(m, &current);
        if next == current {
            return FixpointResult {
                relation: current,
                iterations: trace.len() - 1,
                trace,
            };
        }
        trace.push(next.clone());
        current = next;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeViolation {
    pub x: usize,
    pub y: usize,
    pub action: usize,
    pub successor: usize,
    /// Index of the join-irreducible, that is the generating condition.
    pub irreducible: usize,
    pub side: Side,
}

/// Transfer check over join-irreducibles `↓φ ⊆ R(x, y)`; reports the least
/// witness in the order `x, y, action, successor, φ`.
pub fn is_lattice_bisimulation(m: &Lats, r: &LatticeRelation) -> Result<(), LatticeViolation> {
    let base = m.frame().base();
    let n = m.num_states();
    let steps = |from: usize, a: usize, to: usize, phi: usize| base.below(phi).is_subset(m.weight(from, a, to).bits());
    let inside = |phi: usize, x: usize, y: usize| base.below(phi).is_subset(r.get(x, y).bits());
    for x in 0..n {
        for y in 0..n {
            for a in 0..m.num_actions() {
                for x2 in 0..n {
                    for phi in 0..base.len() {
                        if inside(phi, x, y)
                            && steps(x, a, x2, phi)
                            && !(0..n).any(|y2| steps(y, a, y2, phi) && inside(phi, x2, y2))
                        {
                            return Err(LatticeViolation {
                                x,
                                y,
                                action: a,
                                successor: x2,
                                irreducible: phi,
                                side: Side::Left,
                            });
                        }
                        if inside(phi, x, y)
                            && steps(y, a, x2, phi)
                            && !(0..n).any(|y2| steps(x, a, y2, phi) && inside(phi, y2, x2))
                        {
                            return Err(LatticeViolation {
                                x,
                                y,
                                action: a,
                                successor: x2,
                                irreducible: phi,
                                side: Side::Right,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Per-condition bisimilarity: `R_φ` is plain bisimilarity on the projection.
pub fn per_condition_bisimilarity(m: &Cts) -> ConditionFamily {
    let parts: Vec<Partition> = (0..m.num_conditions())
        .map(|phi| lts_bisimilarity(&project_at(m, phi)))
        .collect();
    ConditionFamily::from_fn(m.num_states(), m.num_conditions(), |phi, x, y| parts[phi].same(x, y))
}
