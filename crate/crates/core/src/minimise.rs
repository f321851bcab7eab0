//! Minimisation along the final chain of the upgrade coalgebra.
//!
//! Stage `i` assigns every pair `(x, φ)` a behaviour term: `•` at stage 0, and
//! at stage `i + 1` the successor set `{(d_i(x', φ'), φ') | (x', φ') ∈ α(x, φ, a)}`
//! per action. Terms are hash-consed so that equal behaviours share an id.
//! The chain stops once the kernel of stage `n + 1` equals that of stage `n`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::bits::Bits;
use crate::equivalence::{lattice_bisim_fixpoint, LatticeRelation, Partition};
use crate::frame::Frame;
use crate::models::{coalgebra_encode, cts_to_lats, Cts, UpgradeCoalgebra};
use crate::monad::StarMap;
use crate::order::{Downset, Poset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinimiseError {
    #[error("stage {stage}: agreement of `{x}` and `{y}` holds at `{member}` but not at `{missing}` below it")]
    NotDownwardClosed {
        stage: usize,
        x: String,
        y: String,
        member: String,
        missing: String,
    },
}

pub type TermId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Term {
    Final,
    /// Per action, sorted pairs of successor term and version.
    Node(Vec<Vec<(TermId, usize)>>),
}

/// Hash-consing store for behaviour terms.
#[derive(Default, Debug, Clone)]
pub struct Interner {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
    ranks: Vec<usize>,
}

impl Interner {
    pub fn new() -> Self {
        Interner::default()
    }

    fn intern(&mut self, term: Term) -> TermId {
        if let Some(&id) = self.ids.get(&term) {
            return id;
        }
        let rank = match &term {
            Term::Final => 0,
            Term::Node(per_action) => {
                1 + per_action
                    .iter()
                    .flatten()
                    .map(|&(t, _)| self.ranks[t])
                    .max()
                    .unwrap_or(0)
            }
        };
        let id = self.terms.len();
        self.terms.push(term.clone());
        self.ranks.push(rank);
        self.ids.insert(term, id);
        id
    }

    pub fn final_token(&mut self) -> TermId {
        self.intern(Term::Final)
    }

    pub fn node(&mut self, per_action: Vec<Vec<(TermId, usize)>>) -> TermId {
        let per_action = per_action
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        self.intern(Term::Node(per_action))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn rank(&self, t: TermId) -> usize {
        self.ranks[t]
    }

    /// Successor pairs of `t` under action `a`; empty for `•`.
    pub fn successors(&self, t: TermId, a: usize) -> &[(TermId, usize)] {
        match &self.terms[t] {
            Term::Final => &[],
            Term::Node(per_action) => &per_action[a],
        }
    }

    /// Renders `•`, `∅` and `{(t,φ), ...}`. Elements are listed by rank, then
    /// size, then rendering, then condition in display order. With several
    /// actions the sets are shown as `<a: S, b: S>`.
    pub fn render(&self, t: TermId, conditions: &Poset, actions: &Poset) -> String {
        let position: Vec<usize> = {
            let order = conditions.display_order();
            let mut pos = vec![0; order.len()];
            for (i, &p) in order.iter().enumerate() {
                pos[p] = i;
            }
            pos
        };
        let mut memo = HashMap::new();
        self.render_with(t, conditions, actions, &position, &mut memo)
    }

    fn render_with(
        &self,
        t: TermId,
        conditions: &Poset,
        actions: &Poset,
        position: &[usize],
        memo: &mut HashMap<TermId, String>,
    ) -> String {
        if let Some(s) = memo.get(&t) {
            return s.clone();
        }
        let out = match &self.terms[t] {
            Term::Final => "•".to_string(),
            Term::Node(per_action) => {
                let sets: Vec<String> = per_action
                    .iter()
                    .map(|pairs| {
                        if pairs.is_empty() {
                            return "∅".to_string();
                        }
                        let mut items: Vec<((usize, usize, String, usize), String)> = pairs
                            .iter()
                            .map(|&(s, v)| {
                                let inner = self.render_with(s, conditions, actions, position, memo);
                                let size = self.successors_total(s);
                                let text = format!("({},{})", inner, conditions.name(v));
                                ((self.ranks[s], size, inner, position[v]), text)
                            })
                            .collect();
                        items.sort();
                        let body: Vec<String> = items.into_iter().map(|(_, s)| s).collect();
                        format!("{{{}}}", body.join(","))
                    })
                    .collect();
                if sets.len() == 1 {
                    sets.into_iter().next().unwrap()
                } else {
                    let labelled: Vec<String> = sets
                        .into_iter()
                        .enumerate()
                        .map(|(a, s)| format!("{}: {}", actions.name(a), s))
                        .collect();
                    format!("<{}>", labelled.join(", "))
                }
            }
        };
        memo.insert(t, out.clone());
        out
    }

    fn successors_total(&self, t: TermId) -> usize {
        match &self.terms[t] {
            Term::Final => 0,
            Term::Node(per_action) => per_action.iter().map(Vec::len).sum(),
        }
    }
}

/// The stage-`i` map `(x, φ) ↦ term`, indexed by `x * |Φ| + φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BehaviourTable {
    pub stage: usize,
    pub conditions: usize,
    pub terms: Vec<TermId>,
}

impl BehaviourTable {
    pub fn get(&self, x: usize, phi: usize) -> TermId {
        self.terms[x * self.conditions + phi]
    }

    pub fn num_states(&self) -> usize {
        self.terms.len().checked_div(self.conditions).unwrap_or(0)
    }

    pub fn kernel(&self) -> Partition {
        Partition::from_keys(self.terms.iter().copied())
    }
}

pub fn chain_init(c: &UpgradeCoalgebra, interner: &mut Interner) -> BehaviourTable {
    let bullet = interner.final_token();
    BehaviourTable {
        stage: 0,
        conditions: c.conditions().len(),
        terms: vec![bullet; c.num_states() * c.conditions().len()],
    }
}

pub fn chain_step(c: &UpgradeCoalgebra, interner: &mut Interner, d: &BehaviourTable) -> BehaviourTable {
    let np = c.conditions().len();
    let mut terms = Vec::with_capacity(d.terms.len());
    for x in 0..c.num_states() {
        for phi in 0..np {
            let per_action = (0..c.actions().len())
                .map(|a| {
                    c.alpha(x, phi, a)
                        .iter()
                        .map(|&(y, v)| (d.get(y, v), v))
                        .collect()
                })
                .collect();
            terms.push(interner.node(per_action));
        }
    }
    BehaviourTable {
        stage: d.stage + 1,
        conditions: np,
        terms,
    }
}

/// Names `x@φ` for the pairs of a coalgebra, in index order.
pub fn pair_names(c: &UpgradeCoalgebra) -> Vec<String> {
    let mut out = Vec::with_capacity(c.num_states() * c.conditions().len());
    for x in c.states() {
        for phi in c.conditions().names() {
            out.push(format!("{x}@{phi}"));
        }
    }
    out
}

/// The pairs `X × Φ` ordered componentwise with `X` discrete.
pub fn pair_poset(c: &UpgradeCoalgebra) -> (Poset, Vec<usize>) {
    let names = pair_names(c);
    let np = c.conditions().len();
    let conds = c.conditions();
    let poset = Poset::from_relation(names.clone(), |i, j| i / np == j / np && conds.leq(i % np, j % np))
        .expect("product of a discrete set and a poset");
    let to_poset: Vec<usize> = names
        .iter()
        .map(|n| poset.index_of(n).expect("same names"))
        .collect();
    (poset, to_poset)
}

/// Image of a stage: its kernel on pairs and the least order on the classes
/// making the quotient map monotone.
#[derive(Clone, Debug)]
pub struct Factorisation {
    pub kernel: Partition,
    /// Element `k` corresponds to kernel class `k`, named by its least member.
    pub codomain: Poset,
    /// Position in `codomain` of each kernel class.
    pub class_to_codomain: Vec<usize>,
}

pub fn factorise_kernel(c: &UpgradeCoalgebra, kernel: &Partition) -> Factorisation {
    let (poset, to_poset) = pair_poset(c);
    let pairs: Vec<(usize, usize)> = kernel
        .classes
        .iter()
        .flat_map(|cls| cls.windows(2).map(|w| (to_poset[w[0]], to_poset[w[1]])))
        .collect();
    let q = poset.coequalise(&pairs);
    assert_eq!(
        q.classes.len(),
        kernel.len(),
        "the induced order never identifies distinct behaviours"
    );
    let class_to_codomain = kernel
        .classes
        .iter()
        .map(|cls| q.map[to_poset[cls[0]]])
        .collect();
    Factorisation {
        kernel: kernel.clone(),
        codomain: q.poset,
        class_to_codomain,
    }
}

pub fn pseudo_factorise(c: &UpgradeCoalgebra, d: &BehaviourTable) -> Factorisation {
    factorise_kernel(c, &d.kernel())
}

/// `M(x, y) = {φ | d(x, φ) = d(y, φ)}`.
pub fn kernel_matrix(c: &UpgradeCoalgebra, d: &BehaviourTable) -> Result<LatticeRelation, MinimiseError> {
    matrix_of(c, d.stage, |x, phi| d.get(x, phi))
}

fn matrix_of<K: PartialEq>(
    c: &UpgradeCoalgebra,
    stage: usize,
    key: impl Fn(usize, usize) -> K,
) -> Result<LatticeRelation, MinimiseError> {
    let n = c.num_states();
    let conds = c.conditions();
    let mut table = LatticeRelation::constant(n, Downset(Bits::empty(conds.len())));
    for x in 0..n {
        for y in 0..n {
            let set = Bits::from_indices(conds.len(), (0..conds.len()).filter(|&p| key(x, p) == key(y, p)));
            match conds.downset(set) {
                Ok(d) => table.set(x, y, d),
                Err(crate::order::OrderError::NotDownwardClosed { member, missing }) => {
                    return Err(MinimiseError::NotDownwardClosed {
                        stage,
                        x: c.states()[x].clone(),
                        y: c.states()[y].clone(),
                        member,
                        missing,
                    })
                }
                Err(other) => unreachable!("{other}"),
            }
        }
    }
    Ok(table)
}

/// States identified when they agree under every condition.
pub fn state_partition(c: &UpgradeCoalgebra, kernel: &Partition) -> Partition {
    let np = c.conditions().len();
    Partition::from_keys((0..c.num_states()).map(|x| {
        (0..np)
            .map(|p| kernel.class_of[x * np + p])
            .collect::<Vec<_>>()
    }))
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub index: usize,
    pub kernel: Partition,
    pub states: Partition,
    pub factorisation: Factorisation,
    pub matrix: LatticeRelation,
    /// Rendered codomain terms per kernel class, when terms were built.
    pub terms: Option<Vec<String>>,
}

/// The minimised system: kernel classes with transitions
/// `(K, a, [x', φ'], φ')` read off any representative `(x, φ)` of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCoalgebra {
    pub states: Vec<String>,
    pub order: Poset,
    pub actions: Poset,
    pub conditions: Poset,
    /// `transitions[K][a]`.
    pub transitions: Vec<Vec<BTreeSet<(usize, usize)>>>,
    /// Kernel class of each pair `x * |Φ| + φ` of the input.
    pub class_of: Vec<usize>,
}

impl QuotientCoalgebra {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Reads the quotient as an upgrade coalgebra on its classes, with
    /// `γ(K, φ, a) = {(K', φ') ∈ β(K, a) | φ' ≤ φ}`.
    pub fn to_upgrade_coalgebra(&self) -> UpgradeCoalgebra {
        let np = self.conditions.len();
        let na = self.actions.len();
        let mut alpha = Vec::with_capacity(self.len() * np * na);
        for k in 0..self.len() {
            for phi in 0..np {
                for a in 0..na {
                    alpha.push(
                        self.transitions[k][a]
                            .iter()
                            .copied()
                            .filter(|&(_, v)| self.conditions.leq(v, phi))
                            .collect(),
                    );
                }
            }
        }
        UpgradeCoalgebra::new(self.states.clone(), self.actions.clone(), self.conditions.clone(), alpha)
    }

    /// Graphviz rendering; one edge per class pair and action, labelled with
    /// the versions it is taken in.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quotient {\n  rankdir=LR;\n  node [shape=box];\n");
        for s in &self.states {
            out.push_str(&format!("  \"{s}\";\n"));
        }
        for (k, per_action) in self.transitions.iter().enumerate() {
            for (a, succ) in per_action.iter().enumerate() {
                let mut grouped: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for &(t, v) in succ {
                    grouped.entry(t).or_default().push(v);
                }
                for (t, mut versions) in grouped {
                    let position = self.conditions.display_order();
                    versions.sort_by_key(|v| position.iter().position(|p| p == v));
                    let label: Vec<&str> = versions.iter().map(|&v| self.conditions.name(v)).collect();
                    out.push_str(&format!(
                        "  \"{}\" -> \"{}\" [label=\"{}: {}\"];\n",
                        self.states[k],
                        self.states[t],
                        self.actions.name(a),
                        label.join(", ")
                    ));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn quotient_coalgebra(c: &UpgradeCoalgebra, kernel: &Partition) -> QuotientCoalgebra {
    let np = c.conditions().len();
    let names = pair_names(c);
    let factorisation = factorise_kernel(c, kernel);
    let states: Vec<String> = kernel.classes.iter().map(|cls| names[cls[0]].clone()).collect();
    let transitions = kernel
        .classes
        .iter()
        .map(|cls| {
            let (x, phi) = (cls[0] / np, cls[0] % np);
            (0..c.actions().len())
                .map(|a| {
                    c.alpha(x, phi, a)
                        .iter()
                        .map(|&(y, v)| (kernel.class_of[y * np + v], v))
                        .collect()
                })
                .collect()
        })
        .collect();
    // Codomain elements are indexed by name; reindex to kernel class order.
    let order = Poset::from_relation(states.clone(), |i, j| {
        factorisation
            .codomain
            .leq(factorisation.class_to_codomain[i], factorisation.class_to_codomain[j])
    })
    .expect("codomain is a poset");
    QuotientCoalgebra {
        states,
        order,
        actions: c.actions().clone(),
        conditions: c.conditions().clone(),
        transitions,
        class_of: kernel.class_of.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Chain,
    FixpointKernel,
}

#[derive(Clone, Debug)]
pub struct ChainResult {
    pub algorithm: Algorithm,
    /// Stages `0 ..= confirmed_at`.
    pub stages: Vec<Stage>,
    /// First `n` whose kernel equals the kernel of stage `n + 1`.
    pub stage: usize,
    pub confirmed_at: usize,
    /// First `k` with `M_k = M_{k+1}`.
    pub separation_stage: usize,
    pub quotient: QuotientCoalgebra,
}

impl ChainResult {
    pub fn final_stage(&self) -> &Stage {
        &self.stages[self.stage]
    }
}

fn finish(
    algorithm: Algorithm,
    c: &UpgradeCoalgebra,
    stages: Vec<Stage>,
) -> ChainResult {
    let stage = stages.len() - 2;
    let separation_stage = (0..stages.len() - 1)
        .find(|&k| stages[k].matrix == stages[k + 1].matrix)
        .expect("kernels determine the next matrix");
    let quotient = quotient_coalgebra(c, &stages[stage].kernel);
    ChainResult {
        algorithm,
        stages,
        stage,
        confirmed_at: stage + 1,
        separation_stage,
        quotient,
    }
}

/// Runs the final chain until two successive kernels agree.
pub fn minimise_chain(c: &UpgradeCoalgebra) -> Result<ChainResult, MinimiseError> {
    let mut interner = Interner::new();
    let mut d = chain_init(c, &mut interner);
    let mut stages: Vec<Stage> = Vec::new();
    loop {
        let factorisation = pseudo_factorise(c, &d);
        let kernel = factorisation.kernel.clone();
        let terms = kernel
            .classes
            .iter()
            .map(|cls| {
                let np = c.conditions().len();
                interner.render(d.get(cls[0] / np, cls[0] % np), c.conditions(), c.actions())
            })
            .collect();
        let stable = stages.last().is_some_and(|s| s.kernel == kernel);
        stages.push(Stage {
            index: d.stage,
            states: state_partition(c, &kernel),
            matrix: kernel_matrix(c, &d)?,
            kernel,
            factorisation,
            terms: Some(terms),
        });
        if stable {
            return Ok(finish(Algorithm::Chain, c, stages));
        }
        d = chain_step(c, &mut interner, &d);
    }
}

/// Builds the same kernels from the lattice fixed point: the kernel of stage
/// `k + 1` identifies `(x, φ)` and `(y, ψ)` when their successor sets agree
/// after replacing each `(x', φ')` by the `R_k`-class of `x'` at `φ'`.
pub fn minimise_fixpoint_kernel(m: &Cts) -> ChainResult {
    let c = coalgebra_encode(m);
    let fix = lattice_bisim_fixpoint(&cts_to_lats(m));
    let n = m.num_states();
    let np = m.num_conditions();
    let relation_at = |k: usize| -> &LatticeRelation { &fix.trace[k.min(fix.iterations)] };
    let mut stages: Vec<Stage> = Vec::new();
    let mut k = 0;
    loop {
        let kernel = if k == 0 {
            Partition::single(n * np)
        } else {
            let r = relation_at(k - 1);
            let class = |y: usize, v: usize| (0..n).find(|&z| r.get(y, z).contains(v)).expect("reflexive");
            Partition::from_keys((0..n * np).map(|i| {
                let (x, phi) = (i / np, i % np);
                (0..m.num_actions())
                    .map(|a| {
                        c.alpha(x, phi, a)
                            .iter()
                            .map(|&(y, v)| (class(y, v), v))
                            .collect::<BTreeSet<_>>()
                    })
                    .collect::<Vec<_>>()
            }))
        };
        let stable = stages.last().is_some_and(|s| s.kernel == kernel);
        stages.push(Stage {
            index: k,
            states: state_partition(&c, &kernel),
            factorisation: factorise_kernel(&c, &kernel),
            matrix: relation_at(k).clone(),
            kernel,
            terms: None,
        });
        if stable {
            return finish(Algorithm::FixpointKernel, &c, stages);
        }
        k += 1;
    }
}

/// Keeps `y` when some `f(x)` is not determined at `y` by its values strictly
/// below `y`.
pub fn klt_factorise(y: &Poset, l: &Frame, f: &[StarMap]) -> Vec<usize> {
    (0..y.len())
        .filter(|&target| {
            f.iter().any(|b| {
                let below = (0..y.len())
                    .filter(|&z| y.lt(z, target))
                    .fold(l.bottom(), |acc, z| acc.union(b.at(z)));
                below != *b.at(target)
            })
        })
        .collect()
}
