//! Finite posets, downward-closed sets, monotone maps and poset quotients.
//!
//! Elements are opaque string identifiers. A [`Poset`] keeps them in lexicographic
//! order and refers to them by index in that order, so every traversal below is
//! deterministic. The order relation is stored fully closed: `below(i)` is the
//! principal downset of element `i`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::bits::Bits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("order is not antisymmetric: {} form a cycle", .cycle.join(" <= "))]
    AntisymmetryViolation { cycle: Vec<String> },
    #[error("set is not downward closed: `{missing}` <= `{member}` is missing")]
    NotDownwardClosed { member: String, missing: String },
    #[error("map is not total: expected {expected} entries, got {got}")]
    NotTotal { expected: usize, got: usize },
}

/// Characters that may not appear in element identifiers. They are reserved by
/// the model file format and by the generated names of product and quotient
/// elements.
pub const RESERVED_CHARS: &[char] = &[',', ':', '#', '@', '[', ']'];

pub fn is_valid_identifier(name: &str) -> bool {
    !name.is_empty()
        && name != "<="
        && !name
            .chars()
            .any(|c| c.is_whitespace() || RESERVED_CHARS.contains(&c))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    names: Vec<String>,
    below: Vec<Bits>,
}

impl Poset {
    /// Builds the reflexive-transitive closure of `pairs` over `elements`, where a
    /// pair `(p, q)` means `p <= q`.
    pub fn new<S, T>(
        elements: impl IntoIterator<Item = S>,
        pairs: impl IntoIterator<Item = (T, T)>,
    ) -> Result<Poset, OrderError>
    where
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut names: Vec<String> = Vec::new();
        let mut seen = HashSet::new();
        for e in elements {
            let e = e.as_ref();
            if !seen.insert(e.to_string()) {
                return Err(OrderError::DuplicateElement(e.to_string()));
            }
            names.push(e.to_string());
        }
        names.sort();
        let index: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let n = names.len();
        let mut below: Vec<Bits> = (0..n).map(|i| Bits::from_indices(n, [i])).collect();
        for (p, q) in pairs {
            let p = *index
                .get(p.as_ref())
                .ok_or_else(|| OrderError::UnknownElement(p.as_ref().to_string()))?;
            let q = *index
                .get(q.as_ref())
                .ok_or_else(|| OrderError::UnknownElement(q.as_ref().to_string()))?;
            below[q].insert(p);
        }
        close_transitively(&mut below);
        for p in 0..n {
            for q in below[p].iter() {
                if q != p && below[q].contains(p) {
                    let (lo, hi) = (p.min(q), p.max(q));
                    return Err(OrderError::AntisymmetryViolation {
                        cycle: vec![names[lo].clone(), names[hi].clone(), names[lo].clone()],
                    });
                }
            }
        }
        Ok(Poset { names, below })
    }

    /// Builds a poset from names in arbitrary order and a relation given on
    /// those positions; the relation is closed and checked like [`Poset::new`].
    pub fn from_relation(
        names: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Poset, OrderError> {
        let n = names.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && leq(i, j) {
                    pairs.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        Poset::new(names.iter(), pairs)
    }

    pub fn discrete<S: AsRef<str>>(elements: impl IntoIterator<Item = S>) -> Result<Poset, OrderError> {
        Poset::new(elements, std::iter::empty::<(&str, &str)>())
    }

    /// A chain, listed from bottom to top.
    pub fn chain<S: AsRef<str>>(elements: &[S]) -> Result<Poset, OrderError> {
        let pairs: Vec<(&str, &str)> = elements
            .windows(2)
            .map(|w| (w[0].as_ref(), w[1].as_ref()))
            .collect();
        Poset::new(elements.iter().map(|e| e.as_ref()), pairs)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn require(&self, name: &str) -> Result<usize, OrderError> {
        self.index_of(name)
            .ok_or_else(|| OrderError::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.below[q].contains(p)
    }

    pub fn lt(&self, p: usize, q: usize) -> bool {
        p != q && self.leq(p, q)
    }

    /// `{q | q <= p}` as raw bits.
    pub fn below(&self, p: usize) -> &Bits {
        &self.below[p]
    }

    pub fn above(&self, p: usize) -> Bits {
        Bits::from_indices(self.len(), (0..self.len()).filter(|q| self.leq(p, *q)))
    }

    pub fn is_discrete(&self) -> bool {
        self.below.iter().all(|b| b.len() == 1)
    }

    /// Smallest downward-closed superset of `set`.
    pub fn close_down(&self, set: &Bits) -> Bits {
        let mut out = Bits::empty(self.len());
        for p in set.iter() {
            out.union_with(&self.below[p]);
        }
        out
    }

    pub fn is_downward_closed(&self, set: &Bits) -> bool {
        set.iter().all(|p| self.below[p].is_subset(set))
    }

    /// Checks downward closure and names the first missing element.
    pub fn check_downward_closed(&self, set: &Bits) -> Result<(), OrderError> {
        for p in set.iter() {
            if let Some(q) = self.below[p].iter().find(|q| !set.contains(*q)) {
                return Err(OrderError::NotDownwardClosed {
                    member: self.names[p].clone(),
                    missing: self.names[q].clone(),
                });
            }
        }
        Ok(())
    }

    pub fn set_of<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<Bits, OrderError> {
        let mut out = Bits::empty(self.len());
        for n in names {
            out.insert(self.require(n.as_ref())?);
        }
        Ok(out)
    }

    pub fn down_closure<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<Downset, OrderError> {
        let set = self.set_of(names)?;
        Ok(Downset(self.close_down(&set)))
    }

    pub fn principal_downset(&self, name: &str) -> Result<Downset, OrderError> {
        Ok(Downset(self.below[self.require(name)?].clone()))
    }

    /// Wraps `set` as a downset after checking closure.
    pub fn downset(&self, set: Bits) -> Result<Downset, OrderError> {
        assert_eq!(set.universe(), self.len(), "set over a different universe");
        self.check_downward_closed(&set)?;
        Ok(Downset(set))
    }

    /// The least element of `set`, if `set` has one.
    pub fn minimum_of(&self, set: &Bits) -> Option<usize> {
        set.iter()
            .find(|&p| set.iter().all(|q| self.leq(p, q)))
    }

    pub fn names_of<'a>(&'a self, set: &'a Bits) -> impl Iterator<Item = &'a str> + 'a {
        set.iter().map(move |i| self.names[i].as_str())
    }

    /// Covering pairs `(p, q)` with `p < q` and nothing strictly between.
    pub fn hasse_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for q in 0..n {
            for p in self.below[q].iter() {
                if p == q {
                    continue;
                }
                let covered = (0..n).any(|r| r != p && r != q && self.lt(p, r) && self.lt(r, q));
                if !covered {
                    out.push((p, q));
                }
            }
        }
        out.sort();
        out
    }

    /// A linear extension read from the top: maximal elements first, ties broken
    /// lexicographically.
    pub fn display_order(&self) -> Vec<usize> {
        let mut placed = Bits::empty(self.len());
        let mut out = Vec::with_capacity(self.len());
        while out.len() < self.len() {
            let next = (0..self.len())
                .find(|&p| {
                    !placed.contains(p)
                        && (0..self.len()).all(|q| q == p || placed.contains(q) || !self.lt(p, q))
                })
                .expect("finite poset always has a maximal element");
            placed.insert(next);
            out.push(next);
        }
        out
    }

    /// Product order on pairs, with elements named `left@right`.
    pub fn product(left: &Poset, right: &Poset) -> Poset {
        let mut names = Vec::new();
        let mut pos = Vec::new();
        for i in 0..left.len() {
            for j in 0..right.len() {
                names.push(format!("{}@{}", left.name(i), right.name(j)));
                pos.push((i, j));
            }
        }
        Poset::from_relation(names, |a, b| {
            left.leq(pos[a].0, pos[b].0) && right.leq(pos[a].1, pos[b].1)
        })
        .expect("product of posets is a poset")
    }

    /// Quotient by the equivalence generated by `pairs`.
    ///
    /// The induced relation on classes is closed transitively and classes lying
    /// on a common cycle are merged, so the codomain is again a poset and its
    /// order is the least one making the quotient map monotone. Each class is
    /// named after its lexicographically least member.
    pub fn coequalise(&self, pairs: &[(usize, usize)]) -> Quotient {
        let n = self.len();
        let mut uf = UnionFind::new(n);
        for &(p, q) in pairs {
            uf.union(p, q);
        }
        // Preorder on the union-find classes, then collapse its cycles.
        loop {
            let roots: Vec<usize> = (0..n).map(|p| uf.find(p)).collect();
            let mut reach: Vec<Bits> = (0..n).map(|_| Bits::empty(n)).collect();
            for q in 0..n {
                for p in self.below[q].iter() {
                    reach[roots[q]].insert(roots[p]);
                }
            }
            close_transitively(&mut reach);
            let mut merged = false;
            for a in 0..n {
                if roots[a] != a {
                    continue;
                }
                for b in reach[a].iter() {
                    if b != a && reach[b].contains(a) && uf.find(a) != uf.find(b) {
                        uf.union(a, b);
                        merged = true;
                    }
                }
            }
            if !merged {
                break;
            }
        }
        let mut class_of_root: HashMap<usize, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut map = vec![0; n];
        for (p, slot) in map.iter_mut().enumerate() {
            let r = uf.find(p);
            let c = *class_of_root.entry(r).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push(p);
            *slot = c;
        }
        // Classes were created in order of their least member, which is also the
        // lexicographic order of their names, so codomain indices line up.
        let names: Vec<String> = classes.iter().map(|c| self.names[c[0]].clone()).collect();
        let poset = Poset::from_relation(names, |a, b| {
            classes[a]
                .iter()
                .any(|&p| classes[b].iter().any(|&q| self.leq(p, q)))
        })
        .expect("cycles were collapsed");
        Quotient {
            poset,
            map,
            classes,
        }
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .hasse_pairs()
            .into_iter()
            .map(|(p, q)| format!("{} <= {}", self.names[p], self.names[q]))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.names)
            .field("covers", &pairs)
            .finish()
    }
}

/// Warshall closure over rows where `rows[q]` holds everything below `q`.
fn close_transitively(rows: &mut [Bits]) {
    let n = rows.len();
    for k in 0..n {
        for q in 0..n {
            if rows[q].contains(k) {
                let via = rows[k].clone();
                rows[q].union_with(&via);
            }
        }
    }
}

/// A downward-closed subset of some poset, stored as bits over its elements.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Downset(pub(crate) Bits);

impl Downset {
    pub fn bits(&self) -> &Bits {
        &self.0
    }

    pub fn into_bits(self) -> Bits {
        self.0
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.contains(p)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn universe(&self) -> usize {
        self.0.universe()
    }

    pub fn is_subset(&self, other: &Downset) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Downset) -> Downset {
        Downset(self.0.union(&other.0))
    }

    pub fn intersection(&self, other: &Downset) -> Downset {
        Downset(self.0.intersection(&other.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter()
    }
}

/// A candidate map between posets, given as a table on domain indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    pub dom: Poset,
    pub cod: Poset,
    pub table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(dom: Poset, cod: Poset, table: Vec<usize>) -> Result<Self, OrderError> {
        if table.len() != dom.len() {
            return Err(OrderError::NotTotal {
                expected: dom.len(),
                got: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&t| t >= cod.len()) {
            return Err(OrderError::UnknownElement(format!("#{bad}")));
        }
        Ok(MonotoneMap { dom, cod, table })
    }

    pub fn identity(p: &Poset) -> Self {
        MonotoneMap {
            dom: p.clone(),
            cod: p.clone(),
            table: (0..p.len()).collect(),
        }
    }

    pub fn apply(&self, p: usize) -> usize {
        self.table[p]
    }

    /// Exhaustive check of `p <= q  =>  f(p) <= f(q)`.
    pub fn is_monotone(&self) -> bool {
        (0..self.dom.len()).all(|p| {
            (0..self.dom.len())
                .all(|q| !self.dom.leq(p, q) || self.cod.leq(self.table[p], self.table[q]))
        })
    }
}

/// The result of [`Poset::coequalise`]: codomain, surjection and its fibres.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub poset: Poset,
    pub map: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Keeps the smaller index as root.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

fn element_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Naturally labelled posets on `p0..p{n-1}`: every `pi <= pj` has `i <= j`.
/// Every finite poset is isomorphic to at least one of them.
fn natural_posets(n: usize) -> Vec<Vec<Bits>> {
    let mut acc: Vec<Vec<Bits>> = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for rows in &acc {
            // The new element sits on top of any downset of the existing ones.
            for mask in 0u64..(1 << k) {
                let lower = Bits::from_mask(k, mask);
                let closed = lower.iter().all(|p| rows[p].is_subset(&lower));
                if !closed {
                    continue;
                }
                let mut grown: Vec<Bits> = rows
                    .iter()
                    .map(|r| Bits::from_indices(k + 1, r.iter()))
                    .collect();
                let mut mine = Bits::from_indices(k + 1, lower.iter());
                mine.insert(k);
                grown.push(mine);
                next.push(grown);
            }
        }
        acc = next;
    }
    acc
}

fn relation_code(rows: &[Bits], perm: &[usize]) -> u64 {
    // Code of the relation after relabelling p -> perm[p].
    let n = rows.len();
    let mut code = 0u64;
    for q in 0..n {
        for p in rows[q].iter() {
            code |= 1 << (perm[p] * n + perm[q]);
        }
    }
    code
}

fn rows_to_poset(rows: &[Bits]) -> Poset {
    let names = element_names(rows.len());
    Poset::from_relation(names, |p, q| rows[q].contains(p)).expect("generated relation is an order")
}

/// One representative of every isomorphism class of posets with `n` elements
/// (`n <= 7`), named `p0, p1, ...`.
pub fn posets_up_to_iso(n: usize) -> Vec<Poset> {
    assert!(n <= 7, "isomorphism enumeration supports at most 7 elements");
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for rows in natural_posets(n) {
        let canon = perms.iter().map(|p| relation_code(&rows, p)).min().unwrap_or(0);
        if seen.insert(canon) {
            out.push(rows_to_poset(&rows));
        }
    }
    out
}

/// Every partial order on the labelled set `p0..p{n-1}` (`n <= 6`).
pub fn labelled_posets(n: usize) -> Vec<Poset> {
    assert!(n <= 6, "labelled enumeration supports at most 6 elements");
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for rows in natural_posets(n) {
        for perm in &perms {
            let code = relation_code(&rows, perm);
            if seen.insert(code) {
                let mut relabelled: Vec<Bits> = (0..n).map(|_| Bits::empty(n)).collect();
                for q in 0..n {
                    for p in rows[q].iter() {
                        relabelled[perm[q]].insert(perm[p]);
                    }
                }
                out.push(rows_to_poset(&relabelled));
            }
        }
    }
    out
}

/// Brute-force order-isomorphism test.
pub fn are_isomorphic(a: &Poset, b: &Poset) -> bool {
    find_isomorphism(a, b).is_some()
}

pub fn find_isomorphism(a: &Poset, b: &Poset) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    permutations(n).into_iter().find(|perm| {
        (0..n).all(|p| (0..n).all(|q| a.leq(p, q) == b.leq(perm[p], perm[q])))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1_conditions() -> Poset {
        Poset::new(["phi'", "phi"], [("phi'", "phi")]).unwrap()
    }

    #[test]
    fn closure_of_single_pair() {
        let p = Poset::new(["a", "b"], [("a", "b")]).unwrap();
        let (a, b) = (p.require("a").unwrap(), p.require("b").unwrap());
        assert!(p.leq(a, b) && p.leq(a, a) && p.leq(b, b));
        assert!(!p.leq(b, a));
    }

    #[test]
    fn antisymmetry_is_enforced() {
        let err = Poset::new(["a", "b"], [("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, OrderError::AntisymmetryViolation { .. }));
        let err = Poset::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")]).unwrap_err();
        assert!(matches!(err, OrderError::AntisymmetryViolation { .. }));
    }

    #[test]
    fn unknown_and_duplicate_elements() {
        assert_eq!(
            Poset::new(["a"], [("a", "z")]).unwrap_err(),
            OrderError::UnknownElement("z".into())
        );
        assert_eq!(
            Poset::discrete(["a", "a"]).unwrap_err(),
            OrderError::DuplicateElement("a".into())
        );
    }

    #[test]
    fn condition_poset_of_the_running_example() {
        let p = ex1_conditions();
        assert_eq!(p.names(), &["phi".to_string(), "phi'".to_string()]);
        assert!(p.leq(p.require("phi'").unwrap(), p.require("phi").unwrap()));
    }

    #[test]
    fn down_closure_examples() {
        let p = ex1_conditions();
        let d = p.down_closure(["phi"]).unwrap();
        assert_eq!(p.names_of(d.bits()).collect::<Vec<_>>(), vec!["phi", "phi'"]);
        assert!(p.down_closure(Vec::<&str>::new()).unwrap().is_empty());
        assert!(matches!(
            p.down_closure(["psi"]),
            Err(OrderError::UnknownElement(_))
        ));

        let chain = Poset::chain(&["a", "b", "c"]).unwrap();
        let d = chain.down_closure(["b"]).unwrap();
        // Brute force: everything below some member.
        let expected: Vec<usize> = (0..3)
            .filter(|&q| chain.leq(q, chain.require("b").unwrap()))
            .collect();
        assert_eq!(d.iter().collect::<Vec<_>>(), expected);
        assert_eq!(chain.names_of(d.bits()).collect::<Vec<_>>(), vec!["a", "b"]);
    }

    #[test]
    fn principal_downsets() {
        let p = ex1_conditions();
        assert_eq!(p.principal_downset("phi").unwrap().len(), 2);
        let d = p.principal_downset("phi'").unwrap();
        assert_eq!(p.names_of(d.bits()).collect::<Vec<_>>(), vec!["phi'"]);
        let anti = Poset::discrete(["a", "b"]).unwrap();
        let d = anti.principal_downset("a").unwrap();
        assert_eq!(anti.names_of(d.bits()).collect::<Vec<_>>(), vec!["a"]);
    }

    #[test]
    fn monotonicity_checks() {
        let chain = Poset::chain(&["bot", "top"]).unwrap();
        assert!(MonotoneMap::identity(&chain).is_monotone());
        let constant = MonotoneMap::new(chain.clone(), chain.clone(), vec![0, 0]).unwrap();
        assert!(constant.is_monotone());
        let (bot, top) = (chain.require("bot").unwrap(), chain.require("top").unwrap());
        let mut swap = vec![0; 2];
        swap[bot] = top;
        swap[top] = bot;
        let swap = MonotoneMap::new(chain.clone(), chain, swap).unwrap();
        assert!(!swap.is_monotone());
    }

    #[test]
    fn coequalise_examples() {
        let chain = Poset::chain(&["a", "b", "c"]).unwrap();
        let q = chain.coequalise(&[]);
        assert!(are_isomorphic(&q.poset, &chain));

        let (a, c) = (chain.require("a").unwrap(), chain.require("c").unwrap());
        let q = chain.coequalise(&[(a, c)]);
        assert_eq!(q.poset.len(), 1);
        assert_eq!(q.classes, vec![vec![0, 1, 2]]);

        let anti = Poset::discrete(["a", "b"]).unwrap();
        let q = anti.coequalise(&[(0, 1)]);
        assert_eq!(q.poset.len(), 1);
        assert_eq!(q.poset.names(), &["a".to_string()]);
    }

    #[test]
    fn poset_counts() {
        // Unlabelled: 1, 1, 2, 5, 16, 63; labelled: 1, 1, 3, 19, 219.
        let unlabelled: Vec<usize> = (0..=5).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(unlabelled, vec![1, 1, 2, 5, 16, 63]);
        let labelled: Vec<usize> = (0..=4).map(|n| labelled_posets(n).len()).collect();
        assert_eq!(labelled, vec![1, 1, 3, 19, 219]);
    }

    #[test]
    fn display_order_puts_larger_conditions_first() {
        let p = ex1_conditions();
        let order: Vec<&str> = p.display_order().into_iter().map(|i| p.name(i)).collect();
        assert_eq!(order, vec!["phi", "phi'"]);
    }

    #[test]
    fn identifiers() {
        assert!(is_valid_identifier("phi'"));
        assert!(is_valid_identifier("x1"));
        assert!(!is_valid_identifier("a,b"));
        assert!(!is_valid_identifier("x@y"));
        assert!(!is_valid_identifier(""));
        assert!(!is_valid_identifier("<="));
    }
}
