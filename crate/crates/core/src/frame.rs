//! Downset frames `O(P)` and Birkhoff duality for finite distributive lattices.

use thiserror::Error;

use crate::bits::Bits;
use crate::order::{Downset, OrderError, Poset};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("downset over {found} elements used with a frame over {expected}")]
    BaseMismatch { expected: usize, found: usize },
    #[error("frame over {size} elements exceeds the enumeration limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("not a lattice: `{left}` and `{right}` have no {operation}")]
    NotALattice {
        left: String,
        right: String,
        operation: &'static str,
    },
    #[error("not a lattice: it has no elements")]
    EmptyLattice,
    #[error("not distributive: `{a}` meet (`{b}` join `{c}`) differs from the join of the meets")]
    NotDistributive { a: String, b: String, c: String },
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// The frame of downsets of `base`, ordered by inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    base: Poset,
}

impl Frame {
    pub fn new(base: Poset) -> Self {
        Frame { base }
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn top(&self) -> Downset {
        Downset(Bits::full(self.base.len()))
    }

    pub fn bottom(&self) -> Downset {
        Downset(Bits::empty(self.base.len()))
    }

    fn check(&self, a: &Downset) -> Result<(), FrameError> {
        if a.universe() != self.base.len() {
            return Err(FrameError::BaseMismatch {
                expected: self.base.len(),
                found: a.universe(),
            });
        }
        Ok(())
    }

    pub fn join(&self, a: &Downset, b: &Downset) -> Result<Downset, FrameError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.union(b))
    }

    pub fn meet(&self, a: &Downset, b: &Downset) -> Result<Downset, FrameError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.intersection(b))
    }

    /// Relative pseudocomplement: the largest `c` with `a ∩ c ⊆ b`.
    pub fn implies(&self, a: &Downset, b: &Downset) -> Result<Downset, FrameError> {
        self.check(a)?;
        self.check(b)?;
        Ok(implies_unchecked(&self.base, a, b))
    }

    /// The principal downsets ordered by inclusion. Element `i` of the result is
    /// `↓p` where `p` is element `i` of the base, and carries the same name.
    pub fn join_irreducibles(&self) -> Poset {
        let generators = self.base.names().to_vec();
        Poset::from_relation(generators, |i, j| {
            self.base.below(i).is_subset(self.base.below(j))
        })
        .expect("inclusion is an order")
    }

    pub fn enumerate_elements(&self) -> Result<Vec<Downset>, FrameError> {
        self.enumerate_elements_limited(DEFAULT_ENUMERATION_LIMIT)
    }

    /// All downsets, by cardinality and then by member indices.
    pub fn enumerate_elements_limited(&self, limit: usize) -> Result<Vec<Downset>, FrameError> {
        let n = self.base.len();
        if n > limit {
            return Err(FrameError::TooLarge { size: n, limit });
        }
        let mut out = Vec::new();
        grow_downsets(&self.base, 0, Bits::empty(n), &mut out);
        out.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.iter().collect::<Vec<_>>().cmp(&b.iter().collect::<Vec<_>>()))
        });
        Ok(out.into_iter().map(Downset).collect())
    }
}

pub(crate) fn implies_unchecked(base: &Poset, a: &Downset, b: &Downset) -> Downset {
    let n = base.len();
    let mut out = Bits::empty(n);
    for p in 0..n {
        if base.below(p).intersection(a.bits()).is_subset(b.bits()) {
            out.insert(p);
        }
    }
    Downset(out)
}

// Decides membership of element `i` onwards; an element may join only if
// everything below it with a smaller index is already in.
fn grow_downsets(base: &Poset, i: usize, current: Bits, out: &mut Vec<Bits>) {
    if i == base.len() {
        if base.is_downward_closed(&current) {
            out.push(current);
        }
        return;
    }
    grow_downsets(base, i + 1, current.clone(), out);
    let below_done = base.below(i).iter().filter(|&q| q < i).all(|q| current.contains(q));
    if below_done {
        let mut with = current;
        with.insert(i);
        grow_downsets(base, i + 1, with, out);
    }
}

/// A finite lattice given by its order. Joins and meets are derived.
#[derive(Clone, Debug)]
pub struct ExplicitLattice {
    order: Poset,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl ExplicitLattice {
    pub fn new(order: Poset) -> Result<Self, FrameError> {
        let n = order.len();
        if n == 0 {
            return Err(FrameError::EmptyLattice);
        }
        let all = Bits::full(n);
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let uppers = order.above(a).intersection(&order.above(b));
                join[a][b] = order.minimum_of(&uppers).ok_or_else(|| FrameError::NotALattice {
                    left: order.name(a).to_string(),
                    right: order.name(b).to_string(),
                    operation: "join",
                })?;
                let lowers = order.below(a).intersection(order.below(b));
                meet[a][b] = maximum_of(&order, &lowers).ok_or_else(|| FrameError::NotALattice {
                    left: order.name(a).to_string(),
                    right: order.name(b).to_string(),
                    operation: "meet",
                })?;
            }
        }
        let bottom = order.minimum_of(&all).ok_or(FrameError::NotALattice {
            left: String::new(),
            right: String::new(),
            operation: "bottom",
        })?;
        let top = maximum_of(&order, &all).ok_or(FrameError::NotALattice {
            left: String::new(),
            right: String::new(),
            operation: "top",
        })?;
        Ok(ExplicitLattice {
            order,
            join,
            meet,
            bottom,
            top,
        })
    }

    /// The lattice of downsets of `frame`, with elements named `{a,b,...}`.
    pub fn of_frame(frame: &Frame) -> Result<(Self, Vec<Downset>), FrameError> {
        let elements = frame.enumerate_elements()?;
        let names: Vec<String> = elements
            .iter()
            .map(|d| format!("{{{}}}", frame.base().names_of(d.bits()).collect::<Vec<_>>().join(",")))
            .collect();
        let order = Poset::from_relation(names.clone(), |i, j| elements[i].is_subset(&elements[j]))?;
        let by_index: Vec<Downset> = order
            .names()
            .iter()
            .map(|n| elements[names.iter().position(|m| m == n).unwrap()].clone())
            .collect();
        Ok((ExplicitLattice::new(order)?, by_index))
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Binary distributivity over all triples. On a finite lattice this together
    /// with `a ⊓ ⊥ = ⊥` is the full join-infinite distributive law.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.order.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.meet(a, self.join(b, c));
                    let rhs = self.join(self.meet(a, b), self.meet(a, c));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// `ℓ ≠ ⊥` and `ℓ = p ⊔ q` only for `ℓ ∈ {p, q}`.
    pub fn is_join_irreducible(&self, l: usize) -> bool {
        let n = self.order.len();
        l != self.bottom
            && (0..n).all(|p| (0..n).all(|q| self.join(p, q) != l || p == l || q == l))
    }
}

fn maximum_of(order: &Poset, set: &Bits) -> Option<usize> {
    set.iter().find(|&p| set.iter().all(|q| order.leq(q, p)))
}

/// A distributive lattice re-presented as the frame of downsets of its
/// join-irreducibles.
#[derive(Clone, Debug)]
pub struct ImportedLattice {
    pub lattice: ExplicitLattice,
    pub frame: Frame,
    /// Lattice element index of each base element of `frame`.
    pub irreducibles: Vec<usize>,
    /// `eta[l]` is the set of join-irreducibles below `l`.
    pub eta: Vec<Downset>,
}

impl ImportedLattice {
    pub fn eta(&self, l: usize) -> &Downset {
        &self.eta[l]
    }

    /// The lattice element mapped to `d`, computed as the join of its members.
    pub fn eta_inv(&self, d: &Downset) -> usize {
        d.iter()
            .map(|j| self.irreducibles[j])
            .fold(self.lattice.bottom(), |acc, l| self.lattice.join(acc, l))
    }
}

pub fn import_lattice(lattice: ExplicitLattice) -> Result<ImportedLattice, FrameError> {
    if let Some((a, b, c)) = lattice.distributivity_witness() {
        let name = |i: usize| lattice.order().name(i).to_string();
        return Err(FrameError::NotDistributive {
            a: name(a),
            b: name(b),
            c: name(c),
        });
    }
    let order = lattice.order();
    let js: Vec<usize> = (0..order.len())
        .filter(|&l| lattice.is_join_irreducible(l))
        .collect();
    // Names of the lattice are sorted, so `js` is already in base order.
    let names: Vec<String> = js.iter().map(|&j| order.name(j).to_string()).collect();
    let base = Poset::from_relation(names, |i, k| order.leq(js[i], js[k]))?;
    let eta = (0..order.len())
        .map(|l| Downset(Bits::from_indices(js.len(), (0..js.len()).filter(|&i| order.leq(js[i], l)))))
        .collect();
    Ok(ImportedLattice {
        lattice,
        frame: Frame::new(base),
        irreducibles: js,
        eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> Frame {
        Frame::new(Poset::new(["phi", "phi'"], [("phi'", "phi")]).unwrap())
    }

    fn ds(f: &Frame, names: &[&str]) -> Downset {
        f.base().downset(f.base().set_of(names.iter()).unwrap()).unwrap()
    }

    fn brute_implies(f: &Frame, a: &Downset, b: &Downset) -> Downset {
        let mut acc = f.bottom();
        for c in f.enumerate_elements().unwrap() {
            if c.intersection(a).is_subset(b) {
                acc = acc.union(&c);
            }
        }
        acc
    }

    #[test]
    fn join_and_meet() {
        let f = ex1();
        let (p, t, e) = (ds(&f, &["phi'"]), f.top(), f.bottom());
        assert_eq!(f.join(&p, &e).unwrap(), p);
        assert_eq!(f.meet(&t, &p).unwrap(), p);
        assert_eq!(f.join(&p, &t).unwrap(), t);
        let other = Frame::new(Poset::discrete(["a"]).unwrap());
        assert!(matches!(
            f.join(&p, &other.top()),
            Err(FrameError::BaseMismatch { .. })
        ));
    }

    #[test]
    fn implication_examples() {
        let f = ex1();
        let (p, t, e) = (ds(&f, &["phi'"]), f.top(), f.bottom());
        assert_eq!(f.implies(&p, &p).unwrap(), t);
        assert_eq!(f.implies(&t, &p).unwrap(), brute_implies(&f, &t, &p));
        assert_eq!(f.implies(&t, &p).unwrap(), p);
        assert_eq!(f.implies(&p, &e).unwrap(), brute_implies(&f, &p, &e));
        assert_eq!(f.implies(&p, &e).unwrap(), e);
    }

    #[test]
    fn enumeration() {
        let f = ex1();
        let all = f.enumerate_elements().unwrap();
        assert_eq!(all, vec![f.bottom(), ds(&f, &["phi'"]), f.top()]);
        let anti = Frame::new(Poset::discrete(["a", "b"]).unwrap());
        assert_eq!(anti.enumerate_elements().unwrap().len(), 4);
        let point = Frame::new(Poset::discrete(["o"]).unwrap());
        assert_eq!(point.enumerate_elements().unwrap(), vec![point.bottom(), point.top()]);
        let big = Frame::new(Poset::discrete((0..21).map(|i| format!("e{i}"))).unwrap());
        assert!(matches!(big.enumerate_elements(), Err(FrameError::TooLarge { .. })));
    }

    #[test]
    fn irreducibles_of_small_frames() {
        let f = ex1();
        let j = f.join_irreducibles();
        assert!(crate::order::are_isomorphic(&j, f.base()));
        assert!(j.leq(j.require("phi'").unwrap(), j.require("phi").unwrap()));
        let anti = Frame::new(Poset::discrete(["a", "b"]).unwrap());
        assert!(anti.join_irreducibles().is_discrete());
    }

    #[test]
    fn imports() {
        let two = ExplicitLattice::new(Poset::chain(&["bot", "top"]).unwrap()).unwrap();
        let imported = import_lattice(two).unwrap();
        assert_eq!(imported.frame.base().len(), 1);
        let top = imported.lattice.top();
        assert_eq!(imported.eta(top).len(), 1);

        let m3 = Poset::new(
            ["bot", "a", "b", "c", "top"],
            [("bot", "a"), ("bot", "b"), ("bot", "c"), ("a", "top"), ("b", "top"), ("c", "top")],
        )
        .unwrap();
        assert!(matches!(
            import_lattice(ExplicitLattice::new(m3).unwrap()),
            Err(FrameError::NotDistributive { .. })
        ));

        let (l, elements) = ExplicitLattice::of_frame(&ex1()).unwrap();
        let imported = import_lattice(l).unwrap();
        assert!(crate::order::are_isomorphic(imported.frame.base(), ex1().base()));
        for (i, _) in elements.iter().enumerate() {
            assert_eq!(imported.eta_inv(imported.eta(i)), i);
        }
    }

    #[test]
    fn missing_joins_are_reported() {
        let v = Poset::new(["a", "b", "c"], [("c", "a"), ("c", "b")]).unwrap();
        assert!(matches!(
            ExplicitLattice::new(v),
            Err(FrameError::NotALattice { operation: "join", .. })
        ));
    }
}
