//! The lattice monad `T` over finite posets and its reader-monad presentation.
//!
//! An element of `TX` is a monotone map `b: X → O(Φ)` such that for every
//! condition `φ` the set `{x | φ ∈ b(x)}` has a least element. Principal
//! downsets `↓φ` are the join-irreducibles of `O(Φ)`, so conditions index them
//! directly. `TX` is ordered by reverse pointwise inclusion.

use std::collections::HashMap;

use thiserror::Error;

use crate::bits::Bits;
use crate::frame::Frame;
use crate::order::{Downset, MonotoneMap, Poset};

/// Enumeration by filtering all maps `X → O(Φ)` is used while `|X|·|Φ|` stays
/// within this bound.
pub const FILTER_ENUMERATION_LIMIT: usize = 12;
/// Upper bound on `|X|^|Φ|` when enumerating through reader maps.
pub const READER_ENUMERATION_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonadError {
    #[error("map is not monotone: `{lower}` <= `{upper}` but their images are not ordered")]
    NotMonotone { lower: String, upper: String },
    #[error("no least element carries condition `{condition}`")]
    MinConditionFails { condition: String },
    #[error("table has {got} entries, expected {expected}")]
    WrongArity { expected: usize, got: usize },
    #[error("enumeration of {size} candidates exceeds the limit {limit}")]
    TooLarge { size: usize, limit: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StarMap {
    pub table: Vec<Downset>,
}

impl StarMap {
    pub fn at(&self, x: usize) -> &Downset {
        &self.table[x]
    }

    pub fn validate(&self, x: &Poset, l: &Frame) -> Result<(), MonadError> {
        if self.table.len() != x.len() {
            return Err(MonadError::WrongArity {
                expected: x.len(),
                got: self.table.len(),
            });
        }
        for p in 0..x.len() {
            for q in 0..x.len() {
                if x.leq(p, q) && !self.table[p].is_subset(&self.table[q]) {
                    return Err(MonadError::NotMonotone {
                        lower: x.name(p).to_string(),
                        upper: x.name(q).to_string(),
                    });
                }
            }
        }
        for phi in 0..l.base().len() {
            let carriers = Bits::from_indices(x.len(), (0..x.len()).filter(|&p| self.table[p].contains(phi)));
            if x.minimum_of(&carriers).is_none() {
                return Err(MonadError::MinConditionFails {
                    condition: l.base().name(phi).to_string(),
                });
            }
        }
        Ok(())
    }

    /// `self ≤ other` in `TX`: pointwise reverse inclusion.
    pub fn leq(&self, other: &StarMap) -> bool {
        self.table
            .iter()
            .zip(&other.table)
            .all(|(b, c)| c.is_subset(b))
    }
}

/// A monotone map from the conditions to `X`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ReaderMap {
    pub table: Vec<usize>,
}

impl ReaderMap {
    pub fn at(&self, phi: usize) -> usize {
        self.table[phi]
    }

    pub fn is_monotone(&self, phis: &Poset, x: &Poset) -> bool {
        (0..phis.len()).all(|p| {
            (0..phis.len()).all(|q| !phis.leq(p, q) || x.leq(self.table[p], self.table[q]))
        })
    }

    /// Pointwise order.
    pub fn leq(&self, other: &ReaderMap, x: &Poset) -> bool {
        self.table
            .iter()
            .zip(&other.table)
            .all(|(&p, &q)| x.leq(p, q))
    }
}

/// `τ(b)(φ) = min{x | φ ∈ b(x)}`.
pub fn tau(x: &Poset, l: &Frame, b: &StarMap) -> ReaderMap {
    let table = (0..l.base().len())
        .map(|phi| {
            let carriers = Bits::from_indices(x.len(), (0..x.len()).filter(|&p| b.table[p].contains(phi)));
            x.minimum_of(&carriers)
                .expect("star maps satisfy the min condition")
        })
        .collect();
    ReaderMap { table }
}

/// `τ⁻¹(B)(x) = ⋃{↓φ | B(φ) ≤ x}`.
pub fn tau_inv(x: &Poset, l: &Frame, big_b: &ReaderMap) -> StarMap {
    let base = l.base();
    let table = (0..x.len())
        .map(|p| {
            let mut acc = Bits::empty(base.len());
            for phi in 0..base.len() {
                if x.leq(big_b.table[phi], p) {
                    acc.union_with(base.below(phi));
                }
            }
            Downset(acc)
        })
        .collect();
    StarMap { table }
}

/// `Tf(b)(y) = ⋃_{f(x) ≤ y} b(x)`.
pub fn t_map(f: &MonotoneMap, l: &Frame, b: &StarMap) -> StarMap {
    let table = (0..f.cod.len())
        .map(|y| {
            let mut acc = l.bottom();
            for p in 0..f.dom.len() {
                if f.cod.leq(f.apply(p), y) {
                    acc = acc.union(&b.table[p]);
                }
            }
            acc
        })
        .collect();
    StarMap { table }
}

/// `η(x)(x') = ⊤` if `x ≤ x'`, otherwise `⊥`.
pub fn t_unit(x: &Poset, l: &Frame, p: usize) -> StarMap {
    let table = (0..x.len())
        .map(|q| if x.leq(p, q) { l.top() } else { l.bottom() })
        .collect();
    StarMap { table }
}

/// The finite poset `TX` together with its elements.
#[derive(Clone, Debug)]
pub struct TxSpace {
    pub x: Poset,
    pub frame: Frame,
    pub elements: Vec<StarMap>,
    /// Element `i` is named `t{i:05}`, so name order agrees with index order.
    pub order: Poset,
    index: HashMap<StarMap, usize>,
}

impl TxSpace {
    /// Chooses the filtering route when it fits its bound, otherwise the reader
    /// route.
    pub fn enumerate(x: &Poset, l: &Frame) -> Result<TxSpace, MonadError> {
        if x.len() * l.base().len() <= FILTER_ENUMERATION_LIMIT {
            TxSpace::by_filtering(x, l)
        } else {
            TxSpace::by_reader_maps(x, l)
        }
    }

    /// All maps `X → O(Φ)` that pass [`StarMap::validate`].
    pub fn by_filtering(x: &Poset, l: &Frame) -> Result<TxSpace, MonadError> {
        let size = x.len() * l.base().len();
        if size > FILTER_ENUMERATION_LIMIT {
            return Err(MonadError::TooLarge {
                size,
                limit: FILTER_ENUMERATION_LIMIT,
            });
        }
        let values = l
            .enumerate_elements()
            .expect("guarded by the filter limit");
        let mut elements = Vec::new();
        for code in 0..values.len().pow(x.len() as u32) {
            let mut rest = code;
            let table = (0..x.len())
                .map(|_| {
                    let v = values[rest % values.len()].clone();
                    rest /= values.len();
                    v
                })
                .collect();
            let b = StarMap { table };
            if b.validate(x, l).is_ok() {
                elements.push(b);
            }
        }
        Ok(TxSpace::from_elements(x, l, elements))
    }

    /// Images under `τ⁻¹` of all monotone maps from the conditions to `X`.
    pub fn by_reader_maps(x: &Poset, l: &Frame) -> Result<TxSpace, MonadError> {
        let elements = monotone_reader_maps(l.base(), x)?
            .iter()
            .map(|r| tau_inv(x, l, r))
            .collect();
        Ok(TxSpace::from_elements(x, l, elements))
    }

    fn from_elements(x: &Poset, l: &Frame, mut elements: Vec<StarMap>) -> TxSpace {
        elements.sort();
        elements.dedup();
        let names = (0..elements.len()).map(|i| format!("t{i:05}")).collect();
        let order = Poset::from_relation(names, |i, j| elements[i].leq(&elements[j]))
            .expect("reverse inclusion is an order on star maps");
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();
        TxSpace {
            x: x.clone(),
            frame: l.clone(),
            elements,
            order,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// The elements of `TX` without building its order, sorted.
    pub fn elements_of(x: &Poset, l: &Frame) -> Result<Vec<StarMap>, MonadError> {
        let mut elements: Vec<StarMap> = monotone_reader_maps(l.base(), x)?
            .iter()
            .map(|r| tau_inv(x, l, r))
            .collect();
        elements.sort();
        elements.dedup();
        Ok(elements)
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, b: &StarMap) -> Option<usize> {
        self.index.get(b).copied()
    }

    /// `η_X` as a monotone map `X → TX`.
    pub fn unit_map(&self) -> MonotoneMap {
        let table = (0..self.x.len())
            .map(|p| {
                self.index_of(&t_unit(&self.x, &self.frame, p))
                    .expect("units are star maps")
            })
            .collect();
        MonotoneMap::new(self.x.clone(), self.order.clone(), table).expect("total")
    }
}

/// All monotone maps from `phis` to `x`, in lexicographic order of tables.
pub fn monotone_reader_maps(phis: &Poset, x: &Poset) -> Result<Vec<ReaderMap>, MonadError> {
    let size = x.len().checked_pow(phis.len() as u32).unwrap_or(usize::MAX);
    if size > READER_ENUMERATION_LIMIT {
        return Err(MonadError::TooLarge {
            size,
            limit: READER_ENUMERATION_LIMIT,
        });
    }
    let mut out = Vec::new();
    let mut table = vec![0; phis.len()];
    fill_reader(phis, x, 0, &mut table, &mut out);
    Ok(out)
}

fn fill_reader(phis: &Poset, x: &Poset, i: usize, table: &mut Vec<usize>, out: &mut Vec<ReaderMap>) {
    if i == phis.len() {
        out.push(ReaderMap { table: table.clone() });
        return;
    }
    for v in 0..x.len() {
        let fits = (0..i).all(|j| {
            (!phis.leq(j, i) || x.leq(table[j], v)) && (!phis.leq(i, j) || x.leq(v, table[j]))
        });
        if fits {
            table[i] = v;
            fill_reader(phis, x, i + 1, table, out);
        }
    }
}

/// `μ(h)(x) = ⋃_b h(b) ∩ b(x)` for `h ∈ TTX`, where `tx` enumerates `TX`.
pub fn t_mult(tx: &TxSpace, h: &StarMap) -> StarMap {
    let table = (0..tx.x.len())
        .map(|p| {
            let mut acc = tx.frame.bottom();
            for (i, b) in tx.elements.iter().enumerate() {
                acc = acc.union(&h.table[i].intersection(&b.table[p]));
            }
            acc
        })
        .collect();
    StarMap { table }
}

/// `μ_X` as a monotone map `TTX → TX`.
pub fn mult_map(tx: &TxSpace, ttx: &TxSpace) -> MonotoneMap {
    let table = ttx
        .elements
        .iter()
        .map(|h| {
            tx.index_of(&t_mult(tx, h))
                .expect("multiplication lands in TX")
        })
        .collect();
    MonotoneMap::new(ttx.order.clone(), tx.order.clone(), table).expect("total")
}

/// Reader multiplication `ζ(D)(φ) = D(φ)(φ)`.
pub fn reader_join(d: &[ReaderMap]) -> ReaderMap {
    ReaderMap {
        table: d.iter().enumerate().map(|(phi, inner)| inner.table[phi]).collect(),
    }
}

/// Kleisli composite `μ_Z · Tg · f` of `f: X → TY` and `g: Y → TZ`.
pub fn kleisli_compose(y: &Poset, tz: &TxSpace, f: &[StarMap], g: &[StarMap]) -> Vec<StarMap> {
    let g_map = MonotoneMap {
        dom: y.clone(),
        cod: tz.order.clone(),
        table: g
            .iter()
            .map(|c| tz.index_of(c).expect("g lands in TZ"))
            .collect(),
    };
    f.iter()
        .map(|b| t_mult(tz, &t_map(&g_map, &tz.frame, b)))
        .collect()
}

/// Reader Kleisli composite: `(g ∘ f)(x)(φ) = g(f(x)(φ))(φ)`.
pub fn reader_kleisli_compose(f: &[ReaderMap], g: &[ReaderMap]) -> Vec<ReaderMap> {
    f.iter()
        .map(|fx| ReaderMap {
            table: fx
                .table
                .iter()
                .enumerate()
                .map(|(phi, &y)| g[y].table[phi])
                .collect(),
        })
        .collect()
}
