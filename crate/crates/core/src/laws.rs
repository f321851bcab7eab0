//! Exhaustive law checks for the lattice monad and Birkhoff duality on small
//! carriers.

use crate::frame::{import_lattice, ExplicitLattice, Frame};
use crate::monad::{
    monotone_reader_maps, mult_map, reader_join, t_map, t_mult, t_unit, tau, tau_inv, MonadError, ReaderMap,
    StarMap, TxSpace,
};
use crate::order::{are_isomorphic, MonotoneMap, Poset};

/// Number of individual equations checked and the ones that failed.
#[derive(Clone, Debug, Default)]
pub struct LawReport {
    pub checks: usize,
    pub violations: Vec<String>,
}

impl LawReport {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.violations.len() < 20 {
            self.violations.push(what());
        }
    }

    pub fn merge(&mut self, other: LawReport) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every monotone map between two posets.
pub fn monotone_maps(dom: &Poset, cod: &Poset) -> Vec<MonotoneMap> {
    let mut out = Vec::new();
    let total = cod.len().pow(dom.len() as u32);
    for code in 0..total {
        let mut rest = code;
        let table = (0..dom.len())
            .map(|_| {
                let v = rest % cod.len();
                rest /= cod.len();
                v
            })
            .collect();
        let f = MonotoneMap {
            dom: dom.clone(),
            cod: cod.clone(),
            table,
        };
        if f.is_monotone() {
            out.push(f);
        }
    }
    out
}

/// Checks the `τ` isomorphism, both residuation laws, naturality, the monad
/// laws and agreement of Kleisli composition with the reader side, over all
/// elements of `TX`, `TTX` and `TTTX`.
pub fn monad_laws(x: &Poset, l: &Frame) -> Result<LawReport, MonadError> {
    let mut r = LawReport::default();
    let phis = l.base();
    let tx = TxSpace::enumerate(x, l)?;
    if x.len() * phis.len() <= crate::monad::FILTER_ENUMERATION_LIMIT {
        let other = TxSpace::by_reader_maps(x, l)?;
        r.check(other.elements == tx.elements, || "enumeration routes disagree".into());
    }

    for b in &tx.elements {
        let big = tau(x, l, b);
        r.check(big.is_monotone(phis, x), || format!("tau({b:?}) not monotone"));
        r.check(tau_inv(x, l, &big) == *b, || format!("tau_inv . tau differs at {b:?}"));
        for phi in 0..phis.len() {
            for p in 0..x.len() {
                r.check(x.leq(big.at(phi), p) == b.at(p).contains(phi), || {
                    format!("adjunction fails for {b:?} at ({phi}, {p})")
                });
            }
        }
        for c in &tx.elements {
            r.check(b.leq(c) == tau(x, l, b).leq(&tau(x, l, c), x), || {
                format!("tau does not reflect order on {b:?}, {c:?}")
            });
        }
    }
    let readers = monotone_reader_maps(phis, x)?;
    for big in &readers {
        let b = tau_inv(x, l, big);
        r.check(b.validate(x, l).is_ok(), || format!("tau_inv({big:?}) invalid"));
        r.check(tau(x, l, &b) == *big, || format!("tau . tau_inv differs at {big:?}"));
        for phi in 0..phis.len() {
            for p in 0..x.len() {
                r.check(phis.below(phi).is_subset(b.at(p).bits()) == x.leq(big.at(phi), p), || {
                    format!("residuation fails for {big:?} at ({phi}, {p})")
                });
            }
        }
    }
    r.check(readers.len() == tx.len(), || "TX and reader maps differ in size".into());

    // Naturality of tau along every monotone endomap.
    for f in monotone_maps(x, x) {
        for b in &tx.elements {
            let lhs = tau(x, l, &t_map(&f, l, b));
            let rhs = ReaderMap {
                table: tau(x, l, b).table.iter().map(|&p| f.apply(p)).collect(),
            };
            r.check(lhs == rhs, || format!("naturality fails for {:?} at {b:?}", f.table));
        }
    }

    // Unit laws.
    let ttx = TxSpace::enumerate(&tx.order, l)?;
    let eta = tx.unit_map();
    for (i, b) in tx.elements.iter().enumerate() {
        let lifted = t_map(&eta, l, b);
        r.check(t_mult(&tx, &lifted) == *b, || format!("mu . T eta differs at {b:?}"));
        let wrapped = t_unit(&tx.order, l, i);
        r.check(t_mult(&tx, &wrapped) == *b, || format!("mu . eta T differs at {b:?}"));
    }
    let bottom = StarMap {
        table: vec![l.bottom(); tx.len()],
    };
    r.check(t_mult(&tx, &bottom).table.iter().all(|d| d.is_empty()), || "mu of bottom".into());

    // Multiplication against the reader join.
    for h in &ttx.elements {
        let outer = tau(&tx.order, l, h);
        let d: Vec<ReaderMap> = outer.table.iter().map(|&i| tau(x, l, &tx.elements[i])).collect();
        r.check(tau(x, l, &t_mult(&tx, h)) == reader_join(&d), || {
            format!("mu and the reader join disagree at {h:?}")
        });
    }

    // Associativity over all of TTTX.
    let tttx = TxSpace::elements_of(&ttx.order, l)?;
    let mu = mult_map(&tx, &ttx);
    for (k, big_h) in tttx.iter().enumerate() {
        let left = t_mult(&tx, &t_map(&mu, l, big_h));
        let right = t_mult(&tx, &t_mult(&ttx, big_h));
        r.check(left == right, || format!("associativity fails at TTTX element {k}"));
    }

    // Kleisli composition against reader composition. The composite at x only
    // depends on f(x), so every value b of f is tried with every g.
    for g_map in monotone_maps(x, &tx.order) {
        let g: Vec<StarMap> = g_map.table.iter().map(|&i| tx.elements[i].clone()).collect();
        let g_reader: Vec<ReaderMap> = g.iter().map(|c| tau(x, l, c)).collect();
        for b in &tx.elements {
            let composite = crate::monad::kleisli_compose(x, &tx, std::slice::from_ref(b), &g);
            let reader = crate::monad::reader_kleisli_compose(&[tau(x, l, b)], &g_reader);
            r.check(tau(x, l, &composite[0]) == reader[0], || {
                format!("Kleisli routes disagree for g={:?} at {b:?}", g_map.table)
            });
        }
        // Left unit: g after the unit is g.
        for p in 0..x.len() {
            let unit = t_unit(x, l, p);
            let composite = crate::monad::kleisli_compose(x, &tx, &[unit], &g);
            r.check(composite[0] == g[p], || format!("g . eta differs at {p}"));
        }
    }
    Ok(r)
}

/// Birkhoff round trips for one poset: the principal downsets recover it, the
/// explicit lattice of downsets imports back to it, and `η` is a lattice
/// isomorphism.
pub fn birkhoff_round_trip(p: &Poset) -> LawReport {
    let mut r = LawReport::default();
    let frame = Frame::new(p.clone());
    r.check(are_isomorphic(&frame.join_irreducibles(), p), || {
        format!("principal downsets of {p:?} differ from it")
    });
    let (lattice, elements) = match ExplicitLattice::of_frame(&frame) {
        Ok(v) => v,
        Err(e) => {
            r.check(false, || format!("downsets of {p:?} do not form a lattice: {e}"));
            return r;
        }
    };
    // Join-irreducibility by definition, against the principal downsets.
    let by_definition = (0..elements.len())
        .filter(|&i| lattice.is_join_irreducible(i))
        .count();
    r.check(by_definition == p.len(), || format!("{p:?}: irreducible count differs"));
    let imported = match import_lattice(lattice) {
        Ok(v) => v,
        Err(e) => {
            r.check(false, || format!("downsets of {p:?} rejected: {e}"));
            return r;
        }
    };
    r.check(are_isomorphic(imported.frame.base(), p), || format!("{p:?}: J(L) differs"));
    let all = imported.frame.enumerate_elements().expect("small");
    r.check(all.len() == elements.len(), || format!("{p:?}: element count differs"));
    for l in 0..elements.len() {
        r.check(imported.eta_inv(imported.eta(l)) == l, || format!("{p:?}: eta_inv . eta at {l}"));
    }
    for d in &all {
        r.check(imported.eta(imported.eta_inv(d)) == d, || format!("{p:?}: eta . eta_inv at {d:?}"));
    }
    let lat = &imported.lattice;
    for a in 0..elements.len() {
        for b in 0..elements.len() {
            r.check(
                *imported.eta(lat.join(a, b)) == imported.eta(a).union(imported.eta(b))
                    && *imported.eta(lat.meet(a, b)) == imported.eta(a).intersection(imported.eta(b)),
                || format!("{p:?}: eta is not a lattice map at ({a}, {b})"),
            );
        }
    }
    r
}
