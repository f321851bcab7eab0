use std::sync::OnceLock;

use ctsmin_core::laws::monotone_maps;
use ctsmin_core::order::{are_isomorphic, labelled_posets, posets_up_to_iso, Poset};
use ctsmin_core::Bits;
use proptest::prelude::*;

fn small_posets() -> &'static [Poset] {
    static CELL: OnceLock<Vec<Poset>> = OnceLock::new();
    CELL.get_or_init(|| (1..=4).flat_map(labelled_posets).collect())
}

fn subset(p: &Poset, mask: u64) -> Bits {
    Bits::from_indices(p.len(), (0..p.len()).filter(|i| mask >> i & 1 == 1))
}

proptest! {
    #[test]
    fn close_down_is_a_closure(k in 0usize..242, m1 in any::<u64>(), m2 in any::<u64>()) {
        let p = &small_posets()[k];
        let a = subset(p, m1);
        let b = a.union(&subset(p, m2));
        let ca = p.close_down(&a);
        prop_assert!(a.is_subset(&ca));
        prop_assert!(p.is_downward_closed(&ca));
        prop_assert_eq!(p.close_down(&ca), ca.clone());
        prop_assert!(ca.is_subset(&p.close_down(&b)));
        let least = (0..1u64 << p.len())
            .map(|m| subset(p, m))
            .filter(|s| p.is_downward_closed(s) && a.is_subset(s))
            .all(|s| ca.is_subset(&s));
        prop_assert!(least);
    }

    #[test]
    fn coequaliser_is_universal(k in 0usize..242, raw in proptest::collection::vec((0usize..4, 0usize..4), 0..3)) {
        let p = &small_posets()[k];
        let n = p.len();
        let pairs: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let q = p.coequalise(&pairs);
        for &(a, b) in &pairs {
            prop_assert_eq!(q.map[a], q.map[b]);
        }
        for a in 0..n {
            for b in 0..n {
                if p.leq(a, b) {
                    prop_assert!(q.poset.leq(q.map[a], q.map[b]));
                }
            }
        }
        for target in (1..=3).flat_map(posets_up_to_iso) {
            for g in monotone_maps(p, &target) {
                if pairs.iter().any(|&(a, b)| g.apply(a) != g.apply(b)) {
                    continue;
                }
                let h: Vec<usize> = q.classes.iter().map(|c| g.apply(c[0])).collect();
                for c in &q.classes {
                    prop_assert!(c.iter().all(|&x| g.apply(x) == h[q.map[c[0]]]));
                }
                for i in 0..h.len() {
                    for j in 0..h.len() {
                        if q.poset.leq(i, j) {
                            prop_assert!(target.leq(h[i], h[j]));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn enumeration_counts() {
    let iso: Vec<usize> = (0..=5).map(|n| posets_up_to_iso(n).len()).collect();
    assert_eq!(iso, [1, 1, 2, 5, 16, 63]);
    let labelled: Vec<usize> = (0..=4).map(|n| labelled_posets(n).len()).collect();
    assert_eq!(labelled, [1, 1, 3, 19, 219]);
    assert_eq!(small_posets().len(), 242);
    let four = posets_up_to_iso(4);
    for a in 0..four.len() {
        for b in 0..four.len() {
            assert_eq!(are_isomorphic(&four[a], &four[b]), a == b);
        }
    }
}

#[test]
fn cycles_are_rejected() {
    let err = Poset::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")]).unwrap_err();
    assert!(matches!(err, ctsmin_core::OrderError::AntisymmetryViolation { .. }));
}
