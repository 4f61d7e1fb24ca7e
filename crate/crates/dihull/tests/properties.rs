//! Property tests over randomly drawn small lattices and subsets.

use proptest::prelude::*;

use dihull::completion::{di_closure, is_distributive_join, is_distributive_join_restricted};
use dihull::heyting::{heyting_arrow, heyting_status};
use dihull::order::{ElementId, Subset};
use dihull::search::enumerate_lattices;

fn arb_lattice() -> impl Strategy<Value = dihull::order::BoundedLattice> {
    (1usize..=6, any::<u32>()).prop_map(|(n, pick)| {
        let all = enumerate_lattices(n).unwrap();
        all[pick as usize % all.len()].clone()
    })
}

proptest! {
    #[test]
    fn join_set_is_the_least_upper_bound(l in arb_lattice(), mask in any::<u64>()) {
        let mask = mask & ((1 << l.n()) - 1);
        let s = Subset::from_mask(l.n(), mask);
        let j = l.join_set(&s);
        for x in s.iter() {
            prop_assert!(l.leq(x, j));
        }
        for b in l.elements() {
            if s.iter().all(|x| l.leq(x, b)) {
                prop_assert!(l.leq(j, b));
            }
        }
        // Dual for the meet.
        let m = l.meet_set(&s);
        for x in s.iter() {
            prop_assert!(l.leq(m, x));
        }
        for b in l.elements() {
            if s.iter().all(|x| l.leq(b, x)) {
                prop_assert!(l.leq(b, m));
            }
        }
    }

    #[test]
    fn ideal_closure_is_a_closure_operator(
        l in arb_lattice(),
        a in any::<u64>(),
        b in any::<u64>(),
    ) {
        let full = (1u64 << l.n()) - 1;
        let (a, b) = (a & full, b & full);
        let close = |m: u64| {
            di_closure(&l, &Subset::from_mask(l.n(), m), 16)
                .unwrap()
                .members
                .as_mask()
        };
        let ca = close(a);
        prop_assert_eq!(a & !ca, 0, "increasing");
        prop_assert_eq!(close(ca), ca, "idempotent");
        if a & !b == 0 {
            prop_assert_eq!(ca & !close(b), 0, "isotone");
        }
    }

    #[test]
    fn distributivity_forms_agree_everywhere(l in arb_lattice(), mask in any::<u64>()) {
        let mask = mask & ((1 << l.n()) - 1);
        let s = Subset::from_mask(l.n(), mask);
        prop_assert_eq!(
            is_distributive_join(&l, &s),
            is_distributive_join_restricted(&l, &s)
        );
    }

    #[test]
    fn arrow_adjunction_on_distributive_lattices(l in arb_lattice()) {
        if !heyting_status(&l).is_complete_heyting {
            return Ok(());
        }
        for a in l.elements() {
            for b in l.elements() {
                for c in l.elements() {
                    let arrow = heyting_arrow(&l, b, c).unwrap();
                    prop_assert_eq!(l.leq(l.meet(a, b), c), l.leq(a, arrow));
                }
            }
        }
    }

    #[test]
    fn subset_operations_behave_like_sets(
        width in 1usize..=80,
        xs in proptest::collection::vec(any::<u16>(), 0..20),
        ys in proptest::collection::vec(any::<u16>(), 0..20),
    ) {
        let mut a = Subset::empty(width);
        let mut b = Subset::empty(width);
        for x in &xs {
            a.insert(ElementId::new(*x as usize % width));
        }
        for y in &ys {
            b.insert(ElementId::new(*y as usize % width));
        }
        let union = a.union(&b);
        let inter = a.intersect(&b);
        for i in 0..width {
            let e = ElementId::new(i);
            prop_assert_eq!(union.contains(e), a.contains(e) || b.contains(e));
            prop_assert_eq!(inter.contains(e), a.contains(e) && b.contains(e));
        }
        prop_assert!(inter.is_subset_of(&a) && inter.is_subset_of(&b));
        prop_assert!(a.is_subset_of(&union) && b.is_subset_of(&union));
        prop_assert_eq!(a.difference(&b).count() + inter.count(), a.count());
    }
}
