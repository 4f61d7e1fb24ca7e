//! Distributive joins and ideals, the distributive hull `DI(L)`, the
//! MacNeille completion and downset completions.
//!
//! All product lattices built here are families of subsets of the base,
//! ordered by inclusion, with meet given by intersection and join by the
//! least member of the family containing the union. Families are sorted
//! canonically (by cardinality, then numerically) so results never depend
//! on enumeration schedule.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::heyting;
use crate::order::{BoundedLattice, ElementId, LatticeMap, Poset, Subset};
use crate::{Error, Result, MAX_MATERIALIZED};

/// Precomputed family `D(L)` of subsets with a distributive join, with the
/// join of every subset cached alongside.
pub struct DistributiveFamily {
    n: usize,
    flags: Vec<u64>,
    joins: Vec<ElementId>,
}

impl DistributiveFamily {
    #[inline]
    pub fn is_distributive(&self, mask: u64) -> bool {
        self.flags[(mask / 64) as usize] >> (mask % 64) & 1 == 1
    }

    #[inline]
    pub fn join(&self, mask: u64) -> ElementId {
        self.joins[mask as usize]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of subsets with a distributive join.
    pub fn count(&self) -> usize {
        self.flags.iter().map(|b| b.count_ones() as usize).sum()
    }
}

/// Distributive-join test, quantifier form: `b /\ \/A = \/ { b /\ a }` for
/// every `b`.
pub fn is_distributive_join(l: &BoundedLattice, a: &Subset) -> bool {
    let j = l.join_set(a);
    l.elements().all(|b| {
        let mut acc = l.bottom();
        for x in a.iter() {
            acc = l.join(acc, l.meet(b, x));
        }
        l.meet(b, j) == acc
    })
}

/// Distributive-join test, restricted form: `b <= \/A` implies
/// `b = \/ { b /\ a }`. Agrees with [`is_distributive_join`] on every
/// input; kept separate as a self-check of that equivalence.
pub fn is_distributive_join_restricted(l: &BoundedLattice, a: &Subset) -> bool {
    let j = l.join_set(a);
    l.elements().all(|b| {
        if !l.leq(b, j) {
            return true;
        }
        let mut acc = l.bottom();
        for x in a.iter() {
            acc = l.join(acc, l.meet(b, x));
        }
        b == acc
    })
}

/// Enumerates `D(L)`, the family of all subsets with a distributive join.
pub fn distributive_subsets(l: &BoundedLattice, max_bits: usize) -> Result<DistributiveFamily> {
    let n = l.n();
    if n > max_bits || n > 63 {
        return Err(Error::CapExceeded {
            what: "distributive-subset enumeration",
            needed: n,
            cap: max_bits.min(63),
        });
    }
    let total = 1usize << n;
    let mut joins = vec![l.bottom(); total];
    for mask in 1..total as u64 {
        let low = mask.trailing_zeros() as usize;
        joins[mask as usize] = l.join(joins[(mask & (mask - 1)) as usize], ElementId::new(low));
    }
    let mut flags = vec![0u64; total.div_ceil(64)];
    for mask in 0..total as u64 {
        let j = joins[mask as usize];
        let mut ok = true;
        'outer: for b in l.elements() {
            let mut acc = l.bottom();
            let mut m = mask;
            while m != 0 {
                let x = ElementId::new(m.trailing_zeros() as usize);
                acc = l.join(acc, l.meet(b, x));
                m &= m - 1;
            }
            if l.meet(b, j) != acc {
                ok = false;
                break 'outer;
            }
        }
        if ok {
            flags[(mask / 64) as usize] |= 1 << (mask % 64);
        }
    }
    Ok(DistributiveFamily { n, flags, joins })
}

/// Nonempty downset closed under existing distributive joins.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DistributiveIdeal {
    pub members: Subset,
}

fn down_masks(l: &BoundedLattice) -> Vec<u64> {
    l.elements().map(|e| l.poset().down_mask(e)).collect()
}

fn down_close(mask: u64, down: &[u64]) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out |= down[i];
        m &= m - 1;
    }
    out
}

pub(crate) fn di_closure_mask(l: &BoundedLattice, family: &DistributiveFamily, a: u64) -> u64 {
    let down = down_masks(l);
    let mut cur = if a == 0 {
        1 << l.bottom().idx()
    } else {
        down_close(a, &down)
    };
    loop {
        let mut next = cur;
        let mut sub = cur;
        loop {
            if family.is_distributive(sub) {
                next |= 1 << family.join(sub).idx();
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & cur;
        }
        next = down_close(next, &down) | next;
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Least distributive ideal containing `a`, computed as a fixpoint that
/// alternates downward closure with adding existing distributive joins.
/// The empty set closes to the least ideal, the principal downset of 0.
pub fn di_closure(l: &BoundedLattice, a: &Subset, max_bits: usize) -> Result<DistributiveIdeal> {
    let family = distributive_subsets(l, max_bits)?;
    let mask = di_closure_mask(l, &family, a.as_mask());
    Ok(DistributiveIdeal {
        members: Subset::from_mask(l.n(), mask),
    })
}

/// All downsets of the lattice, generated by membership recursion along a
/// linear extension. Includes the empty downset.
pub(crate) fn all_downsets(l: &BoundedLattice) -> Vec<u64> {
    let n = l.n();
    let order = l.poset().linear_extension();
    let strict_down: Vec<u64> = l
        .elements()
        .map(|e| l.poset().down_mask(e) & !(1u64 << e.idx()))
        .collect();

    fn rec(i: usize, order: &[ElementId], strict_down: &[u64], cur: u64, out: &mut Vec<u64>) {
        if i == order.len() {
            out.push(cur);
            return;
        }
        let e = order[i];
        rec(i + 1, order, strict_down, cur, out);
        if strict_down[e.idx()] & !cur == 0 {
            rec(i + 1, order, strict_down, cur | 1 << e.idx(), out);
        }
    }

    let mut out = Vec::new();
    rec(0, &order, &strict_down, 0, &mut out);
    debug_assert!(out.len() <= 1 << n);
    out
}

/// Builds a bounded lattice from a family of subsets of a ground set that
/// is closed under pairwise intersection and contains a greatest member.
/// Meet is intersection; join is the least family member containing the
/// union.
pub(crate) fn lattice_of_sets(
    _width: usize,
    mut sets: Vec<u64>,
    label: impl Fn(u64) -> String,
) -> Result<(BoundedLattice, Vec<u64>)> {
    sets.sort_by_key(|&m| (m.count_ones(), m));
    sets.dedup();
    if sets.is_empty() {
        return Err(Error::NoBottom);
    }
    if sets.len() > MAX_MATERIALIZED {
        return Err(Error::MaterializedTooLarge {
            what: "product lattice",
            needed: sets.len(),
            cap: MAX_MATERIALIZED,
        });
    }
    let n = sets.len();
    let bottom = sets[0];
    let top = sets[n - 1];
    if !sets.iter().all(|&s| bottom & !s == 0 && s & !top == 0) {
        return Err(Error::Alarm {
            claim: "set family has global bounds",
            detail: "least or greatest member missing".to_string(),
        });
    }
    let index: HashMap<u64, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let labels: Vec<String> = sets.iter().map(|&s| label(s)).collect();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = sets[i] & !sets[j] == 0;
        }
    }
    let mut meet = vec![ElementId(0); n * n];
    let mut join = vec![ElementId(0); n * n];
    for i in 0..n {
        for j in 0..n {
            let inter = sets[i] & sets[j];
            let m = *index.get(&inter).ok_or_else(|| Error::Alarm {
                claim: "set family closed under intersections",
                detail: format!("missing {} /\\ {}", labels[i], labels[j]),
            })?;
            meet[i * n + j] = ElementId::new(m);
            let uni = sets[i] | sets[j];
            let jj = match index.get(&uni) {
                Some(&k) => k,
                None => sets
                    .iter()
                    .position(|&s| uni & !s == 0)
                    .ok_or_else(|| Error::Alarm {
                        claim: "set family has least upper sets",
                        detail: format!("missing bound for {} \\/ {}", labels[i], labels[j]),
                    })?,
            };
            join[i * n + j] = ElementId::new(jj);
        }
    }
    let poset = Poset::from_relation(labels, leq);
    let lattice =
        BoundedLattice::from_tables(poset, meet, join, ElementId::new(0), ElementId::new(n - 1));
    Ok((lattice, sets))
}

fn render_base_subset(l: &BoundedLattice, mask: u64) -> String {
    l.poset().render_subset(&Subset::from_mask(l.n(), mask))
}

/// The distributive hull: all distributive ideals ordered by inclusion,
/// materialized as a bounded lattice with the embedding `a -> down(a)`.
pub struct HullLattice {
    pub base: BoundedLattice,
    pub ideals: Vec<Subset>,
    pub lattice: BoundedLattice,
    pub embedding: LatticeMap,
}

impl HullLattice {
    pub fn ideal_members(&self, h: ElementId) -> &Subset {
        &self.ideals[h.idx()]
    }

    pub fn index_of(&self, members: &Subset) -> Option<ElementId> {
        self.ideals
            .iter()
            .position(|m| m == members)
            .map(ElementId::new)
    }
}

/// Enumerates all distributive ideals of `l` and assembles the hull.
pub fn distributive_ideals(l: &BoundedLattice, max_bits: usize) -> Result<HullLattice> {
    let n = l.n();
    if n > max_bits || n > 63 {
        return Err(Error::CapExceeded {
            what: "distributive-ideal enumeration",
            needed: n,
            cap: max_bits.min(63),
        });
    }
    let family = distributive_subsets(l, max_bits)?;
    let bottom_bit = 1u64 << l.bottom().idx();
    // Per-candidate closure filtering is independent; the family is sorted
    // canonically afterwards, so the result never depends on the schedule.
    let ideals: Vec<u64> = all_downsets(l)
        .into_par_iter()
        .filter(|&d| {
            if d & bottom_bit == 0 {
                return false;
            }
            let mut sub = d;
            loop {
                if family.is_distributive(sub) && d & (1 << family.join(sub).idx()) == 0 {
                    return false;
                }
                if sub == 0 {
                    return true;
                }
                sub = (sub - 1) & d;
            }
        })
        .collect();
    let (lattice, sets) = lattice_of_sets(n, ideals, |m| render_base_subset(l, m))?;
    let index: HashMap<u64, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let embedding = LatticeMap::from_fn(n, |a| ElementId::new(index[&l.poset().down_mask(a)]));
    Ok(HullLattice {
        base: l.clone(),
        ideals: sets.iter().map(|&m| Subset::from_mask(n, m)).collect(),
        lattice,
        embedding,
    })
}

/// MacNeille completion of a poset: all intersections of principal
/// downsets (the empty intersection giving the full ground set), ordered
/// by inclusion, together with the embedding `a -> down(a)`.
pub fn macneille(p: &Poset) -> Result<(BoundedLattice, LatticeMap)> {
    let n = p.n();
    if n > 63 {
        return Err(Error::CapExceeded {
            what: "MacNeille completion",
            needed: n,
            cap: 63,
        });
    }
    let ground: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let principal: Vec<u64> = p.elements().map(|e| p.down_mask(e)).collect();
    let mut cuts: Vec<u64> = vec![ground];
    cuts.extend(&principal);
    cuts.sort_unstable();
    cuts.dedup();
    // Close under pairwise intersections.
    loop {
        let mut added = Vec::new();
        for i in 0..cuts.len() {
            for j in i + 1..cuts.len() {
                let x = cuts[i] & cuts[j];
                if !cuts.contains(&x) && !added.contains(&x) {
                    added.push(x);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        cuts.extend(added);
        cuts.sort_unstable();
        cuts.dedup();
    }
    let (lattice, sets) = lattice_of_sets(n, cuts, |m| p.render_subset(&Subset::from_mask(n, m)))?;
    let index: HashMap<u64, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let embedding = LatticeMap::from_fn(n, |a| ElementId::new(index[&principal[a.idx()]]));
    Ok((lattice, embedding))
}

/// Downset completion `I(L)`: every downward-closed subset including the
/// empty one, ordered by inclusion.
pub fn downset_lattice(l: &BoundedLattice, max_bits: usize) -> Result<BoundedLattice> {
    if l.n() > max_bits || l.n() > 63 {
        return Err(Error::CapExceeded {
            what: "downset enumeration",
            needed: l.n(),
            cap: max_bits.min(63),
        });
    }
    let (lattice, _) = lattice_of_sets(l.n(), all_downsets(l), |m| render_base_subset(l, m))?;
    Ok(lattice)
}

/// Lattice of nonempty downsets (those containing the bottom element),
/// the order-ideal completion proper. Returns the lattice together with
/// the member sets in element order.
pub fn nonempty_downset_lattice(
    l: &BoundedLattice,
    max_bits: usize,
) -> Result<(BoundedLattice, Vec<Subset>)> {
    if l.n() > max_bits || l.n() > 63 {
        return Err(Error::CapExceeded {
            what: "downset enumeration",
            needed: l.n(),
            cap: max_bits.min(63),
        });
    }
    let bottom_bit = 1u64 << l.bottom().idx();
    let sets: Vec<u64> = all_downsets(l)
        .into_iter()
        .filter(|d| d & bottom_bit != 0)
        .collect();
    let (lattice, sets) = lattice_of_sets(l.n(), sets, |m| render_base_subset(l, m))?;
    let subsets = sets.iter().map(|&m| Subset::from_mask(l.n(), m)).collect();
    Ok((lattice, subsets))
}

/// Outcome of checking the implicit hull characterization for an embedding
/// `e : l -> h`.
#[derive(Clone, Debug)]
pub struct HullReport {
    pub balanced_inf_embedding: bool,
    pub join_dense: bool,
    pub preserves_distributive_joins: bool,
    pub hull_heyting: bool,
    pub notes: Vec<String>,
}

impl HullReport {
    pub fn all(&self) -> bool {
        self.balanced_inf_embedding
            && self.join_dense
            && self.preserves_distributive_joins
            && self.hull_heyting
    }
}

/// Verifies the four conditions that characterize the distributive hull:
/// `e` is a balanced inf-embedding, `l` is join-dense in `h`, existing
/// distributive joins are preserved, and `h` is a complete Heyting algebra.
pub fn verify_hull(
    l: &BoundedLattice,
    h: &BoundedLattice,
    e: &LatticeMap,
    max_bits: usize,
) -> Result<HullReport> {
    let mut notes = Vec::new();
    let pres = crate::order::check_map(l, h, e)?;
    let balanced_inf_embedding = pres.is_balanced_inf_embedding();
    if !balanced_inf_embedding {
        notes.push("embedding is not a balanced inf-embedding".to_string());
    }

    let mut join_dense = true;
    for hh in h.elements() {
        let mut below = Subset::empty(h.n());
        for b in l.elements() {
            if h.leq(e.apply(b), hh) {
                below.insert(e.apply(b));
            }
        }
        if h.join_set(&below) != hh {
            join_dense = false;
            notes.push(format!("join-density fails at {}", h.label(hh)));
            break;
        }
    }

    let family = distributive_subsets(l, max_bits)?;
    let mut preserves = true;
    'masks: for mask in 0..(1u64 << l.n()) {
        if !family.is_distributive(mask) {
            continue;
        }
        let mut hj = h.bottom();
        let mut m = mask;
        while m != 0 {
            let x = ElementId::new(m.trailing_zeros() as usize);
            hj = h.join(hj, e.apply(x));
            m &= m - 1;
        }
        if hj != e.apply(family.join(mask)) {
            preserves = false;
            notes.push(format!(
                "distributive join of {} is not preserved",
                render_base_subset(l, mask)
            ));
            break 'masks;
        }
    }

    let status = heyting::heyting_status(h);
    if !status.is_complete_heyting {
        notes.push("codomain is not a complete Heyting algebra".to_string());
    }
    Ok(HullReport {
        balanced_inf_embedding,
        join_dense,
        preserves_distributive_joins: preserves,
        hull_heyting: status.is_complete_heyting,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::order::find_isomorphism;

    fn subset_of(l: &BoundedLattice, labels: &[&str]) -> Subset {
        let mut s = Subset::empty(l.n());
        for lab in labels {
            s.insert(l.poset().element_by_label(lab).unwrap());
        }
        s
    }

    /// Independent oracle: the least distributive ideal as the intersection
    /// of all enumerated ideals containing the seed.
    fn di_closure_oracle(l: &BoundedLattice, seed: u64) -> u64 {
        let hull = distributive_ideals(l, 16).unwrap();
        let mut acc = !0u64;
        for ideal in &hull.ideals {
            let m = ideal.as_mask();
            if seed & !m == 0 {
                acc &= m;
            }
        }
        acc & ((1 << l.n()) - 1)
    }

    #[test]
    fn empty_set_always_distributive() {
        for (_, l) in catalog::catalog_lattices() {
            assert!(is_distributive_join(&l, &Subset::empty(l.n())));
        }
    }

    #[test]
    fn m3_pair_not_distributive_triple_is() {
        let m3 = catalog::m3();
        assert!(!is_distributive_join(&m3, &subset_of(&m3, &["a", "b"])));
        assert!(is_distributive_join(&m3, &subset_of(&m3, &["a", "b", "c"])));
    }

    #[test]
    fn distributivity_forms_agree() {
        for (_, l) in catalog::catalog_lattices() {
            if l.n() > 8 {
                continue;
            }
            for mask in 0..(1u64 << l.n()) {
                let s = Subset::from_mask(l.n(), mask);
                assert_eq!(
                    is_distributive_join(&l, &s),
                    is_distributive_join_restricted(&l, &s),
                    "forms disagree on mask {mask:#b}"
                );
            }
        }
    }

    #[test]
    fn chain_and_boolean_subsets_all_distributive() {
        let c3 = catalog::chain(3);
        let fam = distributive_subsets(&c3, 16).unwrap();
        assert_eq!(fam.count(), 8);
        let b2 = catalog::boolean(2);
        let fam = distributive_subsets(&b2, 16).unwrap();
        assert_eq!(fam.count(), 16);
    }

    #[test]
    fn n5_distributive_family() {
        let n5 = catalog::n5();
        let fam = distributive_subsets(&n5, 16).unwrap();
        let ab = subset_of(&n5, &["a", "b"]).as_mask();
        let cb = subset_of(&n5, &["c", "b"]).as_mask();
        assert!(!fam.is_distributive(ab));
        assert!(fam.is_distributive(cb));
    }

    #[test]
    fn di_closure_examples() {
        let m3 = catalog::m3();
        let a = subset_of(&m3, &["a"]);
        let c = di_closure(&m3, &a, 16).unwrap();
        assert_eq!(c.members, subset_of(&m3, &["0", "a"]));

        let ab = subset_of(&m3, &["a", "b"]);
        let c = di_closure(&m3, &ab, 16).unwrap();
        assert_eq!(c.members, subset_of(&m3, &["0", "a", "b"]));

        let abc = subset_of(&m3, &["a", "b", "c"]);
        let c = di_closure(&m3, &abc, 16).unwrap();
        assert_eq!(c.members, Subset::full(5));
    }

    #[test]
    fn di_closure_matches_intersection_oracle() {
        for (_, l) in catalog::catalog_lattices() {
            if l.n() > 8 {
                continue;
            }
            for mask in 0..(1u64 << l.n()) {
                let got = di_closure(&l, &Subset::from_mask(l.n(), mask), 16)
                    .unwrap()
                    .members
                    .as_mask();
                let want = if mask == 0 {
                    di_closure_oracle(&l, 1 << l.bottom().idx())
                } else {
                    di_closure_oracle(&l, mask)
                };
                assert_eq!(got, want, "mask {mask}");
            }
        }
    }

    #[test]
    fn di_closure_is_a_closure_on_subsets() {
        let n5 = catalog::n5();
        let close = |m: u64| {
            di_closure(&n5, &Subset::from_mask(5, m), 16)
                .unwrap()
                .members
                .as_mask()
        };
        for m in 0..32u64 {
            let c = close(m);
            assert_eq!(m & !c, 0, "increasing fails");
            assert_eq!(close(c), c, "idempotent fails");
            for m2 in 0..32u64 {
                if m & !m2 == 0 {
                    assert_eq!(close(m) & !close(m2), 0, "isotone fails");
                }
            }
        }
    }

    #[test]
    fn hull_of_chain_is_chain() {
        let c3 = catalog::chain(3);
        let hull = distributive_ideals(&c3, 16).unwrap();
        assert_eq!(hull.lattice.n(), 3);
        assert!(find_isomorphism(&hull.lattice, &c3, &[]).is_some());
    }

    #[test]
    fn hull_of_m3_is_boolean_cube() {
        let m3 = catalog::m3();
        let hull = distributive_ideals(&m3, 16).unwrap();
        assert_eq!(hull.lattice.n(), 8);
        assert!(find_isomorphism(&hull.lattice, &catalog::boolean(3), &[]).is_some());
    }

    #[test]
    fn hull_of_n5_has_exactly_the_six_ideals() {
        let n5 = catalog::n5();
        let hull = distributive_ideals(&n5, 16).unwrap();
        let expected: Vec<Subset> = [
            vec!["0"],
            vec!["0", "a"],
            vec!["0", "b"],
            vec!["0", "a", "b"],
            vec!["0", "a", "c"],
            vec!["0", "a", "b", "c", "1"],
        ]
        .iter()
        .map(|labs| subset_of(&n5, labs))
        .collect();
        let mut got = hull.ideals.clone();
        let mut want = expected;
        got.sort_by_key(|s| s.sort_key());
        want.sort_by_key(|s| s.sort_key());
        assert_eq!(got, want);
    }

    #[test]
    fn hull_ideals_closed_under_intersection() {
        for (_, l) in catalog::catalog_lattices() {
            if l.n() > 8 {
                continue;
            }
            let hull = distributive_ideals(&l, 16).unwrap();
            for a in &hull.ideals {
                for b in &hull.ideals {
                    let inter = a.intersect(b);
                    assert!(hull.ideals.contains(&inter));
                }
            }
        }
    }

    #[test]
    fn macneille_of_bounded_lattice_is_itself() {
        for (name, l) in catalog::catalog_lattices() {
            let (completion, e) = macneille(l.poset()).unwrap();
            assert_eq!(completion.n(), l.n(), "{name}");
            assert!(find_isomorphism(&completion, &l, &[]).is_some(), "{name}");
            let rep = crate::order::check_map(&l, &completion, &e).unwrap();
            assert!(rep.order_embedding && rep.preserves_all_meets && rep.preserves_all_joins);
        }
    }

    #[test]
    fn macneille_of_antichain_is_square() {
        let p = Poset::from_covers(vec!["a".into(), "b".into()], &[]).unwrap();
        let (completion, e) = macneille(&p).unwrap();
        assert_eq!(completion.n(), 4);
        assert!(find_isomorphism(&completion, &catalog::boolean(2), &[]).is_some());
        let a = completion.poset();
        assert!(!a.leq(e.apply(ElementId(0)), e.apply(ElementId(1))));
    }

    #[test]
    fn macneille_adds_missing_top() {
        let p = Poset::from_covers(vec!["0".into(), "a".into(), "b".into()], &[(0, 1), (0, 2)])
            .unwrap();
        let (completion, _) = macneille(&p).unwrap();
        assert_eq!(completion.n(), 4);
        assert!(find_isomorphism(&completion, &catalog::boolean(2), &[]).is_some());
    }

    #[test]
    fn downset_lattice_examples() {
        let c2 = catalog::chain(2);
        let i = downset_lattice(&c2, 16).unwrap();
        assert_eq!(i.n(), 3);
        assert!(find_isomorphism(&i, &catalog::chain(3), &[]).is_some());

        let b2 = catalog::boolean(2);
        assert_eq!(downset_lattice(&b2, 16).unwrap().n(), 6);

        let c1 = catalog::chain(1);
        let i = downset_lattice(&c1, 16).unwrap();
        assert_eq!(i.n(), 2);
    }

    #[test]
    fn hull_passes_verification_on_catalog() {
        for (name, l) in catalog::catalog_lattices() {
            let hull = distributive_ideals(&l, 16).unwrap();
            let rep = verify_hull(&l, &hull.lattice, &hull.embedding, 16).unwrap();
            assert!(rep.all(), "{name}: {:?}", rep.notes);
        }
    }

    #[test]
    fn oversized_extension_fails_condition_two() {
        // Square {0,a,a',1} included into {0,a,a',b,1} with a,a' < b < 1:
        // the distributive join a \/ a' = 1 is not preserved.
        let l = catalog::boolean(2);
        let labels = ["0", "a", "b", "s", "1"].map(String::from).to_vec();
        let covers = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)];
        let h = BoundedLattice::from_poset(Poset::from_covers(labels, &covers).unwrap()).unwrap();
        let e = LatticeMap {
            table: vec![ElementId(0), ElementId(1), ElementId(2), ElementId(4)],
        };
        let rep = verify_hull(&l, &h, &e, 16).unwrap();
        assert!(rep.balanced_inf_embedding);
        assert!(!rep.preserves_distributive_joins);
    }

    #[test]
    fn boolean_lattice_is_its_own_hull() {
        let b2 = catalog::boolean(2);
        let id = LatticeMap::identity(4);
        let rep = verify_hull(&b2, &b2, &id, 16).unwrap();
        assert!(rep.all());
    }

    #[test]
    fn distributive_lattices_have_principal_hulls() {
        for l in [catalog::chain(4), catalog::boolean(2), catalog::boolean(3)] {
            let hull = distributive_ideals(&l, 16).unwrap();
            assert_eq!(hull.lattice.n(), l.n());
            assert!(find_isomorphism(&hull.lattice, &l, &[]).is_some());
        }
    }
}
