//! Operational resolution on hulls, distributive-join-dense subobjects,
//! and the two maps realizing the correspondence between complete lattices
//! and Heyting algebras carrying a DJD closure.

use crate::completion::{distributive_ideals, distributive_subsets, HullLattice};
use crate::heyting::heyting_status;
use crate::order::{is_closure, BoundedLattice, ElementId, LatticeMap, Subset};
use crate::{Error, Result};

/// A complete Heyting algebra together with a normalized DJD closure.
#[derive(Clone, Debug)]
pub struct ResolutionPair {
    pub hull: BoundedLattice,
    pub closure: LatticeMap,
}

impl ResolutionPair {
    /// Validates the defining invariants: the closure flags, normalization,
    /// a Heyting carrier, and a DJD range.
    pub fn new(hull: BoundedLattice, closure: LatticeMap, max_bits: usize) -> Result<Self> {
        let rep = is_closure(&hull, &closure);
        if !rep.is_closure() || !rep.normalized {
            return Err(Error::Alarm {
                claim: "resolution pair closure",
                detail: "map is not a normalized closure".to_string(),
            });
        }
        if !heyting_status(&hull).is_complete_heyting {
            return Err(Error::NotHeyting {
                witness: "carrier of the resolution pair".to_string(),
            });
        }
        let mut range = Subset::empty(hull.n());
        for a in hull.elements() {
            range.insert(closure.apply(a));
        }
        let djd = is_djd(&hull, &range, max_bits)?;
        if !djd.is_djd() {
            return Err(Error::Alarm {
                claim: "resolution pair range",
                detail: "closure range is not distributive-join dense".to_string(),
            });
        }
        Ok(ResolutionPair { hull, closure })
    }

    pub fn range(&self) -> Subset {
        let mut range = Subset::empty(self.hull.n());
        for a in self.hull.elements() {
            range.insert(self.closure.apply(a));
        }
        range
    }
}

/// The operational resolution on a hull: an ideal maps to the principal
/// ideal of its base join. A normalized closure whose range is exactly the
/// principal ideals.
pub fn operational_resolution(hull: &HullLattice) -> LatticeMap {
    LatticeMap::from_fn(hull.lattice.n(), |i| {
        let members = hull.ideal_members(i);
        let j = hull.base.join_set(members);
        hull.embedding.apply(j)
    })
}

/// Flags of the distributive-join-density check for a meet-closed subset.
#[derive(Clone, Debug)]
pub struct DjdReport {
    pub join_dense: bool,
    pub downsets_are_ideals: bool,
    pub preserves_distributive_joins: bool,
}

impl DjdReport {
    pub fn is_djd(&self) -> bool {
        self.join_dense && self.downsets_are_ideals
    }
}

/// Checks distributive-join density of `m` inside `h` by both available
/// formulations and fails loudly if they ever disagree: (a) every
/// principal downset of `h` restricted to `m` is a distributive ideal of
/// the sublattice on `m`, and (b) the inclusion preserves existing
/// distributive joins.
pub fn is_djd(h: &BoundedLattice, m: &Subset, max_bits: usize) -> Result<DjdReport> {
    if !m.contains(h.top()) {
        return Err(Error::MissingTop);
    }
    for x in m.iter() {
        for y in m.iter() {
            if !m.contains(h.meet(x, y)) {
                return Err(Error::NotMeetClosed {
                    witness: format!("{} and {}", h.label(x), h.label(y)),
                });
            }
        }
    }
    let keep: Vec<ElementId> = m.iter().collect();
    let sub = BoundedLattice::from_poset(h.poset().induced(m))?;
    if sub.n() > max_bits || sub.n() > 63 {
        return Err(Error::CapExceeded {
            what: "DJD subobject check",
            needed: sub.n(),
            cap: max_bits.min(63),
        });
    }
    let family = distributive_subsets(&sub, max_bits)?;

    let mut join_dense = true;
    for a in h.elements() {
        let mut below = Subset::empty(h.n());
        for &x in &keep {
            if h.leq(x, a) {
                below.insert(x);
            }
        }
        if h.join_set(&below) != a {
            join_dense = false;
            break;
        }
    }

    let mut downsets_are_ideals = true;
    'outer: for a in h.elements() {
        let mut dmask = 0u64;
        for (i, &x) in keep.iter().enumerate() {
            if h.leq(x, a) {
                dmask |= 1 << i;
            }
        }
        if dmask == 0 {
            downsets_are_ideals = false;
            break;
        }
        let mut subm = dmask;
        loop {
            if family.is_distributive(subm) && dmask & (1 << family.join(subm).idx()) == 0 {
                downsets_are_ideals = false;
                break 'outer;
            }
            if subm == 0 {
                break;
            }
            subm = (subm - 1) & dmask;
        }
    }

    // Second formulation: inclusion preserves existing distributive joins.
    let mut preserves = true;
    'masks: for mask in 0..(1u64 << sub.n()) {
        if !family.is_distributive(mask) {
            continue;
        }
        let mut hj = h.bottom();
        let mut mm = mask;
        while mm != 0 {
            let i = mm.trailing_zeros() as usize;
            hj = h.join(hj, keep[i]);
            mm &= mm - 1;
        }
        if hj != keep[family.join(mask).idx()] {
            preserves = false;
            break 'masks;
        }
    }

    // The two formulations are equivalent for any meet-closed subset (the
    // empty join pins the bottom); divergence is an implementation bug.
    if downsets_are_ideals != preserves {
        return Err(Error::Alarm {
            claim: "DJD formulations agree",
            detail: format!(
                "ideal-wise says {downsets_are_ideals}, join-preservation says {preserves}"
            ),
        });
    }
    Ok(DjdReport {
        join_dense,
        downsets_are_ideals,
        preserves_distributive_joins: preserves,
    })
}

/// Builds the hull of `l` equipped with its operational resolution.
pub fn theta(l: &BoundedLattice, max_bits: usize) -> Result<(HullLattice, ResolutionPair)> {
    let hull = distributive_ideals(l, max_bits)?;
    let closure = operational_resolution(&hull);
    let pair = ResolutionPair::new(hull.lattice.clone(), closure, max_bits)?;
    Ok((hull, pair))
}

/// Materializes the range of the closure as a standalone lattice: meets are
/// inherited and the join of fixed points is the closure of the carrier
/// join.
pub fn theta_star(pair: &ResolutionPair, max_bits: usize) -> Result<BoundedLattice> {
    let range = pair.range();
    let djd = is_djd(&pair.hull, &range, max_bits)?;
    if !djd.is_djd() {
        return Err(Error::Alarm {
            claim: "theta-star range",
            detail: "closure range is not DJD".to_string(),
        });
    }
    let sub = BoundedLattice::from_poset(pair.hull.poset().induced(&range))?;
    Ok(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::order::{check_adjunction, find_isomorphism, left_adjoint};

    #[test]
    fn resolution_fixes_principal_ideals() {
        let m3 = catalog::m3();
        let hull = distributive_ideals(&m3, 16).unwrap();
        let r = operational_resolution(&hull);
        for a in m3.elements() {
            let p = hull.embedding.apply(a);
            assert_eq!(r.apply(p), p);
        }
    }

    #[test]
    fn resolution_of_atom_pair_ideal_is_top_on_m3() {
        let m3 = catalog::m3();
        let hull = distributive_ideals(&m3, 16).unwrap();
        let r = operational_resolution(&hull);
        let mut ab = Subset::empty(5);
        ab.insert(m3.poset().element_by_label("0").unwrap());
        ab.insert(m3.poset().element_by_label("a").unwrap());
        ab.insert(m3.poset().element_by_label("b").unwrap());
        let idx = hull.index_of(&ab).unwrap();
        assert_eq!(r.apply(idx), hull.lattice.top());
    }

    #[test]
    fn resolution_of_pentagon_antichain_ideal() {
        let n5 = catalog::n5();
        let hull = distributive_ideals(&n5, 16).unwrap();
        let r = operational_resolution(&hull);
        let mut ab = Subset::empty(5);
        ab.insert(n5.poset().element_by_label("0").unwrap());
        ab.insert(n5.poset().element_by_label("a").unwrap());
        ab.insert(n5.poset().element_by_label("b").unwrap());
        let idx = hull.index_of(&ab).unwrap();
        assert_eq!(r.apply(idx), hull.lattice.top());
    }

    #[test]
    fn resolution_is_normalized_closure_with_principal_range() {
        for (_, l) in catalog::catalog_lattices() {
            if l.n() > 8 {
                continue;
            }
            let hull = distributive_ideals(&l, 16).unwrap();
            let r = operational_resolution(&hull);
            let rep = is_closure(&hull.lattice, &r);
            assert!(rep.is_closure() && rep.normalized);
            let mut principals = Subset::empty(hull.lattice.n());
            for a in l.elements() {
                principals.insert(hull.embedding.apply(a));
            }
            let mut range = Subset::empty(hull.lattice.n());
            for a in hull.lattice.elements() {
                range.insert(r.apply(a));
            }
            assert_eq!(range, principals);
        }
    }

    #[test]
    fn djd_examples() {
        // Range of the resolution is DJD in its hull.
        let n5 = catalog::n5();
        let (hull, pair) = theta(&n5, 16).unwrap();
        let rep = is_djd(&hull.lattice, &pair.range(), 16).unwrap();
        assert!(rep.is_djd());

        // {0,1} inside the 3-chain is not join-dense.
        let c3 = catalog::chain(3);
        let mut m = Subset::empty(3);
        m.insert(c3.bottom());
        m.insert(c3.top());
        let rep = is_djd(&c3, &m, 16).unwrap();
        assert!(!rep.join_dense);
        assert!(!rep.is_djd());

        // The identity subobject is DJD.
        let b2 = catalog::boolean(2);
        let rep = is_djd(&b2, &Subset::full(4), 16).unwrap();
        assert!(rep.is_djd());
    }

    #[test]
    fn theta_on_trivial_lattice() {
        let c1 = catalog::chain(1);
        let (hull, pair) = theta(&c1, 16).unwrap();
        assert_eq!(hull.lattice.n(), 1);
        assert_eq!(pair.closure, LatticeMap::identity(1));
    }

    #[test]
    fn theta_star_recovers_base_up_to_isomorphism() {
        for (name, l) in catalog::catalog_lattices() {
            if l.n() > 8 {
                continue;
            }
            let (_, pair) = theta(&l, 16).unwrap();
            let back = theta_star(&pair, 16).unwrap();
            assert!(
                find_isomorphism(&back, &l, &[]).is_some(),
                "round trip failed for {name}"
            );
        }
    }

    #[test]
    fn theta_star_of_identity_pair_is_carrier() {
        let b2 = catalog::boolean(2);
        let pair = ResolutionPair::new(b2.clone(), LatticeMap::identity(4), 16).unwrap();
        let back = theta_star(&pair, 16).unwrap();
        assert_eq!(back.n(), 4);
        assert!(find_isomorphism(&back, &b2, &[]).is_some());
    }

    #[test]
    fn theta_after_theta_star_commutes_with_closures() {
        for (name, l) in catalog::catalog_lattices() {
            if l.n() > 6 {
                continue;
            }
            let (_, pair) = theta(&l, 16).unwrap();
            let recovered = theta_star(&pair, 16).unwrap();
            let (hull2, pair2) = theta(&recovered, 16).unwrap();
            let _ = hull2;
            let iso = find_isomorphism(&pair2.hull, &pair.hull, &[(&pair2.closure, &pair.closure)]);
            assert!(
                iso.is_some(),
                "closure-commuting isomorphism missing: {name}"
            );
        }
    }

    #[test]
    fn resolution_factors_through_adjoint_pair() {
        // R = i . i_* where i includes the principal ideals and i_* is its
        // left adjoint.
        for (_, l) in catalog::catalog_lattices() {
            if l.n() > 6 {
                continue;
            }
            let (hull, pair) = theta(&l, 16).unwrap();
            let range = pair.range();
            let keep: Vec<ElementId> = range.iter().collect();
            let sub = BoundedLattice::from_poset(hull.lattice.poset().induced(&range)).unwrap();
            let incl = LatticeMap {
                table: keep.clone(),
            };
            let i_star = left_adjoint(&sub, &hull.lattice, &incl).unwrap();
            assert!(check_adjunction(&hull.lattice, &sub, &i_star, &incl).holds);
            let composite = i_star.compose(&incl);
            assert_eq!(composite, pair.closure);
        }
    }

    #[test]
    fn hull_joins_are_closures_of_unions() {
        // In the hull, the join of any family of ideals is the ideal
        // closure of its union.
        for (_, l) in catalog::catalog_lattices() {
            if l.n() > 6 {
                continue;
            }
            let hull = distributive_ideals(&l, 16).unwrap();
            let h = &hull.lattice;
            if h.n() <= 10 {
                for fam in 0..(1u64 << h.n()) {
                    let family = Subset::from_mask(h.n(), fam);
                    let j = h.join_set(&family);
                    let mut union = Subset::empty(l.n());
                    for i in family.iter() {
                        union = union.union(hull.ideal_members(i));
                    }
                    let closed = crate::completion::di_closure(&l, &union, 16).unwrap();
                    assert_eq!(hull.ideal_members(j), &closed.members);
                }
            } else {
                for a in h.elements() {
                    for b in h.elements() {
                        let j = h.join(a, b);
                        let union = hull.ideal_members(a).union(hull.ideal_members(b));
                        let closed = crate::completion::di_closure(&l, &union, 16).unwrap();
                        assert_eq!(hull.ideal_members(j), &closed.members);
                    }
                }
            }
        }
    }
}
