//! Orthocomplementations and pseudo-orthocomplementations, their derived
//! laws, the operational complementation on hulls with its round trip,
//! orthogonality relations, orthomodularity and Sasaki projections.

use crate::completion::{distributive_ideals, HullLattice};
use crate::order::{find_isomorphism, BoundedLattice, ElementId, LatticeMap, Subset};
use crate::resolution::{is_djd, operational_resolution};
use crate::{Error, Result};

/// A lattice endo-map intended as an (ortho)complementation. The axioms
/// are testable flags, not constructor requirements: structures that fail
/// some of them are accepted as data and merely classified.
#[derive(Clone, Debug)]
pub struct OrthoStructure {
    pub prime: LatticeMap,
}

impl OrthoStructure {
    pub fn new(prime: LatticeMap) -> Self {
        OrthoStructure { prime }
    }

    #[inline]
    pub fn prime(&self, a: ElementId) -> ElementId {
        self.prime.apply(a)
    }
}

/// Axiom flags of a complementation candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrthoClassification {
    /// `a /\ a' = 0`.
    pub oc1: bool,
    /// `a <= a''`.
    pub oc2: bool,
    /// `b' <= a'` implies `a <= b`.
    pub oc3l: bool,
    /// `a <= b` implies `b' <= a'`.
    pub oc3r: bool,
    /// `a'' = a`.
    pub involutive: bool,
}

impl OrthoClassification {
    pub fn is_ortholattice(&self) -> bool {
        self.oc1 && self.oc2 && self.oc3l
    }

    pub fn is_pseudo_ortholattice(&self) -> bool {
        self.oc1 && self.oc2 && self.oc3r
    }
}

pub fn classify_ortho(l: &BoundedLattice, o: &OrthoStructure) -> OrthoClassification {
    let p = |a| o.prime(a);
    let mut oc1 = true;
    let mut oc2 = true;
    let mut oc3l = true;
    let mut oc3r = true;
    let mut involutive = true;
    for a in l.elements() {
        if l.meet(a, p(a)) != l.bottom() {
            oc1 = false;
        }
        if !l.leq(a, p(p(a))) {
            oc2 = false;
        }
        if p(p(a)) != a {
            involutive = false;
        }
        for b in l.elements() {
            if l.leq(p(b), p(a)) && !l.leq(a, b) {
                oc3l = false;
            }
            if l.leq(a, b) && !l.leq(p(b), p(a)) {
                oc3r = false;
            }
        }
    }
    OrthoClassification {
        oc1,
        oc2,
        oc3l,
        oc3r,
        involutive,
    }
}

/// One derived-law implication: whether its hypotheses hold, and whether
/// the conclusion was confirmed when they do.
#[derive(Clone, Debug)]
pub struct DerivedLaw {
    pub name: &'static str,
    pub hypotheses_met: bool,
    pub conclusion_holds: Option<bool>,
    pub witness: Option<String>,
}

/// Pointwise verification of the derived axiom implications. A case where
/// the hypotheses hold but a conclusion fails is a contradiction alarm.
pub fn derived_law_report(l: &BoundedLattice, o: &OrthoStructure) -> Vec<DerivedLaw> {
    let c = classify_ortho(l, o);
    let p = |a| o.prime(a);
    let mut out = Vec::new();

    // (i) OC2 and OC3l give an involution with an order-reversing
    // bi-implication.
    {
        let met = c.oc2 && c.oc3l;
        let mut holds = None;
        let mut witness = None;
        if met {
            let mut ok = true;
            for a in l.elements() {
                if p(p(a)) != a {
                    ok = false;
                    witness = Some(format!("a'' != a at {}", l.label(a)));
                    break;
                }
                for b in l.elements() {
                    if l.leq(a, b) != l.leq(p(b), p(a)) {
                        ok = false;
                        witness = Some(format!(
                            "bi-implication at ({}, {})",
                            l.label(a),
                            l.label(b)
                        ));
                        break;
                    }
                }
                if !ok {
                    break;
                }
            }
            holds = Some(ok);
        }
        out.push(DerivedLaw {
            name: "oc2+oc3l => involution and order-reversing bi-implication",
            hypotheses_met: met,
            conclusion_holds: holds,
            witness,
        });
    }

    // (ii) OC2 and OC3r give a' = a''' and the primed bi-implication.
    {
        let met = c.oc2 && c.oc3r;
        let mut holds = None;
        let mut witness = None;
        if met {
            let mut ok = true;
            for a in l.elements() {
                if p(a) != p(p(p(a))) {
                    ok = false;
                    witness = Some(format!("a' != a''' at {}", l.label(a)));
                    break;
                }
                for b in l.elements() {
                    if l.leq(p(a), p(b)) != l.leq(p(p(b)), p(p(a))) {
                        ok = false;
                        witness = Some(format!(
                            "primed bi-implication at ({}, {})",
                            l.label(a),
                            l.label(b)
                        ));
                        break;
                    }
                }
                if !ok {
                    break;
                }
            }
            holds = Some(ok);
        }
        out.push(DerivedLaw {
            name: "oc2+oc3r => a'=a''' and primed bi-implication",
            hypotheses_met: met,
            conclusion_holds: holds,
            witness,
        });
    }

    // (iii) a' /\ a'' = 0 together with OC2 gives OC1.
    {
        let met = c.oc2 && l.elements().all(|a| l.meet(p(a), p(p(a))) == l.bottom());
        let mut holds = None;
        let mut witness = None;
        if met {
            let ok = c.oc1;
            if !ok {
                witness = Some("oc1 fails despite hypotheses".to_string());
            }
            holds = Some(ok);
        }
        out.push(DerivedLaw {
            name: "a'/\\a''=0 + oc2 => oc1",
            hypotheses_met: met,
            conclusion_holds: holds,
            witness,
        });
    }
    out
}

/// The operational complementation on the hull: an ideal maps to the
/// principal ideal of the complement of its base join.
///
/// Requires an ortholattice. The construction is verified on the spot:
/// the result must be a pseudo-orthocomplementation whose square is the
/// operational resolution and whose range is the principal ideals; any
/// violation is a contradiction alarm.
pub fn operational_complementation(hull: &HullLattice, o: &OrthoStructure) -> Result<LatticeMap> {
    let c = classify_ortho(&hull.base, o);
    if !c.is_ortholattice() {
        return Err(Error::NotOrtholattice(
            "operational complementation needs oc1, oc2 and oc3l".to_string(),
        ));
    }
    let perp = LatticeMap::from_fn(hull.lattice.n(), |i| {
        let j = hull.base.join_set(hull.ideal_members(i));
        hull.embedding.apply(o.prime(j))
    });

    let perp_class = classify_ortho(&hull.lattice, &OrthoStructure::new(perp.clone()));
    if !perp_class.is_pseudo_ortholattice() {
        return Err(Error::Alarm {
            claim: "operational complementation is pseudo-ortho",
            detail: format!("{perp_class:?}"),
        });
    }
    let r = operational_resolution(hull);
    if perp.compose(&perp) != r {
        return Err(Error::Alarm {
            claim: "complementation squares to the resolution",
            detail: "perp . perp differs from the resolution".to_string(),
        });
    }
    let mut range = Subset::empty(hull.lattice.n());
    for a in hull.lattice.elements() {
        range.insert(perp.apply(a));
    }
    let mut principal = Subset::empty(hull.lattice.n());
    for a in hull.base.elements() {
        principal.insert(hull.embedding.apply(a));
    }
    if range != principal {
        return Err(Error::Alarm {
            claim: "complementation range is the principal ideals",
            detail: "range mismatch".to_string(),
        });
    }
    Ok(perp)
}

/// Outcome of the ortho round trip through the hull.
#[derive(Clone, Debug)]
pub struct OrthoRoundTrip {
    pub perp_pseudo_ortho: bool,
    pub perp_range_djd: bool,
    pub square_is_resolution: bool,
    pub forward_isomorphism: bool,
    pub reverse_isomorphism: bool,
}

impl OrthoRoundTrip {
    pub fn all(&self) -> bool {
        self.perp_pseudo_ortho
            && self.perp_range_djd
            && self.square_is_resolution
            && self.forward_isomorphism
            && self.reverse_isomorphism
    }
}

/// Builds the hull with its operational complementation and verifies both
/// directions of the correspondence: restricting the complementation to
/// its range recovers the input ortholattice up to a prime-commuting
/// isomorphism, and rebuilding the hull from that restriction recovers the
/// pair up to a perp-commuting isomorphism.
pub fn ortho_round_trip(
    l: &BoundedLattice,
    o: &OrthoStructure,
    max_bits: usize,
) -> Result<OrthoRoundTrip> {
    let hull = distributive_ideals(l, max_bits)?;
    let perp = operational_complementation(&hull, o)?;
    let perp_class = classify_ortho(&hull.lattice, &OrthoStructure::new(perp.clone()));
    let r = operational_resolution(&hull);

    let mut range = Subset::empty(hull.lattice.n());
    for a in hull.lattice.elements() {
        range.insert(perp.apply(a));
    }
    let djd = is_djd(&hull.lattice, &range, max_bits)?;

    // Restriction of the complementation to its range.
    let keep: Vec<ElementId> = range.iter().collect();
    let restricted = BoundedLattice::from_poset(hull.lattice.poset().induced(&range))?;
    let rprime = LatticeMap::from_fn(restricted.n(), |i| {
        let img = perp.apply(keep[i.idx()]);
        ElementId::new(keep.iter().position(|&k| k == img).unwrap())
    });
    let forward = find_isomorphism(&restricted, l, &[(&rprime, &o.prime)]).is_some();

    // Reverse direction: the hull of the restriction, with its own
    // operational complementation, matches the constructed pair.
    let hull2 = distributive_ideals(&restricted, max_bits)?;
    let perp2 = operational_complementation(&hull2, &OrthoStructure::new(rprime))?;
    let reverse = find_isomorphism(&hull2.lattice, &hull.lattice, &[(&perp2, &perp)]).is_some();

    Ok(OrthoRoundTrip {
        perp_pseudo_ortho: perp_class.is_pseudo_ortholattice(),
        perp_range_djd: djd.is_djd(),
        square_is_resolution: perp.compose(&perp) == r,
        forward_isomorphism: forward,
        reverse_isomorphism: reverse,
    })
}

/// Symmetric orthogonality relation on a lattice.
#[derive(Clone, Debug)]
pub struct OrthogonalityRelation {
    n: usize,
    rel: Vec<bool>,
}

impl OrthogonalityRelation {
    /// The relation `a _|_ b  iff  a <= b'` induced by a complementation.
    pub fn from_ortho(l: &BoundedLattice, o: &OrthoStructure) -> Self {
        let n = l.n();
        let mut rel = vec![false; n * n];
        for a in l.elements() {
            for b in l.elements() {
                rel[a.idx() * n + b.idx()] = l.leq(a, o.prime(b));
            }
        }
        OrthogonalityRelation { n, rel }
    }

    #[inline]
    pub fn orthogonal(&self, a: ElementId, b: ElementId) -> bool {
        self.rel[a.idx() * self.n + b.idx()]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n)
            .all(|i| (0..self.n).all(|j| self.rel[i * self.n + j] == self.rel[j * self.n + i]))
    }
}

/// `A-perp`: the set of elements orthogonal to everything in `a`.
pub fn ortho_set(rel: &OrthogonalityRelation, a: &Subset) -> Subset {
    let mut out = Subset::empty(a.width());
    for b in 0..a.width() {
        let b = ElementId::new(b);
        if a.iter().all(|x| rel.orthogonal(x, b)) {
            out.insert(b);
        }
    }
    out
}

/// Weak modularity: `a <= b` implies `a \/ (a' /\ b) = b`.
pub fn is_orthomodular(
    l: &BoundedLattice,
    o: &OrthoStructure,
) -> (bool, Option<(ElementId, ElementId)>) {
    for a in l.elements() {
        for b in l.elements() {
            if l.leq(a, b) && l.join(a, l.meet(o.prime(a), b)) != b {
                return (false, Some((a, b)));
            }
        }
    }
    (true, None)
}

/// The Sasaki projection `b -> a /\ (a' \/ b)` and its candidate adjoint
/// `b -> a' \/ (a /\ b)`.
pub fn sasaki(l: &BoundedLattice, o: &OrthoStructure, a: ElementId) -> (LatticeMap, LatticeMap) {
    let ap = o.prime(a);
    let phi = LatticeMap::from_fn(l.n(), |b| l.meet(a, l.join(ap, b)));
    let phi_star = LatticeMap::from_fn(l.n(), |b| l.join(ap, l.meet(a, b)));
    (phi, phi_star)
}
