//! Cartan maps from property lattices into state sets: validation,
//! superposition analysis, the faithfulness conditions, state kernels,
//! disjunctive hulls, the canonical embeddings around them, transfer maps
//! between state spaces, and the conjunctive completion of weak maps.

use std::collections::HashMap;

use crate::completion::{
    distributive_subsets, is_distributive_join, lattice_of_sets, nonempty_downset_lattice,
    HullLattice,
};
use crate::heyting::{external_implication, heyting_status};
use crate::order::{
    check_adjunction, check_map, find_isomorphism, BoundedLattice, ElementId, LatticeMap, Subset,
};
use crate::{Error, Result};

/// Assignment of a state set to every lattice element.
///
/// A full Cartan map is injective, balanced and preserves all meets
/// including the empty one; a weak Cartan map is only required to preserve
/// binary meets, top and bottom. On finite lattices the two notions
/// provably coincide (finite meets are iterated binary meets), so the flag
/// records which validation contract the map was admitted under.
#[derive(Clone, Debug)]
pub struct CartanMap {
    state_labels: Vec<String>,
    mu: Vec<Subset>,
    weak: bool,
}

fn core_violations(l: &BoundedLattice, state_labels: &[String], mu: &[Subset]) -> Vec<String> {
    let mut v = Vec::new();
    if mu.len() != l.n() {
        v.push(format!(
            "mu table has {} rows, lattice has {} elements",
            mu.len(),
            l.n()
        ));
        return v;
    }
    let s = state_labels.len();
    for (i, lab) in state_labels.iter().enumerate() {
        if state_labels[..i].contains(lab) {
            v.push(format!("duplicate state label `{lab}`"));
        }
    }
    if mu.iter().any(|m| m.width() != s) {
        v.push("mu rows have inconsistent state-set width".to_string());
        return v;
    }
    for a in l.elements() {
        for b in l.elements() {
            if a != b && mu[a.idx()] == mu[b.idx()] {
                v.push(format!(
                    "not injective: mu({}) = mu({})",
                    l.label(a),
                    l.label(b)
                ));
            }
            let m = l.meet(a, b);
            if mu[m.idx()] != mu[a.idx()].intersect(&mu[b.idx()]) {
                v.push(format!(
                    "binary meet not preserved at ({}, {})",
                    l.label(a),
                    l.label(b)
                ));
            }
        }
    }
    if !mu[l.bottom().idx()].is_empty() {
        v.push("mu(0) is not empty".to_string());
    }
    if mu[l.top().idx()] != Subset::full(s) {
        v.push("mu(1) is not the full state set".to_string());
    }
    v.truncate(8);
    v
}

impl CartanMap {
    /// Admits a full Cartan map; rejects maps violating injectivity,
    /// balance, top preservation or binary-meet preservation.
    pub fn new(l: &BoundedLattice, state_labels: Vec<String>, mu: Vec<Subset>) -> Result<Self> {
        let v = core_violations(l, &state_labels, &mu);
        if !v.is_empty() {
            return Err(Error::InvalidCartan(v.join("; ")));
        }
        Ok(CartanMap {
            state_labels,
            mu,
            weak: false,
        })
    }

    /// Admits a weak Cartan map: the same finite checks, admitted under the
    /// relaxed contract.
    pub fn new_weak(
        l: &BoundedLattice,
        state_labels: Vec<String>,
        mu: Vec<Subset>,
    ) -> Result<Self> {
        let v = core_violations(l, &state_labels, &mu);
        if !v.is_empty() {
            return Err(Error::InvalidCartan(v.join("; ")));
        }
        Ok(CartanMap {
            state_labels,
            mu,
            weak: true,
        })
    }

    pub fn n_states(&self) -> usize {
        self.state_labels.len()
    }

    pub fn state_labels(&self) -> &[String] {
        &self.state_labels
    }

    pub fn is_weak(&self) -> bool {
        self.weak
    }

    #[inline]
    pub fn mu(&self, a: ElementId) -> &Subset {
        &self.mu[a.idx()]
    }

    pub fn render_states(&self, s: &Subset) -> String {
        let mut out = String::from("{");
        let mut first = true;
        for e in s.iter() {
            if !first {
                out.push(',');
            }
            out.push_str(&self.state_labels[e.idx()]);
            first = false;
        }
        out.push('}');
        out
    }

    /// Union of the images of the members of `a`.
    pub fn mu_union(&self, a: &Subset) -> Subset {
        let mut out = Subset::empty(self.n_states());
        for x in a.iter() {
            out = out.union(&self.mu[x.idx()]);
        }
        out
    }
}

/// Exhaustive validation report: all-subset meet preservation for full
/// maps, the finite conditions for weak ones.
#[derive(Clone, Debug)]
pub struct CartanReport {
    pub violations: Vec<String>,
}

impl CartanReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks full-meet preservation literally over every subset, plus the
/// constructor conditions itemized.
pub fn validate_cartan(l: &BoundedLattice, m: &CartanMap, max_bits: usize) -> Result<CartanReport> {
    if l.n() > max_bits || l.n() > 63 {
        return Err(Error::CapExceeded {
            what: "full-meet validation",
            needed: l.n(),
            cap: max_bits.min(63),
        });
    }
    let mut violations = core_violations(l, &m.state_labels, &m.mu);
    for mask in 0..(1u64 << l.n()) {
        let subset = Subset::from_mask(l.n(), mask);
        let meet = l.meet_set(&subset);
        let mut inter = Subset::full(m.n_states());
        for x in subset.iter() {
            inter = inter.intersect(m.mu(x));
        }
        if &inter != m.mu(meet) {
            violations.push(format!(
                "meet of {} not preserved",
                l.poset().render_subset(&subset)
            ));
            break;
        }
    }
    Ok(CartanReport { violations })
}

/// Checks only the weak contract: binary meets, top and bottom, injectivity.
pub fn validate_weak_cartan(l: &BoundedLattice, m: &CartanMap) -> CartanReport {
    CartanReport {
        violations: core_violations(l, &m.state_labels, &m.mu),
    }
}

/// States where the join of `a` is actual but no member of `a` is.
pub fn superposition_states(l: &BoundedLattice, m: &CartanMap, a: &Subset) -> Subset {
    let j = l.join_set(a);
    m.mu(j).difference(&m.mu_union(a))
}

/// Properties strictly below the join of `a` whose actuality does not
/// force some member of `a` to be actual.
pub fn superposition_properties(l: &BoundedLattice, m: &CartanMap, a: &Subset) -> Subset {
    let j = l.join_set(a);
    let union = m.mu_union(a);
    let mut out = Subset::empty(l.n());
    for c in l.elements() {
        if l.lt(c, j) && !m.mu(c).is_subset_of(&union) {
            out.insert(c);
        }
    }
    out
}

/// The strongest property actual in state `p`: the meet of all properties
/// whose image contains `p`.
pub fn state_kernel(l: &BoundedLattice, m: &CartanMap, p: usize) -> ElementId {
    let mut acc = l.top();
    for a in l.elements() {
        if m.mu(a).contains(ElementId::new(p)) {
            acc = l.meet(acc, a);
        }
    }
    acc
}

/// Superposition-property versus superposition-state relationship over all
/// subsets: the forward implication (properties force states) is a
/// verified claim and failing it is an alarm; the converse may fail and
/// its status is reported with a witness.
#[derive(Clone, Debug)]
pub struct SuperpositionImplications {
    pub converse_holds: bool,
    pub converse_witness: Option<Subset>,
}

pub fn superposition_implication_check(
    l: &BoundedLattice,
    m: &CartanMap,
    max_bits: usize,
) -> Result<SuperpositionImplications> {
    if l.n() > max_bits || l.n() > 63 {
        return Err(Error::CapExceeded {
            what: "superposition sweep",
            needed: l.n(),
            cap: max_bits.min(63),
        });
    }
    let mut converse_holds = true;
    let mut converse_witness = None;
    for mask in 0..(1u64 << l.n()) {
        let a = Subset::from_mask(l.n(), mask);
        let s_plus = superposition_states(l, m, &a);
        let l_plus = superposition_properties(l, m, &a);
        if !l_plus.is_empty() && s_plus.is_empty() {
            return Err(Error::Alarm {
                claim: "superposition properties force superposition states",
                detail: format!("fails at {}", l.poset().render_subset(&a)),
            });
        }
        if converse_holds && !s_plus.is_empty() && l_plus.is_empty() {
            converse_holds = false;
            converse_witness = Some(a);
        }
    }
    Ok(SuperpositionImplications {
        converse_holds,
        converse_witness,
    })
}

/// Distributivity versus disjunctivity: a subset without superposition
/// states always has a distributive join. Failing this is an alarm.
pub fn distributivity_of_superposition_free(
    l: &BoundedLattice,
    m: &CartanMap,
    max_bits: usize,
) -> Result<()> {
    if l.n() > max_bits || l.n() > 63 {
        return Err(Error::CapExceeded {
            what: "superposition sweep",
            needed: l.n(),
            cap: max_bits.min(63),
        });
    }
    for mask in 0..(1u64 << l.n()) {
        let a = Subset::from_mask(l.n(), mask);
        if superposition_states(l, m, &a).is_empty() && !is_distributive_join(l, &a) {
            return Err(Error::Alarm {
                claim: "superposition-free joins are distributive",
                detail: format!("fails at {}", l.poset().render_subset(&a)),
            });
        }
    }
    Ok(())
}

/// The six equivalent faithfulness conditions, evaluated independently.
#[derive(Clone, Debug)]
pub struct FaithfulnessReport {
    pub conditions: [bool; 6],
    pub witnesses: [Option<String>; 6],
}

impl FaithfulnessReport {
    pub fn overall(&self) -> bool {
        self.conditions.iter().all(|&c| c)
    }

    /// The six conditions are provably equivalent; disagreement between the
    /// independent evaluations would be a contradiction.
    pub fn agree(&self) -> bool {
        self.conditions.iter().all(|&c| c == self.conditions[0])
    }
}

/// Evaluates each faithfulness condition exhaustively and independently.
pub fn faithfulness_report(
    l: &BoundedLattice,
    m: &CartanMap,
    max_bits: usize,
) -> Result<FaithfulnessReport> {
    if l.n() > max_bits || l.n() > 63 {
        return Err(Error::CapExceeded {
            what: "faithfulness sweep",
            needed: l.n(),
            cap: max_bits.min(63),
        });
    }
    let family = distributive_subsets(l, max_bits)?;
    let kernels: Vec<ElementId> = (0..m.n_states()).map(|p| state_kernel(l, m, p)).collect();

    let mut c = [true; 6];
    let mut w: [Option<String>; 6] = Default::default();

    let describe = |a: &Subset| l.poset().render_subset(a);

    for mask in 0..(1u64 << l.n()) {
        let a = Subset::from_mask(l.n(), mask);
        let j = l.join_set(&a);
        let s_plus = superposition_states(l, m, &a);
        let l_plus = superposition_properties(l, m, &a);

        // (i) every superposition state is covered by a superposition
        // property.
        if c[0] {
            for p in s_plus.iter() {
                if !l_plus.iter().any(|cp| m.mu(cp).contains(p)) {
                    c[0] = false;
                    w[0] = Some(format!(
                        "state {} uncovered at {}",
                        m.state_labels[p.idx()],
                        describe(&a)
                    ));
                    break;
                }
            }
        }
        // (ii) no superposition properties implies no superposition states.
        if c[1] && l_plus.is_empty() && !s_plus.is_empty() {
            c[1] = false;
            w[1] = Some(describe(&a));
        }
        // (iii) distributive joins introduce no superposition states.
        if c[2] && family.is_distributive(mask) && !s_plus.is_empty() {
            c[2] = false;
            w[2] = Some(describe(&a));
        }
        // (iv) for distributive joins, a state whose kernel is the join is
        // not a superposition state.
        if c[3] && family.is_distributive(mask) {
            for (p, &k) in kernels.iter().enumerate() {
                if k == j && s_plus.contains(ElementId::new(p)) {
                    c[3] = false;
                    w[3] = Some(format!("state {} at {}", m.state_labels[p], describe(&a)));
                    break;
                }
            }
        }
        // (v) a kernel equal to a join belongs to the joined set.
        if c[4] {
            for (p, &k) in kernels.iter().enumerate() {
                if k == j && !a.contains(k) {
                    c[4] = false;
                    w[4] = Some(format!("state {} at {}", m.state_labels[p], describe(&a)));
                    break;
                }
            }
        }
    }

    // (vi) per state: below the kernel everything is dominated by a single
    // element strictly between bottom and the kernel, or the kernel is an
    // atom.
    for (p, &k) in kernels.iter().enumerate() {
        if l.is_atom(k) {
            continue;
        }
        let mut strictly_below = Subset::empty(l.n());
        for x in l.elements() {
            if l.lt(x, k) {
                strictly_below.insert(x);
            }
        }
        let maximal: Vec<ElementId> = strictly_below
            .iter()
            .filter(|&x| strictly_below.iter().all(|y| !l.lt(x, y)))
            .collect();
        let principal = maximal.len() == 1 && maximal[0] != l.bottom();
        if !principal {
            c[5] = false;
            w[5] = Some(format!(
                "state {} has kernel {}",
                m.state_labels[p],
                l.label(k)
            ));
            break;
        }
    }

    Ok(FaithfulnessReport {
        conditions: c,
        witnesses: w,
    })
}

/// Join density of the state kernels: every property is the join of the
/// kernels of the states where it is actual. A verified claim for every
/// valid Cartan map; failing it is an alarm.
pub fn join_density_check(l: &BoundedLattice, m: &CartanMap) -> Result<()> {
    for a in l.elements() {
        let mut acc = l.bottom();
        for p in m.mu(a).iter() {
            acc = l.join(acc, state_kernel(l, m, p.idx()));
        }
        if acc != a {
            return Err(Error::Alarm {
                claim: "state kernels are join dense",
                detail: format!("fails at {}", l.label(a)),
            });
        }
    }
    Ok(())
}

/// A lattice of state sets ordered by inclusion, together with the sets
/// themselves and the embedding of the base lattice.
pub struct StateSetLattice {
    pub lattice: BoundedLattice,
    pub sets: Vec<Subset>,
    pub embedding: LatticeMap,
}

impl StateSetLattice {
    pub fn index_of(&self, s: &Subset) -> Option<ElementId> {
        self.sets.iter().position(|x| x == s).map(ElementId::new)
    }
}

/// The disjunctive hull: all unions of images of the map, ordered by
/// inclusion. Closed under unions and intersections, hence a complete
/// Heyting algebra; a failure of either closure property is an alarm.
pub fn disjunctive_hull(
    l: &BoundedLattice,
    m: &CartanMap,
    max_bits: usize,
) -> Result<StateSetLattice> {
    if l.n() > max_bits || l.n() > 63 {
        return Err(Error::CapExceeded {
            what: "disjunctive hull enumeration",
            needed: l.n(),
            cap: max_bits.min(63),
        });
    }
    if m.n_states() > 63 {
        return Err(Error::CapExceeded {
            what: "state-set lattice",
            needed: m.n_states(),
            cap: 63,
        });
    }
    let s = m.n_states();
    let mut unions = vec![0u64; 1 << l.n()];
    for mask in 1..(1u64 << l.n()) {
        let low = mask.trailing_zeros() as usize;
        unions[mask as usize] =
            unions[(mask & (mask - 1)) as usize] | m.mu(ElementId::new(low)).as_mask();
    }
    let (lattice, sets) = lattice_of_sets(s, unions, |mask| {
        m.render_states(&Subset::from_mask(s, mask))
    })?;
    let status = heyting_status(&lattice);
    if !status.is_complete_heyting {
        return Err(Error::Alarm {
            claim: "disjunctive hull is a complete Heyting algebra",
            detail: "distributivity fails".to_string(),
        });
    }
    let index: HashMap<u64, usize> = sets.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let embedding = LatticeMap::from_fn(l.n(), |a| ElementId::new(index[&m.mu(a).as_mask()]));
    let sets = sets.iter().map(|&x| Subset::from_mask(s, x)).collect();
    Ok(StateSetLattice {
        lattice,
        sets,
        embedding,
    })
}

/// Canonical extension of the map to the distributive hull: an ideal goes
/// to the union of the images of its members. Checked to be a balanced
/// inf-embedding into the disjunctive hull; a failure is an alarm.
pub fn phi_mu(hull: &HullLattice, dh: &StateSetLattice, m: &CartanMap) -> Result<LatticeMap> {
    let map = LatticeMap::from_fn(hull.lattice.n(), |i| {
        let union = m.mu_union(hull.ideal_members(i));
        dh.index_of(&union).expect("union of images is in the hull")
    });
    let rep = check_map(&hull.lattice, &dh.lattice, &map)?;
    if !rep.is_balanced_inf_embedding() {
        return Err(Error::Alarm {
            claim: "hull-to-disjunctive-hull map is a balanced inf-embedding",
            detail: format!("{rep:?}"),
        });
    }
    Ok(map)
}

/// Embedding of the disjunctive hull into the lattice of nonempty
/// downsets: a state set goes to the properties whose image it contains.
/// Checked to be a balanced inf-embedding; a failure is an alarm.
pub fn eps_mu(
    l: &BoundedLattice,
    m: &CartanMap,
    dh: &StateSetLattice,
    max_bits: usize,
) -> Result<(BoundedLattice, Vec<Subset>, LatticeMap)> {
    let (ideal_lattice, ideal_sets) = nonempty_downset_lattice(l, max_bits)?;
    let map = LatticeMap::from_fn(dh.lattice.n(), |i| {
        let t = &dh.sets[i.idx()];
        let mut down = Subset::empty(l.n());
        for a in l.elements() {
            if m.mu(a).is_subset_of(t) {
                down.insert(a);
            }
        }
        ElementId::new(
            ideal_sets
                .iter()
                .position(|s| s == &down)
                .expect("image sets form a downset"),
        )
    });
    let rep = check_map(&dh.lattice, &ideal_lattice, &map)?;
    if !rep.is_balanced_inf_embedding() {
        return Err(Error::Alarm {
            claim: "disjunctive-hull-to-downsets map is a balanced inf-embedding",
            detail: format!("{rep:?}"),
        });
    }
    Ok((ideal_lattice, ideal_sets, map))
}

/// Orientation of the adjunction between the transfer maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferOrientation {
    /// `g` is left adjoint to `f`.
    GLeftOfF,
    /// `f` is left adjoint to `g`.
    FLeftOfG,
    Both,
}

/// The canonical pair of maps between the disjunctive hulls of two Cartan
/// maps on the same lattice, with the empirically determined adjunction
/// orientation. Failure of the adjunction in both orientations is an
/// alarm.
pub struct TransferPair {
    pub f: LatticeMap,
    pub g: LatticeMap,
    pub f_is_inf_morphism: bool,
    pub g_is_sup_morphism: bool,
    pub orientation: TransferOrientation,
}

pub fn transfer_pair(
    l: &BoundedLattice,
    m1: &CartanMap,
    m2: &CartanMap,
    max_bits: usize,
) -> Result<(StateSetLattice, StateSetLattice, TransferPair)> {
    let dh1 = disjunctive_hull(l, m1, max_bits)?;
    let dh2 = disjunctive_hull(l, m2, max_bits)?;

    // f : D1 -> D2, union of second images over properties whose first
    // image is contained in the argument.
    let f = LatticeMap::from_fn(dh1.lattice.n(), |i| {
        let t = &dh1.sets[i.idx()];
        let mut out = Subset::empty(m2.n_states());
        for a in l.elements() {
            if m1.mu(a).is_subset_of(t) {
                out = out.union(m2.mu(a));
            }
        }
        dh2.index_of(&out).expect("transfer image lands in hull")
    });
    // g : D2 -> D1, union of first images of the kernels of the argument's
    // states.
    let kernels2: Vec<ElementId> = (0..m2.n_states()).map(|p| state_kernel(l, m2, p)).collect();
    let g = LatticeMap::from_fn(dh2.lattice.n(), |i| {
        let t = &dh2.sets[i.idx()];
        let mut out = Subset::empty(m1.n_states());
        for p in t.iter() {
            out = out.union(m1.mu(kernels2[p.idx()]));
        }
        dh1.index_of(&out).expect("transfer image lands in hull")
    });

    let f_rep = check_map(&dh1.lattice, &dh2.lattice, &f)?;
    let g_rep = check_map(&dh2.lattice, &dh1.lattice, &g)?;
    let g_left = check_adjunction(&dh2.lattice, &dh1.lattice, &g, &f).holds;
    let f_left = check_adjunction(&dh1.lattice, &dh2.lattice, &f, &g).holds;
    let orientation = match (g_left, f_left) {
        (true, true) => TransferOrientation::Both,
        (true, false) => TransferOrientation::GLeftOfF,
        (false, true) => TransferOrientation::FLeftOfG,
        (false, false) => {
            return Err(Error::Alarm {
                claim: "transfer maps are adjointly related",
                detail: "neither orientation satisfies the adjunction".to_string(),
            })
        }
    };
    Ok((
        dh1,
        dh2,
        TransferPair {
            f,
            g,
            f_is_inf_morphism: f_rep.preserves_all_meets,
            g_is_sup_morphism: g_rep.preserves_all_joins,
            orientation,
        },
    ))
}

/// Conjunctive completion of a (weak) Cartan map: all intersections of
/// images, with the identity Cartan map on the completed lattice.
pub struct ConjunctiveCompletion {
    pub lattice: BoundedLattice,
    pub sets: Vec<Subset>,
    /// Embedding of the base lattice into the completion.
    pub embedding: LatticeMap,
    /// The extension as a full Cartan map on the completion.
    pub mu_bar: CartanMap,
}

pub fn conjunctive_completion(l: &BoundedLattice, m: &CartanMap) -> Result<ConjunctiveCompletion> {
    let s = m.n_states();
    if s > 63 {
        return Err(Error::CapExceeded {
            what: "state-set lattice",
            needed: s,
            cap: 63,
        });
    }
    let full: u64 = if s == 0 { 0 } else { (1u64 << s) - 1 };
    let mut sets: Vec<u64> = vec![full];
    sets.extend(l.elements().map(|a| m.mu(a).as_mask()));
    sets.sort_unstable();
    sets.dedup();
    loop {
        let mut added = Vec::new();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let x = sets[i] & sets[j];
                if !sets.contains(&x) && !added.contains(&x) {
                    added.push(x);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        sets.extend(added);
        sets.sort_unstable();
        sets.dedup();
    }
    let (lattice, sets) =
        lattice_of_sets(s, sets, |mask| m.render_states(&Subset::from_mask(s, mask)))?;
    let subsets: Vec<Subset> = sets.iter().map(|&x| Subset::from_mask(s, x)).collect();
    let mu_bar =
        CartanMap::new(&lattice, m.state_labels.clone(), subsets.clone()).map_err(|e| {
            Error::Alarm {
                claim: "conjunctive completion extends to a full Cartan map",
                detail: e.to_string(),
            }
        })?;
    let index: HashMap<u64, usize> = sets.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let embedding = LatticeMap::from_fn(l.n(), |a| ElementId::new(index[&m.mu(a).as_mask()]));
    // Commuting triangle: the extension restricted along the embedding is
    // the original map.
    for a in l.elements() {
        if mu_bar.mu(embedding.apply(a)) != m.mu(a) {
            return Err(Error::Alarm {
                claim: "completion triangle commutes",
                detail: format!("at {}", l.label(a)),
            });
        }
    }
    Ok(ConjunctiveCompletion {
        lattice,
        sets: subsets,
        embedding,
        mu_bar,
    })
}

/// Least image of the completion above a state set.
pub fn state_resolution(
    l: &BoundedLattice,
    m: &CartanMap,
    completion: &ConjunctiveCompletion,
    t: &Subset,
) -> ElementId {
    let mut acc = Subset::full(m.n_states());
    for a in l.elements() {
        if t.is_subset_of(m.mu(a)) {
            acc = acc.intersect(m.mu(a));
        }
    }
    completion
        .sets
        .iter()
        .position(|s| s == &acc)
        .map(ElementId::new)
        .expect("resolution lands in the completion")
}

/// Verified claims about joins surviving the conjunctive completion:
/// existing joins are preserved, disjunctive joins are distributive, and
/// disjunctivity and distributivity transfer to the completion.
pub fn conjunctive_join_transfer(
    l: &BoundedLattice,
    m: &CartanMap,
    max_bits: usize,
) -> Result<ConjunctiveCompletion> {
    if l.n() > max_bits || l.n() > 63 {
        return Err(Error::CapExceeded {
            what: "join-transfer sweep",
            needed: l.n(),
            cap: max_bits.min(63),
        });
    }
    let completion = conjunctive_completion(l, m)?;
    let bar = &completion.lattice;
    for mask in 0..(1u64 << l.n()) {
        let a = Subset::from_mask(l.n(), mask);
        let j = l.join_set(&a);
        let mut jbar = bar.bottom();
        for x in a.iter() {
            jbar = bar.join(jbar, completion.embedding.apply(x));
        }
        // (i) joins are preserved by the embedding.
        if completion.embedding.apply(j) != jbar {
            return Err(Error::Alarm {
                claim: "completion preserves existing joins",
                detail: format!("at {}", l.poset().render_subset(&a)),
            });
        }
        let disjunctive = m.mu(j) == &m.mu_union(&a);
        if disjunctive {
            // (ii) disjunctive joins are distributive.
            if !is_distributive_join(l, &a) {
                return Err(Error::Alarm {
                    claim: "disjunctive joins are distributive",
                    detail: format!("at {}", l.poset().render_subset(&a)),
                });
            }
            // (iii) disjunctivity transfers to the completion.
            let mut union = Subset::empty(m.n_states());
            for x in a.iter() {
                union = union.union(completion.mu_bar.mu(completion.embedding.apply(x)));
            }
            if completion.mu_bar.mu(jbar) != &union {
                return Err(Error::Alarm {
                    claim: "disjunctivity transfers to the completion",
                    detail: format!("at {}", l.poset().render_subset(&a)),
                });
            }
            // (iv) distributivity transfers to the completion.
            let mut abar = Subset::empty(bar.n());
            for x in a.iter() {
                abar.insert(completion.embedding.apply(x));
            }
            if !is_distributive_join(bar, &abar) {
                return Err(Error::Alarm {
                    claim: "distributivity transfers to the completion",
                    detail: format!("at {}", l.poset().render_subset(&a)),
                });
            }
        }
    }
    Ok(completion)
}

/// The interval-based Cartan map: states are the nonzero elements and a
/// property is actual exactly in the states below it.
pub fn chain_cartan(l: &BoundedLattice) -> CartanMap {
    let states: Vec<ElementId> = l.elements().filter(|&x| x != l.bottom()).collect();
    let labels: Vec<String> = states.iter().map(|&x| l.label(x).to_string()).collect();
    let mu: Vec<Subset> = l
        .elements()
        .map(|a| {
            let mut s = Subset::empty(states.len());
            for (k, &x) in states.iter().enumerate() {
                if l.leq(x, a) {
                    s.insert(ElementId::new(k));
                }
            }
            s
        })
        .collect();
    CartanMap::new(l, labels, mu).expect("interval map is a valid Cartan map")
}

/// The atomistic Cartan map `a -> { atoms below a }`; valid exactly when
/// the lattice is atomistic.
pub fn atomistic_cartan(l: &BoundedLattice) -> Result<CartanMap> {
    let atoms: Vec<ElementId> = l.elements().filter(|&x| l.is_atom(x)).collect();
    let labels: Vec<String> = atoms.iter().map(|&x| l.label(x).to_string()).collect();
    let mu: Vec<Subset> = l
        .elements()
        .map(|a| {
            let mut s = Subset::empty(atoms.len());
            for (k, &x) in atoms.iter().enumerate() {
                if l.leq(x, a) {
                    s.insert(ElementId::new(k));
                }
            }
            s
        })
        .collect();
    CartanMap::new(l, labels, mu)
}

/// State-level soundness of the external implication: every property in
/// `(b => c)` makes "if `b` is actual then `c` is actual" true in each of
/// its states.
pub fn external_implication_sound(
    l: &BoundedLattice,
    m: &CartanMap,
    b: ElementId,
    c: ElementId,
) -> bool {
    let arrow = external_implication(l, b, c);
    let sound = arrow.iter().all(|a| {
        m.mu(a)
            .iter()
            .all(|p| !m.mu(b).contains(p) || m.mu(c).contains(p))
    });
    sound
}

/// The disjunctive hull of the interval map is the nonempty-downset
/// completion; used as a round-trip check.
pub fn chain_cartan_realizes_downsets(l: &BoundedLattice, max_bits: usize) -> Result<bool> {
    let m = chain_cartan(l);
    let dh = disjunctive_hull(l, &m, max_bits)?;
    let (ideals, _) = nonempty_downset_lattice(l, max_bits)?;
    Ok(find_isomorphism(&dh.lattice, &ideals, &[]).is_some())
}
