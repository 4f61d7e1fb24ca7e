//! Bounded exhaustive enumeration of lattices, ortholattices and Cartan
//! maps up to isomorphism, plus the predicate registry used for witness
//! and counterexample mining.
//!
//! Enumeration is deterministic: candidates are canonicalized as the
//! lexicographically minimal order matrix over label permutations (bottom
//! and top pinned) and emitted in sorted canonical order. Search sweeps
//! may run on a thread pool; results are merged in index order so output
//! never depends on the schedule.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::cartan::{self, CartanMap};
use crate::completion::{
    distributive_ideals, is_distributive_join, is_distributive_join_restricted, verify_hull,
};
use crate::heyting::heyting_status;
use crate::order::{
    check_adjunction, find_isomorphism, BoundedLattice, ElementId, LatticeMap, Poset, Subset,
};
use crate::ortho::{classify_ortho, is_orthomodular, sasaki, OrthoStructure};
use crate::resolution::{theta, theta_star};
use crate::{Error, Result};

/// Largest size accepted for exhaustive lattice enumeration.
pub const ENUMERATION_CAP: usize = 9;

fn middle_relations(m: usize) -> Vec<Vec<bool>> {
    // All strict orders on m labelled points whose index order is a linear
    // extension, as upper-triangular incidence choices with transitivity.
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    let mut rel = vec![false; m * m];

    fn transitive(rel: &[bool], m: usize) -> bool {
        for i in 0..m {
            for j in 0..m {
                if rel[i * m + j] {
                    for k in 0..m {
                        if rel[j * m + k] && !rel[i * m + k] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn rec(
        idx: usize,
        pairs: &[(usize, usize)],
        rel: &mut Vec<bool>,
        m: usize,
        out: &mut Vec<Vec<bool>>,
    ) {
        if idx == pairs.len() {
            if transitive(rel, m) {
                out.push(rel.clone());
            }
            return;
        }
        let (i, j) = pairs[idx];
        rel[i * m + j] = false;
        rec(idx + 1, pairs, rel, m, out);
        rel[i * m + j] = true;
        rec(idx + 1, pairs, rel, m, out);
        rel[i * m + j] = false;
    }

    rec(0, &pairs, &mut rel, m, &mut out);
    out
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();

    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }

    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

/// Lexicographically minimal full order matrix over permutations of the
/// interior elements (bottom and top are fixed by any isomorphism).
fn canonical_key(l: &BoundedLattice) -> Vec<bool> {
    let n = l.n();
    if n <= 2 {
        let mut key = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                key[i * n + j] = l.leq(ElementId::new(i), ElementId::new(j));
            }
        }
        return key;
    }
    let bottom = l.bottom().idx();
    let top = l.top().idx();
    let middle: Vec<usize> = (0..n).filter(|&i| i != bottom && i != top).collect();
    let mut best: Option<Vec<bool>> = None;
    for perm in permutations(middle.len()) {
        // order: bottom, permuted middle, top
        let mut order = Vec::with_capacity(n);
        order.push(bottom);
        for &k in &perm {
            order.push(middle[k]);
        }
        order.push(top);
        let mut key = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                key[i * n + j] = l.leq(ElementId::new(order[i]), ElementId::new(order[j]));
            }
        }
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.unwrap()
}

fn lattice_from_key(n: usize, key: &[bool]) -> BoundedLattice {
    let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let poset = Poset::from_relation(labels, key.to_vec());
    BoundedLattice::from_poset(poset).expect("canonical key encodes a lattice")
}

/// Every bounded lattice on exactly `n` elements, one per isomorphism
/// class, in canonical order.
pub fn enumerate_lattices(n: usize) -> Result<Vec<BoundedLattice>> {
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            what: "lattice enumeration",
            needed: n,
            cap: ENUMERATION_CAP,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![lattice_from_key(1, &[true])]);
    }
    let m = n - 2;
    let mut keys: Vec<Vec<bool>> = Vec::new();
    for rel in middle_relations(m) {
        // Assemble: index 0 = bottom, 1..=m middle, n-1 = top.
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
            leq[i] = true;
            leq[i * n + (n - 1)] = true;
        }
        for i in 0..m {
            for j in 0..m {
                if rel[i * m + j] {
                    leq[(i + 1) * n + (j + 1)] = true;
                }
            }
        }
        let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let poset = Poset::from_relation(labels, leq);
        let Ok(l) = BoundedLattice::from_poset(poset) else {
            continue;
        };
        let key = canonical_key(&l);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.sort();
    Ok(keys.iter().map(|k| lattice_from_key(n, k)).collect())
}

/// All lattices with between 1 and `n` elements, smallest sizes first.
pub fn enumerate_lattices_through(n: usize) -> Result<Vec<BoundedLattice>> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(enumerate_lattices(k)?);
    }
    Ok(out)
}

/// Every ortholattice on exactly `n` elements, one per prime-commuting
/// isomorphism class.
pub fn enumerate_ortholattices(n: usize) -> Result<Vec<(BoundedLattice, OrthoStructure)>> {
    let mut out: Vec<(BoundedLattice, OrthoStructure)> = Vec::new();
    for l in enumerate_lattices(n)? {
        let mut found: Vec<OrthoStructure> = Vec::new();
        for perm in permutations(n) {
            let prime = LatticeMap {
                table: perm.iter().map(|&i| ElementId::new(i)).collect(),
            };
            let o = OrthoStructure::new(prime);
            if !classify_ortho(&l, &o).is_ortholattice() {
                continue;
            }
            let duplicate = found
                .iter()
                .any(|p| find_isomorphism(&l, &l, &[(&o.prime, &p.prime)]).is_some());
            if !duplicate {
                found.push(o);
            }
        }
        out.extend(found.into_iter().map(|o| (l.clone(), o)));
    }
    Ok(out)
}

/// All valid Cartan maps on `l` with exactly `states` states, one per
/// state-relabelling class, in deterministic order.
///
/// A valid map assigns to each state a nonzero kernel element, so the
/// enumeration walks nondecreasing kernel sequences and keeps those the
/// constructor admits.
pub fn enumerate_cartan_maps(l: &BoundedLattice, states: usize) -> Vec<CartanMap> {
    let nonzero: Vec<ElementId> = l.elements().filter(|&x| x != l.bottom()).collect();
    let mut out = Vec::new();
    let mut kernel = vec![0usize; states];

    fn rec(
        pos: usize,
        start: usize,
        kernel: &mut Vec<usize>,
        nonzero: &[ElementId],
        l: &BoundedLattice,
        out: &mut Vec<CartanMap>,
    ) {
        if pos == kernel.len() {
            let labels: Vec<String> = (0..kernel.len()).map(|i| format!("p{}", i + 1)).collect();
            let mu: Vec<Subset> = l
                .elements()
                .map(|a| {
                    let mut s = Subset::empty(kernel.len());
                    for (p, &k) in kernel.iter().enumerate() {
                        if l.leq(nonzero[k], a) {
                            s.insert(ElementId::new(p));
                        }
                    }
                    s
                })
                .collect();
            if let Ok(m) = CartanMap::new(l, labels, mu) {
                out.push(m);
            }
            return;
        }
        for k in start..nonzero.len() {
            kernel[pos] = k;
            rec(pos + 1, k, kernel, nonzero, l, out);
        }
    }

    if states == 0 {
        // Only the trivial lattice admits a zero-state map.
        if l.n() == 1 {
            out.push(CartanMap::new(l, Vec::new(), vec![Subset::empty(0)]).unwrap());
        }
        return out;
    }
    rec(0, 0, &mut kernel, &nonzero, l, &mut out);
    out
}

/// Weak-contract variant of the enumeration. On finite lattices weak and
/// full Cartan maps coincide; the maps are admitted under the weak
/// constructor so downstream checks exercise that path.
pub fn enumerate_weak_cartan_maps(l: &BoundedLattice, states: usize) -> Vec<CartanMap> {
    enumerate_cartan_maps(l, states)
        .into_iter()
        .map(|m| {
            let mu = l.elements().map(|a| m.mu(a).clone()).collect();
            CartanMap::new_weak(l, m.state_labels().to_vec(), mu).unwrap()
        })
        .collect()
}

/// Seeded random lattice on `n` elements, by rejection over random middle
/// orders.
pub fn random_lattice(rng: &mut StdRng, n: usize) -> BoundedLattice {
    assert!(n >= 1);
    if n == 1 {
        return lattice_from_key(1, &[true]);
    }
    let m = n - 2;
    loop {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
            leq[i] = true;
            leq[i * n + (n - 1)] = true;
        }
        for i in 0..m {
            for j in i + 1..m {
                if rng.random_ratio(1, 3) {
                    leq[(i + 1) * n + (j + 1)] = true;
                }
            }
        }
        // Transitive closure over the middle.
        for k in 1..n - 1 {
            for i in 1..n - 1 {
                if leq[i * n + k] {
                    for j in 1..n - 1 {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        if let Ok(l) = BoundedLattice::from_poset(Poset::from_relation(labels, leq)) {
            return l;
        }
    }
}

/// Structure family a predicate quantifies over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    Lattice,
    Ortholattice,
    Cartan,
    WeakCartan,
}

impl StructureKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lattice" => Ok(StructureKind::Lattice),
            "ortholattice" => Ok(StructureKind::Ortholattice),
            "cartan" => Ok(StructureKind::Cartan),
            "weak-cartan" => Ok(StructureKind::WeakCartan),
            other => Err(Error::UnknownPredicate(format!("structure kind `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StructureKind::Lattice => "lattice",
            StructureKind::Ortholattice => "ortholattice",
            StructureKind::Cartan => "cartan",
            StructureKind::WeakCartan => "weak-cartan",
        }
    }
}

/// One enumerated instance.
pub enum Instance {
    Lattice(BoundedLattice),
    Ortholattice(BoundedLattice, OrthoStructure),
    Cartan(BoundedLattice, CartanMap),
}

impl Instance {
    pub fn render(&self) -> String {
        match self {
            Instance::Lattice(l) => crate::input::render(l, None, None),
            Instance::Ortholattice(l, o) => crate::input::render(l, Some(o), None),
            Instance::Cartan(l, m) => crate::input::render(l, None, Some(m)),
        }
    }
}

/// A registered claim, evaluated per instance.
pub struct PredicateInfo {
    pub id: &'static str,
    pub kind: StructureKind,
    pub claim: &'static str,
}

/// The fixed predicate registry: one entry per verified claim.
pub fn predicates() -> Vec<PredicateInfo> {
    use StructureKind::*;
    vec![
        PredicateInfo { id: "lattice-laws", kind: Lattice, claim: "meet/join tables are commutative, associative, absorptive" },
        PredicateInfo { id: "distributive", kind: Lattice, claim: "every subset has a distributive join" },
        PredicateInfo { id: "hull-verifies", kind: Lattice, claim: "the ideal completion passes the hull characterization" },
        PredicateInfo { id: "hull-heyting", kind: Lattice, claim: "the ideal completion is a complete Heyting algebra" },
        PredicateInfo { id: "distributivity-forms-agree", kind: Lattice, claim: "both distributive-join formulations agree on every subset" },
        PredicateInfo { id: "di-intersection-closed", kind: Lattice, claim: "distributive ideals are closed under intersections" },
        PredicateInfo { id: "theta-roundtrips", kind: Lattice, claim: "hull construction and closure-range extraction are mutually inverse" },
        PredicateInfo { id: "heyting-iff-distributive", kind: Lattice, claim: "all-subset distributivity coincides with the pairwise law" },
        PredicateInfo { id: "ortho-roundtrip", kind: Ortholattice, claim: "the ortho round trip through the hull recovers the structure" },
        PredicateInfo { id: "perp-laws", kind: Ortholattice, claim: "the hull complementation is pseudo-ortho with principal range and resolution square" },
        PredicateInfo { id: "orthomodular", kind: Ortholattice, claim: "a <= b implies a \\/ (a' /\\ b) = b" },
        PredicateInfo { id: "not-orthomodular", kind: Ortholattice, claim: "weak modularity fails somewhere" },
        PredicateInfo { id: "sasaki-adjunction", kind: Ortholattice, claim: "every Sasaki projection is adjoint to its companion" },
        PredicateInfo { id: "sasaki-iff-orthomodular", kind: Ortholattice, claim: "Sasaki adjunctions hold exactly on orthomodular lattices" },
        PredicateInfo { id: "superposition-forward", kind: Cartan, claim: "superposition properties force superposition states" },
        PredicateInfo { id: "superposition-converse", kind: Cartan, claim: "superposition states force superposition properties" },
        PredicateInfo { id: "superposition-converse-fails", kind: Cartan, claim: "some join has superposition states but no superposition properties" },
        PredicateInfo { id: "superposition-free-distributive", kind: Cartan, claim: "superposition-free joins are distributive" },
        PredicateInfo { id: "faithfulness-conditions-agree", kind: Cartan, claim: "the six faithfulness conditions agree" },
        PredicateInfo { id: "kernel-join-density", kind: Cartan, claim: "state kernels are join dense" },
        PredicateInfo { id: "hull-embeddings", kind: Cartan, claim: "the canonical hull maps are balanced inf-embeddings" },
        PredicateInfo { id: "faithful", kind: Cartan, claim: "the map is superpositionally faithful" },
        PredicateInfo { id: "completion-extends", kind: WeakCartan, claim: "the conjunctive completion extends the map to a full Cartan map" },
        PredicateInfo { id: "completion-join-transfer", kind: WeakCartan, claim: "join existence, disjunctivity and distributivity survive completion" },
    ]
}

fn sasaki_adjoint_everywhere(l: &BoundedLattice, o: &OrthoStructure) -> bool {
    l.elements().all(|a| {
        let (phi, phi_star) = sasaki(l, o, a);
        check_adjunction(l, l, &phi, &phi_star).holds
    })
}

/// Evaluates a registry predicate on an instance. `Ok(true)` means the
/// claim holds there.
pub fn eval_predicate(id: &str, inst: &Instance, max_bits: usize) -> Result<bool> {
    let absorb_alarm = |r: Result<()>| match r {
        Ok(()) => Ok(true),
        Err(Error::Alarm { .. }) => Ok(false),
        Err(e) => Err(e),
    };
    match (id, inst) {
        ("lattice-laws", Instance::Lattice(l)) => Ok(l.check_lattice_laws().is_none()),
        ("distributive", Instance::Lattice(l)) => Ok(heyting_status(l).is_complete_heyting),
        ("hull-verifies", Instance::Lattice(l)) => {
            let hull = distributive_ideals(l, max_bits)?;
            Ok(verify_hull(l, &hull.lattice, &hull.embedding, max_bits)?.all())
        }
        ("hull-heyting", Instance::Lattice(l)) => {
            let hull = distributive_ideals(l, max_bits)?;
            Ok(heyting_status(&hull.lattice).is_complete_heyting)
        }
        ("distributivity-forms-agree", Instance::Lattice(l)) => {
            if l.n() > max_bits || l.n() > 63 {
                return Err(Error::CapExceeded {
                    what: "subset sweep",
                    needed: l.n(),
                    cap: max_bits.min(63),
                });
            }
            Ok((0..(1u64 << l.n())).all(|mask| {
                let s = Subset::from_mask(l.n(), mask);
                is_distributive_join(l, &s) == is_distributive_join_restricted(l, &s)
            }))
        }
        ("di-intersection-closed", Instance::Lattice(l)) => {
            let hull = distributive_ideals(l, max_bits)?;
            Ok(hull.ideals.iter().all(|a| {
                hull.ideals
                    .iter()
                    .all(|b| hull.ideals.contains(&a.intersect(b)))
            }))
        }
        ("theta-roundtrips", Instance::Lattice(l)) => {
            let (_, pair) = theta(l, max_bits)?;
            let back = theta_star(&pair, max_bits)?;
            if find_isomorphism(&back, l, &[]).is_none() {
                return Ok(false);
            }
            let (_, pair2) = theta(&back, max_bits)?;
            Ok(
                find_isomorphism(&pair2.hull, &pair.hull, &[(&pair2.closure, &pair.closure)])
                    .is_some(),
            )
        }
        ("heyting-iff-distributive", Instance::Lattice(l)) => {
            if l.n() > max_bits || l.n() > 63 {
                return Err(Error::CapExceeded {
                    what: "subset sweep",
                    needed: l.n(),
                    cap: max_bits.min(63),
                });
            }
            let exhaustive = (0..(1u64 << l.n()))
                .all(|mask| is_distributive_join(l, &Subset::from_mask(l.n(), mask)));
            Ok(exhaustive == heyting_status(l).is_complete_heyting)
        }
        ("ortho-roundtrip", Instance::Ortholattice(l, o)) => {
            match crate::ortho::ortho_round_trip(l, o, max_bits) {
                Ok(trip) => Ok(trip.all()),
                Err(Error::Alarm { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        }
        ("perp-laws", Instance::Ortholattice(l, o)) => {
            let hull = distributive_ideals(l, max_bits)?;
            match crate::ortho::operational_complementation(&hull, o) {
                Ok(_) => Ok(true),
                Err(Error::Alarm { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        }
        ("orthomodular", Instance::Ortholattice(l, o)) => Ok(is_orthomodular(l, o).0),
        ("not-orthomodular", Instance::Ortholattice(l, o)) => Ok(!is_orthomodular(l, o).0),
        ("sasaki-adjunction", Instance::Ortholattice(l, o)) => Ok(sasaki_adjoint_everywhere(l, o)),
        ("sasaki-iff-orthomodular", Instance::Ortholattice(l, o)) => {
            Ok(sasaki_adjoint_everywhere(l, o) == is_orthomodular(l, o).0)
        }
        ("superposition-forward", Instance::Cartan(l, m)) => {
            match cartan::superposition_implication_check(l, m, max_bits) {
                Ok(_) => Ok(true),
                Err(Error::Alarm { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        }
        ("superposition-converse", Instance::Cartan(l, m)) => {
            Ok(cartan::superposition_implication_check(l, m, max_bits)?.converse_holds)
        }
        ("superposition-converse-fails", Instance::Cartan(l, m)) => {
            Ok(!cartan::superposition_implication_check(l, m, max_bits)?.converse_holds)
        }
        ("superposition-free-distributive", Instance::Cartan(l, m)) => {
            absorb_alarm(cartan::distributivity_of_superposition_free(l, m, max_bits))
        }
        ("faithfulness-conditions-agree", Instance::Cartan(l, m)) => {
            Ok(cartan::faithfulness_report(l, m, max_bits)?.agree())
        }
        ("kernel-join-density", Instance::Cartan(l, m)) => {
            absorb_alarm(cartan::join_density_check(l, m))
        }
        ("hull-embeddings", Instance::Cartan(l, m)) => {
            let hull = distributive_ideals(l, max_bits)?;
            let dh = cartan::disjunctive_hull(l, m, max_bits)?;
            let phi = cartan::phi_mu(&hull, &dh, m);
            let eps = cartan::eps_mu(l, m, &dh, max_bits);
            match (phi, eps) {
                (Ok(_), Ok(_)) => Ok(true),
                (Err(Error::Alarm { .. }), _) | (_, Err(Error::Alarm { .. })) => Ok(false),
                (Err(e), _) | (_, Err(e)) => Err(e),
            }
        }
        ("faithful", Instance::Cartan(l, m)) => {
            Ok(cartan::faithfulness_report(l, m, max_bits)?.overall())
        }
        ("completion-extends", Instance::Cartan(l, m)) => {
            match cartan::conjunctive_completion(l, m) {
                Ok(comp) => {
                    Ok(cartan::validate_cartan(&comp.lattice, &comp.mu_bar, max_bits)?.valid())
                }
                Err(Error::Alarm { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        }
        ("completion-join-transfer", Instance::Cartan(l, m)) => {
            match cartan::conjunctive_join_transfer(l, m, max_bits) {
                Ok(_) => Ok(true),
                Err(Error::Alarm { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        }
        _ => Err(Error::UnknownPredicate(format!(
            "`{id}` is not defined for this structure kind"
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    FindWitness,
    FindCounterexample,
    Count,
}

impl SearchMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "witness" => Ok(SearchMode::FindWitness),
            "counterexample" => Ok(SearchMode::FindCounterexample),
            "count" => Ok(SearchMode::Count),
            other => Err(Error::UnknownPredicate(format!("search mode `{other}`"))),
        }
    }
}

/// Full description of one search run.
#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub kind: StructureKind,
    pub predicate: String,
    pub max_elements: usize,
    pub max_states: usize,
    pub mode: SearchMode,
    pub seed: u64,
    pub sampled: bool,
    pub samples: usize,
    pub max_bits: usize,
}

/// Deterministic result of a search run.
pub struct SearchOutcome {
    pub report: String,
    /// For witness mode: a witness was found. For counterexample mode: a
    /// counterexample was found.
    pub found: bool,
    pub instances: usize,
}

fn instances_for(kind: StructureKind, l: &BoundedLattice, max_states: usize) -> Vec<Instance> {
    match kind {
        StructureKind::Lattice => vec![Instance::Lattice(l.clone())],
        StructureKind::Ortholattice => Vec::new(),
        StructureKind::Cartan => (0..=max_states)
            .flat_map(|s| enumerate_cartan_maps(l, s))
            .map(|m| Instance::Cartan(l.clone(), m))
            .collect(),
        StructureKind::WeakCartan => (0..=max_states)
            .flat_map(|s| enumerate_weak_cartan_maps(l, s))
            .map(|m| Instance::Cartan(l.clone(), m))
            .collect(),
    }
}

/// Runs a search over the exhaustive enumeration (or a seeded sample) and
/// renders a byte-deterministic report.
pub fn run_search(spec: &SearchSpec) -> Result<SearchOutcome> {
    let info = predicates()
        .into_iter()
        .find(|p| p.id == spec.predicate)
        .ok_or_else(|| Error::UnknownPredicate(spec.predicate.clone()))?;
    let effective_kind = match (spec.kind, info.kind) {
        (k, ik) if k == ik => k,
        // A cartan predicate may be run under the weak contract and
        // vice versa; anything else is a mismatch.
        (StructureKind::WeakCartan, StructureKind::Cartan) => StructureKind::WeakCartan,
        (StructureKind::Cartan, StructureKind::WeakCartan) => StructureKind::Cartan,
        _ => {
            return Err(Error::UnknownPredicate(format!(
                "predicate `{}` expects kind `{}`",
                info.id,
                info.kind.name()
            )))
        }
    };

    let mut lines = Vec::new();
    lines.push(format!("predicate = {}", info.id));
    lines.push(format!("claim = {}", info.claim));
    lines.push(format!("kind = {}", effective_kind.name()));
    let mode_name = match spec.mode {
        SearchMode::FindWitness => "witness",
        SearchMode::FindCounterexample => "counterexample",
        SearchMode::Count => "count",
    };
    lines.push(format!("mode = {mode_name}"));
    lines.push(format!("max_elements = {}", spec.max_elements));
    if matches!(
        effective_kind,
        StructureKind::Cartan | StructureKind::WeakCartan
    ) {
        lines.push(format!("max_states = {}", spec.max_states));
    }

    let mut scanned = 0usize;
    let mut holding = 0usize;
    let mut hit: Option<(String, bool)> = None;

    let mut consider = |inst: &Instance, value: bool| -> bool {
        scanned += 1;
        if value {
            holding += 1;
        }
        match spec.mode {
            SearchMode::FindWitness if value => {
                hit = Some((inst.render(), true));
                true
            }
            SearchMode::FindCounterexample if !value => {
                hit = Some((inst.render(), false));
                true
            }
            _ => false,
        }
    };

    if spec.sampled {
        lines.push(format!("coverage = sampled (seed {})", spec.seed));
        lines.push(format!("samples = {}", spec.samples));
        let mut rng = StdRng::seed_from_u64(spec.seed);
        'outer: for _ in 0..spec.samples {
            let n = rng.random_range(1..=spec.max_elements.max(1));
            let l = random_lattice(&mut rng, n);
            let batch = match effective_kind {
                StructureKind::Ortholattice => {
                    // Sampled ortholattices: all complementations of a
                    // random lattice.
                    let mut v = Vec::new();
                    for (ll, o) in enumerate_ortholattices_of(&l) {
                        v.push(Instance::Ortholattice(ll, o));
                    }
                    v
                }
                k => instances_for(k, &l, spec.max_states),
            };
            for inst in &batch {
                let value = eval_predicate(info.id, inst, spec.max_bits)?;
                if consider(inst, value) {
                    break 'outer;
                }
            }
        }
    } else {
        lines.push("coverage = exhaustive".to_string());
        'outer2: for n in 1..=spec.max_elements {
            let batches: Vec<Instance> = match effective_kind {
                StructureKind::Ortholattice => enumerate_ortholattices(n)?
                    .into_iter()
                    .map(|(l, o)| Instance::Ortholattice(l, o))
                    .collect(),
                k => {
                    let mut v = Vec::new();
                    for l in enumerate_lattices(n)? {
                        v.extend(instances_for(k, &l, spec.max_states));
                    }
                    v
                }
            };
            // Evaluate the whole batch in parallel, then fold results in
            // index order so the outcome is schedule-independent.
            let values: Vec<Result<bool>> = batches
                .par_iter()
                .map(|inst| eval_predicate(info.id, inst, spec.max_bits))
                .collect();
            for (inst, value) in batches.iter().zip(values) {
                if consider(inst, value?) {
                    break 'outer2;
                }
            }
        }
    }

    lines.push(format!("instances_scanned = {scanned}"));
    lines.push(format!("instances_satisfying = {holding}"));
    let found = hit.is_some();
    match (&hit, spec.mode) {
        (Some((text, true)), _) => {
            lines.push("result = witness found".to_string());
            lines.push(String::new());
            lines.push(text.trim_end().to_string());
        }
        (Some((text, false)), _) => {
            lines.push("result = counterexample found".to_string());
            lines.push(String::new());
            lines.push(text.trim_end().to_string());
        }
        (None, SearchMode::Count) => {
            lines.push("result = count complete".to_string());
        }
        (None, _) => {
            if spec.sampled {
                lines.push("result = sample exhausted, nothing found".to_string());
            } else {
                lines.push(format!(
                    "result = exhausted: no {} within bounds",
                    if spec.mode == SearchMode::FindWitness {
                        "witness"
                    } else {
                        "counterexample"
                    }
                ));
            }
        }
    }
    Ok(SearchOutcome {
        report: lines.join("\n") + "\n",
        found,
        instances: scanned,
    })
}

fn enumerate_ortholattices_of(l: &BoundedLattice) -> Vec<(BoundedLattice, OrthoStructure)> {
    let n = l.n();
    let mut found: Vec<OrthoStructure> = Vec::new();
    for perm in permutations(n) {
        let prime = LatticeMap {
            table: perm.iter().map(|&i| ElementId::new(i)).collect(),
        };
        let o = OrthoStructure::new(prime);
        if !classify_ortho(l, &o).is_ortholattice() {
            continue;
        }
        let duplicate = found
            .iter()
            .any(|p| find_isomorphism(l, l, &[(&o.prime, &p.prime)]).is_some());
        if !duplicate {
            found.push(o);
        }
    }
    found.into_iter().map(|o| (l.clone(), o)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn lattice_counts_match_census() {
        // Unlabelled bounded lattices per element count.
        let expected = [1usize, 1, 1, 2, 5, 15];
        for (i, &want) in expected.iter().enumerate() {
            let got = enumerate_lattices(i + 1).unwrap().len();
            assert_eq!(got, want, "n = {}", i + 1);
        }
    }

    #[test]
    fn seven_element_census() {
        assert_eq!(enumerate_lattices(7).unwrap().len(), 53);
    }

    /// Independent generator: every subset of the full strict upper
    /// triangle, filtered to transitive lattice orders, counted up to
    /// isomorphism.
    fn brute_force_count(n: usize) -> usize {
        if n == 1 {
            return 1;
        }
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let mut keys: Vec<Vec<bool>> = Vec::new();
        for choice in 0u64..(1 << pairs.len()) {
            let mut leq = vec![false; n * n];
            for i in 0..n {
                leq[i * n + i] = true;
            }
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if choice >> b & 1 == 1 {
                    leq[i * n + j] = true;
                }
            }
            // transitivity
            let mut ok = true;
            for i in 0..n {
                for j in 0..n {
                    if leq[i * n + j] {
                        for k in 0..n {
                            if leq[j * n + k] && !leq[i * n + k] {
                                ok = false;
                            }
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
            let Ok(l) = BoundedLattice::from_poset(Poset::from_relation(labels, leq)) else {
                continue;
            };
            let key = canonical_key(&l);
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        keys.len()
    }

    #[test]
    fn enumeration_matches_independent_brute_force() {
        for n in 1..=5 {
            assert_eq!(
                enumerate_lattices(n).unwrap().len(),
                brute_force_count(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn enumerated_lattices_satisfy_the_lattice_laws() {
        for n in 1..=6 {
            for l in enumerate_lattices(n).unwrap() {
                assert!(l.check_lattice_laws().is_none(), "laws fail at n = {n}");
            }
        }
    }

    #[test]
    fn catalog_members_appear_in_enumeration() {
        let five = enumerate_lattices(5).unwrap();
        for target in [catalog::m3(), catalog::n5(), catalog::chain(5)] {
            assert!(five
                .iter()
                .any(|l| find_isomorphism(l, &target, &[]).is_some()));
        }
    }

    #[test]
    fn random_lattices_match_canonical_representatives() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.random_range(1..=6);
            let l = random_lattice(&mut rng, n);
            let all = enumerate_lattices(n).unwrap();
            assert!(all.iter().any(|c| find_isomorphism(c, &l, &[]).is_some()));
        }
    }

    #[test]
    fn ortholattice_enumeration_small() {
        // 1: trivial; 2: the two-element Boolean algebra; 3: none.
        assert_eq!(enumerate_ortholattices(1).unwrap().len(), 1);
        assert_eq!(enumerate_ortholattices(2).unwrap().len(), 1);
        assert_eq!(enumerate_ortholattices(3).unwrap().len(), 0);
        // 4: the square with its complement.
        assert_eq!(enumerate_ortholattices(4).unwrap().len(), 1);
        assert_eq!(enumerate_ortholattices(5).unwrap().len(), 0);
        // 6: the horizontal sum MO2 and the benzene ring.
        let six = enumerate_ortholattices(6).unwrap();
        assert_eq!(six.len(), 2);
        let (mo2, mo2o) = catalog::mo2();
        assert!(six
            .iter()
            .any(|(l, o)| find_isomorphism(l, &mo2, &[(&o.prime, &mo2o.prime)]).is_some()));
        let (o6, o6o) = catalog::o6();
        assert!(six
            .iter()
            .any(|(l, o)| find_isomorphism(l, &o6, &[(&o.prime, &o6o.prime)]).is_some()));
    }

    #[test]
    fn cartan_enumeration_examples() {
        let c2 = catalog::chain(2);
        assert_eq!(enumerate_cartan_maps(&c2, 1).len(), 1);
        // Zero states: only the trivial lattice.
        let b2 = catalog::boolean(2);
        assert!(enumerate_cartan_maps(&b2, 0).is_empty());
        assert_eq!(enumerate_cartan_maps(&catalog::chain(1), 0).len(), 1);
    }

    /// Independent generator for tiny cases: every mu table whatsoever,
    /// filtered by the constructor, counted up to state relabelling.
    fn brute_force_cartan_count(l: &BoundedLattice, states: usize) -> usize {
        let total_rows = 1u64 << states;
        let n = l.n();
        let mut count = 0usize;
        let mut tables = Vec::new();
        let mut idx = vec![0u64; n];
        loop {
            let mu: Vec<Subset> = idx.iter().map(|&m| Subset::from_mask(states, m)).collect();
            let labels: Vec<String> = (0..states).map(|i| format!("p{}", i + 1)).collect();
            if CartanMap::new(l, labels, mu.clone()).is_ok() {
                // canonical form under state permutations
                let mut best: Option<Vec<u64>> = None;
                for perm in permutations(states) {
                    let remapped: Vec<u64> = idx
                        .iter()
                        .map(|&m| {
                            let mut out = 0u64;
                            for (from, &to) in perm.iter().enumerate() {
                                if m >> from & 1 == 1 {
                                    out |= 1 << to;
                                }
                            }
                            out
                        })
                        .collect();
                    if best.as_ref().is_none_or(|b| remapped < *b) {
                        best = Some(remapped);
                    }
                }
                let key = best.unwrap();
                if !tables.contains(&key) {
                    tables.push(key);
                    count += 1;
                }
            }
            // increment multi-digit counter
            let mut pos = 0;
            loop {
                if pos == n {
                    return count;
                }
                idx[pos] += 1;
                if idx[pos] < total_rows {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn cartan_enumeration_matches_brute_force() {
        for l in [catalog::chain(2), catalog::chain(3), catalog::boolean(2)] {
            for states in 0..=3 {
                assert_eq!(
                    enumerate_cartan_maps(&l, states).len(),
                    brute_force_cartan_count(&l, states),
                    "lattice n={}, states={}",
                    l.n(),
                    states
                );
            }
        }
        for l in [catalog::m3(), catalog::n5()] {
            for states in 0..=2 {
                assert_eq!(
                    enumerate_cartan_maps(&l, states).len(),
                    brute_force_cartan_count(&l, states),
                    "lattice n={}, states={}",
                    l.n(),
                    states
                );
            }
        }
    }

    #[test]
    fn square_counterexample_is_enumerated() {
        // The square admits a three-state map whose converse implication
        // fails.
        let b2 = catalog::boolean(2);
        let maps = enumerate_cartan_maps(&b2, 3);
        let hit = maps.iter().any(|m| {
            !cartan::superposition_implication_check(&b2, m, 16)
                .unwrap()
                .converse_holds
        });
        assert!(hit);
    }

    #[test]
    fn search_finds_a_superposition_state_without_property() {
        let spec = SearchSpec {
            kind: StructureKind::Cartan,
            predicate: "superposition-converse-fails".to_string(),
            max_elements: 4,
            max_states: 3,
            mode: SearchMode::FindWitness,
            seed: 0,
            sampled: false,
            samples: 0,
            max_bits: 16,
        };
        let out = run_search(&spec).unwrap();
        assert!(out.found);
        // The witness is the three-state square map: one state per atom
        // plus a state actual only at the top.
        assert!(out.report.contains("states p1 p2 p3"));
        assert!(out.report.contains("mu e1 : p1"));
        assert!(out.report.contains("mu e2 : p2"));
        assert!(out.report.contains("mu e3 : p1 p2 p3"));
    }

    #[test]
    fn search_finds_o6_as_orthomodularity_witness() {
        let spec = SearchSpec {
            kind: StructureKind::Ortholattice,
            predicate: "not-orthomodular".to_string(),
            max_elements: 6,
            max_states: 0,
            mode: SearchMode::FindWitness,
            seed: 0,
            sampled: false,
            samples: 0,
            max_bits: 16,
        };
        let out = run_search(&spec).unwrap();
        assert!(out.found);
        assert!(out.report.contains("witness found"));
    }

    #[test]
    fn search_exhausts_faithfulness_agreement_on_small_bounds() {
        let spec = SearchSpec {
            kind: StructureKind::Cartan,
            predicate: "faithfulness-conditions-agree".to_string(),
            max_elements: 4,
            max_states: 3,
            mode: SearchMode::FindCounterexample,
            seed: 0,
            sampled: false,
            samples: 0,
            max_bits: 16,
        };
        let out = run_search(&spec).unwrap();
        assert!(!out.found);
        assert!(out.report.contains("exhausted"));
    }

    #[test]
    fn search_is_deterministic() {
        let spec = SearchSpec {
            kind: StructureKind::Lattice,
            predicate: "hull-verifies".to_string(),
            max_elements: 5,
            max_states: 0,
            mode: SearchMode::Count,
            seed: 0,
            sampled: false,
            samples: 0,
            max_bits: 16,
        };
        let a = run_search(&spec).unwrap().report;
        let b = run_search(&spec).unwrap().report;
        assert_eq!(a, b);
    }
}
