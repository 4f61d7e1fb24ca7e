//! Finite bounded posets and lattices, maps between them, closure operators
//! and the Galois-adjunction calculus.
//!
//! Elements are indexed in declaration order and all iteration follows that
//! order, so every report built on top of these types is deterministic.

use crate::{Error, Result};

/// Position of an element in the declared element list of its structure.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ElementId(pub u16);

impl ElementId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn new(i: usize) -> Self {
        ElementId(i as u16)
    }
}

/// Membership mask over the elements of one fixed structure.
///
/// The width is fixed at construction; set operations on subsets of
/// different widths are a logic error and panic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subset {
    width: usize,
    blocks: Vec<u64>,
}

impl Subset {
    pub fn empty(width: usize) -> Self {
        Subset {
            width,
            blocks: vec![0; width.div_ceil(64).max(1)],
        }
    }

    pub fn full(width: usize) -> Self {
        let mut s = Self::empty(width);
        for i in 0..width {
            s.insert(ElementId::new(i));
        }
        s
    }

    pub fn singleton(width: usize, e: ElementId) -> Self {
        let mut s = Self::empty(width);
        s.insert(e);
        s
    }

    /// Subset over a small structure from a plain bitmask.
    pub fn from_mask(width: usize, mask: u64) -> Self {
        debug_assert!(width <= 64);
        let mut s = Self::empty(width);
        s.blocks[0] = mask;
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn insert(&mut self, e: ElementId) {
        debug_assert!(e.idx() < self.width);
        self.blocks[e.idx() / 64] |= 1u64 << (e.idx() % 64);
    }

    #[inline]
    pub fn remove(&mut self, e: ElementId) {
        self.blocks[e.idx() / 64] &= !(1u64 << (e.idx() % 64));
    }

    #[inline]
    pub fn contains(&self, e: ElementId) -> bool {
        e.idx() < self.width && self.blocks[e.idx() / 64] >> (e.idx() % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn union(&self, other: &Subset) -> Subset {
        assert_eq!(self.width, other.width);
        Subset {
            width: self.width,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersect(&self, other: &Subset) -> Subset {
        assert_eq!(self.width, other.width);
        Subset {
            width: self.width,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        assert_eq!(self.width, other.width);
        Subset {
            width: self.width,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        assert_eq!(self.width, other.width);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.width)
            .map(ElementId::new)
            .filter(move |e| self.contains(*e))
    }

    /// Plain bitmask view; only valid for structures of at most 64 elements.
    pub fn as_mask(&self) -> u64 {
        assert!(self.width <= 64);
        self.blocks[0]
    }

    /// Canonical ordering key: by cardinality, then numerically.
    pub fn sort_key(&self) -> (usize, Vec<u64>) {
        (self.count(), self.blocks.iter().rev().copied().collect())
    }
}

/// Finite partial order with labelled elements.
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    leq: Vec<bool>,
    n: usize,
}

impl Poset {
    /// Builds a poset as the reflexive-transitive closure of a cover list.
    ///
    /// Rejects duplicate labels and cycles (antisymmetry violations).
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::NoBottom);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(lo, hi) in covers {
            assert!(lo < n && hi < n, "cover indices out of range");
            leq[lo * n + hi] = true;
        }
        // Warshall transitive closure; fine at input scale.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::Cycle(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Ok(Poset { labels, leq, n })
    }

    /// Builds a poset directly from a full order relation (already closed).
    pub fn from_relation(labels: Vec<String>, leq: Vec<bool>) -> Self {
        let n = labels.len();
        debug_assert_eq!(leq.len(), n * n);
        Poset { labels, leq, n }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.leq[a.idx() * self.n + b.idx()]
    }

    #[inline]
    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn label(&self, a: ElementId) -> &str {
        &self.labels[a.idx()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<ElementId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(ElementId::new)
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> {
        (0..self.n).map(ElementId::new)
    }

    pub fn downset(&self, a: ElementId) -> Subset {
        let mut s = Subset::empty(self.n);
        for x in self.elements() {
            if self.leq(x, a) {
                s.insert(x);
            }
        }
        s
    }

    pub fn upset(&self, a: ElementId) -> Subset {
        let mut s = Subset::empty(self.n);
        for x in self.elements() {
            if self.leq(a, x) {
                s.insert(x);
            }
        }
        s
    }

    /// Bitmask of the principal downset; structures of at most 64 elements.
    pub fn down_mask(&self, a: ElementId) -> u64 {
        assert!(self.n <= 64);
        let mut m = 0u64;
        for x in self.elements() {
            if self.leq(x, a) {
                m |= 1 << x.idx();
            }
        }
        m
    }

    /// `b` covers `a`: `a < b` with nothing strictly between.
    pub fn is_covered_by(&self, a: ElementId, b: ElementId) -> bool {
        self.lt(a, b) && !self.elements().any(|c| self.lt(a, c) && self.lt(c, b))
    }

    /// Elements covering `a`.
    pub fn covers_of(&self, a: ElementId) -> Subset {
        let mut s = Subset::empty(self.n);
        for b in self.elements() {
            if self.is_covered_by(a, b) {
                s.insert(b);
            }
        }
        s
    }

    /// Elements covered by `a` (lower covers).
    pub fn lower_covers_of(&self, a: ElementId) -> Subset {
        let mut s = Subset::empty(self.n);
        for b in self.elements() {
            if self.is_covered_by(b, a) {
                s.insert(b);
            }
        }
        s
    }

    /// Greatest lower bound if one exists; reports absence instead of
    /// inventing a bound.
    pub fn glb(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        let mut best: Option<ElementId> = None;
        for c in self.elements() {
            if self.leq(c, a) && self.leq(c, b) {
                best = match best {
                    None => Some(c),
                    Some(m) => {
                        if self.leq(m, c) {
                            Some(c)
                        } else {
                            Some(m)
                        }
                    }
                };
            }
        }
        let m = best?;
        for c in self.elements() {
            if self.leq(c, a) && self.leq(c, b) && !self.leq(c, m) {
                return None;
            }
        }
        Some(m)
    }

    /// Least upper bound if one exists.
    pub fn lub(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        let mut best: Option<ElementId> = None;
        for c in self.elements() {
            if self.leq(a, c) && self.leq(b, c) {
                best = match best {
                    None => Some(c),
                    Some(m) => {
                        if self.leq(c, m) {
                            Some(c)
                        } else {
                            Some(m)
                        }
                    }
                };
            }
        }
        let m = best?;
        for c in self.elements() {
            if self.leq(a, c) && self.leq(b, c) && !self.leq(m, c) {
                return None;
            }
        }
        Some(m)
    }

    /// Element order sorted so that smaller elements come first.
    pub fn linear_extension(&self) -> Vec<ElementId> {
        let mut order: Vec<ElementId> = self.elements().collect();
        order.sort_by_key(|&e| (self.downset(e).count(), e));
        order
    }

    /// Induced subposet on `keep`, preserving relative label order.
    pub fn induced(&self, keep: &Subset) -> Poset {
        let elems: Vec<ElementId> = keep.iter().collect();
        let n = elems.len();
        let labels = elems
            .iter()
            .map(|&e| self.labels[e.idx()].clone())
            .collect();
        let mut leq = vec![false; n * n];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                leq[i * n + j] = self.leq(a, b);
            }
        }
        Poset { labels, leq, n }
    }

    pub fn render_subset(&self, s: &Subset) -> String {
        let mut out = String::from("{");
        let mut first = true;
        for e in s.iter() {
            if !first {
                out.push(',');
            }
            out.push_str(self.label(e));
            first = false;
        }
        out.push('}');
        out
    }
}

/// Finite bounded lattice with total meet and join tables.
#[derive(Clone, Debug)]
pub struct BoundedLattice {
    poset: Poset,
    meet: Vec<ElementId>,
    join: Vec<ElementId>,
    bottom: ElementId,
    top: ElementId,
}

impl BoundedLattice {
    /// Computes meet and join tables by bound enumeration. Fails when some
    /// pair lacks a unique greatest lower or least upper bound, or when the
    /// poset has no global bottom or top.
    pub fn from_poset(poset: Poset) -> Result<Self> {
        let n = poset.n();
        let mut meet = vec![ElementId(0); n * n];
        let mut join = vec![ElementId(0); n * n];
        for a in poset.elements() {
            for b in poset.elements() {
                let m = poset.glb(a, b).ok_or_else(|| Error::NotALattice {
                    kind: "greatest lower bound",
                    a: poset.label(a).to_string(),
                    b: poset.label(b).to_string(),
                })?;
                let j = poset.lub(a, b).ok_or_else(|| Error::NotALattice {
                    kind: "least upper bound",
                    a: poset.label(a).to_string(),
                    b: poset.label(b).to_string(),
                })?;
                meet[a.idx() * n + b.idx()] = m;
                join[a.idx() * n + b.idx()] = j;
            }
        }
        let bottom = poset
            .elements()
            .find(|&b| poset.elements().all(|x| poset.leq(b, x)))
            .ok_or(Error::NoBottom)?;
        let top = poset
            .elements()
            .find(|&t| poset.elements().all(|x| poset.leq(x, t)))
            .ok_or(Error::NoTop)?;
        Ok(BoundedLattice {
            poset,
            meet,
            join,
            bottom,
            top,
        })
    }

    /// Assembles a lattice from precomputed tables, for product lattices
    /// whose meets and joins are known by construction.
    pub fn from_tables(
        poset: Poset,
        meet: Vec<ElementId>,
        join: Vec<ElementId>,
        bottom: ElementId,
        top: ElementId,
    ) -> Self {
        debug_assert_eq!(meet.len(), poset.n() * poset.n());
        debug_assert_eq!(join.len(), poset.n() * poset.n());
        BoundedLattice {
            poset,
            meet,
            join,
            bottom,
            top,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.poset.n()
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.poset.leq(a, b)
    }

    #[inline]
    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        self.poset.lt(a, b)
    }

    #[inline]
    pub fn meet(&self, a: ElementId, b: ElementId) -> ElementId {
        self.meet[a.idx() * self.n() + b.idx()]
    }

    #[inline]
    pub fn join(&self, a: ElementId, b: ElementId) -> ElementId {
        self.join[a.idx() * self.n() + b.idx()]
    }

    pub fn bottom(&self) -> ElementId {
        self.bottom
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    pub fn label(&self, a: ElementId) -> &str {
        self.poset.label(a)
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> {
        self.poset.elements()
    }

    /// Join of a subset by the bound-enumeration formula: the meet of all
    /// upper bounds. The empty join is the bottom element.
    pub fn join_set(&self, a: &Subset) -> ElementId {
        let mut acc = self.top;
        for b in self.elements() {
            if a.iter().all(|x| self.leq(x, b)) {
                acc = self.meet(acc, b);
            }
        }
        acc
    }

    /// Meet of a subset; the empty meet is the top element.
    pub fn meet_set(&self, a: &Subset) -> ElementId {
        let mut acc = self.top;
        for x in a.iter() {
            acc = self.meet(acc, x);
        }
        acc
    }

    /// Join over a bitmask; structures of at most 64 elements.
    #[inline]
    pub fn join_mask(&self, mask: u64) -> ElementId {
        let mut acc = self.bottom;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            acc = self.join(acc, ElementId::new(i));
            m &= m - 1;
        }
        acc
    }

    /// Meet over a bitmask; structures of at most 64 elements.
    #[inline]
    pub fn meet_mask(&self, mask: u64) -> ElementId {
        let mut acc = self.top;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            acc = self.meet(acc, ElementId::new(i));
            m &= m - 1;
        }
        acc
    }

    pub fn is_atom(&self, a: ElementId) -> bool {
        self.poset.is_covered_by(self.bottom, a)
    }

    /// Exhaustive check of commutativity, associativity and absorption.
    /// Returns a witness description on failure.
    pub fn check_lattice_laws(&self) -> Option<String> {
        for a in self.elements() {
            for b in self.elements() {
                if self.meet(a, b) != self.meet(b, a) || self.join(a, b) != self.join(b, a) {
                    return Some(format!(
                        "commutativity fails at ({}, {})",
                        self.label(a),
                        self.label(b)
                    ));
                }
                if self.meet(a, self.join(a, b)) != a || self.join(a, self.meet(a, b)) != a {
                    return Some(format!(
                        "absorption fails at ({}, {})",
                        self.label(a),
                        self.label(b)
                    ));
                }
                for c in self.elements() {
                    if self.meet(a, self.meet(b, c)) != self.meet(self.meet(a, b), c)
                        || self.join(a, self.join(b, c)) != self.join(self.join(a, b), c)
                    {
                        return Some(format!(
                            "associativity fails at ({}, {}, {})",
                            self.label(a),
                            self.label(b),
                            self.label(c)
                        ));
                    }
                }
            }
        }
        None
    }
}

/// Total function table between two structures.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeMap {
    pub table: Vec<ElementId>,
}

impl LatticeMap {
    pub fn identity(n: usize) -> Self {
        LatticeMap {
            table: (0..n).map(ElementId::new).collect(),
        }
    }

    pub fn constant(n: usize, c: ElementId) -> Self {
        LatticeMap { table: vec![c; n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(ElementId) -> ElementId) -> Self {
        LatticeMap {
            table: (0..n).map(|i| f(ElementId::new(i))).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, a: ElementId) -> ElementId {
        self.table[a.idx()]
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn compose(&self, then: &LatticeMap) -> LatticeMap {
        LatticeMap {
            table: self.table.iter().map(|&x| then.apply(x)).collect(),
        }
    }
}

/// Independent preservation flags of a map between bounded lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreservationReport {
    pub injective: bool,
    pub order_embedding: bool,
    pub preserves_binary_meets: bool,
    pub preserves_all_meets: bool,
    pub preserves_binary_joins: bool,
    pub preserves_all_joins: bool,
    pub balanced: bool,
    pub preserves_top: bool,
}

impl PreservationReport {
    pub fn is_inf_embedding(&self) -> bool {
        self.preserves_all_meets && self.injective
    }

    pub fn is_balanced_inf_embedding(&self) -> bool {
        self.is_inf_embedding() && self.balanced
    }
}

/// Checks every preservation flag of `f : src -> dst`.
///
/// On finite lattices arbitrary meets are iterated binary meets plus the
/// empty meet, so all-meet preservation reduces to binary meets and top;
/// dually for joins.
pub fn check_map(
    src: &BoundedLattice,
    dst: &BoundedLattice,
    f: &LatticeMap,
) -> Result<PreservationReport> {
    if f.len() != src.n() {
        return Err(Error::SizeMismatch {
            expected: src.n(),
            got: f.len(),
        });
    }
    for &v in &f.table {
        if v.idx() >= dst.n() {
            return Err(Error::SizeMismatch {
                expected: dst.n(),
                got: v.idx() + 1,
            });
        }
    }
    let mut injective = true;
    let mut order_embedding = true;
    let mut bin_meets = true;
    let mut bin_joins = true;
    for a in src.elements() {
        for b in src.elements() {
            let fa = f.apply(a);
            let fb = f.apply(b);
            if a != b && fa == fb {
                injective = false;
            }
            if src.leq(a, b) != dst.leq(fa, fb) {
                order_embedding = false;
            }
            if f.apply(src.meet(a, b)) != dst.meet(fa, fb) {
                bin_meets = false;
            }
            if f.apply(src.join(a, b)) != dst.join(fa, fb) {
                bin_joins = false;
            }
        }
    }
    let preserves_top = f.apply(src.top()) == dst.top();
    let balanced = f.apply(src.bottom()) == dst.bottom();
    Ok(PreservationReport {
        injective,
        order_embedding,
        preserves_binary_meets: bin_meets,
        preserves_all_meets: bin_meets && preserves_top,
        preserves_binary_joins: bin_joins,
        preserves_all_joins: bin_joins && balanced,
        balanced,
        preserves_top,
    })
}

/// Closure-operator flags of an endo-map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub isotone: bool,
    pub increasing: bool,
    pub idempotent: bool,
    pub normalized: bool,
}

impl ClosureReport {
    pub fn is_closure(&self) -> bool {
        self.isotone && self.increasing && self.idempotent
    }
}

pub fn is_closure(l: &BoundedLattice, f: &LatticeMap) -> ClosureReport {
    let mut isotone = true;
    let mut increasing = true;
    let mut idempotent = true;
    for a in l.elements() {
        if !l.leq(a, f.apply(a)) {
            increasing = false;
        }
        if f.apply(f.apply(a)) != f.apply(a) {
            idempotent = false;
        }
        for b in l.elements() {
            if l.leq(a, b) && !l.leq(f.apply(a), f.apply(b)) {
                isotone = false;
            }
        }
    }
    ClosureReport {
        isotone,
        increasing,
        idempotent,
        normalized: f.apply(l.bottom()) == l.bottom(),
    }
}

/// Closure `a -> meet { b in M | a <= b }` induced by a meet-closed subset
/// containing the top.
pub fn closure_from_subobject(l: &BoundedLattice, m: &Subset) -> Result<LatticeMap> {
    if !m.contains(l.top()) {
        return Err(Error::MissingTop);
    }
    for x in m.iter() {
        for y in m.iter() {
            if !m.contains(l.meet(x, y)) {
                return Err(Error::NotMeetClosed {
                    witness: format!(
                        "{} and {} but not their meet {}",
                        l.label(x),
                        l.label(y),
                        l.label(l.meet(x, y))
                    ),
                });
            }
        }
    }
    Ok(LatticeMap::from_fn(l.n(), |a| {
        let mut acc = l.top();
        for b in m.iter() {
            if l.leq(a, b) {
                acc = l.meet(acc, b);
            }
        }
        acc
    }))
}

/// Result of an exhaustive Galois-adjunction check.
#[derive(Clone, Debug)]
pub struct AdjunctionCheck {
    pub holds: bool,
    pub witness: Option<(ElementId, ElementId)>,
}

/// `f` is left adjoint to `g`: `f(a) <= b` iff `a <= g(b)` for all pairs.
pub fn check_adjunction(
    l: &BoundedLattice,
    m: &BoundedLattice,
    f: &LatticeMap,
    g: &LatticeMap,
) -> AdjunctionCheck {
    for a in l.elements() {
        for b in m.elements() {
            if m.leq(f.apply(a), b) != l.leq(a, g.apply(b)) {
                return AdjunctionCheck {
                    holds: false,
                    witness: Some((a, b)),
                };
            }
        }
    }
    AdjunctionCheck {
        holds: true,
        witness: None,
    }
}

/// Unique sup-preserving left adjoint `a -> meet { b | a <= g(b) }` of an
/// inf-preserving map `g : m -> l`.
pub fn left_adjoint(m: &BoundedLattice, l: &BoundedLattice, g: &LatticeMap) -> Result<LatticeMap> {
    let report = check_map(m, l, g)?;
    if !report.preserves_all_meets {
        let (a, b) = meet_violation(m, l, g);
        return Err(Error::NotInfPreserving(a, b));
    }
    Ok(LatticeMap::from_fn(l.n(), |a| {
        let mut acc = m.top();
        for b in m.elements() {
            if l.leq(a, g.apply(b)) {
                acc = m.meet(acc, b);
            }
        }
        acc
    }))
}

/// Unique inf-preserving right adjoint `b -> join { a | f(a) <= b }` of a
/// sup-preserving map `f : l -> m`.
pub fn right_adjoint(l: &BoundedLattice, m: &BoundedLattice, f: &LatticeMap) -> Result<LatticeMap> {
    let report = check_map(l, m, f)?;
    if !report.preserves_all_joins {
        let (a, b) = join_violation(l, m, f);
        return Err(Error::NotSupPreserving(a, b));
    }
    Ok(LatticeMap::from_fn(m.n(), |b| {
        let mut acc = l.bottom();
        for a in l.elements() {
            if m.leq(f.apply(a), b) {
                acc = l.join(acc, a);
            }
        }
        acc
    }))
}

fn meet_violation(src: &BoundedLattice, dst: &BoundedLattice, f: &LatticeMap) -> (String, String) {
    if f.apply(src.top()) != dst.top() {
        return ("empty meet".into(), "top".into());
    }
    for a in src.elements() {
        for b in src.elements() {
            if f.apply(src.meet(a, b)) != dst.meet(f.apply(a), f.apply(b)) {
                return (src.label(a).to_string(), src.label(b).to_string());
            }
        }
    }
    ("?".into(), "?".into())
}

fn join_violation(src: &BoundedLattice, dst: &BoundedLattice, f: &LatticeMap) -> (String, String) {
    if f.apply(src.bottom()) != dst.bottom() {
        return ("empty join".into(), "bottom".into());
    }
    for a in src.elements() {
        for b in src.elements() {
            if f.apply(src.join(a, b)) != dst.join(f.apply(a), f.apply(b)) {
                return (src.label(a).to_string(), src.label(b).to_string());
            }
        }
    }
    ("?".into(), "?".into())
}

fn order_profile(l: &BoundedLattice) -> Vec<(usize, usize, usize, usize)> {
    l.elements()
        .map(|e| {
            (
                l.poset().downset(e).count(),
                l.poset().upset(e).count(),
                l.poset().lower_covers_of(e).count(),
                l.poset().covers_of(e).count(),
            )
        })
        .collect()
}

/// Searches for an order-isomorphism `a -> b`, optionally required to
/// commute with paired unary operations. Returns the first isomorphism in
/// candidate order, so the result is deterministic.
pub fn find_isomorphism(
    a: &BoundedLattice,
    b: &BoundedLattice,
    ops: &[(&LatticeMap, &LatticeMap)],
) -> Option<LatticeMap> {
    if a.n() != b.n() {
        return None;
    }
    let pa = order_profile(a);
    let pb = order_profile(b);
    {
        let mut sa = pa.clone();
        let mut sb = pb.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
    }
    let n = a.n();
    let mut image: Vec<Option<ElementId>> = vec![None; n];
    let mut used = vec![false; n];

    type Profiles<'p> = (
        &'p [(usize, usize, usize, usize)],
        &'p [(usize, usize, usize, usize)],
    );

    fn backtrack(
        a: &BoundedLattice,
        b: &BoundedLattice,
        profiles: Profiles,
        ops: &[(&LatticeMap, &LatticeMap)],
        image: &mut Vec<Option<ElementId>>,
        used: &mut Vec<bool>,
        depth: usize,
    ) -> bool {
        let (pa, pb) = profiles;
        let n = a.n();
        if depth == n {
            let map = LatticeMap {
                table: image.iter().map(|x| x.unwrap()).collect(),
            };
            return ops.iter().all(|(fa, fb)| {
                a.elements()
                    .all(|x| map.apply(fa.apply(x)) == fb.apply(map.apply(x)))
            });
        }
        let x = ElementId::new(depth);
        for cand in 0..n {
            if used[cand] || pa[depth] != pb[cand] {
                continue;
            }
            let y = ElementId::new(cand);
            let consistent = (0..depth).all(|j| {
                let xj = ElementId::new(j);
                let yj = image[j].unwrap();
                a.leq(x, xj) == b.leq(y, yj) && a.leq(xj, x) == b.leq(yj, y)
            });
            if !consistent {
                continue;
            }
            image[depth] = Some(y);
            used[cand] = true;
            if backtrack(a, b, (pa, pb), ops, image, used, depth + 1) {
                return true;
            }
            image[depth] = None;
            used[cand] = false;
        }
        false
    }

    if backtrack(a, b, (&pa, &pb), ops, &mut image, &mut used, 0) {
        Some(LatticeMap {
            table: image.into_iter().map(|x| x.unwrap()).collect(),
        })
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn chain3() -> BoundedLattice {
        catalog::chain(3)
    }

    #[test]
    fn two_chain_from_covers() {
        let p = Poset::from_covers(vec!["0".into(), "1".into()], &[(0, 1)]).unwrap();
        assert!(p.leq(ElementId(0), ElementId(1)));
        assert!(!p.leq(ElementId(1), ElementId(0)));
    }

    #[test]
    fn square_poset_incomparable_atoms() {
        let p = Poset::from_covers(
            vec!["0".into(), "a".into(), "b".into(), "1".into()],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        assert!(p.leq(ElementId(0), ElementId(3)));
        assert!(!p.leq(ElementId(1), ElementId(2)));
        assert!(!p.leq(ElementId(2), ElementId(1)));
    }

    #[test]
    fn cycle_is_rejected() {
        let err = Poset::from_covers(vec!["0".into(), "a".into()], &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::Cycle(..)));
    }

    #[test]
    fn duplicate_label_rejected() {
        let err = Poset::from_covers(vec!["x".into(), "x".into()], &[]).unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel(..)));
    }

    #[test]
    fn square_lattice_tables() {
        let l = catalog::boolean(2);
        let a = l.poset().element_by_label("a").unwrap();
        let b = l.poset().element_by_label("b").unwrap();
        assert_eq!(l.meet(a, b), l.bottom());
        assert_eq!(l.join(a, b), l.top());
    }

    #[test]
    fn antichain_without_bounds_is_not_a_lattice() {
        let p = Poset::from_covers(vec!["a".into(), "b".into()], &[]).unwrap();
        assert!(matches!(
            BoundedLattice::from_poset(p),
            Err(Error::NotALattice { .. })
        ));
    }

    #[test]
    fn m3_atom_pairs_meet_to_bottom_join_to_top() {
        let l = catalog::m3();
        for x in ["a", "b", "c"] {
            for y in ["a", "b", "c"] {
                if x == y {
                    continue;
                }
                let ex = l.poset().element_by_label(x).unwrap();
                let ey = l.poset().element_by_label(y).unwrap();
                assert_eq!(l.meet(ex, ey), l.bottom());
                assert_eq!(l.join(ex, ey), l.top());
            }
        }
    }

    #[test]
    fn join_set_examples() {
        let b2 = catalog::boolean(2);
        let mut ab = Subset::empty(b2.n());
        ab.insert(b2.poset().element_by_label("a").unwrap());
        ab.insert(b2.poset().element_by_label("b").unwrap());
        assert_eq!(b2.join_set(&ab), b2.top());
        assert_eq!(b2.join_set(&Subset::empty(b2.n())), b2.bottom());
        assert_eq!(b2.meet_set(&Subset::empty(b2.n())), b2.top());

        let n5 = catalog::n5();
        let mut s = Subset::empty(n5.n());
        s.insert(n5.poset().element_by_label("a").unwrap());
        s.insert(n5.poset().element_by_label("b").unwrap());
        assert_eq!(n5.join_set(&s), n5.top());
    }

    #[test]
    fn covers_in_chain_and_m3() {
        let c3 = chain3();
        let (zero, m, one) = (ElementId(0), ElementId(1), ElementId(2));
        assert!(c3.poset().is_covered_by(zero, m));
        assert!(!c3.poset().is_covered_by(zero, one));

        let m3 = catalog::m3();
        let covers = m3.poset().covers_of(m3.bottom());
        let labels: Vec<&str> = covers.iter().map(|e| m3.label(e)).collect();
        assert_eq!(labels, vec!["a", "b", "c"]);
    }

    #[test]
    fn check_map_identity_and_constant() {
        let b2 = catalog::boolean(2);
        let id = LatticeMap::identity(b2.n());
        let r = check_map(&b2, &b2, &id).unwrap();
        assert!(r.injective && r.order_embedding && r.preserves_all_meets);
        assert!(r.preserves_all_joins && r.balanced && r.preserves_top);

        let c = LatticeMap::constant(b2.n(), b2.top());
        let r = check_map(&b2, &b2, &c).unwrap();
        assert!(!r.injective);
        // A constant-to-top map preserves every meet (including the empty
        // one) but no nontrivial join.
        assert!(r.preserves_top && r.preserves_all_meets);
        assert!(!r.balanced && !r.preserves_all_joins);
    }

    #[test]
    fn inclusion_of_bounds_into_chain_is_inf_embedding() {
        let c2 = catalog::chain(2);
        let c3 = chain3();
        let incl = LatticeMap {
            table: vec![ElementId(0), ElementId(2)],
        };
        let r = check_map(&c2, &c3, &incl).unwrap();
        assert!(r.is_balanced_inf_embedding());
        assert!(r.preserves_all_joins);
    }

    #[test]
    fn closure_flags() {
        let c3 = chain3();
        let id = LatticeMap::identity(3);
        let r = is_closure(&c3, &id);
        assert!(r.is_closure() && r.normalized);

        let top = LatticeMap::constant(3, c3.top());
        let r = is_closure(&c3, &top);
        assert!(r.is_closure() && !r.normalized);

        let f = LatticeMap {
            table: vec![ElementId(0), ElementId(2), ElementId(2)],
        };
        let r = is_closure(&c3, &f);
        assert!(r.is_closure() && r.normalized);
    }

    #[test]
    fn closure_from_subobject_examples() {
        let c3 = chain3();
        let all = Subset::full(3);
        assert_eq!(
            closure_from_subobject(&c3, &all).unwrap(),
            LatticeMap::identity(3)
        );

        let mut m = Subset::empty(3);
        m.insert(ElementId(0));
        m.insert(ElementId(2));
        let c = closure_from_subobject(&c3, &m).unwrap();
        assert_eq!(c.table, vec![ElementId(0), ElementId(2), ElementId(2)]);

        let b2 = catalog::boolean(2);
        let mut m = Subset::empty(4);
        m.insert(b2.bottom());
        m.insert(b2.poset().element_by_label("a").unwrap());
        m.insert(b2.top());
        let c = closure_from_subobject(&b2, &m).unwrap();
        let b = b2.poset().element_by_label("b").unwrap();
        assert_eq!(c.apply(b), b2.top());
        assert_eq!(c.apply(b2.bottom()), b2.bottom());
    }

    #[test]
    fn closure_range_correspondence() {
        // Range of any closure is meet-closed with top, and the induced
        // subobject closure reproduces the closure pointwise.
        let lattices = [catalog::boolean(2), catalog::m3(), catalog::n5()];
        for l in &lattices {
            for mask in 0u64..(1 << l.n()) {
                let m = Subset::from_mask(l.n(), mask);
                if !m.contains(l.top()) {
                    continue;
                }
                let Ok(c) = closure_from_subobject(l, &m) else {
                    continue;
                };
                let rep = is_closure(l, &c);
                assert!(rep.is_closure());
                // Range may be smaller than m only if m was not meet-closed,
                // which closure_from_subobject already rejects.
                let mut range = Subset::empty(l.n());
                for a in l.elements() {
                    range.insert(c.apply(a));
                }
                assert!(range.is_subset_of(&m) && m.is_subset_of(&range));
                let again = closure_from_subobject(l, &range).unwrap();
                assert_eq!(again, c);
                // Factorization through the range: i_* left adjoint to i.
                let keep: Vec<ElementId> = range.iter().collect();
                let sub = BoundedLattice::from_poset(l.poset().induced(&range)).unwrap();
                let incl = LatticeMap {
                    table: keep.clone(),
                };
                let corestrict = LatticeMap::from_fn(l.n(), |a| {
                    ElementId::new(keep.iter().position(|&k| k == c.apply(a)).unwrap())
                });
                let adj = check_adjunction(l, &sub, &corestrict, &incl);
                assert!(adj.holds);
                let composite = corestrict.compose(&incl);
                assert_eq!(composite, c);
            }
        }
    }

    #[test]
    fn adjunction_examples() {
        let c3 = chain3();
        let id = LatticeMap::identity(3);
        assert!(check_adjunction(&c3, &c3, &id, &id).holds);

        // Co-restriction to {0,1} is left adjoint to the inclusion.
        let c2 = catalog::chain(2);
        let i = LatticeMap {
            table: vec![ElementId(0), ElementId(2)],
        };
        let i_star = LatticeMap {
            table: vec![ElementId(0), ElementId(1), ElementId(1)],
        };
        assert!(check_adjunction(&c3, &c2, &i_star, &i).holds);
    }

    #[test]
    fn left_adjoint_examples() {
        let c3 = chain3();
        let id = LatticeMap::identity(3);
        assert_eq!(left_adjoint(&c3, &c3, &id).unwrap(), id);

        let c2 = catalog::chain(2);
        let g = LatticeMap {
            table: vec![ElementId(0), ElementId(2)],
        };
        let g_star = left_adjoint(&c2, &c3, &g).unwrap();
        assert_eq!(g_star.apply(ElementId(1)), ElementId(1));
        assert!(check_adjunction(&c3, &c2, &g_star, &g).holds);
        let r = check_map(&c3, &c2, &g_star).unwrap();
        assert!(r.preserves_all_joins);
    }

    #[test]
    fn adjoint_constructions_reject_non_preserving_maps() {
        let b2 = catalog::boolean(2);
        // Sending one atom to the top breaks binary-meet preservation.
        let f = LatticeMap {
            table: vec![ElementId(0), ElementId(3), ElementId(2), ElementId(3)],
        };
        assert!(matches!(
            left_adjoint(&b2, &b2, &f),
            Err(Error::NotInfPreserving(..))
        ));
        // The constant-to-top map preserves meets but no joins.
        let c = LatticeMap::constant(4, b2.top());
        assert!(matches!(
            right_adjoint(&b2, &b2, &c),
            Err(Error::NotSupPreserving(..))
        ));
    }

    #[test]
    fn closure_from_subobject_rejects_bad_subsets() {
        let m3 = catalog::m3();
        // Two atoms without their meet.
        let mut m = Subset::empty(5);
        m.insert(ElementId(1));
        m.insert(ElementId(2));
        m.insert(m3.top());
        assert!(matches!(
            closure_from_subobject(&m3, &m),
            Err(Error::NotMeetClosed { .. })
        ));
        // Meet-closed but missing the top.
        let mut m = Subset::empty(5);
        m.insert(m3.bottom());
        m.insert(ElementId(1));
        assert!(matches!(
            closure_from_subobject(&m3, &m),
            Err(Error::MissingTop)
        ));
    }

    #[test]
    fn adjoint_round_trip() {
        // left_adjoint(right_adjoint(f)) = f for sup-preserving f.
        let c3 = chain3();
        let b2 = catalog::boolean(2);
        let f = LatticeMap {
            table: vec![ElementId(0), ElementId(1), ElementId(3)],
        };
        let r = check_map(&c3, &b2, &f).unwrap();
        assert!(r.preserves_all_joins);
        let g = right_adjoint(&c3, &b2, &f).unwrap();
        assert!(check_adjunction(&c3, &b2, &f, &g).holds);
        let f2 = left_adjoint(&b2, &c3, &g).unwrap();
        assert_eq!(f2, f);
    }

    #[test]
    fn isomorphism_search() {
        let b2 = catalog::boolean(2);
        let iso = find_isomorphism(&b2, &b2, &[]).unwrap();
        assert_eq!(iso, LatticeMap::identity(4));
        assert!(find_isomorphism(&chain3(), &b2, &[]).is_none());
        // Same size, different shape.
        let c4 = catalog::chain(4);
        assert!(find_isomorphism(&c4, &b2, &[]).is_none());
    }

    #[test]
    fn isomorphism_with_operation_constraint() {
        let b2 = catalog::boolean(2);
        // Complement on the square.
        let prime = LatticeMap {
            table: vec![ElementId(3), ElementId(2), ElementId(1), ElementId(0)],
        };
        let iso = find_isomorphism(&b2, &b2, &[(&prime, &prime)]).unwrap();
        assert_eq!(iso, LatticeMap::identity(4));
        // Identity op on one side, complement on the other: impossible.
        let id = LatticeMap::identity(4);
        assert!(find_isomorphism(&b2, &b2, &[(&prime, &id)]).is_none());
    }

    #[test]
    fn trivial_lattice_is_admitted() {
        let p = Poset::from_covers(vec!["0".into()], &[]).unwrap();
        let l = BoundedLattice::from_poset(p).unwrap();
        assert_eq!(l.bottom(), l.top());
        assert_eq!(l.join_set(&Subset::empty(1)), l.bottom());
        assert_eq!(l.meet_set(&Subset::empty(1)), l.top());
    }
}
