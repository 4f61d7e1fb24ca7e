//! Named small lattices and ortholattices used by the verification suites.

use crate::order::{BoundedLattice, ElementId, LatticeMap, Poset};
use crate::ortho::OrthoStructure;

/// Chain with `n` elements, `n >= 1`. Labels are `0`, `x1`, ..., `1`.
pub fn chain(n: usize) -> BoundedLattice {
    assert!(n >= 1);
    let labels: Vec<String> = (0..n)
        .map(|i| {
            if i == 0 {
                "0".to_string()
            } else if i == n - 1 {
                "1".to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect();
    let covers: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    BoundedLattice::from_poset(Poset::from_covers(labels, &covers).unwrap()).unwrap()
}

/// Boolean algebra with `k` atoms (2^k elements), labelled by atom sets.
pub fn boolean(k: usize) -> BoundedLattice {
    assert!(k <= 6);
    let atom_names = ["a", "b", "c", "d", "e", "f"];
    let n = 1usize << k;
    let labels: Vec<String> = (0..n)
        .map(|mask| {
            if mask == 0 {
                "0".to_string()
            } else if mask == n - 1 && k > 0 {
                "1".to_string()
            } else {
                (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| atom_names[i])
                    .collect::<Vec<_>>()
                    .join("")
            }
        })
        .collect();
    let mut covers = Vec::new();
    for mask in 0..n {
        for i in 0..k {
            if mask >> i & 1 == 0 {
                covers.push((mask, mask | 1 << i));
            }
        }
    }
    BoundedLattice::from_poset(Poset::from_covers(labels, &covers).unwrap()).unwrap()
}

/// The diamond: three incomparable atoms below the top.
pub fn m3() -> BoundedLattice {
    let labels = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
    let covers = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)];
    BoundedLattice::from_poset(Poset::from_covers(labels, &covers).unwrap()).unwrap()
}

/// The pentagon: 0 < a < c < 1 and 0 < b < 1 with b incomparable to a, c.
pub fn n5() -> BoundedLattice {
    let labels = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
    let covers = [(0, 1), (0, 2), (1, 3), (3, 4), (2, 4)];
    BoundedLattice::from_poset(Poset::from_covers(labels, &covers).unwrap()).unwrap()
}

fn prime_by_labels(l: &BoundedLattice, pairs: &[(&str, &str)]) -> LatticeMap {
    let mut table: Vec<ElementId> = (0..l.n()).map(ElementId::new).collect();
    for (x, y) in pairs {
        let ex = l.poset().element_by_label(x).unwrap();
        let ey = l.poset().element_by_label(y).unwrap();
        table[ex.idx()] = ey;
        table[ey.idx()] = ex;
    }
    LatticeMap { table }
}

/// Boolean algebra with `k` atoms together with set complementation.
pub fn boolean_ortho(k: usize) -> (BoundedLattice, OrthoStructure) {
    let l = boolean(k);
    let n = l.n();
    let table = (0..n).map(|mask| ElementId::new(n - 1 - mask)).collect();
    let o = OrthoStructure::new(LatticeMap { table });
    (l, o)
}

/// Horizontal sum of two squares: atoms a, a', b, b' with primed pairs
/// swapped by the orthocomplementation.
pub fn mo2() -> (BoundedLattice, OrthoStructure) {
    let labels = ["0", "a", "a'", "b", "b'", "1"].map(String::from).to_vec();
    let covers = [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (1, 5),
        (2, 5),
        (3, 5),
        (4, 5),
    ];
    let l = BoundedLattice::from_poset(Poset::from_covers(labels, &covers).unwrap()).unwrap();
    let o = OrthoStructure::new(prime_by_labels(&l, &[("0", "1"), ("a", "a'"), ("b", "b'")]));
    (l, o)
}

/// The benzene ring: 0 < a < b < 1 and 0 < b' < a' < 1, primes swapping
/// the two chains. Orthocomplemented but not orthomodular.
pub fn o6() -> (BoundedLattice, OrthoStructure) {
    let labels = ["0", "a", "b", "b'", "a'", "1"].map(String::from).to_vec();
    let covers = [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)];
    let l = BoundedLattice::from_poset(Poset::from_covers(labels, &covers).unwrap()).unwrap();
    let o = OrthoStructure::new(prime_by_labels(&l, &[("0", "1"), ("a", "a'"), ("b", "b'")]));
    (l, o)
}

/// The plain lattices of the verification catalog: chains C2 to C6, the
/// Boolean algebras B2 and B3, M3, N5, and the lattice reducts of MO2
/// and O6.
pub fn catalog_lattices() -> Vec<(&'static str, BoundedLattice)> {
    vec![
        ("C2", chain(2)),
        ("C3", chain(3)),
        ("C4", chain(4)),
        ("C5", chain(5)),
        ("C6", chain(6)),
        ("B2", boolean(2)),
        ("B3", boolean(3)),
        ("M3", m3()),
        ("N5", n5()),
        ("MO2", mo2().0),
        ("O6", o6().0),
    ]
}

/// The ortholattices of the verification catalog.
pub fn catalog_ortholattices() -> Vec<(&'static str, BoundedLattice, OrthoStructure)> {
    let (b1l, b1o) = boolean_ortho(1);
    let (b2l, b2o) = boolean_ortho(2);
    let (b3l, b3o) = boolean_ortho(3);
    let (mo2l, mo2o) = mo2();
    let (o6l, o6o) = o6();
    vec![
        ("B1", b1l, b1o),
        ("B2", b2l, b2o),
        ("B3", b3l, b3o),
        ("MO2", mo2l, mo2o),
        ("O6", o6l, o6o),
    ]
}
