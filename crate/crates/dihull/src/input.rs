//! The line-oriented input format and its renderer.
//!
//! Line types, order-free except that `elements` must come first:
//!
//! ```text
//! elements <label>+
//! cover <lo> <hi>
//! ortho <x> <y>        # x' = y, symmetrized; must be a total involution
//! states <label>+
//! mu <element> : <state>*
//! weak                 # marks the mu table as a weak Cartan map
//! # comment
//! ```
//!
//! Rendered output parses back through this module unchanged.

use crate::cartan::CartanMap;
use crate::order::{BoundedLattice, ElementId, LatticeMap, Poset, Subset};
use crate::ortho::OrthoStructure;
use crate::{Error, Result};

/// Parsed document, prior to semantic construction.
#[derive(Clone, Debug, Default)]
pub struct InputDocument {
    pub name: Option<String>,
    pub labels: Vec<String>,
    pub covers: Vec<(usize, usize)>,
    pub ortho_pairs: Vec<(usize, usize)>,
    pub states: Option<Vec<String>>,
    pub mu: Option<Vec<Option<Vec<usize>>>>,
    pub weak: bool,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses a document; every referential problem is reported with its line
/// number.
pub fn parse(text: &str, name: Option<&str>) -> Result<InputDocument> {
    let mut doc = InputDocument {
        name: name.map(|s| s.to_string()),
        ..Default::default()
    };
    let mut saw_elements = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "elements" => {
                if saw_elements {
                    return Err(err(lineno, "duplicate `elements` line"));
                }
                if tokens.len() < 2 {
                    return Err(err(lineno, "`elements` needs at least one label"));
                }
                for t in &tokens[1..] {
                    if doc.labels.iter().any(|l| l == t) {
                        return Err(err(lineno, format!("duplicate label `{t}`")));
                    }
                    doc.labels.push(t.to_string());
                }
                saw_elements = true;
            }
            "cover" => {
                if !saw_elements {
                    return Err(err(lineno, "`elements` must come first"));
                }
                if tokens.len() != 3 {
                    return Err(err(lineno, "`cover` needs exactly two labels"));
                }
                let lo = lookup(&doc.labels, tokens[1], lineno)?;
                let hi = lookup(&doc.labels, tokens[2], lineno)?;
                doc.covers.push((lo, hi));
            }
            "ortho" => {
                if !saw_elements {
                    return Err(err(lineno, "`elements` must come first"));
                }
                if tokens.len() != 3 {
                    return Err(err(lineno, "`ortho` needs exactly two labels"));
                }
                let x = lookup(&doc.labels, tokens[1], lineno)?;
                let y = lookup(&doc.labels, tokens[2], lineno)?;
                doc.ortho_pairs.push((x, y));
            }
            "states" => {
                if doc.states.is_some() {
                    return Err(err(lineno, "duplicate `states` line"));
                }
                let mut states = Vec::new();
                for t in &tokens[1..] {
                    if states.iter().any(|l: &String| l == t) {
                        return Err(err(lineno, format!("duplicate state label `{t}`")));
                    }
                    states.push(t.to_string());
                }
                doc.states = Some(states);
            }
            "mu" => {
                if !saw_elements {
                    return Err(err(lineno, "`elements` must come first"));
                }
                if tokens.len() < 3 || tokens[2] != ":" {
                    return Err(err(lineno, "`mu` syntax is `mu <element> : <state>*`"));
                }
                let e = lookup(&doc.labels, tokens[1], lineno)?;
                let mu = doc.mu.get_or_insert_with(|| vec![None; 0]);
                if mu.len() < doc.labels.len() {
                    mu.resize(doc.labels.len(), None);
                }
                if mu[e].is_some() {
                    return Err(err(
                        lineno,
                        format!("duplicate `mu` entry for `{}`", tokens[1]),
                    ));
                }
                let states = doc
                    .states
                    .as_ref()
                    .ok_or_else(|| err(lineno, "`states` must come before `mu`"))?;
                let mut row = Vec::new();
                for t in &tokens[3..] {
                    let p = states
                        .iter()
                        .position(|s| s == t)
                        .ok_or_else(|| err(lineno, format!("unknown state `{t}`")))?;
                    row.push(p);
                }
                mu[e] = Some(row);
            }
            "weak" => {
                doc.weak = true;
            }
            other => return Err(err(lineno, format!("unknown directive `{other}`"))),
        }
    }
    if !saw_elements {
        return Err(err(0, "missing `elements` line"));
    }
    if let Some(mu) = &doc.mu {
        for (i, row) in mu.iter().enumerate() {
            if row.is_none() {
                return Err(err(
                    0,
                    format!("missing `mu` entry for `{}`", doc.labels[i]),
                ));
            }
        }
        if mu.len() < doc.labels.len() {
            return Err(err(0, "mu table does not cover every element"));
        }
    }
    if !doc.ortho_pairs.is_empty() {
        // Symmetrize, then require a total involution.
        let n = doc.labels.len();
        let mut prime: Vec<Option<usize>> = vec![None; n];
        for &(x, y) in &doc.ortho_pairs {
            for (a, b) in [(x, y), (y, x)] {
                match prime[a] {
                    None => prime[a] = Some(b),
                    Some(existing) if existing == b => {}
                    Some(existing) => {
                        return Err(err(
                            0,
                            format!(
                                "ortho table is not an involution: `{}` maps to both `{}` and `{}`",
                                doc.labels[a], doc.labels[existing], doc.labels[b]
                            ),
                        ))
                    }
                }
            }
        }
        if let Some(missing) = prime.iter().position(|p| p.is_none()) {
            return Err(err(
                0,
                format!(
                    "ortho table is not total: `{}` has no pair",
                    doc.labels[missing]
                ),
            ));
        }
    }
    Ok(doc)
}

fn lookup(labels: &[String], token: &str, lineno: usize) -> Result<usize> {
    labels
        .iter()
        .position(|l| l == token)
        .ok_or_else(|| err(lineno, format!("unknown label `{token}`")))
}

impl InputDocument {
    pub fn poset(&self, max_elements: usize) -> Result<Poset> {
        if self.labels.len() > max_elements {
            return Err(Error::CapExceeded {
                what: "declared structure",
                needed: self.labels.len(),
                cap: max_elements,
            });
        }
        Poset::from_covers(self.labels.clone(), &self.covers)
    }

    pub fn lattice(&self, max_elements: usize) -> Result<BoundedLattice> {
        BoundedLattice::from_poset(self.poset(max_elements)?)
    }

    /// The complementation candidate, if ortho pairs were declared.
    pub fn ortho(&self) -> Option<OrthoStructure> {
        if self.ortho_pairs.is_empty() {
            return None;
        }
        let n = self.labels.len();
        let mut table: Vec<ElementId> = (0..n).map(ElementId::new).collect();
        for &(x, y) in &self.ortho_pairs {
            table[x] = ElementId::new(y);
            table[y] = ElementId::new(x);
        }
        Some(OrthoStructure::new(LatticeMap { table }))
    }

    /// The declared Cartan map, validated against the lattice under the
    /// declared contract (weak or full).
    pub fn cartan(&self, l: &BoundedLattice) -> Result<Option<CartanMap>> {
        let (Some(states), Some(mu)) = (&self.states, &self.mu) else {
            return Ok(None);
        };
        let rows: Vec<Subset> = mu
            .iter()
            .map(|row| {
                let mut s = Subset::empty(states.len());
                for &p in row.as_ref().unwrap() {
                    s.insert(ElementId::new(p));
                }
                s
            })
            .collect();
        let map = if self.weak {
            CartanMap::new_weak(l, states.clone(), rows)?
        } else {
            CartanMap::new(l, states.clone(), rows)?
        };
        Ok(Some(map))
    }
}

/// Renders a structure in the input format. The output re-parses to an
/// equivalent document.
pub fn render(
    l: &BoundedLattice,
    ortho: Option<&OrthoStructure>,
    cartan: Option<&CartanMap>,
) -> String {
    let mut out = String::new();
    out.push_str("elements");
    for a in l.elements() {
        out.push(' ');
        out.push_str(l.label(a));
    }
    out.push('\n');
    for a in l.elements() {
        for b in l.elements() {
            if l.poset().is_covered_by(a, b) {
                out.push_str(&format!("cover {} {}\n", l.label(a), l.label(b)));
            }
        }
    }
    if let Some(o) = ortho {
        let mut done = vec![false; l.n()];
        for a in l.elements() {
            if done[a.idx()] {
                continue;
            }
            let b = o.prime(a);
            out.push_str(&format!("ortho {} {}\n", l.label(a), l.label(b)));
            done[a.idx()] = true;
            done[b.idx()] = true;
        }
    }
    if let Some(m) = cartan {
        out.push_str("states");
        for s in m.state_labels() {
            out.push(' ');
            out.push_str(s);
        }
        out.push('\n');
        for a in l.elements() {
            out.push_str(&format!("mu {} :", l.label(a)));
            for p in m.mu(a).iter() {
                out.push(' ');
                out.push_str(&m.state_labels()[p.idx()]);
            }
            out.push('\n');
        }
        if m.is_weak() {
            out.push_str("weak\n");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn minimal_two_chain() {
        let doc = parse("elements 0 1\ncover 0 1\n", Some("c2")).unwrap();
        assert_eq!(doc.labels.len(), 2);
        assert_eq!(doc.covers.len(), 1);
        let l = doc.lattice(24).unwrap();
        assert_eq!(l.n(), 2);
    }

    #[test]
    fn square_with_states_round_trips() {
        let text = "\
# the square with a superposition state
elements 0 a a' 1
cover 0 a
cover 0 a'
cover a 1
cover a' 1
states p1 p2 q
mu 0 :
mu a : p1
mu a' : p2
mu 1 : p1 p2 q
";
        let doc = parse(text, Some("square3")).unwrap();
        let l = doc.lattice(24).unwrap();
        let m = doc.cartan(&l).unwrap().unwrap();
        assert_eq!(m.n_states(), 3);

        let rendered = render(&l, None, Some(&m));
        let doc2 = parse(&rendered, None).unwrap();
        let l2 = doc2.lattice(24).unwrap();
        let m2 = doc2.cartan(&l2).unwrap().unwrap();
        assert_eq!(m2.n_states(), 3);
        assert_eq!(render(&l2, None, Some(&m2)), rendered);
    }

    #[test]
    fn duplicate_mu_entry_is_rejected() {
        let text = "elements 0 1\ncover 0 1\nstates p\nmu 0 :\nmu 0 : p\nmu 1 : p\n";
        let e = parse(text, None).unwrap_err();
        assert!(e.to_string().contains("duplicate `mu` entry"));
    }

    #[test]
    fn missing_mu_entry_is_rejected() {
        let text = "elements 0 1\ncover 0 1\nstates p\nmu 1 : p\n";
        let e = parse(text, None).unwrap_err();
        assert!(e.to_string().contains("missing `mu` entry"));
    }

    #[test]
    fn non_involutive_ortho_rejected() {
        let text = "elements 0 a b 1\ncover 0 a\ncover 0 b\ncover a 1\ncover b 1\northo 0 1\northo a b\northo a 1\n";
        let e = parse(text, None).unwrap_err();
        assert!(e.to_string().contains("not an involution"));
    }

    #[test]
    fn partial_ortho_rejected() {
        let text = "elements 0 a b 1\ncover 0 a\ncover 0 b\ncover a 1\ncover b 1\northo 0 1\n";
        let e = parse(text, None).unwrap_err();
        assert!(e.to_string().contains("not total"));
    }

    #[test]
    fn unknown_label_reports_line() {
        let text = "elements 0 1\ncover 0 2\n";
        match parse(text, None).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rendered_ortholattice_round_trips() {
        let (l, o) = catalog::mo2();
        let text = render(&l, Some(&o), None);
        let doc = parse(&text, None).unwrap();
        let l2 = doc.lattice(24).unwrap();
        let o2 = doc.ortho().unwrap();
        assert_eq!(render(&l2, Some(&o2), None), text);
    }

    #[test]
    fn element_cap_is_enforced() {
        let doc = parse("elements a b c\n", None).unwrap();
        assert!(matches!(doc.poset(2), Err(Error::CapExceeded { .. })));
    }
}
