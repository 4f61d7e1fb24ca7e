//! Command-line front end: parses the lattice file format, dispatches the
//! verification suites and renders deterministic reports.
//!
//! Exit codes: 0 when every checked claim holds, 1 when a checked claim
//! fails (a witness is printed), 2 for input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cartan::{
    conjunctive_completion, conjunctive_join_transfer, disjunctive_hull, eps_mu,
    faithfulness_report, join_density_check, phi_mu, state_kernel, superposition_implication_check,
    superposition_properties, superposition_states, validate_cartan, validate_weak_cartan,
    CartanMap,
};
use crate::completion::{distributive_ideals, macneille, verify_hull};
use crate::heyting::heyting_status;
use crate::input::{self, InputDocument};
use crate::order::{check_adjunction, BoundedLattice, Subset};
use crate::ortho::{classify_ortho, derived_law_report, is_orthomodular, ortho_round_trip, sasaki};
use crate::resolution::operational_resolution;
use crate::search::{predicates, run_search, SearchMode, SearchSpec, StructureKind};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tabular,
}

#[derive(Parser, Debug)]
#[command(
    name = "dihull",
    version,
    about = "Finite order-theory toolkit: distributive hulls, Heyting connectives, \
             operational resolution and complementation, Cartan maps, bounded search.",
    after_help = "Subset-enumerating operations (hull, dhull, cartan sweeps) do 2^n work \
                  in the number of elements; they fail closed at --max-subset-bits."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Cap on structure size for subset-enumerating operations.
    #[arg(long, global = true, default_value_t = 16)]
    pub max_subset_bits: usize,

    /// Cap on declared structure size for plain lattice operations.
    #[arg(long, global = true, default_value_t = 24)]
    pub max_elements: usize,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    pub parallel: usize,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Order-theoretic flags of a lattice file.
    Check { file: PathBuf },
    /// Distributive hull with embedding, resolution and verification.
    Hull { file: PathBuf },
    /// MacNeille completion of the declared poset.
    Macneille { file: PathBuf },
    /// Cartan-map analysis: superpositions, kernels, faithfulness.
    Cartan { file: PathBuf },
    /// Complementation axioms, derived laws, the hull round trip, Sasaki maps.
    Ortho { file: PathBuf },
    /// Disjunctive hull of a Cartan map with the canonical embeddings.
    Dhull { file: PathBuf },
    /// Exhaustive or sampled search over small structures.
    Search {
        /// Structure family to enumerate.
        #[arg(long)]
        kind: String,
        /// Registered claim to evaluate (see --list).
        #[arg(long, default_value = "")]
        predicate: String,
        #[arg(long, default_value_t = 5)]
        max_elements: usize,
        #[arg(long, default_value_t = 3)]
        max_states: usize,
        /// witness | counterexample | count
        #[arg(long, default_value = "count")]
        mode: String,
        /// Seed for sampled coverage.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scan the full enumeration up to the bounds (the default).
        #[arg(long, conflicts_with = "sampled")]
        exhaustive: bool,
        /// Sample randomly instead; output is labelled, never claimed
        /// exhaustive.
        #[arg(long)]
        sampled: bool,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// List the predicate registry and exit.
        #[arg(long)]
        list: bool,
    },
}

struct Report {
    lines: Vec<String>,
    tabular: bool,
}

impl Report {
    fn new(format: Format) -> Self {
        Report {
            lines: Vec::new(),
            tabular: format == Format::Tabular,
        }
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        if self.tabular {
            self.lines.push(format!("{key}\t{value}"));
        } else {
            self.lines.push(format!("{key} = {value}"));
        }
    }

    fn finish(self) -> String {
        self.lines.join("\n") + "\n"
    }
}

fn load(path: &Path) -> Result<InputDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().to_string());
    input::parse(&text, stem.as_deref())
}

fn doc_name(doc: &InputDocument) -> String {
    doc.name.clone().unwrap_or_else(|| "input".to_string())
}

/// Runs a parsed command and returns the report plus the exit code.
pub fn run(cli: &Cli) -> Result<(String, i32)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.parallel.max(1))
        .build()
        .map_err(|e| Error::Parse {
            line: 0,
            msg: format!("thread pool: {e}"),
        })?;
    pool.install(|| dispatch(cli))
}

/// Programmatic entry point: runs a named report command on a parsed
/// document. Used by the CLI dispatcher and by foreign-language bindings.
pub fn run_on_document(
    doc: &InputDocument,
    command: &str,
    bits: usize,
    max_elems: usize,
) -> Result<(String, i32)> {
    match command {
        "check" => cmd_check(doc, bits, max_elems, Format::Text),
        "hull" => cmd_hull(doc, bits, max_elems),
        "macneille" => cmd_macneille(doc, max_elems),
        "cartan" => cmd_cartan(doc, bits, max_elems, Format::Text),
        "ortho" => cmd_ortho(doc, bits, max_elems, Format::Text),
        "dhull" => cmd_dhull(doc, bits, max_elems),
        other => Err(Error::Parse {
            line: 0,
            msg: format!("unknown command `{other}`"),
        }),
    }
}

fn dispatch(cli: &Cli) -> Result<(String, i32)> {
    let bits = cli.max_subset_bits;
    let max_elems = cli.max_elements;
    match &cli.command {
        Command::Check { file } => cmd_check(&load(file)?, bits, max_elems, cli.format),
        Command::Hull { file } => cmd_hull(&load(file)?, bits, max_elems),
        Command::Macneille { file } => cmd_macneille(&load(file)?, max_elems),
        Command::Cartan { file } => cmd_cartan(&load(file)?, bits, max_elems, cli.format),
        Command::Ortho { file } => cmd_ortho(&load(file)?, bits, max_elems, cli.format),
        Command::Dhull { file } => cmd_dhull(&load(file)?, bits, max_elems),
        Command::Search {
            kind,
            predicate,
            max_elements,
            max_states,
            mode,
            seed,
            exhaustive: _,
            sampled,
            samples,
            list,
        } => {
            if *list {
                let mut out = String::new();
                for p in predicates() {
                    let _ = writeln!(out, "{} ({}): {}", p.id, p.kind.name(), p.claim);
                }
                return Ok((out, 0));
            }
            let spec = SearchSpec {
                kind: StructureKind::parse(kind)?,
                predicate: predicate.clone(),
                max_elements: *max_elements,
                max_states: *max_states,
                mode: SearchMode::parse(mode)?,
                seed: *seed,
                sampled: *sampled,
                samples: *samples,
                max_bits: bits,
            };
            let outcome = run_search(&spec)?;
            let code = match spec.mode {
                SearchMode::FindWitness => {
                    if outcome.found {
                        0
                    } else {
                        1
                    }
                }
                SearchMode::FindCounterexample => {
                    if outcome.found {
                        1
                    } else {
                        0
                    }
                }
                SearchMode::Count => 0,
            };
            Ok((outcome.report, code))
        }
    }
}

fn witness_text(l: &BoundedLattice, w: &(Subset, crate::order::ElementId)) -> String {
    format!("({}, {})", l.poset().render_subset(&w.0), l.label(w.1))
}

fn cmd_check(
    doc: &InputDocument,
    _bits: usize,
    max_elems: usize,
    format: Format,
) -> Result<(String, i32)> {
    let mut r = Report::new(format);
    r.kv("name", doc_name(doc));
    let poset = doc.poset(max_elems)?;
    r.kv("elements", poset.n());
    match BoundedLattice::from_poset(poset) {
        Err(e @ Error::NotALattice { .. }) => {
            r.kv("lattice", false);
            r.kv("lattice_witness", e);
            Ok((r.finish(), 1))
        }
        Err(e) => Err(e),
        Ok(l) => {
            r.kv("lattice", true);
            let status = heyting_status(&l);
            r.kv("distributive", status.is_complete_heyting);
            if let Some(w) = &status.witness {
                r.kv("distributive_witness", witness_text(&l, w));
            }
            r.kv("heyting", status.is_complete_heyting);
            if let Some(w) = &status.witness {
                r.kv("heyting_witness", witness_text(&l, w));
            }
            Ok((r.finish(), 0))
        }
    }
}

fn cmd_hull(doc: &InputDocument, bits: usize, max_elems: usize) -> Result<(String, i32)> {
    let l = doc.lattice(max_elems)?;
    let hull = distributive_ideals(&l, bits)?;
    let resolution = operational_resolution(&hull);
    let report = verify_hull(&l, &hull.lattice, &hull.embedding, bits)?;

    let mut out = String::new();
    let _ = writeln!(out, "# hull of {}", doc_name(doc));
    let _ = writeln!(out, "# base_elements = {}", l.n());
    let _ = writeln!(out, "# ideals = {}", hull.lattice.n());
    out.push_str(&input::render(&hull.lattice, None, None));
    for a in l.elements() {
        let _ = writeln!(
            out,
            "# embed {} -> {}",
            l.label(a),
            hull.lattice.label(hull.embedding.apply(a))
        );
    }
    for h in hull.lattice.elements() {
        let _ = writeln!(
            out,
            "# resolution {} -> {}",
            hull.lattice.label(h),
            hull.lattice.label(resolution.apply(h))
        );
    }
    let _ = writeln!(
        out,
        "# verify balanced_inf_embedding = {}",
        report.balanced_inf_embedding
    );
    let _ = writeln!(out, "# verify join_dense = {}", report.join_dense);
    let _ = writeln!(
        out,
        "# verify distributive_joins_preserved = {}",
        report.preserves_distributive_joins
    );
    let _ = writeln!(out, "# verify hull_heyting = {}", report.hull_heyting);
    Ok((out, if report.all() { 0 } else { 1 }))
}

fn cmd_macneille(doc: &InputDocument, max_elems: usize) -> Result<(String, i32)> {
    let poset = doc.poset(max_elems)?;
    let (completion, embedding) = macneille(&poset)?;

    let mut out = String::new();
    let _ = writeln!(out, "# macneille of {}", doc_name(doc));
    let _ = writeln!(out, "# base_elements = {}", poset.n());
    let _ = writeln!(out, "# cuts = {}", completion.n());
    out.push_str(&input::render(&completion, None, None));
    for a in poset.elements() {
        let _ = writeln!(
            out,
            "# embed {} -> {}",
            poset.label(a),
            completion.label(embedding.apply(a))
        );
    }

    let mut order_embedding = true;
    let mut meets_ok = true;
    let mut joins_ok = true;
    for a in poset.elements() {
        for b in poset.elements() {
            if poset.leq(a, b) != completion.leq(embedding.apply(a), embedding.apply(b)) {
                order_embedding = false;
            }
            if let Some(g) = poset.glb(a, b) {
                if completion.meet(embedding.apply(a), embedding.apply(b)) != embedding.apply(g) {
                    meets_ok = false;
                }
            }
            if let Some(j) = poset.lub(a, b) {
                if completion.join(embedding.apply(a), embedding.apply(b)) != embedding.apply(j) {
                    joins_ok = false;
                }
            }
        }
    }
    let _ = writeln!(out, "# verify order_embedding = {order_embedding}");
    let _ = writeln!(out, "# verify preserves_existing_meets = {meets_ok}");
    let _ = writeln!(out, "# verify preserves_existing_joins = {joins_ok}");
    let ok = order_embedding && meets_ok && joins_ok;
    Ok((out, if ok { 0 } else { 1 }))
}

fn antichains_with_superpositions(
    l: &BoundedLattice,
    m: &CartanMap,
) -> Vec<(Subset, Subset, Subset)> {
    let mut out = Vec::new();
    if l.n() > 63 {
        return out;
    }
    let mut masks: Vec<u64> = (0..(1u64 << l.n()))
        .filter(|&mask| mask.count_ones() >= 2)
        .collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    for mask in masks {
        let a = Subset::from_mask(l.n(), mask);
        let antichain = a.iter().all(|x| a.iter().all(|y| x == y || !l.leq(x, y)));
        if !antichain {
            continue;
        }
        let s_plus = superposition_states(l, m, &a);
        if s_plus.is_empty() {
            continue;
        }
        let l_plus = superposition_properties(l, m, &a);
        out.push((a, s_plus, l_plus));
    }
    out
}

fn cmd_cartan(
    doc: &InputDocument,
    bits: usize,
    max_elems: usize,
    format: Format,
) -> Result<(String, i32)> {
    let l = doc.lattice(max_elems)?;
    let Some(m) = doc.cartan(&l)? else {
        return Err(Error::Parse {
            line: 0,
            msg: "`cartan` needs `states` and a `mu` table".to_string(),
        });
    };
    let mut r = Report::new(format);
    r.kv("name", doc_name(doc));
    r.kv("elements", l.n());
    r.kv("states", m.n_states());
    r.kv("weak", m.is_weak());
    if m.is_weak() {
        r.kv("valid_weak_cartan", validate_weak_cartan(&l, &m).valid());
    } else {
        r.kv("valid_cartan", validate_cartan(&l, &m, bits)?.valid());
    }

    // Faithfulness is evaluated on the conjunctive completion for weak
    // maps, on the map itself otherwise.
    let faith = if m.is_weak() {
        let comp = conjunctive_join_transfer(&l, &m, bits)?;
        r.kv("completion_elements", comp.lattice.n());
        r.kv("faithfulness_evaluated_on", "conjunctive_completion");
        faithfulness_report(&comp.lattice, &comp.mu_bar, bits)?
    } else {
        faithfulness_report(&l, &m, bits)?
    };
    r.kv("faithful", faith.overall());
    r.kv("conditions_agree", faith.agree());
    let names = ["i", "ii", "iii", "iv", "v", "vi"];
    for (k, name) in names.iter().enumerate() {
        r.kv(&format!("condition_{name}"), faith.conditions[k]);
        if let Some(w) = &faith.witnesses[k] {
            r.kv(&format!("witness_{name}"), w);
        }
    }

    join_density_check(&l, &m)?;
    r.kv("join_density", true);
    let implications = superposition_implication_check(&l, &m, bits)?;
    r.kv("superposition_forward", true);
    r.kv("superposition_converse", implications.converse_holds);
    if let Some(w) = &implications.converse_witness {
        r.kv("superposition_converse_witness", l.poset().render_subset(w));
    }

    for p in 0..m.n_states() {
        r.kv(
            &format!("kernel {}", m.state_labels()[p]),
            l.label(state_kernel(&l, &m, p)),
        );
    }
    for (a, s_plus, l_plus) in antichains_with_superpositions(&l, &m) {
        let key = l.poset().render_subset(&a);
        r.kv(
            &format!("superposition_states{key}"),
            m.render_states(&s_plus),
        );
        r.kv(
            &format!("superposition_properties{key}"),
            l.poset().render_subset(&l_plus),
        );
    }
    Ok((r.finish(), 0))
}

fn cmd_ortho(
    doc: &InputDocument,
    bits: usize,
    max_elems: usize,
    format: Format,
) -> Result<(String, i32)> {
    let l = doc.lattice(max_elems)?;
    let Some(o) = doc.ortho() else {
        return Err(Error::Parse {
            line: 0,
            msg: "`ortho` needs an `ortho` pair table".to_string(),
        });
    };
    let mut r = Report::new(format);
    r.kv("name", doc_name(doc));
    r.kv("elements", l.n());
    let c = classify_ortho(&l, &o);
    r.kv("oc1", c.oc1);
    r.kv("oc2", c.oc2);
    r.kv("oc3l", c.oc3l);
    r.kv("oc3r", c.oc3r);
    r.kv("ortholattice", c.is_ortholattice());
    r.kv("pseudo_ortholattice", c.is_pseudo_ortholattice());
    r.kv("involutive", c.involutive);

    let mut failed = false;
    for law in derived_law_report(&l, &o) {
        let status = match (law.hypotheses_met, law.conclusion_holds) {
            (false, _) => "vacuous".to_string(),
            (true, Some(true)) => "holds".to_string(),
            (true, other) => {
                failed = true;
                format!(
                    "FAILS ({})",
                    law.witness.clone().unwrap_or_else(|| format!("{other:?}"))
                )
            }
        };
        r.kv(&format!("law {}", law.name), status);
    }

    let (om, witness) = is_orthomodular(&l, &o);
    r.kv("orthomodular", om);
    if let Some((a, b)) = witness {
        r.kv(
            "orthomodular_witness",
            format!("({}, {})", l.label(a), l.label(b)),
        );
    }

    let mut sasaki_all = true;
    let mut sasaki_witness = None;
    for a in l.elements() {
        let (phi, phi_star) = sasaki(&l, &o, a);
        let adj = check_adjunction(&l, &l, &phi, &phi_star);
        if !adj.holds {
            sasaki_all = false;
            if sasaki_witness.is_none() {
                let (x, y) = adj.witness.unwrap();
                sasaki_witness = Some(format!(
                    "phi_{} at ({}, {})",
                    l.label(a),
                    l.label(x),
                    l.label(y)
                ));
            }
        }
    }
    r.kv("sasaki_adjoint_everywhere", sasaki_all);
    if let Some(w) = sasaki_witness {
        r.kv("sasaki_witness", w);
    }
    let iff = sasaki_all == om;
    r.kv("sasaki_iff_orthomodular", iff);
    if !iff {
        failed = true;
    }

    if c.is_ortholattice() {
        let trip = ortho_round_trip(&l, &o, bits)?;
        r.kv("roundtrip perp_pseudo_ortho", trip.perp_pseudo_ortho);
        r.kv("roundtrip perp_range_djd", trip.perp_range_djd);
        r.kv("roundtrip square_is_resolution", trip.square_is_resolution);
        r.kv("roundtrip forward_isomorphism", trip.forward_isomorphism);
        r.kv("roundtrip reverse_isomorphism", trip.reverse_isomorphism);
        if !trip.all() {
            failed = true;
        }
    } else {
        r.kv("roundtrip", "skipped (not an ortholattice)");
    }
    Ok((r.finish(), if failed { 1 } else { 0 }))
}

fn cmd_dhull(doc: &InputDocument, bits: usize, max_elems: usize) -> Result<(String, i32)> {
    let l = doc.lattice(max_elems)?;
    let Some(m) = doc.cartan(&l)? else {
        return Err(Error::Parse {
            line: 0,
            msg: "`dhull` needs `states` and a `mu` table".to_string(),
        });
    };
    let dh = disjunctive_hull(&l, &m, bits)?;
    let hull = distributive_ideals(&l, bits)?;
    let phi = phi_mu(&hull, &dh, &m)?;
    let (_, _, eps) = eps_mu(&l, &m, &dh, bits)?;
    let _ = (&phi, &eps);
    let comp = conjunctive_completion(&l, &m)?;

    let mut out = String::new();
    let _ = writeln!(out, "# disjunctive hull of {}", doc_name(doc));
    let _ = writeln!(out, "# base_elements = {}", l.n());
    let _ = writeln!(out, "# states = {}", m.n_states());
    let _ = writeln!(out, "# sets = {}", dh.lattice.n());
    out.push_str(&input::render(&dh.lattice, None, None));
    for a in l.elements() {
        let _ = writeln!(
            out,
            "# embed {} -> {}",
            l.label(a),
            dh.lattice.label(dh.embedding.apply(a))
        );
    }
    let _ = writeln!(out, "# verify dmu_heyting = true");
    let _ = writeln!(out, "# verify phi_mu_balanced_inf_embedding = true");
    let _ = writeln!(out, "# verify eps_mu_balanced_inf_embedding = true");
    let _ = writeln!(
        out,
        "# conjunctive_completion_elements = {}",
        comp.lattice.n()
    );
    Ok((out, 0))
}
