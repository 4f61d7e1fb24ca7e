//! Finite order-theory toolkit.
//!
//! Builds bounded lattices from cover relations, constructs the lattice of
//! distributive ideals (the distributive hull) together with its Heyting
//! connectives, operational resolution and operational complementation, and
//! analyses Cartan maps from property lattices into state sets. A bounded
//! exhaustive search over small lattices, ortholattices and Cartan maps backs
//! the verification suites and the `search` subcommand of the CLI.
//!
//! All structures are immutable after construction and every operation is a
//! pure function, so everything here is safe to call from parallel code.
//!
//! ```
//! use dihull::{catalog, completion, order, resolution};
//!
//! // The hull of the diamond is the Boolean cube on its atoms.
//! let m3 = catalog::m3();
//! let hull = completion::distributive_ideals(&m3, 16)?;
//! assert_eq!(hull.lattice.n(), 8);
//! let report = completion::verify_hull(&m3, &hull.lattice, &hull.embedding, 16)?;
//! assert!(report.all());
//!
//! // Extracting the closure range recovers the base up to isomorphism.
//! let (_, pair) = resolution::theta(&m3, 16)?;
//! let recovered = resolution::theta_star(&pair, 16)?;
//! assert!(order::find_isomorphism(&recovered, &m3, &[]).is_some());
//! # Ok::<(), dihull::Error>(())
//! ```

pub mod cartan;
pub mod catalog;
pub mod cli;
pub mod completion;
mod error;
pub mod heyting;
pub mod input;
pub mod order;
pub mod ortho;
pub mod resolution;
pub mod search;

pub use error::{Error, Result};

/// Size limits for the subset-enumerating algorithms.
///
/// Hull construction, distributive-subset sweeps and the faithfulness
/// conditions all enumerate `2^n` subsets of the base lattice; the caps turn
/// oversized inputs into a hard error instead of an open-ended computation.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Largest base size for operations that enumerate all subsets.
    pub max_subset_bits: usize,
    /// Largest element count accepted for plain lattice construction.
    pub max_elements: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_subset_bits: 16,
            max_elements: 24,
        }
    }
}

/// Hard ceiling on the size of materialized product lattices (hulls,
/// downset lattices, completions). Exceeding it is an input error.
pub const MAX_MATERIALIZED: usize = 4096;
