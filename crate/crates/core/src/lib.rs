//! GR(1) reactive synthesis and report-based specification analysis.
//!
//! The crate is `no_std` and only needs `alloc`. It contains the whole
//! algorithmic pipeline:
//!
//! * [`frontend`]: the textual specification format, GR(1) shape checks and
//!   bit-blasting of bounded integers into a [`frontend::BooleanSpec`].
//! * [`bdd`]: a reduced ordered BDD manager with model counting and prime
//!   cube enumeration.
//! * [`game`]: the symbolic synthesis game, its fixpoint solution, realizability
//!   checks and Mealy machine extraction.
//! * [`analyses`]: the report analyses (semantics comparison, position
//!   statistics, assumption falsification and classification, glitch
//!   resilience, precommitment, stuck-at faults).
//! * [`traces`]: nominal-case traces and abstract (counter-)strategies.
//! * [`oracle`]: explicit-state reference solver and model checker.
//!
//! File IO, the command line and report rendering live in the `gr1report`
//! crate.
#![no_std]

extern crate alloc;

pub mod analyses;
pub mod bdd;
pub mod error;
pub mod expr;
pub mod frontend;
pub mod game;
pub mod oracle;
pub mod traces;

pub use error::{Exhaustion, Gr1Error, Limits};
pub use expr::{BoolExpr, Pred};
pub use frontend::{compile_to_boolean, parse_spec, validate_gr1_shape, BooleanSpec, SpecDocument};
pub use game::{GameContext, GameOptions, Realizability, Semantics};

pub(crate) type FxHashMap<K, V> = hashbrown::HashMap<K, V, core::hash::BuildHasherDefault<rustc_hash::FxHasher>>;
pub(crate) type FxHashSet<K> = hashbrown::HashSet<K, core::hash::BuildHasherDefault<rustc_hash::FxHasher>>;
