//! Conditional transition systems over a finite poset of conditions, their
//! lattice-valued counterparts, and algorithms for conditional bisimulation.
//!
//! Two independent routes compute the greatest conditional bisimulation: the
//! lattice-valued fixed point in [`equivalence`] and the final-chain
//! minimisation in [`minimise`]. The [`monad`] and [`frame`] modules hold the
//! order-theoretic constructions both rest on.

pub mod bits;
pub mod equivalence;
pub mod fixtures;
pub mod laws;
pub mod format;
pub mod frame;
pub mod minimise;
pub mod models;
pub mod monad;
pub mod order;
pub mod random;

pub use bits::Bits;
pub use equivalence::{ConditionFamily, LatticeRelation, Partition};
pub use format::{parse_model, serialise_model, FormatError, Kind, Model};
pub use frame::{import_lattice, ExplicitLattice, Frame, FrameError, ImportedLattice};
pub use minimise::{ChainResult, MinimiseError, QuotientCoalgebra};
pub use models::{Cts, Edge, Lats, Lts, ModelError, UpgradeCoalgebra};
pub use order::{Downset, MonotoneMap, OrderError, Poset, Quotient};
