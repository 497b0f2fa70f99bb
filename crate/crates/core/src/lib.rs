//! Weighted voting protocols and coalitional manipulation.
//!
//! * [`election`]: ballots, profiles, pairwise tallies.
//! * [`protocols`]: scoring rules, maximin, Copeland, STV, plurality with
//!   runoff, regular and randomized cup, with explicit tie-breaking.
//! * [`manipulation`]: constructive and destructive coalitional weighted
//!   manipulation, polynomial solvers where they are complete and an exact
//!   budgeted search everywhere else.
//! * [`reductions`]: PARTITION encodings and a subset-sum oracle.
//! * [`generate`]: seeded random instances.

pub mod election;
pub mod error;
pub mod generate;
pub mod manipulation;
pub mod protocols;
pub mod reductions;

pub use election::{Candidate, PairwiseMatrix, Profile, WeightedBallot};
pub use error::{ElectionError, ManipulationError, ReductionError};
pub use manipulation::{Goal, ManipulationInstance, ManipulationResult, Method, SearchBudget};
pub use protocols::{Outcome, ProtocolSpec, TieBreak, WinnerSet};
