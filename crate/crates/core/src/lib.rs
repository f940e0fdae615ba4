//! Finite racks, their actions, and cellular automata over them.

pub mod action;
pub mod ca;
pub mod compose;
pub mod config;
pub mod enumerate;
pub mod equivariance;
pub mod error;
pub mod group;
pub mod harness;
pub mod io;
pub mod memory;
pub mod perm;
pub mod rack;
pub mod random;
pub mod verdict;

pub use action::{RackAction, Stabilizer};
pub use ca::{CellularAutomaton, GlobalMap};
pub use config::{Budget, ConfigSpace, Configuration};
pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupKind};
pub use perm::Permutation;
pub use rack::{FiniteRack, Subrack};
pub use verdict::{Mode, Status, Verdict, Witness, WitnessKind};
