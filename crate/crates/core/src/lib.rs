//! Reflexive game theory: normal-form games and response rules, level-k and
//! cognitive-hierarchy solvers, belief graphs with informational equilibria,
//! the sum-product puzzle and repeated-game dynamics.

pub mod awareness;
pub mod dynamics;
pub mod error;
pub mod game;
pub mod io;
pub mod puzzle;
pub mod registry;
pub mod strategic;

pub use error::{Error, Result};
pub use game::{Game, MixedStrategy, Profile, ResponseModel, Strategy};
