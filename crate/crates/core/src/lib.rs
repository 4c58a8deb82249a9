pub mod abstract_convexity;
pub mod combinatorics;
pub mod constructions;
pub mod certificate;
pub mod error;
pub mod fsearch;
pub mod geometry;
pub mod lp;
pub mod oracles;
pub mod ranges;
pub mod rational;
pub mod set_systems;
pub mod subset;

pub use error::{Error, Result};
pub use rational::Rat;
pub use subset::Subset;
