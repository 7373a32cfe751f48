//! Exact and Monte Carlo analysis of `K + 1` random walkers on `Z` where
//! neighbouring walkers stay at distance one and the first and last walkers
//! keep a fixed gap `h`.
//!
//! The limit variance of the first walker is available three ways: the
//! closed-form binomial sums in [`sums`], the stationary expectation of the
//! quotient shape chain in [`chain`], and the lazy-walk local-limit identity
//! in [`lazy`]. [`sim`] estimates it by parallel simulation, and [`verify`]
//! checks the combinatorial identities behind the formula exhaustively.

pub mod binomial;
pub mod chain;
pub mod error;
pub mod involution;
pub mod lazy;
pub mod limits;
pub mod motzkin;
pub mod path;
pub mod sim;
pub mod sums;
pub mod verify;

pub use error::{Error, Result};
pub use limits::Limits;
pub use path::{PathZ, ShapeBar, StepShape, TwiceArea, WalkParams};
