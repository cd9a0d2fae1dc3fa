//! Binary networked coordination games on K-regular graphs.
//!
//! Each agent of a regular graph chooses to take part in a shared task (1)
//! or not (0). The game is an exact potential game, its potential is
//! maximized by one of the two consensus profiles, and the agents learn it
//! through log-linear learning, whose stationary law is the Gibbs
//! distribution of the potential.
//!
//! - [`graph`]: regular graph construction, augmentation and spectra
//! - [`game`]: payoffs, utilities and the potential
//! - [`equilibrium`]: brute-force Nash equilibria and potential maximizers
//! - [`dynamics`]: the learning dynamics, exact Gibbs analysis and bounds

pub mod dynamics;
pub mod enumerate;
pub mod equilibrium;
mod error;
pub mod game;
pub mod graph;
mod profile;

pub use error::{Error, Result};
pub use game::{BimatrixOutcome, GameSpec};
pub use graph::Graph;
pub use profile::ActionProfile;
