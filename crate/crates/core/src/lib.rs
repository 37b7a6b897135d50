//! Periodic `A^(1)_n` soliton cellular automaton.
//!
//! Crystal combinatorics and carrier transport ([`tableau`], [`automaton`]),
//! the KKR bijection ([`rigged`]), angle variables and exact period/counting
//! formulas ([`angle`]), tropical tau and theta functions ([`tropical`]) and the
//! string-center embedding ([`bethe`]). All arithmetic is exact. Worked examples
//! live in [`fixtures`] and drive the named suites of [`verify`].

pub mod angle;
pub mod automaton;
pub mod bethe;
pub mod content;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod path;
pub mod rigged;
pub mod tableau;
pub mod tropical;
pub mod verify;

pub use angle::{AngleVariable, Decomposition, Scattering};
pub use automaton::{evolve, evolve_finite, transport, EnergyMode, EnergySpectrum, Evolution, Generator, Level};
pub use content::{Block, BlockId, SolitonContent};
pub use error::{Error, Result};
pub use linalg::{Matrix, Rational};
pub use path::Path;
pub use rigged::RiggedConfiguration;
pub use tableau::{Letter, Tableau};
pub use tropical::ThetaData;
pub use verify::{Check, Report};
