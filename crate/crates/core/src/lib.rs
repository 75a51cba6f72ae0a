//! Numerical laboratory for orbit counting in discrete subgroups of `SL(d, R)`.
//!
//! The crate enumerates elements and primitive conjugacy classes of free
//! (Schottky) groups given by matrices, computes Cartan, Jordan and Iwasawa
//! projections, evaluates the norm cocycle and its dual, and estimates the
//! exponential growth rate of several counting functions. The same rate is
//! also obtained from the pressure of a locally constant potential on the
//! free-group shift, which gives an independent cross-check.
//!
//! Modules:
//! - [`linalg`]: dense matrices, spectra, projections, proximality.
//! - [`groups`]: reduced words, balls, cyclic words, evaluation.
//! - [`reps`]: representations, symmetric powers, ping-pong certificates.
//! - [`cocycles`]: norm cocycle and dual, Gromov products, limit cones.
//! - [`counting`]: count series, exponent fits, pair measures.
//! - [`thermo`]: shifts, potentials, pressure, entropy root.
//! - [`verify`]: the end-to-end check suite used by `orbitcount verify`.

pub mod cocycles;
pub mod counting;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod reps;
pub mod thermo;
pub mod verify;

pub use error::{Error, Result};
pub use groups::{CyclicWord, GeneratorSet, Letter, Word};
pub use linalg::{CartanVector, FlagFrame, NormKind, ProjectiveCovector, ProjectivePoint, SquareMatrix};
pub use reps::{PingPongScheme, RepKind, Representation};
