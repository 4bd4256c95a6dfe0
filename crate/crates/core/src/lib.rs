//! Compilation of single-qubit gates into Fibonacci-anyon weaves by
//! iterative pseudogroup hashing.
//!
//! The pipeline approximates a target SU(2) gate with a coarse product of
//! braid approximations of a finite rotation group (the *preprocessor*), then
//! repeatedly multiplies by the best element of a mesh of near-identity
//! rotations built from finer approximations of the same group.
//!
//! - [`su2`]: gate algebra and the operator-norm distance
//! - [`weave`]: canonical weave words, reduction, counting, enumeration
//! - [`groups`]: icosahedral and cubic rotation groups with exact tables
//! - [`approx`]: brute-force and meet-in-the-middle searches, pseudogroups
//! - [`hash`]: meshes and the hashing pipeline
//! - [`bench`]: Haar targets, trial campaigns, statistics, baselines

pub mod su2;
pub mod weave;
pub mod groups;
pub mod approx;
pub mod bench;
pub mod hash;
