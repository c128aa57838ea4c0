//! Exact-arithmetic Markov chains from descent operators on three graded
//! combinatorial families: permutations, standard Young tableaux, and
//! integer partitions.
//!
//! The crate builds transition matrices over arbitrary-precision rationals,
//! certifies how the three levels project onto each other (strong lumping by
//! shape, weak lumping by RSK insertion fiber), and provides seedable
//! matrix-free samplers for every chain in the catalogue.
//!
//! Module map:
//! - [`combinat`]: partitions, tableaux, permutation words, RSK, hook lengths
//! - [`exactalg`]: rationals, vectors, matrices, characteristic/minimal polynomials
//! - [`hopf`]: products, coproducts, descent operators, and their matrices
//! - [`chains`]: Doob transform, the named chain catalogue, spectral and
//!   multistep certificates
//! - [`lumping`]: fiber maps, the Dynkin criterion, weak-lumping certificates
//! - [`sample`]: seedable samplers, hook walks, empirical statistics

pub mod chains;
pub mod combinat;
pub mod error;
pub mod exactalg;
pub mod hopf;
pub mod lumping;
pub mod sample;

pub use error::{Error, Result};
