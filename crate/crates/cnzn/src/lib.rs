//! Higher-genus Gromov-Witten potentials of the quotient [C^n/Z_n], computed exactly
//! in the ring generated by the genus-zero mirror data, together with checks of the
//! holomorphic anomaly equation.

pub mod cyclotomic;
pub mod rational;
pub mod series;
pub mod laurent;
pub mod stirling;
pub mod check;
pub mod genus0;
pub mod ring;
pub mod pmatrix;
pub mod psi;
pub mod graphs;
pub mod potentials;
pub mod hae;

mod error;
pub use error::Error;
