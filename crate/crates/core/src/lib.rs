//! Exact construction and verification of complex Hadamard and type-II
//! matrices in the Bose-Mesner algebra of a three-class association scheme
//! on 15 points (the line graph of the Petersen graph), together with the
//! scheme family sharing its eigenmatrix.

pub mod exactfield;
pub mod identities;
pub mod invariants;
pub mod nomura;
pub mod pell;
pub mod report;
pub mod scheme;
pub mod typeii;
