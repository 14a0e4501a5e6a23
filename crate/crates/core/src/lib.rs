//! Exact-arithmetic laboratory for the genus-zero structure of MSP theory
//! on the degree 6, 8 and 10 Calabi-Yau weighted-projective hypersurfaces:
//! I-functions and mirror maps, the Yukawa normalization, quantum
//! connections and S-matrices over the state ring, the R-matrix towers at
//! both fixed-point levels, finite-generation membership certificates, and
//! the hypergeometric product identities.
//!
//! Everything is computed over arbitrary-precision rationals with explicit
//! truncation orders; no floating point enters anywhere.
#![allow(clippy::needless_range_loop)] // matrix code indexes several arrays per loop

pub mod acceptance;
pub mod error;
pub mod genpoly;
pub mod gw0;
pub mod ifun;
pub mod laurent;
pub mod linalg;
pub mod membership;
pub mod msp0;
pub mod par;
pub mod pfop;
pub mod poly;
pub mod quotient;
pub mod rat;
pub mod ring;
pub mod rmat0;
pub mod rmat1;
pub mod series;
pub mod targets;
pub mod zz;

pub use error::{Error, Result};
pub use rat::Rat;
