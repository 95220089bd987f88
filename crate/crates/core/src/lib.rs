//! Exact computation of semi-invariants of quiver representations with
//! dimension vector `(2, ..., 2)`.
//!
//! The generators are traces of simple routes (closed walks in the doubled
//! quiver, reverse edges acting by adjugate matrices). The crate also checks
//! the identities behind that description: the 2x2 trace calculus, the
//! route expansion of 2-block determinants, the Domokos-Zubkov coefficient
//! extraction, and the failure of the statement in dimension 3.

pub mod blockdet;
pub mod cli;
pub mod domzub;
pub mod exactpoly;
pub mod groupaction;
pub mod linsolve;
pub mod quiverrep;
pub mod routes;
pub mod sampling;
pub mod symmatrix;
pub mod verify;
