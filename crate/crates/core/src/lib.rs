//! Riemann surfaces of genus q − 1 whose automorphism group has order λq
//! for a prime q: group actions, generating vectors up to topological
//! equivalence, Jacobian decompositions, fixed loci in Siegel space and
//! algebraic models.
//!
//! The runnable programs under `examples/` walk through each part:
//!
//! - `groups`: building the groups and checking isomorphisms
//! - `classify`: which λ occur for a given q
//! - `orbits`: braid orbits of generating vectors and extendability
//! - `characters`: character tables and rational irreducibles
//! - `decompose`: Chevalley–Weil and the group algebra decomposition
//! - `ns`: dimension of the fixed locus in moduli of abelian varieties
//! - `period_matrix`: the genus 4 Accola–Maclachlan period matrix
//! - `curve_models`: equations of the surfaces

pub mod characters;
pub mod commands;
pub mod curves;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod jacobian;
pub mod siegel;
pub mod signature;
pub mod vectors;

pub use error::{Error, Result};
