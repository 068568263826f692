//! Constructive combinatorics of slim linear ternary hypergraphs on abelian
//! groups, over exact arithmetic.
//!
//! The crate provides:
//!
//! - exact scalars in quadratic number fields, group points, matrices, and
//!   canonical echelon bases ([`field`], [`linear`]);
//! - slim linear hypergraphs, hyperedge enumeration, and closure of finite
//!   seeds under the generating maps ([`hypergraph`]);
//! - remainder graphs on sample windows, their quotients by coset
//!   equivalence, bipartiteness certificates, and biclique constructions
//!   ([`remainder`]);
//! - tiered colors, coherent sequences of colorings and their amalgamation,
//!   and greedy quotient colorings ([`coloring`]);
//! - a balanced coloring poset with a constructive merge of compatible
//!   conditions ([`poset`]);
//! - the finite approximation coloring poset with triple and pair
//!   classifiers and exhaustive Ramsey-centered checks ([`ramsey`]);
//! - combinatorial lines, line-free covers, exact Hales-Jewett thresholds
//!   at tiny parameters, and a geometric-decay embedding of the line
//!   hypergraph into a linear hypergraph ([`hj`]);
//! - monochromatic rectangle and corner finders on finite grids ([`grid`]).
//!
//! Everything operates on finite sample windows with exact rational
//! arithmetic; searches are deterministic, and the `parallel` feature
//! (default) fans the exhaustive ones out over rayon without changing any
//! result.

pub mod cert;
pub mod coloring;
pub mod error;
mod exec;
pub mod field;
pub mod format;
pub mod grid;
pub mod hj;
pub mod hypergraph;
pub mod instances;
pub mod linear;
pub mod poset;
pub mod ramsey;
pub mod remainder;

pub use exec::parallel_enabled;
pub use field::{NumberField, Scalar};
pub use hypergraph::{ClosedSubspace, Hyperedge, LinearHypergraph, SlimComponent};
pub use linear::{Basis, ExactMatrix, GroupPoint};
