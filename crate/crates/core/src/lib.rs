//! Subgroups of free groups as Stallings core graphs.
//!
//! Graphs are built from darts (directed half-edges paired by an involution).
//! A finitely generated subgroup of the free group `F_r` is represented by its
//! based core, a folded labeled graph over the bouquet of `r` circles. On top
//! of that sit covering invariants, pullbacks realizing conjugate
//! intersections, and the intersection-rank bounds they are compared against.

pub mod bounds;
pub mod core;
pub mod covering;
pub mod doc;
pub mod error;
pub mod excision;
mod fold;
pub mod graph;
pub mod pullback;
pub mod sample;
pub mod word;

pub use crate::bounds::{classical_bounds, compare, family_pair, paper_bound, BoundReport};
pub use crate::core::{core_from_words, is_basis, BasedCore, LabeledGraph, Trace};
pub use crate::covering::{
    checker_count, complete_to_finite_cover, escape_witness, extended_spine, index, is_galois,
    schreier_basis, spine_invariants, Index, SpineInvariants,
};
pub use crate::error::{Error, Result, Violation};
pub use crate::excision::lattice_excision;
pub use crate::graph::{Dart, DartId, Graph, Path, Subgraph, VertexId};
pub use crate::pullback::{
    brute_force_double_cosets, double_coset_reps, fiber_product, intersection_rank_sum, join,
    pointed_intersection, PullbackReport,
};
pub use crate::word::{apply_substitution, parse_word, parse_words, Letter, Substitution, Word};
