//! Problem-specific MISDP builders and their instance types.
//!
//! Each builder returns a [`MisdpModel`](crate::model::MisdpModel) whose
//! provenance tag names the formulation. Brute-force oracles for the same
//! problems live in [`crate::verify::oracle`].

mod beyond;
mod gpp;
mod graph;
mod packing;
mod qap;

pub use beyond::{build_matrix_completion, build_sils, CompletionInstance, SilsInstance};
pub use gpp::{build_gpp, build_kep_assoc, GppInstance, GppVariant, KepOptions};
pub use graph::{all_labeled_graphs, graphs_up_to_isomorphism, Graph, GraphError};
pub use packing::{build_mkcs, build_qbpp, build_qmkp, build_stable_set, QbppInstance, QmkpInstance};
pub use qap::{
    build_qap, build_tsp_cvetkovic, build_tsp_lee, build_tsp_qap, cycle_adjacency, lee_cos, QapInstance, QaplibError,
};

pub use crate::formulations::BuildError;
