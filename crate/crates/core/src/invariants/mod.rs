//! Exact numeric graph invariants.

mod matching;
mod spectrum;

pub use matching::{brute_force_matching, max_matching, MatchingResult, BRUTE_FORCE_MAX_NODES};
pub use spectrum::{
    adjacency_spectral_radius, adjacency_spectral_radius_with, adjacency_spectrum_with, laplacian_matrix,
    laplacian_spectrum, laplacian_spectrum_with, symmetric_eigenvalues, EigenOptions, Spectrum, EIGEN_TOL,
};

use crate::graph::Graph;

pub fn edge_count(g: &Graph) -> usize {
    g.edge_count()
}
