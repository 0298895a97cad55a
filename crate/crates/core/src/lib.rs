//! Continuous-time quantum walks on directed graphs.
//!
//! Edge directions enter through the single-phase Hermitian adjacency matrix
//! `A_H = e^{i alpha} A + e^{-i alpha} A^T`; the walk Hamiltonian is
//! `H = J(A_H) + J^T(A_H)` for a coupling series `J`. Circulant graphs take a
//! closed-form Fourier path, everything else a dense Hermitian eigensolver.

pub mod error;
pub mod graph;
pub mod harness;
pub mod operator;
pub mod oracles;
pub mod render;
pub mod spectral;
pub mod walk;

pub use nalgebra::Complex;

/// Double-precision complex scalar used throughout.
pub type C64 = Complex<f64>;

pub use error::{Error, Result};
pub use graph::{
    bipartition, build_moebius_ladder, build_ring, build_star, circulant_block_decomposition,
    Bipartition, BlockDecomposition, CirculantSpec, DirectedGraph,
};
pub use operator::{
    apply_coupling, assemble_hamiltonian, hermitian_adjacency, hermitian_eigendecomposition,
    CouplingSeries, EigenSystem, HermitianOperator, Phase,
};
pub use spectral::{
    circulant_ah_spectrum, circulant_evolution, circulant_hamiltonian_spectrum, fourier_basis,
    CirculantPropagator, DiagonalSpectrum, FourierBasis,
};
pub use walk::{
    arrival_time, evolve, run_walk, sweep_alpha, InitialState, Propagator, Substrate, TimeGrid,
    WalkResult,
};
