//! Euclidean TSP solving via a differentiable permutation relaxation.
//!
//! The tour objective is expressed as a matrix inner product with a
//! similarity-transformed cyclic shift, `<D, P V^k P^T>`; relaxing the hard
//! permutation P to a doubly stochastic matrix from the Gumbel-Sinkhorn
//! operator makes the objective differentiable, so each instance can be
//! solved by plain gradient descent on logits. The Hungarian algorithm
//! rounds the relaxation back to a hard permutation, which by construction
//! always yields a valid Hamiltonian cycle. Quality is boosted by an
//! ensemble over all phi(n) coprime shift topologies V^k, keeping the
//! shortest decoded tour per instance.
//!
//! The crate also ships classical construction baselines (nearest neighbor,
//! farthest insertion, beam search, greedy-matching Christofides) and exact
//! small-instance oracles (brute force, Held-Karp) for optimality-gap
//! reporting.
//!
//! All numeric kernels are generic over the floating-point type via
//! [`scalar::Scalar`]; the `*64`/`*32` aliases below pin the two concrete
//! instantiations.

pub mod assign;
pub mod baselines;
pub mod error;
pub mod instances;
pub mod matrix;
pub mod oracle;
pub mod perm;
pub mod scalar;
pub mod seeding;
pub mod sinkhorn;
pub mod solver;

pub use error::{Error, Result};

pub type TspInstance64 = instances::TspInstance<f64>;
pub type TspInstance32 = instances::TspInstance<f32>;
pub type Tour64 = instances::Tour<f64>;
pub type Tour32 = instances::Tour<f32>;
pub type Matrix64 = matrix::Matrix<f64>;
pub type Logits64 = sinkhorn::Logits<f64>;
pub type SoftPerm64 = sinkhorn::SoftPerm<f64>;
pub type SolverConfig64 = solver::SolverConfig<f64>;
pub type SolveResult64 = solver::SolveResult<f64>;
