//! Planning and verification of pair-interaction Hamiltonian simulations under
//! fast local control.
//!
//! The natural Hamiltonian couples `n` qudits through `J = W ⊗ C`, where `W` is
//! an `n × n` weight matrix and `C` an `m × m` coupling type. A simulation of a
//! target `J̃` is a list of time steps `(t_j, V_j)` with
//! `Σ_j t_j V_j J V_jᵀ = J̃`. Two cost measures are tracked: the number of steps
//! `N` and the total time `τ = Σ_j t_j`.
//!
//! Modules:
//!
//! * [`exactnum`]: big-integer matrices, characteristic polynomials, square-free
//!   decomposition and Sturm root counting.
//! * [`linalg`]: dense symmetric matrices and a cyclic Jacobi eigensolver.
//! * [`graphs`]: interaction graphs, clique partitions and sign patterns.
//! * [`spectral`]: eigenvalue clustering and exact rationality verdicts.
//! * [`bounds`]: lower and upper bounds on steps and overhead.
//! * [`schemes`]: Hadamard cluster decoupling, presets and exact verification.
//! * [`polytope`]: exact optimal overhead by linear programming and a
//!   brute-force minimal-step oracle.

pub mod bounds;
pub mod error;
pub mod exactnum;
pub mod graphs;
pub mod linalg;
pub mod polytope;
pub mod schemes;
pub mod spectral;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
