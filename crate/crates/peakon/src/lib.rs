//! Multi-peakon solvers for the dispersionless Camassa-Holm equation.
//!
//! A multi-peakon is a superposition `u(x, t) = sum_n p_n(t) e^{-|x - q_n(t)|}`
//! whose amplitudes and positions obey a finite-dimensional Hamiltonian system.
//! This crate provides two independent ways of evolving it, built to verify
//! each other:
//!
//! - **direct dynamics**: adaptive embedded Runge-Kutta integration of the
//!   Hamiltonian ODEs with collision event detection, plus the two-peakon
//!   closed forms ([`dynamics`]);
//! - **inverse spectral transform**: the forward map to eigenvalues, norming
//!   and coupling constants of the associated point-mass string problem
//!   ([`spectral`]), the exactly linear evolution of that data, and inversion
//!   back through the Stieltjes moment problem with Hankel determinants
//!   ([`moment`], [`flow`]).
//!
//! The spectral route continues conservatively through peakon-antipeakon
//! collisions, where a Hankel determinant vanishes and the local energy
//! concentrates into a point measure. Long-time behavior is covered by the
//! peakon-resolution asymptotics ([`asymptotics`]): the solution splits into a
//! train of single peakons along rays `x = t / (2 lambda)` with explicitly
//! computable phase shifts.
//!
//! See the `examples/` directory for one runnable walkthrough per capability
//! and the `peakon` binary for file-based pipelines.

// `!(x > 0.0)` style comparisons are deliberate: they reject NaN along with
// the out-of-range sign.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod flow;
pub mod kernel;
pub mod moment;
pub mod poly;
pub mod profile;
pub mod spectral;
pub mod weyl;

pub use asymptotics::{
    asymptotic_profile, phase_shifts, resolution_error, PhaseShift, PhaseShiftTable,
};
pub use cli::{run_command, RunSpec};
pub use dynamics::{
    integrate, rhs, two_peakon_blowup_time, two_peakon_exact, CollisionEvent, IntegrateOptions,
    Trajectory, TwoPeakonReduced,
};
pub use error::{CollisionSignal, Error, Result};
pub use flow::{
    antipeakon_collision_state, evolve_spectral, solve_conservative, trace_identities, FlowState,
    TraceIdentities,
};
pub use kernel::{cf_hamiltonian, KernelParams};
pub use profile::{Atom, ConservativeState, DiscreteMeasure, Peak, PeakonConfig};
pub use spectral::{
    coupling_constants, eigenvalues, eigenvalues_of_state, forward_transform, jost_solution,
    modified_norming_constants, norming_constants, string_coefficients, wronskian_polynomial,
    Direction, JostSolution, SpectralData,
};
pub use weyl::{weyl_eval, PoleResidue, StringData, WeylRepresentation};
