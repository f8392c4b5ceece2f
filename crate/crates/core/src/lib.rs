//! Sum-networks over finite fields.
//!
//! A sum-network is a directed acyclic network in which every terminal must
//! recover the sum, over GF(q), of the symbols generated at all sources.
//! This crate models such networks, represents scalar and vector linear
//! network codes on them, computes transfer matrices, and decides
//! solvability either by explicit construction or by exhaustive search.

pub mod coding;
pub mod galois;
pub mod generators;
pub mod network;
pub mod par;
pub mod solver;
pub mod transfer;

pub use coding::{is_solution, propagate, slots, CodeError, LinearCode, MessageState, SlotKey};
pub use galois::{lift_to_matrix, Elem, FieldError, FiniteField, Matrix};
pub use generators::{gen_g1, gen_smstar, Family, GeneratorError};
pub use network::{Connectivity, NetPath, NetworkError, SumNetwork};
pub use solver::{SearchOptions, SolvabilityVerdict, SolverError, VerdictStatus};
pub use transfer::{
    path_gain, reverse_code, transfer_matrix, transfer_via_paths, TransferError, TransferMatrix,
};
