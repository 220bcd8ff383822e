//! Optimal orderings for the optimal stopping problem.
//!
//! A player probes independent non-negative random variables one at a time
//! and may stop at any realization. For a fixed ordering the optimal rule is
//! a backward recursion; choosing the ordering is the hard part. This crate
//! provides:
//!
//! - exact stopping values, hindsight maxima and the dual makespan
//!   decomposition ([`eval`]),
//! - brute-force oracles over permutations and ordered partitions
//!   ([`oracle`]),
//! - the exact `O(n^2)` algorithm for two-point distributions
//!   ([`two_point`]) and the 1.25 prophet certificate ([`prophet`]),
//! - the approximation scheme for three-point distributions on
//!   `{a_i, m_i, 1}` ([`fptas`]),
//! - the subset-product instance generator ([`hardness`]),
//! - structural rules for `{0, m, 1}` and nested uniform variables
//!   ([`rules`]).

pub mod dist;
pub mod error;
pub mod eval;
pub mod fptas;
pub mod hardness;
pub mod oracle;
pub mod prophet;
pub mod rules;
pub mod shape;
pub mod two_point;

pub use dist::{Dist, DistSpec, FiniteDist, UniformDist};
pub use error::{Error, Result};
pub use eval::{
    emax, evaluate_order, excess, hindsight_max, hindsight_max_finite, makespan_value,
    sequence_value, ExcessProfile, OrderingResult, Reward,
};
pub use fptas::{FptasConfig, FptasResult, OrderedPartition};
pub use hardness::HardnessInstance;
pub use oracle::{brute_force_order, brute_force_partition, OracleResult, PartitionResult};
pub use prophet::{ProphetCertificate, ProphetReport};
pub use rules::StructureReport;
pub use two_point::{TwoPoint, TwoPointInstance};
