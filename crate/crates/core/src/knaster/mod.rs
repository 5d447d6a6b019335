//! The inverse limit `K = lim← (I_n, T_{p_n})`, its metric, diagonal
//! homeomorphisms and the estimates used for the conjugacy argument.

pub mod diagonal;
pub mod lemmas;
pub mod point;
pub mod primes;

pub use diagonal::{degree_diagonal, diag_dist, eval_diagonal, truncated_gap, DiagonalHomeo, GeneralDiagonalMap};
pub use lemmas::{
    certify_mod_bound, comod_lower_bound_check, separation_lower_bound, tent_witness, tent_witness_with,
    ComodCertificate, ModBoundCertificate, SeparationCertificate, TentWitness, WitnessStrategy,
};
pub use point::{extend_point, knaster_dist, partial_sum, CertifiedDistance, TruncatedKnasterPoint};
pub use primes::PrimeSequence;
