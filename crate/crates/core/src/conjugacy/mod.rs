//! Fixed-point signatures, conjugacy decisions and conjugator synthesis for
//! PL homeomorphisms of `[0,1]`.

pub mod blockwise;
pub mod conjugator;
pub mod generic;
pub mod signature;
pub mod surgery;

pub use blockwise::{grid_block, grid_block_conjugate, grid_block_conjugate_certified, snap_to_grid, BlockConjugate};
pub use conjugator::{approx_conjugator, approx_conjugator_certified, approx_conjugator_with_cap, ConjugatorCertificate, ORBIT_CAP};
pub use generic::{pseudo_generic, PseudoGenericSpec, SignPattern};
pub use signature::{decide_conjugate, signature, signature_oplus, signature_reflect, Component, FixedSignature, Layout, Sign};
pub use surgery::{close_gap, insert_bumps, open_gap, refine_to_signature};
