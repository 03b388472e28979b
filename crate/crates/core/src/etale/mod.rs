//! Subrings of finite products of real number fields: closure into an
//! explicit basis, minimal primes and residue fields, total quotient rings,
//! idempotents, Baer hulls and the f-ring lattice operations.

pub mod field;
pub mod idempotents;
pub mod lattice;
pub mod primes;
pub mod subring;

pub use field::{is_one, Ambient, Element, NumberField, ProductAlgebra};
pub use idempotents::{
    baer_hull, essential_violation, idempotents, is_baer, is_essential, is_integrally_closed_in_t,
    total_idempotents, Tristate,
};
pub use lattice::{lattice_ops, LatticeOps};
pub use primes::{minimal_primes, restrict_embedding, total_quotient, MinimalPrime, TotalQuotient};
pub use subring::{
    close_subring, close_subring_with, membership, ClosureConfig, ComputedSubring, Mode,
    SubringPresentation,
};
