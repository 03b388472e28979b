//! Symbolic real closures.
//!
//! A real closure of a ring in the class is never built. It is named by a
//! descriptor: for each minimal prime, the residue field together with one
//! of its orderings, standing for the real closure of that ordered field.

mod automorphisms;
pub mod census;
mod odd_root;

pub use automorphisms::{
    a_automorphisms, a_automorphisms_with, AutomorphismReport, BlockMap, ReconstructionConfig,
    RingMap,
};
pub use census::{closures_census, CensusReport, Pairing};
pub use odd_root::{odd_root, verify_odd_root, KPoly, OddRoot, PrimeRoot};

use std::fmt;

use crate::etale::{ComputedSubring, NumberField};
use crate::spectra::{sections, Section};

#[derive(Clone, Debug)]
pub struct ClosureDescriptor<'a> {
    pub base: &'a ComputedSubring,
    pub section: Section,
}

impl<'a> ClosureDescriptor<'a> {
    pub fn new(base: &'a ComputedSubring, section: Section) -> Self {
        ClosureDescriptor { base, section }
    }

    /// One descriptor per section of the base.
    pub fn all(base: &'a ComputedSubring) -> Vec<Self> {
        sections(base)
            .into_iter()
            .map(|s| ClosureDescriptor::new(base, s))
            .collect()
    }

    /// Residue field and chosen ordering at each prime.
    pub fn blocks(&self) -> Vec<(&NumberField, usize)> {
        self.base
            .minimal_primes()
            .iter()
            .map(|p| (&p.residue, self.section.embedding(p.id)))
            .collect()
    }

    /// Isomorphism over the base, by equality of sections.
    pub fn equivalent(&self, other: &ClosureDescriptor) -> bool {
        self.base.echelon() == other.base.echelon() && self.section == other.section
    }
}

impl fmt::Display for ClosureDescriptor<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rc(")?;
        for (i, (field, k)) in self.blocks().iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{}@{k}", field.name())?;
        }
        write!(f, ")")
    }
}
