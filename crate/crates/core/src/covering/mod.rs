//! Finite branched covers given by permutation representations, and the
//! integral homology of the closed covering surface.

pub mod complex;
pub mod config;
pub mod lattice;
pub mod rep;

pub use complex::{CoverComplex, Face, FaceKind, Step};
pub use lattice::{
    deck_matrix, homology_lattice, intersection_gram, lift_class, CoverClass, H1Lattice,
};
pub use rep::{AbelianData, Permutation, PermutationRep};

use crate::error::Result;

/// A built cover together with its homology lattice.
#[derive(Clone, Debug)]
pub struct Cover {
    pub complex: CoverComplex,
    pub lattice: H1Lattice,
}

impl Cover {
    pub fn new(rep: PermutationRep) -> Result<Cover> {
        let complex = CoverComplex::build(rep);
        let lattice = homology_lattice(&complex)?;
        Ok(Cover { complex, lattice })
    }

    pub fn rep(&self) -> &PermutationRep {
        self.complex.rep()
    }
}
