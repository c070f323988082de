//! Finite groups, modules over them, and bounded complexes of modules.

mod complex;
mod group;
mod module;

pub use complex::{cycle_lattice, GComplex, Homology};
pub use group::{enumerate_subgroups, prime_factors, FiniteGroup, QuotientGroup, Subgroup, SUBGROUP_BOUND};
pub use module::{
    aug_index, augmentation_ideal, augmentation_sequence, induced_embedding, induced_surjection, sub_group,
    AugmentationSequence, GHom, GModule,
};
