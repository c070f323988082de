//! Class complexes and the Weil groups synthesized from them.

mod axioms;
mod build;
mod formation;

pub use axioms::{
    artin_map, artin_via_nakayama, compare_artin, verify_weil_axioms, weil_isomorphism, ArtinReport, AxiomReport,
    AxiomRow, WeilIsomorphism,
};
pub use build::{build_weil_group, build_weil_group_with, LocalCheck, LocalData, WeilGroupData, WeilOptions};
pub use formation::{
    relation_module_cocycle, synthetic_formation, verify_class_complex, ClassComplex,
    ClassComplexReport, ClassRow, FormationSpec, MAX_FORMATION_ORDER,
};
