//! Complete resolutions, Tate hypercohomology and the maps between it.

mod cochains;
mod comparison;
mod maps;
mod resolution;

pub use cochains::{
    coboundary_matrix, connecting_map, pull_values, push_values, repeat_diag, Block, CohClass, TateComplex, TateGroup,
};
pub use comparison::{
    bar_coboundary, bar_to_class, class_to_bar, index_tuple, is_bar_cocycle, pull_total, solve_bar_coboundary,
    tuple_index, BarCochain, BarComparison, ChainLift,
};
pub use maps::{
    chain_map_induced, edge_h2, inflate_module, inflation, inflation_map, module_map_induced, push_cochain,
    norm_quotient, restrict_class, restriction_map,
};
pub use resolution::{
    act_blocks, expand, greedy_module_generators, merge_terms, BarCodec, CompleteResolution, FreeResolution,
    ResolutionModel, Term,
};
