//! Embeddings between particle levels, wedge contractions, contraction weights, and the
//! `n`-particle and unbounded hierarchy Lie brackets.

mod bracket;
mod coefficient;
mod embedding;
mod types;
mod wedge;

pub use bracket::{
    bracket_ginf, bracket_gn, bracket_gn_definitional, bracket_gn_with, filtration_h, filtration_h_with,
    level_partition, max_coefficient_gap, CoefficientRule,
};
pub use coefficient::{bracket_coefficient, r_min, target_level, BracketCoefficient};
pub use embedding::{
    embedding_rank, epsilon_compose_check, epsilon_embed, epsilon_embed_subsets, epsilon_embed_tuples, epsilon_invert,
    iota_epsilon, ordered_tuples, subsets, tuple_count,
};
pub use types::ObservableHierarchy;
pub use wedge::wedge_r;
