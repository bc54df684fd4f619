//! Divergences, entropies and mutual informations, all in bits.

mod block;
mod cq;
mod divergences;
mod hypothesis;
mod maxrel;
mod mutual;
mod params;

pub use block::BlockPair;
pub use cq::{Atom, CqState, TOL_PROB};
pub use divergences::{
    binary_entropy, classical_np_oracle, fact_bound, relative_entropy, renyi_entropy,
    renyi_relative_entropy, shannon_entropy, von_neumann_entropy, NpOutcome,
};
pub use hypothesis::{
    hypothesis_test_blocks, hypothesis_testing_divergence, hypothesis_testing_outcome, HtOutcome,
    MAX_BISECTION_ITERATIONS,
};
pub use maxrel::{
    common_eigenbasis_weights, max_relative_blocks, max_relative_entropy, smooth_max_blocks,
    smooth_max_classical, smooth_max_relative_entropy, COMMUTATOR_TOL,
};
pub use mutual::{
    cond_smooth_ht_mi, cond_smooth_max_mi, ht_mutual_info, max_min_over_supports,
    max_mutual_info, smooth_max_mutual_info, MAX_CONDITIONING_ALPHABET,
};
pub use params::{DeltaChoice, Smoothing, SmoothingStrategy, ToleranceParams};
