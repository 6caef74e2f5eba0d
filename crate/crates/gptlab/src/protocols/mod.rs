//! Experiment harness for advice and proof protocols: Boxworld advice
//! computation, randomness extraction, permutation dynamics, gentle
//! measurement, advice distillation, majority amplification, post-selected
//! acceptance and the spectral/gap-trace bounds.
//!
//! Experiments are independent jobs; trial loops run through
//! [`crate::par::indexed_map`], so results merge deterministically in index
//! order regardless of thread count.

mod experiments;
mod gma;
mod randcirc;
mod spectral;

pub use experiments::{
    advice_distillation, advice_parity_eval, amplify, gentle_measurement_check,
    gentle_measurement_check_seq, majority_tail, measurement_update, parity_circuit,
    permutation_transform, postbgp_check, product_power, projector_circuit,
    toy_contradictory_family, toy_plus_family, von_neumann_bit, DistillationResult,
    DistillationStep, GentleReport, PostBgpReport, VonNeumannReport,
};
pub use gma::{
    circuit_bound_report, d_rule_satisfies_growth, default_d_rule, gma_threshold_report,
    AdviceExperiment, BoundReport, Classification, ProofExperiment, RejectChain,
};
pub use randcirc::random_aux_circuit;
pub use spectral::{
    gap_trace, reparametrise, sigma_max, sigma_max_exact_bounds, verify_sigma_bound, Reparam,
    SigmaBoundReport, MAX_GAP_DIM, MAX_GAP_EXPONENT,
};
