//! Feasibility-preserving statevector simulation of the quantum alternating
//! operator ansatz for maximum independent set, with an adaptive mixer
//! allocation loop, partial-mixer baselines, calibrated resource accounting
//! and a seeded experiment harness.

pub mod ama;
pub mod ansatz;
pub mod bench;
pub mod error;
pub mod graphs;
pub mod optimizer;
pub mod seeds;
pub mod statevector;

pub use ama::{
    build_initial_circuit, grow_layer, run_ama, score_candidate, AmaConfig, AmaOutcome, AmaTrace,
    MixerScore,
};
pub use ansatz::{
    build_pnu, build_pu, build_qaoa_plus, circuit_depth, cnot_count, evaluate, evaluate_with,
    gradient, Circuit, EvalOptions, Layer, ParameterVector, ResourceModel,
};
pub use bench::{
    approximation_ratio, oar_cost_protocol, run_campaign, runtime_estimate, serialize_results,
    Algorithm, ExperimentConfig, GraphFamily, MetricsRow, OarCostRow, OutputFormat,
};
pub use error::{Error, Result};
pub use graphs::{
    brute_force_mis, classical_objective, generate_er, generate_regular, graph_id, is_independent,
    penalty_energy, Assignment, Graph, MisOracleResult,
};
pub use optimizer::{minimize, random_init, seeded_init, Method, OptimizerConfig, RunResult};
pub use statevector::{init_zero_state, MixerGate, StateVector};
