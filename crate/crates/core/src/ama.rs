//! Adaptive mixer allocation: pre-train a small seed circuit, then grow it
//! one mixer-only layer at a time, picking mixers from the operator pool by
//! a weighted blend of expected solution quality and gradient magnitude.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{
    draw_subset, evaluate_with, gradient_with, Circuit, EvalOptions, Layer, ParameterVector,
};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::optimizer::{minimize, random_init, OptimizerConfig, RunResult};
use crate::seeds;
use crate::statevector::{MixerGate, StateVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AmaConfig {
    /// Weight of the gradient term in the mixer evaluation function.
    pub f1: f64,
    /// Random parameter sets averaged per candidate score.
    pub sample_sets: usize,
    /// Per-layer mixer cap; defaults to floor(n/2)+1.
    pub delta_add: Option<usize>,
    /// Gradient threshold ending a growth layer.
    pub delta_gra: f64,
    /// Mixers in the pre-trained seed layer; defaults to floor(n/2)+1.
    pub initial_subset_size: Option<usize>,
    /// Stop once two consecutive optimizations differ by less than this.
    pub outer_tol: f64,
    /// Growth step cap; defaults to n.
    pub max_layers: Option<usize>,
    pub optimizer: OptimizerConfig,
    /// Score by the full parameter gradient norm instead of the new beta only.
    pub full_gradient: bool,
    /// Max-normalize f_fun and f_gra across the pool before mixing.
    pub normalize_scores: bool,
    pub eval: EvalOptions,
}

impl Default for AmaConfig {
    fn default() -> Self {
        AmaConfig {
            f1: 0.5,
            sample_sets: 10,
            delta_add: None,
            delta_gra: 1e-3,
            initial_subset_size: None,
            outer_tol: 0.1,
            max_layers: None,
            optimizer: OptimizerConfig::default(),
            full_gradient: false,
            normalize_scores: false,
            eval: EvalOptions::default(),
        }
    }
}

fn half_plus_one(n: usize) -> usize {
    n / 2 + 1
}

impl AmaConfig {
    pub fn delta_add_for(&self, n: usize) -> usize {
        self.delta_add.unwrap_or_else(|| half_plus_one(n))
    }

    pub fn initial_subset_for(&self, n: usize) -> usize {
        self.initial_subset_size.unwrap_or_else(|| half_plus_one(n))
    }

    pub fn max_layers_for(&self, n: usize) -> usize {
        self.max_layers.unwrap_or(n)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.f1) {
            return Err(Error::invalid_config("f1", "must lie in [0, 1]"));
        }
        if self.sample_sets < 1 {
            return Err(Error::invalid_config("sample_sets", "must be >= 1"));
        }
        if !self.delta_gra.is_finite() || self.delta_gra < 0.0 {
            return Err(Error::invalid_config("delta_gra", "must be >= 0"));
        }
        if !self.outer_tol.is_finite() || self.outer_tol <= 0.0 {
            return Err(Error::invalid_config("outer_tol", "must be positive"));
        }
        let d = self.delta_add_for(n);
        if d < 1 || d > n {
            return Err(Error::invalid_config(
                "delta_add",
                format!("{d} not in 1..={n}"),
            ));
        }
        let k = self.initial_subset_for(n);
        if k < 1 || k > n {
            return Err(Error::invalid_config(
                "initial_subset_size",
                format!("{k} not in 1..={n}"),
            ));
        }
        self.optimizer.validate()
    }
}

/// Evaluation-function breakdown for one candidate mixer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixerScore {
    pub vertex: usize,
    /// Mean of -<H_C> over the sampled angles (expected set size).
    pub f_fun: f64,
    /// Mean gradient magnitude over the sampled angles.
    pub f_gra: f64,
    /// (1 - f1) * f_fun + f1 * f_gra.
    pub score: f64,
}

/// One mixer selection within a growth step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRecord {
    pub round: usize,
    pub vertex: usize,
    pub f_fun: f64,
    pub f_gra: f64,
    pub score: f64,
    /// Every candidate scored this round, ascending by vertex.
    pub pool_scores: Vec<MixerScore>,
    /// The shared angle samples all candidates were scored against.
    pub shared_samples: Vec<f64>,
    pub sample_hash: u64,
}

/// One growth step: the selections that built the layer and the
/// re-optimization that followed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthStep {
    pub layer_index: usize,
    pub selections: Vec<SelectionRecord>,
    /// Parameter vector at the start of the re-optimization; the prefix is
    /// the previous optimum, the last entry is the fresh random beta.
    pub warm_start: ParameterVector,
    /// Optimum parameters of the re-optimization.
    pub post_params: ParameterVector,
    /// Best expectation of the re-optimization.
    pub post_expectation: f64,
    pub iterations: u64,
}

/// Full per-run history of the adaptive loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmaTrace {
    pub pretrain_expectation: f64,
    pub pretrain_params: ParameterVector,
    pub pretrain_iterations: u64,
    pub steps: Vec<GrowthStep>,
    pub growth_steps: usize,
}

/// Everything produced by one adaptive run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmaOutcome {
    /// Aggregate view: lowest expectation across all optimizations, its
    /// parameters, total iterations, concatenated trajectory.
    pub result: RunResult,
    pub trace: AmaTrace,
    /// The fully grown circuit (resource accounting).
    pub final_circuit: Circuit,
    /// The circuit whose optimization achieved `result.final_expectation`.
    pub best_circuit: Circuit,
}

/// Seed circuit: one phase layer over all qubits plus one mixer layer over a
/// seeded random subset. Two parameters.
pub fn build_initial_circuit(g: &Graph, cfg: &AmaConfig, seed: u64) -> Result<Circuit> {
    let k = cfg.initial_subset_for(g.n());
    if k < 1 || k > g.n() {
        return Err(Error::invalid_config(
            "initial_subset_size",
            format!("{k} not in 1..={}", g.n()),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subset = draw_subset(&mut rng, g.n(), k);
    let mut c = Circuit::new(g.n());
    c.push_phase_layer();
    c.push_mixer_layer(&subset)?;
    Ok(c)
}

fn hash_samples(samples: &[f64]) -> u64 {
    samples
        .iter()
        .fold(seeds::hash_str("beta-samples"), |h, x| {
            seeds::mix(h, x.to_bits())
        })
}

fn apply_growth_layer(
    prefix: &StateVector,
    vertices: &[usize],
    beta: f64,
    g: &Graph,
    exact_phase: bool,
) -> Result<StateVector> {
    let mut state = prefix.clone();
    for &v in vertices {
        let gate = MixerGate::new(v, g.neighbors(v).to_vec(), beta);
        state.apply_mixer_with_phase(&gate, exact_phase)?;
    }
    Ok(state)
}

/// Scores the last vertex of `growth_vertices` given the already-evolved
/// prefix state. The growth layer (previous selections plus the candidate,
/// in order) is re-applied at every sampled angle with the trained prefix
/// frozen.
fn score_candidate_impl(
    candidate_circuit: &Circuit,
    trained_params: &ParameterVector,
    prefix_state: &StateVector,
    growth_vertices: &[usize],
    g: &Graph,
    shared_samples: &[f64],
    cfg: &AmaConfig,
) -> Result<MixerScore> {
    let candidate = *growth_vertices
        .last()
        .expect("growth layer holds the candidate");
    let h = cfg.optimizer.fd_step;
    let exact = cfg.eval.mixer_phase_exact;
    let mut fun_sum = 0.0;
    let mut gra_sum = 0.0;
    for &beta in shared_samples {
        let state = apply_growth_layer(prefix_state, growth_vertices, beta, g, exact)?;
        fun_sum += -state.expectation_hc();
        if cfg.full_gradient {
            let mut theta = trained_params.0.clone();
            theta.push(beta);
            let theta = ParameterVector(theta);
            let all: Vec<usize> = (0..theta.len()).collect();
            let grad = gradient_with(candidate_circuit, &theta, g, &all, h, cfg.eval)?;
            gra_sum += grad.iter().map(|x| x * x).sum::<f64>().sqrt();
        } else {
            let plus = apply_growth_layer(prefix_state, growth_vertices, beta + h, g, exact)?;
            let minus = apply_growth_layer(prefix_state, growth_vertices, beta - h, g, exact)?;
            gra_sum += ((plus.expectation_hc() - minus.expectation_hc()) / (2.0 * h)).abs();
        }
    }
    let s = shared_samples.len() as f64;
    let f_fun = fun_sum / s;
    let f_gra = gra_sum / s;
    Ok(MixerScore {
        vertex: candidate,
        f_fun,
        f_gra,
        score: (1.0 - cfg.f1) * f_fun + cfg.f1 * f_gra,
    })
}

/// Scores a candidate mixer against a trained circuit. `c` may carry a
/// growth layer under construction as its last mixer layer, in which case
/// `trained_params` covers every parameter except that layer's; the
/// candidate joins the layer and shares its sampled angle.
pub fn score_candidate(
    c: &Circuit,
    trained_params: &ParameterVector,
    g: &Graph,
    candidate: usize,
    shared_samples: &[f64],
    cfg: &AmaConfig,
) -> Result<MixerScore> {
    if candidate >= g.n() {
        return Err(Error::QubitOutOfRange {
            index: candidate,
            n_qubits: g.n(),
        });
    }
    if shared_samples.is_empty() {
        return Err(Error::invalid_config("shared_samples", "must be non-empty"));
    }
    let (prefix, growth) = if c.param_count() == trained_params.len() {
        (c.clone(), Vec::new())
    } else if c.param_count() == trained_params.len() + 1 {
        let mut prefix = c.clone();
        match prefix.pop_layer() {
            Some(Layer::Mixer { vertices, .. }) => (prefix, vertices),
            _ => {
                return Err(Error::invalid_config(
                    "circuit",
                    "growth layer under construction must be a mixer layer",
                ))
            }
        }
    } else {
        return Err(Error::DimensionMismatch {
            expected: c.param_count(),
            got: trained_params.len(),
        });
    };
    if growth.contains(&candidate) {
        return Err(Error::invalid_config(
            "candidate",
            format!("vertex {candidate} already in the growth layer"),
        ));
    }
    let (prefix_state, _) = evaluate_with(&prefix, trained_params, g, cfg.eval)?;
    let mut growth_with = growth;
    growth_with.push(candidate);
    let mut candidate_circuit = prefix;
    candidate_circuit.push_mixer_layer(&growth_with)?;
    score_candidate_impl(
        &candidate_circuit,
        trained_params,
        &prefix_state,
        &growth_with,
        g,
        shared_samples,
        cfg,
    )
}

/// Grows one mixer-only layer onto a trained circuit. The pool starts with
/// every vertex; each selection round draws fresh shared angle samples,
/// scores the whole pool, and takes the argmax (ties to the lowest vertex).
/// Selection continues while the remaining pool's best raw gradient exceeds
/// delta_gra and fewer than delta_add mixers were added.
pub fn grow_layer(
    c: &Circuit,
    params: &ParameterVector,
    g: &Graph,
    cfg: &AmaConfig,
    seed: u64,
) -> Result<(Circuit, Vec<SelectionRecord>)> {
    if params.len() != c.param_count() {
        return Err(Error::DimensionMismatch {
            expected: c.param_count(),
            got: params.len(),
        });
    }
    let delta_add = cfg.delta_add_for(g.n());
    let (prefix_state, _) = evaluate_with(c, params, g, cfg.eval)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (0..g.n()).collect();
    let mut selected: Vec<usize> = Vec::new();
    let mut records: Vec<SelectionRecord> = Vec::new();

    for round in 0.. {
        let samples: Vec<f64> = (0..cfg.sample_sets)
            .map(|_| rng.gen_range(cfg.optimizer.init_low..cfg.optimizer.init_high))
            .collect();
        let sample_hash = hash_samples(&samples);

        let mut scores: Vec<MixerScore> = pool
            .par_iter()
            .map(|&v| {
                let mut growth = selected.clone();
                growth.push(v);
                let mut candidate_circuit = c.clone();
                candidate_circuit.push_mixer_layer(&growth)?;
                score_candidate_impl(
                    &candidate_circuit,
                    params,
                    &prefix_state,
                    &growth,
                    g,
                    &samples,
                    cfg,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        scores.sort_by_key(|s| s.vertex);
        let raw_gra: Vec<(usize, f64)> = scores.iter().map(|s| (s.vertex, s.f_gra)).collect();

        if cfg.normalize_scores {
            let max_fun = scores.iter().map(|s| s.f_fun.abs()).fold(0.0, f64::max);
            let max_gra = scores.iter().map(|s| s.f_gra.abs()).fold(0.0, f64::max);
            for s in &mut scores {
                if max_fun > 0.0 {
                    s.f_fun /= max_fun;
                }
                if max_gra > 0.0 {
                    s.f_gra /= max_gra;
                }
                s.score = (1.0 - cfg.f1) * s.f_fun + cfg.f1 * s.f_gra;
            }
        }

        let mut best = 0;
        for i in 1..scores.len() {
            if scores[i].score > scores[best].score {
                best = i;
            }
        }
        let winner = scores[best].clone();
        selected.push(winner.vertex);
        pool.retain(|&v| v != winner.vertex);
        records.push(SelectionRecord {
            round,
            vertex: winner.vertex,
            f_fun: winner.f_fun,
            f_gra: winner.f_gra,
            score: winner.score,
            pool_scores: scores,
            shared_samples: samples,
            sample_hash,
        });

        let max_remaining_gra = raw_gra
            .iter()
            .filter(|(v, _)| *v != winner.vertex)
            .map(|(_, gra)| *gra)
            .fold(f64::NEG_INFINITY, f64::max);
        // NaN gradients count as a dead pool and end the layer.
        let gradient_alive = max_remaining_gra > cfg.delta_gra;
        if selected.len() >= delta_add || pool.is_empty() || !gradient_alive {
            break;
        }
    }

    let mut grown = c.clone();
    grown.push_mixer_layer(&selected)?;
    Ok((grown, records))
}

/// Runs the full adaptive loop: pre-train the seed circuit, then repeatedly
/// grow a layer and re-optimize every parameter (previous optimum warm-
/// started, the new layer's angle fresh random) until two consecutive
/// optimizations agree within outer_tol or the layer cap is hit.
pub fn run_ama(g: &Graph, cfg: &AmaConfig, seed: u64) -> Result<AmaOutcome> {
    cfg.validate(g.n())?;
    let max_layers = cfg.max_layers_for(g.n());

    let mut circuit = build_initial_circuit(g, cfg, seeds::derive(seed, "ama-init", &[]))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, "ama-pretrain", &[]));
    let init = random_init(circuit.param_count(), &mut rng, &cfg.optimizer);
    let r0 = minimize(&circuit, g, init, &cfg.optimizer, cfg.eval)?;

    let mut trace = AmaTrace {
        pretrain_expectation: r0.final_expectation,
        pretrain_params: r0.best_params.clone(),
        pretrain_iterations: r0.iterations,
        steps: Vec::new(),
        growth_steps: 0,
    };
    let mut total_iterations = r0.iterations;
    let mut trajectory = r0.trajectory;
    let mut best_f = r0.final_expectation;
    let mut best_params = r0.best_params.clone();
    let mut best_circuit = circuit.clone();
    let mut prev_f = r0.final_expectation;
    let mut params = r0.best_params;

    for k in 1..=max_layers {
        let grow_seed = seeds::derive(seed, "ama-grow", &[k as u64]);
        let (grown, selections) = grow_layer(&circuit, &params, g, cfg, grow_seed)?;

        let mut beta_rng =
            ChaCha8Rng::seed_from_u64(seeds::derive(seed, "ama-fresh-beta", &[k as u64]));
        let fresh_beta = beta_rng.gen_range(cfg.optimizer.init_low..cfg.optimizer.init_high);
        let mut warm = params.0.clone();
        warm.push(fresh_beta);
        let warm = ParameterVector(warm);

        let rk = minimize(&grown, g, warm.clone(), &cfg.optimizer, cfg.eval)?;
        total_iterations += rk.iterations;
        trajectory.extend_from_slice(&rk.trajectory);
        let f_k = rk.final_expectation;
        trace.steps.push(GrowthStep {
            layer_index: k,
            selections,
            warm_start: warm,
            post_params: rk.best_params.clone(),
            post_expectation: f_k,
            iterations: rk.iterations,
        });

        circuit = grown;
        params = rk.best_params.clone();
        if f_k < best_f {
            best_f = f_k;
            best_params = rk.best_params;
            best_circuit = circuit.clone();
        }
        if (f_k - prev_f).abs() < cfg.outer_tol {
            break;
        }
        prev_f = f_k;
    }

    trace.growth_steps = trace.steps.len();
    Ok(AmaOutcome {
        result: RunResult {
            final_expectation: best_f,
            best_params,
            iterations: total_iterations,
            trajectory,
        },
        trace,
        final_circuit: circuit,
        best_circuit,
    })
}
