//! Gradient-based minimization of the circuit expectation. Gradients come
//! from central finite differences; the mixer has three distinct eigenvalues
//! so two-point shift rules do not apply, and layer parameters are shared
//! across gates.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ansatz::{evaluate_with, gradient_with, Circuit, EvalOptions, ParameterVector};
use crate::error::{Error, Result};
use crate::graphs::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Adam,
    GradientDescent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub method: Method,
    pub learning_rate: f64,
    /// Successive-value tolerance for the stop rule.
    pub inner_tol: f64,
    /// Consecutive small-change iterations required before stopping.
    pub patience: usize,
    pub max_iters: usize,
    /// Central-difference step.
    pub fd_step: f64,
    pub init_low: f64,
    pub init_high: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            method: Method::Adam,
            learning_rate: 0.05,
            inner_tol: 1e-3,
            patience: 3,
            max_iters: 500,
            fd_step: 1e-4,
            init_low: -std::f64::consts::PI,
            init_high: std::f64::consts::PI,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(Error::invalid_config(
                "learning_rate",
                "must be positive",
            ));
        }
        if !self.inner_tol.is_finite() || self.inner_tol <= 0.0 {
            return Err(Error::invalid_config("inner_tol", "must be positive"));
        }
        if self.patience < 1 {
            return Err(Error::invalid_config("patience", "must be >= 1"));
        }
        if self.max_iters < 1 {
            return Err(Error::invalid_config("max_iters", "must be >= 1"));
        }
        if !self.fd_step.is_finite() || self.fd_step <= 0.0 {
            return Err(Error::invalid_config("fd_step", "must be positive"));
        }
        let range_ok = self.init_low.is_finite()
            && self.init_high.is_finite()
            && self.init_low < self.init_high;
        if !range_ok {
            return Err(Error::invalid_config(
                "init_range",
                "lower bound must be below upper bound",
            ));
        }
        Ok(())
    }
}

/// Outcome of one optimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    /// Lowest expectation seen, including the starting point.
    pub final_expectation: f64,
    /// Parameters that achieved it.
    pub best_params: ParameterVector,
    /// Gradient-plus-update steps performed.
    pub iterations: u64,
    /// Expectation before any update followed by one entry per iteration.
    pub trajectory: Vec<f64>,
}

/// Uniform random parameters in the configured init range.
pub fn random_init(param_count: usize, rng: &mut ChaCha8Rng, cfg: &OptimizerConfig) -> ParameterVector {
    ParameterVector(
        (0..param_count)
            .map(|_| rng.gen_range(cfg.init_low..cfg.init_high))
            .collect(),
    )
}

/// [`random_init`] from a bare seed.
pub fn seeded_init(param_count: usize, seed: u64, cfg: &OptimizerConfig) -> ParameterVector {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_init(param_count, &mut rng, cfg)
}

/// Minimizes the expectation starting from `init`. Every iteration costs one
/// full finite-difference gradient and one update. Stops after `patience`
/// consecutive iterations whose expectation moved by less than `inner_tol`,
/// or at `max_iters`.
pub fn minimize(
    c: &Circuit,
    g: &Graph,
    init: ParameterVector,
    cfg: &OptimizerConfig,
    opts: EvalOptions,
) -> Result<RunResult> {
    cfg.validate()?;
    if init.len() != c.param_count() {
        return Err(Error::DimensionMismatch {
            expected: c.param_count(),
            got: init.len(),
        });
    }
    let all_indices: Vec<usize> = (0..c.param_count()).collect();
    let mut theta = init;
    let (_, f0) = evaluate_with(c, &theta, g, opts)?;
    let mut trajectory = vec![f0];
    let mut best_f = f0;
    let mut best_params = theta.clone();
    let mut prev_f = f0;
    let mut calm_streak = 0usize;
    let mut iterations = 0u64;

    // Adam moment buffers; unused under plain gradient descent.
    let mut m = vec![0.0; theta.len()];
    let mut v = vec![0.0; theta.len()];
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    for t in 1..=cfg.max_iters {
        let grad = gradient_with(c, &theta, g, &all_indices, cfg.fd_step, opts)?;
        match cfg.method {
            Method::Adam => {
                let bc1 = 1.0 - BETA1.powi(t as i32);
                let bc2 = 1.0 - BETA2.powi(t as i32);
                for (j, &g_j) in grad.iter().enumerate() {
                    m[j] = BETA1 * m[j] + (1.0 - BETA1) * g_j;
                    v[j] = BETA2 * v[j] + (1.0 - BETA2) * g_j * g_j;
                    let m_hat = m[j] / bc1;
                    let v_hat = v[j] / bc2;
                    theta.0[j] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + EPS);
                }
            }
            Method::GradientDescent => {
                for (t_j, &g_j) in theta.0.iter_mut().zip(&grad) {
                    *t_j -= cfg.learning_rate * g_j;
                }
            }
        }
        iterations += 1;
        let (_, f) = evaluate_with(c, &theta, g, opts)?;
        trajectory.push(f);
        if f < best_f {
            best_f = f;
            best_params = theta.clone();
        }
        if (f - prev_f).abs() < cfg.inner_tol {
            calm_streak += 1;
            if calm_streak >= cfg.patience {
                break;
            }
        } else {
            calm_streak = 0;
        }
        prev_f = f;
    }

    Ok(RunResult {
        final_expectation: best_f,
        best_params,
        iterations,
        trajectory,
    })
}
