//! Circuit intermediate representation shared by all four algorithm
//! families, plus evaluation against a parameter vector and the calibrated
//! depth / CNOT resource models.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::statevector::{init_zero_state, MixerGate, StateVector};

/// One circuit layer: either a phase rotation on every qubit or a sequence of
/// mixers on the listed vertices, all sharing a single angle parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layer {
    Phase {
        param_index: usize,
    },
    Mixer {
        /// Application order is the stored order.
        vertices: Vec<usize>,
        param_index: usize,
    },
}

/// Ordered layers over an n-qubit register; each layer owns one parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    layers: Vec<Layer>,
    param_count: usize,
}

/// Real angle parameters, one per circuit layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector(pub Vec<f64>);

impl ParameterVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Resource accounting knobs. The defaults are the unique linear model
/// consistent with the reference depth totals: a phase layer costs 1, every
/// mixer costs 3 depth units, and a mixer with k controls decomposes into
/// 8k-6 CNOTs (0 for an uncontrolled mixer). Individual control counts can
/// be overridden.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResourceModel {
    pub depth_per_mixer: u64,
    pub phase_layer_depth: u64,
    /// Keyed by control count; serialized with string keys so the map
    /// survives TOML and JSON round trips.
    #[serde(with = "string_keyed_map")]
    pub cnot_cost_overrides: BTreeMap<usize, u64>,
}

mod string_keyed_map {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<usize, u64>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        let as_strings: BTreeMap<String, u64> =
            map.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        as_strings.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<usize, u64>, D::Error> {
        let as_strings = BTreeMap::<String, u64>::deserialize(deserializer)?;
        as_strings
            .into_iter()
            .map(|(k, v)| {
                k.parse::<usize>()
                    .map(|k| (k, v))
                    .map_err(|_| D::Error::custom(format!("non-numeric control count '{k}'")))
            })
            .collect()
    }
}

impl Default for ResourceModel {
    fn default() -> Self {
        ResourceModel {
            depth_per_mixer: 3,
            phase_layer_depth: 1,
            cnot_cost_overrides: BTreeMap::new(),
        }
    }
}

impl ResourceModel {
    /// CNOT cost of one mixer whose target has `degree` neighbors.
    pub fn cnot_cost(&self, degree: usize) -> u64 {
        if let Some(&cost) = self.cnot_cost_overrides.get(&degree) {
            return cost;
        }
        if degree == 0 {
            0
        } else {
            8 * degree as u64 - 6
        }
    }
}

/// Evaluation options; `mixer_phase_exact` switches the blocked-subspace
/// phase convention of the mixer exponential.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalOptions {
    pub mixer_phase_exact: bool,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            layers: Vec::new(),
            param_count: 0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn param_count(&self) -> usize {
        self.param_count
    }

    /// Number of mixer applications across all layers.
    pub fn mixer_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| match l {
                Layer::Phase { .. } => 0,
                Layer::Mixer { vertices, .. } => vertices.len(),
            })
            .sum()
    }

    /// Appends a phase layer with a fresh parameter.
    pub fn push_phase_layer(&mut self) {
        self.layers.push(Layer::Phase {
            param_index: self.param_count,
        });
        self.param_count += 1;
    }

    /// Appends a mixer layer with a fresh shared parameter; vertex order is
    /// preserved as given.
    pub fn push_mixer_layer(&mut self, vertices: &[usize]) -> Result<()> {
        if vertices.is_empty() {
            return Err(Error::invalid_config("mixer_layer", "empty mixer layer"));
        }
        let mut seen = vec![false; self.n_qubits];
        for &v in vertices {
            if v >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: v,
                    n_qubits: self.n_qubits,
                });
            }
            if seen[v] {
                return Err(Error::invalid_config(
                    "mixer_layer",
                    format!("duplicate vertex {v}"),
                ));
            }
            seen[v] = true;
        }
        self.layers.push(Layer::Mixer {
            vertices: vertices.to_vec(),
            param_index: self.param_count,
        });
        self.param_count += 1;
        Ok(())
    }

    /// Extends the trailing mixer layer with one more vertex, reusing the
    /// layer's parameter. The layer must exist and must not already contain
    /// the vertex.
    pub fn extend_last_mixer_layer(&mut self, vertex: usize) -> Result<()> {
        if vertex >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: vertex,
                n_qubits: self.n_qubits,
            });
        }
        match self.layers.last_mut() {
            Some(Layer::Mixer { vertices, .. }) => {
                if vertices.contains(&vertex) {
                    return Err(Error::invalid_config(
                        "mixer_layer",
                        format!("duplicate vertex {vertex}"),
                    ));
                }
                vertices.push(vertex);
                Ok(())
            }
            _ => Err(Error::invalid_config(
                "mixer_layer",
                "last layer is not a mixer layer",
            )),
        }
    }

    /// Removes the trailing layer, releasing its parameter.
    pub fn pop_layer(&mut self) -> Option<Layer> {
        let layer = self.layers.pop()?;
        self.param_count -= 1;
        Some(layer)
    }

    /// Debug dump: one line per layer, `P <param_idx>` or `M <param_idx> v1,v2,...`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for layer in &self.layers {
            match layer {
                Layer::Phase { param_index } => out.push_str(&format!("P {param_index}\n")),
                Layer::Mixer {
                    vertices,
                    param_index,
                } => {
                    let list: Vec<String> = vertices.iter().map(|v| v.to_string()).collect();
                    out.push_str(&format!("M {param_index} {}\n", list.join(",")));
                }
            }
        }
        out
    }
}

/// Builds the full ansatz: `p` repetitions of a phase layer followed by a
/// mixer layer over every vertex in ascending order. 2p parameters.
pub fn build_qaoa_plus(g: &Graph, p: usize) -> Result<Circuit> {
    if p < 1 {
        return Err(Error::invalid_config("p", "layer depth must be >= 1"));
    }
    let all: Vec<usize> = (0..g.n()).collect();
    let mut c = Circuit::new(g.n());
    for _ in 0..p {
        c.push_phase_layer();
        c.push_mixer_layer(&all)?;
    }
    Ok(c)
}

pub(crate) fn draw_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut subset: Vec<usize> = rand::seq::index::sample(rng, n, k).into_vec();
    subset.sort_unstable();
    subset
}

fn check_partial_args(g: &Graph, p: usize, n_pm: usize) -> Result<()> {
    if p < 1 {
        return Err(Error::invalid_config("p", "layer depth must be >= 1"));
    }
    if n_pm < 1 || n_pm > g.n() {
        return Err(Error::invalid_config(
            "n_pm",
            format!("mixers per layer {n_pm} not in 1..={}", g.n()),
        ));
    }
    Ok(())
}

/// Partial-mixer ansatz with uniform selection: one seeded random subset of
/// `n_pm` vertices, reused in every one of the `p` mixer layers.
pub fn build_pu(g: &Graph, p: usize, n_pm: usize, seed: u64) -> Result<Circuit> {
    check_partial_args(g, p, n_pm)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subset = draw_subset(&mut rng, g.n(), n_pm);
    let mut c = Circuit::new(g.n());
    for _ in 0..p {
        c.push_phase_layer();
        c.push_mixer_layer(&subset)?;
    }
    Ok(c)
}

/// Partial-mixer ansatz with non-uniform selection: an independent subset is
/// drawn for every layer.
pub fn build_pnu(g: &Graph, p: usize, n_pm: usize, seed: u64) -> Result<Circuit> {
    check_partial_args(g, p, n_pm)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(g.n());
    for _ in 0..p {
        let subset = draw_subset(&mut rng, g.n(), n_pm);
        c.push_phase_layer();
        c.push_mixer_layer(&subset)?;
    }
    Ok(c)
}

/// Evolves |0...0> through the circuit and returns the final state together
/// with its expectation. Mixer controls are the target's neighbors in `g`.
pub fn evaluate(c: &Circuit, theta: &ParameterVector, g: &Graph) -> Result<(StateVector, f64)> {
    evaluate_with(c, theta, g, EvalOptions::default())
}

/// [`evaluate`] with explicit options.
pub fn evaluate_with(
    c: &Circuit,
    theta: &ParameterVector,
    g: &Graph,
    opts: EvalOptions,
) -> Result<(StateVector, f64)> {
    if theta.len() != c.param_count() {
        return Err(Error::DimensionMismatch {
            expected: c.param_count(),
            got: theta.len(),
        });
    }
    if g.n() != c.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: c.n_qubits(),
            got: g.n(),
        });
    }
    let mut state = init_zero_state(c.n_qubits())?;
    for layer in c.layers() {
        match layer {
            Layer::Phase { param_index } => state.apply_phase_layer(theta.0[*param_index]),
            Layer::Mixer {
                vertices,
                param_index,
            } => {
                let beta = theta.0[*param_index];
                for &v in vertices {
                    let gate = MixerGate::new(v, g.neighbors(v).to_vec(), beta);
                    state.apply_mixer_with_phase(&gate, opts.mixer_phase_exact)?;
                }
            }
        }
    }
    let expectation = state.expectation_hc();
    Ok((state, expectation))
}

/// Central finite-difference gradient of the expectation with respect to the
/// selected parameter indices.
pub fn gradient(
    c: &Circuit,
    theta: &ParameterVector,
    g: &Graph,
    indices: &[usize],
    h: f64,
) -> Result<Vec<f64>> {
    gradient_with(c, theta, g, indices, h, EvalOptions::default())
}

/// [`gradient`] with explicit options.
pub fn gradient_with(
    c: &Circuit,
    theta: &ParameterVector,
    g: &Graph,
    indices: &[usize],
    h: f64,
    opts: EvalOptions,
) -> Result<Vec<f64>> {
    let mut grad = Vec::with_capacity(indices.len());
    let mut shifted = theta.clone();
    for &j in indices {
        if j >= theta.len() {
            return Err(Error::DimensionMismatch {
                expected: theta.len(),
                got: j + 1,
            });
        }
        shifted.0[j] = theta.0[j] + h;
        let (_, f_plus) = evaluate_with(c, &shifted, g, opts)?;
        shifted.0[j] = theta.0[j] - h;
        let (_, f_minus) = evaluate_with(c, &shifted, g, opts)?;
        shifted.0[j] = theta.0[j];
        grad.push((f_plus - f_minus) / (2.0 * h));
    }
    Ok(grad)
}

/// Circuit depth under the linear model: each phase layer contributes
/// `phase_layer_depth`, a mixer layer with m vertices contributes
/// `depth_per_mixer * m`.
pub fn circuit_depth(c: &Circuit, model: &ResourceModel) -> u64 {
    c.layers()
        .iter()
        .map(|l| match l {
            Layer::Phase { .. } => model.phase_layer_depth,
            Layer::Mixer { vertices, .. } => model.depth_per_mixer * vertices.len() as u64,
        })
        .sum()
}

/// Total CNOTs to decompose every mixer occurrence; phase layers are free.
pub fn cnot_count(c: &Circuit, g: &Graph, model: &ResourceModel) -> u64 {
    c.layers()
        .iter()
        .map(|l| match l {
            Layer::Phase { .. } => 0,
            Layer::Mixer { vertices, .. } => vertices
                .iter()
                .map(|&v| model.cnot_cost(g.degree(v)))
                .sum(),
        })
        .sum()
}
