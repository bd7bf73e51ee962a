//! Dense statevector kernel: zero-state initialization, the two gate kinds
//! (per-qubit phase layer, open-controlled Rx mixer), expectation of the
//! selected-vertex-count Hamiltonian and feasible-support checks.
//!
//! Bit convention: qubit `v` is bit `v` of the basis index (little-endian),
//! matching [`crate::graphs::Assignment`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graphs::{is_independent, Assignment, Graph};

/// Dense-amplitude guard: 2^26 complex doubles is ~1 GiB.
pub const MAX_QUBITS: usize = 26;

/// An open-controlled Rx(2*beta) on `target`: the rotation acts only on basis
/// states where every control qubit is 0, identity elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct MixerGate {
    pub target: usize,
    /// Sorted control qubits; the gate fires when all of them read 0.
    pub open_controls: Vec<usize>,
    /// Half rotation angle: the applied 2x2 block is
    /// [[cos b, -i sin b], [-i sin b, cos b]].
    pub beta: f64,
}

impl MixerGate {
    pub fn new(target: usize, mut open_controls: Vec<usize>, beta: f64) -> Self {
        open_controls.sort_unstable();
        MixerGate {
            target,
            open_controls,
            beta,
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.target >= n_qubits {
            return Err(Error::QubitOutOfRange {
                index: self.target,
                n_qubits,
            });
        }
        for &c in &self.open_controls {
            if c >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: c,
                    n_qubits,
                });
            }
            if c == self.target {
                return Err(Error::invalid_config(
                    "mixer",
                    format!("target {c} cannot also be a control"),
                ));
            }
        }
        Ok(())
    }
}

/// 2^n complex amplitudes over the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

/// |0...0>: amplitude 1 at index 0.
pub fn init_zero_state(n: usize) -> Result<StateVector> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::StateTooLarge { n, max: MAX_QUBITS });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = Complex64::new(1.0, 0.0);
    Ok(StateVector { n_qubits: n, amps })
}

impl StateVector {
    /// Wraps raw amplitudes; the length must be a power of two within the
    /// qubit guard and the norm must already be 1 (within 1e-9).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<StateVector> {
        let n = amps.len().trailing_zeros() as usize;
        if n == 0 || n > MAX_QUBITS || amps.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n.clamp(1, MAX_QUBITS),
                got: amps.len(),
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-9 {
            return Err(Error::invalid_config(
                "state.amplitudes",
                format!("norm^2 must be 1, got {norm_sqr}"),
            ));
        }
        Ok(StateVector { n_qubits: n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies each basis amplitude by `e^{i*gamma*popcount(x)}`: the
    /// product of per-qubit phase rotations, up to a global phase chosen so
    /// the |0...0> amplitude stays untouched.
    pub fn apply_phase_layer(&mut self, gamma: f64) {
        let phases: Vec<Complex64> = (0..=self.n_qubits)
            .map(|k| Complex64::from_polar(1.0, gamma * k as f64))
            .collect();
        for (idx, amp) in self.amps.iter_mut().enumerate() {
            *amp *= phases[idx.count_ones() as usize];
        }
    }

    /// Applies an open-controlled Rx(2*beta) as the plain controlled rotation:
    /// basis pairs with all controls at 0 get the 2x2 block, everything else
    /// is left alone.
    pub fn apply_mixer(&mut self, gate: &MixerGate) -> Result<()> {
        self.apply_mixer_with_phase(gate, false)
    }

    /// Like [`apply_mixer`](Self::apply_mixer), but when `exact_phase` is set
    /// the blocked subspace (any control at 1) additionally picks up the
    /// `e^{-i*beta}` factor of the exact mixer exponential, whose identity
    /// branch contributes that phase.
    pub fn apply_mixer_with_phase(&mut self, gate: &MixerGate, exact_phase: bool) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let target_bit = 1usize << gate.target;
        let control_mask: usize = gate.open_controls.iter().map(|&c| 1usize << c).sum();
        let cos_b = gate.beta.cos();
        let m_isin_b = Complex64::new(0.0, -gate.beta.sin());
        let blocked_phase = Complex64::from_polar(1.0, -gate.beta);
        for idx in 0..self.amps.len() {
            if idx & target_bit != 0 {
                continue;
            }
            let partner = idx | target_bit;
            if idx & control_mask == 0 {
                let a0 = self.amps[idx];
                let a1 = self.amps[partner];
                self.amps[idx] = cos_b * a0 + m_isin_b * a1;
                self.amps[partner] = m_isin_b * a0 + cos_b * a1;
            } else if exact_phase {
                self.amps[idx] *= blocked_phase;
                self.amps[partner] *= blocked_phase;
            }
        }
        Ok(())
    }

    /// Expectation of the target Hamiltonian: `-sum_x |amp(x)|^2 popcount(x)`,
    /// i.e. minus the expected number of selected vertices. Always in [-n, 0].
    pub fn expectation_hc(&self) -> f64 {
        -self
            .amps
            .iter()
            .enumerate()
            .map(|(idx, amp)| amp.norm_sqr() * f64::from(idx.count_ones()))
            .sum::<f64>()
    }

    /// True iff every basis state carrying probability above `tol` encodes an
    /// independent set of `g`.
    pub fn support_is_feasible(&self, g: &Graph, tol: f64) -> Result<bool> {
        if self.n_qubits != g.n() {
            return Err(Error::DimensionMismatch {
                expected: g.n(),
                got: self.n_qubits,
            });
        }
        for (idx, amp) in self.amps.iter().enumerate() {
            if amp.norm_sqr() > tol {
                let x = Assignment::new(self.n_qubits, idx as u64);
                if !is_independent(g, &x)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Measurement distribution, sorted by descending probability (ties by
    /// ascending basis index). Zero-probability entries are dropped.
    pub fn basis_probabilities(&self) -> Vec<(Assignment, f64)> {
        let mut probs: Vec<(Assignment, f64)> = self
            .amps
            .iter()
            .enumerate()
            .filter(|(_, amp)| amp.norm_sqr() > 0.0)
            .map(|(idx, amp)| (Assignment::new(self.n_qubits, idx as u64), amp.norm_sqr()))
            .collect();
        probs.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap()
                .then_with(|| a.0.bits().cmp(&b.0.bits()))
        });
        probs
    }

    /// Debug dump: one `bitstring re im` line per basis state, qubit 0 first
    /// in the bitstring. Guarded to small registers.
    pub fn dump(&self) -> Result<String> {
        if self.n_qubits > 10 {
            return Err(Error::StateTooLarge {
                n: self.n_qubits,
                max: 10,
            });
        }
        let mut out = String::new();
        for (idx, amp) in self.amps.iter().enumerate() {
            let x = Assignment::new(self.n_qubits, idx as u64);
            out.push_str(&format!("{x} {:.12} {:.12}\n", amp.re, amp.im));
        }
        Ok(out)
    }
}
