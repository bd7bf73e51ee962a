//! Shared fixtures for the criterion benchmark targets.

use ama_core::{generate_er, generate_regular, Graph};

/// A seeded Erdos-Renyi instance with edge probability 0.5.
pub fn er_instance(n: usize, seed: u64) -> Graph {
    generate_er(n, 0.5, seed).expect("valid benchmark instance")
}

/// A seeded 3-regular instance.
pub fn regular_instance(n: usize, seed: u64) -> Graph {
    generate_regular(n, 3, seed).expect("valid benchmark instance")
}
