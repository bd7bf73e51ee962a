//! Deterministic 64-bit seed derivation.
//!
//! Every random choice in the crate flows from an explicit seed. Campaign
//! cells, per-run RNGs and the internal sub-streams of a single run all derive
//! their seeds from a parent seed plus a tag, so results are reproducible
//! across platforms and independent of execution order.

/// SplitMix64 finalizer. Good avalanche, stable forever.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds one component into a running seed.
#[inline]
pub fn mix(seed: u64, value: u64) -> u64 {
    splitmix64(seed ^ splitmix64(value))
}

/// FNV-1a over the bytes of a string, for tagging sub-streams by name.
#[inline]
pub fn hash_str(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Derives a child seed from a parent seed, a textual tag and numeric parts.
pub fn derive(parent: u64, tag: &str, parts: &[u64]) -> u64 {
    let mut h = mix(parent, hash_str(tag));
    for &p in parts {
        h = mix(h, p);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_is_deterministic() {
        let a = derive(42, "run", &[3, 7]);
        let b = derive(42, "run", &[3, 7]);
        assert_eq!(a, b);
    }

    #[test]
    fn derive_separates_tags_and_parts() {
        let base = derive(42, "run", &[3, 7]);
        assert_ne!(base, derive(42, "graph", &[3, 7]));
        assert_ne!(base, derive(42, "run", &[7, 3]));
        assert_ne!(base, derive(43, "run", &[3, 7]));
    }

    #[test]
    fn distinct_tuples_do_not_collide() {
        // Collision-freedom over a campaign-sized set of derivation tuples.
        let mut seen = std::collections::HashSet::new();
        for graph in 0..40u64 {
            for algo in 0..4u64 {
                for p in 0..7u64 {
                    for run in 0..100u64 {
                        assert!(seen.insert(derive(7, "run", &[graph, algo, p, run])));
                    }
                }
            }
        }
    }
}
