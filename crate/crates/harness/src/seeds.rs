//! Stable per-cell seeds.

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(state: u64, bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(state, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// SplitMix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the split used by every cell on `graph_id` at the given fraction
/// slot. Filters and methods share it so their results pair up.
pub fn cell_seed(global: u64, graph_id: &str, fraction_index: usize) -> u64 {
    let mut h = fnv1a(FNV_OFFSET, &global.to_le_bytes());
    h = fnv1a(h, graph_id.as_bytes());
    h = fnv1a(h, &[0xff]);
    h = fnv1a(h, &(fraction_index as u64).to_le_bytes());
    mix(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(cell_seed(1, "g", 0), cell_seed(1, "g", 0));
        assert_ne!(cell_seed(1, "g", 0), cell_seed(1, "g", 1));
        assert_ne!(cell_seed(1, "g", 0), cell_seed(2, "g", 0));
        assert_ne!(cell_seed(1, "g1", 0), cell_seed(1, "g", 10));
    }
}
