//! Shared helpers for the benchmark targets.

use cubisym_core::eisenstein::EisensteinInt;

/// Deterministic stream of Eisenstein integers with norms around 2^40,
/// large enough to exercise the factorizer without trivializing it.
pub fn sample_elements(n: usize) -> Vec<EisensteinInt> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let a = (state >> 24) as i64 % 1_000_000;
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let b = (state >> 24) as i64 % 1_000_000;
        let z = EisensteinInt::new(a, b);
        if !z.is_zero() {
            out.push(z);
        }
    }
    out
}
