//! Work budgets.
//!
//! Every potentially long-running routine takes explicit caps instead of
//! wall-clock deadlines, so equal inputs and budgets always produce equal
//! outputs. Exceeding a cap yields an `Indeterminate`-style error upstream,
//! never a silent wrong answer.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    /// Largest cofactor (as a bit bound proxy) the integer factorizer will chase.
    pub factor_bound: u64,
    /// Node cap for a single Fincke-Pohst enumeration tree.
    pub enum_node_cap: u64,
    /// Cap on short vectors harvested per ideal while sieving relations.
    pub harvest_vectors_per_ideal: u64,
    /// Cap on relation rounds before the class group gives up.
    pub relation_rounds: u32,
    /// Binary digits of interval precision for embeddings and logs.
    pub precision_bits: u32,
    /// Exponent range searched when adjusting a norm certificate by units.
    pub unit_adjust_range: i32,
    /// Rational prime bound for the class group factor base; 0 picks a
    /// bound from the field discriminant.
    pub fb_prime_bound: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            factor_bound: 1 << 62,
            enum_node_cap: 1_500_000_000,
            harvest_vectors_per_ideal: 4_000,
            relation_rounds: 40,
            precision_bits: 128,
            unit_adjust_range: 3,
            fb_prime_bound: 0,
        }
    }
}

impl Budgets {
    /// A reduced budget for quick interactive queries and unit tests.
    pub fn quick() -> Self {
        Budgets {
            enum_node_cap: 20_000_000,
            harvest_vectors_per_ideal: 800,
            relation_rounds: 12,
            ..Budgets::default()
        }
    }
}
