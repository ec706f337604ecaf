//! Times a class group computation from the command line.
//!
//!    cargo run --release -p cubisym-core --example profile_classgroup -- 43

use cubisym_core::{Budgets, ClassGroup, NumberFieldOrder};
use std::time::Instant;

fn main() {
    let m: i64 = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "11".into())
        .parse()
        .expect("radicand");
    let order = NumberFieldOrder::new(m).expect("order");
    eprintln!("m = {m}, disc = {}", order.disc);
    let budgets = Budgets::quick();
    let t = Instant::now();
    match ClassGroup::compute(&order, &budgets) {
        Ok(cg) => {
            eprintln!(
                "h = {}, divisors = {:?}, certainty = {:?}, rounds = {}, fb = {} ideals (p <= {}), {:.2}s",
                cg.h,
                cg.divisors,
                cg.certainty,
                cg.rounds_used,
                cg.factor_base.len(),
                cg.fb_prime_bound,
                t.elapsed().as_secs_f64()
            );
        }
        Err(e) => eprintln!("failed after {:.2}s: {e}", t.elapsed().as_secs_f64()),
    }
}
