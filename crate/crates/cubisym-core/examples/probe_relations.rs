//! Dev probe: dump the m=43 class group to disk and report the size of
//! the HNF transform entries, which drive generator reassembly cost.

use cubisym_core::budget::Budgets;
use cubisym_core::classgrp::ClassGroup;
use cubisym_core::kummer::NumberFieldOrder;
use std::time::Instant;

fn main() {
    let m: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(43);
    let order = NumberFieldOrder::new(m).unwrap();
    let budgets = Budgets::quick();
    let t0 = Instant::now();
    let path = format!("/root/cg{m}.json");
    let cg: ClassGroup = match std::fs::read_to_string(&path) {
        Ok(s) => {
            let cg = serde_json::from_str(&s).unwrap();
            println!("[{:8.2?}] loaded {path}", t0.elapsed());
            cg
        }
        Err(_) => {
            let cg = ClassGroup::compute(&order, &budgets).unwrap();
            std::fs::write(&path, serde_json::to_string(&cg).unwrap()).unwrap();
            println!("[{:8.2?}] computed and dumped {path}", t0.elapsed());
            cg
        }
    };
    println!(
        "h = {}, divisors = {:?}, fb = {}, certainty = {:?}",
        cg.h,
        cg.divisors,
        cg.factor_base.len(),
        cg.certainty
    );
    cg.debug_transform_stats();

    for p in [23u64, 11, 13] {
        let primes = order.factor_prime(p).unwrap();
        let t1 = Instant::now();
        match cg.class_order_of_prime(&order, &primes[0].0, &budgets) {
            Ok(co) => println!(
                "[{:8.2?}] class order of prime above {p}: {} ({:?})",
                t1.elapsed(),
                co.order,
                co.certainty
            ),
            Err(e) => println!("[{:8.2?}] prime above {p}: {e}", t1.elapsed()),
        }
    }
}
