//! End-to-end exercise of the m = 43 decision surface: class orders,
//! norm-equation certificates through the twist search, and the main
//! split rule. Run with --release.

use cubisym_core::algebra::{
    decide_main, solve_norm_equation, FieldContext, Solvable, Verdict,
};
use cubisym_core::budget::Budgets;
use cubisym_core::eisenstein::EisensteinInt;
use std::time::Instant;

fn main() {
    let budgets = Budgets::quick();
    let t0 = Instant::now();
    let ctx = FieldContext::new(43, &budgets).unwrap();
    eprintln!(
        "[{:8.2?}] class group: h = {}, divisors = {:?}, {:?}",
        t0.elapsed(),
        ctx.class_group.h,
        ctx.class_group.divisors,
        ctx.class_group.certainty
    );

    for p in [23u64, 11] {
        let t = Instant::now();
        let co = ctx.class_order_of_rational_prime(p, &budgets).unwrap();
        eprintln!(
            "[{:8.2?}] h_{p} = {} ({:?}), refuted: {:?}",
            t.elapsed(),
            co.order,
            co.certainty,
            co.refuted
        );
    }

    let cases: [(i64, bool); 6] = [
        (23i64.pow(12), true),
        (23i64.pow(3), true),
        (23 * 23, false),
        (23, false),
        (11, true),
        (121, true),
    ];
    for (t, expect) in cases {
        let t1 = Instant::now();
        let r = solve_norm_equation(&ctx, &EisensteinInt::new(t, 0), false, &budgets).unwrap();
        let got = r.solvable == Solvable::Yes;
        eprintln!(
            "[{:8.2?}] target {t}: {:?} beta: {} unit: {:?}",
            t1.elapsed(),
            r.solvable,
            r.beta.is_some(),
            r.unit
        );
        for line in &r.trace {
            eprintln!("           | {line}");
        }
        assert_eq!(got, expect, "target {t}");
        if expect {
            assert!(r.beta.is_some(), "solvable target {t} must carry a certificate");
        }
    }

    for (p, want) in [(23u64, Verdict::Split), (11, Verdict::Split), (13, Verdict::Division)] {
        let t1 = Instant::now();
        let d = decide_main(&ctx, p, &budgets).unwrap();
        eprintln!(
            "[{:8.2?}] decide_main({p}): {:?} rule {:?} exponent {} cert {}",
            t1.elapsed(),
            d.verdict,
            d.rule,
            d.exponent,
            d.certificate.is_some()
        );
        assert_eq!(d.verdict, want);
        if want == Verdict::Split {
            assert!(d.certificate.is_some());
        }
    }
    eprintln!("[{:8.2?}] all m = 43 checks passed", t0.elapsed());
}
