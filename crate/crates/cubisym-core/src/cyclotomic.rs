//! Decomposition shapes of rational primes in Q(zeta_l) and in the Kummer
//! extension Q(zeta_l, a^(1/l)), for an odd prime l.
//!
//! In Q(zeta_l) an unramified prime p has residue degree f = ord_l(p) and
//! splits into r = (l-1)/f primes. Going up to the Kummer extension, each
//! prime P above p is governed by the l-th power residue character of the
//! radicand a in the residue field of P: value zero means totally ramified
//! (e = l), value one means P splits into l primes, any other l-th root of
//! unity means P stays inert with residue degree multiplied by l.
//!
//! For a rational radicand the character collapses: when f > 1 the only
//! l-th root of unity inside F_p is 1, so the character is trivial and P
//! always splits. Only the f = 1 case can produce inert behaviour.

use crate::arith::{is_prime_u64, pow_mod_u64};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CyclotomicShape {
    pub l: u64,
    pub p: u64,
    /// Ramification index (l-1 exactly when p = l, else 1).
    pub e: u64,
    /// Residue degree ord_l(p) (1 when p = l).
    pub f: u64,
    /// Number of primes above p.
    pub r: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KummerCase {
    /// p divides the radicand: each P ramifies totally, e = l.
    Ramified,
    /// Character nontrivial: each P stays prime with residue degree f*l.
    Inert,
    /// Character trivial: each P splits into l primes.
    Split,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KummerShape {
    pub base: CyclotomicShape,
    pub case: KummerCase,
    /// (e, f) of each prime of Q(zeta_l, a^(1/l)) above p, repeated per prime.
    pub primes: Vec<(u64, u64)>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ShapeError {
    #[error("{0} is not an odd prime")]
    BadDegree(u64),
    #[error("{0} is not prime")]
    BadPrime(u64),
    #[error("p = l is ramified in the cyclotomic field; the Kummer step is undefined here")]
    RamifiedBase,
    #[error("radicand is zero")]
    ZeroRadicand,
}

/// Multiplicative order of p modulo l.
fn ord_mod(p: u64, l: u64) -> u64 {
    let base = p % l;
    debug_assert!(base != 0);
    let mut acc = base;
    let mut k = 1;
    while acc != 1 {
        acc = acc * base % l;
        k += 1;
        debug_assert!(k <= l);
    }
    k
}

/// Shape of p in Q(zeta_l).
pub fn decomposition_shape(l: u64, p: u64) -> Result<CyclotomicShape, ShapeError> {
    if l < 3 || !is_prime_u64(l) {
        return Err(ShapeError::BadDegree(l));
    }
    if !is_prime_u64(p) {
        return Err(ShapeError::BadPrime(p));
    }
    if p == l {
        return Ok(CyclotomicShape { l, p, e: l - 1, f: 1, r: 1 });
    }
    let f = ord_mod(p, l);
    Ok(CyclotomicShape { l, p, e: 1, f, r: (l - 1) / f })
}

/// Shape of p in the degree l*(l-1) field Q(zeta_l, a^(1/l)), for a
/// rational radicand a and p != l.
pub fn kummer_shape(l: u64, p: u64, a: i64) -> Result<KummerShape, ShapeError> {
    let base = decomposition_shape(l, p)?;
    if p == l {
        return Err(ShapeError::RamifiedBase);
    }
    if a == 0 {
        return Err(ShapeError::ZeroRadicand);
    }
    let a_mod = a.rem_euclid(p as i64) as u64;
    let case = if a_mod == 0 {
        KummerCase::Ramified
    } else if base.f > 1 {
        // the character lands in mu_l intersect F_p = {1}
        KummerCase::Split
    } else {
        // f = 1: p = 1 mod l, the character is a^((p-1)/l) in F_p
        let c = pow_mod_u64(a_mod, (p - 1) / l, p);
        if c == 1 {
            KummerCase::Split
        } else {
            KummerCase::Inert
        }
    };
    let per_base_prime: Vec<(u64, u64)> = match case {
        KummerCase::Ramified => vec![(l, base.f)],
        KummerCase::Inert => vec![(1, base.f * l)],
        KummerCase::Split => vec![(1, base.f); l as usize],
    };
    let mut primes = Vec::new();
    for _ in 0..base.r {
        primes.extend(per_base_prime.iter().copied());
    }
    let total: u64 = primes.iter().map(|(e, f)| e * f).sum();
    debug_assert_eq!(total, l * (l - 1), "sum of e*f must be the field degree");
    Ok(KummerShape { base, case, primes })
}
