//! Integer primality and factorization helpers.
//!
//! Deterministic Miller-Rabin for u64, Pollard-Brent rho with a fixed seed
//! schedule for composites, and small wrappers used by the rest of the
//! crate. Everything here is exact; no probabilistic answers escape.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Deterministic Miller-Rabin. The base set covers all of u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Pollard-Brent rho. Returns a nontrivial factor of composite odd n.
fn pollard_brent(n: u64) -> u64 {
    debug_assert!(n > 3 && !is_prime_u64(n) && n % 2 == 1);
    // Fixed increment schedule keeps the whole pipeline deterministic.
    for c in 1u64..64 {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut ys = x;
        let (mut q, mut g, m) = (1u64, 1u64, 128u64);
        let mut r = 1u64;
        let mut y = x;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod_u64(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            g = 1;
            while g == 1 {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("rho exhausted its increment schedule on {n}");
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Full factorization of n >= 1 as prime -> exponent, ascending.
pub fn factor_u64(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    if n <= 1 {
        return out;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(v) = stack.pop() {
        if v == 1 {
            continue;
        }
        if is_prime_u64(v) {
            *out.entry(v).or_insert(0) += 1;
        } else if let Some(r) = exact_square_root(v) {
            stack.push(r);
            stack.push(r);
        } else {
            let d = pollard_brent(v);
            stack.push(d);
            stack.push(v / d);
        }
    }
    out
}

fn exact_square_root(n: u64) -> Option<u64> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// Factor a BigUint whose prime factors must each fit in u64.
///
/// `bound` caps the amount of work: composites above bound^2 that resist
/// u64-scale splitting are reported as an error rather than looping.
pub fn factor_biguint(n: &BigUint, bound: u64) -> Result<BTreeMap<u64, u32>, FactorError> {
    let mut out = BTreeMap::new();
    let mut rem = n.clone();
    if rem.is_zero() {
        return Err(FactorError::Zero);
    }
    for p in 2u64..1000 {
        if !is_prime_u64(p) {
            continue;
        }
        let pb = BigUint::from(p);
        while (&rem % &pb).is_zero() {
            *out.entry(p).or_insert(0) += 1;
            rem /= &pb;
        }
        if rem.is_one() {
            return Ok(out);
        }
    }
    // Whatever is left must fit in u64 for rho to finish the job.
    match rem.to_u64() {
        Some(v) => {
            for (p, e) in factor_u64(v) {
                *out.entry(p).or_insert(0) += e;
            }
            Ok(out)
        }
        None => Err(FactorError::ExceedsBudget {
            remaining_bits: rem.bits(),
            bound,
        }),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FactorError {
    #[error("cannot factor zero")]
    Zero,
    #[error("cofactor of {remaining_bits} bits exceeds the factoring budget (bound {bound})")]
    ExceedsBudget { remaining_bits: u64, bound: u64 },
}

/// Divisors of n in ascending order. Intended for small n (class numbers).
pub fn divisors_u64(n: u64) -> Vec<u64> {
    let f = factor_u64(n);
    let mut out = vec![1u64];
    for (p, e) in f {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_carmichael() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(43));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
    }

    #[test]
    fn factor_refolds() {
        for n in [1u64, 2, 12, 360, 1_299_709 * 15_485_863, 2u64.pow(40) + 15] {
            let f = factor_u64(n);
            let refold: u64 = f.iter().map(|(p, e)| p.pow(*e)).product();
            if n == 1 {
                assert!(f.is_empty());
            } else {
                assert_eq!(refold, n);
                assert!(f.keys().all(|&p| is_prime_u64(p)));
            }
        }
    }

    #[test]
    fn factor_biguint_large_semiprime() {
        let a = BigUint::from(1_000_000_007u64);
        let b = BigUint::from(998_244_353u64);
        let f = factor_biguint(&(a * b), 1 << 40).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[&998_244_353], 1);
        assert_eq!(f[&1_000_000_007], 1);
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors_u64(1), vec![1]);
        assert_eq!(divisors_u64(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors_u64(48).len(), 10);
    }
}
