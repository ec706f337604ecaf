//! Univariate polynomial arithmetic and factorization over F_p.
//!
//! Degrees here stay tiny (at most a few dozen), so the textbook chain
//! squarefree decomposition -> distinct-degree -> equal-degree splitting
//! is plenty. Equal-degree splitting draws candidates from a fixed-seed
//! generator, making factorizations reproducible run to run; the output
//! order is normalized by (degree, coefficients) regardless.

use crate::arith::{mul_mod_u64, pow_mod_u64};
use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Dense polynomial over F_p, lowest coefficient first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct FpPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly(mod {}: {:?})", self.p, self.c)
    }
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: vec![] }
    }

    pub fn one(p: u64) -> Self {
        FpPoly { p, c: vec![1] }
    }

    pub fn x(p: u64) -> Self {
        FpPoly { p, c: vec![0, 1] }
    }

    pub fn constant(p: u64, a: u64) -> Self {
        Self::new(p, vec![a])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree; zero polynomial reports as usize::MAX sentinel avoided by
    /// returning None.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn lead(&self) -> u64 {
        *self.c.last().expect("leading coeff of zero polynomial")
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.p;
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n)
            .map(|i| {
                (self.c.get(i).copied().unwrap_or(0) + rhs.c.get(i).copied().unwrap_or(0)) % p
            })
            .collect();
        Self::new(p, c)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.p;
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n)
            .map(|i| {
                (self.c.get(i).copied().unwrap_or(0) + p
                    - rhs.c.get(i).copied().unwrap_or(0) % p)
                    % p
            })
            .collect();
        Self::new(p, c)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut c = vec![0u64; self.c.len() + rhs.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod_u64(a, b, p)) % p;
            }
        }
        Self::new(p, c)
    }

    pub fn scale(&self, s: u64) -> Self {
        Self::new(self.p, self.c.iter().map(|&a| mul_mod_u64(a, s, self.p)).collect())
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = pow_mod_u64(self.lead(), self.p - 2, self.p);
        self.scale(inv)
    }

    /// Quotient and remainder; rhs nonzero.
    pub fn divmod(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        let p = self.p;
        if self.degree() < rhs.degree() {
            return (Self::zero(p), self.clone());
        }
        let dlead_inv = pow_mod_u64(rhs.lead(), p - 2, p);
        let mut rem = self.c.clone();
        let dq = self.c.len() - rhs.c.len();
        let mut q = vec![0u64; dq + 1];
        for k in (0..=dq).rev() {
            let top = rem[k + rhs.c.len() - 1];
            if top == 0 {
                continue;
            }
            let f = mul_mod_u64(top, dlead_inv, p);
            q[k] = f;
            for (j, &b) in rhs.c.iter().enumerate() {
                let sub = mul_mod_u64(f, b, p);
                rem[k + j] = (rem[k + j] + p - sub) % p;
            }
        }
        (Self::new(p, q), Self::new(p, rem))
    }

    pub fn rem(&self, rhs: &Self) -> Self {
        self.divmod(rhs).1
    }

    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.make_monic()
        }
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mul_mod_u64(i as u64 % p, a, p))
            .collect();
        Self::new(p, c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.c.iter().rev().fold(0u64, |acc, &a| (mul_mod_u64(acc, x, p) + a) % p)
    }

    /// self^e mod modulus, e a BigUint (Frobenius exponents overflow u64).
    pub fn pow_mod(&self, e: &BigUint, modulus: &Self) -> Self {
        let mut acc = Self::one(self.p);
        let mut base = self.rem(modulus);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(modulus);
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// Deterministic-order complete factorization into monic irreducibles
    /// with multiplicities; the scalar leading coefficient is dropped.
    pub fn factor(&self) -> Vec<(FpPoly, u32)> {
        assert!(!self.is_zero(), "cannot factor zero");
        let monic = self.make_monic();
        if monic.deg() == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        for (sf, mult) in squarefree_decomposition(&monic) {
            for (d, prod) in distinct_degree(&sf) {
                for irr in equal_degree_split(&prod, d) {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by(|(a, _), (b, _)| a.c.len().cmp(&b.c.len()).then_with(|| {
            a.c.iter().rev().cmp(b.c.iter().rev())
        }));
        out
    }

    /// Degree pattern of the factorization, e.g. [(2, 3)] for three
    /// quadratic factors (with multiplicity folded in).
    pub fn factor_degrees(&self) -> Vec<(usize, u32)> {
        let mut v: Vec<(usize, u32)> = Vec::new();
        for (g, e) in self.factor() {
            v.push((g.deg(), e));
        }
        v.sort_unstable();
        v
    }

    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(1) => true,
            Some(_) => {
                let f = self.factor();
                f.len() == 1 && f[0].1 == 1
            }
        }
    }
}

/// Char-p squarefree decomposition: list of (squarefree factor, multiplicity).
fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    let deriv = f.derivative();
    if deriv.is_zero() {
        // f = g(x^p) = g(x)^p
        let root = pth_root(f);
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&deriv);
    let mut w = f.divmod(&c).0.make_monic();
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.divmod(&y).0.make_monic();
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.divmod(&w).0.make_monic();
    }
    if !c.is_one() {
        let root = pth_root(&c);
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// p-th root of a polynomial in x^p: coefficients at multiples of p
/// (a^p = a in F_p).
fn pth_root(f: &FpPoly) -> FpPoly {
    let p = f.p as usize;
    let c = f.c.iter().copied().step_by(p).collect();
    FpPoly::new(f.p, c)
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// list of (d, product of all irreducible factors of degree d).
fn distinct_degree(f: &FpPoly) -> Vec<(usize, FpPoly)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut frob = FpPoly::x(p); // x^(p^d) mod f, starting d = 0
    let mut d = 0usize;
    while rest.deg() >= 1 {
        d += 1;
        if 2 * d > rest.deg() {
            // remainder is irreducible
            out.push((rest.deg(), rest.clone()));
            break;
        }
        frob = frob.pow_mod(&BigUint::from(p), &rest);
        let g = frob.sub(&FpPoly::x(p)).gcd(&rest);
        if g.deg() > 0 {
            out.push((d, g.clone()));
            rest = rest.divmod(&g).0.make_monic();
            frob = frob.rem(&rest);
        }
    }
    out
}

/// Split a product of distinct irreducibles, all of degree d, into its
/// factors (Cantor-Zassenhaus, fixed seed).
fn equal_degree_split(f: &FpPoly, d: usize) -> Vec<FpPoly> {
    if f.deg() == d {
        return vec![f.make_monic()];
    }
    let p = f.p;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (p.wrapping_mul(31)) ^ d as u64);
    loop {
        let h = FpPoly::new(
            p,
            (0..f.deg()).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>(),
        );
        if h.degree().is_none() || h.deg() == 0 {
            continue;
        }
        let g = if p == 2 {
            // additive trace: h + h^2 + h^4 + ... + h^(2^(d-1))
            let mut t = h.clone();
            let mut acc = h.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc.gcd(f)
        } else {
            // h^((p^d - 1)/2) - 1 kills half the factors
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            h.pow_mod(&e, f).sub(&FpPoly::one(p)).gcd(f)
        };
        if g.deg() > 0 && g.deg() < f.deg() {
            let rest = f.divmod(&g).0.make_monic();
            let mut out = equal_degree_split(&g, d);
            out.extend(equal_degree_split(&rest, d));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_basics() {
        let p = 7;
        let a = FpPoly::new(p, vec![1, 2, 3]);
        let b = FpPoly::new(p, vec![5, 1]);
        let (q, r) = a.divmod(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
        assert_eq!(a.eval(2), (1 + 4 + 12) % 7);
    }

    #[test]
    fn cyclotomic_quadratic_mod_seven() {
        // t^2+t+1 has roots 2 and 4 mod 7
        let f = FpPoly::new(7, vec![1, 1, 1]);
        let factors = f.factor();
        assert_eq!(factors.len(), 2);
        for (g, e) in &factors {
            assert_eq!(*e, 1);
            assert_eq!(g.deg(), 1);
            // root is p - c0
            let root = (7 - g.c[0]) % 7;
            assert_eq!(f.eval(root), 0);
        }
        // and stays irreducible mod 5 (5 = 2 mod 3)
        let f5 = FpPoly::new(5, vec![1, 1, 1]);
        assert!(f5.is_irreducible());
    }

    #[test]
    fn factor_refold_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for &p in &[2u64, 3, 5, 13, 101] {
            for _ in 0..40 {
                let deg = rng.gen_range(1..9);
                let mut c: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
                *c.last_mut().unwrap() = 1 + rng.gen_range(0..p - 1).min(p - 2);
                let f = FpPoly::new(p, c);
                if f.is_zero() || f.deg() == 0 {
                    continue;
                }
                let factors = f.factor();
                let mut refold = FpPoly::constant(p, f.lead());
                for (g, e) in &factors {
                    assert!(g.is_irreducible());
                    for _ in 0..*e {
                        refold = refold.mul(g);
                    }
                }
                assert_eq!(refold, f, "refold mod {p}");
            }
        }
    }

    #[test]
    fn seventh_cyclotomic_mod_two() {
        // ord_7(2) = 3: x^6+...+1 factors into two cubics mod 2
        let f = FpPoly::new(2, vec![1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(f.factor_degrees(), vec![(3, 1), (3, 1)]);
    }

    #[test]
    fn repeated_factors() {
        let p = 5;
        let g = FpPoly::new(p, vec![1, 1]); // x+1
        let h = FpPoly::new(p, vec![2, 1]); // x+2
        let f = g.mul(&g).mul(&g).mul(&h).mul(&h);
        let factors = f.factor();
        assert_eq!(factors, vec![(g, 3), (h, 2)]);
    }

    #[test]
    fn pth_power_squarefree_decomposition() {
        // (x+1)^3 mod 3 = x^3 + 1 has zero derivative
        let p = 3;
        let f = FpPoly::new(p, vec![1, 0, 0, 1]);
        let factors = f.factor();
        assert_eq!(factors, vec![(FpPoly::new(p, vec![1, 1]), 3)]);
    }

    #[test]
    fn frobenius_pow_mod() {
        let p = 13;
        let f = FpPoly::new(p, vec![2, 0, 1]); // x^2 + 2
        let xp = FpPoly::x(p).pow_mod(&BigUint::from(p * p), &f);
        // x^(p^2) = x mod f for any f dividing x^(p^2) - x... here f is
        // irreducible iff -2 is a nonresidue mod 13; 11^6 mod 13 = 12, so yes
        assert!(f.is_irreducible());
        assert_eq!(xp, FpPoly::x(p));
    }
}
