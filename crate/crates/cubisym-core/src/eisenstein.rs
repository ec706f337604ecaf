//! Arithmetic in Z[w], the ring of Eisenstein integers, with w^2 + w + 1 = 0.
//!
//! Elements are written a + b*w with integer a, b. The norm form is
//! a^2 - a*b + b^2, multiplicative and nonnegative. The unit group has the
//! six elements +-1, +-w, +-w^2, and the ring is Euclidean for the norm:
//! rounding each coordinate of an exact quotient to the nearest integer
//! leaves a remainder of norm at most 3/4 of the divisor's.
//!
//! Rational primes behave in exactly three ways here: 3 ramifies as the
//! square of lambda = 1 - w (up to a unit), p = 1 mod 3 splits into a
//! conjugate pair of norm p, and p = 2 mod 3 stays inert with norm p^2.
//!
//! Factorizations are normalized deterministically: every prime divisor
//! coprime to 3 is replaced by its unique associate congruent to 1 mod 3
//! (its primary form), the ramified prime is always reported as 1 - w, and
//! the leftover unit is returned separately.

use crate::arith::{self, FactorError};
use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EisensteinInt {
    pub a: BigInt,
    pub b: BigInt,
}

/// Behaviour of a rational prime in Z[w].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeClass {
    /// p = 3 = -w^2 (1-w)^2.
    Ramified(EisensteinInt),
    /// p = 1 mod 3: pi * conj(pi) with norm(pi) = p.
    Split(EisensteinInt, EisensteinInt),
    /// p = 2 mod 3: p itself is prime of norm p^2.
    Inert(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisFactorization {
    pub unit: EisensteinInt,
    /// (primary prime, exponent), sorted by (norm, a, b).
    pub factors: Vec<(EisensteinInt, u32)>,
}

#[derive(Debug, thiserror::Error)]
pub enum EisensteinError {
    #[error("zero has no factorization or inverse")]
    Zero,
    #[error("element is divisible by 1-w, no primary associate exists")]
    NotCoprimeToLambda,
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("cannot parse {0:?} as a+b*w")]
    Parse(String),
}

impl EisensteinInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        EisensteinInt { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    /// The generator w itself.
    pub fn omega() -> Self {
        Self::new(0, 1)
    }

    /// The ramified prime lambda = 1 - w, with lambda^2 = -3w.
    pub fn lambda() -> Self {
        Self::new(1, -1)
    }

    /// The six units, in the fixed order 1, -1, w, -w, w^2, -w^2.
    pub fn units() -> [Self; 6] {
        [
            Self::new(1, 0),
            Self::new(-1, 0),
            Self::new(0, 1),
            Self::new(0, -1),
            Self::new(-1, -1),
            Self::new(1, 1),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// a^2 - ab + b^2, always >= 0.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn norm_uint(&self) -> BigUint {
        self.norm().to_biguint().expect("norm is nonnegative")
    }

    /// Complex conjugation, the nontrivial automorphism: w -> w^2.
    pub fn conj(&self) -> Self {
        Self::new(&self.a - &self.b, -&self.b)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let ac = &self.a * &rhs.a;
        let bd = &self.b * &rhs.b;
        let ad_bc = &self.a * &rhs.b + &self.b * &rhs.a;
        Self::new(ac - &bd, ad_bc - &bd)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.a, -&self.b)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact division; None when rhs does not divide self.
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let n = rhs.norm();
        let num = self.mul(&rhs.conj());
        let (qa, ra) = num.a.div_rem(&n);
        let (qb, rb) = num.b.div_rem(&n);
        (ra.is_zero() && rb.is_zero()).then(|| Self::new(qa, qb))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// Euclidean division: self = q*rhs + r with norm(r) < norm(rhs).
    ///
    /// q is the coordinatewise nearest-integer rounding of the exact
    /// quotient, ties toward zero; the worst case leaves norm(r) at
    /// 3/4 norm(rhs).
    pub fn divmod(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "division by zero");
        let n = rhs.norm();
        let num = self.mul(&rhs.conj());
        let q = Self::new(round_nearest(&num.a, &n), round_nearest(&num.b, &n));
        let r = self.sub(&q.mul(rhs));
        debug_assert!(r.norm() < rhs.norm());
        (q, r)
    }

    /// Greatest common divisor, returned in canonical associate form.
    pub fn gcd(x: &Self, y: &Self) -> Self {
        let mut a = x.clone();
        let mut b = y.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.canonical_assoc()
        }
    }

    /// Multiplicity of lambda = 1-w in self, with the cofactor.
    pub fn lambda_valuation(&self) -> (u32, Self) {
        assert!(!self.is_zero());
        let lam = Self::lambda();
        let mut v = 0u32;
        let mut z = self.clone();
        while let Some(q) = z.div_exact(&lam) {
            v += 1;
            z = q;
        }
        (v, z)
    }

    /// The unique associate congruent to 1 mod 3, for elements coprime
    /// to lambda.
    pub fn primary(&self) -> Result<Self, EisensteinError> {
        if self.is_zero() {
            return Err(EisensteinError::Zero);
        }
        for u in Self::units() {
            let c = u.mul(self);
            if c.a.mod_floor3() == 1 && c.b.mod_floor3() == 0 {
                return Ok(c);
            }
        }
        Err(EisensteinError::NotCoprimeToLambda)
    }

    /// Canonical representative of the associate class: lambda^v times the
    /// primary form of the part coprime to lambda. Units map to 1, zero to
    /// itself.
    pub fn canonical_assoc(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (v, cof) = self.lambda_valuation();
        let prim = cof.primary().expect("cofactor is coprime to lambda");
        Self::lambda().pow(v as u64).mul(&prim)
    }

    /// Classify p (prime in Z) by its splitting in Z[w]. The split
    /// representative is the first Cornacchia solution of
    /// a^2 - ab + b^2 = p scanning b = 1, 2, ...
    pub fn factor_rational_prime(p: u64) -> PrimeClass {
        assert!(arith::is_prime_u64(p), "{p} is not prime");
        if p == 3 {
            return PrimeClass::Ramified(Self::lambda());
        }
        if p % 3 == 2 {
            return PrimeClass::Inert(p);
        }
        let mut b = 1u64;
        loop {
            let rest = 4 * p - 3 * b * b;
            let s = rest.sqrt();
            if s * s == rest && (b + s) % 2 == 0 {
                let a = (b + s) / 2;
                let pi = Self::new(a as i64, b as i64);
                debug_assert_eq!(pi.norm(), BigInt::from(p));
                return PrimeClass::Split(pi.clone(), pi.conj());
            }
            b += 1;
            assert!(3 * b * b <= 4 * p, "no lattice point found for split prime {p}");
        }
    }

    /// Deterministic factorization into primary primes.
    ///
    /// The rational norm is factored first; each of its prime divisors is
    /// then peeled off according to its splitting type. The refold
    /// identity unit * prod(pi^e) = self is asserted before returning.
    pub fn factor(&self, factor_bound: u64) -> Result<EisFactorization, EisensteinError> {
        if self.is_zero() {
            return Err(EisensteinError::Zero);
        }
        let norm_factors = arith::factor_biguint(&self.norm_uint(), factor_bound)?;
        let mut rem = self.clone();
        let mut factors: Vec<(EisensteinInt, u32)> = Vec::new();
        for (&p, &en) in &norm_factors {
            match Self::factor_rational_prime(p) {
                PrimeClass::Ramified(lam) => {
                    for _ in 0..en {
                        rem = rem.div_exact(&lam).expect("lambda valuation matches norm");
                    }
                    factors.push((lam, en));
                }
                PrimeClass::Inert(p) => {
                    debug_assert_eq!(en % 2, 0);
                    let e = en / 2;
                    let prim = Self::new(p as i64, 0).primary().expect("p coprime to 3");
                    for _ in 0..e {
                        rem = rem.div_exact(&prim).expect("inert valuation matches norm");
                    }
                    factors.push((prim, e));
                }
                PrimeClass::Split(pi, pibar) => {
                    for gen in [pi, pibar] {
                        let prim = gen.primary().expect("split prime coprime to 3");
                        let mut e = 0u32;
                        while let Some(q) = rem.div_exact(&prim) {
                            rem = q;
                            e += 1;
                        }
                        if e > 0 {
                            factors.push((prim, e));
                        }
                    }
                }
            }
        }
        assert!(rem.is_unit(), "leftover {rem} is not a unit");
        factors.sort_by(|(x, _), (y, _)| {
            (x.norm(), &x.a, &x.b).cmp(&(y.norm(), &y.a, &y.b))
        });
        let refold = factors
            .iter()
            .fold(rem.clone(), |acc, (p, e)| acc.mul(&p.pow(*e as u64)));
        assert_eq!(&refold, self, "factorization refold mismatch");
        Ok(EisFactorization { unit: rem, factors })
    }

    /// Multiplicity of the prime pi in self (pi any associate).
    pub fn valuation(&self, pi: &Self) -> u32 {
        assert!(!self.is_zero() && !pi.is_unit() && !pi.is_zero());
        let mut v = 0;
        let mut z = self.clone();
        while let Some(q) = z.div_exact(pi) {
            v += 1;
            z = q;
        }
        v
    }

    pub fn to_rational(&self) -> EisensteinRat {
        EisensteinRat {
            a: BigRational::from(self.a.clone()),
            b: BigRational::from(self.b.clone()),
        }
    }
}

trait ModFloor3 {
    fn mod_floor3(&self) -> u8;
}

impl ModFloor3 for BigInt {
    fn mod_floor3(&self) -> u8 {
        let r: BigInt = self.mod_floor(&BigInt::from(3));
        r.to_u8().unwrap()
    }
}

/// Round n/d (d > 0) to the nearest integer, exact ties toward zero.
fn round_nearest(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d.is_positive());
    let (q, r) = n.div_mod_floor(d);
    // fractional part is r/d with 0 <= r < d
    let twice: BigInt = &r << 1;
    match twice.cmp(d) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            // exact half: take the candidate with smaller absolute value
            let up: BigInt = &q + 1;
            if q.abs() <= up.abs() {
                q
            } else {
                up
            }
        }
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*w", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{}-{}*w", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

impl fmt::Debug for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Eis({self})")
    }
}

impl FromStr for EisensteinInt {
    type Err = EisensteinError;

    /// Accepts sums of terms like "3", "-2*w", "w", "+5w": whitespace is
    /// ignored, '*' between coefficient and w is optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(EisensteinError::Parse(s.to_string()));
        }
        let mut a = BigInt::zero();
        let mut b = BigInt::zero();
        let bytes = compact.as_bytes();
        let mut i = 0usize;
        while i < bytes.len() {
            let sign = match bytes[i] {
                b'+' => {
                    i += 1;
                    1
                }
                b'-' => {
                    i += 1;
                    -1
                }
                _ => 1,
            };
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits = &compact[start..i];
            let has_w =
                i < bytes.len() && (bytes[i] == b'w' || (bytes[i] == b'*' && !digits.is_empty()));
            if has_w {
                if bytes[i] == b'*' {
                    i += 1;
                    if i >= bytes.len() || bytes[i] != b'w' {
                        return Err(EisensteinError::Parse(s.to_string()));
                    }
                }
                i += 1; // consume 'w'
                let coeff = if digits.is_empty() {
                    BigInt::one()
                } else {
                    BigInt::from_str(digits).map_err(|_| EisensteinError::Parse(s.to_string()))?
                };
                b += sign * coeff;
            } else {
                if digits.is_empty() {
                    return Err(EisensteinError::Parse(s.to_string()));
                }
                let coeff =
                    BigInt::from_str(digits).map_err(|_| EisensteinError::Parse(s.to_string()))?;
                a += sign * coeff;
            }
        }
        Ok(Self { a, b })
    }
}

#[derive(Serialize, Deserialize)]
struct EisWire {
    a: String,
    b: String,
}

impl Serialize for EisensteinInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EisWire { a: self.a.to_string(), b: self.b.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EisensteinInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = EisWire::deserialize(d)?;
        Ok(EisensteinInt {
            a: BigInt::from_str(&w.a).map_err(D::Error::custom)?,
            b: BigInt::from_str(&w.b).map_err(D::Error::custom)?,
        })
    }
}

/// Element of Q(w): an Eisenstein number with rational coordinates.
/// Used for relative norms of fractional field elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisensteinRat {
    pub a: BigRational,
    pub b: BigRational,
}

impl EisensteinRat {
    pub fn zero() -> Self {
        EisensteinRat { a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn one() -> Self {
        EisensteinRat { a: BigRational::one(), b: BigRational::zero() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let ac = &self.a * &rhs.a;
        let bd = &self.b * &rhs.b;
        let ad_bc = &self.a * &rhs.b + &self.b * &rhs.a;
        EisensteinRat { a: ac - &bd, b: ad_bc - bd }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        EisensteinRat { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }

    pub fn conj(&self) -> Self {
        EisensteinRat { a: &self.a - &self.b, b: -&self.b }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(EisensteinRat { a: c.a / &n, b: c.b / n })
    }

    pub fn to_integral(&self) -> Option<EisensteinInt> {
        (self.a.is_integer() && self.b.is_integer())
            .then(|| EisensteinInt::new(self.a.to_integer(), self.b.to_integer()))
    }
}

impl From<&EisensteinInt> for EisensteinRat {
    fn from(z: &EisensteinInt) -> Self {
        z.to_rational()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn eis(a: i64, b: i64) -> EisensteinInt {
        EisensteinInt::new(a, b)
    }

    #[test]
    fn ring_identities() {
        let w = EisensteinInt::omega();
        // w^2 + w + 1 = 0
        let zero = w.mul(&w).add(&w).add(&EisensteinInt::one());
        assert!(zero.is_zero());
        // 3 = -w^2 * lambda^2
        let lam = EisensteinInt::lambda();
        let w2 = w.mul(&w);
        assert_eq!(w2.neg().mul(&lam.mul(&lam)), eis(3, 0));
        // conj is an involution and fixes the norm
        let z = eis(5, -7);
        assert_eq!(z.conj().conj(), z);
        assert_eq!(z.conj().norm(), z.norm());
    }

    #[test]
    fn norm_values() {
        assert_eq!(eis(3, 1).norm(), BigInt::from(7));
        assert_eq!(eis(1, -1).norm(), BigInt::from(3));
        assert_eq!(eis(7, 1).norm(), BigInt::from(43));
        for u in EisensteinInt::units() {
            assert!(u.is_unit());
        }
    }

    #[test]
    fn rational_prime_classification() {
        match EisensteinInt::factor_rational_prime(3) {
            PrimeClass::Ramified(l) => assert_eq!(l, eis(1, -1)),
            other => panic!("3 should ramify, got {other:?}"),
        }
        match EisensteinInt::factor_rational_prime(7) {
            PrimeClass::Split(pi, pibar) => {
                assert_eq!(pi, eis(3, 1));
                assert_eq!(pibar, eis(2, -1)); // 3 + w^2
                assert_eq!(pi.norm(), BigInt::from(7));
            }
            other => panic!("7 should split, got {other:?}"),
        }
        assert_eq!(EisensteinInt::factor_rational_prime(23), PrimeClass::Inert(23));
        match EisensteinInt::factor_rational_prime(43) {
            PrimeClass::Split(pi, _) => assert_eq!(pi.norm(), BigInt::from(43)),
            other => panic!("43 should split, got {other:?}"),
        }
    }

    #[test]
    fn primary_forms() {
        // w^2 * (3+w) = -2-3w is the associate of 3+w congruent to 1 mod 3
        assert_eq!(eis(3, 1).primary().unwrap(), eis(-2, -3));
        assert_eq!(eis(2, -1).primary().unwrap(), eis(1, 3));
        // inert primes: -p = 1 mod 3 for p = 2 mod 3
        assert_eq!(eis(2, 0).primary().unwrap(), eis(-2, 0));
        // units normalize to 1
        for u in EisensteinInt::units() {
            assert!(u.primary().unwrap().is_one());
        }
        // divisible by lambda: no primary form
        assert!(eis(1, -1).primary().is_err());
        assert!(eis(3, 0).primary().is_err());
    }

    #[test]
    fn canonical_assoc_rules() {
        // canonical(3) = lambda^2 = -3w
        assert_eq!(eis(3, 0).canonical_assoc(), eis(0, -3));
        // all associates share one canonical form
        let z = eis(5, 2);
        let c = z.canonical_assoc();
        for u in EisensteinInt::units() {
            assert_eq!(u.mul(&z).canonical_assoc(), c);
        }
        for u in EisensteinInt::units() {
            assert!(u.canonical_assoc().is_one());
        }
    }

    #[test]
    fn divmod_is_euclidean() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let z = eis(rng.gen_range(-1000..1000), rng.gen_range(-1000..1000));
            let w = eis(rng.gen_range(-1000..1000), rng.gen_range(-1000..1000));
            if w.is_zero() {
                continue;
            }
            let (q, r) = z.divmod(&w);
            assert_eq!(q.mul(&w).add(&r), z);
            assert!(r.norm() < w.norm(), "norm(r) must shrink: {z} / {w}");
        }
    }

    #[test]
    fn divmod_ties_toward_zero() {
        // 1/2 rounds to 0, -1/2 rounds to 0, 3/2 rounds to 1, -3/2 to -1
        assert_eq!(round_nearest(&BigInt::from(1), &BigInt::from(2)), BigInt::from(0));
        assert_eq!(round_nearest(&BigInt::from(-1), &BigInt::from(2)), BigInt::from(0));
        assert_eq!(round_nearest(&BigInt::from(3), &BigInt::from(2)), BigInt::from(1));
        assert_eq!(round_nearest(&BigInt::from(-3), &BigInt::from(2)), BigInt::from(-1));
        assert_eq!(round_nearest(&BigInt::from(7), &BigInt::from(3)), BigInt::from(2));
        assert_eq!(round_nearest(&BigInt::from(-7), &BigInt::from(3)), BigInt::from(-2));
    }

    #[test]
    fn gcd_examples() {
        let g = EisensteinInt::gcd(&eis(6, 3), &eis(3, 0));
        // both are divisible by lambda^2 (norm 3 each way): 6+3w = 3(2+w)
        assert_eq!(g, eis(0, -3)); // canonical(3)
        assert_eq!(EisensteinInt::gcd(&eis(3, 1), &eis(2, -1)), EisensteinInt::one());
        assert_eq!(EisensteinInt::gcd(&EisensteinInt::zero(), &eis(3, 1)), eis(-2, -3));
        assert!(EisensteinInt::gcd(&EisensteinInt::zero(), &EisensteinInt::zero()).is_zero());
    }

    #[test]
    fn factor_seven_cubed_times_unit() {
        // 21 + 7w = w * (-2-3w)^2 * (1+3w), all factors primary of norm 7
        let z = eis(21, 7);
        let f = z.factor(1 << 40).unwrap();
        assert_eq!(f.unit, EisensteinInt::omega());
        assert_eq!(f.factors, vec![(eis(-2, -3), 2), (eis(1, 3), 1)]);
    }

    #[test]
    fn factor_mixed() {
        // 6 = 2 * 3: inert 2 (primary -2), ramified lambda^2
        let f = eis(6, 0).factor(1 << 40).unwrap();
        assert_eq!(f.factors, vec![(eis(1, -1), 2), (eis(-2, 0), 1)]);
        let refold = f
            .factors
            .iter()
            .fold(f.unit.clone(), |acc, (p, e)| acc.mul(&p.pow(*e as u64)));
        assert_eq!(refold, eis(6, 0));
    }

    #[test]
    fn factor_random_refold() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let z = eis(rng.gen_range(-10_000..10_000), rng.gen_range(-10_000..10_000));
            if z.is_zero() {
                continue;
            }
            let f = z.factor(1 << 40).unwrap();
            assert!(f.unit.is_unit());
            for (p, _) in &f.factors {
                // primary or the ramified prime
                if p == &EisensteinInt::lambda() {
                    continue;
                }
                assert_eq!(p, &p.primary().unwrap());
            }
        }
    }

    #[test]
    fn parse_display_roundtrip() {
        for s in ["3+1*w", "-2-3*w", "0", "w", "-w", "17", "1+w", "5-w", "2*w+3"] {
            let z: EisensteinInt = s.parse().unwrap();
            let back: EisensteinInt = z.to_string().parse().unwrap();
            assert_eq!(z, back, "roundtrip through {s}");
        }
        assert_eq!("3 + 2w".parse::<EisensteinInt>().unwrap(), eis(3, 2));
        assert!("".parse::<EisensteinInt>().is_err());
        assert!("3+*w".parse::<EisensteinInt>().is_err());
        assert!("q".parse::<EisensteinInt>().is_err());
    }

    #[test]
    fn serde_decimal_strings() {
        let z = eis(-7, 22);
        let json = serde_json::to_string(&z).unwrap();
        assert_eq!(json, r#"{"a":"-7","b":"22"}"#);
        let back: EisensteinInt = serde_json::from_str(&json).unwrap();
        assert_eq!(z, back);
    }

    #[test]
    fn rational_inverse() {
        let z = eis(3, 1).to_rational();
        let inv = z.inv().unwrap();
        assert_eq!(z.mul(&inv), EisensteinRat::one());
        assert!(EisensteinRat::zero().inv().is_none());
    }
}
