//! The Kummer field L = Q(w, c) with w^2 + w + 1 = 0 and c^3 = m, its
//! maximal order, ideals in Hermite normal form, and prime factorization.
//!
//! Everything is coordinatized over the tensor basis
//! (1, c, c^2, w, wc, wc^2) of Q[w] (x) Q[c]. The maximal order is grown
//! from Z[w][c] by repeated multiplier-ring steps at the primes dividing
//! 3m (the only primes whose square can divide the starting discriminant),
//! which is the standard round-2 saturation. Field elements are stored as
//! rational coordinates over the integral basis, so integrality is just
//! "all denominators are 1".
//!
//! Prime ideals are produced two ways: factoring the defining polynomial
//! of theta = w + c modulo p when p does not divide the index of Z[theta]
//! (Dedekind), and a radical-plus-idempotent split of O/pO otherwise, so
//! every rational prime can be decomposed, including the ramified ones.

use crate::arith;
use crate::eisenstein::{EisensteinInt, EisensteinRat, PrimeClass};
use crate::linalg::{self, IMat};
use crate::polymod::FpPoly;
use crate::realcubic::{CubicComplex, Cube, RealCubic};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum FieldError {
    #[error("radicand {0} must be cube-free and not 0 or +-1")]
    BadRadicand(i64),
    #[error("element is not integral")]
    NotIntegral,
    #[error("division by zero element")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// Element of L as rational coordinates over the integral basis of the
/// ambient order.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    pub c: [BigRational; 6],
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement { c: std::array::from_fn(|_| BigRational::zero()) }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        FieldElement { c: std::array::from_fn(|i| &self.c[i] + &rhs.c[i]) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        FieldElement { c: std::array::from_fn(|i| &self.c[i] - &rhs.c[i]) }
    }

    pub fn neg(&self) -> Self {
        FieldElement { c: std::array::from_fn(|i| -&self.c[i]) }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        FieldElement { c: std::array::from_fn(|i| &self.c[i] * s) }
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| x.is_integer())
    }

    pub fn int_coords(&self) -> Option<[BigInt; 6]> {
        self.is_integral().then(|| std::array::from_fn(|i| self.c[i].to_integer()))
    }

    pub fn from_int_coords(v: &[BigInt]) -> Self {
        assert_eq!(v.len(), 6);
        FieldElement { c: std::array::from_fn(|i| BigRational::from(v[i].clone())) }
    }

    /// Common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let c: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
        c.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = Vec::<String>::deserialize(d)?;
        if w.len() != 6 {
            return Err(D::Error::custom("field element wire format must have 6 coordinates"));
        }
        let mut c = std::array::from_fn(|_| BigRational::zero());
        for (i, s) in w.iter().enumerate() {
            c[i] = BigRational::from_str(s).map_err(D::Error::custom)?;
        }
        Ok(FieldElement { c })
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "El[{}]",
            self.c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        )
    }
}

/// Tensor-coordinate multiplication: (u1 + v1 w)(u2 + v2 w) with
/// u, v in Q[c]/(c^3 - m) and w^2 = -1 - w.
fn tensor_mul(x: &[BigRational; 6], y: &[BigRational; 6], m: i64) -> [BigRational; 6] {
    let mb = BigRational::from(BigInt::from(m));
    // split into polynomial halves
    let polymul = |a: &[BigRational], b: &[BigRational]| -> [BigRational; 3] {
        let mut full = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        for i in 0..3 {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if b[j].is_zero() {
                    continue;
                }
                let t = &a[i] * &b[j];
                full[i + j] += t;
            }
        }
        // reduce c^3 = m, c^4 = m c
        [
            &full[0] + &full[3] * &mb,
            &full[1] + &full[4] * &mb,
            full[2].clone(),
        ]
    };
    let polyadd = |a: &[BigRational; 3], b: &[BigRational; 3]| -> [BigRational; 3] {
        std::array::from_fn(|i| &a[i] + &b[i])
    };
    let polysub = |a: &[BigRational; 3], b: &[BigRational; 3]| -> [BigRational; 3] {
        std::array::from_fn(|i| &a[i] - &b[i])
    };
    let u1 = &x[0..3];
    let v1 = &x[3..6];
    let u2 = &y[0..3];
    let v2 = &y[3..6];
    let uu = polymul(u1, u2);
    let vv = polymul(v1, v2);
    let uv = polymul(u1, v2);
    let vu = polymul(v1, u2);
    let real = polysub(&uu, &vv);
    let wpart = polysub(&polyadd(&uv, &vu), &vv);
    [
        real[0].clone(),
        real[1].clone(),
        real[2].clone(),
        wpart[0].clone(),
        wpart[1].clone(),
        wpart[2].clone(),
    ]
}

/// Trace over Q of a tensor-coordinate element: 6 t0 - 3 t3.
fn tensor_trace(t: &[BigRational; 6]) -> BigRational {
    BigRational::from(BigInt::from(6)) * &t[0] - BigRational::from(BigInt::from(3)) * &t[3]
}

/// The maximal order of L = Q(w, cbrt(m)) with all derived data.
pub struct NumberFieldOrder {
    pub m: i64,
    pub cube: Cube,
    /// Integral basis over the tensor basis: rows of basis_num / basis_den.
    pub basis_num: IMat,
    pub basis_den: BigInt,
    basis_inv: Vec<Vec<BigRational>>,
    /// Structure constants: b_i * b_j = sum_k mult[i][j][k] b_k.
    mult: Vec<Vec<Vec<BigInt>>>,
    /// Field discriminant (negative, totally imaginary).
    pub disc: BigInt,
    /// Monic defining polynomial of theta = w + c, low coefficients first,
    /// degree 6 (last entry 1).
    pub defining_poly: [BigInt; 7],
    /// [O_L : Z[theta]].
    pub index_theta: BigInt,
    /// theta = w + c in order coordinates.
    pub theta: FieldElement,
    /// The K-automorphism c -> w c as a matrix on order coordinates (rows:
    /// image of b_i).
    sigma_mat: IMat,
    /// The F-automorphism w -> w^2 likewise.
    tau_mat: IMat,
    /// Embedding values of the order basis under the three embeddings
    /// fixing w -> zeta_3 and sending c to (real cbrt m) * omega^j.
    embeddings: [Vec<CubicComplex>; 3],
}

impl fmt::Debug for NumberFieldOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberFieldOrder(m = {}, disc = {})", self.m, self.disc)
    }
}

pub fn is_cube_free(m: i64) -> bool {
    if m == 0 || m == 1 || m == -1 {
        return false;
    }
    let f = arith::factor_u64(m.unsigned_abs());
    f.values().all(|&e| e < 3)
}

impl NumberFieldOrder {
    pub fn new(m: i64) -> Result<Self, FieldError> {
        if !is_cube_free(m) {
            return Err(FieldError::BadRadicand(m));
        }
        let cube = Cube::new(m.unsigned_abs());
        // start from Z[w][c] and saturate at the primes dividing 3m
        let mut basis_num = IMat::identity(6);
        let mut basis_den = BigInt::one();
        let mut bad: Vec<u64> = arith::factor_u64(m.unsigned_abs()).into_keys().collect();
        if !bad.contains(&3) {
            bad.push(3);
        }
        bad.sort_unstable();
        for &p in &bad {
            loop {
                let grew = multiplier_step(m, &mut basis_num, &mut basis_den, p);
                if !grew {
                    break;
                }
            }
        }
        let (mult, basis_inv) = mult_table(m, &basis_num, &basis_den);
        let disc = order_disc(m, &basis_num, &basis_den);
        // theta = w + c in order coordinates
        let theta_tensor: [BigRational; 6] = [
            BigRational::zero(),
            BigRational::one(),
            BigRational::zero(),
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        let theta = FieldElement { c: tensor_to_coords(&basis_inv, &theta_tensor) };
        let (defining_poly, pow_disc) = theta_poly_and_disc(m, &theta_tensor);
        let ratio = &pow_disc / &disc;
        let index_theta = ratio.sqrt();
        assert_eq!(
            &index_theta * &index_theta,
            ratio,
            "disc(Z[theta])/disc(O) must be a perfect square"
        );
        let sigma_mat = automorphism_matrix(&basis_num, &basis_den, &basis_inv, sigma_tensor_mat());
        let tau_mat = automorphism_matrix(&basis_num, &basis_den, &basis_inv, tau_tensor_mat());
        let embeddings = embedding_table(m, cube, &basis_num, &basis_den);
        Ok(NumberFieldOrder {
            m,
            cube,
            basis_num,
            basis_den,
            basis_inv,
            mult,
            disc,
            defining_poly,
            index_theta,
            theta,
            sigma_mat,
            tau_mat,
            embeddings,
        })
    }

    /// True when one more multiplier step at p finds nothing to add.
    pub fn is_maximal_at(&self, p: u64) -> bool {
        let mut num = self.basis_num.clone();
        let mut den = self.basis_den.clone();
        !multiplier_step(self.m, &mut num, &mut den, p)
    }

    // ---- element constructors ----

    pub fn el_one(&self) -> FieldElement {
        self.el_from_tensor(&[
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ])
    }

    pub fn el_omega(&self) -> FieldElement {
        self.el_from_tensor(&[
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
        ])
    }

    /// The cube root generator c.
    pub fn el_cbrt(&self) -> FieldElement {
        self.el_from_tensor(&[
            BigRational::zero(),
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ])
    }

    pub fn el_from_tensor(&self, t: &[BigRational; 6]) -> FieldElement {
        FieldElement { c: tensor_to_coords(&self.basis_inv, t) }
    }

    /// Structure constants of the order: b_i b_j = sum_k c[i][j][k] b_k.
    pub fn structure_constants(&self) -> &Vec<Vec<Vec<BigInt>>> {
        &self.mult
    }

    pub fn el_from_rational(&self, x: BigRational) -> FieldElement {
        self.el_from_tensor(&[
            x,
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ])
    }

    pub fn el_from_int(&self, x: i64) -> FieldElement {
        self.el_from_rational(BigRational::from(BigInt::from(x)))
    }

    pub fn el_from_eisenstein(&self, z: &EisensteinInt) -> FieldElement {
        self.el_from_tensor(&[
            BigRational::from(z.a.clone()),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::from(z.b.clone()),
            BigRational::zero(),
            BigRational::zero(),
        ])
    }

    pub fn to_tensor(&self, x: &FieldElement) -> [BigRational; 6] {
        let den = BigRational::from(self.basis_den.clone());
        std::array::from_fn(|j| {
            let mut acc = BigRational::zero();
            for i in 0..6 {
                if x.c[i].is_zero() {
                    continue;
                }
                acc += &x.c[i] * BigRational::from(self.basis_num[(i, j)].clone());
            }
            acc / &den
        })
    }

    // ---- arithmetic ----

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let mut out = std::array::from_fn(|_| BigRational::zero());
        for i in 0..6 {
            if x.c[i].is_zero() {
                continue;
            }
            for j in 0..6 {
                if y.c[j].is_zero() {
                    continue;
                }
                let f = &x.c[i] * &y.c[j];
                for k in 0..6 {
                    let s = &self.mult[i][j][k];
                    if s.is_zero() {
                        continue;
                    }
                    out[k] += &f * BigRational::from(s.clone());
                }
            }
        }
        FieldElement { c: out }
    }

    pub fn pow(&self, x: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.el_one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // solve y (d x) = d * 1 over the integers, where d clears the
        // denominators of x
        let den = x.denominator();
        let xi: Vec<BigInt> = x
            .c
            .iter()
            .map(|v| (v * BigRational::from(den.clone())).to_integer())
            .collect();
        let mx = self.mult_matrix_int(&xi);
        let one = self.el_one().int_coords().expect("1 is integral");
        let target: Vec<BigInt> = one.iter().map(|v| v * &den).collect();
        let sol = linalg::solve_left_rational(&mx, &target).ok_or(FieldError::DivisionByZero)?;
        Ok(FieldElement { c: std::array::from_fn(|i| sol[i].clone()) })
    }

    /// Matrix of multiplication by the integer-coordinate element z:
    /// row i = coordinates of b_i * z.
    fn mult_matrix_int(&self, z: &[BigInt]) -> IMat {
        let mut rows = Vec::with_capacity(6);
        for i in 0..6 {
            let mut row = vec![BigInt::zero(); 6];
            for (j, zj) in z.iter().enumerate() {
                if zj.is_zero() {
                    continue;
                }
                for k in 0..6 {
                    let s = &self.mult[i][j][k];
                    if !s.is_zero() {
                        row[k] += zj * s;
                    }
                }
            }
            rows.push(row);
        }
        IMat::from_rows(rows)
    }

    /// Multiplication matrix for integral elements, used by ideal routines.
    pub fn mult_matrix(&self, z: &[BigInt; 6]) -> IMat {
        self.mult_matrix_int(z)
    }

    pub fn apply_sigma(&self, x: &FieldElement) -> FieldElement {
        apply_mat(&self.sigma_mat, x)
    }

    pub fn apply_tau(&self, x: &FieldElement) -> FieldElement {
        apply_mat(&self.tau_mat, x)
    }

    /// Relative norm to K = Q(w): x sigma(x) sigma^2(x).
    pub fn relative_norm(&self, x: &FieldElement) -> EisensteinRat {
        let sx = self.apply_sigma(x);
        let ssx = self.apply_sigma(&sx);
        let prod = self.mul(&self.mul(x, &sx), &ssx);
        let t = self.to_tensor(&prod);
        assert!(
            t[1].is_zero() && t[2].is_zero() && t[4].is_zero() && t[5].is_zero(),
            "relative norm must land in Q(w)"
        );
        EisensteinRat { a: t[0].clone(), b: t[3].clone() }
    }

    /// Norm to Q.
    pub fn absolute_norm(&self, x: &FieldElement) -> BigRational {
        self.relative_norm(x).norm()
    }

    pub fn trace(&self, x: &FieldElement) -> BigRational {
        tensor_trace(&self.to_tensor(x))
    }

    /// Embedding j in {0, 1, 2}: w -> zeta_3, c -> (real cbrt m) omega^j.
    pub fn embed(&self, x: &FieldElement, j: usize) -> CubicComplex {
        let mut acc = CubicComplex::zero(self.cube);
        for i in 0..6 {
            if x.c[i].is_zero() {
                continue;
            }
            acc = acc.add(&self.embeddings[j][i].scale(&x.c[i]));
        }
        acc
    }

    /// |sigma_j(x)|^2 exactly, as an element of Q(cbrt|m|).
    pub fn embed_abs_sq(&self, x: &FieldElement, j: usize) -> RealCubic {
        self.embed(x, j).abs_sq()
    }

    /// T2(x) = 2 sum_j |sigma_j(x)|^2 over the three relative embeddings,
    /// i.e. the sum over all six absolute embeddings.
    pub fn t2(&self, x: &FieldElement) -> RealCubic {
        let mut acc = RealCubic::zero(self.cube);
        for j in 0..3 {
            acc = acc.add(&self.embed_abs_sq(x, j));
        }
        acc.scale(&BigRational::from(BigInt::from(2)))
    }

    /// Evaluate the defining polynomial at an element (for tests).
    pub fn eval_defining_poly(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.el_from_int(0);
        for k in (0..7).rev() {
            acc = self.mul(&acc, x);
            acc = acc.add(&self.el_from_rational(BigRational::from(self.defining_poly[k].clone())));
        }
        acc
    }
}

fn apply_mat(mat: &IMat, x: &FieldElement) -> FieldElement {
    let mut out: [BigRational; 6] = std::array::from_fn(|_| BigRational::zero());
    for i in 0..6 {
        if x.c[i].is_zero() {
            continue;
        }
        for j in 0..6 {
            let s = &mat[(i, j)];
            if !s.is_zero() {
                out[j] += &x.c[i] * BigRational::from(s.clone());
            }
        }
    }
    FieldElement { c: out }
}

fn tensor_to_coords(basis_inv: &[Vec<BigRational>], t: &[BigRational; 6]) -> [BigRational; 6] {
    std::array::from_fn(|j| {
        let mut acc = BigRational::zero();
        for i in 0..6 {
            if t[i].is_zero() {
                continue;
            }
            acc += &t[i] * &basis_inv[i][j];
        }
        acc
    })
}

/// sigma on the tensor basis: c -> w c, w -> w. Rows = images.
fn sigma_tensor_mat() -> IMat {
    IMat::from_i64(&[
        &[1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1, 0],
        &[0, 0, -1, 0, 0, -1],
        &[0, 0, 0, 1, 0, 0],
        &[0, -1, 0, 0, -1, 0],
        &[0, 0, 1, 0, 0, 0],
    ])
}

/// tau on the tensor basis: w -> w^2 = -1-w, c -> c.
fn tau_tensor_mat() -> IMat {
    IMat::from_i64(&[
        &[1, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0],
        &[-1, 0, 0, -1, 0, 0],
        &[0, -1, 0, 0, -1, 0],
        &[0, 0, -1, 0, 0, -1],
    ])
}

fn rows_to_rational(num: &IMat, den: &BigInt, i: usize) -> [BigRational; 6] {
    std::array::from_fn(|j| BigRational::new(num[(i, j)].clone(), den.clone()))
}

/// Structure constants of the order with basis num/den, plus the inverse
/// basis matrix (tensor -> order coordinates).
fn mult_table(
    m: i64,
    num: &IMat,
    den: &BigInt,
) -> (Vec<Vec<Vec<BigInt>>>, Vec<Vec<BigRational>>) {
    let inv_num = linalg::inverse_rational(num).expect("basis matrix invertible");
    // basis_inv[t][j]: tensor basis element t in order coordinates: since
    // W = num/den, W^{-1} = den * num^{-1}
    let basis_inv: Vec<Vec<BigRational>> = (0..6)
        .map(|t| {
            (0..6)
                .map(|j| &inv_num[t][j] * BigRational::from(den.clone()))
                .collect()
        })
        .collect();
    let mut mult = vec![vec![vec![BigInt::zero(); 6]; 6]; 6];
    for i in 0..6 {
        let bi = rows_to_rational(num, den, i);
        for j in i..6 {
            let bj = rows_to_rational(num, den, j);
            let prod = tensor_mul(&bi, &bj, m);
            let coords = tensor_to_coords(&basis_inv, &prod);
            for k in 0..6 {
                assert!(coords[k].is_integer(), "order is not closed under multiplication");
                mult[i][j][k] = coords[k].to_integer();
                mult[j][i][k] = mult[i][j][k].clone();
            }
        }
    }
    (mult, basis_inv)
}

/// Discriminant of the order: det of the trace form on its basis.
fn order_disc(m: i64, num: &IMat, den: &BigInt) -> BigInt {
    let mut rows = Vec::with_capacity(6);
    for i in 0..6 {
        let bi = rows_to_rational(num, den, i);
        let mut row = Vec::with_capacity(6);
        for j in 0..6 {
            let bj = rows_to_rational(num, den, j);
            let t = tensor_trace(&tensor_mul(&bi, &bj, m));
            row.push(t);
        }
        rows.push(row);
    }
    // clear denominators: multiply all entries by lcm, divide det by lcm^6
    let lcm = rows
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| (x * BigRational::from(lcm.clone())).to_integer())
                .collect()
        })
        .collect();
    let d = linalg::det(&IMat::from_rows(int_rows));
    let denom = num_traits::pow::pow(lcm, 6);
    let q = BigRational::new(d, denom);
    assert!(q.is_integer(), "discriminant of an order is an integer");
    q.to_integer()
}

/// Defining polynomial of theta = w + c (monic, degree 6) and the
/// discriminant of Z[theta], both exact.
fn theta_poly_and_disc(m: i64, theta_tensor: &[BigRational; 6]) -> ([BigInt; 7], BigInt) {
    // powers of theta in tensor coordinates, up to theta^10 for traces
    let mut powers: Vec<[BigRational; 6]> = Vec::with_capacity(11);
    let mut cur: [BigRational; 6] = std::array::from_fn(|i| {
        if i == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    });
    powers.push(cur.clone());
    for _ in 0..10 {
        cur = tensor_mul(&cur, theta_tensor, m);
        powers.push(cur.clone());
    }
    // solve theta^6 = sum_{k<6} c_k theta^k via the 6x6 system
    let a = IMat::from_rows(
        (0..6)
            .map(|k| powers[k].iter().map(|x| x.to_integer()).collect::<Vec<_>>())
            .collect(),
    );
    for k in 0..6 {
        for j in 0..6 {
            assert!(powers[k][j].is_integer());
        }
    }
    let b: Vec<BigInt> = powers[6].iter().map(|x| x.to_integer()).collect();
    let sol = linalg::solve_left_rational(&a, &b).expect("theta has degree 6");
    let mut poly = [
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::one(),
    ];
    for k in 0..6 {
        assert!(sol[k].is_integer(), "theta is an algebraic integer");
        poly[k] = -sol[k].to_integer();
    }
    // disc(Z[theta]) = det(Tr(theta^(i+j)))
    let traces: Vec<BigRational> = powers.iter().map(tensor_trace).collect();
    let tm = IMat::from_rows(
        (0..6)
            .map(|i| (0..6).map(|j| traces[i + j].to_integer()).collect())
            .collect(),
    );
    for i in 0..6 {
        for j in 0..6 {
            assert!(traces[i + j].is_integer());
        }
    }
    let pow_disc = linalg::det(&tm);
    (poly, pow_disc)
}

fn automorphism_matrix(
    num: &IMat,
    den: &BigInt,
    basis_inv: &[Vec<BigRational>],
    tensor_map: IMat,
) -> IMat {
    // image of basis row i: (num_i/den) * tensor_map, back to order coords
    let mut rows = Vec::with_capacity(6);
    for i in 0..6 {
        let mut img: [BigRational; 6] = std::array::from_fn(|_| BigRational::zero());
        for t in 0..6 {
            let coeff = BigRational::new(num[(i, t)].clone(), den.clone());
            if coeff.is_zero() {
                continue;
            }
            for j in 0..6 {
                let s = &tensor_map[(t, j)];
                if !s.is_zero() {
                    img[j] += &coeff * BigRational::from(s.clone());
                }
            }
        }
        let coords = tensor_to_coords(basis_inv, &img);
        let row: Vec<BigInt> = coords
            .iter()
            .map(|x| {
                assert!(x.is_integer(), "automorphism must preserve the maximal order");
                x.to_integer()
            })
            .collect();
        rows.push(row);
    }
    IMat::from_rows(rows)
}

/// Embedding values of the order basis: w -> zeta_3 = -1/2 + i sqrt3/2,
/// c -> c_real omega^j with c_real = sign(m) rho.
fn embedding_table(m: i64, cube: Cube, num: &IMat, den: &BigInt) -> [Vec<CubicComplex>; 3] {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let neg_half = -half.clone();
    // omega^k as (re, im) with value re + i sqrt3 im
    let omega_pow = |k: usize| -> (BigRational, BigRational) {
        match k % 3 {
            0 => (BigRational::one(), BigRational::zero()),
            1 => (neg_half.clone(), half.clone()),
            _ => (neg_half.clone(), -half.clone()),
        }
    };
    let sign = if m < 0 { -1i64 } else { 1 };
    let rho = RealCubic::rho(cube);
    let rho2 = rho.square();
    let one = RealCubic::one(cube);
    let zero = RealCubic::zero(cube);
    std::array::from_fn(|j| {
        // tensor basis images under embedding j
        let c_img = |power: usize| -> CubicComplex {
            // (sign rho omega^j)^power = sign^power rho^power omega^(j*power)
            let (re_w, im_w) = omega_pow(j * power);
            let mag = match power {
                0 => one.clone(),
                1 => rho.clone(),
                _ => rho2.clone(),
            };
            let s = BigRational::from(BigInt::from(sign.pow(power as u32)));
            CubicComplex::new(mag.scale(&(&re_w * &s)), mag.scale(&(&im_w * &s)))
        };
        let zeta = CubicComplex::new(
            RealCubic::from_rational(cube, neg_half.clone()),
            RealCubic::from_rational(cube, half.clone()),
        );
        let tensor_imgs: Vec<CubicComplex> = vec![
            CubicComplex::new(one.clone(), zero.clone()),
            c_img(1),
            c_img(2),
            zeta.clone(),
            zeta.mul(&c_img(1)),
            zeta.mul(&c_img(2)),
        ];
        (0..6)
            .map(|i| {
                let mut acc = CubicComplex::zero(cube);
                for (t, img) in tensor_imgs.iter().enumerate() {
                    let coeff = BigRational::new(num[(i, t)].clone(), den.clone());
                    if !coeff.is_zero() {
                        acc = acc.add(&img.scale(&coeff));
                    }
                }
                acc
            })
            .collect()
    })
}

/// One multiplier-ring step at p: O' = (1/p){y in O : y rad_p(O) <= p rad_p(O)}.
/// Updates the basis in place; returns true when the order grew.
fn multiplier_step(m: i64, num: &mut IMat, den: &mut BigInt, p: u64) -> bool {
    let (mult, basis_inv) = mult_table(m, num, den);
    let pb = BigInt::from(p);
    // smallest p-power at least the degree, so x -> x^(p^k) kills nilpotents
    let mut pk = p;
    while pk < 6 {
        pk *= p;
    }
    let mul_mod = |x: &[u64; 6], y: &[u64; 6]| -> [u64; 6] {
        let mut out = [0u64; 6];
        for i in 0..6 {
            if x[i] == 0 {
                continue;
            }
            for j in 0..6 {
                if y[j] == 0 {
                    continue;
                }
                let f = arith::mul_mod_u64(x[i], y[j], p);
                for t in 0..6 {
                    let s = mult[i][j][t].mod_floor(&pb).to_u64().unwrap();
                    if s != 0 {
                        out[t] = (out[t] + arith::mul_mod_u64(f, s, p)) % p;
                    }
                }
            }
        }
        out
    };
    let one_tensor: [BigRational; 6] = std::array::from_fn(|i| {
        if i == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    });
    let one_coords_r = tensor_to_coords(&basis_inv, &one_tensor);
    let one_mod: [u64; 6] = std::array::from_fn(|i| {
        one_coords_r[i]
            .to_integer()
            .mod_floor(&pb)
            .to_u64()
            .unwrap()
    });
    let pow_mod = |x: &[u64; 6], mut e: u64| -> [u64; 6] {
        let mut acc = one_mod;
        let mut base = *x;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base);
            }
            base = mul_mod(&base, &base);
            e >>= 1;
        }
        acc
    };
    // Frobenius power matrix on O/pO: column j = b_j^(p^k)
    let mut frob = IMat::zero(6, 6);
    for jcol in 0..6 {
        let mut e = [0u64; 6];
        e[jcol] = 1;
        let img = pow_mod(&e, pk);
        for i in 0..6 {
            frob[(i, jcol)] = BigInt::from(img[i]);
        }
    }
    let kernel = linalg::kernel_mod_p(&frob, p);
    // radical lattice J: p O + kernel lifts, in order coordinates
    let mut rad_rows: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..6 {
        let mut r = vec![BigInt::zero(); 6];
        r[i] = pb.clone();
        rad_rows.push(r);
    }
    for v in &kernel {
        rad_rows.push(v.iter().map(|&x| BigInt::from(x)).collect());
    }
    let (rad, piv) = linalg::hnf(&IMat::from_rows(rad_rows));
    assert_eq!(piv.len(), 6, "radical lattice has full rank");
    let rad_inv = linalg::inverse_rational(&rad).expect("radical basis invertible");
    // condition: for y in O, y * a_j in p J for all radical basis rows a_j
    let mut cond_rows: Vec<Vec<BigInt>> = Vec::new();
    // w[i][j] = coords of b_i a_j in the radical basis (integral since J is
    // an ideal of O); condition sum_i y_i w[i][j][t] = 0 mod p
    for jrow in 0..6 {
        let aj: Vec<BigInt> = rad.row_vec(jrow);
        // mult-by-aj matrix rows: b_i * a_j
        let mut w_cols: Vec<Vec<BigInt>> = Vec::with_capacity(6);
        for i in 0..6 {
            let mut prod = vec![BigInt::zero(); 6];
            for (t, at) in aj.iter().enumerate() {
                if at.is_zero() {
                    continue;
                }
                for s in 0..6 {
                    let m_its = &mult[i][t][s];
                    if !m_its.is_zero() {
                        prod[s] += at * m_its;
                    }
                }
            }
            // express prod in radical basis: prod * rad_inv
            let coords: Vec<BigRational> = (0..6)
                .map(|t| {
                    let mut acc = BigRational::zero();
                    for s in 0..6 {
                        if prod[s].is_zero() {
                            continue;
                        }
                        acc += BigRational::from(prod[s].clone()) * &rad_inv[s][t];
                    }
                    acc
                })
                .collect();
            let int_coords: Vec<BigInt> = coords
                .iter()
                .map(|x| {
                    assert!(x.is_integer(), "radical is an ideal of the order");
                    x.to_integer()
                })
                .collect();
            w_cols.push(int_coords);
        }
        // six scalar conditions for this j: sum_i y_i w_cols[i][t] = 0 mod p
        for t in 0..6 {
            cond_rows.push((0..6).map(|i| w_cols[i][t].clone()).collect());
        }
    }
    let cond = IMat::from_rows(cond_rows);
    let sols = linalg::kernel_mod_p(&cond, p);
    // U = pO + solutions; O' = U/p
    let mut u_rows: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..6 {
        let mut r = vec![BigInt::zero(); 6];
        r[i] = pb.clone();
        u_rows.push(r);
    }
    for v in &sols {
        u_rows.push(v.iter().map(|&x| BigInt::from(x)).collect());
    }
    let (u_hnf, upiv) = linalg::hnf(&IMat::from_rows(u_rows));
    assert_eq!(upiv.len(), 6);
    let growth = linalg::det(&u_hnf).abs();
    let p6 = num_traits::pow::pow(pb.clone(), 6);
    if growth == p6 {
        return false; // U = pO: already maximal at p
    }
    // W_new = (U/p) * W: integer matrix U * num with denominator p * den
    let new_num_raw = u_hnf.matmul(num);
    let new_den: BigInt = &pb * &*den;
    // normalize: HNF and strip common content with the denominator
    let (mut h, hpiv) = linalg::hnf(&new_num_raw);
    assert_eq!(hpiv.len(), 6);
    let mut g = new_den.clone();
    for i in 0..6 {
        for j in 0..6 {
            g = g.gcd(&h[(i, j)]);
            if g.is_one() {
                break;
            }
        }
    }
    if !g.is_one() {
        for i in 0..6 {
            for j in 0..6 {
                let v = &h[(i, j)] / &g;
                h[(i, j)] = v;
            }
        }
    }
    *num = h;
    *den = new_den / g;
    true
}

// ---------------------------------------------------------------------------
// Ideals
// ---------------------------------------------------------------------------

/// Integral ideal as a 6x6 upper-triangular Hermite basis over the order's
/// integral basis (rows are Z-basis vectors).
#[derive(Clone, PartialEq, Eq)]
pub struct IdealHnf {
    pub rows: IMat,
}

impl fmt::Debug for IdealHnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal(norm = {})", self.norm())
    }
}

#[derive(Serialize, Deserialize)]
struct IdealWire {
    rows: Vec<Vec<String>>,
}

impl Serialize for IdealHnf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows = (0..6)
            .map(|i| self.rows.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        IdealWire { rows }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IdealHnf {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = IdealWire::deserialize(d)?;
        if w.rows.len() != 6 || w.rows.iter().any(|r| r.len() != 6) {
            return Err(D::Error::custom("ideal wire format must be 6x6"));
        }
        let rows: Result<Vec<Vec<BigInt>>, _> = w
            .rows
            .iter()
            .map(|r| r.iter().map(|s| BigInt::from_str(s)).collect())
            .collect();
        Ok(IdealHnf { rows: IMat::from_rows(rows.map_err(D::Error::custom)?) })
    }
}

impl IdealHnf {
    pub fn whole_ring() -> Self {
        IdealHnf { rows: IMat::identity(6) }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let (h, piv) = linalg::hnf(&IMat::from_rows(rows));
        assert_eq!(piv.len(), 6, "ideal basis must have full rank");
        IdealHnf { rows: h }
    }

    pub fn from_generators(order: &NumberFieldOrder, gens: &[FieldElement]) -> Self {
        let mut rows = Vec::new();
        for g in gens {
            let gi = g.int_coords().expect("ideal generators must be integral");
            let mg = order.mult_matrix(&gi);
            for i in 0..6 {
                rows.push(mg.row_vec(i));
            }
        }
        Self::from_rows(rows)
    }

    pub fn principal(order: &NumberFieldOrder, g: &FieldElement) -> Self {
        Self::from_generators(order, std::slice::from_ref(g))
    }

    pub fn rational(order: &NumberFieldOrder, n: &BigInt) -> Self {
        let _ = order;
        let mut rows = Vec::new();
        for i in 0..6 {
            let mut r = vec![BigInt::zero(); 6];
            r[i] = n.abs();
            rows.push(r);
        }
        IdealHnf { rows: IMat::from_rows(rows) }
    }

    pub fn norm(&self) -> BigInt {
        (0..6).map(|i| self.rows[(i, i)].clone()).product()
    }

    pub fn mul(&self, order: &NumberFieldOrder, rhs: &IdealHnf) -> IdealHnf {
        let mut rows = Vec::with_capacity(36);
        for i in 0..6 {
            let a: [BigInt; 6] = std::array::from_fn(|t| self.rows[(i, t)].clone());
            let ma = order.mult_matrix(&a);
            for j in 0..6 {
                let b = rhs.rows.row(j);
                // a * b_row = b-coords through the mult matrix of a
                let mut prod = vec![BigInt::zero(); 6];
                for (t, bt) in b.iter().enumerate() {
                    if bt.is_zero() {
                        continue;
                    }
                    for s in 0..6 {
                        if !ma[(t, s)].is_zero() {
                            prod[s] += bt * &ma[(t, s)];
                        }
                    }
                }
                rows.push(prod);
            }
        }
        Self::from_rows(rows)
    }

    pub fn add(&self, rhs: &IdealHnf) -> IdealHnf {
        let mut rows = Vec::with_capacity(12);
        for i in 0..6 {
            rows.push(self.rows.row_vec(i));
            rows.push(rhs.rows.row_vec(i));
        }
        Self::from_rows(rows)
    }

    pub fn pow(&self, order: &NumberFieldOrder, e: u32) -> IdealHnf {
        let mut acc = IdealHnf::whole_ring();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(order, &base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(order, &base);
            }
        }
        acc
    }

    /// Reduce an integer coordinate vector modulo the ideal lattice (rows
    /// upper triangular): the result is the canonical representative with
    /// 0 <= v_i < diag_i. Rows are processed in ascending pivot order, so
    /// each subtraction only touches coordinates not yet visited.
    pub fn reduce_vec(&self, v: &[BigInt; 6]) -> [BigInt; 6] {
        let mut w = v.clone();
        for i in 0..6 {
            let d = &self.rows[(i, i)];
            let q = w[i].div_floor(d);
            if !q.is_zero() {
                for j in i..6 {
                    let s = &q * &self.rows[(i, j)];
                    w[j] -= s;
                }
            }
        }
        w
    }

    pub fn contains_vec(&self, v: &[BigInt; 6]) -> bool {
        self.reduce_vec(v).iter().all(|x| x.is_zero())
    }

    pub fn contains_element(&self, x: &FieldElement) -> bool {
        match x.int_coords() {
            Some(v) => self.contains_vec(&v),
            None => false,
        }
    }

    pub fn contains_ideal(&self, other: &IdealHnf) -> bool {
        (0..6).all(|i| {
            let v: [BigInt; 6] = std::array::from_fn(|j| other.rows[(i, j)].clone());
            self.contains_vec(&v)
        })
    }

    pub fn apply_sigma(&self, order: &NumberFieldOrder) -> IdealHnf {
        self.apply_mat(&order.sigma_mat)
    }

    pub fn apply_tau(&self, order: &NumberFieldOrder) -> IdealHnf {
        self.apply_mat(&order.tau_mat)
    }

    fn apply_mat(&self, mat: &IMat) -> IdealHnf {
        let img = self.rows.matmul(mat);
        Self::from_rows((0..6).map(|i| img.row_vec(i)).collect())
    }

    /// Largest k with self^k containing (dividing) the ideal.
    pub fn valuation_of(&self, order: &NumberFieldOrder, target: &IdealHnf) -> u32 {
        let mut k = 0u32;
        let mut pw = IdealHnf::whole_ring();
        loop {
            pw = pw.mul(order, self);
            if pw.contains_ideal(target) {
                k += 1;
            } else {
                return k;
            }
            assert!(k < 64, "runaway valuation");
        }
    }

    /// The element basis as FieldElements.
    pub fn basis_elements(&self) -> Vec<FieldElement> {
        (0..6)
            .map(|i| FieldElement::from_int_coords(&self.rows.row_vec(i)))
            .collect()
    }
}

/// A prime ideal over p with its local data.
#[derive(Clone, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: u64,
    /// Absolute residue degree: N(P) = p^f.
    pub f: u32,
    /// Absolute ramification index over p.
    pub e: u32,
    pub ideal: IdealHnf,
    /// The prime of Z[w] below P (canonical associate) and the relative
    /// residue degree f(P / pi).
    pub below: EisensteinInt,
    pub f_rel: u32,
    pub e_rel: u32,
}

impl fmt::Debug for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P(p = {}, e = {}, f = {}, below = {}, e_rel = {}, f_rel = {})",
            self.p, self.e, self.f, self.below, self.e_rel, self.f_rel
        )
    }
}

impl NumberFieldOrder {
    /// Decompose a rational prime into prime ideals with exponents.
    /// Works for every p, including ramified ones and index divisors.
    pub fn factor_prime(&self, p: u64) -> Result<Vec<(PrimeIdeal, u32)>, FieldError> {
        if !arith::is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        let pb = BigInt::from(p);
        let use_dedekind = !(&self.index_theta % &pb).is_zero();
        let mut raw: Vec<(IdealHnf, u32)> = if use_dedekind {
            self.factor_prime_dedekind(p)
        } else {
            self.factor_prime_radical(p)
        };
        // deterministic order
        raw.sort_by(|(a, _), (b, _)| {
            let na = a.norm();
            let nb = b.norm();
            na.cmp(&nb).then_with(|| {
                for i in 0..6 {
                    for j in 0..6 {
                        let c = a.rows[(i, j)].cmp(&b.rows[(i, j)]);
                        if c != std::cmp::Ordering::Equal {
                            return c;
                        }
                    }
                }
                std::cmp::Ordering::Equal
            })
        });
        // attach local data and verify the refold
        let p_ideal = IdealHnf::rational(self, &pb);
        let mut refold = IdealHnf::whole_ring();
        let mut out = Vec::new();
        let mut sum_ef = 0u32;
        for (ideal, e) in raw.drain(..) {
            let norm = ideal.norm();
            let mut f = 0u32;
            let mut n = norm.clone();
            while !n.is_one() {
                let (q, r) = n.div_rem(&pb);
                assert!(r.is_zero(), "prime ideal norm must be a p-power");
                n = q;
                f += 1;
            }
            sum_ef += e * f;
            refold = refold.mul(self, &ideal.pow(self, e));
            let (below, f_rel, e_rel) = self.prime_below(p, &ideal, f, e);
            out.push((
                PrimeIdeal { p, f, e, ideal, below, f_rel, e_rel },
                e,
            ));
        }
        assert_eq!(sum_ef, 6, "sum of e*f over p must equal the degree");
        assert_eq!(refold, p_ideal, "product of prime powers must refold to pO");
        Ok(out)
    }

    /// Dedekind factorization via the defining polynomial of theta, valid
    /// when p does not divide [O : Z[theta]].
    fn factor_prime_dedekind(&self, p: u64) -> Vec<(IdealHnf, u32)> {
        let fp = FpPoly::new(
            p,
            self.defining_poly
                .iter()
                .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap())
                .collect(),
        );
        let factors = fp.factor();
        let mut out = Vec::new();
        for (g, e) in factors {
            // P = (p, g(theta))
            let mut gt = self.el_from_int(0);
            for k in (0..g.c.len()).rev() {
                gt = self.mul(&gt, &self.theta);
                gt = gt.add(&self.el_from_int(g.c[k] as i64));
            }
            let ideal = IdealHnf::from_generators(
                self,
                &[self.el_from_int(p as i64), gt],
            );
            assert_eq!(
                ideal.norm(),
                num_traits::pow::pow(BigInt::from(p), g.deg()),
                "Dedekind ideal norm"
            );
            out.push((ideal, e));
        }
        out
    }

    /// General factorization: radical of pO, then split the semisimple
    /// quotient into fields by idempotents, then read off ramification by
    /// valuations.
    fn factor_prime_radical(&self, p: u64) -> Vec<(IdealHnf, u32)> {
        let pb = BigInt::from(p);
        // radical via Frobenius kernel
        let mut pk = p;
        while pk < 6 {
            pk *= p;
        }
        let one = self.el_one().int_coords().unwrap();
        let one_mod: [u64; 6] = std::array::from_fn(|i| one[i].mod_floor(&pb).to_u64().unwrap());
        let mul_mod = |x: &[u64; 6], y: &[u64; 6]| -> [u64; 6] {
            let mut out = [0u64; 6];
            for i in 0..6 {
                if x[i] == 0 {
                    continue;
                }
                for j in 0..6 {
                    if y[j] == 0 {
                        continue;
                    }
                    let f = arith::mul_mod_u64(x[i], y[j], p);
                    for t in 0..6 {
                        let s = self.mult[i][j][t].mod_floor(&pb).to_u64().unwrap();
                        if s != 0 {
                            out[t] = (out[t] + arith::mul_mod_u64(f, s, p)) % p;
                        }
                    }
                }
            }
            out
        };
        let pow_mod = |x: &[u64; 6], mut e: u64| -> [u64; 6] {
            let mut acc = one_mod;
            let mut base = *x;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_mod(&acc, &base);
                }
                base = mul_mod(&base, &base);
                e >>= 1;
            }
            acc
        };
        let mut frob = IMat::zero(6, 6);
        for j in 0..6 {
            let mut e = [0u64; 6];
            e[j] = 1;
            let img = pow_mod(&e, pk);
            for i in 0..6 {
                frob[(i, j)] = BigInt::from(img[i]);
            }
        }
        let kernel = linalg::kernel_mod_p(&frob, p);
        let mut rad_rows: Vec<Vec<BigInt>> = Vec::new();
        for i in 0..6 {
            let mut r = vec![BigInt::zero(); 6];
            r[i] = pb.clone();
            rad_rows.push(r);
        }
        for v in &kernel {
            rad_rows.push(v.iter().map(|&x| BigInt::from(x)).collect());
        }
        let radical = IdealHnf::from_rows(rad_rows);
        // quotient A = O / radical: F_p-algebra on the coordinates whose
        // Hermite diagonal is p
        let quot_idx: Vec<usize> =
            (0..6).filter(|&i| radical.rows[(i, i)] == pb).collect();
        let dim = quot_idx.len();
        assert!(dim >= 1);
        let reduce = |v: &[BigInt; 6]| -> Vec<u64> {
            let r = radical.reduce_vec(v);
            quot_idx.iter().map(|&i| r[i].mod_floor(&pb).to_u64().unwrap()).collect()
        };
        // structure constants of A
        let basis_vecs: Vec<[BigInt; 6]> = quot_idx
            .iter()
            .map(|&i| std::array::from_fn(|j| if i == j { BigInt::one() } else { BigInt::zero() }))
            .collect();
        let amult: Vec<Vec<Vec<u64>>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let mut prod = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
                        let bi = &basis_vecs[i];
                        let bj = &basis_vecs[j];
                        for (t, bt) in bi.iter().enumerate() {
                            if bt.is_zero() {
                                continue;
                            }
                            for (s, bs) in bj.iter().enumerate() {
                                if bs.is_zero() {
                                    continue;
                                }
                                for k in 0..6 {
                                    let c = &self.mult[t][s][k];
                                    if !c.is_zero() {
                                        prod[k] += bt * bs * c;
                                    }
                                }
                            }
                        }
                        reduce(&prod)
                    })
                    .collect()
            })
            .collect();
        let a_one = reduce(&one);
        let alg = FpAlgebra { p, dim, mult: amult, one: a_one };
        let components = alg.split_into_fields();
        // each component: prime ideal = radical + lift of the span of the
        // OTHER components
        let mut out = Vec::new();
        let p_ideal = IdealHnf::rational(self, &pb);
        for (ci, _comp) in components.iter().enumerate() {
            let mut rows: Vec<Vec<BigInt>> = Vec::new();
            for i in 0..6 {
                rows.push(radical.rows.row_vec(i));
            }
            for (cj, other) in components.iter().enumerate() {
                if ci == cj {
                    continue;
                }
                for vec in other {
                    // lift quotient coordinates back to order coordinates
                    let mut lift = vec![BigInt::zero(); 6];
                    for (t, &v) in vec.iter().enumerate() {
                        lift[quot_idx[t]] = BigInt::from(v);
                    }
                    rows.push(lift);
                }
            }
            let prime = IdealHnf::from_rows(rows);
            let e = prime.valuation_of(self, &p_ideal);
            out.push((prime, e));
        }
        out
    }

    /// Identify the prime of Z[w] under P and the relative degrees.
    fn prime_below(
        &self,
        p: u64,
        ideal: &IdealHnf,
        f: u32,
        e: u32,
    ) -> (EisensteinInt, u32, u32) {
        match EisensteinInt::factor_rational_prime(p) {
            PrimeClass::Ramified(lam) => {
                // e(lambda / 3) = 2
                (lam, f, e / 2)
            }
            PrimeClass::Inert(_) => {
                let below = EisensteinInt::new(p as i64, 0).primary().unwrap();
                debug_assert_eq!(f % 2, 0);
                (below, f / 2, e)
            }
            PrimeClass::Split(pi, pibar) => {
                let inp = ideal.contains_element(&self.el_from_eisenstein(&pi));
                let below = if inp { pi } else { pibar };
                debug_assert!(
                    ideal.contains_element(&self.el_from_eisenstein(&below)),
                    "P must contain exactly one of the split primes"
                );
                (below.primary().unwrap(), f, e)
            }
        }
    }

    /// Relative ideal norm of a prime: N(P) = below^(f_rel) as an ideal of
    /// Z[w]; exposed as (prime below, exponent).
    pub fn relative_prime_norm(&self, prime: &PrimeIdeal) -> (EisensteinInt, u32) {
        (prime.below.clone(), prime.f_rel)
    }
}

/// Finite-dimensional commutative semisimple F_p-algebra, split into
/// fields via idempotents from factored minimal polynomials.
struct FpAlgebra {
    p: u64,
    dim: usize,
    /// mult[i][j] = coordinates of b_i b_j.
    mult: Vec<Vec<Vec<u64>>>,
    one: Vec<u64>,
}

impl FpAlgebra {
    fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.dim];
        for i in 0..self.dim {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.dim {
                if y[j] == 0 {
                    continue;
                }
                let f = arith::mul_mod_u64(x[i], y[j], p);
                for (t, &s) in self.mult[i][j].iter().enumerate() {
                    if s != 0 {
                        out[t] = (out[t] + arith::mul_mod_u64(f, s, p)) % p;
                    }
                }
            }
        }
        out
    }

    fn eval_poly(&self, poly: &FpPoly, v: &[u64]) -> Vec<u64> {
        let mut acc = vec![0u64; self.dim];
        for &coef in poly.c.iter().rev() {
            acc = self.mul(&acc, v);
            if coef != 0 {
                for (t, o) in self.one.iter().enumerate() {
                    acc[t] = (acc[t] + arith::mul_mod_u64(coef, *o, self.p)) % self.p;
                }
            }
        }
        acc
    }

    /// Basis vectors (in algebra coordinates) of each simple component.
    fn split_into_fields(&self) -> Vec<Vec<Vec<u64>>> {
        // candidate elements: basis vectors first, then seeded random
        let mut cands: Vec<Vec<u64>> = Vec::new();
        for i in 0..self.dim {
            let mut v = vec![0u64; self.dim];
            v[i] = 1;
            cands.push(v);
        }
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xa1_55ed);
        for _ in 0..64 {
            cands.push((0..self.dim).map(|_| rng.gen_range(0..self.p)).collect());
        }
        self.split_component((0..self.dim).map(|i| {
            let mut v = vec![0u64; self.dim];
            v[i] = 1;
            v
        }).collect(), &self.one.clone(), &cands)
    }

    /// Split the subalgebra spanned by `basis` with identity `id`.
    fn split_component(
        &self,
        basis: Vec<Vec<u64>>,
        id: &[u64],
        cands: &[Vec<u64>],
    ) -> Vec<Vec<Vec<u64>>> {
        let dim = basis.len();
        if dim == 1 {
            return vec![basis];
        }
        for cand in cands {
            // project candidate into the component: v = cand * id
            let v = self.mul(cand, id);
            let mu = self.min_poly_in(&v, id);
            let factors = mu.factor();
            if factors.len() == 1 && factors[0].1 == 1 && factors[0].0.deg() == dim {
                // irreducible of full degree: the component is a field
                return vec![basis];
            }
            if factors.len() >= 2 {
                // split by idempotents
                let mut out = Vec::new();
                for (g, _) in &factors {
                    let h = mu.divmod(g).0;
                    // u = h^{-1} mod g
                    let (_, u, _) = poly_ext_gcd(&h, g);
                    let hu = h.mul(&u);
                    let idem = self.eval_poly(&hu, &v);
                    let idem = self.mul(&idem, id); // stay inside the component
                    // new component: image of multiplication by idem
                    let mut img_rows: Vec<Vec<u64>> = Vec::new();
                    for b in &basis {
                        img_rows.push(self.mul(b, &idem));
                    }
                    let sub = echelon_basis(&img_rows, self.p);
                    if sub.is_empty() {
                        continue;
                    }
                    out.extend(self.split_component(sub, &idem, cands));
                }
                return out;
            }
            // irreducible but degree < dim: candidate not primitive, retry
        }
        panic!("failed to split a semisimple algebra of dimension {dim}");
    }

    /// Minimal polynomial of v relative to the component with identity id.
    fn min_poly_in(&self, v: &[u64], id: &[u64]) -> FpPoly {
        let p = self.p;
        let mut powers: Vec<Vec<u64>> = vec![id.to_vec()];
        loop {
            let next = self.mul(powers.last().unwrap(), v);
            let rows = powers.len();
            let mut mat_rows: Vec<Vec<BigInt>> = Vec::with_capacity(rows + 1);
            for pw in &powers {
                mat_rows.push(pw.iter().map(|&x| BigInt::from(x)).collect());
            }
            mat_rows.push(next.iter().map(|&x| BigInt::from(x)).collect());
            let stacked = IMat::from_rows(mat_rows);
            let ker = linalg::kernel_mod_p(&stacked.transpose(), p);
            if let Some(k) = ker.iter().find(|k| k[rows] != 0) {
                let inv = arith::pow_mod_u64(k[rows], p - 2, p);
                let mut coeffs: Vec<u64> =
                    (0..rows).map(|t| arith::mul_mod_u64(k[t], inv, p)).collect();
                coeffs.push(1);
                return FpPoly::new(p, coeffs);
            }
            powers.push(next);
            assert!(powers.len() <= self.dim + 1);
        }
    }
}

/// Row echelon basis of the span of the given vectors over F_p.
fn echelon_basis(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    if rows.is_empty() {
        return vec![];
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut out_rank = 0usize;
    for c in 0..cols {
        let Some(pr) = (out_rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(out_rank, pr);
        let inv = arith::pow_mod_u64(m[out_rank][c], p - 2, p);
        for j in 0..cols {
            m[out_rank][j] = arith::mul_mod_u64(m[out_rank][j], inv, p);
        }
        for r in 0..m.len() {
            if r != out_rank && m[r][c] != 0 {
                let f = m[r][c];
                for j in 0..cols {
                    let sub = arith::mul_mod_u64(f, m[out_rank][j], p);
                    m[r][j] = (m[r][j] + p - sub) % p;
                }
            }
        }
        out_rank += 1;
    }
    m.truncate(out_rank);
    m.retain(|r| r.iter().any(|&x| x != 0));
    m
}

/// Extended gcd over F_p[x]: g = gcd, and (u, v) with a u + b v = g.
fn poly_ext_gcd(a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
    let p = a.p;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
    let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.divmod(&r1);
        let ns = s0.sub(&q.mul(&s1));
        let nt = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    // normalize monic
    if !r0.is_zero() {
        let inv = arith::pow_mod_u64(r0.lead(), p - 2, p);
        r0 = r0.scale(inv);
        s0 = s0.scale(inv);
        t0 = t0.scale(inv);
    }
    (r0, s0, t0)
}
