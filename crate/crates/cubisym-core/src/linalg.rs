//! Exact integer linear algebra: Hermite and Smith normal forms, F_p
//! kernels, determinants, and small rational solves.
//!
//! Matrices are dense row-major BigInt. Sizes here are modest (6x6 for
//! ideals, a few hundred square for relation lattices), so the plain
//! cubic algorithms with entry-size discipline are enough.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, k)]);
            self[(i, k)] = v;
        }
    }

    /// row_i += c * row_j
    pub fn add_mul_row(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for k in 0..self.cols {
            let add = c * &self[(j, k)];
            self[(i, k)] += add;
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -std::mem::take(&mut self[(r, j)]);
            self[(r, j)] = v;
        }
    }

    /// col_i += c * col_j
    pub fn add_mul_col(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let add = c * &self[(r, j)];
            self[(r, i)] += add;
        }
    }

    pub fn matmul(&self, rhs: &IMat) -> IMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a * &rhs[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IMat {
        let mut out = IMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|x| x.is_zero())
    }
}

impl Index<(usize, usize)> for IMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Serialize, Deserialize)]
struct IMatWire {
    cols: usize,
    rows: Vec<Vec<String>>,
}

impl Serialize for IMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        IMatWire { cols: self.cols, rows }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IMat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = IMatWire::deserialize(d)?;
        if w.rows.iter().any(|r| r.len() != w.cols) {
            return Err(D::Error::custom("matrix wire rows disagree with cols"));
        }
        let r = w.rows.len();
        let data: Result<Vec<BigInt>, _> =
            w.rows.iter().flatten().map(|s| BigInt::from_str(s)).collect();
        Ok(IMat { rows: r, cols: w.cols, data: data.map_err(D::Error::custom)? })
    }
}

impl fmt::Debug for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
        }
        write!(f, "]")
    }
}

/// Row Hermite normal form: upper echelon, positive pivots, entries above
/// each pivot reduced into [0, pivot). Zero rows are dropped. Returns the
/// reduced matrix together with the pivot column of each remaining row.
pub fn hnf(mat: &IMat) -> (IMat, Vec<usize>) {
    let mut m = mat.clone();
    let (h, piv, _) = hnf_core(&mut m, false);
    (h, piv)
}

/// HNF with a transform matrix U such that U * input = output (zero rows
/// kept so U stays square and unimodular).
pub fn hnf_with_transform(mat: &IMat) -> (IMat, Vec<usize>, IMat) {
    let mut m = mat.clone();
    let (h, piv, u) = hnf_core(&mut m, true);
    (h, piv, u.expect("transform requested"))
}

fn hnf_core(m: &mut IMat, want_u: bool) -> (IMat, Vec<usize>, Option<IMat>) {
    let mut u = want_u.then(|| IMat::identity(m.rows));
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..m.cols {
        // eliminate below row r in column c by Euclid
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.rows {
                if !m[(i, c)].is_zero()
                    && best.is_none_or(|b| m[(i, c)].abs() < m[(b, c)].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap_rows(r, b);
            if let Some(u) = u.as_mut() {
                u.swap_rows(r, b);
            }
            if m[(r, c)].is_negative() {
                m.negate_row(r);
                if let Some(u) = u.as_mut() {
                    u.negate_row(r);
                }
            }
            let mut done = true;
            let pivot = m[(r, c)].clone();
            for i in r + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let q = -m[(i, c)].div_floor(&pivot);
                m.add_mul_row(i, r, &q);
                if let Some(u) = u.as_mut() {
                    u.add_mul_row(i, r, &q);
                }
                if !m[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.rows && !m[(r, c)].is_zero() {
            // reduce entries above the pivot into [0, pivot)
            let pivot = m[(r, c)].clone();
            for i in 0..r {
                let q = -m[(i, c)].div_floor(&pivot);
                m.add_mul_row(i, r, &q);
                if let Some(u) = u.as_mut() {
                    u.add_mul_row(i, r, &q);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
    }
    let kept = IMat::from_rows((0..r).map(|i| m.row_vec(i)).collect());
    (kept, pivots, u)
}

/// Smith normal form of an integer matrix.
///
/// Returns the invariant factors d_1 | d_2 | ... (padded with zeros up to
/// min(rows, cols) when rank deficient) and the right transform V with
/// input * V = (row ops applied)^-1 * diag: concretely, for any integer
/// row vector x, the class of x in Z^cols / rowlattice(input) is read off
/// coordinatewise from x * V modulo the invariant factors.
pub fn snf_with_right_transform(mat: &IMat) -> (Vec<BigInt>, IMat) {
    let mut a = mat.clone();
    let mut v = IMat::identity(a.cols);
    let n = a.rows.min(a.cols);
    let mut t = 0usize;
    'outer: while t < n {
        // find a nonzero pivot in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                if !a[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            let p = a[(t, t)].clone();
            for i in t + 1..a.rows {
                if !a[(i, t)].is_zero() {
                    let q = -a[(i, t)].div_floor(&p);
                    a.add_mul_row(i, t, &q);
                    if !a[(i, t)].is_zero() {
                        // remainder is smaller: swap up and restart the cleanup
                        a.swap_rows(t, i);
                        clean = false;
                        break;
                    }
                }
            }
            if !clean {
                continue;
            }
            let p = a[(t, t)].clone();
            for j in t + 1..a.cols {
                if !a[(t, j)].is_zero() {
                    let q = -a[(t, j)].div_floor(&p);
                    a.add_mul_col(j, t, &q);
                    v.add_mul_col(j, t, &q);
                    if !a[(t, j)].is_zero() {
                        a.swap_cols(t, j);
                        v.swap_cols(t, j);
                        clean = false;
                        break;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_col(t);
            v.negate_col(t);
        }
        // enforce the divisibility chain: if a later entry resists the
        // pivot, fold its row in and redo this step
        let p = a[(t, t)].clone();
        for i in t + 1..a.rows {
            for j in t + 1..a.cols {
                if !(&a[(i, j)] % &p).is_zero() {
                    let one = BigInt::one();
                    a.add_mul_row(t, i, &one);
                    continue 'outer;
                }
            }
        }
        t += 1;
    }
    let mut divisors: Vec<BigInt> = (0..n).map(|i| a[(i, i)].clone()).collect();
    for d in divisors.iter_mut() {
        if d.is_negative() {
            *d = -std::mem::take(d);
        }
    }
    (divisors, v)
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(mat: &IMat) -> BigInt {
    assert_eq!(mat.rows, mat.cols);
    let n = mat.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = mat.clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            a.swap_rows(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a[(i, j)] = q;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Nullspace basis of mat over F_p (row vectors x with x * mat = 0 would be
/// the left kernel; this computes the right kernel: mat * x = 0, returned
/// as vectors of length mat.cols).
pub fn kernel_mod_p(mat: &IMat, p: u64) -> Vec<Vec<u64>> {
    let rows = mat.rows;
    let cols = mat.cols;
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let r = mat[(i, j)].mod_floor(&BigInt::from(p));
                    u64::try_from(r).unwrap()
                })
                .collect()
        })
        .collect();
    let inv = |x: u64| crate::arith::pow_mod_u64(x, p - 2, p);
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| a[r][c] % p != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let s = inv(a[rank][c]);
        for j in 0..cols {
            a[rank][j] = crate::arith::mul_mod_u64(a[rank][j], s, p);
        }
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for j in 0..cols {
                    let sub = crate::arith::mul_mod_u64(f, a[rank][j], p);
                    a[r][j] = (a[r][j] + p - sub) % p;
                }
            }
        }
        pivot_of_col[c] = Some(rank);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for c in 0..cols {
            if let Some(r) = pivot_of_col[c] {
                // pivot row: x_c = -sum over free columns
                v[c] = (p - a[r][free] % p) % p;
            }
        }
        basis.push(v);
    }
    basis
}

/// Solve x * a = b over the rationals for square invertible a.
pub fn solve_left_rational(a: &IMat, b: &[BigInt]) -> Option<Vec<BigRational>> {
    // transpose to solve a^T x^T = b^T by Gaussian elimination
    let n = a.rows;
    assert_eq!(a.cols, n);
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from(a[(j, i)].clone()))
                .chain([BigRational::from(b[i].clone())])
                .collect()
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, pr);
        let inv = m[c][c].recip();
        for j in c..=n {
            m[c][j] = &m[c][j] * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..=n {
                    let sub = &f * &m[c][j];
                    m[r][j] = &m[r][j] - sub;
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// Exact inverse of a square rational matrix given as BigInt entries.
pub fn inverse_rational(a: &IMat) -> Option<Vec<Vec<BigRational>>> {
    let n = a.rows;
    assert_eq!(a.cols, n);
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from(a[(i, j)].clone()))
                .chain((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }))
                .collect()
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, pr);
        let inv = m[c][c].recip();
        for j in 0..2 * n {
            m[c][j] = &m[c][j] * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..2 * n {
                    let sub = &f * &m[c][j];
                    m[r][j] = &m[r][j] - sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hnf_small() {
        let m = IMat::from_i64(&[&[2, 3, 6, 2], &[5, 6, 1, 6], &[8, 3, 1, 1]]);
        let (h, piv) = hnf(&m);
        assert_eq!(piv, vec![0, 1, 2]);
        // pivots positive, entries above reduced
        for (r, &c) in piv.iter().enumerate() {
            assert!(h[(r, c)].is_positive());
            for above in 0..r {
                assert!(h[(above, c)] >= BigInt::zero() && h[(above, c)] < h[(r, c)]);
            }
        }
    }

    #[test]
    fn hnf_unimodular_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let a = IMat::from_rows(
                (0..4)
                    .map(|_| (0..4).map(|_| BigInt::from(rng.gen_range(-30i64..30))).collect())
                    .collect(),
            );
            if det(&a).is_zero() {
                continue;
            }
            // random unimodular transform: product of elementary row ops
            let mut b = a.clone();
            for _ in 0..12 {
                let i = rng.gen_range(0..4);
                let mut j = rng.gen_range(0..4);
                if i == j {
                    j = (j + 1) % 4;
                }
                b.add_mul_row(i, j, &BigInt::from(rng.gen_range(-3i64..=3)));
            }
            let (h1, _) = hnf(&a);
            let (h2, _) = hnf(&b);
            assert_eq!(h1, h2, "HNF is a lattice invariant");
        }
    }

    #[test]
    fn hnf_transform_consistency() {
        let m = IMat::from_i64(&[&[4, 6], &[6, 9], &[2, 5]]);
        let (h, piv, u) = hnf_with_transform(&m);
        assert_eq!(piv.len(), 2);
        let prod = u.matmul(&m);
        for i in 0..h.rows {
            assert_eq!(prod.row(i), h.row(i));
        }
        for i in h.rows..prod.rows {
            assert!(prod.is_zero_row(i));
        }
        assert_eq!(det(&u).abs(), BigInt::one());
    }

    #[test]
    fn snf_diag_chain() {
        let m = IMat::from_i64(&[&[2, 0], &[0, 3]]);
        let (d, _) = snf_with_right_transform(&m);
        assert_eq!(d, vec![BigInt::one(), BigInt::from(6)]);

        let m = IMat::from_i64(&[&[6, 4, 2], &[4, 4, 4], &[2, 4, 6]]);
        let (d, _) = snf_with_right_transform(&m);
        // chain d1 | d2 | d3 and product = |det| = 16... det = 6(24-16)-4(24-8)+2(16-8) = 48-64+16 = 0
        assert_eq!(det(&m), BigInt::zero());
        assert!(d[2].is_zero());
        let nz: Vec<_> = d.iter().filter(|x| !x.is_zero()).collect();
        for w in nz.windows(2) {
            assert!((w[1] % w[0]).is_zero());
        }
    }

    #[test]
    fn snf_quotient_readout() {
        // lattice spanned by (2,0) and (0,4) in Z^2: quotient Z/2 x Z/4
        let m = IMat::from_i64(&[&[2, 0], &[0, 4]]);
        let (d, v) = snf_with_right_transform(&m);
        let prod: BigInt = d.iter().product();
        assert_eq!(prod, BigInt::from(8));
        // order of e1 in the quotient: map through V
        let e1 = [BigInt::one(), BigInt::zero()];
        let mapped: Vec<BigInt> = (0..2)
            .map(|j| (0..2).map(|k| &e1[k] * &v[(k, j)]).sum())
            .collect();
        let mut ord = BigInt::one();
        for (x, di) in mapped.iter().zip(&d) {
            let g = x.gcd(di);
            let o = di / g;
            ord = ord.lcm(&o);
        }
        assert_eq!(ord, BigInt::from(2));
    }

    #[test]
    fn det_matches_cofactor() {
        let m = IMat::from_i64(&[&[3, 1, 2], &[0, 4, 1], &[5, 2, 2]]);
        // cofactor: 3(8-2) - 1(0-5) + 2(0-20) = 18 + 5 - 40 = -17
        assert_eq!(det(&m), BigInt::from(-17));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let a = IMat::from_rows(
                (0..5)
                    .map(|_| (0..5).map(|_| BigInt::from(rng.gen_range(-9i64..9))).collect())
                    .collect(),
            );
            let d1 = det(&a);
            let d2 = det(&a.transpose());
            assert_eq!(d1, d2);
        }
    }

    #[test]
    fn kernel_mod_p_checks() {
        let m = IMat::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel_mod_p(&m, 5);
        assert_eq!(k.len(), 2);
        for v in &k {
            for i in 0..m.rows {
                let s: u64 = (0..3)
                    .map(|j| {
                        let e = u64::try_from(m[(i, j)].mod_floor(&BigInt::from(5))).unwrap();
                        e * v[j] % 5
                    })
                    .sum();
                assert_eq!(s % 5, 0);
            }
        }
    }

    #[test]
    fn rational_solve_and_inverse() {
        let a = IMat::from_i64(&[&[2, 1], &[1, 1]]);
        let b = [BigInt::from(5), BigInt::from(3)];
        let x = solve_left_rational(&a, &b).unwrap();
        // x * a = b: x = (2, 1)
        assert_eq!(x[0], BigRational::from(BigInt::from(2)));
        assert_eq!(x[1], BigRational::from(BigInt::from(1)));
        let inv = inverse_rational(&a).unwrap();
        assert_eq!(inv[0][0], BigRational::from(BigInt::from(1)));
        assert_eq!(inv[0][1], BigRational::from(BigInt::from(-1)));
        let sing = IMat::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(inverse_rational(&sing).is_none());
    }
}
