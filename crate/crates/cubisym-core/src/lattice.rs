//! Exact lattice reduction and enumeration for the T2 form.
//!
//! The T2 inner product of two integral elements of the Kummer field lies
//! in Q(rho) with rho = |m|^(1/3), not in Q, so the scalars here are
//! RealCubic values. Every comparison is decided exactly (interval
//! refinement with an exact sign fallback), which keeps LLL and the
//! Fincke-Pohst recursion sound without floating point. Rational lattices
//! pass through the same code with rho-free scalars and cheap sign tests.

use crate::kummer::{FieldElement, NumberFieldOrder};
use crate::linalg::IMat;
use crate::realcubic::RealCubic;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, thiserror::Error)]
pub enum LatticeError {
    #[error("enumeration exceeded the node budget of {0}")]
    EnumBudget(u64),
}

/// Exact floor of an algebraic value: refine the enclosing interval until
/// it pins an integer, falling back to an exact sign test when the value
/// sits on (or next to) an integer.
pub fn floor_exact(x: &RealCubic) -> BigInt {
    if x.c[1].is_zero() && x.c[2].is_zero() {
        return x.c[0].floor().to_integer();
    }
    let mut bits = 32u32;
    loop {
        let iv = x.eval_interval(bits);
        let lo = iv.lo.floor().to_integer();
        let hi = iv.hi.floor().to_integer();
        if lo == hi {
            return lo;
        }
        if &lo + 1u32 == hi {
            // the interval straddles the integer hi: compare exactly
            let diff = x.sub(&RealCubic::from_rational(
                x.cube,
                BigRational::from(hi.clone()),
            ));
            return if diff.sign() >= 0 { hi } else { lo };
        }
        bits *= 2;
        assert!(bits <= 1 << 20, "floor_exact failed to converge");
    }
}

/// Nearest integer, ties rounded up.
pub fn round_exact(x: &RealCubic) -> BigInt {
    let half = RealCubic::from_rational(
        x.cube,
        BigRational::new(BigInt::one(), BigInt::from(2)),
    );
    floor_exact(&x.add(&half))
}

/// Gram-Schmidt data of a positive definite Gram matrix: mu (strictly
/// lower triangular) and the orthogonal norms b.
fn gso(g: &[Vec<RealCubic>]) -> (Vec<Vec<RealCubic>>, Vec<RealCubic>) {
    let n = g.len();
    let cube = g[0][0].cube;
    let zero = RealCubic::zero(cube);
    let mut mu = vec![vec![zero.clone(); n]; n];
    let mut b = vec![zero.clone(); n];
    for i in 0..n {
        for j in 0..i {
            // mu[i][j] = (g[i][j] - sum_{k<j} mu[i][k] mu[j][k] b[k]) / b[j]
            let mut acc = g[i][j].clone();
            for k in 0..j {
                acc = acc.sub(&mu[i][k].mul(&mu[j][k]).mul(&b[k]));
            }
            mu[i][j] = acc.mul(&b[j].inv().expect("GSO norm is nonzero"));
        }
        let mut nb = g[i][i].clone();
        for k in 0..i {
            nb = nb.sub(&mu[i][k].mul(&mu[i][k]).mul(&b[k]));
        }
        assert!(nb.sign() > 0, "Gram matrix must be positive definite");
        b[i] = nb;
    }
    (mu, b)
}

/// Apply basis row operation b_k <- b_k - r b_j to a Gram matrix.
fn gram_row_sub(g: &mut [Vec<RealCubic>], k: usize, j: usize, r: &BigInt) {
    let n = g.len();
    let rr = BigRational::from(r.clone());
    // new diagonal first, with old entries
    let gkk = g[k][k]
        .sub(&g[k][j].scale(&(BigRational::from(BigInt::from(2)) * &rr)))
        .add(&g[j][j].scale(&(&rr * &rr)));
    for t in 0..n {
        if t == k {
            continue;
        }
        let v = g[k][t].sub(&g[j][t].scale(&rr));
        g[k][t] = v.clone();
        g[t][k] = v;
    }
    g[k][k] = gkk;
}

fn gram_swap(g: &mut [Vec<RealCubic>], k: usize) {
    g.swap(k - 1, k);
    for row in g.iter_mut() {
        row.swap(k - 1, k);
    }
}

/// LLL reduction result: the reduced Gram and the unimodular transform
/// with reduced basis rows = transform * original basis rows.
pub struct ReducedGram {
    pub gram: Vec<Vec<RealCubic>>,
    pub transform: IMat,
}

/// Exact LLL (delta = 99/100) working on the Gram matrix alone.
pub fn lll_gram(gram: &[Vec<RealCubic>]) -> ReducedGram {
    let n = gram.len();
    let cube = gram[0][0].cube;
    let mut g: Vec<Vec<RealCubic>> = gram.to_vec();
    let mut u = IMat::identity(n);
    let delta = RealCubic::from_rational(
        cube,
        BigRational::new(BigInt::from(99), BigInt::from(100)),
    );
    let (mut mu, mut b) = gso(&g);
    let mut k = 1usize;
    while k < n {
        // size-reduce row k against rows k-1 .. 0; only mu row k moves,
        // the orthogonal norms b are untouched
        for j in (0..k).rev() {
            let r = round_exact(&mu[k][j]);
            if !r.is_zero() {
                gram_row_sub(&mut g, k, j, &r);
                u.add_mul_row(k, j, &-r.clone());
                let rq = BigRational::from(r);
                for t in 0..j {
                    let shift = mu[j][t].scale(&rq);
                    mu[k][t] = mu[k][t].sub(&shift);
                }
                let r_rc = RealCubic::from_rational(cube, rq);
                mu[k][j] = mu[k][j].sub(&r_rc);
            }
        }
        // Lovasz condition: b[k] >= (delta - mu[k][k-1]^2) b[k-1]
        let thresh = delta
            .sub(&mu[k][k - 1].mul(&mu[k][k - 1]))
            .mul(&b[k - 1]);
        if b[k].cmp_exact(&thresh) == std::cmp::Ordering::Less {
            gram_swap(&mut g, k);
            u.swap_rows(k - 1, k);
            let res = gso(&g);
            mu = res.0;
            b = res.1;
            k = k.max(2) - 1;
        } else {
            k += 1;
        }
    }
    ReducedGram { gram: g, transform: u }
}

/// All nonzero vectors x (one per +-pair, first nonzero coordinate from
/// the top level positive) with x G x^T <= bound, as coordinates over the
/// Gram's basis. Exact; every node costs one exact comparison. Errors out
/// when more than `cap` nodes are visited.
pub fn enumerate_t2(
    gram: &[Vec<RealCubic>],
    bound: &RealCubic,
    cap: u64,
) -> Result<Vec<Vec<BigInt>>, LatticeError> {
    let n = gram.len();
    let (mu, b) = gso(gram);
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut xs = vec![BigInt::zero(); n];
    let mut nodes = 0u64;
    enum_level(
        gram[0][0].cube,
        &mu,
        &b,
        bound,
        n as isize - 1,
        true,
        &RealCubic::zero(gram[0][0].cube),
        &mut xs,
        &mut out,
        &mut nodes,
        cap,
    )?;
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enum_level(
    cube: crate::realcubic::Cube,
    mu: &[Vec<RealCubic>],
    b: &[RealCubic],
    bound: &RealCubic,
    level: isize,
    all_zero: bool,
    partial: &RealCubic,
    xs: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
    nodes: &mut u64,
    cap: u64,
) -> Result<(), LatticeError> {
    if level < 0 {
        if !all_zero {
            out.push(xs.clone());
        }
        return Ok(());
    }
    let i = level as usize;
    let n = mu.len();
    // c_i = sum_{j > i} x_j mu[j][i]
    let mut c = RealCubic::zero(cube);
    for j in (i + 1)..n {
        if xs[j].is_zero() {
            continue;
        }
        c = c.add(&mu[j][i].scale(&BigRational::from(xs[j].clone())));
    }
    let try_x = |x: &BigInt,
                 xs: &mut Vec<BigInt>,
                 out: &mut Vec<Vec<BigInt>>,
                 nodes: &mut u64|
     -> Result<Option<()>, LatticeError> {
        *nodes += 1;
        if *nodes > cap {
            return Err(LatticeError::EnumBudget(cap));
        }
        let t = c.add(&RealCubic::from_rational(cube, BigRational::from(x.clone())));
        let val = partial.add(&b[i].mul(&t.mul(&t)));
        if val.cmp_exact(bound) == std::cmp::Ordering::Greater {
            return Ok(None); // outside: this side of the zig-zag is done
        }
        xs[i] = x.clone();
        enum_level(
            cube, mu, b, bound,
            level - 1,
            all_zero && x.is_zero(),
            &val,
            xs, out, nodes, cap,
        )?;
        Ok(Some(()))
    };
    if all_zero {
        // c = 0 here; by symmetry only x >= 0, which also fixes the
        // canonical representative of each +- pair
        let mut x = BigInt::zero();
        loop {
            match try_x(&x, xs, out, nodes)? {
                Some(()) => x += 1,
                None => break,
            }
        }
    } else {
        let start = round_exact(&c.neg());
        let mut up = start.clone();
        loop {
            match try_x(&up, xs, out, nodes)? {
                Some(()) => up += 1,
                None => break,
            }
        }
        let mut down = &start - 1;
        loop {
            match try_x(&down, xs, out, nodes)? {
                Some(()) => down -= 1,
                None => break,
            }
        }
    }
    xs[i] = BigInt::zero();
    Ok(())
}

/// T2 Gram matrix of the lattice spanned by the rows (order coordinates):
/// G[i][j] = sum over all six absolute embeddings of sigma(x_i)
/// conj(sigma(x_j)), computed exactly in Q(rho).
pub fn t2_gram(order: &NumberFieldOrder, rows: &IMat) -> Vec<Vec<RealCubic>> {
    let n = rows.rows;
    let embeds: Vec<[crate::realcubic::CubicComplex; 3]> = (0..n)
        .map(|i| {
            let el = FieldElement::from_int_coords(&rows.row_vec(i));
            std::array::from_fn(|j| order.embed(&el, j))
        })
        .collect();
    let three = BigRational::from(BigInt::from(3));
    let two = BigRational::from(BigInt::from(2));
    let mut g = vec![vec![RealCubic::zero(order.cube); n]; n];
    for i in 0..n {
        for j in i..n {
            let mut acc = RealCubic::zero(order.cube);
            for k in 0..3 {
                // Re(z conj(w)) for z = a + i sqrt3 b, w = c + i sqrt3 d
                // is ac + 3bd
                let z = &embeds[i][k];
                let w = &embeds[j][k];
                acc = acc
                    .add(&z.re.mul(&w.re))
                    .add(&z.im.mul(&w.im).scale(&three));
            }
            let val = acc.scale(&two);
            g[i][j] = val.clone();
            g[j][i] = val;
        }
    }
    g
}

/// Determinant of a Gram matrix by exact elimination.
pub fn gram_det(gram: &[Vec<RealCubic>]) -> RealCubic {
    let n = gram.len();
    let cube = gram[0][0].cube;
    let mut m: Vec<Vec<RealCubic>> = gram.to_vec();
    let mut det = RealCubic::one(cube);
    let mut neg = false;
    for col in 0..n {
        let piv = match (col..n).find(|&r| m[r][col].sign() != 0) {
            Some(p) => p,
            None => return RealCubic::zero(cube),
        };
        if piv != col {
            m.swap(col, piv);
            neg = !neg;
        }
        let pivot = m[col][col].clone();
        det = det.mul(&pivot);
        let pinv = pivot.inv().expect("nonzero pivot");
        for r in (col + 1)..n {
            if m[r][col].sign() == 0 {
                continue;
            }
            let f = m[r][col].mul(&pinv);
            for t in col..n {
                let s = f.mul(&m[col][t]);
                m[r][t] = m[r][t].sub(&s);
            }
        }
    }
    if neg {
        det.neg()
    } else {
        det
    }
}

/// LLL-reduce an ideal lattice under T2: returns the reduced basis rows
/// (still a basis of the same ideal) and their Gram matrix.
pub fn ideal_lll(order: &NumberFieldOrder, rows: &IMat) -> (IMat, Vec<Vec<RealCubic>>) {
    let g = t2_gram(order, rows);
    let red = lll_gram(&g);
    let new_rows = red.transform.matmul(rows);
    (new_rows, red.gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kummer::IdealHnf;
    use crate::linalg;
    use crate::realcubic::Cube;
    use num_traits::{Signed, ToPrimitive};
    use rand::SeedableRng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn rc(cube: Cube, n: i64, d: i64) -> RealCubic {
        RealCubic::from_rational(cube, rat(n, d))
    }

    #[test]
    fn exact_floor_and_round() {
        let cube = Cube::new(2);
        let rho = RealCubic::rho(cube); // 1.2599...
        assert_eq!(floor_exact(&rho), BigInt::from(1));
        assert_eq!(floor_exact(&rho.neg()), BigInt::from(-2));
        assert_eq!(floor_exact(&rho.square()), BigInt::from(1)); // 1.5874
        assert_eq!(round_exact(&rho), BigInt::from(1));
        assert_eq!(round_exact(&rho.square()), BigInt::from(2));
        // rational fast paths, including the half-integer tie (rounds up)
        assert_eq!(floor_exact(&rc(cube, 5, 2)), BigInt::from(2));
        assert_eq!(round_exact(&rc(cube, 5, 2)), BigInt::from(3));
        assert_eq!(round_exact(&rc(cube, -5, 2)), BigInt::from(-2));
        assert_eq!(floor_exact(&rc(cube, -7, 1)), BigInt::from(-7));
        // 10 rho - 12 = 0.599..: floor 0; 10 rho - 13 < 0
        let ten_rho = rho.scale(&rat(10, 1));
        assert_eq!(floor_exact(&ten_rho.sub(&rc(cube, 12, 1))), BigInt::zero());
        assert_eq!(
            floor_exact(&ten_rho.sub(&rc(cube, 13, 1))),
            BigInt::from(-1)
        );
    }

    fn random_gram(rng: &mut rand_chacha::ChaCha8Rng, n: usize, cube: Cube) -> Vec<Vec<RealCubic>> {
        use rand::Rng;
        // G = A A^T + 2I: positive definite, integer entries
        let a: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-4i64..=4)).collect())
            .collect();
        let mut g = vec![vec![RealCubic::zero(cube); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s: i64 = (0..n).map(|k| a[i][k] * a[j][k]).sum();
                if i == j {
                    s += 2;
                }
                g[i][j] = RealCubic::from_int(cube, s);
            }
        }
        g
    }

    #[test]
    fn lll_invariants_on_random_rational_lattices() {
        let cube = Cube::new(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..12 {
            let g = random_gram(&mut rng, 5, cube);
            let det_before = gram_det(&g);
            let red = lll_gram(&g);
            // unimodular transform
            assert_eq!(linalg::det(&red.transform).to_i64().unwrap().abs(), 1);
            // reduced gram is the transform applied to the original
            let n = g.len();
            for i in 0..n {
                for j in 0..n {
                    let mut acc = RealCubic::zero(cube);
                    for s in 0..n {
                        for t in 0..n {
                            let c = &red.transform[(i, s)] * &red.transform[(j, t)];
                            if c.is_zero() {
                                continue;
                            }
                            acc = acc.add(&g[s][t].scale(&BigRational::from(c)));
                        }
                    }
                    assert_eq!(acc, red.gram[i][j], "gram transform mismatch");
                }
            }
            // determinant invariant
            assert_eq!(gram_det(&red.gram), det_before);
            // Lovasz and size-reduction conditions, exactly
            let (mu, b) = gso(&red.gram);
            let delta = rc(cube, 99, 100);
            for k in 1..n {
                let thresh = delta.sub(&mu[k][k - 1].mul(&mu[k][k - 1])).mul(&b[k - 1]);
                assert!(
                    b[k].cmp_exact(&thresh) != std::cmp::Ordering::Less,
                    "Lovasz violated"
                );
                for j in 0..k {
                    let two_mu = mu[k][j].scale(&rat(2, 1));
                    assert!(two_mu.sub(&rc(cube, 1, 1)).sign() <= 0);
                    assert!(two_mu.add(&rc(cube, 1, 1)).sign() >= 0);
                }
            }
            // first vector quality: b1^(2n) <= (1/(delta - 1/4))^(n(n-1)/2) det
            let alpha = rc(cube, 100, 74);
            let mut lhs = RealCubic::one(cube);
            for _ in 0..n {
                lhs = lhs.mul(&red.gram[0][0]);
            }
            let mut rhs = gram_det(&red.gram);
            for _ in 0..(n * (n - 1) / 2) {
                rhs = rhs.mul(&alpha);
            }
            assert!(lhs.cmp_exact(&rhs) != std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn size_reduction_bound_is_half() {
        // |mu| <= 1/2 after reduction: check on a skewed 2d lattice
        let cube = Cube::new(2);
        let g = vec![
            vec![rc(cube, 4, 1), rc(cube, 7, 1)],
            vec![rc(cube, 7, 1), rc(cube, 13, 1)],
        ];
        let red = lll_gram(&g);
        let (mu, _) = gso(&red.gram);
        let two_mu = mu[1][0].scale(&rat(2, 1));
        assert!(two_mu.sub(&rc(cube, 1, 1)).sign() <= 0);
        assert!(two_mu.add(&rc(cube, 1, 1)).sign() >= 0);
    }

    #[test]
    fn t2_gram_determinant_is_disc_times_norm_squared() {
        let order = NumberFieldOrder::new(2).unwrap();
        let whole = IdealHnf::whole_ring();
        let g = t2_gram(&order, &whole.rows);
        let d = gram_det(&g);
        // |d_L| = 3 (27 * 4)^2 = 34992
        assert!(d.c[1].is_zero() && d.c[2].is_zero());
        assert_eq!(d.c[0], rat(34992, 1));
        // and for a principal ideal: det = |d_L| N^2
        let x = order.theta.add(&order.el_from_int(1));
        let ideal = IdealHnf::principal(&order, &x);
        let gi = t2_gram(&order, &ideal.rows);
        let di = gram_det(&gi);
        let n = ideal.norm();
        assert_eq!(di.c[0], BigRational::from(BigInt::from(34992) * &n * &n));
    }

    #[test]
    fn enumerate_torsion_units() {
        // the only elements of O with T2 <= 6 are the six roots of unity:
        // T2 >= 6 |N|^(1/3) with equality iff every |sigma| = 1
        let order = NumberFieldOrder::new(2).unwrap();
        let whole = IdealHnf::whole_ring();
        let (rows, gram) = ideal_lll(&order, &whole.rows);
        let six = RealCubic::from_int(order.cube, 6);
        let found = enumerate_t2(&gram, &six, 100_000).unwrap();
        assert_eq!(found.len(), 3, "three +- pairs of torsion units");
        for coords in &found {
            // map back to order coordinates and check it is a root of unity
            let mut v = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
            for (t, c) in coords.iter().enumerate() {
                for s in 0..6 {
                    let add = c * &rows[(t, s)];
                    v[s] += add;
                }
            }
            let el = FieldElement::from_int_coords(&v);
            let n = order.absolute_norm(&el);
            assert_eq!(n.abs(), BigRational::one());
            // sixth power is 1
            let p6 = order.pow(&el, 6);
            assert_eq!(p6, order.el_one());
        }
    }

    #[test]
    fn enumeration_matches_brute_force_box() {
        let cube = Cube::new(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..8 {
            let n = 4usize;
            let g = random_gram(&mut rng, n, cube);
            // lambda_min >= 2 (G = AA^T + 2I), so Q(x) <= b implies
            // |x_i| <= sqrt(b/2)
            let bound_val = 40i64;
            let bound = rc(cube, bound_val, 1);
            let got = enumerate_t2(&g, &bound, 10_000_000).unwrap();
            // brute force over the safe box |x_i| <= 4 ( 2*16 > 40/2 ok: sqrt(20) < 4.5 )
            let mut want: Vec<Vec<BigInt>> = Vec::new();
            let r = 4i64;
            let mut x = vec![-r; n];
            'outer: loop {
                let mut q = 0i64;
                for i in 0..n {
                    for j in 0..n {
                        q += x[i] * g[i][j].c[0].to_integer().to_i64().unwrap() * x[j];
                    }
                }
                if q <= bound_val && x.iter().any(|&v| v != 0) {
                    // canonical representative: last nonzero coordinate > 0
                    let keep = x.iter().rev().find(|&&v| v != 0).map(|&v| v > 0).unwrap();
                    if keep {
                        want.push(x.iter().map(|&v| BigInt::from(v)).collect());
                    }
                }
                for i in 0..n {
                    x[i] += 1;
                    if x[i] <= r {
                        continue 'outer;
                    }
                    x[i] = -r;
                }
                break;
            }
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn enumeration_budget_errors_out() {
        let cube = Cube::new(2);
        let mut g = vec![vec![RealCubic::zero(cube); 3]; 3];
        for i in 0..3 {
            g[i][i] = RealCubic::one(cube);
        }
        let bound = rc(cube, 10_000, 1);
        let err = enumerate_t2(&g, &bound, 50);
        assert!(matches!(err, Err(LatticeError::EnumBudget(50))));
    }
}
