//! Exact integer linear algebra: Smith normal form, kernels, solvers and
//! abelian invariants of presented groups.
//!
//! All public arithmetic is arbitrary precision; intermediate entries in a
//! Smith reduction can far exceed machine range even for small inputs. A
//! p-adic variant working mod `p^M` is provided for the tower engine, which
//! only ever needs p-parts of divisors.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::presentation::Presentation;

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        IntMat { rows: r, cols: c, data }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        IntMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += c * row[b]
    fn row_add(&mut self, a: usize, b: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self[(b, j)] * c;
            self[(a, j)] += t;
        }
    }

    /// col[a] += c * col[b]
    fn col_add(&mut self, a: usize, b: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self[(i, b)] * c;
            self[(i, a)] += t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, " {}", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Result of a Smith reduction `U · A · V = D`.
pub struct Snf {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub divisors: Vec<BigInt>,
    pub rank: usize,
    pub left: Option<IntMat>,
    pub right: Option<IntMat>,
    rows: usize,
    cols: usize,
}

/// Smith normal form by least-absolute-value pivoting.
pub fn smith_normal_form(a: &IntMat, with_transforms: bool) -> Snf {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut u = if with_transforms { Some(IntMat::identity(rows)) } else { None };
    let mut v = if with_transforms { Some(IntMat::identity(cols)) } else { None };

    let mut t = 0usize;
    while t < rows.min(cols) {
        // Locate a pivot of least absolute value in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[(i, j)].is_zero()
                    && pivot.map_or(true, |(pi, pj)| m[(i, j)].abs() < m[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap_rows(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        m.swap_cols(t, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }

        'reduce: loop {
            // Clear column t with row operations.
            for r in t + 1..rows {
                if m[(r, t)].is_zero() {
                    continue;
                }
                let q = -(&m[(r, t)] / &m[(t, t)]);
                m.row_add(r, t, &q);
                if let Some(u) = u.as_mut() {
                    u.row_add(r, t, &q);
                }
                if !m[(r, t)].is_zero() {
                    // Remainder is strictly smaller: promote it to pivot.
                    m.swap_rows(r, t);
                    if let Some(u) = u.as_mut() {
                        u.swap_rows(r, t);
                    }
                    continue 'reduce;
                }
            }
            // Clear row t with column operations.
            for c in t + 1..cols {
                if m[(t, c)].is_zero() {
                    continue;
                }
                let q = -(&m[(t, c)] / &m[(t, t)]);
                m.col_add(c, t, &q);
                if let Some(v) = v.as_mut() {
                    v.col_add(c, t, &q);
                }
                if !m[(t, c)].is_zero() {
                    m.swap_cols(c, t);
                    if let Some(v) = v.as_mut() {
                        v.swap_cols(c, t);
                    }
                    continue 'reduce;
                }
            }
            // Enforce the divisibility chain before advancing.
            let mut fixed = true;
            'chain: for r in t + 1..rows {
                for c in t + 1..cols {
                    if !(&m[(r, c)] % &m[(t, t)]).is_zero() {
                        m.row_add(t, r, &BigInt::one());
                        if let Some(u) = u.as_mut() {
                            u.row_add(t, r, &BigInt::one());
                        }
                        fixed = false;
                        break 'chain;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if m[(t, t)].sign() == Sign::Minus {
            m.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
        t += 1;
    }

    let divisors: Vec<BigInt> = (0..t).map(|i| m[(i, i)].clone()).collect();
    Snf { divisors, rank: t, left: u, right: v, rows, cols }
}

impl Snf {
    /// Basis of the integer kernel lattice of the original matrix
    /// (requires transforms).
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let v = self.right.as_ref().expect("kernel_basis needs transforms");
        let mut out = Vec::new();
        for j in self.rank..self.cols {
            out.push((0..self.cols).map(|i| v[(i, j)].clone()).collect());
        }
        out
    }
}

/// Repeated exact solving of `A·x = b` through a cached Smith decomposition.
pub struct Solver {
    snf: Snf,
}

impl Solver {
    pub fn new(a: &IntMat) -> Self {
        Solver { snf: smith_normal_form(a, true) }
    }

    pub fn rank(&self) -> usize {
        self.snf.rank
    }

    /// Returns some integer solution of `A·x = b`, or `None` if none exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let u = self.snf.left.as_ref().unwrap();
        let v = self.snf.right.as_ref().unwrap();
        assert_eq!(b.len(), self.snf.rows);
        let mut ub = vec![BigInt::zero(); self.snf.rows];
        for (i, entry) in ub.iter_mut().enumerate() {
            for j in 0..self.snf.rows {
                *entry += &u[(i, j)] * &b[j];
            }
        }
        let mut y = vec![BigInt::zero(); self.snf.cols];
        for i in 0..self.snf.rows {
            if i < self.snf.rank {
                let (q, r) = ub[i].div_rem(&self.snf.divisors[i]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !ub[i].is_zero() {
                return None;
            }
        }
        let mut x = vec![BigInt::zero(); self.snf.cols];
        for (i, entry) in x.iter_mut().enumerate() {
            for j in 0..self.snf.cols {
                if !y[j].is_zero() {
                    *entry += &v[(i, j)] * &y[j];
                }
            }
        }
        Some(x)
    }
}

/// Canonical invariants of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    /// Torsion divisors `d₁ | d₂ | …`, each > 1.
    pub torsion: Vec<BigUint>,
}

/// Abelian invariants (H₁) of the presented group via the relator
/// exponent-sum matrix.
pub fn abelian_invariants(pres: &Presentation) -> AbelianInvariants {
    let d = pres.gen_count() as usize;
    let rows: Vec<Vec<i64>> = pres
        .relators()
        .iter()
        .map(|r| {
            let mut row = vec![0i64; d];
            for l in r.letters() {
                row[l.gen as usize] += l.exp;
            }
            row
        })
        .collect();
    let m = if rows.is_empty() { IntMat::zeros(0, d) } else { IntMat::from_i64_rows(&rows) };
    let snf = smith_normal_form(&m, false);
    let torsion = snf
        .divisors
        .iter()
        .filter(|dv| **dv > BigInt::one())
        .map(|dv| dv.to_biguint().unwrap())
        .collect();
    AbelianInvariants { free_rank: d - snf.rank, torsion }
}

/// Largest e with p^e dividing n; n must be positive.
pub fn p_part(n: &BigUint, p: u64) -> u32 {
    assert!(!n.is_zero(), "p_part of zero");
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        n = q;
        e += 1;
    }
}

// ---------------------------------------------------------------------------
// p-adic Smith reduction mod p^M
// ---------------------------------------------------------------------------

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn inv_mod(a: i128, m: i128) -> i128 {
    let (g, x, _) = egcd(a.rem_euclid(m), m);
    debug_assert_eq!(g, 1);
    x.rem_euclid(m)
}

fn vp(mut a: i128, p: i128) -> u32 {
    debug_assert!(a != 0);
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    v
}

/// p-exponents of the Smith divisors of an integer matrix, computed mod
/// `p^mod_exp`. Returns `None` when the matrix does not have full column
/// rank mod `p^mod_exp` (that is, some divisor exponent is ≥ `mod_exp`).
///
/// Agrees with the p-parts of [`smith_normal_form`] whenever it returns a
/// value; the tower engine arranges its lattices so this always suffices.
pub fn snf_p_exponents(rows: &[Vec<i128>], cols: usize, p: u32, mod_exp: u32) -> Option<Vec<u32>> {
    let p = p as i128;
    let modulus = p.checked_pow(mod_exp).expect("p^M overflows i128");
    assert!(modulus <= 1i128 << 62, "modulus too large for i128 products");
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols);
            r.iter().map(|&x| x.rem_euclid(modulus)).collect()
        })
        .collect();
    let nrows = m.len();
    let mut exps = Vec::with_capacity(cols);
    let mut t = 0usize;
    while t < cols {
        // Global minimum valuation pivot keeps the divisor chain sorted.
        let mut best: Option<(usize, usize, u32)> = None;
        for i in t..nrows {
            for j in t..cols {
                if m[i][j] != 0 {
                    let v = vp(m[i][j], p);
                    if best.map_or(true, |(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, v)) = best else { return None };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        // Normalise pivot to exactly p^v.
        let unit = m[t][t] / p.pow(v);
        let unit_inv = inv_mod(unit.rem_euclid(modulus), modulus);
        for j in t..cols {
            m[t][j] = (m[t][j] % modulus * unit_inv) % modulus;
        }
        let pv = p.pow(v);
        for i in t + 1..nrows {
            if m[i][t] != 0 {
                let f = m[i][t] / pv;
                for j in t..cols {
                    m[i][j] = (m[i][j] - (f % modulus) * m[t][j]).rem_euclid(modulus);
                }
            }
        }
        // Column clearing does not change later divisors; entries in row t
        // beyond the pivot are killed by column ops we do not need to track.
        for j in t + 1..cols {
            m[t][j] = 0;
        }
        exps.push(v);
        t += 1;
    }
    Some(exps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{Mode, PresentationLimits};
    use crate::word::{commutator, Word};
    use alloc::string::ToString;

    #[test]
    fn snf_identity() {
        let m = IntMat::identity(3);
        let s = smith_normal_form(&m, false);
        assert_eq!(s.rank, 3);
        assert!(s.divisors.iter().all(|d| d.is_one()));
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMat::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&m, false);
        assert_eq!(s.divisors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMat::zeros(2, 3);
        let s = smith_normal_form(&m, false);
        assert_eq!(s.rank, 0);
        assert!(s.divisors.is_empty());
    }

    #[test]
    fn snf_divisor_chain_holds() {
        let m = IntMat::from_i64_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let s = smith_normal_form(&m, true);
        for w in s.divisors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "chain broken: {:?}", s.divisors);
        }
        // Determinant magnitude is the product of divisors for square full rank.
        let prod: BigInt = s.divisors.iter().product();
        assert_eq!(prod, BigInt::from(624));
    }

    /// 3x3 determinantal-gcd oracle: d1 = gcd of entries, d1·d2 = gcd of 2x2
    /// minors, d1·d2·d3 = |det|.
    fn gcd_minor_divisors(m: &IntMat) -> Vec<BigInt> {
        use num_integer::Integer as _;
        assert_eq!((m.rows(), m.cols()), (3, 3));
        let mut g1 = BigInt::zero();
        for i in 0..3 {
            for j in 0..3 {
                g1 = g1.gcd(&m[(i, j)]);
            }
        }
        let mut g2 = BigInt::zero();
        for i1 in 0..3 {
            for i2 in i1 + 1..3 {
                for j1 in 0..3 {
                    for j2 in j1 + 1..3 {
                        let minor = &m[(i1, j1)] * &m[(i2, j2)] - &m[(i1, j2)] * &m[(i2, j1)];
                        g2 = g2.gcd(&minor);
                    }
                }
            }
        }
        let det = &m[(0, 0)] * (&m[(1, 1)] * &m[(2, 2)] - &m[(1, 2)] * &m[(2, 1)])
            - &m[(0, 1)] * (&m[(1, 0)] * &m[(2, 2)] - &m[(1, 2)] * &m[(2, 0)])
            + &m[(0, 2)] * (&m[(1, 0)] * &m[(2, 1)] - &m[(1, 1)] * &m[(2, 0)]);
        let mut out = Vec::new();
        if g1.is_zero() {
            return out;
        }
        out.push(g1.clone());
        if g2.is_zero() {
            return out;
        }
        out.push(&g2 / &g1);
        if det.is_zero() {
            return out;
        }
        out.push(det.abs() / &g2);
        out
    }

    #[test]
    fn snf_matches_minor_gcd_oracle() {
        // Small deterministic pseudo-random sweep.
        let mut seed = 0x12345678u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as i64 % 7) - 3
        };
        for _ in 0..200 {
            let rows: Vec<Vec<i64>> = (0..3).map(|_| (0..3).map(|_| next()).collect()).collect();
            let m = IntMat::from_i64_rows(&rows);
            let s = smith_normal_form(&m, false);
            let oracle = gcd_minor_divisors(&m);
            assert_eq!(s.divisors, oracle, "mismatch on {:?}", rows);
        }
    }

    #[test]
    fn kernel_and_solver() {
        // x + 2y + 3z = 0 kernel has rank 2; solve a compatible system.
        let m = IntMat::from_i64_rows(&[vec![1, 2, 3]]);
        let s = smith_normal_form(&m, true);
        let ker = s.kernel_basis();
        assert_eq!(ker.len(), 2);
        for k in &ker {
            let dot: BigInt = k
                .iter()
                .zip([1i64, 2, 3])
                .map(|(a, b)| a * BigInt::from(b))
                .sum();
            assert!(dot.is_zero());
        }
        let solver = Solver::new(&m);
        let x = solver.solve(&[BigInt::from(6)]).unwrap();
        let dot: BigInt = x.iter().zip([1i64, 2, 3]).map(|(a, b)| a * BigInt::from(b)).sum();
        assert_eq!(dot, BigInt::from(6));
        // 2x = 1 has no integer solution.
        let m2 = IntMat::from_i64_rows(&[vec![2]]);
        assert!(Solver::new(&m2).solve(&[BigInt::one()]).is_none());
    }

    #[test]
    fn abelian_invariants_examples() {
        let lim = PresentationLimits::default();
        let torus = Presentation::new(
            "t",
            vec!["x".to_string(), "y".to_string()],
            vec![commutator(&Word::generator(0), &Word::generator(1))],
            Mode::Discrete,
            vec![2],
            &lim,
        )
        .unwrap();
        assert_eq!(
            abelian_invariants(&torus),
            AbelianInvariants { free_rank: 2, torsion: vec![] }
        );

        let witness = Presentation::new(
            "w",
            vec!["x".to_string(), "y".to_string()],
            vec![
                Word::from_letters([(1, 2)]),
                commutator(&Word::generator(0), &Word::generator(1)),
            ],
            Mode::Discrete,
            vec![2],
            &lim,
        )
        .unwrap();
        assert_eq!(
            abelian_invariants(&witness),
            AbelianInvariants { free_rank: 1, torsion: vec![BigUint::from(2u32)] }
        );

        let cyclic = Presentation::new(
            "c",
            vec!["x".to_string()],
            vec![Word::from_letters([(0, 4)])],
            Mode::Discrete,
            vec![2],
            &lim,
        )
        .unwrap();
        assert_eq!(
            abelian_invariants(&cyclic),
            AbelianInvariants { free_rank: 0, torsion: vec![BigUint::from(4u32)] }
        );
    }

    #[test]
    fn p_part_examples() {
        assert_eq!(p_part(&BigUint::from(64u32), 2), 6);
        assert_eq!(p_part(&BigUint::from(1u32), 5), 0);
        assert_eq!(p_part(&BigUint::from(12u32), 3), 1);
    }

    #[test]
    fn p_adic_matches_bigint() {
        let mut seed = 0xdeadbeefu64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as i64 % 17) - 8
        };
        for p in [2u32, 3] {
            for _ in 0..100 {
                let rows: Vec<Vec<i64>> = (0..4).map(|_| (0..3).map(|_| next()).collect()).collect();
                let m = IntMat::from_i64_rows(&rows);
                let s = smith_normal_form(&m, false);
                let i128_rows: Vec<Vec<i128>> =
                    rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
                let got = snf_p_exponents(&i128_rows, 3, p, 20);
                if s.rank == 3 {
                    let want: Vec<u32> = s
                        .divisors
                        .iter()
                        .map(|d| p_part(&d.to_biguint().unwrap(), p as u64))
                        .collect();
                    assert_eq!(got, Some(want), "p={p} rows={rows:?}");
                } else {
                    assert_eq!(got, None, "p={p} rows={rows:?}");
                }
            }
        }
    }
}
