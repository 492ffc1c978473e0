//! Coinvariants and fixed points of p-group actions on F_p-modules, with
//! exhaustive and randomized sweeps of the nonvanishing facts.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionError {
    SingularGenerator(usize),
    /// The generated matrix group is not a p-group.
    NotPGroup { order: u64 },
    ClosureBudget { cap: u64 },
    BadDimensions,
}

impl fmt::Display for ActionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionError::SingularGenerator(i) => write!(f, "generator {i} is singular mod p"),
            ActionError::NotPGroup { order } => {
                write!(f, "generated group has order {order}, not a p-power")
            }
            ActionError::ClosureBudget { cap } => {
                write!(f, "group closure exceeded the {cap}-element budget")
            }
            ActionError::BadDimensions => write!(f, "matrix dimensions do not match"),
        }
    }
}

impl core::error::Error for ActionError {}

/// Square matrix over F_p, row major.
pub type FpMat = Vec<u8>;

fn mat_mul(p: u32, m: usize, a: &[u8], b: &[u8]) -> FpMat {
    let mut out = vec![0u8; m * m];
    for i in 0..m {
        for k in 0..m {
            let aik = a[i * m + k] as u32;
            if aik == 0 {
                continue;
            }
            for j in 0..m {
                let slot = &mut out[i * m + j];
                *slot = ((*slot as u32 + aik * b[k * m + j] as u32) % p) as u8;
            }
        }
    }
    out
}

fn identity_mat(m: usize) -> FpMat {
    let mut out = vec![0u8; m * m];
    for i in 0..m {
        out[i * m + i] = 1;
    }
    out
}

/// Row reduction; returns the rank.
fn rank_mod_p(p: u32, rows: &mut Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = mod_inv(rows[rank][col] as u32, p);
        for x in rows[rank].iter_mut() {
            *x = ((*x as u32 * inv) % p) as u8;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col] as u32;
                let pivot_row = rows[rank].clone();
                // a - f·pv == a + (p-f)·pv mod p
                for (x, &pv) in rows[r].iter_mut().zip(pivot_row.iter()) {
                    *x = ((*x as u32 + (p - f) * pv as u32) % p) as u8;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&k| (a * k) % p == 1).unwrap_or(1)
}

fn invert_mat(p: u32, m: usize, a: &[u8]) -> Option<FpMat> {
    // Gauss-Jordan on [A | I]
    let mut rows: Vec<Vec<u8>> = (0..m)
        .map(|i| {
            let mut r = a[i * m..(i + 1) * m].to_vec();
            r.extend((0..m).map(|j| u8::from(i == j)));
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..m {
        let Some(pivot) = (rank..m).find(|&r| rows[r][col] != 0) else { return None };
        rows.swap(rank, pivot);
        let inv = mod_inv(rows[rank][col] as u32, p);
        for x in rows[rank].iter_mut() {
            *x = ((*x as u32 * inv) % p) as u8;
        }
        for r in 0..m {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col] as u32;
                let pivot_row = rows[rank].clone();
                for (x, &pv) in rows[r].iter_mut().zip(pivot_row.iter()) {
                    *x = ((*x as u32 + (p - f) * pv as u32) % p) as u8;
                }
            }
        }
        rank += 1;
    }
    Some(rows.into_iter().flat_map(|r| r[m..].to_vec()).collect())
}

/// A finite p-group acting linearly on F_p^m, certified by closure
/// enumeration at construction.
#[derive(Clone, Debug)]
pub struct LinearAction {
    p: u32,
    dim: usize,
    gens: Vec<FpMat>,
    order: u64,
}

impl LinearAction {
    pub fn new(p: u32, dim: usize, gens: Vec<FpMat>, max_order: u64) -> Result<Self, ActionError> {
        for (i, g) in gens.iter().enumerate() {
            if g.len() != dim * dim {
                return Err(ActionError::BadDimensions);
            }
            if invert_mat(p, dim, g).is_none() {
                return Err(ActionError::SingularGenerator(i));
            }
        }
        let order = closure_order(p, dim, &gens, max_order)?;
        let mut o = order;
        while o % p as u64 == 0 {
            o /= p as u64;
        }
        if o != 1 {
            return Err(ActionError::NotPGroup { order });
        }
        Ok(LinearAction { p, dim, gens, order })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group_order(&self) -> u64 {
        self.order
    }

    /// Contragredient action: transpose-inverse generators.
    pub fn dual(&self) -> LinearAction {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let inv = invert_mat(self.p, self.dim, g).unwrap();
                let mut t = vec![0u8; self.dim * self.dim];
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        t[j * self.dim + i] = inv[i * self.dim + j];
                    }
                }
                t
            })
            .collect();
        LinearAction { p: self.p, dim: self.dim, gens, order: self.order }
    }

    /// Adds a generator, keeping the p-group certificate.
    pub fn with_generator(&self, g: FpMat, max_order: u64) -> Result<LinearAction, ActionError> {
        let mut gens = self.gens.clone();
        gens.push(g);
        LinearAction::new(self.p, self.dim, gens, max_order)
    }
}

fn closure_order(p: u32, dim: usize, gens: &[FpMat], max_order: u64) -> Result<u64, ActionError> {
    let mut seen: BTreeSet<FpMat> = BTreeSet::new();
    let mut queue: Vec<FpMat> = Vec::new();
    let id = identity_mat(dim);
    seen.insert(id.clone());
    queue.push(id);
    while let Some(e) = queue.pop() {
        for g in gens {
            let f = mat_mul(p, dim, &e, g);
            if seen.insert(f.clone()) {
                if seen.len() as u64 > max_order {
                    return Err(ActionError::ClosureBudget { cap: max_order });
                }
                queue.push(f);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// dim of M_G = M/(g−1)M: m minus the rank of the span of the columns of
/// (g−1) over the generators (the augmentation submodule is generated by
/// the generator differences).
pub fn coinvariant_dim(action: &LinearAction) -> usize {
    let (p, m) = (action.p, action.dim);
    let mut cols: Vec<Vec<u8>> = Vec::new();
    for g in &action.gens {
        for j in 0..m {
            let col: Vec<u8> = (0..m)
                .map(|i| {
                    let v = g[i * m + j] as u32 + if i == j { p - 1 } else { 0 };
                    (v % p) as u8
                })
                .collect();
            if col.iter().any(|&c| c != 0) {
                cols.push(col);
            }
        }
    }
    m - rank_mod_p(p, &mut cols)
}

/// dim of the joint kernel of (g−1) over the generators.
pub fn fixed_dim(action: &LinearAction) -> usize {
    let (p, m) = (action.p, action.dim);
    // stack the rows of all (g − 1); kernel dim = m − rank
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for g in &action.gens {
        for i in 0..m {
            let row: Vec<u8> = (0..m)
                .map(|j| {
                    let v = g[i * m + j] as u32 + if i == j { p - 1 } else { 0 };
                    (v % p) as u8
                })
                .collect();
            if row.iter().any(|&c| c != 0) {
                rows.push(row);
            }
        }
    }
    m - rank_mod_p(p, &mut rows)
}

/// One verified instance inside a sweep report.
#[derive(Clone, Debug)]
pub struct SweepViolation {
    pub dim: usize,
    pub group_order: u64,
    pub coinvariant_dim: usize,
    pub fixed_dim: usize,
    pub what: &'static str,
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub prime: u32,
    pub instances: u64,
    pub exhaustive_instances: u64,
    pub randomized_instances: u64,
    pub max_dim: usize,
    pub violations: Vec<SweepViolation>,
    /// True when the randomized budget was cut short.
    pub truncated: bool,
}

/// Sweeps p-group actions: exhaustively over upper-unitriangular generator
/// pairs up to `max_dim`, then `random_budget` randomized instances
/// (conjugated unitriangular generators). Checks that coinvariants and
/// fixed points are nonzero and that the contragredient duality holds.
pub fn sweep_lemma(
    p: u32,
    max_dim: usize,
    max_group_order_exp: u32,
    random_budget: u64,
    seed: u64,
) -> SweepReport {
    let max_order = (p as u64).pow(max_group_order_exp);
    let mut report = SweepReport { prime: p, max_dim, ..SweepReport::default() };

    let mut check = |action: &LinearAction, report: &mut SweepReport| {
        report.instances += 1;
        let cd = coinvariant_dim(action);
        let fd = fixed_dim(action);
        if cd < 1 {
            report.violations.push(SweepViolation {
                dim: action.dim(),
                group_order: action.group_order(),
                coinvariant_dim: cd,
                fixed_dim: fd,
                what: "coinvariants vanish",
            });
        }
        if fd < 1 {
            report.violations.push(SweepViolation {
                dim: action.dim(),
                group_order: action.group_order(),
                coinvariant_dim: cd,
                fixed_dim: fd,
                what: "fixed points vanish",
            });
        }
        // duality: coinvariant dim equals fixed dim of the dual action
        let dual_fd = fixed_dim(&action.dual());
        if cd != dual_fd {
            report.violations.push(SweepViolation {
                dim: action.dim(),
                group_order: action.group_order(),
                coinvariant_dim: cd,
                fixed_dim: dual_fd,
                what: "contragredient duality mismatch",
            });
        }
    };

    // exhaustive part: all upper-unitriangular matrices, generator sets of
    // size one and two
    for m in 1..=max_dim {
        let tris = unitriangular_all(p, m);
        for (i, a) in tris.iter().enumerate() {
            if let Ok(action) = LinearAction::new(p, m, vec![a.clone()], max_order) {
                check(&action, &mut report);
                report.exhaustive_instances += 1;
            }
            for b in tris.iter().skip(i + 1) {
                if let Ok(action) = LinearAction::new(p, m, vec![a.clone(), b.clone()], max_order) {
                    check(&action, &mut report);
                    report.exhaustive_instances += 1;
                }
            }
        }
    }

    // randomized part: conjugated unitriangular generators
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_budget {
        let m = rng.random_range(1..=max_dim);
        let count = rng.random_range(1..=2usize);
        let Some(s) = random_invertible(&mut rng, p, m) else { continue };
        let s_inv = invert_mat(p, m, &s).unwrap();
        let gens: Vec<FpMat> = (0..count)
            .map(|_| {
                let t = random_unitriangular(&mut rng, p, m);
                mat_mul(p, m, &mat_mul(p, m, &s, &t), &s_inv)
            })
            .collect();
        match LinearAction::new(p, m, gens, max_order) {
            Ok(action) => {
                check(&action, &mut report);
                report.randomized_instances += 1;
            }
            Err(ActionError::ClosureBudget { .. }) => {
                report.truncated = true;
            }
            Err(_) => {}
        }
    }
    report
}

fn unitriangular_all(p: u32, m: usize) -> Vec<FpMat> {
    let slots: Vec<(usize, usize)> =
        (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let total = (p as u64).pow(slots.len() as u32);
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut mat = identity_mat(m);
        let mut c = code;
        for &(i, j) in &slots {
            mat[i * m + j] = (c % p as u64) as u8;
            c /= p as u64;
        }
        out.push(mat);
    }
    out
}

fn random_unitriangular<R: Rng>(rng: &mut R, p: u32, m: usize) -> FpMat {
    let mut mat = identity_mat(m);
    for i in 0..m {
        for j in i + 1..m {
            mat[i * m + j] = rng.random_range(0..p) as u8;
        }
    }
    mat
}

fn random_invertible<R: Rng>(rng: &mut R, p: u32, m: usize) -> Option<FpMat> {
    for _ in 0..32 {
        let mat: FpMat = (0..m * m).map(|_| rng.random_range(0..p) as u8).collect();
        if invert_mat(p, m, &mat).is_some() {
            return Some(mat);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_action_coinvariants_full() {
        let a = LinearAction::new(2, 3, vec![identity_mat(3)], 1 << 16).unwrap();
        assert_eq!(coinvariant_dim(&a), 3);
        assert_eq!(fixed_dim(&a), 3);
        assert_eq!(a.group_order(), 1);
    }

    #[test]
    fn cyclic_shift_regular_representation() {
        for p in [2u32, 3, 5] {
            let m = p as usize;
            let mut shift = vec![0u8; m * m];
            for i in 0..m {
                shift[i * m + (i + 1) % m] = 1;
            }
            let a = LinearAction::new(p, m, vec![shift], 1 << 16).unwrap();
            assert_eq!(a.group_order(), p as u64);
            assert_eq!(coinvariant_dim(&a), 1, "p={p}");
            assert_eq!(fixed_dim(&a), 1, "p={p}");
        }
    }

    #[test]
    fn single_jordan_block() {
        let g = vec![1, 1, 0, 1];
        let a = LinearAction::new(2, 2, vec![g], 1 << 16).unwrap();
        assert_eq!(coinvariant_dim(&a), 1);
        assert_eq!(fixed_dim(&a), 1);
    }

    #[test]
    fn rejects_non_p_group() {
        // order-3 permutation matrix is not a 2-group
        let g = vec![0, 1, 0, 0, 0, 1, 1, 0, 0];
        let e = LinearAction::new(2, 3, vec![g], 1 << 16).unwrap_err();
        assert!(matches!(e, ActionError::NotPGroup { order: 3 }));
    }

    #[test]
    fn monotonicity_adding_generators() {
        let a = LinearAction::new(2, 3, vec![identity_mat(3)], 1 << 16).unwrap();
        let mut g = identity_mat(3);
        g[0 * 3 + 1] = 1;
        let b = a.with_generator(g, 1 << 16).unwrap();
        assert!(coinvariant_dim(&b) <= coinvariant_dim(&a));
    }

    #[test]
    fn exhaustive_small_sweep_passes() {
        let r = sweep_lemma(2, 2, 4, 0, 7);
        assert!(r.violations.is_empty());
        assert!(r.exhaustive_instances > 0);
    }

    #[test]
    fn randomized_sweep_passes() {
        let r = sweep_lemma(3, 3, 6, 300, 42);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.randomized_instances > 0);
    }

    #[test]
    fn dim_one_base_case() {
        let r = sweep_lemma(2, 1, 4, 0, 1);
        assert!(r.violations.is_empty());
        // Aut(Z/2) is trivial: only the trivial action exists
        assert_eq!(r.instances, 1);
    }
}
