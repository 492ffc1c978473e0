//! Echelonised generating tables for finite p-groups along a graded central
//! filtration — noncommutative row reduction.
//!
//! A [`GradedGroup`] exposes a filtration `M_1 ⊇ M_2 ⊇ …` with elementary
//! abelian layers and computable leading coordinates. A [`GeneratingTable`]
//! maintains a set of pivots, echelonised within each weight layer and
//! closed under p-th powers, pairwise commutators and (for normal closures)
//! ambient conjugation. Membership, order and constructive expressions all
//! reduce to sifting.

use alloc::vec;
use alloc::vec::Vec;

use crate::magnus::{Algebra, TruncPoly};
use alloc::sync::Arc;

pub trait GradedGroup {
    type Elem: Clone;

    fn one(&self) -> Self::Elem;
    fn is_one(&self, e: &Self::Elem) -> bool;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn prime(&self) -> u32;
    /// Weights run 1..weight_count; elements of deeper weight are identity.
    fn weight_count(&self) -> usize;
    /// Filtration depth of an element; `None` for the identity.
    fn weight(&self, e: &Self::Elem) -> Option<usize>;
    fn layer_dim(&self, w: usize) -> usize;
    /// Coordinates of `e` in the elementary abelian layer at its weight.
    fn leading_coords(&self, e: &Self::Elem) -> Vec<u8>;
    /// Generators of the ambient group, used for normal closures.
    fn ambient_generators(&self) -> Vec<Self::Elem>;

    fn pow(&self, e: &Self::Elem, n: i64) -> Self::Elem {
        if n < 0 {
            return self.pow(&self.inv(e), -n);
        }
        let mut acc = self.one();
        let mut base = e.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ai = self.inv(a);
        let bi = self.inv(b);
        self.mul(&self.mul(&self.mul(&ai, &bi), a), b)
    }
}

/// Unit group of a truncated Magnus algebra, graded by filtration degree.
pub struct MagnusUnits {
    alg: Arc<Algebra>,
}

impl MagnusUnits {
    pub fn new(alg: Arc<Algebra>) -> Self {
        MagnusUnits { alg }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    /// log_p of the full group order: Σ layer dims (free restricted Lie
    /// algebra dimensions per weight).
    pub fn log_order(&self) -> usize {
        // dims of the graded layers of the filtration of the free group,
        // Σ_{i·p^j = w} (Witt number of i)
        (1..self.alg.bound()).map(|w| self.layer_dim_graded(w)).sum()
    }

    fn layer_dim_graded(&self, w: usize) -> usize {
        let d = self.alg.gen_count() as u64;
        let p = self.alg.prime() as u64;
        let mut total = 0u64;
        let mut i = w as u64;
        loop {
            total += witt_number(d, i);
            if i % p != 0 {
                break;
            }
            i /= p;
        }
        total as usize
    }
}

/// Necklace (Witt) numbers: dimension of the degree-i layer of the free Lie
/// algebra on d generators.
pub fn witt_number(d: u64, i: u64) -> u64 {
    let mut sum: i128 = 0;
    for e in 1..=i {
        if i % e == 0 {
            let mu = moebius(i / e);
            if mu != 0 {
                sum += mu as i128 * (d as i128).pow(e as u32);
            }
        }
    }
    (sum / i as i128) as u64
}

fn moebius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return 0;
            }
            mu = -mu;
        }
        f += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

impl GradedGroup for MagnusUnits {
    type Elem = TruncPoly;

    fn one(&self) -> TruncPoly {
        self.alg.one()
    }

    fn is_one(&self, e: &TruncPoly) -> bool {
        e.is_one()
    }

    fn mul(&self, a: &TruncPoly, b: &TruncPoly) -> TruncPoly {
        a.mul(b)
    }

    fn inv(&self, a: &TruncPoly) -> TruncPoly {
        a.inverse()
    }

    fn prime(&self) -> u32 {
        self.alg.prime()
    }

    fn weight_count(&self) -> usize {
        self.alg.bound()
    }

    fn weight(&self, e: &TruncPoly) -> Option<usize> {
        e.min_positive_degree()
    }

    fn layer_dim(&self, w: usize) -> usize {
        let mut dim = 1usize;
        for _ in 0..w {
            dim *= self.alg.gen_count();
        }
        dim
    }

    fn leading_coords(&self, e: &TruncPoly) -> Vec<u8> {
        let w = self.weight(e).expect("leading_coords of identity");
        let mut start = 1usize;
        for k in 1..w {
            start += self.layer_dim(k);
        }
        e.bytes()[start..start + self.layer_dim(w)].to_vec()
    }

    fn ambient_generators(&self) -> Vec<TruncPoly> {
        (0..self.alg.gen_count() as u16).map(|g| self.alg.gen_image(g)).collect()
    }
}

pub struct Pivot<E> {
    pub elem: E,
    pub weight: usize,
    pub coords: Vec<u8>,
    pub lead_col: usize,
}

/// Echelonised, closure-complete generating sequence of a subgroup.
pub struct GeneratingTable<G: GradedGroup> {
    grp: Arc<G>,
    pivots: Vec<Pivot<G::Elem>>,
    /// Pivot indices per weight, in insertion order.
    by_weight: Vec<Vec<usize>>,
    normal: bool,
}

impl<G: GradedGroup> GeneratingTable<G> {
    /// `normal`: close under ambient conjugation (normal closure table).
    pub fn new(grp: Arc<G>, normal: bool) -> Self {
        let weights = grp.weight_count();
        GeneratingTable {
            grp,
            pivots: Vec::new(),
            by_weight: vec![Vec::new(); weights + 1],
            normal,
        }
    }

    pub fn group(&self) -> &Arc<G> {
        &self.grp
    }

    pub fn clone_table(&self) -> GeneratingTable<G> {
        GeneratingTable {
            grp: Arc::clone(&self.grp),
            pivots: self
                .pivots
                .iter()
                .map(|p| Pivot {
                    elem: p.elem.clone(),
                    weight: p.weight,
                    coords: p.coords.clone(),
                    lead_col: p.lead_col,
                })
                .collect(),
            by_weight: self.by_weight.clone(),
            normal: self.normal,
        }
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot(&self, idx: usize) -> &Pivot<G::Elem> {
        &self.pivots[idx]
    }

    pub fn pivots(&self) -> &[Pivot<G::Elem>] {
        &self.pivots
    }

    /// log_p of the subgroup order.
    pub fn log_order(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `e` against the table. Returns the residual (`None` when
    /// absorbed) and the expression of the absorbed part over pivot indices:
    /// `e = Π pivots[i]^{f_i} · residual` in witness order.
    pub fn sift(&self, e: G::Elem) -> (Option<G::Elem>, Vec<(usize, u32)>) {
        let p = self.grp.prime();
        let mut witness = Vec::new();
        let mut e = e;
        loop {
            if self.grp.is_one(&e) {
                return (None, witness);
            }
            let w = match self.grp.weight(&e) {
                Some(w) if w < self.grp.weight_count() => w,
                _ => return (None, witness),
            };
            let mut coords = self.grp.leading_coords(&e);
            let mut moved = false;
            for &pi in &self.by_weight[w] {
                let piv = &self.pivots[pi];
                let c = coords[piv.lead_col] as u32;
                if c != 0 {
                    // pivots are normalised to lead coefficient 1
                    let f = c;
                    e = self.grp.mul(&self.grp.pow(&piv.elem, -(f as i64)), &e);
                    for (a, &b) in coords.iter_mut().zip(piv.coords.iter()) {
                        *a = ((*a as u32 + (p - b as u32 % p) * f) % p) as u8;
                    }
                    witness.push((pi, f));
                    moved = true;
                }
            }
            if coords.iter().all(|&c| c == 0) {
                // dropped to deeper weight; recompute from the element
                if !moved {
                    // weight() said w but coords vanished: inconsistent group
                    debug_assert!(false, "leading coords vanished without reduction");
                    return (Some(e), witness);
                }
                continue;
            }
            return (Some(e), witness);
        }
    }

    /// Membership test.
    pub fn contains(&self, e: &G::Elem) -> bool {
        self.sift(e.clone()).0.is_none()
    }

    /// Inserts generators and saturates the closure. Every new pivot
    /// enqueues its p-th power, commutators with all existing pivots and
    /// (for normal tables) commutators with the ambient generators.
    pub fn close(&mut self, gens: &[G::Elem]) {
        let mut work: Vec<G::Elem> = gens.to_vec();
        let ambient = if self.normal { self.grp.ambient_generators() } else { Vec::new() };
        let wc = self.grp.weight_count();
        while let Some(g) = work.pop() {
            let (res, _) = self.sift(g);
            let Some(res) = res else { continue };
            // normalise the lead coefficient to 1
            let coords = self.grp.leading_coords(&res);
            let w = self.grp.weight(&res).unwrap();
            let lead_col = coords.iter().position(|&c| c != 0).unwrap();
            let lead = coords[lead_col] as i64;
            let s = mod_inverse(lead, self.grp.prime() as i64);
            let elem = self.grp.pow(&res, s);
            let coords = self.grp.leading_coords(&elem);
            debug_assert_eq!(coords[lead_col], 1);

            work.push(self.grp.pow(&elem, self.grp.prime() as i64));
            for piv in &self.pivots {
                if piv.weight + w < wc {
                    work.push(self.grp.commutator(&elem, &piv.elem));
                }
            }
            for a in &ambient {
                if w + 1 < wc {
                    work.push(self.grp.commutator(&elem, a));
                }
            }
            let idx = self.pivots.len();
            self.pivots.push(Pivot { elem, weight: w, coords, lead_col });
            self.by_weight[w].push(idx);
        }
    }
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    // m is a small prime here
    let mut inv = 1i64;
    let a = a.rem_euclid(m);
    for k in 1..m {
        if (a * k) % m == 1 {
            inv = k;
            break;
        }
    }
    inv
}
