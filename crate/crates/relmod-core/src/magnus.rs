//! Truncated mod-p free algebra and the Magnus embedding.
//!
//! Generators map to `1 + X_g` in the free associative algebra over F_p with
//! all monomials of degree ≥ L cut off. The filtration subgroup `M_n`
//! consists of the words whose image differs from 1 only in degrees ≥ n;
//! [`zassenhaus_degree`] reads that off the image, and [`mn_generators`]
//! produces the standard commutator-power normal generating set for `M_n`.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::word::{left_normed_commutators, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MagnusError {
    /// A size or memory bound would be exceeded; carries the bound name.
    Resource { what: &'static str, needed: u64, cap: u64 },
}

impl fmt::Display for MagnusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MagnusError::Resource { what, needed, cap } => {
                write!(f, "resource bound exceeded: {what} needs {needed}, cap {cap}")
            }
        }
    }
}

impl core::error::Error for MagnusError {}

/// Shared context for one truncated algebra: prime, generator count and
/// truncation degree. Monomials of degree w are indexed base-`gens`.
pub struct Algebra {
    p: u32,
    gens: usize,
    bound: usize,
    offsets: Vec<usize>,
    total: usize,
}

impl Algebra {
    /// `bound` is the truncation degree L ≥ 1: monomials of degree < L are
    /// kept. Fails when the monomial count would exceed `max_monomials`.
    pub fn new(p: u32, gens: usize, bound: usize, max_monomials: usize) -> Result<Arc<Algebra>, MagnusError> {
        assert!(bound >= 1, "truncation degree must be at least 1");
        assert!(p >= 2 && p < 256, "prime must fit in a byte");
        let mut offsets = Vec::with_capacity(bound + 1);
        let mut total = 0usize;
        let mut layer = 1usize;
        for w in 0..bound {
            offsets.push(total);
            total = total
                .checked_add(layer)
                .filter(|&t| t <= max_monomials)
                .ok_or(MagnusError::Resource {
                    what: "monomials",
                    needed: u64::MAX,
                    cap: max_monomials as u64,
                })?;
            if w + 1 < bound {
                layer = layer.checked_mul(gens.max(1)).ok_or(MagnusError::Resource {
                    what: "monomials",
                    needed: u64::MAX,
                    cap: max_monomials as u64,
                })?;
            }
        }
        offsets.push(total);
        Ok(Arc::new(Algebra { p, gens, bound, offsets, total }))
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn gen_count(&self) -> usize {
        self.gens
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn monomial_count(&self) -> usize {
        self.total
    }

    fn layer(&self, w: usize) -> core::ops::Range<usize> {
        self.offsets[w]..self.offsets[w + 1]
    }

    pub fn one(self: &Arc<Self>) -> TruncPoly {
        let mut data = vec![0u8; self.total];
        data[0] = 1;
        TruncPoly { alg: Arc::clone(self), data }
    }

    /// Image `1 + X_g` of a generator.
    pub fn gen_image(self: &Arc<Self>, g: u16) -> TruncPoly {
        assert!((g as usize) < self.gens);
        let mut poly = self.one();
        if self.bound > 1 {
            poly.data[self.offsets[1] + g as usize] = 1;
        }
        poly
    }

    /// Magnus image of a word: generators extend multiplicatively, inverses
    /// through the finite geometric series.
    pub fn eval(self: &Arc<Self>, w: &Word) -> TruncPoly {
        let mut acc = self.one();
        for l in w.letters() {
            let base = self.gen_image(l.gen);
            acc = acc.mul(&base.pow(l.exp));
        }
        acc
    }
}

/// Element of a truncated algebra; invertible iff its constant term is.
#[derive(Clone)]
pub struct TruncPoly {
    alg: Arc<Algebra>,
    data: Vec<u8>,
}

impl PartialEq for TruncPoly {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}
impl Eq for TruncPoly {}
impl PartialOrd for TruncPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for TruncPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.data.cmp(&other.data)
    }
}

impl TruncPoly {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn is_one(&self) -> bool {
        self.data[0] == 1 && self.data[1..].iter().all(|&c| c == 0)
    }

    pub fn coeff(&self, monomial: &[u16]) -> u8 {
        let w = monomial.len();
        assert!(w < self.alg.bound);
        let mut idx = 0usize;
        for &g in monomial {
            assert!((g as usize) < self.alg.gens);
            idx = idx * self.alg.gens + g as usize;
        }
        self.data[self.alg.offsets[w] + idx]
    }

    pub fn mul(&self, other: &TruncPoly) -> TruncPoly {
        debug_assert!(
            self.alg.p == other.alg.p
                && self.alg.gens == other.alg.gens
                && self.alg.bound == other.alg.bound
        );
        let alg = &self.alg;
        let p = alg.p as u32;
        let mut data = vec![0u8; alg.total];
        for wa in 0..alg.bound {
            let la = &self.data[alg.layer(wa)];
            if la.iter().all(|&c| c == 0) {
                continue;
            }
            for wb in 0..alg.bound - wa {
                let lb = &other.data[alg.layer(wb)];
                let stride = lb.len();
                let out_range = alg.layer(wa + wb);
                let out = &mut data[out_range];
                for (ia, &ca) in la.iter().enumerate() {
                    if ca == 0 {
                        continue;
                    }
                    let base = ia * stride;
                    for (ib, &cb) in lb.iter().enumerate() {
                        if cb == 0 {
                            continue;
                        }
                        let slot = &mut out[base + ib];
                        *slot = ((*slot as u32 + ca as u32 * cb as u32) % p) as u8;
                    }
                }
            }
        }
        TruncPoly { alg: Arc::clone(alg), data }
    }

    fn add_signed(&self, other: &TruncPoly, negate: bool) -> TruncPoly {
        let p = self.alg.p as u32;
        let mut data = self.data.clone();
        for (a, &b) in data.iter_mut().zip(other.data.iter()) {
            let b = if negate { (p - b as u32) % p } else { b as u32 };
            *a = ((*a as u32 + b) % p) as u8;
        }
        TruncPoly { alg: Arc::clone(&self.alg), data }
    }

    pub fn add(&self, other: &TruncPoly) -> TruncPoly {
        self.add_signed(other, false)
    }

    pub fn sub(&self, other: &TruncPoly) -> TruncPoly {
        self.add_signed(other, true)
    }

    /// Inverse of a 1-unit via the geometric series; the augmentation part
    /// is nilpotent below the truncation degree.
    pub fn inverse(&self) -> TruncPoly {
        assert_eq!(self.data[0], 1, "inverse only for 1-units");
        let one = self.alg.one();
        let u = self.sub(&one);
        let mut acc = one.clone();
        let mut term = one;
        for i in 1..self.alg.bound {
            term = term.mul(&u);
            if term.data.iter().all(|&c| c == 0) {
                break;
            }
            acc = if i % 2 == 1 { acc.sub(&term) } else { acc.add(&term) };
        }
        acc
    }

    pub fn pow(&self, e: i64) -> TruncPoly {
        if e < 0 {
            return self.inverse().pow(-e);
        }
        let mut base = self.clone();
        let mut e = e as u64;
        let mut acc = self.alg.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Least degree w ≥ 1 carrying a nonzero coefficient of `self − 1`;
    /// `None` when the element is exactly 1 at this truncation.
    pub fn min_positive_degree(&self) -> Option<usize> {
        for w in 1..self.alg.bound {
            if self.data[self.alg.layer(w)].iter().any(|&c| c != 0) {
                return Some(w);
            }
        }
        None
    }

    /// Truncates further down to `new_bound ≤ bound`.
    pub fn truncate(&self, new_bound: usize, max_monomials: usize) -> Result<TruncPoly, MagnusError> {
        assert!(new_bound <= self.alg.bound);
        let alg = Algebra::new(self.alg.p, self.alg.gens, new_bound, max_monomials)?;
        let mut data = vec![0u8; alg.total];
        data.copy_from_slice(&self.data[..alg.total]);
        Ok(TruncPoly { alg, data })
    }

    pub fn bytes(&self) -> &[u8] {
        &self.data
    }
}

impl fmt::Debug for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncPoly(p={}, d={}, L={})", self.alg.p, self.alg.gens, self.alg.bound)
    }
}

/// Outcome of a degree query at truncation L.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Exact(usize),
    /// The image is 1 at this truncation; the degree is only bounded below.
    AtLeast(usize),
}

/// Filtration degree of a word: least n with a nonzero degree-n term of its
/// Magnus image minus 1. Evaluates over the word's support alphabet.
pub fn zassenhaus_degree(w: &Word, p: u32, bound: usize, max_monomials: usize) -> Result<Degree, MagnusError> {
    let support = w.support();
    if support.is_empty() {
        return Ok(Degree::AtLeast(bound));
    }
    let remap: Vec<(u16, i64)> = w
        .letters()
        .iter()
        .map(|l| (support.iter().position(|&g| g == l.gen).unwrap() as u16, l.exp))
        .collect();
    let compact = Word::from_letters(remap);
    let alg = Algebra::new(p, support.len(), bound, max_monomials)?;
    Ok(match alg.eval(&compact).min_positive_degree() {
        Some(n) => Degree::Exact(n),
        None => Degree::AtLeast(bound),
    })
}

/// Degree query with doubling retries: starts at `start_bound` and doubles
/// while the answer stays `AtLeast`, within the monomial budget. The final
/// bound is reported either way.
pub fn zassenhaus_degree_auto(
    w: &Word,
    p: u32,
    start_bound: usize,
    max_monomials: usize,
) -> (Degree, usize) {
    if w.is_identity() {
        return (Degree::AtLeast(start_bound), start_bound);
    }
    let d = w.support().len();
    let feasible = |b: usize| Algebra::new(p, d, b, max_monomials).is_ok();
    let mut bound = start_bound.max(2);
    while bound > 2 && !feasible(bound) {
        bound -= 1;
    }
    loop {
        match zassenhaus_degree(w, p, bound, max_monomials) {
            Ok(Degree::Exact(n)) => return (Degree::Exact(n), bound),
            _ => {
                let mut next = bound * 2;
                while next > bound && !feasible(next) {
                    next -= 1;
                }
                if next == bound {
                    return (Degree::AtLeast(bound), bound);
                }
                bound = next;
            }
        }
    }
}

/// A finite normal generating set of the filtration subgroup `M_n`.
#[derive(Clone, Debug)]
pub struct FiltrationLevel {
    pub level: usize,
    pub prime: u32,
    pub words: Vec<Word>,
}

impl FiltrationLevel {
    /// Cross-check against the algebra: every generator must have degree ≥ n.
    pub fn verify_degrees(&self, max_monomials: usize) -> Result<bool, MagnusError> {
        for w in &self.words {
            match zassenhaus_degree(w, self.prime, self.level + 1, max_monomials)? {
                Degree::Exact(n) if n < self.level => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }
}

/// Normal generating set `{ c^{p^j} : c left-normed commutator of weight i,
/// 1 ≤ i ≤ n, j minimal with i·p^j ≥ n }`, deduplicated.
pub fn mn_generators(gen_count: u16, p: u32, n: usize) -> FiltrationLevel {
    assert!(n >= 1);
    let mut words = Vec::new();
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    for i in 1..=n {
        let mut power: i64 = 1;
        let mut reach = i as u64;
        while reach < n as u64 {
            reach *= p as u64;
            power *= p as i64;
        }
        for c in left_normed_commutators(gen_count, i as u32) {
            let w = c.pow(power);
            if !w.is_identity() && seen.insert(w.clone()) {
                words.push(w);
            }
        }
    }
    FiltrationLevel { level: n, prime: p, words }
}

/// Number of monomials of degree exactly `n` over `gens` generators.
pub fn graded_dimension(gens: usize, n: usize) -> u64 {
    (gens as u64).pow(n as u32)
}

/// Order of `F/M_n` for the free group on `gen_count` generators, computed
/// by closure enumeration of the Magnus generator images truncated at
/// degree n (the representation kernel is then exactly `M_n`).
pub fn free_quotient_order_by_magnus(
    gen_count: u16,
    p: u32,
    n: usize,
    max_monomials: usize,
    max_elements: usize,
) -> Result<u64, MagnusError> {
    let alg = Algebra::new(p, gen_count as usize, n, max_monomials)?;
    let gens: Vec<TruncPoly> = (0..gen_count).map(|g| alg.gen_image(g)).collect();
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut queue: Vec<TruncPoly> = Vec::new();
    let one = alg.one();
    seen.insert(one.bytes().to_vec());
    queue.push(one);
    while let Some(e) = queue.pop() {
        for g in &gens {
            let f = e.mul(g);
            if seen.insert(f.bytes().to_vec()) {
                if seen.len() > max_elements {
                    return Err(MagnusError::Resource {
                        what: "closure elements",
                        needed: seen.len() as u64,
                        cap: max_elements as u64,
                    });
                }
                queue.push(f);
            }
        }
    }
    Ok(seen.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::commutator;

    const BUDGET: usize = 1 << 21;

    #[test]
    fn identity_maps_to_one() {
        let alg = Algebra::new(2, 2, 4, BUDGET).unwrap();
        assert!(alg.eval(&Word::identity()).is_one());
    }

    #[test]
    fn inverse_geometric_series_mod_2() {
        // x⁻¹ at p=2, L=3 → 1 + X + X²
        let alg = Algebra::new(2, 1, 3, BUDGET).unwrap();
        let img = alg.eval(&Word::from_letters([(0, -1)]));
        assert_eq!(img.coeff(&[]), 1);
        assert_eq!(img.coeff(&[0]), 1);
        assert_eq!(img.coeff(&[0, 0]), 1);
    }

    #[test]
    fn commutator_image_is_one_plus_xy_minus_yx() {
        for p in [2u32, 3, 5] {
            let alg = Algebra::new(p, 2, 3, BUDGET).unwrap();
            let c = commutator(&Word::generator(0), &Word::generator(1));
            let img = alg.eval(&c);
            assert_eq!(img.coeff(&[]), 1);
            assert_eq!(img.coeff(&[0]), 0);
            assert_eq!(img.coeff(&[1]), 0);
            assert_eq!(img.coeff(&[0, 1]), 1);
            assert_eq!(img.coeff(&[1, 0]), (p - 1) as u8);
            assert_eq!(img.coeff(&[0, 0]), 0);
            assert_eq!(img.coeff(&[1, 1]), 0);
        }
    }

    #[test]
    fn degree_examples() {
        let x = Word::generator(0);
        assert_eq!(zassenhaus_degree(&x, 2, 4, BUDGET).unwrap(), Degree::Exact(1));
        for p in [2u32, 3, 5] {
            let xp = x.pow(p as i64);
            assert_eq!(
                zassenhaus_degree(&xp, p, p as usize + 2, BUDGET).unwrap(),
                Degree::Exact(p as usize),
                "x^p should have degree p at prime {p}"
            );
        }
        let c = commutator(&Word::generator(0), &Word::generator(1));
        assert_eq!(zassenhaus_degree(&c, 2, 4, BUDGET).unwrap(), Degree::Exact(2));
        assert_eq!(zassenhaus_degree(&c, 3, 4, BUDGET).unwrap(), Degree::Exact(2));
    }

    #[test]
    fn degree_auto_retries() {
        let x = Word::generator(0);
        let (deg, _) = zassenhaus_degree_auto(&x.pow(16), 2, 4, BUDGET);
        assert_eq!(deg, Degree::Exact(16));
    }

    #[test]
    fn mn_generators_small_levels() {
        let m1 = mn_generators(2, 2, 1);
        assert_eq!(m1.words, alloc::vec![Word::generator(0), Word::generator(1)]);

        let m2 = mn_generators(2, 2, 2);
        let expect: BTreeSet<Word> = [
            Word::generator(0).pow(2),
            Word::generator(1).pow(2),
            commutator(&Word::generator(0), &Word::generator(1)),
            commutator(&Word::generator(1), &Word::generator(0)),
        ]
        .into_iter()
        .collect();
        let got: BTreeSet<Word> = m2.words.iter().cloned().collect();
        assert_eq!(got, expect);

        let m3 = mn_generators(2, 2, 3);
        let got: BTreeSet<Word> = m3.words.iter().cloned().collect();
        assert!(got.contains(&Word::generator(0).pow(4)));
        assert!(got.contains(&Word::generator(1).pow(4)));
        let c = commutator(&Word::generator(0), &Word::generator(1));
        assert!(got.contains(&c.pow(2)));
        // weight-3 left-normed commutators appear unsquared
        for w3 in left_normed_commutators(2, 3) {
            assert!(got.contains(&w3));
        }
        assert!(m3.verify_degrees(BUDGET).unwrap());
    }

    #[test]
    fn mn_generators_sound() {
        for p in [2u32, 3] {
            for n in 1..=4 {
                assert!(mn_generators(2, p, n).verify_degrees(BUDGET).unwrap(), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn free_quotient_orders() {
        assert_eq!(free_quotient_order_by_magnus(2, 2, 2, BUDGET, 1 << 16).unwrap(), 4);
        assert_eq!(free_quotient_order_by_magnus(2, 2, 3, BUDGET, 1 << 16).unwrap(), 32);
        assert_eq!(free_quotient_order_by_magnus(1, 2, 3, BUDGET, 1 << 16).unwrap(), 4);
    }

    #[test]
    fn graded_layer_has_d_pow_n_monomials() {
        let alg = Algebra::new(2, 3, 5, BUDGET).unwrap();
        for w in 0..5 {
            assert_eq!(alg.layer(w).len() as u64, graded_dimension(3, w));
        }
    }

    #[test]
    fn closure_budget_is_enforced() {
        let err = free_quotient_order_by_magnus(2, 2, 4, BUDGET, 8).unwrap_err();
        assert!(matches!(err, MagnusError::Resource { what: "closure elements", .. }));
    }
}
