//! Todd–Coxeter coset enumeration with certified completion.
//!
//! Relator-tracing (HLT) strategy with a coincidence queue. A table is only
//! ever returned as complete after an independent verification pass
//! re-traces every relator at every coset and every subgroup generator at
//! coset 1; incomplete tables carry an explicit status instead of an error
//! so callers own the retry policy.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableStatus {
    Complete,
    /// The coset limit was hit; no claim is made about the index.
    Incomplete { max_cosets: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct EnumLimits {
    pub max_cosets: usize,
    /// Optional hard cap on table bytes (2d columns of u32 per coset).
    pub max_memory_bytes: Option<usize>,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits { max_cosets: 2_000_000, max_memory_bytes: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnumError {
    /// Enumeration stopped at the coset limit.
    Incomplete { max_cosets: usize },
    /// The requested table would exceed the memory ceiling.
    Memory { needed_bytes: u64, cap_bytes: u64 },
    /// An operation required a complete table.
    IncompleteTable,
    /// Post-enumeration verification failed; indicates a bug, never returned
    /// from a certified path.
    CertificationFailed(&'static str),
    GeneratorOutOfRange { gen: u16, d: usize },
}

impl fmt::Display for EnumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumError::Incomplete { max_cosets } => {
                write!(f, "enumeration exceeded the coset limit {max_cosets}")
            }
            EnumError::Memory { needed_bytes, cap_bytes } => {
                write!(f, "coset table needs {needed_bytes} bytes, cap {cap_bytes}")
            }
            EnumError::IncompleteTable => write!(f, "operation requires a complete coset table"),
            EnumError::CertificationFailed(what) => write!(f, "table certification failed: {what}"),
            EnumError::GeneratorOutOfRange { gen, d } => {
                write!(f, "word references generator {gen} outside alphabet of size {d}")
            }
        }
    }
}

impl core::error::Error for EnumError {}

/// Complete or partial coset action table over 2d columns
/// (generator and inverse per generator), cosets numbered from 1.
#[derive(Clone, Debug)]
pub struct CosetTable {
    d: usize,
    ncosets: usize,
    /// Row-major `(coset-1) * 2d + col`; 0 means undefined.
    rows: Vec<u32>,
    status: TableStatus,
    relators: Vec<Word>,
    subgroup: Vec<Word>,
}

fn col(gen: u16, inverse: bool) -> usize {
    (gen as usize) * 2 + inverse as usize
}

fn word_cols(w: &Word) -> Vec<usize> {
    w.signed_letters().map(|(g, inv)| col(g, inv)).collect()
}

fn inv_col(c: usize) -> usize {
    c ^ 1
}

impl CosetTable {
    pub fn status(&self) -> TableStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == TableStatus::Complete
    }

    pub fn ncosets(&self) -> usize {
        self.ncosets
    }

    pub fn gen_count(&self) -> usize {
        self.d
    }

    pub fn subgroup_generators(&self) -> &[Word] {
        &self.subgroup
    }

    fn entry(&self, coset: u32, c: usize) -> u32 {
        self.rows[(coset as usize - 1) * 2 * self.d + c]
    }

    /// Action of a single signed generator on a coset (1-based).
    pub fn action(&self, coset: u32, gen: u16, inverse: bool) -> u32 {
        self.entry(coset, col(gen, inverse))
    }

    /// Traces a word from a coset; requires a complete table.
    pub fn trace(&self, start: u32, w: &Word) -> u32 {
        let mut c = start;
        for (g, inv) in w.signed_letters() {
            c = self.entry(c, col(g, inv));
            debug_assert_ne!(c, 0, "trace hit an undefined entry");
        }
        c
    }

    /// Generator permutations of the coset action (complete tables only).
    pub fn permutations(&self) -> Vec<Vec<u32>> {
        (0..self.d as u16)
            .map(|g| (1..=self.ncosets as u32).map(|c| self.action(c, g, false)).collect())
            .collect()
    }

    /// Independent re-verification: totality, bijectivity per generator,
    /// relators trace to the identity everywhere, subgroup generators fix
    /// coset 1, and the action is transitive.
    pub fn certify(&self) -> Result<(), EnumError> {
        if !self.is_complete() {
            return Err(EnumError::IncompleteTable);
        }
        let n = self.ncosets;
        for c in 1..=n as u32 {
            for x in 0..2 * self.d {
                let t = self.entry(c, x);
                if t == 0 || t as usize > n {
                    return Err(EnumError::CertificationFailed("undefined or out-of-range entry"));
                }
                if self.entry(t, inv_col(x)) != c {
                    return Err(EnumError::CertificationFailed("inverse column mismatch"));
                }
            }
        }
        for g in 0..self.d as u16 {
            let mut seen = vec![false; n + 1];
            for c in 1..=n as u32 {
                let t = self.action(c, g, false) as usize;
                if seen[t] {
                    return Err(EnumError::CertificationFailed("generator column not a bijection"));
                }
                seen[t] = true;
            }
        }
        for r in &self.relators {
            for c in 1..=n as u32 {
                if self.trace(c, r) != c {
                    return Err(EnumError::CertificationFailed("relator does not fix a coset"));
                }
            }
        }
        for s in &self.subgroup {
            if self.trace(1, s) != 1 {
                return Err(EnumError::CertificationFailed("subgroup generator moves coset 1"));
            }
        }
        // transitivity
        let mut seen = vec![false; n + 1];
        let mut stack = vec![1u32];
        seen[1] = true;
        let mut count = 1;
        while let Some(c) = stack.pop() {
            for x in 0..2 * self.d {
                let t = self.entry(c, x) as usize;
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                    stack.push(t as u32);
                }
            }
        }
        if count != n {
            return Err(EnumError::CertificationFailed("action not transitive"));
        }
        Ok(())
    }
}

struct Enumerator {
    ncols: usize,
    /// rows[0] unused; coset ids 1-based, 0 = undefined.
    rows: Vec<u32>,
    parent: Vec<u32>,
    alive: usize,
    total: usize,
    max_cosets: usize,
}

impl Enumerator {
    fn new(d: usize, max_cosets: usize) -> Self {
        let ncols = 2 * d;
        let mut e = Enumerator {
            ncols,
            rows: Vec::new(),
            parent: vec![0, 1],
            alive: 1,
            total: 1,
            max_cosets,
        };
        e.rows.resize(2 * ncols, 0);
        e
    }

    fn get(&self, c: u32, x: usize) -> u32 {
        self.rows[c as usize * self.ncols + x]
    }

    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.rows[c as usize * self.ncols + x] = v;
    }

    fn is_alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, mut c: u32) -> u32 {
        while self.parent[c as usize] != c {
            let gp = self.parent[self.parent[c as usize] as usize];
            self.parent[c as usize] = gp;
            c = gp;
        }
        c
    }

    fn define(&mut self, c: u32, x: usize) -> Result<u32, ()> {
        if self.total >= self.max_cosets {
            return Err(());
        }
        self.total += 1;
        self.alive += 1;
        let n = self.parent.len() as u32;
        self.parent.push(n);
        self.rows.extend(core::iter::repeat(0).take(self.ncols));
        self.set(c, x, n);
        self.set(n, inv_col(x), c);
        Ok(n)
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi as usize] = lo;
        self.alive -= 1;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue: Vec<u32> = Vec::new();
        self.merge(a, b, &mut queue);
        let mut idx = 0;
        while idx < queue.len() {
            let dead = queue[idx];
            idx += 1;
            for x in 0..self.ncols {
                let to = self.get(dead, x);
                if to == 0 {
                    continue;
                }
                self.set(to, inv_col(x), 0);
                let mu = self.rep(dead);
                let nu = self.rep(to);
                let mu_x = self.get(mu, x);
                if mu_x != 0 {
                    self.merge(nu, mu_x, &mut queue);
                } else {
                    let nu_xi = self.get(nu, inv_col(x));
                    if nu_xi != 0 {
                        self.merge(mu, nu_xi, &mut queue);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, inv_col(x), mu);
                    }
                }
            }
        }
    }

    /// Scans a relator cyclically at `start`, filling gaps with new cosets.
    /// Reads are representative-aware so stale entries cannot mislead a scan.
    fn scan_and_fill(&mut self, start: u32, w: &[usize]) -> Result<(), ()> {
        if w.is_empty() {
            return Ok(());
        }
        loop {
            let start = self.rep(start);
            let mut f = start;
            let mut i = 0;
            while i < w.len() {
                let t = self.get(f, w[i]);
                if t == 0 {
                    break;
                }
                f = self.rep(t);
                i += 1;
            }
            if i == w.len() {
                if f != start {
                    self.coincidence(f, start);
                }
                return Ok(());
            }
            let mut b = start;
            let mut j = w.len();
            while j > i {
                let t = self.get(b, inv_col(w[j - 1]));
                if t == 0 {
                    break;
                }
                b = self.rep(t);
                j -= 1;
            }
            if j == i {
                // scans met with both entries defined: forced coincidence
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, inv_col(w[i]), f);
                return Ok(());
            }
            // gap of at least two: define one coset and rescan
            self.define(f, w[i])?;
        }
    }
}

/// Enumerates cosets of `⟨subgroup⟩` in `⟨x₁..x_d | relators⟩`.
///
/// Returns a complete certified table, or one with `Incomplete` status when
/// the coset limit is hit. Deterministic for fixed inputs and limits.
pub fn coset_enumerate(
    d: usize,
    relators: &[Word],
    subgroup: &[Word],
    limits: &EnumLimits,
) -> Result<CosetTable, EnumError> {
    assert!(limits.max_cosets >= 1);
    for w in relators.iter().chain(subgroup) {
        if let Some(g) = w.max_generator() {
            if g as usize >= d {
                return Err(EnumError::GeneratorOutOfRange { gen: g, d });
            }
        }
    }
    if let Some(cap) = limits.max_memory_bytes {
        let needed = (limits.max_cosets as u64 + 2) * (2 * d as u64) * 4;
        if needed > cap as u64 {
            return Err(EnumError::Memory { needed_bytes: needed, cap_bytes: cap as u64 });
        }
    }

    let rel_cols: Vec<Vec<usize>> = relators.iter().map(word_cols).collect();
    let sub_cols: Vec<Vec<usize>> = subgroup.iter().map(word_cols).collect();

    let mut e = Enumerator::new(d, limits.max_cosets);
    let mut hit_limit = false;

    for w in &sub_cols {
        if e.scan_and_fill(1, w).is_err() {
            hit_limit = true;
            break;
        }
    }

    // Repeat HLT passes until a pass is stable (no defines, no merges);
    // a stable pass certifies that every row is total and every relator
    // closes at every live coset.
    while !hit_limit {
        let total0 = e.total;
        let alive0 = e.alive;
        let mut a: u32 = 1;
        'pass: while (a as usize) < e.parent.len() {
            if !e.is_alive(a) {
                a += 1;
                continue;
            }
            for w in &rel_cols {
                if e.scan_and_fill(a, w).is_err() {
                    hit_limit = true;
                    break 'pass;
                }
                if !e.is_alive(a) {
                    break;
                }
            }
            if e.is_alive(a) {
                for x in 0..e.ncols {
                    if e.get(a, x) == 0 && e.define(a, x).is_err() {
                        hit_limit = true;
                        break 'pass;
                    }
                }
            }
            a += 1;
        }
        if !hit_limit && e.total == total0 && e.alive == alive0 {
            break;
        }
    }

    if hit_limit {
        return Ok(CosetTable {
            d,
            ncosets: e.alive,
            rows: Vec::new(),
            status: TableStatus::Incomplete { max_cosets: limits.max_cosets },
            relators: relators.to_vec(),
            subgroup: subgroup.to_vec(),
        });
    }

    // Compact to live cosets in BFS order from coset 1 (canonical form).
    let mut order: Vec<u32> = Vec::with_capacity(e.alive);
    let mut newid = vec![0u32; e.parent.len()];
    {
        let root = e.rep(1);
        order.push(root);
        newid[root as usize] = 1;
        let mut qi = 0;
        while qi < order.len() {
            let c = order[qi];
            qi += 1;
            for x in 0..e.ncols {
                let t = e.get(c, x);
                debug_assert_ne!(t, 0);
                let t = e.rep(t);
                if newid[t as usize] == 0 {
                    newid[t as usize] = order.len() as u32 + 1;
                    order.push(t);
                }
            }
        }
    }
    let n = order.len();
    debug_assert_eq!(n, e.alive);
    let mut rows = vec![0u32; n * e.ncols];
    for (i, &c) in order.iter().enumerate() {
        for x in 0..e.ncols {
            let t = e.rep(e.get(c, x));
            rows[i * e.ncols + x] = newid[t as usize];
        }
    }

    let table = CosetTable {
        d,
        ncosets: n,
        rows,
        status: TableStatus::Complete,
        relators: relators.to_vec(),
        subgroup: subgroup.to_vec(),
    };
    table.certify()?;
    Ok(table)
}

/// Order of `F/⟨⟨relators⟩⟩` when finite and within limits.
pub fn quotient_order(d: usize, relators: &[Word], limits: &EnumLimits) -> Result<u64, EnumError> {
    let t = coset_enumerate(d, relators, &[], limits)?;
    match t.status() {
        TableStatus::Complete => Ok(t.ncosets() as u64),
        TableStatus::Incomplete { max_cosets } => Err(EnumError::Incomplete { max_cosets }),
    }
}

/// A finite quotient presented by relators: order, certified table and the
/// generator permutations of the regular action.
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    pub order: u64,
    pub table: CosetTable,
    pub perms: Vec<Vec<u32>>,
}

pub fn finite_quotient(
    d: usize,
    relators: &[Word],
    limits: &EnumLimits,
) -> Result<FiniteQuotient, EnumError> {
    let table = coset_enumerate(d, relators, &[], limits)?;
    match table.status() {
        TableStatus::Complete => {
            let perms = table.permutations();
            Ok(FiniteQuotient { order: table.ncosets() as u64, table, perms })
        }
        TableStatus::Incomplete { max_cosets } => Err(EnumError::Incomplete { max_cosets }),
    }
}

/// Breadth-first Schreier transversal: representative word per coset.
pub fn schreier_transversal(table: &CosetTable) -> Result<Vec<Word>, EnumError> {
    if !table.is_complete() {
        return Err(EnumError::IncompleteTable);
    }
    let n = table.ncosets();
    let mut reps: Vec<Option<Word>> = vec![None; n + 1];
    reps[1] = Some(Word::identity());
    let mut queue = vec![1u32];
    let mut qi = 0;
    while qi < queue.len() {
        let c = queue[qi];
        qi += 1;
        for x in 0..2 * table.d {
            let t = table.entry(c, x);
            if reps[t as usize].is_none() {
                let g = (x / 2) as u16;
                let exp = if x % 2 == 0 { 1 } else { -1 };
                let w = reps[c as usize].as_ref().unwrap().mul(&Word::from_letters([(g, exp)]));
                reps[t as usize] = Some(w);
                queue.push(t);
            }
        }
    }
    Ok(reps.into_iter().skip(1).map(|r| r.unwrap()).collect())
}

/// Schreier generators `t·g·rep(t·g)⁻¹` over a breadth-first transversal,
/// identity entries dropped. The result generates the subgroup the table
/// enumerates.
pub fn schreier_generators(table: &CosetTable) -> Result<Vec<Word>, EnumError> {
    Ok(SchreierBasis::new(table)?.generators)
}

/// Schreier transversal, generator set and the Reidemeister rewriting map
/// of the subgroup a complete table enumerates. Over a free ambient group
/// the non-tree generators form a free basis of the subgroup.
pub struct SchreierBasis {
    pub transversal: Vec<Word>,
    /// Free generators of the subgroup, one per non-tree edge.
    pub generators: Vec<Word>,
    /// (coset, generator) → index into `generators`; tree edges absent.
    edge_index: alloc::collections::BTreeMap<(u32, u16), usize>,
    d: usize,
}

impl SchreierBasis {
    pub fn new(table: &CosetTable) -> Result<SchreierBasis, EnumError> {
        if !table.is_complete() {
            return Err(EnumError::IncompleteTable);
        }
        let n = table.ncosets();
        let mut reps: Vec<Option<Word>> = vec![None; n + 1];
        reps[1] = Some(Word::identity());
        let mut tree: Vec<(u32, u16)> = Vec::new();
        let mut queue = vec![1u32];
        let mut qi = 0;
        while qi < queue.len() {
            let c = queue[qi];
            qi += 1;
            for x in 0..2 * table.d {
                let t = table.entry(c, x);
                if reps[t as usize].is_none() {
                    let g = (x / 2) as u16;
                    let exp = if x % 2 == 0 { 1 } else { -1 };
                    let w = reps[c as usize].as_ref().unwrap().mul(&Word::from_letters([(g, exp)]));
                    reps[t as usize] = Some(w);
                    if x % 2 == 0 {
                        tree.push((c, g));
                    } else {
                        // record the forward orientation of the tree edge
                        tree.push((t, g));
                    }
                    queue.push(t);
                }
            }
        }
        let transversal: Vec<Word> = reps.into_iter().skip(1).map(|r| r.unwrap()).collect();
        let tree: alloc::collections::BTreeSet<(u32, u16)> = tree.into_iter().collect();
        let mut generators = Vec::new();
        let mut edge_index = alloc::collections::BTreeMap::new();
        for c in 1..=n as u32 {
            for g in 0..table.d as u16 {
                if tree.contains(&(c, g)) {
                    continue;
                }
                let t = table.action(c, g, false);
                let w = transversal[c as usize - 1]
                    .mul(&Word::generator(g))
                    .mul(&transversal[t as usize - 1].inverse());
                // over a Schreier (prefix-closed) transversal every
                // non-tree edge yields a nontrivial free generator
                if w.is_identity() {
                    return Err(EnumError::CertificationFailed(
                        "trivial generator on a non-tree edge",
                    ));
                }
                edge_index.insert((c, g), generators.len());
                generators.push(w);
            }
        }
        Ok(SchreierBasis { transversal, generators, edge_index, d: table.d })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Rewrites a subgroup element as a word in the Schreier generators.
    /// The input must trace back to coset 1 (i.e. lie in the subgroup).
    pub fn rewrite(&self, table: &CosetTable, w: &Word) -> Result<Word, EnumError> {
        let mut out: Vec<(u16, i64)> = Vec::new();
        let mut c: u32 = 1;
        for (g, inv) in w.signed_letters() {
            if !inv {
                if let Some(&idx) = self.edge_index.get(&(c, g)) {
                    out.push((idx as u16, 1));
                }
                c = table.action(c, g, false);
            } else {
                let c2 = table.action(c, g, true);
                if let Some(&idx) = self.edge_index.get(&(c2, g)) {
                    out.push((idx as u16, -1));
                }
                c = c2;
            }
        }
        if c != 1 {
            return Err(EnumError::CertificationFailed("word is not in the subgroup"));
        }
        let _ = self.d;
        Ok(Word::from_letters(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{commutator, Word};

    fn lims() -> EnumLimits {
        EnumLimits { max_cosets: 10_000, max_memory_bytes: None }
    }

    #[test]
    fn cyclic_five() {
        let n = quotient_order(1, &[Word::generator(0).pow(5)], &lims()).unwrap();
        assert_eq!(n, 5);
    }

    #[test]
    fn klein_four() {
        let x = Word::generator(0);
        let y = Word::generator(1);
        let rels = [x.pow(2), y.pow(2), commutator(&x, &y)];
        assert_eq!(quotient_order(2, &rels, &lims()).unwrap(), 4);
    }

    #[test]
    fn infinite_index_is_incomplete() {
        let t = coset_enumerate(
            2,
            &[],
            &[Word::generator(0)],
            &EnumLimits { max_cosets: 10, max_memory_bytes: None },
        )
        .unwrap();
        assert!(matches!(t.status(), TableStatus::Incomplete { max_cosets: 10 }));
    }

    #[test]
    fn trivial_quotient() {
        assert_eq!(quotient_order(1, &[Word::generator(0)], &lims()).unwrap(), 1);
    }

    #[test]
    fn symmetric_group_s3() {
        // ⟨a,b | a², b², (ab)³⟩
        let a = Word::generator(0);
        let b = Word::generator(1);
        let rels = [a.pow(2), b.pow(2), a.mul(&b).pow(3)];
        assert_eq!(quotient_order(2, &rels, &lims()).unwrap(), 6);
    }

    #[test]
    fn quaternion_group() {
        // ⟨a,b | a⁴, a²b⁻², b⁻¹aba⟩ has order 8
        let a = Word::generator(0);
        let b = Word::generator(1);
        let rels = [
            a.pow(4),
            a.pow(2).mul(&b.pow(-2)),
            b.inverse().mul(&a).mul(&b).mul(&a),
        ];
        assert_eq!(quotient_order(2, &rels, &lims()).unwrap(), 8);
    }

    #[test]
    fn schreier_index_two_in_f2() {
        // Kernel of x ↦ 1, y ↦ 0 mod 2: subgroup ⟨y, x², xyx⁻¹⟩ of index 2.
        let x = Word::generator(0);
        let y = Word::generator(1);
        let t = coset_enumerate(2, &[], &[y.clone(), x.pow(2), x.mul(&y).mul(&x.inverse())], &lims())
            .unwrap();
        assert!(t.is_complete());
        assert_eq!(t.ncosets(), 2);
        let gens = schreier_generators(&t).unwrap();
        assert_eq!(gens.len(), 3, "Nielsen–Schreier rank 2(2-1)+1");
    }

    #[test]
    fn schreier_whole_group() {
        let t = coset_enumerate(2, &[], &[Word::generator(0), Word::generator(1)], &lims()).unwrap();
        assert_eq!(t.ncosets(), 1);
        let gens = schreier_generators(&t).unwrap();
        assert_eq!(gens, alloc::vec![Word::generator(0), Word::generator(1)]);
    }

    #[test]
    fn schreier_cyclic_power_subgroup() {
        let t = coset_enumerate(1, &[], &[Word::generator(0).pow(3)], &lims()).unwrap();
        assert_eq!(t.ncosets(), 3);
        let gens = schreier_generators(&t).unwrap();
        assert_eq!(gens, alloc::vec![Word::generator(0).pow(3)]);
    }

    #[test]
    fn certification_runs_on_complete_tables() {
        let x = Word::generator(0);
        let y = Word::generator(1);
        let t = coset_enumerate(2, &[x.pow(2), y.pow(2), commutator(&x, &y)], &[], &lims()).unwrap();
        assert!(t.certify().is_ok());
        let perms = t.permutations();
        assert_eq!(perms.len(), 2);
        assert_eq!(perms[0].len(), 4);
    }

    #[test]
    fn adding_relators_never_increases_order() {
        let x = Word::generator(0);
        let y = Word::generator(1);
        let rels = [x.pow(4), y.pow(2), commutator(&x, &y)];
        let full = quotient_order(2, &rels, &lims()).unwrap();
        for i in 0..rels.len() {
            let mut sub: Vec<Word> = rels.to_vec();
            sub.remove(i);
            // dropping relators can make the quotient infinite; only compare
            // when the enumeration completes
            if let Ok(bigger) = quotient_order(2, &sub, &lims()) {
                assert!(bigger >= full);
                assert_eq!(bigger % full, 0);
            }
        }
    }

    #[test]
    fn memory_cap_enforced() {
        let e = coset_enumerate(
            2,
            &[],
            &[],
            &EnumLimits { max_cosets: 1 << 20, max_memory_bytes: Some(1024) },
        )
        .unwrap_err();
        assert!(matches!(e, EnumError::Memory { .. }));
    }
}
