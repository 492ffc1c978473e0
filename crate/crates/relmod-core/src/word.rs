//! Freely reduced words over an indexed generator alphabet.
//!
//! A [`Word`] is a run-length encoded sequence of generator powers. The
//! representation is kept freely reduced at all times: adjacent runs never
//! share a generator and no run has exponent zero.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

/// One maximal run `gen^exp` inside a reduced word; `exp` is never zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: u16,
    pub exp: i64,
}

/// A freely reduced word; the empty sequence is the identity.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn generator(gen: u16) -> Self {
        Word { letters: alloc::vec![Letter { gen, exp: 1 }] }
    }

    /// Builds a word from raw signed runs, merging and cancelling as needed.
    pub fn from_letters<I: IntoIterator<Item = (u16, i64)>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for (gen, exp) in letters {
            push_run(&mut out, Letter { gen, exp });
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total letter count Σ|exp| (length in the free generating set).
    pub fn len(&self) -> usize {
        self.letters.iter().map(|l| l.exp.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index appearing in the word.
    pub fn max_generator(&self) -> Option<u16> {
        self.letters.iter().map(|l| l.gen).max()
    }

    /// Sorted distinct generators used by the word.
    pub fn support(&self) -> Vec<u16> {
        let set: BTreeSet<u16> = self.letters.iter().map(|l| l.gen).collect();
        set.into_iter().collect()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter { gen: l.gen, exp: -l.exp })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_run(&mut out, l);
        }
        Word { letters: out }
    }

    pub fn pow(&self, e: i64) -> Word {
        if e == 0 || self.is_identity() {
            return Word::identity();
        }
        if e < 0 {
            return self.inverse().pow(-e);
        }
        // Single-run words power by exponent arithmetic.
        if self.letters.len() == 1 {
            let l = self.letters[0];
            return Word::from_letters([(l.gen, l.exp * e)]);
        }
        let mut acc = Word::identity();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Conjugate `self^f = f^{-1} · self · f`.
    pub fn conjugate(&self, f: &Word) -> Word {
        f.inverse().mul(self).mul(f)
    }

    /// Iterates single signed letters: `(gen, inverse?)`, one per alphabet step.
    pub fn signed_letters(&self) -> impl Iterator<Item = (u16, bool)> + '_ {
        self.letters.iter().flat_map(|l| {
            let inv = l.exp < 0;
            (0..l.exp.unsigned_abs()).map(move |_| (l.gen, inv))
        })
    }
}

fn push_run(out: &mut Vec<Letter>, l: Letter) {
    if l.exp == 0 {
        return;
    }
    if let Some(top) = out.last_mut() {
        if top.gen == l.gen {
            top.exp += l.exp;
            if top.exp == 0 {
                out.pop();
            }
            return;
        }
    }
    out.push(l);
}

/// Free reduction of a raw run sequence; idempotent.
pub fn reduce<I: IntoIterator<Item = (u16, i64)>>(raw: I) -> Word {
    Word::from_letters(raw)
}

/// `[u, v] = u⁻¹ v⁻¹ u v`.
pub fn commutator(u: &Word, v: &Word) -> Word {
    u.inverse().mul(&v.inverse()).mul(u).mul(v)
}

/// All left-normed commutators `[x_{i1}, x_{i2}, …, x_{iw}]` over the first
/// `gen_count` generators, repeats allowed. Entries reducing to the identity
/// are dropped, duplicates after reduction are dropped; weight 1 returns the
/// generators themselves.
pub fn left_normed_commutators(gen_count: u16, weight: u32) -> Vec<Word> {
    assert!(weight >= 1, "weight must be at least 1");
    if gen_count == 0 {
        return Vec::new();
    }
    if weight == 1 {
        return (0..gen_count).map(Word::generator).collect();
    }
    let d = gen_count as usize;
    let w = weight as usize;
    let mut tuple = alloc::vec![0usize; w];
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut out = Vec::new();
    loop {
        let mut c = Word::generator(tuple[0] as u16);
        for &t in &tuple[1..] {
            c = commutator(&c, &Word::generator(t as u16));
            if c.is_identity() {
                break;
            }
        }
        if !c.is_identity() && seen.insert(c.clone()) {
            out.push(c);
        }
        // next tuple in lexicographic order
        let mut pos = w;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < d {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.exp == 1 {
                write!(f, "g{}", l.gen)?;
            } else {
                write!(f, "g{}^{}", l.gen, l.exp)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn x() -> Word {
        Word::generator(0)
    }
    fn y() -> Word {
        Word::generator(1)
    }

    #[test]
    fn reduce_cancellation() {
        let w = reduce([(0, 1), (0, -1)]);
        assert!(w.is_identity());
    }

    #[test]
    fn reduce_merge_and_cancel() {
        // x·x·y⁻¹·y·x → x³
        let w = reduce([(0, 1), (0, 1), (1, -1), (1, 1), (0, 1)]);
        assert_eq!(w, Word::from_letters([(0, 3)]));
    }

    #[test]
    fn commutator_is_reduced_four_letter_word() {
        let c = commutator(&x(), &y());
        assert_eq!(c.letters().len(), 4);
        assert_eq!(c, reduce([(0, -1), (1, -1), (0, 1), (1, 1)]));
    }

    #[test]
    fn self_commutator_vanishes() {
        assert!(commutator(&x(), &x()).is_identity());
        assert!(commutator(&x(), &Word::identity()).is_identity());
    }

    #[test]
    fn left_normed_weight_one_and_two() {
        let w1 = left_normed_commutators(2, 1);
        assert_eq!(w1, vec![x(), y()]);
        let w2 = left_normed_commutators(2, 2);
        assert_eq!(w2.len(), 2);
        assert!(w2.contains(&commutator(&x(), &y())));
        assert!(w2.contains(&commutator(&y(), &x())));
    }

    #[test]
    fn left_normed_weight_three_drops_trivial() {
        // 8 raw tuples over d = 2; those starting with a repeated generator
        // collapse, leaving the four nontrivial weight-3 commutators.
        let w3 = left_normed_commutators(2, 3);
        assert_eq!(w3.len(), 4);
        for c in &w3 {
            assert!(!c.is_identity());
        }
    }

    #[test]
    fn conjugation_convention() {
        // u^f = f⁻¹ u f
        let u = x();
        let f = y();
        let c = u.conjugate(&f);
        assert_eq!(c, reduce([(1, -1), (0, 1), (1, 1)]));
    }

    #[test]
    fn pow_and_inverse() {
        let w = x().mul(&y());
        assert!(w.mul(&w.inverse()).is_identity());
        assert_eq!(x().pow(4), Word::from_letters([(0, 4)]));
        assert_eq!(w.pow(0), Word::identity());
        assert_eq!(w.pow(-1), w.inverse());
    }

    #[test]
    fn commutator_swap_and_conjugation_identities() {
        let u = x().mul(&y().pow(2));
        let v = y().mul(&x());
        let c = commutator(&u, &v);
        assert!(c.mul(&c.inverse()).is_identity());
        // [v,u] = [u,v]⁻¹ exactly, in either convention
        assert_eq!(commutator(&v, &u), c.inverse());
        // conjugation distributes: [u,v]^w = [u^w, v^w]
        let w = x().pow(2).mul(&y());
        assert_eq!(c.conjugate(&w), commutator(&u.conjugate(&w), &v.conjugate(&w)));
    }
}
