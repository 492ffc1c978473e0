//! Free class-2 exponent-p^E witness quotient.
//!
//! Elements are normal forms `Π xᵢ^{aᵢ} · Π_{i<j} z_{ij}^{b_{ij}}` with
//! central `z_{ij} = [xᵢ, xⱼ]` and all exponents mod p^E. Relator classes
//! keep their full p-power depth here long after degree-based truncations
//! lose them, which certifies torsion-free slots cheaply.

use alloc::vec;
use alloc::vec::Vec;

use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeElem {
    pub a: Vec<i128>,
    pub b: Vec<i128>,
}

pub struct ClassTwoProbe {
    d: usize,
    modulus: i128,
}

impl ClassTwoProbe {
    /// `None` when p^exp would overflow the modular arithmetic headroom.
    pub fn new(d: usize, p: u32, exp: u32) -> Option<ClassTwoProbe> {
        let modulus = (p as i128).checked_pow(exp)?;
        if modulus > 1i128 << 40 {
            return None;
        }
        Some(ClassTwoProbe { d, modulus })
    }

    pub fn width(&self) -> usize {
        self.d + self.d * (self.d - 1) / 2
    }

    pub fn modulus(&self) -> i128 {
        self.modulus
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.d);
        // pairs (0,1), (0,2), …, (0,d-1), (1,2), …
        let before = i * (2 * self.d - i - 1) / 2;
        before + (j - i - 1)
    }

    pub fn one(&self) -> ProbeElem {
        ProbeElem { a: vec![0; self.d], b: vec![0; self.d * (self.d - 1) / 2] }
    }

    pub fn mul(&self, x: &ProbeElem, y: &ProbeElem) -> ProbeElem {
        let m = self.modulus;
        let mut out = self.one();
        for i in 0..self.d {
            out.a[i] = (x.a[i] + y.a[i]).rem_euclid(m);
        }
        for i in 0..self.d {
            for j in i + 1..self.d {
                let k = self.pair_index(i, j);
                // moving y's x_i past x's x_j produces z_{ij}^{−a_j·a'_i}
                let twist = (x.a[j] % m) * (y.a[i] % m) % m;
                out.b[k] = (x.b[k] + y.b[k] - twist).rem_euclid(m);
            }
        }
        out
    }

    pub fn inv(&self, x: &ProbeElem) -> ProbeElem {
        let m = self.modulus;
        let mut out = self.one();
        for i in 0..self.d {
            out.a[i] = (-x.a[i]).rem_euclid(m);
        }
        for i in 0..self.d {
            for j in i + 1..self.d {
                let k = self.pair_index(i, j);
                let twist = (x.a[i] % m) * (x.a[j] % m) % m;
                out.b[k] = (-x.b[k] - twist).rem_euclid(m);
            }
        }
        out
    }

    pub fn commutator(&self, x: &ProbeElem, y: &ProbeElem) -> ProbeElem {
        let xi = self.inv(x);
        let yi = self.inv(y);
        self.mul(&self.mul(&self.mul(&xi, &yi), x), y)
    }

    pub fn eval(&self, w: &Word) -> ProbeElem {
        let mut acc = self.one();
        for l in w.letters() {
            let mut g = self.one();
            g.a[l.gen as usize] = (l.exp as i128).rem_euclid(self.modulus);
            acc = self.mul(&acc, &g);
        }
        acc
    }

    pub fn vector(&self, e: &ProbeElem) -> Vec<i128> {
        let mut v = e.a.clone();
        v.extend_from_slice(&e.b);
        v
    }

    /// Central commutator vector of two elements given by a-parts only.
    pub fn comm_of_a_parts(&self, a1: &[i128], a2: &[i128]) -> Vec<i128> {
        let mut e1 = self.one();
        e1.a = a1.iter().map(|&x| x.rem_euclid(self.modulus)).collect();
        let mut e2 = self.one();
        e2.a = a2.iter().map(|&x| x.rem_euclid(self.modulus)).collect();
        self.vector(&self.commutator(&e1, &e2))
    }
}
