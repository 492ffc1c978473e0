//! Free-derivative rows of relator conjugates over a finite quotient.
//!
//! For the quotient Γ enumerated by a certified coset table, a word `w` in
//! the kernel has a derivative vector `D(w) ∈ Z[Γ]^d` (one group-algebra
//! coefficient per generator slot). These rows present the image of the
//! relation lattice inside `N̄ = ker(Z[Γ]^d → Z[Γ])`, which is saturated in
//! the ambient lattice, so the ambient mod-p^E quotient carries exactly the
//! same information and no kernel basis is needed.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::enumerator::CosetTable;
use crate::word::Word;

pub struct FoxBlock {
    /// One row per relator conjugate `rep(t)⁻¹ · r · rep(t)`, relator-major.
    pub map_rows: Vec<Vec<i128>>,
    /// q·d ambient coordinates.
    pub width: usize,
}

/// Derivative vector of `w` over the quotient carried by `table`,
/// flattened as `gen * q + (coset - 1)`.
fn fox_row(table: &CosetTable, w: &Word) -> Vec<i128> {
    let q = table.ncosets();
    let mut row = vec![0i128; q * table.gen_count()];
    let mut c: u32 = 1;
    for (g, inv) in w.signed_letters() {
        if !inv {
            row[g as usize * q + (c - 1) as usize] += 1;
            c = table.action(c, g, false);
        } else {
            c = table.action(c, g, true);
            row[g as usize * q + (c - 1) as usize] -= 1;
        }
    }
    row
}

/// The fundamental identity `Σ_j D_j(w)·(x̄_j − 1) = w̄ − 1`: for a kernel
/// word both sides vanish. Used as a self-check on every relator row.
fn fundamental_identity_holds(table: &CosetTable, w: &Word, row: &[i128]) -> bool {
    let q = table.ncosets();
    let mut acc = vec![0i128; q];
    for g in 0..table.gen_count() {
        for c in 0..q {
            let coeff = row[g * q + c];
            if coeff != 0 {
                let target = table.action((c + 1) as u32, g as u16, false) as usize - 1;
                acc[target] += coeff;
                acc[c] -= coeff;
            }
        }
    }
    // w̄ − 1 must also vanish: w must fix coset 1
    table.trace(1, w) == 1 && acc.iter().all(|&x| x == 0)
}

impl FoxBlock {
    pub fn build(
        table: &CosetTable,
        transversal: &[Word],
        relators: &[Word],
    ) -> Result<FoxBlock, String> {
        let q = table.ncosets();
        let width = q * table.gen_count();
        let mut map_rows = Vec::with_capacity(relators.len() * q);
        for (i, r) in relators.iter().enumerate() {
            let base = fox_row(table, r);
            if !fundamental_identity_holds(table, r, &base) {
                return Err(alloc::format!(
                    "derivative rows of relator {i} violate the fundamental identity"
                ));
            }
            for rep in transversal {
                let conj = r.conjugate(rep);
                map_rows.push(fox_row(table, &conj));
            }
        }
        Ok(FoxBlock { map_rows, width })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerator::{coset_enumerate, schreier_transversal, EnumLimits};
    use crate::magnus::mn_generators;
    use crate::word::commutator;

    #[test]
    fn torus_level_two_rows() {
        // G₂ for ⟨x,y | [x,y]⟩ at p = 2 has order 4
        let c = commutator(&Word::generator(0), &Word::generator(1));
        let mut rels = vec![c.clone()];
        rels.extend(mn_generators(2, 2, 2).words);
        let t = coset_enumerate(2, &rels, &[], &EnumLimits::default()).unwrap();
        assert_eq!(t.ncosets(), 4);
        let reps = schreier_transversal(&t).unwrap();
        let block = FoxBlock::build(&t, &reps, &[c]).unwrap();
        assert_eq!(block.map_rows.len(), 4);
        assert_eq!(block.width, 8);
        // each row must be nonzero: the commutator has nontrivial derivative
        for row in &block.map_rows {
            assert!(row.iter().any(|&x| x != 0));
        }
    }

    #[test]
    fn exponent_sums_at_trivial_quotient() {
        // with Γ = 1 (level 1), rows are plain exponent-sum vectors
        let w = Word::from_letters([(0, 2), (1, -3)]);
        let rels = vec![
            Word::generator(0),
            Word::generator(1),
            w.clone(),
        ];
        let t = coset_enumerate(2, &rels, &[], &EnumLimits::default()).unwrap();
        assert_eq!(t.ncosets(), 1);
        let row = fox_row(&t, &w);
        assert_eq!(row, vec![2, -3]);
    }
}
