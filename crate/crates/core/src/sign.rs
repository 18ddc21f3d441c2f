//! The Weyl-group action on sign vectors over F2, the sets W_[J]^- and the
//! signed cell decomposition.
//!
//! A sign vector is a bit vector with bit `j` set when epsilon_{j+1} = -1. The
//! generator `s_i` adds `(C[j][i] mod 2) * bit_i` to `bit_j`, which is linear, so
//! group elements are stored as 0/1 matrices.

use std::fmt;

use crate::lie::{
    coset_table, longest_in_parabolic, CosetTable, IntMatrix, RootDatum, SubsetJ, WeylElement,
    MAX_RANK,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector {
    pub bits: u16,
    pub rank: usize,
}

impl SignVector {
    pub fn all_minus(rank: usize) -> Self {
        SignVector {
            bits: SubsetJ::full(rank).0,
            rank,
        }
    }

    pub fn all_plus(rank: usize) -> Self {
        SignVector { bits: 0, rank }
    }

    pub fn is_minus(self, j: usize) -> bool {
        self.bits >> j & 1 == 1
    }

    pub fn from_signs(signs: &[Sign]) -> Self {
        let bits = signs
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sign::Minus)
            .fold(0u16, |b, (j, _)| b | 1 << j);
        SignVector {
            bits,
            rank: signs.len(),
        }
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.rank)
            .map(|j| if self.is_minus(j) { '-' } else { '+' })
            .collect();
        write!(f, "({s})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

/// 0/1 matrix over F2, row `r` as a bitmask of columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    rows: [u16; MAX_RANK],
    rank: u8,
}

impl SignMatrix {
    pub fn identity(rank: usize) -> Self {
        let mut rows = [0u16; MAX_RANK];
        for (r, row) in rows.iter_mut().enumerate().take(rank) {
            *row = 1 << r;
        }
        SignMatrix {
            rows,
            rank: rank as u8,
        }
    }

    /// Update matrix of `s_i`.
    pub fn simple(datum: &RootDatum, i: usize) -> Self {
        let mut m = Self::identity(datum.rank());
        for j in 0..datum.rank() {
            if j != i && datum.cartan[j][i] % 2 != 0 {
                m.rows[j] |= 1 << i;
            }
        }
        m
    }

    pub fn mul(&self, other: &SignMatrix) -> SignMatrix {
        let mut rows = [0u16; MAX_RANK];
        for (r, row) in rows.iter_mut().enumerate().take(self.rank as usize) {
            let mut acc = 0u16;
            let mut bits = self.rows[r];
            while bits != 0 {
                let c = bits.trailing_zeros() as usize;
                acc ^= other.rows[c];
                bits &= bits - 1;
            }
            *row = acc;
        }
        SignMatrix {
            rows,
            rank: self.rank,
        }
    }

    pub fn apply(&self, v: SignVector) -> SignVector {
        let mut bits = 0u16;
        for r in 0..self.rank as usize {
            bits |= (((self.rows[r] & v.bits).count_ones() & 1) as u16) << r;
        }
        SignVector { bits, rank: v.rank }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank as usize)
    }

    /// Matrix of an element given by a word, acting on the left.
    pub fn of_word(datum: &RootDatum, word: &[usize]) -> Self {
        word.iter().fold(Self::identity(datum.rank()), |m, &i| {
            m.mul(&Self::simple(datum, i))
        })
    }
}

pub fn act_simple(datum: &RootDatum, i: usize, eps: SignVector) -> SignVector {
    let mut bits = eps.bits;
    if eps.is_minus(i) {
        for j in 0..datum.rank() {
            if j != i && datum.cartan[j][i] % 2 != 0 {
                bits ^= 1 << j;
            }
        }
    }
    SignVector {
        bits,
        rank: eps.rank,
    }
}

/// `w . eps`: the word is applied right to left.
pub fn act_word(datum: &RootDatum, w: &WeylElement, eps: SignVector) -> SignVector {
    w.word
        .iter()
        .rev()
        .fold(eps, |e, &i| act_simple(datum, i, e))
}

/// `w^{-1} . eps`: the word of `w` is applied left to right.
pub fn act_inverse_word(datum: &RootDatum, w: &WeylElement, eps: SignVector) -> SignVector {
    w.word.iter().fold(eps, |e, &i| act_simple(datum, i, e))
}

/// Zeros on J, the signs of `eps` elsewhere.
pub fn sigma_j(j: SubsetJ, eps: SignVector) -> Vec<Sign> {
    (0..eps.rank)
        .map(|k| {
            if j.contains(k) {
                Sign::Zero
            } else if eps.is_minus(k) {
                Sign::Minus
            } else {
                Sign::Plus
            }
        })
        .collect()
}

/// True when `eps` is `-` at every root outside J.
pub fn minus_off(j: SubsetJ, eps: SignVector) -> bool {
    let off = j.complement(eps.rank).0;
    eps.bits & off == off
}

/// Indices into the coset table of J of the members of W_[J]^-.
pub fn w_minus_indices(datum: &RootDatum, j: SubsetJ) -> Vec<usize> {
    let table = coset_table(datum, j);
    let minus = SignVector::all_minus(datum.rank());
    table
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| minus_off(j, e.inv_sign.apply(minus)))
        .map(|(i, _)| i)
        .collect()
}

pub fn w_minus_set(datum: &RootDatum, j: SubsetJ) -> Vec<WeylElement> {
    let table = coset_table(datum, j);
    w_minus_indices(datum, j)
        .into_iter()
        .map(|e| table.element(datum, e))
        .collect()
}

/// Sum of (-1)^len over W_[J]^-.
pub fn w_minus_signed_count(datum: &RootDatum, j: SubsetJ) -> i64 {
    let table = coset_table(datum, j);
    let minus = SignVector::all_minus(datum.rank());
    table
        .entries
        .iter()
        .filter(|e| minus_off(j, e.inv_sign.apply(minus)))
        .map(|e| if e.len % 2 == 0 { 1 } else { -1 })
        .sum()
}

#[derive(Debug, Clone)]
pub struct SignedCell {
    pub j: SubsetJ,
    pub w: WeylElement,
    pub sigma: Vec<Sign>,
    pub orientation: i8,
}

impl SignedCell {
    pub fn dim(&self) -> usize {
        self.w.mat.dim() - self.j.len()
    }
}

/// One cell per J and minimal representative w of W/W^J, labelled by
/// sigma_J(w^{-1} . eps).
pub fn enumerate_cells(datum: &RootDatum, eps: SignVector) -> Vec<SignedCell> {
    let mut cells = Vec::new();
    for j in SubsetJ::all(datum.rank()) {
        let table = coset_table(datum, j);
        for (e, entry) in table.entries.iter().enumerate() {
            cells.push(SignedCell {
                j,
                w: table.element(datum, e),
                sigma: sigma_j(j, entry.inv_sign.apply(eps)),
                orientation: if entry.len % 2 == 0 { 1 } else { -1 },
            });
        }
    }
    cells
}

/// Checks that x in W_[J]^- iff w_* x w^J in W_[J]^- for every minimal
/// representative x, with w^J the longest element of W^J. Membership of
/// `w_* x w^J` in W_[J] is decided from its matrix (positive on the simple
/// roots outside J) and its sign condition from the F2 matrices.
pub fn pdw_duality_holds(datum: &RootDatum, j: SubsetJ) -> bool {
    let l = datum.rank();
    let full = SubsetJ::full(l);
    let w_star = longest_in_parabolic(datum, full);
    let w_j = longest_in_parabolic(datum, j.complement(l));
    // Built fresh: caching every table of a rank-8 group costs too much memory.
    let table = CosetTable::build(datum, j);
    let mats = table.matrices(datum);
    let minus = SignVector::all_minus(l);
    // (w_* x w^J)^{-1} = (w^J)^{-1} x^{-1} w_*^{-1}; inverses of involutions
    // and longest elements are the reversed words.
    let rev = |w: &WeylElement| -> Vec<usize> { w.word.iter().rev().copied().collect() };
    let wj_inv = SignMatrix::of_word(datum, &rev(&w_j));
    let ws_inv = SignMatrix::of_word(datum, &rev(&w_star));
    let outside: Vec<usize> = j.complement(l).iter().collect();
    let is_min = |m: &IntMatrix| outside.iter().all(|&i| m.column(i).iter().all(|&x| x >= 0));
    for (e, entry) in table.entries.iter().enumerate() {
        let y = w_star.mat.mul(&mats[e]).mul(&w_j.mat);
        if !is_min(&y) {
            return false;
        }
        let x_minus = minus_off(j, entry.inv_sign.apply(minus));
        let y_inv = wj_inv.mul(&entry.inv_sign).mul(&ws_inv);
        let y_minus = minus_off(j, y_inv.apply(minus));
        if x_minus != y_minus {
            return false;
        }
    }
    true
}

/// `(s_i s_j)^{m_ij} = 1` for the sign action of every pair of simple
/// reflections, `m_ii = 1`.
pub fn braid_relations_hold(datum: &RootDatum) -> bool {
    let l = datum.rank();
    (0..l).all(|i| {
        let si = SignMatrix::simple(datum, i);
        (0..l).all(|j| {
            let p = si.mul(&SignMatrix::simple(datum, j));
            let acc =
                (0..datum.coxeter_m(i, j)).fold(SignMatrix::identity(l), |acc, _| acc.mul(&p));
            acc.is_identity()
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{root_datum, CartanType, Family};

    fn words(ws: &[WeylElement]) -> Vec<String> {
        let mut v: Vec<_> = ws.iter().map(|w| w.word_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn act_simple_examples() {
        let a2 = root_datum(Family::A, 2).unwrap();
        let mm = SignVector::all_minus(2);
        let out = act_simple(&a2, 0, mm);
        assert_eq!(out.to_string(), "(-+)");
        assert_eq!(act_simple(&a2, 0, out), mm);
        let plus = SignVector::all_plus(2);
        assert_eq!(act_simple(&a2, 1, plus), plus);
    }

    #[test]
    fn act_word_composes() {
        let a2 = root_datum(Family::A, 2).unwrap();
        let mm = SignVector::all_minus(2);
        let w = a2.element_from_word(&[1, 0]);
        let expect = act_simple(&a2, 1, act_simple(&a2, 0, mm));
        assert_eq!(act_word(&a2, &w, mm), expect);
        assert_eq!(act_word(&a2, &a2.identity(), mm), mm);
    }

    #[test]
    fn action_well_defined_on_a3() {
        // Every word up to length 7 in W(A3), grouped by matrix: all words
        // for one element give the same sign action.
        let d = root_datum(Family::A, 3).unwrap();
        let mut seen: Vec<(IntMatrix, Vec<SignVector>)> = Vec::new();
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..7 {
            let mut next = Vec::new();
            for w in &frontier {
                let el = d.element_from_word(w);
                let images: Vec<_> = (0..8u16)
                    .map(|b| act_word(&d, &el, SignVector { bits: b, rank: 3 }))
                    .collect();
                match seen.iter().find(|(m, _)| *m == el.mat) {
                    Some((_, imgs)) => assert_eq!(*imgs, images, "{w:?}"),
                    None => seen.push((el.mat.clone(), images)),
                }
                for i in 0..3 {
                    let mut v = w.clone();
                    v.push(i);
                    next.push(v);
                }
            }
            frontier = next;
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn sign_matrices_satisfy_coxeter_relations() {
        for ct in CartanType::all_up_to(8) {
            assert!(
                braid_relations_hold(&crate::lie::RootDatum::new(ct)),
                "{ct}"
            );
        }
    }

    #[test]
    fn sigma_examples() {
        let e = SignVector::all_minus(3);
        assert_eq!(sigma_j(SubsetJ::EMPTY, e), vec![Sign::Minus; 3]);
        assert_eq!(sigma_j(SubsetJ::full(3), e), vec![Sign::Zero; 3]);
        assert_eq!(
            sigma_j(SubsetJ::single(1), e),
            vec![Sign::Minus, Sign::Zero, Sign::Minus]
        );
    }

    /// W_[J]^- by applying words one generator at a time (no F2 matrices).
    fn w_minus_by_words(d: &RootDatum, j: SubsetJ) -> Vec<String> {
        let minus = SignVector::all_minus(d.rank());
        let reps = crate::lie::minimal_coset_reps(d, j);
        let keep: Vec<_> = reps
            .into_iter()
            .filter(|w| minus_off(j, act_inverse_word(d, w, minus)))
            .collect();
        words(&keep)
    }

    #[test]
    fn w_minus_examples() {
        let a2 = root_datum(Family::A, 2).unwrap();
        assert_eq!(
            words(&w_minus_set(&a2, SubsetJ::single(0))),
            vec!["e", "s2s1"]
        );
        let a3 = root_datum(Family::A, 3).unwrap();
        let got = words(&w_minus_set(&a3, SubsetJ::single(1)));
        let mut expect = vec!["e", "s1s2", "s3s2", "s2s3s1s2"];
        expect.sort();
        assert_eq!(got, expect);
        let a1 = root_datum(Family::A, 1).unwrap();
        assert_eq!(
            words(&w_minus_set(&a1, SubsetJ::single(0))),
            vec!["e", "s1"]
        );
    }

    #[test]
    fn matrix_and_word_routes_agree() {
        for ct in CartanType::all_up_to(5) {
            let d = crate::lie::RootDatum::new(ct);
            for j in SubsetJ::all(d.rank()) {
                assert_eq!(
                    words(&w_minus_set(&d, j)),
                    w_minus_by_words(&d, j),
                    "{ct} {j:?}"
                );
            }
        }
    }

    #[test]
    fn cell_counts() {
        let a1 = root_datum(Family::A, 1).unwrap();
        let cells = enumerate_cells(&a1, SignVector::all_minus(1));
        assert_eq!(cells.len(), 3);
        assert_eq!(cells.iter().filter(|c| c.dim() == 1).count(), 1);
        let a2 = root_datum(Family::A, 2).unwrap();
        let cells = enumerate_cells(&a2, SignVector::all_minus(2));
        let by_dim = |k| cells.iter().filter(|c| c.dim() == k).count();
        assert_eq!((by_dim(2), by_dim(1), by_dim(0)), (1, 6, 6));
        for c in &cells {
            assert_eq!(c.orientation, if c.w.len % 2 == 0 { 1 } else { -1 });
            for k in 0..2 {
                assert_eq!(c.sigma[k] == Sign::Zero, c.j.contains(k));
            }
        }
    }

    #[test]
    fn cell_total_matches_coset_tables() {
        for ct in CartanType::all_up_to(4) {
            let d = crate::lie::RootDatum::new(ct);
            let total: usize = SubsetJ::all(d.rank())
                .map(|j| coset_table(&d, j).len())
                .sum();
            assert_eq!(
                enumerate_cells(&d, SignVector::all_minus(d.rank())).len(),
                total
            );
        }
    }

    #[test]
    fn longest_elements_fix_all_minus() {
        for ct in CartanType::all_up_to(7) {
            let d = crate::lie::RootDatum::new(ct);
            let l = d.rank();
            let minus = SignVector::all_minus(l);
            let w0 = longest_in_parabolic(&d, SubsetJ::full(l));
            assert_eq!(act_word(&d, &w0, minus), minus, "{ct}");
            for j in SubsetJ::all(l) {
                let wj = longest_in_parabolic(&d, j.complement(l));
                let img = act_word(&d, &wj, minus);
                assert_eq!(sigma_j(j, img), sigma_j(j, minus), "{ct}");
            }
        }
    }

    #[test]
    fn type_a_w_minus_counts() {
        for l in 2..=10 {
            let d = root_datum(Family::A, l).unwrap();
            assert_eq!(w_minus_indices(&d, SubsetJ::single(0)).len(), 2);
            assert_eq!(
                w_minus_indices(&d, SubsetJ::single(1)).len(),
                2 * ((l + 1) / 2)
            );
        }
    }

    #[test]
    fn duality_small() {
        for ct in CartanType::all_up_to(4) {
            let d = crate::lie::RootDatum::new(ct);
            for j in SubsetJ::all(d.rank()) {
                assert!(pdw_duality_holds(&d, j), "{ct} {j:?}");
            }
        }
    }
}
