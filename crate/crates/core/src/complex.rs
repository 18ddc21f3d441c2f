//! Chain complexes on subsets of simple roots, Smith normal form and
//! (co)homology over Z, Q and Z/2.
//!
//! Grade `k` has basis the subsets with `l - k` elements in ascending mask
//! order, and `d_k` sends `J` to `sum [J; J + alpha] (J + alpha)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::incidence::{appended_cartan, incidence_in, nu, IncidenceTable};
use crate::lie::{Family, RootDatum, SubsetJ};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Z,
    Q,
    Z2,
}

impl std::str::FromStr for Coefficients {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Coefficients::Z),
            "Q" | "q" => Ok(Coefficients::Q),
            "Z2" | "z2" => Ok(Coefficients::Z2),
            _ => Err(Error::Invalid(format!(
                "unknown coefficients {s:?}: expected Z, Q or Z2"
            ))),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coefficients::Z => "Z",
            Coefficients::Q => "Q",
            Coefficients::Z2 => "Z2",
        })
    }
}

/// Finitely generated abelian group `Z^free + sum Z/t`. Over a field the
/// whole group is free and `free` is its dimension.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AbelianGroup {
    pub free: usize,
    /// Invariant factors >= 2, each dividing the next.
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn free(n: usize) -> Self {
        AbelianGroup {
            free: n,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = self.torsion[i];
            let n = self.torsion[i..].iter().take_while(|&&x| x == t).count();
            parts.push(if n == 1 {
                format!("Z_{t}")
            } else {
                format!("Z_{t}^{n}")
            });
            i += n;
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        ZMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> ZMatrix {
        let mut t = ZMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &ZMatrix) -> ZMatrix {
        let mut out = ZMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a != 0 {
                    for c in 0..other.cols {
                        out.data[r * other.cols + c] += a * other.get(k, c);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn to_big(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| BigInt::from(self.get(r, c)))
                    .collect()
            })
            .collect()
    }
}

/// `U A V = D` with `U`, `V` unimodular and `D` diagonal in divisibility order.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub d: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl SnfResult {
    /// Nonzero diagonal entries.
    pub fn invariants(&self) -> Vec<BigInt> {
        diagonal_nonzero(&self.d)
    }
}

fn diagonal_nonzero(d: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = d.len().min(d.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| d[i][i].clone())
        .filter(|x| !x.is_zero())
        .collect()
}

fn identity_big(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

struct Snf {
    d: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

impl Snf {
    fn rows(&self) -> usize {
        self.d.len()
    }

    fn cols(&self) -> usize {
        self.d.first().map_or(0, Vec::len)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap(a, b);
        if let Some(u) = &mut self.u {
            u.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.d {
            row.swap(a, b);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(a, b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        fn apply(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
            let (s, d) = if src < dst {
                let (lo, hi) = m.split_at_mut(dst);
                (&lo[src], &mut hi[0])
            } else {
                let (lo, hi) = m.split_at_mut(src);
                (&hi[0], &mut lo[dst])
            };
            for (x, y) in d.iter_mut().zip(s) {
                if !y.is_zero() {
                    *x -= q * y;
                }
            }
        }
        apply(&mut self.d, dst, src, q);
        if let Some(u) = &mut self.u {
            apply(u, dst, src, q);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        fn apply(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
            for row in m {
                if !row[src].is_zero() {
                    let t = q * &row[src];
                    row[dst] -= t;
                }
            }
        }
        apply(&mut self.d, dst, src, q);
        if let Some(v) = &mut self.v {
            apply(v, dst, src, q);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for x in &mut self.d[r] {
            *x = -x.clone();
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[r] {
                *x = -x.clone();
            }
        }
    }

    fn smallest(&self, t: usize, only_cross: bool) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let consider = |i: usize, j: usize, best: &mut Option<(usize, usize)>| {
            let x = &self.d[i][j];
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.d[bi][bj].abs()) {
                *best = Some((i, j));
            }
        };
        if only_cross {
            for i in t..self.rows() {
                consider(i, t, &mut best);
            }
            for j in t..self.cols() {
                consider(t, j, &mut best);
            }
        } else {
            for i in t..self.rows() {
                for j in t..self.cols() {
                    consider(i, j, &mut best);
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let n = self.rows().min(self.cols());
        for t in 0..n {
            let Some((pi, pj)) = self.smallest(t, false) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.d[t][t].clone();
                let mut clean = true;
                for i in t + 1..self.rows() {
                    if !self.d[i][t].is_zero() {
                        let q = self.d[i][t].div_floor(&p);
                        self.row_op(i, t, &q);
                        clean &= self.d[i][t].is_zero();
                    }
                }
                for j in t + 1..self.cols() {
                    if !self.d[t][j].is_zero() {
                        let q = self.d[t][j].div_floor(&p);
                        self.col_op(j, t, &q);
                        clean &= self.d[t][j].is_zero();
                    }
                }
                if !clean {
                    let (pi, pj) = self
                        .smallest(t, true)
                        .expect("pivot row or column is nonzero");
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                let bad = (t + 1..self.rows())
                    .find(|&i| (t + 1..self.cols()).any(|j| !self.d[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.row_op(t, i, &BigInt::from(-1)),
                    None => break,
                }
            }
            if self.d[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

pub fn smith_normal_form(a: &ZMatrix) -> SnfResult {
    let mut s = Snf {
        d: a.to_big(),
        u: Some(identity_big(a.rows)),
        v: Some(identity_big(a.cols)),
    };
    s.run();
    SnfResult {
        d: s.d,
        u: s.u.unwrap(),
        v: s.v.unwrap(),
    }
}

/// Nonzero invariant factors without tracking the transforms.
pub fn invariant_factors(a: &ZMatrix) -> Vec<BigInt> {
    let mut s = Snf {
        d: a.to_big(),
        u: None,
        v: None,
    };
    s.run();
    diagonal_nonzero(&s.d)
}

/// Rank over Q by fraction-free elimination.
pub fn rank_q(a: &ZMatrix) -> usize {
    let mut m = a.to_big();
    let (rows, cols) = (a.rows, a.cols);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for cc in c + 1..cols {
                let v = (&m[rank][c] * &m[r][cc] - &m[r][c] * &m[rank][cc]) / &prev;
                m[r][cc] = v;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank over Z/2.
pub fn rank_z2(a: &ZMatrix) -> usize {
    let words = a.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..a.rows)
        .map(|r| {
            let mut bits = vec![0u64; words];
            for c in 0..a.cols {
                if a.get(r, c).rem_euclid(2) == 1 {
                    bits[c / 64] |= 1 << (c % 64);
                }
            }
            bits
        })
        .collect();
    let mut rank = 0;
    for c in 0..a.cols {
        let (w, b) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_over(a: &ZMatrix, coeff: Coefficients) -> usize {
    match coeff {
        Coefficients::Z | Coefficients::Q => rank_q(a),
        Coefficients::Z2 => rank_z2(a),
    }
}

/// Graded free complex with `d_k : C_k -> C_{k-1}`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub rank: usize,
    /// `bases[k]` lists the subsets spanning grade k.
    pub bases: Vec<Vec<SubsetJ>>,
    /// `boundaries[k]` is `d_k`, rows indexed by grade k-1; `boundaries[0]` is empty.
    pub boundaries: Vec<ZMatrix>,
}

impl ChainComplex {
    /// Complex on the subsets in `cells` (ascending mask order per grade),
    /// with coefficient `coef(J, k)` on the edge `J -> J + alpha_k`.
    pub fn from_coefficients(
        rank: usize,
        cells: impl Fn(SubsetJ) -> bool,
        coef: impl Fn(SubsetJ, usize) -> Result<i64>,
    ) -> Result<Self> {
        let mut bases: Vec<Vec<SubsetJ>> = vec![Vec::new(); rank + 1];
        for j in SubsetJ::all(rank).filter(|&j| cells(j)) {
            bases[rank - j.len()].push(j);
        }
        let mut boundaries = vec![ZMatrix::zeros(0, bases[0].len())];
        for k in 1..=rank {
            let (src, dst) = (&bases[k], &bases[k - 1]);
            let mut m = ZMatrix::zeros(dst.len(), src.len());
            for (c, &j) in src.iter().enumerate() {
                for a in j.complement(rank).iter() {
                    if let Ok(r) = dst.binary_search(&j.with(a)) {
                        m.set(r, c, coef(j, a)?);
                    }
                }
            }
            boundaries.push(m);
        }
        let cx = ChainComplex {
            rank,
            bases,
            boundaries,
        };
        cx.check_boundary_squares()?;
        Ok(cx)
    }

    pub fn dim(&self, k: usize) -> usize {
        self.bases[k].len()
    }

    fn boundary(&self, k: usize) -> ZMatrix {
        if k <= self.rank {
            self.boundaries[k].clone()
        } else {
            ZMatrix::zeros(self.dim(self.rank), 0)
        }
    }

    /// Verifies `d_{k-1} d_k = 0`, naming a failing square.
    pub fn check_boundary_squares(&self) -> Result<()> {
        for k in 2..=self.rank {
            let prod = self.boundaries[k - 1].mul(&self.boundaries[k]);
            if let Some(idx) = prod.data.iter().position(|&x| x != 0) {
                let (r, c) = (idx / prod.cols, idx % prod.cols);
                let (top, bottom) = (self.bases[k][c], self.bases[k - 2][r]);
                let diff: Vec<usize> = SubsetJ(bottom.0 & !top.0).iter().collect();
                return Err(Error::BoundarySquare {
                    j1: top.star_string(self.rank),
                    i: diff[0],
                    j: diff[1],
                    value: prod.data[idx],
                });
            }
        }
        Ok(())
    }

    fn field_betti(&self, coeff: Coefficients) -> Vec<AbelianGroup> {
        let ranks: Vec<usize> = (0..=self.rank + 1)
            .map(|k| rank_over(&self.boundary(k), coeff))
            .collect();
        (0..=self.rank)
            .map(|k| AbelianGroup::free(self.dim(k) - ranks[k] - ranks[k + 1]))
            .collect()
    }

    pub fn homology(&self, coeff: Coefficients) -> Vec<AbelianGroup> {
        match coeff {
            Coefficients::Q | Coefficients::Z2 => self.field_betti(coeff),
            Coefficients::Z => {
                let inv: Vec<Vec<BigInt>> = (0..=self.rank + 1)
                    .map(|k| invariant_factors(&self.boundary(k)))
                    .collect();
                (0..=self.rank)
                    .map(|k| AbelianGroup {
                        free: self.dim(k) - inv[k].len() - inv[k + 1].len(),
                        torsion: torsion_of(&inv[k + 1]),
                    })
                    .collect()
            }
        }
    }

    /// `H^k` from the transposed maps `delta^k = d_{k+1}^T : C^k -> C^{k+1}`.
    pub fn cohomology(&self, coeff: Coefficients) -> Vec<AbelianGroup> {
        let deltas: Vec<ZMatrix> = (0..=self.rank + 1)
            .map(|k| self.boundary(k).transpose())
            .collect();
        match coeff {
            Coefficients::Q | Coefficients::Z2 => {
                let ranks: Vec<usize> = deltas.iter().map(|d| rank_over(d, coeff)).collect();
                (0..=self.rank)
                    .map(|k| AbelianGroup::free(self.dim(k) - ranks[k + 1] - ranks[k]))
                    .collect()
            }
            Coefficients::Z => {
                let inv: Vec<Vec<BigInt>> = deltas.iter().map(invariant_factors).collect();
                (0..=self.rank)
                    .map(|k| AbelianGroup {
                        free: self.dim(k) - inv[k + 1].len() - inv[k].len(),
                        torsion: torsion_of(&inv[k]),
                    })
                    .collect()
            }
        }
    }

    pub fn betti_q(&self) -> Vec<usize> {
        self.homology(Coefficients::Q)
            .iter()
            .map(|g| g.free)
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.rank)
            .map(|k| {
                if k % 2 == 0 {
                    self.dim(k) as i64
                } else {
                    -(self.dim(k) as i64)
                }
            })
            .sum()
    }
}

fn torsion_of(inv: &[BigInt]) -> Vec<u64> {
    inv.iter()
        .filter(|x| !x.is_one())
        .map(|x| x.to_u64().expect("torsion fits in u64"))
        .collect()
}

/// Incidence complex of a datum; fails if the boundary does not square to zero.
pub fn build_complex(datum: &RootDatum) -> Result<ChainComplex> {
    let table = IncidenceTable::build(datum)?;
    ChainComplex::from_coefficients(datum.rank(), |_| true, |j, k| Ok(table.get(j, k)))
}

pub fn homology(datum: &RootDatum, coeff: Coefficients) -> Result<Vec<AbelianGroup>> {
    Ok(build_complex(datum)?.homology(coeff))
}

pub fn cohomology(datum: &RootDatum, coeff: Coefficients) -> Result<Vec<AbelianGroup>> {
    Ok(build_complex(datum)?.cohomology(coeff))
}

fn require_type_a(datum: &RootDatum, what: &'static str) -> Result<()> {
    if datum.family() == Family::A {
        Ok(())
    } else {
        Err(Error::Unsupported(what, datum.cartan_type.to_string()))
    }
}

fn nu_unit(j: SubsetJ, k: usize) -> i64 {
    if nu(j, k) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Every nonzero incidence replaced by `(-1)^nu * 2`; integral cohomology.
pub fn schubert_variant(datum: &RootDatum) -> Result<Vec<AbelianGroup>> {
    Ok(schubert_complex(datum)?.cohomology(Coefficients::Z))
}

/// The complex behind [`schubert_variant`].
pub fn schubert_complex(datum: &RootDatum) -> Result<ChainComplex> {
    require_type_a(datum, "the +-2 variant")?;
    let table = IncidenceTable::build(datum)?;
    ChainComplex::from_coefficients(
        datum.rank(),
        |_| true,
        |j, k| {
            Ok(if table.get(j, k) == 0 {
                0
            } else {
                2 * nu_unit(j, k)
            })
        },
    )
}

/// Complex on the local graph with unit weights `(-1)^nu`.
pub fn local_complex(datum: &RootDatum) -> Result<ChainComplex> {
    let ext = appended_cartan(datum)?;
    ChainComplex::from_coefficients(
        datum.rank(),
        |_| true,
        |j, k| {
            Ok(if incidence_in(&ext, j, k)? == 0 {
                0
            } else {
                nu_unit(j, k)
            })
        },
    )
}

/// Same graph with the incidence numbers of the extended diagram as weights.
pub fn local_complex_weighted(datum: &RootDatum) -> Result<ChainComplex> {
    let ext = appended_cartan(datum)?;
    ChainComplex::from_coefficients(datum.rank(), |_| true, |j, k| incidence_in(&ext, j, k))
}

/// Rational cohomology dimensions of the local complex (type A).
pub fn local_complex_q(datum: &RootDatum) -> Result<Vec<usize>> {
    require_type_a(datum, "the local complex")?;
    Ok(local_complex(datum)?
        .cohomology(Coefficients::Q)
        .iter()
        .map(|g| g.free)
        .collect())
}

/// Rational Betti numbers of the subcomplex of cells containing the last
/// root and of the quotient by it.
pub fn last_node_split(datum: &RootDatum) -> Result<(Vec<usize>, Vec<usize>)> {
    let l = datum.rank();
    let last = l - 1;
    let table = IncidenceTable::build(datum)?;
    let coef = |j: SubsetJ, k: usize| Ok(table.get(j, k));
    let sub = ChainComplex::from_coefficients(l, |j| j.contains(last), coef)?;
    let quot = ChainComplex::from_coefficients(l, |j| !j.contains(last), coef)?;
    Ok((sub.betti_q(), quot.betti_q()))
}
