//! Root data, Weyl groups as integer matrix groups, and minimal parabolic
//! coset representatives.
//!
//! Simple roots are indexed from 0 in code; index `i` is the paper-style
//! label alpha_{i+1}. Cartan entries follow `C[i][j] = <alpha_i, alpha_j^vee>`
//! and reflections act on root coordinates by `s_i(alpha_j) = alpha_j - C[j][i] alpha_i`.
//!
//! The Dynkin labeling is reconstructed (not read off a figure): A is a path,
//! B/C put the double bond between the last two nodes, D hangs the last two
//! nodes off node l-2, E hangs node n off node 3, F4 has its double bond in the
//! middle.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::sign::SignMatrix;

/// Largest supported rank; subsets and sign vectors are packed into `u16`.
pub const MAX_RANK: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
    ];

    /// Ranks at which this family is a simple type, capped at `max`.
    pub fn ranks_up_to(self, max: usize) -> impl Iterator<Item = usize> {
        (1..=max).filter(move |&l| CartanType::new(self, l).is_ok())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

/// A simple type label such as `E6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => (1..=MAX_RANK).contains(&rank),
            Family::B | Family::C => (2..=MAX_RANK).contains(&rank),
            Family::D => (4..=MAX_RANK).contains(&rank),
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::InvalidType { family, rank })
        }
    }

    /// Every simple type up to the given rank, in family then rank order.
    pub fn all_up_to(max_rank: usize) -> Vec<CartanType> {
        Family::ALL
            .iter()
            .flat_map(|&f| {
                f.ranks_up_to(max_rank)
                    .map(move |l| CartanType { family: f, rank: l })
            })
            .collect()
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i32>> {
        let l = self.rank;
        let mut c = vec![vec![0i32; l]; l];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut bond = |i: usize, j: usize| {
            c[i][j] = -1;
            c[j][i] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 0..l - 1 {
                    bond(i, i + 1);
                }
            }
            Family::D => {
                for i in 0..l - 3 {
                    bond(i, i + 1);
                }
                bond(l - 3, l - 2);
                bond(l - 3, l - 1);
            }
            Family::E => {
                for i in 0..l - 2 {
                    bond(i, i + 1);
                }
                bond(2, l - 1);
            }
            Family::F => {
                bond(0, 1);
                bond(1, 2);
                bond(2, 3);
            }
            Family::G => bond(0, 1),
        }
        match self.family {
            Family::B => c[l - 2][l - 1] = -2,
            Family::C => c[l - 1][l - 2] = -2,
            Family::F => c[1][2] = -2,
            Family::G => c[1][0] = -3,
            _ => {}
        }
        c
    }

    pub fn n_pos_roots(&self) -> usize {
        let l = self.rank;
        match (self.family, l) {
            (Family::A, _) => l * (l + 1) / 2,
            (Family::B | Family::C, _) => l * l,
            (Family::D, _) => l * (l - 1),
            (Family::E, 6) => 36,
            (Family::E, 7) => 63,
            (Family::E, _) => 120,
            (Family::F, _) => 24,
            (Family::G, _) => 6,
        }
    }

    /// |W| from the product of the degrees of the basic invariants.
    pub fn weyl_order_formula(&self) -> u128 {
        let l = self.rank as u128;
        let fact = |n: u128| (1..=n).product::<u128>();
        match (self.family, self.rank) {
            (Family::A, _) => fact(l + 1),
            (Family::B | Family::C, _) => (1u128 << l) * fact(l),
            (Family::D, _) => (1u128 << (l - 1)) * fact(l),
            (Family::E, 6) => 51_840,
            (Family::E, 7) => 2_903_040,
            (Family::E, _) => 696_729_600,
            (Family::F, _) => 1152,
            (Family::G, _) => 12,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (f, r) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
        let family: Family = f.parse()?;
        let rank = r
            .parse()
            .map_err(|_| Error::Invalid(format!("bad rank in type label {s:?}")))?;
        CartanType::new(family, rank)
    }
}

/// A set of simple roots, bit `i` standing for alpha_{i+1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetJ(pub u16);

impl SubsetJ {
    pub const EMPTY: SubsetJ = SubsetJ(0);

    pub fn full(rank: usize) -> Self {
        SubsetJ(((1u32 << rank) - 1) as u16)
    }

    pub fn single(i: usize) -> Self {
        SubsetJ(1 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        SubsetJ(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        SubsetJ(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        SubsetJ(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, rank: usize) -> Self {
        SubsetJ(!self.0 & Self::full(rank).0)
    }

    pub fn is_subset_of(self, other: SubsetJ) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..16).filter(move |&i| self.contains(i))
    }

    /// All subsets of a rank-`l` root set, ascending by mask.
    pub fn all(rank: usize) -> impl Iterator<Item = SubsetJ> {
        (0..1u32 << rank).map(|m| SubsetJ(m as u16))
    }

    /// `(*0*)` style label: `0` marks roots in J, `*` roots outside it.
    pub fn star_string(self, rank: usize) -> String {
        let body: String = (0..rank)
            .map(|i| if self.contains(i) { '0' } else { '*' })
            .collect();
        format!("({body})")
    }

    pub fn parse_star_string(s: &str) -> Result<(Self, usize)> {
        let body = s
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| Error::Invalid(format!("bad subset label {s:?}")))?;
        let mut j = SubsetJ::EMPTY;
        for (i, c) in body.chars().enumerate() {
            match c {
                '0' => j = j.with(i),
                '*' => {}
                _ => return Err(Error::Invalid(format!("bad subset label {s:?}"))),
            }
        }
        Ok((j, body.chars().count()))
    }
}

/// Small dense square integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        IntMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.n + c]
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.n).map(|r| self.get(r, c)).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a != 0 {
                    for c in 0..n {
                        data[r * n + c] += a * other.data[k * n + c];
                    }
                }
            }
        }
        IntMatrix { n, data }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }
}

/// A finite root system with its Weyl group generators.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub cartan_type: CartanType,
    pub cartan: Vec<Vec<i32>>,
    pub refl: Vec<IntMatrix>,
    pub n_pos_roots: usize,
    positive_roots: Vec<Vec<i64>>,
}

pub fn root_datum(family: Family, rank: usize) -> Result<RootDatum> {
    Ok(RootDatum::new(CartanType::new(family, rank)?))
}

impl RootDatum {
    pub fn new(cartan_type: CartanType) -> Self {
        let cartan = cartan_type.cartan_matrix();
        let l = cartan_type.rank;
        let refl = (0..l)
            .map(|i| {
                let mut m = IntMatrix::identity(l);
                // Column j holds s_i(alpha_j) = alpha_j - C[j][i] alpha_i.
                for j in 0..l {
                    m.data[i * l + j] -= cartan[j][i] as i64;
                }
                m
            })
            .collect::<Vec<_>>();
        let positive_roots = enumerate_positive_roots(&refl, l);
        RootDatum {
            cartan_type,
            cartan,
            refl,
            n_pos_roots: cartan_type.n_pos_roots(),
            positive_roots,
        }
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn family(&self) -> Family {
        self.cartan_type.family
    }

    /// Positive roots in simple-root coordinates, found by closing the simple
    /// roots under the reflections.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::RootIndex {
                index: i,
                rank: self.rank(),
            })
        }
    }

    /// Coxeter exponent m_ij from the bond multiplicity.
    pub fn coxeter_m(&self, i: usize, j: usize) -> usize {
        if i == j {
            return 1;
        }
        match self.cartan[i][j] * self.cartan[j][i] {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            p => unreachable!("Cartan product {p} is not finite type"),
        }
    }

    /// Element of W from any word (reduced or not); the stored length is the
    /// inversion count.
    pub fn element_from_word(&self, word: &[usize]) -> WeylElement {
        let l = self.rank();
        let mat = word
            .iter()
            .fold(IntMatrix::identity(l), |m, &i| m.mul(&self.refl[i]));
        let len = self.inversions(&mat);
        WeylElement {
            word: word.to_vec(),
            mat,
            len,
        }
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversions(&self, mat: &IntMatrix) -> usize {
        self.positive_roots
            .iter()
            .filter(|r| mat.apply(r).iter().any(|&x| x < 0))
            .count()
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement {
            word: Vec::new(),
            mat: IntMatrix::identity(self.rank()),
            len: 0,
        }
    }
}

fn enumerate_positive_roots(refl: &[IntMatrix], l: usize) -> Vec<Vec<i64>> {
    let mut seen: Vec<Vec<i64>> = (0..l)
        .map(|i| (0..l).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut head = 0;
    while head < seen.len() {
        let r = seen[head].clone();
        head += 1;
        for s in refl {
            let v = s.apply(&r);
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
    }
    let mut pos: Vec<_> = seen
        .into_iter()
        .filter(|r| r.iter().all(|&x| x >= 0))
        .collect();
    pos.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    pos
}

/// Weyl group element; equality is by matrix.
#[derive(Debug, Clone)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub mat: IntMatrix,
    pub len: usize,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

impl Eq for WeylElement {}

impl WeylElement {
    /// `s1s2s1` style label, `e` for the identity.
    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            return "e".to_string();
        }
        self.word.iter().map(|i| format!("s{}", i + 1)).collect()
    }
}

/// Longest element of the parabolic subgroup generated by `s`.
///
/// Grows the element on the right while some generator still increases
/// the length, so the word is reduced by construction.
pub fn longest_in_parabolic(datum: &RootDatum, s: SubsetJ) -> WeylElement {
    let l = datum.rank();
    let mut word = Vec::new();
    let mut mat = IntMatrix::identity(l);
    'grow: loop {
        for i in s.iter().filter(|&i| i < l) {
            if mat.column(i).iter().all(|&x| x >= 0) {
                mat = mat.mul(&datum.refl[i]);
                word.push(i);
                continue 'grow;
            }
        }
        break;
    }
    let len = word.len();
    WeylElement { word, mat, len }
}

/// One minimal coset representative in a [`CosetTable`].
#[derive(Debug, Clone, Copy)]
pub struct CosetEntry {
    /// Index of the representative this one was reached from (itself for the identity).
    pub parent: u32,
    /// Generator `i` with `w = s_i * parent`.
    pub generator: u8,
    pub len: u16,
    /// Sign action of `w^{-1}` over F2.
    pub inv_sign: SignMatrix,
}

/// Minimal representatives of W/W^J, W^J = <s_i : alpha_i not in J>, in BFS
/// order (lengths nondecreasing).
#[derive(Debug)]
pub struct CosetTable {
    pub cartan_type: CartanType,
    pub j: SubsetJ,
    pub entries: Vec<CosetEntry>,
}

impl CosetTable {
    /// BFS on the W-orbit of the sum of fundamental weights indexed by J,
    /// in Dynkin-label coordinates. Going from mu to s_i(mu) is a length-one
    /// step up exactly when mu_i > 0.
    pub fn build(datum: &RootDatum, j: SubsetJ) -> CosetTable {
        let l = datum.rank();
        let c = &datum.cartan;
        let gens: Vec<SignMatrix> = (0..l).map(|i| SignMatrix::simple(datum, i)).collect();
        let mut start = [0i16; MAX_RANK];
        for i in j.iter() {
            start[i] = 1;
        }
        let mut points = vec![start];
        let mut index: HashMap<[i16; MAX_RANK], u32> = HashMap::new();
        index.insert(start, 0);
        let mut entries = vec![CosetEntry {
            parent: 0,
            generator: 0,
            len: 0,
            inv_sign: SignMatrix::identity(l),
        }];
        let mut head = 0usize;
        while head < points.len() {
            let mu = points[head];
            for i in 0..l {
                if mu[i] <= 0 {
                    continue;
                }
                let mut nu = mu;
                for k in 0..l {
                    nu[k] -= mu[i] * c[i][k] as i16;
                }
                if index.contains_key(&nu) {
                    continue;
                }
                let id = points.len() as u32;
                index.insert(nu, id);
                points.push(nu);
                let parent = entries[head];
                entries.push(CosetEntry {
                    parent: head as u32,
                    generator: i as u8,
                    len: parent.len + 1,
                    inv_sign: parent.inv_sign.mul(&gens[i]),
                });
            }
            head += 1;
        }
        CosetTable {
            cartan_type: datum.cartan_type,
            j,
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reduced word `[g(e), g(parent(e)), ...]` of entry `e`.
    pub fn word(&self, e: usize) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.entries[e].len as usize);
        let mut cur = e;
        while self.entries[cur].len > 0 {
            word.push(self.entries[cur].generator as usize);
            cur = self.entries[cur].parent as usize;
        }
        word
    }

    pub fn element(&self, datum: &RootDatum, e: usize) -> WeylElement {
        let word = self.word(e);
        let mat = word
            .iter()
            .fold(IntMatrix::identity(datum.rank()), |m, &i| {
                m.mul(&datum.refl[i])
            });
        WeylElement {
            word,
            mat,
            len: self.entries[e].len as usize,
        }
    }

    /// Root-coordinate matrices of every representative, built along the BFS tree.
    pub fn matrices(&self, datum: &RootDatum) -> Vec<IntMatrix> {
        let mut out: Vec<IntMatrix> = Vec::with_capacity(self.len());
        for (e, entry) in self.entries.iter().enumerate() {
            if e == 0 {
                out.push(IntMatrix::identity(datum.rank()));
            } else {
                let m = datum.refl[entry.generator as usize].mul(&out[entry.parent as usize]);
                out.push(m);
            }
        }
        out
    }
}

type CacheKey = (CartanType, SubsetJ);

fn coset_cache() -> &'static Mutex<HashMap<CacheKey, Arc<CosetTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<CosetTable>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Memoized coset table for a standard datum. Tables are built outside the
/// lock; the first one published wins.
pub fn coset_table(datum: &RootDatum, j: SubsetJ) -> Arc<CosetTable> {
    let key = (datum.cartan_type, j);
    if let Some(t) = coset_cache().lock().unwrap().get(&key) {
        return Arc::clone(t);
    }
    let table = Arc::new(CosetTable::build(datum, j));
    let mut cache = coset_cache().lock().unwrap();
    Arc::clone(cache.entry(key).or_insert(table))
}

/// Shared standard datum for a type.
pub fn standard_datum(ct: CartanType) -> Arc<RootDatum> {
    static CACHE: OnceLock<Mutex<HashMap<CartanType, Arc<RootDatum>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(d) = cache.lock().unwrap().get(&ct) {
        return Arc::clone(d);
    }
    let d = Arc::new(RootDatum::new(ct));
    Arc::clone(cache.lock().unwrap().entry(ct).or_insert(d))
}

pub fn minimal_coset_reps(datum: &RootDatum, j: SubsetJ) -> Vec<WeylElement> {
    let table = coset_table(datum, j);
    (0..table.len()).map(|e| table.element(datum, e)).collect()
}

/// |W|: regular-orbit enumeration below E8, product formula for E8.
pub fn weyl_order(datum: &RootDatum) -> u128 {
    let ct = datum.cartan_type;
    if ct.family == Family::E && ct.rank == 8 {
        return ct.weyl_order_formula();
    }
    CosetTable::build(datum, SubsetJ::full(datum.rank())).len() as u128
}

/// Identifies a connected Cartan matrix with a standard type. Returns the
/// type and the map from input node to standard node; bond directions must
/// match exactly, so B and C stay distinct.
pub fn classify(cartan: &[Vec<i32>]) -> Result<(CartanType, Vec<usize>)> {
    let n = cartan.len();
    for family in Family::ALL {
        let Ok(ct) = CartanType::new(family, n) else {
            continue;
        };
        let std = ct.cartan_matrix();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if match_nodes(cartan, &std, 0, &mut map, &mut used) {
            return Ok((ct, map));
        }
    }
    Err(Error::Classification(format!("{cartan:?}")))
}

fn match_nodes(
    a: &[Vec<i32>],
    b: &[Vec<i32>],
    i: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = a.len();
    if i == n {
        return true;
    }
    for t in 0..n {
        if used[t] {
            continue;
        }
        let fits = (0..i).all(|p| a[i][p] == b[t][map[p]] && a[p][i] == b[map[p]][t]);
        if fits {
            map[i] = t;
            used[t] = true;
            if match_nodes(a, b, i + 1, map, used) {
                return true;
            }
            used[t] = false;
        }
    }
    false
}

/// Nodes of the connected component of `k` in the diagram restricted to `nodes`.
pub fn component(cartan: &[Vec<i32>], nodes: SubsetJ, k: usize) -> SubsetJ {
    let mut comp = SubsetJ::single(k);
    let mut stack = vec![k];
    while let Some(i) = stack.pop() {
        for j in nodes.iter() {
            if !comp.contains(j) && cartan[i][j] != 0 {
                comp = comp.with(j);
                stack.push(j);
            }
        }
    }
    comp
}

/// Principal submatrix on `nodes`, in ascending node order.
pub fn submatrix(cartan: &[Vec<i32>], nodes: SubsetJ) -> Vec<Vec<i32>> {
    let idx: Vec<usize> = nodes.iter().collect();
    idx.iter()
        .map(|&i| idx.iter().map(|&j| cartan[i][j]).collect())
        .collect()
}
