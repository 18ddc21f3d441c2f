//! Incidence numbers between subsystem cells, the graphs they define, and
//! orientability.
//!
//! `[J; J + alpha_k]` has magnitude equal to the top incidence of the
//! connected component of `Pi \ J` containing alpha_k, and sign `(-1)^nu`
//! with `nu` the number of roots before alpha_k that are not in J.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lie::{
    classify, component, standard_datum, submatrix, CartanType, Family, RootDatum, SubsetJ,
};
use crate::sign::w_minus_signed_count;

/// `nu(J, k)`: roots alpha_j with j < k outside J.
pub fn nu(j: SubsetJ, k: usize) -> usize {
    (0..k).filter(|&i| !j.contains(i)).count()
}

fn nu_sign(j: SubsetJ, k: usize) -> i64 {
    if nu(j, k) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `[empty; {alpha_k}]` for a standard datum.
pub fn top_incidence(datum: &RootDatum, k: usize) -> i64 {
    top_incidence_of_type(datum.cartan_type, k)
}

pub fn top_incidence_of_type(ct: CartanType, k: usize) -> i64 {
    static CACHE: OnceLock<Mutex<HashMap<(CartanType, usize), i64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&v) = cache.lock().unwrap().get(&(ct, k)) {
        return v;
    }
    let datum = standard_datum(ct);
    let magnitude = w_minus_signed_count(&datum, SubsetJ::single(k)).abs();
    let v = if k % 2 == 0 { magnitude } else { -magnitude };
    cache.lock().unwrap().insert((ct, k), v);
    v
}

/// Incidence number for an arbitrary finite-type Cartan matrix in its own
/// labeling.
pub fn incidence_in(cartan: &[Vec<i32>], j: SubsetJ, k: usize) -> Result<i64> {
    let rank = cartan.len();
    if k >= rank {
        return Err(Error::RootIndex { index: k, rank });
    }
    if j.contains(k) {
        return Err(Error::Invalid(format!("alpha_{} already in J", k + 1)));
    }
    let comp = component(cartan, j.complement(rank), k);
    let (ct, map) = classify(&submatrix(cartan, comp))?;
    let pos = comp
        .iter()
        .position(|i| i == k)
        .expect("k lies in its component");
    Ok(nu_sign(j, k) * top_incidence_of_type(ct, map[pos]).abs())
}

pub fn incidence(datum: &RootDatum, j: SubsetJ, k: usize) -> Result<i64> {
    incidence_in(&datum.cartan, j, k)
}

/// All incidence numbers `[J; J + alpha_k]` of one datum.
#[derive(Debug, Clone)]
pub struct IncidenceTable {
    pub cartan_type: CartanType,
    pub entries: BTreeMap<(SubsetJ, usize), i64>,
}

impl IncidenceTable {
    pub fn build(datum: &RootDatum) -> Result<Self> {
        let l = datum.rank();
        let mut entries = BTreeMap::new();
        for j in SubsetJ::all(l) {
            for k in j.complement(l).iter() {
                entries.insert((j, k), incidence(datum, j, k)?);
            }
        }
        Ok(IncidenceTable {
            cartan_type: datum.cartan_type,
            entries,
        })
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn get(&self, j: SubsetJ, k: usize) -> i64 {
        self.entries[&(j, k)]
    }

    /// `[J1;J2][J2;J4] + [J1;J3][J3;J4]` for `J2 = J1 + i`, `J3 = J1 + j`.
    pub fn square(&self, j1: SubsetJ, i: usize, j: usize) -> i64 {
        self.get(j1, i) * self.get(j1.with(i), j) + self.get(j1, j) * self.get(j1.with(j), i)
    }

    pub fn check_d_squared(&self) -> Result<()> {
        let l = self.rank();
        for j1 in SubsetJ::all(l) {
            let free: Vec<usize> = j1.complement(l).iter().collect();
            for (a, &i) in free.iter().enumerate() {
                for &j in &free[a + 1..] {
                    self.square_ok(j1, i, j)?;
                }
            }
        }
        Ok(())
    }

    fn square_ok(&self, j1: SubsetJ, i: usize, j: usize) -> Result<()> {
        let value = self.square(j1, i, j);
        if value == 0 {
            Ok(())
        } else {
            Err(Error::BoundarySquare {
                j1: j1.star_string(self.rank()),
                i,
                j,
                value,
            })
        }
    }
}

/// Checks the boundary identity on `samples` random squares, computing each
/// incidence on demand. Returns the number of squares checked.
pub fn check_d_squared_sampled(datum: &RootDatum, samples: usize, seed: u64) -> Result<usize> {
    let l = datum.rank();
    if l < 2 {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < samples {
        let j1 = SubsetJ(rng.gen_range(0..1u32 << l) as u16);
        let free: Vec<usize> = j1.complement(l).iter().collect();
        if free.len() < 2 {
            continue;
        }
        let a = rng.gen_range(0..free.len());
        let mut b = rng.gen_range(0..free.len() - 1);
        if b >= a {
            b += 1;
        }
        let (i, j) = (free[a], free[b]);
        let value = incidence(datum, j1, i)? * incidence(datum, j1.with(i), j)?
            + incidence(datum, j1, j)? * incidence(datum, j1.with(j), i)?;
        if value != 0 {
            return Err(Error::BoundarySquare {
                j1: j1.star_string(l),
                i,
                j,
                value,
            });
        }
        done += 1;
    }
    Ok(done)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: SubsetJ,
    /// The root added along the edge.
    pub root: usize,
    pub weight: Option<i64>,
}

impl Edge {
    pub fn to(&self) -> SubsetJ {
        self.from.with(self.root)
    }
}

/// Oriented graph on all subsets of the simple roots, edges `J => J + alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub name: String,
    pub rank: usize,
    pub edges: Vec<Edge>,
}

impl Graph {
    pub fn has_edge(&self, from: SubsetJ, root: usize) -> bool {
        self.edges.iter().any(|e| e.from == from && e.root == root)
    }

    pub fn out_of(&self, from: SubsetJ) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == from)
    }

    /// `(J1, i, j)` squares with exactly `n` of their four edges present.
    pub fn squares_with(&self, n: usize) -> Vec<(SubsetJ, usize, usize)> {
        let l = self.rank;
        let mut out = Vec::new();
        for j1 in SubsetJ::all(l) {
            let free: Vec<usize> = j1.complement(l).iter().collect();
            for (a, &i) in free.iter().enumerate() {
                for &j in &free[a + 1..] {
                    let count = [
                        self.has_edge(j1, i),
                        self.has_edge(j1.with(i), j),
                        self.has_edge(j1, j),
                        self.has_edge(j1.with(j), i),
                    ]
                    .iter()
                    .filter(|&&b| b)
                    .count();
                    if count == n {
                        out.push((j1, i, j));
                    }
                }
            }
        }
        out
    }

    /// Graphviz text. The `weight` attribute is the magnitude (Graphviz
    /// rejects negative weights); the signed value is the label.
    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph \"{}\" {{\n", self.name);
        for v in SubsetJ::all(self.rank) {
            let _ = writeln!(s, "  \"{}\";", v.star_string(self.rank));
        }
        for e in &self.edges {
            let from = e.from.star_string(self.rank);
            let to = e.to().star_string(self.rank);
            match e.weight {
                Some(m) => {
                    let _ = writeln!(
                        s,
                        "  \"{from}\" -> \"{to}\" [weight={}, label=\"{m}\"];",
                        m.abs()
                    );
                }
                None => {
                    let _ = writeln!(s, "  \"{from}\" -> \"{to}\";");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Weighted graph: an edge wherever the incidence number is nonzero.
pub fn graph_g(datum: &RootDatum) -> Result<Graph> {
    let table = IncidenceTable::build(datum)?;
    let edges = table
        .entries
        .iter()
        .filter(|(_, &m)| m != 0)
        .map(|(&(from, root), &m)| Edge {
            from,
            root,
            weight: Some(m),
        })
        .collect();
    Ok(Graph {
        name: format!("G_{}", datum.cartan_type),
        rank: datum.rank(),
        edges,
    })
}

/// Cartan matrix with one extra node bonded simply to the last node, when
/// that diagram is still of finite type.
pub fn appended_cartan(datum: &RootDatum) -> Result<Vec<Vec<i32>>> {
    let l = datum.rank();
    let mut c: Vec<Vec<i32>> = datum
        .cartan
        .iter()
        .map(|row| row.iter().copied().chain([0]).collect())
        .collect();
    let mut last = vec![0; l + 1];
    last[l] = 2;
    last[l - 1] = -1;
    c[l - 1][l] = -1;
    c.push(last);
    match classify(&c) {
        Ok(_) => Ok(c),
        Err(_) => Err(Error::Unsupported(
            "appending a node at the last simple root (result is not of finite type)",
            datum.cartan_type.to_string(),
        )),
    }
}

/// Local graph: `J => J + alpha` whenever the same edge exists after
/// appending one more root (outside J) at the end of the diagram.
pub fn graph_gl(datum: &RootDatum) -> Result<Graph> {
    let l = datum.rank();
    let ext = appended_cartan(datum)?;
    let mut edges = Vec::new();
    for from in SubsetJ::all(l) {
        for root in from.complement(l).iter() {
            if incidence_in(&ext, from, root)? != 0 {
                edges.push(Edge {
                    from,
                    root,
                    weight: None,
                });
            }
        }
    }
    Ok(Graph {
        name: format!("GL_{}", datum.cartan_type),
        rank: l,
        edges,
    })
}

/// True when no edge leaves the top cell.
pub fn is_orientable(datum: &RootDatum) -> bool {
    (0..datum.rank()).all(|k| top_incidence(datum, k) == 0)
}

/// Top incidence in type A from the binomial closed form; `k` is 0-based.
pub fn type_a_top_closed_form(l: usize, k: usize) -> i64 {
    let binom = |n: usize, r: usize| -> i64 {
        if r > n {
            return 0;
        }
        (0..r).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
    };
    let paper_k = k + 1;
    let sign = if paper_k % 2 == 1 { 1 } else { -1 };
    if l % 2 == 1 {
        (sign - 1) * binom(l.div_ceil(2), paper_k / 2)
    } else {
        2 * sign * binom(l / 2, paper_k / 2)
    }
}

/// Convenience for the standard datum of a family and rank.
pub fn datum_of(family: Family, rank: usize) -> Result<std::sync::Arc<RootDatum>> {
    Ok(standard_datum(CartanType::new(family, rank)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{longest_in_parabolic, root_datum};

    fn d(f: Family, l: usize) -> RootDatum {
        root_datum(f, l).unwrap()
    }

    #[test]
    fn top_examples() {
        let a2 = d(Family::A, 2);
        assert_eq!(top_incidence(&a2, 0), 2);
        assert_eq!(top_incidence(&a2, 1), -2);
        assert_eq!(top_incidence(&d(Family::A, 3), 1), -4);
        assert_eq!(top_incidence(&d(Family::A, 1), 0), 0);
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(SubsetJ::EMPTY, 3), 3);
        assert_eq!(nu(SubsetJ::single(0), 2), 1);
        let l = 5;
        for k in 0..l {
            assert_eq!(nu(SubsetJ::full(l).without(k), k), 0);
        }
    }

    #[test]
    fn incidence_examples() {
        let a2 = d(Family::A, 2);
        assert_eq!(incidence(&a2, SubsetJ::single(0), 1).unwrap(), 0);
        let a3 = d(Family::A, 3);
        assert_eq!(incidence(&a3, SubsetJ::single(0), 1).unwrap(), 2);
        for f in [Family::G, Family::B, Family::C] {
            let x = d(f, 2);
            for k in 0..2 {
                assert_eq!(incidence(&x, SubsetJ::EMPTY, k).unwrap(), 0);
            }
        }
        assert!(incidence(&a3, SubsetJ::single(0), 0).is_err());
    }

    #[test]
    fn closed_form_small() {
        for l in 1..=7 {
            let a = d(Family::A, l);
            for k in 0..l {
                assert_eq!(
                    top_incidence(&a, k),
                    type_a_top_closed_form(l, k),
                    "A{l} k={k}"
                );
            }
        }
    }

    #[test]
    fn d_squared_all_small_types() {
        for ct in CartanType::all_up_to(6) {
            let datum = RootDatum::new(ct);
            IncidenceTable::build(&datum)
                .unwrap()
                .check_d_squared()
                .unwrap();
        }
    }

    #[test]
    fn sampled_check_runs() {
        let datum = d(Family::D, 5);
        assert_eq!(check_d_squared_sampled(&datum, 50, 7).unwrap(), 50);
    }

    #[test]
    fn all_incidences_even() {
        for ct in CartanType::all_up_to(6) {
            let t = IncidenceTable::build(&RootDatum::new(ct)).unwrap();
            assert!(t.entries.values().all(|m| m % 2 == 0), "{ct}");
        }
    }

    #[test]
    fn a2_graph_and_dot() {
        let g = graph_g(&d(Family::A, 2)).unwrap();
        assert_eq!(g.edges.len(), 2);
        assert!(g.has_edge(SubsetJ::EMPTY, 0) && g.has_edge(SubsetJ::EMPTY, 1));
        let dot = g.to_dot();
        assert_eq!(dot.matches(";\n").count(), 6);
        assert!(dot.contains("\"(**)\" -> \"(0*)\" [weight=2, label=\"2\"]"));
        assert!(dot.contains("\"(**)\" -> \"(*0)\" [weight=2, label=\"-2\"]"));
    }

    #[test]
    fn type_a_top_edge_parity_rule() {
        for l in 1..=9 {
            let a = d(Family::A, l);
            for k in 0..l {
                let (n1, n2) = (k, l - 1 - k);
                let edge = top_incidence(&a, k) != 0;
                assert_eq!(edge, n1 % 2 == 1 || n2 % 2 == 1, "A{l} k={k}");
            }
        }
    }

    #[test]
    fn odd_length_filter() {
        for ct in CartanType::all_up_to(7) {
            let datum = RootDatum::new(ct);
            let l = datum.rank();
            for k in 0..l {
                let wj = longest_in_parabolic(&datum, SubsetJ::full(l).without(k));
                if (datum.n_pos_roots - wj.len) % 2 == 1 {
                    assert_eq!(top_incidence(&datum, k), 0, "{ct} k={k}");
                }
            }
        }
    }

    #[test]
    fn no_three_edge_squares() {
        for ct in CartanType::all_up_to(6) {
            let g = graph_g(&RootDatum::new(ct)).unwrap();
            assert!(g.squares_with(3).is_empty(), "{ct}");
        }
    }

    #[test]
    fn local_graph_a2() {
        let g = graph_gl(&d(Family::A, 2)).unwrap();
        let edges: Vec<_> = g
            .edges
            .iter()
            .map(|e| (e.from.star_string(2), e.to().star_string(2)))
            .collect();
        assert_eq!(
            edges,
            vec![
                ("(**)".into(), "(*0)".into()),
                ("(0*)".into(), "(00)".into())
            ]
        );
    }

    #[test]
    fn local_graph_rejects_non_finite_extensions() {
        for (f, l) in [
            (Family::E, 6),
            (Family::F, 4),
            (Family::G, 2),
            (Family::B, 4),
        ] {
            assert!(graph_gl(&d(f, l)).is_err());
        }
        for (f, l) in [(Family::B, 3), (Family::C, 2), (Family::D, 5)] {
            assert!(graph_gl(&d(f, l)).is_ok());
        }
    }

    #[test]
    fn local_graph_type_a_rules() {
        // Top-cell edges of the local graph: n1 odd or n2 even (the interval
        // touches the appended root).
        for l in 2..=7 {
            let g = graph_gl(&d(Family::A, l)).unwrap();
            for k in 0..l {
                let (n1, n2) = (k, l - 1 - k);
                assert_eq!(
                    g.has_edge(SubsetJ::EMPTY, k),
                    n1 % 2 == 1 || n2 % 2 == 0,
                    "A{l} k={k}"
                );
            }
        }
    }

    #[test]
    fn local_graph_halves_isomorphic() {
        for l in 2..=7 {
            let g = graph_gl(&d(Family::A, l)).unwrap();
            let last = l - 1;
            for from in SubsetJ::all(l).filter(|j| !j.contains(last)) {
                assert!(g.has_edge(from, last), "A{l}");
                for root in from.complement(l).iter().filter(|&r| r != last) {
                    assert_eq!(g.has_edge(from, root), g.has_edge(from.with(last), root));
                }
            }
        }
    }

    #[test]
    fn orientability() {
        for l in 2..=8 {
            assert!(!is_orientable(&d(Family::A, l)));
            assert!(is_orientable(&d(Family::B, l)));
            assert!(is_orientable(&d(Family::C, l)));
        }
        assert!(is_orientable(&d(Family::A, 1)));
        for l in 4..=9 {
            assert_eq!(is_orientable(&d(Family::D, l)), l % 2 == 0);
        }
    }
}
