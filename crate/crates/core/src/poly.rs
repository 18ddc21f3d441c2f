//! Sparse multivariate polynomials in `t1, t2, ...` with exact rational
//! coefficients. Variable `t_k` has weight `k`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exponent vector; entry `i` is the power of `t_{i+1}`. Trailing zeros are
/// trimmed so equal monomials compare equal regardless of length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn weighted_degree(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| (i as u32 + 1) * e)
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    fn divide(&self, other: &Monomial) -> Option<Monomial> {
        let n = self.0.len().max(other.0.len());
        let mut e = Vec::with_capacity(n);
        for i in 0..n {
            e.push(self.exp(i).checked_sub(other.exp(i))?);
        }
        Some(Monomial::new(e))
    }

    /// Canonical order: weighted degree, then exponents compared from the
    /// highest-index variable down.
    pub fn graded_cmp(&self, other: &Monomial) -> Ordering {
        self.weighted_degree()
            .cmp(&other.weighted_degree())
            .then_with(|| {
                let n = self.0.len().max(other.0.len());
                (0..n)
                    .rev()
                    .map(|i| self.exp(i).cmp(&other.exp(i)))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// `t_{i+1}`.
    pub fn var(i: usize) -> Self {
        Poly::monomial(Monomial::var(i), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative in `t_{i+1}`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), c * BigRational::from_integer(e.into()));
        }
        out
    }

    /// Replaces `t_{i+1}` by `value`.
    pub fn substitute(&self, i: usize, value: &Poly) -> Poly {
        let mut powers: HashMap<u32, Poly> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            let mut exps = m.0.clone();
            if e > 0 {
                exps[i] = 0;
            }
            let rest = Poly::monomial(Monomial::new(exps), c.clone());
            let p = powers.entry(e).or_insert_with(|| value.pow(e));
            out = &out + &(&rest * p);
        }
        out
    }

    /// Sets every variable outside `keep` to zero.
    pub fn restrict_to(&self, keep: &[usize]) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| {
                    m.0.iter()
                        .enumerate()
                        .all(|(i, &e)| e == 0 || keep.contains(&i))
                })
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let x = point.get(i).cloned().unwrap_or_else(BigRational::zero);
                    v *= num_traits::pow(x, e as usize);
                }
            }
            total += v;
        }
        total
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64().unwrap_or(f64::NAN);
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        v *= point.get(i).copied().unwrap_or(0.0).powi(e as i32);
                    }
                }
                v
            })
            .sum()
    }

    /// Highest index of a variable that occurs, plus one.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    pub fn weighted_degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(Monomial::weighted_degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_weighted_homogeneous(&self) -> bool {
        self.weighted_degrees().len() <= 1
    }

    /// Lowest power of `t_{i+1}` among the terms.
    pub fn min_exponent(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(i)).min()
    }

    /// Leading term in [`Monomial::graded_cmp`] order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().max_by(|a, b| a.0.graded_cmp(b.0))
    }

    /// Exact square root, if one exists, with positive leading coefficient.
    pub fn sqrt(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lm, lc) = self.leading()?;
        if lm.0.iter().any(|e| e % 2 == 1) || lc.is_negative() {
            return None;
        }
        let root_m = Monomial::new(lm.0.iter().map(|e| e / 2).collect());
        let root_c = rational_sqrt(lc)?;
        let twice_lead = Poly::monomial(root_m.clone(), root_c.clone() * rat(2, 1));
        let mut r = Poly::monomial(root_m, root_c);
        let mut rem = self - &(&r * &r);
        let mut guard = 4 * self.len() + 16;
        while !rem.is_zero() {
            guard = guard.checked_sub(1)?;
            let (m, c) = rem.leading()?;
            let (tm, tc) = twice_lead.leading()?;
            let q = Poly::monomial(m.divide(tm)?, c / tc);
            if q.leading()?.0.graded_cmp(twice_lead.leading()?.0) != Ordering::Less {
                return None;
            }
            r = &r + &q;
            rem = self - &(&r * &r);
        }
        Some(r)
    }

    fn display_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| b.0.graded_cmp(a.0));
        t
    }
}

fn rational_sqrt(c: &BigRational) -> Option<BigRational> {
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Determinant by cofactor expansion along rows, memoized over the set of
/// remaining columns.
pub fn determinant(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut memo: HashMap<u32, Poly> = HashMap::new();
    det_rec(m, 0, (1u32 << n) - 1, &mut memo)
}

fn det_rec(m: &[Vec<Poly>], row: usize, cols: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
    if cols == 0 {
        return Poly::one();
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut total = Poly::zero();
    let mut position = 0;
    for c in 0..m.len() {
        if cols >> c & 1 == 0 {
            continue;
        }
        if !m[row][c].is_zero() {
            let minor = det_rec(m, row + 1, cols & !(1 << c), memo);
            let term = &m[row][c] * &minor;
            total = if position % 2 == 0 {
                &total + &term
            } else {
                &total - &term
            };
        }
        position += 1;
    }
    memo.insert(cols, total.clone());
    total
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, other: Poly) -> Poly {
                (&self).$f(&other)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for Poly {
    /// `t3 - 1/12*t1^3`: terms in descending canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.display_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("t{}", i + 1)
                        } else {
                            format!("t{}^{e}", i + 1)
                        }
                    })
                    .collect();
            let coef = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("{}/{}", a.numer(), a.denom())
            };
            if vars.is_empty() {
                f.write_str(&coef)?;
            } else if a.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{coef}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl FromStr for Poly {
    type Err = Error;

    /// Parses `+ - * / ^`, parentheses, integers and variables `t1, t2, ...`.
    /// Division is by constants only.
    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { s: &tokens, pos: 0 };
        let v = p.sum()?;
        if p.pos != tokens.len() {
            return Err(p.error());
        }
        Ok(v)
    }
}

struct Parser<'a> {
    s: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn error(&self) -> Error {
        Error::Invalid(format!("cannot parse polynomial at position {}", self.pos))
    }

    fn sum(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -&self.product()?
            }
            Some('+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.power()?;
            acc = if op == '*' {
                &acc * &rhs
            } else {
                let c = rhs
                    .as_constant()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| self.error())?;
                acc.scale(&c.recip())
            };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            return Ok(base.pow(e.to_u32().ok_or_else(|| self.error())?));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.s[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.error())
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.error());
                }
                self.pos += 1;
                Ok(v)
            }
            Some('t') => {
                self.pos += 1;
                let k = self
                    .integer()?
                    .to_usize()
                    .filter(|&k| k > 0)
                    .ok_or_else(|| self.error())?;
                Ok(Poly::var(k - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                Ok(Poly::constant(BigRational::from_integer(self.integer()?)))
            }
            _ => Err(self.error()),
        }
    }
}
