//! Univariate exact polynomials, Sturm root counting and the component count
//! of the divisor where every tau-function except `tau_2` vanishes.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lie::{standard_datum, CartanType, Family, SubsetJ};
use crate::poly::{determinant, rat, Poly};
use crate::sign::w_minus_indices;

/// Dense polynomial in one variable, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64, 1))
                .collect(),
        )
    }

    fn monic(&self) -> UniPoly {
        match self.leading() {
            Some(l) => {
                let inv = l.recip();
                UniPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading().expect("nonzero").clone();
        let mut r = self.coeffs.clone();
        let n = r.len();
        if n <= dd {
            return (UniPoly::new(vec![]), self.clone());
        }
        let mut q = vec![BigRational::zero(); n - dd];
        for i in (dd..n).rev() {
            let c = &r[i] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] -= &c * dc;
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn squarefree(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Number of real roots of multiplicity one or more, counted once each.
    pub fn sturm_real_roots(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let chain = sturm_chain(&self.squarefree());
        let at_neg = sign_changes(chain.iter().map(|p| signum_at_infinity(p, true)));
        let at_pos = sign_changes(chain.iter().map(|p| signum_at_infinity(p, false)));
        Ok(at_neg - at_pos)
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    pub fn roots_in(&self, lo: &BigRational, hi: &BigRational) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let chain = sturm_chain(&self.squarefree());
        let count = |x: &BigRational| sign_changes(chain.iter().map(|p| signum(&p.eval(x))));
        Ok(count(lo).saturating_sub(count(hi)))
    }

    /// Specialises all variables except `var` to `values` (indexed like the
    /// variables of `p`; the entry at `var` is ignored).
    pub fn from_poly(p: &Poly, var: usize, values: &[BigRational]) -> UniPoly {
        let mut coeffs: Vec<BigRational> = Vec::new();
        for (m, c) in p.terms() {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if i != var && e > 0 {
                    v *= num_traits::pow(values[i].clone(), e as usize);
                }
            }
            let d = m.exp(var) as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, BigRational::zero());
            }
            coeffs[d] += v;
        }
        UniPoly::new(coeffs)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = self
            .coeffs
            .iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (i, c)| {
                &acc + &Poly::var(0).pow(i as u32).scale(c)
            });
        write!(f, "{}", poly.to_string().replace("t1", "x"))
    }
}

fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain.last().expect("nonempty").is_zero() {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]);
        chain.push(UniPoly::new(r.coeffs.iter().map(|c| -c).collect()));
    }
    chain.pop();
    chain
}

fn signum(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn signum_at_infinity(p: &UniPoly, negative: bool) -> i8 {
    let s = signum(p.leading().expect("chain members are nonzero"));
    if negative && p.degree().unwrap_or(0) % 2 == 1 {
        -s
    } else {
        s
    }
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut prev = 0i8;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            n += 1;
        }
        prev = s;
    }
    n
}

/// The `l x l` anti-triangular determinant with entry `pbar_{l-r-c}` where
/// `pbar_0 = 1`, `pbar_1 = u`, `pbar_2 = v` and all others vanish.
pub fn anti_triangular_determinant(l: usize) -> Poly {
    let entry = |k: isize| match k {
        0 => Poly::one(),
        1 => Poly::var(0),
        2 => Poly::var(1),
        _ => Poly::zero(),
    };
    let rows: Vec<Vec<Poly>> = (0..l)
        .map(|r| {
            (0..l)
                .map(|c| entry(l as isize - r as isize - c as isize))
                .collect()
        })
        .collect();
    determinant(&rows)
}

/// The determinant with `v = x u^2` and the power `u^l` divided out, as a
/// polynomial in `x`. For odd l the factor `u` of the determinant is the
/// branch `pbar_1 = 0`, which is not represented here.
pub fn nemethi_poly(l: usize) -> Result<UniPoly> {
    if l < 2 {
        return Err(Error::Invalid(format!(
            "the divisor polynomial needs l >= 2, got {l}"
        )));
    }
    let det = anti_triangular_determinant(l);
    // Weight of u is 1 and of v is 2, so every monomial is u^{l-2b} v^b.
    let mut coeffs = vec![BigRational::zero(); l / 2 + 1];
    for (m, c) in det.terms() {
        let (a, b) = (m.exp(0) as usize, m.exp(1) as usize);
        debug_assert_eq!(a + 2 * b, l);
        coeffs[b] += c;
    }
    Ok(UniPoly::new(coeffs))
}

/// True when the determinant vanishes identically along `u = 0`, so that the
/// branch `pbar_1 = 0` belongs to the divisor.
pub fn has_u_branch(l: usize) -> bool {
    anti_triangular_determinant(l)
        .terms()
        .all(|(m, _)| m.exp(0) > 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentRow {
    pub l: usize,
    pub degree: usize,
    pub real_roots: usize,
    pub components: usize,
}

impl ComponentRow {
    pub const CSV_HEADER: &'static str = "l,degree,real_roots,components";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{}",
            self.l, self.degree, self.real_roots, self.components
        )
    }
}

/// Component count from the polynomial, checked against the number of Weyl
/// group elements sending the all-minus signs outside `{alpha_2}` to minus.
pub fn component_row(l: usize) -> Result<ComponentRow> {
    let p = nemethi_poly(l)?;
    let real_roots = p.sturm_real_roots()?;
    let components = 2 * (real_roots + usize::from(has_u_branch(l)));
    let datum = standard_datum(CartanType::new(Family::A, l)?);
    let weyl = w_minus_indices(&datum, SubsetJ::single(1)).len();
    if components != weyl {
        return Err(Error::ComponentMismatch {
            polynomial: components,
            weyl,
        });
    }
    Ok(ComponentRow {
        l,
        degree: p.degree().unwrap_or(0),
        real_roots,
        components,
    })
}

pub fn component_count(l: usize) -> Result<usize> {
    component_row(l).map(|r| r.components)
}

/// True when every root of `p`, counted once, is real.
pub fn all_roots_real(p: &UniPoly) -> Result<bool> {
    let sq = p.squarefree();
    Ok(sq.sturm_real_roots()? == sq.degree().unwrap_or(0))
}

pub fn unit() -> UniPoly {
    UniPoly::new(vec![BigRational::one()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sturm_examples() {
        assert_eq!(
            UniPoly::from_i64(&[-2, 0, 1]).sturm_real_roots().unwrap(),
            2
        );
        assert_eq!(UniPoly::from_i64(&[1, 0, 1]).sturm_real_roots().unwrap(), 0);
        // (x - 1)^2 (x + 2) has two distinct real roots.
        assert_eq!(
            UniPoly::from_i64(&[2, -3, 0, 1])
                .sturm_real_roots()
                .unwrap(),
            2
        );
        assert_eq!(UniPoly::from_i64(&[5]).sturm_real_roots().unwrap(), 0);
        assert_eq!(
            UniPoly::new(vec![]).sturm_real_roots(),
            Err(Error::ZeroPolynomial)
        );
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(p.roots_in(&rat(0, 1), &rat(2, 1)).unwrap(), 1);
        assert_eq!(p.roots_in(&rat(-2, 1), &rat(2, 1)).unwrap(), 2);
        assert_eq!(p.roots_in(&rat(2, 1), &rat(3, 1)).unwrap(), 0);
    }

    #[test]
    fn division_and_gcd() {
        let a = UniPoly::from_i64(&[-1, 0, 1]);
        let b = UniPoly::from_i64(&[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, UniPoly::from_i64(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(
            a.gcd(&UniPoly::from_i64(&[1, 2, 1])),
            UniPoly::from_i64(&[1, 1])
        );
        assert_eq!(UniPoly::from_i64(&[1, 2, 1]).squarefree().degree(), Some(1));
        assert_eq!(UniPoly::from_i64(&[1, 2, 3]).to_string(), "3*x^2 + 2*x + 1");
    }

    #[test]
    fn small_determinants_by_hand() {
        // | v u ; u 1 | = v - u^2.
        assert_eq!(anti_triangular_determinant(2), "t2 - t1^2".parse().unwrap());
        assert_eq!(nemethi_poly(2).unwrap(), UniPoly::from_i64(&[-1, 1]));
        // | 0 v u ; v u 1 ; u 1 0 | = 2uv - u^3.
        assert_eq!(
            anti_triangular_determinant(3),
            "2*t1*t2 - t1^3".parse().unwrap()
        );
        assert_eq!(nemethi_poly(3).unwrap(), UniPoly::from_i64(&[-1, 2]));
        assert!(nemethi_poly(1).is_err());
    }

    #[test]
    fn degrees_and_real_roots() {
        for l in 2..=10 {
            let p = nemethi_poly(l).unwrap();
            assert_eq!(p.degree(), Some(l / 2), "l={l}");
            assert!(all_roots_real(&p).unwrap(), "l={l}");
            assert_eq!(has_u_branch(l), l % 2 == 1, "l={l}");
        }
        assert_eq!(nemethi_poly(4).unwrap().sturm_real_roots().unwrap(), 2);
    }

    #[test]
    fn component_counts() {
        assert_eq!(component_count(2).unwrap(), 2);
        assert_eq!(component_count(3).unwrap(), 4);
        assert_eq!(component_count(4).unwrap(), 4);
        for l in 2..=10 {
            assert_eq!(component_count(l).unwrap(), 2 * ((l + 1) / 2));
        }
        assert_eq!(component_row(4).unwrap().csv(), "4,2,2,4");
    }

    #[test]
    fn specialise_multivariate() {
        let p: Poly = "t1^2*t2 + t3 - 1".parse().unwrap();
        let u = UniPoly::from_poly(&p, 0, &[rat(0, 1), rat(2, 1), rat(3, 1)]);
        assert_eq!(u, UniPoly::from_i64(&[2, 0, 2]));
    }

    fn companion_real_roots(p: &UniPoly) -> usize {
        use num_traits::ToPrimitive;
        let c: Vec<f64> = p.coeffs().iter().map(|x| x.to_f64().unwrap()).collect();
        let n = c.len() - 1;
        let lead = c[n];
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -c[i] / lead
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        m.complex_eigenvalues()
            .iter()
            .filter(|z| z.im.abs() < 1e-6)
            .count()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn sturm_matches_companion_eigenvalues(
            real in proptest::collection::btree_set(-12i64..12, 1..=4),
            pairs in proptest::collection::vec((-4i64..4, 1i64..4), 0..=2),
            scale in 1i64..5,
        ) {
            let real: Vec<i64> = real.into_iter().collect();
            // Real roots r/3 and complex pairs (x - a)^2 + b^2.
            let mut p = UniPoly::new(vec![rat(scale, 1)]);
            for &r in &real {
                p = mul(&p, &UniPoly::new(vec![rat(-r, 3), rat(1, 1)]));
            }
            for &(a, b) in &pairs {
                p = mul(&p, &UniPoly::new(vec![rat(a * a + b * b, 1), rat(-2 * a, 1), rat(1, 1)]));
            }
            prop_assert_eq!(p.sturm_real_roots().unwrap(), real.len());
            prop_assert_eq!(companion_real_roots(&p), real.len());
        }
    }

    fn mul(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut c = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        UniPoly::new(c)
    }
}
