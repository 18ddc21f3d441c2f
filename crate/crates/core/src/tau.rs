//! Schur polynomials, Wronskians and the tau-functions of the nilpotent Toda
//! lattice for types A, B, C and G2.
//!
//! In type A, `tau_{k+1} = ||p_l, p_{l-1}, ..., p_{l-k}||` where `||f_1..f_n||`
//! is the Wronskian in `t1`. Types C_l and B_l take the tau-functions of
//! A_{2l-1} and A_{2l} with the even times set to zero; the last one in type
//! B is the square root of `-D_l`.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lie::{CartanType, Family};
use crate::poly::{determinant, rat, Poly};

/// `p_0, ..., p_n` from `k p_k = sum_i i t_i p_{k-i}`.
pub fn schur_p_list(n: usize) -> Vec<Poly> {
    let mut p = vec![Poly::one()];
    for k in 1..=n {
        let mut acc = Poly::zero();
        for i in 1..=k {
            let term = &Poly::var(i - 1) * &p[k - i];
            acc = &acc + &term.scale(&rat(i as i64, 1));
        }
        p.push(acc.scale(&rat(1, k as i64)));
    }
    p
}

pub fn schur_p(k: usize) -> Poly {
    schur_p_list(k).pop().expect("list is nonempty")
}

/// Determinant of `(d/dt1)^r f_c`.
pub fn wronskian(fs: &[Poly]) -> Result<Poly> {
    if fs.is_empty() {
        return Err(Error::Invalid("Wronskian of an empty list".into()));
    }
    let n = fs.len();
    let mut rows = vec![fs.to_vec()];
    for r in 1..n {
        let next = rows[r - 1].iter().map(|f| f.derivative(0)).collect();
        rows.push(next);
    }
    Ok(determinant(&rows))
}

/// `||p_1, ..., p_k||`, the elementary symmetric function in power-sum times.
pub fn schur_pbar(k: usize) -> Poly {
    if k == 0 {
        return Poly::one();
    }
    let p = schur_p_list(k);
    wronskian(&p[1..=k]).expect("k >= 1")
}

/// `||f_m, f_{m-1}, ..., f_{m-n+1}||` for a family indexed from 0.
fn descending_wronskian(f: &[Poly], top: usize, n: usize) -> Poly {
    let cols: Vec<Poly> = (0..n).map(|c| f[top - c].clone()).collect();
    wronskian(&cols).expect("n >= 1")
}

#[derive(Debug, Clone)]
pub struct TauSystem {
    pub cartan_type: CartanType,
    pub taus: Vec<Poly>,
    /// For G2, the polynomial in `t1, t3, t5` that must vanish (quadratic in `t5`).
    pub constraint: Option<Poly>,
    /// 0-based indices of the time variables that can occur.
    pub times: Vec<usize>,
}

impl TauSystem {
    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn cartan(&self) -> Vec<Vec<i32>> {
        self.cartan_type.cartan_matrix()
    }
}

fn odd_times(p: &[Poly], max_var: usize) -> (Vec<Poly>, Vec<usize>) {
    let keep: Vec<usize> = (0..max_var).step_by(2).collect();
    (p.iter().map(|x| x.restrict_to(&keep)).collect(), keep)
}

/// Determinants `D_k = ||p_n, ..., p_{n+1-k}||` for `k = 1..=count`, with only
/// odd times.
fn odd_time_determinants(n: usize, count: usize) -> (Vec<Poly>, Vec<usize>) {
    let (p, keep) = odd_times(&schur_p_list(n), n);
    (
        (1..=count)
            .map(|k| descending_wronskian(&p, n, k))
            .collect(),
        keep,
    )
}

pub fn tau_system(family: Family, rank: usize) -> Result<TauSystem> {
    let cartan_type = CartanType::new(family, rank)?;
    let l = rank;
    let (taus, constraint, times) = match family {
        Family::A => {
            let p = schur_p_list(l);
            let taus = (1..=l).map(|k| descending_wronskian(&p, l, k)).collect();
            (taus, None, (0..l).collect())
        }
        Family::C => {
            let (d, keep) = odd_time_determinants(2 * l - 1, l);
            (d, None, keep)
        }
        Family::B => {
            let (mut d, keep) = odd_time_determinants(2 * l, l);
            let last = d.pop().expect("rank >= 2");
            // +-D_l is a constant multiple of a square; take the root with
            // leading coefficient 1.
            let (_, lead) = last.leading().ok_or(Error::VanishingTau { k: l })?;
            let monic = last.scale(&lead.recip());
            let root = monic.sqrt().ok_or(Error::VanishingTau { k: l })?;
            d.push(root);
            (d, None, keep)
        }
        Family::G => {
            let (d, keep) = odd_time_determinants(6, 3);
            let constraint = &d[2] + &(&d[0] * &d[0]);
            (vec![d[0].clone(), d[1].clone()], Some(constraint), keep)
        }
        _ => {
            return Err(Error::Unsupported("tau-functions", cartan_type.to_string()));
        }
    };
    Ok(TauSystem {
        cartan_type,
        taus,
        constraint,
        times,
    })
}

/// `tau_j tau_j'' - (tau_j')^2` over `prod_{k != j} tau_k^{-C[j][k]}`, which
/// must be a constant `c_j` for every j. These constants are the `a_j^0`.
pub fn bilinear_constants(sys: &TauSystem) -> Result<Vec<BigRational>> {
    if sys.constraint.is_some() {
        return Err(Error::Unsupported(
            "symbolic bilinear check with an implicit time",
            sys.cartan_type.to_string(),
        ));
    }
    let c = sys.cartan();
    let l = sys.rank();
    let mut out = Vec::with_capacity(l);
    for j in 0..l {
        let t = &sys.taus[j];
        let d1 = t.derivative(0);
        let lhs = &(t * &t.derivative(0).derivative(0)) - &(&d1 * &d1);
        let rhs = (0..l)
            .filter(|&k| k != j && c[j][k] != 0)
            .fold(Poly::one(), |acc, k| {
                &acc * &sys.taus[k].pow((-c[j][k]) as u32)
            });
        let (m, rc) = rhs.leading().expect("tau products are nonzero");
        let cj = lhs.coeff(m) / rc;
        if lhs != rhs.scale(&cj) || cj.is_zero() {
            return Err(Error::NotProportional { j: j + 1 });
        }
        out.push(cj);
    }
    Ok(out)
}

pub fn check_bilinear(l: usize) -> Result<Vec<BigRational>> {
    bilinear_constants(&tau_system(Family::A, l)?)
}

/// Verifies `d a_j/dt1 = -(sum_k C[j][k] b_k) a_j` as a polynomial identity
/// after clearing denominators, with `a_j = c_j prod tau_k^{-C[j][k]}` and
/// `b_j = tau_j'/tau_j`.
pub fn check_flow_equations(sys: &TauSystem, a0: &[BigRational]) -> Result<()> {
    let c = sys.cartan();
    let l = sys.rank();
    let tau = &sys.taus;
    let dtau: Vec<Poly> = tau.iter().map(|t| t.derivative(0)).collect();
    let all = tau.iter().fold(Poly::one(), |acc, t| &acc * t);
    for j in 0..l {
        let num = (0..l)
            .filter(|&k| k != j && c[j][k] != 0)
            .fold(Poly::constant(a0[j].clone()), |acc, k| {
                &acc * &tau[k].pow((-c[j][k]) as u32)
            });
        let den = &tau[j] * &tau[j];
        let lhs = &(&(&num.derivative(0) * &den) - &(&num * &den.derivative(0))) * &all;
        let mut weighted = Poly::zero();
        for k in 0..l {
            if c[j][k] == 0 {
                continue;
            }
            let others = (0..l)
                .filter(|&m| m != k)
                .fold(Poly::one(), |acc, m| &acc * &tau[m]);
            weighted = &weighted + &(&dtau[k] * &others).scale(&rat(c[j][k] as i64, 1));
        }
        let rhs = -&(&(&weighted * &num) * &den);
        if lhs != rhs {
            return Err(Error::NotProportional { j: j + 1 });
        }
    }
    Ok(())
}

/// Lowest power of `t1` in `tau_k(t1, 0, ..., 0)` for type A, k = 1..l.
pub fn multiplicity_profile(l: usize) -> Result<Vec<u32>> {
    let sys = tau_system(Family::A, l)?;
    sys.taus
        .iter()
        .enumerate()
        .map(|(k, t)| {
            t.restrict_to(&[0])
                .min_exponent(0)
                .ok_or(Error::VanishingTau { k: k + 1 })
        })
        .collect()
}

/// Substitutes `t_k = s^k / k`, using `t1` as `s`.
pub fn curve_substitution(p: &Poly) -> Poly {
    let mut out = p.clone();
    for i in 1..p.num_vars() {
        let k = i as i64 + 1;
        let value = Poly::var(0).pow(k as u32).scale(&rat(1, k));
        out = out.substitute(i, &value);
    }
    out
}

/// True if `t_k = s^k/k` kills `tau_2..tau_l` and sends `tau_1` to `+-s^l`.
pub fn divisor_curve_check(l: usize) -> Result<bool> {
    let sys = tau_system(Family::A, l)?;
    let first = curve_substitution(&sys.taus[0]);
    let s_l = Poly::var(0).pow(l as u32);
    let first_ok = first == s_l || first == -&s_l;
    Ok(first_ok
        && sys.taus[1..]
            .iter()
            .all(|t| curve_substitution(t).is_zero()))
}

/// `a_j`, `b_j` of the flow at a point of time space.
#[derive(Debug, Clone, PartialEq)]
pub struct TodaPoint {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// `a_j = a0_j prod tau_k^{-C[j][k]}`, `b_j = (d tau_j/dt1)/tau_j`, evaluated
/// in floating point. `point` holds `t1, t2, ...`.
pub fn toda_solution_at(sys: &TauSystem, a0: &[f64], point: &[f64]) -> Result<TodaPoint> {
    let c = sys.cartan();
    let l = sys.rank();
    let vals: Vec<f64> = sys.taus.iter().map(|t| t.eval_f64(point)).collect();
    if let Some(k) = vals.iter().position(|&v| v == 0.0 || !v.is_finite()) {
        return Err(Error::BlowUp { k: k + 1 });
    }
    let a = (0..l)
        .map(|j| (0..l).fold(a0[j], |acc, k| acc * vals[k].powi(-c[j][k])))
        .collect();
    let b = (0..l)
        .map(|j| sys.taus[j].derivative(0).eval_f64(point) / vals[j])
        .collect();
    Ok(TodaPoint { a, b })
}

/// Exact counterpart of [`toda_solution_at`].
pub fn toda_solution_exact(
    sys: &TauSystem,
    a0: &[BigRational],
    point: &[BigRational],
) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let c = sys.cartan();
    let l = sys.rank();
    let vals: Vec<BigRational> = sys.taus.iter().map(|t| t.eval(point)).collect();
    if let Some(k) = vals.iter().position(Zero::is_zero) {
        return Err(Error::BlowUp { k: k + 1 });
    }
    let a = (0..l)
        .map(|j| {
            (0..l).fold(a0[j].clone(), |acc, k| {
                let e = c[j][k];
                if e <= 0 {
                    acc * num_traits::pow(vals[k].clone(), (-e) as usize)
                } else {
                    acc / num_traits::pow(vals[k].clone(), e as usize)
                }
            })
        })
        .collect();
    let b = (0..l)
        .map(|j| sys.taus[j].derivative(0).eval(point) / &vals[j])
        .collect();
    Ok((a, b))
}

pub fn to_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Real roots `t5` of the G2 constraint at fixed `t1`, `t3`, smallest first.
pub fn g2_t5_branches(sys: &TauSystem, t1: f64, t3: f64) -> Result<Vec<f64>> {
    let constraint = sys.constraint.as_ref().ok_or(Error::Unsupported(
        "the t5 constraint",
        sys.cartan_type.to_string(),
    ))?;
    let mut coef = [0.0f64; 3];
    for (m, c) in constraint.terms() {
        let e5 = m.exp(4) as usize;
        if e5 > 2 {
            return Err(Error::Invalid("constraint is not quadratic in t5".into()));
        }
        let v =
            c.to_f64().unwrap_or(f64::NAN) * t1.powi(m.exp(0) as i32) * t3.powi(m.exp(2) as i32);
        coef[e5] += v;
    }
    let [c0, c1, c2] = coef;
    if c2.abs() < f64::EPSILON {
        return Ok(if c1 != 0.0 { vec![-c0 / c1] } else { vec![] });
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return Ok(vec![]);
    }
    let s = disc.sqrt();
    let q = -0.5 * (c1 + c1.signum() * s);
    let mut roots = if q == 0.0 {
        vec![0.0, 0.0]
    } else {
        vec![q / c2, c0 / q]
    };
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Constant ratio `f/g` when one exists.
pub fn proportional(f: &Poly, g: &Poly) -> Option<BigRational> {
    let (m, gc) = g.leading()?;
    let r = f.coeff(m) / gc;
    (f == &g.scale(&r)).then_some(r)
}

/// Overall sign convention check: positive leading coefficient.
pub fn leading_positive(p: &Poly) -> bool {
    p.leading().is_some_and(|(_, c)| c.is_positive())
}

/// `true` when `f` equals `+-g`.
pub fn equal_up_to_sign(f: &Poly, g: &Poly) -> bool {
    f == g || *f == -g
}

/// `k!` as a rational.
pub fn factorial(k: usize) -> BigRational {
    (1..=k).fold(BigRational::one(), |acc, i| acc * rat(i as i64, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    /// `p_k` straight from the defining sum over `k1 + 2 k2 + ... = k` of
    /// `prod t_i^{k_i} / k_i!`.
    fn schur_by_partitions(k: usize) -> Poly {
        fn rec(k: usize, part: usize, exps: &mut Vec<u32>, out: &mut Poly) {
            if part == 0 {
                if k == 0 {
                    let mut c = BigRational::one();
                    for &e in exps.iter() {
                        c /= factorial(e as usize);
                    }
                    let mono = crate::poly::Monomial::new(exps.clone());
                    *out = &*out + &Poly::monomial(mono, c);
                }
                return;
            }
            let mut e = 0;
            while e * part <= k {
                exps[part - 1] = e as u32;
                rec(k - e * part, part - 1, exps, out);
                e += 1;
            }
            exps[part - 1] = 0;
        }
        let mut out = Poly::zero();
        let mut exps = vec![0; k.max(1)];
        rec(k, k, &mut exps, &mut out);
        out
    }

    /// Elementary symmetric functions in power-sum times from
    /// `k e_k = sum (-1)^{i-1} i t_i e_{k-i}`.
    fn elementary(n: usize) -> Vec<Poly> {
        let mut e = vec![Poly::one()];
        for k in 1..=n {
            let mut acc = Poly::zero();
            for i in 1..=k {
                let s = if i % 2 == 1 { i as i64 } else { -(i as i64) };
                acc = &acc + &(&Poly::var(i - 1) * &e[k - i]).scale(&rat(s, 1));
            }
            e.push(acc.scale(&rat(1, k as i64)));
        }
        e
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur_p(0), Poly::one());
        assert_eq!(schur_p(1), p("t1"));
        assert_eq!(schur_p(2), p("t2 + t1^2/2"));
        assert_eq!(schur_p(3), p("t3 + t1*t2 + t1^3/6"));
        for k in 0..=8 {
            assert_eq!(schur_p(k), schur_by_partitions(k), "p_{k}");
        }
    }

    #[test]
    fn schur_derivative_identity() {
        let ps = schur_p_list(12);
        for k in 1..=12 {
            assert_eq!(ps[k].derivative(0), ps[k - 1]);
        }
    }

    #[test]
    fn pbar_is_elementary() {
        let e = elementary(6);
        assert_eq!(schur_pbar(1), p("t1"));
        // The Wronskian gives e_2 = t1^2/2 - t2, the negative of t2 - t1^2/2.
        assert_eq!(schur_pbar(2), -&p("t2 - t1^2/2"));
        for k in 0..=6 {
            assert_eq!(schur_pbar(k), e[k], "pbar_{k}");
        }
        for k in 1..=6 {
            assert_eq!(schur_pbar(k).derivative(0), schur_pbar(k - 1));
        }
        for k in 2..=6 {
            assert!(curve_substitution(&schur_pbar(k)).is_zero());
        }
    }

    #[test]
    fn wronskian_examples() {
        let f = p("t1^2 + t3");
        assert_eq!(wronskian(std::slice::from_ref(&f)).unwrap(), f);
        let ps = schur_p_list(5);
        for l in 2..=5 {
            let w = wronskian(&[ps[l].clone(), ps[l - 1].clone()]).unwrap();
            assert_eq!(w, &(&ps[l] * &ps[l - 2]) - &(&ps[l - 1] * &ps[l - 1]));
        }
        let w = wronskian(&[ps[3].clone(), ps[2].clone()]).unwrap();
        assert_eq!(w, &(&ps[1] * &ps[3]) - &(&ps[2] * &ps[2]));
        assert!(wronskian(&[]).is_err());
    }

    #[test]
    fn rank_two_systems() {
        let a = tau_system(Family::A, 2).unwrap();
        assert_eq!(a.taus, vec![p("t2 + t1^2/2"), p("t2 - t1^2/2")]);
        let c = tau_system(Family::C, 2).unwrap();
        assert_eq!(c.taus, vec![p("t1^3/6 + t3"), p("t1*(-t1^3/12 + t3)")]);
        let b = tau_system(Family::B, 2).unwrap();
        assert_eq!(b.taus, vec![p("t1*(t1^3/24 + t3)"), p("t3 - t1^3/12")]);
        assert!(tau_system(Family::D, 4).is_err());
    }

    #[test]
    fn type_a_homogeneity() {
        for l in 1..=5 {
            let sys = tau_system(Family::A, l).unwrap();
            for (k, t) in sys.taus.iter().enumerate() {
                assert_eq!(t.weighted_degrees(), vec![((k + 1) * (l - k)) as u32]);
            }
        }
    }

    #[test]
    fn odd_times_only() {
        for l in 2..=4 {
            for f in [Family::B, Family::C] {
                let sys = tau_system(f, l).unwrap();
                for t in &sys.taus {
                    assert!(t.terms().all(|(m, _)| m
                        .exponents()
                        .iter()
                        .skip(1)
                        .step_by(2)
                        .all(|&e| e == 0)));
                }
            }
        }
    }

    #[test]
    fn b_and_c_constraints() {
        // C_l: D_{2l-k} = D_k; B_l: D_{2l+1-k} = D_k, both with even times zero.
        for l in 2..=3 {
            let (d, _) = odd_time_determinants(2 * l - 1, 2 * l - 1);
            for k in 1..l {
                assert!(equal_up_to_sign(&d[2 * l - k - 1], &d[k - 1]), "C{l} k={k}");
            }
            let (d, _) = odd_time_determinants(2 * l, 2 * l);
            for k in 1..=l {
                assert!(equal_up_to_sign(&d[2 * l - k], &d[k - 1]), "B{l} k={k}");
            }
        }
    }

    #[test]
    fn bilinear_constants_type_a() {
        assert_eq!(check_bilinear(1).unwrap(), vec![rat(-1, 1)]);
        assert_eq!(check_bilinear(2).unwrap(), vec![rat(1, 1), rat(-1, 1)]);
        for l in 3..=4 {
            let c = check_bilinear(l).unwrap();
            assert_eq!(c.len(), l);
        }
        // LHS degree for l = 3 is 2 deg tau_j - 2.
        let sys = tau_system(Family::A, 3).unwrap();
        for t in &sys.taus {
            let d1 = t.derivative(0);
            let lhs = &(t * &d1.derivative(0)) - &(&d1 * &d1);
            assert_eq!(
                lhs.weighted_degrees(),
                vec![2 * t.weighted_degrees()[0] - 2]
            );
        }
    }

    #[test]
    fn flow_equations_hold() {
        for (f, l) in [
            (Family::A, 1),
            (Family::A, 2),
            (Family::A, 3),
            (Family::C, 2),
            (Family::C, 3),
            (Family::B, 2),
            (Family::B, 3),
        ] {
            let sys = tau_system(f, l).unwrap();
            let a0 = bilinear_constants(&sys).unwrap();
            check_flow_equations(&sys, &a0).unwrap();
        }
    }

    #[test]
    fn g2_constraint_quadratic_in_t5() {
        let sys = tau_system(Family::G, 2).unwrap();
        let c = sys.constraint.as_ref().unwrap();
        assert_eq!(c.terms().map(|(m, _)| m.exp(4)).max(), Some(2));
        assert!(bilinear_constants(&sys).is_err());
        // At t1 = 0, t3 = 1 the branches are real and satisfy the constraint.
        let roots = g2_t5_branches(&sys, 1.0, 0.5).unwrap();
        for r in roots {
            let v = c.eval_f64(&[1.0, 0.0, 0.5, 0.0, r]);
            assert!(v.abs() < 1e-8, "{v}");
        }
    }

    #[test]
    fn multiplicities_and_axis_values() {
        assert_eq!(multiplicity_profile(1).unwrap(), vec![1]);
        assert_eq!(multiplicity_profile(2).unwrap(), vec![2, 2]);
        assert_eq!(multiplicity_profile(3).unwrap(), vec![3, 4, 3]);
        for l in 1..=5 {
            let sys = tau_system(Family::A, l).unwrap();
            for k in 1..=l {
                let axis = sys.taus[k - 1].restrict_to(&[0]);
                let mut coef = (1..=k).fold(BigRational::one(), |acc, j| {
                    acc * factorial(k - j) / factorial(l - j + 1)
                });
                if (k * (k - 1) / 2) % 2 == 1 {
                    coef = -coef;
                }
                let expect = Poly::var(0).pow((k * (l - k + 1)) as u32).scale(&coef);
                assert_eq!(axis, expect, "A{l} k={k}");
            }
        }
    }

    #[test]
    fn divisor_curve() {
        for l in 1..=4 {
            assert!(divisor_curve_check(l).unwrap(), "l={l}");
        }
        let sys = tau_system(Family::A, 2).unwrap();
        assert_eq!(curve_substitution(&sys.taus[0]), p("t1^2"));
    }

    #[test]
    fn solution_values() {
        let sys = tau_system(Family::A, 1).unwrap();
        let a0 = to_f64(&check_bilinear(1).unwrap());
        let t = 0.7;
        let s = toda_solution_at(&sys, &a0, &[t]).unwrap();
        assert!((s.a[0] + 1.0 / (t * t)).abs() < 1e-12);
        assert!((s.b[0] - 1.0 / t).abs() < 1e-12);
        let sys2 = tau_system(Family::A, 2).unwrap();
        let c2 = check_bilinear(2).unwrap();
        let (a, _) = toda_solution_exact(&sys2, &c2, &[rat(1, 1), rat(0, 1)]).unwrap();
        assert_eq!(a[0], a[1]);
        assert!(a[0].is_negative());
        let err = toda_solution_at(&sys, &a0, &[0.0]).unwrap_err();
        assert_eq!(err, Error::BlowUp { k: 1 });
    }

    #[test]
    fn dual_tau_functions() {
        for l in 1..=5 {
            let sys = tau_system(Family::A, l).unwrap();
            let pbar: Vec<Poly> = (0..=l).map(schur_pbar).collect();
            for k in 0..l {
                let dual = descending_wronskian(&pbar, l, l - k);
                assert!(equal_up_to_sign(&sys.taus[k], &dual), "l={l} k={k}");
            }
        }
    }
}
