//! Fixed-step integration of the Toda equations
//! `db_i/dt = a_i`, `da_i/dt = -(sum_j C[i][j] b_j) a_i`
//! and comparison with the tau-function solution.

use num_rational::BigRational;
use num_traits::FromPrimitive;

use crate::divisor::UniPoly;
use crate::error::{Error, Result};
use crate::lie::RootDatum;
use crate::tau::{toda_solution_at, TauSystem};

/// Runs are stopped once some `|a_i|` exceeds this.
pub const BLOWUP_THRESHOLD: f64 = 1e9;

#[derive(Debug, Clone, PartialEq)]
pub struct TodaState {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub t: f64,
}

impl TodaState {
    pub fn new(a: Vec<f64>, b: Vec<f64>, t: f64) -> Self {
        assert_eq!(a.len(), b.len(), "a and b must have the same length");
        TodaState { a, b, t }
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    fn diverged(&self) -> bool {
        self.a.iter().chain(&self.b).any(|x| !x.is_finite())
            || self.a.iter().any(|x| x.abs() > BLOWUP_THRESHOLD)
    }
}

/// `(da/dt, db/dt)`.
pub fn rhs(cartan: &[Vec<i32>], a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let l = a.len();
    let da = (0..l)
        .map(|i| {
            let cb: f64 = (0..l).map(|j| f64::from(cartan[i][j]) * b[j]).sum();
            -cb * a[i]
        })
        .collect();
    (da, a.to_vec())
}

pub fn rhs_for(datum: &RootDatum, state: &TodaState) -> (Vec<f64>, Vec<f64>) {
    rhs(&datum.cartan, &state.a, &state.b)
}

/// The same right-hand side over the rationals.
pub fn rhs_exact(
    cartan: &[Vec<i32>],
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    let l = a.len();
    let da = (0..l)
        .map(|i| {
            let cb = (0..l).fold(BigRational::from_integer(0.into()), |acc, j| {
                acc + BigRational::from_integer(cartan[i][j].into()) * &b[j]
            });
            -(cb * &a[i])
        })
        .collect();
    (da, a.to_vec())
}

fn axpy(x: &[f64], h: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(x, d)| x + h * d).collect()
}

fn rk4_step(cartan: &[Vec<i32>], s: &TodaState, h: f64) -> TodaState {
    let (ka1, kb1) = rhs(cartan, &s.a, &s.b);
    let (ka2, kb2) = rhs(
        cartan,
        &axpy(&s.a, h / 2.0, &ka1),
        &axpy(&s.b, h / 2.0, &kb1),
    );
    let (ka3, kb3) = rhs(
        cartan,
        &axpy(&s.a, h / 2.0, &ka2),
        &axpy(&s.b, h / 2.0, &kb2),
    );
    let (ka4, kb4) = rhs(cartan, &axpy(&s.a, h, &ka3), &axpy(&s.b, h, &kb3));
    let combine = |x: &[f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| -> Vec<f64> {
        (0..x.len())
            .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect()
    };
    TodaState {
        a: combine(&s.a, &ka1, &ka2, &ka3, &ka4),
        b: combine(&s.b, &kb1, &kb2, &kb3, &kb4),
        t: s.t + h,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<TodaState>,
    /// Time of the last step before the threshold was crossed.
    pub blowup: Option<f64>,
}

impl Trajectory {
    pub fn last(&self) -> &TodaState {
        self.states
            .last()
            .expect("trajectories hold at least the initial state")
    }

    /// Rows `t, a_1..a_l, b_1..b_l, blowup_flag`; the flag is 1 on the last
    /// row of a run that diverged.
    pub fn to_csv(&self) -> String {
        let l = self.states[0].rank();
        let mut out = String::from("t");
        for i in 1..=l {
            out.push_str(&format!(",a_{i}"));
        }
        for i in 1..=l {
            out.push_str(&format!(",b_{i}"));
        }
        out.push_str(",blowup_flag\n");
        let n = self.states.len();
        for (k, s) in self.states.iter().enumerate() {
            out.push_str(&format!("{:.9e}", s.t));
            for x in s.a.iter().chain(&s.b) {
                out.push_str(&format!(",{x:.12e}"));
            }
            let flag = u8::from(self.blowup.is_some() && k + 1 == n);
            out.push_str(&format!(",{flag}\n"));
        }
        out
    }

    /// Every `stride`-th state plus the last one.
    pub fn thinned(&self, stride: usize) -> Trajectory {
        let stride = stride.max(1);
        let n = self.states.len();
        let states = self
            .states
            .iter()
            .enumerate()
            .filter(|(k, _)| k % stride == 0 || k + 1 == n)
            .map(|(_, s)| s.clone())
            .collect();
        Trajectory {
            states,
            blowup: self.blowup,
        }
    }
}

/// Classical fourth-order steps of size at most `dt` landing on `t_end`,
/// in either direction. Stops at the first state past the blow-up threshold.
pub fn integrate(
    cartan: &[Vec<i32>],
    state0: &TodaState,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if dt.is_nan() || dt <= 0.0 || !t_end.is_finite() {
        return Err(Error::Invalid(format!(
            "step must be positive and finite, got dt={dt}"
        )));
    }
    if cartan.len() != state0.rank() {
        return Err(Error::Invalid(
            "state length differs from the Cartan matrix rank".into(),
        ));
    }
    let span = t_end - state0.t;
    // The slack keeps spans that are whole multiples of dt from gaining a step.
    let steps = (span.abs() / dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let mut states = Vec::with_capacity(steps + 1);
    states.push(state0.clone());
    for k in 1..=steps {
        let prev = states.last().expect("nonempty");
        let mut next = rk4_step(cartan, prev, h);
        next.t = if k == steps {
            t_end
        } else {
            state0.t + h * k as f64
        };
        if next.diverged() {
            let t = prev.t;
            return Ok(Trajectory {
                states,
                blowup: Some(t),
            });
        }
        states.push(next);
    }
    Ok(Trajectory {
        states,
        blowup: None,
    })
}

pub fn integrate_datum(
    datum: &RootDatum,
    state0: &TodaState,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    integrate(&datum.cartan, state0, t_end, dt)
}

/// Lower coefficients `c_0..c_l` of the monic characteristic polynomial of
/// the type-A Lax matrix: diagonal `b_1, b_2 - b_1, ..., -b_l`, subdiagonal
/// `a`, superdiagonal 1.
pub fn conserved_spectrum(state: &TodaState) -> Vec<f64> {
    let l = state.rank();
    let d: Vec<f64> = (0..=l)
        .map(|i| {
            let hi = if i < l { state.b[i] } else { 0.0 };
            let lo = if i > 0 { state.b[i - 1] } else { 0.0 };
            hi - lo
        })
        .collect();
    // f_k = (x - d_{k-1}) f_{k-1} - a_{k-1} f_{k-2}, lowest degree first.
    let mut prev = vec![1.0];
    let mut cur = vec![-d[0], 1.0];
    for k in 2..=l + 1 {
        let mut next = vec![0.0; k + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= d[k - 1] * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= state.a[k - 2] * c;
        }
        prev = cur;
        cur = next;
    }
    cur.pop();
    cur
}

/// Largest change of any spectral coefficient along the trajectory, per
/// unit of elapsed time.
pub fn spectral_drift(traj: &Trajectory) -> f64 {
    let first = conserved_spectrum(&traj.states[0]);
    let elapsed = (traj.last().t - traj.states[0].t)
        .abs()
        .max(f64::MIN_POSITIVE);
    traj.states
        .iter()
        .map(|s| {
            conserved_spectrum(s)
                .iter()
                .zip(&first)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
        / elapsed
}

fn to_rational(x: f64) -> Result<BigRational> {
    BigRational::from_f64(x).ok_or_else(|| Error::Invalid(format!("{x} is not finite")))
}

/// True when no tau-function vanishes for `t1` in `[lo, hi]`, the other
/// times fixed at `point`.
pub fn divisor_free(sys: &TauSystem, point: &[f64], lo: f64, hi: f64) -> Result<bool> {
    let values = point
        .iter()
        .map(|&x| to_rational(x))
        .collect::<Result<Vec<_>>>()?;
    let (lo, hi) = (to_rational(lo.min(hi))?, to_rational(lo.max(hi))?);
    for tau in &sys.taus {
        let u = UniPoly::from_poly(tau, 0, &values);
        if u.is_zero() || u.eval(&lo) == BigRational::from_integer(0.into()) {
            return Ok(false);
        }
        if u.roots_in(&lo, &hi)? > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of integrating from the tau-function state at `t1 = from` to
/// `t1 = to`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauComparison {
    pub max_relative_error: f64,
    pub numeric: TodaState,
    pub exact: TodaState,
}

fn relative_error(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1e-12)
}

/// Integrates the tau-function initial state with the system's own Cartan
/// matrix and compares the endpoint with the tau-function values there.
/// `point` lists all times; its first entry is replaced by the flow time.
pub fn compare_with_tau(
    sys: &TauSystem,
    a0: &[f64],
    point: &[f64],
    from: f64,
    to: f64,
    dt: f64,
) -> Result<TauComparison> {
    if !divisor_free(sys, point, from, to)? {
        return Err(Error::Invalid(format!(
            "a tau-function vanishes between t1={from} and t1={to}"
        )));
    }
    let at = |t: f64| {
        let mut p = point.to_vec();
        p[0] = t;
        toda_solution_at(sys, a0, &p)
    };
    let start = at(from)?;
    let end = at(to)?;
    let traj = integrate(
        &sys.cartan(),
        &TodaState::new(start.a, start.b, from),
        to,
        dt,
    )?;
    if let Some(t) = traj.blowup {
        return Err(Error::Invalid(format!("integration diverged at t={t}")));
    }
    let numeric = traj.last().clone();
    let exact = TodaState::new(end.a, end.b, to);
    let max_relative_error = numeric
        .a
        .iter()
        .chain(&numeric.b)
        .zip(exact.a.iter().chain(&exact.b))
        .map(|(&x, &y)| relative_error(x, y))
        .fold(0.0, f64::max);
    Ok(TauComparison {
        max_relative_error,
        numeric,
        exact,
    })
}

/// Integrates `a = -1/t^2`, `b = 1/t` from `t0` to `t1` and returns the
/// largest relative error against the exact solution over all steps.
pub fn rank_one_error(t0: f64, t1: f64, dt: f64) -> Result<f64> {
    let traj = integrate(
        &[vec![2]],
        &TodaState::new(vec![-1.0 / (t0 * t0)], vec![1.0 / t0], t0),
        t1,
        dt,
    )?;
    if traj.blowup.is_some() {
        return Err(Error::Invalid("the interval contains t = 0".into()));
    }
    Ok(traj
        .states
        .iter()
        .map(|s| relative_error(s.a[0], -1.0 / (s.t * s.t)).max(relative_error(s.b[0], 1.0 / s.t)))
        .fold(0.0, f64::max))
}
