//! Dormand–Prince 5(4) with step-size control and 4th-order dense output.

use thiserror::Error;

use crate::factorize::LienardEquation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrateError {
    #[error("|x| exceeded {bound} at t = {t}")]
    BlowUp { t: f64, bound: f64 },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("step budget of {0} exhausted")]
    TooManySteps(usize),
    #[error("invalid integrator input: {0}")]
    InvalidInput(String),
}

/// Sampled trajectory `(t, x, x')`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub xdot: Vec<f64>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn push(&mut self, t: f64, x: f64, xdot: f64) {
        self.t.push(t);
        self.x.push(x);
        self.xdot.push(xdot);
    }

    /// Equal lengths and strictly increasing times.
    pub fn is_valid(&self) -> bool {
        self.t.len() == self.x.len() && self.t.len() == self.xdot.len() && self.t.windows(2).all(|w| w[0] < w[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    /// `|x|` above this aborts with `BlowUp`.
    pub blowup: f64,
    pub max_steps: usize,
}

impl IntegratorOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            ..Self::default()
        }
    }
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            blowup: 1e6,
            max_steps: 5_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

type State = [f64; 2];

fn axpy(y: State, h: f64, coef: &[f64], k: &[State]) -> State {
    let mut out = y;
    for (c, ki) in coef.iter().zip(k) {
        out[0] += h * c * ki[0];
        out[1] += h * c * ki[1];
    }
    out
}

struct Step {
    y: State,
    k: [State; 7],
    err: State,
}

/// One Dormand–Prince step; `k0` is `f(t, y)` (first-same-as-last reuse).
fn dopri_step<F: Fn(f64, State) -> State>(f: &F, t: f64, y: State, k0: State, h: f64) -> Step {
    let mut k = [[0.0; 2]; 7];
    k[0] = k0;
    for s in 1..7 {
        let ys = axpy(y, h, &A[s][..s], &k[..s]);
        k[s] = f(t + C[s] * h, ys);
    }
    let y1 = axpy(y, h, &A[6], &k[..6]);
    let err = axpy([0.0; 2], h, &E, &k);
    Step { y: y1, k, err }
}

/// Dense-output coefficients over the step `[t, t+h]`.
struct Dense {
    t: f64,
    h: f64,
    r: [State; 5],
}

impl Dense {
    fn new(t: f64, h: f64, y0: State, step: &Step) -> Self {
        let mut r = [[0.0; 2]; 5];
        for i in 0..2 {
            let ydiff = step.y[i] - y0[i];
            let bspl = h * step.k[0][i] - ydiff;
            r[0][i] = y0[i];
            r[1][i] = ydiff;
            r[2][i] = bspl;
            r[3][i] = ydiff - h * step.k[6][i] - bspl;
            r[4][i] = h * D.iter().zip(&step.k).map(|(d, k)| d * k[i]).sum::<f64>();
        }
        Self { t, h, r }
    }

    fn at(&self, t: f64) -> State {
        let th = (t - self.t) / self.h;
        let th1 = 1.0 - th;
        let r = &self.r;
        let mut out = [0.0; 2];
        for i in 0..2 {
            out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        }
        out
    }
}

/// Adaptive integration of `y' = f(t, y)` reporting the state at each of `times`
/// (monotone, starting at `t0`, in either direction).
pub fn solve_at<F: Fn(f64, State) -> State>(
    f: &F,
    t0: f64,
    y0: State,
    times: &[f64],
    opts: &IntegratorOptions,
) -> Result<Vec<State>, IntegrateError> {
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(IntegrateError::InvalidInput("tolerances must be positive".into()));
    }
    let Some(&t_end) = times.last() else {
        return Ok(Vec::new());
    };
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    if times.windows(2).any(|w| (w[1] - w[0]) * dir < 0.0) || times.iter().any(|&s| (s - t0) * dir < 0.0) {
        return Err(IntegrateError::InvalidInput("sample times must be monotone from t0".into()));
    }
    let mut out = Vec::with_capacity(times.len());
    let mut next = 0;
    while next < times.len() && times[next] == t0 {
        out.push(y0);
        next += 1;
    }
    let (mut t, mut y) = (t0, y0);
    let mut k0 = f(t, y);
    let span = (t_end - t0).abs();
    let mut h = dir * initial_step(f, t, y, k0, opts).min(span.max(f64::MIN_POSITIVE));
    let mut steps = 0;
    while next < times.len() {
        if steps >= opts.max_steps {
            return Err(IntegrateError::TooManySteps(opts.max_steps));
        }
        steps += 1;
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        if h.abs() <= 1e-14 * t.abs().max(1.0) {
            return Err(IntegrateError::StepUnderflow { t });
        }
        let step = dopri_step(f, t, y, k0, h);
        let mut err = 0.0;
        for i in 0..2 {
            let sc = opts.atol + opts.rtol * y[i].abs().max(step.y[i].abs());
            err += (step.err[i] / sc).powi(2);
        }
        let err = (err / 2.0).sqrt();
        if !err.is_finite() || step.y.iter().any(|v| !v.is_finite()) {
            h *= 0.2;
            continue;
        }
        if err <= 1.0 {
            let dense = Dense::new(t, h, y, &step);
            let t_new = if (t + h - t_end).abs() <= 4.0 * f64::EPSILON * t_end.abs().max(1.0) { t_end } else { t + h };
            while next < times.len() && (times[next] - t_new) * dir <= 0.0 {
                out.push(if times[next] == t_new { step.y } else { dense.at(times[next]) });
                next += 1;
            }
            t = t_new;
            y = step.y;
            k0 = step.k[6];
            if y[0].abs() > opts.blowup {
                return Err(IntegrateError::BlowUp { t, bound: opts.blowup });
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }
    }
    Ok(out)
}

fn initial_step<F: Fn(f64, State) -> State>(f: &F, t: f64, y: State, k0: State, opts: &IntegratorOptions) -> f64 {
    let norm = |v: State| {
        let s: f64 = (0..2).map(|i| (v[i] / (opts.atol + opts.rtol * y[i].abs())).powi(2)).sum();
        (s / 2.0).sqrt()
    };
    let (d0, d1) = (norm(y), norm(k0));
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = [y[0] + h0 * k0[0], y[1] + h0 * k0[1]];
    let k1 = f(t + h0, y1);
    let d2 = norm([k1[0] - k0[0], k1[1] - k0[1]]) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}

/// `n` equal Dormand–Prince steps (5th-order solution, no error control).
pub fn fixed_step<F: Fn(f64, State) -> State>(f: &F, t0: f64, y0: State, t1: f64, n: usize) -> State {
    let h = (t1 - t0) / n as f64;
    let mut y = y0;
    for i in 0..n {
        let t = t0 + h * i as f64;
        y = dopri_step(f, t, y, f(t, y), h).y;
    }
    y
}

/// Right-hand side of the first-order system `(x, x')` of a Liénard equation.
pub fn lienard_rhs(eq: &LienardEquation) -> impl Fn(f64, State) -> State + '_ {
    move |_, y| [y[1], eq.acceleration(y[0], y[1])]
}

/// Trajectory of `eq` from `(x0, v0)` at `t_span.0` sampled at `samples` uniform times.
pub fn integrate_sampled(
    eq: &LienardEquation,
    x0: f64,
    v0: f64,
    t_span: (f64, f64),
    samples: usize,
    opts: &IntegratorOptions,
) -> Result<TimeSeries, IntegrateError> {
    if samples < 2 || t_span.0 == t_span.1 {
        return Err(IntegrateError::InvalidInput("need at least two samples over a nondegenerate span".into()));
    }
    let (a, b) = t_span;
    let times: Vec<f64> = (0..samples)
        .map(|i| if i + 1 == samples { b } else { a + (b - a) * i as f64 / (samples - 1) as f64 })
        .collect();
    let states = solve_at(&lienard_rhs(eq), a, [x0, v0], &times, opts)?;
    let mut ts = TimeSeries::default();
    for (t, s) in times.iter().zip(states) {
        ts.push(*t, s[0], s[1]);
    }
    if b < a {
        ts.t.reverse();
        ts.x.reverse();
        ts.xdot.reverse();
    }
    Ok(ts)
}

/// Trajectory with 1001 uniform samples and `rtol = atol = tol`.
pub fn integrate(eq: &LienardEquation, x0: f64, v0: f64, t_span: (f64, f64), tol: f64) -> Result<TimeSeries, IntegrateError> {
    if !(tol > 0.0) {
        return Err(IntegrateError::InvalidInput("tol must be positive".into()));
    }
    integrate_sampled(eq, x0, v0, t_span, 1001, &IntegratorOptions::with_tol(tol))
}
