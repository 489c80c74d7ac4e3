//! Closed-form solutions `x(t)` of factored Liénard equations.
//!
//! Every factored equation reduces to the Bernoulli equation
//!
//! ```text
//! x' + Z(t) x = -A x^{q+1}
//! ```
//!
//! whose solutions are `x = R(t) / D(t)^{1/q}` with `R' = -Z R` and
//! `D' = q A R^q`. Each waveform here is stored in that quotient shape:
//! a numerator jet, a denominator jet and a root order. Derivatives come from
//! jet arithmetic; poles are the zeros of the denominator.

mod jet;
mod quadrature;
mod special;
mod zeta;

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::factorize::{MonomialForm, Regime};
use crate::polyalg::rat_to_f64;

pub use jet::Jet;
pub use quadrature::{integrate as gauss_kronrod, CumulativeIntegral};
pub use special::{
    cubic_regular, cubic_waveform, sto_printed_waveform, sto_waveform, sundman_waveform_q1, sundman_waveform_q2,
    sundman_waveform_q2_theorem, wilson_waveform, StoPrintedForm,
};
pub use zeta::Zeta;

/// Evaluation refuses points whose estimated distance to a pole is below this.
pub const POLE_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveformError {
    #[error("pole at t = {0}")]
    PoleAt(f64),
    #[error("even root of a negative bracket at t = {0}")]
    EvenRootOfNegative(f64),
    #[error("quadrature failed on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64 },
    #[error("parameters outside the valid domain: {0}")]
    DomainViolation(String),
    #[error("waveform has no Bernoulli structure")]
    NoBernoulliForm,
    #[error("cannot anchor the integration constant: x(0) = 0 or undefined")]
    Unanchored,
}

/// Choice of sign for the split constant `c` (and root branch for even powers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// `x`, `x'`, `x''` at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveState {
    pub t: f64,
    pub x: f64,
    pub xdot: f64,
    pub xddot: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Singularity {
    Pole(f64),
    /// Interval on which an even root would be taken of a negative bracket.
    NegativeRadicand(f64, f64),
}

impl Singularity {
    pub fn span(&self) -> (f64, f64) {
        match *self {
            Singularity::Pole(t) => (t, t),
            Singularity::NegativeRadicand(a, b) => (a, b),
        }
    }
}

/// Coefficient data of the Bernoulli equation `x' + Z x = -A x^{q+1}` a waveform solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliForm {
    pub zeta: Zeta,
    pub half_b: f64,
    pub q: u32,
    pub a: f64,
}

impl BernoulliForm {
    /// `Z(t)`: `B/2 - c - zeta(t)`, real in all three regimes.
    pub fn z(&self, t: f64) -> f64 {
        match self.zeta {
            Zeta::Rational { t0 } => self.half_b - 1.0 / (t - t0),
            Zeta::Hyperbolic { c, delta } => self.half_b - c * (c * t + delta).tanh(),
            Zeta::Trigonometric { c_tilde, delta } => self.half_b + c_tilde * (c_tilde * t + delta).tan(),
        }
    }

    pub fn z_derivative(&self, t: f64) -> f64 {
        match self.zeta {
            Zeta::Rational { t0 } => 1.0 / ((t - t0) * (t - t0)),
            Zeta::Hyperbolic { c, delta } => {
                let th = (c * t + delta).tanh();
                -c * c * (1.0 - th * th)
            }
            Zeta::Trigonometric { c_tilde, delta } => {
                let tn = (c_tilde * t + delta).tan();
                c_tilde * c_tilde * (1.0 + tn * tn)
            }
        }
    }

    /// Closed form of `∫Z` (additive constant dropped).
    pub fn z_integral(&self, t: f64) -> f64 {
        match self.zeta {
            Zeta::Rational { t0 } => self.half_b * t - (t - t0).abs().ln(),
            Zeta::Hyperbolic { c, delta } => self.half_b * t - (c * t + delta).cosh().ln(),
            Zeta::Trigonometric { c_tilde, delta } => self.half_b * t - (c_tilde * t + delta).cos().abs().ln(),
        }
    }

    /// Signed `R(t) = e^{-∫Z}`, analytic through the poles of `Z`.
    pub fn root_factor(&self, t: f64) -> Jet {
        let envelope = Jet::linear(-self.half_b, 0.0, t).exp();
        let shape = match self.zeta {
            Zeta::Rational { t0 } => Jet::linear(1.0, -t0, t),
            Zeta::Hyperbolic { c, delta } => Jet::linear(c, delta, t).cosh(),
            Zeta::Trigonometric { c_tilde, delta } => Jet::linear(c_tilde, delta, t).cos(),
        };
        envelope * shape
    }

    /// Right-hand side `-Z x - A x^{q+1}`.
    pub fn rhs(&self, t: f64, x: f64) -> f64 {
        -self.z(t) * x - self.a * x.powi(self.q as i32 + 1)
    }

    fn frequency(&self) -> f64 {
        match self.zeta {
            Zeta::Rational { .. } => 1.0,
            Zeta::Hyperbolic { c, .. } => c.abs().max(self.half_b.abs()).max(0.1),
            Zeta::Trigonometric { c_tilde, .. } => c_tilde.abs(),
        }
    }
}

/// Quotient representation `x = N / Den^{1/root}`.
#[derive(Debug, Clone, Copy)]
pub struct Quotient {
    pub numerator: Jet,
    pub denominator: Jet,
    pub root: u32,
}

#[derive(Debug, Clone)]
pub(crate) enum Formula {
    General {
        form: BernoulliForm,
        k: f64,
        root_sign: f64,
        integral: CumulativeIntegral,
    },
    Cubic {
        k: f64,
        omega: f64,
        a_const: f64,
        delta: f64,
    },
    Sto {
        eps: f64,
        c_tilde: f64,
        a_const: f64,
        delta: f64,
    },
    StoPrinted {
        numerator_freq: f64,
        exp_rate: f64,
        amplitude: f64,
        phase: f64,
        a_const: f64,
        delta: f64,
    },
    Wilson {
        mu: f64,
        c_tilde: f64,
        a_const: f64,
        delta: f64,
        sign: f64,
    },
    SundmanQ1 {
        a: f64,
        c1: f64,
        delta: f64,
    },
    SundmanQ2Printed {
        a: f64,
        c1: f64,
        delta: f64,
    },
    SundmanQ2 {
        a: f64,
        c1: f64,
        delta: f64,
    },
}

impl Formula {
    fn quotient(&self, t: f64) -> Result<Quotient, WaveformError> {
        let q = match *self {
            Formula::General {
                ref form,
                k,
                root_sign,
                ref integral,
            } => {
                let r = form.root_factor(t);
                let qa = form.q as f64 * form.a;
                let power = |s: f64| form.root_factor(s).v.powi(form.q as i32);
                let i = integral.value(&power, t)?;
                let rq1 = r.v.powi(form.q as i32 - 1);
                Quotient {
                    numerator: r.scale(root_sign),
                    denominator: Jet::new(k + qa * i, qa * rq1 * r.v, qa * form.q as f64 * rq1 * r.d1),
                    root: form.q,
                }
            }
            Formula::Cubic { k, omega, a_const, delta } => {
                let u = Jet::linear(omega, delta, t);
                Quotient {
                    numerator: u.cos(),
                    denominator: u.sin().scale(k / omega) + a_const,
                    root: 1,
                }
            }
            Formula::Sto {
                eps,
                c_tilde,
                a_const,
                delta,
            } => {
                let a = -1.5 * eps;
                let u = Jet::linear(c_tilde, delta, t);
                let norm = a * a + c_tilde * c_tilde;
                let osc = (u.cos().scale(a) + u.sin().scale(c_tilde)).scale(1.0 / norm);
                Quotient {
                    numerator: u.cos(),
                    denominator: Jet::linear(-a, 0.0, t).exp().scale(a_const) + osc,
                    root: 1,
                }
            }
            Formula::StoPrinted {
                numerator_freq,
                exp_rate,
                amplitude,
                phase,
                a_const,
                delta,
            } => {
                let u = Jet::linear(numerator_freq, delta, t);
                let shifted = Jet::linear(numerator_freq, delta + phase, t);
                Quotient {
                    numerator: u.cos(),
                    denominator: Jet::linear(exp_rate, 0.0, t).exp().scale(a_const) + shifted.sin().scale(amplitude),
                    root: 1,
                }
            }
            Formula::Wilson {
                mu,
                c_tilde,
                a_const,
                delta,
                sign,
            } => {
                let u = Jet::linear(c_tilde, delta, t);
                let two_u = Jet::linear(2.0 * c_tilde, 2.0 * delta, t);
                let bracket = Jet::linear(-mu, 0.0, t).exp().scale(a_const)
                    + two_u.cos().scale(mu * mu / 16.0)
                    + two_u.sin().scale(mu * c_tilde / 8.0)
                    + 0.25;
                Quotient {
                    numerator: u.cos().scale(sign),
                    denominator: bracket,
                    root: 2,
                }
            }
            Formula::SundmanQ1 { a, c1, delta } => {
                let w = Jet::linear(1.0 / 6.0, delta, t);
                let decay = Jet::linear(-0.5, 0.0, t).exp();
                Quotient {
                    numerator: decay * w.cosh(),
                    denominator: (decay * (w.sinh() + w.cosh().scale(3.0))).scale(-0.75 * a) + c1,
                    root: 1,
                }
            }
            Formula::SundmanQ2Printed { a, c1, delta } => {
                // i e^{-(t-d)/2} cosh(w) / sqrt(-c1 + (8A/3) e^{3w} cosh^3 w): real value
                // is e^{-(t-d)/2} cosh(w) / sqrt(c1 - (8A/3) e^{3w} cosh^3 w)
                let w = Jet::linear(0.25, delta, t);
                let grow = Jet::linear(0.75, 3.0 * delta, t).exp();
                Quotient {
                    numerator: Jet::linear(-0.5, 0.5 * delta, t).exp() * w.cosh(),
                    denominator: (grow * w.cosh().powi(3)).scale(-8.0 * a / 3.0) + c1,
                    root: 2,
                }
            }
            Formula::SundmanQ2 { a, c1, delta } => {
                let w = Jet::linear(0.25, delta, t);
                let decay = Jet::linear(-0.75, delta, t).exp();
                Quotient {
                    numerator: Jet::linear(-0.5, 0.0, t).exp() * w.cosh(),
                    denominator: (decay * w.cosh().powi(3)).scale(-8.0 * a / 3.0) + c1,
                    root: 2,
                }
            }
        };
        Ok(q)
    }

    fn frequency(&self) -> f64 {
        match *self {
            Formula::General { ref form, .. } => form.frequency(),
            Formula::Cubic { omega, .. } => omega.abs(),
            Formula::Sto { c_tilde, .. } => c_tilde.abs(),
            Formula::StoPrinted { numerator_freq, .. } => numerator_freq.abs(),
            Formula::Wilson { c_tilde, .. } => 2.0 * c_tilde.abs(),
            Formula::SundmanQ1 { .. } | Formula::SundmanQ2Printed { .. } | Formula::SundmanQ2 { .. } => 1.0,
        }
    }
}

/// An evaluable closed-form solution with analytic derivatives.
#[derive(Debug, Clone)]
pub struct ClosedFormWaveform {
    label: String,
    formula: Formula,
    bernoulli: Option<BernoulliForm>,
    window: (f64, f64),
    period: Option<f64>,
    regular: Option<bool>,
}

impl ClosedFormWaveform {
    pub(crate) fn new(label: impl Into<String>, formula: Formula, bernoulli: Option<BernoulliForm>) -> Self {
        Self {
            label: label.into(),
            formula,
            bernoulli,
            window: (0.0, 20.0),
            period: None,
            regular: None,
        }
    }

    pub(crate) fn with_period(mut self, period: Option<f64>) -> Self {
        self.period = period;
        if let Some(p) = period {
            self.window = (0.0, 3.0 * p);
        }
        self
    }

    pub(crate) fn with_regular(mut self, regular: Option<bool>) -> Self {
        self.regular = regular;
        self
    }

    pub fn with_window(mut self, t0: f64, t1: f64) -> Self {
        self.window = (t0, t1);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Bernoulli coefficients, absent for formula candidates that are not built from one.
    pub fn bernoulli(&self) -> Option<&BernoulliForm> {
        self.bernoulli.as_ref()
    }

    /// Default evaluation window (three nominal periods when one is known).
    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    /// Period claimed by the closed form, when it is isochronous.
    pub fn nominal_period(&self) -> Option<f64> {
        self.period
    }

    /// Closed-form regularity classification, when one exists for this family.
    pub fn is_regular(&self) -> Option<bool> {
        self.regular
    }

    pub fn quotient(&self, t: f64) -> Result<Quotient, WaveformError> {
        self.formula.quotient(t)
    }

    /// The function whose zeros (or negative values, for even roots) are singular.
    pub fn denominator(&self, t: f64) -> Result<f64, WaveformError> {
        Ok(self.formula.quotient(t)?.denominator.v)
    }

    pub fn state(&self, t: f64) -> Result<WaveState, WaveformError> {
        let Quotient {
            numerator,
            denominator,
            root,
        } = self.formula.quotient(t)?;
        let d = denominator.v;
        if d == 0.0 || (d / denominator.d1).abs() <= POLE_GUARD {
            return Err(WaveformError::PoleAt(t));
        }
        let scale = if d > 0.0 {
            denominator.powf(-1.0 / root as f64)
        } else if root % 2 == 1 {
            (-denominator).powf(-1.0 / root as f64).scale(-1.0)
        } else {
            return Err(WaveformError::EvenRootOfNegative(t));
        };
        let x = numerator * scale;
        Ok(WaveState {
            t,
            x: x.v,
            xdot: x.d1,
            xddot: x.d2,
        })
    }

    pub fn eval(&self, t: f64) -> Result<f64, WaveformError> {
        self.state(t).map(|s| s.x)
    }

    /// Returns `(x, x', x'')`.
    pub fn derivatives(&self, t: f64) -> Result<(f64, f64, f64), WaveformError> {
        self.state(t).map(|s| (s.x, s.xdot, s.xddot))
    }

    /// Real poles (denominator zeros) and negative-radicand windows in `[t0, t1]`.
    pub fn singularities(&self, t0: f64, t1: f64) -> Vec<Singularity> {
        let root = match self.formula.quotient(t0) {
            Ok(q) => q.root,
            Err(_) => 1,
        };
        let span = t1 - t0;
        if span <= 0.0 {
            return Vec::new();
        }
        let n = ((span * self.formula.frequency() * 80.0).ceil() as usize).clamp(2000, 200_000);
        let h = span / n as f64;
        let den = |t: f64| self.denominator(t).unwrap_or(f64::NAN);
        let samples: Vec<(f64, f64)> = (0..=n).map(|i| {
            let t = t0 + h * i as f64;
            (t, den(t))
        }).collect();
        let scale = samples.iter().map(|s| s.1.abs()).filter(|v| v.is_finite()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);

        let mut out = Vec::new();
        let mut touch_points = Vec::new();
        for w in samples.windows(3) {
            let (a, b, c) = (w[0].1.abs(), w[1].1.abs(), w[2].1.abs());
            if b <= a && b <= c && b < 1e-3 * scale && w[0].1.signum() == w[2].1.signum() {
                let (tm, vm) = golden_min(|t| den(t).abs(), w[0].0, w[2].0);
                if vm <= 1e-12 * scale {
                    touch_points.push(tm);
                }
            }
        }
        if root % 2 == 1 {
            for w in samples.windows(2) {
                if w[0].1.signum() != w[1].1.signum() && w[0].1 != 0.0 {
                    out.push(Singularity::Pole(bisect(den, w[0].0, w[1].0)));
                }
            }
        } else {
            let mut start: Option<f64> = None;
            if samples[0].1 < 0.0 {
                start = Some(t0);
            }
            for w in samples.windows(2) {
                let (l, r) = (w[0].1, w[1].1);
                if l >= 0.0 && r < 0.0 {
                    start = Some(bisect(den, w[0].0, w[1].0));
                } else if l < 0.0 && r >= 0.0 {
                    let end = bisect(den, w[0].0, w[1].0);
                    out.push(Singularity::NegativeRadicand(start.take().unwrap_or(t0), end));
                }
            }
            if let Some(s) = start {
                out.push(Singularity::NegativeRadicand(s, t1));
            }
        }
        for tp in touch_points {
            let dup = out.iter().any(|s| {
                let (a, b) = s.span();
                tp >= a - 2.0 * h && tp <= b + 2.0 * h
            });
            if !dup {
                out.push(Singularity::Pole(tp));
            }
        }
        out.sort_by(|a, b| a.span().0.total_cmp(&b.span().0));
        out
    }

    /// True when `t` is within `margin` of a reported singularity.
    pub fn near_singularity(singularities: &[Singularity], t: f64, margin: f64) -> bool {
        singularities.iter().any(|s| {
            let (a, b) = s.span();
            t >= a - margin && t <= b + margin
        })
    }

    /// Integration constant `K` of the quadrature form reproducing this waveform
    /// (`D(0) = K` since the outer integral is anchored at 0).
    pub fn integration_constant(&self) -> Result<f64, WaveformError> {
        let form = self.bernoulli.ok_or(WaveformError::NoBernoulliForm)?;
        let x0 = self.eval(0.0).map_err(|_| WaveformError::Unanchored)?;
        let r0 = form.root_factor(0.0).v;
        if x0 == 0.0 || r0 == 0.0 {
            return Err(WaveformError::Unanchored);
        }
        Ok((r0 / x0).powi(form.q as i32))
    }

    /// The same solution rebuilt through the general quadrature formula.
    pub fn to_general(&self) -> Result<ClosedFormWaveform, WaveformError> {
        let form = self.bernoulli.ok_or(WaveformError::NoBernoulliForm)?;
        let k = self.integration_constant()?;
        let x0 = self.eval(0.0)?;
        let root_sign = if form.q % 2 == 0 {
            (x0 * form.root_factor(0.0).v).signum()
        } else {
            1.0
        };
        let mut w = general_from_form(form, k, root_sign);
        w.window = self.window;
        w.period = self.period;
        Ok(w)
    }
}

impl fmt::Display for ClosedFormWaveform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let m = 0.5 * (a + b);
    (m, f(m))
}

fn general_from_form(form: BernoulliForm, k: f64, root_sign: f64) -> ClosedFormWaveform {
    let spacing = (0.5 / form.frequency()).min(0.5);
    let label = format!(
        "general q={} A={} B={} kernel={:?} K={}",
        form.q,
        form.a,
        2.0 * form.half_b,
        form.zeta,
        k
    );
    ClosedFormWaveform::new(
        label,
        Formula::General {
            form,
            k,
            root_sign,
            integral: CumulativeIntegral::new(spacing),
        },
        Some(form),
    )
}

/// Theorem solution `x = [e^{-q∫Z} / (K + qA ∫ e^{-q∫Z})]^{1/q}` with the outer
/// integral evaluated by adaptive quadrature from `t = 0`.
///
/// `branch` picks the sign of `c` (`c = ±sqrt(Delta)/2`, or `c~ = ±sqrt(-Delta)/2`);
/// `phase` is `delta` for the hyperbolic and tangent kernels and `t0` for the
/// rational one.
pub fn general_waveform(m: &MonomialForm, branch: Branch, k: f64, phase: f64) -> Result<ClosedFormWaveform, WaveformError> {
    if m.q == 0 || rat_to_f64(&m.a) == 0.0 {
        return Err(WaveformError::DomainViolation("theorem form needs q != 0 and A != 0".into()));
    }
    let delta = rat_to_f64(&m.delta);
    let half = 0.5 * delta.abs().sqrt() * branch.sign();
    let zeta = match m.regime() {
        Regime::RationalZeta => Zeta::Rational { t0: phase },
        Regime::HyperbolicZeta => Zeta::Hyperbolic { c: half, delta: phase },
        Regime::TrigonometricZeta => Zeta::Trigonometric {
            c_tilde: half,
            delta: phase,
        },
    };
    let form = BernoulliForm {
        zeta,
        half_b: 0.5 * rat_to_f64(&m.b),
        q: m.q,
        a: rat_to_f64(&m.a),
    };
    let mut w = general_from_form(form, k, 1.0);
    if let Zeta::Trigonometric { c_tilde, .. } = zeta {
        w.window = (0.0, 6.0 * PI / c_tilde.abs());
    }
    Ok(w)
}

impl ClosedFormWaveform {
    /// Flips the root branch of an even-power quadrature waveform (the `±` of the
    /// even-root solutions). No effect on other waveforms.
    pub fn with_root_sign(mut self, branch: Branch) -> Self {
        if let Formula::General { ref form, ref mut root_sign, .. } = self.formula {
            if form.q % 2 == 0 {
                *root_sign = branch.sign();
            }
        }
        self
    }
}
