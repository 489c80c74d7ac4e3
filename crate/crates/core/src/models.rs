//! Named equations of the factorizable family, the traveling-wave reduction of
//! the spin-torque oscillator model, and linearizability tests.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::factorize::{commutative_factorize, CommutativeFactorization, FactorizeError, LienardEquation};
use crate::polyalg::{rat_from_f64, rat_int, rat_to_f64, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Factorize(#[from] FactorizeError),
}

/// `G = (q+2) A x^q + B`, `F = A x^{q+1} (A x^q + B) + C x`.
pub fn theorem_equation(a: &Rational, b: &Rational, c: &Rational, q: u32) -> Result<LienardEquation, ModelError> {
    if a.is_zero() || q == 0 {
        return Err(ModelError::Degenerate("need A != 0 and q != 0".into()));
    }
    let q = q as usize;
    let g = &Polynomial::monomial(a * rat_int(q as i64 + 2), q) + &Polynomial::constant(b.clone());
    let inner = &Polynomial::monomial(a.clone(), q) + &Polynomial::constant(b.clone());
    let f = &(&Polynomial::monomial(a.clone(), q + 1) * &inner) + &Polynomial::monomial(c.clone(), 1);
    Ok(LienardEquation::new(g, f)?)
}

/// `x'' + 3k x x' + k^2 x^3 + ω^2 x = 0`.
pub fn cubic_oscillator(k: &Rational, omega: &Rational) -> Result<LienardEquation, ModelError> {
    let g = Polynomial::monomial(k * rat_int(3), 1);
    let f = &Polynomial::monomial(k * k, 3) + &Polynomial::monomial(omega * omega, 1);
    Ok(LienardEquation::new(g, f)?)
}

/// `x'' + μ(x^2 - 1) x' + (μ^2/16) x^3 (x^2 - 4) + x = 0`.
pub fn wilson_equation(mu: &Rational) -> Result<LienardEquation, ModelError> {
    if mu.is_zero() {
        return Err(ModelError::Degenerate("mu = 0 has no nonlinear part".into()));
    }
    theorem_equation(&(mu / rat_int(4)), &-mu.clone(), &Rational::one(), 2)
}

/// Real roots of `t^3 + p t + r = 0` with multiplicity, in ascending order.
///
/// Three roots by the trigonometric formula when `r^2 + 4p^3/27 <= 0`, one by
/// Cardano's formula otherwise; each polished by a Newton step.
pub fn depressed_cubic_roots(p: f64, r: f64) -> Vec<f64> {
    let disc = r * r + 4.0 * p * p * p / 27.0;
    let mut roots = if p == 0.0 && r == 0.0 {
        vec![0.0; 3]
    } else if disc <= 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * r / (2.0 * p)) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3).map(|k| m * (theta - 2.0 * PI * k as f64 / 3.0).cos()).collect()
    } else {
        let s = disc.sqrt() / 2.0;
        // pick the larger-magnitude branch to avoid cancellation
        let w = if r >= 0.0 { -r / 2.0 - s } else { -r / 2.0 + s };
        let u = w.cbrt();
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        vec![t]
    };
    for t in roots.iter_mut() {
        let d = 3.0 * *t * *t + p;
        if d != 0.0 {
            let step = (*t * *t * *t + p * *t + r) / d;
            if step.is_finite() {
                *t -= step;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// `I_b = -2α((1-b)sqrt(v/α))^3`, the constant making `ε_b = (1-b)sqrt(v/α)` a root.
pub fn sto_special_i(alpha: f64, v: f64, b: u8) -> f64 {
    -2.0 * alpha * ((1.0 - b as f64) * (v / alpha).sqrt()).powi(3)
}

/// `c~_b^2 = (3(1-b)^2 + 4) v / (4α)`, exact.
pub fn sto_c_tilde_squared(alpha: &Rational, v: &Rational, b: u8) -> Rational {
    let s = rat_int(1 - b as i64);
    (rat_int(3) * &s * &s + rat_int(4)) * v / (rat_int(4) * alpha)
}

/// Equation satisfied by the shifted profile `U = u - ε`:
/// `U'' + 3(ε + U) U' + U^3 + 3ε U^2 + (3ε^2 + v/α) U = 0`.
pub fn sto_equation(alpha: &Rational, v: &Rational, eps: &Rational) -> Result<LienardEquation, ModelError> {
    if alpha.is_zero() {
        return Err(ModelError::Degenerate("alpha = 0".into()));
    }
    let c = rat_int(3) * eps * eps + v / alpha;
    theorem_equation(&Rational::one(), &(rat_int(3) * eps), &c, 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoBranch {
    /// The shift `ε`, exact when the root is rational, otherwise the nearest float.
    pub epsilon: Rational,
    pub equation: LienardEquation,
    pub factorization: CommutativeFactorization,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoReduction {
    pub alpha: Rational,
    pub v: Rational,
    pub i: Rational,
    /// `I^2/α^2 + (4/27)(v/α)^3`.
    pub discriminant3: Rational,
    /// Real roots with multiplicity.
    pub epsilons: Vec<f64>,
    /// True when two of the three roots are a complex pair and were dropped.
    pub complex_pair: bool,
    /// One entry per distinct real root.
    pub branches: Vec<StoBranch>,
}

/// Exact rational equal to `x` when a convergent with a small denominator is a root.
fn snap_root(x: f64, is_root: impl Fn(&Rational) -> bool) -> Rational {
    let mut h = (BigInt::one(), BigInt::zero());
    let mut k = (BigInt::zero(), BigInt::one());
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        if !a.is_finite() || a.abs() > 1e15 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let hn = &ai * &h.0 + &h.1;
        let kn = &ai * &k.0 + &k.1;
        h = (hn.clone(), h.0);
        k = (kn.clone(), k.0);
        let cand = Rational::new(hn, kn.clone());
        if is_root(&cand) {
            return cand;
        }
        if kn.to_f64().unwrap_or(f64::INFINITY) > 1e9 {
            break;
        }
        let frac = y - a;
        if frac == 0.0 {
            break;
        }
        y = 1.0 / frac;
    }
    rat_from_f64(x).unwrap_or_else(Rational::zero)
}

/// Solves `ε^3 + (v/α)ε + I/α = 0` and builds one factorized equation per real root.
pub fn sto_reduce(alpha: &Rational, v: &Rational, i: &Rational) -> Result<StoReduction, ModelError> {
    if alpha.is_zero() {
        return Err(ModelError::Degenerate("alpha = 0".into()));
    }
    let p = v / alpha;
    let r = i / alpha;
    let discriminant3 = &r * &r + rat_int(4) * &p * &p * &p / rat_int(27);
    let mut epsilons = depressed_cubic_roots(rat_to_f64(&p), rat_to_f64(&r));
    let complex_pair = discriminant3.is_positive();
    if complex_pair {
        epsilons.truncate(1);
    }
    let is_root = |e: &Rational| (e * e * e + &p * e + &r).is_zero();
    let mut branches: Vec<StoBranch> = Vec::new();
    for &e in &epsilons {
        let epsilon = snap_root(e, is_root);
        if branches.iter().any(|b| b.epsilon == epsilon) {
            continue;
        }
        let equation = sto_equation(alpha, v, &epsilon)?;
        let factorization = commutative_factorize(&equation)?;
        branches.push(StoBranch {
            epsilon,
            equation,
            factorization,
        });
    }
    Ok(StoReduction {
        alpha: alpha.clone(),
        v: v.clone(),
        i: i.clone(),
        discriminant3,
        epsilons,
        complex_pair,
        branches,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChielliniParams {
    pub sigma_sq: Rational,
    pub kappa: Rational,
}

/// Finds `(σ^2, κ)` with `σ^2 F = G (∫G + κ)` exactly, if any.
///
/// Writing `s = σ^{-2}` and `m = sκ`, the condition `F = s G∫G + m G` is linear
/// in `(s, m)`; the degrees of `G∫G` and `G` differ, so each unknown is read off
/// one coefficient and the identity is then checked in full.
pub fn chiellini_check(eq: &LienardEquation) -> Option<ChielliniParams> {
    let g = eq.g();
    let dg = g.degree()?;
    let h = g * &g.antiderivative();
    let dh = h.degree()?;
    let s = eq.f().coeff(dh) / h.leading_coeff()?;
    if s.is_zero() {
        return None;
    }
    let rest = eq.f() - &h.scale(&s);
    let m = rest.coeff(dg) / g.leading_coeff()?;
    if rest != g.scale(&m) {
        return None;
    }
    Some(ChielliniParams {
        sigma_sq: s.recip(),
        kappa: m / s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SundmanCase {
    /// `B = 0`, `q = 1`.
    B0,
    /// `B = 1`, `C = (q+1)/(q+2)^2`, `κ = 0`.
    Kappa0,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SundmanParams {
    pub case: SundmanCase,
    pub sigma_sq: Rational,
    pub kappa: Rational,
}

/// Checks the two Sundman-linearizable subfamilies of the theorem family and
/// confirms `F = σ^{-2} G (∫G + κ)` as a polynomial identity before reporting.
pub fn sundman_check(a: &Rational, b: &Rational, c: &Rational, q: u32) -> Option<SundmanParams> {
    let eq = theorem_equation(a, b, c, q).ok()?;
    let qq = rat_int(q as i64);
    let params = if b.is_zero() && q == 1 {
        SundmanParams {
            case: SundmanCase::B0,
            sigma_sq: Rational::new(9.into(), 2.into()),
            kappa: rat_int(3) * c / (rat_int(2) * a),
        }
    } else if b.is_one() && *c == (&qq + rat_int(1)) / ((&qq + rat_int(2)) * (&qq + rat_int(2))) {
        SundmanParams {
            case: SundmanCase::Kappa0,
            sigma_sq: (&qq + rat_int(2)) * (&qq + rat_int(2)) / (&qq + rat_int(1)),
            kappa: Rational::zero(),
        }
    } else {
        return None;
    };
    let q = q as usize;
    let integral = &(&Polynomial::monomial(a * (&qq + rat_int(2)) / (&qq + rat_int(1)), q + 1)
        + &Polynomial::monomial(b.clone(), 1))
        + &Polynomial::constant(params.kappa.clone());
    let rhs = (eq.g() * &integral).scale(&params.sigma_sq.recip());
    (rhs == *eq.f()).then_some(params)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearizabilityReport {
    pub chiellini: Option<ChielliniParams>,
    pub sundman: Option<SundmanParams>,
}

pub fn linearizability(eq: &LienardEquation) -> LinearizabilityReport {
    let sundman = commutative_factorize(eq)
        .ok()
        .and_then(|f| f.monomial)
        .and_then(|m| sundman_check(&m.a, &m.b, &m.c, m.q));
    LinearizabilityReport {
        chiellini: chiellini_check(eq),
        sundman,
    }
}

/// `y^2 + (μ/2) x (x^2-4) y + (x^2-4)[(μ^2/16) x^2 (x^2-4) + 1]`; zero on the limit cycle.
pub fn wilson_limit_cycle_residual(mu: f64, x: f64, y: f64) -> f64 {
    let w = x * x - 4.0;
    y * y + 0.5 * mu * x * w * y + w * (mu * mu / 16.0 * x * x * w + 1.0)
}

/// Sum of the magnitudes of the individual terms of the limit-cycle polynomial,
/// the natural scale for the residual.
pub fn wilson_limit_cycle_scale(mu: f64, x: f64, y: f64) -> f64 {
    let w = x * x - 4.0;
    y * y + (0.5 * mu * x * w * y).abs() + (mu * mu / 16.0 * x * x * w * w).abs() + w.abs()
}
