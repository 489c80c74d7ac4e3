//! Commutative factorization of polynomial Liénard equations.
//!
//! An equation `x'' + G(x) x' + F(x) = 0` factors as `[D - phi2][D - phi1] x = 0`
//! with `phi1 = p + c`, `phi2 = p - c` and `c` constant exactly when
//!
//! ```text
//! x p'(x) + 2 p(x) = -G(x)      and      p(x)^2 - F(x)/x = c^2  (a constant).
//! ```
//!
//! The first relation fixes `p` uniquely (`p_k = -g_k / (k + 2)`), so the whole
//! decision reduces to an exact constancy test on `p^2 - F/x`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::polyalg::{rat_int, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorizeError {
    #[error("invalid equation: F(0) = {0} must vanish")]
    InvalidEquation(Rational),
    #[error("not commutatively factorable: p^2 - F/x = {residual} is not constant")]
    NotCommutativelyFactorable { residual: Polynomial },
    #[error("symmetric part {0} is not a monomial plus a constant")]
    NotMonomial(Polynomial),
}

/// `x'' + G(x) x' + F(x) = 0` with `F(0) = 0`.
#[derive(Debug, Clone)]
pub struct LienardEquation {
    g: Polynomial,
    f: Polynomial,
    g_num: Vec<f64>,
    f_num: Vec<f64>,
}

impl PartialEq for LienardEquation {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g && self.f == other.f
    }
}

impl Eq for LienardEquation {}

impl LienardEquation {
    pub fn new(g: Polynomial, f: Polynomial) -> Result<Self, FactorizeError> {
        let f0 = f.coeff(0);
        if !f0.is_zero() {
            return Err(FactorizeError::InvalidEquation(f0));
        }
        let g_num = g.to_f64_coeffs();
        let f_num = f.to_f64_coeffs();
        Ok(Self { g, f, g_num, f_num })
    }

    pub fn g(&self) -> &Polynomial {
        &self.g
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn damping(&self, x: f64) -> f64 {
        crate::polyalg::horner(&self.g_num, x)
    }

    pub fn restoring(&self, x: f64) -> f64 {
        crate::polyalg::horner(&self.f_num, x)
    }

    /// `x'' + G(x) x' + F(x)` at a state and acceleration.
    pub fn residual(&self, x: f64, xdot: f64, xddot: f64) -> f64 {
        xddot + self.damping(x) * xdot + self.restoring(x)
    }

    /// Acceleration prescribed by the equation.
    pub fn acceleration(&self, x: f64, xdot: f64) -> f64 {
        -self.damping(x) * xdot - self.restoring(x)
    }

    /// `F(x) / x`, the product `phi1 * phi2`.
    pub fn f_over_x(&self) -> Polynomial {
        self.f.div_x().expect("F(0) = 0 is checked on construction")
    }
}

impl fmt::Display for LienardEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x'' + ({}) x' + ({}) = 0", self.g, self.f)
    }
}

/// Which solution family of `zeta' + 2 c zeta = -zeta^2` the split constant selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `c^2 = 0`: `zeta = 1 / (t - t0)`.
    RationalZeta,
    /// `c^2 > 0`: hyperbolic tangent kernel.
    HyperbolicZeta,
    /// `c^2 < 0`: tangent kernel, the only isochronous family.
    TrigonometricZeta,
}

impl Regime {
    pub fn from_c_squared(c_squared: &Rational) -> Self {
        if c_squared.is_zero() {
            Regime::RationalZeta
        } else if c_squared.is_positive() {
            Regime::HyperbolicZeta
        } else {
            Regime::TrigonometricZeta
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::RationalZeta => "rational",
            Regime::HyperbolicZeta => "hyperbolic",
            Regime::TrigonometricZeta => "trigonometric",
        }
    }
}

/// Normal form `G = (q+2) A x^q + B`, `F = A x^{q+1} (A x^q + B) + C x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialForm {
    pub q: u32,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    /// `B^2 - 4C`, equal to four times the split constant `c^2`.
    pub delta: Rational,
}

impl MonomialForm {
    /// Symmetric part `p = -(A x^q + B/2)`.
    pub fn symmetric_part(&self) -> Polynomial {
        let half_b = &self.b / rat_int(2);
        &Polynomial::monomial(-self.a.clone(), self.q as usize) - &Polynomial::constant(half_b)
    }

    pub fn regime(&self) -> Regime {
        Regime::from_c_squared(&self.delta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutativeFactorization {
    /// Shared part of both factoring functions, `phi1,2 = p ± c`.
    pub p: Polynomial,
    /// `c^2 = p^2 - F/x`; negative in the trigonometric regime where `c = i c~`.
    pub c_squared: Rational,
    pub regime: Regime,
    pub monomial: Option<MonomialForm>,
}

impl CommutativeFactorization {
    /// `c~^2 = -c^2`, the squared angular frequency of the tangent kernel.
    pub fn c_tilde_squared(&self) -> Rational {
        -self.c_squared.clone()
    }
}

/// The unique `p` with `x p' + 2p = -G`.
pub fn symmetric_part(g: &Polynomial) -> Polynomial {
    Polynomial::new(
        g.coeffs()
            .iter()
            .enumerate()
            .map(|(k, gk)| -gk / rat_int(k as i64 + 2))
            .collect(),
    )
}

/// Decides commutative factorability exactly and returns the factorization.
pub fn commutative_factorize(eq: &LienardEquation) -> Result<CommutativeFactorization, FactorizeError> {
    let p = symmetric_part(eq.g());
    let residual = &(&p * &p) - &eq.f_over_x();
    let c_squared = residual
        .as_constant()
        .ok_or_else(|| FactorizeError::NotCommutativelyFactorable {
            residual: residual.clone(),
        })?;
    let regime = Regime::from_c_squared(&c_squared);
    let mut fact = CommutativeFactorization {
        p,
        c_squared,
        regime,
        monomial: None,
    };
    fact.monomial = to_theorem_form(eq, &fact).ok();
    Ok(fact)
}

/// Extracts `(q, A, B, C, Delta)` when `p` is a single power plus a constant.
pub fn to_theorem_form(
    eq: &LienardEquation,
    fact: &CommutativeFactorization,
) -> Result<MonomialForm, FactorizeError> {
    let p = &fact.p;
    let powers: Vec<usize> = p.support().filter(|&k| k > 0).collect();
    let [q] = powers[..] else {
        return Err(FactorizeError::NotMonomial(p.clone()));
    };
    Ok(MonomialForm {
        q: q as u32,
        a: -p.coeff(q),
        b: -p.coeff(0) * rat_int(2),
        c: eq.f_over_x().coeff(0),
        delta: &fact.c_squared * rat_int(4),
    })
}

/// Element `re + im * c` of `Q[x][c] / (c^2 - c_squared)`.
#[derive(Debug, Clone, PartialEq)]
struct SplitPoly {
    re: Polynomial,
    im: Polynomial,
}

impl SplitPoly {
    fn add(&self, o: &SplitPoly) -> SplitPoly {
        SplitPoly {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn mul(&self, o: &SplitPoly, c_squared: &Rational) -> SplitPoly {
        SplitPoly {
            re: &(&self.re * &o.re) + &(&self.im * &o.im).scale(c_squared),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    fn x_derivative(&self) -> SplitPoly {
        SplitPoly {
            re: self.re.derivative().mul_x(),
            im: self.im.derivative().mul_x(),
        }
    }

    fn real(p: Polynomial) -> SplitPoly {
        SplitPoly {
            re: p,
            im: Polynomial::zero(),
        }
    }
}

/// Checks the three commutative conditions with `phi1,2 = p ± c` as exact identities.
pub fn verify_factorization_identity(eq: &LienardEquation, fact: &CommutativeFactorization) -> bool {
    let one = Polynomial::constant(Rational::one());
    let phi1 = SplitPoly {
        re: fact.p.clone(),
        im: one.clone(),
    };
    let phi2 = SplitPoly {
        re: fact.p.clone(),
        im: -one,
    };
    let minus_g = SplitPoly::real(-eq.g());
    let sum = phi1.add(&phi2);
    let first = sum.add(&phi1.x_derivative()) == minus_g;
    let second = sum.add(&phi2.x_derivative()) == minus_g;
    let third = phi1.mul(&phi2, &fact.c_squared) == SplitPoly::real(eq.f_over_x());
    first && second && third
}

/// Equation factoring as `(D - P + i w)(D - P - i w) x = 0`:
/// `G = -(x P' + 2P)`, `F = (P^2 + w^2) x`.
///
/// Factorizing the result returns `p = P` and `c_squared = -omega_sq`.
pub fn equation_from_symmetric_part(p: &Polynomial, omega_sq: &Rational) -> LienardEquation {
    let g = -(&p.derivative().mul_x() + &p.scale(&rat_int(2)));
    let f = (&(p * p) + &Polynomial::constant(omega_sq.clone())).mul_x();
    LienardEquation::new(g, f).expect("F = (P^2 + w^2) x vanishes at the origin")
}
