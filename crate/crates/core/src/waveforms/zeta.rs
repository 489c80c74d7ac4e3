//! Solutions of `zeta' + 2 c zeta = -zeta^2`, one per sign of `c^2`.

use num_complex::Complex64;

use super::{WaveformError, POLE_GUARD};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Zeta {
    /// `c = 0`: `1 / (t - t0)`.
    Rational { t0: f64 },
    /// Real `c != 0`: `-c [1 - tanh(c t + delta)]`.
    Hyperbolic { c: f64, delta: f64 },
    /// `c = i c~`: `-c~ [i + tan(c~ t + delta)]`.
    Trigonometric { c_tilde: f64, delta: f64 },
}

impl Zeta {
    /// The split constant `c` (imaginary in the trigonometric case).
    pub fn split_constant(&self) -> Complex64 {
        match *self {
            Zeta::Rational { .. } => Complex64::new(0.0, 0.0),
            Zeta::Hyperbolic { c, .. } => Complex64::new(c, 0.0),
            Zeta::Trigonometric { c_tilde, .. } => Complex64::new(0.0, c_tilde),
        }
    }

    fn check_pole(&self, t: f64) -> Result<(), WaveformError> {
        match *self {
            Zeta::Rational { t0 } if (t - t0).abs() <= POLE_GUARD * (1.0 + t0.abs()) => {
                Err(WaveformError::PoleAt(t))
            }
            Zeta::Trigonometric { c_tilde, delta } => {
                let arg = (c_tilde * t + delta).cos();
                if arg.abs() <= POLE_GUARD {
                    Err(WaveformError::PoleAt(t))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> Result<Complex64, WaveformError> {
        self.check_pole(t)?;
        Ok(match *self {
            Zeta::Rational { t0 } => Complex64::new(1.0 / (t - t0), 0.0),
            Zeta::Hyperbolic { c, delta } => Complex64::new(-c * (1.0 - (c * t + delta).tanh()), 0.0),
            Zeta::Trigonometric { c_tilde, delta } => {
                Complex64::new(-c_tilde * (c_tilde * t + delta).tan(), -c_tilde)
            }
        })
    }

    /// Analytic time derivative.
    pub fn derivative(&self, t: f64) -> Result<Complex64, WaveformError> {
        self.check_pole(t)?;
        Ok(match *self {
            Zeta::Rational { t0 } => Complex64::new(-1.0 / ((t - t0) * (t - t0)), 0.0),
            Zeta::Hyperbolic { c, delta } => {
                let th = (c * t + delta).tanh();
                Complex64::new(c * c * (1.0 - th * th), 0.0)
            }
            Zeta::Trigonometric { c_tilde, delta } => {
                let tn = (c_tilde * t + delta).tan();
                Complex64::new(-c_tilde * c_tilde * (1.0 + tn * tn), 0.0)
            }
        })
    }

    /// `|zeta' + 2 c zeta + zeta^2|`.
    pub fn riccati_residual(&self, t: f64) -> Result<f64, WaveformError> {
        let z = self.eval(t)?;
        let dz = self.derivative(t)?;
        Ok((dz + 2.0 * self.split_constant() * z + z * z).norm())
    }
}
