//! Explicit closed forms for the named model equations.

use std::f64::consts::PI;

use super::{Branch, BernoulliForm, ClosedFormWaveform, Formula, WaveformError, Zeta};

fn domain(msg: impl Into<String>) -> WaveformError {
    WaveformError::DomainViolation(msg.into())
}

/// Bounded iff the denominator constant lies outside `[-k/ω, k/ω]`.
pub fn cubic_regular(k: f64, omega: f64, a_const: f64) -> bool {
    a_const.abs() > (k / omega).abs()
}

/// `x = cos(ωt+δ) / (A + (k/ω) sin(ωt+δ))`.
pub fn cubic_waveform(k: f64, omega: f64, a_const: f64, delta: f64) -> Result<ClosedFormWaveform, WaveformError> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(domain("omega must be nonzero"));
    }
    if k == 0.0 && a_const == 0.0 {
        return Err(domain("k = 0 and A = 0 leave no denominator"));
    }
    let form = BernoulliForm {
        zeta: Zeta::Trigonometric { c_tilde: omega, delta },
        half_b: 0.0,
        q: 1,
        a: k,
    };
    let period = if a_const == 0.0 { PI / omega.abs() } else { 2.0 * PI / omega.abs() };
    Ok(ClosedFormWaveform::new(
        format!("cubic k={k} omega={omega} A={a_const} delta={delta}"),
        Formula::Cubic { k, omega, a_const, delta },
        Some(form),
    )
    .with_period(Some(period))
    .with_regular(Some(cubic_regular(k, omega, a_const))))
}

fn sto_parameters(alpha: f64, v: f64, b: u8) -> Result<(f64, f64), WaveformError> {
    if !(alpha > 0.0 && v > 0.0) {
        return Err(domain("need alpha > 0 and v > 0"));
    }
    if b > 2 {
        return Err(domain("b must be 0, 1 or 2"));
    }
    let eps = (1.0 - b as f64) * (v / alpha).sqrt();
    let c_tilde = (0.75 * eps * eps + v / alpha).sqrt();
    Ok((eps, c_tilde))
}

/// Traveling-wave profile `U_b(z)` solving `U' + (3ε/2 + c~ tan(c~z+δ)) U = -U^2`.
pub fn sto_waveform(alpha: f64, v: f64, b: u8, a_const: f64, delta: f64) -> Result<ClosedFormWaveform, WaveformError> {
    let (eps, c_tilde) = sto_parameters(alpha, v, b)?;
    let form = BernoulliForm {
        zeta: Zeta::Trigonometric { c_tilde, delta },
        half_b: 1.5 * eps,
        q: 1,
        a: 1.0,
    };
    let period = if a_const == 0.0 {
        Some(PI / c_tilde)
    } else if b == 1 {
        Some(2.0 * PI / c_tilde)
    } else {
        None
    };
    let regular = if b == 1 { Some(cubic_regular(1.0, c_tilde, a_const)) } else { None };
    Ok(ClosedFormWaveform::new(
        format!("sto alpha={alpha} v={v} b={b} A={a_const} delta={delta}"),
        Formula::Sto {
            eps,
            c_tilde,
            a_const,
            delta,
        },
        Some(form),
    )
    .with_period(period)
    .with_regular(regular))
}

/// Published candidate formulas for the traveling-wave profile, kept for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoPrintedForm {
    /// The single formula covering every `b`, with exponent `ε c~ z` and phase `arctan(-ε)`.
    Unified,
    /// The three formulas written out for `b = 0, 1, 2`.
    Explicit,
}

pub fn sto_printed_waveform(
    alpha: f64,
    v: f64,
    b: u8,
    form: StoPrintedForm,
    a_const: f64,
    delta: f64,
) -> Result<ClosedFormWaveform, WaveformError> {
    let (eps, c_tilde) = sto_parameters(alpha, v, b)?;
    let r = v / alpha;
    let (exp_rate, amplitude, phase) = match form {
        StoPrintedForm::Unified => (eps * c_tilde, 1.0 / (c_tilde * (1.0 + eps * eps).sqrt()), (-eps).atan()),
        StoPrintedForm::Explicit => match b {
            1 => (0.0, (alpha / v).sqrt(), 0.0),
            _ => {
                let s = if b == 0 { 1.0 } else { -1.0 };
                (s * 1.75f64.sqrt() * r, 1.0 / (1.75 * (r + 1.0)).sqrt(), -s * r.sqrt().atan())
            }
        },
    };
    let period = if a_const == 0.0 && exp_rate != 0.0 {
        Some(PI / c_tilde)
    } else if exp_rate == 0.0 && phase == 0.0 {
        Some(if a_const == 0.0 { PI / c_tilde } else { 2.0 * PI / c_tilde })
    } else {
        None
    };
    Ok(ClosedFormWaveform::new(
        format!("sto printed {form:?} alpha={alpha} v={v} b={b} A={a_const} delta={delta}"),
        Formula::StoPrinted {
            numerator_freq: c_tilde,
            exp_rate,
            amplitude,
            phase,
            a_const,
            delta,
        },
        None,
    )
    .with_period(period))
}

/// `x = ±cos(c~t+δ) / sqrt(A e^{-μt} + 1/4 + (μ/4)^2 cos 2(c~t+δ) + (μc~/8) sin 2(c~t+δ))`.
pub fn wilson_waveform(mu: f64, a_const: f64, delta: f64, sign: Branch) -> Result<ClosedFormWaveform, WaveformError> {
    if !(mu != 0.0 && mu.abs() < 2.0) {
        return Err(domain("need 0 < |mu| < 2"));
    }
    let c_tilde = (4.0 - mu * mu).sqrt() / 2.0;
    let form = BernoulliForm {
        zeta: Zeta::Trigonometric { c_tilde, delta },
        half_b: -0.5 * mu,
        q: 2,
        a: 0.25 * mu,
    };
    let period = (a_const == 0.0).then(|| 2.0 * PI / c_tilde);
    let mut w = ClosedFormWaveform::new(
        format!("wilson mu={mu} A={a_const} delta={delta} sign={sign:?}"),
        Formula::Wilson {
            mu,
            c_tilde,
            a_const,
            delta,
            sign: sign.sign(),
        },
        Some(form),
    )
    .with_period(period)
    .with_regular(Some(a_const >= 0.0));
    if period.is_none() {
        w = w.with_window(0.0, 6.0 * PI / c_tilde);
    }
    Ok(w)
}

/// Kink `x = e^{-t/2} cosh(t/6+δ) / (c1 - (3A/4) e^{-t/2} (sinh(t/6+δ) + 3 cosh(t/6+δ)))`.
pub fn sundman_waveform_q1(a: f64, c1: f64, delta: f64) -> Result<ClosedFormWaveform, WaveformError> {
    if !(a * c1 < 0.0) {
        return Err(domain("A and c1 must have opposite signs"));
    }
    let form = BernoulliForm {
        zeta: Zeta::Hyperbolic { c: 1.0 / 6.0, delta },
        half_b: 0.5,
        q: 1,
        a,
    };
    Ok(ClosedFormWaveform::new(
        format!("sundman q=1 A={a} c1={c1} delta={delta}"),
        Formula::SundmanQ1 { a, c1, delta },
        Some(form),
    )
    .with_window(-20.0, 20.0)
    .with_regular(Some(true)))
}

fn sundman_q2_domain(a: f64, c1: f64) -> Result<(), WaveformError> {
    if a < 0.0 && c1 > 0.0 {
        Ok(())
    } else {
        Err(domain("need A < 0 and c1 > 0"))
    }
}

/// The published `q = 2` kink, `e^{-(t-δ)/2} cosh w / sqrt(c1 - (8A/3) e^{3w} cosh^3 w)`
/// with `w = t/4 + δ` (real value of the printed expression).
pub fn sundman_waveform_q2(a: f64, c1: f64, delta: f64) -> Result<ClosedFormWaveform, WaveformError> {
    sundman_q2_domain(a, c1)?;
    Ok(ClosedFormWaveform::new(
        format!("sundman q=2 printed A={a} c1={c1} delta={delta}"),
        Formula::SundmanQ2Printed { a, c1, delta },
        None,
    )
    .with_window(-20.0, 20.0))
}

/// `q = 2` kink obtained from the quadrature solution:
/// `e^{-t/2} cosh w / sqrt(c1 - (8A/3) e^{δ - 3t/4} cosh^3 w)`, `w = t/4 + δ`.
pub fn sundman_waveform_q2_theorem(a: f64, c1: f64, delta: f64) -> Result<ClosedFormWaveform, WaveformError> {
    sundman_q2_domain(a, c1)?;
    let form = BernoulliForm {
        zeta: Zeta::Hyperbolic { c: 0.25, delta },
        half_b: 0.5,
        q: 2,
        a,
    };
    Ok(ClosedFormWaveform::new(
        format!("sundman q=2 A={a} c1={c1} delta={delta}"),
        Formula::SundmanQ2 { a, c1, delta },
        Some(form),
    )
    .with_window(-20.0, 20.0)
    .with_regular(Some(true)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_classification() {
        assert_eq!(cubic_waveform(2.5, 3.0, 1.0, 0.0).unwrap().is_regular(), Some(true));
        assert_eq!(cubic_waveform(3.5, 3.0, 1.0, 0.0).unwrap().is_regular(), Some(false));
        let cot = cubic_waveform(2.0, 3.0, 0.0, 0.0).unwrap();
        assert!((cot.nominal_period().unwrap() - PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cubic_singularities() {
        let w = cubic_waveform(2.5, 3.0, 1.0, 0.0).unwrap();
        assert!(w.singularities(0.0, 10.0).is_empty());
        let w = cubic_waveform(3.5, 3.0, 1.0, 0.0).unwrap();
        let period = 2.0 * PI / 3.0;
        let s = w.singularities(0.0, 3.0 * period);
        assert!(s.len() >= 3);
        for p in &s {
            let (t, _) = p.span();
            assert!(w.denominator(t).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn phase_quarter_turn_swaps_sine_and_cosine() {
        let (k, om, a) = (2.0, 3.0, 1.5);
        let w = cubic_waveform(k, om, a, PI / 2.0).unwrap();
        for i in 0..100 {
            let t = 0.05 * i as f64;
            let swapped = -(om * t).sin() / (a + (k / om) * (om * t).cos());
            assert!((w.eval(t).unwrap() - swapped).abs() < 1e-12);
        }
    }

    #[test]
    fn sto_b1_is_the_cubic_profile() {
        let (alpha, v) = (0.2, 1.0);
        let sto = sto_waveform(alpha, v, 1, 1.0, 0.0).unwrap();
        let cubic = cubic_waveform(1.0, (v / alpha).sqrt(), 1.0, 0.0).unwrap();
        let printed = sto_printed_waveform(alpha, v, 1, StoPrintedForm::Explicit, 1.0, 0.0).unwrap();
        assert!((sto.nominal_period().unwrap() - 2.809_925_892_416_290_4).abs() < 1e-12);
        for i in 0..300 {
            let t = 0.01 * i as f64;
            let x = cubic.eval(t).unwrap();
            assert!((sto.eval(t).unwrap() - x).abs() < 1e-12);
            assert!((printed.eval(t).unwrap() - x).abs() < 1e-12);
        }
    }

    #[test]
    fn sto_cotangent_period() {
        let (alpha, v) = (1.0, 1.0);
        let w = sto_waveform(alpha, v, 0, 0.0, 0.0).unwrap();
        assert!((w.nominal_period().unwrap() - PI * (4.0 * alpha / (7.0 * v)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn wilson_isochronous_period_and_no_singularities() {
        let w = wilson_waveform(1.0, 0.0, 0.0, Branch::Plus).unwrap();
        assert!((w.nominal_period().unwrap() - 4.0 * PI / 3f64.sqrt()).abs() < 1e-12);
        for mu in [-1.9, -1.0, 0.3, 1.0, 1.9] {
            let w = wilson_waveform(mu, 0.0, 0.0, Branch::Plus).unwrap();
            assert!(w.singularities(0.0, 30.0).is_empty(), "mu={mu}");
        }
        assert!(wilson_waveform(0.0, 0.0, 0.0, Branch::Plus).is_err());
        assert!(wilson_waveform(2.0, 0.0, 0.0, Branch::Plus).is_err());
    }

    #[test]
    fn wilson_negative_constant_has_negative_radicand() {
        let w = wilson_waveform(0.5, -1.0, 0.0, Branch::Plus).unwrap();
        assert_eq!(w.is_regular(), Some(false));
        assert!(!w.singularities(0.0, 5.0).is_empty());
    }

    #[test]
    fn sundman_kinks() {
        let w = sundman_waveform_q1(-1.0, 1.0, 0.0).unwrap();
        assert!(w.singularities(-20.0, 20.0).is_empty());
        assert!((w.eval(-60.0).unwrap() - 2.0 / 3.0).abs() < 1e-6);
        assert!(w.eval(60.0).unwrap().abs() < 1e-8);
        assert!(sundman_waveform_q1(1.0, 1.0, 0.0).is_err());
        assert!(sundman_waveform_q2(1.0, 1.0, 0.0).is_err());
        let p = sundman_waveform_q2(-1.0, 1.0, 0.0).unwrap();
        assert!(p.eval(0.0).unwrap().is_finite());
        let t = sundman_waveform_q2_theorem(-1.0, 1.0, 0.0).unwrap();
        assert!(t.singularities(-20.0, 20.0).is_empty());
    }
}
