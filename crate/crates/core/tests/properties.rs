//! Perturbing any equation parameter of a closed form by ±1% must break the
//! residual against the unperturbed equation.

use lienard::models;
use lienard::polyalg::rat_from_f64;
use lienard::verify::{ode_residual, thresholds, uniform_grid};
use lienard::waveforms::{cubic_waveform, sto_waveform, wilson_waveform, Branch, ClosedFormWaveform};
use lienard::factorize::LienardEquation;
use proptest::prelude::*;

fn residual(eq: &LienardEquation, w: &ClosedFormWaveform) -> f64 {
    let (a, b) = w.window();
    ode_residual(eq, w, &uniform_grid(a, b, 1000)).unwrap().max
}

fn sign() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.01), Just(0.99)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cubic_parameters(k in 0.5f64..4.0, omega in 0.5f64..4.0, a in 0.2f64..2.0, s in sign(), which in 0usize..2) {
        let eq = models::cubic_oscillator(&rat_from_f64(k).unwrap(), &rat_from_f64(omega).unwrap()).unwrap();
        prop_assert!(residual(&eq, &cubic_waveform(k, omega, a, 0.0).unwrap()) <= thresholds::ODE_RESIDUAL);
        let (k2, w2) = if which == 0 { (k * s, omega) } else { (k, omega * s) };
        let bad = cubic_waveform(k2, w2, a, 0.0).unwrap();
        prop_assert!(residual(&eq, &bad) >= thresholds::PERTURBED_MIN);
    }

    #[test]
    fn wilson_mu(mu in 0.2f64..1.8, a in -0.5f64..1.0, s in sign()) {
        let eq = models::wilson_equation(&rat_from_f64(mu).unwrap()).unwrap();
        let bad = wilson_waveform(mu * s, a.max(0.0), 0.0, Branch::Plus).unwrap();
        prop_assert!(residual(&eq, &bad) >= thresholds::PERTURBED_MIN);
    }

    #[test]
    fn sto_alpha_and_v(alpha in 0.1f64..2.0, v in 0.2f64..2.0, b in 0u8..3, s in sign(), which in 0usize..2) {
        let eps = (1.0 - b as f64) * (v / alpha).sqrt();
        let r = |x: f64| rat_from_f64(x).unwrap();
        let eq = models::sto_equation(&r(alpha), &r(v), &r(eps)).unwrap();
        prop_assert!(residual(&eq, &sto_waveform(alpha, v, b, 1.0, 0.0).unwrap()) <= thresholds::ODE_RESIDUAL);
        let (a2, v2) = if which == 0 { (alpha * s, v) } else { (alpha, v * s) };
        let bad = sto_waveform(a2, v2, b, 1.0, 0.0).unwrap();
        prop_assert!(residual(&eq, &bad) >= thresholds::PERTURBED_MIN);
    }
}
