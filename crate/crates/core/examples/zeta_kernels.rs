//! The three Riccati kernels zeta' + 2c zeta = -zeta^2 and their residuals.

use lienard::waveforms::Zeta;

fn main() {
    let kernels = [
        Zeta::Rational { t0: -1.0 },
        Zeta::Hyperbolic { c: 0.75, delta: 0.2 },
        Zeta::Trigonometric { c_tilde: 1.5, delta: 0.0 },
    ];
    for z in kernels {
        let worst = (0..200)
            .map(|i| i as f64 * 0.005)
            .filter_map(|t| z.riccati_residual(t).ok())
            .fold(0.0, f64::max);
        println!("{z:?}: c = {}, zeta(0.5) = {:.6}, max residual {worst:.2e}", z.split_constant(), z.eval(0.5).unwrap());
    }
    // The tangent kernel has a pole where c~ t + delta = pi/2.
    let z = Zeta::Trigonometric { c_tilde: 1.0, delta: 0.0 };
    println!("at pi/2: {:?}", z.eval(std::f64::consts::FRAC_PI_2));
}
