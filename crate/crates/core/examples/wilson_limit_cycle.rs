//! x'' + mu (x^2 - 1) x' + (mu^2/16) x^3 (x^2 - 4) + x = 0 has an algebraic
//! limit cycle. Integrate from a few starting points and watch the distance to
//! it shrink.

use lienard::models::wilson_equation;
use lienard::polyalg::rat;
use lienard::verify::{limit_cycle_convergence, normalized_cycle_residual, orbit_curve_residual};
use lienard::waveforms::{wilson_waveform, Branch};

fn main() {
    let mu = 1.0;
    let eq = wilson_equation(&rat(1, 1)).unwrap();
    println!("G(x) = {}, F(x) = {}", eq.g(), eq.f());

    for (x0, v0) in [(0.5, 0.0), (3.0, 0.0), (0.0, 4.0)] {
        println!("start ({x0}, {v0}): residual {:.3e}", normalized_cycle_residual(mu, x0, v0));
        for settle in [5.0, 20.0, 60.0] {
            let out = limit_cycle_convergence(mu, x0, v0, settle).unwrap();
            println!("  after t = {settle:>4}: {:.3e} (loop {:.6})", out.residual, out.loop_time);
        }
    }

    let w = wilson_waveform(mu, 0.0, 0.0, Branch::Plus).unwrap();
    println!("closed-form A=0 orbit: curve residual {:.3e}", orbit_curve_residual(mu, &w).unwrap());
}
