//! The cubic oscillator x'' + 3k x x' + k^2 x^3 + w^2 x = 0: closed form,
//! residual, numeric match and period for a regular and a singular solution.

use lienard::models::cubic_oscillator;
use lienard::polyalg::rat_from_f64;
use lienard::verify::verify_waveform;
use lienard::waveforms::cubic_waveform;

fn main() {
    let (k, omega) = (2.5, 3.0);
    let eq = cubic_oscillator(&rat_from_f64(k).unwrap(), &rat_from_f64(omega).unwrap()).unwrap();
    for a in [1.0, 0.0] {
        let w = cubic_waveform(k, omega, a, 0.0).unwrap();
        println!("== {w}");
        for t in [0.1, 0.5, 1.0] {
            let s = w.state(t).unwrap();
            println!("x({t}) = {:+.12}   x'({t}) = {:+.12}", s.x, s.xdot);
        }
        println!("{}\n", verify_waveform(&eq, &w, w.window()).unwrap());
    }
}
