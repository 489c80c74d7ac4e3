//! Kink solutions of the Sundman-linearizable members (B = 1, q = 1, 2).
//! The published q = 2 formula is printed next to the one obtained from the
//! quadrature; only the latter solves the equation.

use lienard::models::{sundman_check, theorem_equation};
use lienard::polyalg::{rat, rat_int};
use lienard::verify::{ode_residual, uniform_grid};
use lienard::waveforms::{sundman_waveform_q1, sundman_waveform_q2, sundman_waveform_q2_theorem};

fn main() {
    let grid = uniform_grid(-10.0, 10.0, 801);
    let eq1 = theorem_equation(&rat_int(-1), &rat_int(1), &rat(2, 9), 1).unwrap();
    let eq2 = theorem_equation(&rat_int(-1), &rat_int(1), &rat(3, 16), 2).unwrap();
    println!("q=1 linearization: {:?}", sundman_check(&rat_int(-1), &rat_int(1), &rat(2, 9), 1));
    println!("q=2 linearization: {:?}", sundman_check(&rat_int(-1), &rat_int(1), &rat(3, 16), 2));

    let q1 = sundman_waveform_q1(-1.0, 1.0, 0.0).unwrap();
    let q2 = sundman_waveform_q2_theorem(-1.0, 1.0, 0.0).unwrap();
    let printed = sundman_waveform_q2(-1.0, 1.0, 0.0).unwrap();
    for (w, eq) in [(&q1, &eq1), (&q2, &eq2), (&printed, &eq2)] {
        println!("{w}: residual {:.2e}", ode_residual(eq, w, &grid).unwrap().max);
    }
    for t in [-10.0, -2.0, 0.0, 2.0, 10.0] {
        println!("t = {t:>5}: q1 {:.6}  q2 {:.6}", q1.eval(t).unwrap(), q2.eval(t).unwrap());
    }
}
