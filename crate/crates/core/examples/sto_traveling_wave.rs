//! Traveling waves of the spin-torque oscillator reduction. Each real root eps
//! of the cubic gives one Liénard equation; b picks the branch.

use lienard::models::{sto_c_tilde_squared, sto_reduce, sto_special_i};
use lienard::polyalg::{rat, rat_to_f64};
use lienard::verify::{ode_residual, sto_arbitration, uniform_grid};
use lienard::waveforms::sto_waveform;

fn main() {
    let (alpha, v) = (rat(1, 5), rat(1, 1));
    let red = sto_reduce(&rat(1, 1), &rat(1, 1), &rat(-2, 1)).unwrap();
    println!("Delta_3 = {}, complex pair: {}", red.discriminant3, red.complex_pair);
    for b in &red.branches {
        println!("eps = {}: G = {}, F = {}", b.epsilon, b.equation.g(), b.equation.f());
    }

    let (a, vf) = (rat_to_f64(&alpha), rat_to_f64(&v));
    for b in 0..3u8 {
        println!("\nb = {b}: I = {:.6}, c~^2 = {}", sto_special_i(a, vf, b), sto_c_tilde_squared(&alpha, &v, b));
        let w = sto_waveform(a, vf, b, 1.0, 0.0).unwrap();
        let eps = (1.0 - b as f64) * (vf / a).sqrt();
        let eq = lienard::models::sto_equation(&alpha, &v, &lienard::polyalg::rat_from_f64(eps).unwrap()).unwrap();
        let (t0, t1) = w.window();
        let res = ode_residual(&eq, &w, &uniform_grid(t0, t1, 500)).unwrap();
        println!("{w}: residual {:.2e}, period {:?}", res.max, w.nominal_period());
        let arb = sto_arbitration(a, vf, b, 1.0, 0.0).unwrap();
        for (variant, r) in &arb.residuals {
            println!("  {variant:?}: {r:.2e}");
        }
    }
}
