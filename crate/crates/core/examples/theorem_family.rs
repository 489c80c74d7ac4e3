//! The family x'' + ((q+2) A x^q + B) x' + A x^{q+1} (A x^q + B) + C x = 0 in
//! each regime, solved through the Bernoulli quadrature.

use lienard::factorize::commutative_factorize;
use lienard::models::theorem_equation;
use lienard::polyalg::rat;
use lienard::verify::{ode_residual, uniform_grid};
use lienard::waveforms::{general_waveform, Branch};

fn main() {
    let cases = [
        ("hyperbolic", rat(-1, 1), rat(1, 1), rat(2, 9), 1),
        ("rational", rat(1, 1), rat(2, 1), rat(1, 1), 1),
        ("trigonometric", rat(1, 2), rat(-1, 3), rat(2, 1), 3),
        ("trigonometric, even q", rat(1, 4), rat(-1, 1), rat(1, 1), 2),
    ];
    for (name, a, b, c, q) in cases {
        let eq = theorem_equation(&a, &b, &c, q).unwrap();
        let m = commutative_factorize(&eq).unwrap().monomial.unwrap();
        let w = general_waveform(&m, Branch::Plus, 1.0, 0.0).unwrap();
        let (t0, t1) = w.window();
        let r = ode_residual(&eq, &w, &uniform_grid(t0, t1, 400)).unwrap();
        println!("{name:<22} q={q} Delta={:<6} residual {:.2e}  x(1) = {:?}", m.delta, r.max, w.eval(1.0).ok());
    }
}
