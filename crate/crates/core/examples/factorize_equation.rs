//! Factorize x'' + G(x) x' + F(x) = 0 given on the command line as ascending
//! coefficient lists, e.g. `cargo run --example factorize_equation -- 0,15/2 0,9,0,25/4`.

use lienard::factorize::{commutative_factorize, verify_factorization_identity, LienardEquation};
use lienard::models::linearizability;
use lienard::polyalg::Polynomial;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (g, f) = match &args[..] {
        [g, f] => (g.as_str(), f.as_str()),
        _ => ("0,15/2", "0,9,0,25/4"),
    };
    let g: Polynomial = g.parse().expect("G");
    let f: Polynomial = f.parse().expect("F");
    let eq = LienardEquation::new(g, f).expect("F(0) must vanish");
    println!("x'' + ({}) x' + ({}) = 0", eq.g(), eq.f());

    match commutative_factorize(&eq) {
        Ok(fact) => {
            println!("phi = {} ± c,  c^2 = {}  ({})", fact.p, fact.c_squared, fact.regime.name());
            println!("identity holds exactly: {}", verify_factorization_identity(&eq, &fact));
            if let Some(m) = fact.monomial {
                println!("monomial: q={} A={} B={} C={} Delta={}", m.q, m.a, m.b, m.c, m.delta);
            }
            let lin = linearizability(&eq);
            println!("chiellini: {:?}", lin.chiellini);
            println!("sundman:   {:?}", lin.sundman);
        }
        Err(e) => println!("{e}"),
    }
}
