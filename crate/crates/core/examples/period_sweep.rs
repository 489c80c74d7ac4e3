//! Detected period of the Wilson closed form against 2 pi / sqrt(1 - mu^2/4),
//! computed in parallel.

use lienard::verify::detect_period;
use lienard::waveforms::{wilson_waveform, Branch};
use rayon::prelude::*;

fn main() {
    let mus: Vec<f64> = (1..20).map(|i| i as f64 * 0.1).collect();
    let rows: Vec<(f64, Option<f64>, f64)> = mus
        .par_iter()
        .map(|&mu| {
            let w = wilson_waveform(mu, 0.0, 0.0, Branch::Plus).unwrap();
            let expect = 2.0 * std::f64::consts::PI / (1.0 - mu * mu / 4.0).sqrt();
            (mu, detect_period(&w, w.window()), expect)
        })
        .collect();
    println!("mu,detected,expected");
    for (mu, got, expect) in rows {
        println!("{mu:.1},{},{expect:.9}", got.map_or("none".into(), |p| format!("{p:.9}")));
    }
}
