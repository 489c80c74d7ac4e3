//! Adaptive Gauss–Kronrod (7/15) quadrature and a cumulative integral with a
//! knot cache.
//!
//! The cache stores the integral at fixed knots `j * h`. A knot's value is
//! computed from its neighbour toward the origin, so every stored number is a
//! function of the knot index alone and cached evaluations are independent of
//! call order.

use std::sync::RwLock;

use super::WaveformError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 40;

/// One 15-point Kronrod panel: (integral, error estimate, integral of |f|).
fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.abs() * WGK[7];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let (f1, f2) = (f(center - dx), f(center + dx));
        kronrod += w * (f1 + f2);
        abs += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs(), abs * half.abs())
}

/// Integral of `f` over `[a, b]` with per-panel error below `abs_tol` or
/// `rel_tol` times the panel's absolute mass.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64, WaveformError> {
    if a == b {
        return Ok(0.0);
    }
    recurse(f, a, b, abs_tol, rel_tol, 0)
}

fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, depth: u32) -> Result<f64, WaveformError> {
    let (value, err, mass) = kronrod_panel(f, a, b);
    if !value.is_finite() {
        return Err(WaveformError::QuadratureFailure { a, b });
    }
    if err <= abs_tol.max(rel_tol * mass) {
        return Ok(value);
    }
    if depth >= MAX_DEPTH {
        return Err(WaveformError::QuadratureFailure { a, b });
    }
    let mid = 0.5 * (a + b);
    Ok(recurse(f, a, mid, 0.5 * abs_tol, rel_tol, depth + 1)? + recurse(f, mid, b, 0.5 * abs_tol, rel_tol, depth + 1)?)
}

/// `t -> ∫_0^t f` with cached values at the knots `j * spacing`.
#[derive(Debug)]
pub struct CumulativeIntegral {
    spacing: f64,
    abs_tol: f64,
    rel_tol: f64,
    forward: RwLock<Vec<f64>>,
    backward: RwLock<Vec<f64>>,
}

impl Clone for CumulativeIntegral {
    fn clone(&self) -> Self {
        Self {
            spacing: self.spacing,
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            forward: RwLock::new(self.forward.read().expect("cache lock").clone()),
            backward: RwLock::new(self.backward.read().expect("cache lock").clone()),
        }
    }
}

impl CumulativeIntegral {
    pub fn new(spacing: f64) -> Self {
        Self {
            spacing,
            abs_tol: 1e-13,
            rel_tol: 1e-14,
            forward: RwLock::new(vec![0.0]),
            backward: RwLock::new(vec![0.0]),
        }
    }

    fn knot_value<F: Fn(f64) -> f64>(&self, f: &F, index: usize, forward: bool) -> Result<f64, WaveformError> {
        let cache = if forward { &self.forward } else { &self.backward };
        if let Some(&v) = cache.read().expect("cache lock").get(index) {
            return Ok(v);
        }
        let mut knots = cache.write().expect("cache lock");
        let dir = if forward { 1.0 } else { -1.0 };
        while knots.len() <= index {
            let j = knots.len();
            let a = dir * (j - 1) as f64 * self.spacing;
            let b = dir * j as f64 * self.spacing;
            let step = integrate(f, a, b, self.abs_tol, self.rel_tol)?;
            let prev = knots[j - 1];
            knots.push(prev + step);
        }
        Ok(knots[index])
    }

    pub fn value<F: Fn(f64) -> f64>(&self, f: &F, t: f64) -> Result<f64, WaveformError> {
        let forward = t >= 0.0;
        let index = (t.abs() / self.spacing).floor() as usize;
        let knot_t = if forward { 1.0 } else { -1.0 } * index as f64 * self.spacing;
        let base = self.knot_value(f, index, forward)?;
        Ok(base + integrate(f, knot_t, t, self.abs_tol, self.rel_tol)?)
    }
}
