//! Numerical checks of closed-form solutions against their equations and
//! against independent integration.

mod integrator;
mod period;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::factorize::LienardEquation;
use crate::models::{self, wilson_limit_cycle_residual, wilson_limit_cycle_scale, ModelError};
use crate::polyalg::rat_from_f64;
use crate::waveforms::{
    cubic_waveform, sto_printed_waveform, sto_waveform, ClosedFormWaveform, Singularity, StoPrintedForm,
    WaveformError,
};

pub use integrator::{
    fixed_step, integrate, integrate_sampled, lienard_rhs, solve_at, IntegrateError, IntegratorOptions, TimeSeries,
};
pub use period::{
    detect_period, detect_period_series, period_from_events, series_events, waveform_events, Event, EventKind,
};

/// Pass/fail bounds used by reports and the command line.
pub mod thresholds {
    /// `|x'' + G x' + F| / (1 + |F|)`.
    pub const ODE_RESIDUAL: f64 = 1e-9;
    /// Closed form against integration, absolute.
    pub const NUMERIC_MATCH: f64 = 1e-7;
    pub const PERIOD_REL: f64 = 1e-6;
    pub const SYMMETRY: f64 = 1e-12;
    pub const LIMIT_CYCLE: f64 = 1e-4;
    pub const RICCATI: f64 = 1e-12;
    /// Quadrature waveform against a special closed form.
    pub const AGREEMENT: f64 = 1e-10;
    /// A waveform with a perturbed equation parameter must fail by at least this.
    pub const PERTURBED_MIN: f64 = 1e-4;
    /// Integrator tolerance used for numeric matching.
    pub const MATCH_TOL: f64 = 1e-11;
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("every grid point fell in a singular window")]
    EmptyGrid,
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error(transparent)]
    Waveform(#[from] WaveformError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0}")]
    Domain(String),
}

/// `n` uniform points on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max: f64,
    pub evaluated: usize,
    pub skipped: usize,
    pub singularities: Vec<Singularity>,
}

/// Max of `|x'' + G(x) x' + F(x)| / (1 + |F(x)|)` over the evaluable grid points.
pub fn ode_residual(eq: &LienardEquation, w: &ClosedFormWaveform, grid: &[f64]) -> Result<ResidualReport, VerifyError> {
    let (lo, hi) = grid
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    if grid.is_empty() {
        return Err(VerifyError::EmptyGrid);
    }
    let singularities = if hi > lo { w.singularities(lo, hi) } else { Vec::new() };
    let margin = 1e-6 * (hi - lo).max(1.0);
    let mut max: f64 = 0.0;
    let (mut evaluated, mut skipped) = (0, 0);
    for &t in grid {
        if ClosedFormWaveform::near_singularity(&singularities, t, margin) {
            skipped += 1;
            continue;
        }
        match w.state(t) {
            Ok(s) => {
                let f = eq.restoring(s.x);
                let r = eq.residual(s.x, s.xdot, s.xddot).abs() / (1.0 + f.abs());
                max = max.max(if r.is_nan() { f64::INFINITY } else { r });
                evaluated += 1;
            }
            Err(_) => skipped += 1,
        }
    }
    if evaluated == 0 {
        return Err(VerifyError::EmptyGrid);
    }
    Ok(ResidualReport {
        max,
        evaluated,
        skipped,
        singularities,
    })
}

/// The first pole-free stretch of `t_span`: from its start (or, when the start
/// is inside a negative-radicand window, a little past that window) to just
/// before the next singularity.
pub fn regular_span(w: &ClosedFormWaveform, t_span: (f64, f64)) -> (f64, f64) {
    let (mut a, b) = t_span;
    if b <= a {
        return t_span;
    }
    let sing = w.singularities(a, b);
    let mut rest = sing.iter().peekable();
    if let Some(s) = rest.peek() {
        let (lo, hi) = s.span();
        if lo <= a && hi > a && hi < b {
            a = hi + 0.1 * (b - hi);
            rest.next();
        }
    }
    if w.state(a).is_err() {
        // Pole at the start itself: begin a tenth of the way to the next one.
        let next = rest.peek().map_or(b, |s| s.span().0.min(b));
        a += 0.1 * (next - a);
    }
    match rest.find(|s| s.span().0 > a) {
        Some(s) => {
            let ts = s.span().0;
            (a, ts - 0.1 * (ts - a))
        }
        None => (a, b),
    }
}

/// Integrates `eq` from the closed form's state at `t_span.0` and returns the
/// largest deviation `|x_numeric - x(t)|` on 1001 samples of the regular part
/// of the span.
pub fn match_numeric(eq: &LienardEquation, w: &ClosedFormWaveform, t_span: (f64, f64), tol: f64) -> Result<f64, VerifyError> {
    let (a, b) = regular_span(w, t_span);
    let s0 = w.state(a)?;
    let ts = integrate_sampled(eq, s0.x, s0.xdot, (a, b), 1001, &IntegratorOptions::with_tol(tol))?;
    let mut worst: f64 = 0.0;
    for (t, x) in ts.t.iter().zip(&ts.x) {
        if let Ok(exact) = w.eval(*t) {
            worst = worst.max((x - exact).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    /// Set when the check was not run.
    pub skipped: Option<String>,
    /// Max over the grid of each defect, scaled by `1 + |x(t)|`.
    pub defects: BTreeMap<String, f64>,
}

pub const SYMMETRY_ODD: &str = "x(t;A,k) + x(-t;A,k)";
pub const SYMMETRY_K_FLIP: &str = "x(t;A,k) - x(-t;A,-k)";
pub const SYMMETRY_A_FLIP: &str = "x(t;A,k) + x(-t;-A,k)";

/// Time-reversal identities of the cubic-oscillator solution at `δ = 0`.
pub fn symmetry_check(k: f64, omega: f64, a_const: f64, delta: f64) -> Result<SymmetryReport, VerifyError> {
    if delta != 0.0 {
        return Ok(SymmetryReport {
            skipped: Some("identities are stated for delta = 0".into()),
            defects: BTreeMap::new(),
        });
    }
    let base = cubic_waveform(k, omega, a_const, 0.0)?;
    let k_flip = cubic_waveform(-k, omega, a_const, 0.0)?;
    let a_flip = cubic_waveform(k, omega, -a_const, 0.0)?;
    let period = 2.0 * std::f64::consts::PI / omega.abs();
    let mut odd: f64 = 0.0;
    let mut kf: f64 = 0.0;
    let mut af: f64 = 0.0;
    for t in uniform_grid(-period, period, 1000) {
        let (Ok(x), Ok(xm)) = (base.eval(t), base.eval(-t)) else { continue };
        let scale = 1.0 + x.abs();
        odd = odd.max((x + xm).abs() / scale);
        if let Ok(y) = k_flip.eval(-t) {
            kf = kf.max((x - y).abs() / scale);
        }
        if let Ok(y) = a_flip.eval(-t) {
            af = af.max((x + y).abs() / scale);
        }
    }
    let defects = BTreeMap::from([
        (SYMMETRY_ODD.to_string(), odd),
        (SYMMETRY_K_FLIP.to_string(), kf),
        (SYMMETRY_A_FLIP.to_string(), af),
    ]);
    Ok(SymmetryReport { skipped: None, defects })
}

fn wilson_f64(mu: f64) -> Result<LienardEquation, VerifyError> {
    let m = rat_from_f64(mu).ok_or_else(|| VerifyError::Domain("mu must be finite".into()))?;
    Ok(models::wilson_equation(&m)?)
}

/// Normalized limit-cycle residual `|P(x, y)| / (1 + Σ|terms|)`.
pub fn normalized_cycle_residual(mu: f64, x: f64, y: f64) -> f64 {
    wilson_limit_cycle_residual(mu, x, y).abs() / (1.0 + wilson_limit_cycle_scale(mu, x, y))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitCycleOutcome {
    /// Max normalized curve residual over the final loop.
    pub residual: f64,
    /// Duration of the final loop.
    pub loop_time: f64,
}

/// Integrates the Wilson equation past `settle_time` and measures the distance of
/// the final loop (between the last two upward zero crossings) from the
/// algebraic limit cycle.
pub fn limit_cycle_convergence(mu: f64, x0: f64, v0: f64, settle_time: f64) -> Result<LimitCycleOutcome, VerifyError> {
    if !(mu != 0.0 && mu.abs() < 2.0) {
        return Err(VerifyError::Domain("need 0 < |mu| < 2".into()));
    }
    let eq = wilson_f64(mu)?;
    let period = 2.0 * std::f64::consts::PI / (1.0 - mu * mu / 4.0).sqrt();
    let times = uniform_grid(settle_time, settle_time + 3.0 * period, 6001);
    let opts = IntegratorOptions::with_tol(1e-12);
    let states = solve_at(&lienard_rhs(&eq), 0.0, [x0, v0], &times, &opts)?;
    let ups: Vec<usize> = (1..states.len())
        .filter(|&i| states[i - 1][0] < 0.0 && states[i][0] >= 0.0)
        .collect();
    let (lo, hi) = match ups[..] {
        [.., a, b] => (a, b),
        _ => (0, states.len() - 1),
    };
    let residual = states[lo..=hi]
        .iter()
        .map(|s| normalized_cycle_residual(mu, s[0], s[1]))
        .fold(0.0, f64::max);
    Ok(LimitCycleOutcome {
        residual,
        loop_time: times[hi] - times[lo],
    })
}

/// Max normalized limit-cycle residual along one nominal period of a waveform.
pub fn orbit_curve_residual(mu: f64, w: &ClosedFormWaveform) -> Result<f64, VerifyError> {
    let period = w
        .nominal_period()
        .ok_or_else(|| VerifyError::Domain("waveform has no nominal period".into()))?;
    let mut worst: f64 = 0.0;
    for t in uniform_grid(0.0, period, 2000) {
        let s = w.state(t)?;
        worst = worst.max(normalized_cycle_residual(mu, s.x, s.xdot));
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoVariant {
    /// Bernoulli coefficient `3ε/2 + c~ tan(c~z+δ)`.
    Theorem,
    /// The explicit published per-`b` formulas.
    PrintedExplicit,
    /// The published formula covering every `b`.
    PrintedUnified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoArbitration {
    pub b: u8,
    /// ODE residual of each candidate over three oscillations.
    pub residuals: Vec<(StoVariant, f64)>,
    /// The unique candidate among `{Theorem, PrintedExplicit}` passing, if exactly one does.
    pub winner: Option<StoVariant>,
}

impl StoArbitration {
    pub fn passing(&self) -> Vec<StoVariant> {
        self.residuals
            .iter()
            .filter(|(_, r)| *r <= thresholds::ODE_RESIDUAL)
            .map(|(v, _)| *v)
            .collect()
    }
}

/// Residual of each traveling-wave candidate against the shifted equation.
pub fn sto_arbitration(alpha: f64, v: f64, b: u8, a_const: f64, delta: f64) -> Result<StoArbitration, VerifyError> {
    let eps = (1.0 - b as f64) * (v / alpha).sqrt();
    let to_rat = |x: f64| rat_from_f64(x).ok_or_else(|| VerifyError::Domain("non-finite STO parameter".into()));
    let eq = models::sto_equation(&to_rat(alpha)?, &to_rat(v)?, &to_rat(eps)?)?;
    let theorem = sto_waveform(alpha, v, b, a_const, delta)?;
    let explicit = sto_printed_waveform(alpha, v, b, StoPrintedForm::Explicit, a_const, delta)?;
    let unified = sto_printed_waveform(alpha, v, b, StoPrintedForm::Unified, a_const, delta)?;
    let c_tilde = (0.75 * eps * eps + v / alpha).sqrt();
    let grid = uniform_grid(0.0, 3.0 * 2.0 * std::f64::consts::PI / c_tilde, 1000);
    let mut residuals = Vec::new();
    for (variant, w) in [
        (StoVariant::Theorem, &theorem),
        (StoVariant::PrintedExplicit, &explicit),
        (StoVariant::PrintedUnified, &unified),
    ] {
        let r = ode_residual(&eq, w, &grid).map(|r| r.max).unwrap_or(f64::INFINITY);
        residuals.push((variant, r));
    }
    let pass = |v: StoVariant| residuals.iter().any(|(x, r)| *x == v && *r <= thresholds::ODE_RESIDUAL);
    let winner = match (pass(StoVariant::Theorem), pass(StoVariant::PrintedExplicit)) {
        (true, false) => Some(StoVariant::Theorem),
        (false, true) => Some(StoVariant::PrintedExplicit),
        _ => None,
    };
    Ok(StoArbitration { b, residuals, winner })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub max_ode_residual: f64,
    pub max_waveform_mismatch: Option<f64>,
    pub detected_period: Option<f64>,
    pub nominal_period: Option<f64>,
    pub symmetry_defects: BTreeMap<String, f64>,
    pub limit_cycle_residual: Option<f64>,
    pub singular_windows_skipped: Vec<Singularity>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Threshold violations, empty when everything passes.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.max_ode_residual <= thresholds::ODE_RESIDUAL) {
            out.push(format!("ode residual {:e} > {:e}", self.max_ode_residual, thresholds::ODE_RESIDUAL));
        }
        if let Some(m) = self.max_waveform_mismatch {
            if !(m <= thresholds::NUMERIC_MATCH) {
                out.push(format!("numeric mismatch {m:e} > {:e}", thresholds::NUMERIC_MATCH));
            }
        }
        if let (Some(p), Some(n)) = (self.detected_period, self.nominal_period) {
            if !((p - n).abs() <= thresholds::PERIOD_REL * n) {
                out.push(format!("period {p} differs from {n}"));
            }
        }
        if let Some(c) = self.limit_cycle_residual {
            if !(c <= thresholds::LIMIT_CYCLE) {
                out.push(format!("limit cycle residual {c:e} > {:e}", thresholds::LIMIT_CYCLE));
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "max_ode_residual: {:e}", self.max_ode_residual)?;
        match self.max_waveform_mismatch {
            Some(m) => writeln!(f, "max_waveform_mismatch: {m:e}")?,
            None => writeln!(f, "max_waveform_mismatch: n/a")?,
        }
        match self.detected_period {
            Some(p) => writeln!(f, "detected_period: {p:.12}")?,
            None => writeln!(f, "detected_period: none")?,
        }
        if let Some(p) = self.nominal_period {
            writeln!(f, "nominal_period: {p:.12}")?;
        }
        for (k, v) in &self.symmetry_defects {
            writeln!(f, "symmetry[{k}]: {v:e}")?;
        }
        if let Some(c) = self.limit_cycle_residual {
            writeln!(f, "limit_cycle_residual: {c:e}")?;
        }
        writeln!(f, "singular_windows_skipped: {}", self.singular_windows_skipped.len())?;
        for s in &self.singular_windows_skipped {
            match s {
                Singularity::Pole(t) => writeln!(f, "  pole {t:.12}")?,
                Singularity::NegativeRadicand(a, b) => writeln!(f, "  negative radicand [{a:.12}, {b:.12}]")?,
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        let failures = self.failures();
        if failures.is_empty() {
            write!(f, "status: pass")
        } else {
            write!(f, "status: FAIL ({})", failures.join("; "))
        }
    }
}

/// Residual on 1000 points, numeric match and period detection over `window`.
pub fn verify_waveform(
    eq: &LienardEquation,
    w: &ClosedFormWaveform,
    window: (f64, f64),
) -> Result<VerificationReport, VerifyError> {
    verify_waveform_spans(eq, w, window, window)
}

/// As [`verify_waveform`], with the numeric comparison run over `match_window`.
pub fn verify_waveform_spans(
    eq: &LienardEquation,
    w: &ClosedFormWaveform,
    window: (f64, f64),
    match_window: (f64, f64),
) -> Result<VerificationReport, VerifyError> {
    let grid = uniform_grid(window.0, window.1, 1000);
    let res = ode_residual(eq, w, &grid)?;
    let mut report = VerificationReport {
        max_ode_residual: res.max,
        nominal_period: w.nominal_period(),
        singular_windows_skipped: res.singularities,
        ..Default::default()
    };
    match match_numeric(eq, w, match_window, thresholds::MATCH_TOL) {
        Ok(m) => report.max_waveform_mismatch = Some(m),
        Err(e) => report.notes.push(format!("numeric match not run: {e}")),
    }
    if w.nominal_period().is_some() {
        report.detected_period = detect_period(w, window);
        if report.detected_period.is_none() {
            report.notes.push("no repeating event pattern in window".into());
        }
    }
    Ok(report)
}
