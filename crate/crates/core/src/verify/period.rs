//! Period detection from the pattern of zeros and poles.
//!
//! Events are located by sign changes on a fine grid and polished by
//! bisection. The period is the smallest event-index shift `m` after which the
//! event kind and direction repeat with a constant time spacing; this covers
//! regular oscillations (zeros only), cotangent shapes (zero, pole, zero, ...)
//! and singular periodic solutions, whose poles sit asymmetrically in a period.

use crate::waveforms::ClosedFormWaveform;

use super::integrator::TimeSeries;
use super::thresholds::PERIOD_REL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Zero,
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    /// `true` when `x` goes from negative to positive.
    pub rising: bool,
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Zeros and poles of a closed-form waveform in `[t0, t1]`, ordered in time.
pub fn waveform_events(w: &ClosedFormWaveform, t0: f64, t1: f64, samples: usize) -> Vec<Event> {
    let num = |t: f64| w.quotient(t).map(|q| q.numerator.v).unwrap_or(f64::NAN);
    let den = |t: f64| w.quotient(t).map(|q| q.denominator.v).unwrap_or(f64::NAN);
    let root = w.quotient(t0).map(|q| q.root).unwrap_or(1);
    let h = (t1 - t0) / samples as f64;
    let grid: Vec<(f64, f64, f64)> = (0..=samples)
        .map(|i| {
            let t = t0 + h * i as f64;
            (t, num(t), den(t))
        })
        .collect();
    let sign_of_x = |n: f64, d: f64| {
        if root % 2 == 1 {
            (n * d).signum()
        } else {
            n.signum()
        }
    };
    let mut events = Vec::new();
    for win in grid.windows(2) {
        let ((ta, na, da), (tb, nb, db)) = (win[0], win[1]);
        if !(na.is_finite() && nb.is_finite() && da.is_finite() && db.is_finite()) {
            continue;
        }
        if root % 2 == 0 && (da < 0.0 || db < 0.0) {
            continue;
        }
        let rising = sign_of_x(nb, db) > sign_of_x(na, da);
        if na != 0.0 && (na > 0.0) != (nb > 0.0) {
            events.push(Event {
                t: bisect(num, ta, tb),
                kind: EventKind::Zero,
                rising,
            });
        }
        if root % 2 == 1 && da != 0.0 && (da > 0.0) != (db > 0.0) {
            events.push(Event {
                t: bisect(den, ta, tb),
                kind: EventKind::Pole,
                rising,
            });
        }
    }
    events.sort_by(|a, b| a.t.total_cmp(&b.t));
    events
}

/// Zero crossings of a sampled trajectory, refined on the cubic Hermite interpolant.
pub fn series_events(ts: &TimeSeries) -> Vec<Event> {
    let mut events = Vec::new();
    for i in 1..ts.len() {
        let (t0, t1) = (ts.t[i - 1], ts.t[i]);
        let (x0, x1) = (ts.x[i - 1], ts.x[i]);
        if x0 == 0.0 || (x0 > 0.0) == (x1 > 0.0) {
            continue;
        }
        let h = t1 - t0;
        let (m0, m1) = (ts.xdot[i - 1] * h, ts.xdot[i] * h);
        let hermite = |t: f64| {
            let s = (t - t0) / h;
            let s2 = s * s;
            let s3 = s2 * s;
            (2.0 * s3 - 3.0 * s2 + 1.0) * x0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * x1 + (s3 - s2) * m1
        };
        events.push(Event {
            t: bisect(hermite, t0, t1),
            kind: EventKind::Zero,
            rising: x1 > x0,
        });
    }
    events
}

/// Smallest repeating shift of the event pattern with spacing constant to `rel_tol`.
pub fn period_from_events(events: &[Event], rel_tol: f64) -> Option<f64> {
    let n = events.len();
    for m in 1..n {
        if n - m < 2 {
            break;
        }
        let same_pattern =
            (0..n - m).all(|i| events[i].kind == events[i + m].kind && events[i].rising == events[i + m].rising);
        if !same_pattern {
            continue;
        }
        let spacings: Vec<f64> = (0..n - m).map(|i| events[i + m].t - events[i].t).collect();
        let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
        if mean > 0.0 && spacings.iter().all(|s| (s - mean).abs() <= rel_tol * mean) {
            return Some(mean);
        }
    }
    None
}

/// Period of a closed form over `window`; `None` when the events do not repeat.
pub fn detect_period(w: &ClosedFormWaveform, window: (f64, f64)) -> Option<f64> {
    let samples = (((window.1 - window.0) * 400.0).ceil() as usize).clamp(4000, 400_000);
    let events = waveform_events(w, window.0, window.1, samples);
    if events.len() < 3 {
        return None;
    }
    period_from_events(&events, PERIOD_REL)
}

/// Period of a sampled trajectory from its zero crossings.
pub fn detect_period_series(ts: &TimeSeries, rel_tol: f64) -> Option<f64> {
    let events = series_events(ts);
    if events.len() < 3 {
        return None;
    }
    period_from_events(&events, rel_tol)
}
