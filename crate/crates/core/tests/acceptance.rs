//! Acceptance criteria, one test per criterion (split where a criterion has
//! independent halves). Each prints a single `criterion N ...: PASS|FAIL` line;
//! run with `--nocapture` to see them.

use std::f64::consts::PI;

use lienard::factorize::{commutative_factorize, verify_factorization_identity, Regime};
use lienard::models::{self, chiellini_check, sundman_check, SundmanCase};
use lienard::polyalg::{rat, rat_int, Polynomial, Rational};
use lienard::verify::{
    self, detect_period, limit_cycle_convergence, match_numeric, ode_residual, orbit_curve_residual, sto_arbitration,
    symmetry_check, thresholds, uniform_grid, StoVariant, SYMMETRY_A_FLIP, SYMMETRY_K_FLIP, SYMMETRY_ODD,
};
use lienard::waveforms::{
    cubic_waveform, general_waveform, sto_waveform, sundman_waveform_q1, sundman_waveform_q2,
    sundman_waveform_q2_theorem, wilson_waveform, Branch, ClosedFormWaveform, Zeta,
};
use lienard::factorize::LienardEquation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: &str, name: &str, pass: bool, detail: impl AsRef<str>) {
    println!(
        "criterion {id} [{name}]: {} ({})",
        if pass { "PASS" } else { "FAIL" },
        detail.as_ref()
    );
    assert!(pass, "criterion {id} [{name}] failed: {}", detail.as_ref());
}

fn r(x: f64) -> Rational {
    lienard::polyalg::rat_from_f64(x).unwrap()
}

// 1 -----------------------------------------------------------------------

#[test]
fn criterion_01_factorization_exactness() {
    let mut failures = Vec::new();

    for (k, w) in [(rat(5, 2), rat_int(3)), (rat(-7, 3), rat(1, 2)), (rat_int(1), rat_int(1))] {
        let eq = models::cubic_oscillator(&k, &w).unwrap();
        let f = commutative_factorize(&eq).unwrap();
        let expect_p = Polynomial::monomial(-k.clone(), 1);
        if f.p != expect_p || f.c_squared != -(&w * &w) || f.regime != Regime::TrigonometricZeta {
            failures.push(format!("cubic k={k} w={w}"));
        }
        if !verify_factorization_identity(&eq, &f) {
            failures.push(format!("cubic identity k={k}"));
        }
    }

    for (alpha, v, i) in [(rat_int(1), rat_int(1), rat_int(-2)), (rat_int(1), rat_int(1), rat_int(0)), (rat(1, 2), rat_int(2), rat_int(4))] {
        let red = models::sto_reduce(&alpha, &v, &i).unwrap();
        for b in &red.branches {
            let eps = &b.epsilon;
            let expect_p = &Polynomial::monomial(rat_int(-1), 1) - &Polynomial::constant(rat(3, 2) * eps);
            let c_tilde_sq = rat(3, 4) * eps * eps + &v / &alpha;
            let f = &b.factorization;
            if f.p != expect_p || f.c_tilde_squared() != c_tilde_sq || !verify_factorization_identity(&b.equation, f) {
                failures.push(format!("sto alpha={alpha} v={v} I={i} eps={eps}"));
            }
        }
    }

    for mu in [rat(1, 2), rat_int(1), rat(3, 2), rat(-1, 3)] {
        let eq = models::wilson_equation(&mu).unwrap();
        let f = commutative_factorize(&eq).unwrap();
        // -(μ/2)(x^2/2 - 1)
        let expect_p = Polynomial::new(vec![&mu / rat_int(2), rat_int(0), -&mu / rat_int(4)]);
        let c_tilde_sq = (rat_int(4) - &mu * &mu) / rat_int(4);
        if f.p != expect_p || f.c_tilde_squared() != c_tilde_sq || !verify_factorization_identity(&eq, &f) {
            failures.push(format!("wilson mu={mu}"));
        }
    }

    report("1", "factorization exactness", failures.is_empty(), format!("mismatches: {failures:?}"));
}

// 2 -----------------------------------------------------------------------

struct Case {
    name: String,
    eq: LienardEquation,
    w: ClosedFormWaveform,
    window: (f64, f64),
    match_span: (f64, f64),
}

fn case(name: &str, eq: LienardEquation, w: ClosedFormWaveform, window: (f64, f64), match_span: (f64, f64)) -> Case {
    Case {
        name: name.to_string(),
        eq,
        w,
        window,
        match_span,
    }
}

fn check_cases(cases: &[Case]) -> (bool, String) {
    let mut ok = true;
    let mut lines = Vec::new();
    for c in cases {
        let grid = uniform_grid(c.window.0, c.window.1, 1000);
        let res = ode_residual(&c.eq, &c.w, &grid).map(|r| r.max).unwrap_or(f64::INFINITY);
        let m = match_numeric(&c.eq, &c.w, c.match_span, thresholds::MATCH_TOL).unwrap_or(f64::INFINITY);
        let pass = res <= thresholds::ODE_RESIDUAL && m <= thresholds::NUMERIC_MATCH;
        ok &= pass;
        lines.push(format!("{}: residual {res:.2e}, match {m:.2e}", c.name));
    }
    (ok, lines.join("; "))
}

fn cubic_eq(k: f64, w: f64) -> LienardEquation {
    models::cubic_oscillator(&r(k), &r(w)).unwrap()
}

fn wilson_eq(mu: f64) -> LienardEquation {
    models::wilson_equation(&r(mu)).unwrap()
}

fn sto_eq(alpha: f64, v: f64, b: u8) -> LienardEquation {
    let eps = (1.0 - b as f64) * (v / alpha).sqrt();
    models::sto_equation(&r(alpha), &r(v), &r(eps)).unwrap()
}

#[test]
fn criterion_02_residuals_closed_forms() {
    let t3 = |w: f64| (0.0, 3.0 * 2.0 * PI / w);
    let mut cases = vec![
        case("cubic bounded k=2.5", cubic_eq(2.5, 3.0), cubic_waveform(2.5, 3.0, 1.0, 0.0).unwrap(), t3(3.0), t3(3.0)),
        case("cubic bounded k=-2.5", cubic_eq(-2.5, 3.0), cubic_waveform(-2.5, 3.0, 1.0, 0.0).unwrap(), t3(3.0), t3(3.0)),
        case("cubic singular k=3.5", cubic_eq(3.5, 3.0), cubic_waveform(3.5, 3.0, 1.0, 0.0).unwrap(), t3(3.0), t3(3.0)),
        case("cubic cotangent", cubic_eq(2.5, 3.0), cubic_waveform(2.5, 3.0, 0.0, 0.0).unwrap(), t3(3.0), (0.3, 1.0)),
    ];
    for alpha in [0.2, 0.6, 1.0] {
        let w = (1.0f64 / alpha).sqrt();
        cases.push(case(
            &format!("sto b=1 alpha={alpha}"),
            sto_eq(alpha, 1.0, 1),
            sto_waveform(alpha, 1.0, 1, 1.0, 0.0).unwrap(),
            t3(w),
            t3(w),
        ));
    }
    for (mu, a) in [(1.0, 0.0), (0.5, 0.0), (0.5, 1.0), (1.0, 1.0), (0.5, -1.0)] {
        let w = wilson_waveform(mu, a, 0.0, Branch::Plus).unwrap();
        let c = (4.0 - mu * mu).sqrt() / 2.0;
        cases.push(case(&format!("wilson mu={mu} A={a}"), wilson_eq(mu), w, t3(c), t3(c)));
    }
    cases.push(case(
        "sundman q=1",
        models::theorem_equation(&rat_int(-1), &rat_int(1), &rat(2, 9), 1).unwrap(),
        sundman_waveform_q1(-1.0, 1.0, 0.0).unwrap(),
        (-20.0, 20.0),
        (0.0, 20.0),
    ));
    cases.push(case(
        "sundman q=2 (quadrature-derived)",
        models::theorem_equation(&rat_int(-1), &rat_int(1), &rat(3, 16), 2).unwrap(),
        sundman_waveform_q2_theorem(-1.0, 1.0, 0.0).unwrap(),
        (-20.0, 20.0),
        (0.0, 20.0),
    ));
    let (ok, detail) = check_cases(&cases);
    report("2a", "ODE residuals of closed forms", ok, detail);
}

#[test]
fn criterion_02_residuals_quadrature_form() {
    let mut cases = Vec::new();
    let families: [(&str, LienardEquation, f64, (f64, f64)); 5] = [
        ("cubic", cubic_eq(2.5, 3.0), 1.2, (0.0, 3.0 * 2.0 * PI / 3.0)),
        ("wilson", wilson_eq(1.0), 1.0, (0.0, 3.0 * 4.0 * PI / 3f64.sqrt())),
        ("hyperbolic A=-1 B=1 C=2/9", models::theorem_equation(&rat_int(-1), &rat_int(1), &rat(2, 9), 1).unwrap(), 0.8, (0.0, 20.0)),
        ("rational A=1 B=2 C=1", models::theorem_equation(&rat_int(1), &rat_int(2), &rat_int(1), 1).unwrap(), 2.0, (0.5, 10.0)),
        ("trig q=3 A=1/2 B=-1/3 C=2", models::theorem_equation(&rat(1, 2), &rat(-1, 3), &rat_int(2), 3).unwrap(), 3.0, (0.0, 3.0 * 2.0 * PI / (2.0 - 1.0 / 36.0f64).sqrt())),
    ];
    for (name, eq, k, window) in families {
        let m = commutative_factorize(&eq).unwrap().monomial.unwrap();
        let w = general_waveform(&m, Branch::Plus, k, 0.0).unwrap();
        cases.push(case(&format!("quadrature {name}"), eq, w, window, window));
    }
    let (ok, detail) = check_cases(&cases);
    report("2b", "ODE residuals of quadrature waveforms", ok, detail);
}

#[test]
fn criterion_02_residual_printed_q2_kink() {
    let eq = models::theorem_equation(&rat_int(-1), &rat_int(1), &rat(3, 16), 2).unwrap();
    let cases = [case(
        "sundman q=2 as published",
        eq,
        sundman_waveform_q2(-1.0, 1.0, 0.0).unwrap(),
        (-20.0, 20.0),
        (0.0, 20.0),
    )];
    let (ok, detail) = check_cases(&cases);
    report("2c", "ODE residual of the published q=2 kink", ok, detail);
}

// 3 -----------------------------------------------------------------------

#[test]
fn criterion_03_periods() {
    let mut rows = Vec::new();
    let mut ok = true;
    let mut check = |name: &str, w: ClosedFormWaveform, expected: f64| {
        let window = (0.0, 4.0 * expected);
        let p = detect_period(&w, window);
        let pass = p.is_some_and(|p| (p - expected).abs() <= thresholds::PERIOD_REL * expected);
        ok &= pass;
        rows.push(format!("{name}: {p:?} vs {expected:.10}"));
    };
    check("cubic w=3", cubic_waveform(2.5, 3.0, 1.0, 0.0).unwrap(), 2.0 * PI / 3.0);
    check("cubic singular w=3", cubic_waveform(3.5, 3.0, 1.0, 0.0).unwrap(), 2.0 * PI / 3.0);
    check("cubic cotangent w=3", cubic_waveform(2.5, 3.0, 0.0, 0.0).unwrap(), PI / 3.0);
    check("wilson mu=1", wilson_waveform(1.0, 0.0, 0.0, Branch::Plus).unwrap(), 2.0 * PI / (1.0f64 - 0.25).sqrt());
    check("wilson mu=0.5", wilson_waveform(0.5, 0.0, 0.0, Branch::Minus).unwrap(), 2.0 * PI / (1.0f64 - 0.0625).sqrt());
    check("sto b=1 alpha=0.2", sto_waveform(0.2, 1.0, 1, 1.0, 0.0).unwrap(), 2.0 * PI * 0.2f64.sqrt());
    for b in [0u8, 2] {
        for alpha in [0.5, 1.0] {
            check(
                &format!("sto b={b} alpha={alpha} A=0"),
                sto_waveform(alpha, 1.0, b, 0.0, 0.0).unwrap(),
                PI * (4.0 * alpha / 7.0f64).sqrt(),
            );
        }
    }
    assert!((2.0 * PI / 3.0 - 2.094_395_1).abs() < 1e-7);
    assert!((4.0 * PI / 3f64.sqrt() - 7.255_197_5).abs() < 1e-7);
    assert!((2.0 * PI * 0.2f64.sqrt() - 2.809_925_9).abs() < 1e-7);
    report("3", "periods", ok, rows.join("; "));
}

// 4 -----------------------------------------------------------------------

#[test]
fn criterion_04_regularity_boundary() {
    let mut mismatches = Vec::new();
    let omega = 3.0;
    for k in [2.5, 3.5, -2.5] {
        for i in -20..=20 {
            let a = i as f64 / 10.0;
            let w = cubic_waveform(k, omega, a, 0.0).unwrap();
            let pole_free = w.singularities(0.0, 2.0 * 2.0 * PI / omega).is_empty();
            let predicted = a.abs() > (k / omega).abs();
            if pole_free != predicted || w.is_regular() != Some(predicted) {
                mismatches.push(format!("k={k} A={a}"));
            }
        }
    }
    let bounded = cubic_waveform(2.5, 3.0, 1.0, 0.0).unwrap().singularities(0.0, 10.0).is_empty();
    let singular = !cubic_waveform(3.5, 3.0, 1.0, 0.0).unwrap().singularities(0.0, 10.0).is_empty();
    report(
        "4",
        "regularity boundary",
        mismatches.is_empty() && bounded && singular,
        format!("boundary at ±k/ω; mismatches {mismatches:?}; k=2.5 bounded {bounded}, k=3.5 singular {singular}"),
    );
}

// 5 -----------------------------------------------------------------------

fn symmetry_sample() -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    (0..50)
        .map(|_| {
            let k: f64 = rng.gen_range(-4.0..4.0);
            let omega: f64 = rng.gen_range(0.5..4.0);
            let a: f64 = rng.gen_range(-3.0..3.0);
            (k, omega, a)
        })
        .collect()
}

fn max_defect(name: &str) -> f64 {
    symmetry_sample()
        .into_iter()
        .map(|(k, w, a)| symmetry_check(k, w, a, 0.0).unwrap().defects[name])
        .fold(0.0, f64::max)
}

#[test]
fn criterion_05_time_reversal_odd() {
    let d = max_defect(SYMMETRY_ODD);
    report("5a", "x(t;A,k) = -x(-t;A,k)", d <= thresholds::SYMMETRY, format!("max defect {d:.3e}"));
}

#[test]
fn criterion_05_time_reversal_k_flip() {
    let d = max_defect(SYMMETRY_K_FLIP);
    let a = max_defect(SYMMETRY_A_FLIP);
    report(
        "5b",
        "x(t;A,k) = x(-t;A,-k)",
        d <= thresholds::SYMMETRY,
        format!("max defect {d:.3e}; companion x(t;A,k) = -x(-t;-A,k) defect {a:.3e}"),
    );
}

// 6 -----------------------------------------------------------------------

#[test]
fn criterion_06_limit_cycle_attracts() {
    let mut ok = true;
    let mut rows = Vec::new();
    for mu in [0.5, 1.0] {
        for (label, x0, v0) in [("inside", 0.1, 0.0), ("outside", 3.0, 0.0)] {
            let out = limit_cycle_convergence(mu, x0, v0, 200.0);
            let res = out.as_ref().map(|o| o.residual).unwrap_or(f64::INFINITY);
            ok &= res <= thresholds::LIMIT_CYCLE;
            rows.push(format!("mu={mu} {label}: {res:.2e}"));
        }
        // the A > 0 closed form approaches the cycle from inside
        let w = wilson_waveform(mu, 1.0, 0.0, Branch::Plus).unwrap();
        let period = 2.0 * PI / (1.0 - mu * mu / 4.0f64).sqrt();
        let late = uniform_grid(200.0, 200.0 + period, 500)
            .into_iter()
            .map(|t| {
                let s = w.state(t).unwrap();
                verify::normalized_cycle_residual(mu, s.x, s.xdot)
            })
            .fold(0.0, f64::max);
        ok &= late <= thresholds::LIMIT_CYCLE;
        rows.push(format!("mu={mu} closed form A=1 at t=200: {late:.2e}"));
    }
    report("6a", "limit cycle convergence", ok, rows.join("; "));
}

#[test]
fn criterion_06_isochronous_orbit_distinct_from_cycle() {
    let mut ok = true;
    let mut rows = Vec::new();
    for mu in [0.5, 1.0] {
        let w = wilson_waveform(mu, 0.0, 0.0, Branch::Plus).unwrap();
        let period = w.nominal_period().unwrap();
        let res = ode_residual(&wilson_eq(mu), &w, &uniform_grid(0.0, 3.0 * period, 1000)).unwrap().max;
        let curve = orbit_curve_residual(mu, &w).unwrap();
        ok &= res <= thresholds::ODE_RESIDUAL && curve > thresholds::LIMIT_CYCLE;
        rows.push(format!("mu={mu}: ode residual {res:.2e}, curve residual {curve:.2e}"));
    }
    report("6b", "A=0 orbit solves the ODE but is off the cycle", ok, rows.join("; "));
}

// 7 -----------------------------------------------------------------------

#[test]
fn criterion_07_linearizability() {
    let mut ok = true;
    let mut rows = Vec::new();
    for (k, w) in [(rat(5, 2), rat_int(3)), (rat_int(-2), rat(1, 3)), (rat(7, 2), rat_int(3))] {
        let c = chiellini_check(&models::cubic_oscillator(&k, &w).unwrap());
        let expected = (rat(9, 2), rat_int(3) * &w * &w / (rat_int(2) * &k));
        let pass = c.as_ref().is_some_and(|c| (c.sigma_sq.clone(), c.kappa.clone()) == expected);
        ok &= pass;
        rows.push(format!("chiellini cubic k={k} w={w}: {pass}"));
    }
    for (a, c) in [(rat_int(2), rat_int(9)), (rat(-1, 3), rat(5, 7))] {
        let s = sundman_check(&a, &rat_int(0), &c, 1);
        let pass = s.is_some_and(|s| s.case == SundmanCase::B0 && s.sigma_sq == rat(9, 2) && s.kappa == rat_int(3) * &c / (rat_int(2) * &a));
        ok &= pass;
        rows.push(format!("sundman B=0 A={a} C={c}: {pass}"));
    }
    for (a, c, q, sigma_sq) in [(rat_int(1), rat(2, 9), 1, rat(9, 2)), (rat_int(-1), rat(3, 16), 2, rat(16, 3))] {
        let s = sundman_check(&a, &rat_int(1), &c, q);
        let pass = s.is_some_and(|s| s.case == SundmanCase::Kappa0 && s.sigma_sq == sigma_sq && s.kappa == rat_int(0));
        ok &= pass;
        rows.push(format!("sundman B=1 q={q}: {pass}"));
    }
    report("7", "linearizability", ok, rows.join("; "));
}

// 8 -----------------------------------------------------------------------

#[test]
fn criterion_08_sto_arbitration() {
    let mut ok = true;
    let mut rows = Vec::new();
    for (alpha, v) in [(1.0, 1.0), (0.5, 2.0)] {
        for b in [0u8, 2] {
            let arb = sto_arbitration(alpha, v, b, 1.0, 0.0).unwrap();
            ok &= arb.winner.is_some();
            rows.push(format!("alpha={alpha} v={v} b={b}: winner {:?}, residuals {:?}", arb.winner, arb.residuals));
        }
        let arb = sto_arbitration(alpha, v, 1, 1.0, 0.0).unwrap();
        let both = arb.passing().contains(&StoVariant::Theorem) && arb.passing().contains(&StoVariant::PrintedExplicit);
        ok &= both;
        rows.push(format!("alpha={alpha} v={v} b=1: both pass {both}"));
    }
    report("8", "traveling-wave coefficient arbitration", ok, rows.join("; "));
}

// 9 -----------------------------------------------------------------------

#[test]
fn criterion_09_zeta_riccati() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst = [0.0f64; 3];
    let mut counts = [0usize; 3];
    while counts.iter().any(|&c| c < 1000) {
        let kind = rng.gen_range(0..3);
        if counts[kind] >= 1000 {
            continue;
        }
        let t: f64 = rng.gen_range(-10.0..10.0);
        let delta: f64 = rng.gen_range(-1.0..1.0);
        let z = match kind {
            0 => Zeta::Rational { t0: rng.gen_range(-5.0..5.0) },
            1 => Zeta::Hyperbolic {
                c: rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
                delta,
            },
            _ => Zeta::Trigonometric {
                c_tilde: rng.gen_range(0.1..3.0),
                delta,
            },
        };
        // stay clear of poles, where the terms themselves are huge
        let clear = match z {
            Zeta::Rational { t0 } => (t - t0).abs() >= 0.1,
            Zeta::Trigonometric { c_tilde, delta } => (c_tilde * t + delta).cos().abs() >= 0.1,
            Zeta::Hyperbolic { .. } => true,
        };
        if !clear {
            continue;
        }
        worst[kind] = worst[kind].max(z.riccati_residual(t).unwrap());
        counts[kind] += 1;
    }
    let ok = worst.iter().all(|&w| w <= thresholds::RICCATI);
    report(
        "9",
        "zeta Riccati identity",
        ok,
        format!("max residual rational {:.2e}, hyperbolic {:.2e}, trigonometric {:.2e}", worst[0], worst[1], worst[2]),
    );
}

// 10 ----------------------------------------------------------------------

#[test]
fn criterion_10_general_vs_special() {
    let specials: Vec<(ClosedFormWaveform, (f64, f64))> = vec![
        (cubic_waveform(2.5, 3.0, 1.0, 0.0).unwrap(), (0.0, 4.0 * PI / 3.0)),
        (cubic_waveform(2.5, 3.0, -1.5, 0.4).unwrap(), (0.0, 4.0 * PI / 3.0)),
        (cubic_waveform(3.5, 3.0, 1.0, 0.0).unwrap(), (0.0, 4.0 * PI / 3.0)),
        (wilson_waveform(1.0, 0.0, 0.0, Branch::Plus).unwrap(), (0.0, 8.0 * PI / 3f64.sqrt())),
        (wilson_waveform(0.5, 1.0, 0.0, Branch::Minus).unwrap(), (0.0, 15.0)),
        (sto_waveform(0.2, 1.0, 1, 1.0, 0.0).unwrap(), (0.0, 6.0)),
        (sto_waveform(1.0, 1.0, 0, 1.0, 0.0).unwrap(), (0.0, 5.0)),
        (sto_waveform(1.0, 1.0, 2, 1.0, 0.0).unwrap(), (0.0, 5.0)),
        (sundman_waveform_q1(-1.0, 1.0, 0.0).unwrap(), (-20.0, 20.0)),
        (sundman_waveform_q2_theorem(-1.0, 1.0, 0.2).unwrap(), (-20.0, 20.0)),
    ];
    let mut ok = true;
    let mut rows = Vec::new();
    for (w, window) in &specials {
        let g = w.to_general().unwrap();
        let sing = w.singularities(window.0, window.1);
        let mut worst: f64 = 0.0;
        for t in uniform_grid(window.0, window.1, 1000) {
            if ClosedFormWaveform::near_singularity(&sing, t, 1e-3) {
                continue;
            }
            let (Ok(a), Ok(b)) = (w.eval(t), g.eval(t)) else { continue };
            worst = worst.max((a - b).abs() / (1.0 + a.abs()));
        }
        ok &= worst <= thresholds::AGREEMENT;
        rows.push(format!("{}: {worst:.2e}", w.label()));
    }
    report("10", "quadrature vs closed forms", ok, rows.join("; "));
}
