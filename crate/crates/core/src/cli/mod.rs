//! Command-line front end: `factor`, `solve`, `verify` and `sweep`.
//!
//! Exit codes: 0 success, 1 bad input, 2 equation not commutatively factorable,
//! 3 verification failure.

pub mod output;
pub mod params;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::{debug, info};
use rayon::prelude::*;

use crate::factorize::{commutative_factorize, FactorizeError};
use crate::models::{linearizability, SundmanCase};
use crate::polyalg::{parse_rational, rat_int, rat_to_f64, Rational};
use crate::verify::{self, detect_period, limit_cycle_convergence, sto_arbitration, thresholds, uniform_grid, verify_waveform_spans};

pub use params::{parse_config, Model, Params};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NotFactorable(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::NotFactorable(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl From<verify::VerifyError> for CliError {
    fn from(e: verify::VerifyError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "lienard", version, about = "Factorize Liénard equations and evaluate their closed-form solutions")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Commutative factorization of x'' + G(x) x' + F(x) = 0.
    #[command(allow_negative_numbers = true)]
    Factor {
        /// Named model; omit to pass --G and --F.
        #[arg(value_enum, default_value = "general")]
        model: Model,
        #[command(flatten)]
        p: ParamArgs,
    },
    /// Sample a closed-form waveform to CSV (and optionally SVG).
    #[command(allow_negative_numbers = true)]
    Solve {
        #[arg(value_enum)]
        model: Model,
        #[command(flatten)]
        p: ParamArgs,
    },
    /// Check a closed-form waveform against its equation.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[arg(value_enum)]
        model: Model,
        #[command(flatten)]
        p: ParamArgs,
        /// Also measure convergence onto the algebraic limit cycle (wilson).
        #[arg(long)]
        limit_cycle: bool,
        /// Compare the theorem form with the published traveling-wave formulas (sto).
        #[arg(long)]
        arbitrate: bool,
        /// Compare a CSV written by `solve` with the closed form.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Period, regularity and residual over a parameter range (CSV).
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(value_enum)]
        model: Model,
        #[command(flatten)]
        p: ParamArgs,
        /// Parameter to vary (a config key such as k, omega, mu, A).
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        step: String,
    },
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    /// Integration constant A (or monomial coefficient for sundman models).
    #[arg(long = "A")]
    a: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    /// Root sign for wilson and even-q general waveforms (+ or -).
    #[arg(long)]
    sign: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    v: Option<String>,
    /// Traveling-wave branch, 0, 1 or 2.
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c1: Option<String>,
    /// Damping polynomial, ascending coefficients, e.g. "0,15/2".
    #[arg(long = "G")]
    g: Option<String>,
    /// Restoring polynomial with F(0) = 0, ascending coefficients, e.g. "0,9,0,25/4".
    #[arg(long = "F")]
    f: Option<String>,
    /// Integration constant of the quadrature form.
    #[arg(long = "K")]
    big_k: Option<String>,
    #[arg(long)]
    phase: Option<String>,
    /// Sign of the split constant for general waveforms (+ or -).
    #[arg(long)]
    branch: Option<String>,
    /// Use the published formula instead of the theorem form (sto, sundman2).
    #[arg(long)]
    printed: bool,
    #[arg(long)]
    t0: Option<String>,
    #[arg(long)]
    t1: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    phase_svg: Option<PathBuf>,
    /// `key = value` parameter file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ParamArgs {
    fn flags(&self) -> BTreeMap<String, String> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let pairs = [
            ("k", self.k.clone()),
            ("omega", self.omega.clone()),
            ("A", self.a.clone()),
            ("delta", self.delta.clone()),
            ("mu", self.mu.clone()),
            ("sign", self.sign.clone()),
            ("alpha", self.alpha.clone()),
            ("v", self.v.clone()),
            ("b", self.b.clone()),
            ("c1", self.c1.clone()),
            ("G", self.g.clone()),
            ("F", self.f.clone()),
            ("K", self.big_k.clone()),
            ("phase", self.phase.clone()),
            ("branch", self.branch.clone()),
            ("printed", self.printed.then(|| "true".to_string())),
            ("t0", self.t0.clone()),
            ("t1", self.t1.clone()),
            ("samples", self.samples.clone()),
            ("out", path(&self.out)),
            ("svg", path(&self.svg)),
            ("phase_svg", path(&self.phase_svg)),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))).collect()
    }

    fn resolve(&self, model: Model) -> Result<Params, CliError> {
        let config = match &self.config {
            Some(path) => params::read_config(path)?,
            None => BTreeMap::new(),
        };
        Ok(Params::resolve(model, &self.flags(), &config))
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter("LIENARD_LOG")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match execute(cli.command, &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    match command {
        Command::Factor { model, p } => factor(&p.resolve(model)?, out),
        Command::Solve { model, p } => solve(&p.resolve(model)?, out),
        Command::Verify {
            model,
            p,
            limit_cycle,
            arbitrate,
            csv,
        } => verify_cmd(&p.resolve(model)?, limit_cycle, arbitrate, csv.as_deref(), out),
        Command::Sweep {
            model,
            p,
            param,
            from,
            to,
            step,
        } => sweep(&p.resolve(model)?, &param, &from, &to, &step, out),
    }
}

fn emit(out: &mut dyn std::io::Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Input(format!("writing output: {e}")))
}

fn factor(p: &Params, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    let eq = params::equation(p)?;
    let mut s = String::new();
    let _ = writeln!(s, "G(x) = {}", eq.g());
    let _ = writeln!(s, "F(x) = {}", eq.f());
    let fact = match commutative_factorize(&eq) {
        Ok(f) => f,
        Err(FactorizeError::NotCommutativelyFactorable { residual }) => {
            let _ = writeln!(s, "factorable: no");
            emit(out, &s)?;
            return Err(CliError::NotFactorable(format!("not commutatively factorable: p^2 - F/x has varying part {residual}")));
        }
        Err(e) => return Err(CliError::Input(e.to_string())),
    };
    let _ = writeln!(s, "factorable: yes");
    let _ = writeln!(s, "p(x) = {}", fact.p);
    let _ = writeln!(s, "c^2 = {}", fact.c_squared);
    let _ = writeln!(s, "regime: {}", fact.regime.name());
    match &fact.monomial {
        Some(m) => {
            let _ = writeln!(s, "monomial form: q = {}, A = {}, B = {}, C = {}, Delta = {}", m.q, m.a, m.b, m.c, m.delta);
        }
        None => {
            let _ = writeln!(s, "monomial form: none");
        }
    }
    let lin = linearizability(&eq);
    match &lin.chiellini {
        Some(c) => {
            let _ = writeln!(s, "chiellini: yes (sigma^2 = {}, kappa = {})", c.sigma_sq, c.kappa);
        }
        None => {
            let _ = writeln!(s, "chiellini: no");
        }
    }
    match &lin.sundman {
        Some(sd) => {
            let case = match sd.case {
                SundmanCase::B0 => "B = 0",
                SundmanCase::Kappa0 => "B = 1",
            };
            let _ = writeln!(s, "sundman: yes ({case}, sigma^2 = {}, kappa = {})", sd.sigma_sq, sd.kappa);
        }
        None => {
            let _ = writeln!(s, "sundman: no");
        }
    }
    emit(out, &s)
}

fn samples(p: &Params) -> Result<usize, CliError> {
    let n = p.usize("samples")?.unwrap_or(1001);
    if n < 2 {
        return Err(CliError::Input("--samples must be at least 2".into()));
    }
    Ok(n)
}

fn solve(p: &Params, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    let w = params::waveform(p)?;
    let (t0, t1) = params::window(p, &w)?;
    let n = samples(p)?;
    info!("solve {}: [{t0}, {t1}] with {n} samples", w.label());
    let rows = output::sample(&w, t0, t1, n);
    let csv = output::to_csv(&rows);
    match p.get("out") {
        Some(path) => output::write_file(Path::new(path), &csv)?,
        None => emit(out, &csv)?,
    }
    // Clip plots at a large multiple of the typical amplitude so poles show as breaks.
    let mut mags: Vec<f64> = rows.iter().filter_map(|r| r.1.map(|(x, _)| x.abs())).filter(|x| x.is_finite()).collect();
    mags.sort_by(f64::total_cmp);
    let clip = mags.get(mags.len() / 2).map_or(1e6, |m| (20.0 * m).max(1.0));
    if let Some(path) = p.get("svg") {
        let segs = output::segments(&rows, |t, x, _| (t, x), clip);
        output::write_file(Path::new(path), &output::svg_plot(&segs, "t", "x", w.label()))?;
    }
    if let Some(path) = p.get("phase_svg") {
        let segs = output::segments(&rows, |_, x, xd| (x, xd), clip);
        output::write_file(Path::new(path), &output::svg_plot(&segs, "x", "x'", w.label()))?;
    }
    Ok(())
}

fn verify_cmd(
    p: &Params,
    limit_cycle: bool,
    arbitrate: bool,
    csv: Option<&Path>,
    out: &mut dyn std::io::Write,
) -> Result<(), CliError> {
    let eq = params::equation(p)?;
    let w = params::waveform(p)?;
    let window = params::window(p, &w)?;
    // Integration constants are anchored at t = 0, so numeric matching starts there
    // when the window straddles it; kinks grow steeply for t < 0.
    let match_window = if window.0 < 0.0 && window.1 > 0.0 { (0.0, window.1) } else { window };
    let mut report = verify_waveform_spans(&eq, &w, window, match_window)?;
    let mut extra = Vec::new();
    let mut s = format!("waveform: {}\nwindow: [{}, {}]\n", w.label(), window.0, window.1);

    if p.model == Model::Cubic {
        // Reported for information; the published identities are not all true.
        let sym = verify::symmetry_check(p.real("k")?, p.real("omega")?, p.real("A")?, p.real("delta")?)?;
        match sym.skipped {
            Some(reason) => report.notes.push(format!("symmetry check skipped: {reason}")),
            None => report.symmetry_defects = sym.defects,
        }
    }
    if limit_cycle {
        if p.model != Model::Wilson {
            return Err(CliError::Input("--limit-cycle applies to the wilson model".into()));
        }
        let s0 = w.state(window.0).map_err(|e| CliError::Input(e.to_string()))?;
        let lc = limit_cycle_convergence(p.real("mu")?, s0.x, s0.xdot, 40.0)?;
        report.limit_cycle_residual = Some(lc.residual);
        report.notes.push(format!("final loop duration {:.9}", lc.loop_time));
    }
    if arbitrate {
        if p.model != Model::Sto {
            return Err(CliError::Input("--arbitrate applies to the sto model".into()));
        }
        let b = p.sto_b()?;
        let arb = sto_arbitration(p.real("alpha")?, p.real("v")?, b, p.real("A")?, p.real("delta")?)?;
        for (variant, r) in &arb.residuals {
            let _ = writeln!(s, "arbitration[{variant:?}]: {r:e}");
        }
        let passing = arb.passing();
        let winner = match (arb.winner, passing.len()) {
            (Some(v), _) => format!("{v:?}"),
            (None, 0) => "none".to_string(),
            (None, _) => "none (candidates coincide)".to_string(),
        };
        let _ = writeln!(s, "arbitration winner: {winner}");
        if passing.is_empty() {
            extra.push("no traveling-wave form passes".to_string());
        }
    }
    if let Some(path) = csv {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let ts = output::read_csv(&text)?;
        if ts.is_empty() {
            return Err(CliError::Input(format!("{}: no samples", path.display())));
        }
        let mut worst: f64 = 0.0;
        for i in 0..ts.len() {
            let st = w.state(ts.t[i]).map_err(|e| CliError::Input(format!("t = {}: {e}", ts.t[i])))?;
            worst = worst.max((st.x - ts.x[i]).abs()).max((st.xdot - ts.xdot[i]).abs());
        }
        let _ = writeln!(s, "csv_max_deviation: {worst:e} over {} samples", ts.len());
        if !(worst <= thresholds::NUMERIC_MATCH) {
            extra.push(format!("csv deviation {worst:e} > {:e}", thresholds::NUMERIC_MATCH));
        }
    }
    let _ = writeln!(s, "{report}");
    let mut failures = report.failures();
    failures.extend(extra);
    if !failures.is_empty() && report.passed() {
        let _ = writeln!(s, "additional failures: {}", failures.join("; "));
    }
    emit(out, &s)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failures.join("; ")))
    }
}

fn sweep_values(from: &str, to: &str, step: &str) -> Result<Vec<Rational>, CliError> {
    let read = |name: &str, s: &str| parse_rational(s).map_err(|_| CliError::Input(format!("--{name}: cannot read `{s}`")));
    let (from, to, step) = (read("from", from)?, read("to", to)?, read("step", step)?);
    if step == rat_int(0) {
        return Err(CliError::Input("--step must be non-zero".into()));
    }
    let positive = step > rat_int(0);
    let mut out = Vec::new();
    let mut x = from;
    while (positive && x <= to) || (!positive && x >= to) {
        out.push(x.clone());
        x += &step;
        if out.len() > 1_000_000 {
            return Err(CliError::Input("sweep exceeds 1e6 points".into()));
        }
    }
    Ok(out)
}

fn sweep_row(p: &Params, param: &str, value: &Rational) -> String {
    let shown = rat_to_f64(value);
    let q = p.with(param, &value.to_string());
    let row = params::equation(&q).and_then(|eq| {
        let w = params::waveform(&q)?;
        let window = params::window(&q, &w)?;
        let period = w.nominal_period().and_then(|_| detect_period(&w, window));
        let res = verify::ode_residual(&eq, &w, &uniform_grid(window.0, window.1, 1000))?;
        Ok((period, w.is_regular(), res.max))
    });
    match row {
        Ok((period, regular, residual)) => {
            let period = period.map_or(String::new(), |t| format!("{t:.12e}"));
            let regular = match regular {
                Some(true) => "regular",
                Some(false) => "singular",
                None => "unknown",
            };
            format!("{shown},{period},{regular},{residual:e}")
        }
        Err(e) => {
            debug!("sweep {param}={shown}: {e}");
            format!("{shown},,invalid,")
        }
    }
}

fn sweep(p: &Params, param: &str, from: &str, to: &str, step: &str, out: &mut dyn std::io::Write) -> Result<(), CliError> {
    let param = param.replace('-', "_");
    if !params::KEYS.contains(&param.as_str()) {
        return Err(CliError::Input(format!("unknown sweep parameter `{param}`")));
    }
    let values = sweep_values(from, to, step)?;
    info!("sweep {} over {} values of {param}", p.model.name(), values.len());
    let rows: Vec<String> = values.par_iter().map(|v| sweep_row(p, &param, v)).collect();
    let mut text = format!("{param},period,regularity,max_ode_residual\n");
    for r in rows {
        text.push_str(&r);
        text.push('\n');
    }
    match p.get("out") {
        Some(path) => output::write_file(Path::new(path), &text),
        None => emit(out, &text),
    }
}

/// Runs a command line and captures stdout, for tests and embedding.
pub fn run_captured<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => return (if e.use_stderr() { 1 } else { 0 }, e.to_string()),
    };
    let mut buf = Vec::new();
    let code = match execute(cli.command, &mut buf) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(buf, "error: {e}");
            e.exit_code()
        }
    };
    (code, String::from_utf8_lossy(&buf).into_owned())
}
