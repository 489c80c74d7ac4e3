//! Parameter resolution (flags over config file over defaults) and model construction.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_traits::Signed;

use crate::factorize::{commutative_factorize, FactorizeError, LienardEquation};
use crate::models;
use crate::polyalg::{parse_rational, rat, rat_from_f64, rat_int, rat_to_f64, Polynomial, Rational};
use crate::waveforms::{
    cubic_waveform, general_waveform, sto_printed_waveform, sto_waveform, sundman_waveform_q1, sundman_waveform_q2,
    sundman_waveform_q2_theorem, wilson_waveform, Branch, ClosedFormWaveform, StoPrintedForm,
};

use super::CliError;

/// Every key accepted in a config file or as a sweep parameter.
pub const KEYS: &[&str] = &[
    "k", "omega", "A", "delta", "mu", "sign", "alpha", "v", "b", "c1", "G", "F", "K", "phase", "branch", "printed", "t0",
    "t1", "samples", "out", "svg", "phase_svg",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Model {
    Cubic,
    Wilson,
    Sto,
    Sundman1,
    Sundman2,
    General,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Cubic => "cubic",
            Model::Wilson => "wilson",
            Model::Sto => "sto",
            Model::Sundman1 => "sundman1",
            Model::Sundman2 => "sundman2",
            Model::General => "general",
        }
    }

    fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Model::Cubic => &[("k", "2.5"), ("omega", "3"), ("A", "1"), ("delta", "0")],
            Model::Wilson => &[("mu", "1"), ("A", "0"), ("delta", "0"), ("sign", "+")],
            Model::Sto => &[("alpha", "0.2"), ("v", "1"), ("b", "1"), ("A", "1"), ("delta", "0")],
            Model::Sundman1 | Model::Sundman2 => &[("A", "-1"), ("c1", "1"), ("delta", "0")],
            Model::General => &[("K", "1"), ("phase", "0"), ("branch", "+")],
        }
    }
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("config line {}: expected key = value", n + 1)))?;
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Input(format!("config line {}: unknown key `{key}`", n + 1)));
        }
        out.insert(key, value.trim().trim_matches('"').to_string());
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Resolved parameter set for one model.
#[derive(Debug, Clone)]
pub struct Params {
    pub model: Model,
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn resolve(model: Model, flags: &BTreeMap<String, String>, config: &BTreeMap<String, String>) -> Self {
        let mut values: BTreeMap<String, String> =
            model.defaults().iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        values.extend(config.iter().map(|(k, v)| (k.clone(), v.clone())));
        values.extend(flags.iter().map(|(k, v)| (k.clone(), v.clone())));
        Self { model, values }
    }

    pub fn with(&self, key: &str, value: &str) -> Self {
        let mut p = self.clone();
        p.values.insert(key.to_string(), value.to_string());
        p
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::Input(format!("{} needs --{key}", self.model.name())))
    }

    pub fn rational(&self, key: &str) -> Result<Rational, CliError> {
        let s = self.require(key)?;
        parse_rational(s).map_err(|_| CliError::Input(format!("--{key}: cannot read `{s}` as a number")))
    }

    pub fn real(&self, key: &str) -> Result<f64, CliError> {
        self.rational(key).map(|r| rat_to_f64(&r))
    }

    pub fn opt_real(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.get(key) {
            Some(_) => self.real(key).map(Some),
            None => Ok(None),
        }
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        match self.get(key) {
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| CliError::Input(format!("--{key}: `{s}` is not a count"))),
            None => Ok(None),
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.get(key), Some("true" | "1" | "yes"))
    }

    fn branch(&self, key: &str) -> Result<Branch, CliError> {
        match self.get(key).unwrap_or("+") {
            "+" | "plus" | "1" => Ok(Branch::Plus),
            "-" | "minus" | "-1" => Ok(Branch::Minus),
            s => Err(CliError::Input(format!("--{key}: expected + or -, got `{s}`"))),
        }
    }

    pub(crate) fn sto_b(&self) -> Result<u8, CliError> {
        match self.require("b")? {
            "0" => Ok(0),
            "1" => Ok(1),
            "2" => Ok(2),
            s => Err(CliError::Input(format!("--b must be 0, 1 or 2, got `{s}`"))),
        }
    }

    fn polynomial(&self, key: &str) -> Result<Polynomial, CliError> {
        let s = self.require(key)?;
        s.parse()
            .map_err(|e| CliError::Input(format!("--{key}: {e}")))
    }
}

/// Exact `sqrt(r)` when `r` is the square of a rational.
fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

pub fn equation(p: &Params) -> Result<LienardEquation, CliError> {
    let eq = match p.model {
        Model::Cubic => models::cubic_oscillator(&p.rational("k")?, &p.rational("omega")?),
        Model::Wilson => models::wilson_equation(&p.rational("mu")?),
        Model::Sto => {
            let (alpha, v) = (p.rational("alpha")?, p.rational("v")?);
            if !alpha.is_positive() {
                return Err(CliError::Input("--alpha must be positive".into()));
            }
            let ratio = &v / &alpha;
            let root = match exact_sqrt(&ratio) {
                Some(s) => s,
                None => rat_from_f64(rat_to_f64(&ratio).sqrt()).ok_or_else(|| CliError::Input("v/alpha must be >= 0".into()))?,
            };
            let eps = rat_int(1 - p.sto_b()? as i64) * root;
            models::sto_equation(&alpha, &v, &eps)
        }
        Model::Sundman1 => models::theorem_equation(&p.rational("A")?, &rat_int(1), &rat(2, 9), 1),
        Model::Sundman2 => models::theorem_equation(&p.rational("A")?, &rat_int(1), &rat(3, 16), 2),
        Model::General => {
            return LienardEquation::new(p.polynomial("G")?, p.polynomial("F")?).map_err(|e| CliError::Input(e.to_string()))
        }
    };
    eq.map_err(|e| CliError::Input(e.to_string()))
}

pub fn waveform(p: &Params) -> Result<ClosedFormWaveform, CliError> {
    let input = |e: crate::waveforms::WaveformError| CliError::Input(e.to_string());
    let w = match p.model {
        Model::Cubic => cubic_waveform(p.real("k")?, p.real("omega")?, p.real("A")?, p.real("delta")?),
        Model::Wilson => wilson_waveform(p.real("mu")?, p.real("A")?, p.real("delta")?, p.branch("sign")?),
        Model::Sto => {
            let (alpha, v, b, a, d) = (p.real("alpha")?, p.real("v")?, p.sto_b()?, p.real("A")?, p.real("delta")?);
            if p.flag("printed") {
                sto_printed_waveform(alpha, v, b, StoPrintedForm::Explicit, a, d)
            } else {
                sto_waveform(alpha, v, b, a, d)
            }
        }
        Model::Sundman1 => sundman_waveform_q1(p.real("A")?, p.real("c1")?, p.real("delta")?),
        Model::Sundman2 => {
            let (a, c1, d) = (p.real("A")?, p.real("c1")?, p.real("delta")?);
            if p.flag("printed") {
                sundman_waveform_q2(a, c1, d)
            } else {
                sundman_waveform_q2_theorem(a, c1, d)
            }
        }
        Model::General => {
            let eq = equation(p)?;
            let fact = commutative_factorize(&eq).map_err(|e| match e {
                FactorizeError::InvalidEquation(_) => CliError::Input(e.to_string()),
                _ => CliError::NotFactorable(e.to_string()),
            })?;
            let m = fact
                .monomial
                .ok_or_else(|| CliError::NotFactorable(format!("no closed form: symmetric part {} is not a single power plus a constant", fact.p)))?;
            return general_waveform(&m, p.branch("branch")?, p.real("K")?, p.real("phase")?)
                .map(|w| w.with_root_sign(p.branch("sign").unwrap_or(Branch::Plus)))
                .map_err(input);
        }
    };
    w.map_err(input)
}

/// Time window: `t0`/`t1` when given, else the waveform's default window.
pub fn window(p: &Params, w: &ClosedFormWaveform) -> Result<(f64, f64), CliError> {
    let (d0, d1) = w.window();
    let t0 = p.opt_real("t0")?.unwrap_or(d0);
    let t1 = p.opt_real("t1")?.unwrap_or(d1);
    if !(t1 > t0) {
        return Err(CliError::Input(format!("empty time span [{t0}, {t1}]")));
    }
    Ok((t0, t1))
}
