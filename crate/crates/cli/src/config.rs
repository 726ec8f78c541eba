//! Plain-text key-value run configuration.
//!
//! The format is one `key = value` pair per line; `#` starts a comment.
//! Unknown keys are rejected, every violated constraint names its key, and
//! `parse(serialize(cfg))` round-trips exactly.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error at `{}`: {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: key.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Simulate,
    Proximity,
    BlowupScan,
    ZeroBc,
    Lifespan,
    Equivalence,
    Besse,
}

impl Experiment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::Proximity => "proximity",
            Experiment::BlowupScan => "blowup-scan",
            Experiment::ZeroBc => "zero-bc",
            Experiment::Lifespan => "lifespan",
            Experiment::Equivalence => "equivalence",
            Experiment::Besse => "besse",
        }
    }
}

/// Validated run configuration with defaults mirroring the reference
/// experiments (`Δt = 0.01`, tolerance `1e-10`, `L = 300`, `h = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub output_dir: String,
    pub sample_every: usize,
    pub threads: usize,
    pub full_state: bool,

    // grid
    pub l: f64,
    pub h: f64,
    pub boundary: String, // periodic | dirichlet

    // integrator
    pub dt: f64,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub krylov_tol: f64,
    pub krylov_max_iter: usize,
    pub complex_step: f64,
    pub overflow_threshold: f64,
    pub method: String, // gl4 | rk4

    // model
    pub equation: String, // gal | gdnls | modified-gal | modified-gdnls
    pub p: f64,
    pub mu: f64,
    pub gamma: f64,
    pub nonlinearity: String, // power | saturable
    pub lambda: f64,
    pub q0: f64,

    // run
    pub t_end: f64,
    pub t_max: f64,
    pub ic: String, // sech-background | zero-sech | continuum-sech | soliton | peregrine
    pub amplitude: f64,
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,

    // experiment-specific
    pub p1: f64,
    pub p2: f64,
    pub q0_list: Vec<f64>,
    pub h_list: Vec<f64>,
    pub a_list: Vec<f64>,
    pub p_list: Vec<f64>,
    pub besse_mu: f64,
    pub lifespan_model: String, // gal | gdnls
    pub eps_list: Vec<f64>,
    pub a0: f64,
    pub b_q0: f64,
    pub b_inf: f64,
    pub b_prime: f64,
    pub b_dev: f64,
    pub b_second: f64,
    pub k_lip: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Simulate,
            output_dir: "out".into(),
            sample_every: 100,
            threads: 0,
            full_state: false,
            l: 300.0,
            h: 1.0,
            boundary: "periodic".into(),
            dt: 0.01,
            newton_tol: 1e-10,
            newton_max_iter: 8,
            krylov_tol: 1e-12,
            krylov_max_iter: 200,
            complex_step: 1e-100,
            overflow_threshold: 1e8,
            method: "gl4".into(),
            equation: "gal".into(),
            p: 1.0,
            mu: 1.0,
            gamma: 1.0,
            nonlinearity: "power".into(),
            lambda: 1.0,
            q0: 0.1,
            t_end: 100.0,
            t_max: 2000.0,
            ic: "sech-background".into(),
            amplitude: 1.0,
            alpha: 0.0,
            beta: 1.0,
            q: 1.0,
            p1: 1.0,
            p2: 1.0,
            q0_list: vec![0.1, 0.12, 0.14, 0.16, 0.18, 0.19, 0.2],
            h_list: vec![0.2, 0.1, 0.05],
            a_list: vec![1.8, 2.0, 2.2],
            p_list: vec![2.0, 3.0],
            besse_mu: 2.0,
            lifespan_model: "gal".into(),
            eps_list: vec![],
            a0: 1.0,
            b_q0: 1.0,
            b_inf: 1.0,
            b_prime: 0.0,
            b_dev: 0.0,
            b_second: 0.0,
            k_lip: 0.0,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, ConfigError> {
    v.parse::<f64>()
        .map_err(|_| err(key, format!("`{v}` is not a number")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize, ConfigError> {
    v.parse::<usize>()
        .map_err(|_| err(key, format!("`{v}` is not a non-negative integer")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(err(key, format!("`{v}` is not a boolean"))),
    }
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    if v.trim().is_empty() {
        return Ok(vec![]);
    }
    v.split(',')
        .map(|s| parse_f64(key, s.trim()))
        .collect()
}

fn fmt_f64(x: f64) -> String {
    // shortest round-trip representation keeps serialization exact
    format!("{x:?}")
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(",")
}

/// Applies one `key = value` assignment.
pub fn apply_key(cfg: &mut RunConfig, key: &str, value: &str) -> Result<(), ConfigError> {
    match key {
        "experiment" => {
            cfg.experiment = match value {
                "simulate" => Experiment::Simulate,
                "proximity" => Experiment::Proximity,
                "blowup-scan" => Experiment::BlowupScan,
                "zero-bc" => Experiment::ZeroBc,
                "lifespan" => Experiment::Lifespan,
                "equivalence" => Experiment::Equivalence,
                "besse" => Experiment::Besse,
                _ => return Err(err(key, format!("unknown experiment `{value}`"))),
            }
        }
        "output_dir" => cfg.output_dir = value.into(),
        "sample_every" => cfg.sample_every = parse_usize(key, value)?,
        "threads" => cfg.threads = parse_usize(key, value)?,
        "full_state" => cfg.full_state = parse_bool(key, value)?,
        "l" => cfg.l = parse_f64(key, value)?,
        "h" => cfg.h = parse_f64(key, value)?,
        "boundary" => cfg.boundary = value.into(),
        "dt" => cfg.dt = parse_f64(key, value)?,
        "newton_tol" => cfg.newton_tol = parse_f64(key, value)?,
        "newton_max_iter" => cfg.newton_max_iter = parse_usize(key, value)?,
        "krylov_tol" => cfg.krylov_tol = parse_f64(key, value)?,
        "krylov_max_iter" => cfg.krylov_max_iter = parse_usize(key, value)?,
        "complex_step" => cfg.complex_step = parse_f64(key, value)?,
        "overflow_threshold" => cfg.overflow_threshold = parse_f64(key, value)?,
        "method" => cfg.method = value.into(),
        "equation" => cfg.equation = value.into(),
        "p" => cfg.p = parse_f64(key, value)?,
        "mu" => cfg.mu = parse_f64(key, value)?,
        "gamma" => cfg.gamma = parse_f64(key, value)?,
        "nonlinearity" => cfg.nonlinearity = value.into(),
        "lambda" => cfg.lambda = parse_f64(key, value)?,
        "q0" => cfg.q0 = parse_f64(key, value)?,
        "t_end" => cfg.t_end = parse_f64(key, value)?,
        "t_max" => cfg.t_max = parse_f64(key, value)?,
        "ic" => cfg.ic = value.into(),
        "amplitude" => cfg.amplitude = parse_f64(key, value)?,
        "alpha" => cfg.alpha = parse_f64(key, value)?,
        "beta" => cfg.beta = parse_f64(key, value)?,
        "q" => cfg.q = parse_f64(key, value)?,
        "p1" => cfg.p1 = parse_f64(key, value)?,
        "p2" => cfg.p2 = parse_f64(key, value)?,
        "q0_list" => cfg.q0_list = parse_list(key, value)?,
        "h_list" => cfg.h_list = parse_list(key, value)?,
        "a_list" => cfg.a_list = parse_list(key, value)?,
        "p_list" => cfg.p_list = parse_list(key, value)?,
        "besse_mu" => cfg.besse_mu = parse_f64(key, value)?,
        "lifespan_model" => cfg.lifespan_model = value.into(),
        "eps_list" => cfg.eps_list = parse_list(key, value)?,
        "a0" => cfg.a0 = parse_f64(key, value)?,
        "b_q0" => cfg.b_q0 = parse_f64(key, value)?,
        "b_inf" => cfg.b_inf = parse_f64(key, value)?,
        "b_prime" => cfg.b_prime = parse_f64(key, value)?,
        "b_dev" => cfg.b_dev = parse_f64(key, value)?,
        "b_second" => cfg.b_second = parse_f64(key, value)?,
        "k_lip" => cfg.k_lip = parse_f64(key, value)?,
        _ => return Err(err(key, "unknown key")),
    }
    Ok(())
}

/// Parses a config document without validating (callers may still apply
/// command-line overrides before the final validation).
pub fn parse_document(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen = BTreeSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(
                &format!("line {}", lineno + 1),
                format!("`{line}` is not a `key = value` pair"),
            ));
        };
        let key = key.trim();
        let value = value.trim();
        if !seen.insert(key.to_string()) {
            return Err(err(key, "duplicate key"));
        }
        apply_key(&mut cfg, key, value)?;
    }
    Ok(cfg)
}

/// Parses a config document, applying defaults for absent keys and
/// validating the result.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let cfg = parse_document(text)?;
    validate(&cfg)?;
    Ok(cfg)
}

pub fn validate(cfg: &RunConfig) -> Result<(), ConfigError> {
    if !(cfg.dt > 0.0) {
        return Err(err("dt", "must be positive"));
    }
    if !(cfg.h > 0.0) {
        return Err(err("h", "must be positive"));
    }
    if !(cfg.l > 0.0) {
        return Err(err("l", "must be positive"));
    }
    if !(cfg.newton_tol > 0.0) {
        return Err(err("newton_tol", "must be positive"));
    }
    if !(cfg.krylov_tol > 0.0) {
        return Err(err("krylov_tol", "must be positive"));
    }
    if !(cfg.complex_step > 0.0) {
        return Err(err("complex_step", "must be positive"));
    }
    if !(cfg.overflow_threshold > 0.0) {
        return Err(err("overflow_threshold", "must be positive"));
    }
    if cfg.newton_max_iter == 0 {
        return Err(err("newton_max_iter", "must be positive"));
    }
    if cfg.krylov_max_iter == 0 {
        return Err(err("krylov_max_iter", "must be positive"));
    }
    if cfg.sample_every == 0 {
        return Err(err("sample_every", "must be positive"));
    }
    if !(cfg.t_end >= 0.0) {
        return Err(err("t_end", "must be non-negative"));
    }
    if !(cfg.t_max > 0.0) {
        return Err(err("t_max", "must be positive"));
    }
    if !(cfg.p >= 1.0) {
        return Err(err("p", "nonlinearity exponent must be >= 1"));
    }
    if !(cfg.p1 >= 1.0) {
        return Err(err("p1", "nonlinearity exponent must be >= 1"));
    }
    if !(cfg.p2 >= 1.0) {
        return Err(err("p2", "nonlinearity exponent must be >= 1"));
    }
    if !(cfg.q0 >= 0.0) {
        return Err(err("q0", "must be non-negative"));
    }
    if !(cfg.lambda > 0.0) {
        return Err(err("lambda", "must be positive"));
    }
    match cfg.boundary.as_str() {
        "periodic" | "dirichlet" => {}
        other => return Err(err("boundary", format!("unknown boundary `{other}`"))),
    }
    match cfg.method.as_str() {
        "gl4" | "rk4" => {}
        other => return Err(err("method", format!("unknown method `{other}`"))),
    }
    match cfg.equation.as_str() {
        "gal" | "gdnls" | "modified-gal" | "modified-gdnls" => {}
        other => return Err(err("equation", format!("unknown equation `{other}`"))),
    }
    match cfg.nonlinearity.as_str() {
        "power" | "saturable" => {}
        other => return Err(err("nonlinearity", format!("unknown nonlinearity `{other}`"))),
    }
    match cfg.ic.as_str() {
        "sech-background" | "zero-sech" | "continuum-sech" | "soliton" | "peregrine" => {}
        other => return Err(err("ic", format!("unknown initial condition `{other}`"))),
    }
    match cfg.lifespan_model.as_str() {
        "gal" | "gdnls" => {}
        other => return Err(err("lifespan_model", format!("unknown model `{other}`"))),
    }
    for (key, list) in [
        ("q0_list", &cfg.q0_list),
        ("h_list", &cfg.h_list),
        ("a_list", &cfg.a_list),
        ("p_list", &cfg.p_list),
        ("eps_list", &cfg.eps_list),
    ] {
        if list.iter().any(|x| !x.is_finite()) {
            return Err(err(key, "entries must be finite"));
        }
    }
    Ok(())
}

/// Canonical serialization: every key, one per line, sorted.
pub fn serialize_config(cfg: &RunConfig) -> String {
    let mut pairs: Vec<(&str, String)> = vec![
        ("experiment", cfg.experiment.as_str().into()),
        ("output_dir", cfg.output_dir.clone()),
        ("sample_every", cfg.sample_every.to_string()),
        ("threads", cfg.threads.to_string()),
        ("full_state", cfg.full_state.to_string()),
        ("l", fmt_f64(cfg.l)),
        ("h", fmt_f64(cfg.h)),
        ("boundary", cfg.boundary.clone()),
        ("dt", fmt_f64(cfg.dt)),
        ("newton_tol", fmt_f64(cfg.newton_tol)),
        ("newton_max_iter", cfg.newton_max_iter.to_string()),
        ("krylov_tol", fmt_f64(cfg.krylov_tol)),
        ("krylov_max_iter", cfg.krylov_max_iter.to_string()),
        ("complex_step", fmt_f64(cfg.complex_step)),
        ("overflow_threshold", fmt_f64(cfg.overflow_threshold)),
        ("method", cfg.method.clone()),
        ("equation", cfg.equation.clone()),
        ("p", fmt_f64(cfg.p)),
        ("mu", fmt_f64(cfg.mu)),
        ("gamma", fmt_f64(cfg.gamma)),
        ("nonlinearity", cfg.nonlinearity.clone()),
        ("lambda", fmt_f64(cfg.lambda)),
        ("q0", fmt_f64(cfg.q0)),
        ("t_end", fmt_f64(cfg.t_end)),
        ("t_max", fmt_f64(cfg.t_max)),
        ("ic", cfg.ic.clone()),
        ("amplitude", fmt_f64(cfg.amplitude)),
        ("alpha", fmt_f64(cfg.alpha)),
        ("beta", fmt_f64(cfg.beta)),
        ("q", fmt_f64(cfg.q)),
        ("p1", fmt_f64(cfg.p1)),
        ("p2", fmt_f64(cfg.p2)),
        ("q0_list", fmt_list(&cfg.q0_list)),
        ("h_list", fmt_list(&cfg.h_list)),
        ("a_list", fmt_list(&cfg.a_list)),
        ("p_list", fmt_list(&cfg.p_list)),
        ("besse_mu", fmt_f64(cfg.besse_mu)),
        ("lifespan_model", cfg.lifespan_model.clone()),
        ("eps_list", fmt_list(&cfg.eps_list)),
        ("a0", fmt_f64(cfg.a0)),
        ("b_q0", fmt_f64(cfg.b_q0)),
        ("b_inf", fmt_f64(cfg.b_inf)),
        ("b_prime", fmt_f64(cfg.b_prime)),
        ("b_dev", fmt_f64(cfg.b_dev)),
        ("b_second", fmt_f64(cfg.b_second)),
        ("k_lip", fmt_f64(cfg.k_lip)),
    ];
    pairs.sort_by(|a, b| a.0.cmp(b.0));
    let mut out = String::new();
    for (k, v) in pairs {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    }
    out
}
