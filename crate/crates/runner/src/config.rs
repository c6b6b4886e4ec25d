//! Run configuration in a sectioned `key = value` text format.
//!
//! ```text
//! # comment
//! [run]
//! experiment = simulate2d
//! seed = 7
//!
//! [grid]
//! n = 128
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Every key belongs to
//! a section; unknown sections or keys, repeated keys and malformed values
//! are errors carrying the 1-based line number. Lists are comma separated and
//! wavevectors are written `kx,ky`. [`RunConfig::serialize`] writes every
//! field, so `parse(serialize(c)) == c`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}` in section [{section}]")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("line {line}: unknown section [{section}]")]
    UnknownSection { line: usize, section: String },
    #[error("line {line}: bad value for `{key}`: {msg}")]
    BadValue { line: usize, key: String, msg: String },
    #[error("line {line}: `{key}` out of range: {msg}")]
    Range { line: usize, key: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Simulate2d,
    Blob,
    Ch,
    Curvature,
    ViscLimit,
    AlphaSweep,
    Jacobi,
    Flowmap,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Simulate2d,
        Experiment::Blob,
        Experiment::Ch,
        Experiment::Curvature,
        Experiment::ViscLimit,
        Experiment::AlphaSweep,
        Experiment::Jacobi,
        Experiment::Flowmap,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Simulate2d => "simulate2d",
            Experiment::Blob => "blob",
            Experiment::Ch => "ch",
            Experiment::Curvature => "curvature",
            Experiment::ViscLimit => "visc-limit",
            Experiment::AlphaSweep => "alpha-sweep",
            Experiment::Jacobi => "jacobi",
            Experiment::Flowmap => "flowmap",
        }
    }
}

impl FromStr for Experiment {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dissipation {
    Inviscid,
    Viscous,
    Strong,
}

impl Dissipation {
    pub fn name(&self) -> &'static str {
        match self {
            Dissipation::Inviscid => "inviscid",
            Dissipation::Viscous => "viscous",
            Dissipation::Strong => "strong",
        }
    }
}

impl FromStr for Dissipation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inviscid" => Ok(Self::Inviscid),
            "viscous" => Ok(Self::Viscous),
            "strong" => Ok(Self::Strong),
            _ => Err(format!("expected inviscid, viscous or strong, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    SingleMode,
    TwoMode,
    RandomSeeded,
    BlobRing,
}

impl Preset {
    fn name(&self) -> &'static str {
        match self {
            Preset::SingleMode => "single_mode",
            Preset::TwoMode => "two_mode",
            Preset::RandomSeeded => "random_seeded",
            Preset::BlobRing => "blob_ring",
        }
    }
}

impl FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        [
            Preset::SingleMode,
            Preset::TwoMode,
            Preset::RandomSeeded,
            Preset::BlobRing,
        ]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| format!("unknown preset `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChBc {
    Dirichlet,
    Periodic,
}

impl FromStr for ChBc {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dirichlet" => Ok(Self::Dirichlet),
            "periodic" => Ok(Self::Periodic),
            _ => Err(format!("expected dirichlet or periodic, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowKind {
    Riemannian,
    Group,
}

impl FromStr for FlowKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "riemannian" => Ok(Self::Riemannian),
            "group" => Ok(Self::Group),
            _ => Err(format!("expected riemannian or group, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    // [run]
    pub experiment: Experiment,
    pub seed: u64,
    pub resume: Option<String>,
    // [grid]
    pub n: usize,
    pub length: f64,
    // [time]
    pub t_end: f64,
    pub dt: f64,
    pub output_every: usize,
    pub checkpoint_every: usize,
    // [physics]
    pub alpha: f64,
    pub nu: f64,
    pub dissipation: Dissipation,
    // [initial]
    pub preset: Preset,
    pub k1: [i64; 2],
    pub k2: [i64; 2],
    pub amps: [f64; 2],
    pub slope: f64,
    pub kmax: i64,
    pub blobs: usize,
    pub radius: f64,
    pub gamma: f64,
    // [ch]
    pub ch_n: usize,
    pub ch_bc: ChBc,
    pub ch_amplitude: f64,
    pub ch_lagrangian: bool,
    // [geometry]
    pub geo_n: usize,
    pub k: [i64; 2],
    pub l: [i64; 2],
    pub eps: [i64; 2],
    pub alphas: Vec<f64>,
    // [sweep]
    pub nus: Vec<f64>,
    pub variants: Vec<Dissipation>,
    // [jacobi]
    pub jacobi_eps: Vec<f64>,
    // [flowmap]
    pub m: usize,
    pub map_dt: f64,
    pub kind: FlowKind,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Simulate2d,
            seed: 0,
            resume: None,
            n: 64,
            length: 2.0 * std::f64::consts::PI,
            t_end: 1.0,
            dt: 1e-3,
            output_every: 10,
            checkpoint_every: 0,
            alpha: 0.2,
            nu: 0.0,
            dissipation: Dissipation::Inviscid,
            preset: Preset::TwoMode,
            k1: [1, 0],
            k2: [1, 1],
            amps: [0.4, 0.2],
            slope: 2.0,
            kmax: 8,
            blobs: 2,
            radius: 0.5,
            gamma: 1.0,
            ch_n: 512,
            ch_bc: ChBc::Dirichlet,
            ch_amplitude: 0.1,
            ch_lagrangian: false,
            geo_n: 16,
            k: [1, 0],
            l: [0, 1],
            eps: [0, 1],
            alphas: vec![0.0, 0.25, 0.5, 1.0],
            nus: vec![1e-1, 1e-2, 1e-3, 1e-4],
            variants: vec![Dissipation::Viscous, Dissipation::Strong],
            jacobi_eps: vec![1e-4, 5e-5],
            m: 32,
            map_dt: 1e-2,
            kind: FlowKind::Riemannian,
        }
    }
}

fn list<T: FromStr>(v: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    v.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|e| format!("`{}`: {e}", s.trim())))
        .collect()
}

fn pair<T: FromStr + Copy>(v: &str) -> Result<[T; 2], String>
where
    T::Err: std::fmt::Display,
{
    let xs = list::<T>(v)?;
    match xs.as_slice() {
        [a, b] => Ok([*a, *b]),
        _ => Err(format!("expected two comma-separated values, got {}", xs.len())),
    }
}

fn scalar<T: FromStr>(v: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>().map_err(|e| e.to_string())
}

fn f64s(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

fn ints(xs: &[i64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

const SECTIONS: [&str; 10] = [
    "run", "grid", "time", "physics", "initial", "ch", "geometry", "sweep", "jacobi", "flowmap",
];

impl RunConfig {
    fn set(&mut self, section: &str, key: &str, v: &str) -> Result<bool, String> {
        match (section, key) {
            ("run", "experiment") => self.experiment = v.parse()?,
            ("run", "seed") => self.seed = scalar(v)?,
            ("run", "resume") => self.resume = Some(v.to_string()),
            ("grid", "n") => self.n = scalar(v)?,
            ("grid", "length") => self.length = scalar(v)?,
            ("time", "t_end") => self.t_end = scalar(v)?,
            ("time", "dt") => self.dt = scalar(v)?,
            ("time", "output_every") => self.output_every = scalar(v)?,
            ("time", "checkpoint_every") => self.checkpoint_every = scalar(v)?,
            ("physics", "alpha") => self.alpha = scalar(v)?,
            ("physics", "nu") => self.nu = scalar(v)?,
            ("physics", "dissipation") => self.dissipation = v.parse()?,
            ("initial", "preset") => self.preset = v.parse()?,
            ("initial", "k1") => self.k1 = pair(v)?,
            ("initial", "k2") => self.k2 = pair(v)?,
            ("initial", "amps") => self.amps = pair(v)?,
            ("initial", "slope") => self.slope = scalar(v)?,
            ("initial", "kmax") => self.kmax = scalar(v)?,
            ("initial", "blobs") => self.blobs = scalar(v)?,
            ("initial", "radius") => self.radius = scalar(v)?,
            ("initial", "gamma") => self.gamma = scalar(v)?,
            ("ch", "n") => self.ch_n = scalar(v)?,
            ("ch", "bc") => self.ch_bc = v.parse()?,
            ("ch", "amplitude") => self.ch_amplitude = scalar(v)?,
            ("ch", "lagrangian") => self.ch_lagrangian = scalar(v)?,
            ("geometry", "n") => self.geo_n = scalar(v)?,
            ("geometry", "k") => self.k = pair(v)?,
            ("geometry", "l") => self.l = pair(v)?,
            ("geometry", "eps") => self.eps = pair(v)?,
            ("geometry", "alphas") => self.alphas = list(v)?,
            ("sweep", "nus") => self.nus = list(v)?,
            ("sweep", "variants") => self.variants = list(v)?,
            ("jacobi", "eps") => self.jacobi_eps = list(v)?,
            ("flowmap", "m") => self.m = scalar(v)?,
            ("flowmap", "map_dt") => self.map_dt = scalar(v)?,
            ("flowmap", "kind") => self.kind = v.parse()?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Every field in canonical form; the input of the config hash.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let kind = match self.kind {
            FlowKind::Riemannian => "riemannian",
            FlowKind::Group => "group",
        };
        let bc = match self.ch_bc {
            ChBc::Dirichlet => "dirichlet",
            ChBc::Periodic => "periodic",
        };
        let variants = self.variants.iter().map(|d| d.name()).collect::<Vec<_>>().join(", ");
        let _ = writeln!(
            s,
            "[run]\nexperiment = {}\nseed = {}",
            self.experiment.name(),
            self.seed
        );
        if let Some(r) = &self.resume {
            let _ = writeln!(s, "resume = {r}");
        }
        let _ = writeln!(s, "\n[grid]\nn = {}\nlength = {:?}", self.n, self.length);
        let _ = writeln!(
            s,
            "\n[time]\nt_end = {:?}\ndt = {:?}\noutput_every = {}\ncheckpoint_every = {}",
            self.t_end, self.dt, self.output_every, self.checkpoint_every
        );
        let _ = writeln!(
            s,
            "\n[physics]\nalpha = {:?}\nnu = {:?}\ndissipation = {}",
            self.alpha,
            self.nu,
            self.dissipation.name()
        );
        let _ = writeln!(
            s,
            "\n[initial]\npreset = {}\nk1 = {}\nk2 = {}\namps = {}\nslope = {:?}\nkmax = {}\nblobs = {}\nradius = {:?}\ngamma = {:?}",
            self.preset.name(),
            ints(&self.k1),
            ints(&self.k2),
            f64s(&self.amps),
            self.slope,
            self.kmax,
            self.blobs,
            self.radius,
            self.gamma
        );
        let _ = writeln!(
            s,
            "\n[ch]\nn = {}\nbc = {bc}\namplitude = {:?}\nlagrangian = {}",
            self.ch_n, self.ch_amplitude, self.ch_lagrangian
        );
        let _ = writeln!(
            s,
            "\n[geometry]\nn = {}\nk = {}\nl = {}\neps = {}\nalphas = {}",
            self.geo_n,
            ints(&self.k),
            ints(&self.l),
            ints(&self.eps),
            f64s(&self.alphas)
        );
        let _ = writeln!(s, "\n[sweep]\nnus = {}\nvariants = {variants}", f64s(&self.nus));
        let _ = writeln!(s, "\n[jacobi]\neps = {}", f64s(&self.jacobi_eps));
        let _ = writeln!(
            s,
            "\n[flowmap]\nm = {}\nmap_dt = {:?}\nkind = {kind}",
            self.m, self.map_dt
        );
        s
    }

    fn validate(&self, lines: &BTreeMap<String, usize>) -> Result<(), ConfigError> {
        let range = |key: &str, ok: bool, msg: &str| -> Result<(), ConfigError> {
            if ok {
                Ok(())
            } else {
                Err(ConfigError::Range {
                    line: lines.get(key).copied().unwrap_or(0),
                    key: key.to_string(),
                    msg: msg.to_string(),
                })
            }
        };
        let pos = |x: f64| x > 0.0 && x.is_finite();
        range(
            "grid.n",
            self.n >= 8 && self.n % 2 == 0 && self.n <= 4096,
            "must be even, in [8, 4096]",
        )?;
        range("grid.length", pos(self.length), "must be positive")?;
        range(
            "time.t_end",
            self.t_end >= 0.0 && self.t_end.is_finite(),
            "must be non-negative",
        )?;
        range("time.dt", pos(self.dt), "must be positive")?;
        range("time.output_every", self.output_every >= 1, "must be at least 1")?;
        range(
            "physics.alpha",
            self.alpha >= 0.0 && self.alpha.is_finite(),
            "must be non-negative",
        )?;
        range(
            "physics.nu",
            self.nu >= 0.0 && self.nu.is_finite(),
            "must be non-negative",
        )?;
        range(
            "physics.nu",
            self.dissipation == Dissipation::Inviscid || self.nu > 0.0,
            "dissipative runs need nu > 0",
        )?;
        range(
            "initial.amps",
            self.amps.iter().all(|a| a.is_finite()),
            "must be finite",
        )?;
        range("initial.kmax", self.kmax >= 1, "must be at least 1")?;
        range("initial.slope", self.slope.is_finite(), "must be finite")?;
        range("initial.blobs", self.blobs >= 1, "must be at least 1")?;
        range("initial.radius", pos(self.radius), "must be positive")?;
        range("initial.gamma", self.gamma.is_finite(), "must be finite")?;
        range("ch.n", self.ch_n >= 8, "must be at least 8")?;
        range("ch.amplitude", self.ch_amplitude.is_finite(), "must be finite")?;
        range(
            "geometry.n",
            self.geo_n >= 8 && self.geo_n % 2 == 0,
            "must be even and at least 8",
        )?;
        range(
            "geometry.alphas",
            !self.alphas.is_empty() && self.alphas.iter().all(|a| *a >= 0.0 && a.is_finite()),
            "must be a non-empty list of non-negative values",
        )?;
        range(
            "sweep.nus",
            !self.nus.is_empty() && self.nus.iter().all(|x| pos(*x)),
            "must be a non-empty list of positive values",
        )?;
        range(
            "sweep.variants",
            !self.variants.is_empty() && !self.variants.contains(&Dissipation::Inviscid),
            "must list viscous and/or strong",
        )?;
        range(
            "jacobi.eps",
            !self.jacobi_eps.is_empty() && self.jacobi_eps.iter().all(|x| pos(*x)),
            "must be a non-empty list of positive values",
        )?;
        range("flowmap.m", self.m >= 8, "must be at least 8")?;
        range("flowmap.map_dt", pos(self.map_dt), "must be positive")?;
        Ok(())
    }
}

/// Parses and validates a configuration; missing keys take their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_keys(text).map(|(c, _)| c)
}

/// As [`parse_config`], also returning the explicitly set keys
/// (`section.key`) with their line numbers.
pub fn parse_config_keys(text: &str) -> Result<(RunConfig, BTreeMap<String, usize>), ConfigError> {
    let mut cfg = RunConfig::default();
    let mut section: Option<String> = None;
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(rest) = t.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line,
                msg: "unterminated section header".into(),
            })?;
            let name = name.trim();
            if !SECTIONS.contains(&name) {
                return Err(ConfigError::UnknownSection {
                    line,
                    section: name.into(),
                });
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = t.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            msg: format!("expected `key = value`, got `{t}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let sec = section.as_deref().ok_or_else(|| ConfigError::Syntax {
            line,
            msg: format!("key `{key}` appears before any [section]"),
        })?;
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                msg: "empty key or value".into(),
            });
        }
        let full = format!("{sec}.{key}");
        if let Some(prev) = seen.get(&full) {
            return Err(ConfigError::Syntax {
                line,
                msg: format!("`{full}` already set on line {prev}"),
            });
        }
        match cfg.set(sec, key, value) {
            Ok(true) => {}
            Ok(false) => {
                return Err(ConfigError::UnknownKey {
                    line,
                    section: sec.into(),
                    key: key.into(),
                })
            }
            Err(msg) => return Err(ConfigError::BadValue { line, key: full, msg }),
        }
        seen.insert(full, line);
    }
    cfg.validate(&seen)?;
    Ok((cfg, seen))
}
