//! Run configuration: defaults, an optional `key = value` file, and flags,
//! merged in that order of increasing precedence.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::{Deserialize, Deserializer};

use spectral_flow::cycle::{BPrimeForm, CycleKind, Region};
use spectral_flow::flow::weyl_k_max;
use spectral_flow::spectrum::{Geometry, MetalMean};
use spectral_flow::web::LinkLengths;

use crate::format::sig;

/// `L1/L2`: a metal mean or an explicit positive ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ratio {
    Metal(MetalMean),
    Explicit(f64),
}

impl Ratio {
    pub fn value(self) -> f64 {
        match self {
            Ratio::Metal(m) => m.ratio(),
            Ratio::Explicit(r) => r,
        }
    }
}

impl FromStr for Ratio {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "golden" => Ok(Ratio::Metal(MetalMean::Golden)),
            "silver" => Ok(Ratio::Metal(MetalMean::Silver)),
            "bronze" => Ok(Ratio::Metal(MetalMean::Bronze)),
            other => match other.parse::<f64>() {
                Ok(r) if r > 0.0 && r.is_finite() => Ok(Ratio::Explicit(r)),
                _ => Err(format!("ratio must be golden, silver, bronze or a positive number, got `{s}`")),
            },
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Metal(m) => f.write_str(m.as_str()),
            Ratio::Explicit(r) => f.write_str(&sig(*r)),
        }
    }
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub cycle: CycleKind,
    pub t: f64,
    pub s: f64,
    pub ratio: Ratio,
    pub length: f64,
    pub theta_steps: usize,
    /// `None`: enough for about twelve levels.
    pub k_max: Option<f64>,
    /// `None`: levels at θ = 0 minus two (flow), five (web).
    pub levels: Option<usize>,
    pub include_zero_mode: bool,
    pub emit_plot: bool,
    pub out: PathBuf,
    /// Angle for `spectrum` and `web`.
    pub theta: Option<f64>,
    /// Hold the condition at this angle while θ sweeps.
    pub frozen: Option<f64>,
    pub sector: Option<Region>,
    pub epsilons: Vec<f64>,
    pub web_geometry: Option<PathBuf>,
    pub web_links: LinkLengths,
    pub b_prime: BPrimeForm,
    /// θ samples for `validate`.
    pub samples: usize,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            cycle: CycleKind::Long,
            t: 0.1,
            s: 1.0,
            ratio: Ratio::Metal(MetalMean::Bronze),
            length: 1.0,
            theta_steps: 720,
            k_max: None,
            levels: None,
            include_zero_mode: true,
            emit_plot: false,
            out: PathBuf::from("out"),
            theta: None,
            frozen: None,
            sector: None,
            epsilons: vec![1e-2, 1e-3, 1e-4],
            web_geometry: None,
            web_links: LinkLengths::CouplingScaled,
            b_prime: BPrimeForm::Corrected,
            samples: 10_000,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn geometry(&self) -> Result<Geometry<f64>, String> {
        Geometry::from_ratio(self.ratio.value(), self.length).map_err(|e| e.to_string())
    }

    pub fn k_max_resolved(&self) -> Result<f64, String> {
        Ok(match self.k_max {
            Some(k) => k,
            None => weyl_k_max(&self.geometry()?, 12),
        })
    }

    /// The effective configuration as a loadable config file.
    pub fn to_file_text(&self) -> String {
        let opt = |key: &str, v: Option<String>, note: &str| match v {
            Some(v) => format!("{key} = {v}\n"),
            None => format!("# {key} = {note}\n"),
        };
        let mut s = String::new();
        s += &format!("cycle = \"{}\"\n", self.cycle);
        s += &format!("t = {}\n", sig(self.t));
        s += &format!("s = {}\n", sig(self.s));
        s += &format!("ratio = \"{}\"\n", self.ratio);
        s += &format!("length = {}\n", sig(self.length));
        s += &format!("theta_steps = {}\n", self.theta_steps);
        s += &opt("k_max", self.k_max.map(sig), "auto (about twelve levels)");
        s += &opt("levels", self.levels.map(|n| n.to_string()), "auto (levels at theta = 0 minus two; five for web)");
        s += &format!("include_zero_mode = {}\n", self.include_zero_mode);
        s += &format!("emit_plot = {}\n", self.emit_plot);
        s += &format!("out = \"{}\"\n", self.out.display());
        s += &opt("theta", self.theta.map(sig), "unset (0 for spectrum, sector midpoint for web)");
        s += &opt("frozen", self.frozen.map(sig), "unset");
        s += &opt("sector", self.sector.map(|r| format!("\"{r}\"")), "unset (region of theta)");
        let eps: Vec<String> = self.epsilons.iter().map(|e| sig(*e)).collect();
        s += &format!("epsilons = \"{}\"\n", eps.join(","));
        s += &opt("web_geometry", self.web_geometry.as_ref().map(|p| format!("\"{}\"", p.display())), "unset (built-in webs)");
        s += &format!("web_links = \"{}\"\n", links_name(self.web_links));
        s += &format!("b_prime = \"{}\"\n", bprime_name(self.b_prime));
        s += &format!("samples = {}\n", self.samples);
        s += &opt("threads", self.threads.map(|n| n.to_string()), "unset (all cores)");
        s
    }
}

fn links_name(l: LinkLengths) -> &'static str {
    match l {
        LinkLengths::CouplingScaled => "scaled",
        LinkLengths::Uniform => "uniform",
    }
}

fn bprime_name(b: BPrimeForm) -> &'static str {
    match b {
        BPrimeForm::Corrected => "corrected",
        BPrimeForm::Printed => "printed",
    }
}

/// Accepts `ratio = 2.5` as well as `ratio = "2.5"`.
fn string_or_number<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        S(String),
        F(f64),
        I(i64),
    }
    Ok(Option::<Raw>::deserialize(d)?.map(|r| match r {
        Raw::S(s) => s,
        Raw::F(f) => f.to_string(),
        Raw::I(i) => i.to_string(),
    }))
}

/// Settings that may come from flags or the config file. Unset fields keep
/// the lower-precedence value.
#[derive(Args, Deserialize, Clone, Debug, Default, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// Parameter cycle: long | short.
    #[arg(long, global = true, value_name = "KIND")]
    pub cycle: Option<String>,
    /// Coupling scale t > 0.
    #[arg(long, global = true, value_name = "REAL")]
    pub t: Option<f64>,
    /// Coupling scale s > 0.
    #[arg(long, global = true, value_name = "REAL")]
    pub s: Option<f64>,
    /// L1/L2: golden | silver | bronze | <positive real>.
    #[arg(long, global = true, value_name = "RATIO")]
    #[serde(default, deserialize_with = "string_or_number")]
    pub ratio: Option<String>,
    /// Total length L1 + L2.
    #[arg(long, global = true, value_name = "REAL")]
    pub length: Option<f64>,
    /// θ grid steps over one cycle.
    #[arg(long, global = true, value_name = "INT")]
    pub theta_steps: Option<usize>,
    /// Upper end of the wavenumber window.
    #[arg(long, global = true, value_name = "REAL")]
    pub k_max: Option<f64>,
    /// Level count N for permutations and web studies.
    #[arg(long, global = true, value_name = "INT")]
    pub levels: Option<usize>,
    /// Report k = 0 when it is an eigenvalue.
    #[arg(long, global = true, value_name = "BOOL")]
    pub include_zero_mode: Option<bool>,
    /// Also write an SVG plot.
    #[arg(long, global = true, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    pub emit_plot: Option<bool>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Angle for `spectrum` and `web`.
    #[arg(long, global = true, value_name = "RADIANS")]
    pub theta: Option<f64>,
    /// Freeze the condition at this angle while θ sweeps.
    #[arg(long, global = true, value_name = "RADIANS")]
    pub frozen: Option<f64>,
    /// Web sector I..VI.
    #[arg(long, global = true, value_name = "REGION")]
    pub sector: Option<String>,
    /// Comma-separated decreasing ε values.
    #[arg(long, global = true, value_name = "LIST")]
    pub epsilons: Option<String>,
    /// Web description file replacing the built-in web.
    #[arg(long, global = true, value_name = "PATH")]
    pub web_geometry: Option<PathBuf>,
    /// Built-in web link lengths: scaled | uniform.
    #[arg(long, global = true, value_name = "MODE")]
    pub web_links: Option<String>,
    /// b' formula for `validate`: corrected | printed.
    #[arg(long, global = true, value_name = "FORM")]
    pub b_prime: Option<String>,
    /// θ samples for `validate`.
    #[arg(long, global = true, value_name = "INT")]
    pub samples: Option<usize>,
    /// Worker threads for the θ sweep.
    #[arg(long, global = true, value_name = "INT")]
    pub threads: Option<usize>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn apply(&self, cfg: &mut RunConfig) -> Result<(), String> {
        if let Some(c) = &self.cycle {
            cfg.cycle = c.parse().map_err(|e: spectral_flow::error::Error| e.to_string())?;
        }
        if let Some(t) = self.t {
            cfg.t = t;
        }
        if let Some(s) = self.s {
            cfg.s = s;
        }
        if let Some(r) = &self.ratio {
            cfg.ratio = r.parse()?;
        }
        if let Some(l) = self.length {
            cfg.length = l;
        }
        if let Some(n) = self.theta_steps {
            cfg.theta_steps = n;
        }
        if let Some(k) = self.k_max {
            cfg.k_max = Some(k);
        }
        if let Some(n) = self.levels {
            cfg.levels = Some(n);
        }
        if let Some(b) = self.include_zero_mode {
            cfg.include_zero_mode = b;
        }
        if let Some(b) = self.emit_plot {
            cfg.emit_plot = b;
        }
        if let Some(p) = &self.out {
            cfg.out = p.clone();
        }
        if let Some(x) = self.theta {
            cfg.theta = Some(x);
        }
        if let Some(x) = self.frozen {
            cfg.frozen = Some(x);
        }
        if let Some(r) = &self.sector {
            cfg.sector = Some(r.parse().map_err(|e: spectral_flow::error::Error| e.to_string())?);
        }
        if let Some(list) = &self.epsilons {
            cfg.epsilons = parse_list(list)?;
        }
        if let Some(p) = &self.web_geometry {
            cfg.web_geometry = Some(p.clone());
        }
        if let Some(m) = &self.web_links {
            cfg.web_links = match m.to_ascii_lowercase().as_str() {
                "scaled" => LinkLengths::CouplingScaled,
                "uniform" => LinkLengths::Uniform,
                other => return Err(format!("web_links must be scaled or uniform, got `{other}`")),
            };
        }
        if let Some(b) = &self.b_prime {
            cfg.b_prime = match b.to_ascii_lowercase().as_str() {
                "corrected" => BPrimeForm::Corrected,
                "printed" => BPrimeForm::Printed,
                other => return Err(format!("b_prime must be corrected or printed, got `{other}`")),
            };
        }
        if let Some(n) = self.samples {
            cfg.samples = n;
        }
        if let Some(n) = self.threads {
            cfg.threads = Some(n);
        }
        Ok(())
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad number `{}` in list `{s}`", x.trim())))
        .collect()
}

/// Defaults, then `file`, then `flags`; the result is checked for basic
/// consistency.
pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(path) = file {
        Overrides::from_file(path)?.apply(&mut cfg)?;
    }
    flags.apply(&mut cfg)?;
    check(&cfg)?;
    Ok(cfg)
}

fn check(cfg: &RunConfig) -> Result<(), String> {
    let positive = |name: &str, x: f64| if x > 0.0 && x.is_finite() { Ok(()) } else { Err(format!("{name} must be positive, got {x}")) };
    positive("t", cfg.t)?;
    positive("s", cfg.s)?;
    positive("length", cfg.length)?;
    if let Some(k) = cfg.k_max {
        positive("k_max", k)?;
    }
    if cfg.theta_steps < 2 {
        return Err("theta_steps must be at least 2".into());
    }
    if cfg.samples == 0 {
        return Err("samples must be positive".into());
    }
    if cfg.threads == Some(0) {
        return Err("threads must be positive".into());
    }
    for (name, x) in [("theta", cfg.theta), ("frozen", cfg.frozen)] {
        if let Some(x) = x {
            if !x.is_finite() {
                return Err(format!("{name} must be finite"));
            }
        }
    }
    Ok(())
}
