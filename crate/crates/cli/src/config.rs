use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use toml::{Table, Value};

use crate::error::CliError;
use crate::units::{parse_quantity, Dim};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Comb,
    Lattice,
    Pulse,
    Adler,
    Seo,
    Mml,
    Noise,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Comb,
        Experiment::Lattice,
        Experiment::Pulse,
        Experiment::Adler,
        Experiment::Seo,
        Experiment::Mml,
        Experiment::Noise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Comb => "comb",
            Experiment::Lattice => "lattice",
            Experiment::Pulse => "pulse",
            Experiment::Adler => "adler",
            Experiment::Seo => "seo",
            Experiment::Mml => "mml",
            Experiment::Noise => "noise",
        }
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                format!("unknown experiment '{s}' (expected one of {})", names.join(", "))
            })
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A parsed configuration file. Parameter values are kept as written; see
/// [`validate_config`] and [`resolve`] for their interpretation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub parameters: Table,
    pub seed: u64,
    pub output_dir: PathBuf,
}

/// One schema violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub key: String,
    pub message: String,
}

impl Finding {
    fn new(key: &str, message: impl Into<String>) -> Self {
        Self { key: key.to_string(), message: message.into() }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

const TOP_LEVEL: [&str; 4] = ["experiment", "parameters", "seed", "output_dir"];

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        let table: Table = text.parse().map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))?;
        let mut findings = Vec::new();
        for key in table.keys() {
            if !TOP_LEVEL.contains(&key.as_str()) {
                findings.push(Finding::new(key, "unknown key"));
            }
        }
        let experiment = match table.get("experiment") {
            Some(Value::String(s)) => match s.parse::<Experiment>() {
                Ok(e) => Some(e),
                Err(msg) => {
                    findings.push(Finding::new("experiment", msg));
                    None
                }
            },
            Some(_) => {
                findings.push(Finding::new("experiment", "must be a string"));
                None
            }
            None => {
                findings.push(Finding::new("experiment", "required key absent"));
                None
            }
        };
        let parameters = match table.get("parameters") {
            Some(Value::Table(t)) => t.clone(),
            Some(_) => {
                findings.push(Finding::new("parameters", "must be a table"));
                Table::new()
            }
            None => Table::new(),
        };
        let seed = match table.get("seed") {
            Some(Value::Integer(i)) if *i >= 0 => *i as u64,
            Some(_) => {
                findings.push(Finding::new("seed", "must be a nonnegative integer"));
                0
            }
            None => 0,
        };
        let output_dir = match table.get("output_dir") {
            Some(Value::String(s)) => PathBuf::from(s),
            Some(_) => {
                findings.push(Finding::new("output_dir", "must be a string"));
                PathBuf::new()
            }
            None => PathBuf::from("output"),
        };
        match experiment {
            Some(experiment) if findings.is_empty() => Ok(Self { experiment, parameters, seed, output_dir }),
            _ => Err(CliError::Validation(findings)),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        let mut t = Table::new();
        t.insert("experiment".into(), Value::String(self.experiment.name().into()));
        t.insert("seed".into(), Value::Integer(self.seed as i64));
        t.insert("output_dir".into(), Value::String(self.output_dir.display().to_string()));
        t.insert("parameters".into(), Value::Table(self.parameters.clone()));
        toml::to_string(&t).expect("tables always serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Number,
    Integer,
    Bool,
    Text(&'static [&'static str]),
    Quantity(Dim),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Check {
    Any,
    Positive,
    NonNegative,
    /// Open interval.
    Between(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fallback {
    Required,
    Optional,
    Num(f64),
    Int(i64),
    Flag(bool),
    Str(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
    pub check: Check,
    pub default: Fallback,
    pub doc: &'static str,
}

const fn key(name: &'static str, kind: Kind, check: Check, default: Fallback, doc: &'static str) -> KeySpec {
    KeySpec { name, kind, check, default, doc }
}

use Check::*;
use Fallback::*;
use Kind::*;

const COMB: &[KeySpec] = &[
    key("beta", Number, Positive, Required, "pulse sharpness"),
    key("points", Integer, Positive, Int(1024), "samples over one period"),
    key("truncation_k", Integer, Positive, Optional, "series cutoff; adaptive when absent"),
];

const LATTICE: &[KeySpec] = &[
    key("n_modes", Integer, Positive, Required, "number of phase oscillators, >= 3"),
    key("mu_m", Quantity(Dim::Rate), Positive, Required, "nearest-neighbor coupling"),
    key("t_n", Quantity(Dim::Rate), NonNegative, Required, "phase-noise strength"),
    key("dt", Quantity(Dim::Time), Positive, Optional, "step; 0.01 / mu_m when absent"),
    key("steps", Integer, Positive, Int(1_000_000), "Langevin steps after burn-in"),
    key("sample_every", Integer, Positive, Int(100), "steps between recorded snapshots"),
    key("max_k", Integer, Positive, Int(10), "largest correlation separation"),
    key("boundary", Text(&["open", "periodic"]), Any, Str("open"), "chain boundary"),
    key("gibbs_samples", Integer, NonNegative, Int(1000), "exact Gibbs draws for the waveform"),
    key("waveform_points", Integer, Positive, Int(256), "grid points of the waveform"),
];

const PULSE: &[KeySpec] = &[
    key("g_m", Number, Between(0.0, 1.0), Required, "normalized modulation strength"),
    key("g0", Number, Any, Num(0.0), "initial normalized pulse parameter"),
    key("round_trips", Integer, Positive, Optional, "iterations; 5 / g_m when absent"),
    key("l_r", Quantity(Dim::Length), Positive, Str("553.88 m"), "ring length"),
    key("n_eff", Number, Positive, Num(1.47), "effective index"),
    key("lambda_l", Quantity(Dim::Length), Positive, Str("1550 nm"), "carrier wavelength"),
    key("delta_lambda", Quantity(Dim::Length), Positive, Str("0.2 nm"), "filter bandwidth"),
];

const ADLER: &[KeySpec] = &[
    key("omega_r", Quantity(Dim::AngularFrequency), Positive, Str("371.3 kHz"), "round-trip frequency"),
    key("detuning", Quantity(Dim::AngularFrequency), Any, Str("100 Hz"), "modulation minus round-trip frequency"),
    key("v_am0", Quantity(Dim::Voltage), Positive, Str("0.156 V"), "locking threshold amplitude"),
    key("v_am_start", Number, Positive, Num(0.25), "first amplitude, in units of v_am0"),
    key("v_am_stop", Number, Positive, Num(2.0), "last amplitude, in units of v_am0"),
    key("v_am_points", Integer, Positive, Int(8), "amplitude grid size"),
    key("duration", Quantity(Dim::Time), Positive, Str("0.5 s"), "record length per amplitude"),
    key("sample_rate", Quantity(Dim::Frequency), Positive, Str("1048576 Hz"), "detector sample rate"),
    key("segment_len", Integer, Positive, Optional, "Welch segment, power of two"),
    key("band_width", Quantity(Dim::Frequency), Positive, Str("3 kHz"), "retained band around the modulation"),
];

const DEVICE: &[KeySpec] = &[
    key("m_m", Quantity(Dim::Mass), Positive, Required, "effective mirror mass"),
    key("omega_m", Quantity(Dim::AngularFrequency), Positive, Str("415 kHz"), "mechanical frequency"),
    key("gamma_m", Quantity(Dim::Rate), Positive, Required, "intrinsic damping rate"),
    key("kappa_ratio", Number, NonNegative, Num(0.01), "thermal decay rate over omega_m"),
    key("theta_fh", Quantity(Dim::ForcePerKelvin), Any, Required, "thermal force coefficient"),
    key("theta_ph", Quantity(Dim::PullPerKelvin), Any, Required, "thermal frequency coefficient"),
    key("a_h0", Quantity(Dim::HeatingPerWatt), Positive, Required, "heating per unit intensity"),
    key("k_a1", Quantity(Dim::InverseLength), Any, Required, "linear absorption slope"),
    key("k_a2", Quantity(Dim::InverseArea), Any, Required, "quadratic absorption coefficient"),
    key("l0", Quantity(Dim::Power), Positive, Optional, "trajectory intensity; 1.5 x threshold when absent"),
    key("periods", Number, Positive, Num(2000.0), "trajectory length in mechanical periods"),
    key("max_points", Integer, Positive, Int(20000), "trajectory rows kept after downsampling"),
    key("simulate_threshold", Bool, Any, Flag(true), "bracket the threshold by simulation"),
    key("rel_tol", Number, Between(0.0, 1.0), Num(1e-3), "relative width of the simulated bracket"),
];

const CHAIN: &[KeySpec] = &[
    key("g_oa", Number, Positive, Num(1600.0), "amplifier gain"),
    key("n_pi", Number, Positive, Num(1.25), "population inversion factor"),
    key("n_p", Number, Positive, Num(2e6), "photons per mode"),
    key("gamma_om_ratio", Number, Positive, Num(0.1), "optical mode damping over omega_r"),
    key("lambda_l", Quantity(Dim::Length), Positive, Str("1550 nm"), "carrier wavelength"),
    key("delta_lambda", Quantity(Dim::Length), Positive, Str("0.2 nm"), "filter bandwidth"),
    key("l_r", Quantity(Dim::Length), Positive, Str("553.88 m"), "ring length"),
    key("n_eff", Number, Positive, Num(1.47), "effective index"),
    key("omega_r", Quantity(Dim::AngularFrequency), Positive, Optional, "round-trip frequency; from l_r and n_eff when absent"),
];

const NOISE_ONLY: &[KeySpec] = &[key(
    "omega_m",
    Quantity(Dim::AngularFrequency),
    Positive,
    Str("415 kHz"),
    "mechanical frequency",
)];

/// Accepted parameter keys of an experiment.
pub fn schema(experiment: Experiment) -> Vec<KeySpec> {
    match experiment {
        Experiment::Comb => COMB.to_vec(),
        Experiment::Lattice => LATTICE.to_vec(),
        Experiment::Pulse => PULSE.to_vec(),
        Experiment::Adler => ADLER.to_vec(),
        Experiment::Seo => DEVICE.to_vec(),
        Experiment::Mml => {
            // the device and the ring share no keys
            let mut v = DEVICE.to_vec();
            v.extend_from_slice(CHAIN);
            v
        }
        Experiment::Noise => {
            let mut v = CHAIN.to_vec();
            v.extend_from_slice(NOISE_ONLY);
            v
        }
    }
}

/// A validated parameter value in SI units.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Param {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

/// Validated parameters with defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved(pub BTreeMap<String, Param>);

impl Resolved {
    pub fn num(&self, key: &str) -> f64 {
        match self.0.get(key) {
            Some(Param::Num(v)) => *v,
            Some(Param::Int(i)) => *i as f64,
            other => panic!("parameter {key} is not numeric: {other:?}"),
        }
    }

    pub fn opt_num(&self, key: &str) -> Option<f64> {
        self.0.contains_key(key).then(|| self.num(key))
    }

    pub fn int(&self, key: &str) -> usize {
        match self.0.get(key) {
            Some(Param::Int(i)) => *i as usize,
            other => panic!("parameter {key} is not an integer: {other:?}"),
        }
    }

    pub fn opt_int(&self, key: &str) -> Option<usize> {
        self.0.contains_key(key).then(|| self.int(key))
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.0.get(key), Some(Param::Bool(true)))
    }

    pub fn text(&self, key: &str) -> &str {
        match self.0.get(key) {
            Some(Param::Text(s)) => s,
            other => panic!("parameter {key} is not text: {other:?}"),
        }
    }
}

fn interpret(spec: &KeySpec, value: &Value) -> Result<Param, String> {
    let param = match (spec.kind, value) {
        (Number, Value::Float(f)) => Param::Num(*f),
        (Number, Value::Integer(i)) => Param::Num(*i as f64),
        (Integer, Value::Integer(i)) => Param::Int(*i),
        (Bool, Value::Boolean(b)) => Param::Bool(*b),
        (Text(allowed), Value::String(s)) => {
            if !allowed.contains(&s.as_str()) {
                return Err(format!("'{s}' is not one of {}", allowed.join(", ")));
            }
            Param::Text(s.clone())
        }
        (Quantity(_), Value::Float(f)) => Param::Num(*f),
        (Quantity(_), Value::Integer(i)) => Param::Num(*i as f64),
        (Quantity(dim), Value::String(s)) => Param::Num(parse_quantity(s, dim).map_err(|e| e.to_string())?),
        (kind, v) => {
            let want = match kind {
                Number => "a number",
                Integer => "an integer",
                Bool => "a boolean",
                Text(_) => "a string",
                Quantity(_) => "a number or a '<number> <unit>' string",
            };
            return Err(format!("expected {want}, got {}", v.type_str()));
        }
    };
    let x = match &param {
        Param::Num(v) => *v,
        Param::Int(i) => *i as f64,
        _ => return Ok(param),
    };
    if !x.is_finite() {
        return Err("must be finite".into());
    }
    let ok = match spec.check {
        Any => true,
        Positive => x > 0.0,
        NonNegative => x >= 0.0,
        Between(lo, hi) => x > lo && x < hi,
    };
    if !ok {
        return Err(match spec.check {
            Positive => format!("{} must be positive", spec.name),
            NonNegative => format!("{} must be nonnegative", spec.name),
            Between(lo, hi) => format!("{} must lie strictly between {lo} and {hi}", spec.name),
            Any => unreachable!(),
        });
    }
    Ok(param)
}

fn default_value(d: Fallback) -> Option<Value> {
    match d {
        Required | Optional => None,
        Num(v) => Some(Value::Float(v)),
        Int(i) => Some(Value::Integer(i)),
        Flag(b) => Some(Value::Boolean(b)),
        Str(s) => Some(Value::String(s.to_string())),
    }
}

/// Checks the parameters against the experiment schema and returns every
/// violation. An empty list means the configuration is valid.
pub fn validate_config(config: &ExperimentConfig) -> Vec<Finding> {
    match resolve(config) {
        Ok(_) => Vec::new(),
        Err(findings) => findings,
    }
}

/// Interprets the parameters, filling in defaults.
pub fn resolve(config: &ExperimentConfig) -> Result<Resolved, Vec<Finding>> {
    let specs = schema(config.experiment);
    let mut findings = Vec::new();
    for k in config.parameters.keys() {
        if !specs.iter().any(|s| s.name == k) {
            findings.push(Finding::new(k, format!("unknown key for experiment '{}'", config.experiment)));
        }
    }
    let mut out = BTreeMap::new();
    for spec in &specs {
        let value = match config.parameters.get(spec.name) {
            Some(v) => v.clone(),
            None => match default_value(spec.default) {
                Some(v) => v,
                None => {
                    if spec.default == Required {
                        findings.push(Finding::new(spec.name, "required key absent"));
                    }
                    continue;
                }
            },
        };
        match interpret(spec, &value) {
            Ok(p) => {
                out.insert(spec.name.to_string(), p);
            }
            Err(msg) => findings.push(Finding::new(spec.name, msg)),
        }
    }
    if findings.is_empty() {
        let resolved = Resolved(out);
        cross_checks(config.experiment, &resolved, &mut findings);
        if findings.is_empty() {
            return Ok(resolved);
        }
    }
    Err(findings)
}

fn cross_checks(experiment: Experiment, p: &Resolved, findings: &mut Vec<Finding>) {
    match experiment {
        Experiment::Lattice => {
            if p.int("n_modes") < 3 {
                findings.push(Finding::new("n_modes", "n_modes must be at least 3"));
            }
            if let Some(dt) = p.opt_num("dt") {
                if dt * p.num("mu_m") > 0.1 {
                    findings.push(Finding::new("dt", "dt * mu_m must not exceed 0.1"));
                }
            }
            if p.text("boundary") == "periodic" && p.int("gibbs_samples") > 0 {
                findings.push(Finding::new(
                    "gibbs_samples",
                    "Gibbs sampling needs the open boundary; set gibbs_samples = 0",
                ));
            }
            if p.int("max_k") >= p.int("n_modes") {
                findings.push(Finding::new("max_k", "max_k must be below n_modes"));
            }
        }
        Experiment::Adler => {
            if p.num("v_am_start") >= p.num("v_am_stop") && p.int("v_am_points") > 1 {
                findings.push(Finding::new("v_am_stop", "v_am_stop must exceed v_am_start"));
            }
            if let Some(n) = p.opt_int("segment_len") {
                if !n.is_power_of_two() || n < 4 {
                    findings.push(Finding::new("segment_len", "segment_len must be a power of two >= 4"));
                }
            }
            if p.num("detuning") == 0.0 {
                findings.push(Finding::new("detuning", "detuning must be nonzero"));
            }
            let f_am = (p.num("omega_r") + p.num("detuning")) / (2.0 * std::f64::consts::PI);
            if f_am + 0.5 * p.num("band_width") >= 0.5 * p.num("sample_rate") {
                findings.push(Finding::new("sample_rate", "modulation band lies above Nyquist"));
            }
        }
        Experiment::Seo | Experiment::Mml => {
            if p.num("gamma_m") >= 0.1 * p.num("omega_m") {
                findings.push(Finding::new("gamma_m", "gamma_m must stay below 0.1 omega_m"));
            }
        }
        Experiment::Noise => {
            if p.num("g_oa") <= 1.0 {
                findings.push(Finding::new("g_oa", "gain must exceed 1"));
            }
            if p.num("n_pi") < 1.0 {
                findings.push(Finding::new("n_pi", "population inversion must be at least 1"));
            }
        }
        Experiment::Comb | Experiment::Pulse => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml_str(text).unwrap()
    }

    #[test]
    fn lattice_without_mu() {
        let c = cfg("experiment = \"lattice\"\n[parameters]\nn_modes = 8\nt_n = 0.2\n");
        let f = validate_config(&c);
        assert_eq!(f, vec![Finding::new("mu_m", "required key absent")]);
    }

    #[test]
    fn negative_beta() {
        let c = cfg("experiment = \"comb\"\n[parameters]\nbeta = -0.1\n");
        let f = validate_config(&c);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].message, "beta must be positive");
    }

    #[test]
    fn unknown_keys_are_all_listed() {
        let c = cfg("experiment = \"comb\"\n[parameters]\nbeta = 0.1\nfoo = 1\nbar = 2\n");
        let f = validate_config(&c);
        let keys: Vec<&str> = f.iter().map(|x| x.key.as_str()).collect();
        assert_eq!(keys, ["bar", "foo"]);
    }

    #[test]
    fn unit_mismatch() {
        let c = cfg("experiment = \"adler\"\n[parameters]\nv_am0 = \"0.156 nm\"\n");
        let f = validate_config(&c);
        assert_eq!(f.len(), 1);
        assert!(f[0].message.contains("not a voltage"), "{}", f[0].message);
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            ExperimentConfig::from_toml_str("experiment = \"warp\""),
            Err(CliError::Validation(_))
        ));
        assert!(matches!(ExperimentConfig::from_toml_str("seed = "), Err(CliError::Parse(_))));
        match ExperimentConfig::from_toml_str("experiment = \"comb\"\ncolour = 3\n") {
            Err(CliError::Validation(f)) => assert_eq!(f[0].key, "colour"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn defaults_are_filled() {
        let c = cfg("experiment = \"adler\"\n");
        let r = resolve(&c).unwrap();
        assert!((r.num("v_am0") - 0.156).abs() < 1e-15);
        assert!((r.num("omega_r") - 2.0 * std::f64::consts::PI * 371.3e3).abs() < 1e-6);
        assert_eq!(r.int("v_am_points"), 8);
    }

    #[test]
    fn round_trip_through_toml() {
        let c = cfg("experiment = \"comb\"\nseed = 4\noutput_dir = \"x\"\n[parameters]\nbeta = 0.5\n");
        assert_eq!(cfg(&c.to_toml_string()), c);
    }
}
