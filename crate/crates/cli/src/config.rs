//! Run-file parsing.
//!
//! One `key = value` pair per line; lists are space separated; `#` starts a
//! comment. Every key must be known and used by the selected mode.

use std::collections::BTreeMap;
use std::path::PathBuf;

use wgqed_core::cavity::CavitySystem;
use wgqed_core::nonreciprocity::Region;
use wgqed_core::transparency::{DetuningScheme, Permutation};
use wgqed_core::{EmitterChain, SweepGrid};

use crate::CliError;

const KNOWN_KEYS: &[&str] = &[
    "mode",
    "output",
    "format",
    "seed",
    "gamma",
    "gamma0",
    "detunings",
    "phases",
    "grid",
    "scheme",
    "magnitudes",
    "leftover",
    "permutation",
    "phase",
    "count",
    "detuning",
    "kappa",
    "g",
    "cavity_detuning",
    "atom_detunings",
    "mean_detuning",
    "theta_grid",
    "s_grid",
    "theta_range",
    "s_range",
    "cases",
    "max_sites",
    "probes",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    pub fn delimiter(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

/// Rate parameters shared by the two-atom modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAtomRates {
    pub gamma: f64,
    pub gamma0: f64,
    pub mean_detuning: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Spectrum { chain: EmitterChain, grid: SweepGrid },
    Transparency { gamma: f64, gamma0: f64, phase: f64, scheme: DetuningScheme, grid: SweepGrid },
    Cavity { system: CavitySystem, grid: SweepGrid },
    EtaMap { rates: TwoAtomRates, theta_grid: SweepGrid, s_grid: SweepGrid },
    EtaArgmax { rates: TwoAtomRates, region: Region },
    OracleCheck { cases: usize, max_sites: usize, probes: usize },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Spectrum { .. } => "spectrum",
            Mode::Transparency { .. } => "transparency",
            Mode::Cavity { .. } => "cavity",
            Mode::EtaMap { .. } => "eta-map",
            Mode::EtaArgmax { .. } => "eta-argmax",
            Mode::OracleCheck { .. } => "oracle-check",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub seed: Option<u64>,
}

struct Entry {
    line: usize,
    value: String,
    used: bool,
}

/// Key/value pairs with usage tracking so leftovers can be rejected.
struct Fields {
    entries: BTreeMap<String, Entry>,
}

fn parse_err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, message: message.into() }
}

impl Fields {
    fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| parse_err(line, format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(parse_err(line, format!("unknown key `{key}`")));
            }
            if value.is_empty() {
                return Err(parse_err(line, format!("key `{key}` has no value")));
            }
            if let Some(prev) = entries.get::<str>(key) {
                let prev: &Entry = prev;
                return Err(parse_err(line, format!("key `{key}` already set on line {}", prev.line)));
            }
            entries.insert(key.to_string(), Entry { line, value: value.to_string(), used: false });
        }
        Ok(Self { entries })
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.get_mut(key).map(|e| {
            e.used = true;
            (e.line, e.value.clone())
        })
    }

    fn require(&mut self, key: &str) -> Result<(usize, String), CliError> {
        self.take(key).ok_or_else(|| CliError::Validation(format!("missing required key `{key}`")))
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        self.take(key).map(|(line, v)| parse_f64(line, key, &v)).transpose()
    }

    fn required_number(&mut self, key: &str) -> Result<f64, CliError> {
        let (line, v) = self.require(key)?;
        parse_f64(line, key, &v)
    }

    fn list(&mut self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.take(key)
            .map(|(line, v)| v.split_whitespace().map(|tok| parse_f64(line, key, tok)).collect())
            .transpose()
    }

    fn required_list(&mut self, key: &str) -> Result<Vec<f64>, CliError> {
        self.list(key)?.ok_or_else(|| CliError::Validation(format!("missing required key `{key}`")))
    }

    fn integer<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        self.take(key)
            .map(|(line, v)| v.parse::<T>().map_err(|_| parse_err(line, format!("`{key}` expects an integer, got `{v}`"))))
            .transpose()
    }

    fn grid(&mut self, key: &str) -> Result<SweepGrid, CliError> {
        let (line, v) = self.require(key)?;
        let toks: Vec<&str> = v.split_whitespace().collect();
        let [start, stop, count] = toks[..] else {
            return Err(parse_err(line, format!("`{key}` expects `start stop count`, got `{v}`")));
        };
        let start = parse_f64(line, key, start)?;
        let stop = parse_f64(line, key, stop)?;
        let count: usize =
            count.parse().map_err(|_| parse_err(line, format!("`{key}` count must be an integer, got `{count}`")))?;
        SweepGrid::linspace(start, stop, count).map_err(|e| CliError::Validation(format!("{key}: {e}")))
    }

    fn range(&mut self, key: &str) -> Result<(f64, f64), CliError> {
        let (line, v) = self.require(key)?;
        let toks: Vec<&str> = v.split_whitespace().collect();
        let [lo, hi] = toks[..] else {
            return Err(parse_err(line, format!("`{key}` expects `min max`, got `{v}`")));
        };
        Ok((parse_f64(line, key, lo)?, parse_f64(line, key, hi)?))
    }

    fn reject_unused(&self, mode: &str) -> Result<(), CliError> {
        match self.entries.iter().find(|(_, e)| !e.used) {
            Some((key, e)) => Err(parse_err(e.line, format!("key `{key}` is not used by mode `{mode}`"))),
            None => Ok(()),
        }
    }
}

fn parse_f64(line: usize, key: &str, tok: &str) -> Result<f64, CliError> {
    tok.parse::<f64>().map_err(|_| parse_err(line, format!("`{key}` expects a number, got `{tok}`")))
}

fn validation(key: &str) -> impl Fn(wgqed_core::Error) -> CliError + '_ {
    move |e| CliError::Validation(format!("{key}: {e}"))
}

fn rates(fields: &mut Fields) -> Result<(f64, f64), CliError> {
    let gamma = fields.required_number("gamma")?;
    let gamma0 = fields.number("gamma0")?.unwrap_or(0.0);
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(CliError::Validation(format!("gamma must be positive, got {gamma}")));
    }
    if !(gamma0.is_finite() && gamma0 >= 0.0) {
        return Err(CliError::Validation(format!("gamma0 must be non-negative, got {gamma0}")));
    }
    Ok((gamma, gamma0))
}

fn two_atom_rates(fields: &mut Fields) -> Result<TwoAtomRates, CliError> {
    let (gamma, gamma0) = rates(fields)?;
    let mean_detuning = fields.number("mean_detuning")?.unwrap_or(0.0);
    if !mean_detuning.is_finite() {
        return Err(CliError::Validation(format!("mean_detuning must be finite, got {mean_detuning}")));
    }
    Ok(TwoAtomRates { gamma, gamma0, mean_detuning })
}

fn scheme(fields: &mut Fields) -> Result<DetuningScheme, CliError> {
    let (line, kind) = fields.require("scheme")?;
    let permutation = |fields: &mut Fields, n: usize| -> Result<Permutation, CliError> {
        match fields.take("permutation") {
            None => Ok(Permutation::identity(n)),
            Some((line, v)) => {
                let order = v
                    .split_whitespace()
                    .map(|tok| tok.parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| parse_err(line, format!("`permutation` expects indices, got `{v}`")))?;
                if order.len() != n {
                    return Err(CliError::Validation(format!(
                        "permutation has {} entries for {n} atoms",
                        order.len()
                    )));
                }
                Permutation::new(order).map_err(validation("permutation"))
            }
        }
    };
    let scheme = match kind.as_str() {
        "identical" => {
            let count: usize = fields.integer("count")?.ok_or_else(|| {
                CliError::Validation("missing required key `count`".into())
            })?;
            let detuning = fields.number("detuning")?.unwrap_or(0.0);
            DetuningScheme::Identical { count, detuning }
        }
        "even" => {
            let magnitudes = fields.required_list("magnitudes")?;
            let permutation = permutation(fields, 2 * magnitudes.len())?;
            DetuningScheme::EvenPairwise { magnitudes, permutation }
        }
        "odd" => {
            let magnitudes = fields.list("magnitudes")?.unwrap_or_default();
            let leftover = fields.required_number("leftover")?;
            let permutation = permutation(fields, 2 * magnitudes.len() + 1)?;
            DetuningScheme::OddPairwisePlusOne { magnitudes, leftover, permutation }
        }
        other => return Err(parse_err(line, format!("scheme must be identical, even or odd, got `{other}`"))),
    };
    scheme.detunings().map_err(validation("scheme"))?;
    Ok(scheme)
}

/// Parses and validates a run file.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut fields = Fields::parse(text)?;
    let (mode_line, mode_name) = fields.require("mode")?;

    let output = fields.take("output").map(|(_, v)| PathBuf::from(v));
    let format = match fields.take("format") {
        None => Format::Csv,
        Some((_, v)) if v == "csv" => Format::Csv,
        Some((_, v)) if v == "tsv" => Format::Tsv,
        Some((line, v)) => return Err(parse_err(line, format!("format must be csv or tsv, got `{v}`"))),
    };
    let seed = fields.integer::<u64>("seed")?;

    let mode = match mode_name.as_str() {
        "spectrum" => {
            let (gamma, gamma0) = rates(&mut fields)?;
            let detunings = fields.required_list("detunings")?;
            let mut phases = fields.required_list("phases")?;
            // A single phase describes a uniform lattice.
            if phases.len() == 1 && detunings.len() > 1 {
                phases = vec![phases[0]; detunings.len()];
            }
            let chain = EmitterChain::new(gamma, gamma0, detunings, phases).map_err(validation("chain"))?;
            Mode::Spectrum { chain, grid: fields.grid("grid")? }
        }
        "transparency" => {
            let (gamma, gamma0) = rates(&mut fields)?;
            let phase = fields.number("phase")?.unwrap_or(std::f64::consts::PI);
            let scheme = scheme(&mut fields)?;
            Mode::Transparency { gamma, gamma0, phase, scheme, grid: fields.grid("grid")? }
        }
        "cavity" => {
            let kappa = fields.required_number("kappa")?;
            let g = fields.required_number("g")?;
            let cavity_detuning = fields.number("cavity_detuning")?.unwrap_or(0.0);
            let atoms = fields.required_list("atom_detunings")?;
            let system = CavitySystem::new(kappa, g, cavity_detuning, atoms).map_err(validation("cavity"))?;
            Mode::Cavity { system, grid: fields.grid("grid")? }
        }
        "eta-map" => {
            let rates = two_atom_rates(&mut fields)?;
            let theta_grid = fields.grid("theta_grid")?;
            let s_grid = fields.grid("s_grid")?;
            Mode::EtaMap { rates, theta_grid, s_grid }
        }
        "eta-argmax" => {
            let rates = two_atom_rates(&mut fields)?;
            let theta = fields.range("theta_range")?;
            let s = fields.range("s_range")?;
            let region = Region::new(theta, s).map_err(validation("region"))?;
            Mode::EtaArgmax { rates, region }
        }
        "oracle-check" => {
            let cases = fields.integer("cases")?.unwrap_or(100);
            let max_sites = fields.integer("max_sites")?.unwrap_or(32);
            let probes = fields.integer("probes")?.unwrap_or(8);
            if cases == 0 || max_sites == 0 || probes == 0 {
                return Err(CliError::Validation("cases, max_sites and probes must be positive".into()));
            }
            Mode::OracleCheck { cases, max_sites, probes }
        }
        other => {
            return Err(parse_err(
                mode_line,
                format!("mode must be one of spectrum, transparency, cavity, eta-map, eta-argmax, oracle-check; got `{other}`"),
            ))
        }
    };
    fields.reject_unused(mode.name())?;
    Ok(RunConfig { mode, output, format, seed })
}
