//! Experiment configs: flat `key = value` text, one dotted key per line,
//! `#` starts a comment.
//!
//! ```text
//! experiment.id = interp-skw1
//! run.variant = skw1
//! run.n = 8
//! run.seeds = 1, 2, 3
//! state.family = interpolated
//! state.t = 0, 0.5, 1
//! output.csv = skw1.csv
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qwsearch::{Algorithm, Engine, Guards, IterationPlan, OskwNormalization, SuccessMetric, TargetSelection, TauRule, Tolerances};

use crate::error::{HarnessError, Result};
use crate::families::{families_from_params, split_list, Family};

/// Parses the key-value text into a map, rejecting malformed lines and
/// duplicate keys.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| HarnessError::ConfigLine { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected 'key = value', found '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let valid = !key.is_empty()
            && key.split('.').all(|part| !part.is_empty() && part.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
        if !valid {
            return Err(err(format!("invalid key '{key}'")));
        }
        if value.is_empty() {
            return Err(err(format!("empty value for '{key}'")));
        }
        if entries.insert(key.to_string(), value.to_string()).is_some() {
            return Err(err(format!("duplicate key '{key}'")));
        }
    }
    Ok(entries)
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment_id: String,
    pub variant: Algorithm,
    /// Hypercube dimension as stated in the config. Optimized-walk runs use
    /// `n + 1` directions and `2^(n+1)` vertices.
    pub n: usize,
    pub tau_rule: TauRule,
    pub tau: Option<usize>,
    pub states: Vec<Family>,
    pub seeds: Vec<u64>,
    pub restarts: usize,
    pub metric: SuccessMetric,
    pub engine: Engine,
    pub targets: TargetSelection,
    pub oskw_normalization: OskwNormalization,
    pub threads: Option<usize>,
    /// Treat `max |p_avg - p_pred| > c / sqrt(N)` as an invariant violation.
    pub enforce_bound: bool,
    pub csv: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub guards: Guards,
    /// Every key as read, echoed into the JSON summary.
    pub entries: BTreeMap<String, String>,
}

struct Reader {
    entries: BTreeMap<String, String>,
    used: Vec<String>,
}

impl Reader {
    fn raw(&mut self, key: &str) -> Option<String> {
        let v = self.entries.get(key).cloned();
        if v.is_some() {
            self.used.push(key.to_string());
        }
        v
    }

    fn parse<V: std::str::FromStr>(&mut self, key: &str) -> Result<Option<V>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| HarnessError::Config(format!("cannot parse '{v}' for '{key}'"))),
        }
    }

    fn required<V: std::str::FromStr>(&mut self, key: &str) -> Result<V> {
        self.parse(key)?.ok_or_else(|| HarnessError::Config(format!("missing required key '{key}'")))
    }

    fn prefixed(&mut self, prefix: &str) -> BTreeMap<String, String> {
        let found: BTreeMap<String, String> = self
            .entries
            .iter()
            .filter_map(|(k, v)| k.strip_prefix(prefix).map(|rest| (rest.to_string(), v.clone())))
            .collect();
        self.used.extend(found.keys().map(|k| format!("{prefix}{k}")));
        found
    }
}

fn parse_choice<V>(key: &str, value: Option<String>, default: V, table: &[(&str, V)]) -> Result<V>
where
    V: Clone,
{
    let Some(value) = value else { return Ok(default) };
    table
        .iter()
        .find(|(name, _)| *name == value)
        .map(|(_, v)| v.clone())
        .ok_or_else(|| {
            let names: Vec<&str> = table.iter().map(|(n, _)| *n).collect();
            HarnessError::Config(format!("'{key}' must be one of {}, found '{value}'", names.join(", ")))
        })
}

fn parse_targets(value: Option<String>, seed: u64) -> Result<TargetSelection> {
    let Some(value) = value else { return Ok(TargetSelection::Auto) };
    match value.as_str() {
        "auto" => Ok(TargetSelection::Auto),
        "all" => Ok(TargetSelection::All),
        other => {
            let count = other
                .strip_prefix("sampled:")
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| HarnessError::Config(format!("'run.targets' must be auto, all or sampled:COUNT, found '{other}'")))?;
            Ok(TargetSelection::Sampled { count, seed })
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let entries = parse_key_values(text)?;
        let mut r = Reader { entries: entries.clone(), used: Vec::new() };

        let experiment_id: String = r.required("experiment.id")?;
        let variant: Algorithm = r
            .raw("run.variant")
            .ok_or_else(|| HarnessError::Config("missing required key 'run.variant'".into()))?
            .parse()
            .map_err(|e: qwsearch::Error| HarnessError::Config(e.to_string()))?;
        let n: usize = r.required("run.n")?;
        if n < 2 {
            return Err(HarnessError::Config(format!("run.n = {n} is below the minimum of 2")));
        }
        let default_rule = if variant == Algorithm::Oskw1 { TauRule::OskwOptimal } else { TauRule::SkwOptimal };
        let tau_rule = parse_choice(
            "run.tau_rule",
            r.raw("run.tau_rule"),
            default_rule,
            &[("explicit", TauRule::Explicit), ("skw_optimal", TauRule::SkwOptimal), ("oskw_optimal", TauRule::OskwOptimal)],
        )?;
        let tau: Option<usize> = r.parse("run.tau")?;
        match (tau_rule, tau) {
            (TauRule::Explicit, None) => return Err(HarnessError::Config("run.tau_rule = explicit needs run.tau".into())),
            (TauRule::SkwOptimal | TauRule::OskwOptimal, Some(_)) => {
                return Err(HarnessError::Config("run.tau is only allowed with run.tau_rule = explicit".into()))
            }
            _ => {}
        }

        let seeds = match r.raw("run.seeds") {
            None => return Err(HarnessError::Config("missing required key 'run.seeds'".into())),
            Some(v) => split_list(&v)
                .iter()
                .map(|s| s.parse::<u64>().map_err(|_| HarnessError::Config(format!("cannot parse seed '{s}'"))))
                .collect::<Result<Vec<_>>>()?,
        };
        if seeds.is_empty() {
            return Err(HarnessError::Config("run.seeds must not be empty".into()));
        }

        let mut tolerances = Tolerances::default();
        macro_rules! override_fields {
            ($target:expr, $prefix:literal, [$($field:ident),*]) => {
                $(if let Some(v) = r.parse(concat!($prefix, stringify!($field)))? { $target.$field = v; })*
            };
        }
        override_fields!(tolerances, "tolerance.", [
            norm, ensemble_weights, unitary, optimizer_convergence, optimizer_sweep_cap, optimizer_restarts, deviation_constant, oskw_deviation_constant
        ]);
        let mut guards = Guards::default();
        override_fields!(guards, "guard.", [
            pauli_enumeration_max_qubits, dense_max_dimension, grid_max_qubits, grid_max_resolution, identity_max_qubits,
            exact_targets_max_dimension, sampled_targets
        ]);

        let restarts = r.parse("run.restarts")?.unwrap_or(tolerances.optimizer_restarts);
        if restarts == 0 {
            return Err(HarnessError::Config("run.restarts must be at least 1".into()));
        }
        let metric = parse_choice(
            "run.metric",
            r.raw("run.metric"),
            SuccessMetric::VertexMarginal,
            &[("vertex_marginal", SuccessMetric::VertexMarginal), ("coin_projected", SuccessMetric::CoinProjected)],
        )?;
        let engine = parse_choice("run.engine", r.raw("run.engine"), Engine::Direct, &[("direct", Engine::Direct), ("translation", Engine::Translation)])?;
        let targets = parse_targets(r.raw("run.targets"), seeds[0])?;
        let oskw_normalization = parse_choice(
            "run.oskw_normalization",
            r.raw("run.oskw_normalization"),
            OskwNormalization::EvenTargets,
            &[("even_targets", OskwNormalization::EvenTargets), ("all_vertices", OskwNormalization::AllVertices)],
        )?;
        let threads: Option<usize> = r.parse("run.threads")?;
        if threads == Some(0) {
            return Err(HarnessError::Config("run.threads must be at least 1".into()));
        }

        let enforce_bound = r.parse("run.enforce_bound")?.unwrap_or(false);

        let state_params = r.prefixed("state.");
        let states = families_from_params(&state_params).map_err(|e| HarnessError::Config(e.to_string()))?;
        if variant != Algorithm::Skw1 && states.iter().any(Family::is_mixed) {
            return Err(HarnessError::Config(format!("mixed ensembles are only supported by skw1, not {variant}")));
        }

        let csv = r.raw("output.csv").map(PathBuf::from);
        let summary = r.raw("output.summary").map(PathBuf::from);

        if let Some(unknown) = entries.keys().find(|k| !r.used.contains(k)) {
            return Err(HarnessError::Config(format!("unknown key '{unknown}'")));
        }

        Ok(Self {
            experiment_id,
            variant,
            n,
            tau_rule,
            tau,
            states,
            seeds,
            restarts,
            metric,
            engine,
            targets,
            oskw_normalization,
            threads,
            enforce_bound,
            csv,
            summary,
            tolerances,
            guards,
            entries,
        })
    }

    /// Walk directions: `n`, or `n + 1` for the optimized walk.
    pub fn directions(&self) -> usize {
        if self.variant == Algorithm::Oskw1 {
            self.n + 1
        } else {
            self.n
        }
    }

    pub fn plan(&self) -> IterationPlan {
        match self.tau_rule {
            TauRule::Explicit => IterationPlan::explicit(self.tau.unwrap_or(0)),
            TauRule::SkwOptimal => IterationPlan::skw_optimal(self.directions()),
            TauRule::OskwOptimal => IterationPlan::oskw_optimal(1 << self.directions()),
        }
    }

    /// Output paths, with relative ones resolved against `out_dir` and
    /// missing ones defaulting to `<experiment.id>.csv` / `.json`.
    pub fn output_paths(&self, out_dir: Option<&Path>) -> (PathBuf, PathBuf) {
        let resolve = |p: Option<&PathBuf>, ext: &str| {
            let p = p.cloned().unwrap_or_else(|| PathBuf::from(format!("{}.{ext}", self.experiment_id)));
            match out_dir {
                Some(dir) if p.is_relative() => dir.join(p),
                _ => p,
            }
        };
        (resolve(self.csv.as_ref(), "csv"), resolve(self.summary.as_ref(), "json"))
    }
}
