//! Initial-state families addressable from configs and the command line.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use qwsearch::{MixedEnsemble64, NodeState64};

use crate::error::{HarnessError, Result};

/// One concrete initial state, before the qubit count is fixed.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Uniform,
    /// Uniform over even-parity vertices.
    EvenUniform,
    Basis { index: usize },
    /// Haar-random; `seed` falls back to the run seed when absent.
    HaarRandom { seed: Option<u64> },
    /// `normalize((1 - t) η + t e_index)`.
    Interpolated { t: f64, index: usize },
    Ghz,
    /// `cos α |0…0⟩ + sin α |1…1⟩`.
    GhzAngle { alpha: f64 },
    W,
    /// `|a_index|² = λ + (1 - λ)/N`, every other `|a_x|² = (1 - λ)/N`.
    Tilted { lambda: f64, index: usize },
    ExplicitAmplitudes(Vec<Complex64>),
    Mixed(Vec<(f64, Family)>),
}

/// A built initial state.
#[derive(Debug, Clone)]
pub enum Prepared {
    Pure(NodeState64),
    Mixed(MixedEnsemble64),
}

impl Family {
    pub fn build(&self, qubits: usize, run_seed: u64) -> Result<Prepared> {
        Ok(match self {
            Family::Mixed(members) => {
                let members = members
                    .iter()
                    .map(|(p, f)| match f.build(qubits, run_seed)? {
                        Prepared::Pure(s) => Ok((*p, s)),
                        Prepared::Mixed(_) => Err(HarnessError::StateSpec("nested mixed ensembles are not supported".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Prepared::Mixed(MixedEnsemble64::new(members)?)
            }
            pure => Prepared::Pure(pure.build_pure(qubits, run_seed)?),
        })
    }

    pub fn build_pure(&self, qubits: usize, run_seed: u64) -> Result<NodeState64> {
        let nodes = 1usize.checked_shl(qubits as u32).unwrap_or(0);
        Ok(match self {
            Family::Uniform => NodeState64::uniform(qubits)?,
            Family::EvenUniform => NodeState64::even_uniform(qubits)?,
            Family::Basis { index } => NodeState64::basis(qubits, *index)?,
            Family::HaarRandom { seed } => NodeState64::random(qubits, seed.unwrap_or(run_seed))?,
            Family::Interpolated { t, index } => {
                if *index >= nodes {
                    return Err(qwsearch::Error::IndexOutOfRange { index: *index, count: nodes }.into());
                }
                let eta = (1.0 - t) / (nodes as f64).sqrt();
                let mut amps = vec![Complex64::new(eta, 0.0); nodes];
                amps[*index] += t;
                NodeState64::normalized(amps)?
            }
            Family::Ghz => NodeState64::ghz(qubits)?,
            Family::GhzAngle { alpha } => NodeState64::ghz_angle(qubits, *alpha)?,
            Family::W => NodeState64::w(qubits)?,
            Family::Tilted { lambda, index } => {
                if *index >= nodes {
                    return Err(qwsearch::Error::IndexOutOfRange { index: *index, count: nodes }.into());
                }
                let rest = (1.0 - lambda) / nodes as f64;
                let mut probs = vec![rest; nodes];
                probs[*index] += lambda;
                NodeState64::from_real(&probs.iter().map(|p| p.sqrt()).collect::<Vec<_>>())?
            }
            Family::ExplicitAmplitudes(amps) => {
                if amps.len() != nodes {
                    return Err(qwsearch::Error::DimensionMismatch { expected: nodes, found: amps.len() }.into());
                }
                NodeState64::from_amplitudes(amps.clone())?
            }
            Family::Mixed(_) => return Err(HarnessError::StateSpec("a mixed ensemble is not a pure state".into())),
        })
    }

    pub fn is_mixed(&self) -> bool {
        matches!(self, Family::Mixed(_))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Uniform => write!(f, "uniform"),
            Family::EvenUniform => write!(f, "even_uniform"),
            Family::Basis { index } => write!(f, "basis(index={index})"),
            Family::HaarRandom { seed: Some(s) } => write!(f, "haar_random(seed={s})"),
            Family::HaarRandom { seed: None } => write!(f, "haar_random"),
            Family::Interpolated { t, index } => write!(f, "interpolated(t={t},index={index})"),
            Family::Ghz => write!(f, "ghz"),
            Family::GhzAngle { alpha } => write!(f, "ghz_angle(alpha={alpha})"),
            Family::W => write!(f, "w"),
            Family::Tilted { lambda, index } => write!(f, "tilted(lambda={lambda},index={index})"),
            Family::ExplicitAmplitudes(a) => write!(f, "explicit_amplitudes(len={})", a.len()),
            Family::Mixed(m) => {
                write!(f, "mixed_ensemble(")?;
                for (k, (p, member)) in m.iter().enumerate() {
                    if k > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{p}*{member}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn spec_err(msg: impl Into<String>) -> HarnessError {
    HarnessError::StateSpec(msg.into())
}

/// Splits a comma-separated list, ignoring surrounding whitespace.
pub fn split_list(value: &str) -> Vec<&str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn parse_values<V: std::str::FromStr>(key: &str, value: Option<&String>, default: Option<V>) -> Result<Vec<V>> {
    match value {
        None => default.map(|d| vec![d]).ok_or_else(|| spec_err(format!("missing parameter '{key}'"))),
        Some(v) => {
            let items = split_list(v);
            if items.is_empty() {
                return Err(spec_err(format!("empty value for '{key}'")));
            }
            items.iter().map(|s| s.parse().map_err(|_| spec_err(format!("cannot parse '{s}' for '{key}'")))).collect()
        }
    }
}

fn unit_interval(key: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        Some(v) => Err(spec_err(format!("'{key}' = {v} lies outside [0, 1]"))),
        None => Ok(()),
    }
}

fn parse_amplitudes(value: &str) -> Result<Vec<Complex64>> {
    split_list(value)
        .iter()
        .map(|s| s.replace(' ', "").parse::<Complex64>().map_err(|_| spec_err(format!("cannot parse amplitude '{s}'"))))
        .collect()
}

/// Reads the families described by `params` (keys without any prefix:
/// `family`, `t`, `index`, `alpha`, `lambda`, `seed`, `amplitudes`,
/// `member.K.*`). List-valued `t`, `alpha`, `lambda`, `index` and `seed`
/// expand to one family per value, in the order given.
pub fn families_from_params(params: &BTreeMap<String, String>) -> Result<Vec<Family>> {
    let family = params.get("family").ok_or_else(|| spec_err("missing 'family'"))?;
    let known: &[&str] = match family.as_str() {
        "uniform" | "eta" | "even_uniform" | "ghz" | "w" => &[],
        "basis" => &["index"],
        "haar_random" | "haar" => &["seed"],
        "interpolated" => &["t", "index"],
        "ghz_angle" => &["alpha"],
        "tilted" => &["lambda", "index"],
        "explicit_amplitudes" => &["amplitudes"],
        "mixed_ensemble" => &[],
        other => return Err(spec_err(format!("unknown family '{other}'"))),
    };
    for key in params.keys().filter(|k| *k != "family") {
        let member_key = family == "mixed_ensemble" && key.starts_with("member.");
        if !member_key && !known.contains(&key.as_str()) {
            return Err(spec_err(format!("parameter '{key}' does not apply to family '{family}'")));
        }
    }
    let index = || parse_values::<usize>("index", params.get("index"), Some(0));
    Ok(match family.as_str() {
        "uniform" | "eta" => vec![Family::Uniform],
        "even_uniform" => vec![Family::EvenUniform],
        "ghz" => vec![Family::Ghz],
        "w" => vec![Family::W],
        "basis" => parse_values("index", params.get("index"), None)?.into_iter().map(|index| Family::Basis { index }).collect(),
        "haar_random" | "haar" => match params.get("seed") {
            None => vec![Family::HaarRandom { seed: None }],
            Some(_) => parse_values::<u64>("seed", params.get("seed"), None)?.into_iter().map(|s| Family::HaarRandom { seed: Some(s) }).collect(),
        },
        "interpolated" => {
            let ts = parse_values::<f64>("t", params.get("t"), None)?;
            unit_interval("t", &ts)?;
            let indices = index()?;
            indices.iter().flat_map(|&index| ts.iter().map(move |&t| Family::Interpolated { t, index })).collect()
        }
        "ghz_angle" => parse_values("alpha", params.get("alpha"), None)?.into_iter().map(|alpha| Family::GhzAngle { alpha }).collect(),
        "tilted" => {
            let ls = parse_values::<f64>("lambda", params.get("lambda"), None)?;
            unit_interval("lambda", &ls)?;
            let indices = index()?;
            indices.iter().flat_map(|&index| ls.iter().map(move |&lambda| Family::Tilted { lambda, index })).collect()
        }
        "explicit_amplitudes" => {
            let raw = params.get("amplitudes").ok_or_else(|| spec_err("missing parameter 'amplitudes'"))?;
            vec![Family::ExplicitAmplitudes(parse_amplitudes(raw)?)]
        }
        _ => vec![Family::Mixed(mixed_members(params)?)],
    })
}

fn mixed_members(params: &BTreeMap<String, String>) -> Result<Vec<(f64, Family)>> {
    let mut grouped: BTreeMap<usize, BTreeMap<String, String>> = BTreeMap::new();
    for (key, value) in params.iter().filter(|(k, _)| k.starts_with("member.")) {
        let rest = &key["member.".len()..];
        let (idx, field) = rest.split_once('.').ok_or_else(|| spec_err(format!("malformed member key '{key}'")))?;
        let idx: usize = idx.parse().map_err(|_| spec_err(format!("malformed member index in '{key}'")))?;
        grouped.entry(idx).or_default().insert(field.to_string(), value.clone());
    }
    if grouped.is_empty() {
        return Err(spec_err("mixed_ensemble needs member.K.weight and member.K.family entries"));
    }
    grouped
        .into_values()
        .map(|mut fields| {
            let weight = fields.remove("weight").ok_or_else(|| spec_err("member without 'weight'"))?;
            let weight: f64 = weight.trim().parse().map_err(|_| spec_err(format!("cannot parse weight '{weight}'")))?;
            let mut fams = families_from_params(&fields)?;
            if fams.len() != 1 {
                return Err(spec_err("ensemble members must describe exactly one state"));
            }
            let member = fams.remove(0);
            if member.is_mixed() {
                return Err(spec_err("nested mixed ensembles are not supported"));
            }
            Ok((weight, member))
        })
        .collect()
}

/// Parses a command-line state spec: `family key=value key=value ...`, with
/// the qubit count given as `n=`. Example: `interpolated n=6 t=0.25`.
pub fn parse_state_spec(spec: &str) -> Result<(usize, Family)> {
    let mut tokens = spec.split_whitespace();
    let family = tokens.next().ok_or_else(|| spec_err("empty state spec"))?;
    let mut params = BTreeMap::from([("family".to_string(), family.to_string())]);
    let mut n = None;
    for tok in tokens {
        let (k, v) = tok.split_once('=').ok_or_else(|| spec_err(format!("expected key=value, found '{tok}'")))?;
        if k == "n" {
            n = Some(v.parse::<usize>().map_err(|_| spec_err(format!("cannot parse qubit count '{v}'")))?);
        } else if params.insert(k.to_string(), v.to_string()).is_some() {
            return Err(spec_err(format!("duplicate key '{k}'")));
        }
    }
    let n = match (n, params.get("amplitudes")) {
        (Some(n), _) => n,
        (None, Some(a)) => {
            let len = split_list(a).len();
            if !len.is_power_of_two() {
                return Err(qwsearch::Error::NotPowerOfTwo(len).into());
            }
            len.trailing_zeros() as usize
        }
        (None, None) => return Err(spec_err("missing qubit count 'n='")),
    };
    let mut fams = families_from_params(&params)?;
    if fams.len() != 1 {
        return Err(spec_err("a state spec must describe exactly one state"));
    }
    Ok((n, fams.remove(0)))
}
