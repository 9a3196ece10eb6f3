//! File formats around the pipeline: entity profiles as CSV, run
//! configuration as flat key=value text.
//!
//! Profile rows are `id,attributes,persona` where attributes pack as
//! `key=value;key=value`. Config files hold one key per line, `#`
//! comments, and omit whatever should keep its default.

use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use super::{GenerationConfig, STREAM_PROFILES};
use crate::hypergraph::{EntityProfile, NodeId};
use crate::microdynamics::SizeSampler;

#[derive(Debug, Error)]
pub enum ProfileIoError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
}

fn parse_attributes(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut attributes = Vec::new();
    for segment in text.split(';') {
        let segment = segment.trim();
        if segment.is_empty() {
            continue;
        }
        let (key, value) = segment
            .split_once('=')
            .ok_or_else(|| format!("attribute {segment:?} is not key=value"))?;
        attributes.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(attributes)
}

fn render_attributes(attributes: &[(String, String)]) -> String {
    attributes
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Reads `id,attributes,persona` rows below a header. Row numbers in
/// errors count the header as line 1.
pub fn load_profiles(path: &Path) -> Result<Vec<EntityProfile>, ProfileIoError> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut profiles = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record?;
        if record.len() != 3 {
            return Err(ProfileIoError::Row {
                row,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let id: u64 = record[0].trim().parse().map_err(|_| ProfileIoError::Row {
            row,
            message: format!("invalid id {:?}", &record[0]),
        })?;
        let attributes = parse_attributes(&record[1])
            .map_err(|message| ProfileIoError::Row { row, message })?;
        let profile = EntityProfile::new(NodeId(id), attributes, record[2].to_string())
            .map_err(|e| ProfileIoError::Row {
                row,
                message: e.to_string(),
            })?;
        profiles.push(profile);
    }
    Ok(profiles)
}

pub fn save_profiles(path: &Path, profiles: &[EntityProfile]) -> Result<(), ProfileIoError> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["id", "attributes", "persona"])?;
    for profile in profiles {
        writer.write_record([
            profile.id.0.to_string(),
            render_attributes(&profile.attributes),
            profile.persona.clone(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

const FIELDS: [&str; 8] = [
    "algebra",
    "analysis",
    "combinatorics",
    "geometry",
    "logic",
    "number theory",
    "probability",
    "topology",
];
const SENIORITY: [&str; 3] = ["junior", "mid", "senior"];

/// Deterministically fabricates `n` profiles with dense ids for runs
/// that start from nothing but a config.
pub fn synthesize_profiles(n: usize, domain: &str, seed: u64) -> Vec<EntityProfile> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_PROFILES);
    (0..n)
        .map(|i| {
            let field = FIELDS[rng.gen_range(0..FIELDS.len())];
            let seniority = SENIORITY[rng.gen_range(0..SENIORITY.len())];
            EntityProfile::new(
                NodeId(i as u64),
                vec![
                    ("field".to_string(), field.to_string()),
                    ("seniority".to_string(), seniority.to_string()),
                ],
                format!("{domain} member {i} working in {field}"),
            )
            .expect("fixed attribute keys are unique")
        })
        .collect()
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

fn parse_size_spec(text: &str) -> Result<SizeSampler, String> {
    if let Some(rest) = text.strip_prefix("fixed:") {
        let k = rest
            .trim()
            .parse()
            .map_err(|_| format!("invalid fixed size {rest:?}"))?;
        return Ok(SizeSampler::Fixed(k));
    }
    if let Some(rest) = text.strip_prefix("discrete:") {
        let mut pairs = Vec::new();
        for part in rest.split(',') {
            let (size, weight) = part
                .split_once(':')
                .ok_or_else(|| format!("entry {part:?} is not size:weight"))?;
            let size = size
                .trim()
                .parse()
                .map_err(|_| format!("invalid size {size:?}"))?;
            let weight = weight
                .trim()
                .parse()
                .map_err(|_| format!("invalid weight {weight:?}"))?;
            pairs.push((size, weight));
        }
        return Ok(SizeSampler::Discrete(pairs));
    }
    Err(format!("size spec {text:?} must start with fixed: or discrete:"))
}

fn render_size_spec(spec: &SizeSampler) -> String {
    match spec {
        SizeSampler::Fixed(k) => format!("fixed:{k}"),
        SizeSampler::Discrete(pairs) => {
            let body = pairs
                .iter()
                .map(|(k, w)| format!("{k}:{w}"))
                .collect::<Vec<_>>()
                .join(",");
            format!("discrete:{body}")
        }
    }
}

/// Parses flat key=value text into a config, starting from defaults.
/// Unknown keys and unparseable values error with their line number.
pub fn parse_config(text: &str) -> Result<GenerationConfig, ConfigError> {
    let mut config = GenerationConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| ConfigError::Line {
            line,
            message: format!("expected key=value, found {trimmed:?}"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |message: String| ConfigError::Line { line, message };
        let bad_value =
            |key: &str| bad(format!("invalid value {value:?} for {key}"));

        match key {
            "num_nodes" => config.num_nodes = value.parse().map_err(|_| bad_value(key))?,
            "target_edges" => {
                config.target_edges = value.parse().map_err(|_| bad_value(key))?
            }
            "attach_probability" => {
                config.attach_probability = value.parse().map_err(|_| bad_value(key))?
            }
            "size_spec" => {
                config.size_spec = Some(parse_size_spec(value).map_err(|m| {
                    bad(format!("size_spec: {m}"))
                })?)
            }
            "optimizer_suggestion_count" => {
                config.optimizer_suggestion_count =
                    value.parse().map_err(|_| bad_value(key))?
            }
            "evolution_steps" => {
                config.evolution_steps = value.parse().map_err(|_| bad_value(key))?
            }
            "generation_attempts_per_step" => {
                config.generation_attempts_per_step =
                    value.parse().map_err(|_| bad_value(key))?
            }
            "min_size" => config.min_size = value.parse().map_err(|_| bad_value(key))?,
            "max_size" => config.max_size = value.parse().map_err(|_| bad_value(key))?,
            "seed" => config.seed = value.parse().map_err(|_| bad_value(key))?,
            "domain_label" => config.domain_label = value.to_string(),
            "backend" => {
                config.backend = value.parse().map_err(|m: String| bad(m))?
            }
            "focus_bias" => config.focus_bias = value.parse().map_err(|_| bad_value(key))?,
            "size_exponent" => {
                config.size_exponent = value.parse().map_err(|_| bad_value(key))?
            }
            "alpha" => config.alpha = value.parse().map_err(|_| bad_value(key))?,
            "exponent_gamma" => {
                config.exponent_gamma = value.parse().map_err(|_| bad_value(key))?
            }
            "q_threshold" => {
                config.q_threshold = value.parse().map_err(|_| bad_value(key))?
            }
            "removal_fraction" => {
                config.removal_fraction = value.parse().map_err(|_| bad_value(key))?
            }
            "diversity_target" => {
                config.diversity_target = value.parse().map_err(|_| bad_value(key))?
            }
            other => {
                return Err(bad(format!("unknown key {other:?}")));
            }
        }
    }
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<GenerationConfig, ConfigError> {
    parse_config(&std::fs::read_to_string(path)?)
}

/// Renders every field in declaration order; `size_spec` is omitted
/// when unset. Output re-parses to an equal config.
pub fn render_config(config: &GenerationConfig) -> String {
    let mut out = String::new();
    let mut push = |key: &str, value: String| {
        out.push_str(key);
        out.push('=');
        out.push_str(&value);
        out.push('\n');
    };
    push("num_nodes", config.num_nodes.to_string());
    push("target_edges", config.target_edges.to_string());
    push("attach_probability", config.attach_probability.to_string());
    if let Some(spec) = &config.size_spec {
        push("size_spec", render_size_spec(spec));
    }
    push(
        "optimizer_suggestion_count",
        config.optimizer_suggestion_count.to_string(),
    );
    push("evolution_steps", config.evolution_steps.to_string());
    push(
        "generation_attempts_per_step",
        config.generation_attempts_per_step.to_string(),
    );
    push("min_size", config.min_size.to_string());
    push("max_size", config.max_size.to_string());
    push("seed", config.seed.to_string());
    push("domain_label", config.domain_label.clone());
    push("backend", config.backend.to_string());
    push("focus_bias", config.focus_bias.to_string());
    push("size_exponent", config.size_exponent.to_string());
    push("alpha", config.alpha.to_string());
    push("exponent_gamma", config.exponent_gamma.to_string());
    push("q_threshold", config.q_threshold.to_string());
    push("removal_fraction", config.removal_fraction.to_string());
    push("diversity_target", config.diversity_target.to_string());
    out
}

pub fn save_config(path: &Path, config: &GenerationConfig) -> Result<(), ConfigError> {
    std::fs::write(path, render_config(config))?;
    Ok(())
}
