//! Flat TOML pipeline configuration. Command-line flags override file values,
//! which override the defaults below.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

/// `(key, default, meaning)` for every configuration key, in help order.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("lambda_p", "1.3", "positional threshold multiplier for transition edges"),
    ("lambda_v", "1.3", "velocity threshold multiplier for transition edges"),
    ("th", "0.95", "fraction of joints that must pass both thresholds"),
    ("prefilter", "true", "stop testing a candidate pair once it cannot reach th (exact)"),
    ("keep_all_sccs", "false", "skip pruning to the largest strongly connected component"),
    ("beam", "200", "beam width K of the retrieval search"),
    ("gamma", "1.5", "cost-gap slack gamma; states above C_min + gamma*tau/T are dropped"),
    ("beta", "0.1", "penalty per transition edge on a retrieved path"),
    ("lambda_r", "1.0", "weight of the rotation term of the frame distance"),
    ("lambda_p_metric", "1.0", "weight of the position term of the frame distance"),
    ("normalize_positions", "false", "divide the position term by the mean upper-body bone length"),
    ("fps", "30", "expected frame rate of every input; others are warned about"),
    ("clip_len", "90", "frames per sampled window (3 s)"),
    ("overlap", "6", "frames shared by consecutive windows (0.2 s)"),
    ("sampling_steps", "50", "DDIM steps when no schedule file sets them"),
    ("seed", "0", "seed of the sampler noise"),
    ("sigma", "0.1", "beat-consistency kernel width in seconds"),
    ("prominence", "0.05", "minimum prominence of a kinematic beat in m/s"),
    ("preserve_length", "true", "replace frames at transitions instead of inserting two"),
    ("workers", "1", "worker threads; results do not depend on it"),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub lambda_p: f64,
    pub lambda_v: f64,
    pub th: f64,
    pub prefilter: bool,
    pub keep_all_sccs: bool,
    pub beam: usize,
    pub gamma: f64,
    pub beta: f64,
    pub lambda_r: f64,
    pub lambda_p_metric: f64,
    pub normalize_positions: bool,
    pub fps: f64,
    pub clip_len: usize,
    pub overlap: usize,
    pub sampling_steps: usize,
    pub seed: u64,
    pub sigma: f64,
    pub prominence: f64,
    pub preserve_length: bool,
    pub workers: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            lambda_p: 1.3,
            lambda_v: 1.3,
            th: 0.95,
            prefilter: true,
            keep_all_sccs: false,
            beam: 200,
            gamma: 1.5,
            beta: 0.1,
            lambda_r: 1.0,
            lambda_p_metric: 1.0,
            normalize_positions: false,
            fps: 30.0,
            clip_len: 90,
            overlap: 6,
            sampling_steps: 50,
            seed: 0,
            sigma: 0.1,
            prominence: 0.05,
            preserve_length: true,
            workers: 1,
        }
    }
}

fn invalid(key: &str, why: impl std::fmt::Display) -> CliError {
    CliError::new("config", format!("{key}: {why}"))
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::new("config", format!("{}: {}", path.display(), e.message())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(key, format!("must be positive and finite, got {v}")))
            }
        };
        let non_negative = |key: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(key, format!("must be non-negative and finite, got {v}")))
            }
        };
        positive("lambda_p", self.lambda_p)?;
        positive("lambda_v", self.lambda_v)?;
        if !(0.0..=1.0).contains(&self.th) {
            return Err(invalid("th", format!("must lie in [0, 1], got {}", self.th)));
        }
        if self.beam == 0 {
            return Err(invalid("beam", "must be at least 1"));
        }
        // an infinite gamma disables the slack test
        if !(self.gamma > 0.0) {
            return Err(invalid("gamma", format!("must be positive, got {}", self.gamma)));
        }
        non_negative("beta", self.beta)?;
        non_negative("lambda_r", self.lambda_r)?;
        non_negative("lambda_p_metric", self.lambda_p_metric)?;
        if self.lambda_r == 0.0 && self.lambda_p_metric == 0.0 {
            return Err(invalid("lambda_r", "lambda_r and lambda_p_metric cannot both be zero"));
        }
        positive("fps", self.fps)?;
        if self.clip_len < 2 {
            return Err(invalid("clip_len", "must be at least 2"));
        }
        if self.overlap >= self.clip_len {
            return Err(invalid("overlap", format!("must be below clip_len ({})", self.clip_len)));
        }
        if self.sampling_steps == 0 {
            return Err(invalid("sampling_steps", "must be at least 1"));
        }
        positive("sigma", self.sigma)?;
        non_negative("prominence", self.prominence)?;
        if self.workers == 0 {
            return Err(invalid("workers", "must be at least 1"));
        }
        Ok(())
    }
}

/// Help text listing every key and its default.
pub fn keys_help() -> String {
    let width = KEYS.iter().map(|(k, _, _)| k.len()).max().unwrap_or(0);
    let mut out = String::from("Configuration keys (flat TOML via --config; flags take precedence):\n");
    for (key, default, meaning) in KEYS {
        out.push_str(&format!("  {key:<width$}  default {default:<5}  {meaning}\n"));
    }
    out
}
