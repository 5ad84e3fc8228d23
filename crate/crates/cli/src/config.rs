//! Optional TOML defaults. Precedence: flags, then this file, then built-ins.

use std::path::Path;

use anyhow::Context;
use nn2poly_core::{Mode, TrainConfig, TransformConfig};
use serde::Deserialize;

use crate::TransformArgs;

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub q_taylor: Option<Vec<u32>>,
    pub q_max: Option<u32>,
    pub mode: Option<String>,
    #[serde(default)]
    pub train: TrainSection,
}

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TrainSection {
    pub epochs: Option<usize>,
    pub batch_size: Option<usize>,
    pub learning_rate: Option<f64>,
}

pub const DEFAULT_EPOCHS: usize = 200;
pub const DEFAULT_BATCH_SIZE: usize = 32;
pub const DEFAULT_LEARNING_RATE: f64 = 1e-3;

impl FileConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn transform(&self, flags: &TransformArgs) -> anyhow::Result<TransformConfig> {
        let defaults = TransformConfig::default();
        let file_mode = self
            .mode
            .as_deref()
            .map(str::parse::<Mode>)
            .transpose()
            .context("config `mode`")?;
        let taylor_orders = if !flags.q_taylor.is_empty() {
            flags.q_taylor.clone()
        } else {
            self.q_taylor.clone().unwrap_or(defaults.taylor_orders)
        };
        Ok(TransformConfig {
            taylor_orders,
            q_max: flags.q_max.or(self.q_max).unwrap_or(defaults.q_max),
            mode: flags.mode.or(file_mode).unwrap_or(defaults.mode),
        })
    }

    pub fn train(
        &self,
        epochs: Option<usize>,
        batch_size: Option<usize>,
        learning_rate: Option<f64>,
    ) -> TrainConfig {
        TrainConfig {
            epochs: epochs.or(self.train.epochs).unwrap_or(DEFAULT_EPOCHS),
            batch_size: batch_size
                .or(self.train.batch_size)
                .unwrap_or(DEFAULT_BATCH_SIZE),
            learning_rate: learning_rate
                .or(self.train.learning_rate)
                .unwrap_or(DEFAULT_LEARNING_RATE),
            ..TrainConfig::default()
        }
    }
}
