pub mod compare;
pub mod diagnose;
pub mod extract;
pub mod growth;
pub mod partitions;
pub mod simulate;

use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::Context;
use nn2poly_core::transform::{nn2poly_with_cache, required_cache_order};
use nn2poly_core::{MlpModel, PartitionCache, TransformConfig, TransformTrace};

pub(crate) fn load_model(path: &Path) -> anyhow::Result<MlpModel> {
    MlpModel::load(path).with_context(|| format!("loading weights {}", path.display()))
}

pub(crate) struct Extraction {
    pub trace: TransformTrace,
    pub cache_time: Duration,
    pub transform_time: Duration,
}

/// Builds (or loads) the partition cache and runs the transform.
pub(crate) fn extract(
    model: &MlpModel,
    config: &TransformConfig,
    cache_dir: Option<&Path>,
) -> anyhow::Result<Extraction> {
    let start = Instant::now();
    let cache = PartitionCache::load_or_build(cache_dir, required_cache_order(model, config)?)?;
    let cache_time = start.elapsed();
    let start = Instant::now();
    let trace = nn2poly_with_cache(model, config, &cache)?;
    Ok(Extraction {
        trace,
        cache_time,
        transform_time: start.elapsed(),
    })
}
