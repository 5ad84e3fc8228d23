use std::path::Path;

use anyhow::bail;
use nn2poly_core::mlp::random_init;
use nn2poly_core::{
    generate_polynomial_data, train, Activation, Architecture, Error, GeneratorConfig,
    TrainConfig, TransformConfig,
};
use rayon::prelude::*;

use super::compare::predictions;
use crate::config::FileConfig;
use crate::metrics::mse;
use crate::output::{csv_bytes, emit, fmt_f64};
use crate::SimulateArgs;

/// One network configuration of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub generator: GeneratorConfig,
    pub hidden_layers: usize,
    pub width: usize,
    pub activation: Activation,
    pub train_frac: f64,
    pub train: TrainConfig,
    pub transform: TransformConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRow {
    pub seed: u64,
    pub layers: usize,
    pub width: usize,
    pub activation: String,
    /// On the held-out split; NaN when training diverged.
    pub mse_poly_vs_nn: f64,
    pub mse_nn_vs_y: f64,
}

/// Generate, scale, split, train, transform and score one seed.
pub fn run_seed(scenario: &Scenario, seed: u64, cache_dir: Option<&Path>) -> anyhow::Result<SimRow> {
    let generator = GeneratorConfig {
        seed,
        ..scenario.generator.clone()
    };
    let (raw, _) = generate_polynomial_data(&generator)?;
    let data = raw.scale_unit(true);
    let (train_set, test_set) = data.split(scenario.train_frac, seed);

    let widths = vec![scenario.width; scenario.hidden_layers];
    let arch = Architecture::regression(generator.p, &widths, scenario.activation.clone());
    let model = random_init(&arch, seed, scenario.train.constrain)?;
    let train_cfg = TrainConfig {
        seed,
        ..scenario.train.clone()
    };
    let mut row = SimRow {
        seed,
        layers: scenario.hidden_layers,
        width: scenario.width,
        activation: scenario.activation.name(),
        mse_poly_vs_nn: f64::NAN,
        mse_nn_vs_y: f64::NAN,
    };
    let trained = match train(&model, &train_set, &train_cfg) {
        Ok((trained, _)) => trained,
        Err(Error::Divergence { .. }) => return Ok(row),
        Err(e) => return Err(e.into()),
    };
    let polys = super::extract(&trained, &scenario.transform, cache_dir)?.trace.output;
    let pred = predictions(&trained, &polys, &test_set)?;
    row.mse_poly_vs_nn = mse(&pred.poly[0], &pred.nn[0]);
    row.mse_nn_vs_y = mse(&pred.nn[0], &test_set.targets);
    Ok(row)
}

pub fn sweep(
    scenarios: &[Scenario],
    seeds: &[u64],
    cache_dir: Option<&Path>,
) -> anyhow::Result<Vec<SimRow>> {
    let jobs: Vec<(&Scenario, u64)> = scenarios
        .iter()
        .flat_map(|s| seeds.iter().map(move |&seed| (s, seed)))
        .collect();
    jobs.par_iter()
        .map(|(s, seed)| run_seed(s, *seed, cache_dir))
        .collect()
}

pub fn rows_csv(rows: &[SimRow]) -> anyhow::Result<Vec<u8>> {
    csv_bytes(
        &["seed", "layers", "width", "activation", "mse_poly_vs_nn", "mse_nn_vs_y"],
        rows.iter().map(|r| {
            vec![
                r.seed.to_string(),
                r.layers.to_string(),
                r.width.to_string(),
                r.activation.clone(),
                fmt_f64(r.mse_poly_vs_nn),
                fmt_f64(r.mse_nn_vs_y),
            ]
        }),
    )
}

pub fn run(args: &SimulateArgs, file: &FileConfig, cache_dir: Option<&Path>) -> anyhow::Result<()> {
    if args.layers.contains(&0) {
        bail!("every scenario needs at least one hidden layer");
    }
    if args.width.contains(&0) {
        bail!("hidden width must be positive");
    }
    if !(0.0..1.0).contains(&args.train_frac) || args.train_frac == 0.0 {
        bail!("--train-frac must lie strictly between 0 and 1");
    }
    let transform = file.transform(&args.transform)?;
    let train = TrainConfig {
        constrain: args.constrain,
        ..file.train(args.epochs, args.batch_size, args.learning_rate)
    };
    let generator = GeneratorConfig {
        p: args.p,
        order: args.q_poly,
        n_interactions: args.interactions,
        n_samples: args.samples,
        noise_sd: args.noise_sd,
        ..GeneratorConfig::default()
    };
    let mut scenarios = Vec::new();
    for &hidden_layers in &args.layers {
        for &width in &args.width {
            for activation in &args.activation {
                scenarios.push(Scenario {
                    generator: generator.clone(),
                    hidden_layers,
                    width,
                    activation: activation.clone(),
                    train_frac: args.train_frac,
                    train: train.clone(),
                    transform: transform.clone(),
                });
            }
        }
    }
    let rows = sweep(&scenarios, &args.seed, cache_dir)?;
    emit(args.out.as_deref(), &rows_csv(&rows)?)
}
