use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context};
use nn2poly_core::{Dataset, MlpModel, Polynomial, TransformConfig};
use serde::Serialize;

use crate::config::FileConfig;
use crate::metrics::{mse, r_squared};
use crate::output::{csv_bytes, emit, fmt_f64};
use crate::CompareArgs;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportConfig {
    pub weights: String,
    pub data: String,
    pub q_taylor: Vec<u32>,
    pub q_max: u32,
    pub mode: String,
    pub effective_orders: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Evaluation {
    /// Which rows the metrics were computed on.
    pub split: String,
    pub n_samples: usize,
    pub n_outputs: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Metrics {
    /// Averaged over all outputs.
    pub mse_poly_vs_nn: f64,
    /// First output against the dataset target.
    pub mse_nn_vs_target: f64,
    pub r2_poly_vs_nn: f64,
    pub r2_nn_vs_target: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Timings {
    pub cache_build_ms: f64,
    pub transform_ms: f64,
    pub evaluation_ms: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub seed: Option<u64>,
    pub config: ReportConfig,
    pub evaluation: Evaluation,
    pub metrics: Metrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// Network and polynomial predictions, one column per output.
pub struct Predictions {
    pub nn: Vec<Vec<f64>>,
    pub poly: Vec<Vec<f64>>,
}

pub fn predictions(
    model: &MlpModel,
    polys: &[Polynomial],
    data: &Dataset,
) -> anyhow::Result<Predictions> {
    if data.p() != model.p() {
        bail!(
            "dataset has {} input columns but the model expects {}",
            data.p(),
            model.p()
        );
    }
    let nn_matrix = model.predict(&data.inputs)?;
    let nn = nn_matrix.columns().into_iter().map(|c| c.to_vec()).collect();
    let poly = polys
        .iter()
        .map(|poly| {
            data.inputs
                .outer_iter()
                .map(|row| Ok(poly.evaluate(&row.to_vec())?))
                .collect::<anyhow::Result<Vec<f64>>>()
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(Predictions { nn, poly })
}

pub fn metrics(pred: &Predictions, targets: &[f64]) -> Metrics {
    let outputs = pred.nn.len() as f64;
    let mse_poly = pred
        .nn
        .iter()
        .zip(&pred.poly)
        .map(|(nn, poly)| mse(poly, nn))
        .sum::<f64>()
        / outputs;
    let r2_poly = pred
        .nn
        .iter()
        .zip(&pred.poly)
        .map(|(nn, poly)| r_squared(poly, nn))
        .sum::<f64>()
        / outputs;
    Metrics {
        mse_poly_vs_nn: mse_poly,
        mse_nn_vs_target: mse(&pred.nn[0], targets),
        r2_poly_vs_nn: r2_poly,
        r2_nn_vs_target: r_squared(&pred.nn[0], targets),
    }
}

fn human_table(report: &RunReport) -> String {
    let m = &report.metrics;
    let mut out = format!(
        "{:<22}{:>14}\n{:<22}{:>14}\n",
        "samples", report.evaluation.n_samples, "outputs", report.evaluation.n_outputs
    );
    for (name, v) in [
        ("mse(poly, nn)", m.mse_poly_vs_nn),
        ("mse(nn, target)", m.mse_nn_vs_target),
        ("r2(poly, nn)", m.r2_poly_vs_nn),
        ("r2(nn, target)", m.r2_nn_vs_target),
    ] {
        out.push_str(&format!("{name:<22}{v:>14.6e}\n"));
    }
    out
}

pub fn report_config(args_weights: &Path, args_data: &Path, cfg: &TransformConfig, n_layers: usize) -> anyhow::Result<ReportConfig> {
    Ok(ReportConfig {
        weights: args_weights.display().to_string(),
        data: args_data.display().to_string(),
        q_taylor: cfg.layer_orders(n_layers)?,
        q_max: cfg.q_max,
        mode: cfg.mode.to_string(),
        effective_orders: cfg.effective_orders(n_layers)?,
    })
}

pub fn run(args: &CompareArgs, file: &FileConfig, cache_dir: Option<&Path>) -> anyhow::Result<()> {
    let model = super::load_model(&args.weights)?;
    let data = Dataset::from_csv(&args.data)
        .with_context(|| format!("loading dataset {}", args.data.display()))?;
    let config = file.transform(&args.transform)?;
    let extraction = super::extract(&model, &config, cache_dir)?;

    let start = Instant::now();
    let pred = predictions(&model, &extraction.trace.output, &data)?;
    let metrics = metrics(&pred, &data.targets);
    let evaluation_time = start.elapsed();

    let report = RunReport {
        command: "compare".to_string(),
        seed: None,
        config: report_config(&args.weights, &args.data, &config, model.layers().len())?,
        evaluation: Evaluation {
            split: "all rows".to_string(),
            n_samples: data.len(),
            n_outputs: pred.nn.len(),
        },
        metrics,
        timings: args.timings.then(|| Timings {
            cache_build_ms: extraction.cache_time.as_secs_f64() * 1e3,
            transform_ms: extraction.transform_time.as_secs_f64() * 1e3,
            evaluation_ms: evaluation_time.as_secs_f64() * 1e3,
        }),
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    emit(args.out.as_deref(), json.as_bytes())?;
    eprint!("{}", human_table(&report));

    if let Some(path) = &args.pred_out {
        let rows = (0..data.len()).map(|i| {
            vec![fmt_f64(pred.nn[0][i]), fmt_f64(pred.poly[0][i])]
        });
        emit(Some(path), &csv_bytes(&["nn_pred", "poly_pred"], rows)?)?;
    }
    Ok(())
}
