use anyhow::Context;
use nn2poly_core::{potential_diagnostics, Dataset, PotentialStats};

use crate::config::FileConfig;
use crate::output::{csv_bytes, emit, fmt_f64};
use crate::DiagnoseArgs;

const HEADER: [&str; 15] = [
    "layer",
    "width",
    "samples",
    "mean",
    "sd",
    "frac_abs_gt_1",
    "min",
    "max",
    "taylor_order",
    "max_taylor_error",
    "mean_taylor_error",
    "bin",
    "bin_lo",
    "bin_hi",
    "count",
];

/// One row per (layer, histogram bin) with the layer summary repeated.
pub fn stats_csv(stats: &PotentialStats) -> anyhow::Result<Vec<u8>> {
    let rows = stats.layers.iter().flat_map(|l| {
        l.histogram.counts.iter().enumerate().map(move |(bin, count)| {
            let (lo, hi) = l.histogram.bin_edges(bin);
            vec![
                l.layer.to_string(),
                l.width.to_string(),
                l.samples.to_string(),
                fmt_f64(l.mean),
                fmt_f64(l.sd),
                fmt_f64(l.frac_outside_unit),
                fmt_f64(l.min),
                fmt_f64(l.max),
                l.taylor_order.to_string(),
                fmt_f64(l.max_taylor_error),
                fmt_f64(l.mean_taylor_error),
                (bin + 1).to_string(),
                fmt_f64(lo),
                fmt_f64(hi),
                count.to_string(),
            ]
        })
    });
    csv_bytes(&HEADER, rows)
}

pub fn run(args: &DiagnoseArgs, file: &FileConfig) -> anyhow::Result<()> {
    let model = super::load_model(&args.weights)?;
    let data = Dataset::from_csv(&args.data)
        .with_context(|| format!("loading dataset {}", args.data.display()))?;
    if data.p() != model.p() {
        anyhow::bail!(
            "dataset has {} input columns but the model expects {}",
            data.p(),
            model.p()
        );
    }
    let orders = if args.q_taylor.is_empty() {
        file.q_taylor.clone().unwrap_or_else(|| vec![8])
    } else {
        args.q_taylor.clone()
    };
    let stats = potential_diagnostics(&model, &data, &orders)?;
    emit(args.out.as_deref(), &stats_csv(&stats)?)
}
