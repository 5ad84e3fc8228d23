use ndarray::Array2;

use super::{Dataset, MlpModel};
use crate::error::{Error, Result};
use crate::taylor::{taylor_coeffs, TaylorCoeffs};

pub const HISTOGRAM_BINS: usize = 24;
pub const HISTOGRAM_RANGE: (f64, f64) = (-3.0, 3.0);
const TAYLOR_GRID: usize = 201;

/// Fixed-width bins; values outside the range land in the edge bins.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        Histogram {
            lo,
            hi,
            counts: vec![0; bins],
        }
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn bin_edges(&self, bin: usize) -> (f64, f64) {
        let w = self.bin_width();
        (self.lo + w * bin as f64, self.lo + w * (bin + 1) as f64)
    }

    pub fn add(&mut self, v: f64) {
        let bins = self.counts.len();
        let pos = ((v - self.lo) / self.bin_width()).floor();
        let bin = if pos.is_nan() || pos < 0.0 {
            0
        } else {
            (pos as usize).min(bins - 1)
        };
        self.counts[bin] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Summary of one layer's synaptic potentials over a dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerPotentials {
    pub layer: usize,
    pub width: usize,
    pub samples: usize,
    pub mean: f64,
    pub sd: f64,
    pub frac_outside_unit: f64,
    pub min: f64,
    pub max: f64,
    pub histogram: Histogram,
    /// Taylor order used for the error columns.
    pub taylor_order: u32,
    /// `max |taylor - g|` on a grid over the observed `[min, max]`.
    pub max_taylor_error: f64,
    /// `mean |taylor - g|` over the observed potentials.
    pub mean_taylor_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialStats {
    pub layers: Vec<LayerPotentials>,
}

fn taylor_error(coeffs: &TaylorCoeffs, u: f64) -> f64 {
    (coeffs.eval(u) - coeffs.activation.eval(u)).abs()
}

fn layer_stats(layer: usize, u: &Array2<f64>, coeffs: &TaylorCoeffs) -> LayerPotentials {
    let count = u.len();
    let n = count as f64;
    let mean = u.sum() / n;
    let sd = (u.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    let min = u.iter().copied().fold(f64::INFINITY, f64::min);
    let max = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut histogram = Histogram::new(HISTOGRAM_RANGE.0, HISTOGRAM_RANGE.1, HISTOGRAM_BINS);
    u.iter().for_each(|&v| histogram.add(v));
    let grid_error = (0..TAYLOR_GRID)
        .map(|i| min + (max - min) * i as f64 / (TAYLOR_GRID - 1) as f64)
        .map(|v| taylor_error(coeffs, v))
        .fold(0.0, f64::max);
    let mean_taylor_error = u.iter().map(|&v| taylor_error(coeffs, v)).sum::<f64>() / n;
    LayerPotentials {
        layer,
        width: u.ncols(),
        samples: u.nrows(),
        mean,
        sd,
        frac_outside_unit: u.iter().filter(|v| v.abs() > 1.0).count() as f64 / n,
        min,
        max,
        histogram,
        taylor_order: coeffs.order,
        max_taylor_error: grid_error,
        mean_taylor_error,
    }
}

/// Per-layer potential statistics on `data`.
///
/// `taylor_orders` holds one order per layer, or a single order for all.
pub fn potential_diagnostics(
    model: &MlpModel,
    data: &Dataset,
    taylor_orders: &[u32],
) -> Result<PotentialStats> {
    let n_layers = model.layers().len();
    if taylor_orders.len() != 1 && taylor_orders.len() != n_layers {
        return Err(Error::invalid(format!(
            "expected 1 or {n_layers} Taylor orders, got {}",
            taylor_orders.len()
        )));
    }
    if data.is_empty() {
        return Err(Error::invalid("diagnostics need at least one sample"));
    }
    let potentials = model.batch_potentials(&data.inputs)?;
    let layers = potentials
        .iter()
        .zip(model.layers())
        .enumerate()
        .map(|(l, (u, layer))| {
            let q = taylor_orders[l.min(taylor_orders.len() - 1)];
            let coeffs = taylor_coeffs(&layer.activation, q)?;
            Ok(layer_stats(l + 1, u, &coeffs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PotentialStats { layers })
}
