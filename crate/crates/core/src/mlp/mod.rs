//! A small fully-connected network runtime.
//!
//! Layer `l` holds a weight matrix of shape `(h_{l-1} + 1) x h_l` whose row 0
//! multiplies the constant bias input, so the potential of neuron `j` is
//! `u_j = w_0j + sum_i w_ij y_i`.

mod data;
mod diagnostics;
mod train;

use std::path::Path;

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::taylor::Activation;

pub use data::{generate_polynomial_data, Dataset, GeneratorConfig, Scaling};
pub use diagnostics::{
    potential_diagnostics, Histogram, LayerPotentials, PotentialStats, HISTOGRAM_BINS,
    HISTOGRAM_RANGE,
};
pub use train::{train, Optimizer, TrainConfig, TrainReport};

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub activation: Activation,
    /// `(inputs + 1) x outputs`, row 0 is the bias.
    pub weights: Array2<f64>,
}

impl Layer {
    pub fn inputs(&self) -> usize {
        self.weights.nrows() - 1
    }

    pub fn outputs(&self) -> usize {
        self.weights.ncols()
    }

    pub fn bias(&self) -> ArrayView1<'_, f64> {
        self.weights.row(0)
    }

    /// Weights without the bias row.
    pub fn kernel(&self) -> ArrayView2<'_, f64> {
        self.weights.slice(s![1.., ..])
    }

    /// Incoming weights of neuron `j`, bias first.
    pub fn incoming(&self, j: usize) -> Vec<f64> {
        self.weights.column(j).to_vec()
    }

    /// Potentials for a batch `(n x inputs)`.
    pub fn potentials(&self, inputs: &ArrayView2<'_, f64>) -> Array2<f64> {
        inputs.dot(&self.kernel()) + &self.bias()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MlpModel {
    p: usize,
    layers: Vec<Layer>,
}

/// Network output plus the potentials `u^(l)` of every layer.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardTrace {
    pub output: Vec<f64>,
    pub potentials: Vec<Vec<f64>>,
}

impl MlpModel {
    pub fn new(p: usize, layers: Vec<Layer>) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("input dimension p must be at least 1"));
        }
        if layers.is_empty() {
            return Err(Error::invalid("a network needs at least one layer"));
        }
        let mut width = p;
        for (l, layer) in layers.iter().enumerate() {
            if layer.weights.nrows() != width + 1 {
                return Err(Error::invalid(format!(
                    "layer {} weight matrix has {} rows, expected {} (inputs + bias)",
                    l + 1,
                    layer.weights.nrows(),
                    width + 1
                )));
            }
            if layer.weights.ncols() == 0 {
                return Err(Error::invalid(format!("layer {} has no neurons", l + 1)));
            }
            if layer.weights.iter().any(|w| !w.is_finite()) {
                return Err(Error::invalid(format!("layer {} has non-finite weights", l + 1)));
            }
            width = layer.weights.ncols();
        }
        Ok(MlpModel { p, layers })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(0, Layer::outputs)
    }

    /// Hidden layers, i.e. every layer but the last.
    pub fn hidden(&self) -> &[Layer] {
        &self.layers[..self.layers.len() - 1]
    }

    fn check_input(&self, len: usize) -> Result<()> {
        if len != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                got: len,
                context: "network input",
            });
        }
        Ok(())
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_traced(x)?.output)
    }

    pub fn forward_traced(&self, x: &[f64]) -> Result<ForwardTrace> {
        self.check_input(x.len())?;
        let mut y = Array1::from_vec(x.to_vec());
        let mut potentials = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let u = y.dot(&layer.kernel()) + &layer.bias();
            y = u.mapv(|v| layer.activation.eval(v));
            potentials.push(u.to_vec());
        }
        Ok(ForwardTrace {
            output: y.to_vec(),
            potentials,
        })
    }

    /// Outputs for every row of `inputs`, shape `(n x output_dim)`.
    pub fn predict(&self, inputs: &Array2<f64>) -> Result<Array2<f64>> {
        self.check_input(inputs.ncols())?;
        let mut y = inputs.clone();
        for layer in &self.layers {
            let mut u = layer.potentials(&y.view());
            u.mapv_inplace(|v| layer.activation.eval(v));
            y = u;
        }
        Ok(y)
    }

    /// Potentials of every layer for every row, each `(n x h_l)`.
    pub fn batch_potentials(&self, inputs: &Array2<f64>) -> Result<Vec<Array2<f64>>> {
        self.check_input(inputs.ncols())?;
        let mut out = Vec::with_capacity(self.layers.len());
        let mut y = inputs.clone();
        for layer in &self.layers {
            let u = layer.potentials(&y.view());
            y = u.mapv(|v| layer.activation.eval(v));
            out.push(u);
        }
        Ok(out)
    }

    /// First output column of [`MlpModel::predict`].
    pub fn predict_scalar(&self, inputs: &Array2<f64>) -> Result<Vec<f64>> {
        Ok(self.predict(inputs)?.index_axis(Axis(1), 0).to_vec())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&WeightFile::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: WeightFile = serde_json::from_str(s)?;
        file.try_into()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        MlpModel::from_json(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct LayerFile {
    activation: Activation,
    weights: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct WeightFile {
    p: usize,
    layers: Vec<LayerFile>,
}

impl From<&MlpModel> for WeightFile {
    fn from(model: &MlpModel) -> Self {
        WeightFile {
            p: model.p,
            layers: model
                .layers
                .iter()
                .map(|l| LayerFile {
                    activation: l.activation.clone(),
                    weights: l.weights.outer_iter().map(|r| r.to_vec()).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<WeightFile> for MlpModel {
    type Error = Error;

    fn try_from(file: WeightFile) -> Result<Self> {
        let layers = file
            .layers
            .into_iter()
            .enumerate()
            .map(|(l, lf)| {
                let rows = lf.weights.len();
                let cols = lf.weights.first().map_or(0, Vec::len);
                if lf.weights.iter().any(|r| r.len() != cols) {
                    return Err(Error::invalid(format!(
                        "layer {}: weight rows have unequal lengths",
                        l + 1
                    )));
                }
                let flat: Vec<f64> = lf.weights.into_iter().flatten().collect();
                let weights = Array2::from_shape_vec((rows, cols), flat)
                    .map_err(|e| Error::invalid(format!("layer {}: {e}", l + 1)))?;
                Ok(Layer {
                    activation: lf.activation,
                    weights,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MlpModel::new(file.p, layers)
    }
}

/// Scales `w` to unit l1 norm (bias entry included).
pub fn l1_project(w: &[f64]) -> Result<Vec<f64>> {
    let norm: f64 = w.iter().map(|x| x.abs()).sum();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::invalid(format!(
            "cannot normalize a weight vector with l1 norm {norm}"
        )));
    }
    Ok(w.iter().map(|x| x / norm).collect())
}

/// Rescales every column of `weights` to unit l1 norm in place.
pub(crate) fn project_columns(weights: &mut Array2<f64>) -> Result<()> {
    for mut col in weights.columns_mut() {
        let norm: f64 = col.iter().map(|x| x.abs()).sum();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::invalid(format!(
                "cannot normalize a weight vector with l1 norm {norm}"
            )));
        }
        col.mapv_inplace(|x| x / norm);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayerSpec {
    pub width: usize,
    pub activation: Activation,
}

/// Layer widths and activations; the last entry is the output layer.
#[derive(Clone, Debug, PartialEq)]
pub struct Architecture {
    pub p: usize,
    pub layers: Vec<LayerSpec>,
}

impl Architecture {
    /// `hidden.len()` layers of `activation`, then one linear output.
    pub fn regression(p: usize, hidden: &[usize], activation: Activation) -> Self {
        let mut layers: Vec<LayerSpec> = hidden
            .iter()
            .map(|&width| LayerSpec {
                width,
                activation: activation.clone(),
            })
            .collect();
        layers.push(LayerSpec {
            width: 1,
            activation: Activation::Linear,
        });
        Architecture { p, layers }
    }

    fn validate(&self) -> Result<()> {
        if self.p == 0 || self.layers.is_empty() || self.layers.iter().any(|l| l.width == 0) {
            return Err(Error::invalid(
                "architecture needs p >= 1 and at least one layer of nonzero width",
            ));
        }
        Ok(())
    }
}

/// Hidden layers: uniform `[-1, 1]` then l1-normalized per neuron.
/// Output layer: uniform `[-1, 1]`, left unconstrained.
pub fn random_constrained_init(arch: &Architecture, seed: u64) -> Result<MlpModel> {
    random_init(arch, seed, true)
}

/// Random weights. Unconstrained hidden layers use Glorot-uniform scaling.
pub fn random_init(arch: &Architecture, seed: u64, constrained: bool) -> Result<MlpModel> {
    arch.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fan_in = arch.p;
    let last = arch.layers.len() - 1;
    let mut layers = Vec::with_capacity(arch.layers.len());
    for (l, spec) in arch.layers.iter().enumerate() {
        let limit = if l == last || constrained {
            1.0
        } else {
            (6.0 / (fan_in + spec.width) as f64).sqrt()
        };
        let mut weights =
            Array2::from_shape_fn((fan_in + 1, spec.width), |_| rng.random_range(-limit..=limit));
        if constrained && l != last {
            project_columns(&mut weights)?;
        }
        layers.push(Layer {
            activation: spec.activation.clone(),
            weights,
        });
        fan_in = spec.width;
    }
    MlpModel::new(arch.p, layers)
}
