use ndarray::{Array1, Array2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{project_columns, Dataset, MlpModel};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Optimizer {
    #[default]
    Adam,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub seed: u64,
    /// Re-project hidden weight columns to unit l1 norm after every step.
    pub constrain: bool,
    pub optimizer: Optimizer,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 200,
            batch_size: 32,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            seed: 0,
            constrain: false,
            optimizer: Optimizer::Adam,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainReport {
    /// Training-set MSE after the last epoch.
    pub final_loss: f64,
    /// Mean minibatch loss per epoch.
    pub loss_history: Vec<f64>,
}

struct AdamState {
    m: Vec<Array2<f64>>,
    v: Vec<Array2<f64>>,
    step: i32,
}

impl AdamState {
    fn new(model: &MlpModel) -> Self {
        let zeros: Vec<Array2<f64>> = model
            .layers()
            .iter()
            .map(|l| Array2::zeros(l.weights.raw_dim()))
            .collect();
        AdamState {
            m: zeros.clone(),
            v: zeros,
            step: 0,
        }
    }

    fn update(&mut self, model: &mut MlpModel, grads: &[Array2<f64>], cfg: &TrainConfig) {
        self.step += 1;
        let bc1 = 1.0 - cfg.beta1.powi(self.step);
        let bc2 = 1.0 - cfg.beta2.powi(self.step);
        for (l, layer) in model.layers_mut().iter_mut().enumerate() {
            let (m, v, g) = (&mut self.m[l], &mut self.v[l], &grads[l]);
            ndarray::Zip::from(&mut layer.weights)
                .and(m)
                .and(v)
                .and(g)
                .for_each(|w, m, v, &g| {
                    *m = cfg.beta1 * *m + (1.0 - cfg.beta1) * g;
                    *v = cfg.beta2 * *v + (1.0 - cfg.beta2) * g * g;
                    let m_hat = *m / bc1;
                    let v_hat = *v / bc2;
                    *w -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.eps);
                });
        }
    }
}

/// MSE loss and weight gradients for one batch.
fn batch_gradients(
    model: &MlpModel,
    inputs: &Array2<f64>,
    targets: &Array1<f64>,
) -> (f64, Vec<Array2<f64>>) {
    let n = inputs.nrows() as f64;
    let mut activations = vec![inputs.clone()];
    let mut potentials = Vec::with_capacity(model.layers().len());
    for layer in model.layers() {
        let u = layer.potentials(&activations.last().expect("non-empty").view());
        activations.push(u.mapv(|v| layer.activation.eval(v)));
        potentials.push(u);
    }
    let output = activations.last().expect("non-empty").column(0).to_owned();
    let residual = &output - targets;
    let loss = residual.mapv(|r| r * r).sum() / n;

    let mut upstream = (residual * (2.0 / n)).insert_axis(Axis(1));
    let mut grads = vec![Array2::zeros((0, 0)); model.layers().len()];
    for (l, layer) in model.layers().iter().enumerate().rev() {
        let delta = &upstream * &potentials[l].mapv(|u| layer.activation.derivative(u));
        let mut grad = Array2::zeros(layer.weights.raw_dim());
        grad.row_mut(0).assign(&delta.sum_axis(Axis(0)));
        grad.slice_mut(ndarray::s![1.., ..])
            .assign(&activations[l].t().dot(&delta));
        grads[l] = grad;
        if l > 0 {
            upstream = delta.dot(&layer.kernel().t());
        }
    }
    (loss, grads)
}

fn project_hidden(model: &mut MlpModel) -> Result<()> {
    let hidden = model.layers().len() - 1;
    for layer in &mut model.layers_mut()[..hidden] {
        project_columns(&mut layer.weights)?;
    }
    Ok(())
}

/// Minibatch Adam on mean squared error.
///
/// Deterministic for a fixed `cfg.seed`. Only single-output networks are
/// supported.
pub fn train(model: &MlpModel, data: &Dataset, cfg: &TrainConfig) -> Result<(MlpModel, TrainReport)> {
    if model.output_dim() != 1 {
        return Err(Error::invalid(format!(
            "training supports a single output neuron, model has {}",
            model.output_dim()
        )));
    }
    if data.p() != model.p() {
        return Err(Error::DimensionMismatch {
            expected: model.p(),
            got: data.p(),
            context: "training data columns",
        });
    }
    if data.is_empty() || cfg.batch_size == 0 || cfg.epochs == 0 {
        return Err(Error::invalid("training needs data, epochs >= 1 and batch_size >= 1"));
    }
    let mut model = model.clone();
    if cfg.constrain {
        project_hidden(&mut model)?;
    }
    let targets = Array1::from_vec(data.targets.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut adam = AdamState::new(&model);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut loss_history = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let x = data.inputs.select(Axis(0), batch);
            let t = targets.select(Axis(0), batch);
            let (loss, grads) = batch_gradients(&model, &x, &t);
            if !loss.is_finite() {
                return Err(Error::Divergence { epoch, loss });
            }
            total += loss * batch.len() as f64;
            adam.update(&mut model, &grads, cfg);
            if cfg.constrain {
                project_hidden(&mut model)
                    .map_err(|_| Error::Divergence { epoch, loss: f64::NAN })?;
            }
        }
        loss_history.push(total / data.len() as f64);
    }

    let (final_loss, _) = batch_gradients(&model, &data.inputs, &targets);
    if !final_loss.is_finite() {
        return Err(Error::Divergence {
            epoch: cfg.epochs,
            loss: final_loss,
        });
    }
    Ok((
        model,
        TrainReport {
            final_loss,
            loss_history,
        },
    ))
}
