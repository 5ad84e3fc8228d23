use std::path::Path;

use ndarray::{Array2, Axis};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::polyalg::{enumerate_monomials, monomials_of_degree, Polynomial};

/// Per-column min/max used to map raw values onto `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Scaling {
    pub input_min: Vec<f64>,
    pub input_max: Vec<f64>,
    pub target_min: f64,
    pub target_max: f64,
    pub scale_targets: bool,
}

fn to_unit(v: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        2.0 * (v - lo) / (hi - lo) - 1.0
    } else {
        0.0
    }
}

fn from_unit(v: f64, lo: f64, hi: f64) -> f64 {
    lo + (v + 1.0) * (hi - lo) / 2.0
}

impl Scaling {
    pub fn fit(data: &Dataset, scale_targets: bool) -> Self {
        let (input_min, input_max) = data
            .inputs
            .axis_iter(Axis(1))
            .map(|col| {
                col.iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                        (lo.min(v), hi.max(v))
                    })
            })
            .unzip();
        let (target_min, target_max) = data
            .targets
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        Scaling {
            input_min,
            input_max,
            target_min,
            target_max,
            scale_targets,
        }
    }

    pub fn scale_input(&self, col: usize, v: f64) -> f64 {
        to_unit(v, self.input_min[col], self.input_max[col])
    }

    pub fn scale_target(&self, v: f64) -> f64 {
        if self.scale_targets {
            to_unit(v, self.target_min, self.target_max)
        } else {
            v
        }
    }

    /// Maps a scaled prediction back to raw target units.
    pub fn unscale_target(&self, v: f64) -> f64 {
        if self.scale_targets {
            from_unit(v, self.target_min, self.target_max)
        } else {
            v
        }
    }
}

/// Regression samples: `inputs` is `(n x p)`, one target per row.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub inputs: Array2<f64>,
    pub targets: Vec<f64>,
    pub scaling: Option<Scaling>,
}

impl Dataset {
    pub fn new(inputs: Array2<f64>, targets: Vec<f64>) -> Result<Self> {
        if inputs.nrows() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: inputs.nrows(),
                got: targets.len(),
                context: "dataset targets",
            });
        }
        if inputs.ncols() == 0 {
            return Err(Error::invalid("dataset needs at least one input column"));
        }
        Ok(Dataset {
            inputs,
            targets,
            scaling: None,
        })
    }

    pub fn p(&self) -> usize {
        self.inputs.ncols()
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn target_variance(&self) -> f64 {
        let n = self.targets.len() as f64;
        let mean = self.targets.iter().sum::<f64>() / n;
        self.targets.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / n
    }

    /// Applies `scaling` and records it.
    pub fn scaled(&self, scaling: &Scaling) -> Result<Dataset> {
        if scaling.input_min.len() != self.p() {
            return Err(Error::DimensionMismatch {
                expected: scaling.input_min.len(),
                got: self.p(),
                context: "scaling columns",
            });
        }
        let mut inputs = self.inputs.clone();
        for (ix, v) in inputs.indexed_iter_mut() {
            *v = scaling.scale_input(ix.1, *v);
        }
        let targets = self.targets.iter().map(|&t| scaling.scale_target(t)).collect();
        Ok(Dataset {
            inputs,
            targets,
            scaling: Some(scaling.clone()),
        })
    }

    /// Min-max scales inputs (and optionally targets) to `[-1, 1]` using this
    /// dataset's own ranges.
    pub fn scale_unit(&self, scale_targets: bool) -> Dataset {
        let scaling = Scaling::fit(self, scale_targets);
        self.scaled(&scaling)
            .expect("scaling fitted on the same dataset has matching columns")
    }

    /// Rows selected by `idx`, in that order.
    pub fn select(&self, idx: &[usize]) -> Dataset {
        Dataset {
            inputs: self.inputs.select(Axis(0), idx),
            targets: idx.iter().map(|&i| self.targets[i]).collect(),
            scaling: self.scaling.clone(),
        }
    }

    /// Random split: the first part receives `round(frac * n)` rows.
    pub fn split(&self, frac: f64, seed: u64) -> (Dataset, Dataset) {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let cut = ((self.len() as f64) * frac).round() as usize;
        let cut = cut.min(self.len());
        (self.select(&idx[..cut]), self.select(&idx[cut..]))
    }

    /// Headerless CSV, last column is the target.
    pub fn from_csv(path: &Path) -> Result<Dataset> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| parse_error(path, e.to_string()))?;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| parse_error(path, e.to_string()))?;
            let line = record.position().map_or(i as u64 + 1, |p| p.line());
            let row = record
                .iter()
                .map(|field| {
                    field.parse::<f64>().map_err(|e| {
                        parse_error(path, format!("line {line}: `{field}` is not a number ({e})"))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() < 2 {
                return Err(parse_error(
                    path,
                    format!("line {line}: need at least one input column and a target"),
                ));
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(parse_error(
                        path,
                        format!(
                            "line {line}: {} columns, expected {}",
                            row.len(),
                            first.len()
                        ),
                    ));
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(parse_error(path, "no rows".to_string()));
        }
        let cols = rows[0].len();
        let targets = rows.iter().map(|r| r[cols - 1]).collect();
        let flat: Vec<f64> = rows.iter().flat_map(|r| r[..cols - 1].to_vec()).collect();
        let inputs = Array2::from_shape_vec((rows.len(), cols - 1), flat)
            .map_err(|e| Error::Internal(e.to_string()))?;
        Dataset::new(inputs, targets)
    }

    pub fn to_csv(&self, path: &Path) -> Result<()> {
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(path)
            .map_err(|e| parse_error(path, e.to_string()))?;
        for (row, t) in self.inputs.outer_iter().zip(&self.targets) {
            let mut fields: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            fields.push(format!("{t:?}"));
            writer
                .write_record(&fields)
                .map_err(|e| parse_error(path, e.to_string()))?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }
}

fn parse_error(path: &Path, message: String) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message,
    }
}

/// Synthetic polynomial regression data.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub p: usize,
    /// Order `Q` of the generating polynomial.
    pub order: u32,
    /// How many order-`Q` terms are kept; all lower-order terms are present.
    pub n_interactions: usize,
    pub coef_pool: Vec<f64>,
    pub n_samples: usize,
    pub noise_sd: f64,
    /// Inputs are uniform on `[-input_range, input_range]`.
    pub input_range: f64,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            p: 3,
            order: 2,
            n_interactions: 4,
            coef_pool: vec![-2.0, 1.0, 2.0, 1.0],
            n_samples: 500,
            noise_sd: 1.0,
            input_range: 10.0,
            seed: 0,
        }
    }
}

/// Draws a random polynomial and samples noisy observations of it.
///
/// Returns the raw (unscaled) dataset together with the generating polynomial.
pub fn generate_polynomial_data(cfg: &GeneratorConfig) -> Result<(Dataset, Polynomial)> {
    if cfg.p == 0 || cfg.order == 0 || cfg.n_samples == 0 {
        return Err(Error::invalid("p, order and n_samples must be positive"));
    }
    if cfg.coef_pool.is_empty() {
        return Err(Error::invalid("coefficient pool is empty"));
    }
    if cfg.noise_sd < 0.0 || !cfg.noise_sd.is_finite() {
        return Err(Error::invalid("noise_sd must be finite and non-negative"));
    }
    let top = monomials_of_degree(cfg.p, cfg.order);
    if cfg.n_interactions > top.len() {
        return Err(Error::invalid(format!(
            "{} interactions requested but only {} order-{} terms exist for p = {}",
            cfg.n_interactions,
            top.len(),
            cfg.order,
            cfg.p
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut picked: Vec<usize> = rand::seq::index::sample(&mut rng, top.len(), cfg.n_interactions)
        .into_iter()
        .collect();
    picked.sort_unstable();

    let lower = enumerate_monomials(cfg.p, cfg.order - 1)?;
    let terms: Vec<_> = lower
        .into_iter()
        .chain(picked.into_iter().map(|i| top[i].clone()))
        .map(|t| {
            let c = *cfg.coef_pool.choose(&mut rng).expect("pool is non-empty");
            (t, c)
        })
        .collect();
    let poly = Polynomial::from_terms(cfg.p, cfg.order, terms)?;

    let range = cfg.input_range;
    let inputs = Array2::from_shape_fn((cfg.n_samples, cfg.p), |_| rng.random_range(-range..=range));
    let noise = Normal::new(0.0, cfg.noise_sd).map_err(|e| Error::invalid(e.to_string()))?;
    let targets = inputs
        .outer_iter()
        .map(|row| {
            let clean = poly.evaluate(row.as_slice().expect("standard layout"))?;
            Ok(if cfg.noise_sd > 0.0 {
                clean + noise.sample(&mut rng)
            } else {
                clean
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Dataset::new(inputs, targets)?, poly))
}
