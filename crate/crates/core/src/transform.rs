//! Layer-by-layer conversion of an MLP into a polynomial in its inputs.
//!
//! Each neuron carries an *in* polynomial (its potential) and an *out*
//! polynomial (the truncated Taylor series of its activation composed with the
//! in polynomial). Out coefficients are pulled per target monomial from the
//! cached multiset partitions of that monomial.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mlp::MlpModel;
use crate::multiset::{MultisetPartition, PartitionCache};
use crate::polyalg::{enumerate_monomials, linear_combination, monomial_index, Polynomial};
use crate::taylor::{taylor_coeffs, Activation, TaylorCoeffs};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Return the in polynomial of the (linear) output layer.
    #[default]
    Regression,
    /// Apply the output activation to every class neuron.
    Classification,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Regression => "regression",
            Mode::Classification => "classification",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "regression" => Ok(Mode::Regression),
            "classification" => Ok(Mode::Classification),
            other => Err(Error::invalid(format!(
                "unknown mode `{other}` (expected regression or classification)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransformConfig {
    /// Taylor order per layer. A single entry applies to every layer; a
    /// regression run may omit the output layer's entry.
    pub taylor_orders: Vec<u32>,
    /// Global cap on the polynomial order.
    pub q_max: u32,
    pub mode: Mode,
}

impl Default for TransformConfig {
    fn default() -> Self {
        TransformConfig {
            taylor_orders: vec![8],
            q_max: 3,
            mode: Mode::Regression,
        }
    }
}

impl TransformConfig {
    /// Taylor order of every layer, `n_layers` entries.
    pub fn layer_orders(&self, n_layers: usize) -> Result<Vec<u32>> {
        if self.q_max == 0 {
            return Err(Error::invalid("Q_max must be at least 1"));
        }
        if let Some(0) = self.taylor_orders.iter().min() {
            return Err(Error::invalid("Taylor orders must be at least 1"));
        }
        let given = self.taylor_orders.len();
        let orders = match given {
            1 => vec![self.taylor_orders[0]; n_layers],
            g if g == n_layers => self.taylor_orders.clone(),
            g if g + 1 == n_layers && self.mode == Mode::Regression => {
                let mut o = self.taylor_orders.clone();
                o.push(1);
                o
            }
            _ => {
                let expected = match self.mode {
                    Mode::Regression => format!("1, {} or {}", n_layers.saturating_sub(1), n_layers),
                    Mode::Classification => format!("1 or {n_layers}"),
                };
                return Err(Error::invalid(format!(
                    "got {given} Taylor orders for {n_layers} layers, expected {expected}"
                )));
            }
        };
        Ok(orders)
    }

    /// Effective orders `Q*_0 = 1, Q*_l = min(prod_{i<=l} q_i, Q_max)`.
    pub fn effective_orders(&self, n_layers: usize) -> Result<Vec<u32>> {
        let orders = self.layer_orders(n_layers)?;
        let mut out = Vec::with_capacity(n_layers + 1);
        let mut current = 1u32;
        out.push(current);
        for q in orders {
            current = current.saturating_mul(q).min(self.q_max);
            out.push(current);
        }
        Ok(out)
    }
}

/// `n! / prod(parts_i!)`, exact.
pub fn multinomial_coefficient(n: u32, parts: &[u32]) -> Result<u128> {
    if n > 30 {
        return Err(Error::invalid(format!("multinomial order {n} exceeds 30")));
    }
    let total: u64 = parts.iter().map(|&k| k as u64).sum();
    if total != n as u64 {
        return Err(Error::invalid(format!(
            "multinomial parts sum to {total}, expected {n}"
        )));
    }
    // Product of binomials avoids the large intermediate n!.
    let mut result: u128 = 1;
    let mut placed: u128 = 0;
    for &k in parts {
        for i in 1..=k as u128 {
            placed += 1;
            result = result
                .checked_mul(placed)
                .ok_or_else(|| Error::Overflow(format!("multinomial({n}; {parts:?})")))?
                / i;
        }
    }
    Ok(result)
}

/// Multiplicities of the distinct blocks followed by the `n - r` intercept picks.
fn expansion_parts(partition: &MultisetPartition, n: u32) -> Option<Vec<u32>> {
    let r = partition.len() as u32;
    if r == 0 || r > n {
        return None;
    }
    let mut parts: Vec<u32> = partition
        .block_multiplicities()
        .into_iter()
        .map(|(_, m)| m)
        .collect();
    parts.push(n - r);
    Some(parts)
}

/// Contribution of one partition of a target monomial to the coefficient of
/// that monomial in `in_poly^n`.
///
/// A partition with `r <= n` blocks contributes
/// `n! / ((n - r)! prod m_i!) * b0^(n - r) * prod beta_block^m_i`, where `b0`
/// is the intercept of `in_poly` and `m_i` counts repeated blocks. With `r == n`
/// this is the plain multinomial product. Partitions with more than `n` blocks,
/// or with a block missing from `in_poly`, contribute zero.
pub fn partition_weight(partition: &MultisetPartition, in_poly: &Polynomial, n: u32) -> f64 {
    let Some(parts) = expansion_parts(partition, n) else {
        return 0.0;
    };
    let Ok(multinomial) = multinomial_coefficient(n, &parts) else {
        return 0.0;
    };
    let mut product = multinomial as f64 * in_poly.intercept().powi((n - partition.len() as u32) as i32);
    for (block, m) in partition.block_multiplicities() {
        let coef = block
            .to_exponents(in_poly.p())
            .map_or(0.0, |t| in_poly.coef(&t));
        if coef == 0.0 {
            return 0.0;
        }
        product *= coef.powi(m as i32);
    }
    product
}

#[derive(Clone, Debug)]
struct PlannedPartition {
    /// `(dense index of the block monomial, multiplicity)`.
    blocks: Vec<(usize, i32)>,
    blocks_count: u32,
    /// `weights[n] = n! / ((n - r)! prod m_i!)` for `n >= r`, else 0.
    weights: Vec<f64>,
}

#[derive(Clone, Debug)]
struct PlannedTarget {
    exponents: crate::polyalg::ExponentVector,
    partitions: Vec<PlannedPartition>,
}

/// Admissible partitions of every target monomial for one layer, resolved to
/// dense coefficient indices so that all neurons of the layer share the work.
#[derive(Clone, Debug)]
pub struct ActivationPlan {
    p: usize,
    q_in: u32,
    taylor_order: u32,
    out_order: u32,
    targets: Vec<PlannedTarget>,
}

impl ActivationPlan {
    /// Plans the composition of an order-`taylor_order` series with in
    /// polynomials of order at most `q_in`, truncated at `q_out_cap`.
    pub fn new(
        p: usize,
        q_in: u32,
        taylor_order: u32,
        q_out_cap: u32,
        cache: &PartitionCache,
    ) -> Result<Self> {
        if p == 0 || q_in == 0 || q_out_cap == 0 {
            return Err(Error::invalid("p, Q_in and the output cap must be positive"));
        }
        let out_order = q_in.saturating_mul(taylor_order).min(q_out_cap);
        let mut targets = Vec::new();
        for t in enumerate_monomials(p, out_order)? {
            if t.is_intercept() {
                continue;
            }
            let mut partitions = Vec::new();
            for partition in cache.lookup(&t)? {
                let r = partition.len() as u32;
                if r > taylor_order || partition.max_block_size() > q_in as usize {
                    continue;
                }
                let blocks = partition
                    .block_multiplicities()
                    .into_iter()
                    .map(|(b, m)| Ok((monomial_index(&b.to_exponents(p)?)? as usize, m as i32)))
                    .collect::<Result<Vec<_>>>()?;
                let weights = (0..=taylor_order)
                    .map(|n| match expansion_parts(&partition, n) {
                        Some(parts) => multinomial_coefficient(n, &parts).map(|w| w as f64),
                        None => Ok(0.0),
                    })
                    .collect::<Result<Vec<_>>>()?;
                partitions.push(PlannedPartition {
                    blocks,
                    blocks_count: r,
                    weights,
                });
            }
            targets.push(PlannedTarget {
                exponents: t,
                partitions,
            });
        }
        Ok(ActivationPlan {
            p,
            q_in,
            taylor_order,
            out_order,
            targets,
        })
    }

    /// Order of the polynomials this plan produces.
    pub fn out_order(&self) -> u32 {
        self.out_order
    }

    /// Number of stored (target, partition) pairs.
    pub fn partition_count(&self) -> usize {
        self.targets.iter().map(|t| t.partitions.len()).sum()
    }

    /// Out polynomial for one neuron.
    pub fn apply(&self, in_poly: &Polynomial, coeffs: &TaylorCoeffs) -> Result<Polynomial> {
        if in_poly.p() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                got: in_poly.p(),
                context: "in polynomial variables",
            });
        }
        if in_poly.order() > self.q_in {
            return Err(Error::invalid(format!(
                "in polynomial order {} exceeds planned Q_in = {}",
                in_poly.order(),
                self.q_in
            )));
        }
        if coeffs.order != self.taylor_order {
            return Err(Error::invalid(format!(
                "Taylor order {} does not match planned order {}",
                coeffs.order, self.taylor_order
            )));
        }
        let dense = in_poly.to_dense()?;
        let c = &coeffs.coeffs;
        let b0 = in_poly.intercept();
        let b0_pow: Vec<f64> = (0..=self.taylor_order as i32).map(|k| b0.powi(k)).collect();

        let intercept: f64 = c.iter().zip(&b0_pow).map(|(cn, b)| cn * b).sum();
        let mut terms = Vec::with_capacity(self.targets.len() + 1);
        terms.push((crate::polyalg::ExponentVector::zeros(self.p), intercept));

        let mut products = Vec::new();
        for target in &self.targets {
            products.clear();
            products.extend(target.partitions.iter().map(|part| {
                part.blocks
                    .iter()
                    .map(|&(k, m)| dense.get(k).copied().unwrap_or(0.0).powi(m))
                    .product::<f64>()
            }));
            let mut acc = 0.0;
            for (n, &cn) in c.iter().enumerate().skip(1) {
                if cn == 0.0 {
                    continue;
                }
                for (part, &prod) in target.partitions.iter().zip(&products) {
                    if prod == 0.0 || part.blocks_count as usize > n {
                        continue;
                    }
                    acc += cn * part.weights[n] * b0_pow[n - part.blocks_count as usize] * prod;
                }
            }
            terms.push((target.exponents.clone(), acc));
        }
        Polynomial::from_terms(self.p, self.out_order, terms)
    }
}

/// Composes the truncated series `coeffs` with `in_poly`, keeping degrees up to
/// `min(q_in * q, q_out_cap)`.
pub fn apply_activation(
    in_poly: &Polynomial,
    coeffs: &TaylorCoeffs,
    q_in: u32,
    q_out_cap: u32,
    cache: &PartitionCache,
) -> Result<Polynomial> {
    ActivationPlan::new(in_poly.p(), q_in, coeffs.order, q_out_cap, cache)?.apply(in_poly, coeffs)
}

/// In and out polynomials of every neuron in one layer.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerPolynomials {
    /// 1-based layer index.
    pub layer: usize,
    pub in_polys: Vec<Polynomial>,
    /// Empty for a regression output layer, which is returned before activation.
    pub out_polys: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransformTrace {
    pub layers: Vec<LayerPolynomials>,
    pub output: Vec<Polynomial>,
    /// `Q*_0 ..= Q*_L`.
    pub effective_orders: Vec<u32>,
}

/// Largest order any layer's out polynomial can reach.
pub fn required_cache_order(model: &MlpModel, config: &TransformConfig) -> Result<u32> {
    let n = model.layers().len();
    let effective = config.effective_orders(n)?;
    let used = match config.mode {
        Mode::Regression => &effective[..n],
        Mode::Classification => &effective[..],
    };
    Ok(used.iter().copied().max().unwrap_or(1))
}

/// Polynomial representation of `model`: one polynomial per output neuron.
pub fn nn2poly(model: &MlpModel, config: &TransformConfig) -> Result<Vec<Polynomial>> {
    Ok(nn2poly_traced(model, config)?.output)
}

/// As [`nn2poly`], also returning every layer's in and out polynomials.
pub fn nn2poly_traced(model: &MlpModel, config: &TransformConfig) -> Result<TransformTrace> {
    let cache = PartitionCache::build(required_cache_order(model, config)?)?;
    nn2poly_with_cache(model, config, &cache)
}

fn output_activation(model: &MlpModel, mode: Mode) -> Result<Activation> {
    let last = &model.layers().last().expect("model has layers").activation;
    match (mode, last) {
        (Mode::Regression, Activation::Linear) => Ok(Activation::Linear),
        (Mode::Regression, other) => Err(Error::invalid(format!(
            "regression needs a linear output layer, found `{other}`; use classification mode"
        ))),
        (Mode::Classification, Activation::Linear) => Ok(Activation::Sigmoid),
        (Mode::Classification, other) => Ok(other.clone()),
    }
}

/// As [`nn2poly_traced`] with a caller-supplied partition cache.
pub fn nn2poly_with_cache(
    model: &MlpModel,
    config: &TransformConfig,
    cache: &PartitionCache,
) -> Result<TransformTrace> {
    let layers = model.layers();
    let n_layers = layers.len();
    let orders = config.layer_orders(n_layers)?;
    let effective = config.effective_orders(n_layers)?;
    let final_activation = output_activation(model, config.mode)?;
    let p = model.p();

    let first = &layers[0];
    let mut in_polys = (0..first.outputs())
        .map(|j| {
            let w = first.incoming(j);
            Polynomial::affine(w[0], &w[1..])
        })
        .collect::<Result<Vec<_>>>()?;

    let mut trace = Vec::with_capacity(n_layers);
    for (l, layer) in layers.iter().enumerate() {
        let is_last = l + 1 == n_layers;
        if is_last && config.mode == Mode::Regression {
            trace.push(LayerPolynomials {
                layer: l + 1,
                in_polys: in_polys.clone(),
                out_polys: Vec::new(),
            });
            break;
        }
        let activation = if is_last { &final_activation } else { &layer.activation };
        let coeffs = taylor_coeffs(activation, orders[l])?;
        let plan = ActivationPlan::new(p, effective[l], orders[l], effective[l + 1], cache)?;
        let out_polys = in_polys
            .par_iter()
            .map(|ip| plan.apply(ip, &coeffs))
            .collect::<Result<Vec<_>>>()?;
        let next = if is_last {
            Vec::new()
        } else {
            let refs: Vec<&Polynomial> = out_polys.iter().collect();
            let next_layer = &layers[l + 1];
            (0..next_layer.outputs())
                .into_par_iter()
                .map(|j| linear_combination(&next_layer.incoming(j), &refs))
                .collect::<Result<Vec<_>>>()?
        };
        trace.push(LayerPolynomials {
            layer: l + 1,
            in_polys: std::mem::replace(&mut in_polys, next),
            out_polys,
        });
    }
    let last = trace.last().expect("at least one layer");
    let output = match config.mode {
        Mode::Regression => last.in_polys.clone(),
        Mode::Classification => last.out_polys.clone(),
    };
    Ok(TransformTrace {
        layers: trace,
        output,
        effective_orders: effective,
    })
}
