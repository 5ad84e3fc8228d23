//! Activation functions and their Taylor expansions around zero.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Highest supported Taylor order.
pub const MAX_TAYLOR_ORDER: u32 = 12;

/// Scalar activation applied neuron-wise.
///
/// `Polynomial(c)` is the finite power series `sum_n c[n] u^n`; it is exact under
/// Taylor composition and is what the symbolic oracle checks against.
#[derive(Clone, Debug, PartialEq)]
pub enum Activation {
    Tanh,
    Sigmoid,
    Softplus,
    Linear,
    Polynomial(Vec<f64>),
}

fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

fn horner(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

impl Activation {
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Activation::Tanh => u.tanh(),
            Activation::Sigmoid => sigmoid(u),
            // log(1 + e^u) without overflow for large u.
            Activation::Softplus => u.max(0.0) + (-u.abs()).exp().ln_1p(),
            Activation::Linear => u,
            Activation::Polynomial(c) => horner(c, u),
        }
    }

    /// First derivative at `u`.
    pub fn derivative(&self, u: f64) -> f64 {
        match self {
            Activation::Tanh => {
                let y = u.tanh();
                1.0 - y * y
            }
            Activation::Sigmoid => {
                let s = sigmoid(u);
                s * (1.0 - s)
            }
            Activation::Softplus => sigmoid(u),
            Activation::Linear => 1.0,
            Activation::Polynomial(c) => {
                let d: Vec<f64> = c
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(n, &cn)| cn * n as f64)
                    .collect();
                horner(&d, u)
            }
        }
    }

    /// Power-series coefficients when the activation is a finite polynomial.
    pub fn polynomial_coeffs(&self) -> Option<Vec<f64>> {
        match self {
            Activation::Linear => Some(vec![0.0, 1.0]),
            Activation::Polynomial(c) => Some(c.clone()),
            _ => None,
        }
    }

    /// Whether `g` maps `[-1, 1]` into itself, which keeps constrained
    /// potentials bounded by one in the following layer.
    pub fn maps_unit_interval(&self) -> bool {
        matches!(
            self,
            Activation::Tanh | Activation::Sigmoid | Activation::Linear
        )
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Activation::Tanh => f.write_str("tanh"),
            Activation::Sigmoid => f.write_str("sigmoid"),
            Activation::Softplus => f.write_str("softplus"),
            Activation::Linear => f.write_str("linear"),
            Activation::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|x| format!("{x:?}")).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let name = s.trim();
        match name.to_ascii_lowercase().as_str() {
            "tanh" => Ok(Activation::Tanh),
            "sigmoid" => Ok(Activation::Sigmoid),
            "softplus" => Ok(Activation::Softplus),
            "linear" | "identity" => Ok(Activation::Linear),
            "relu" => Err(Error::UnsupportedActivation {
                name: name.to_string(),
                reason: "ReLU is not differentiable at 0, so it has no Taylor expansion there"
                    .to_string(),
            }),
            "softmax" => Err(Error::UnsupportedActivation {
                name: name.to_string(),
                reason: "softmax couples several neurons; only scalar per-neuron activations \
                         can be expanded (use sigmoid per class)"
                    .to_string(),
            }),
            lower => {
                if let Some(rest) = lower.strip_prefix("poly:") {
                    let coeffs = rest
                        .split(',')
                        .map(|x| x.trim().parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| Error::UnsupportedActivation {
                            name: name.to_string(),
                            reason: format!("bad polynomial coefficient: {e}"),
                        })?;
                    if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                        return Err(Error::UnsupportedActivation {
                            name: name.to_string(),
                            reason: "polynomial coefficients must be finite".to_string(),
                        });
                    }
                    Ok(Activation::Polynomial(coeffs))
                } else {
                    Err(Error::UnsupportedActivation {
                        name: name.to_string(),
                        reason: "expected one of tanh, sigmoid, softplus, linear, poly:c0,c1,..."
                            .to_string(),
                    })
                }
            }
        }
    }
}

impl Serialize for Activation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Activation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_order(q: u32) -> Result<()> {
    if q > MAX_TAYLOR_ORDER {
        return Err(Error::invalid(format!(
            "Taylor order {q} exceeds the supported maximum {MAX_TAYLOR_ORDER}"
        )));
    }
    Ok(())
}

/// Values `g(y0), g'(y0), ...` for an activation satisfying `y' = r(y)`,
/// computed by differentiating the polynomial in `y` repeatedly.
fn derivative_chain(q: u32, rate: &[f64], y0: f64) -> Vec<f64> {
    // d/du P(y) = P'(y) * r(y)
    let mut poly = vec![0.0, 1.0];
    let mut out = Vec::with_capacity(q as usize + 1);
    for _ in 0..=q {
        out.push(horner(&poly, y0));
        let dp: Vec<f64> = poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as f64)
            .collect();
        let mut next = vec![0.0; dp.len() + rate.len()];
        for (i, &a) in dp.iter().enumerate() {
            for (j, &b) in rate.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        poly = next;
    }
    out
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `g(0), g'(0), ..., g^(q)(0)`.
pub fn derivatives_at_zero(activation: &Activation, q: u32) -> Result<Vec<f64>> {
    check_order(q)?;
    let len = q as usize + 1;
    Ok(match activation {
        Activation::Tanh => derivative_chain(q, &[1.0, 0.0, -1.0], 0.0),
        Activation::Sigmoid => derivative_chain(q, &[0.0, 1.0, -1.0], 0.5),
        Activation::Softplus => {
            let mut d = vec![std::f64::consts::LN_2];
            if q > 0 {
                d.extend(derivative_chain(q - 1, &[0.0, 1.0, -1.0], 0.5));
            }
            d
        }
        Activation::Linear => (0..len).map(|n| if n == 1 { 1.0 } else { 0.0 }).collect(),
        Activation::Polynomial(c) => (0..len)
            .map(|n| c.get(n).copied().unwrap_or(0.0) * factorial(n as u32))
            .collect(),
    })
}

/// Truncated Taylor series `c_n = g^(n)(0) / n!`, `n = 0..=q`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorCoeffs {
    pub activation: Activation,
    pub order: u32,
    pub coeffs: Vec<f64>,
}

pub fn taylor_coeffs(activation: &Activation, q: u32) -> Result<TaylorCoeffs> {
    let coeffs = match activation {
        // Avoid the factorial round trip so polynomial activations stay exact.
        Activation::Polynomial(c) => {
            check_order(q)?;
            (0..=q as usize)
                .map(|n| c.get(n).copied().unwrap_or(0.0))
                .collect()
        }
        _ => derivatives_at_zero(activation, q)?
            .into_iter()
            .enumerate()
            .map(|(n, d)| d / factorial(n as u32))
            .collect(),
    };
    Ok(TaylorCoeffs {
        activation: activation.clone(),
        order: q,
        coeffs,
    })
}

impl TaylorCoeffs {
    pub fn eval(&self, u: f64) -> f64 {
        taylor_eval(self, u)
    }

    /// Highest `n` with a nonzero coefficient.
    pub fn effective_degree(&self) -> u32 {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0) as u32
    }
}

/// Horner evaluation of the truncated series at `u`.
pub fn taylor_eval(coeffs: &TaylorCoeffs, u: f64) -> f64 {
    horner(&coeffs.coeffs, u)
}
