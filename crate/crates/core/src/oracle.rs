//! Brute-force references: naive multiset partitioning and exact symbolic
//! expansion of networks whose activations are finite polynomials.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::mlp::MlpModel;
use crate::multiset::Multiset;
use crate::polyalg::{ExponentVector, Polynomial};

/// Largest multiset [`brute_force_partitions`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 8;

/// Term count at which [`symbolic_forward`] gives up.
pub const SYMBOLIC_TERM_LIMIT: usize = 50_000;

/// Every partition of `multiset`, each as sorted blocks of sorted labels.
///
/// Elements are assigned one at a time to an existing block or a new one;
/// duplicates from repeated labels collapse in the set.
pub fn brute_force_partitions(multiset: &Multiset) -> Result<BTreeSet<Vec<Vec<usize>>>> {
    if multiset.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::invalid(format!(
            "brute-force partitioning is limited to {BRUTE_FORCE_LIMIT} elements, got {}",
            multiset.len()
        )));
    }
    fn assign(
        rest: &[usize],
        blocks: &mut Vec<Vec<usize>>,
        out: &mut BTreeSet<Vec<Vec<usize>>>,
    ) {
        let Some((&first, tail)) = rest.split_first() else {
            let mut canonical: Vec<Vec<usize>> = blocks
                .iter()
                .map(|b| {
                    let mut b = b.clone();
                    b.sort_unstable();
                    b
                })
                .collect();
            canonical.sort();
            out.insert(canonical);
            return;
        };
        for i in 0..blocks.len() {
            blocks[i].push(first);
            assign(tail, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![first]);
        assign(tail, blocks, out);
        blocks.pop();
    }
    let mut out = BTreeSet::new();
    if !multiset.is_empty() {
        assign(&multiset.elements(), &mut Vec::new(), &mut out);
    }
    Ok(out)
}

type Terms = BTreeMap<Vec<u32>, f64>;

fn guard(terms: &Terms) -> Result<()> {
    if terms.len() > SYMBOLIC_TERM_LIMIT {
        return Err(Error::TermExplosion {
            terms: terms.len(),
            limit: SYMBOLIC_TERM_LIMIT,
        });
    }
    Ok(())
}

fn multiply(a: &Terms, b: &Terms) -> Result<Terms> {
    let mut out = Terms::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0.0) += ca * cb;
        }
        guard(&out)?;
    }
    Ok(out)
}

fn add_constant(terms: &mut Terms, p: usize, c: f64) {
    *terms.entry(vec![0; p]).or_insert(0.0) += c;
}

/// Exact output polynomials of a network whose activations are all finite
/// polynomials, by repeated term-by-term multiplication.
pub fn symbolic_forward(model: &MlpModel) -> Result<Vec<Polynomial>> {
    let p = model.p();
    let mut current: Vec<Terms> = (0..p)
        .map(|i| {
            let mut e = vec![0; p];
            e[i] = 1;
            Terms::from([(e, 1.0)])
        })
        .collect();
    let mut order = 1u32;

    for (l, layer) in model.layers().iter().enumerate() {
        let coeffs =
            layer
                .activation
                .polynomial_coeffs()
                .ok_or_else(|| Error::UnsupportedActivation {
                    name: layer.activation.name(),
                    reason: format!(
                        "layer {} is not a finite polynomial, so no exact expansion exists",
                        l + 1
                    ),
                })?;
        let degree = coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0) as u32;
        let mut next = Vec::with_capacity(layer.outputs());
        for j in 0..layer.outputs() {
            let w = layer.incoming(j);
            let mut potential = Terms::new();
            add_constant(&mut potential, p, w[0]);
            for (wi, prev) in w[1..].iter().zip(&current) {
                for (e, c) in prev {
                    *potential.entry(e.clone()).or_insert(0.0) += wi * c;
                }
            }
            // Horner: g(u) = (..((c_d u + c_{d-1}) u + ..) u + c_0
            let mut value = Terms::new();
            add_constant(&mut value, p, coeffs[degree as usize]);
            for n in (0..degree as usize).rev() {
                value = multiply(&value, &potential)?;
                add_constant(&mut value, p, coeffs[n]);
            }
            next.push(value);
        }
        current = next;
        order = order.saturating_mul(degree.max(1));
    }

    current
        .into_iter()
        .map(|terms| {
            Polynomial::from_terms(
                p,
                order,
                terms.into_iter().map(|(e, c)| (ExponentVector::new(e), c)),
            )
        })
        .collect()
}
