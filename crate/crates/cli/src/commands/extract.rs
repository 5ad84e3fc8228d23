use std::path::Path;

use anyhow::Context;
use nn2poly_core::{symbolic_forward, Polynomial};

use crate::config::FileConfig;
use crate::output::{csv_bytes, emit, fmt_f64};
use crate::{ExtractArgs, Format};

fn polynomials_json(polys: &[Polynomial]) -> anyhow::Result<Vec<u8>> {
    let mut text = if let [single] = polys {
        single.to_json()?
    } else {
        let values = polys
            .iter()
            .map(|p| Ok(serde_json::from_str::<serde_json::Value>(&p.to_json()?)?))
            .collect::<anyhow::Result<Vec<_>>>()?;
        serde_json::to_string_pretty(&values)?
    };
    text.push('\n');
    Ok(text.into_bytes())
}

/// One row per term: output index, label, coefficient, exponents.
pub fn polynomials_csv(polys: &[Polynomial]) -> anyhow::Result<Vec<u8>> {
    let p = polys.first().map_or(0, Polynomial::p);
    let mut header = vec!["output".to_string(), "term".into(), "coef".into()];
    header.extend((1..=p).map(|i| format!("x{i}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = polys.iter().enumerate().flat_map(|(k, poly)| {
        poly.terms().map(move |(t, c)| {
            let mut row = vec![(k + 1).to_string(), t.label(), fmt_f64(c)];
            row.extend(t.as_slice().iter().map(u32::to_string));
            row
        })
    });
    csv_bytes(&header, rows)
}

/// The `k` largest-magnitude terms of every output.
pub fn top_k_csv(polys: &[Polynomial], k: usize) -> anyhow::Result<Vec<u8>> {
    let rows = polys.iter().enumerate().flat_map(|(o, poly)| {
        poly.top_k(k)
            .into_iter()
            .enumerate()
            .map(move |(rank, (t, c))| {
                vec![(rank + 1).to_string(), (o + 1).to_string(), t.label(), fmt_f64(c)]
            })
    });
    csv_bytes(&["rank", "output", "term", "coef"], rows)
}

pub fn run(args: &ExtractArgs, file: &FileConfig, cache_dir: Option<&Path>) -> anyhow::Result<()> {
    let model = super::load_model(&args.weights)?;
    let config = file.transform(&args.transform)?;
    let polys = super::extract(&model, &config, cache_dir)?.trace.output;

    let encoded = match args.format {
        Format::Json => polynomials_json(&polys)?,
        Format::Csv => polynomials_csv(&polys)?,
    };
    match (args.top_k, &args.out) {
        (Some(k), out) => {
            if let Some(out) = out {
                emit(Some(out), &encoded)?;
            }
            emit(None, &top_k_csv(&polys, k)?)?;
        }
        (None, out) => emit(out.as_deref(), &encoded)?,
    }

    if args.verify {
        let exact = symbolic_forward(&model).context("--verify needs polynomial activations")?;
        let diff = polys
            .iter()
            .zip(&exact)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max);
        eprintln!("verify: max |coefficient difference| against symbolic expansion = {diff:e}");
    }
    Ok(())
}
