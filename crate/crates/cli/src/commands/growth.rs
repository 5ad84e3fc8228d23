use std::time::Instant;

use anyhow::bail;
use nn2poly_core::{build_cache, count_terms};

use crate::output::{csv_bytes, emit};
use crate::GrowthArgs;

pub const MAX_P: usize = 50;
pub const MAX_Q: u32 = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub p: usize,
    pub q: u32,
    pub n_terms: u64,
    pub n_canonical_classes: usize,
    pub cache_build_ms: f64,
    pub cache_bytes: usize,
}

pub fn growth_rows(ps: &[usize], qs: &[u32], force: bool) -> anyhow::Result<Vec<GrowthRow>> {
    if ps.is_empty() || qs.is_empty() {
        bail!("need at least one p and one Q");
    }
    if !force {
        if let Some(p) = ps.iter().find(|&&p| p > MAX_P) {
            bail!("p = {p} exceeds the guard of {MAX_P}; pass --force to run anyway");
        }
        if let Some(q) = qs.iter().find(|&&q| q > MAX_Q) {
            bail!("Q = {q} exceeds the guard of {MAX_Q}; pass --force to run anyway");
        }
    }
    let mut rows = Vec::with_capacity(ps.len() * qs.len());
    for &p in ps {
        for &q in qs {
            let start = Instant::now();
            let cache = build_cache(p, q)?;
            let elapsed = start.elapsed();
            rows.push(GrowthRow {
                p,
                q,
                n_terms: count_terms(p, q)?,
                n_canonical_classes: cache.len(),
                cache_build_ms: elapsed.as_secs_f64() * 1e3,
                cache_bytes: cache.approx_bytes(),
            });
        }
    }
    Ok(rows)
}

pub fn run(args: &GrowthArgs) -> anyhow::Result<()> {
    let rows = growth_rows(&args.p, &args.q, args.force)?;
    let csv = csv_bytes(
        &["p", "Q", "n_terms", "n_canonical_classes", "cache_build_ms", "cache_bytes"],
        rows.iter().map(|r| {
            vec![
                r.p.to_string(),
                r.q.to_string(),
                r.n_terms.to_string(),
                r.n_canonical_classes.to_string(),
                format!("{:.3}", r.cache_build_ms),
                r.cache_bytes.to_string(),
            ]
        }),
    )?;
    emit(args.out.as_deref(), &csv)
}
