use anyhow::{bail, Context};
use nn2poly_core::{enumerate_partitions, Multiset, MultisetPartition};

use crate::output::emit;
use crate::PartitionsArgs;

/// Parses "1,1,2,3" into a multiset of positive labels.
pub fn parse_multiset(spec: &str) -> anyhow::Result<Multiset> {
    let labels = spec
        .split(',')
        .map(|s| {
            let s = s.trim();
            let label: usize = s
                .parse()
                .with_context(|| format!("`{s}` is not a positive integer label"))?;
            if label == 0 {
                bail!("labels start at 1");
            }
            Ok(label)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Multiset::from_elements(&labels))
}

/// Partitions in enumeration order, filtered by block count and block size.
pub fn listing(
    multiset: &Multiset,
    n: Option<usize>,
    q: Option<u32>,
    vectors: bool,
) -> Vec<String> {
    let labels: Vec<usize> = multiset.counts().iter().map(|&(l, _)| l).collect();
    enumerate_partitions(multiset)
        .into_iter()
        .filter(|p: &MultisetPartition| n.is_none_or(|n| p.len() == n))
        .filter(|p| q.is_none_or(|q| p.max_block_size() <= q as usize))
        .map(|p| {
            if vectors {
                p.vector_form(&labels)
            } else {
                p.to_string()
            }
        })
        .collect()
}

pub fn run(args: &PartitionsArgs) -> anyhow::Result<()> {
    let multiset = parse_multiset(&args.multiset)?;
    let mut text = String::new();
    for line in listing(&multiset, args.n, args.q, args.vectors) {
        text.push_str(&line);
        text.push('\n');
    }
    emit(None, text.as_bytes())
}
