//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p nn2poly-cli --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use ndarray::Array2;
use nn2poly_core::taylor::derivatives_at_zero;
use nn2poly_core::transform::nn2poly_with_cache;
use nn2poly_core::{
    brute_force_partitions, enumerate_partitions, nn2poly, random_constrained_init,
    symbolic_forward, Activation, Architecture, Layer, MlpModel, Mode, Multiset, PartitionCache,
    TransformConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nn2poly"));
    cmd.env_remove("NN2POLY_CACHE_DIR");
    cmd
}

fn run_bin(args: &[&str]) -> Result<String, String> {
    let out = bin().args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "`nn2poly {}` exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn parse_partition_line(line: &str) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = line
        .trim()
        .trim_start_matches('{')
        .trim_end_matches('}')
        .split("},{")
        .map(|b| {
            let mut v: Vec<usize> = b.split(',').map(|x| x.parse().unwrap()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    blocks.sort();
    blocks
}

fn partition_fidelity() -> Outcome {
    let expected: BTreeSet<Vec<Vec<usize>>> = [
        "{1,1,2,3}",
        "{1},{1,2,3}",
        "{2},{1,1,3}",
        "{3},{1,1,2}",
        "{1,1},{2,3}",
        "{1,2},{1,3}",
        "{1},{1},{2,3}",
        "{1},{2},{1,3}",
        "{1},{3},{1,2}",
        "{2},{3},{1,1}",
        "{1},{1},{2},{3}",
    ]
    .iter()
    .map(|s| parse_partition_line(s))
    .collect();
    let start = Instant::now();
    let text = run_bin(&["partitions", "1,1,2,3"])?;
    let elapsed = start.elapsed();
    let lines: Vec<&str> = text.lines().collect();
    let got: BTreeSet<_> = lines.iter().map(|l| parse_partition_line(l)).collect();
    check(lines.len() == 11, || format!("{} lines", lines.len()))?;
    check(got == expected, || format!("set differs: {got:?}"))?;
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("11 partitions, set match, {elapsed:.2?}"))
}

fn partition_oracle_sweep() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut mismatches = 0;
    for m1 in 0..=7u32 {
        for m2 in 0..=7 - m1 {
            for m3 in 0..=7 - m1 - m2 {
                for m4 in 0..=7 - m1 - m2 - m3 {
                    let counts = [(1, m1), (2, m2), (3, m3), (4, m4)];
                    let multiset = Multiset::from_counts(counts.into_iter().filter(|c| c.1 > 0));
                    if multiset.is_empty() {
                        continue;
                    }
                    let fast: BTreeSet<_> = enumerate_partitions(&multiset)
                        .iter()
                        .map(|p| p.sorted_blocks())
                        .collect();
                    let slow = brute_force_partitions(&multiset).map_err(|e| e.to_string())?;
                    checked += 1;
                    if fast != slow {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check(mismatches == 0, || format!("{mismatches} mismatches of {checked}"))?;
    check(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} multisets, 0 mismatches, {elapsed:.2?}"))
}

fn random_polynomial_net(rng: &mut ChaCha8Rng) -> (MlpModel, Vec<u32>) {
    let p = rng.random_range(1..=3);
    let hidden = rng.random_range(1..=2);
    let mut layers = Vec::new();
    let mut orders = Vec::new();
    let mut fan_in = p;
    for l in 0..=hidden {
        let last = l == hidden;
        let width = if last { 1 } else { rng.random_range(1..=3) };
        let degree = if last { 1 } else { rng.random_range(1..=3usize) };
        let activation = if last {
            Activation::Linear
        } else {
            Activation::Polynomial((0..=degree).map(|_| rng.random_range(-1.0..=1.0)).collect())
        };
        let weights = Array2::from_shape_fn((fan_in + 1, width), |_| rng.random_range(-1.0..=1.0));
        layers.push(Layer { activation, weights });
        orders.push(degree as u32);
        fan_in = width;
    }
    (MlpModel::new(p, layers).expect("valid net"), orders)
}

fn exact_symbolic_equivalence() -> Outcome {
    let cache = PartitionCache::build(9).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let nets = 25;
    let mut worst: f64 = 0.0;
    for i in 0..nets {
        let (model, orders) = random_polynomial_net(&mut rng);
        let config = TransformConfig {
            q_max: orders.iter().product(),
            taylor_orders: orders,
            mode: Mode::Regression,
        };
        let ours = nn2poly_with_cache(&model, &config, &cache).map_err(|e| e.to_string())?;
        let exact = symbolic_forward(&model).map_err(|e| e.to_string())?;
        let diff = ours.output[0].max_abs_diff(&exact[0]);
        check(diff <= 1e-10, || format!("net {i}: max |diff| = {diff:e}"))?;
        worst = worst.max(diff);
    }
    Ok(format!("{nets} nets, max |coef diff| = {worst:.2e} (tol 1e-10)"))
}

fn random_constrained_fidelity() -> Outcome {
    let start = Instant::now();
    let arch = Architecture::regression(5, &[50, 50, 50], Activation::Tanh);
    let config = TransformConfig {
        taylor_orders: vec![8],
        q_max: 3,
        mode: Mode::Regression,
    };
    let mut passing = 0;
    let mut worst_ratio: f64 = 0.0;
    for seed in 0..20u64 {
        let model = random_constrained_init(&arch, seed).map_err(|e| e.to_string())?;
        let poly = &nn2poly(&model, &config).map_err(|e| e.to_string())?[0];
        let mut rng = ChaCha8Rng::seed_from_u64(10_000 + seed);
        let x = Array2::from_shape_fn((1000, 5), |_| rng.random_range(-1.0..=1.0));
        let nn = model.predict_scalar(&x).map_err(|e| e.to_string())?;
        let n = nn.len() as f64;
        let mean = nn.iter().sum::<f64>() / n;
        let var = nn.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let mse = x
            .rows()
            .into_iter()
            .zip(&nn)
            .map(|(r, y)| (poly.evaluate(&r.to_vec()).unwrap() - y).powi(2))
            .sum::<f64>()
            / n;
        worst_ratio = worst_ratio.max(mse / var);
        if mse < 1e-3 * var {
            passing += 1;
        }
    }
    let elapsed = start.elapsed();
    check(passing >= 18, || format!("only {passing}/20 seeds below 1e-3 x Var"))?;
    check(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{passing}/20 seeds, worst MSE/Var = {worst_ratio:.2e}, {elapsed:.2?}"
    ))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn simulation_replication() -> Outcome {
    let start = Instant::now();
    let text = run_bin(&[
        "simulate",
        "--p",
        "5",
        "--q-poly",
        "2",
        "--interactions",
        "5",
        "--activation",
        "tanh",
        "--constrain",
        "--layers",
        "1,3",
        "--width",
        "50",
        "--seed",
        "1,2,3,4,5,6,7,8,9,10",
    ])?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut by_layers: BTreeMap<usize, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for record in reader.records() {
        let r = record.map_err(|e| e.to_string())?;
        let layers: usize = r[1].parse().map_err(|e| format!("{e}"))?;
        let entry = by_layers.entry(layers).or_default();
        entry.0.push(r[4].parse().map_err(|e| format!("{e}"))?);
        entry.1.push(r[5].parse().map_err(|e| format!("{e}"))?);
    }
    check(by_layers.len() == 2, || "expected rows for 1 and 3 layers".into())?;
    let mut detail = Vec::new();
    let mut poly_medians = BTreeMap::new();
    for (layers, (poly_nn, nn_y)) in by_layers {
        check(poly_nn.len() == 10, || format!("{layers} layers: {} rows", poly_nn.len()))?;
        let (a, b) = (median(poly_nn), median(nn_y));
        detail.push(format!("L={layers}: median mse(poly,nn)={a:.2e} < median mse(nn,y)={b:.2e}"));
        check(a < b, || detail.join("; "))?;
        poly_medians.insert(layers, a);
    }
    check(poly_medians[&3] >= poly_medians[&1], || {
        format!("3-layer median {:.2e} below 1-layer {:.2e}", poly_medians[&3], poly_medians[&1])
    })?;
    Ok(format!("{}; grows with depth; {:.1?}", detail.join("; "), start.elapsed()))
}

fn potential_bound() -> Outcome {
    let cases: [(usize, &[usize]); 3] = [(5, &[50, 50, 50]), (3, &[10, 10]), (10, &[20, 20, 20, 20])];
    let mut worst: f64 = 0.0;
    for (i, (p, hidden)) in cases.iter().enumerate() {
        let arch = Architecture::regression(*p, hidden, Activation::Tanh);
        let model = random_constrained_init(&arch, 100 + i as u64).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(7 + i as u64);
        for _ in 0..10 {
            let x = Array2::from_shape_fn((10_000, *p), |_| rng.random_range(-1.0..=1.0));
            let potentials = model.batch_potentials(&x).map_err(|e| e.to_string())?;
            for u in &potentials[..hidden.len()] {
                worst = u.iter().fold(worst, |m, v| m.max(v.abs()));
            }
        }
    }
    check(worst <= 1.0 + 1e-9, || format!("max |u| = {worst}"))?;
    Ok(format!("3 models x 1e5 inputs, max hidden |u| = {worst:.6}"))
}

fn growth_tables() -> Outcome {
    let text = run_bin(&["report-growth", "--p", "3,10,20", "--q", "2,3,4"])?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut terms: BTreeMap<(usize, u32), u64> = BTreeMap::new();
    let mut classes: BTreeMap<u32, BTreeSet<usize>> = BTreeMap::new();
    let mut build_ms = None;
    for record in reader.records() {
        let r = record.map_err(|e| e.to_string())?;
        let p: usize = r[0].parse().map_err(|e| format!("{e}"))?;
        let q: u32 = r[1].parse().map_err(|e| format!("{e}"))?;
        terms.insert((p, q), r[2].parse().map_err(|e| format!("{e}"))?);
        classes
            .entry(q)
            .or_default()
            .insert(r[3].parse().map_err(|e| format!("{e}"))?);
        if (p, q) == (20, 4) {
            build_ms = Some(r[4].parse::<f64>().map_err(|e| format!("{e}"))?);
        }
    }
    check(terms.len() == 9, || format!("{} rows", terms.len()))?;
    let ps = [3, 10, 20];
    let qs = [2, 3, 4];
    for &p in &ps {
        for w in qs.windows(2) {
            check(terms[&(p, w[0])] < terms[&(p, w[1])], || format!("not increasing in Q at p={p}"))?;
        }
    }
    for &q in &qs {
        for w in ps.windows(2) {
            check(terms[&(w[0], q)] < terms[&(w[1], q)], || format!("not increasing in p at Q={q}"))?;
        }
    }
    check(classes.values().all(|s| s.len() == 1), || {
        format!("class counts vary with p: {classes:?}")
    })?;
    let build_ms = build_ms.ok_or("missing (20, 4) row")?;
    check(build_ms < 30_000.0, || format!("(20,4) cache build took {build_ms} ms"))?;
    let counts: Vec<usize> = classes.values().map(|s| *s.iter().next().unwrap()).collect();
    Ok(format!(
        "n_terms strictly increasing, classes per Q = {counts:?}, (20,4) build {build_ms:.2} ms"
    ))
}

fn richardson_derivative(f: impl Fn(f64) -> f64, k: u32, h0: f64) -> f64 {
    let central = |h: f64| -> f64 {
        let mut acc = 0.0;
        let mut binom = 1.0;
        for i in 0..=k {
            let x = (k as f64 / 2.0 - i as f64) * h;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom * f(x);
            binom = binom * (k - i) as f64 / (i + 1) as f64;
        }
        acc / h.powi(k as i32)
    };
    let mut prev: Vec<f64> = Vec::new();
    for i in 0..5 {
        let mut row = vec![central(h0 / 2f64.powi(i))];
        for j in 1..=i as usize {
            let factor = 4f64.powi(j as i32);
            row.push((factor * row[j - 1] - prev[j - 1]) / (factor - 1.0));
        }
        prev = row;
    }
    *prev.last().unwrap()
}

/// Derivatives at 0 from the closed-form tanh series, through
/// sigmoid(u) = (1 + tanh(u / 2)) / 2 and softplus' = sigmoid.
fn series_derivatives(act: &Activation) -> Vec<f64> {
    let tanh_coeffs = [0.0, 1.0, 0.0, -1.0 / 3.0, 0.0, 2.0 / 15.0, 0.0, -17.0 / 315.0, 0.0];
    let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
    let coeffs: Vec<f64> = match act {
        Activation::Tanh => tanh_coeffs.to_vec(),
        Activation::Sigmoid => (0..=8)
            .map(|k| {
                let base = if k == 0 { 0.5 } else { 0.0 };
                base + tanh_coeffs[k] / 2f64.powi(k as i32) / 2.0
            })
            .collect(),
        Activation::Softplus => {
            let sig = series_derivatives(&Activation::Sigmoid);
            std::iter::once(std::f64::consts::LN_2)
                .chain((1..=8).map(|k| sig[k - 1] / fact(k - 1) / k as f64))
                .collect()
        }
        _ => unreachable!(),
    };
    coeffs.iter().enumerate().map(|(n, c)| c * fact(n)).collect()
}

fn taylor_tables() -> Outcome {
    let mut worst_fd: f64 = 0.0;
    let mut worst_series: f64 = 0.0;
    for act in [Activation::Tanh, Activation::Sigmoid, Activation::Softplus] {
        let table = derivatives_at_zero(&act, 8).map_err(|e| e.to_string())?;
        for k in 0..=5u32 {
            let fd = richardson_derivative(|u| act.eval(u), k, 0.4);
            let exact = table[k as usize];
            let err = if exact == 0.0 { fd.abs() } else { ((fd - exact) / exact).abs() };
            check(err < 1e-5, || format!("{act} order {k}: table {exact}, fd {fd}"))?;
            worst_fd = worst_fd.max(err);
        }
        for (k, (a, b)) in table.iter().zip(series_derivatives(&act)).enumerate() {
            let err = (a - b).abs() / b.abs().max(1.0);
            check(err < 1e-12, || format!("{act} order {k}: table {a}, series {b}"))?;
            worst_series = worst_series.max(err);
        }
        if act == Activation::Tanh {
            check(table.iter().step_by(2).all(|&d| d == 0.0), || {
                format!("tanh even derivatives not exactly zero: {table:?}")
            })?;
        }
    }
    Ok(format!(
        "orders <= 5 vs Richardson: worst rel err {worst_fd:.1e}; orders <= 8 vs closed form: {worst_series:.1e}; tanh even orders exactly 0"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("partition-list fidelity", partition_fidelity),
        ("partition-oracle sweep", partition_oracle_sweep),
        ("exact symbolic equivalence", exact_symbolic_equivalence),
        ("random-constrained fidelity", random_constrained_fidelity),
        ("desk-scale simulation replication", simulation_replication),
        ("potential bound", potential_bound),
        ("growth tables", growth_tables),
        ("Taylor-table correctness", taylor_tables),
    ];
    let mut failed = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(criterion)
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
