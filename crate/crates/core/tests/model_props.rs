use std::collections::{BTreeMap, BTreeSet};

use persona_core::features::SparseVector;
use persona_core::model::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tied_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0..6) as f64 * 0.5).collect()
}

/// Concordant minus discordant pairs over the tie-corrected denominator, by enumeration.
fn tau_b_pairs(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mut c, mut d, mut tx, mut ty) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            // f64::signum maps 0.0 to 1.0, so ties are tested explicitly
            let s = if x[i] == x[j] || y[i] == y[j] { 0.0 } else { (x[i] - x[j]).signum() * (y[i] - y[j]).signum() };
            if x[i] == x[j] {
                tx += 1.0;
            }
            if y[i] == y[j] {
                ty += 1.0;
            }
            if s > 0.0 {
                c += 1.0;
            } else if s < 0.0 {
                d += 1.0;
            }
        }
    }
    let n0 = (x.len() * (x.len() - 1) / 2) as f64;
    let den = ((n0 - tx) * (n0 - ty)).sqrt();
    (den > 0.0).then(|| (c - d) / den)
}

/// Rank = 1 + (#smaller) + (#equal - 1) / 2, computed by scanning.
fn ranks_by_scan(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let less = x.iter().filter(|&&u| u < v).count() as f64;
            let eq = x.iter().filter(|&&u| u == v).count() as f64;
            1.0 + less + (eq - 1.0) / 2.0
        })
        .collect()
}

fn pearson_two_pass(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

#[test]
fn metrics_match_enumeration_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.random_range(3..=50);
        let x = tied_vec(&mut rng, n);
        let y: Vec<f64> = x.iter().map(|v| v + rng.random_range(0..4) as f64 * 0.5).collect();
        let close = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(a), Some(b)) => (a - b).abs() < 1e-10,
            (None, None) => true,
            _ => false,
        };
        assert!(close(pearson(&x, &y), pearson_two_pass(&x, &y)));
        assert!(close(kendall_tau_b(&x, &y), tau_b_pairs(&x, &y)));
        assert!(close(spearman(&x, &y), pearson_two_pass(&ranks_by_scan(&x), &ranks_by_scan(&y))));
        let m = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum::<f64>() / n as f64;
        assert!((mae(&x, &y) - m).abs() < 1e-10);
    }
}

proptest! {
    #[test]
    fn rank_metrics_ignore_monotone_maps(x in prop::collection::vec(0.01f64..5.0, 3..40), y in prop::collection::vec(0.01f64..5.0, 3..40)) {
        let n = x.len().min(y.len());
        let (x, y) = (&x[..n], &y[..n]);
        let t = BoxCoxTransform::new(0.37, 0.0);
        let tx: Vec<f64> = x.iter().map(|&v| t.apply(v).unwrap()).collect();
        let a = (spearman(x, y), kendall_tau_b(x, y));
        let b = (spearman(&tx, y), kendall_tau_b(&tx, y));
        for (u, v) in [(a.0, b.0), (a.1, b.1)] {
            match (u, v) {
                (Some(u), Some(v)) => prop_assert!((u - v).abs() < 1e-12),
                (u, v) => prop_assert_eq!(u, v),
            }
        }
    }

    #[test]
    fn boxcox_round_trip(y in 1e-3f64..10.0, lambda in -2.0f64..2.0) {
        let t = BoxCoxTransform::new(lambda, 0.0);
        let z = t.apply(y).unwrap();
        prop_assert!((t.invert(z).unwrap() - y).abs() < 1e-9 * y.max(1.0));
    }

    #[test]
    fn boxcox_is_increasing(a in 1e-3f64..10.0, b in 1e-3f64..10.0, lambda in -3.0f64..3.0) {
        prop_assume!(a < b);
        prop_assert!(boxcox(a, lambda) <= boxcox(b, lambda));
    }

    #[test]
    fn label_inverse_stays_in_the_unit_interval(z in -1e3f64..1e3, lambda in -3.0f64..3.0) {
        let t = LabelTransform { boxcox: BoxCoxTransform::new(lambda, 0.0) };
        let v = t.inverse(z);
        prop_assert!((LABEL_FLOOR..=1.0).contains(&v));
    }
}

#[test]
fn lognormal_lambda_near_zero() {
    use rand_distr::{Distribution, LogNormal};
    let d = LogNormal::new(0.0, 1.0).unwrap();
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y: Vec<f64> = (0..200).map(|_| d.sample(&mut rng)).collect();
        let fit = boxcox_fit(&y).unwrap();
        assert!(fit.lambda.abs() < 0.15, "seed {seed}: lambda {}", fit.lambda);
        let grid = (0..=4000).map(|i| -2.0 + i as f64 * 1e-3).max_by(|a, b| {
            boxcox_log_likelihood(&y, *a).total_cmp(&boxcox_log_likelihood(&y, *b))
        });
        assert!((grid.unwrap() - fit.lambda).abs() < 1e-2);
    }
}

#[test]
fn split_keeps_groups_whole_and_sizes_close() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for layout in 0..100u64 {
        let n_groups = rng.random_range(10..60);
        let mut groups = Vec::new();
        for g in 0..n_groups {
            for _ in 0..rng.random_range(1..20) {
                groups.push(format!("g{g}"));
            }
        }
        let s = group_shuffle_split(&groups, [0.8, 0.1, 0.1], layout).unwrap();
        let mut seen: BTreeMap<&str, BTreeSet<Part>> = BTreeMap::new();
        for p in [Part::Train, Part::Validation, Part::Test] {
            for &i in s.part(p) {
                seen.entry(groups[i].as_str()).or_default().insert(p);
            }
        }
        assert!(seen.values().all(|parts| parts.len() == 1));
        assert_eq!(s.len(), groups.len());
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for g in &groups {
            *counts.entry(g).or_default() += 1;
        }
        let max_share = *counts.values().max().unwrap() as f64 / groups.len() as f64;
        for (p, f) in [(Part::Train, 0.8), (Part::Validation, 0.1), (Part::Test, 0.1)] {
            let share = s.part(p).len() as f64 / groups.len() as f64;
            assert!((share - f).abs() <= max_share + 1e-12, "layout {layout} {p:?}: {share} vs {f}");
        }
    }
}

fn random_sparse(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<SparseVector> {
    (0..n)
        .map(|_| {
            let mut pairs = Vec::new();
            for j in 0..dim {
                if rng.random_bool(0.5) {
                    pairs.push((j, rng.random_range(-1.0..1.0)));
                }
            }
            SparseVector::from_pairs(dim, pairs).unwrap()
        })
        .collect()
}

#[test]
fn duplicated_rows_equal_doubled_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = random_sparse(&mut rng, 30, 5);
    let y: Vec<f64> = x.iter().map(|v| v.get(0) - 2.0 * v.get(3) + rng.random_range(-0.3..0.3)).collect();
    let params = SvrParams { tol: 1e-9, max_passes: 100_000, ..SvrParams::default() };
    let mut xd = x.clone();
    xd.extend(x[..10].iter().cloned());
    let mut yd = y.clone();
    yd.extend_from_slice(&y[..10]);
    let w: Vec<f64> = (0..30).map(|i| if i < 10 { 2.0 } else { 1.0 }).collect();
    let a = train_svr(&xd, &yd, &params).unwrap();
    let b = train_svr_weighted(&x, &y, &w, &params).unwrap();
    assert!(a.diagnostics.converged && b.diagnostics.converged);
    assert!((a.diagnostics.primal_objective - b.diagnostics.primal_objective).abs() < 1e-6);
    for (p, q) in a.weights.iter().zip(&b.weights) {
        assert!((p - q).abs() < 1e-3, "{p} vs {q}");
    }
}

#[test]
fn svr_dual_objective_never_increases() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x = random_sparse(&mut rng, 80, 12);
    let y: Vec<f64> = x.iter().map(|v| v.get(1) + rng.random_range(-0.5..0.5)).collect();
    let m = train_svr(&x, &y, &SvrParams::default()).unwrap();
    let trace = &m.diagnostics.objective_trace;
    assert!(trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
}

/// Shapley value of feature j by enumerating coalitions, with absent features set to the background.
fn shapley_enumerated(w: &[f64], b: f64, x: &[f64], bg: &[f64], j: usize) -> f64 {
    let k = w.len();
    let f = |mask: usize| b + (0..k).map(|i| w[i] * if mask >> i & 1 == 1 { x[i] } else { bg[i] }).sum::<f64>();
    let fact = |n: usize| (1..=n).product::<usize>() as f64;
    let mut phi = 0.0;
    for mask in 0..1usize << k {
        if mask >> j & 1 == 1 {
            continue;
        }
        let s = mask.count_ones() as usize;
        phi += fact(s) * fact(k - s - 1) / fact(k) * (f(mask | 1 << j) - f(mask));
    }
    phi
}

#[test]
fn linear_explanations_are_exact_shapley_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let x = random_sparse(&mut rng, 20, 3);
        let y: Vec<f64> = x.iter().map(|v| v.get(0) - v.get(2)).collect();
        let m = train_svr(&x, &y, &SvrParams::default()).unwrap();
        let bg: Vec<f64> = (0..3).map(|_| rng.random_range(-0.5..0.5)).collect();
        let e = explain_linear(&m, &x[0], &bg).unwrap();
        let total: f64 = e.contributions.iter().sum();
        assert!((total - (e.prediction - e.baseline)).abs() < 1e-9);
        for j in 0..3 {
            let phi = shapley_enumerated(&m.weights, m.bias, &x[0].to_dense(), &bg, j);
            assert!((phi - e.contributions[j]).abs() < 1e-12);
        }
    }
}
