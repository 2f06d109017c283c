use popta::grid::{enumerate_grid, grid_count, interpolate, triangulate, GridSpec};
use proptest::prelude::*;
use std::collections::HashMap;

/// `C(n + m - 1, m)` by the multiplicative formula.
fn binomial_count(n: u64, m: u64) -> u64 {
    let (top, k) = (n + m - 1, m.min(n - 1));
    (0..k).fold(1u64, |acc, i| acc * (top - i) / (i + 1))
}

fn normalise(raw: &[f64]) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

#[test]
fn count_matches_binomial() {
    for n in 1..=8u64 {
        for m in 1..=12u64 {
            let spec = GridSpec::new(n as usize, m as u32).unwrap();
            assert_eq!(grid_count(spec).unwrap(), binomial_count(n, m), "N={n} M={m}");
        }
    }
}

#[test]
fn enumeration_is_sorted_distinct_and_sums_to_m() {
    let spec = GridSpec::new(4, 5).unwrap();
    let pts = enumerate_grid(spec).unwrap();
    for w in pts.windows(2) {
        assert!(w[0] != w[1]);
    }
    for p in &pts {
        assert_eq!(p.counts().iter().sum::<u32>(), 5);
    }
}

proptest! {
    #[test]
    fn triangulation_reconstructs(raw in prop::collection::vec(0.0f64..1.0, 1..7), m in 1u32..16) {
        prop_assume!(raw.iter().sum::<f64>() > 1e-6);
        let b = normalise(&raw);
        let spec = GridSpec::new(b.len(), m).unwrap();
        let w = triangulate(&b, spec).unwrap();
        prop_assert!(w.len() <= b.len());
        let sum: f64 = w.entries().iter().map(|e| e.1).sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        for (g, l) in w.entries() {
            prop_assert!(*l > 0.0);
            prop_assert_eq!(g.counts().iter().sum::<u32>(), m);
        }
        for (x, y) in w.reconstruct().iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn interpolation_of_a_linear_function_is_exact(raw in prop::collection::vec(0.0f64..1.0, 1..6), coef in prop::collection::vec(-5.0f64..5.0, 6), m in 1u32..10) {
        prop_assume!(raw.iter().sum::<f64>() > 1e-6);
        let b = normalise(&raw);
        let spec = GridSpec::new(b.len(), m).unwrap();
        let f = |x: &[f64]| x.iter().zip(&coef).map(|(a, c)| a * c).sum::<f64>();
        let values: HashMap<_, _> = enumerate_grid(spec).unwrap().into_iter().map(|g| { let v = f(&g.belief()); (g, v) }).collect();
        let w = triangulate(&b, spec).unwrap();
        prop_assert!((interpolate(&w, &values).unwrap() - f(&b)).abs() <= 1e-9);
    }
}
