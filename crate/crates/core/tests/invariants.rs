use nonforcing::audit::{count_labeled_cliques, count_labeled_cliques_multipartite, p3_check};
use nonforcing::ensemble::{build_multipartite, gnp, sample_graphon_graph, SeededRng};
use nonforcing::spectrum::{find_roots_entire, find_roots_truncated, roots_to_weights, RootOptions, WeightSequence};
use nonforcing::DensityParam;
use proptest::prelude::*;

fn truncated_weights(p: &str, k: usize) -> WeightSequence {
    let p = DensityParam::parse(p).unwrap();
    roots_to_weights(&find_roots_truncated(&p, k, &RootOptions::default()).unwrap()).unwrap()
}

const SMALL_P: [&str; 5] = ["0.05", "0.1", "0.15", "0.2", "0.25"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn structured_counts_match_backtracking(pi in 0usize..5, k in 2usize..=5, n in 1usize..=300) {
        let ws = truncated_weights(SMALL_P[pi], k);
        let (g, w) = build_multipartite(&ws, n, true).unwrap();
        prop_assert!(w.is_complete_multipartite_of(&g));
        for j in 2..=6 {
            prop_assert_eq!(count_labeled_cliques_multipartite(&w.sizes(), j), count_labeled_cliques(&g, j));
        }
    }

    #[test]
    fn largest_part_is_an_independent_half(pi in 0usize..5, k in 2usize..=6, n in 10usize..3000) {
        let ws = truncated_weights(SMALL_P[pi], k);
        let (g, w) = build_multipartite(&ws, n, true).unwrap();
        let sizes = w.sizes();
        prop_assert_eq!(sizes.iter().sum::<usize>(), n);
        for (s, c) in sizes.iter().zip(&ws.weights) {
            prop_assert!((*s as f64 - c.to_f64() * n as f64).abs() < 1.0);
        }
        let (i, largest) = w.largest_part().unwrap();
        prop_assert_eq!(i, 0);
        prop_assert!(2 * largest >= n);
        prop_assert!(largest as f64 >= ws.weights[0].to_f64() * n as f64 - 1.0);
        let part = w.parts[0].clone();
        prop_assert!(part.iter().all(|&v| w.parts[0].iter().all(|&u| !g.has_edge(u, v))));
    }
}

#[test]
fn graphon_sampling_is_deterministic_and_concentrated() {
    let p = DensityParam::parse("0.5").unwrap();
    let ws = roots_to_weights(&find_roots_entire(&p, 40, &RootOptions::default()).unwrap()).unwrap();
    let (a, wa) = sample_graphon_graph(&ws, 2000, &mut SeededRng::new(42, 0), 1e-9).unwrap();
    let (b, wb) = sample_graphon_graph(&ws, 2000, &mut SeededRng::new(42, 0), 1e-9).unwrap();
    assert_eq!(a, b);
    assert_eq!(wa, wb);
    assert_eq!(wa.dust_index, Some(40));
    let c1 = ws.weights[0].to_f64();
    let largest = wa.sizes()[0] as f64;
    assert!((largest - c1 * 2000.0).abs() < 3.0 * (c1 * 2000.0).sqrt(), "{largest} vs {}", c1 * 2000.0);

    let (single, _) = sample_graphon_graph(&ws, 1, &mut SeededRng::new(3, 0), 1e-9).unwrap();
    assert_eq!((single.n(), single.edge_count()), (1, 0));
}

#[test]
fn distinct_streams_vary_like_independent_draws() {
    let p = DensityParam::parse("0.5").unwrap();
    let ws = roots_to_weights(&find_roots_entire(&p, 30, &RootOptions::default()).unwrap()).unwrap();
    let counts: Vec<f64> = (0..12)
        .map(|stream| {
            let (g, _) = sample_graphon_graph(&ws, 200, &mut SeededRng::new(5, stream), 1e-6).unwrap();
            g.edge_count() as f64
        })
        .collect();
    let mean = counts.iter().sum::<f64>() / counts.len() as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (counts.len() - 1) as f64;
    assert!(var > 0.0);
    // Edge density near p = 1/2 of the C(200, 2) pairs.
    assert!((mean / 19900.0 - 0.5).abs() < 0.05, "{mean}");
}

#[test]
fn p3_on_gnp_is_flat() {
    let p = DensityParam::parse("0.5").unwrap();
    let g = gnp(2000, 0.5, &mut SeededRng::new(8, 0)).unwrap();
    let samples = p3_check(&g, 0.5, &p, 20, &mut SeededRng::new(8, 1), &[]);
    assert_eq!(samples.len(), 20);
    assert!(samples.iter().all(|s| s.subset_size == 1000 && s.rel_dev.abs() < 0.05));
    let edges_in: u64 = samples.iter().map(|s| s.labeled_edges_within).sum();
    assert!(edges_in.is_multiple_of(2));
}
