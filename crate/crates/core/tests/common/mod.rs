#![allow(dead_code)]

use std::path::PathBuf;

use lapdiag::exact::{rank, RankTracker};
use lapdiag::graphs::{
    complement, connected_components, disjoint_union, join, laplacian, parse_graph6, write_graph6,
    Graph,
};
use lapdiag::sdiag::{necessary_conditions, s_bandwidth, verify_bandwidth};
use lapdiag::spectra::integer_spectrum;
use lapdiag::{Alphabet, Bandwidth, SearchOptions};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CASES: u32 = 1000;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn read_corpus(name: &str) -> String {
    let path = corpus_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn corpus_graphs(name: &str) -> Vec<Graph> {
    read_corpus(name)
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_graph6(l.trim().as_bytes()).expect("corpus line"))
        .collect()
}

/// Every graph in `graphs1.g6` through `graphs{max_n}.g6`.
pub fn corpus_up_to(max_n: usize) -> Vec<Graph> {
    (1..=max_n)
        .flat_map(|n| corpus_graphs(&format!("graphs{n}.g6")))
        .collect()
}

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(
            move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for v in 1..n {
                    for u in 0..v {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, &edges)
            },
        )
    })
}

pub fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

pub fn check_complement_involution(g: &Graph) -> Result<(), TestCaseError> {
    prop_assert_eq!(&complement(&complement(g)), g);
    Ok(())
}

pub fn check_row_sums(g: &Graph) -> Result<(), TestCaseError> {
    for (i, row) in g.laplacian_rows().iter().enumerate() {
        prop_assert_eq!(row.iter().sum::<i64>(), 0, "row {}", i);
    }
    Ok(())
}

pub fn check_nullity(g: &Graph) -> Result<(), TestCaseError> {
    let nullity = g.n() - rank(&laplacian(g));
    prop_assert_eq!(nullity, connected_components(g).len());
    Ok(())
}

pub fn check_trace(g: &Graph) -> Result<(), TestCaseError> {
    let rows = g.laplacian_rows();
    let trace: i64 = (0..g.n()).map(|i| rows[i][i]).sum();
    prop_assert_eq!(trace, 2 * g.edge_count() as i64);
    let spectrum = integer_spectrum(g);
    if spectrum.integral {
        prop_assert_eq!(spectrum.weighted_sum(), 2 * g.edge_count() as u64);
    }
    Ok(())
}

pub fn check_join_identity(g: &Graph, h: &Graph) -> Result<(), TestCaseError> {
    let via_complements = complement(&disjoint_union(&complement(g), &complement(h)));
    prop_assert_eq!(join(g, h), via_complements);
    Ok(())
}

pub fn check_graph6_round_trip(g: &Graph) -> Result<(), TestCaseError> {
    let text = write_graph6(g).expect("encodable");
    prop_assert_eq!(&parse_graph6(&text).expect("decodable"), g);
    Ok(())
}

/// Bandwidth over both alphabets: the witness re-verifies, the value is
/// bounded by `max{c, n - c}` and does not depend on the labelling.
pub fn check_bandwidth(g: &Graph, perm: &[usize]) -> Result<(), TestCaseError> {
    let opts = SearchOptions::default();
    let relabelled = g.relabel(perm);
    for s in [Alphabet::neg_zero_one(), Alphabet::neg_one()] {
        let r = s_bandwidth(g, &s, &opts);
        prop_assert!(r.optimal);
        if let Bandwidth::Finite(k) = r.bandwidth {
            let w = r.witness.as_ref().expect("finite bandwidth has a witness");
            prop_assert!(verify_bandwidth(g, &s, w, k).is_ok());
            prop_assert!(k <= necessary_conditions(g, &s).bandwidth_bound);
        }
        let other = s_bandwidth(&relabelled, &s, &opts);
        prop_assert_eq!(other.bandwidth, r.bandwidth, "alphabet {}", s);
    }
    Ok(())
}

/// Independent check of `{-1,0,1}`-diagonalizability: bucket all `3^n`
/// vectors by the eigenvalue they realise and compare total rank with `n`.
pub fn brute_force_neg_zero_one(g: &Graph) -> bool {
    let n = g.n();
    let rows = g.laplacian_rows();
    let mut trackers: Vec<RankTracker> = (0..=n).map(|_| RankTracker::new(n)).collect();
    let mut v = vec![-1i64; n];
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for x in v.iter_mut() {
            *x = (c % 3) as i64 - 1;
            c /= 3;
        }
        let Some(i) = v.iter().position(|&x| x != 0) else {
            continue;
        };
        let lv: Vec<i64> = rows
            .iter()
            .map(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum())
            .collect();
        if lv[i] % v[i] != 0 {
            continue;
        }
        let lambda = lv[i] / v[i];
        if lambda < 0 || lambda as usize > n {
            continue;
        }
        if lv.iter().zip(&v).all(|(a, b)| *a == lambda * b) {
            trackers[lambda as usize].insert(&v);
        }
    }
    trackers.iter().map(RankTracker::rank).sum::<usize>() == n
}
