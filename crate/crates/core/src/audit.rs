//! Labeled subgraph counts, subset edge densities and quasirandomness verdicts.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::index;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::defexp::DensityParam;
use crate::ensemble::{PartitionWitness, SeededRng};
use crate::ext_real::{ExtReal, Round};
use crate::graph::{and_count, words_for, Graph};

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("brute-force counting is limited to patterns with at most 8 vertices and hosts with at most 64 (got {pattern} and {host})")]
    OracleScale { pattern: usize, host: usize },
    #[error("k_max must be at least 2, got {0}")]
    KMax(usize),
    #[error("invalid audit setting: {0}")]
    Config(String),
    #[error(transparent)]
    Witness(#[from] crate::ensemble::EnsembleError),
    #[error("structured counting requested but the witness does not describe this graph as complete multipartite")]
    NotMultipartite,
}

fn as_string<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[cfg(feature = "parallel")]
fn par_sum<F: Fn(usize) -> u128 + Sync + Send>(n: usize, f: F) -> u128 {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).sum()
}

#[cfg(not(feature = "parallel"))]
fn par_sum<F: Fn(usize) -> u128>(n: usize, f: F) -> u128 {
    (0..n).map(f).sum()
}

/// Smallest-last order: position `i` holds the vertex removed `i`-th when
/// repeatedly deleting a vertex of minimum remaining degree.
pub fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut gone = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !gone[v])
            .min_by_key(|&v| deg[v])
            .expect("vertex left");
        gone[v] = true;
        order.push(v);
        for u in g.neighbors(v) {
            if !gone[u] {
                deg[u] -= 1;
            }
        }
    }
    order
}

/// Forward adjacency in degeneracy order: row `v` keeps neighbours ranked after `v`.
struct Forward {
    w: usize,
    rows: Vec<u64>,
}

impl Forward {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let order = degeneracy_order(g);
        let mut rank = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let h = g.relabel(&rank);
        let w = words_for(n);
        let mut rows = vec![0u64; n * w];
        for v in 0..n {
            let dst = &mut rows[v * w..(v + 1) * w];
            dst.copy_from_slice(h.row(v));
            let cut = v + 1;
            for word in dst.iter_mut().take(cut / 64) {
                *word = 0;
            }
            if cut / 64 < w {
                dst[cut / 64] &= !((1u64 << (cut % 64)) - 1);
            }
        }
        Self { w, rows }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.w..(v + 1) * self.w]
    }
}

/// Cliques of `depth` more vertices inside `cand`, whose set bits all lie in
/// words `lo..`.
fn extend(fw: &Forward, cand: &[u64], lo: usize, depth: usize, bufs: &mut [Vec<u64>]) -> u128 {
    if depth == 1 {
        return cand[lo..].iter().map(|x| x.count_ones() as u128).sum();
    }
    let mut total = 0u128;
    let (buf, rest) = bufs.split_first_mut().expect("buffer per level");
    for (i, &word) in cand.iter().enumerate().skip(lo) {
        let mut x = word;
        while x != 0 {
            let u = i * 64 + x.trailing_zeros() as usize;
            x &= x - 1;
            let start = (u + 1) / 64;
            if start >= fw.w {
                continue;
            }
            let fu = fw.row(u);
            if depth == 2 {
                total += cand[start..]
                    .iter()
                    .zip(&fu[start..])
                    .map(|(a, b)| (a & b).count_ones() as u128)
                    .sum::<u128>();
            } else {
                let mut any = false;
                for k in start..fw.w {
                    let v = cand[k] & fu[k];
                    buf[k] = v;
                    any |= v != 0;
                }
                if any {
                    total += extend(fw, buf, start, depth - 1, rest);
                }
            }
        }
    }
    total
}

fn factorial_big(j: usize) -> BigUint {
    (1..=j as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// `j!` times the number of `j`-cliques, by backtracking over forward
/// adjacency bitsets in degeneracy order.
pub fn count_labeled_cliques(g: &Graph, j: usize) -> BigUint {
    let n = g.n();
    match j {
        0 => return BigUint::one(),
        1 => return BigUint::from(n),
        2 => return BigUint::from(2 * g.edge_count()),
        _ if j > n => return BigUint::zero(),
        _ => {}
    }
    let fw = Forward::new(g);
    let w = fw.w;
    let per_vertex = |v: usize, bufs: &mut Vec<Vec<u64>>| -> u128 {
        let start = (v + 1) / 64;
        if start >= w {
            return 0;
        }
        extend(&fw, fw.row(v), start, j - 1, bufs)
    };
    let make_bufs = || vec![vec![0u64; w]; j];
    #[cfg(feature = "parallel")]
    let cliques: u128 = {
        use rayon::prelude::*;
        (0..n)
            .into_par_iter()
            .map_init(make_bufs, |b, v| per_vertex(v, b))
            .sum()
    };
    #[cfg(not(feature = "parallel"))]
    let cliques: u128 = {
        let mut b = make_bufs();
        (0..n).map(|v| per_vertex(v, &mut b)).sum()
    };
    BigUint::from(cliques) * factorial_big(j)
}

/// `j! · e_j(|V_1|, …, |V_r|)`: labeled `K_j` copies in a complete
/// multipartite graph with the given part sizes.
pub fn count_labeled_cliques_multipartite(sizes: &[usize], j: usize) -> BigUint {
    let mut e = vec![BigUint::zero(); j + 1];
    e[0] = BigUint::one();
    for &s in sizes {
        for t in (1..=j).rev() {
            let add = &e[t - 1] * s;
            e[t] += add;
        }
    }
    std::mem::take(&mut e[j]) * factorial_big(j)
}

/// Labeled 4-cycles: `tr(A^4) - 2·Σ deg² + 2·|E|`, with the trace taken as
/// the sum of squared common-neighbour counts over ordered pairs.
pub fn count_labeled_c4(g: &Graph) -> BigUint {
    let n = g.n();
    let deg2: u128 = (0..n).map(|v| (g.degree(v) as u128).pow(2)).sum();
    let off = par_sum(n, |u| {
        let ru = g.row(u);
        (u + 1..n)
            .map(|v| {
                let c = and_count(ru, g.row(v)) as u128;
                c * c
            })
            .sum()
    });
    let trace = deg2 + 2 * off;
    BigUint::from(trace + 2 * g.edge_count() as u128 - 2 * deg2)
}

/// Injective maps `V(h) → V(g)` sending edges to edges. Exponential; for
/// cross-checking only.
pub fn count_labeled_copies_bruteforce(g: &Graph, h: &Graph) -> Result<BigUint, AuditError> {
    if h.n() > 8 || g.n() > 64 {
        return Err(AuditError::OracleScale {
            pattern: h.n(),
            host: g.n(),
        });
    }
    fn go(g: &Graph, h: &Graph, image: &mut Vec<usize>, used: u64) -> u64 {
        let i = image.len();
        if i == h.n() {
            return 1;
        }
        let mut total = 0;
        for v in 0..g.n() {
            if used >> v & 1 == 1 {
                continue;
            }
            if (0..i).all(|t| !h.has_edge(t, i) || g.has_edge(image[t], v)) {
                image.push(v);
                total += go(g, h, image, used | 1 << v);
                image.pop();
            }
        }
        total
    }
    Ok(BigUint::from(go(g, h, &mut Vec::with_capacity(h.n()), 0)))
}

/// `count / (p^edges · n^vertices) - 1`, exactly rounded to `f64`.
fn relative_deviation(count: &BigUint, expected: &BigRational) -> f64 {
    if expected.is_zero() {
        return if count.is_zero() { 0.0 } else { f64::INFINITY };
    }
    let c = BigRational::from_integer(BigInt::from(count.clone()));
    ExtReal::from_rational(&(c / expected - BigRational::one()), 64, Round::Nearest).to_f64()
}

fn expected_count(p: &DensityParam, n: usize, vertices: usize, edges: u64) -> BigRational {
    p.pow(edges) * BigRational::from_integer(BigInt::from(n).pow(vertices as u32))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Backtracking,
    Structured,
    Trace,
}

/// One subgraph-count row of the audit.
#[derive(Clone, Debug, Serialize)]
pub struct CountRow {
    pub subgraph: String,
    pub vertices: usize,
    pub edges: u64,
    #[serde(serialize_with = "as_string")]
    pub labeled_count: BigUint,
    pub expected: String,
    pub rel_dev: f64,
    pub tolerance: f64,
    pub within: bool,
    pub method: CountMethod,
}

impl CountRow {
    fn new(
        subgraph: String,
        vertices: usize,
        edges: u64,
        count: BigUint,
        p: &DensityParam,
        n: usize,
        tolerance: f64,
        method: CountMethod,
    ) -> Self {
        let expected = expected_count(p, n, vertices, edges);
        let rel_dev = relative_deviation(&count, &expected);
        Self {
            subgraph,
            vertices,
            edges,
            labeled_count: count,
            expected: ExtReal::from_rational(&expected, 96, Round::Nearest).to_decimal_string(20),
            rel_dev,
            tolerance,
            within: rel_dev.abs() <= tolerance,
            method,
        }
    }
}

/// Labeled edges inside a vertex subset against `p·|S|²`.
#[derive(Clone, Debug, Serialize)]
pub struct P3Sample {
    pub source: String,
    pub subset_size: usize,
    #[serde(serialize_with = "as_string")]
    pub labeled_edges_within: u64,
    pub expected: f64,
    pub rel_dev: f64,
}

fn p3_sample(g: &Graph, subset: &[usize], p: f64, source: String) -> P3Sample {
    let mut mask = vec![0u64; words_for(g.n())];
    for &v in subset {
        mask[v / 64] |= 1 << (v % 64);
    }
    let inside: u64 = subset
        .iter()
        .map(|&v| and_count(g.row(v), &mask))
        .sum();
    let s = subset.len() as f64;
    let expected = p * s * s;
    let rel_dev = if expected == 0.0 { 0.0 } else { inside as f64 / expected - 1.0 };
    P3Sample {
        source,
        subset_size: subset.len(),
        labeled_edges_within: inside,
        expected,
        rel_dev,
    }
}

/// Uniform subsets of size `⌈c·n⌉` (one per trial), then each explicit subset.
pub fn p3_check(
    g: &Graph,
    c: f64,
    p: &DensityParam,
    trials: usize,
    rng: &mut SeededRng,
    explicit: &[(String, Vec<usize>)],
) -> Vec<P3Sample> {
    let n = g.n();
    let size = ((c * n as f64).ceil() as usize).min(n);
    let pf = p.to_f64();
    let mut out = Vec::with_capacity(trials + explicit.len());
    for t in 0..trials {
        let s = index::sample(rng, n, size).into_vec();
        out.push(p3_sample(g, &s, pf, format!("random {}", t + 1)));
    }
    for (name, s) in explicit {
        out.push(p3_sample(g, s, pf, name.clone()));
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountStrategy {
    /// Structured counts when a witness certifies complete multipartite structure.
    #[default]
    Auto,
    Backtracking,
    Structured,
}

impl std::str::FromStr for CountStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Self::Auto),
            "backtracking" => Ok(Self::Backtracking),
            "structured" => Ok(Self::Structured),
            _ => Err(format!("unknown count strategy {s:?}")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditConfig {
    pub k_max: usize,
    /// Clique rows pass when `|rel_dev| ≤ max(floor, scale·j²/n)`.
    pub clique_tol_floor: f64,
    pub clique_tol_scale: f64,
    pub include_c4: bool,
    pub p3_c: f64,
    pub p3_trials: usize,
    pub p3_tolerance: f64,
    pub p3_fail_threshold: f64,
    pub seed: u64,
    pub stream: u64,
    pub strategy: CountStrategy,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            k_max: 4,
            clique_tol_floor: 0.02,
            clique_tol_scale: 3.0,
            include_c4: true,
            p3_c: 0.5,
            p3_trials: 20,
            p3_tolerance: 0.05,
            p3_fail_threshold: -0.5,
            seed: 0,
            stream: 0,
            strategy: CountStrategy::Auto,
        }
    }
}

impl AuditConfig {
    pub fn clique_tolerance(&self, j: usize, n: usize) -> f64 {
        let scaled = if n == 0 {
            f64::INFINITY
        } else {
            self.clique_tol_scale * (j * j) as f64 / n as f64
        };
        self.clique_tol_floor.max(scaled)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConsistentWithQuasirandom,
    CliqueConsistentButP3Fail,
    Inconsistent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ConsistentWithQuasirandom => "consistent_with_quasirandom",
            Verdict::CliqueConsistentButP3Fail => "clique_consistent_but_p3_fail",
            Verdict::Inconsistent => "inconsistent",
        })
    }
}

/// The largest non-dust witness part, checked to be independent.
#[derive(Clone, Debug, Serialize)]
pub struct IndependentSetRow {
    pub part_index: usize,
    pub size: usize,
    pub fraction: f64,
    pub independent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub label: String,
    pub p: String,
    pub n: usize,
    pub edges: usize,
    pub clique_rows: Vec<CountRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c4_row: Option<CountRow>,
    pub p3_samples: Vec<P3Sample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independent_set: Option<IndependentSetRow>,
    pub verdict: Verdict,
    pub config: AuditConfig,
}

impl AuditReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per count, P3 sample and independent-set check.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,name,size,count,expected,rel_dev,tolerance,within\n");
        for r in self.clique_rows.iter().chain(&self.c4_row) {
            let kind = if r.subgraph.starts_with('K') { "clique" } else { "cycle" };
            let _ = writeln!(
                s,
                "{kind},{},{},{},{},{},{},{}",
                r.subgraph, r.vertices, r.labeled_count, r.expected, r.rel_dev, r.tolerance, r.within
            );
        }
        for q in &self.p3_samples {
            let _ = writeln!(
                s,
                "p3,{},{},{},{},{},{},{}",
                q.source,
                q.subset_size,
                q.labeled_edges_within,
                q.expected,
                q.rel_dev,
                self.config.p3_tolerance,
                q.rel_dev.abs() < self.config.p3_tolerance
            );
        }
        if let Some(i) = &self.independent_set {
            let _ = writeln!(
                s,
                "independent_set,part {},{},0,0,{},,{}",
                i.part_index, i.size, i.fraction, i.independent
            );
        }
        s
    }
}

/// Clique rows `K_2..K_kmax`, the `C_4` row, P3 samples on random subsets and
/// on the largest witness part, and the resulting verdict.
pub fn quasirandomness_report(
    g: &Graph,
    p: &DensityParam,
    witness: Option<&PartitionWitness>,
    config: &AuditConfig,
) -> Result<AuditReport, AuditError> {
    if config.k_max < 2 {
        return Err(AuditError::KMax(config.k_max));
    }
    if !(config.p3_c > 0.0 && config.p3_c <= 1.0) {
        return Err(AuditError::Config(format!("P3 fraction c = {} outside (0, 1]", config.p3_c)));
    }
    let n = g.n();
    if let Some(w) = witness {
        w.validate(n)?;
    }
    let structured = match config.strategy {
        CountStrategy::Backtracking => None,
        CountStrategy::Auto => witness.filter(|w| w.is_complete_multipartite_of(g)),
        CountStrategy::Structured => match witness {
            Some(w) if w.is_complete_multipartite_of(g) => Some(w),
            _ => return Err(AuditError::NotMultipartite),
        },
    };
    let clique_rows = (2..=config.k_max)
        .map(|j| {
            let (count, method) = match structured {
                Some(w) => (count_labeled_cliques_multipartite(&w.sizes(), j), CountMethod::Structured),
                None => (count_labeled_cliques(g, j), CountMethod::Backtracking),
            };
            let e = (j * (j - 1) / 2) as u64;
            CountRow::new(format!("K_{j}"), j, e, count, p, n, config.clique_tolerance(j, n), method)
        })
        .collect::<Vec<_>>();
    let c4_row = config.include_c4.then(|| {
        CountRow::new(
            "C_4".into(),
            4,
            4,
            count_labeled_c4(g),
            p,
            n,
            config.clique_tolerance(4, n),
            CountMethod::Trace,
        )
    });

    let mut explicit = Vec::new();
    let mut independent_set = None;
    if let Some(w) = witness {
        let best = w
            .parts
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != w.dust_index)
            .fold(None::<(usize, &Vec<usize>)>, |b, (i, part)| match b {
                Some((_, bp)) if bp.len() >= part.len() => b,
                _ => Some((i, part)),
            });
        if let Some((i, part)) = best {
            let sample = p3_sample(g, part, 0.0, String::new());
            independent_set = Some(IndependentSetRow {
                part_index: i,
                size: part.len(),
                fraction: if n == 0 { 0.0 } else { part.len() as f64 / n as f64 },
                independent: sample.labeled_edges_within == 0,
            });
            explicit.push((format!("witness part {i}"), part.clone()));
        }
    }
    let mut rng = SeededRng::new(config.seed, config.stream);
    let p3_samples = if n == 0 {
        Vec::new()
    } else {
        p3_check(g, config.p3_c, p, config.p3_trials, &mut rng, &explicit)
    };

    let cliques_ok = clique_rows.iter().all(|r| r.within);
    let c4_ok = c4_row.as_ref().is_none_or(|r| r.within);
    let p3_fail = p3_samples.iter().any(|s| s.rel_dev < config.p3_fail_threshold);
    let p3_ok = p3_samples.iter().all(|s| s.rel_dev.abs() < config.p3_tolerance);
    let verdict = if cliques_ok && p3_fail {
        Verdict::CliqueConsistentButP3Fail
    } else if cliques_ok && c4_ok && p3_ok {
        Verdict::ConsistentWithQuasirandom
    } else {
        Verdict::Inconsistent
    };
    Ok(AuditReport {
        label: g.label().to_string(),
        p: p.text().to_string(),
        n,
        edges: g.edge_count(),
        clique_rows,
        c4_row,
        p3_samples,
        independent_set,
        verdict,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{clique_plus_isolated, complete_bipartite, gnp};
    use proptest::prelude::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn half() -> DensityParam {
        DensityParam::parse("0.5").unwrap()
    }

    #[test]
    fn clique_examples() {
        assert_eq!(count_labeled_cliques(&Graph::complete(3), 3), big(6));
        assert_eq!(count_labeled_cliques(&complete_bipartite(4).unwrap(), 2), big(8));
        assert_eq!(count_labeled_cliques(&clique_plus_isolated(10, &half()), 3), big(60));
        assert_eq!(count_labeled_cliques(&Graph::complete(70), 4), big(70 * 69 * 68 * 67));
        assert_eq!(count_labeled_cliques(&Graph::complete(3), 4), big(0));
    }

    #[test]
    fn multipartite_examples() {
        assert_eq!(count_labeled_cliques_multipartite(&[85, 15], 2), big(2550));
        assert_eq!(count_labeled_cliques_multipartite(&[2, 2], 3), big(0));
        assert_eq!(count_labeled_cliques_multipartite(&[3, 2, 1], 3), big(36));
    }

    #[test]
    fn c4_examples() {
        assert_eq!(count_labeled_c4(&Graph::cycle(4)), big(8));
        assert_eq!(count_labeled_c4(&Graph::complete(4)), big(24));
        assert_eq!(count_labeled_c4(&Graph::complete(3)), big(0));
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(count_labeled_copies_bruteforce(&Graph::complete(3), &Graph::complete(2)).unwrap(), big(6));
        assert_eq!(count_labeled_copies_bruteforce(&Graph::cycle(4), &Graph::path(3)).unwrap(), big(8));
        let g = clique_plus_isolated(12, &half());
        assert_eq!(count_labeled_copies_bruteforce(&g, &Graph::cycle(5)).unwrap(), big(720));
        assert!(count_labeled_copies_bruteforce(&Graph::empty(65, ""), &Graph::complete(2)).is_err());
        assert!(count_labeled_copies_bruteforce(&Graph::empty(10, ""), &Graph::complete(9)).is_err());
    }

    #[test]
    fn p3_on_isolated_set() {
        let g = clique_plus_isolated(1000, &half());
        let s = p3_check(&g, 0.5, &half(), 0, &mut SeededRng::new(0, 0), &[("isolated".into(), (500..1000).collect())]);
        assert_eq!(s[0].labeled_edges_within, 0);
        assert_eq!(s[0].expected, 125_000.0);
        assert_eq!(s[0].rel_dev, -1.0);
    }

    #[test]
    fn csv_has_a_row_per_item() {
        let g = gnp(60, 0.5, &mut SeededRng::new(3, 0)).unwrap();
        let cfg = AuditConfig {
            k_max: 3,
            p3_trials: 2,
            ..AuditConfig::default()
        };
        let r = quasirandomness_report(&g, &half(), None, &cfg).unwrap();
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 1 + 2 + 1 + 2);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert!(json["clique_rows"][0]["labeled_count"].is_string());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n, any::<u64>(), 0.05f64..0.95).prop_map(|(n, seed, p)| gnp(n, p, &mut SeededRng::new(seed, 0)).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn backtracking_matches_oracle(g in arb_graph(14)) {
            for j in 2..=4 {
                prop_assert_eq!(count_labeled_cliques(&g, j), count_labeled_copies_bruteforce(&g, &Graph::complete(j)).unwrap());
            }
            prop_assert_eq!(count_labeled_c4(&g), count_labeled_copies_bruteforce(&g, &Graph::cycle(4)).unwrap());
        }

        #[test]
        fn counts_are_label_invariant(g in arb_graph(80), seed in any::<u64>()) {
            let mut perm: Vec<usize> = (0..g.n()).collect();
            rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut SeededRng::new(seed, 1));
            let h = g.relabel(&perm);
            for j in 3..=5 {
                prop_assert_eq!(count_labeled_cliques(&g, j), count_labeled_cliques(&h, j));
            }
            prop_assert_eq!(count_labeled_c4(&g), count_labeled_c4(&h));
        }

        #[test]
        fn adding_an_edge_never_lowers_clique_counts(g in arb_graph(40), a in 0usize..40, b in 0usize..40) {
            let n = g.n();
            let (a, b) = (a % n, b % n);
            prop_assume!(a != b && !g.has_edge(a, b));
            let mut h = g.clone();
            h.add_edge(a, b);
            for j in 2..=5 {
                prop_assert!(count_labeled_cliques(&h, j) >= count_labeled_cliques(&g, j));
            }
        }
    }
}
