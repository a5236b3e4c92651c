//! Graph constructions: complete multipartite graphs from weight sequences,
//! samples from the step graphon, and the usual control families.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::defexp::DensityParam;
use crate::graph::{words_for, Graph};
use crate::spectrum::{RootSource, WeightSequence};

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("{parts} parts do not fit in {n} vertices without empty parts")]
    TooFewVertices { n: usize, parts: usize },
    #[error("part {index} would be empty at n = {n}")]
    EmptyPart { index: usize, n: usize },
    #[error("weights cannot be apportioned: {0}")]
    BadWeights(String),
    #[error("tail mass {tail:e} exceeds tolerance {tolerance:e}; raise m")]
    TailTooHeavy { tail: f64, tolerance: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("invalid witness: {0}")]
    Witness(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// ChaCha8 keyed by `(seed, stream)`; the same pair gives the same draws on
/// every platform.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, stream, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// Vertex partition attached to a constructed graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionWitness {
    pub parts: Vec<Vec<usize>>,
    #[serde(rename = "weights")]
    pub part_weights: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dust_index: Option<usize>,
}

impl PartitionWitness {
    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    /// Index and size of the largest part (lowest index on ties).
    pub fn largest_part(&self) -> Option<(usize, usize)> {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, p)| (i, p.len()))
            .fold(None, |best, (i, s)| match best {
                Some((_, bs)) if bs >= s => best,
                _ => Some((i, s)),
            })
    }

    /// Parts are disjoint and cover `0..n`.
    pub fn validate(&self, n: usize) -> Result<(), EnsembleError> {
        if !self.part_weights.is_empty() && self.part_weights.len() != self.parts.len() {
            return Err(EnsembleError::Witness(format!(
                "{} parts but {} weights",
                self.parts.len(),
                self.part_weights.len()
            )));
        }
        if let Some(d) = self.dust_index {
            if d >= self.parts.len() {
                return Err(EnsembleError::Witness(format!("dust index {d} out of range")));
            }
        }
        let mut seen = vec![false; n];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                if v >= n {
                    return Err(EnsembleError::Witness(format!("vertex {v} in part {i} out of range for n = {n}")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(EnsembleError::Witness(format!("vertex {v} appears twice")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(EnsembleError::Witness(format!("vertex {v} is in no part")));
        }
        Ok(())
    }

    /// True when `g` is exactly the complete multipartite graph on these parts.
    pub fn is_complete_multipartite_of(&self, g: &Graph) -> bool {
        if self.validate(g.n()).is_err() {
            return false;
        }
        let n = g.n();
        let w = words_for(n);
        for part in &self.parts {
            let mut mask = vec![0u64; w];
            for &v in part {
                mask[v / 64] |= 1 << (v % 64);
            }
            for &v in part {
                let row = g.row(v);
                let inside: u32 = row.iter().zip(&mask).map(|(r, m)| (r & m).count_ones()).sum();
                if inside != 0 || g.degree(v) != n - part.len() {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("witness serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, EnsembleError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Hamilton apportionment of `n` units to exact nonnegative weights: floors
/// first, then one extra unit to each of the largest remainders, lower index
/// first on ties.
pub fn largest_remainder(weights: &[BigRational], n: usize) -> Result<Vec<usize>, EnsembleError> {
    if weights.iter().any(|w| w < &BigRational::zero()) {
        return Err(EnsembleError::BadWeights("negative weight".into()));
    }
    let nn = BigRational::from_integer(BigInt::from(n));
    let mut sizes = Vec::with_capacity(weights.len());
    let mut rems = Vec::with_capacity(weights.len());
    for w in weights {
        let q = w * &nn;
        let fl = q.floor();
        rems.push(q - &fl);
        sizes.push(fl.to_integer().to_usize().unwrap_or(usize::MAX));
    }
    let assigned: usize = sizes.iter().try_fold(0usize, |a, &s| a.checked_add(s)).unwrap_or(usize::MAX);
    let left = n
        .checked_sub(assigned)
        .ok_or_else(|| EnsembleError::BadWeights("weights sum above 1".into()))?;
    if left > weights.len() {
        return Err(EnsembleError::BadWeights(format!(
            "weights sum too far below 1: {left} units left over"
        )));
    }
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| rems[b].cmp(&rems[a]).then(a.cmp(&b)));
    for &i in &order[..left] {
        sizes[i] += 1;
    }
    Ok(sizes)
}

/// Complete multipartite graph from a part assignment.
fn multipartite_from_assignment(part_of: &[usize], parts: usize, label: String) -> Graph {
    let n = part_of.len();
    let w = words_for(n);
    let mut masks = vec![0u64; parts * w];
    for (v, &i) in part_of.iter().enumerate() {
        masks[i * w + v / 64] |= 1 << (v % 64);
    }
    let mut full = vec![u64::MAX; w];
    if !n.is_multiple_of(64) {
        full[w - 1] = (1u64 << (n % 64)) - 1;
    }
    let mut g = Graph::empty(n, label);
    for (v, &i) in part_of.iter().enumerate() {
        let own = &masks[i * w..(i + 1) * w];
        for ((r, f), m) in g.row_mut(v).iter_mut().zip(&full).zip(own) {
            *r = f & !m;
        }
    }
    g
}

fn witness_weights(ws: &WeightSequence, with_dust: bool) -> Vec<String> {
    let mut out: Vec<String> = ws.weights.iter().map(|c| c.to_decimal_string(20)).collect();
    if with_dust {
        out.push(ws.tail_mass.to_decimal_string(20));
    }
    out
}

fn source_tag(s: RootSource) -> String {
    match s {
        RootSource::Truncated(k) => format!("k={k}"),
        RootSource::Entire(m) => format!("m={m}"),
    }
}

/// Complete multipartite graph with parts `V_i` of size about `c_i·n`, laid
/// out as contiguous vertex blocks. A positive tail mass becomes a trailing
/// dust part.
pub fn build_multipartite(
    weights: &WeightSequence,
    n: usize,
    allow_empty: bool,
) -> Result<(Graph, PartitionWitness), EnsembleError> {
    let with_dust = weights.tail_mass.is_positive();
    let mut exact: Vec<BigRational> = weights.weights.iter().map(|c| c.to_rational()).collect();
    if with_dust {
        exact.push(weights.tail_mass.to_rational());
    }
    let real_parts = weights.len();
    if n < real_parts && !allow_empty {
        return Err(EnsembleError::TooFewVertices { n, parts: real_parts });
    }
    let sizes = largest_remainder(&exact, n)?;
    if !allow_empty {
        if let Some(i) = sizes[..real_parts].iter().position(|&s| s == 0) {
            return Err(EnsembleError::EmptyPart { index: i + 1, n });
        }
    }
    let mut part_of = Vec::with_capacity(n);
    let mut parts = Vec::with_capacity(sizes.len());
    for (i, &s) in sizes.iter().enumerate() {
        let start = part_of.len();
        part_of.extend(std::iter::repeat_n(i, s));
        parts.push((start..start + s).collect::<Vec<_>>());
    }
    let label = format!(
        "multipartite(p={},{},n={n})",
        weights.p.text(),
        source_tag(weights.source)
    );
    let g = multipartite_from_assignment(&part_of, sizes.len(), label);
    let witness = PartitionWitness {
        parts,
        part_weights: witness_weights(weights, with_dust),
        dust_index: with_dust.then_some(real_parts),
    };
    Ok((g, witness))
}

/// Samples `n` uniform points of `[0,1]`, cut into consecutive intervals of
/// lengths `c_1, c_2, …` and a final dust interval, and joins points lying in
/// different intervals.
pub fn sample_graphon_graph(
    weights: &WeightSequence,
    n: usize,
    rng: &mut SeededRng,
    tail_tolerance: f64,
) -> Result<(Graph, PartitionWitness), EnsembleError> {
    let tail = weights.tail_mass.to_f64();
    if tail > tail_tolerance {
        return Err(EnsembleError::TailTooHeavy {
            tail,
            tolerance: tail_tolerance,
        });
    }
    let with_dust = weights.tail_mass.is_positive();
    let mut bounds = Vec::with_capacity(weights.len());
    let mut acc = 0f64;
    for c in &weights.weights {
        acc += c.to_f64();
        bounds.push(acc);
    }
    let parts_count = weights.len() + usize::from(with_dust);
    let mut part_of = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.gen();
        let i = bounds.partition_point(|&b| b <= u);
        part_of.push(i.min(parts_count - 1));
    }
    let mut parts = vec![Vec::new(); parts_count];
    for (v, &i) in part_of.iter().enumerate() {
        parts[i].push(v);
    }
    let label = format!(
        "graphon(p={},{},n={n},seed={},stream={})",
        weights.p.text(),
        source_tag(weights.source),
        rng.seed(),
        rng.stream()
    );
    let g = multipartite_from_assignment(&part_of, parts_count, label);
    let witness = PartitionWitness {
        parts,
        part_weights: witness_weights(weights, with_dust),
        dust_index: with_dust.then_some(weights.len()),
    };
    Ok((g, witness))
}

/// Erdős–Rényi `G(n, p)`; pairs are visited in lexicographic order.
pub fn gnp(n: usize, p: f64, rng: &mut SeededRng) -> Result<Graph, EnsembleError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(EnsembleError::InvalidParam(format!("edge probability {p} outside [0, 1]")));
    }
    let mut g = Graph::empty(n, format!("gnp(n={n},p={p},seed={},stream={})", rng.seed(), rng.stream()));
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Paley graph on `Z_q`: `x ~ y` iff `x - y` is a nonzero square.
pub fn paley(q: usize) -> Result<Graph, EnsembleError> {
    if !is_prime(q as u64) {
        return Err(EnsembleError::InvalidParam(format!("{q} is not prime")));
    }
    if q % 4 != 1 {
        return Err(EnsembleError::InvalidParam(format!("{q} is not 1 mod 4")));
    }
    let mut square = vec![false; q];
    for x in 1..q {
        square[x * x % q] = true;
    }
    let mut g = Graph::empty(q, format!("paley({q})"));
    for u in 0..q {
        let row = g.row_mut(u);
        for (d, _) in square.iter().enumerate().filter(|(_, &s)| s) {
            let v = (u + d) % q;
            row[v / 64] |= 1 << (v % 64);
        }
    }
    Ok(g)
}

/// Largest prime `q ≡ 1 (mod 4)` not exceeding `n`.
pub fn paley_prime_at_most(n: usize) -> Option<usize> {
    (5..=n).rev().find(|&q| q % 4 == 1 && is_prime(q as u64))
}

/// `⌊p·n⌋`, computed exactly.
pub fn clique_size(n: usize, p: &DensityParam) -> usize {
    (p.rational() * BigRational::from_integer(BigInt::from(n)))
        .floor()
        .to_integer()
        .to_usize()
        .expect("clique size fits")
}

/// A clique on `⌊p·n⌋` vertices (`0..⌊p·n⌋`) plus isolated vertices.
pub fn clique_plus_isolated(n: usize, p: &DensityParam) -> Graph {
    let s = clique_size(n, p);
    let mut g = Graph::empty(n, format!("clique_plus_isolated(n={n},p={})", p.text()));
    for u in 0..s {
        for v in u + 1..s {
            g.add_edge(u, v);
        }
    }
    g
}

/// `K_{n/2,n/2}` with sides `0..n/2` and `n/2..n`.
pub fn complete_bipartite(n: usize) -> Result<Graph, EnsembleError> {
    if n.is_odd() {
        return Err(EnsembleError::InvalidParam(format!("complete_bipartite needs even n, got {n}")));
    }
    let h = n / 2;
    let part_of: Vec<usize> = (0..n).map(|v| usize::from(v >= h)).collect();
    Ok(multipartite_from_assignment(&part_of, 2, format!("complete_bipartite(n={n})")))
}
