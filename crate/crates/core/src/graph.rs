//! Finite simple undirected graphs stored as adjacency bitsets.

use std::fmt::Write as _;
use std::io::{self, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphIoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Simple graph on vertices `0..n`; row `u` is a bitset of the neighbours of `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    label: String,
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub(crate) fn and_count(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum()
}

impl Graph {
    pub fn empty(n: usize, label: impl Into<String>) -> Self {
        let words = words_for(n);
        Self {
            n,
            words,
            rows: vec![0; n * words],
            label: label.into(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n, format!("K_{n}"));
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// The cycle `0 - 1 - … - (n-1) - 0`; needs `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        let mut g = Graph::empty(n, format!("C_{n}"));
        for u in 0..n {
            g.add_edge(u, (u + 1) % n);
        }
        g
    }

    /// Star with centre `0` and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::empty(leaves + 1, format!("S_{leaves}"));
        for v in 1..=leaves {
            g.add_edge(0, v);
        }
        g
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n, format!("P_{n}"));
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub(crate) fn row_mut(&mut self, u: usize) -> &mut [u64] {
        let w = self.words;
        &mut self.rows[u * w..(u + 1) * w]
    }

    /// Panics on self-loops or out-of-range vertices.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "vertex out of range");
        assert_ne!(u, v, "self-loop");
        let w = self.words;
        self.rows[u * w + v / 64] |= 1 << (v % 64);
        self.rows[v * w + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(u))
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n, self.label.clone());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(self.to_edge_list().as_bytes())
    }

    /// Header `n m`, then one sorted `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::with_capacity(16 + self.edge_count() * 12);
        let _ = writeln!(s, "{} {}", self.n, self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn parse_edge_list(text: &str, label: impl Into<String>) -> Result<Graph, GraphIoError> {
        let err = |line: usize, msg: String| GraphIoError::Parse { line, msg };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(err(hline, format!("expected header `n m`, got {header:?}")));
        }
        let n: usize = nums[0]
            .parse()
            .map_err(|_| err(hline, format!("bad vertex count {:?}", nums[0])))?;
        let m: usize = nums[1]
            .parse()
            .map_err(|_| err(hline, format!("bad edge count {:?}", nums[1])))?;
        let mut g = Graph::empty(n, label);
        let mut seen = 0usize;
        for (line, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(err(line, format!("expected `u v`, got {l:?}")));
            }
            let parse_vertex = |s: &str| -> Result<usize, GraphIoError> {
                let v: usize = s.parse().map_err(|_| err(line, format!("bad vertex {s:?}")))?;
                if v >= n {
                    return Err(err(line, format!("vertex {v} out of range for n = {n}")));
                }
                Ok(v)
            };
            let u = parse_vertex(parts[0])?;
            let v = parse_vertex(parts[1])?;
            if u == v {
                return Err(err(line, format!("self-loop at {u}")));
            }
            if g.has_edge(u, v) {
                return Err(err(line, format!("duplicate edge {u} {v}")));
            }
            g.add_edge(u, v);
            seen += 1;
        }
        if seen != m {
            return Err(err(hline, format!("header promises {m} edges, found {seen}")));
        }
        Ok(g)
    }
}

pub(crate) fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            }
        })
    })
}
