//! Certified real roots of `f_{p,k}` and of the entire function `f_p`, the
//! part-size weights `c_i = -1/a_i` they induce, and checks of the
//! elementary-symmetric identities `σ_j(c) = p^C(j,2) / j!`.
//!
//! Roots are isolated by scanning points placed between consecutive
//! leading-order seeds `-i·p^(1-i)` and bisecting every sign change. Signs
//! come from interval enclosures, so each reported bracket provably contains
//! a root.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::defexp::{
    binom2, enclose_series, estimate_peak, factorial, kurtz_check, precision_floor,
    truncated_coefficients, CoefficientList, DefexpError, DensityParam, KurtzOutcome, TailRule,
};
use crate::ext_real::{ExtReal, Round, MIN_PRECISION};
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Defexp(#[from] DefexpError),
    #[error("{0}")]
    KurtzFailed(KurtzFailure),
    #[error("found {found} of {expected} real roots; root {missing_index} could not be bracketed")]
    RootCount {
        found: usize,
        expected: usize,
        missing_index: usize,
    },
    #[error("enclosures of roots {index} and {} overlap", index + 1)]
    Distinctness { index: usize },
    #[error("sign of the target at x = {x} undetermined at {prec} bits (root {index})")]
    Undetermined { index: usize, x: String, prec: u32 },
    #[error("root {index} is not negative")]
    NonNegativeRoot { index: usize },
    #[error("weights sum to {sum}, exceeding 1 beyond tolerance")]
    MassExcess { sum: String },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("requested {requested} symmetric functions from {available} weights")]
    TooFewWeights { requested: usize, available: usize },
    #[error("tail mass {tail} still above {tolerance} with m = {m}")]
    TailTooHeavy {
        tail: String,
        tolerance: String,
        m: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KurtzFailure {
    pub p: String,
    pub k: usize,
    pub first_failure: usize,
}

impl fmt::Display for KurtzFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Kurtz criterion fails at j = {} for p = {}, k = {}: real-rootedness of the truncated polynomial is not certified",
            self.first_failure, self.p, self.k
        )?;
        if let Ok(p) = DensityParam::parse(&self.p) {
            if p.rational() > &BigRational::new(BigInt::one(), BigInt::from(2)) {
                write!(f, " (for p > 1/2 the truncations have non-real roots)")?;
            }
        }
        Ok(())
    }
}

/// Which function the roots belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSource {
    /// The degree-`k` truncation `f_{p,k}`.
    Truncated(usize),
    /// The first `m` roots of the entire function `f_p`.
    Entire(usize),
}

impl fmt::Display for RootSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSource::Truncated(k) => write!(f, "truncated({k})"),
            RootSource::Entire(m) => write!(f, "entire({m})"),
        }
    }
}

impl FromStr for RootSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("unrecognised root source {s:?}");
        let (kind, rest) = s.split_once('(').ok_or_else(bad)?;
        let n: usize = rest.strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        match kind {
            "truncated" => Ok(RootSource::Truncated(n)),
            "entire" => Ok(RootSource::Entire(n)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RootOptions {
    /// Working precision in bits; defaults depend on the source.
    pub precision_bits: Option<u32>,
    /// Proceed past a failed Kurtz check and return whatever roots are found.
    pub force: bool,
}

/// Real roots `a_1 > a_2 > … > a_m`, all negative, with disjoint enclosures.
#[derive(Clone, Debug)]
pub struct RootList {
    pub p: DensityParam,
    pub source: RootSource,
    pub precision_bits: u32,
    pub roots: Vec<ExtReal>,
    pub enclosures: Vec<Interval>,
    /// False only for forced runs that found fewer roots than the degree.
    pub certified: bool,
    pub kurtz: Option<KurtzOutcome>,
}

/// `-k·p^(1-k)`: leading-order location of the `k`-th largest root of `f_p`.
pub fn asymptotic_seed(k: usize, p: &DensityParam) -> ExtReal {
    assert!(k >= 1, "seed index starts at 1");
    let v = BigRational::from_integer(BigInt::from(k)) / p.pow(k as u64 - 1);
    ExtReal::from_rational(&(-v), 128, Round::Nearest)
}

fn log2_seed(i: usize, p: f64) -> f64 {
    (i as f64).log2() + (i as f64 - 1.0) * (-p.log2())
}

fn ext_from_log2(l: f64) -> ExtReal {
    let fl = l.floor();
    ExtReal::from_f64((l - fl).exp2(), 64).mul_2exp(fl as i64)
}

trait Target: Sync {
    fn enclose(&self, x: &ExtReal, prec: u32) -> Interval;
    fn start_precision(&self, x: &ExtReal, bits: u32) -> u32;
}

struct TruncatedTarget {
    coeffs: CoefficientList,
}

impl Target for TruncatedTarget {
    fn enclose(&self, x: &ExtReal, prec: u32) -> Interval {
        self.coeffs.eval_enclosure(&Interval::point(x.clone()), prec)
    }

    fn start_precision(&self, x: &ExtReal, bits: u32) -> u32 {
        let scale = self.coeffs.log2_abs_sum(x.abs().to_f64()).max(0.0);
        bits + 32 + scale.ceil() as u32
    }
}

struct EntireTarget {
    p: DensityParam,
    min_terms: usize,
    max_terms: usize,
}

impl Target for EntireTarget {
    fn enclose(&self, x: &ExtReal, prec: u32) -> Interval {
        match enclose_series(
            &self.p,
            &Interval::point(x.clone()),
            0,
            prec,
            &TailRule::RelativeToPeak(prec),
            self.min_terms,
            self.max_terms,
        ) {
            Ok(e) => e.value,
            // An unbounded enclosure: the caller sees an undetermined sign.
            Err(_) => Interval::new(ExtReal::from_i64(-1, 64), ExtReal::one(64)),
        }
    }

    fn start_precision(&self, x: &ExtReal, bits: u32) -> u32 {
        let (peak, jstar) = estimate_peak(x.abs().to_f64(), self.p.to_f64(), 0, self.max_terms);
        bits + 32 + peak.ceil().max(0.0) as u32 + ((4 * jstar + 4) as f64).log2().ceil() as u32
    }
}

fn certified_sign<T: Target>(t: &T, x: &ExtReal, bits: u32) -> Option<Ordering> {
    let mut prec = t.start_precision(x, bits);
    for _ in 0..5 {
        if let Some(s) = t.enclose(x, prec).sign() {
            return Some(s);
        }
        prec *= 2;
    }
    None
}

#[cfg(feature = "parallel")]
fn par_map<A: Sync, B: Send>(items: &[A], f: impl Fn(&A) -> B + Sync + Send) -> Vec<B> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<A: Sync, B: Send>(items: &[A], f: impl Fn(&A) -> B + Sync + Send) -> Vec<B> {
    items.iter().map(f).collect()
}

/// Scan points `-2^l` for the given increasing `log2` magnitudes, returning
/// brackets `(outer, inner)` with a certified sign change, innermost first.
fn scan<T: Target>(t: &T, logs: &[f64], bits: u32) -> Result<Vec<(ExtReal, ExtReal, Ordering)>, SpectrumError> {
    let points: Vec<ExtReal> = logs.iter().map(|&l| ext_from_log2(l).neg()).collect();
    let signs = par_map(&points, |x| certified_sign(t, x, bits));
    let mut out = Vec::new();
    for i in 0..points.len().saturating_sub(1) {
        let (a, b) = match (signs[i], signs[i + 1]) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                let bad = if signs[i].is_none() { i } else { i + 1 };
                return Err(SpectrumError::Undetermined {
                    index: out.len() + 1,
                    x: points[bad].to_decimal_string(12),
                    prec: t.start_precision(&points[bad], bits) * 16,
                });
            }
        };
        if a != b && a != Ordering::Equal && b != Ordering::Equal {
            out.push((points[i + 1].clone(), points[i].clone(), b));
        }
    }
    Ok(out)
}

/// Bisects `[lo, hi]` (with `sign(f(lo)) = lo_sign`) down to relative width `2^-(bits/2)`.
fn bisect<T: Target>(
    t: &T,
    mut lo: ExtReal,
    mut hi: ExtReal,
    lo_sign: Ordering,
    bits: u32,
    index: usize,
) -> Result<Interval, SpectrumError> {
    let target = -((bits / 2) as i64);
    loop {
        let width = hi.sub(&lo, bits + 64, Round::Up);
        let scale = lo.abs().min(hi.abs());
        let rel_ok = match (width.ilog2(), scale.ilog2()) {
            (None, _) => true,
            (Some(w), Some(s)) => w < s + target,
            (Some(_), None) => false,
        };
        if rel_ok {
            return Ok(Interval::new(lo, hi));
        }
        let mag = scale.ilog2().unwrap_or(0).max(hi.abs().ilog2().unwrap_or(0));
        let mid_prec = (bits as i64 + 64 + (mag - width.ilog2().unwrap_or(0)).max(0)) as u32;
        let mid = lo.add(&hi, mid_prec, Round::Nearest).mul_2exp(-1);
        match certified_sign(t, &mid, bits) {
            Some(Ordering::Equal) => return Ok(Interval::point(mid)),
            Some(s) if s == lo_sign => lo = mid,
            Some(_) => hi = mid,
            None => {
                return Err(SpectrumError::Undetermined {
                    index,
                    x: mid.to_decimal_string(20),
                    prec: t.start_precision(&mid, bits) * 16,
                })
            }
        }
    }
}

/// Scan magnitudes for windows around seeds `1..=count`, refined by `2^level`.
fn scan_logs(p: f64, count: usize, outer: f64, level: u32) -> Vec<f64> {
    let seeds: Vec<f64> = (1..=count + 1).map(|i| log2_seed(i, p)).collect();
    let mut cuts = vec![seeds[0] + p.log2() - level as f64];
    for i in 0..count - 1 {
        cuts.push((seeds[i] + seeds[i + 1]) / 2.0);
    }
    cuts.push(outer + level as f64);
    let pieces = 1usize << level;
    let mut logs = Vec::with_capacity(cuts.len() * pieces);
    for w in cuts.windows(2) {
        for s in 0..pieces {
            logs.push(w[0] + (w[1] - w[0]) * s as f64 / pieces as f64);
        }
    }
    logs.push(*cuts.last().expect("nonempty"));
    logs
}

fn isolate<T: Target>(
    t: &T,
    p: f64,
    expected: usize,
    outer: f64,
    bits: u32,
) -> Result<Vec<(ExtReal, ExtReal, Ordering)>, SpectrumError> {
    let mut best = Vec::new();
    for level in 0..=6 {
        let brackets = scan(t, &scan_logs(p, expected, outer, level), bits)?;
        if brackets.len() >= expected {
            return Ok(brackets.into_iter().take(expected).collect());
        }
        if brackets.len() > best.len() {
            best = brackets;
        }
    }
    Ok(best)
}

fn refine_all<T: Target>(
    t: &T,
    brackets: Vec<(ExtReal, ExtReal, Ordering)>,
    bits: u32,
) -> Result<Vec<Interval>, SpectrumError> {
    let indexed: Vec<(usize, (ExtReal, ExtReal, Ordering))> = brackets.into_iter().enumerate().collect();
    let refined = par_map(&indexed, |(i, (lo, hi, lo_sign))| {
        bisect(t, lo.clone(), hi.clone(), *lo_sign, bits, i + 1)
    });
    let encl: Vec<Interval> = refined.into_iter().collect::<Result<_, _>>()?;
    for (i, w) in encl.windows(2).enumerate() {
        if w[0].overlaps(&w[1]) {
            return Err(SpectrumError::Distinctness { index: i + 1 });
        }
    }
    Ok(encl)
}

fn finish(
    p: &DensityParam,
    source: RootSource,
    bits: u32,
    encl: Vec<Interval>,
    certified: bool,
    kurtz: Option<KurtzOutcome>,
) -> RootList {
    let roots = encl.iter().map(|e| e.mid(bits)).collect();
    RootList {
        p: p.clone(),
        source,
        precision_bits: bits,
        roots,
        enclosures: encl,
        certified,
        kurtz,
    }
}

/// The `k` real roots of `f_{p,k}`.
///
/// Refuses with [`SpectrumError::KurtzFailed`] unless the Kurtz check passes or
/// `opts.force` is set; a forced run that finds fewer than `k` sign changes
/// returns the partial list with `certified = false`.
pub fn find_roots_truncated(p: &DensityParam, k: usize, opts: &RootOptions) -> Result<RootList, SpectrumError> {
    let coeffs = truncated_coefficients(p, k)?;
    let kurtz = kurtz_check(&coeffs)?;
    if !kurtz.holds && !opts.force {
        return Err(SpectrumError::KurtzFailed(KurtzFailure {
            p: p.text().to_string(),
            k,
            first_failure: kurtz.first_failure.unwrap_or(0),
        }));
    }
    let floor = precision_floor(p, k).max(256);
    let mut bits = opts.precision_bits.map_or(floor, |b| b.max(precision_floor(p, k)));
    let pf = p.to_f64();
    let outer = log2_seed(k, pf) - pf.log2();
    let mut found = Vec::new();
    for _ in 0..2 {
        let target = TruncatedTarget { coeffs: coeffs.clone() };
        found = isolate(&target, pf, k, outer, bits)?;
        if found.len() == k {
            let encl = refine_all(&target, found, bits)?;
            return Ok(finish(p, RootSource::Truncated(k), bits, encl, true, Some(kurtz)));
        }
        bits *= 2;
    }
    if opts.force {
        let target = TruncatedTarget { coeffs };
        let encl = refine_all(&target, found, bits)?;
        return Ok(finish(p, RootSource::Truncated(k), bits, encl, false, Some(kurtz)));
    }
    Err(SpectrumError::RootCount {
        found: found.len(),
        expected: k,
        missing_index: found.len() + 1,
    })
}

/// The `m` largest (least negative) roots of the entire function `f_p`.
pub fn find_roots_entire(p: &DensityParam, m: usize, opts: &RootOptions) -> Result<RootList, SpectrumError> {
    p.require_below_one()?;
    if m == 0 {
        return Err(SpectrumError::RootCount {
            found: 0,
            expected: 0,
            missing_index: 0,
        });
    }
    let mut bits = opts.precision_bits.unwrap_or(128).max(MIN_PRECISION);
    let pf = p.to_f64();
    let outer = (log2_seed(m, pf) + log2_seed(m + 1, pf)) / 2.0;
    let mut found = Vec::new();
    for _ in 0..2 {
        let target = EntireTarget {
            p: p.clone(),
            min_terms: 4 * m,
            max_terms: 200_000,
        };
        found = isolate(&target, pf, m, outer, bits)?;
        if found.len() == m {
            let encl = refine_all(&target, found, bits)?;
            return Ok(finish(p, RootSource::Entire(m), bits, encl, true, None));
        }
        bits *= 2;
    }
    Err(SpectrumError::RootCount {
        found: found.len(),
        expected: m,
        missing_index: found.len() + 1,
    })
}

/// Part-size weights `c_1 ≥ c_2 ≥ … > 0`, plus the unallocated tail mass.
#[derive(Clone, Debug)]
pub struct WeightSequence {
    pub p: DensityParam,
    pub source: RootSource,
    pub precision_bits: u32,
    pub weights: Vec<ExtReal>,
    pub tail_mass: ExtReal,
}

impl WeightSequence {
    /// Validates positivity, weak descent and total mass `Σ c_i + tail = 1`.
    pub fn new(
        p: DensityParam,
        source: RootSource,
        precision_bits: u32,
        weights: Vec<ExtReal>,
        tail_mass: ExtReal,
    ) -> Result<Self, SpectrumError> {
        if weights.is_empty() {
            return Err(SpectrumError::InvalidWeights("no weights".into()));
        }
        if let Some(i) = weights.iter().position(|c| !c.is_positive()) {
            return Err(SpectrumError::InvalidWeights(format!("weight {} is not positive", i + 1)));
        }
        if let Some(i) = weights.windows(2).position(|w| w[0] < w[1]) {
            return Err(SpectrumError::InvalidWeights(format!(
                "weights not descending at position {}",
                i + 2
            )));
        }
        if tail_mass.is_negative() {
            return Err(SpectrumError::InvalidWeights("negative tail mass".into()));
        }
        let total = weights
            .iter()
            .fold(tail_mass.clone(), |acc, c| acc.add(c, precision_bits + 32, Round::Nearest));
        let dev = total.sub(&ExtReal::one(64), precision_bits + 32, Round::Nearest);
        let tol = ExtReal::one(64).mul_2exp(-((precision_bits / 2) as i64));
        if dev.abs() > tol {
            return Err(SpectrumError::InvalidWeights(format!(
                "total mass {} differs from 1",
                total.to_decimal_string(20)
            )));
        }
        Ok(Self {
            p,
            source,
            precision_bits,
            weights,
            tail_mass,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn sum(&self) -> ExtReal {
        let prec = self.precision_bits + 32;
        self.weights
            .iter()
            .fold(ExtReal::zero(prec), |acc, c| acc.add(c, prec, Round::Nearest))
    }
}

/// `c_i = -1/a_i`. For the entire source the tail mass is `1 - Σ c_i`,
/// clamped to zero when it is negative but within `2^-(bits/2)`.
pub fn roots_to_weights(roots: &RootList) -> Result<WeightSequence, SpectrumError> {
    let bits = roots.precision_bits;
    if let Some(i) = roots.roots.iter().position(|a| !a.is_negative()) {
        return Err(SpectrumError::NonNegativeRoot { index: i + 1 });
    }
    let one = ExtReal::one(bits);
    let weights: Vec<ExtReal> = roots
        .roots
        .iter()
        .map(|a| one.div(&a.neg(), bits, Round::Nearest))
        .collect();
    let prec = bits + 32;
    let sum = weights
        .iter()
        .fold(ExtReal::zero(prec), |acc, c| acc.add(c, prec, Round::Nearest));
    let tol = ExtReal::one(64).mul_2exp(-((bits / 2) as i64));
    let tail = match roots.source {
        RootSource::Truncated(_) => ExtReal::zero(bits),
        RootSource::Entire(_) => {
            let t = one.sub(&sum, prec, Round::Nearest);
            if t.is_negative() {
                if t.abs() > tol {
                    return Err(SpectrumError::MassExcess {
                        sum: sum.to_decimal_string(30),
                    });
                }
                ExtReal::zero(bits)
            } else {
                t.with_precision(bits, Round::Nearest)
            }
        }
    };
    WeightSequence::new(roots.p.clone(), roots.source, bits, weights, tail)
}

/// Finds enough roots of `f_p` that the unallocated tail mass drops below `tolerance`.
pub fn weights_for_tail(
    p: &DensityParam,
    tolerance: f64,
    opts: &RootOptions,
) -> Result<(RootList, WeightSequence), SpectrumError> {
    p.require_below_one()?;
    let pf = p.to_f64();
    // c_i is of order p^(i-1)/i; aim well below the tolerance on that proxy.
    let mut m = 1usize;
    loop {
        let proxy: f64 = (m + 1..m + 2000).map(|i| pf.powi(i as i32 - 1) / i as f64).sum();
        if proxy < tolerance / 16.0 || m > 5000 {
            break;
        }
        m += 1;
    }
    let mut last = None;
    for _ in 0..5 {
        let roots = find_roots_entire(p, m, opts)?;
        let weights = roots_to_weights(&roots)?;
        if weights.tail_mass.to_f64() < tolerance {
            return Ok((roots, weights));
        }
        last = Some(weights.tail_mass.to_decimal_string(6));
        m += m / 4 + 1;
    }
    Err(SpectrumError::TailTooHeavy {
        tail: last.unwrap_or_default(),
        tolerance: format!("{tolerance:e}"),
        m,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetricCheck {
    pub j: usize,
    pub sigma: String,
    pub target: String,
    pub rel_dev: f64,
    pub tolerance: f64,
    pub within: bool,
}

/// Elementary symmetric sums `σ_j(c)` for `j = 1..=j_max`, obtained as the
/// coefficients of `Π (1 + c_i t)`, against the targets `p^C(j,2)/j!`.
pub fn verify_elementary_symmetric(ws: &WeightSequence, j_max: usize) -> Result<Vec<SymmetricCheck>, SpectrumError> {
    if j_max > ws.len() {
        return Err(SpectrumError::TooFewWeights {
            requested: j_max,
            available: ws.len(),
        });
    }
    let prec = ws.precision_bits + 32;
    let sigma = elementary_symmetric(&ws.weights, j_max, prec);
    let base_tol = 2f64.powi(-((ws.precision_bits / 4) as i32));
    let tail = ws.tail_mass.to_f64();
    Ok((1..=j_max)
        .map(|j| {
            let target_q = ws.p.pow(binom2(j as u64)) / BigRational::from_integer(factorial(j as u64));
            let target = ExtReal::from_rational(&target_q, prec, Round::Nearest);
            let rel = sigma[j]
                .div(&target, prec, Round::Nearest)
                .sub(&ExtReal::one(prec), prec, Round::Nearest);
            let tolerance = match ws.source {
                RootSource::Truncated(_) => base_tol,
                RootSource::Entire(_) => j as f64 * tail / target.to_f64() + base_tol,
            };
            let rel_dev = rel.to_f64();
            SymmetricCheck {
                j,
                sigma: sigma[j].to_decimal_string(digits_for(ws.precision_bits)),
                target: target.to_decimal_string(digits_for(ws.precision_bits)),
                rel_dev,
                tolerance,
                within: rel_dev.abs() < tolerance,
            }
        })
        .collect())
}

/// `e_0..=e_jmax` of the given values (nearest rounding; all terms positive).
pub fn elementary_symmetric(values: &[ExtReal], j_max: usize, prec: u32) -> Vec<ExtReal> {
    let mut e = vec![ExtReal::zero(prec); j_max + 1];
    e[0] = ExtReal::one(prec);
    for (count, c) in values.iter().enumerate() {
        for t in (1..=j_max.min(count + 1)).rev() {
            let add = e[t - 1].mul(c, prec, Round::Nearest);
            e[t] = e[t].add(&add, prec, Round::Nearest);
        }
    }
    e
}

pub(crate) fn digits_for(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

#[derive(Clone, Debug, Serialize)]
pub struct MaxWeightCheck {
    pub c1: String,
    pub lower_bound: String,
    pub holds: bool,
}

/// `c_1 ≥ 1 - p` up to `2^-(bits/2)`.
pub fn max_weight_bound_check(ws: &WeightSequence) -> MaxWeightCheck {
    let prec = ws.precision_bits + 32;
    let c1 = ws.weights[0].clone();
    let bound = ExtReal::from_rational(&(BigRational::one() - ws.p.rational()), prec, Round::Nearest);
    let tol = ExtReal::one(64).mul_2exp(-((ws.precision_bits / 2) as i64));
    let holds = c1 >= bound.sub(&tol, prec, Round::Down);
    MaxWeightCheck {
        c1: c1.to_decimal_string(20),
        lower_bound: bound.to_decimal_string(20),
        holds,
    }
}

/// Exported root table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootTable {
    pub p: String,
    pub source: String,
    pub precision_bits: u32,
    pub certified: bool,
    pub roots: Vec<String>,
    pub weights: Vec<String>,
    pub tail_mass: String,
}

impl RootTable {
    pub fn new(roots: &RootList, weights: Option<&WeightSequence>) -> Self {
        let d = digits_for(roots.precision_bits);
        Self {
            p: roots.p.text().to_string(),
            source: roots.source.to_string(),
            precision_bits: roots.precision_bits,
            certified: roots.certified,
            roots: roots.roots.iter().map(|a| a.to_decimal_string(d)).collect(),
            weights: weights
                .map(|w| w.weights.iter().map(|c| c.to_decimal_string(d)).collect())
                .unwrap_or_default(),
            tail_mass: weights.map_or_else(|| "0".to_string(), |w| w.tail_mass.to_decimal_string(d)),
        }
    }

    /// Rebuilds the weight sequence recorded in the table.
    pub fn weight_sequence(&self) -> Result<WeightSequence, SpectrumError> {
        let p = DensityParam::parse(&self.p)?;
        let source = RootSource::from_str(&self.source).map_err(SpectrumError::InvalidWeights)?;
        let prec = self.precision_bits.max(MIN_PRECISION);
        let parse = |s: &str| -> Result<ExtReal, SpectrumError> {
            ExtReal::parse_decimal(s, prec, Round::Nearest)
                .map_err(|e| SpectrumError::InvalidWeights(e.to_string()))
        };
        let weights = self.weights.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?;
        let tail = parse(&self.tail_mass)?;
        WeightSequence::new(p, source, prec, weights, tail)
    }
}
