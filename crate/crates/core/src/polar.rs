//! Polar encoding and SC/SCL decoding under dynamic frozen constraints.
//!
//! The polar transform is `F^{⊗m}` in natural bit order with
//! `F = [[1,0],[1,1]]`, which is its own inverse over GF(2).

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Blocklength `n = 2^m` polar code skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarSpec {
    m: usize,
    generator: BitMatrix,
}

impl PolarSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m > 16 {
            return Err(Error::Capacity(format!("log-blocklength {m} too large")));
        }
        let n = 1usize << m;
        let mut generator = BitMatrix::zeros(n, n);
        // F^{⊗m}[i][j] = 1 exactly when the bits of j are a subset of the bits of i.
        for i in 0..n {
            for j in 0..n {
                if i & j == j {
                    generator.set(i, j, true);
                }
            }
        }
        Ok(PolarSpec { m, generator })
    }

    /// Spec for blocklength `n`, which must be a power of two.
    pub fn for_length(n: usize) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::Shape(format!("blocklength {n} is not a power of two")));
        }
        Self::new(n.trailing_zeros() as usize)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        1 << self.m
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// `u * F^{⊗m}` via the in-place butterfly.
    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.n() {
            return Err(Error::Shape(format!("input length {} != n = {}", u.len(), self.n())));
        }
        let mut c = u.to_vec();
        butterfly(&mut c);
        Ok(c)
    }
}

/// In-place `x <- x * F^{⊗m}` for `x.len() == 2^m`.
pub(crate) fn butterfly(x: &mut [u8]) {
    let n = x.len();
    let mut half = 1;
    while half < n {
        for block in (0..n).step_by(2 * half) {
            for i in block..block + half {
                x[i] ^= x[i + half];
            }
        }
        half *= 2;
    }
}

/// Which synthetic channels carry information and how the others are tied to them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicFrozenSpec {
    n: usize,
    pivots: Vec<usize>,
    /// Per index: `None` for a pivot, otherwise the pivot *positions* (not ranks)
    /// whose XOR fixes the bit. Empty means statically frozen to zero.
    constraints: Vec<Option<Vec<usize>>>,
}

impl DynamicFrozenSpec {
    /// Builds from pivot indices and, for each frozen index, the ranks of the
    /// pivots it depends on.
    pub fn new(n: usize, pivots: Vec<usize>, frozen: Vec<(usize, Vec<usize>)>) -> Result<Self> {
        if pivots.windows(2).any(|w| w[0] >= w[1]) || pivots.last().is_some_and(|&p| p >= n) {
            return Err(Error::Validation(format!("pivots {pivots:?} not increasing in 0..{n}")));
        }
        let mut constraints: Vec<Option<Vec<usize>>> = vec![Some(Vec::new()); n];
        for &p in &pivots {
            constraints[p] = None;
        }
        for (j, ranks) in frozen {
            if j >= n || constraints[j].is_none() {
                return Err(Error::Validation(format!("frozen index {j} is a pivot or out of range")));
            }
            let mut positions = Vec::with_capacity(ranks.len());
            for r in ranks {
                let p = *pivots
                    .get(r)
                    .ok_or_else(|| Error::Validation(format!("constraint of {j} names rank {r}")))?;
                if p >= j {
                    return Err(Error::Validation(format!(
                        "constraint of index {j} depends on later pivot {p}"
                    )));
                }
                positions.push(p);
            }
            constraints[j] = Some(positions);
        }
        Ok(DynamicFrozenSpec { n, pivots, constraints })
    }

    /// Classical polar code: information set given, everything else frozen to zero.
    pub fn static_frozen(n: usize, info: Vec<usize>) -> Result<Self> {
        Self::new(n, info, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, j: usize) -> bool {
        self.constraints[j].is_none()
    }

    /// Pivot positions whose XOR defines frozen bit `j`; `None` for pivots.
    pub fn constraint(&self, j: usize) -> Option<&[usize]> {
        self.constraints[j].as_deref()
    }

    /// Frozen indices with at least one dependency.
    pub fn dynamic_count(&self) -> usize {
        self.constraints.iter().filter(|c| c.as_ref().is_some_and(|v| !v.is_empty())).count()
    }

    /// Value forced at frozen index `j` given the decisions made so far.
    #[inline]
    fn frozen_value(&self, j: usize, u: &[u8]) -> u8 {
        self.constraints[j].as_ref().map_or(0, |deps| deps.iter().fold(0, |acc, &p| acc ^ u[p]))
    }

    /// Fills frozen positions of `u` from its pivot entries.
    pub fn expand(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k() {
            return Err(Error::Shape(format!("{} information bits for k = {}", info.len(), self.k())));
        }
        let mut u = vec![0u8; self.n];
        for (&p, &b) in self.pivots.iter().zip(info) {
            u[p] = b & 1;
        }
        for j in 0..self.n {
            if !self.is_pivot(j) {
                u[j] = self.frozen_value(j, &u);
            }
        }
        Ok(u)
    }

    /// Whether every frozen position of `u` matches its constraint.
    pub fn satisfied_by(&self, u: &[u8]) -> bool {
        u.len() == self.n && (0..self.n).all(|j| self.is_pivot(j) || u[j] == self.frozen_value(j, u))
    }
}

/// Check-node rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CheckRule {
    /// `2 atanh(tanh(a/2) tanh(b/2))`.
    #[default]
    Exact,
    MinSum,
}

/// Path-metric update rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MetricRule {
    /// `ln(1 + exp(-(1-2u) L))`.
    #[default]
    Exact,
    /// `|L|` on a hard-decision mismatch, zero otherwise.
    Approx,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecoderOptions {
    pub check: CheckRule,
    pub metric: MetricRule,
}

/// One decoding hypothesis.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodePath {
    pub u_hat: Vec<u8>,
    pub metric: f64,
}

#[inline]
fn softplus(x: f64) -> f64 {
    // ln(1 + e^x) without overflow
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Exact box-plus in the Jacobian form, identical to the tanh rule but free
/// of the `atanh(1)` overflow at large magnitudes.
#[inline]
fn check_exact(a: f64, b: f64) -> f64 {
    let (ma, mb) = (a.abs(), b.abs());
    let mag = ma.min(mb) + (-(ma + mb)).exp().ln_1p() - (-(ma - mb).abs()).exp().ln_1p();
    if (a < 0.0) != (b < 0.0) { -mag } else { mag }
}

#[inline]
fn check_min_sum(a: f64, b: f64) -> f64 {
    let mag = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) { -mag } else { mag }
}

#[inline]
fn variable(a: f64, b: f64, left: u8) -> f64 {
    if left == 0 { b + a } else { b - a }
}

#[inline]
fn penalty(rule: MetricRule, llr: f64, bit: u8) -> f64 {
    let signed = if bit == 0 { llr } else { -llr };
    match rule {
        MetricRule::Exact => softplus(-signed),
        MetricRule::Approx => {
            if signed < 0.0 {
                llr.abs()
            } else {
                0.0
            }
        }
    }
}

/// Per-path successive-cancellation state.
///
/// `llr[d]` is the LLR vector of the active node at depth `d` (`llr[0]` is the
/// channel), and `left[d]` holds the re-encoded bits of the most recently
/// finished left child at depth `d`.
#[derive(Clone)]
struct PathState {
    llr: Vec<Vec<f64>>,
    left: Vec<Vec<u8>>,
    u: Vec<u8>,
    metric: f64,
}

impl PathState {
    fn new(channel: &[f64], m: usize) -> Self {
        let n = channel.len();
        let mut llr: Vec<Vec<f64>> = (0..=m).map(|d| vec![0.0; n >> d]).collect();
        llr[0].copy_from_slice(channel);
        let left = (0..=m).map(|d| vec![0; n >> d]).collect();
        PathState { llr, left, u: Vec::with_capacity(n), metric: 0.0 }
    }

    /// Computes the leaf LLR of bit `j = self.u.len()`.
    fn leaf_llr(&mut self, m: usize, check: CheckRule) -> f64 {
        let j = self.u.len();
        let start = if j == 0 { 1 } else { m - j.trailing_zeros() as usize };
        for d in start..=m {
            let half = self.llr[d].len();
            let (upper, lower) = self.llr.split_at_mut(d);
            let parent = &upper[d - 1];
            let child = &mut lower[0];
            let right_child = (j >> (m - d)) & 1 == 1;
            if right_child {
                let left = &self.left[d];
                for i in 0..half {
                    child[i] = variable(parent[i], parent[i + half], left[i]);
                }
            } else {
                match check {
                    CheckRule::Exact => {
                        for i in 0..half {
                            child[i] = check_exact(parent[i], parent[i + half]);
                        }
                    }
                    CheckRule::MinSum => {
                        for i in 0..half {
                            child[i] = check_min_sum(parent[i], parent[i + half]);
                        }
                    }
                }
            }
        }
        self.llr[m][0]
    }

    /// Records `bit` for the current leaf and propagates partial sums upward.
    fn commit(&mut self, m: usize, bit: u8) {
        let j = self.u.len();
        self.u.push(bit);
        let mut d = m;
        let mut cur = vec![bit];
        while d > 0 && (j >> (m - d)) & 1 == 1 {
            let left = &self.left[d];
            let mut parent = Vec::with_capacity(2 * cur.len());
            parent.extend(left.iter().zip(&cur).map(|(a, b)| a ^ b));
            parent.extend_from_slice(&cur);
            cur = parent;
            d -= 1;
        }
        if d > 0 {
            self.left[d].copy_from_slice(&cur);
        }
    }
}

fn check_inputs(spec: &PolarSpec, df: &DynamicFrozenSpec, llr: &[f64]) -> Result<()> {
    if llr.len() != spec.n() || df.n() != spec.n() {
        return Err(Error::Shape(format!(
            "llr length {}, frozen spec n = {}, polar n = {}",
            llr.len(),
            df.n(),
            spec.n()
        )));
    }
    if let Some(i) = llr.iter().position(|x| !x.is_finite()) {
        return Err(Error::Input(format!("non-finite LLR {} at position {i}", llr[i])));
    }
    Ok(())
}

/// Successive-cancellation decoding with exact rules.
pub fn sc_decode(spec: &PolarSpec, df: &DynamicFrozenSpec, llr: &[f64]) -> Result<DecodePath> {
    sc_decode_with(spec, df, llr, DecoderOptions::default())
}

pub fn sc_decode_with(
    spec: &PolarSpec,
    df: &DynamicFrozenSpec,
    llr: &[f64],
    opts: DecoderOptions,
) -> Result<DecodePath> {
    check_inputs(spec, df, llr)?;
    let m = spec.m();
    let mut path = PathState::new(llr, m);
    for j in 0..spec.n() {
        let l = path.leaf_llr(m, opts.check);
        let bit = if df.is_pivot(j) { (l < 0.0) as u8 } else { df.frozen_value(j, &path.u) };
        path.metric += penalty(opts.metric, l, bit);
        path.commit(m, bit);
    }
    Ok(DecodePath { u_hat: path.u, metric: path.metric })
}

/// Successive-cancellation list decoding with exact rules.
pub fn scl_decode(
    spec: &PolarSpec,
    df: &DynamicFrozenSpec,
    llr: &[f64],
    list_size: usize,
) -> Result<Vec<DecodePath>> {
    scl_decode_with(spec, df, llr, list_size, DecoderOptions::default())
}

/// List decoding. Returns at most `list_size` paths sorted by ascending metric;
/// ties keep the earlier path (and the 0-hypothesis before the 1-hypothesis).
pub fn scl_decode_with(
    spec: &PolarSpec,
    df: &DynamicFrozenSpec,
    llr: &[f64],
    list_size: usize,
    opts: DecoderOptions,
) -> Result<Vec<DecodePath>> {
    if list_size == 0 {
        return Err(Error::Validation("list size must be at least 1".into()));
    }
    check_inputs(spec, df, llr)?;
    let m = spec.m();
    let mut paths = vec![PathState::new(llr, m)];
    for j in 0..spec.n() {
        let leaf: Vec<f64> = paths.iter_mut().map(|p| p.leaf_llr(m, opts.check)).collect();
        if !df.is_pivot(j) {
            for (p, &l) in paths.iter_mut().zip(&leaf) {
                let bit = df.frozen_value(j, &p.u);
                p.metric += penalty(opts.metric, l, bit);
                p.commit(m, bit);
            }
            continue;
        }
        // (path index, bit, metric) in path-major order, then a stable sort.
        let mut forks: Vec<(usize, u8, f64)> = Vec::with_capacity(2 * paths.len());
        for (i, (p, &l)) in paths.iter().zip(&leaf).enumerate() {
            forks.push((i, 0, p.metric + penalty(opts.metric, l, 0)));
            forks.push((i, 1, p.metric + penalty(opts.metric, l, 1)));
        }
        forks.sort_by(|a, b| a.2.total_cmp(&b.2));
        forks.truncate(list_size);
        // Keep survivor order by parent index so ties resolve identically next round.
        forks.sort_by_key(|&(i, bit, _)| (i, bit));
        let mut remaining = vec![0u8; paths.len()];
        for f in &forks {
            remaining[f.0] += 1;
        }
        let mut parents: Vec<Option<PathState>> = paths.into_iter().map(Some).collect();
        let mut next = Vec::with_capacity(forks.len());
        for &(i, bit, metric) in &forks {
            remaining[i] -= 1;
            let mut child = if remaining[i] == 0 {
                parents[i].take().expect("parent consumed once")
            } else {
                parents[i].clone().expect("parent alive")
            };
            child.metric = metric;
            child.commit(m, bit);
            next.push(child);
        }
        paths = next;
    }
    let mut out: Vec<DecodePath> =
        paths.into_iter().map(|p| DecodePath { u_hat: p.u, metric: p.metric }).collect();
    out.sort_by(|a, b| a.metric.total_cmp(&b.metric));
    Ok(out)
}
