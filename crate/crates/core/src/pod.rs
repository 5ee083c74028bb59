//! Polar orbit decoding.
//!
//! The received LLRs are permuted by `(P·h_i)⁻¹` for each branch, every copy
//! goes through the same dynamic-frozen polar decoder, candidates are lifted
//! back to codewords of the original code, and a combiner picks one. The
//! message comes out through the winning branch's elimination matrix.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::{pad_llr, CodeSpec};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::permgroup::{Bsgs, Permutation};
use crate::polar::{
    sc_decode_with, scl_decode_with, DecodePath, DecoderOptions, DynamicFrozenSpec, PolarSpec,
};
use crate::transform::{polar_transform, TransformResult};

/// Decoder run on each branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchDecoder {
    Sc,
    Scl(usize),
}

impl BranchDecoder {
    pub fn list_size(self) -> usize {
        match self {
            BranchDecoder::Sc => 1,
            BranchDecoder::Scl(l) => l,
        }
    }

    /// Candidate paths, best first.
    pub fn run(
        self,
        spec: &PolarSpec,
        df: &DynamicFrozenSpec,
        llr: &[f64],
        opts: DecoderOptions,
    ) -> Result<Vec<DecodePath>> {
        match self {
            BranchDecoder::Sc => Ok(vec![sc_decode_with(spec, df, llr, opts)?]),
            BranchDecoder::Scl(l) => scl_decode_with(spec, df, llr, l, opts),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Combiner {
    /// Lowest path metric over all branches.
    BestMetric,
    /// Highest channel correlation among candidates passing the parity checks.
    #[default]
    MlAmongValid,
}

/// How automorphisms are drawn from the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    /// First `M` elements of the BSGS element order.
    Enumerate,
    /// Identity plus `M - 1` distinct uniform samples.
    Sample,
}

/// One decoding trajectory: permutation `P·h` and its elimination matrix.
#[derive(Clone, Debug)]
pub struct PodBranch {
    pub perm: Permutation,
    pub e: BitMatrix,
    transform: TransformResult,
}

impl PodBranch {
    pub fn transform(&self) -> &TransformResult {
        &self.transform
    }
}

#[derive(Clone, Debug)]
pub struct PodConfig {
    pub code: CodeSpec,
    /// `code` zero-padded to the polar length; equal to `code` when `n = 2^m`.
    pub embedded: CodeSpec,
    pub spec: PolarSpec,
    pub df: DynamicFrozenSpec,
    pub branches: Vec<PodBranch>,
    pub decoder: BranchDecoder,
    pub options: DecoderOptions,
    pub combiner: Combiner,
    /// Decode branches on the rayon pool instead of sequentially.
    pub parallel_branches: bool,
}

/// A decoded path lifted to a codeword of the original code.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub branch: usize,
    pub rank: usize,
    pub u_hat: Vec<u8>,
    pub metric: f64,
    pub codeword: Vec<u8>,
}

/// Per-decode record.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// Best path metric of each branch.
    pub branch_metrics: Vec<f64>,
    /// Whether each branch's best candidate passes the parity checks.
    pub branch_valid: Vec<bool>,
    pub winner: usize,
    /// The parity-check combiner found nothing valid and fell back to metrics.
    pub fallback: bool,
    /// Distinct codewords among all candidates.
    pub distinct: usize,
}

/// Builds the orbit ensemble: `M` distinct branches `P·h_i`, branch 0 with `h = id`.
pub fn build_pod(
    code: &CodeSpec,
    base: &Permutation,
    group: &Bsgs,
    m_branches: usize,
    selection: Selection,
    seed: u64,
) -> Result<PodConfig> {
    if m_branches == 0 {
        return Err(Error::Validation("at least one branch is required".into()));
    }
    if group.order_u128().is_some_and(|o| (m_branches as u128) > o) {
        return Err(Error::Capacity(format!(
            "{m_branches} branches requested from a group of order {}",
            group.order()
        )));
    }
    if (base.len() != code.n && base.len() != code.polar_length()) || group.degree() != code.n {
        return Err(Error::Shape(format!(
            "code length {}, base permutation on {} points, group on {}",
            code.n,
            base.len(),
            group.degree()
        )));
    }
    let embedded = code.zero_padded()?;
    let spec = PolarSpec::for_length(embedded.n)?;
    let base_t = polar_transform(&embedded.g, &extend_perm(base, embedded.n)?, &spec)?;
    let automorphisms = select_automorphisms(group, m_branches, selection, seed);
    let branches = automorphisms
        .iter()
        .map(|h| {
            let t = base_t.branch_dress(&extend_perm(h, embedded.n)?)?;
            Ok(PodBranch { perm: t.perm.clone(), e: t.e_p.clone(), transform: t })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PodConfig {
        code: code.clone(),
        embedded,
        spec,
        df: base_t.df.clone(),
        branches,
        decoder: BranchDecoder::Sc,
        options: DecoderOptions::default(),
        combiner: Combiner::default(),
        parallel_branches: false,
    })
}

/// Extends `p` to `len` points, fixing the extra ones.
pub fn extend_perm(p: &Permutation, len: usize) -> Result<Permutation> {
    if p.len() == len {
        return Ok(p.clone());
    }
    Permutation::from_images(p.images().iter().copied().chain(p.len()..len).collect())
}

fn select_automorphisms(group: &Bsgs, m: usize, selection: Selection, seed: u64) -> Vec<Permutation> {
    match selection {
        Selection::Enumerate => group.elements().take(m).collect(),
        Selection::Sample => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let id = Permutation::identity(group.degree());
            let mut seen = HashSet::from([id.clone()]);
            let mut out = vec![id];
            while out.len() < m {
                let h = group.sample_uniform(&mut rng);
                if seen.insert(h.clone()) {
                    out.push(h);
                }
            }
            out
        }
    }
}

impl PodConfig {
    pub fn with_decoder(mut self, decoder: BranchDecoder) -> Self {
        self.decoder = decoder;
        self
    }

    pub fn with_combiner(mut self, combiner: Combiner) -> Self {
        self.combiner = combiner;
        self
    }

    pub fn with_options(mut self, options: DecoderOptions) -> Self {
        self.options = options;
        self
    }

    pub fn m(&self) -> usize {
        self.branches.len()
    }

    /// Keeps only the first `m` branches.
    pub fn truncated(&self, m: usize) -> Result<PodConfig> {
        if m == 0 || m > self.branches.len() {
            return Err(Error::Capacity(format!("cannot keep {m} of {} branches", self.branches.len())));
        }
        let mut out = self.clone();
        out.branches.truncate(m);
        Ok(out)
    }

    fn decode_branch(&self, i: usize, llr: &[f64]) -> Result<Vec<Candidate>> {
        let branch = &self.branches[i];
        let local = branch.perm.inverse().apply(&pad_llr(llr, self.spec.n()))?;
        let paths = self.decoder.run(&self.spec, &self.df, &local, self.options)?;
        paths
            .into_iter()
            .enumerate()
            .map(|(rank, p)| {
                let mut codeword = branch.transform.lift(&p.u_hat)?;
                codeword.truncate(self.code.n);
                Ok(Candidate { branch: i, rank, u_hat: p.u_hat, metric: p.metric, codeword })
            })
            .collect()
    }

    /// Candidate lists per branch, in branch order.
    pub fn candidates(&self, llr: &[f64]) -> Result<Vec<Vec<Candidate>>> {
        if llr.len() != self.code.n {
            return Err(Error::Shape(format!("llr length {} != n = {}", llr.len(), self.code.n)));
        }
        if self.parallel_branches {
            (0..self.m()).into_par_iter().map(|i| self.decode_branch(i, llr)).collect()
        } else {
            (0..self.m()).map(|i| self.decode_branch(i, llr)).collect()
        }
    }

    /// Decodes one received block; returns the message estimate.
    pub fn decode(&self, llr: &[f64]) -> Result<(Vec<u8>, Diagnostics)> {
        let per_branch = self.candidates(llr)?;
        let branch_metrics = per_branch.iter().map(|c| c[0].metric).collect();
        let branch_valid = per_branch.iter().map(|c| self.code.is_codeword(&c[0].codeword)).collect();
        let total: Vec<Candidate> = per_branch.into_iter().flatten().collect();
        let distinct = dedup(total);
        let (winner, fallback) = combine(&distinct, llr, &self.code.h, self.combiner)?;
        let win = &distinct[winner];
        let message = self.branches[win.branch].transform.recover_message(&win.u_hat)?;
        Ok((
            message,
            Diagnostics { branch_metrics, branch_valid, winner: win.branch, fallback, distinct: distinct.len() },
        ))
    }
}

/// Free-function form of [`PodConfig::decode`].
pub fn pod_decode(cfg: &PodConfig, llr: &[f64]) -> Result<(Vec<u8>, Diagnostics)> {
    cfg.decode(llr)
}

/// Drops candidates whose codeword already appeared earlier in the list.
pub fn dedup(candidates: Vec<Candidate>) -> Vec<Candidate> {
    let mut seen = HashSet::new();
    candidates.into_iter().filter(|c| seen.insert(c.codeword.clone())).collect()
}

/// `Σ (1 - 2c_j) · llr_j`.
pub fn correlation(codeword: &[u8], llr: &[f64]) -> f64 {
    codeword.iter().zip(llr).map(|(&c, &l)| if c == 0 { l } else { -l }).sum()
}

/// Picks a candidate index from an index-ordered list. Returns the index and
/// whether the parity-check combiner had to fall back to path metrics.
///
/// Ties go to the earliest candidate, i.e. the lowest branch, then the lowest
/// list rank.
pub fn combine(
    candidates: &[Candidate],
    llr: &[f64],
    h_check: &BitMatrix,
    mode: Combiner,
) -> Result<(usize, bool)> {
    if candidates.is_empty() {
        return Err(Error::Internal("no candidates to combine".into()));
    }
    let best_metric = || {
        let mut best = 0;
        for (i, c) in candidates.iter().enumerate() {
            if c.metric < candidates[best].metric {
                best = i;
            }
        }
        best
    };
    match mode {
        Combiner::BestMetric => Ok((best_metric(), false)),
        Combiner::MlAmongValid => {
            let mut best: Option<(usize, f64)> = None;
            for (i, c) in candidates.iter().enumerate() {
                if !h_check.annihilates(&c.codeword) {
                    continue;
                }
                let score = correlation(&c.codeword, llr);
                if best.is_none_or(|(_, s)| score > s) {
                    best = Some((i, score));
                }
            }
            Ok(match best {
                Some((i, _)) => (i, false),
                None => (best_metric(), true),
            })
        }
    }
}

/// Decoding with a single transform: SC or SCL on `P`, best path wins.
#[derive(Clone, Debug)]
pub struct SingleTransformDecoder {
    n: usize,
    pub transform: TransformResult,
    pub spec: PolarSpec,
    pub decoder: BranchDecoder,
    pub options: DecoderOptions,
}

impl SingleTransformDecoder {
    pub fn new(code: &CodeSpec, base: &Permutation, decoder: BranchDecoder) -> Result<Self> {
        let embedded = code.zero_padded()?;
        let spec = PolarSpec::for_length(embedded.n)?;
        let transform = polar_transform(&embedded.g, &extend_perm(base, embedded.n)?, &spec)?;
        Ok(SingleTransformDecoder { n: code.n, transform, spec, decoder, options: DecoderOptions::default() })
    }

    pub fn decode(&self, llr: &[f64]) -> Result<Vec<u8>> {
        if llr.len() != self.n {
            return Err(Error::Shape(format!("llr length {} != n = {}", llr.len(), self.n)));
        }
        let local = self.transform.perm.inverse().apply(&pad_llr(llr, self.spec.n()))?;
        let paths = self.decoder.run(&self.spec, &self.transform.df, &local, self.options)?;
        self.transform.recover_message(&paths[0].u_hat)
    }
}
