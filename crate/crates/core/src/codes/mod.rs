//! Benchmark block codes and their automorphism generators.
//!
//! Every [`CodeSpec`] is checked on construction: `G · Hᵀ = 0`, `G` has full
//! row rank, and every listed automorphism preserves the row space of `G`.

mod field;

pub use field::GF2mField;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::permgroup::{generators_from_text, Permutation};
use crate::transform::verify_automorphism;

/// A binary linear block code with parity checks and known automorphisms.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    pub name: String,
    pub n: usize,
    pub k: usize,
    /// Minimum distance; exact for the built-in codes, 0 when unknown.
    pub d: usize,
    pub g: BitMatrix,
    pub h: BitMatrix,
    pub aut_generators: Vec<Permutation>,
    /// Default base permutation `P` of the polar transformation, on `n` or
    /// on [`polar_length`](Self::polar_length) points.
    pub base: Permutation,
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 5] = ["rep8-3", "ebch16-7", "ebch64-16", "ebch64-36", "egolay24-12"];

impl CodeSpec {
    /// Assembles and verifies a code. `d = None` computes it by enumeration.
    pub fn new(
        name: impl Into<String>,
        g: BitMatrix,
        h: BitMatrix,
        aut_generators: Vec<Permutation>,
        d: Option<usize>,
    ) -> Result<Self> {
        let name = name.into();
        let (k, n) = (g.rows(), g.cols());
        if g.rank() != k {
            return Err(Error::Validation(format!("{name}: generator is not full rank")));
        }
        if h.cols() != n || !g.matmul(&h.transpose())?.to_rows().iter().flatten().all(|&b| b == 0) {
            return Err(Error::Validation(format!("{name}: G · Hᵀ is not zero")));
        }
        if h.rank() != n - k {
            return Err(Error::Validation(format!("{name}: parity-check matrix rank is not n - k")));
        }
        for (i, a) in aut_generators.iter().enumerate() {
            if a.len() != n || !verify_automorphism(&g, a)? {
                return Err(Error::Validation(format!(
                    "{name}: generator {i} ({a:?}) is not an automorphism"
                )));
            }
        }
        let d = match d {
            Some(d) => d,
            None => minimum_distance(&g)?,
        };
        Ok(CodeSpec { name, n, k, d, g, h, aut_generators, base: Permutation::identity(n) })
    }

    /// Correctable error count of a bounded-distance decoder.
    pub fn t(&self) -> usize {
        self.d.saturating_sub(1) / 2
    }

    /// Loads a generator in matrix text format plus an optional automorphism file.
    pub fn from_text(name: &str, generator: &str, automorphisms: Option<&str>) -> Result<Self> {
        let g = BitMatrix::from_text(generator)?;
        let h = parity_from_generator(&g)?;
        let aut = match automorphisms {
            None => Vec::new(),
            Some(text) => {
                let (n, gens) = generators_from_text(text)?;
                if n != g.cols() {
                    return Err(Error::Shape(format!("automorphisms on {n} points, code length {}", g.cols())));
                }
                gens
            }
        };
        let d = if g.rows() <= 20 { None } else { Some(0) };
        CodeSpec::new(name, g, h, aut, d)
    }

    /// `c · Hᵀ == 0`.
    pub fn is_codeword(&self, c: &[u8]) -> bool {
        self.h.annihilates(c)
    }

    /// Replaces the default base permutation.
    pub fn with_base(mut self, base: Permutation) -> Result<Self> {
        if base.len() != self.n && base.len() != self.polar_length() {
            return Err(Error::Shape(format!("base permutation on {} points, code length {}", base.len(), self.n)));
        }
        self.base = base;
        Ok(self)
    }

    /// Smallest power of two `>= n`.
    pub fn polar_length(&self) -> usize {
        self.n.next_power_of_two()
    }

    /// The code embedded in length [`polar_length`](Self::polar_length) by
    /// appending coordinates that are always zero. Automorphisms fix the new
    /// coordinates. Returns a clone when `n` is already a power of two.
    pub fn zero_padded(&self) -> Result<CodeSpec> {
        let (n, big) = (self.n, self.polar_length());
        if n == big {
            return Ok(self.clone());
        }
        let pad = big - n;
        let mut g = BitMatrix::zeros(self.k, big);
        for r in 0..self.k {
            for c in 0..n {
                g.set(r, c, self.g.get(r, c));
            }
        }
        let mut h = BitMatrix::zeros(self.h.rows() + pad, big);
        for r in 0..self.h.rows() {
            for c in 0..n {
                h.set(r, c, self.h.get(r, c));
            }
        }
        for i in 0..pad {
            h.set(self.h.rows() + i, n + i, true);
        }
        let aut = self
            .aut_generators
            .iter()
            .map(|a| Permutation::from_images(a.images().iter().copied().chain(n..big).collect()))
            .collect::<Result<Vec<_>>>()?;
        let base = if self.base.len() == big {
            self.base.clone()
        } else {
            Permutation::from_images(self.base.images().iter().copied().chain(n..big).collect())?
        };
        CodeSpec::new(format!("{}+pad{pad}", self.name), g, h, aut, Some(self.d))?.with_base(base)
    }
}

/// LLR given to padding coordinates: a bit known to be zero.
pub const PAD_LLR: f64 = 1.0e3;

/// Extends a length-`n` LLR vector to `len` with [`PAD_LLR`].
pub fn pad_llr(llr: &[f64], len: usize) -> Vec<f64> {
    let mut out = llr.to_vec();
    out.resize(len.max(llr.len()), PAD_LLR);
    out
}

/// Built-in code by name.
pub fn builtin(name: &str) -> Result<CodeSpec> {
    match name {
        "rep8-3" => Ok(repetition_block_code()),
        "ebch16-7" => ebch(4, 5),
        "ebch64-16" => ebch(6, 23),
        "ebch64-36" => ebch(6, 11),
        "egolay24-12" => golay24(),
        _ => Err(Error::Validation(format!(
            "unknown code {name:?}; built-ins are {}",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

/// Parity-check matrix from a full-rank generator via its systematic form.
pub fn parity_from_generator(g: &BitMatrix) -> Result<BitMatrix> {
    let red = g.rref_with_transform();
    if red.pivots.len() != g.rows() {
        return Err(Error::Validation("generator is rank deficient".into()));
    }
    let n = g.cols();
    let mut h = BitMatrix::zeros(0, n);
    for j in (0..n).filter(|j| red.pivots.binary_search(j).is_err()) {
        let mut row = vec![0u8; n];
        row[j] = 1;
        for (r, &p) in red.pivots.iter().enumerate() {
            row[p] = red.rref.get(r, j) as u8;
        }
        h.push_row(&row)?;
    }
    Ok(h)
}

/// Appends an overall parity bit to every row.
pub fn extend_code(g: &BitMatrix) -> BitMatrix {
    let mut out = BitMatrix::zeros(g.rows(), g.cols() + 1);
    for r in 0..g.rows() {
        for c in 0..g.cols() {
            if g.get(r, c) {
                out.set(r, c, true);
            }
        }
        out.set(r, g.cols(), g.row_weight(r) % 2 == 1);
    }
    out
}

/// Weight distribution by enumerating all `2^k` codewords in Gray-code order.
pub fn weight_distribution(g: &BitMatrix) -> Result<Vec<u64>> {
    let k = g.rows();
    if k > 24 {
        return Err(Error::Capacity(format!("cannot enumerate 2^{k} codewords")));
    }
    let rows: Vec<Vec<u64>> = (0..k).map(|r| g.row_words(r).to_vec()).collect();
    let mut word = vec![0u64; rows.first().map_or(0, Vec::len)];
    let mut dist = vec![0u64; g.cols() + 1];
    dist[0] = 1;
    for step in 1u64..1 << k {
        let flip = step.trailing_zeros() as usize;
        for (w, &x) in word.iter_mut().zip(&rows[flip]) {
            *w ^= x;
        }
        dist[word.iter().map(|w| w.count_ones() as usize).sum::<usize>()] += 1;
    }
    Ok(dist)
}

pub fn minimum_distance(g: &BitMatrix) -> Result<usize> {
    let dist = weight_distribution(g)?;
    Ok(dist.iter().skip(1).position(|&c| c > 0).map_or(0, |i| i + 1))
}

/// Generator matrix of the cyclic code of length `n` generated by `poly`
/// (`poly[i]` is the coefficient of `x^i`): rows are `x^i · g(x)`.
pub fn cyclic_generator(poly: &[u8], n: usize) -> Result<BitMatrix> {
    let deg = poly.iter().rposition(|&c| c == 1).ok_or_else(|| Error::Validation("zero polynomial".into()))?;
    if deg >= n {
        return Err(Error::Validation(format!("degree {deg} polynomial for length {n}")));
    }
    let k = n - deg;
    let mut g = BitMatrix::zeros(k, n);
    for r in 0..k {
        for (d, &c) in poly[..=deg].iter().enumerate() {
            if c == 1 {
                g.set(r, r + d, true);
            }
        }
    }
    Ok(g)
}

fn poly_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 1 {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= y;
            }
        }
    }
    out
}

/// Remainder of `a` modulo `b` over GF(2).
pub fn poly_rem(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut r = a.to_vec();
    let db = b.iter().rposition(|&c| c == 1).expect("nonzero divisor");
    while let Some(dr) = r.iter().rposition(|&c| c == 1) {
        if dr < db {
            break;
        }
        for (i, &c) in b[..=db].iter().enumerate() {
            r[dr - db + i] ^= c;
        }
    }
    r.truncate(db.max(1));
    r
}

/// Generator polynomial of the narrow-sense primitive BCH code with designed
/// distance `delta`: the lcm of the minimal polynomials of `α, α², …, α^{δ-1}`.
pub fn bch_generator(field: &GF2mField, delta: usize) -> Result<Vec<u8>> {
    if delta < 2 || delta > field.order() {
        return Err(Error::Validation(format!(
            "designed distance {delta} outside 2..={}",
            field.order()
        )));
    }
    let mut covered = vec![false; field.order()];
    let mut g = vec![1u8];
    for i in 1..delta {
        if covered[i] {
            continue;
        }
        for j in field.cyclotomic_coset(i) {
            covered[j] = true;
        }
        g = poly_mul(&g, &field.minimal_polynomial(i));
    }
    Ok(g)
}

/// Coordinate permutations generating AΓL(1, 2^m) on the extended code.
///
/// Position `i < 2^m - 1` stands for `α^i`; position `2^m - 1` stands for `0`.
/// Returns `x ↦ αx`, `x ↦ x + 1`, `x ↦ x²`.
pub fn agl_generators(field: &GF2mField) -> Vec<Permutation> {
    let q = field.size();
    let elem = |pos: usize| if pos == q - 1 { 0 } else { field.exp(pos) };
    let pos = |x: u32| if x == 0 { q - 1 } else { field.log(x) };
    let build = |f: &dyn Fn(u32) -> u32| {
        Permutation::from_images((0..q).map(|i| pos(f(elem(i)))).collect()).expect("field map is a bijection")
    };
    let alpha = field.exp(1);
    vec![build(&|x| field.mul(alpha, x)), build(&|x| x ^ 1), build(&|x| field.mul(x, x))]
}

/// Extended primitive narrow-sense BCH code of length `2^m`.
pub fn ebch(m: usize, delta: usize) -> Result<CodeSpec> {
    let field = GF2mField::new(m)?;
    let poly = bch_generator(&field, delta)?;
    let g = extend_code(&cyclic_generator(&poly, field.order())?);
    let h = parity_from_generator(&g)?;
    let name = format!("ebch{}-{}", g.cols(), g.rows());
    let d = if g.rows() <= 20 {
        None
    } else {
        // BCH bound on the cyclic code plus the parity bit; the bound is
        // odd for narrow-sense codes, so the extension adds one.
        Some(bch_design_distance(&field, delta) + 1)
    };
    CodeSpec::new(name, g, h, agl_generators(&field), d)?.with_base(field_basis_permutation(&field))
}

/// Sends polar index `i` to the coordinate of the field element whose
/// polynomial-basis bits read `i`; index 0 goes to the zero coordinate.
pub fn field_basis_permutation(field: &GF2mField) -> Permutation {
    let q = field.size();
    let mut images = vec![q - 1; q];
    for j in 0..field.order() {
        images[field.exp(j) as usize] = j;
    }
    Permutation::from_images(images).expect("field elements are distinct")
}

/// Largest designed distance giving the same code as `delta`.
fn bch_design_distance(field: &GF2mField, delta: usize) -> usize {
    let mut covered = vec![false; field.order()];
    for i in 1..delta {
        for j in field.cyclotomic_coset(i) {
            covered[j] = true;
        }
    }
    (1..field.order()).find(|&i| !covered[i]).unwrap_or(field.order())
}

/// Generator of the (23,12) Golay code, `1 + x² + x⁴ + x⁵ + x⁶ + x¹⁰ + x¹¹`.
const GOLAY_POLY: [u8; 12] = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1];

/// M₂₄ generator pair on the Golay labeling of [`golay24`]: positions 0..22 are
/// the points of GF(23) and position 23 is ∞. The first is `t ↦ t + 1`; the
/// second is `t ↦ -1/t` followed by the Conway involution
/// `t ↦ t³/9` on quadratic residues, `9t³` on non-residues.
const M24_GENERATORS: [[usize; 24]; 2] = [
    [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 0, 23],
    [23, 14, 19, 15, 11, 12, 22, 9, 10, 21, 13, 6, 20, 5, 4, 3, 7, 2, 17, 1, 16, 8, 18, 0],
];

/// Default base permutation of [`golay24`] on the 32 padded points; images
/// 24..31 are the padding coordinates. Found by the `base_search` example
/// (`egolay24-12 3.0 6 4`), which anneals the Bhattacharyya sum of the pivots.
const GOLAY_BASE: [usize; 32] = [
    20, 25, 16, 17, 4, 24, 13, 18, 8, 30, 3, 19, 1, 29, 7, 21, 14, 31, 22, 11, 2, 28, 23, 9, 6, 27, 10, 5, 0, 26,
    12, 15,
];

/// Order of the Mathieu group M₂₄.
pub const M24_ORDER: u64 = 244_823_040;

/// The two M₂₄ generators, verified against the Golay code and the group order.
pub fn m24_generators() -> Result<Vec<Permutation>> {
    let gens: Vec<Permutation> = M24_GENERATORS
        .iter()
        .map(|g| Permutation::from_images(g.to_vec()))
        .collect::<Result<_>>()?;
    let g = golay_generator()?;
    for (i, p) in gens.iter().enumerate() {
        if !verify_automorphism(&g, p)? {
            return Err(Error::Validation(format!("M24 generator {i} is not a Golay automorphism")));
        }
    }
    let order = crate::permgroup::Bsgs::schreier_sims(24, &gens)?.order();
    if order != num_bigint::BigUint::from(M24_ORDER) {
        return Err(Error::Validation(format!("M24 generators give order {order}")));
    }
    Ok(gens)
}

/// Systematic `[I₁₂ | B]` generator of the extended quadratic-residue Golay code.
fn golay_generator() -> Result<BitMatrix> {
    let cyclic = extend_code(&cyclic_generator(&GOLAY_POLY, 23)?);
    Ok(cyclic.rref_with_transform().rref)
}

/// The (24, 12, 8) extended Golay code. Self-dual, so `H = G`.
pub fn golay24() -> Result<CodeSpec> {
    let g = golay_generator()?;
    let h = g.clone();
    let base = Permutation::from_images(GOLAY_BASE.to_vec())?;
    CodeSpec::new("egolay24-12", g, h, m24_generators()?, None)?.with_base(base)
}

/// The 3×8 block repetition code with its block automorphisms.
pub fn repetition_block_code() -> CodeSpec {
    let g = BitMatrix::from_rows(&[
        [1, 1, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 1, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 1],
    ])
    .expect("static matrix");
    let h = parity_from_generator(&g).expect("full rank");
    let cyc = |c: &[&[usize]]| Permutation::from_cycles(8, c).expect("static cycles");
    let aut = vec![
        cyc(&[&[0, 1]]),
        cyc(&[&[1, 2]]),
        cyc(&[&[3, 4]]),
        cyc(&[&[4, 5]]),
        cyc(&[&[6, 7]]),
        cyc(&[&[0, 3], &[1, 4], &[2, 5]]),
    ];
    CodeSpec::new("rep8-3", g, h, aut, None).expect("repetition code verifies")
}
