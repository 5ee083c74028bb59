//! Polar transformation of a binary linear block code.
//!
//! For a generator `G` (k×n), a coordinate permutation `P` and the polar
//! transform `G_n`, the dynamic frozen matrix is the RREF
//! `M_P = E_P · G · P⁻¹ · G_n⁻¹`. Every codeword then factors as
//! `c = (m · E_P⁻¹) · M_P · G_n · P`, so a polar decoder with the constraints
//! of `M_P` decodes the permuted observation. Automorphisms `h` of the code
//! leave `M_P` unchanged when `P` is replaced by `P·h`; only `E` moves.

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::permgroup::Permutation;
use crate::polar::{butterfly, DynamicFrozenSpec, PolarSpec};

/// Everything needed to decode one branch of the orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformResult {
    /// k×n dynamic frozen matrix in RREF.
    pub m_p: BitMatrix,
    /// k×k elimination matrix with `e_p · G · P⁻¹ · G_n⁻¹ == m_p`.
    pub e_p: BitMatrix,
    pub pivots: Vec<usize>,
    pub df: DynamicFrozenSpec,
    pub perm: Permutation,
    generator: BitMatrix,
}

/// `G · P⁻¹`: column `j` of the result is column `π(j)` of `g`.
pub fn permute_generator(g: &BitMatrix, p: &Permutation) -> Result<BitMatrix> {
    if g.cols() != p.len() {
        return Err(Error::Shape(format!("{} columns vs {}-point permutation", g.cols(), p.len())));
    }
    g.select_columns(p.images())
}

/// `A · G_n⁻¹` row by row; `G_n` is self-inverse so this is the butterfly.
fn times_polar_inverse(a: &BitMatrix) -> Result<BitMatrix> {
    let rows: Vec<Vec<u8>> = (0..a.rows())
        .map(|r| {
            let mut row = a.row(r);
            butterfly(&mut row);
            row
        })
        .collect();
    let mut out = BitMatrix::from_rows(&rows)?;
    if rows.is_empty() {
        out = BitMatrix::zeros(0, a.cols());
    }
    Ok(out)
}

/// Computes `M_P`, `E_P` and the decoder constraints for permutation `p`.
pub fn polar_transform(g: &BitMatrix, p: &Permutation, spec: &PolarSpec) -> Result<TransformResult> {
    if g.cols() != spec.n() || p.len() != spec.n() {
        return Err(Error::Shape(format!(
            "generator has {} columns, permutation {} points, polar length {}",
            g.cols(),
            p.len(),
            spec.n()
        )));
    }
    let k = g.rows();
    let projected = times_polar_inverse(&permute_generator(g, p)?)?;
    let red = projected.rref_with_transform();
    if red.pivots.len() != k {
        return Err(Error::Validation(format!("generator has rank {} < {k} rows", red.pivots.len())));
    }
    let df = df_spec_from_m(&red.rref)?;
    Ok(TransformResult {
        m_p: red.rref,
        e_p: red.elim,
        pivots: red.pivots,
        df,
        perm: p.clone(),
        generator: g.clone(),
    })
}

/// Reads decoder constraints off an RREF dynamic frozen matrix.
///
/// Pivot columns become information positions; every other column `j`
/// becomes a frozen position equal to the XOR of the pivots whose rows have
/// a one in column `j`.
pub fn df_spec_from_m(m_p: &BitMatrix) -> Result<DynamicFrozenSpec> {
    if !m_p.is_rref() {
        return Err(Error::Validation("dynamic frozen matrix is not in RREF".into()));
    }
    let n = m_p.cols();
    let pivots: Vec<usize> = (0..m_p.rows())
        .map(|r| (0..n).find(|&c| m_p.get(r, c)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Validation("dynamic frozen matrix has a zero row".into()))?;
    let frozen = (0..n)
        .filter(|j| pivots.binary_search(j).is_err())
        .map(|j| (j, (0..m_p.rows()).filter(|&r| m_p.get(r, j)).collect()))
        .collect();
    // DynamicFrozenSpec::new rejects any dependency on a later pivot.
    DynamicFrozenSpec::new(n, pivots, frozen)
}

impl TransformResult {
    /// The code generator this transform was built from.
    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn n(&self) -> usize {
        self.m_p.cols()
    }

    pub fn k(&self) -> usize {
        self.m_p.rows()
    }

    /// Transform for `P·h`, recomputed from scratch. Fails when `M_{Ph}`
    /// differs from `M_P`, i.e. `h` is not an automorphism of the code.
    pub fn branch_dress(&self, h: &Permutation) -> Result<TransformResult> {
        let perm = self.perm.compose(h)?;
        let spec = PolarSpec::for_length(self.n())?;
        let dressed = polar_transform(&self.generator, &perm, &spec)?;
        if dressed.m_p != self.m_p {
            return Err(Error::AutomorphismViolation(format!(
                "{h:?} changes the dynamic frozen matrix"
            )));
        }
        Ok(dressed)
    }

    /// Codeword for message `m`: `(m · E_P⁻¹) · M_P · G_n · P`.
    pub fn encode_message(&self, m: &[u8]) -> Result<Vec<u8>> {
        let m_p = self.e_p.invert()?.vec_mul(m)?;
        let u = self.m_p.vec_mul(&m_p)?;
        self.lift(&u)
    }

    /// Maps a synthetic-channel input vector to the codeword `u · G_n · P`.
    pub fn lift(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.n() {
            return Err(Error::Shape(format!("u has length {}, n = {}", u.len(), self.n())));
        }
        let mut c = u.to_vec();
        butterfly(&mut c);
        self.perm.apply(&c)
    }

    /// Message estimate from a decoded `u`: `m̂ = u[pivots] · E_P`.
    pub fn recover_message(&self, u_hat: &[u8]) -> Result<Vec<u8>> {
        if !self.df.satisfied_by(u_hat) {
            return Err(Error::Validation("decoded vector violates the frozen constraints".into()));
        }
        let info: Vec<u8> = self.pivots.iter().map(|&p| u_hat[p]).collect();
        self.e_p.vec_mul(&info)
    }

    /// Textual dump: m_p, e_p, perm line and pivot line.
    pub fn to_text(&self) -> String {
        let pivots = self.pivots.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        format!("{}{}{}\n{}\n", self.m_p.to_text(), self.e_p.to_text(), self.perm.to_text(), pivots)
    }
}

/// Whether `h` maps the code generated by `g` onto itself:
/// `rowspan(G · h⁻¹) == rowspan(G)`.
pub fn verify_automorphism(g: &BitMatrix, h: &Permutation) -> Result<bool> {
    let moved = permute_generator(g, h)?;
    g.rowspan_equal(&moved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::repetition_block_code;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn m(rows: &[&str]) -> BitMatrix {
        let rows: Vec<Vec<u8>> =
            rows.iter().map(|r| r.bytes().map(|b| b - b'0').collect()).collect();
        BitMatrix::from_rows(&rows).unwrap()
    }

    fn rep_g() -> BitMatrix {
        m(&["11100000", "00011100", "00000011"])
    }

    fn p1() -> Permutation {
        Permutation::from_cycles(8, &[&[0, 3], &[1, 4], &[2, 5]]).unwrap()
    }

    fn p2() -> Permutation {
        Permutation::from_cycles(8, &[&[0, 1]]).unwrap()
    }

    fn bits(mask: u32, k: usize) -> Vec<u8> {
        (0..k).map(|i| ((mask >> i) & 1) as u8).collect()
    }

    #[test]
    fn block_swap_on_repetition_code() {
        let g = rep_g();
        let gp = permute_generator(&g, &p1()).unwrap();
        assert_eq!(gp, m(&["00011100", "11100000", "00000011"]));
        let swap = m(&["010", "100", "001"]);
        assert_eq!(swap.matmul(&gp).unwrap(), g);

        let spec = PolarSpec::new(3).unwrap();
        let t1 = polar_transform(&g, &p1(), &spec).unwrap();
        let t2 = polar_transform(&g, &p2(), &spec).unwrap();
        assert_eq!(t1.m_p, t2.m_p);
        // M_{P1} is the RREF of G · G_n⁻¹, and E_{P1} = E_{P2} · swap.
        let expected = g.matmul(spec.generator()).unwrap().rref_with_transform().rref;
        assert_eq!(t1.m_p, expected);
        assert_eq!(t1.e_p, t2.e_p.matmul(&swap).unwrap());
        assert_eq!(t1.df.k(), 3);
    }

    #[test]
    fn invariants_hold() {
        let g = rep_g();
        let spec = PolarSpec::new(3).unwrap();
        for p in [Permutation::identity(8), p1(), p2()] {
            let t = polar_transform(&g, &p, &spec).unwrap();
            let chain = t
                .e_p
                .matmul(&permute_generator(&g, &p).unwrap())
                .unwrap()
                .matmul(spec.generator())
                .unwrap();
            assert_eq!(chain, t.m_p);
            for (r, &pc) in t.pivots.iter().enumerate() {
                for rr in 0..3 {
                    assert_eq!(t.m_p.get(rr, pc), r == rr);
                }
            }
            for mask in 0..8 {
                let msg = bits(mask, 3);
                assert_eq!(t.encode_message(&msg).unwrap(), g.vec_mul(&msg).unwrap());
            }
        }
    }

    #[test]
    fn rejects_rank_deficient_and_bad_shapes() {
        let g = m(&["11000000", "11000000"]);
        let spec = PolarSpec::new(3).unwrap();
        assert!(matches!(
            polar_transform(&g, &Permutation::identity(8), &spec),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            polar_transform(&rep_g(), &Permutation::identity(4), &spec),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn df_spec_cases() {
        let static_m = m(&["10000000", "01000000", "00100000"]);
        let df = df_spec_from_m(&static_m).unwrap();
        assert_eq!(df.pivots(), &[0, 1, 2]);
        assert_eq!(df.dynamic_count(), 0);
        for j in 3..8 {
            assert_eq!(df.constraint(j), Some(&[][..]));
        }
        assert!(df_spec_from_m(&m(&["0100", "1000"])).is_err());
    }

    #[test]
    fn df_spec_of_random_code_matches_codebook() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let spec = PolarSpec::new(3).unwrap();
        let mut done = 0;
        while done < 20 {
            let rows: Vec<Vec<u8>> =
                (0..4).map(|_| (0..8).map(|_| rng.random_range(0..2u8)).collect()).collect();
            let g = BitMatrix::from_rows(&rows).unwrap();
            if g.rank() < 4 {
                continue;
            }
            let t = polar_transform(&g, &Permutation::identity(8), &spec).unwrap();
            for mask in 0..16 {
                let u = t.m_p.vec_mul(&bits(mask, 4)).unwrap();
                assert!(t.df.satisfied_by(&u));
                for j in (0..8).filter(|j| !t.df.is_pivot(*j)) {
                    let x = t.df.constraint(j).unwrap().iter().fold(0, |a, &p| a ^ u[p]);
                    assert_eq!(u[j], x);
                }
            }
            done += 1;
        }
    }

    #[test]
    fn verify_automorphism_cases() {
        let g = rep_g();
        assert!(verify_automorphism(&g, &Permutation::identity(8)).unwrap());
        assert!(verify_automorphism(&g, &p1()).unwrap());
        assert!(verify_automorphism(&g, &p2()).unwrap());
        let cross = Permutation::from_cycles(8, &[&[3, 7]]).unwrap();
        assert!(!verify_automorphism(&g, &cross).unwrap());
    }

    #[test]
    fn branch_dress_cases() {
        let g = rep_g();
        let spec = PolarSpec::new(3).unwrap();
        let base = polar_transform(&g, &p1(), &spec).unwrap();
        assert_eq!(base.branch_dress(&Permutation::identity(8)).unwrap(), base);
        let dressed = base.branch_dress(&p2()).unwrap();
        assert_eq!(dressed.m_p, base.m_p);
        assert_eq!(dressed.perm, p1().compose(&p2()).unwrap());
        assert_ne!(dressed.perm, base.perm);
        let cross = Permutation::from_cycles(8, &[&[3, 7]]).unwrap();
        assert!(matches!(base.branch_dress(&cross), Err(Error::AutomorphismViolation(_))));
    }

    #[test]
    fn recover_message_round_trip() {
        let g = rep_g();
        let spec = PolarSpec::new(3).unwrap();
        for p in [p1(), p1().compose(&p2()).unwrap()] {
            let t = polar_transform(&g, &p, &spec).unwrap();
            for mask in 0..8 {
                let msg = bits(mask, 3);
                let u = t.m_p.vec_mul(&t.e_p.invert().unwrap().vec_mul(&msg).unwrap()).unwrap();
                assert_eq!(t.recover_message(&u).unwrap(), msg);
            }
            let mut bad = t.m_p.row(0);
            let free = (0..8).find(|&j| !t.df.is_pivot(j)).unwrap();
            bad[free] ^= 1;
            assert!(t.recover_message(&bad).is_err());
        }
    }

    #[test]
    fn orbit_branches_share_codebook() {
        let code = repetition_block_code();
        let spec = PolarSpec::new(3).unwrap();
        let base = polar_transform(&code.g, &Permutation::identity(8), &spec).unwrap();
        let reference: BTreeSet<Vec<u8>> = (0..8).map(|mk| code.g.vec_mul(&bits(mk, 3)).unwrap()).collect();
        for h in &code.aut_generators {
            let t = base.branch_dress(h).unwrap();
            let book: BTreeSet<Vec<u8>> =
                (0..8).map(|mk| t.lift(&t.df.expand(&bits(mk, 3)).unwrap()).unwrap()).collect();
            assert_eq!(book, reference);
        }
    }
}
