//! Orbit properties of the polar transformation on the benchmark codes.

use std::collections::BTreeSet;

use polar_orbit::codes::{builtin, golay24, repetition_block_code, CodeSpec};
use polar_orbit::gf2::BitMatrix;
use polar_orbit::permgroup::{Bsgs, Permutation};
use polar_orbit::pod::extend_perm;
use polar_orbit::polar::PolarSpec;
use polar_orbit::transform::{polar_transform, verify_automorphism, TransformResult};
use polar_orbit::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_bits(rng: &mut impl Rng, k: usize) -> Vec<u8> {
    (0..k).map(|_| rng.random_range(0..2u8)).collect()
}

fn transform(code: &CodeSpec, p: &Permutation) -> TransformResult {
    let padded = code.zero_padded().unwrap();
    let spec = PolarSpec::for_length(padded.n).unwrap();
    polar_transform(&padded.g, &extend_perm(p, padded.n).unwrap(), &spec).unwrap()
}

#[test]
fn golay_identity_round_trip() {
    let code = golay24().unwrap();
    let t = transform(&code, &Permutation::identity(24));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let m = random_bits(&mut rng, 12);
        let c = t.encode_message(&m).unwrap();
        assert_eq!(&c[..24], &code.g.vec_mul(&m).unwrap()[..]);
        assert!(c[24..].iter().all(|&b| b == 0));
        let u = t.m_p.vec_mul(&t.e_p.invert().unwrap().vec_mul(&m).unwrap()).unwrap();
        assert_eq!(t.recover_message(&u).unwrap(), m);
    }
}

#[test]
fn m24_samples_keep_dynamic_frozen_matrix() {
    let code = golay24().unwrap();
    let group = Bsgs::schreier_sims(24, &code.aut_generators).unwrap();
    let t = transform(&code, &code.base);
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..100 {
        let h = group.sample_uniform(&mut rng);
        assert!(verify_automorphism(&code.g, &h).unwrap());
        let d = t.branch_dress(&extend_perm(&h, 32).unwrap()).unwrap();
        assert_eq!(d.m_p, t.m_p);
        assert_eq!(d.pivots, t.pivots);
    }
}

#[test]
fn branches_share_the_codebook_and_recover_messages() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["ebch16-7", "egolay24-12", "ebch64-16"] {
        let code = builtin(name).unwrap();
        let group = Bsgs::schreier_sims(code.n, &code.aut_generators).unwrap();
        let t = transform(&code, &code.base);
        for _ in 0..5 {
            let h = group.sample_uniform(&mut rng);
            let d = t.branch_dress(&extend_perm(&h, t.n()).unwrap()).unwrap();
            for _ in 0..20 {
                // any u allowed by the shared constraints is a codeword of every branch
                let info = random_bits(&mut rng, code.k);
                let u = t.df.expand(&info).unwrap();
                let c0 = t.lift(&u).unwrap();
                let c1 = d.lift(&u).unwrap();
                assert!(code.is_codeword(&c0[..code.n]) && code.is_codeword(&c1[..code.n]));
                // and each branch maps its own u back to the message that encodes its codeword
                let m1 = d.recover_message(&u).unwrap();
                assert_eq!(code.g.vec_mul(&m1).unwrap(), &c1[..code.n]);
            }
        }
    }
}

#[test]
fn non_automorphisms_are_detected() {
    let code = builtin("ebch16-7").unwrap();
    let t = transform(&code, &code.base);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut rejected = 0;
    for _ in 0..50 {
        let mut images: Vec<usize> = (0..16).collect();
        images.swap(rng.random_range(0..16), rng.random_range(0..16));
        let p = Permutation::from_images(images).unwrap();
        match t.branch_dress(&p) {
            Ok(d) => assert!(verify_automorphism(&code.g, &p).unwrap() && d.m_p == t.m_p),
            Err(Error::AutomorphismViolation(_)) => {
                assert!(!verify_automorphism(&code.g, &p).unwrap());
                rejected += 1;
            }
            Err(e) => panic!("{e}"),
        }
    }
    assert!(rejected > 0);
}

#[test]
fn repetition_orbit_is_closed() {
    // every element of the repetition group gives the same M_P, and distinct
    // elements give distinct branch permutations
    let code = repetition_block_code();
    let group = Bsgs::schreier_sims(8, &code.aut_generators).unwrap();
    let all = group.enumerate(1000).unwrap();
    assert_eq!(all.len() as u128, group.order_u128().unwrap());
    let t = transform(&code, &Permutation::identity(8));
    let mut perms = BTreeSet::new();
    for h in &all {
        let d = t.branch_dress(h).unwrap();
        assert_eq!(d.m_p, t.m_p);
        perms.insert(d.perm.clone());
    }
    assert_eq!(perms.len(), all.len());
}

#[test]
fn dynamic_frozen_matrix_is_rref_for_every_builtin() {
    for name in polar_orbit::codes::BUILTIN_NAMES {
        let code = builtin(name).unwrap();
        let t = transform(&code, &code.base);
        assert!(t.m_p.is_rref());
        assert_eq!(t.m_p.rank(), code.k);
        let product: BitMatrix = t.e_p.matmul(&t.e_p.invert().unwrap()).unwrap();
        assert_eq!(product, BitMatrix::identity(code.k));
    }
}
