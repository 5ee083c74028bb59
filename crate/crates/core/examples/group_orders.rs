//! Schreier–Sims on the benchmark automorphism groups.
//!
//! `cargo run --release --example group_orders`

use polar_orbit::codes::{agl_generators, builtin, GF2mField};
use polar_orbit::permgroup::Bsgs;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> polar_orbit::Result<()> {
    for m in [3, 4, 6] {
        let field = GF2mField::new(m)?;
        let g = Bsgs::schreier_sims(1 << m, &agl_generators(&field))?;
        let q = 1u64 << m;
        println!("AΓL(1,{q}): order {} (2^m(2^m-1)m = {}), base {:?}", g.order(), q * (q - 1) * m as u64, g.base());
    }
    let golay = builtin("egolay24-12")?;
    let m24 = Bsgs::schreier_sims(24, &golay.aut_generators)?;
    println!("M24: order {}, transversals {:?}", m24.order(), m24.transversal_sizes());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h = m24.sample_uniform(&mut rng);
    println!("random element {h:?}, order {}, member {}", h.order(), m24.contains(&h));
    for (i, e) in m24.elements().take(4).enumerate() {
        println!("element {i}: {e:?}");
    }
    Ok(())
}
