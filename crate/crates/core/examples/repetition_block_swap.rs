//! Two automorphisms of the 3×8 block repetition code give one dynamic frozen matrix.
//!
//! `cargo run --example repetition_block_swap`

use polar_orbit::codes::repetition_block_code;
use polar_orbit::permgroup::Permutation;
use polar_orbit::polar::PolarSpec;
use polar_orbit::transform::{permute_generator, polar_transform};

fn main() -> polar_orbit::Result<()> {
    let code = repetition_block_code();
    let spec = PolarSpec::new(3)?;
    let p1 = Permutation::from_cycles(8, &[&[0, 3], &[1, 4], &[2, 5]])?;
    let p2 = Permutation::from_cycles(8, &[&[0, 1]])?;

    println!("G =\n{}", code.g.to_text());
    println!("G·P1⁻¹ =\n{}", permute_generator(&code.g, &p1)?.to_text());
    let t1 = polar_transform(&code.g, &p1, &spec)?;
    let t2 = polar_transform(&code.g, &p2, &spec)?;
    println!("M_P1 =\n{}", t1.m_p.to_text());
    println!("M_P2 =\n{}", t2.m_p.to_text());
    println!("identical: {}", t1.m_p == t2.m_p);
    println!("E_P1 =\n{}E_P2 =\n{}", t1.e_p.to_text(), t2.e_p.to_text());
    for j in 0..8 {
        match t1.df.constraint(j) {
            None => println!("u{j}: information"),
            Some([]) => println!("u{j}: frozen to 0"),
            Some(deps) => println!("u{j}: xor of {deps:?}"),
        }
    }
    Ok(())
}
