//! Polar transformation of a builtin code under its default base permutation.
//!
//! `cargo run --example transform_inspect -- ebch16-7`

use polar_orbit::codes::builtin;
use polar_orbit::pod::extend_perm;
use polar_orbit::polar::PolarSpec;
use polar_orbit::transform::polar_transform;

fn main() -> polar_orbit::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "ebch16-7".into());
    let code = builtin(&name)?;
    let padded = code.zero_padded()?;
    let spec = PolarSpec::for_length(padded.n)?;
    let t = polar_transform(&padded.g, &extend_perm(&code.base, padded.n)?, &spec)?;
    println!("{name}: n={} k={} d={} polar length {}", code.n, code.k, code.d, spec.n());
    println!("pivots {:?}", t.pivots);
    println!("dynamic frozen bits with dependencies: {}", t.df.dynamic_count());
    println!("M_P =\n{}", t.m_p.to_text());
    Ok(())
}
