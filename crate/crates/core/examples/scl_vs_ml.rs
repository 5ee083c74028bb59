//! SC, SCL and brute-force ML on the same noisy eBCH(16,7) blocks.
//!
//! `cargo run --release --example scl_vs_ml`

use polar_orbit::channel_sim::{ml_decode_message, trial_sample, ChannelPoint};
use polar_orbit::codes::builtin;
use polar_orbit::pod::{BranchDecoder, SingleTransformDecoder};

fn main() -> polar_orbit::Result<()> {
    let code = builtin("ebch16-7")?;
    let point = ChannelPoint::for_code(&code, 2.0)?;
    let decoders = [
        ("sc", SingleTransformDecoder::new(&code, &code.base, BranchDecoder::Sc)?),
        ("scl:4", SingleTransformDecoder::new(&code, &code.base, BranchDecoder::Scl(4))?),
        ("scl:16", SingleTransformDecoder::new(&code, &code.base, BranchDecoder::Scl(16))?),
    ];
    let trials = 5000;
    let mut errors = [0usize; 4];
    for t in 0..trials {
        let (m, llr) = trial_sample(&code, &point, 1, 0, t)?;
        for (i, (_, d)) in decoders.iter().enumerate() {
            errors[i] += (d.decode(&llr)? != m) as usize;
        }
        errors[3] += (ml_decode_message(&code, &llr)? != m) as usize;
    }
    for (i, (label, _)) in decoders.iter().enumerate() {
        println!("{label:>6}: {} / {trials}", errors[i]);
    }
    println!("{:>6}: {} / {trials}", "ml", errors[3]);
    Ok(())
}
