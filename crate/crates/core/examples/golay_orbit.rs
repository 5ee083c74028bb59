//! The extended Golay code: M24 orbit of the base permutation and POD against SCL.
//!
//! `cargo run --release --example golay_orbit`

use polar_orbit::channel_sim::{run_bler, ChannelPoint, SimDecoder};
use polar_orbit::codes::golay24;
use polar_orbit::permgroup::Bsgs;
use polar_orbit::pod::{build_pod, BranchDecoder, Selection, SingleTransformDecoder};

fn main() -> polar_orbit::Result<()> {
    let code = golay24()?;
    println!("weight-8 codewords generate a (24,12,{}) code", code.d);
    let group = Bsgs::schreier_sims(24, &code.aut_generators)?;
    println!("|Aut| = {}", group.order());
    let cfg = build_pod(&code, &code.base, &group, 4, Selection::Sample, 3)?.with_decoder(BranchDecoder::Scl(8));
    for b in &cfg.branches {
        println!("branch P·h = {:?}", b.perm);
    }
    let points = [ChannelPoint::for_code(&code, 3.0)?];
    let pod = run_bler(&code, &SimDecoder::Pod(Box::new(cfg)), "pod:4:scl:8", &points, 50, 1_000_000, 1)?;
    let scl = SimDecoder::Single(SingleTransformDecoder::new(&code, &code.base, BranchDecoder::Scl(32))?);
    let scl = run_bler(&code, &scl, "scl:32", &points, 50, 1_000_000, 1)?;
    for r in pod.iter().chain(&scl) {
        let (lo, hi) = r.ci95();
        println!("{}: bler {:.3e} [{lo:.3e}, {hi:.3e}] over {} trials", r.decoder, r.bler, r.trials);
    }
    Ok(())
}
