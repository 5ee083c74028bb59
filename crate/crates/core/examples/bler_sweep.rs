//! BLER sweep for eBCH(16,7), printed in the CLI's CSV layout.
//!
//! `cargo run --release --example bler_sweep`

use polar_orbit::channel_sim::{hd_record, run_bler, ChannelPoint, SimDecoder};
use polar_orbit::cli::CSV_HEADER;
use polar_orbit::codes::builtin;
use polar_orbit::permgroup::Bsgs;
use polar_orbit::pod::{build_pod, BranchDecoder, Selection, SingleTransformDecoder};

fn main() -> polar_orbit::Result<()> {
    let code = builtin("ebch16-7")?;
    let group = Bsgs::schreier_sims(code.n, &code.aut_generators)?;
    let points: Vec<_> = [1.0, 2.0, 3.0, 4.0].iter().map(|&db| ChannelPoint::for_code(&code, db)).collect::<Result<_, _>>()?;
    let seed = 1;
    let decoders = [
        ("sc", SimDecoder::Single(SingleTransformDecoder::new(&code, &code.base, BranchDecoder::Sc)?)),
        ("scl:8", SimDecoder::Single(SingleTransformDecoder::new(&code, &code.base, BranchDecoder::Scl(8))?)),
        ("pod:16:sc", SimDecoder::Pod(Box::new(build_pod(&code, &code.base, &group, 16, Selection::Sample, seed)?))),
        ("ml", SimDecoder::Ml),
    ];
    println!("{CSV_HEADER}");
    for (label, dec) in &decoders {
        for r in run_bler(&code, dec, label, &points, 50, 1_000_000, seed)? {
            println!("{},{},{},{},{},{:.4e},{:.3}", code.name, r.decoder, r.eb_n0_db, r.trials, r.block_errors, r.bler, r.wall_time);
        }
    }
    for p in &points {
        let r = hd_record(&code, code.t(), p.eb_n0_db, "hd:2");
        println!("{},{},{},0,0,{:.4e},0", code.name, r.decoder, r.eb_n0_db, r.bler);
    }
    Ok(())
}
