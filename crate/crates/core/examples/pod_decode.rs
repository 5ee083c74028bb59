//! Polar orbit decoding of one noisy eBCH(16,7) block, branch by branch.
//!
//! `cargo run --release --example pod_decode`

use polar_orbit::channel_sim::{trial_sample, ChannelPoint};
use polar_orbit::codes::builtin;
use polar_orbit::permgroup::Bsgs;
use polar_orbit::pod::{build_pod, correlation, BranchDecoder, Selection};

fn main() -> polar_orbit::Result<()> {
    let code = builtin("ebch16-7")?;
    let group = Bsgs::schreier_sims(code.n, &code.aut_generators)?;
    let cfg = build_pod(&code, &code.base, &group, 8, Selection::Sample, 7)?.with_decoder(BranchDecoder::Sc);
    let point = ChannelPoint::for_code(&code, 2.0)?;

    // find a block that plain SC gets wrong
    for t in 0..1000 {
        let (m, llr) = trial_sample(&code, &point, 3, 0, t)?;
        let branches = cfg.candidates(&llr)?;
        let sc_word = &branches[0][0].codeword;
        if code.g.vec_mul(&m)? == *sc_word {
            continue;
        }
        println!("trial {t}, message {m:?}");
        for (i, cands) in branches.iter().enumerate() {
            let c = &cands[0];
            println!(
                "branch {i} {:?}: metric {:.3} correlation {:.3}",
                cfg.branches[i].perm,
                c.metric,
                correlation(&c.codeword, &llr)
            );
        }
        let (m_hat, diag) = cfg.decode(&llr)?;
        println!("winner branch {}, {} distinct codewords, correct: {}", diag.winner, diag.distinct, m_hat == m);
        return Ok(());
    }
    println!("SC made no errors");
    Ok(())
}
