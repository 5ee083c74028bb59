//! Polar orbit decoding of binary linear block codes.
//!
//! Any binary linear block code is rewritten as a polar subcode with dynamic
//! frozen constraints ([`transform`]). Permutations drawn from the code's
//! automorphism group ([`permgroup`], [`codes`]) all yield the same
//! constraints, so one SC/SCL decoder ([`polar`]) can run on several
//! permuted copies of the channel output in parallel ([`pod`]). The
//! [`channel_sim`] module measures block error rates over BPSK/AWGN and
//! [`cli`] drives experiments from a config file.

pub mod channel_sim;
pub mod cli;
pub mod codes;
pub mod error;
pub mod gf2;
pub mod permgroup;
pub mod pod;
pub mod polar;
pub mod transform;

pub use error::{Error, Result};
