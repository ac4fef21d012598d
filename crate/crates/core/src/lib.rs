//! Syndrome-based decoding of CSS quantum LDPC codes under depolarizing
//! noise: GF(2) algebra, code construction, min-sum and iterative LP
//! decoders, and a Monte-Carlo simulator.

pub mod channel;
pub mod code;
pub mod decoders;
pub mod error;
pub mod gf2;
pub mod simulator;

pub use code::{CssCode, TannerGraph};
pub use decoders::{decode, DecodeOutcome, DecoderConfig, DecoderKind};
pub use error::{Error, Result};
pub use gf2::{BinaryMatrix, BinaryVector};
