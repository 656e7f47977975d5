//! Security analysis toolkit for BB84 with random privacy amplification.
//!
//! The crate covers GF(2) code ensembles ([`gf2`]), the method of types over
//! two-block words ([`types`]), minimum-conditional-entropy decoding and exact
//! or sampled decoding error probabilities ([`decoder`]), the error exponent
//! and its closed form ([`exponent`]), key-rate curves ([`keyrate`]), the
//! finite-length mutual-information bound ([`security_bound`]) and a classical
//! simulation of the full protocol ([`protocol`]).

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::len_without_is_empty)]

pub mod decoder;
pub mod exponent;
pub mod gf2;
pub mod keyrate;
pub mod protocol;
pub mod rng;
pub mod security_bound;
pub mod types;

pub use decoder::{DecoderError, NestedCodes, PerrEstimate, PerrMethod};
pub use exponent::{ExponentResult, Regime};
pub use gf2::{BitWord, CodePair, Gf2Error, LinearCode};
pub use keyrate::RateCurve;
pub use protocol::{ProtocolConfig, SessionTranscript};
pub use security_bound::{BoundInput, BoundReport};
pub use types::{ChannelSpec, TypePair};
