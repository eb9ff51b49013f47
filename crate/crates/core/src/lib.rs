//! McEliece/Niederreiter-style encryption over Generalized Reed-Solomon codes
//! where the usual secret permutation is replaced by a dense transformation
//! `Q = R + T` (low-rank dense part plus sparse almost-regular part), together
//! with the security-analysis arithmetic that motivates the parameter choices:
//! non-binary information-set-decoding work factors, star-product
//! distinguisher experiments, subcode audits, and an encryption/decryption
//! cost model.
//!
//! This is a research artifact: nothing here is constant-time and the
//! ciphertexts are malleable (no CCA2 conversion).

pub mod analysis;
pub mod combinat;
pub mod cryptosys;
pub mod gf;
pub mod grs;
pub mod matrix;
pub mod qtransform;

pub use gf::{Felt, Field, FieldKind, FieldSpec};
pub use matrix::Mat;
