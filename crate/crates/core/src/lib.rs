//! Upper bounds on the minimum Hamming distance of quasi-cyclic
//! protograph-based LDPC codes, punctured or not.

pub mod bounds;
pub mod codeword;
pub mod data;
pub mod error;
pub mod exact;
pub mod expansion;
pub mod matrix;
pub mod permanent;
pub mod ring;

pub use error::{Error, Result};
