//! Dynamic compressed strings: searchable partial sums, dynamic bitvectors,
//! wavelet and run-length strings, a dynamic FM-index, and BWT and LZ77
//! construction in compressed working space.

pub mod bitvector;
pub mod bounds;
pub mod compress;
pub mod error;
pub mod fm;
pub mod packed;
pub mod spsi;
pub mod string;

pub use bitvector::{DynBitvector, GapBitvector, SuccinctBitvector};
pub use compress::{build_bwt, invert_bwt, lz77_decode, lz77_factorize, BwtMode, BwtOutput, Lz77Factor, Lz77Output};
pub use error::{Error, Result};
pub use fm::{DynamicBwt, FmIndex, RleBwt, RleFmIndex, WaveletBwt, WtFmIndex};
pub use packed::PackedBlock;
pub use spsi::{SpsiConfig, SpsiTree};
pub use string::{DynString, PrefixCode, RleString, Symbol, WaveletString};
