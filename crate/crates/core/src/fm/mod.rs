//! Dynamic BWT and FM-index built by left extension.

mod bwt;
mod index;

pub use bwt::{byte_code, DynamicBwt, RleBwt, WaveletBwt};
pub use index::{FmIndex, RleFmIndex, WtFmIndex};
