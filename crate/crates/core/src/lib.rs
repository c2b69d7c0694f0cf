//! Hidden code sampling at desk scale.
//!
//! Alice builds a CSS code from a secret peakedness code `C_X` and a public
//! hardness code `C_Z`; Bob samples from the code state under a coherent
//! `Z` rotation; Alice checks the samples by decoding syndromes and by a
//! relative-entropy score. Every distribution here is exact and has a
//! brute-force counterpart for small sizes.

pub mod analysis;
pub mod codes;
pub mod css;
pub mod decoder;
pub mod dists;
pub mod error;
pub mod gf2;
pub mod hardness;
pub mod oracle;
pub mod verify;

pub use error::{HcsError, Result};
