pub mod coalgebra;
pub mod enumerate;
pub mod error;
pub mod extension;
pub mod factorization;
pub mod family;
pub mod format;
pub mod free_product;
pub mod iso;
pub mod mask;
pub mod matroid;
pub mod transversal;
pub mod verify;

pub use error::{MatroidError, Result};
pub use family::{Flag, SetFamily};
pub use iso::{canonical_form, iso_key, IsoKey};
pub use mask::SubsetMask;
pub use matroid::{Matroid, RankStats};
