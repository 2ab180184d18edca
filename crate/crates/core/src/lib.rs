//! Exact Darboux first integrals for polynomial plane fields.
//!
//! A codimension-`p` plane field on affine `n`-space is given by a
//! polynomial `p`-form `omega`. Given candidate hypersurfaces `f_j = 0`,
//! the crate checks invariance (`f | omega ^ df`), extracts cofactors,
//! finds the weight vectors whose cofactor combination vanishes, and
//! assembles and verifies logarithmic first integrals `prod f_j^lambda_j`.

pub mod cli;

pub mod darboux;
pub mod forms;
pub mod linalg;
pub mod plane_field;
pub mod poly;

pub use darboux::{DarbouxError, FirstIntegralReport, Hypersurface, LogForm};
pub use forms::{BasisIndex, KForm};
pub use plane_field::{PlaneField, PlaneFieldError};

pub use poly::{GaussianRational, MPoly, Monomial, RationalFunction};
