//! Exact lattice algebra, discriminant forms and Weil representations for even
//! lattices of signature (2, n), together with the obstruction, modular-curve
//! pool and classification machinery built on them.
//!
//! Exact integer algorithms are generic over [`linalg::ExactInt`] (`i64`, `i128`,
//! `BigInt`); the Weil representation is generic over the real field, with the
//! double-precision alias [`WeilRep64`] used throughout.

pub mod discform;
pub mod error;
pub mod lattice;
pub mod linalg;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod pipeline;
pub mod pool;
pub mod serde_ratio;
pub mod weilrep;

pub use discform::{DiscriminantForm, FiniteQuadraticModule, HeegnerLabel, IsotropicSubgroup};
pub use error::{Error, Result};
pub use lattice::{GramLattice, RootDecomposition};
pub use weilrep::{WeilRep, WeilRep32, WeilRep64};

/// Exact rationals used for projections, bounds and slopes.
pub type Rational = num_rational::BigRational;
