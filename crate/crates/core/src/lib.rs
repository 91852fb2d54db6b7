//! Construction and exhaustive verification of hemisystems of the elliptic
//! quadric Q⁻(5,q) for prime powers q ≡ 3 (mod 4).
//!
//! The field F_{q^6} is modelled in discrete-logarithm form ([`field`]). The
//! quadric, its polarity and its lines live in [`geometry`]; the conic of
//! PG(2,q) and the partition of a Singer line that drives the construction
//! live in [`conic`]; [`construct`] assembles the union of cyclotomic classes
//! and its point set, [`verify`] checks every claimed property exactly, and
//! [`charsum`] numerically checks the Gauss-sum identities.

pub mod charsum;
pub mod conic;
pub mod construct;
pub mod descriptor;
pub mod error;
pub mod field;
pub mod geometry;
pub mod residues;
pub mod verify;

pub use conic::ConicData;
pub use construct::{HemisystemDescriptor, PointSet};
pub use descriptor::DescriptorFile;
pub use error::{Error, Result};
pub use field::{build_field, FElem, FieldCtx, FieldParams, Level};
pub use geometry::{Geometry, ProjPoint};
pub use verify::{CheckKind, CheckReport, VerificationReport};
