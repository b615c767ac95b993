//! Exact symbolic engine for compact quantum group presentations.

pub mod cqg;
pub mod error;
pub mod fdalg;
pub mod freestar;
pub mod gauge;
pub mod ideal;
pub mod matrep;
pub mod scalars;

pub use cqg::{CQGPresentation, SubalgebraView, Substitution, Tags};
pub use error::{Error, Result};
pub use fdalg::{DivRing, RealCStarSpec, SigmaAut, StateSpec};
pub use freestar::{Gen, Letter, NCPoly, TensorPoly, Word};
pub use ideal::{CertificateSpan, Membership, MembershipCertificate, RelationSet};
pub use matrep::{GenMatrix, Twist};
pub use scalars::{qnumber, GaussRat, Scalar, ScalarMatrix};
