//! Decide, certify or refute whether a self-map of the unit interval or the
//! closed unit disc induces an endomorphism of the weighted algebra `D(X, M)`
//! of infinitely complex-differentiable functions with norm
//! `sum_n ||f^(n)||_inf / M_n`.
//!
//! The crate is organised bottom-up:
//!
//! * [`weights`] represents and certifies weight sequences `M_n` in the log
//!   domain.
//! * [`jetcalc`] holds derivative jets, Faà di Bruno composition and the two
//!   witness function families.
//! * [`domain`] knows the geometry of the two supported sets.
//! * [`discdyn`] works with rational self-maps: validation, iterates, fixed
//!   points, the Denjoy-Wolff point and the fixed-point classification.
//! * [`endocheck`] is the verdict engine.
//! * [`weightforge`] builds weight sequences for which a given map does, or
//!   does not, induce an endomorphism.

pub mod discdyn;
pub mod domain;
pub mod endocheck;
pub mod error;
pub mod jetcalc;
pub mod numeric;
pub mod poly;
pub mod roots;
pub mod tol;
pub mod weightforge;
pub mod weights;

pub use num_complex::Complex64;

pub use discdyn::{Classification, ClassificationCase, FixedPointInfo, RationalMap};
pub use domain::{DomainKind, DomainSpec};
pub use endocheck::{full_verdict, Verdict, VerdictOptions, VerdictResult};
pub use error::{Error, Result};
pub use jetcalc::{Holomorphic, Jet};
pub use weights::{WeightKind, WeightSequence};

/// Version tag embedded in every JSON report.
pub const SCHEMA_VERSION: &str = "1";
