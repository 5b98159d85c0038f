//! Exact isomorphism testing and CI-property classification for circulant
//! (di)graphs `Cay(Z_n, S)`.
//!
//! The crate is layered bottom-up:
//!
//! * [`zn`]: arithmetic in `Z_n`: factorization, CRT views, p-adic digits,
//!   units and subgroups.
//! * [`keyspace`]: the key lattice, key partitions and the key of a set.
//! * [`multiplier`]: generalized and genuine multipliers and solving sets.
//! * [`cayley`]: connection sets, Cayley digraphs, unit orbits and a
//!   brute-force isomorphism oracle that shares no code with the key machinery.
//! * [`engine`]: the isomorphism criterion, CI tests, valency sweeps,
//!   closed-form classification predicates and non-CI witness families.

pub mod cayley;
pub mod engine;
mod error;
pub mod keyspace;
pub mod multiplier;
pub mod zn;

pub use cayley::{ConnectionSet, Mode};
pub use engine::{CiVerdict, ClassificationReport, Engine, EngineConfig, IsoVerdict};
pub use error::{Error, Result};
pub use keyspace::{Key, ZnPartition};
pub use multiplier::{GeneralizedMultiplier, GenuineMultiplier, SolvingSet};
pub use zn::{Factorization, Residue};
