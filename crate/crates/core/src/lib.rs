//! Exact computation of Grothendieck–Witt valued Euler characteristics of
//! smooth complete toric varieties over ℚ, together with a cut-and-paste
//! evaluator on the Grothendieck ring of varieties.
//!
//! Two independent pipelines produce classes in GW(ℚ):
//!
//! * [`pairing::chi_a1`] — Čech cohomology of the sheaves of differential
//!   forms, paired by cup product and the trace on top cohomology, with the
//!   trace normalized by toric intersection numbers;
//! * [`k0var::orbit_chi`] — the torus-orbit decomposition evaluated through
//!   compactly-supported cut-and-paste rules on the Grothendieck ring.
//!
//! Their agreement on every smooth complete surface fan is the central
//! cross-check of the acceptance suite (see [`acceptance`]).
//!
//! All arithmetic is exact: big rationals everywhere, no floating point.

pub mod acceptance;
pub mod gw;
pub mod k0var;
pub mod linalg;
pub mod pairing;
pub mod sheaf;
pub mod toric;

pub use gw::GWClass;
pub use linalg::{Rat, RatMatrix};
pub use toric::Fan;
