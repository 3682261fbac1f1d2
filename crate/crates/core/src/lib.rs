//! Controllability of invariant systems `ġ = Ag + uBg` on `Sl(n,H)`.
//!
//! Quaternions and quaternionic matrices sit in [`quat`] and [`hmat`], the
//! bracket closure and root bookkeeping in [`lie`], the sufficient
//! conditions H1–H3 and their certificates in [`certify`], numerical checks
//! of the underlying geometry in [`wedge`], and exact piecewise-constant
//! flows in [`flow`].

pub mod certify;
pub mod cmat;
pub mod error;
pub mod flow;
pub mod grassmann;
pub mod hmat;
pub mod lie;
pub mod quat;
pub mod rational;
pub mod seed;
pub mod wedge;

pub use certify::{certify, Certificate, CertifyOptions, Verdict};
pub use error::{Error, Result};
pub use flow::{flow, reach_probe, ControlSignal};
pub use grassmann::GrassmannPoint;
pub use hmat::{hexp, HMatrix};
pub use lie::{generated_subalgebra, larc, Subalgebra};
pub use quat::Quaternion;
