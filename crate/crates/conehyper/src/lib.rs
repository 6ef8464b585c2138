//! Characters and convolution structures of the multivariate disk hypergroups
//! `(X_q, *_p)` for real `p > 2q - 1`, together with numerical checkers for
//! every product formula, orthogonality relation and hypergroup axiom the
//! construction satisfies.
//!
//! The crate is organized along the mathematical layers:
//!
//! * [`matcore`] — small dense complex matrix algebra (determinants, singular
//!   values, polar decomposition), Haar sampling on `U(q)`/`SU(q)` and
//!   sampling/weighting on the matrix ball `B_q`.
//! * [`jacobi1d`] — classical one-dimensional Jacobi polynomials and disk
//!   polynomials (the rank-one specialization).
//! * [`hopoly`] — Heckman-Opdam Jacobi polynomials of type `BC_q`, built by
//!   weighted Gram-Schmidt in the Weyl-orbit-sum basis on the alcove `A_q`.
//! * [`hypergroup`] — the cone `X_q`, its characters, the convolution `*_p`
//!   as a sampleable probability measure, the Haar measure and the quotient
//!   convolution on `A_q`.
//! * [`verify`] — one checker per displayed identity, each returning a
//!   structured pass/fail record with discrepancy and error bars.
//!
//! Monte Carlo estimators are deterministic: a master seed fans out into
//! per-chunk counter-based streams and partial results are reduced in chunk
//! order, so a run reproduces bit-identically with or without the `parallel`
//! feature.

pub mod hopoly;
pub mod hypergroup;
pub mod jacobi1d;
pub mod matcore;
pub mod mc;
pub mod quad;
pub mod special;
pub mod verify;

pub use hypergroup::ConePoint;
pub use mc::{BallScheme, McConfig};
