//! Exact certification of graphs determined by their generalized spectrum (DGS).
//!
//! The pipeline works on the walk matrix `W = [e, Ae, .., A^{n-1}e]` of a graph: its Smith
//! normal form gives the last invariant factor `d_n`; for every odd prime `p | d_n` the
//! polynomial `Φ_p = gcd(χ(A), χ(A+J))` over `F_p` is compared against the nullity of `W`
//! mod `p`. See [`certify::certify_dgs`].
//!
//! All arithmetic is exact. Matrix and polynomial algorithms are generic over the scalar
//! type (see [`scalar`]); the aliases below fix the concrete types used by the pipeline.

pub mod certify;
pub mod cospec;
pub mod experiment;
pub mod factor;
pub mod fixtures;
pub mod fpalg;
pub mod graph;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod modpoly;
pub mod poly;
pub mod scalar;

use thiserror::Error;

pub use certify::{
    certify_dgs, check_controllable, check_theorem_sqf, CertifyOptions, Check, DgsStatus,
    DgsVerdict,
};
pub use cospec::{
    enumerate_generalized_cospectral_classes, level_parity_audit, parse_pair_fixture, recover_q,
    spectrum_key, verify_regular_orthogonal, CospectralPartition, RationalOrthogonal, SpectrumKey,
};
pub use experiment::{conjecture_scan, table1, ExperimentRow};
pub use factor::{factor_integer, Effort, FactorizationResult};
pub use graph::Graph;
pub use invariants::{
    p_main_poly, phi_p, phi_report, reduced_walk_matrix, restricted_char_poly, PhiReport,
};
pub use linalg::{determinant, smith_normal_form, walk_matrix, SnfResult};
pub use matrix::Matrix;
pub use modpoly::{sfp, sqrt_poly, ModPoly};
pub use poly::Poly;
pub use scalar::Fp;

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Dense integer matrix.
pub type IntMatrix = matrix::Matrix<Int>;
/// Dense rational matrix.
pub type RatMatrix = matrix::Matrix<Rational>;
/// Dense matrix over `F_p`.
pub type FpMatrix = matrix::Matrix<Fp>;
/// Integer polynomial (characteristic polynomials over `Z`).
pub type IntPoly = poly::Poly<Int>;
/// Smith normal form with big-integer invariant factors.
pub type IntSnf = linalg::SnfResult<Int>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("matrix is not square: {0} x {1}")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("graph is not controllable")]
    NotControllable,
    #[error("graphs are not generalized cospectral")]
    NotCospectral,
    #[error("prime {0} does not divide det W")]
    PrimeDoesNotDivide(u64),
    /// A proven identity failed at runtime: this is a bug, never a property of the input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
