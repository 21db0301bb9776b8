//! Linear algebra over `F_p` for odd primes `p < 2^62`.

use crate::factor::is_prime_u64;
use crate::linalg::{char_poly, nullspace, rank};
use crate::matrix::{FpMatrix, IntMatrix};
use crate::modpoly::ModPoly;
use crate::scalar::Fp;
use crate::Error;

pub const MAX_MODULUS: u64 = 1 << 62;

pub fn check_odd_prime(p: u64) -> Result<(), Error> {
    if p == 2 || p >= MAX_MODULUS || !is_prime_u64(p) {
        Err(Error::NotOddPrime(p))
    } else {
        Ok(())
    }
}

pub fn rank_p(m: &IntMatrix, p: u64) -> Result<usize, Error> {
    check_odd_prime(p)?;
    Ok(rank(&m.reduce_mod(p)))
}

/// `cols - rank_p`, the dimension of the right nullspace.
pub fn nullity_p(m: &IntMatrix, p: u64) -> Result<usize, Error> {
    Ok(m.cols() - rank_p(m, p)?)
}

/// Reduced-echelon basis of `{x : (m mod p) x = 0}` as residue vectors.
pub fn nullspace_basis_p(m: &IntMatrix, p: u64) -> Result<Vec<Vec<u64>>, Error> {
    check_odd_prime(p)?;
    Ok(nullspace(&m.reduce_mod(p))
        .into_iter()
        .map(|v| v.into_iter().map(|x| x.value()).collect())
        .collect())
}

/// Characteristic polynomial over `F_p` through the same division-free routine used over
/// the integers.
pub fn char_poly_mod_p(m: &FpMatrix, p: u64) -> Result<ModPoly, Error> {
    check_odd_prime(p)?;
    let cp = char_poly(m)?;
    Ok(modpoly_from_fp(p, cp.coeffs()))
}

pub(crate) fn modpoly_from_fp(p: u64, coeffs: &[Fp]) -> ModPoly {
    ModPoly::new(p, coeffs.iter().map(|c| c.value()).collect())
}
