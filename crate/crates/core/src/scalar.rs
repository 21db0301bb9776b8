//! Scalar types shared by the generic matrix and polynomial code.
//!
//! Every algorithm in [`crate::linalg`] is written against [`Scalar`] (a commutative ring
//! built from `num-traits` operator bounds) or [`FieldScalar`] (a ring with exact division).
//! Big integers, big rationals, machine integers, and [`Fp`] all satisfy these bounds.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A commutative ring element usable by the division-free algorithms.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A ring whose `/` is exact: field division, or exact quotient in an integral domain
/// when the caller guarantees divisibility (Bareiss elimination).
pub trait FieldScalar: Scalar + Div<Output = Self> {}

impl<T> FieldScalar for T where T: Scalar + Div<Output = T> {}

/// Marker for scalars that form a field, enabling pivoted Gaussian elimination.
pub trait Field: FieldScalar {
    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self>;
}

impl Field for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Field for Fp {
    fn inverse(&self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            let p = self.modulus;
            debug_assert!(p != 0, "inverse of a modulus-free constant");
            Some(Fp::new(inv_mod(self.value, p), p))
        }
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime via Fermat's little theorem. `a` must be nonzero mod `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Reduce a big integer into `[0, p)`.
pub fn reduce_bigint(x: &BigInt, p: u64) -> u64 {
    use num_integer::Integer;
    let m = BigInt::from(p);
    let r = x.mod_floor(&m);
    r.try_into().expect("residue fits in u64")
}

/// Element of the prime field `F_p` for `p < 2^62`.
///
/// The modulus travels with the value. `Zero::zero()` and `One::one()` have no modulus to
/// draw from, so they produce constants with modulus `0`; binary operations adopt the
/// modulus of whichever operand carries one. Residues `0` and `1` are valid in every
/// `F_p`, so this is exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        debug_assert!(modulus >= 2);
        Fp {
            value: value % modulus,
            modulus,
        }
    }

    pub fn from_i64(value: i64, modulus: u64) -> Self {
        let m = modulus as i128;
        let r = (value as i128).rem_euclid(m) as u64;
        Fp { value: r, modulus }
    }

    pub fn from_bigint(value: &BigInt, modulus: u64) -> Self {
        Fp {
            value: reduce_bigint(value, modulus),
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// `0` for a modulus-free constant produced by `Zero`/`One`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    fn joint_modulus(self, other: Fp) -> u64 {
        match (self.modulus, other.modulus) {
            (0, m) | (m, 0) => m,
            (a, b) => {
                debug_assert_eq!(a, b, "mixed moduli");
                a
            }
        }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp {
            value: 0,
            modulus: 0,
        }
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp {
            value: 1,
            modulus: 0,
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let m = self.joint_modulus(rhs);
        if m == 0 {
            // Both operands are modulus-free constants; only 0+0, 0+1, 1+0 are reachable
            // in practice, but keep the integer value and let the next op reduce it.
            return Fp {
                value: self.value + rhs.value,
                modulus: 0,
            };
        }
        Fp {
            value: add_mod(self.value % m, rhs.value % m, m),
            modulus: m,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let m = self.joint_modulus(rhs);
        if m == 0 {
            let value = self
                .value
                .checked_sub(rhs.value)
                .expect("negative difference of two modulus-free constants");
            return Fp { value, modulus: 0 };
        }
        Fp {
            value: sub_mod(self.value % m, rhs.value % m, m),
            modulus: m,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let m = self.joint_modulus(rhs);
        if m == 0 {
            return Fp {
                value: self.value * rhs.value,
                modulus: 0,
            };
        }
        Fp {
            value: mul_mod(self.value, rhs.value, m),
            modulus: m,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        assert!(
            self.modulus != 0 || self.value == 0,
            "negation of a modulus-free constant"
        );
        if self.value == 0 {
            self
        } else {
            Fp {
                value: self.modulus - self.value,
                modulus: self.modulus,
            }
        }
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        let m = self.joint_modulus(rhs);
        assert!(rhs.value != 0, "division by zero in F_p");
        assert!(m != 0, "division of two modulus-free constants");
        Fp {
            value: mul_mod(self.value % m, inv_mod(rhs.value % m, m), m),
            modulus: m,
        }
    }
}
