//! Montgomery arithmetic modulo a fixed odd multi-limb modulus.
//!
//! Residues are little-endian `u64` limb slices of the modulus' length holding `xR mod n`
//! with `R = 2^(64k)`. Products use the CIOS method with a stack buffer for moduli up to
//! `STACK_LIMBS` limbs.

use num_bigint::BigUint;
use num_traits::{One, Zero};

const STACK_LIMBS: usize = 40;

pub(crate) type Residue = Vec<u64>;

#[derive(Clone, Debug)]
pub(crate) struct Mont {
    n: Vec<u64>,
    /// `-n^{-1} mod 2^64`.
    ninv: u64,
    r2: Residue,
    modulus: BigUint,
}

impl Mont {
    /// `n` must be odd and greater than one.
    pub fn new(n: &BigUint) -> Self {
        debug_assert!(n.bit(0) && *n > BigUint::one());
        let limbs = n.to_u64_digits();
        let k = limbs.len();
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(limbs[0].wrapping_mul(inv)));
        }
        let r2 = (BigUint::one() << (128 * k)) % n;
        Mont {
            ninv: inv.wrapping_neg(),
            r2: Self::pad(&r2, k),
            n: limbs,
            modulus: n.clone(),
        }
    }

    fn pad(x: &BigUint, k: usize) -> Residue {
        let mut v = x.to_u64_digits();
        v.resize(k, 0);
        v
    }

    pub fn limbs(&self) -> usize {
        self.n.len()
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn zero(&self) -> Residue {
        vec![0; self.limbs()]
    }

    pub fn to_mont(&self, x: &BigUint) -> Residue {
        let x = Self::pad(&(x % &self.modulus), self.limbs());
        let mut out = self.zero();
        self.mul(&x, &self.r2, &mut out);
        out
    }

    pub fn small(&self, x: u64) -> Residue {
        self.to_mont(&BigUint::from(x))
    }

    pub fn to_biguint(&self, a: &[u64]) -> BigUint {
        let mut one = self.zero();
        one[0] = 1;
        let mut out = self.zero();
        self.mul(a, &one, &mut out);
        BigUint::from_slice(
            &out.iter()
                .flat_map(|&l| [l as u32, (l >> 32) as u32])
                .collect::<Vec<_>>(),
        )
    }

    /// Residue as a plain integer in `[0, n)` still scaled by `R`; sufficient for gcds.
    pub fn raw(&self, a: &[u64]) -> BigUint {
        BigUint::from_slice(
            &a.iter()
                .flat_map(|&l| [l as u32, (l >> 32) as u32])
                .collect::<Vec<_>>(),
        )
    }

    pub fn is_zero(a: &[u64]) -> bool {
        a.iter().all(|&l| l == 0)
    }

    /// `out = a * b * R^{-1} mod n`. `out` may not alias `a` or `b`.
    pub fn mul(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let k = self.limbs();
        let mut stack = [0u64; STACK_LIMBS + 2];
        let mut heap;
        let t: &mut [u64] = if k <= STACK_LIMBS {
            &mut stack[..k + 2]
        } else {
            heap = vec![0u64; k + 2];
            &mut heap
        };
        let n = &self.n;
        for &bi in &b[..k] {
            let mut c = 0u128;
            for j in 0..k {
                let s = t[j] as u128 + a[j] as u128 * bi as u128 + c;
                t[j] = s as u64;
                c = s >> 64;
            }
            let s = t[k] as u128 + c;
            t[k] = s as u64;
            t[k + 1] = (s >> 64) as u64;

            let m = t[0].wrapping_mul(self.ninv);
            let mut c = (t[0] as u128 + m as u128 * n[0] as u128) >> 64;
            for j in 1..k {
                let s = t[j] as u128 + m as u128 * n[j] as u128 + c;
                t[j - 1] = s as u64;
                c = s >> 64;
            }
            let s = t[k] as u128 + c;
            t[k - 1] = s as u64;
            t[k] = t[k + 1] + (s >> 64) as u64;
        }
        if t[k] != 0 || !less_than(&t[..k], n) {
            sub_in_place(&mut t[..k], n);
        }
        out[..k].copy_from_slice(&t[..k]);
    }

    pub fn mul_assign(&self, a: &mut Residue, b: &[u64]) {
        let mut out = self.zero();
        self.mul(a, b, &mut out);
        *a = out;
    }

    pub fn sqr(&self, a: &[u64], out: &mut [u64]) {
        self.mul(a, a, out);
    }

    /// `out = a + b mod n`.
    pub fn add(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let k = self.limbs();
        let mut carry = 0u64;
        for i in 0..k {
            let (s1, c1) = a[i].overflowing_add(b[i]);
            let (s2, c2) = s1.overflowing_add(carry);
            out[i] = s2;
            carry = (c1 || c2) as u64;
        }
        if carry != 0 || !less_than(&out[..k], &self.n) {
            sub_in_place(&mut out[..k], &self.n);
        }
    }

    /// `out = a - b mod n`.
    pub fn sub(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let k = self.limbs();
        let mut borrow = 0u64;
        for i in 0..k {
            let (d1, b1) = a[i].overflowing_sub(b[i]);
            let (d2, b2) = d1.overflowing_sub(borrow);
            out[i] = d2;
            borrow = (b1 || b2) as u64;
        }
        if borrow != 0 {
            let mut carry = 0u64;
            for (o, &l) in out[..k].iter_mut().zip(&self.n) {
                let (s1, c1) = o.overflowing_add(l);
                let (s2, c2) = s1.overflowing_add(carry);
                *o = s2;
                carry = (c1 || c2) as u64;
            }
        }
    }

    /// Inverse of a Montgomery residue, or the nontrivial gcd that prevents it.
    pub fn inverse(&self, a: &[u64]) -> Result<Residue, BigUint> {
        let x = self.to_biguint(a);
        let g = num_integer::Integer::gcd(&x, &self.modulus);
        if !g.is_one() {
            return Err(if x.is_zero() { self.modulus.clone() } else { g });
        }
        let inv = x.modinv(&self.modulus).expect("coprime");
        Ok(self.to_mont(&inv))
    }
}

fn less_than(a: &[u64], b: &[u64]) -> bool {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return a[i] < b[i];
        }
    }
    false
}

fn sub_in_place(a: &mut [u64], b: &[u64]) {
    let mut borrow = 0u64;
    for i in 0..a.len() {
        let (d1, b1) = a[i].overflowing_sub(b[i]);
        let (d2, b2) = d1.overflowing_sub(borrow);
        a[i] = d2;
        borrow = (b1 || b2) as u64;
    }
}
