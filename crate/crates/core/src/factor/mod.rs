//! Integer primality and budgeted factorization.
//!
//! Primality is deterministic below `2^64` (Miller-Rabin with the first twelve prime
//! bases) and Baillie-PSW above. Factorization extracts primes up to `10^6` by trial
//! division, detects perfect powers, then splits remaining composites with Brent's variant
//! of Pollard's rho followed by the elliptic curve method (Montgomery curves with Suyama's
//! parametrization) on the schedule of the effort level. Rho constants and curve
//! parameters are fixed, so the result depends only on the input and the effort level.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::Error;

mod ecm;
mod mont;

use mont::Mont;

/// Stage-2 bound as a multiple of the stage-1 bound.
const ECM_B2_RATIO: u64 = 100;

pub const TRIAL_DIVISION_BOUND: u32 = 1_000_000;

/// How hard [`factor_integer`] tries before reporting a partial factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Effort {
    /// Trial division and primality tests only.
    Low,
    /// Adds Pollard rho and ECM up to `B1 = 11000` (factors up to about 20 digits).
    #[default]
    Default,
    /// Longer rho and ECM up to `B1 = 250000` (factors up to about 30 digits).
    High,
}

impl Effort {
    /// Rho iteration cap per composite above `2^64`.
    pub fn rho_iterations(self) -> u64 {
        match self {
            Effort::Low => 0,
            Effort::Default => 1 << 16,
            Effort::High => 1 << 20,
        }
    }

    /// `(B1, curves)` stages of ECM, run in order after rho.
    pub fn ecm_schedule(self) -> &'static [(u64, u32)] {
        match self {
            Effort::Low => &[],
            Effort::Default => &[(2_000, 25), (11_000, 90)],
            Effort::High => &[(2_000, 25), (11_000, 90), (50_000, 300), (250_000, 700)],
        }
    }

    /// Rho iteration cap for composites below `2^64`, which always split well within it.
    fn rho_iterations_u64(self) -> u64 {
        match self {
            Effort::Low => 0,
            _ => 1 << 26,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Effort::Low => "low",
            Effort::Default => "default",
            Effort::High => "high",
        }
    }
}

impl fmt::Display for Effort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Effort {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "low" => Ok(Effort::Low),
            "default" => Ok(Effort::Default),
            "high" => Ok(Effort::High),
            other => Err(Error::OutOfRange(format!("unknown effort level {other:?}"))),
        }
    }
}

impl Serialize for Effort {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorStatus {
    Complete,
    Partial,
}

/// `n = cofactor * Π prime^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationResult {
    /// Sorted by prime.
    pub prime_powers: Vec<(BigUint, u32)>,
    /// Unfactored part; `1` exactly when the factorization is complete.
    pub cofactor: BigUint,
    pub status: FactorStatus,
}

impl FactorizationResult {
    pub fn is_complete(&self) -> bool {
        self.status == FactorStatus::Complete
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.prime_powers.iter().map(|(p, _)| p)
    }

    /// `Some(true)` / `Some(false)` when decided, `None` when an unfactored cofactor leaves
    /// the question open. A repeated prime decides it regardless of the cofactor.
    pub fn is_squarefree(&self) -> Option<bool> {
        if self.prime_powers.iter().any(|(_, e)| *e > 1) {
            Some(false)
        } else if self.is_complete() {
            Some(true)
        } else {
            None
        }
    }

    pub fn value(&self) -> BigUint {
        self.prime_powers
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| acc * p.pow(*e))
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_DIVISION_BOUND as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                for j in (i * i..=n).step_by(i) {
                    sieve[j] = false;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

#[inline]
fn mulmod64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod64(r, b, m);
        }
        b = mulmod64(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic primality for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = powmod64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime_base2(n: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut x = BigUint::from(2u32).modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
fn jacobi(a: i64, n: &BigUint) -> i32 {
    let mut result = 1;
    let n_mod8 = (n % 8u32).to_u32().unwrap();
    let mut a_abs = a.unsigned_abs();
    if a < 0 && n_mod8 % 4 == 3 {
        result = -result;
    }
    while a_abs.is_multiple_of(2) && a_abs != 0 {
        a_abs /= 2;
        if n_mod8 == 3 || n_mod8 == 5 {
            result = -result;
        }
    }
    if a_abs == 0 {
        return if n.is_one() { 1 } else { 0 };
    }
    if a_abs == 1 {
        return result;
    }
    // Reciprocity, then finish in u64.
    if a_abs % 4 == 3 && n_mod8 % 4 == 3 {
        result = -result;
    }
    let mut x = (n % a_abs).to_u64().unwrap();
    let mut m = a_abs;
    loop {
        if x == 0 {
            return if m == 1 { result } else { 0 };
        }
        while x.is_multiple_of(2) {
            x /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                result = -result;
            }
        }
        if x == 1 {
            return result;
        }
        if x % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        let t = m % x;
        m = x;
        x = t;
    }
}

fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Strong Lucas probable-prime test with Selfridge's parameters.
fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    if is_perfect_square(n) {
        return false;
    }
    let mut d: i64 = 5;
    loop {
        match jacobi(d, n) {
            -1 => break,
            0 if BigUint::from(d.unsigned_abs()) != *n => {
                return false;
            }
            _ => {}
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
    }
    let nb = BigInt::from(n.clone());
    let modn = |x: BigInt| x.mod_floor(&nb);
    let dd = modn(BigInt::from(d));
    let q = modn(BigInt::from((1 - d) / 4));
    let half = |x: BigInt| {
        let x = if x.is_odd() { x + &nb } else { x };
        x >> 1
    };
    let np1: BigInt = &nb + 1u32;
    let s = np1.trailing_zeros().unwrap_or(0);
    let k = &np1 >> s;
    // U_1 = 1, V_1 = P = 1, Q^1
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = q.clone();
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = modn(&u * &v);
        v = modn(&v * &v - 2 * &qk);
        qk = modn(&qk * &qk);
        if k.bit(i) {
            let nu = half(&u + &v);
            let nv = half(&dd * &u + &v);
            u = modn(nu);
            v = modn(nv);
            qk = modn(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = modn(&v * &v - 2 * &qk);
        if v.is_zero() {
            return true;
        }
        qk = modn(&qk * &qk);
    }
    false
}

/// Primality: deterministic below `2^64`, Baillie-PSW above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(x) = n.to_u64() {
        return is_prime_u64(x);
    }
    for &p in &small_primes()[..200] {
        if (n % p).is_zero() {
            return false;
        }
    }
    strong_probable_prime_base2(n) && strong_lucas_probable_prime(n)
}

/// Integer `k`-th root when `n` is a perfect power with exponent `k >= 2` (largest such `k`).
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    let mut best = None;
    for k in 2..=bits {
        let r = n.nth_root(k);
        if r <= BigUint::one() {
            break;
        }
        if r.pow(k) == *n {
            best = Some((r, k));
        }
    }
    best
}

fn rho_u64(n: u64, cap: u64) -> Option<u64> {
    let mut spent = 0u64;
    let mut c = 1u64;
    while spent < cap {
        let f = |x: u64| (mulmod64(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        const M: u64 = 128;
        while g == 1 && spent < cap {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            spent += r;
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mulmod64(q, x.abs_diff(y), n);
                }
                spent += M.min(r - k);
                g = q.gcd(&n);
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
        c += 1;
    }
    None
}

/// Split an odd composite `m > 2^64` that is not a perfect power.
fn split_big(m: &BigUint, effort: Effort) -> Option<BigUint> {
    let ctx = Mont::new(m);
    if let Some(f) = ecm::rho(&ctx, effort.rho_iterations()) {
        return Some(f);
    }
    let schedule = effort.ecm_schedule();
    if schedule.is_empty() {
        return None;
    }
    let primes = ecm_primes(effort);
    let mut sigma = 6;
    for &(b1, curves) in schedule {
        if let Some(f) = ecm::ecm(&ctx, b1, b1 * ECM_B2_RATIO, curves, sigma, primes) {
            return Some(f);
        }
        sigma += curves as u64;
    }
    None
}

fn ecm_primes(effort: Effort) -> &'static [u64] {
    static CACHE: [OnceLock<Vec<u64>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = match effort {
        Effort::Low => 0,
        Effort::Default => 1,
        Effort::High => 2,
    };
    CACHE[slot].get_or_init(|| {
        let top = effort
            .ecm_schedule()
            .iter()
            .map(|&(b1, _)| b1)
            .max()
            .unwrap_or(0);
        ecm::primes_up_to(top * ECM_B2_RATIO + 2310)
    })
}

/// Factor `n >= 1` as far as `effort` allows.
pub fn factor_integer(n: &BigUint, effort: Effort) -> Result<FactorizationResult, Error> {
    if n.is_zero() {
        return Err(Error::OutOfRange("cannot factor zero".into()));
    }
    let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.clone();
    for &p in small_primes() {
        let p64 = p as u64;
        if let Some(r) = rest.to_u64() {
            if p64 * p64 > r {
                break;
            }
        }
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            found.insert(BigUint::from(p), e);
        }
    }
    let mut cofactor = BigUint::one();
    let mut stack = vec![(rest, 1u32)];
    while let Some((m, mult)) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *found.entry(m).or_insert(0) += mult;
            continue;
        }
        if let Some((root, k)) = perfect_power(&m) {
            stack.push((root, mult * k));
            continue;
        }
        let split = match m.to_u64() {
            Some(small) => rho_u64(small, effort.rho_iterations_u64()).map(BigUint::from),
            None if m.is_even() => Some(BigUint::from(2u32)),
            None => split_big(&m, effort),
        };
        match split {
            Some(d) => {
                let other = &m / &d;
                stack.push((d, mult));
                stack.push((other, mult));
            }
            None => cofactor *= m.pow(mult),
        }
    }
    let status = if cofactor.is_one() {
        FactorStatus::Complete
    } else {
        FactorStatus::Partial
    };
    Ok(FactorizationResult {
        prime_powers: found.into_iter().collect(),
        cofactor,
        status,
    })
}
