//! Brent-Pollard rho and Lenstra's elliptic curve method over [`Mont`] residues.
//!
//! ECM uses Montgomery curves `By^2 = x^3 + Ax^2 + x` in `(X : Z)` coordinates with
//! Suyama's parametrization. Stage 1 multiplies by every prime power up to `B1`; stage 2
//! is the standard continuation over primes in `(B1, B2]` with a baby-step table of
//! residues coprime to `D = 2310`. Curves are indexed by `σ = 6, 7, ..`, so results are
//! deterministic.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use super::mont::{Mont, Residue};

/// Nontrivial factor of `g` against `n`, if any.
fn proper(g: BigUint, n: &BigUint) -> Option<BigUint> {
    (!g.is_one() && g != *n).then_some(g)
}

/// Brent's rho with batched gcds; `cap` bounds the total number of iterations.
pub(crate) fn rho(ctx: &Mont, cap: u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let n = ctx.modulus();
    let mut spent = 0u64;
    let mut c = 1u64;
    let mut tmp = ctx.zero();
    while spent < cap {
        let cm = ctx.small(c);
        let step = |y: &mut Residue, tmp: &mut Residue| {
            ctx.sqr(y, tmp);
            ctx.add(tmp, &cm, y);
        };
        let mut y = ctx.small(2);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = ctx.small(1);
        let mut diff = ctx.zero();
        let mut g = BigUint::one();
        let mut r = 1u64;
        while g.is_one() && spent < cap {
            x.clone_from(&y);
            for _ in 0..r {
                step(&mut y, &mut tmp);
            }
            spent += r;
            let mut k = 0;
            while k < r && g.is_one() {
                ys.clone_from(&y);
                let m = BATCH.min(r - k);
                for _ in 0..m {
                    step(&mut y, &mut tmp);
                    ctx.sub(&x, &y, &mut diff);
                    ctx.mul_assign(&mut q, &diff);
                }
                spent += m;
                g = ctx.raw(&q).gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == *n {
            // Back up and take single gcds from the last saved point.
            loop {
                step(&mut ys, &mut tmp);
                ctx.sub(&x, &ys, &mut diff);
                g = ctx.raw(&diff).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if let Some(f) = proper(g, n) {
            return Some(f);
        }
        c += 1;
    }
    None
}

/// Projective x-only point.
#[derive(Clone)]
struct Point {
    x: Residue,
    z: Residue,
}

struct Curve<'a> {
    ctx: &'a Mont,
    /// `(A + 2) / 4`.
    a24: Residue,
    t: [Residue; 4],
}

impl<'a> Curve<'a> {
    fn dbl(&mut self, p: &Point, out: &mut Point) {
        let c = self.ctx;
        let [t1, t2, t3, t4] = &mut self.t;
        c.add(&p.x, &p.z, t1);
        c.sqr(t1, t3); // (X+Z)^2
        c.sub(&p.x, &p.z, t1);
        c.sqr(t1, t4); // (X-Z)^2
        c.mul(t3, t4, &mut out.x);
        c.sub(t3, t4, t1); // 4XZ
        c.mul(&self.a24, t1, t2);
        c.add(t2, t4, t3);
        c.mul(t1, t3, &mut out.z);
    }

    /// `out = p + q` given `diff = p - q`.
    fn add(&mut self, p: &Point, q: &Point, diff: &Point, out: &mut Point) {
        let c = self.ctx;
        let [t1, t2, t3, t4] = &mut self.t;
        c.sub(&p.x, &p.z, t1);
        c.add(&q.x, &q.z, t2);
        c.mul(t1, t2, t3); // u
        c.add(&p.x, &p.z, t1);
        c.sub(&q.x, &q.z, t2);
        c.mul(t1, t2, t4); // v
        c.add(t3, t4, t1);
        c.sqr(t1, t2);
        c.sub(t3, t4, t1);
        c.sqr(t1, t3);
        c.mul(&diff.z, t2, &mut out.x);
        c.mul(&diff.x, t3, &mut out.z);
    }

    /// `[k] p` by the Montgomery ladder.
    fn ladder(&mut self, p: &Point, k: u64) -> Point {
        if k == 1 {
            return p.clone();
        }
        let mut r0 = p.clone();
        let mut r1 = p.clone();
        self.dbl(p, &mut r1);
        let mut tmp = p.clone();
        for i in (0..63 - k.leading_zeros()).rev() {
            if (k >> i) & 1 == 1 {
                self.add(&r1, &r0, p, &mut tmp);
                std::mem::swap(&mut r0, &mut tmp);
                self.dbl(&r1, &mut tmp);
                std::mem::swap(&mut r1, &mut tmp);
            } else {
                self.add(&r1, &r0, p, &mut tmp);
                std::mem::swap(&mut r1, &mut tmp);
                self.dbl(&r0, &mut tmp);
                std::mem::swap(&mut r0, &mut tmp);
            }
        }
        r0
    }
}

/// Primes up to `bound` by a plain sieve.
pub(crate) fn primes_up_to(bound: u64) -> Vec<u64> {
    let b = bound as usize;
    let mut sieve = vec![true; b + 1];
    let mut out = Vec::new();
    for i in 2..=b {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= b {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

const D: u64 = 2310;

/// Run `curves` ECM curves with stage bounds `b1`, `b2`; the first curve uses `σ = sigma0`.
pub(crate) fn ecm(
    ctx: &Mont,
    b1: u64,
    b2: u64,
    curves: u32,
    sigma0: u64,
    primes: &[u64],
) -> Option<BigUint> {
    let n = ctx.modulus();
    let mut is_prime_tab = vec![false; (b2 + D + 1) as usize];
    for &p in primes.iter().take_while(|&&p| p <= b2 + D) {
        is_prime_tab[p as usize] = true;
    }
    for i in 0..curves as u64 {
        match one_curve(ctx, b1, b2, sigma0 + i, primes, &is_prime_tab) {
            Ok(()) => {}
            Err(g) => {
                if let Some(f) = proper(g, n) {
                    return Some(f);
                }
            }
        }
    }
    None
}

/// `Err(g)` carries a gcd found along the way; `Ok` means the curve found nothing.
fn one_curve(
    ctx: &Mont,
    b1: u64,
    b2: u64,
    sigma: u64,
    primes: &[u64],
    is_prime_tab: &[bool],
) -> Result<(), BigUint> {
    let n = ctx.modulus();
    let (mut a, mut b, mut c) = (ctx.zero(), ctx.zero(), ctx.zero());
    let s = ctx.small(sigma);
    // u = σ^2 - 5, v = 4σ
    ctx.sqr(&s, &mut a);
    let u = {
        let mut u = ctx.zero();
        ctx.sub(&a, &ctx.small(5), &mut u);
        u
    };
    let v = {
        let mut v = ctx.zero();
        ctx.mul(&s, &ctx.small(4), &mut v);
        v
    };
    // x0 = u^3, z0 = v^3
    let mut u3 = ctx.zero();
    ctx.sqr(&u, &mut a);
    ctx.mul(&a, &u, &mut u3);
    let mut v3 = ctx.zero();
    ctx.sqr(&v, &mut a);
    ctx.mul(&a, &v, &mut v3);
    // a24 = (v - u)^3 (3u + v) / (16 u^3 v)
    ctx.sub(&v, &u, &mut a);
    ctx.sqr(&a, &mut b);
    ctx.mul(&b, &a, &mut c); // (v-u)^3
    ctx.add(&u, &u, &mut a);
    ctx.add(&a, &u, &mut b);
    ctx.add(&b, &v, &mut a); // 3u + v
    let mut num = ctx.zero();
    ctx.mul(&c, &a, &mut num);
    ctx.mul(&u3, &v, &mut a);
    ctx.mul(&a, &ctx.small(16), &mut b);
    let den_inv = ctx.inverse(&b)?;
    let mut a24 = ctx.zero();
    ctx.mul(&num, &den_inv, &mut a24);

    let mut curve = Curve {
        ctx,
        a24,
        t: [ctx.zero(), ctx.zero(), ctx.zero(), ctx.zero()],
    };
    let mut q = Point { x: u3, z: v3 };

    for &p in primes.iter().take_while(|&&p| p <= b1) {
        let mut pk = p;
        while pk <= b1 / p {
            pk *= p;
        }
        q = curve.ladder(&q, pk);
    }
    if let Some(f) = proper(ctx.raw(&q.z).gcd(n), n) {
        return Err(f);
    }
    if Mont::is_zero(&q.z) {
        return Ok(());
    }

    // Stage 2: baby steps [d]Q for odd d <= D/2 coprime to D, giant steps [mD]Q.
    let half = (D / 2) as usize;
    let mut baby: Vec<Option<Point>> = vec![None; half + 1];
    let mut q2 = q.clone();
    curve.dbl(&q, &mut q2);
    baby[1] = Some(q.clone());
    let mut prev = q.clone();
    let mut cur = q.clone();
    curve.add(&q2, &q, &q, &mut cur);
    let mut next = q.clone();
    for d in (3..=half).step_by(2) {
        if (d as u64).gcd(&D) == 1 {
            baby[d] = Some(cur.clone());
        }
        curve.add(&cur, &q2, &prev, &mut next);
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    let qd = curve.ladder(&q, D);
    let mut m = (b1 / D).max(1);
    let mut giant = curve.ladder(&q, m * D);
    let mut giant_next = curve.ladder(&q, (m + 1) * D);

    let mut acc = ctx.small(1);
    let (mut t1, mut t2, mut t3) = (ctx.zero(), ctx.zero(), ctx.zero());
    let mut steps = 0u32;
    while m * D <= b2 + D / 2 {
        for (dd, bp) in baby.iter().enumerate() {
            let Some(bp) = bp else { continue };
            let hi = m * D + dd as u64;
            let lo = m * D - dd as u64;
            let hit = |x: u64| x > b1 && x <= b2 && is_prime_tab[x as usize];
            if hit(hi) || hit(lo) {
                ctx.mul(&giant.x, &bp.z, &mut t1);
                ctx.mul(&bp.x, &giant.z, &mut t2);
                ctx.sub(&t1, &t2, &mut t3);
                ctx.mul_assign(&mut acc, &t3);
            }
        }
        steps += 1;
        if steps.is_multiple_of(64) {
            if let Some(f) = proper(ctx.raw(&acc).gcd(n), n) {
                return Err(f);
            }
        }
        curve.add(&giant_next, &qd, &giant, &mut next);
        std::mem::swap(&mut giant, &mut giant_next);
        std::mem::swap(&mut giant_next, &mut next);
        m += 1;
    }
    match proper(ctx.raw(&acc).gcd(n), n) {
        Some(f) => Err(f),
        None => Ok(()),
    }
}
