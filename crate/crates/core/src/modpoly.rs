//! Dense univariate polynomials over `F_p`, with square-free decomposition.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::scalar::{add_mod, inv_mod, mul_mod, sub_mod};
use crate::Error;

/// Polynomial over `F_p`; coefficients ascending, residues in `[0, p)`, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    /// Coefficients are reduced mod `p` and trailing zeros dropped.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    /// From signed coefficients, ascending.
    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        ModPoly::new(
            p,
            coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(p as i128) as u64)
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        ModPoly { p, coeffs: vec![1] }
    }

    /// The monomial `x`.
    pub fn x(p: u64) -> Self {
        ModPoly {
            p,
            coeffs: vec![0, 1],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; used where the operand is known nonzero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        ModPoly::new(
            self.p,
            self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect(),
        )
    }

    fn check_same(&self, other: &ModPoly) -> Result<(), Error> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.p, other.p))
        }
    }

    pub fn add(&self, other: &ModPoly) -> ModPoly {
        assert_eq!(self.p, other.p);
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| {
                add_mod(
                    *self.coeffs.get(i).unwrap_or(&0),
                    *other.coeffs.get(i).unwrap_or(&0),
                    self.p,
                )
            })
            .collect();
        ModPoly::new(self.p, c)
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        assert_eq!(self.p, other.p);
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| {
                sub_mod(
                    *self.coeffs.get(i).unwrap_or(&0),
                    *other.coeffs.get(i).unwrap_or(&0),
                    self.p,
                )
            })
            .collect();
        ModPoly::new(self.p, c)
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = add_mod(c[i + j], mul_mod(a, b, self.p), self.p);
            }
        }
        ModPoly::new(self.p, c)
    }

    pub fn pow(&self, e: usize) -> ModPoly {
        (0..e).fold(ModPoly::one(self.p), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &ModPoly) -> (ModPoly, ModPoly) {
        assert_eq!(self.p, divisor.p);
        let dd = divisor.degree().expect("division by the zero polynomial");
        let p = self.p;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (ModPoly::zero(p), self.clone());
        }
        let inv = inv_mod(divisor.leading(), p);
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], inv, p);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = sub_mod(rem[k + j], mul_mod(c, d, p), p);
            }
        }
        rem.truncate(dd);
        (ModPoly::new(p, quot), ModPoly::new(p, rem))
    }

    pub fn divides(&self, other: &ModPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Exact quotient, `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &ModPoly) -> Option<ModPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.p;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mul_mod(a, (i as u64) % p, p))
            .collect();
        ModPoly::new(p, c)
    }

    /// `h` with `self = h(x^p)`; requires a zero derivative.
    fn pth_root(&self) -> ModPoly {
        debug_assert!(self.derivative().is_zero());
        let p = self.p as usize;
        ModPoly::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, self.p), c, self.p))
    }
}

/// Monic gcd over `F_p`; zero only when both inputs are zero.
pub fn poly_gcd(a: &ModPoly, b: &ModPoly) -> Result<ModPoly, Error> {
    a.check_same(b)?;
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.div_rem(&y).1;
        x = y;
        y = r;
    }
    Ok(x.monic())
}

/// `f = Π g_j^j` with each `g_j` monic, square-free, pairwise coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub p: u64,
    /// `(g_j, j)` with strictly increasing multiplicity `j`.
    pub parts: Vec<(ModPoly, usize)>,
}

impl SquarefreeDecomposition {
    pub fn expand(&self) -> ModPoly {
        self.parts
            .iter()
            .fold(ModPoly::one(self.p), |acc, (g, j)| acc.mul(&g.pow(*j)))
    }
}

fn require_monic(f: &ModPoly) -> Result<(), Error> {
    if f.is_zero() {
        Err(Error::InvalidPolynomial("zero polynomial".into()))
    } else if !f.is_monic() {
        Err(Error::InvalidPolynomial(format!("{f} is not monic")))
    } else {
        Ok(())
    }
}

/// Square-free decomposition in characteristic `p`.
///
/// The repeated-gcd loop peels off factors whose multiplicity is prime to `p`; what remains
/// has zero derivative, i.e. is `h(x^p)`, and its decomposition is that of `h` with every
/// multiplicity scaled by `p` (coefficient `p`-th roots are the identity on `F_p`).
pub fn squarefree_decomposition(f: &ModPoly) -> Result<SquarefreeDecomposition, Error> {
    require_monic(f)?;
    let p = f.p;
    let mut parts = Vec::new();
    sqf_rec(f, 1, &mut parts);
    parts.sort_by_key(|(_, j)| *j);
    debug_assert!(parts.windows(2).all(|w| w[0].1 < w[1].1));
    Ok(SquarefreeDecomposition { p, parts })
}

fn sqf_rec(f: &ModPoly, scale: usize, out: &mut Vec<(ModPoly, usize)>) {
    if f.deg() == 0 {
        return;
    }
    let df = f.derivative();
    let mut c = poly_gcd(f, &df).expect("same modulus");
    let mut w = f.exact_div(&c).expect("gcd divides f");
    let mut i = 1;
    while !w.is_one() {
        let y = poly_gcd(&w, &c).expect("same modulus");
        let fac = w.exact_div(&y).expect("gcd divides w");
        if !fac.is_one() {
            out.push((fac, i * scale));
        }
        c = c.exact_div(&y).expect("gcd divides c");
        w = y;
        i += 1;
    }
    if !c.is_one() {
        sqf_rec(&c.pth_root(), scale * f.p as usize, out);
    }
}

/// Square-free part: product of the distinct monic irreducible factors.
pub fn sfp(f: &ModPoly) -> Result<ModPoly, Error> {
    let d = squarefree_decomposition(f)?;
    Ok(d.parts
        .iter()
        .fold(ModPoly::one(f.p), |acc, (g, _)| acc.mul(g)))
}

/// `Π f_i^⌈e_i/2⌉` over the irreducible factorization; computed part-wise from the
/// square-free decomposition, which groups irreducibles of equal multiplicity.
pub fn sqrt_poly(f: &ModPoly) -> Result<ModPoly, Error> {
    let d = squarefree_decomposition(f)?;
    Ok(d.parts.iter().fold(ModPoly::one(f.p), |acc, (g, j)| {
        acc.mul(&g.pow(j.div_ceil(2)))
    }))
}

impl fmt::Display for ModPoly {
    /// Descending powers with zero terms omitted, e.g. `x^4+2x^3+2x^2+x+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if k == 0 || c != 1 {
                write!(f, "{c}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for ModPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mp(p: u64, c: &[i64]) -> ModPoly {
        ModPoly::from_i64(p, c)
    }

    #[test]
    fn display_format() {
        assert_eq!(mp(3, &[1, 1, 2, 2, 1]).to_string(), "x^4+2x^3+2x^2+x+1");
        assert_eq!(mp(3, &[2, 1]).to_string(), "x+2");
        assert_eq!(mp(5, &[1]).to_string(), "1");
        assert_eq!(mp(5, &[]).to_string(), "0");
        assert_eq!(mp(5, &[0, 0, 1]).to_string(), "x^2");
    }

    #[test]
    fn gcd_examples() {
        let g = poly_gcd(&mp(5, &[-1, 0, 1]), &mp(5, &[-1, 1])).unwrap();
        assert_eq!(g, mp(5, &[4, 1]));
        let f = mp(7, &[2, 4, 6]);
        assert_eq!(poly_gcd(&f, &ModPoly::zero(7)).unwrap(), f.monic());
        assert!(poly_gcd(&mp(3, &[0, 1]), &mp(3, &[-1, 1]))
            .unwrap()
            .is_one());
        assert!(matches!(
            poly_gcd(&mp(3, &[1]), &mp(5, &[1])),
            Err(Error::ModulusMismatch(3, 5))
        ));
    }

    #[test]
    fn squarefree_examples() {
        let q = mp(3, &[2, 1, 1]); // x^2+x+2
        let f = q.mul(&q);
        assert_eq!(f, mp(3, &[1, 1, 2, 2, 1]));
        let d = squarefree_decomposition(&f).unwrap();
        assert_eq!(d.parts, vec![(q.clone(), 2)]);
        assert_eq!(sfp(&f).unwrap(), q);
        assert_eq!(sqrt_poly(&f).unwrap(), q);

        let sf = mp(5, &[1, 1, 0, 1]);
        assert_eq!(
            squarefree_decomposition(&sf).unwrap().parts,
            vec![(sf.clone(), 1)]
        );
        assert_eq!(sfp(&sf).unwrap(), sf);
        assert_eq!(sqrt_poly(&sf).unwrap(), sf);

        let x3 = mp(3, &[0, 0, 0, 1]);
        assert_eq!(
            squarefree_decomposition(&x3).unwrap().parts,
            vec![(ModPoly::x(3), 3)]
        );
        assert_eq!(sfp(&mp(5, &[0, 0, 0, 0, 0, 1])).unwrap(), ModPoly::x(5));

        let cube = mp(5, &[-1, 1]).pow(3);
        assert_eq!(sqrt_poly(&cube).unwrap(), mp(5, &[-1, 1]).pow(2));

        assert!(squarefree_decomposition(&ModPoly::zero(3)).is_err());
        assert!(sfp(&mp(3, &[1, 2])).is_err());
    }

    #[test]
    fn mixed_multiplicities_in_char_p() {
        // (x+1)^4 (x+2)^3 x over F_3: the exponent 3 goes through the p-th root branch.
        let f = mp(3, &[1, 1])
            .pow(4)
            .mul(&mp(3, &[2, 1]).pow(3))
            .mul(&ModPoly::x(3));
        let d = squarefree_decomposition(&f).unwrap();
        assert_eq!(d.expand(), f);
        let mults: Vec<usize> = d.parts.iter().map(|(_, j)| *j).collect();
        assert_eq!(mults, vec![1, 3, 4]);
        assert_eq!(
            sqrt_poly(&f).unwrap(),
            mp(3, &[1, 1])
                .pow(2)
                .mul(&mp(3, &[2, 1]).pow(2))
                .mul(&ModPoly::x(3))
        );
    }

    /// Monic irreducibles of degree <= 2 over F_p by brute force (no roots test).
    fn small_irreducibles(p: u64) -> Vec<ModPoly> {
        let mut out: Vec<ModPoly> = (0..p).map(|a| ModPoly::new(p, vec![a, 1])).collect();
        for b in 0..p {
            for a in 0..p {
                let f = ModPoly::new(p, vec![a, b, 1]);
                if (0..p).all(|x| f.eval(x) != 0) {
                    out.push(f);
                }
            }
        }
        out
    }

    fn build(p: u64, picks: &[(usize, usize)]) -> ModPoly {
        let irr = small_irreducibles(p);
        let mut used = std::collections::BTreeMap::new();
        for &(idx, e) in picks {
            *used.entry(idx % irr.len()).or_insert(0) += e;
        }
        let mut f = ModPoly::one(p);
        for (idx, e) in used {
            if f.deg() + irr[idx].deg() * e <= 12 {
                f = f.mul(&irr[idx].pow(e));
            }
        }
        f
    }

    proptest! {
        #[test]
        fn decomposition_invariants(
            p in prop::sample::select(vec![3u64, 5]),
            picks in prop::collection::vec((0usize..40, 1usize..=4), 0..6),
        ) {
            let f = build(p, &picks);
            let d = squarefree_decomposition(&f).unwrap();
            prop_assert_eq!(d.expand(), f.clone());
            for (i, (g, _)) in d.parts.iter().enumerate() {
                prop_assert!(g.is_monic());
                prop_assert!(poly_gcd(g, &g.derivative()).unwrap().is_one());
                for (h, _) in &d.parts[i + 1..] {
                    prop_assert!(poly_gcd(g, h).unwrap().is_one());
                }
            }
            let s = sfp(&f).unwrap();
            let r = sqrt_poly(&f).unwrap();
            prop_assert!(s.divides(&r));
            prop_assert!(r.divides(&f));
            prop_assert_eq!(sfp(&s).unwrap(), s.clone());
            prop_assert!(poly_gcd(&s, &s.derivative()).unwrap().is_one() || s.deg() == 0);
        }

        #[test]
        fn gcd_laws(
            p in prop::sample::select(vec![3u64, 5]),
            a in prop::collection::vec((0usize..40, 1usize..=3), 0..4),
            b in prop::collection::vec((0usize..40, 1usize..=3), 0..4),
            c in prop::collection::vec((0usize..40, 1usize..=3), 0..4),
        ) {
            let (a, b, c) = (build(p, &a), build(p, &b), build(p, &c));
            prop_assert_eq!(poly_gcd(&a, &b).unwrap(), poly_gcd(&b, &a).unwrap());
            let left = poly_gcd(&poly_gcd(&a, &b).unwrap(), &c).unwrap();
            let right = poly_gcd(&a, &poly_gcd(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert_eq!(poly_gcd(&a, &a).unwrap(), a.monic());
            let g = poly_gcd(&a, &b).unwrap();
            prop_assert!(g.divides(&a) && g.divides(&b));
        }
    }
}
