//! Spectral invariants of a graph over `F_p`.
//!
//! For an odd prime `p`, with `A` the adjacency matrix, `J` the all-ones matrix and `W` the
//! walk matrix:
//!
//! - `Φ_p = gcd(χ(A), χ(A+J))` over `F_p`, invariant under generalized cospectrality;
//! - the p-main polynomial `m_p`, the monic `f` of least degree with `f(A)e ≡ 0 (mod p)`;
//! - `χ(A | N(W^T))`, the characteristic polynomial of `A` on the `F_p`-nullspace of `W^T`
//!   (an `A`-invariant subspace);
//! - the reduced walk matrix `W̄`, which divides `k = nullity_p W` columns of a
//!   unimodular transform of `W` by `p`.
//!
//! These satisfy `deg sfp(Φ_p) ≤ nullity_p W ≤ deg Φ_p`,
//! `sfp(Φ_p) | χ(A|N(W^T)) | Φ_p` and `m_p · χ(A|N(W^T)) = χ(A)`. [`phi_report`] checks all
//! of them on every call and reports a failure as [`Error::Invariant`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::fpalg::{char_poly_mod_p, check_odd_prime};
use crate::graph::Graph;
use crate::linalg::{adjacency_apply, nullspace, poly_apply_graph, rank, row_echelon, walk_matrix};
use crate::matrix::{FpMatrix, IntMatrix, Matrix};
use crate::modpoly::{poly_gcd, sfp, sqrt_poly, ModPoly};
use crate::scalar::Fp;
use crate::Error;

fn adjacency_mod_p(g: &Graph, p: u64, shift: u64) -> FpMatrix {
    Matrix::from_fn(g.order(), g.order(), |i, j| {
        Fp::new(g.has_edge(i, j) as u64 + shift, p)
    })
}

/// `χ(A + tJ)` over `F_p`.
pub fn char_poly_shifted(g: &Graph, t: u64, p: u64) -> Result<ModPoly, Error> {
    char_poly_mod_p(&adjacency_mod_p(g, p, t % p), p)
}

/// `Φ_p(G) = gcd(χ(A), χ(A+J))` over `F_p`.
pub fn phi_p(g: &Graph, p: u64) -> Result<ModPoly, Error> {
    check_odd_prime(p)?;
    let a = char_poly_shifted(g, 0, p)?;
    let aj = char_poly_shifted(g, 1, p)?;
    poly_gcd(&a, &aj)
}

/// Walk matrix reduced mod `p`, computed without big integers.
pub fn walk_matrix_mod_p(g: &Graph, p: u64) -> FpMatrix {
    shifted_walk_matrix_mod_p(g, 0, p)
}

/// `W_t = [e, (A+tJ)e, .., (A+tJ)^{n-1}e]` mod `p`.
pub fn shifted_walk_matrix_mod_p(g: &Graph, t: u64, p: u64) -> FpMatrix {
    let n = g.order();
    let mut w = Matrix::from_fn(n, n, |_, _| Fp::new(0, p));
    let mut col = vec![Fp::new(1, p); n];
    let t = Fp::new(t % p, p);
    for k in 0..n {
        for (i, c) in col.iter().enumerate() {
            w[(i, k)] = *c;
        }
        let total = col.iter().fold(Fp::new(0, p), |acc, &x| acc + x);
        let shift = t * total;
        col = adjacency_apply(g, &col)
            .into_iter()
            .map(|x| x + shift)
            .collect();
    }
    w
}

/// `nullity_p W`.
pub fn walk_nullity_p(g: &Graph, p: u64) -> Result<usize, Error> {
    check_odd_prime(p)?;
    Ok(g.order() - rank(&walk_matrix_mod_p(g, p)))
}

/// The p-main polynomial `m_p(G)`.
///
/// With `r = rank_p W`, the first `r` columns of `W` are independent mod `p`, so a single
/// echelon pass over `[e, Ae, .., A^r e]` yields the relation `A^r e = Σ c_i A^i e`.
pub fn p_main_poly(g: &Graph, p: u64) -> Result<ModPoly, Error> {
    check_odd_prime(p)?;
    let n = g.order();
    let w = walk_matrix_mod_p(g, p);
    let r = rank(&w);
    // Columns e, .., A^r e; A^n e is needed when r = n.
    let mut cols: Vec<Vec<Fp>> = (0..r).map(|k| w.column(k)).collect();
    let last = if r == 0 {
        vec![Fp::new(1, p); n]
    } else {
        adjacency_apply(g, &cols[r - 1])
    };
    cols.push(last);
    let krylov = Matrix::from_fn(n, r + 1, |i, j| cols[j][i]);
    let (rref, pivots) = row_echelon(&krylov);
    if pivots != (0..r).collect::<Vec<_>>() {
        return Err(Error::Invariant(format!(
            "leading {r} walk columns are not independent mod {p}"
        )));
    }
    let mut coeffs: Vec<u64> = (0..r).map(|i| (-rref[(i, r)]).value()).collect();
    coeffs.push(1);
    let m = ModPoly::new(p, coeffs);
    let check = apply_modpoly(g, &m, &vec![Fp::new(1, p); n]);
    if check.iter().any(|x| !x.is_zero()) {
        return Err(Error::Invariant(format!("m_p(A)e != 0 mod {p}")));
    }
    Ok(m)
}

/// `f(A) v` over `F_p` by Horner's rule.
fn apply_modpoly(g: &Graph, f: &ModPoly, v: &[Fp]) -> Vec<Fp> {
    let p = f.modulus();
    let mut acc = vec![Fp::new(0, p); v.len()];
    for &c in f.coeffs().iter().rev() {
        acc = adjacency_apply(g, &acc);
        let c = Fp::new(c, p);
        for (a, x) in acc.iter_mut().zip(v) {
            *a = *a + c * *x;
        }
    }
    acc
}

/// Reduced-echelon basis of the `F_p`-nullspace of `W^T`.
pub fn walk_left_nullspace(g: &Graph, p: u64) -> Result<Vec<Vec<Fp>>, Error> {
    check_odd_prime(p)?;
    Ok(nullspace(&walk_matrix_mod_p(g, p).transpose()))
}

/// `χ(A | N(W^T))` over `F_p`.
///
/// For the echelon basis `B` each vector has a `1` at its own free coordinate and `0` at the
/// others, so the coordinates of `A b_j` in the basis are read off at the free coordinates;
/// the product `B X = A B` is then re-checked exactly.
pub fn restricted_char_poly(g: &Graph, p: u64) -> Result<ModPoly, Error> {
    let basis = walk_left_nullspace(g, p)?;
    let k = basis.len();
    if k == 0 {
        return Ok(ModPoly::one(p));
    }
    let n = g.order();
    let free: Vec<usize> = basis
        .iter()
        .map(|b| {
            (0..n)
                .find(|&i| {
                    b[i].value() == 1 && basis.iter().filter(|o| !o[i].is_zero()).count() == 1
                })
                .expect("echelon basis has a pivot coordinate")
        })
        .collect();
    let images: Vec<Vec<Fp>> = basis.iter().map(|b| adjacency_apply(g, b)).collect();
    let x = Matrix::from_fn(k, k, |i, j| images[j][free[i]] + Fp::new(0, p));
    for (j, image) in images.iter().enumerate() {
        for row in 0..n {
            let recon = (0..k).fold(Fp::new(0, p), |acc, i| acc + basis[i][row] * x[(i, j)]);
            if recon != image[row] + Fp::new(0, p) {
                return Err(Error::Invariant(format!(
                    "N(W^T) is not A-invariant mod {p}"
                )));
            }
        }
    }
    char_poly_mod_p(&x, p)
}

/// The reduced walk matrix `W̄` for `p | det W`.
///
/// With `k = nullity_p W` and `f` the lift of `m_p` with coefficients in `[0, p)`, its
/// columns are `e, Ae, .., A^{n-k-1}e` followed by `A^i f(A)e / p` for `i < k`. All
/// entries are integral and `det W̄ = det W / p^k`.
pub fn reduced_walk_matrix(g: &Graph, p: u64) -> Result<IntMatrix, Error> {
    let m = p_main_poly(g, p)?;
    let n = g.order();
    let r = m.deg();
    let k = n - r;
    if k == 0 {
        return Err(Error::PrimeDoesNotDivide(p));
    }
    let w = walk_matrix(g);
    let lift: Vec<BigInt> = m.coeffs().iter().map(|&c| BigInt::from(c)).collect();
    let e = vec![BigInt::from(1); n];
    let mut v = poly_apply_graph(g, &lift, &e);
    let pb = BigInt::from(p);
    let mut out = IntMatrix::zeros(n, n);
    for j in 0..r {
        for i in 0..n {
            out[(i, j)] = w[(i, j)].clone();
        }
    }
    for j in r..n {
        for i in 0..n {
            let (q, rem) = v[i].div_rem(&pb);
            if !rem.is_zero() {
                return Err(Error::Invariant(format!(
                    "column {j} of the reduced walk matrix is not divisible by {p}"
                )));
            }
            out[(i, j)] = q;
        }
        v = adjacency_apply(g, &v);
    }
    Ok(out)
}

/// Every `F_p` invariant of `(G, p)` with the proven relations between them checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub p: u64,
    pub nullity: usize,
    pub phi: ModPoly,
    pub sfp_phi: ModPoly,
    pub sqrt_phi: ModPoly,
    #[serde(rename = "m_p")]
    pub p_main: ModPoly,
    #[serde(rename = "restricted")]
    pub restricted_charpoly: ModPoly,
    /// `χ(A)` mod `p`.
    #[serde(skip)]
    pub char_poly: ModPoly,
    /// `deg sfp(Φ_p) = nullity_p W`, the per-prime certification condition.
    pub condition_holds: bool,
}

impl PhiReport {
    /// `deg sfp(Φ_p) = nullity_p W`.
    pub fn nullity_condition_holds(&self) -> bool {
        self.sfp_phi.deg() == self.nullity
    }

    pub fn sqrt_degree_within_nullity(&self) -> bool {
        self.sqrt_phi.deg() <= self.nullity
    }

    pub fn sqrt_divides_restricted(&self) -> bool {
        self.sqrt_phi.divides(&self.restricted_charpoly)
    }

    /// `deg sqrt(Φ_p) = nullity_p W`.
    pub fn sqrt_condition_holds(&self) -> bool {
        self.sqrt_phi.deg() == self.nullity
    }
}

/// Compute and cross-check all invariants for `(g, p)`.
pub fn phi_report(g: &Graph, p: u64) -> Result<PhiReport, Error> {
    check_odd_prime(p)?;
    let n = g.order();
    let char_poly = char_poly_shifted(g, 0, p)?;
    let phi = poly_gcd(&char_poly, &char_poly_shifted(g, 1, p)?)?;
    let sfp_phi = sfp(&phi)?;
    let sqrt_phi = sqrt_poly(&phi)?;
    let nullity = walk_nullity_p(g, p)?;
    let restricted = restricted_char_poly(g, p)?;
    let p_main = p_main_poly(g, p)?;

    let fail = |what: String| Err(Error::Invariant(format!("{what} (p = {p})")));
    if !(sfp_phi.deg() <= nullity && nullity <= phi.deg()) {
        return fail(format!(
            "deg sfp(Φ) = {} <= nullity = {} <= deg Φ = {} fails",
            sfp_phi.deg(),
            nullity,
            phi.deg()
        ));
    }
    if restricted.deg() != nullity {
        return fail(format!(
            "restricted char poly has degree {} but nullity is {nullity}",
            restricted.deg()
        ));
    }
    if !restricted.divides(&phi) {
        return fail(format!("{restricted} does not divide Φ = {phi}"));
    }
    if !sfp_phi.divides(&restricted) {
        return fail(format!("sfp(Φ) = {sfp_phi} does not divide {restricted}"));
    }
    if p_main.deg() != n - nullity {
        return fail(format!("deg m_p = {} != n - nullity", p_main.deg()));
    }
    if p_main.mul(&restricted) != char_poly {
        return fail("m_p · χ(A|N(W^T)) != χ(A)".to_string());
    }
    let condition_holds = sfp_phi.deg() == nullity;
    if condition_holds && char_poly.exact_div(&sfp_phi).as_ref() != Some(&p_main) {
        return fail("m_p != χ(A) / sfp(Φ) although deg sfp(Φ) = nullity".to_string());
    }
    if nullity == 1 && sfp_phi.deg() != 1 {
        return fail("nullity 1 with deg sfp(Φ) != 1".to_string());
    }
    Ok(PhiReport {
        p,
        nullity,
        phi,
        sfp_phi,
        sqrt_phi,
        p_main,
        restricted_charpoly: restricted,
        char_poly,
        condition_holds,
    })
}
