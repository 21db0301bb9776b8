//! Exact matrix algorithms, generic over the scalar type.
//!
//! - [`determinant`]: Bareiss fraction-free elimination (every division is exact).
//! - [`char_poly`]: Berkowitz's division-free algorithm, usable over any commutative ring.
//! - [`smith_normal_form`]: elimination with smallest-nonzero pivoting.
//! - [`row_echelon`], [`rank`], [`nullspace`], [`solve`]: Gauss-Jordan over a field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::graph::Graph;
use crate::matrix::{IntMatrix, Matrix, RatMatrix};
use crate::poly::Poly;
use crate::scalar::{Field, FieldScalar, Scalar};
use crate::Error;

/// `W = [e, Ae, .., A^{n-1}e]`: column `k` counts walks of length `k` from each vertex.
pub fn walk_matrix(g: &Graph) -> IntMatrix {
    let n = g.order();
    let mut w = IntMatrix::zeros(n, n);
    let mut col = vec![BigInt::one(); n];
    for k in 0..n {
        for (i, c) in col.iter().enumerate() {
            w[(i, k)] = c.clone();
        }
        if k + 1 < n {
            col = adjacency_apply(g, &col);
        }
    }
    w
}

/// `A v` for the adjacency matrix of `g`.
pub(crate) fn adjacency_apply<T: Scalar>(g: &Graph, v: &[T]) -> Vec<T> {
    g.rows()
        .iter()
        .map(|&row| {
            let mut acc = T::zero();
            let mut r = row;
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                r &= r - 1;
                acc = acc + v[j].clone();
            }
            acc
        })
        .collect()
}

/// Determinant by Bareiss elimination with row pivoting.
///
/// Over an integral domain every division performed is exact, so `T` may be `BigInt` or a
/// machine integer as well as a field.
pub fn determinant<T: FieldScalar>(m: &Matrix<T>) -> Result<T, Error> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(T::one());
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    negate = !negate;
                }
                None => return Ok(T::zero()),
            }
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            let aik = a[(i, k)].clone();
            for j in k + 1..n {
                let v = pivot.clone() * a[(i, j)].clone() - aik.clone() * a[(k, j)].clone();
                a[(i, j)] = v / prev.clone();
            }
            a[(i, k)] = T::zero();
        }
        prev = pivot;
    }
    let d = a[(n - 1, n - 1)].clone();
    Ok(if negate { -d } else { d })
}

/// Characteristic polynomial `det(xI - M)` by Berkowitz's algorithm.
///
/// Uses only ring operations, `O(n^4)` of them. The result is monic of degree `n`.
pub fn char_poly<T: Scalar>(m: &Matrix<T>) -> Result<Poly<T>, Error> {
    let n = m.require_square()?;
    // Coefficients in descending order of the leading r x r block's char poly.
    let mut c: Vec<T> = vec![T::one()];
    for r in 0..n {
        let mut t: Vec<T> = Vec::with_capacity(r + 2);
        t.push(T::one());
        t.push(-m[(r, r)].clone());
        // t[k + 2] = -R A_r^k S with R = M[r, ..r], S = M[..r, r], A_r = M[..r, ..r]
        let mut v: Vec<T> = (0..r).map(|i| m[(i, r)].clone()).collect();
        for k in 0..r {
            let mut dot = T::zero();
            for (j, vj) in v.iter().enumerate() {
                let rj = &m[(r, j)];
                if !rj.is_zero() && !vj.is_zero() {
                    dot = dot + rj.clone() * vj.clone();
                }
            }
            t.push(-dot);
            if k + 1 < r {
                v = (0..r)
                    .map(|i| {
                        let mut acc = T::zero();
                        for (j, vj) in v.iter().enumerate() {
                            let a = &m[(i, j)];
                            if !a.is_zero() && !vj.is_zero() {
                                acc = acc + a.clone() * vj.clone();
                            }
                        }
                        acc
                    })
                    .collect();
            }
        }
        let next: Vec<T> = (0..r + 2)
            .map(|i| {
                let mut acc = T::zero();
                for (j, cj) in c.iter().enumerate().take(i + 1) {
                    let tij = &t[i - j];
                    if !tij.is_zero() && !cj.is_zero() {
                        acc = acc + tij.clone() * cj.clone();
                    }
                }
                acc
            })
            .collect();
        c = next;
    }
    c.reverse();
    Ok(Poly::new(c))
}

/// Invariant factors `d_1 | d_2 | .. | d_n` of a square integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnfResult<T> {
    pub factors: Vec<T>,
    /// Sign of the determinant; `0` for a singular matrix.
    pub det_sign: i8,
}

impl<T: Integer + Clone> SnfResult<T> {
    /// The last invariant factor `d_n`.
    pub fn last(&self) -> Option<&T> {
        self.factors.last()
    }

    pub fn product(&self) -> T {
        self.factors.iter().fold(T::one(), |acc, d| acc * d.clone())
    }

    /// Number of invariant factors divisible by `m`.
    pub fn count_divisible_by(&self, m: &T) -> usize {
        self.factors.iter().filter(|d| d.is_multiple_of(m)).count()
    }
}

/// Smith normal form by unimodular row and column operations.
///
/// Pivot choice is the smallest nonzero entry (by absolute value) of the active block;
/// the pivot row and column are reduced by Euclidean steps until the pivot divides all of
/// them, then the remaining block is checked for divisibility by the pivot. Singular input
/// produces trailing zero factors.
pub fn smith_normal_form<T>(m: &Matrix<T>) -> Result<SnfResult<T>, Error>
where
    T: Scalar + Integer + Signed,
{
    let n = m.require_square()?;
    let mut a = m.clone();
    let mut factors = Vec::with_capacity(n);
    let mut sign_flips = false;
    for t in 0..n {
        let Some((pi, pj)) = smallest_nonzero(&a, t) else {
            factors.extend(std::iter::repeat_with(T::zero).take(n - t));
            break;
        };
        if pi != t {
            a.swap_rows(pi, t);
            sign_flips = !sign_flips;
        }
        if pj != t {
            a.swap_cols(pj, t);
            sign_flips = !sign_flips;
        }
        loop {
            let mut clean = true;
            let pivot = a[(t, t)].clone();
            for i in t + 1..n {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&pivot);
                if !q.is_zero() {
                    row_axpy(&mut a, i, t, &q, t);
                }
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&pivot);
                if !q.is_zero() {
                    col_axpy(&mut a, j, t, &q, t);
                }
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // Row and column are zero; enforce divisibility of the remaining block.
                let bad =
                    (t + 1..n).find(|&i| (t + 1..n).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
                match bad {
                    None => break,
                    Some(i) => {
                        // Row t += row i, then continue reducing.
                        let one = T::one();
                        row_axpy(&mut a, t, i, &-one, t);
                        continue;
                    }
                }
            }
            // Move the smallest remaining entry of row t / column t onto the diagonal.
            let mut best: Option<(usize, usize)> = None;
            let mut best_abs = pivot.abs();
            for i in t + 1..n {
                let v = a[(i, t)].abs();
                if !v.is_zero() && v < best_abs {
                    best_abs = v;
                    best = Some((i, t));
                }
            }
            for j in t + 1..n {
                let v = a[(t, j)].abs();
                if !v.is_zero() && v < best_abs {
                    best_abs = v;
                    best = Some((t, j));
                }
            }
            match best {
                Some((i, j)) if j == t => {
                    a.swap_rows(i, t);
                    sign_flips = !sign_flips;
                }
                Some((_, j)) => {
                    a.swap_cols(j, t);
                    sign_flips = !sign_flips;
                }
                None => {}
            }
        }
        let d = a[(t, t)].clone();
        if d.is_negative() {
            sign_flips = !sign_flips;
        }
        factors.push(d.abs());
    }
    let det_sign = if factors.iter().any(|d| d.is_zero()) {
        0
    } else if sign_flips {
        -1
    } else {
        1
    };
    Ok(SnfResult { factors, det_sign })
}

fn smallest_nonzero<T: Scalar + Signed + PartialOrd>(
    a: &Matrix<T>,
    t: usize,
) -> Option<(usize, usize)> {
    let n = a.rows();
    let mut best: Option<((usize, usize), T)> = None;
    for i in t..n {
        for j in t..n {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            let av = v.abs();
            if best.as_ref().is_none_or(|(_, b)| av < *b) {
                let done = av.is_one();
                best = Some(((i, j), av));
                if done {
                    return best.map(|(pos, _)| pos);
                }
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// row[dst] -= q * row[src], touching columns `from..`.
fn row_axpy<T: Scalar>(a: &mut Matrix<T>, dst: usize, src: usize, q: &T, from: usize) {
    for j in from..a.cols() {
        let s = a[(src, j)].clone();
        if !s.is_zero() {
            let v = a[(dst, j)].clone() - q.clone() * s;
            a[(dst, j)] = v;
        }
    }
}

/// col[dst] -= q * col[src], touching rows `from..`.
fn col_axpy<T: Scalar>(a: &mut Matrix<T>, dst: usize, src: usize, q: &T, from: usize) {
    for i in from..a.rows() {
        let s = a[(i, src)].clone();
        if !s.is_zero() {
            let v = a[(i, dst)].clone() - q.clone() * s;
            a[(i, dst)] = v;
        }
    }
}

/// Reduced row echelon form over a field, with the pivot column of each nonzero row.
pub fn row_echelon<T: Field>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let inv = a[(r, c)].inverse().expect("nonzero pivot");
        for j in c..cols {
            let v = a[(r, j)].clone() * inv.clone();
            a[(r, j)] = v;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let s = a[(r, j)].clone();
                if !s.is_zero() {
                    let v = a[(i, j)].clone() - f.clone() * s;
                    a[(i, j)] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<T: Field>(m: &Matrix<T>) -> usize {
    row_echelon(m).1.len()
}

/// Reduced-echelon basis of `{x : m x = 0}`: one vector per free column `f`, with a `1` at
/// `f` and zeros at every other free column.
pub fn nullspace<T: Field>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let cols = m.cols();
    let (rref, pivots) = row_echelon(m);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref[(r, f)].clone();
            }
            v
        })
        .collect()
}

/// Solve `m x = b` for square nonsingular `m` over a field.
pub fn solve<T: Field>(m: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, Error> {
    let n = m.require_square()?;
    if b.rows() != n {
        return Err(Error::Dimension(format!(
            "right-hand side has {} rows, expected {n}",
            b.rows()
        )));
    }
    let k = b.cols();
    let aug = Matrix::from_fn(n, n + k, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else {
            b[(i, j - n)].clone()
        }
    });
    let (rref, pivots) = row_echelon(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    Ok(Matrix::from_fn(n, k, |i, j| rref[(i, n + j)].clone()))
}

/// Exact rational `X` with `M X = B`.
pub fn rational_solve(m: &IntMatrix, b: &IntMatrix) -> Result<RatMatrix, Error> {
    solve(&m.to_rational(), &b.to_rational())
}

/// Integer polynomial `f(A) v` for integer matrix/graph data, via Horner.
pub(crate) fn poly_apply_graph(g: &Graph, coeffs: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); v.len()];
    for c in coeffs.iter().rev() {
        acc = adjacency_apply(g, &acc);
        for (a, x) in acc.iter_mut().zip(v) {
            *a += c * x;
        }
    }
    acc
}
