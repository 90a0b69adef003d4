//! Smith normal form and the integer linear algebra built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Result of a Smith normal form computation: `u * m * v == s`.
///
/// `v_inv` is the inverse of `v`, kept because presentations need both
/// directions of the coordinate change.
#[derive(Clone, Debug)]
pub struct Snf {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Snf {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_rank`, all positive.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

/// Computes the Smith normal form of `m`.
pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[(i, j)].is_zero())
            .min_by(|&p, &q| a[p].abs().cmp(&a[q].abs()));
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, &mut v_inv, t, pj);

        loop {
            // Move the smallest nonzero entry of row t and column t to the
            // pivot, then reduce the rest of that row and column against it
            // with symmetric remainders.
            let best_row = (t + 1..rows).filter(|&i| !a[(i, t)].is_zero()).min_by(|&p, &q| a[(p, t)].abs().cmp(&a[(q, t)].abs()));
            let best_col = (t + 1..cols).filter(|&j| !a[(t, j)].is_zero()).min_by(|&p, &q| a[(t, p)].abs().cmp(&a[(t, q)].abs()));
            let pivot_abs = a[(t, t)].abs();
            match (best_row, best_col) {
                (Some(i), Some(j)) if a[(i, t)].abs() < pivot_abs && a[(i, t)].abs() <= a[(t, j)].abs() => swap_rows(&mut a, &mut u, t, i),
                (Some(i), None) if a[(i, t)].abs() < pivot_abs => swap_rows(&mut a, &mut u, t, i),
                (_, Some(j)) if a[(t, j)].abs() < pivot_abs => swap_cols(&mut a, &mut v, &mut v_inv, t, j),
                _ => {}
            }
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[(i, t)], &a[(t, t)]);
                add_row(&mut a, &mut u, i, t, &-q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[(t, j)], &a[(t, t)]);
                add_col(&mut a, &mut v, &mut v_inv, j, t, &-q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column are clear; enforce divisibility on the rest.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&a[(t, t)]));
            match offender {
                Some((i, _)) => add_row(&mut a, &mut u, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Snf { s: a, u, v, v_inv, rank: t }
}

/// `q` with `|n - q d| <= |d| / 2`.
fn nearest_quotient(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    let twice: BigInt = &r * 2;
    if twice.abs() > d.abs() {
        q + 1
    } else {
        q
    }
}

fn swap_rows(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
    a.swap_rows(i, j);
    u.swap_rows(i, j);
}

fn swap_cols(a: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, i: usize, j: usize) {
    a.swap_cols(i, j);
    v.swap_cols(i, j);
    v_inv.swap_rows(i, j);
}

fn add_row(a: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    a.add_row_multiple(dst, src, k);
    u.add_row_multiple(dst, src, k);
}

// col[dst] += k col[src]; the inverse picks up row[src] -= k row[dst].
fn add_col(
    a: &mut IntMatrix,
    v: &mut IntMatrix,
    v_inv: &mut IntMatrix,
    dst: usize,
    src: usize,
    k: &BigInt,
) {
    a.add_col_multiple(dst, src, k);
    v.add_col_multiple(dst, src, k);
    v_inv.add_row_multiple(src, dst, &-k);
}

/// A basis (as columns) of the integer kernel `{x : m x = 0}`.
///
/// The basis spans a saturated sublattice, so it can be used as coordinates
/// for cycles and kernels.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let res = snf(m);
    let cols: Vec<usize> = (res.rank..m.cols()).collect();
    let rows: Vec<usize> = (0..m.cols()).collect();
    res.v.submatrix(&rows, &cols)
}

/// Solves `m x = b` over the integers; `None` when no integral solution exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_with(&snf(m), b)
}

/// Like [`solve`], reusing a precomputed Smith form of the coefficient matrix.
pub fn solve_with(res: &Snf, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ub = res.u.mul_vec(b);
    let cols = res.v.rows();
    let mut y = vec![BigInt::zero(); cols];
    for (i, val) in ub.iter().enumerate() {
        if i < res.rank {
            let d = &res.s[(i, i)];
            if !val.is_multiple_of(d) {
                return None;
            }
            y[i] = val / d;
        } else if !val.is_zero() {
            return None;
        }
    }
    Some(res.v.mul_vec(&y))
}

/// Greatest common divisor of all `k x k` minors; the oracle behind
/// `d_1 d_2 ... d_k`. Exponential, intended for small test matrices.
pub fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    if k == 0 {
        return BigInt::one();
    }
    for rows in subsets(m.rows(), k) {
        for cols in subsets(m.cols(), k) {
            g = g.gcd(&m.submatrix(&rows, &cols).determinant());
        }
    }
    g
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
